"""Finite preordered spaces.

A finite T0 topology is encoded by its specialization order ``topo``: a set
is open iff it is an up-set of ``topo``, so the closure of a set is its
down-set.  The direction preorder ``dir`` is independent of the topology.

Relations are stored as bitmask rows: bit ``j`` of ``topo_up[i]`` is set iff
``i <= j`` in the topology, and likewise for the direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class InputError(ValueError):
    """Malformed user input (exit code 2 in the CLI)."""


class NotT0Error(InputError):
    pass


class HypothesisNotMet(InputError):
    """A theorem's hypothesis does not hold for the given input."""


def _close(n: int, rows: list[int]) -> list[int]:
    """Reflexive-transitive closure of bitmask rows (Warshall)."""
    rows = [r | (1 << i) for i, r in enumerate(rows)]
    for k in range(n):
        bk = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bk:
                rows[i] |= rk
    return rows


def _transpose(n: int, rows: Sequence[int]) -> tuple[int, ...]:
    cols = [0] * n
    for i, r in enumerate(rows):
        while r:
            low = r & -r
            cols[low.bit_length() - 1] |= 1 << i
            r ^= low
    return tuple(cols)


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class FinitePreorderedSpace:
    """Finite T0 space with a direction preorder.  Immutable."""

    __slots__ = ("points", "index", "topo_up", "topo_down", "dir_up", "dir_down", "_hash")

    def __init__(self, points: Sequence[str], topo_up: Sequence[int], dir_up: Sequence[int], *, check: bool = True):
        self.points = tuple(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        n = len(self.points)
        if len(self.index) != n:
            raise InputError("duplicate point ids")
        self.topo_up = tuple(topo_up)
        self.dir_up = tuple(dir_up)
        self.topo_down = _transpose(n, self.topo_up)
        self.dir_down = _transpose(n, self.dir_up)
        self._hash = None
        if check:
            self._check()

    def _check(self):
        n = len(self.points)
        for name, up in (("topology", self.topo_up), ("direction", self.dir_up)):
            if len(up) != n:
                raise InputError(f"{name} relation has {len(up)} rows for {n} points")
            for i, r in enumerate(up):
                if not r >> i & 1:
                    raise InputError(f"{name} relation is not reflexive at {self.points[i]!r}")
                for j in bits(r):
                    if up[j] & ~r:
                        raise InputError(f"{name} relation is not transitive at {self.points[i]!r}")
        for i in range(n):
            both = self.topo_up[i] & self.topo_down[i] & ~(1 << i)
            if both:
                j = bits(both)[0]
                raise NotT0Error(
                    f"topology is not T0: {self.points[i]!r} and {self.points[j]!r} are topologically indistinguishable"
                )

    # -- basic queries -------------------------------------------------
    def __len__(self):
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    def mask(self, subset: Iterable[str]) -> int:
        m = 0
        for p in subset:
            try:
                m |= 1 << self.index[p]
            except KeyError:
                raise InputError(f"unknown point id {p!r}") from None
        return m

    def subset(self, mask: int) -> frozenset[str]:
        return frozenset(self.points[i] for i in bits(mask))

    def ordered(self, mask: int) -> list[str]:
        return [self.points[i] for i in bits(mask)]

    def topo_leq(self, a: str, b: str) -> bool:
        return bool(self.topo_up[self.index[a]] >> self.index[b] & 1)

    def dir_leq(self, a: str, b: str) -> bool:
        return bool(self.dir_up[self.index[a]] >> self.index[b] & 1)

    def topo_pairs(self) -> set[tuple[str, str]]:
        return {(self.points[i], self.points[j]) for i in range(len(self)) for j in bits(self.topo_up[i])}

    def dir_pairs(self) -> set[tuple[str, str]]:
        return {(self.points[i], self.points[j]) for i in range(len(self)) for j in bits(self.dir_up[i])}

    def __eq__(self, other):
        return (
            isinstance(other, FinitePreorderedSpace)
            and self.points == other.points
            and self.topo_up == other.topo_up
            and self.dir_up == other.dir_up
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.points, self.topo_up, self.dir_up))
        return self._hash

    def __repr__(self):
        return f"FinitePreorderedSpace({len(self)} points)"

    def is_pospace(self) -> bool:
        return all(not (self.dir_up[i] & self.dir_down[i] & ~(1 << i)) for i in range(len(self)))

    def dir_mode(self) -> str:
        """'discrete', 'indiscrete' or 'explicit'."""
        if all(r == 1 << i for i, r in enumerate(self.dir_up)):
            return "discrete"
        if all(r == self.full for r in self.dir_up):
            return "indiscrete"
        return "explicit"

    def is_open(self, mask: int) -> bool:
        return all(self.topo_up[i] & ~mask == 0 for i in bits(mask))


@dataclass(frozen=True)
class PairSpace:
    space: FinitePreorderedSpace
    subset: frozenset

    @property
    def mask(self) -> int:
        return self.space.mask(self.subset)

    def sub_space(self) -> FinitePreorderedSpace:
        return restrict(self.space, self.subset)


def make_pair(x: FinitePreorderedSpace, subset: Iterable[str]) -> PairSpace:
    s = frozenset(subset)
    x.mask(s)
    return PairSpace(x, s)


# ---------------------------------------------------------------- constructors


def validate(points: Sequence[str], topo_pairs: Iterable[Sequence[str]],
             dir_pairs: Iterable[Sequence[str]] = (), dir_mode: str = "explicit") -> FinitePreorderedSpace:
    """Build a space from generating pairs; both relations are closed."""
    points = [str(p) for p in points]
    index = {}
    for i, p in enumerate(points):
        if p in index:
            raise InputError(f"duplicate point id {p!r}")
        index[p] = i
    n = len(points)

    def rows_from(pairs, what):
        rows = [0] * n
        for pr in pairs:
            if len(pr) != 2:
                raise InputError(f"{what} relation entries must be pairs, got {pr!r}")
            a, b = pr
            if a not in index or b not in index:
                bad = a if a not in index else b
                raise InputError(f"unknown point id {bad!r} in {what} relation")
            rows[index[a]] |= 1 << index[b]
        return _close(n, rows)

    topo = rows_from(topo_pairs, "topology")
    for i in range(n):
        loop = topo[i] & ~(1 << i)
        for j in bits(loop):
            if topo[j] >> i & 1:
                raise NotT0Error(
                    f"topology closure is not antisymmetric: {points[i]!r} <= {points[j]!r} <= {points[i]!r}"
                )
    if dir_mode == "explicit":
        d = rows_from(dir_pairs, "direction")
    elif dir_mode == "discrete":
        d = [1 << i for i in range(n)]
    elif dir_mode == "indiscrete":
        d = [(1 << n) - 1] * n
    else:
        raise InputError(f"unknown direction mode {dir_mode!r}")
    if dir_mode != "explicit" and list(dir_pairs):
        raise InputError(f"direction mode {dir_mode!r} takes no relations")
    return FinitePreorderedSpace(points, topo, d)


def with_direction(x: FinitePreorderedSpace, mode: str) -> FinitePreorderedSpace:
    n = len(x)
    if mode == "discrete":
        d = [1 << i for i in range(n)]
    elif mode == "indiscrete":
        d = [x.full] * n
    else:
        raise InputError(f"unknown direction mode {mode!r}")
    return FinitePreorderedSpace(x.points, x.topo_up, d, check=False)


def _restrict_rows(rows: Sequence[int], idx: list[int]) -> list[int]:
    out = []
    for i in idx:
        r = rows[i]
        m = 0
        for k, j in enumerate(idx):
            if r >> j & 1:
                m |= 1 << k
        out.append(m)
    return out


def restrict_mask(x: FinitePreorderedSpace, mask: int) -> FinitePreorderedSpace:
    idx = bits(mask & x.full)
    if mask & ~x.full:
        raise InputError("subset contains points outside the space")
    return FinitePreorderedSpace(
        [x.points[i] for i in idx], _restrict_rows(x.topo_up, idx), _restrict_rows(x.dir_up, idx), check=True
    )


def restrict(x: FinitePreorderedSpace, subset: Iterable[str]) -> FinitePreorderedSpace:
    """Preordered subspace; both relations restricted (already closed)."""
    return restrict_mask(x, x.mask(subset))


def product(x: FinitePreorderedSpace, y: FinitePreorderedSpace) -> FinitePreorderedSpace:
    """Componentwise relations; point (i, j) has index i*|y| + j."""
    ny = len(y)
    pts = [f"({a},{b})" for a in x.points for b in y.points]

    def rows(xr, yr):
        out = []
        for i in range(len(x)):
            xs = bits(xr[i])
            for j in range(ny):
                m = 0
                for k in xs:
                    m |= yr[j] << (k * ny)
                out.append(m)
        return out

    return FinitePreorderedSpace(pts, rows(x.topo_up, y.topo_up), rows(x.dir_up, y.dir_up), check=False)


@dataclass(frozen=True)
class PointMap:
    """A map of finite spaces given by point indices."""

    source: FinitePreorderedSpace
    target: FinitePreorderedSpace
    images: tuple

    @classmethod
    def from_dict(cls, source, target, mapping: Mapping[str, str]) -> "PointMap":
        imgs = []
        for p in source.points:
            if p not in mapping:
                raise InputError(f"map is not defined at {p!r}")
            q = mapping[p]
            if q not in target.index:
                raise InputError(f"map sends {p!r} to unknown point {q!r}")
            imgs.append(target.index[q])
        return cls(source, target, tuple(imgs))

    def as_dict(self) -> dict[str, str]:
        return {p: self.target.points[j] for p, j in zip(self.source.points, self.images)}

    def image_mask(self, mask: int) -> int:
        m = 0
        for i in bits(mask):
            m |= 1 << self.images[i]
        return m

    def __matmul__(self, other: "PointMap") -> "PointMap":
        return PointMap(other.source, self.target, tuple(self.images[j] for j in other.images))


def identity_map(x: FinitePreorderedSpace) -> PointMap:
    return PointMap(x, x, tuple(range(len(x))))


def inclusion_map(sub: FinitePreorderedSpace, x: FinitePreorderedSpace) -> PointMap:
    return PointMap(sub, x, tuple(x.index[p] for p in sub.points))


def coproduct(spaces: Sequence[FinitePreorderedSpace]) -> tuple[FinitePreorderedSpace, list[PointMap]]:
    """Disjoint union with ids ``"i:id"`` and its injections."""
    pts, topo, d, offs = [], [], [], []
    off = 0
    for k, s in enumerate(spaces):
        offs.append(off)
        pts.extend(f"{k}:{p}" for p in s.points)
        topo.extend(r << off for r in s.topo_up)
        d.extend(r << off for r in s.dir_up)
        off += len(s)
    total = FinitePreorderedSpace(pts, topo, d, check=False)
    inj = [PointMap(s, total, tuple(range(o, o + len(s)))) for s, o in zip(spaces, offs)]
    return total, inj


def wedge(x: FinitePreorderedSpace, x0: str, y: FinitePreorderedSpace, y0: str) -> tuple[FinitePreorderedSpace, list[PointMap]]:
    """Glue at basepoints which must be strictly direction-minimal.

    Direction: a <= b iff both lie in one summand and are related there.
    Topology: the union of the two specialization orders, closed.
    """
    for s, b in ((x, x0), (y, y0)):
        if b not in s.index:
            raise InputError(f"unknown basepoint {b!r}")
        i = s.index[b]
        if s.dir_down[i] != 1 << i:
            raise HypothesisNotMet(f"basepoint {b!r} is not a minimal element of the direction preorder")
    nx, ny = len(x), len(y)
    ix0, iy0 = x.index[x0], y.index[y0]
    # new indices: x points keep 0..nx-1; y points other than y0 follow
    ymap = {}
    k = nx
    for j in range(ny):
        if j == iy0:
            ymap[j] = ix0
        else:
            ymap[j] = k
            k += 1
    n = k
    pts = [f"0:{p}" for p in x.points] + [f"1:{y.points[j]}" for j in range(ny) if j != iy0]

    def lift(mask, m):
        out = 0
        for j in bits(mask):
            out |= 1 << m[j]
        return out

    xmap = {i: i for i in range(nx)}
    topo = [0] * n
    d = [0] * n
    for i in range(nx):
        topo[i] |= x.topo_up[i]
        d[i] |= x.dir_up[i]
    for j in range(ny):
        topo[ymap[j]] |= lift(y.topo_up[j], ymap)
        d[ymap[j]] |= lift(y.dir_up[j], ymap)
    topo = _close(n, topo)
    total = FinitePreorderedSpace(pts, topo, d, check=True)
    inj = [PointMap(x, total, tuple(xmap[i] for i in range(nx))), PointMap(y, total, tuple(ymap[j] for j in range(ny)))]
    return total, inj


# ---------------------------------------------------------------- maps and topology


def is_monotone_continuous(f: PointMap) -> bool:
    """Continuity (topo order preserved) and monotonicity (dir preserved)."""
    x, y = f.source, f.target
    for i in range(len(x)):
        fi = f.images[i]
        for j in bits(x.topo_up[i]):
            if not y.topo_up[fi] >> f.images[j] & 1:
                return False
        for j in bits(x.dir_up[i]):
            if not y.dir_up[fi] >> f.images[j] & 1:
                return False
    return True


def closure_mask(x: FinitePreorderedSpace, mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= x.topo_down[i]
    return out


def interior_mask(x: FinitePreorderedSpace, mask: int) -> int:
    out = 0
    for i in bits(mask):
        if x.topo_up[i] & ~mask == 0:
            out |= 1 << i
    return out


def closure(x: FinitePreorderedSpace, s: Iterable[str]) -> frozenset[str]:
    return x.subset(closure_mask(x, x.mask(s)))


def interior(x: FinitePreorderedSpace, s: Iterable[str]) -> frozenset[str]:
    return x.subset(interior_mask(x, x.mask(s)))


def relabel(x: FinitePreorderedSpace, perm: Sequence[int], names: Sequence[str] | None = None) -> tuple[FinitePreorderedSpace, PointMap]:
    """Isomorphic copy where old point i becomes new point perm[i]."""
    n = len(x)
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p] = i
    if names is None:
        names = [x.points[inv[k]] for k in range(n)]

    def rows(up):
        out = []
        for k in range(n):
            r = up[inv[k]]
            m = 0
            for j in bits(r):
                m |= 1 << perm[j]
            out.append(m)
        return out

    y = FinitePreorderedSpace(names, rows(x.topo_up), rows(x.dir_up))
    return y, PointMap(x, y, tuple(perm))
