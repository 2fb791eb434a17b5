"""Fixture spaces with the digraph facts they are known to satisfy."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from .digraph import HomologyDigraph, digraph_from_basis
from .homology import cross, homology
from .linalg import GF2, Elem, Field, basis_element
from .spaces import (
    FinitePreorderedSpace,
    InputError,
    PairSpace,
    coproduct,
    make_pair,
    product,
    validate,
    wedge,
    with_direction,
)

ClassNamer = Callable[[HomologyDigraph], dict[str, Elem]]


# ---------------------------------------------------------------- facts


@dataclass(frozen=True)
class Betti:
    dims: dict

    def describe(self) -> str:
        shown = ",".join(f"{k}:{v}" for k, v in sorted(self.dims.items()))
        return f"betti {shown}" if shown else "homology is zero"

    def holds(self, d: HomologyDigraph, classes: dict[str, Elem]) -> bool:
        return d.basis.betti() == {k: v for k, v in self.dims.items() if v}


@dataclass(frozen=True)
class Pointing:
    source: str
    target: str
    expected: bool = True

    def describe(self) -> str:
        return f"{self.source} {'points to' if self.expected else 'does not point to'} {self.target}"

    def holds(self, d, classes):
        return d.points_to(classes[self.source], classes[self.target]) == self.expected


@dataclass(frozen=True)
class DefiningDim:
    degree: int
    dim: int

    def describe(self) -> str:
        return f"defining space has dimension {self.dim} in total degree {self.degree}"

    def holds(self, d, classes):
        return d.relation.defining.part(self.degree).rank == self.dim


@dataclass(frozen=True)
class FullPointing:
    def describe(self) -> str:
        return "every class points to every class"

    def holds(self, d, classes):
        return all(p for _, _, p in d.pointing_matrix()) and all(
            d.relation.defining.part(n).rank == dim for n, dim in d.relation.indexer.dims.items()
        )


@dataclass(frozen=True)
class DegreeZeroOnly:
    """Nonzero classes point iff both have degree 0."""

    def describe(self) -> str:
        return "nonzero classes point exactly when both have degree 0"

    def holds(self, d, classes):
        ix = d.relation.indexer
        for n, dim in ix.dims.items():
            want = dim if n == 0 else 0
            if d.relation.defining.part(n).rank != want:
                return False
        return 0 in ix.dims


@dataclass(frozen=True)
class ConceptCount:
    count: int

    def describe(self) -> str:
        return f"{self.count} direction concepts"

    def holds(self, d, classes):
        return len(d.concepts) == self.count


Fact = Betti | Pointing | DefiningDim | FullPointing | DegreeZeroOnly | ConceptCount


# ---------------------------------------------------------------- models


@dataclass
class NamedModel:
    name: str
    space: FinitePreorderedSpace
    subset: frozenset | None = None
    expected: list = dc_field(default_factory=list)
    classes: ClassNamer | None = None
    field: Field = GF2

    @property
    def pair(self) -> PairSpace:
        return make_pair(self.space, self.subset or ())

    def digraph(self, field: Field | None = None, threads: int = 1) -> HomologyDigraph:
        p = self.pair
        return digraph_from_basis(homology(p.space, field or self.field, p.mask), threads)

    def check(self, d: HomologyDigraph | None = None) -> list[tuple[str, bool]]:
        d = d or self.digraph()
        classes = self.classes(d) if self.classes else {}
        return [(f.describe(), f.holds(d, classes)) for f in self.expected]


def _unit_classes(names: dict[str, tuple[int, int]]) -> ClassNamer:
    def namer(d: HomologyDigraph):
        return {k: basis_element(d.basis.gvs, deg, i, d.field) for k, (deg, i) in names.items()}
    return namer


CIRCLE_POINTS = ("m", "l", "r", "t")
CIRCLE_TOPOLOGY = (("m", "l"), ("m", "r"), ("t", "l"), ("t", "r"))
CIRCLE_DIRECTION = (("m", "l"), ("m", "r"), ("l", "t"), ("r", "t"))


def point_space() -> FinitePreorderedSpace:
    return validate(["p"], [], dir_mode="discrete")


def point() -> NamedModel:
    return NamedModel(
        "point", point_space(),
        expected=[Betti({0: 1}), Pointing("h0", "h0")],
        classes=_unit_classes({"h0": (0, 0)}),
    )


def interval_space() -> FinitePreorderedSpace:
    return validate(["a", "b"], [("a", "b")], [("a", "b")])


def interval() -> NamedModel:
    return NamedModel(
        "interval", interval_space(),
        expected=[Betti({0: 1}), Pointing("h0", "h0")],
        classes=_unit_classes({"h0": (0, 0)}),
    )


def discrete_set(n: int) -> NamedModel:
    if n < 0:
        raise InputError("negative point count")
    x = validate([f"p{i}" for i in range(n)], [], dir_mode="discrete")
    names = {f"h0.{i}": (0, i) for i in range(n)}
    facts: list = [Betti({0: n})]
    for i in range(n):
        for j in range(n):
            facts.append(Pointing(f"h0.{i}", f"h0.{j}", i == j))
    return NamedModel(f"discrete_set_{n}", x, expected=facts, classes=_unit_classes(names))


def ordered_circle_space() -> FinitePreorderedSpace:
    return validate(CIRCLE_POINTS, CIRCLE_TOPOLOGY, CIRCLE_DIRECTION)


def directed_circle_space() -> FinitePreorderedSpace:
    return validate(CIRCLE_POINTS, CIRCLE_TOPOLOGY, dir_mode="indiscrete")


def ordered_circle() -> NamedModel:
    return NamedModel(
        "ordered_circle", ordered_circle_space(),
        expected=[
            Betti({0: 1, 1: 1}),
            Pointing("h0", "h0"),
            Pointing("h0", "h1"),
            Pointing("h1", "h0"),
            Pointing("h1", "h1", False),
            DefiningDim(2, 0),
            ConceptCount(4),
        ],
        classes=_unit_classes({"h0": (0, 0), "h1": (1, 0)}),
    )


def directed_circle() -> NamedModel:
    return NamedModel(
        "directed_circle", directed_circle_space(),
        expected=[Betti({0: 1, 1: 1}), FullPointing(), ConceptCount(1)],
    )


def indiscrete_on(model: NamedModel) -> NamedModel:
    return NamedModel(
        f"{model.name}_indiscrete", with_direction(model.space, "indiscrete"), model.subset,
        expected=[FullPointing()],
    )


def discrete_on(model: NamedModel) -> NamedModel:
    """Discrete direction; the facts assume the space is connected."""
    return NamedModel(
        f"{model.name}_discrete", with_direction(model.space, "discrete"), model.subset,
        expected=[DegreeZeroOnly()],
    )


def ordered_circle_pair() -> NamedModel:
    """The ordered circle relative to its two extremal points."""
    return NamedModel(
        "ordered_circle_rel_ends", ordered_circle_space(), frozenset({"m", "t"}),
        expected=[Betti({1: 2})],
    )


def interval_rel_end() -> NamedModel:
    return NamedModel("interval_rel_open_end", interval_space(), frozenset({"b"}), expected=[Betti({})])


def ordered_circle_plus_point() -> NamedModel:
    x, _ = coproduct([ordered_circle_space(), point_space()])
    return NamedModel("ordered_circle_plus_point", x, expected=[Betti({0: 2, 1: 1})])


def ordered_circle_wedge() -> NamedModel:
    oc = ordered_circle_space()
    x, _ = wedge(oc, "m", oc, "m")
    return NamedModel("ordered_circle_wedge", x, expected=[Betti({0: 1, 1: 2})])


# ---------------------------------------------------------------- torus


TORUS_CLASSES = ("α×γ", "α×δ", "β×γ", "α×δ+β×γ", "β×δ")
TORUS_TOP = ("α×γ", "β×γ")


def torus_space() -> FinitePreorderedSpace:
    return product(directed_circle_space(), ordered_circle_space())


def torus_classes(d: HomologyDigraph) -> dict[str, Elem]:
    """Cross products of the circle classes: α, β from the directed circle, γ, δ from the ordered one."""
    F = d.field
    hx = homology(directed_circle_space(), F)
    hy = homology(ordered_circle_space(), F)
    cm, ix = cross(hx, hy, d.basis)
    gx, gy = hx.gvs, hy.gvs
    named = {"α": basis_element(gx, 0, 0, F), "β": basis_element(gx, 1, 0, F)}
    named_y = {"γ": basis_element(gy, 0, 0, F), "δ": basis_element(gy, 1, 0, F)}
    out = {}
    for a, v in named.items():
        for b, w in named_y.items():
            out[f"{a}×{b}"] = cm.map(ix.coords(v, w, F))
    s = out["α×δ"]
    t = out["β×γ"]
    out["α×δ+β×γ"] = Elem(1, tuple(F.add(p, q) for p, q in zip(s.coords, t.coords)))
    return out


def torus() -> NamedModel:
    facts: list = [Betti({0: 1, 1: 2, 2: 1})]
    for src in TORUS_CLASSES:
        for tgt in TORUS_CLASSES:
            facts.append(Pointing(src, tgt, src in TORUS_TOP or tgt in TORUS_TOP))
    return NamedModel("torus", torus_space(), expected=facts, classes=torus_classes)


# ---------------------------------------------------------------- grids with two holes


Cell = tuple[int, int, int, int]  # min corner, max corner


def _cell_id(c: Cell) -> str:
    x0, y0, x1, y1 = c
    if (x0, y0) == (x1, y1):
        return f"({x0},{y0})"
    return f"({x0},{y0})-({x1},{y1})"


def _faces(c: Cell) -> list[Cell]:
    """Immediate faces of a cell."""
    x0, y0, x1, y1 = c
    out = []
    if x0 != x1:
        out += [(x0, y0, x0, y1), (x1, y0, x1, y1)]
    if y0 != y1:
        out += [(x0, y0, x1, y0), (x0, y1, x1, y1)]
    return out


def hole_boxes(n: int, comparable: bool) -> list[tuple[int, int, int]]:
    """Hole squares as (x, y, side): lower-left corner first in the comparable case."""
    p, q, s = n * 2 // 7, n * 4 // 7, max(1, n // 7)
    boxes = [(p, p, s), (q, q, s)] if comparable else [(q, p, s), (p, q, s)]
    for x, y, side in boxes:
        if x < 1 or y < 1 or x + side > n - 1 or y + side > n - 1:
            raise InputError(f"resolution {n} puts a hole against the outer boundary")
    (ax, ay, sa), (bx, by, sb) = boxes
    if not (ax + sa < bx or bx + sb < ax or ay + sa < by or by + sb < ay):
        raise InputError(f"resolution {n} is too small to separate the holes")
    return boxes


def grid_with_holes(n: int, boxes: Sequence[tuple[int, int, int]]) -> FinitePreorderedSpace:
    """Face poset of the n x n grid without the cells inside the given open boxes."""

    def removed(c: Cell) -> bool:
        cx2, cy2 = c[0] + c[2], c[1] + c[3]  # twice the midpoint
        return any(2 * x < cx2 < 2 * (x + s) and 2 * y < cy2 < 2 * (y + s) for x, y, s in boxes)

    cells: list[Cell] = []
    for x in range(n + 1):
        for y in range(n + 1):
            cells.append((x, y, x, y))
            if x < n:
                cells.append((x, y, x + 1, y))
            if y < n:
                cells.append((x, y, x, y + 1))
            if x < n and y < n:
                cells.append((x, y, x + 1, y + 1))
    cells = sorted((c for c in cells if not removed(c)), key=lambda c: (c[2] - c[0] + c[3] - c[1], c))
    ids = [_cell_id(c) for c in cells]
    present = set(cells)
    topo = [(_cell_id(f), _cell_id(c)) for c in cells for f in _faces(c) if f in present]
    # max corner of c below min corner of d; already transitive
    direction = [
        (ids[i], ids[j])
        for i, c in enumerate(cells)
        for j, d in enumerate(cells)
        if i != j and c[2] <= d[0] and c[3] <= d[1]
    ]
    return validate(ids, topo, direction)


def hole_loop(x: FinitePreorderedSpace, box: tuple[int, int, int]) -> list[tuple[int, tuple[str, str]]]:
    """Counterclockwise loop around a box as (coefficient, (vertex, edge)) order-complex terms."""
    bx, by, s = box
    corners = [(bx, by), (bx + s, by), (bx + s, by + s), (bx, by + s)]
    verts = []
    for (ax, ay), (cx, cy) in zip(corners, corners[1:] + corners[:1]):
        steps = max(abs(cx - ax), abs(cy - ay))
        dx, dy = (cx - ax) // steps, (cy - ay) // steps
        verts += [(ax + k * dx, ay + k * dy) for k in range(steps)]
    terms = []
    for (ax, ay), (cx, cy) in zip(verts, verts[1:] + verts[:1]):
        lo = (min(ax, cx), min(ay, cy), max(ax, cx), max(ay, cy))
        e = _cell_id(lo)
        terms.append((1, (f"({ax},{ay})", e)))
        terms.append((-1, (f"({cx},{cy})", e)))
    return terms


def _hole_classes(boxes) -> ClassNamer:
    def namer(d: HomologyDigraph):
        hb = d.basis
        x = hb.space
        out = {}
        for name, box in zip(("lower", "upper") if boxes[0][1] < boxes[1][1] else ("first", "second"), boxes):
            terms = [(c, tuple(x.index[p] for p in s)) for c, s in hole_loop(x, box)]
            z = hb.chains.chain_vec(terms)
            out[name] = Elem(1, hb.project_dense(1, z))
        return out
    return namer


def two_holes_comparable(resolution: int = 7) -> NamedModel:
    boxes = hole_boxes(resolution, True)
    return NamedModel(
        f"two_holes_comparable_{resolution}", grid_with_holes(resolution, boxes),
        expected=[
            Betti({0: 1, 1: 2}),
            Pointing("lower", "upper"),
            Pointing("upper", "lower", False),
            Pointing("lower", "lower", False),
            Pointing("upper", "upper", False),
        ],
        classes=_hole_classes(boxes),
    )


def two_holes_incomparable(resolution: int = 7) -> NamedModel:
    boxes = hole_boxes(resolution, False)
    return NamedModel(
        f"two_holes_incomparable_{resolution}", grid_with_holes(resolution, boxes),
        expected=[Betti({0: 1, 1: 2}), DefiningDim(2, 0)],
        classes=_hole_classes(boxes),
    )


# ---------------------------------------------------------------- registry


def small_models() -> list[NamedModel]:
    """Every fixture with at most 8 points."""
    oc = ordered_circle()
    return [
        point(),
        interval(),
        discrete_set(2),
        oc,
        directed_circle(),
        discrete_on(oc),
        indiscrete_on(interval()),
        ordered_circle_pair(),
        interval_rel_end(),
        ordered_circle_plus_point(),
        ordered_circle_wedge(),
    ]


MODELS: dict[str, Callable[[], NamedModel]] = {
    "point": point,
    "interval": interval,
    "discrete_set_2": lambda: discrete_set(2),
    "ordered_circle": ordered_circle,
    "directed_circle": directed_circle,
    "ordered_circle_discrete": lambda: discrete_on(ordered_circle()),
    "interval_indiscrete": lambda: indiscrete_on(interval()),
    "ordered_circle_rel_ends": ordered_circle_pair,
    "interval_rel_open_end": interval_rel_end,
    "ordered_circle_plus_point": ordered_circle_plus_point,
    "ordered_circle_wedge": ordered_circle_wedge,
    "torus": torus,
    "two_holes_comparable": two_holes_comparable,
    "two_holes_incomparable": two_holes_incomparable,
}


def get_model(name: str) -> NamedModel:
    try:
        return MODELS[name]()
    except KeyError:
        raise InputError(f"unknown model {name!r}; known: {', '.join(MODELS)}") from None
