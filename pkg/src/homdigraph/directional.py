"""Bilinear relations and directional graded vector spaces.

A bilinear relation on V is stored only through its smallest defining space
inside V (x) V, one subspace per total degree.  ``v`` points to ``w`` iff the
coordinates of v (x) w lie in that subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product as iproduct
from typing import Iterable, Sequence

from .linalg import (
    DimensionError,
    Elem,
    Field,
    GradedLinearMap,
    GradedSubspace,
    GradedVectorSpace,
    Matrix,
    Subspace,
    TensorIndexer,
    tensor_map,
)

Pair = tuple[Elem, Elem]


class BilinearRelation:
    __slots__ = ("space", "field", "indexer", "defining")

    def __init__(self, space: GradedVectorSpace, field: Field, defining: GradedSubspace | dict | None = None):
        self.space = space
        self.field = field
        self.indexer = TensorIndexer(space, space)
        amb = self.indexer.space()
        if isinstance(defining, GradedSubspace):
            parts = defining.parts
        else:
            parts = defining or {}
        self.defining = GradedSubspace(amb, field, parts)

    def _conform(self, e: Elem):
        if len(e.coords) != self.space.dim(e.degree):
            raise DimensionError(f"element of length {len(e.coords)} in degree {e.degree} "
                                 f"(dimension {self.space.dim(e.degree)})")

    def points_to(self, v: Elem, w: Elem) -> bool:
        self._conform(v)
        self._conform(w)
        if v.is_zero() or w.is_zero():
            return True
        t = self.indexer.coords(v, w, self.field)
        return self.defining.part(t.degree).contains(t.coords)

    def dims(self) -> dict[int, int]:
        return self.defining.dims()

    def block_rank(self, i: int, j: int) -> int:
        """Rank of the defining space restricted to the V_i (x) V_j block."""
        n = i + j
        R = self.defining.part(n)
        if R.rank == 0:
            return 0
        F = self.field
        off = self.indexer.offset(i, j)
        size = self.space.dim(i) * self.space.dim(j)
        block = Subspace.span(F, R.dim, (F.unit(off + k) for k in range(size)))
        return (R & block).rank

    def __eq__(self, other):
        return (
            isinstance(other, BilinearRelation)
            and self.space.dims == other.space.dims
            and self.defining == other.defining
        )

    def __repr__(self):
        return f"BilinearRelation({self.dims()})"


@dataclass
class DirectionalGVS:
    space: GradedVectorSpace
    pointing: BilinearRelation
    generators: list = dc_field(default_factory=list)

    @property
    def field(self) -> Field:
        return self.pointing.field

    def points_to(self, v: Elem, w: Elem) -> bool:
        return self.pointing.points_to(v, w)


def _conforms(space: GradedVectorSpace, e: Elem) -> bool:
    return len(e.coords) == space.dim(e.degree)


def generate(space: GradedVectorSpace, field: Field, gens: Iterable[Pair]) -> BilinearRelation:
    """Smallest bilinear relation containing the generator pairs."""
    ix = TensorIndexer(space, space)
    vecs: dict[int, list] = {}
    for v, w in gens:
        if not (_conforms(space, v) and _conforms(space, w)):
            raise DimensionError("generator does not conform to the space")
        if v.is_zero() or w.is_zero():
            continue
        vecs.setdefault(v.degree + w.degree, []).append(
            ix.coords_vec(v.degree, field.vec(v.coords), w.degree, field.vec(w.coords), field)
        )
    parts = {n: Subspace.span(field, ix.dim(n), vs) for n, vs in vecs.items()}
    return BilinearRelation(space, field, parts)


def generate_dgvs(space: GradedVectorSpace, field: Field, gens: Sequence[Pair]) -> DirectionalGVS:
    gens = list(gens)
    return DirectionalGVS(space, generate(space, field, gens), gens)


def zero_relation(space: GradedVectorSpace, field: Field) -> BilinearRelation:
    return BilinearRelation(space, field)


def full_relation(space: GradedVectorSpace, field: Field) -> BilinearRelation:
    ix = TensorIndexer(space, space)
    return BilinearRelation(space, field, {n: Subspace.full(field, d) for n, d in ix.dims.items()})


def intersect_relations(rels: Sequence[BilinearRelation]) -> BilinearRelation:
    if not rels:
        raise ValueError("intersection of an empty family of relations")
    first = rels[0]
    out = first.defining
    for r in rels[1:]:
        if r.space.dims != first.space.dims or r.field != first.field:
            raise DimensionError("relations live on different spaces")
        out = out & r.defining
    return BilinearRelation(first.space, first.field, out)


# ---------------------------------------------------------------- direct sum


def direct_sum(summands: Sequence[DirectionalGVS]) -> tuple[DirectionalGVS, list[GradedLinearMap]]:
    """Degreewise direct sum; pointing only inside each summand."""
    if not summands:
        raise ValueError("direct sum of nothing")
    F = summands[0].field
    degs = sorted({k for s in summands for k in s.space.degrees()})
    offsets: list[dict[int, int]] = []
    dims = {k: 0 for k in degs}
    labels: dict[int, list[str]] = {k: [] for k in degs}
    for idx, s in enumerate(summands):
        off = {}
        for k in degs:
            off[k] = dims[k]
            dims[k] += s.space.dim(k)
            labels[k].extend(f"{idx}:{lab}" for lab in s.space.labels.get(k, ()))
        offsets.append(off)
    total = GradedVectorSpace(dims, labels)
    ix = TensorIndexer(total, total)
    vecs: dict[int, list] = {}
    inj = []
    for s, off in zip(summands, offsets):
        sx = s.pointing.indexer
        for n, R in s.pointing.defining.parts.items():
            for v in R.basis:
                items = []
                for i, j, boff in sx.layout[n]:
                    dj = s.space.dim(j)
                    size = s.space.dim(i) * dj
                    for pos, c in F.items(v):
                        if boff <= pos < boff + size:
                            a, b = divmod(pos - boff, dj)
                            items.append((ix.index(i, off[i] + a, j, off[j] + b), c))
                vecs.setdefault(n, []).append(F.vec_from_items(items))
        blocks = {}
        for k in s.space.degrees():
            rows = total.dim(k)
            cols = s.space.dim(k)
            blocks[k] = Matrix(F, rows, cols, [[1 if r == off[k] + c else 0 for c in range(cols)] for r in range(rows)])
        inj.append(GradedLinearMap(s.space, total, F, blocks))
    parts = {n: Subspace.span(F, ix.dim(n), vs) for n, vs in vecs.items()}
    gens = []
    for s, f in zip(summands, inj):
        gens.extend((f(v), f(w)) for v, w in s.generators)
    return DirectionalGVS(total, BilinearRelation(total, F, parts), gens), inj


# ---------------------------------------------------------------- tensor product


def tensor_space(a: GradedVectorSpace, b: GradedVectorSpace) -> tuple[GradedVectorSpace, TensorIndexer]:
    ix = TensorIndexer(a, b)
    return ix.space(), ix


def interchange_index(a: GradedVectorSpace, b: GradedVectorSpace):
    """Coordinate bijection (V(x)V)(x)(W(x)W) -> (V(x)W)(x)(V(x)W).

    Returns ``(position, VW, outer)`` where ``position`` maps basis indices to
    the total degree and coordinate in ``outer``.
    """
    vw = TensorIndexer(a, b)
    W = vw.space()
    outer = TensorIndexer(W, W)

    def position(i: int, x: int, i2: int, x2: int, j: int, y: int, j2: int, y2: int) -> tuple[int, int]:
        """Total degree and coordinate of (v_x (x) w_y) (x) (v'_x2 (x) w'_y2).

        v_x: basis vector x of V_i, v'_x2 of V_i2, w_y of W_j, w'_y2 of W_j2.
        """
        left = vw.index(i, x, j, y)
        right = vw.index(i2, x2, j2, y2)
        n1, n2 = i + j, i2 + j2
        return n1 + n2, outer.offset(n1, n2) + left * W.dim(n2) + right

    return position, W, outer


def _tensor_from_defining(a: DirectionalGVS, b: DirectionalGVS, W: GradedVectorSpace, outer: TensorIndexer, position):
    """Interchange image of R_a (x) R_b."""
    F = a.field
    Va, Vb = a.space, b.space
    ax, bx = a.pointing.indexer, b.pointing.indexer
    vecs: dict[int, list] = {}

    def split(ix: TensorIndexer, sp: GradedVectorSpace, n: int, v):
        out = []
        for pos, c in F.items(v):
            for i, i2, off in ix.layout[n]:
                d2 = sp.dim(i2)
                size = sp.dim(i) * d2
                if off <= pos < off + size:
                    x, x2 = divmod(pos - off, d2)
                    out.append((i, x, i2, x2, c))
                    break
        return out

    for na, Ra in a.pointing.defining.parts.items():
        sa = [split(ax, Va, na, v) for v in Ra.basis]
        for nb, Rb in b.pointing.defining.parts.items():
            sb = [split(bx, Vb, nb, w) for w in Rb.basis]
            for ta in sa:
                for tb in sb:
                    items = []
                    deg = None
                    for i, x, i2, x2, c in ta:
                        for j, y, j2, y2, d in tb:
                            deg, pos = position(i, x, i2, x2, j, y, j2, y2)
                            items.append((pos, F.mul(c, d)))
                    if deg is not None:
                        vecs.setdefault(deg, []).append(F.vec_from_items(items))
    return {n: Subspace.span(F, outer.dim(n), vs) for n, vs in vecs.items()}


def tensor(a: DirectionalGVS, b: DirectionalGVS, use_generators: bool = True) -> DirectionalGVS:
    """Tensor product of directional graded vector spaces.

    With generators on both factors the defining space is spanned by
    v (x) w (x) v' (x) w' over generator pairs; otherwise it is the
    interchange image of R_a (x) R_b.  Both give the smallest defining space.
    """
    F = a.field
    vw = TensorIndexer(a.space, b.space)
    W = vw.space()
    if use_generators and a.generators and b.generators:
        gens = []
        for v, v2 in a.generators:
            for w, w2 in b.generators:
                x = vw.coords(v, w, F)
                y = vw.coords(v2, w2, F)
                gens.append((x, y))
        rel = generate(W, F, gens)
        return DirectionalGVS(W, rel, gens)
    position, W2, outer = interchange_index(a.space, b.space)
    parts = _tensor_from_defining(a, b, W2, outer, position)
    return DirectionalGVS(W, BilinearRelation(W, F, parts), [])


def tensor_defining_via_interchange(a: DirectionalGVS, b: DirectionalGVS) -> BilinearRelation:
    return tensor(a, b, use_generators=False).pointing


# ---------------------------------------------------------------- morphisms


def _push_defining(f: GradedLinearMap, rel: BilinearRelation) -> dict[int, list]:
    """(f (x) f) applied to the basis of a defining space, as dense vectors by target degree."""
    ff, _, _ = tensor_map(f, f)
    out: dict[int, list] = {}
    for n, R in rel.defining.parts.items():
        m = ff.block(n)
        for v in R.vectors():
            out.setdefault(n + ff.shift, []).append(m.apply(v))
    return out


def _check_map(f: GradedLinearMap, a: DirectionalGVS, b: DirectionalGVS):
    if f.source.dims != a.space.dims or f.target.dims != b.space.dims:
        raise DimensionError("map does not match the directional spaces")


def is_morphism(f: GradedLinearMap, a: DirectionalGVS, b: DirectionalGVS) -> bool:
    """(f (x) f)(R_a) contained in R_b, degreewise (any shift)."""
    _check_map(f, a, b)
    for n, vs in _push_defining(f, a.pointing).items():
        Rb = b.pointing.defining.part(n)
        for v in vs:
            if len(v) == 0:
                continue
            if not Rb.contains(v):
                return False
    return True


def is_morphism_from_generators(f: GradedLinearMap, gens: Iterable[Pair], b: DirectionalGVS) -> bool:
    """Check only f(v) -> f(w) for generator pairs (sufficient by generation)."""
    for v, w in gens:
        if not b.points_to(f(v), f(w)):
            return False
    return True


def pushed_defining(f: GradedLinearMap, a: DirectionalGVS) -> GradedSubspace:
    F = f.field
    tgt = TensorIndexer(f.target, f.target).space()
    parts = {}
    for n, vs in _push_defining(f, a.pointing).items():
        parts[n] = Subspace.from_dense(F, tgt.dim(n), [v for v in vs if len(v)])
    return GradedSubspace(tgt, F, parts)


def dgvs_isomorphic_check(f: GradedLinearMap, a: DirectionalGVS, b: DirectionalGVS) -> bool:
    """True iff the invertible f carries R_a exactly onto R_b."""
    _check_map(f, a, b)
    if not f.is_invertible():
        raise ValueError("map is not invertible")
    return pushed_defining(f, a) == b.pointing.defining


# ---------------------------------------------------------------- enumeration helpers


def homogeneous_elements(space: GradedVectorSpace, field: Field, k: int, nonzero: bool = True):
    """All elements of degree k (finite fields only)."""
    d = space.dim(k)
    for coords in iproduct(list(field.elements()), repeat=d):
        e = Elem(k, tuple(coords))
        if nonzero and e.is_zero():
            continue
        yield e


def all_elements(space: GradedVectorSpace, field: Field, nonzero: bool = False) -> list[Elem]:
    out = []
    for k in space.degrees():
        out.extend(homogeneous_elements(space, field, k, nonzero))
    return out


def elem_add(v: Elem, w: Elem, field: Field) -> Elem:
    if v.degree != w.degree:
        raise DimensionError("adding elements of different degrees")
    return Elem(v.degree, tuple(field.add(a, b) for a, b in zip(v.coords, w.coords)))


def elem_scale(c, v: Elem, field: Field) -> Elem:
    return Elem(v.degree, tuple(field.mul(c, a) for a in v.coords))


def elem_label(space: GradedVectorSpace, field: Field, e: Elem) -> str:
    labs = space.labels.get(e.degree, ())
    terms = []
    for lab, c in zip(labs, e.coords):
        if c == 0:
            continue
        terms.append(lab if c == 1 else f"{field.format(c)}*{lab}")
    return "+".join(terms) if terms else "0"


@dataclass
class PropertyViolation:
    prop: int
    detail: str


def check_bilinear_properties(points_to, space: GradedVectorSpace, field: Field) -> list[PropertyViolation]:
    """Exhaustively test the four closure properties of a relation (finite field).

    ``points_to`` is any predicate on pairs of elements, so raw relations can
    be checked too.
    """
    bad = []
    elems = {k: list(homogeneous_elements(space, field, k, nonzero=False)) for k in space.degrees()}
    flat = [e for es in elems.values() for e in es]
    scalars = list(field.elements())
    rel = {(v, w): points_to(v, w) for v in flat for w in flat}
    for (v, w), ok in rel.items():
        if (v.is_zero() or w.is_zero()) and not ok:
            bad.append(PropertyViolation(1, f"{v} {w}"))
        if ok:
            for lam in scalars:
                for mu in scalars:
                    if not rel[(elem_scale(lam, v, field), elem_scale(mu, w, field))]:
                        bad.append(PropertyViolation(2, f"{lam} {mu} {v} {w}"))
    for k, es in elems.items():
        for w in flat:
            pointing = [v for v in es if rel[(v, w)]]
            for v in pointing:
                for v2 in pointing:
                    if not rel[(elem_add(v, v2, field), w)]:
                        bad.append(PropertyViolation(3, f"{v} {v2} {w}"))
        for v in flat:
            pointed = [w for w in es if rel[(v, w)]]
            for w in pointed:
                for w2 in pointed:
                    if not rel[(v, elem_add(w, w2, field))]:
                        bad.append(PropertyViolation(4, f"{v} {w} {w2}"))
    return bad
