"""Homology of finite spaces via order complexes.

Simplices are strictly increasing chains of the specialization order, stored
as tuples of point indices listed bottom to top; that listing fixes the
orientation.  Relative chains of (X, A) use the simplices of K(X) that are not
contained in A.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .linalg import (
    Echelon,
    Field,
    GradedLinearMap,
    GradedSubspace,
    GradedVectorSpace,
    Matrix,
    Subspace,
    TensorIndexer,
    kernel_of_columns,
)
from .spaces import (
    FinitePreorderedSpace,
    InputError,
    PairSpace,
    PointMap,
    bits,
    inclusion_map,
    is_monotone_continuous,
    restrict_mask,
)


class ChainMapError(AssertionError):
    pass


class OrderComplex:
    """All nonempty chains of the topology order, by dimension."""

    def __init__(self, space: FinitePreorderedSpace, max_dim: int | None = None):
        self.space = space
        self.max_dim = max_dim
        by_dim: dict[int, list[tuple[int, ...]]] = {}
        strict = [space.topo_up[i] & ~(1 << i) for i in range(len(space))]

        def grow(chain, last):
            by_dim.setdefault(len(chain) - 1, []).append(chain)
            if max_dim is not None and len(chain) - 1 >= max_dim:
                return
            for j in bits(strict[last]):
                grow(chain + (j,), j)

        for i in range(len(space)):
            grow((i,), i)
        self.simplices = {k: sorted(v) for k, v in sorted(by_dim.items())}
        self.index = {k: {s: n for n, s in enumerate(v)} for k, v in self.simplices.items()}
        self.masks = {k: [sum(1 << i for i in s) for s in v] for k, v in self.simplices.items()}

    @property
    def dimension(self) -> int:
        return max(self.simplices, default=-1)

    def count(self, k: int) -> int:
        return len(self.simplices.get(k, ()))

    def __repr__(self):
        return f"OrderComplex({ {k: len(v) for k, v in self.simplices.items()} })"


def order_complex(x: FinitePreorderedSpace, max_dim: int | None = None) -> OrderComplex:
    return OrderComplex(x, max_dim)


class ChainComplexData:
    """Chain complex of K(X) modulo K(A) over a field.

    ``basis[k]`` lists the global simplex indices (into ``complex.simplices[k]``)
    that survive in the quotient; ``boundary(k)`` gives sparse columns.
    """

    def __init__(self, complex: OrderComplex, field: Field, sub_mask: int = 0):
        self.complex = complex
        self.field = field
        self.sub_mask = sub_mask
        self.basis: dict[int, list[int]] = {}
        self.rel_index: dict[int, dict[int, int]] = {}
        for k, masks in complex.masks.items():
            keep = [n for n, m in enumerate(masks) if m & ~sub_mask]
            self.basis[k] = keep
            self.rel_index[k] = {n: r for r, n in enumerate(keep)}
        self._boundary: dict[int, list] = {}
        self.check_square_zero()

    @property
    def mode(self) -> str:
        return "relative" if self.sub_mask else "absolute"

    def rank(self, k: int) -> int:
        return len(self.basis.get(k, ()))

    def degrees(self) -> list[int]:
        return [k for k, b in self.basis.items() if b]

    def simplex(self, k: int, r: int) -> tuple[int, ...]:
        return self.complex.simplices[k][self.basis[k][r]]

    def simplex_index(self, s: tuple[int, ...]):
        """Relative index of a simplex, or None if it lies in the subcomplex."""
        k = len(s) - 1
        n = self.complex.index[k].get(s)
        if n is None:
            raise KeyError(f"{s} is not a simplex")
        return self.rel_index[k].get(n)

    def chain_vec(self, terms) -> object:
        """Sparse chain from (coefficient, simplex) terms; subcomplex terms drop."""
        items = []
        for c, s in terms:
            r = self.simplex_index(s)
            if r is not None:
                items.append((r, c))
        return self.field.vec_from_items(items)

    def boundary_terms(self, s: tuple[int, ...]):
        F = self.field
        if len(s) == 1:
            return []
        return [(F.one if i % 2 == 0 else F.neg(F.one), s[:i] + s[i + 1:]) for i in range(len(s))]

    def boundary(self, k: int) -> list:
        """Sparse columns of d_k : C_k -> C_{k-1}."""
        cols = self._boundary.get(k)
        if cols is None:
            cols = [self.chain_vec(self.boundary_terms(self.simplex(k, r))) if k > 0 else self.field.null()
                    for r in range(self.rank(k))]
            self._boundary[k] = cols
        return cols

    def boundary_matrix(self, k: int) -> Matrix:
        F = self.field
        rows = self.rank(k - 1) if k > 0 else 0
        cols = [F.dense(c, rows) for c in self.boundary(k)]
        return Matrix.from_columns(F, rows, cols)

    def apply_boundary(self, k: int, v):
        F = self.field
        cols = self.boundary(k)
        out = F.null()
        for r, c in F.items(v):
            out = F.axpy(out, c, cols[r])
        return out

    def check_square_zero(self):
        for k in self.basis:
            if k < 2:
                continue
            for col in self.boundary(k):
                if self.apply_boundary(k - 1, col):
                    raise ChainMapError(f"boundary does not square to zero in degree {k}")


class HomologyBasis:
    """Homology with representative cycles and a projector onto classes."""

    def __init__(self, chains: ChainComplexData, max_degree: int | None = None):
        self.chains = chains
        self.field = F = chains.field
        self.space = chains.complex.space
        self.sub_mask = chains.sub_mask
        top = chains.complex.dimension
        if max_degree is not None:
            top = min(top, max_degree)
        self.top = top
        self.reps: dict[int, list] = {}
        self._proj: dict[int, Echelon] = {}
        self.cycle_spaces: dict[int, Subspace] = {}
        self.boundary_spaces: dict[int, Subspace] = {}
        dims, labels = {}, {}
        for k in range(top + 1):
            n = chains.rank(k)
            Z = kernel_of_columns(F, n, chains.boundary(k)) if k > 0 else Subspace.full(F, n)
            B = Subspace.span(F, n, chains.boundary(k + 1)) if chains.rank(k + 1) else Subspace.zero(F, n)
            e = Echelon(F)
            for b in B.basis:
                e.insert(b, F.null())
            reps = []
            for z in Z.basis:
                independent, _ = e.insert(z, F.unit(len(reps)))
                if independent:
                    reps.append(z)
            self.reps[k] = reps
            self._proj[k] = e
            self.cycle_spaces[k] = Z
            self.boundary_spaces[k] = B
            if reps:
                dims[k] = len(reps)
                labels[k] = [f"h{k}.{i}" for i in range(len(reps))]
        self.gvs = GradedVectorSpace(dims, labels)
        if max_degree is None:
            euler_c = sum((-1) ** k * chains.rank(k) for k in chains.basis)
            euler_h = sum((-1) ** k * d for k, d in dims.items())
            if euler_c != euler_h:
                raise ChainMapError(f"Euler characteristic mismatch: chains {euler_c}, homology {euler_h}")

    def betti(self) -> dict[int, int]:
        return dict(self.gvs.dims)

    def dim(self, k: int) -> int:
        return self.gvs.dim(k)

    def project(self, k: int, z):
        """Homology coordinates (sparse) of a relative cycle in degree k."""
        F = self.field
        if k not in self._proj:
            if z:
                raise ChainMapError(f"degree {k} is outside the computed range")
            return F.null()
        rem, tag = self._proj[k].reduce(z, F.null())
        if rem:
            raise ChainMapError(f"chain in degree {k} is not a cycle")
        return F.scale(tag, F.neg(F.one))

    def project_dense(self, k: int, z) -> tuple:
        return self.field.dense(self.project(k, z), self.dim(k))

    def rep_dense(self, k: int, i: int) -> tuple:
        return self.field.dense(self.reps[k][i], self.chains.rank(k))

    def rep_terms(self, k: int, i: int):
        """(coefficient, simplex as point ids) terms of a representative cycle."""
        pts = self.space.points
        return [(c, tuple(pts[v] for v in self.chains.simplex(k, r))) for r, c in self.field.items(self.reps[k][i])]

    def image_of_subset(self, mask: int) -> GradedSubspace:
        """im H(E, E cap A) -> H(X, A) for the points in ``mask``."""
        F = self.field
        cx = self.chains.complex
        parts = {}
        for k in self.gvs.degrees():
            masks = cx.masks[k]
            bnd = self.chains.boundary(k)
            e = Echelon(F)
            cycles = []
            for r, n in enumerate(self.chains.basis[k]):
                if masks[n] & ~mask:
                    continue
                independent, tag = e.insert(bnd[r], F.unit(r))
                if not independent:
                    cycles.append(tag)
            parts[k] = Subspace.span(F, self.dim(k), (self.project(k, z) for z in cycles))
        return GradedSubspace(self.gvs, F, parts)


def chain_complex(x: FinitePreorderedSpace, field: Field, subset_mask: int = 0,
                  max_dim: int | None = None) -> ChainComplexData:
    return ChainComplexData(OrderComplex(x, max_dim), field, subset_mask)


def homology(x: FinitePreorderedSpace, field: Field, subset_mask: int = 0,
             max_degree: int | None = None) -> HomologyBasis:
    if subset_mask & ~x.full:
        raise InputError("subset contains points outside the space")
    max_dim = None if max_degree is None else max_degree + 1
    return HomologyBasis(chain_complex(x, field, subset_mask, max_dim), max_degree)


def pair_homology(p: PairSpace, field: Field, max_degree: int | None = None) -> HomologyBasis:
    return homology(p.space, field, p.mask, max_degree)


class InducedMap:
    """A homology-level map with a note on where it came from."""

    def __init__(self, map: GradedLinearMap, origin: str):
        self.map = map
        self.origin = origin

    def __repr__(self):
        return f"InducedMap({self.origin}, {self.map})"


def _chain_image(f: PointMap, s: tuple[int, ...]):
    img = tuple(f.images[v] for v in s)
    if any(a == b for a, b in zip(img, img[1:])):
        return None
    return img


def _check_chain_map(f: PointMap, src: ChainComplexData, tgt: ChainComplexData):
    F = src.field
    for k in src.degrees():
        if k == 0 or k - 1 > tgt.complex.dimension:
            continue
        for r in range(src.rank(k)):
            s = src.simplex(k, r)
            img = _chain_image(f, s)
            lhs = tgt.chain_vec([] if img is None else tgt.boundary_terms(img))
            terms = []
            for c, face in src.boundary_terms(s):
                if src.simplex_index(face) is None:
                    continue
                fi = _chain_image(f, face)
                if fi is not None:
                    terms.append((c, fi))
            rhs = tgt.chain_vec(terms)
            if F.key(lhs) != F.key(rhs):
                raise ChainMapError(f"chain map does not commute with the boundary at simplex {s}")


def _map_cycles(f: PointMap, src: HomologyBasis, tgt: HomologyBasis) -> dict[int, Matrix]:
    F = src.field
    blocks = {}
    for k in src.gvs.degrees():
        cols = []
        for z in src.reps[k]:
            terms = []
            for r, c in F.items(z):
                img = _chain_image(f, src.chains.simplex(k, r))
                if img is not None:
                    terms.append((c, img))
            if k > tgt.top:
                cols.append(())
                continue
            cols.append(tgt.project_dense(k, tgt.chains.chain_vec(terms)))
        blocks[k] = Matrix.from_columns(F, tgt.dim(k), cols)
    return blocks


def induced_map(f: PointMap, src: HomologyBasis, tgt: HomologyBasis, check: bool = True) -> InducedMap:
    """f_* : H(X, A) -> H(Y, B) for a monotone continuous f with f(A) in B."""
    if src.space != f.source or tgt.space != f.target:
        raise InputError("map does not match the given homology bases")
    if not is_monotone_continuous(f):
        raise InputError("map is not monotone and continuous")
    if f.image_mask(src.sub_mask) & ~tgt.sub_mask:
        raise InputError("map does not send the subspace into the target subspace")
    if check:
        _check_chain_map(f, src.chains, tgt.chains)
    blocks = _map_cycles(f, src, tgt)
    return InducedMap(GradedLinearMap(src.gvs, tgt.gvs, src.field, blocks), "monotone map")


def induced_inclusion(hb: HomologyBasis, mask: int) -> tuple[InducedMap, HomologyBasis]:
    """H(E, E cap A) -> H(X, A); also returns the source basis."""
    x = hb.space
    if mask & ~x.full:
        raise InputError("subset contains points outside the space")
    sub = restrict_mask(x, mask)
    inc = inclusion_map(sub, x)
    sub_a = 0
    for i, p in enumerate(sub.points):
        if hb.sub_mask >> x.index[p] & 1:
            sub_a |= 1 << i
    src = homology(sub, hb.field, sub_a, max_degree=hb.top)
    im = induced_map(inc, src, hb)
    im.origin = "inclusion"
    return im, src


def connecting(rel: HomologyBasis, sub: HomologyBasis) -> InducedMap:
    """delta_* : H_k(X, A) -> H_{k-1}(A).

    ``rel`` is the homology of (X, A); ``sub`` the absolute homology of the
    subspace A (with its own point order).
    """
    X, A = rel.space, sub.space
    F = rel.field
    if sub.sub_mask:
        raise InputError("the subspace homology must be absolute")
    to_a = {}
    for i, p in enumerate(X.points):
        if rel.sub_mask >> i & 1:
            if p not in A.index:
                raise InputError("subspace homology does not match the pair")
            to_a[i] = A.index[p]
    if len(to_a) != len(A):
        raise InputError("subspace homology does not match the pair")
    blocks = {}
    for k in rel.gvs.degrees():
        cols = []
        for z in rel.reps[k]:
            items = {}
            for r, c in F.items(z):
                s = rel.chains.simplex(k, r)
                for sign, face in rel.chains.boundary_terms(s):
                    items[face] = F.add(items.get(face, F.zero), F.mul(sign, c))
            terms = []
            for face, c in items.items():
                if c == 0:
                    continue
                if any(v not in to_a for v in face):
                    raise ChainMapError("boundary of a relative cycle leaves the subspace")
                terms.append((c, tuple(to_a[v] for v in face)))
            if k - 1 < 0:
                cols.append(())
                continue
            cols.append(sub.project_dense(k - 1, sub.chains.chain_vec(terms)))
        blocks[k] = Matrix.from_columns(F, sub.dim(k - 1), cols)
    return InducedMap(GradedLinearMap(rel.gvs, sub.gvs, F, blocks, shift=-1), "connecting")


def long_exact_sequence(p: PairSpace, field: Field) -> dict:
    """Bases and maps of ... -> H(A) -> H(X) -> H(X,A) -> H(A)[-1] -> ..."""
    X = p.space
    A = restrict_mask(X, p.mask)
    hA = homology(A, field)
    hX = homology(X, field)
    hXA = homology(X, field, p.mask)
    i_star = induced_map(inclusion_map(A, X), hA, hX).map
    j_star = induced_map(PointMap(X, X, tuple(range(len(X)))), hX, hXA).map
    d_star = connecting(hXA, hA).map
    return {"H(A)": hA, "H(X)": hX, "H(X,A)": hXA, "i": i_star, "j": j_star, "delta": d_star}


def exactness_report(les: dict) -> list[dict]:
    """Rank of incoming = nullity of outgoing at every joint."""
    i, j, d = les["i"], les["j"], les["delta"]
    hA, hX, hXA = les["H(A)"], les["H(X)"], les["H(X,A)"]
    top = max(hA.top, hX.top, hXA.top, 0) + 1
    joints = []
    for k in range(top + 1):
        # at H_k(A): incoming delta from H_{k+1}(X,A), outgoing i
        for name, incoming, outgoing, dim in (
            ("H(A)", d.block(k + 1), i.block(k), hA.dim(k)),
            ("H(X)", i.block(k), j.block(k), hX.dim(k)),
            ("H(X,A)", j.block(k), d.block(k), hXA.dim(k)),
        ):
            rin = incoming.rank() if incoming.cols and incoming.rows else 0
            rout = outgoing.rank() if outgoing.cols and outgoing.rows else 0
            joints.append({"joint": f"{name}_{k}", "dim": dim, "rank_in": rin, "nullity_out": dim - rout,
                           "exact": rin == dim - rout})
    return joints


# ---------------------------------------------------------------- cross product


def shuffles(p: int, q: int):
    """Yield (sign, steps) for (p, q)-shuffles; steps is a tuple of 0 (x) / 1 (y).

    The sign counts pairs where a y-step precedes an x-step.
    """
    n = p + q
    for ys in combinations(range(n), q):
        yset = set(ys)
        steps = tuple(1 if t in yset else 0 for t in range(n))
        inv = 0
        seen_y = 0
        for s in steps:
            if s:
                seen_y += 1
            else:
                inv += seen_y
        yield (-1) ** inv, steps


def cross_chain(sigma: Sequence[int], tau: Sequence[int], ny: int) -> list[tuple[int, tuple[int, ...]]]:
    """Shuffle product of simplices sigma in K(X), tau in K(Y) as (sign, simplex) terms in K(X x Y).

    Product point (i, j) has index i*ny + j.
    """
    p, q = len(sigma) - 1, len(tau) - 1
    out = []
    for sign, steps in shuffles(p, q):
        a = b = 0
        verts = [sigma[0] * ny + tau[0]]
        for s in steps:
            if s:
                b += 1
            else:
                a += 1
            verts.append(sigma[a] * ny + tau[b])
        out.append((sign, tuple(verts)))
    return out


def cross(hx: HomologyBasis, hy: HomologyBasis, hxy: HomologyBasis) -> tuple[InducedMap, TensorIndexer]:
    """The homology cross product H(X, A) (x) H(Y, B) -> H(X x Y, A x Y cup X x B)."""
    F = hx.field
    ny = len(hy.space)
    ix = TensorIndexer(hx.gvs, hy.gvs)
    W = ix.space()
    blocks = {}
    for n, layout in ix.layout.items():
        cols = []
        for i, j, _ in layout:
            for z in hx.reps[i]:
                for w in hy.reps[j]:
                    terms = []
                    for r, c in F.items(z):
                        s = hx.chains.simplex(i, r)
                        for t_r, d in F.items(w):
                            t = hy.chains.simplex(j, t_r)
                            cd = F.mul(c, d)
                            for sign, simp in cross_chain(s, t, ny):
                                terms.append((F.mul(sign, cd), simp))
                    cols.append(hxy.project_dense(n, hxy.chains.chain_vec(terms)))
        blocks[n] = Matrix.from_columns(F, hxy.dim(n), cols)
    return InducedMap(GradedLinearMap(W, hxy.gvs, F, blocks), "cross"), ix
