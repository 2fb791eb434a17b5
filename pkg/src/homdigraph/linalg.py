"""Exact linear algebra over GF(p) and the rationals.

Vectors have two representations.  The public one is a dense tuple of field
elements.  Internally every field also provides a sparse representation used
by the elimination routines: a ``dict`` mapping index to nonzero coefficient,
or, for GF(2), a Python ``int`` used as a packed bit vector.  The two paths
are observably identical; GF(2) is simply faster.

Subspaces are stored in reduced echelon form with basis vectors sorted by
pivot (lowest nonzero index), so equal subspaces have equal keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------- fields


class Field:
    """Base class.  Subclasses implement scalar and sparse-vector ops."""

    name: str
    characteristic: int
    zero = 0
    one = 1

    # scalars
    def __call__(self, x):
        raise NotImplementedError

    def add(self, a, b):
        return self(a + b)

    def sub(self, a, b):
        return self(a - b)

    def mul(self, a, b):
        return self(a * b)

    def neg(self, a):
        return self(-a)

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def format(self, a) -> str:
        return str(a)

    def elements(self):
        """All elements, only for finite fields."""
        return range(self.characteristic)

    # sparse vectors: dict index -> nonzero coefficient
    def vec(self, dense: Sequence) -> dict:
        out = {}
        for i, c in enumerate(dense):
            c = self(c)
            if c != 0:
                out[i] = c
        return out

    def vec_from_items(self, items: Iterable[tuple[int, object]]):
        out: dict = {}
        for i, c in items:
            c = self(out.get(i, 0) + c)
            if c == 0:
                out.pop(i, None)
            else:
                out[i] = c
        return out

    def dense(self, v, n: int) -> tuple:
        return tuple(v.get(i, self.zero) for i in range(n))

    def pivot(self, v) -> int:
        return min(v) if v else -1

    def get(self, v, i):
        return v.get(i, self.zero)

    def axpy(self, v, a, w):
        """Return v + a*w."""
        if a == 0 or not w:
            return v
        out = dict(v)
        for k, c in w.items():
            nc = self(out.get(k, 0) + a * c)
            if nc == 0:
                del out[k]
            else:
                out[k] = nc
        return out

    def scale(self, v, a):
        if a == 0:
            return {}
        if a == 1:
            return v
        return {k: self(a * c) for k, c in v.items()}

    def unit(self, i: int):
        return {i: self.one}

    def null(self):
        return {}

    def support(self, v) -> list[int]:
        return sorted(v)

    def items(self, v):
        return sorted(v.items())

    def key(self, v):
        return tuple(sorted(v.items()))

    def __repr__(self):
        return self.name


@dataclass(frozen=True, repr=False)
class PrimeField(Field):
    p: int

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")

    @property
    def name(self):
        return f"gf:{self.p}"

    @property
    def characteristic(self):
        return self.p

    def __call__(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, a):
        a = self(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def axpy(self, v, a, w):
        # entries are already reduced ints, so skip the generic coercion
        if a == 0 or not w:
            return v
        p = self.p
        out = dict(v)
        for k, c in w.items():
            nc = (out.get(k, 0) + a * c) % p
            if nc:
                out[k] = nc
            else:
                del out[k]
        return out

    def neg(self, a):
        return -a % self.p


@dataclass(frozen=True, repr=False)
class BinaryField(PrimeField):
    """GF(2) with packed-bit sparse vectors (Python ints)."""

    p: int = 2

    @property
    def name(self):
        return "gf2"

    def __call__(self, x):
        return int(x) & 1

    def inv(self, a):
        if not a & 1:
            raise ZeroDivisionError("inverse of zero")
        return 1

    def vec(self, dense):
        out = 0
        for i, c in enumerate(dense):
            if int(c) & 1:
                out |= 1 << i
        return out

    def vec_from_items(self, items):
        out = 0
        for i, c in items:
            if int(c) & 1:
                out ^= 1 << i
        return out

    def dense(self, v, n):
        return tuple((v >> i) & 1 for i in range(n))

    def pivot(self, v):
        return (v & -v).bit_length() - 1

    def get(self, v, i):
        return (v >> i) & 1

    def axpy(self, v, a, w):
        return v ^ w if a & 1 else v

    def scale(self, v, a):
        return v if a & 1 else 0

    def unit(self, i):
        return 1 << i

    def null(self):
        return 0

    def support(self, v):
        out = []
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    def items(self, v):
        return [(i, 1) for i in self.support(v)]

    def key(self, v):
        return v


@dataclass(frozen=True, repr=False)
class RationalField(Field):
    name: str = "rational"
    characteristic: int = 0

    def __call__(self, x):
        if isinstance(x, str):
            return Fraction(x)
        return x if isinstance(x, Fraction) else Fraction(x)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def axpy(self, v, a, w):
        if a == 0 or not w:
            return v
        out = dict(v)
        for k, c in w.items():
            nc = out.get(k, 0) + a * c
            if nc:
                out[k] = nc if type(nc) is Fraction else Fraction(nc)
            else:
                del out[k]
        return out

    def neg(self, a):
        return -a if type(a) is Fraction else Fraction(-a)

    def elements(self):
        raise TypeError("the rationals are infinite")


GF2 = BinaryField()
QQ = RationalField()


def GF(p: int) -> PrimeField:
    return GF2 if p == 2 else PrimeField(p)


def parse_field(text: str) -> Field:
    """Parse ``gf2``, ``gf:<p>`` or ``rational``."""
    t = text.strip().lower()
    if t in ("gf2", "gf:2"):
        return GF2
    if t in ("rational", "q", "qq"):
        return QQ
    if t.startswith("gf:"):
        return GF(int(t[3:]))
    raise ValueError(f"unknown field {text!r} (expected gf2, gf:<p> or rational)")


# ---------------------------------------------------------------- elimination


class Echelon:
    """Incremental echelon basis over a field, in the sparse representation.

    Each stored row may carry a *tag* vector that undergoes the same row
    operations; this tracks how a reduced vector was combined, which gives
    kernels (column reduction) and coordinates with respect to a basis.
    """

    __slots__ = ("field", "rows")

    def __init__(self, field: Field):
        self.field = field
        self.rows: dict[int, tuple] = {}

    def __len__(self):
        return len(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon(self.field)
        e.rows = dict(self.rows)
        return e

    def reduce(self, v, tag=None):
        F = self.field
        rows = self.rows
        while v:
            p = F.pivot(v)
            row = rows.get(p)
            if row is None:
                break
            c = F.get(v, p)
            v = F.axpy(v, F.neg(c), row[0])
            if tag is not None:
                tag = F.axpy(tag, F.neg(c), row[1])
        return v, tag

    def insert(self, v, tag=None):
        """Reduce ``v``; store it if independent.

        Returns ``(independent, tag)`` where ``tag`` is the reduced tag.  When
        ``v`` is dependent the reduced tag records a linear relation.
        """
        F = self.field
        v, tag = self.reduce(v, tag)
        if not v:
            return False, tag
        p = F.pivot(v)
        c = F.get(v, p)
        if c != 1:
            ic = F.inv(c)
            v = F.scale(v, ic)
            if tag is not None:
                tag = F.scale(tag, ic)
        self.rows[p] = (v, tag)
        return True, tag

    def contains(self, v) -> bool:
        return not self.reduce(v)[0]

    def canonical(self) -> tuple:
        """Reduced echelon basis, sorted by pivot."""
        F = self.field
        done: dict[int, object] = {}
        for p in sorted(self.rows, reverse=True):
            v = self.rows[p][0]
            for q in sorted(done):
                c = F.get(v, q)
                if c != 0:
                    v = F.axpy(v, F.neg(c), done[q])
            done[p] = v
        return tuple(done[p] for p in sorted(done))


# ---------------------------------------------------------------- subspaces


class Subspace:
    """A subspace of ``field^dim`` held in canonical reduced echelon form."""

    __slots__ = ("field", "dim", "basis", "_ech")

    def __init__(self, field: Field, dim: int, basis: tuple):
        self.field = field
        self.dim = dim
        self.basis = basis
        self._ech = None

    @classmethod
    def span(cls, field: Field, dim: int, vecs: Iterable) -> "Subspace":
        """Span of sparse vectors."""
        e = Echelon(field)
        for v in vecs:
            e.insert(v)
        return cls(field, dim, e.canonical())

    @classmethod
    def from_dense(cls, field: Field, dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = []
        for v in vectors:
            if len(v) != dim:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {dim}")
            vecs.append(field.vec(v))
        return cls.span(field, dim, vecs)

    @classmethod
    def zero(cls, field: Field, dim: int) -> "Subspace":
        return cls(field, dim, ())

    @classmethod
    def full(cls, field: Field, dim: int) -> "Subspace":
        return cls(field, dim, tuple(field.unit(i) for i in range(dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def key(self):
        return (self.field.name, self.dim, tuple(self.field.key(v) for v in self.basis))

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rank={self.rank}, basis={self.vectors()})"

    def echelon(self) -> Echelon:
        if self._ech is None:
            e = Echelon(self.field)
            for v in self.basis:
                e.rows[self.field.pivot(v)] = (v, None)
            self._ech = e
        return self._ech

    def vectors(self) -> list[tuple]:
        return [self.field.dense(v, self.dim) for v in self.basis]

    def pivots(self) -> list[int]:
        return [self.field.pivot(v) for v in self.basis]

    def contains_vec(self, v) -> bool:
        return self.echelon().contains(v)

    def contains(self, vector: Sequence) -> bool:
        if len(vector) != self.dim:
            raise DimensionError(f"vector of length {len(vector)} in ambient dimension {self.dim}")
        return self.contains_vec(self.field.vec(vector))

    __contains__ = contains

    def _check(self, other: "Subspace"):
        if self.dim != other.dim or self.field != other.field:
            raise DimensionError("subspaces live in different ambient spaces")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.dim, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus-style intersection via a tagged reduction.

        Vectors of ``self`` are inserted tagged with themselves, then vectors
        of ``other`` tagged with zero.  A dependent vector of ``other`` yields
        ``v - sum(a_i u_i) = 0`` so its tag ``-sum(a_i u_i)`` lies in both.
        """
        self._check(other)
        F = self.field
        e = Echelon(F)
        for u in self.basis:
            e.insert(u, u)
        meet = []
        for v in other.basis:
            independent, tag = e.insert(v, F.null())
            if not independent and tag:
                meet.append(tag)
        return Subspace.span(F, self.dim, meet)

    __and__ = intersect

    def issubset(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains_vec(v) for v in self.basis)

    __le__ = issubset


# ---------------------------------------------------------------- matrices


class Matrix:
    """Dense matrix with exact entries; rows x cols."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, rows: int, cols: int, entries=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if entries is None:
            entries = tuple((field.zero,) * cols for _ in range(rows))
        else:
            entries = tuple(tuple(field(x) for x in r) for r in entries)
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise DimensionError("matrix entries do not match its shape")
        self.entries = entries

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols)

    @classmethod
    def from_columns(cls, field: Field, rows: int, columns: Sequence[Sequence]) -> "Matrix":
        cols = len(columns)
        return cls(field, rows, cols, [[columns[j][i] for j in range(cols)] for i in range(rows)])

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {[list(r) for r in self.entries]})"

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, self.columns())

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for a matrix with {self.cols} columns")
        F = self.field
        out = []
        for r in self.entries:
            s = F.zero
            for a, b in zip(r, v):
                if a != 0 and b != 0:
                    s = s + a * b
            out.append(F(s))
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionError("inner dimensions differ")
            cols = [self.apply(c) for c in other.columns()]
            return Matrix.from_columns(self.field, self.rows, cols)
        return self.apply(other)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shapes differ")
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
        )

    def scaled(self, c) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, [[c * a for a in r] for r in self.entries])

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; row/column index a*other.dim + b (lexicographic)."""
        out = []
        for r in self.entries:
            for s in other.entries:
                out.append([a * b for a in r for b in s])
        return Matrix(self.field, self.rows * other.rows, self.cols * other.cols, out)

    def rank(self) -> int:
        return image(self).rank

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if not self.is_invertible():
            raise ValueError("matrix is not invertible")
        F = self.field
        n = self.rows
        # reduce columns tagged with unit vectors: columns of M, combination = inverse columns
        cols = [coordinates(self.columns(), tuple(1 if i == j else 0 for i in range(n)), F) for j in range(n)]
        return Matrix.from_columns(F, n, cols)


@dataclass(frozen=True)
class EchelonForm:
    reduced: Matrix
    pivots: tuple
    rank: int


def echelonize(m: Matrix) -> EchelonForm:
    """Reduced column echelon form: nonzero columns first, sorted by pivot row."""
    F = m.field
    sub = Subspace.span(F, m.rows, (F.vec(c) for c in m.columns()))
    cols = sub.vectors() + [(F.zero,) * m.rows] * (m.cols - sub.rank)
    reduced = Matrix.from_columns(F, m.rows, cols) if m.cols else m
    return EchelonForm(reduced, tuple(sub.pivots()), sub.rank)


def image(m: Matrix) -> Subspace:
    F = m.field
    return Subspace.span(F, m.rows, (F.vec(c) for c in m.columns()))


def kernel_of_columns(field: Field, ncols: int, columns: Sequence) -> Subspace:
    """Kernel of the map whose j-th column is the sparse vector ``columns[j]``."""
    e = Echelon(field)
    rel = []
    for j, c in enumerate(columns):
        independent, tag = e.insert(c, field.unit(j))
        if not independent:
            rel.append(tag)
    return Subspace.span(field, ncols, rel)


def kernel(m: Matrix) -> Subspace:
    F = m.field
    return kernel_of_columns(F, m.cols, [F.vec(c) for c in m.columns()])


def member(s: Subspace, v: Sequence) -> bool:
    return s.contains(v)


def coordinates(basis: Sequence[Sequence], v: Sequence, field: Field):
    """Coefficients expressing ``v`` in the (independent) ``basis``; None if outside the span."""
    e = Echelon(field)
    for j, b in enumerate(basis):
        e.insert(field.vec(b), field.unit(j))
    rem, tag = e.reduce(field.vec(v), field.null())
    if rem:
        return None
    # v - sum(tag_j b_j) = 0 with tag accumulated negatively
    return tuple(field.neg(c) for c in field.dense(tag, len(basis)))


# ---------------------------------------------------------------- graded objects


class GradedVectorSpace:
    """Finitely supported graded vector space with labelled bases."""

    __slots__ = ("dims", "labels")

    def __init__(self, dims: dict[int, int], labels: dict[int, Sequence[str]] | None = None):
        self.dims = {k: int(d) for k, d in sorted(dims.items()) if d}
        if labels is None:
            labels = {k: [f"e{k}.{i}" for i in range(d)] for k, d in self.dims.items()}
        self.labels = {k: tuple(labels[k]) for k in self.dims}
        for k, d in self.dims.items():
            if len(self.labels[k]) != d:
                raise DimensionError(f"degree {k}: {len(self.labels[k])} labels for dimension {d}")

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def degrees(self) -> list[int]:
        return list(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self.dims == other.dims and self.labels == other.labels

    def __repr__(self):
        return f"GradedVectorSpace({self.dims})"


@dataclass(frozen=True)
class Elem:
    """A homogeneous element: degree plus dense coordinates."""

    degree: int
    coords: tuple

    def is_zero(self) -> bool:
        return not any(c != 0 for c in self.coords)


def basis_element(space: GradedVectorSpace, k: int, i: int, field: Field) -> Elem:
    return Elem(k, tuple(field.one if j == i else field.zero for j in range(space.dim(k))))


def zero_element(space: GradedVectorSpace, k: int, field: Field) -> Elem:
    return Elem(k, (field.zero,) * space.dim(k))


class GradedSubspace:
    """Degreewise subspaces of a graded ambient space."""

    __slots__ = ("ambient", "field", "parts")

    def __init__(self, ambient: GradedVectorSpace, field: Field, parts: dict[int, Subspace] | None = None):
        self.ambient = ambient
        self.field = field
        parts = dict(parts or {})
        for k, s in parts.items():
            if s.dim != ambient.dim(k):
                raise DimensionError(f"degree {k}: subspace of dimension {s.dim}, ambient {ambient.dim(k)}")
        self.parts = {k: s for k, s in sorted(parts.items()) if s.rank}

    def part(self, k: int) -> Subspace:
        s = self.parts.get(k)
        return s if s is not None else Subspace.zero(self.field, self.ambient.dim(k))

    def dims(self) -> dict[int, int]:
        return {k: s.rank for k, s in self.parts.items()}

    def total_rank(self) -> int:
        return sum(s.rank for s in self.parts.values())

    def key(self):
        return tuple((k, s.key()) for k, s in self.parts.items())

    def __eq__(self, other):
        return isinstance(other, GradedSubspace) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GradedSubspace({self.dims()})"

    def _check(self, other):
        if self.ambient.dims != other.ambient.dims or self.field != other.field:
            raise DimensionError("graded subspaces live in different ambient spaces")

    def __add__(self, other: "GradedSubspace") -> "GradedSubspace":
        self._check(other)
        ks = set(self.parts) | set(other.parts)
        return GradedSubspace(self.ambient, self.field, {k: self.part(k) + other.part(k) for k in ks})

    def intersect(self, other: "GradedSubspace") -> "GradedSubspace":
        self._check(other)
        ks = set(self.parts) & set(other.parts)
        return GradedSubspace(self.ambient, self.field, {k: self.part(k) & other.part(k) for k in ks})

    __and__ = intersect

    def issubset(self, other: "GradedSubspace") -> bool:
        self._check(other)
        return all(s <= other.part(k) for k, s in self.parts.items())

    def contains(self, e: Elem) -> bool:
        return self.part(e.degree).contains(e.coords)


class GradedLinearMap:
    """Degree-``shift`` map: block k sends source degree k to target degree k+shift."""

    __slots__ = ("source", "target", "shift", "field", "blocks")

    def __init__(self, source: GradedVectorSpace, target: GradedVectorSpace, field: Field,
                 blocks: dict[int, Matrix] | None = None, shift: int = 0):
        self.source = source
        self.target = target
        self.field = field
        self.shift = shift
        self.blocks = {}
        blocks = blocks or {}
        for k in source.degrees():
            m = blocks.get(k)
            rows, cols = target.dim(k + shift), source.dim(k)
            if m is None:
                m = Matrix.zero(field, rows, cols)
            if (m.rows, m.cols) != (rows, cols):
                raise DimensionError(f"degree {k}: block {m.rows}x{m.cols}, expected {rows}x{cols}")
            self.blocks[k] = m

    def block(self, k: int) -> Matrix:
        m = self.blocks.get(k)
        if m is None:
            return Matrix.zero(self.field, self.target.dim(k + self.shift), self.source.dim(k))
        return m

    def apply(self, e: Elem) -> Elem:
        return Elem(e.degree + self.shift, self.block(e.degree).apply(e.coords))

    __call__ = apply

    def __matmul__(self, other: "GradedLinearMap") -> "GradedLinearMap":
        """Composition self after other."""
        blocks = {k: self.block(k + other.shift) @ other.block(k) for k in other.source.degrees()}
        return GradedLinearMap(other.source, self.target, self.field, blocks, self.shift + other.shift)

    def __eq__(self, other):
        return (
            isinstance(other, GradedLinearMap)
            and self.shift == other.shift
            and self.source.dims == other.source.dims
            and self.target.dims == other.target.dims
            and all(self.block(k) == other.block(k) for k in self.source.degrees())
        )

    def ranks(self) -> dict[int, int]:
        return {k: m.rank() for k, m in self.blocks.items()}

    def is_invertible(self) -> bool:
        if self.shift != 0:
            return False
        degs = set(self.source.degrees()) | set(self.target.degrees())
        return all(self.block(k).is_invertible() for k in degs)

    def image(self) -> GradedSubspace:
        return GradedSubspace(self.target, self.field,
                              {k + self.shift: image(m) for k, m in self.blocks.items()})

    def inverse(self) -> "GradedLinearMap":
        if not self.is_invertible():
            raise ValueError("graded map is not invertible")
        return GradedLinearMap(self.target, self.source, self.field,
                               {k: m.inverse() for k, m in self.blocks.items()})

    @classmethod
    def identity(cls, space: GradedVectorSpace, field: Field) -> "GradedLinearMap":
        return cls(space, space, field, {k: Matrix.identity(field, d) for k, d in space.dims.items()})

    def __repr__(self):
        return f"GradedLinearMap(shift={self.shift}, ranks={self.ranks()})"


class TensorIndexer:
    """Coordinates of V (x) W.

    Total degree n is the concatenation of blocks V_i (x) W_j, i + j = n, in
    lexicographic (i, j) order; inside a block the pair (a, b) sits at
    ``offset + a * dim(W_j) + b``.
    """

    __slots__ = ("left", "right", "layout", "dims", "_offset")

    def __init__(self, left: GradedVectorSpace, right: GradedVectorSpace):
        self.left = left
        self.right = right
        self.layout: dict[int, list[tuple[int, int, int]]] = {}
        self._offset: dict[tuple[int, int], int] = {}
        for i in left.degrees():
            for j in right.degrees():
                self.layout.setdefault(i + j, []).append((i, j))
        self.dims = {}
        for n in sorted(self.layout):
            blocks = []
            off = 0
            for i, j in sorted(self.layout[n]):
                blocks.append((i, j, off))
                self._offset[(i, j)] = off
                off += left.dim(i) * right.dim(j)
            self.layout[n] = blocks
            self.dims[n] = off
        self.layout = dict(sorted(self.layout.items()))
        self.dims = dict(sorted(self.dims.items()))

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def offset(self, i: int, j: int) -> int:
        try:
            return self._offset[(i, j)]
        except KeyError:
            raise DimensionError(f"no block ({i}, {j}) in the tensor product") from None

    def index(self, i: int, a: int, j: int, b: int) -> int:
        return self.offset(i, j) + a * self.right.dim(j) + b

    def space(self, sep: str = "⊗") -> GradedVectorSpace:
        labels = {}
        for n, blocks in self.layout.items():
            lab = []
            for i, j, _ in blocks:
                for x in self.left.labels.get(i, ()):
                    for y in self.right.labels.get(j, ()):
                        lab.append(f"{x}{sep}{y}")
            labels[n] = lab
        return GradedVectorSpace(self.dims, labels)

    def coords(self, v: Elem, w: Elem, field: Field) -> Elem:
        """Dense coordinates of v (x) w in degree deg v + deg w."""
        i, j = v.degree, w.degree
        if len(v.coords) != self.left.dim(i) or len(w.coords) != self.right.dim(j):
            raise DimensionError("element does not conform to the tensor factors")
        n = i + j
        out = [field.zero] * self.dim(n)
        if self.dim(n) == 0:
            return Elem(n, ())
        off = self.offset(i, j)
        dw = self.right.dim(j)
        for a, x in enumerate(v.coords):
            if x == 0:
                continue
            for b, y in enumerate(w.coords):
                if y != 0:
                    out[off + a * dw + b] = field.mul(x, y)
        return Elem(n, tuple(out))

    def coords_vec(self, i: int, v, j: int, w, field: Field):
        """Sparse-representation counterpart of :meth:`coords`."""
        off = self.offset(i, j)
        dw = self.right.dim(j)
        items = []
        for a, x in field.items(v):
            for b, y in field.items(w):
                items.append((off + a * dw + b, field.mul(x, y)))
        return field.vec_from_items(items)


def tensor_coords(ix: TensorIndexer, v: Elem, w: Elem, field: Field) -> Elem:
    return ix.coords(v, w, field)


def tensor_map(f: GradedLinearMap, g: GradedLinearMap) -> tuple[GradedLinearMap, TensorIndexer, TensorIndexer]:
    """f (x) g between the tensor products of sources and targets."""
    F = f.field
    six = TensorIndexer(f.source, g.source)
    tix = TensorIndexer(f.target, g.target)
    shift = f.shift + g.shift
    blocks = {}
    for n, layout in six.layout.items():
        rows = tix.dim(n + shift)
        cols = six.dim(n)
        m = [[F.zero] * cols for _ in range(rows)]
        for i, j, off in layout:
            ti, tj = i + f.shift, j + g.shift
            if tix.left.dim(ti) == 0 or tix.right.dim(tj) == 0:
                continue
            k = f.block(i).kron(g.block(j))
            toff = tix.offset(ti, tj)
            for r in range(k.rows):
                row = k.entries[r]
                for c in range(k.cols):
                    if row[c] != 0:
                        m[toff + r][off + c] = row[c]
        blocks[n] = Matrix(F, rows, cols, m)
    return (
        GradedLinearMap(six.space(), tix.space(), F, blocks, shift),
        six,
        tix,
    )
