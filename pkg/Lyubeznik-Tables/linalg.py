"""
Exact linear algebra over QQ and GF(p), plus chain-complex homology with chosen bases.

Scalars are fractions.Fraction in characteristic 0 and least residues (int) modulo p
otherwise; no floating point anywhere. Elimination over QQ is fraction-free: rows are
scaled to primitive integer rows, combined with gcd cofactors, and only divided by their
pivot at the very end. Pivoting is deterministic (leftmost column, first row), and the
reduced row echelon form is unique anyway, so every basis returned here is reproducible.

A linear map V -> W is stored as a dim W x dim V matrix (columns are images of basis vectors).
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from errors import InvariantError, ParseError

logger = logging.getLogger(__name__)

Scalar = Fraction | int
Vector = tuple  # tuple of Scalar


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: characteristic 0 (QQ) or a prime p < 2^31 (GF(p))."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if isinstance(p, bool) or not isinstance(p, int):
            raise ParseError(f"characteristic must be an integer, got {p!r}")
        if p != 0 and (p < 2 or p >= 2**31 or not sympy.isprime(p)):
            raise ParseError(f"characteristic must be 0 or a prime below 2^31, got {p}")

    @property
    def label(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.characteristic == 0 else 1

    def element(self, x) -> Scalar:
        p = self.characteristic
        if p == 0:
            return x if isinstance(x, Fraction) else Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    def inv(self, x: Scalar) -> Scalar:
        if self.characteristic == 0:
            return 1 / x
        return pow(x, -1, self.characteristic)

    def to_literal(self, x: Scalar) -> str:
        return str(x)

    def from_literal(self, text: str) -> Scalar:
        if self.characteristic == 0:
            return Fraction(text)
        return int(text) % self.characteristic


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Dense exact matrix. entries is a tuple of row tuples; rows/cols survive zero sizes."""

    rows: int
    cols: int
    entries: tuple
    field: FieldSpec = field(default_factory=FieldSpec)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise InvariantError(f"matrix entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], fld: FieldSpec, cols: int | None = None) -> "Matrix":
        rows = [tuple(fld.element(x) for x in r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(len(rows), ncols, tuple(rows), fld)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, fld: FieldSpec) -> "Matrix":
        entries = tuple(tuple(col[i] for col in columns) for i in range(nrows))
        return cls(nrows, len(columns), entries, fld)

    @classmethod
    def zeros(cls, rows: int, cols: int, fld: FieldSpec) -> "Matrix":
        z = fld.zero
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)), fld)

    @classmethod
    def identity(cls, n: int, fld: FieldSpec) -> "Matrix":
        z, o = fld.zero, fld.one
        return cls(n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), fld)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)), self.field)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def apply(self, vector: Sequence[Scalar]) -> Vector:
        p = self.field.characteristic
        out = []
        for r in self.entries:
            s = 0
            for a, b in zip(r, vector):
                if a and b:
                    s += a * b
            out.append(s % p if p else Fraction(s))
        return tuple(out)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise InvariantError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        cols = [self.apply(c) for c in other.columns()]
        return Matrix.from_columns(cols, self.rows, self.field)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        entries = tuple(tuple(self.entries[i][j] for j in col_idx) for i in row_idx)
        return Matrix(len(row_idx), len(col_idx), entries, self.field)

    def to_json(self) -> list[list[str]]:
        """Exact literals; the shape travels separately so empty matrices round-trip."""
        return [[self.field.to_literal(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data: list[list[str]], rows: int, cols: int, fld: FieldSpec) -> "Matrix":
        return cls(rows, cols, tuple(tuple(fld.from_literal(x) for x in r) for r in data), fld)


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------

def _primitive(row: list[int]) -> list[int]:
    g = math.gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = math.lcm(*(Fraction(x).denominator for x in row)) if row else 1
    return [Fraction(x).numerator * (den // Fraction(x).denominator) for x in row]


def _rref_rational(rows: list[Sequence[Scalar]], limit: int) -> tuple[list[list[Fraction]], list[int]]:
    work = [_primitive(_integer_row(r)) for r in rows]
    work = [r for r in work if any(r)]
    pivots: list[int] = []
    top = 0
    for c in range(limit):
        if top == len(work):
            break
        hit = next((i for i in range(top, len(work)) if work[i][c]), None)
        if hit is None:
            continue
        work[top], work[hit] = work[hit], work[top]
        prow = work[top]
        p = prow[c]
        for i in range(len(work)):
            a = work[i][c]
            if i == top or not a:
                continue
            g = math.gcd(p, a)
            alpha, beta = a // g, p // g
            work[i] = _primitive([beta * x - alpha * y for x, y in zip(work[i], prow)])
        pivots.append(c)
        top += 1
    result = []
    for r, c in zip(work[:top], pivots):
        piv = r[c]
        result.append([Fraction(x, piv) for x in r])
    return result, pivots


def _rref_modp(rows: list[Sequence[Scalar]], limit: int, p: int) -> tuple[list[list[int]], list[int]]:
    work = [[x % p for x in r] for r in rows]
    work = [r for r in work if any(r)]
    pivots: list[int] = []
    top = 0
    for c in range(limit):
        if top == len(work):
            break
        hit = next((i for i in range(top, len(work)) if work[i][c]), None)
        if hit is None:
            continue
        work[top], work[hit] = work[hit], work[top]
        inv = pow(work[top][c], -1, p)
        prow = [x * inv % p for x in work[top]]
        work[top] = prow
        for i in range(len(work)):
            a = work[i][c]
            if i == top or not a:
                continue
            work[i] = [(x - a * y) % p for x, y in zip(work[i], prow)]
        pivots.append(c)
        top += 1
    return work[:top], pivots


def rref(rows: Sequence[Sequence[Scalar]], fld: FieldSpec, limit: int | None = None) -> tuple[list[list[Scalar]], list[int]]:
    """
    Reduced row echelon form of the given rows, pivots searched only in the first `limit`
    columns (row operations still act on the full width, so trailing columns can carry
    an augmented block). Returns only the pivot rows, each with pivot entry 1.
    """
    rows = list(rows)
    if not rows:
        return [], []
    width = len(rows[0])
    limit = width if limit is None else limit
    if fld.characteristic == 0:
        return _rref_rational(rows, limit)
    return _rref_modp(rows, limit, fld.characteristic)


def rank_kernel(m: Matrix) -> tuple[int, list[Vector]]:
    """Rank of m and a kernel basis (one vector per free column, 1 in that column)."""
    reduced, pivots = rref(m.entries, m.field, m.cols)
    fld = m.field
    pivot_set = set(pivots)
    kernel = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [fld.zero] * m.cols
        v[f] = fld.one
        for row, c in zip(reduced, pivots):
            if row[f]:
                v[c] = fld.element(-row[f])
        kernel.append(tuple(v))
    return len(pivots), kernel


def rank(m: Matrix) -> int:
    return len(rref(m.entries, m.field, m.cols)[1])


class EchelonBasis:
    """
    Incrementally grown echelon basis of a subspace of k^dim.
    add(v) keeps v's reduced form when v is new and reports whether it was.
    """

    def __init__(self, dim: int, fld: FieldSpec):
        self.dim = dim
        self.field = fld
        self._rows: list[tuple[int, list[Scalar]]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vector: Sequence[Scalar]) -> list[Scalar]:
        p = self.field.characteristic
        v = list(vector)
        for pivot, row in self._rows:
            a = v[pivot]
            if not a:
                continue
            if p:
                v = [(x - a * y) % p for x, y in zip(v, row)]
            else:
                v = [x - a * y if y else x for x, y in zip(v, row)]
        return v

    def contains(self, vector: Sequence[Scalar]) -> bool:
        return not any(self.reduce(vector))

    def add(self, vector: Sequence[Scalar]) -> bool:
        v = self.reduce(vector)
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        inv = self.field.inv(v[pivot])
        if self.field.characteristic:
            row = [x * inv % self.field.characteristic for x in v]
        else:
            row = [x * inv for x in v]
        self._rows.append((pivot, row))
        return True


class SpanSolver:
    """
    Coordinates with respect to a fixed list of linearly independent vectors.
    Built once by reducing [V | I]; each solve is then a pivot lookup.
    """

    def __init__(self, vectors: Sequence[Sequence[Scalar]], dim: int, fld: FieldSpec):
        self.field = fld
        self.dim = dim
        self.size = len(vectors)
        z, o = fld.zero, fld.one
        augmented = [
            list(v) + [o if j == i else z for j in range(self.size)]
            for i, v in enumerate(vectors)
        ]
        reduced, pivots = rref(augmented, fld, dim)
        if len(pivots) != self.size:
            raise InvariantError("SpanSolver needs linearly independent vectors")
        self._pivots = pivots
        self._left = [r[:dim] for r in reduced]
        self._transform = [r[dim:] for r in reduced]

    def solve(self, vector: Sequence[Scalar]) -> Vector | None:
        """x with Σ x_i v_i = vector, or None when vector is outside the span."""
        p = self.field.characteristic
        coeffs = [vector[c] for c in self._pivots]
        residual = list(vector)
        for a, row in zip(coeffs, self._left):
            if a:
                residual = [x - a * y for x, y in zip(residual, row)]
        if any((x % p) if p else x for x in residual):
            return None
        out = [self.field.zero] * self.size
        for a, trow in zip(coeffs, self._transform):
            if a:
                out = [x + a * t for x, t in zip(out, trow)]
        if p:
            return tuple(x % p for x in out)
        return tuple(Fraction(x) for x in out)


# ---------------------------------------------------------------------------
# Chain complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainComplexVS:
    """
    0 <- C_0 <- C_1 <- ... <- C_L of finite-dimensional vector spaces.
    differentials[t - 1] is d_t: C_t -> C_{t-1}, shape (terms[t-1], terms[t]).
    """

    terms: tuple[int, ...]
    differentials: tuple[Matrix, ...]
    field: FieldSpec = field(default_factory=FieldSpec)

    def d(self, t: int) -> Matrix | None:
        if 1 <= t < len(self.terms):
            return self.differentials[t - 1]
        return None

    def validate(self) -> None:
        if len(self.differentials) != max(len(self.terms) - 1, 0):
            raise InvariantError("chain complex needs one differential between consecutive terms")
        for t in range(1, len(self.terms)):
            d = self.d(t)
            if d.shape != (self.terms[t - 1], self.terms[t]):
                raise InvariantError(f"d_{t} has shape {d.shape}, expected {(self.terms[t - 1], self.terms[t])}")
        for t in range(1, len(self.terms) - 1):
            if not (self.d(t) @ self.d(t + 1)).is_zero():
                raise InvariantError(f"d_{t} ∘ d_{t + 1} != 0")

    def euler_characteristic(self) -> int:
        return sum((-1) ** t * dim for t, dim in enumerate(self.terms))


@dataclass
class HomologyData:
    """
    H_t of a chain complex with a chosen basis of representative cycles and the
    projection taking any cycle to its coordinates in that basis.
    """

    degree: int
    dim: int
    ambient: int
    representatives: list[Vector]
    _solver: SpanSolver | None
    _n_boundary: int

    def project(self, cycle: Sequence[Scalar]) -> Vector:
        if self.dim == 0:
            return ()
        coords = self._solver.solve(cycle)
        if coords is None:
            raise InvariantError(f"vector projected to H_{self.degree} is not a cycle")
        return coords[self._n_boundary:]


def _unit_vectors(n: int, fld: FieldSpec) -> list[Vector]:
    z, o = fld.zero, fld.one
    return [tuple(o if j == i else z for j in range(n)) for i in range(n)]


def homology_with_projection(complex_: ChainComplexVS, validate: bool = True) -> list[HomologyData]:
    """Homology in every degree, with representatives and projections."""
    if validate:
        complex_.validate()
    fld = complex_.field
    out = []
    for t, dim in enumerate(complex_.terms):
        d_out = complex_.d(t)
        cycles = rank_kernel(d_out)[1] if d_out is not None else _unit_vectors(dim, fld)
        d_in = complex_.d(t + 1)
        basis = EchelonBasis(dim, fld)
        boundary = []
        if d_in is not None:
            for col in d_in.columns():
                if basis.add(col):
                    boundary.append(col)
        reps = [z for z in cycles if basis.add(z)]
        solver = SpanSolver(boundary + reps, dim, fld) if reps else None
        out.append(HomologyData(t, len(reps), dim, reps, solver, len(boundary)))
    euler = sum((-1) ** h.degree * h.dim for h in out)
    if euler != complex_.euler_characteristic():
        raise InvariantError("Euler characteristic of homology disagrees with the chain complex")
    return out


def cochain_as_chain(terms: Sequence[int], codifferentials: Sequence[Matrix], fld: FieldSpec) -> ChainComplexVS:
    """
    Re-index a cochain complex C^0 -> C^1 -> ... -> C^L (codifferentials[t] : C^t -> C^{t+1})
    as a chain complex with C_k = C^{L-k}, so that H_k = H^{L-k}.
    """
    last = len(terms) - 1
    chain_terms = tuple(terms[last - k] for k in range(last + 1))
    diffs = tuple(codifferentials[last - k] for k in range(1, last + 1))
    return ChainComplexVS(chain_terms, diffs, fld)


def vectors_equal(a: Iterable[Scalar], b: Iterable[Scalar]) -> bool:
    return all(x == y for x, y in zip(a, b))


def homology_dims(complex_: ChainComplexVS) -> list[int]:
    """dim H_t for every t, from ranks alone (no representatives)."""
    ranks = [0] + [rank(d) for d in complex_.differentials] + [0]
    return [dim - ranks[t] - ranks[t + 1] for t, dim in enumerate(complex_.terms)]
