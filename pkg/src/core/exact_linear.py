"""
Exact rational linear algebra.

Vectors are tuples of Fraction and Matrix is an immutable row-major grid.
Row reduction, determinants, inverses and characteristic polynomials run on
sympy's DomainMatrix over QQ; values cross this module's boundary as Fraction.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Poly, QQ, Rational, Symbol
from sympy.polys.matrices import DomainMatrix

from src.core.errors import (
    DimensionMismatchError,
    IrrationalSpectrumError,
    NikolayevskyError,
    SingularMatrixError,
)

logger = logging.getLogger(__name__)

Scalar = Union[int, str, Fraction, Rational]
Vector = Tuple[Fraction, ...]
SparseRow = Dict[int, Fraction]

X = Symbol("x")
ZERO = Fraction(0)
ONE = Fraction(1)

# Newton steps needed are logarithmic in the nilpotency index
_MAX_NEWTON_STEPS = 64


# =============================================================================
# SCALARS AND VECTORS
# =============================================================================

def to_fraction(value: Scalar) -> Fraction:
    """Coerce ints, 'p/q' strings, Fractions and sympy rationals to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(int(value.p), int(value.q))
    return Fraction(value)


def _to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


def _to_sympy(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def vector(values: Iterable[Scalar]) -> Vector:
    return tuple(to_fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, index: int) -> Vector:
    entries = [ZERO] * n
    entries[index] = ONE
    return tuple(entries)


def add_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatchError(f"cannot add vectors of length {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatchError(f"cannot subtract vectors of length {len(u)} and {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def scale_vector(c: Scalar, v: Sequence[Fraction]) -> Vector:
    c = to_fraction(c)
    return tuple(c * a for a in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatchError(f"cannot pair vectors of length {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return not any(v)


def sparse(v: Sequence[Fraction]) -> SparseRow:
    return {i: a for i, a in enumerate(v) if a}


def dense(row: Mapping[int, Fraction], n: int) -> Vector:
    entries = [ZERO] * n
    for i, a in row.items():
        entries[i] = a
    return tuple(entries)


def normalize_projective(v: Sequence[Fraction]) -> Vector:
    """Scale v so that its first nonzero coordinate is 1."""
    for a in v:
        if a:
            return tuple(b / a for b in v)
    return tuple(v)


# =============================================================================
# MATRIX
# =============================================================================

@dataclass(frozen=True)
class Matrix:
    """Immutable rational matrix, row-major."""

    rows: int
    cols: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatchError(
                f"entry grid does not match declared shape {self.rows}x{self.cols}"
            )

    # --- constructors ---

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None) -> "Matrix":
        grid = tuple(vector(r) for r in rows)
        width = cols if cols is not None else (len(grid[0]) if grid else 0)
        return cls(len(grid), width, grid)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int) -> "Matrix":
        cols = [vector(c) for c in columns]
        grid = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls(rows, len(cols), grid)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> "Matrix":
        values = vector(values)
        n = len(values)
        grid = tuple(
            tuple(values[i] if i == j else ZERO for j in range(n)) for i in range(n)
        )
        return cls(n, n, grid)

    @classmethod
    def from_sparse(cls, entries: Mapping[Tuple[int, int], Scalar], rows: int, cols: int) -> "Matrix":
        grid = [[ZERO] * cols for _ in range(rows)]
        for (i, j), value in entries.items():
            grid[i][j] = to_fraction(value)
        return cls(rows, cols, tuple(tuple(r) for r in grid))

    @classmethod
    def block_diagonal(cls, first: "Matrix", second: "Matrix") -> "Matrix":
        rows = first.rows + second.rows
        cols = first.cols + second.cols
        grid = [list(r) + [ZERO] * second.cols for r in first.entries]
        grid += [[ZERO] * first.cols + list(r) for r in second.entries]
        return cls(rows, cols, tuple(tuple(r) for r in grid))

    # --- access ---

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def sparse_row(self, i: int) -> SparseRow:
        return sparse(self.entries[i])

    def flatten(self) -> Vector:
        return tuple(a for r in self.entries for a in r)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def nonzero_entries(self) -> Dict[Tuple[int, int], Fraction]:
        return {
            (i, j): a for i, r in enumerate(self.entries) for j, a in enumerate(r) if a
        }

    # --- arithmetic ---

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                      tuple(() for _ in range(self.cols)))

    def _check_same_shape(self, other: "Matrix", op: str) -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(
                f"cannot {op} {self.rows}x{self.cols} and {other.rows}x{other.cols}"
            )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other, "add")
        return Matrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
        ))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other, "subtract")
        return Matrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
        ))

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "Matrix":
        c = to_fraction(c)
        return Matrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        grid = []
        for r in self.entries:
            acc = [ZERO] * other.cols
            for k, a in enumerate(r):
                if not a:
                    continue
                for j, b in enumerate(other.entries[k]):
                    if b:
                        acc[j] += a * b
            grid.append(tuple(acc))
        return Matrix(self.rows, other.cols, tuple(grid))

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatchError(
                f"cannot apply {self.rows}x{self.cols} matrix to vector of length {len(v)}"
            )
        return tuple(dot(r, v) for r in self.entries)

    def trace(self) -> Fraction:
        if not self.is_square:
            raise DimensionMismatchError("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), ZERO)

    def power(self, k: int) -> "Matrix":
        result = Matrix.identity(self.rows)
        for _ in range(k):
            result = result @ self
        return result

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    # --- sympy bridge ---

    def to_domain(self) -> DomainMatrix:
        grid = [[_to_qq(a) for a in r] for r in self.entries]
        return DomainMatrix(grid, (self.rows, self.cols), QQ)

    @classmethod
    def from_domain(cls, dm: DomainMatrix) -> "Matrix":
        rows, cols = dm.shape
        grid = tuple(tuple(_from_qq(a) for a in r) for r in dm.to_list())
        return cls(rows, cols, grid)

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.entries)


# =============================================================================
# ROW REDUCTION
# =============================================================================

def row_reduce(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> Tuple[List[SparseRow], Tuple[int, ...]]:
    """Reduced row-echelon form of sparse rows.

    Returns only the nonzero reduced rows together with their pivot columns.
    """
    dod = {}
    for row in rows:
        entries = {}
        for j, a in row.items():
            if not 0 <= j < ncols:
                raise DimensionMismatchError(f"column {j} outside 0..{ncols - 1}")
            if a:
                entries[j] = _to_qq(to_fraction(a))
        if entries:
            dod[len(dod)] = entries
    if not dod:
        return [], ()
    reduced, pivots = DomainMatrix(dod, (len(dod), ncols), QQ).rref()
    rep = reduced.to_sparse().rep
    out = [
        {j: _from_qq(a) for j, a in rep.get(r, {}).items() if a}
        for r in range(len(pivots))
    ]
    return out, tuple(pivots)


def kernel_basis(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> List[SparseRow]:
    """Sparse basis of the null space of the given sparse rows, one vector per free column."""
    reduced, pivots = row_reduce(rows, ncols)
    pivot_set = set(pivots)
    by_free: Dict[int, SparseRow] = {j: {j: ONE} for j in range(ncols) if j not in pivot_set}
    for row, p in zip(reduced, pivots):
        for j, a in row.items():
            if j != p:
                by_free[j][p] = -a
    return [by_free[j] for j in sorted(by_free)]


def rref(m: Matrix) -> Matrix:
    """Reduced row-echelon form, zero rows kept at the bottom."""
    reduced, _ = row_reduce((m.sparse_row(i) for i in range(m.rows)), m.cols)
    grid = [dense(r, m.cols) for r in reduced]
    grid += [zero_vector(m.cols)] * (m.rows - len(grid))
    return Matrix(m.rows, m.cols, tuple(grid))


def rank(m: Matrix) -> int:
    _, pivots = row_reduce((m.sparse_row(i) for i in range(m.rows)), m.cols)
    return len(pivots)


# =============================================================================
# SUBSPACE
# =============================================================================

@dataclass(frozen=True)
class Subspace:
    """Span inside Q^n stored as a canonical RREF basis.

    Equal subspaces have identical representations, so == and hash are
    subspace equality.
    """

    ambient_dim: int
    basis: Tuple[Vector, ...]
    pivots: Tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Scalar]], ambient_dim: int) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(
                    f"vector of length {len(v)} in ambient dimension {ambient_dim}"
                )
            rows.append(sparse(vector(v)))
        reduced, pivots = row_reduce(rows, ambient_dim)
        return cls(ambient_dim, tuple(dense(r, ambient_dim) for r in reduced), pivots)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)), tuple(range(n)))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls.span((unit_vector(n, i) for i in indices), n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix(self.dim, self.ambient_dim, self.basis)

    def reduce(self, v: Sequence[Fraction]) -> Vector:
        """Normal form of v modulo this subspace (zero at every pivot)."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError(
                f"vector of length {len(v)} in ambient dimension {self.ambient_dim}"
            )
        w = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = w[p]
            if c:
                for j, a in enumerate(row):
                    if a:
                        w[j] -= c * a
        return tuple(w)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return is_zero_vector(self.reduce(v))

    __contains__ = contains

    def coordinates(self, v: Sequence[Fraction]) -> Vector:
        """Coefficients of v in the RREF basis."""
        if not self.contains(v):
            raise ValueError("vector does not lie in the subspace")
        return tuple(v[p] for p in self.pivots)

    def is_subspace_of(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(b) for b in self.basis)

    def complement_indices(self) -> Tuple[int, ...]:
        """Non-pivot coordinates; their unit vectors span a complement."""
        pivot_set = set(self.pivots)
        return tuple(j for j in range(self.ambient_dim) if j not in pivot_set)

    def annihilator(self) -> "Subspace":
        """Vectors orthogonal to this subspace under the standard dot product."""
        return Subspace.span(
            (dense(k, self.ambient_dim) for k in kernel_basis(
                (sparse(b) for b in self.basis), self.ambient_dim)),
            self.ambient_dim,
        )

    def __add__(self, other: "Subspace") -> "Subspace":
        return sum_subspaces(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __str__(self) -> str:
        vectors = ", ".join("(" + ", ".join(str(a) for a in b) + ")" for b in self.basis)
        return f"span[{vectors}]"


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"subspaces live in dimensions {a.ambient_dim} and {b.ambient_dim}"
        )


def sum_subspaces(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(a.basis + b.basis, a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return sum_subspaces(a.annihilator(), b.annihilator()).annihilator()


def kernel(m: Matrix) -> Subspace:
    """Null space {x : m x = 0} inside Q^cols."""
    basis = kernel_basis((m.sparse_row(i) for i in range(m.rows)), m.cols)
    return Subspace.span((dense(v, m.cols) for v in basis), m.cols)


def image(m: Matrix) -> Subspace:
    """Column space inside Q^rows."""
    return Subspace.span((m.column(j) for j in range(m.cols)), m.rows)


def solve(m: Matrix, b: Sequence[Scalar]) -> Optional[Vector]:
    """Particular solution of m x = b with free variables zero, or None."""
    if len(b) != m.rows:
        raise DimensionMismatchError(
            f"right-hand side of length {len(b)} for a matrix with {m.rows} rows"
        )
    b = vector(b)
    augmented = []
    for i in range(m.rows):
        row = m.sparse_row(i)
        if b[i]:
            row[m.cols] = b[i]
        augmented.append(row)
    reduced, pivots = row_reduce(augmented, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [ZERO] * m.cols
    for row, p in zip(reduced, pivots):
        x[p] = row.get(m.cols, ZERO)
    return tuple(x)


def determinant(m: Matrix) -> Fraction:
    if not m.is_square:
        raise DimensionMismatchError("determinant of a non-square matrix")
    if m.rows == 0:
        return ONE
    return _from_qq(m.to_domain().det())


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise DimensionMismatchError("inverse of a non-square matrix")
    if m.rows == 0:
        return m
    dm = m.to_domain()
    if dm.det() == QQ.zero:
        raise SingularMatrixError(f"{m.rows}x{m.cols} matrix is singular")
    return Matrix.from_domain(dm.inv())


# =============================================================================
# POLYNOMIALS AND SPECTRA
# =============================================================================

def polynomial(coefficients: Sequence[Scalar]) -> Poly:
    """Polynomial in x over QQ from coefficients, highest degree first."""
    return Poly([_to_sympy(to_fraction(c)) for c in coefficients], X, domain=QQ)


def polynomial_coefficients(poly: Poly) -> Tuple[Fraction, ...]:
    return tuple(to_fraction(c) for c in poly.all_coeffs())


def is_squarefree(poly: Poly) -> bool:
    return poly.degree() <= 0 or poly.gcd(poly.diff()).degree() == 0


def characteristic_polynomial(m: Matrix) -> Poly:
    if not m.is_square:
        raise DimensionMismatchError("characteristic polynomial of a non-square matrix")
    if m.rows == 0:
        return polynomial([1])
    return polynomial([_from_qq(c) for c in m.to_domain().charpoly()])


def minimal_polynomial(m: Matrix) -> Poly:
    """Monic polynomial of least degree annihilating m.

    Found as the first linear dependence among I, m, m^2, ...
    """
    if not m.is_square:
        raise DimensionMismatchError("minimal polynomial of a non-square matrix")
    n = m.rows
    if n == 0:
        return polynomial([1])
    powers = [Matrix.identity(n)]
    current = powers[0]
    while True:
        current = current @ m
        span = Matrix.from_columns([p.flatten() for p in powers], n * n)
        coefficients = solve(span, current.flatten())
        if coefficients is not None:
            return polynomial([ONE] + [-c for c in reversed(coefficients)])
        powers.append(current)


def evaluate_polynomial(poly: Poly, m: Matrix) -> Matrix:
    """p(m) by Horner's rule."""
    return Matrix.from_domain(_evaluate_domain(poly, m.to_domain()))


def _evaluate_domain(poly: Poly, dm: DomainMatrix) -> DomainMatrix:
    n = dm.shape[0]
    eye = DomainMatrix.eye(n, QQ).to_dense()
    acc = DomainMatrix.zeros((n, n), QQ).to_dense()
    for c in poly.all_coeffs():
        acc = acc * dm + eye * QQ.from_sympy(c)
    return acc


def rational_eigenvalues(m: Matrix) -> List[Tuple[Fraction, int]]:
    """Eigenvalues with algebraic multiplicities, ascending.

    Raises IrrationalSpectrumError when the characteristic polynomial has
    an irreducible factor of degree above one.
    """
    if m.rows == 0:
        return []
    _, factors = characteristic_polynomial(m).factor_list()
    spectrum: Dict[Fraction, int] = {}
    for factor, multiplicity in factors:
        if factor.degree() != 1:
            raise IrrationalSpectrumError(f"irreducible factor {factor.as_expr()} of degree {factor.degree()}")
        a, b = factor.all_coeffs()
        root = -to_fraction(b) / to_fraction(a)
        spectrum[root] = spectrum.get(root, 0) + multiplicity
    return sorted(spectrum.items())


def eigenspace(m: Matrix, value: Scalar) -> Subspace:
    if not m.is_square:
        raise DimensionMismatchError("eigenspace of a non-square matrix")
    return kernel(m - Matrix.identity(m.rows).scale(value))


def semisimple_part(m: Matrix) -> Matrix:
    """Semisimple part of the Jordan-Chevalley decomposition over QQ.

    Newton iteration S <- S - p(S) p'(S)^-1 on the squarefree part p of the
    characteristic polynomial; it stops once p(S) = 0.
    """
    if not m.is_square:
        raise DimensionMismatchError("semisimple part of a non-square matrix")
    if m.rows == 0:
        return m
    p = characteristic_polynomial(m).sqf_part()
    dp = p.diff()
    s = m.to_domain().to_dense()
    for step in range(_MAX_NEWTON_STEPS):
        residue = _evaluate_domain(p, s)
        if Matrix.from_domain(residue).is_zero():
            logger.debug(f"semisimple part converged after {step} Newton steps")
            return Matrix.from_domain(s)
        s = s - residue * _evaluate_domain(dp, s).inv()
    raise NikolayevskyError("Newton iteration for the semisimple part did not converge")
