"""
Derivations of a Lie algebra.

Der(g) is the kernel of the Leibniz system
    D[e_i, e_j] = [D e_i, e_j] + [e_i, D e_j]
in the n^2 unknowns D_ab (the e_a coefficient of D e_b), solved sparsely.
The Nikolayevsky (pre-Einstein) derivation is the semisimple N in Der(g)
with Tr(N D) = Tr(D) for every derivation D.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.core.errors import DimensionMismatchError, NikolayevskyError, NotADerivationError
from src.core.exact_linear import (
    ZERO,
    Matrix,
    SparseRow,
    Subspace,
    Vector,
    eigenspace,
    kernel_basis,
    minimal_polynomial,
    is_squarefree,
    rational_eigenvalues,
    semisimple_part,
    solve,
    sub_vectors,
)
from src.core.lie_algebra import LieAlgebra, GradedLieAlgebra
from src.models.checks import CheckResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearEndo:
    """An endomorphism of the underlying vector space of an algebra."""

    algebra: LieAlgebra
    matrix: Matrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.algebra.dim, self.algebra.dim):
            raise DimensionMismatchError(
                f"{self.matrix.rows}x{self.matrix.cols} matrix on a {self.algebra.dim}-dimensional algebra"
            )

    __hash__ = None

    @classmethod
    def zero(cls, g: LieAlgebra) -> "LinearEndo":
        return cls(g, Matrix.zeros(g.dim, g.dim))

    @classmethod
    def identity(cls, g: LieAlgebra) -> "LinearEndo":
        return cls(g, Matrix.identity(g.dim))

    @classmethod
    def ad(cls, g: LieAlgebra, x: Sequence[Fraction]) -> "LinearEndo":
        return cls(g, g.ad(x))

    @classmethod
    def from_images(cls, g: LieAlgebra, images: Dict[int, Sequence[Fraction]]) -> "LinearEndo":
        """Map e_j to images[j]; unlisted basis elements go to 0."""
        columns = [tuple(images[j]) if j in images else (ZERO,) * g.dim for j in range(g.dim)]
        return cls(g, Matrix.from_columns(columns, g.dim))

    def apply(self, v: Sequence[Fraction]) -> Vector:
        return self.matrix.apply(v)

    def __add__(self, other: "LinearEndo") -> "LinearEndo":
        return LinearEndo(self.algebra, self.matrix + other.matrix)

    def __sub__(self, other: "LinearEndo") -> "LinearEndo":
        return LinearEndo(self.algebra, self.matrix - other.matrix)

    def __matmul__(self, other: "LinearEndo") -> "LinearEndo":
        return LinearEndo(self.algebra, self.matrix @ other.matrix)

    def scale(self, c) -> "LinearEndo":
        return LinearEndo(self.algebra, self.matrix.scale(c))

    def commutator(self, other: "LinearEndo") -> "LinearEndo":
        return LinearEndo(self.algebra, self.matrix.commutator(other.matrix))

    def trace(self) -> Fraction:
        return self.matrix.trace()

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


@dataclass(frozen=True)
class NikolayevskyResult:
    """Nikolayevsky derivation with its rational eigenstructure."""

    endo: LinearEndo
    eigenvalues: Tuple[Tuple[Fraction, int], ...]
    eigenspaces: Tuple[Subspace, ...]
    method: str = "trace-system"

    __hash__ = None

    @property
    def multiset(self) -> Tuple[Fraction, ...]:
        """Eigenvalues repeated by multiplicity, ascending."""
        return tuple(value for value, mult in self.eigenvalues for _ in range(mult))

    @property
    def diagonal(self) -> Tuple[Fraction, ...]:
        """Diagonal in the given basis when the derivation is diagonal there, else the multiset."""
        m = self.endo.matrix
        if all(i == j for i, j in m.nonzero_entries()):
            return tuple(m[i, i] for i in range(m.rows))
        return self.multiset


# =============================================================================
# DERIVATION SPACE
# =============================================================================

def _bracket_table(g: LieAlgebra) -> List[List[SparseRow]]:
    return [[g.basis_bracket(i, j) for j in range(g.dim)] for i in range(g.dim)]


def _add(row: Dict[int, Fraction], index: int, value: Fraction) -> None:
    total = row.get(index, ZERO) + value
    if total:
        row[index] = total
    else:
        row.pop(index, None)


def leibniz_system(g: LieAlgebra) -> List[SparseRow]:
    """Sparse rows of the Leibniz equations over unknowns D_ab at index a*n + b."""
    n = g.dim
    table = _bracket_table(g)
    rows: List[SparseRow] = []
    for i in range(n):
        for j in range(i + 1, n):
            by_k: Dict[int, Dict[int, Fraction]] = {}
            for l, c in table[i][j].items():
                for k in range(n):
                    _add(by_k.setdefault(k, {}), k * n + l, c)
            for a in range(n):
                for k, c in table[a][j].items():
                    _add(by_k.setdefault(k, {}), a * n + i, -c)
                for k, c in table[i][a].items():
                    _add(by_k.setdefault(k, {}), a * n + j, -c)
            rows.extend(r for r in by_k.values() if r)
    return rows


def _endo_from_sparse(g: LieAlgebra, entries: SparseRow) -> LinearEndo:
    cells = {divmod(index, g.dim): value for index, value in entries.items()}
    return LinearEndo(g, Matrix.from_sparse(cells, g.dim, g.dim))


def derivation_basis_sparse(g: LieAlgebra) -> List[SparseRow]:
    """Basis of Der(g) as sparse flattened matrices."""
    basis = kernel_basis(leibniz_system(g), g.dim * g.dim)
    logger.debug(f"Der({g.name or 'g'}) has dimension {len(basis)}")
    return basis


def derivation_space(g: LieAlgebra) -> List[LinearEndo]:
    """Basis of the derivation algebra."""
    return [_endo_from_sparse(g, d) for d in derivation_basis_sparse(g)]


def is_derivation(g: LieAlgebra, d: LinearEndo) -> CheckResult:
    """Check the Leibniz rule on basis pairs."""
    images = [d.matrix.column(j) for j in range(g.dim)]
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = d.apply(g.bracket(g.basis_vector(i), g.basis_vector(j)))
            rhs = tuple(
                a + b for a, b in zip(
                    g.bracket(images[i], g.basis_vector(j)),
                    g.bracket(g.basis_vector(i), images[j]),
                )
            )
            if lhs != rhs:
                return CheckResult.failed(
                    f"Leibniz rule fails on ({g.labels[i]}, {g.labels[j]})",
                    pair=(g.labels[i], g.labels[j]),
                    defect=sub_vectors(lhs, rhs),
                )
    return CheckResult.passed("map is a derivation")


def require_derivation(g: LieAlgebra, d: LinearEndo) -> None:
    result = is_derivation(g, d)
    if not result:
        raise NotADerivationError(result.message)


def inner_derivations(g: LieAlgebra) -> Subspace:
    """Span of ad e_i as flattened matrices."""
    return Subspace.span((g.ad_basis(i).flatten() for i in range(g.dim)), g.dim * g.dim)


def is_inner(g: LieAlgebra, d: LinearEndo) -> bool:
    """Whether a derivation is ad X for some X.

    Raises:
        NotADerivationError: If d is not a derivation.
    """
    require_derivation(g, d)
    return inner_derivations(g).contains(d.matrix.flatten())


# =============================================================================
# NIKOLAYEVSKY DERIVATION
# =============================================================================

def _sparse_trace(d: SparseRow, n: int) -> Fraction:
    return sum((v for index, v in d.items() if index // n == index % n), ZERO)


def _sparse_trace_product(a: SparseRow, b: SparseRow, n: int) -> Fraction:
    """Tr(AB) = sum over (r, c) of A_rc B_cr."""
    total = ZERO
    for index, value in a.items():
        r, c = divmod(index, n)
        other = b.get(c * n + r)
        if other:
            total += value * other
    return total


def trace_identity_check(
    g: LieAlgebra,
    n_endo: LinearEndo,
    basis: Optional[List[SparseRow]] = None,
) -> CheckResult:
    """Check Tr(N D_b) = Tr(D_b) for every basis derivation D_b.

    Raises:
        NotADerivationError: If N is not a derivation.
    """
    require_derivation(g, n_endo)
    if basis is None:
        basis = derivation_basis_sparse(g)
    n = g.dim
    flat = {i: v for i, v in enumerate(n_endo.matrix.flatten()) if v}
    for index, d in enumerate(basis):
        lhs = _sparse_trace_product(flat, d, n)
        rhs = _sparse_trace(d, n)
        if lhs != rhs:
            return CheckResult.failed(
                f"Tr(N D) = {lhs} but Tr(D) = {rhs} for basis derivation {index}",
                derivation=index,
                lhs=lhs,
                rhs=rhs,
            )
    return CheckResult.passed("trace identity holds on a basis of Der")


def _diagonal_candidate(g: LieAlgebra, basis: List[SparseRow]) -> Optional[Vector]:
    """Diagonal derivation satisfying the trace system, if one exists."""
    n = g.dim
    rows: List[Vector] = []
    rhs: List[Fraction] = []
    for i, j, row in g.nonzero_brackets():
        for k in row:
            equation = [ZERO] * n
            equation[k] += 1
            equation[i] -= 1
            equation[j] -= 1
            rows.append(tuple(equation))
            rhs.append(ZERO)
    for d in basis:
        equation = [ZERO] * n
        for index, value in d.items():
            r, c = divmod(index, n)
            if r == c:
                equation[r] = value
        rows.append(tuple(equation))
        rhs.append(_sparse_trace(d, n))
    if not rows:
        return None
    return solve(Matrix.from_rows(rows, n), rhs)


def _trace_system_candidate(g: LieAlgebra, basis: List[SparseRow]) -> Matrix:
    n = g.dim
    gram = [[_sparse_trace_product(a, b, n) for b in basis] for a in basis]
    rhs = [_sparse_trace(d, n) for d in basis]
    coefficients = solve(Matrix.from_rows(gram, len(basis)), rhs)
    if coefficients is None:
        raise NikolayevskyError("the trace system Tr(N D) = Tr(D) has no solution in Der")
    combined: Dict[int, Fraction] = {}
    for x, d in zip(coefficients, basis):
        if x:
            for index, value in d.items():
                _add(combined, index, x * value)
    return _endo_from_sparse(g, combined).matrix


def nikolayevsky(g: LieAlgebra) -> NikolayevskyResult:
    """Compute the Nikolayevsky derivation and its eigenstructure.

    A diagonal solution in the given basis is tried first; otherwise the
    particular solution of the trace system is made semisimple. The result is
    re-verified either way.

    Raises:
        NikolayevskyError: If no rational semisimple solution is found.
    """
    basis = derivation_basis_sparse(g)
    if not basis:
        raise NikolayevskyError("derivation algebra is zero")
    diagonal = _diagonal_candidate(g, basis)
    if diagonal is not None:
        matrix = Matrix.diagonal(diagonal)
        method = "diagonal"
    else:
        matrix = semisimple_part(_trace_system_candidate(g, basis))
        method = "trace-system"
    endo = LinearEndo(g, matrix)

    if not is_derivation(g, endo):
        raise NikolayevskyError("candidate is not a derivation")
    check = trace_identity_check(g, endo, basis)
    if not check:
        raise NikolayevskyError(f"candidate fails the trace identity: {check.message}")
    if not is_squarefree(minimal_polynomial(matrix)):
        raise NikolayevskyError("candidate is not semisimple")

    spectrum = rational_eigenvalues(matrix)
    spaces = tuple(eigenspace(matrix, value) for value, _ in spectrum)
    if sum(s.dim for s in spaces) != g.dim:
        raise NikolayevskyError("eigenspaces do not span the algebra")
    logger.info(f"Nikolayevsky derivation of {g.name or 'algebra'} found by {method}: "
                f"{len(spectrum)} distinct eigenvalues")
    return NikolayevskyResult(endo=endo, eigenvalues=tuple(spectrum), eigenspaces=spaces, method=method)


def eigenspace_grading_check(g: LieAlgebra, result: NikolayevskyResult) -> CheckResult:
    """Check [E_a, E_b] lies in E_{a+b} (zero when a + b is not an eigenvalue)."""
    by_value = {value: space for (value, _), space in zip(result.eigenvalues, result.eigenspaces)}
    zero = Subspace.zero(g.dim)
    for a, sa in by_value.items():
        for b, sb in by_value.items():
            target = by_value.get(a + b, zero)
            for u in sa.basis:
                for v in sb.basis:
                    if not target.contains(g.bracket(u, v)):
                        return CheckResult.failed(
                            f"[E_{a}, E_{b}] is not contained in E_{a + b}",
                            eigenvalues=(a, b),
                        )
    return CheckResult.passed("eigenspaces grade the bracket")


def grading_derivation(graded: GradedLieAlgebra) -> LinearEndo:
    """The map acting as k on the layer of degree k."""
    return LinearEndo(graded.algebra, graded.degree_matrix())
