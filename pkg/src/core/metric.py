"""
Symmetric bilinear forms on Lie algebras.

Terms follow the usual notation: c e^i (.) e^j with i != j sets both
gram[i][j] and gram[j][i] to c, and c e^i (x) e^i sets gram[i][i] to c.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Tuple

from src.core.derivations import LinearEndo
from src.core.errors import DegenerateFormError, DimensionMismatchError
from src.core.exact_linear import (
    ZERO,
    Matrix,
    Subspace,
    characteristic_polynomial,
    determinant,
    dot,
    intersect,
    inverse,
    polynomial_coefficients,
    to_fraction,
)
from src.core.lie_algebra import LieAlgebra
from src.models.checks import CheckResult

logger = logging.getLogger(__name__)

Term = Tuple[int, int, object]


@dataclass(frozen=True)
class BilinearForm:
    """Symmetric bilinear form given by its Gram matrix."""

    algebra: LieAlgebra
    gram: Matrix

    def __post_init__(self):
        if (self.gram.rows, self.gram.cols) != (self.algebra.dim, self.algebra.dim):
            raise DimensionMismatchError(
                f"{self.gram.rows}x{self.gram.cols} Gram matrix on a {self.algebra.dim}-dimensional algebra"
            )
        if self.gram != self.gram.transpose():
            raise ValueError("Gram matrix is not symmetric")

    __hash__ = None

    @classmethod
    def from_terms(cls, algebra: LieAlgebra, terms: Iterable[Term]) -> "BilinearForm":
        """Build a form from (i, j, c) terms with 0-based indices.

        Repeated terms on the same pair accumulate.
        """
        grid = [[ZERO] * algebra.dim for _ in range(algebra.dim)]
        for i, j, c in terms:
            if not (0 <= i < algebra.dim and 0 <= j < algebra.dim):
                raise DimensionMismatchError(f"term e{i + 1}, e{j + 1} outside dimension {algebra.dim}")
            c = to_fraction(c)
            grid[i][j] += c
            if i != j:
                grid[j][i] += c
        return cls(algebra, Matrix.from_rows(grid, algebra.dim))

    @cached_property
    def nondegenerate(self) -> bool:
        return determinant(self.gram) != 0

    def value(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        return dot(x, self.gram.apply(y))

    def require_nondegenerate(self) -> None:
        if not self.nondegenerate:
            raise DegenerateFormError("the bilinear form is degenerate")

    def terms(self) -> Tuple[Tuple[int, int, Fraction], ...]:
        """Nonzero (i, j, c) with i <= j."""
        return tuple(
            (i, j, self.gram[i, j])
            for i in range(self.gram.rows)
            for j in range(i, self.gram.cols)
            if self.gram[i, j]
        )


def is_ad_invariant(form: BilinearForm) -> CheckResult:
    """Check B([x, y], z) + B(y, [x, z]) = 0 on basis triples."""
    g = form.algebra
    for x in range(g.dim):
        ad_x = g.ad_basis(x)
        # entry (y, z) is B([x, y], z) + B(y, [x, z])
        defect = ad_x.transpose() @ form.gram + form.gram @ ad_x
        for (y, z), total in sorted(defect.nonzero_entries().items()):
            return CheckResult.failed(
                f"B([{g.labels[x]}, {g.labels[y]}], {g.labels[z]}) + "
                f"B({g.labels[y]}, [{g.labels[x]}, {g.labels[z]}]) = {total}",
                triple=(g.labels[x], g.labels[y], g.labels[z]),
                defect=total,
            )
    return CheckResult.passed("form is ad-invariant")


def orth_complement(form: BilinearForm, s: Subspace) -> Subspace:
    """S^perp with respect to a nondegenerate form."""
    form.require_nondegenerate()
    return Subspace.span((form.gram.apply(v) for v in s.basis), form.algebra.dim).annihilator()


def restrict(form: BilinearForm, s: Subspace) -> Matrix:
    """Gram matrix of the form on the RREF basis of S."""
    return Matrix.from_rows(
        [[form.value(u, v) for v in s.basis] for u in s.basis], s.dim
    )


def is_nondegenerate_on(form: BilinearForm, s: Subspace) -> bool:
    if s.dim == 0:
        return True
    return determinant(restrict(form, s)) != 0


def is_isotropic(form: BilinearForm, s: Subspace) -> bool:
    return restrict(form, s).is_zero()


def _matrix_of(endo) -> Matrix:
    return endo.matrix if isinstance(endo, LinearEndo) else endo


def metric_adjoint(form: BilinearForm, endo: LinearEndo) -> LinearEndo:
    """S* with B(Sx, y) = B(x, S*y), that is G^-1 S^T G."""
    form.require_nondegenerate()
    matrix = _matrix_of(endo)
    adjoint = inverse(form.gram) @ matrix.transpose() @ form.gram
    return LinearEndo(form.algebra, adjoint)


def is_skew(form: BilinearForm, endo: LinearEndo) -> bool:
    """B(Dx, y) = -B(x, Dy), that is D^T G + G D = 0."""
    matrix = _matrix_of(endo)
    return (matrix.transpose() @ form.gram + form.gram @ matrix).is_zero()


def _sign_changes(coefficients: Sequence[Fraction]) -> int:
    signs = [c > 0 for c in coefficients if c]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signature(form: BilinearForm) -> Tuple[int, int, int]:
    """(positive, negative, null) counts of the form over the reals.

    The characteristic polynomial of a symmetric matrix has only real roots, so
    Descartes' rule of signs counts them exactly.
    """
    coefficients = list(polynomial_coefficients(characteristic_polynomial(form.gram)))
    null = 0
    while coefficients and coefficients[-1] == 0:
        coefficients.pop()
        null += 1
    degree = len(coefficients) - 1
    positive = _sign_changes(coefficients)
    reflected = [c if (degree - power) % 2 == 0 else -c for power, c in enumerate(coefficients)]
    negative = _sign_changes(reflected)
    return positive, negative, null


def neutral_gram(n: int) -> Matrix:
    """Neutral form v^1 (.) w^1 + ... + v^n (.) w^n on the basis v_1..v_n, w_1..w_n."""
    cells = {}
    for i in range(n):
        cells[(i, n + i)] = 1
        cells[(n + i, i)] = 1
    return Matrix.from_sparse(cells, 2 * n, 2 * n)


def center_is_derived_perp(form: BilinearForm, center_space: Subspace, derived_space: Subspace) -> bool:
    """z(g) = (g')^perp for an ad-invariant nondegenerate form."""
    return orth_complement(form, derived_space) == center_space


def radical(form: BilinearForm, s: Subspace) -> Subspace:
    """S & S^perp, the radical of the form restricted to S."""
    return intersect(s, orth_complement(form, s))
