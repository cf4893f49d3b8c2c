"""
Metric Lie algebra constructions.

- Double extension of (h, h) by a skew derivation D: basis (h, e, z),
  [X, Y] = [X, Y]_h + h(DX, Y) z, [e, X] = DX, g(z, e) = 1.
- Single extension by a rank-two skew derivation: basis (h, U),
  [X, Y] = [X, Y]_h + h(DX, Y) U, [U, X] = DX, g(U, U) = 1.
- Cotangent g + g* with [X, a] = -a o ad X and the pairing metric.
- Central extension by a closed 2-form, orthogonal direct sums, and the
  mirage conditions M1-M5 for an inclusion of metric algebras.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from src.core.derivations import LinearEndo, is_derivation, is_inner
from src.core.errors import (
    DegenerateFormError,
    DimensionMismatchError,
    NotACocycleError,
    NotADerivationError,
    NotAdInvariantError,
    NotSkewError,
    RankError,
)
from src.core.exact_linear import ONE, ZERO, Matrix, Subspace, image, rank, sparse
from src.core.lie_algebra import (
    LieAlgebra,
    abelian,
    bracket_into,
    bracket_subspaces,
    center,
    centralizer,
    default_labels,
    derived,
    derived_algebra,
    direct_sum,
    ideal_generated,
)
from src.core.metric import (
    BilinearForm,
    is_ad_invariant,
    is_skew,
    neutral_gram,
    orth_complement,
)
from src.models.checks import CheckResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricLieAlgebra:
    """A Lie algebra with a nondegenerate ad-invariant metric."""

    algebra: LieAlgebra
    metric: BilinearForm

    def __post_init__(self):
        if self.metric.algebra.dim != self.algebra.dim:
            raise DimensionMismatchError("metric and algebra dimensions differ")
        if not self.metric.nondegenerate:
            raise DegenerateFormError(f"metric on {self.algebra.name or 'algebra'} is degenerate")
        result = is_ad_invariant(self.metric)
        if not result:
            raise NotAdInvariantError(result.message)

    __hash__ = None

    @classmethod
    def from_gram(cls, algebra: LieAlgebra, gram: Matrix) -> "MetricLieAlgebra":
        return cls(algebra, BilinearForm(algebra, gram))

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def name(self) -> str:
        return self.algebra.name


def _embed(matrix: Matrix, dim: int) -> Matrix:
    """Extend a square matrix by zero rows and columns to size dim."""
    cells = matrix.nonzero_entries()
    return Matrix.from_sparse(cells, dim, dim)


def _require_skew_derivation(hm: MetricLieAlgebra, d: LinearEndo) -> None:
    if d.matrix.rows != hm.dim:
        raise DimensionMismatchError(f"{d.matrix.rows}x{d.matrix.cols} map on a {hm.dim}-dimensional algebra")
    if not is_skew(hm.metric, d):
        raise NotSkewError("map is not skew-symmetric for the metric")
    result = is_derivation(hm.algebra, d)
    if not result:
        raise NotADerivationError(result.message)


def _extension_brackets(hm: MetricLieAlgebra, d: LinearEndo, new_index: int, acting_index: int) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
    """Brackets [X, Y]_h + h(DX, Y) e_new and [e_acting, X] = DX."""
    g = hm.algebra
    n = g.dim
    pairing = d.matrix.transpose() @ hm.metric.gram  # entry (i, j) = h(D e_i, e_j)
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            row = g.basis_bracket(i, j)
            if pairing[i, j]:
                row[new_index] = row.get(new_index, ZERO) + pairing[i, j]
            row = {k: a for k, a in row.items() if a}
            if row:
                brackets[(i, j)] = row
    for j in range(n):
        column = sparse(d.matrix.column(j))
        if column:
            brackets[(acting_index, j)] = column
    return brackets


def double_extension(hm: MetricLieAlgebra, d: LinearEndo, name: str = "") -> MetricLieAlgebra:
    """Double extension by a skew derivation, basis order (h-basis, e, z).

    Raises:
        NotSkewError: If D is not skew-symmetric.
        NotADerivationError: If D is not a derivation.
    """
    _require_skew_derivation(hm, d)
    n = hm.dim
    e, z = n, n + 1
    brackets = _extension_brackets(hm, d, new_index=z, acting_index=e)
    algebra = LieAlgebra.from_brackets(n + 2, brackets, labels=default_labels(n + 2), name=name)
    cells = dict(hm.metric.gram.nonzero_entries())
    cells[(e, z)] = ONE
    cells[(z, e)] = ONE
    gram = Matrix.from_sparse(cells, n + 2, n + 2)
    logger.info(f"double extension of {hm.name or 'metric algebra'} (dim {n}) by a derivation of rank {rank(d.matrix)}")
    return MetricLieAlgebra.from_gram(algebra, gram)


def single_extension(hm: MetricLieAlgebra, d: LinearEndo, name: str = "") -> MetricLieAlgebra:
    """Single extension by a rank-two skew derivation, basis order (h-basis, U).

    Raises:
        RankError: If rank(D) != 2.
        NotSkewError: If D is not skew-symmetric.
        NotADerivationError: If D is not a derivation.
    """
    r = rank(d.matrix)
    if r != 2:
        raise RankError(f"single extension needs a rank-two derivation, got rank {r}")
    _require_skew_derivation(hm, d)
    n = hm.dim
    u = n
    brackets = _extension_brackets(hm, d, new_index=u, acting_index=u)
    algebra = LieAlgebra.from_brackets(n + 1, brackets, labels=default_labels(n + 1), name=name)
    cells = dict(hm.metric.gram.nonzero_entries())
    cells[(u, u)] = ONE
    gram = Matrix.from_sparse(cells, n + 1, n + 1)
    logger.info(f"single extension of {hm.name or 'metric algebra'} (dim {n})")
    return MetricLieAlgebra.from_gram(algebra, gram)


def single_extension_identities(base: MetricLieAlgebra, extension: MetricLieAlgebra) -> CheckResult:
    """Check g' = h' + <U> and z(g) = z(h) for a single extension g of h.

    The identities hold when the image of the derivation lies in h''.
    """
    n = base.dim

    def lift(v):
        return tuple(v) + (ZERO,)

    expected_derived = Subspace.span(
        [lift(v) for v in derived_algebra(base.algebra).basis] + [tuple([ZERO] * n + [ONE])], n + 1
    )
    expected_center = Subspace.span([lift(v) for v in center(base.algebra).basis], n + 1)
    if derived_algebra(extension.algebra) != expected_derived:
        return CheckResult.failed("derived algebra is not h' + <U>")
    if center(extension.algebra) != expected_center:
        return CheckResult.failed("center differs from the center of h")
    return CheckResult.passed("g' = h' + <U> and z(g) = z(h)")


def cotangent(g: LieAlgebra, name: str = "") -> MetricLieAlgebra:
    """T*g with basis (e_1..e_n, e^1..e^n) and the pairing metric."""
    n = g.dim
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {
        key: dict(row) for key, row in g.brackets.items()
    }
    # [e_i, e^k] = -sum_j c_ij^k e^j
    for i in range(n):
        for j in range(n):
            for k, c in g.basis_bracket(i, j).items():
                row = brackets.setdefault((i, n + k), {})
                value = row.get(n + j, ZERO) - c
                if value:
                    row[n + j] = value
                else:
                    row.pop(n + j, None)
    brackets = {key: row for key, row in brackets.items() if row}
    labels = tuple(g.labels) + tuple(f"{label}*" for label in g.labels)
    algebra = LieAlgebra.from_brackets(2 * n, brackets, labels=labels, name=name or f"T*{g.name}")
    cells = {}
    for i in range(n):
        cells[(i, n + i)] = ONE
        cells[(n + i, i)] = ONE
    return MetricLieAlgebra.from_gram(algebra, Matrix.from_sparse(cells, 2 * n, 2 * n))


def cotangent_projection(n: int) -> Matrix:
    """Projection P of T*g onto g*."""
    return Matrix.diagonal([ZERO] * n + [ONE] * n)


def is_cocycle(g: LieAlgebra, omega: Matrix) -> CheckResult:
    """Check w([x, y], z) + w([y, z], x) + w([z, x], y) = 0 on basis triples."""
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = ZERO
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    for l, coeff in g.basis_bracket(a, b).items():
                        total += coeff * omega[l, c]
                if total:
                    return CheckResult.failed(
                        f"d omega does not vanish on ({g.labels[i]}, {g.labels[j]}, {g.labels[k]})",
                        triple=(g.labels[i], g.labels[j], g.labels[k]),
                        defect=total,
                    )
    return CheckResult.passed("2-form is closed")


def central_extension(g: LieAlgebra, omega: Matrix, name: str = "") -> LieAlgebra:
    """Extension by a new central e_{n+1} with d e^{n+1} = omega.

    In bracket terms [e_i, e_j] gains -omega_ij e_{n+1}.

    Raises:
        NotACocycleError: If omega is not closed.
    """
    n = g.dim
    if (omega.rows, omega.cols) != (n, n):
        raise DimensionMismatchError(f"{omega.rows}x{omega.cols} form on a {n}-dimensional algebra")
    if omega != omega.transpose().scale(-1):
        raise ValueError("2-form must be antisymmetric")
    result = is_cocycle(g, omega)
    if not result:
        raise NotACocycleError(result.message)
    brackets = {key: dict(row) for key, row in g.brackets.items()}
    for i in range(n):
        for j in range(i + 1, n):
            if omega[i, j]:
                brackets.setdefault((i, j), {})[n] = -omega[i, j]
    return LieAlgebra.from_brackets(n + 1, brackets, name=name)


def two_form(n: int, pairs: Dict[Tuple[int, int], object]) -> Matrix:
    """Antisymmetric matrix with omega[i][j] = c = -omega[j][i] for (i, j) -> c."""
    cells = {}
    for (i, j), c in pairs.items():
        cells[(i, j)] = c
        cells[(j, i)] = -Fraction(c)
    return Matrix.from_sparse(cells, n, n)


def orthogonal_direct_sum(first: MetricLieAlgebra, second: MetricLieAlgebra, name: str = "") -> MetricLieAlgebra:
    algebra = direct_sum(first.algebra, second.algebra, name=name)
    return MetricLieAlgebra.from_gram(algebra, Matrix.block_diagonal(first.metric.gram, second.metric.gram))


def neutral_abelian(n: int) -> MetricLieAlgebra:
    """R^{2n} abelian with the neutral metric, basis v_1..v_n, w_1..w_n."""
    return MetricLieAlgebra.from_gram(abelian(2 * n), neutral_gram(n))


# =============================================================================
# MIRAGES
# =============================================================================

@dataclass(frozen=True)
class MirageWitness:
    """An injective map from a metric algebra into another."""
    source: MetricLieAlgebra
    target: MetricLieAlgebra
    inclusion: Matrix

    __hash__ = None

    @classmethod
    def leading_coordinates(cls, source: MetricLieAlgebra, target: MetricLieAlgebra) -> "MirageWitness":
        """Inclusion of the source basis as the first basis vectors of the target."""
        cells = {(i, i): ONE for i in range(source.dim)}
        return cls(source, target, Matrix.from_sparse(cells, target.dim, source.dim))

    def image_of(self, s: Subspace) -> Subspace:
        return Subspace.span((self.inclusion.apply(v) for v in s.basis), self.target.dim)


@dataclass
class MirageReport:
    """Outcome of the mirage conditions.

    m5_central and m5_abelian are True when the computed bound for I^perp is
    central or abelian, and None when the argument is inconclusive.
    """
    m1: CheckResult
    m2: CheckResult
    m3: CheckResult
    m4: CheckResult
    m5_central: Optional[bool]
    m5_abelian: Optional[bool]
    bound: Subspace

    @property
    def passed(self) -> bool:
        return bool(self.m1 and self.m2 and self.m3 and self.m4 and self.m5_central)

    def to_dict(self) -> Dict[str, object]:
        def m5(value: Optional[bool]) -> str:
            return "PASS" if value else "INCONCLUSIVE"
        return {
            "M1": self.m1.to_dict(),
            "M2": self.m2.to_dict(),
            "M3": self.m3.to_dict(),
            "M4": self.m4.to_dict(),
            "M5_central": m5(self.m5_central),
            "M5_abelian": m5(self.m5_abelian),
            "bound_dim": self.bound.dim,
        }


def _check_m1(w: MirageWitness) -> CheckResult:
    pulled = w.inclusion.transpose() @ w.target.metric.gram @ w.inclusion
    if pulled != w.source.metric.gram:
        (i, j), _ = next(iter(sorted((pulled - w.source.metric.gram).nonzero_entries().items())))
        return CheckResult.failed(
            f"g(i(e{i + 1}), i(e{j + 1})) differs from h(e{i + 1}, e{j + 1})", pair=(i + 1, j + 1)
        )
    return CheckResult.passed("inclusion is isometric")


def _check_m2(w: MirageWitness) -> CheckResult:
    h, g = w.source.algebra, w.target.algebra
    for x in derived_algebra(h).basis:
        for j in range(h.dim):
            y = h.basis_vector(j)
            lhs = g.bracket(w.inclusion.apply(x), w.inclusion.apply(y))
            rhs = w.inclusion.apply(h.bracket(x, y))
            if lhs != rhs:
                return CheckResult.failed(
                    f"[i(X), i({h.labels[j]})] differs from i([X, {h.labels[j]}]) for X in h'",
                    x=x, y=h.labels[j],
                )
    return CheckResult.passed("inclusion preserves brackets with h'")


def _check_m3(w: MirageWitness) -> CheckResult:
    h, g = w.source.algebra, w.target.algebra
    perp = orth_complement(w.target.metric, image(w.inclusion))
    for x in derived_algebra(h).basis:
        ix = w.inclusion.apply(x)
        for y in perp.basis:
            value = g.bracket(ix, y)
            if any(value):
                return CheckResult.failed("i(h') does not commute with i(h)^perp", x=x, y=y)
    return CheckResult.passed("i(h') commutes with i(h)^perp")


def _check_m4(w: MirageWitness) -> CheckResult:
    second = derived(w.target.algebra, 2)
    expected = w.image_of(derived(w.source.algebra, 2))
    if second != expected:
        return CheckResult.failed(
            "g'' differs from i(h'')", target_dim=second.dim, source_dim=expected.dim
        )
    return CheckResult.passed("g'' = i(h'')")


def m5_bound(w: MirageWitness) -> Subspace:
    """Subspace containing I^perp for every nondegenerate ideal I containing i(h).

    Starts from I0^perp, I0 the ideal generated by i(h), and refines to a
    fixpoint: I^perp is an ideal, and it meets I0 trivially.
    """
    g = w.target.algebra
    metric = w.target.metric
    i0 = ideal_generated(g, image(w.inclusion))
    bound = orth_complement(metric, i0)
    basis = [g.basis_vector(j) for j in range(g.dim)]
    while True:
        refined = bound & bracket_into(g, basis, bound)
        for y in basis:
            if bracket_subspaces(g, refined, Subspace.span([y], g.dim)).is_subspace_of(i0):
                refined = refined & centralizer(g, Subspace.span([y], g.dim))
        if refined == bound:
            return bound
        bound = refined


def mirage_check(w: MirageWitness) -> MirageReport:
    """Decide M1-M4 exactly and M5 through the bound of m5_bound."""
    if w.inclusion.rows != w.target.dim or w.inclusion.cols != w.source.dim:
        raise DimensionMismatchError("inclusion matrix does not match the algebras")
    if rank(w.inclusion) != w.source.dim:
        raise ValueError("inclusion is not injective")
    g = w.target.algebra
    bound = m5_bound(w)
    central = bound.is_subspace_of(center(g))
    commuting = not any(any(v) for v in bracket_subspaces(g, bound, bound).basis)
    report = MirageReport(
        m1=_check_m1(w),
        m2=_check_m2(w),
        m3=_check_m3(w),
        m4=_check_m4(w),
        m5_central=True if central else None,
        m5_abelian=True if commuting else None,
        bound=bound,
    )
    if not report.m5_central:
        logger.warning(f"M5 inconclusive for {w.source.name} in {w.target.name}: bound of dimension {bound.dim} is not central")
    return report


def noninner_skew_derivation(hm: MetricLieAlgebra, d: LinearEndo) -> bool:
    """Whether D is a skew derivation that is not inner."""
    return is_skew(hm.metric, d) and bool(is_derivation(hm.algebra, d)) and not is_inner(hm.algebra, d)


def extend_by_zero(d: LinearEndo, target: LieAlgebra) -> LinearEndo:
    """Extend a map on the leading coordinates by zero on the remaining ones."""
    return LinearEndo(target, _embed(d.matrix, target.dim))


# =============================================================================
# LOW-DIMENSIONAL EXAMPLES
# =============================================================================

def neutral_four_derivation(hm: MetricLieAlgebra) -> LinearEndo:
    """D = e^1 (x) e_4 - e^2 (x) e_3 on neutral R^4: e1 -> e4, e2 -> -e3."""
    if hm.dim != 4:
        raise DimensionMismatchError(f"expected neutral R^4, got dimension {hm.dim}")
    return LinearEndo.from_images(hm.algebra, {0: (ZERO, ZERO, ZERO, ONE), 1: (ZERO, ZERO, -ONE, ZERO)})


def low_dimensional_examples() -> Tuple[MetricLieAlgebra, MetricLieAlgebra]:
    """Single (dimension 5) and double (dimension 6) extensions of neutral R^4 by the same D."""
    r4 = neutral_abelian(2)
    d = neutral_four_derivation(r4)
    return single_extension(r4, d, name="ext5"), double_extension(r4, d, name="ext6")
