"""
The g_k family of irreducible nonnice metric nilpotent Lie algebras.

Basis conventions (0-based positions):

- h occupies positions 0..11 in every member.
- Neutral summands follow h: R^2 as (v^, w^), then R^{4n} as v_1..v_{2n}, w_1..w_{2n}.
- A double extension appends (e, z); a single extension appends U.

Members:

- g_12 = h.
- g_14 = double extension of h by t: e2 -> e12, e11 -> -e6.
- g_k, k even >= 16, r = k - 14: double extension of h + R^r by D_r when
  r = 0 mod 4, of h + R^2 + R^{r-2} by D_r when r = 2 mod 4.
- g_k, k odd: single extension of g_{k-1} by f (e1 -> e12, e11 -> e5), zero
  outside h.

Each member carries a certificate: the quotient g_k/z(g_k) in the quotient
basis, rewritten by explicit rows, equals n9 + R^j (even k) or ntilde10 + R^j
(odd k) structure constant for structure constant.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from src.core.derivations import LinearEndo
from src.core.errors import CertificateError, WorkbenchError
from src.core.exact_linear import ONE, ZERO, Subspace, Vector, image, sum_subspaces, unit_vector
from src.core.lie_algebra import (
    LieAlgebra,
    abelian,
    center,
    change_basis,
    derived_algebra,
    direct_sum,
    quotient,
)
from src.models.checks import CheckResult
from src.services.catalog import Catalog, get_catalog
from src.services.constructions import (
    MetricLieAlgebra,
    MirageReport,
    MirageWitness,
    double_extension,
    extend_by_zero,
    mirage_check,
    neutral_abelian,
    orthogonal_direct_sum,
    single_extension,
)

logger = logging.getLogger(__name__)

H_DIM = 12
MIN_K = 12

# 0-based positions of the basis of h
E1, E2, E5, E6, E11, E12 = 0, 1, 4, 5, 10, 11


@dataclass(frozen=True)
class QuotientCertificate:
    """Rows of a basis of g_k/z(g_k), in quotient coordinates, exhibiting target + R^j."""
    rows: Tuple[Vector, ...]
    target: str
    abelian_dim: int


@dataclass(frozen=True)
class FamilyMember:
    k: int
    metric: MetricLieAlgebra
    derivation: Optional[LinearEndo]
    recipe: str
    certificate: QuotientCertificate

    __hash__ = None

    @property
    def algebra(self) -> LieAlgebra:
        return self.metric.algebra


# =============================================================================
# DERIVATIONS
# =============================================================================

def _endo(g: LieAlgebra, rules: Dict[int, Dict[int, int]]) -> LinearEndo:
    images = {}
    for j, targets in rules.items():
        column = [ZERO] * g.dim
        for k, c in targets.items():
            column[k] += c
        images[j] = column
    return LinearEndo.from_images(g, images)


def _neutral_rules(offset: int, n: int) -> Dict[int, Dict[int, int]]:
    """v_{2i} -> w_{2i-1}, v_{2i-1} -> -w_{2i} on R^{4n} starting at offset."""
    half = 2 * n

    def v(i: int) -> int:
        return offset + i - 1

    def w(i: int) -> int:
        return offset + half + i - 1

    rules: Dict[int, Dict[int, int]] = {}
    for i in range(1, n + 1):
        rules[v(2 * i)] = {w(2 * i - 1): 1}
        rules[v(2 * i - 1)] = {w(2 * i): -1}
    return rules


def derivation_f(g: LieAlgebra) -> LinearEndo:
    """f: e1 -> e12, e11 -> e5, zero elsewhere (h in the leading positions)."""
    return _endo(g, {E1: {E12: 1}, E11: {E5: 1}})


def derivation_t(g: LieAlgebra) -> LinearEndo:
    """t: e2 -> e12, e11 -> -e6."""
    return _endo(g, {E2: {E12: 1}, E11: {E6: -1}})


def derivation_d4n(g: LieAlgebra, n: int) -> LinearEndo:
    """D_{4n} on h + R^{4n}: e1 -> e6, e2 -> e5 and the neutral rules."""
    rules = {E1: {E6: 1}, E2: {E5: 1}}
    rules.update(_neutral_rules(H_DIM, n))
    return _endo(g, rules)


def derivation_d4n2(g: LieAlgebra, n: int) -> LinearEndo:
    """D_{4n+2} on h + R^2 + R^{4n}: e1 -> e6 + w^, e2 -> e5, v^ -> e5 and the neutral rules."""
    v_hat, w_hat = H_DIM, H_DIM + 1
    rules = {E1: {E6: 1, w_hat: 1}, E2: {E5: 1}, v_hat: {E5: 1}}
    rules.update(_neutral_rules(H_DIM + 2, n))
    return _endo(g, rules)


# =============================================================================
# CONSTRUCTION
# =============================================================================

def base_metric_algebra(catalog: Optional[Catalog] = None) -> MetricLieAlgebra:
    return (catalog or get_catalog()).metric_algebra("h12")


def _summand(h: MetricLieAlgebra, r: int) -> Tuple[MetricLieAlgebra, LinearEndo]:
    """h + R^r with its product metric and D_r."""
    if r % 4 == 0:
        n = r // 4
        space = orthogonal_direct_sum(h, neutral_abelian(2 * n)) if n else h
        return space, derivation_d4n(space.algebra, n)
    n = (r - 2) // 4
    space = orthogonal_direct_sum(h, neutral_abelian(1))
    if n:
        space = orthogonal_direct_sum(space, neutral_abelian(2 * n))
    return space, derivation_d4n2(space.algebra, n)


def _certificate(member_metric: MetricLieAlgebra, odd: bool) -> QuotientCertificate:
    g = member_metric.algebra
    z = center(g)
    q_dim = g.dim - z.dim
    if not odd:
        rows = tuple(unit_vector(q_dim, i) for i in range(q_dim))
        return QuotientCertificate(rows=rows, target="n9", abelian_dim=q_dim - 9)
    # U is the last quotient vector and plays the role of -e10 in ntilde10
    last = q_dim - 1
    minus_u = tuple(-x for x in unit_vector(q_dim, last))
    rows = tuple(unit_vector(q_dim, i) for i in range(9)) + (minus_u,) + tuple(
        unit_vector(q_dim, i) for i in range(9, last)
    )
    return QuotientCertificate(rows=rows, target="ntilde10", abelian_dim=q_dim - 10)


def _build(k: int, catalog: Catalog) -> FamilyMember:
    h = base_metric_algebra(catalog)
    name = f"g{k}"
    if k == MIN_K:
        metric = MetricLieAlgebra(h.algebra.renamed(name), h.metric)
        return FamilyMember(k, metric, None, "h", _certificate(metric, odd=False))
    if k % 2 == 1:
        previous = family(k - 1, catalog)
        f = extend_by_zero(derivation_f(h.algebra), previous.algebra)
        metric = single_extension(previous.metric, f, name=name)
        return FamilyMember(k, metric, f, f"single extension of g{k - 1} by f", _certificate(metric, odd=True))
    if k == 14:
        t = derivation_t(h.algebra)
        metric = double_extension(h, t, name=name)
        return FamilyMember(k, metric, t, "double extension of h by t", _certificate(metric, odd=False))
    r = k - 14
    space, d = _summand(h, r)
    metric = double_extension(space, d, name=name)
    summand = f"R^{r}" if r % 4 == 0 else (f"R^2 + R^{r - 2}" if r > 2 else "R^2")
    return FamilyMember(k, metric, d, f"double extension of h + {summand} by D_{r}", _certificate(metric, odd=False))


@lru_cache(maxsize=None)
def _cached(k: int, catalog: Catalog) -> FamilyMember:
    member = _build(k, catalog)
    logger.info(f"built g{k}: {member.recipe}")
    return member


def family(k: int, catalog: Optional[Catalog] = None) -> FamilyMember:
    """The member g_k of dimension k.

    Raises:
        WorkbenchError: If k < 12.
    """
    if k < MIN_K:
        raise WorkbenchError(f"the family starts at dimension {MIN_K}, got {k}")
    return _cached(k, catalog or get_catalog())


# =============================================================================
# CHECKS
# =============================================================================

def expected_quotient(member: FamilyMember, catalog: Optional[Catalog] = None) -> LieAlgebra:
    catalog = catalog or get_catalog()
    target = catalog.get(member.certificate.target).algebra
    return direct_sum(target, abelian(member.certificate.abelian_dim))


def verify_certificate(member: FamilyMember, catalog: Optional[Catalog] = None) -> CheckResult:
    """Recompute g_k/z(g_k), rewrite it by the certificate rows and compare."""
    g = member.algebra
    q = quotient(g, center(g), name=f"{g.name}/z").algebra
    if q.dim != len(member.certificate.rows):
        return CheckResult.failed("certificate has the wrong number of rows", quotient_dim=q.dim)
    rewritten = change_basis(q, member.certificate.rows)
    expected = expected_quotient(member, catalog)
    if rewritten != expected:
        return CheckResult.failed(
            f"g{member.k}/z(g{member.k}) does not match {member.certificate.target} + R^{member.certificate.abelian_dim}"
        )
    return CheckResult.passed(
        f"g{member.k}/z(g{member.k}) = {member.certificate.target} + R^{member.certificate.abelian_dim}"
    )


def require_certificate(member: FamilyMember, catalog: Optional[Catalog] = None) -> None:
    result = verify_certificate(member, catalog)
    if not result:
        raise CertificateError(result.message)


def _lift(space: Subspace, dim: int) -> Subspace:
    pad = dim - space.ambient_dim
    return Subspace.span((tuple(v) + (ZERO,) * pad for v in space.basis), dim)


def derived_set_equality(member: FamilyMember, catalog: Optional[Catalog] = None) -> CheckResult:
    """For even k > 12, g_k' = h' + im D + <z>."""
    if member.k % 2 or member.derivation is None:
        raise WorkbenchError("the derived set equality concerns the double extensions (even k > 12)")
    g = member.algebra
    h = base_metric_algebra(catalog).algebra
    z = Subspace.span([unit_vector(g.dim, g.dim - 1)], g.dim)
    expected = sum_subspaces(
        sum_subspaces(_lift(derived_algebra(h), g.dim), _lift(image(member.derivation.matrix), g.dim)), z
    )
    actual = derived_algebra(g)
    if actual != expected:
        return CheckResult.failed("g' differs from h' + im D + <z>", actual_dim=actual.dim, expected_dim=expected.dim)
    return CheckResult.passed(f"g{member.k}' = h' + im D + <z>, dimension {actual.dim}")


def center_in_derived(member: FamilyMember) -> CheckResult:
    g = member.algebra
    z, d = center(g), derived_algebra(g)
    if not z.is_subspace_of(d):
        return CheckResult.failed("z(g) is not contained in g'", center_dim=z.dim, derived_dim=d.dim)
    return CheckResult.passed("z(g) is contained in g'")


def mirage_of_h(member: FamilyMember, catalog: Optional[Catalog] = None) -> MirageReport:
    witness = MirageWitness.leading_coordinates(base_metric_algebra(catalog), member.metric)
    return mirage_check(witness)


def family_range(k_min: int, k_max: int, catalog: Optional[Catalog] = None) -> List[FamilyMember]:
    return [family(k, catalog) for k in range(k_min, k_max + 1)]
