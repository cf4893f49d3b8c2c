"""
Nice bases: certificate checking and nonniceness certifiers.

A basis is nice when every [e_i, e_j] is a multiple of a single basis element
and every e_i ⌟ de^k is a multiple of a single dual element. Nothing here
decides niceness in general; each certifier answers in one direction and
reports inconclusive otherwise.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.core.derivations import NikolayevskyResult, nikolayevsky
from src.core.errors import (
    DimensionMismatchError,
    IrrationalSpectrumError,
    NikolayevskyError,
    SingularMatrixError,
    WorkbenchError,
)
from src.core.exact_linear import Matrix, Subspace, determinant
from src.core.lie_algebra import (
    GradedLieAlgebra,
    LieAlgebra,
    bracket_subspaces,
    center,
    centralizer,
    change_basis,
    derived_algebra,
    graded_check,
    quotient,
    split_abelian_factor,
    subalgebra,
    ucs,
)
from src.models.checks import CheckResult
from src.services.catalog import Catalog, get_catalog, series_dims

logger = logging.getLogger(__name__)

NONNICE = "nonnice"
INCONCLUSIVE = "inconclusive"
IRREDUCIBLE = "irreducible"


# =============================================================================
# NICE BASIS CERTIFICATES
# =============================================================================

@dataclass(frozen=True)
class NiceCertificate:
    """A candidate nice basis, one row per basis vector in the algebra's coordinates."""
    algebra: LieAlgebra
    basis: Matrix

    __hash__ = None

    def __post_init__(self):
        if self.basis.rows != self.algebra.dim or self.basis.cols != self.algebra.dim:
            raise DimensionMismatchError(
                f"{self.basis.rows}x{self.basis.cols} basis for a {self.algebra.dim}-dimensional algebra"
            )


def check_nice_basis(certificate: NiceCertificate) -> CheckResult:
    """Check both nice conditions in the candidate basis.

    Raises:
        SingularMatrixError: If the candidate rows are not a basis.
    """
    g = certificate.algebra
    if determinant(certificate.basis) == 0:
        raise SingularMatrixError("candidate nice basis is singular")
    rewritten = change_basis(g, certificate.basis.entries)
    labels = rewritten.labels

    for i, j, row in rewritten.nonzero_brackets():
        if len(row) > 1:
            return CheckResult.failed(
                f"[{labels[i]}, {labels[j]}] is not a multiple of a single basis element",
                condition="a",
                pair=(labels[i], labels[j]),
                components=[labels[k] for k in sorted(row)],
            )

    # (i, k) -> the unique j with c_ij^k != 0
    seen: Dict[Tuple[int, int], int] = {}
    for i, j, row in rewritten.nonzero_brackets():
        for k in row:
            for a, b in ((i, j), (j, i)):
                other = seen.setdefault((a, k), b)
                if other != b:
                    return CheckResult.failed(
                        f"{labels[a]} brackets into {labels[k]} with both {labels[other]} and {labels[b]}",
                        condition="b",
                        element=labels[a],
                        target=labels[k],
                        partners=(labels[other], labels[b]),
                    )
    return CheckResult.passed("basis is nice")


def identity_certificate(g: LieAlgebra) -> NiceCertificate:
    return NiceCertificate(g, Matrix.identity(g.dim))


# =============================================================================
# EIGENSPACE BOUND
# =============================================================================

def eigenspace_bound(m: int) -> Fraction:
    """Largest dim [[W, W], W] for a nice eigenspace W of dimension m."""
    return Fraction(m * (-4 + 3 * m + m * m), 6)


@dataclass
class EigenspaceBoundViolation:
    eigenvalue: Fraction
    dim: int
    bracket_dim: int
    bound: Fraction

    def to_dict(self) -> Dict[str, object]:
        return {
            "eigenvalue": str(self.eigenvalue),
            "dim": self.dim,
            "bracket_dim": self.bracket_dim,
            "bound": str(self.bound),
        }


def eigenspace_bound_obstruction(
    g: LieAlgebra, nik: Optional[NikolayevskyResult] = None
) -> Optional[EigenspaceBoundViolation]:
    """First Nikolayevsky eigenspace W with dim [[W, W], W] above the bound, or None."""
    nik = nik or nikolayevsky(g)
    for (value, _), space in zip(nik.eigenvalues, nik.eigenspaces):
        triple = bracket_subspaces(g, bracket_subspaces(g, space, space), space)
        bound = eigenspace_bound(space.dim)
        if triple.dim > bound:
            logger.info(f"eigenspace for {value} violates the bound: {triple.dim} > {bound}")
            return EigenspaceBoundViolation(value, space.dim, triple.dim, bound)
    return None


# =============================================================================
# FINGERPRINTS
# =============================================================================

@dataclass(frozen=True)
class Fingerprint:
    dim: int
    lcs_dims: Tuple[int, ...]
    ucs_dims: Tuple[int, ...]
    nik_eigenvalues: Optional[Tuple[Fraction, ...]]

    def same_series(self, other: "Fingerprint") -> bool:
        return (self.dim, self.lcs_dims, self.ucs_dims) == (other.dim, other.lcs_dims, other.ucs_dims)

    def to_dict(self) -> Dict[str, object]:
        return {
            "dim": self.dim,
            "lcs": list(self.lcs_dims),
            "ucs": list(self.ucs_dims),
            "nikolayevsky": None if self.nik_eigenvalues is None else [str(v) for v in self.nik_eigenvalues],
        }


def fingerprint(g: LieAlgebra) -> Fingerprint:
    lcs_dims, ucs_dims = series_dims(g)
    try:
        spectrum: Optional[Tuple[Fraction, ...]] = nikolayevsky(g).multiset
    except (NikolayevskyError, IrrationalSpectrumError) as exc:
        logger.warning(f"no Nikolayevsky spectrum for {g.name or 'algebra'}: {exc}")
        spectrum = None
    return Fingerprint(g.dim, tuple(lcs_dims), tuple(ucs_dims), spectrum)


def _entry_fingerprint(catalog: Catalog, name: str) -> Fingerprint:
    """Fingerprint of a catalog entry from its index record, computing what is missing."""
    entry = catalog.get(name)
    spec = entry.spec
    if spec.lcs is not None and spec.ucs is not None:
        lcs_dims, ucs_dims = spec.lcs, spec.ucs
    else:
        lcs_dims, ucs_dims = series_dims(entry.algebra)
    expected = entry.expected_spectrum()
    if expected is None:
        return fingerprint(entry.algebra)
    return Fingerprint(entry.algebra.dim, tuple(lcs_dims), tuple(ucs_dims), tuple(expected))


def fingerprint_match(fp: Fingerprint, catalog: Optional[Catalog] = None) -> List[str]:
    """Nice catalog entries with the same dimension, LCS and UCS."""
    catalog = catalog or get_catalog()
    return [
        entry.name for entry in catalog
        if entry.spec.nice_basis and _entry_fingerprint(catalog, entry.name).same_series(fp)
    ]


@dataclass
class FingerprintVerdict:
    verdict: str
    fingerprint: Fingerprint
    candidates: List[str] = field(default_factory=list)
    agreeing: List[str] = field(default_factory=list)
    slice_name: Optional[str] = None

    @property
    def nonnice(self) -> bool:
        return self.verdict == NONNICE

    def to_dict(self) -> Dict[str, object]:
        return {
            "verdict": self.verdict,
            "fingerprint": self.fingerprint.to_dict(),
            "candidates": self.candidates,
            "agreeing": self.agreeing,
            "slice": self.slice_name,
        }


def certify_by_fingerprint(g: LieAlgebra, catalog: Optional[Catalog] = None) -> FingerprintVerdict:
    """Nonnice when a complete slice lists every nice candidate and none has g's spectrum."""
    catalog = catalog or get_catalog()
    fp = fingerprint(g)
    candidates = fingerprint_match(fp, catalog)
    sl = catalog.slice_for(fp.dim, list(fp.lcs_dims), list(fp.ucs_dims))
    agreeing = [
        name for name in candidates
        if fp.nik_eigenvalues is None or _entry_fingerprint(catalog, name).nik_eigenvalues == fp.nik_eigenvalues
    ]
    if sl is not None and sl.complete and fp.nik_eigenvalues is not None and not agreeing:
        logger.info(f"{g.name or 'algebra'} is nonnice: no member of {sl.name} has its spectrum")
        return FingerprintVerdict(NONNICE, fp, candidates, agreeing, sl.name)
    return FingerprintVerdict(INCONCLUSIVE, fp, candidates, agreeing, sl.name if sl else None)


# =============================================================================
# UCS QUOTIENTS
# =============================================================================

@dataclass
class UcsQuotientResult:
    verdict: str
    step: Optional[int] = None
    quotient_dim: Optional[int] = None
    abelian_dim: Optional[int] = None
    evidence: Optional[FingerprintVerdict] = None

    @property
    def nonnice(self) -> bool:
        return self.verdict == NONNICE

    def to_dict(self) -> Dict[str, object]:
        return {
            "verdict": self.verdict,
            "step": self.step,
            "quotient_dim": self.quotient_dim,
            "abelian_dim": self.abelian_dim,
            "evidence": self.evidence.to_dict() if self.evidence else None,
        }


def ucs_quotient_test(g: LieAlgebra, catalog: Optional[Catalog] = None) -> UcsQuotientResult:
    """Certify g nonnice through some g/C_k(g) with its abelian factor split off.

    Quotients of a nice algebra by UCS terms are nice, so a nonnice quotient
    certifies g.
    """
    catalog = catalog or get_catalog()
    for step, term in enumerate(ucs(g), start=1):
        if term.dim in (0, g.dim):
            continue
        q = quotient(g, term, name=f"{g.name or 'g'}/C{step}").algebra
        ideal, abelian_part = split_abelian_factor(q)
        core = subalgebra(q, ideal, name=q.name)
        if core.dim == 0:
            continue
        evidence = certify_by_fingerprint(core, catalog)
        logger.debug(f"{q.name}: core of dimension {core.dim}, {evidence.verdict}")
        if evidence.nonnice:
            return UcsQuotientResult(NONNICE, step, q.dim, abelian_part.dim, evidence)
    return UcsQuotientResult(INCONCLUSIVE)


# =============================================================================
# GRADED IRREDUCIBILITY
# =============================================================================

@dataclass
class IrreducibilityReport:
    verdict: str
    conditions: Dict[str, Optional[CheckResult]]

    @property
    def irreducible(self) -> bool:
        return self.verdict == IRREDUCIBLE

    def to_dict(self) -> Dict[str, object]:
        return {
            "verdict": self.verdict,
            "conditions": {
                key: ("INCONCLUSIVE" if check is None else check.to_dict())
                for key, check in self.conditions.items()
            },
        }


def _first_layer_split(graded: GradedLieAlgebra) -> Optional[Subspace]:
    """A proper V in g_1 commuting with its complement, from the bracket graph of a layer basis."""
    g = graded.algebra
    basis = list(graded.layer_of_degree(1).basis)
    if len(basis) < 2:
        return None
    component = {0}
    frontier = [0]
    while frontier:
        a = frontier.pop()
        for b in range(len(basis)):
            if b not in component and any(g.bracket(basis[a], basis[b])):
                component.add(b)
                frontier.append(b)
    if len(component) == len(basis):
        return None
    return Subspace.span([basis[a] for a in sorted(component)], g.dim)


def condition_one_refutation(graded: GradedLieAlgebra) -> Optional[CheckResult]:
    """A failing condition (1) witness when the first layer splits into commuting parts."""
    v = _first_layer_split(graded)
    if v is None:
        return None
    g1 = graded.layer_of_degree(1)
    if g1.is_subspace_of(v + centralizer(graded.algebra, v)):
        return CheckResult.failed("g_1 lies in V + C(V) for a proper nonzero V", v_dim=v.dim, v=v)
    return None


def graded_irreducibility(
    graded: GradedLieAlgebra, condition_one: Optional[CheckResult] = None
) -> IrreducibilityReport:
    """Check the three sufficient conditions for irreducibility of a positively graded algebra.

    Args:
        graded: The graded algebra.
        condition_one: An exact verdict on condition (1) when the caller has one,
            as for cotangents of free nilpotent algebras.

    Returns:
        Irreducible when all three conditions hold, inconclusive otherwise.

    Raises:
        WorkbenchError: If the grading is invalid.
    """
    check = graded_check(graded)
    if not check:
        raise WorkbenchError(f"invalid grading: {check.message}")
    g = graded.algebra
    z = center(g)

    if condition_one is None:
        condition_one = condition_one_refutation(graded)

    g1 = graded.layer_of_degree(1)
    c1 = centralizer(g, g1)
    condition_two = CheckResult.passed("no nonzero V in a noncentral layer commutes with g_1")
    for degree in sorted(set(graded.degrees)):
        layer = graded.layer_of_degree(degree)
        if layer.is_subspace_of(z):
            continue
        common = layer & c1
        if common.dim:
            condition_two = CheckResult.failed(
                f"layer of degree {degree} meets C(g_1)", degree=degree, dim=common.dim
            )
            break

    d = derived_algebra(g)
    condition_three = (
        CheckResult.passed("z(g) is contained in g'") if z.is_subspace_of(d)
        else CheckResult.failed("z(g) is not contained in g'", center_dim=z.dim, derived_dim=d.dim)
    )

    conditions = {"condition_1": condition_one, "condition_2": condition_two, "condition_3": condition_three}
    verdict = IRREDUCIBLE if all(c is not None and c.ok for c in conditions.values()) else INCONCLUSIVE
    logger.info(f"graded irreducibility of {g.name or 'algebra'}: {verdict}")
    return IrreducibilityReport(verdict, conditions)
