"""
Acceptance report.

Recomputes every published number the workbench covers and compares it with
the stated value. Sections follow the acceptance list: catalog integrity,
spectra, series, free nilpotent algebras, inequalities, constructions,
cotangents, nice analysis and a parser round-trip.
"""

import logging
from datetime import datetime
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from src.config import Config
from src.core.derivations import nikolayevsky
from src.core.errors import WorkbenchError
from src.core.exact_linear import Subspace, unit_vector
from src.core.lie_algebra import center, jacobi_check, quotient
from src.models.reports import ReportSection, WorkbenchReport
from src.services import free_nilpotent as fn
from src.services.catalog import Catalog, EntryVerification, get_catalog, series_dims
from src.services.constructions import low_dimensional_examples
from src.services.family import center_in_derived, family, mirage_of_h, verify_certificate
from src.services.nice_analysis import (
    certify_by_fingerprint,
    check_nice_basis,
    eigenspace_bound_obstruction,
    graded_irreducibility,
    identity_certificate,
    ucs_quotient_test,
)
from src.services.notation import emit_algebra
from src.services.proof_script import Outcome, replay

logger = logging.getLogger(__name__)

Outcome3 = Tuple[bool, str, Optional[str]]

G11_EIGENSPACES = ((0, 1), (2, 3), (4, 5, 6), (7, 8), (9, 10))

# (left, right, result), 1-based, for n_{2,5}
HALL_EXAMPLE = (
    (2, 1, 3), (3, 1, 4), (3, 2, 5), (4, 1, 6), (4, 2, 7), (5, 2, 8), (6, 1, 9),
    (6, 2, 10), (7, 2, 11), (8, 2, 12), (4, 3, 13), (5, 3, 14),
)

WITT_CLOSED_FORMS: Sequence[Tuple[int, Callable[[int], int]]] = (
    (1, lambda m: m),
    (2, lambda m: m * (m - 1) // 2),
    (3, lambda m: m * (m * m - 1) // 3),
    (4, lambda m: m * m * (m * m - 1) // 4),
    (5, lambda m: m * (m ** 4 - 1) // 5),
)

NONNICE_SCRIPT = "nonnice11.proof"


def _dims(values: Sequence[int]) -> str:
    return ",".join(str(v) for v in values)


def _spectrum(values: Sequence[Fraction]) -> str:
    return ",".join(str(v) for v in values)


def _item(section: ReportSection, name: str, expected: str, compute: Callable[[], Outcome3]) -> None:
    """Add one item, turning a WorkbenchError into a FAIL."""
    try:
        ok, actual, detail = compute()
    except WorkbenchError as exc:
        logger.warning(f"{section.title} / {name}: {exc}")
        ok, actual, detail = False, "error", f"{type(exc).__name__}: {exc}"
    section.add(name, ok, expected=expected, actual=actual, detail=detail)


# =============================================================================
# CATALOG
# =============================================================================

def catalog_section(verifications: List[EntryVerification]) -> ReportSection:
    section = ReportSection(title="Catalog integrity")
    for v in verifications:
        checks = {k: c for k, c in v.checks.items() if k != "nikolayevsky"}
        failed = [f"{k}: {c.message}" for k, c in checks.items() if not c]
        section.add(
            v.name, not failed, expected="PASS",
            actual=", ".join(sorted(checks)), detail="; ".join(failed) or None,
        )
    return section


def spectra_section(catalog: Catalog, verifications: List[EntryVerification]) -> ReportSection:
    section = ReportSection(title="Nikolayevsky spectra")
    for v in verifications:
        check = v.checks.get("nikolayevsky")
        if check is None:
            continue
        expected = catalog.get(v.name).expected_spectrum() or []
        section.add(
            v.name, bool(check), expected=_spectrum(expected),
            actual="matches" if check else check.message,
            detail=None if check else str(check.witness),
        )

    def g11_eigenspaces() -> Outcome3:
        g = catalog.get("g11").algebra
        spaces = nikolayevsky(g).eigenspaces
        expected = [Subspace.coordinate(g.dim, idx) for idx in G11_EIGENSPACES]
        return list(spaces) == expected, f"{len(spaces)} eigenspaces", None

    _item(section, "g11 eigenspaces", "<e1,e2> <e3,e4> <e5,e6,e7> <e8,e9> <e10,e11>", g11_eigenspaces)
    return section


def series_section(catalog: Catalog) -> ReportSection:
    section = ReportSection(title="Series")
    expected = {
        "n9": ((9, 6, 5, 3, 2, 1, 0), (1, 3, 4, 6, 7, 9)),
        "ntilde10": ((10, 7, 5, 3, 2, 1, 0), (2, 4, 5, 7, 8, 10)),
    }
    for name, (lcs_dims, ucs_dims) in expected.items():
        def compute(name=name, lcs_dims=lcs_dims, ucs_dims=ucs_dims) -> Outcome3:
            actual_lcs, actual_ucs = series_dims(catalog.get(name).algebra)
            ok = tuple(actual_lcs) == lcs_dims and tuple(actual_ucs) == ucs_dims
            return ok, f"LCS {_dims(actual_lcs)} / UCS {_dims(actual_ucs)}", None
        _item(section, name, f"LCS {_dims(lcs_dims)} / UCS {_dims(ucs_dims)}", compute)

    def h_mod_center() -> Outcome3:
        h = catalog.get("h12").algebra
        q = quotient(h, center(h), name="h12/z").algebra
        return q == catalog.get("n9").algebra, f"dimension {q.dim}", None

    _item(section, "h12/z(h12) = n9", "identical structure constants", h_mod_center)
    return section


# =============================================================================
# FREE NILPOTENT
# =============================================================================

def free_section() -> ReportSection:
    section = ReportSection(title="Free nilpotent algebras")
    for m in range(2, 6):
        def witt(m=m) -> Outcome3:
            actual = [fn.witt_dim(m, k) for k, _ in WITT_CLOSED_FORMS]
            expected = [form(m) for _, form in WITT_CLOSED_FORMS]
            return actual == expected, _dims(actual), None
        _item(section, f"witt_dim m={m}", _dims(form(m) for _, form in WITT_CLOSED_FORMS), witt)

    def hall() -> Outcome3:
        g = fn.build(2, 5).algebra
        wrong = []
        for left, right, result in HALL_EXAMPLE:
            bracket = g.bracket(unit_vector(g.dim, left - 1), unit_vector(g.dim, right - 1))
            if bracket != unit_vector(g.dim, result - 1):
                wrong.append(f"[e{left}, e{right}]")
        return not wrong and g.dim == 14, f"dimension {g.dim}", ", ".join(wrong) or None

    _item(section, "Hall basis of n_2,5", "dimension 14, [e2,e1]=e3 ... [e5,e3]=e14", hall)

    for m in range(2, 6):
        formulas = {2: Fraction(m, 2 * m - 1), 3: Fraction(m * m + m - 1, 3 * m * m + 2 * m - 4)}
        for s, expected in formulas.items():
            def lam(m=m, s=s, expected=expected) -> Outcome3:
                actual = fn.free_lambda(m, s)
                return actual == expected, str(actual), None
            _item(section, f"lambda m={m} s={s}", str(expected), lam)

    for m, s in Config.FREE_INSTANCES:
        def agree(m=m, s=s) -> Outcome3:
            general = nikolayevsky(fn.build(m, s).algebra).endo.matrix
            closed = fn.nikolayevsky_free(m, s).endo.matrix
            return general == closed, f"lambda = {fn.free_lambda(m, s)}", None
        _item(section, f"general solver on n_{m},{s}", "agrees with lambda formula", agree)
    return section


def inequalities_section() -> ReportSection:
    section = ReportSection(title="Inequalities")
    for m in range(2, 7):
        def estimate(m=m) -> Outcome3:
            failing = [s for s in range(4, 13) if not fn.estimate_check(m, s)]
            return not failing, "holds" if not failing else f"fails at s={failing}", None
        _item(section, f"estimate m={m}, s=4..12", "holds", estimate)
    for m in range(2, 6):
        def equation(m=m) -> Outcome3:
            solutions = [
                (s, n) for s in range(3, 9) for n in range(1, s + 1) if fn.cotangent_eigen_equation(m, s, n)
            ]
            return not solutions, "no solution" if not solutions else f"solutions {solutions}", None
        _item(section, f"cotangent eigenvalue equation m={m}, s=3..8", "no solution", equation)

    def verdicts() -> Outcome3:
        expected = {(2, 2): True, (2, 3): True, (2, 4): True, (2, 5): False, (3, 2): True, (3, 3): False}
        actual = {key: fn.niceness_verdict(*key).nice for key in expected}
        wrong = [f"n_{m},{s}" for (m, s), nice in expected.items() if actual[(m, s)] != nice]
        return not wrong, "nice up to (2,4) and s=2; nonnice at (2,5), (3,3)", ", ".join(wrong) or None

    _item(section, "niceness of n_m,s", "nice iff s <= 2 or (m, s) in {(2,3), (2,4)}", verdicts)
    return section


# =============================================================================
# CONSTRUCTIONS
# =============================================================================

def constructions_section(catalog: Catalog, k_max: int) -> ReportSection:
    section = ReportSection(title="Constructions")
    built = dict(zip(("ext5", "ext6"), low_dimensional_examples()))
    for name, ours in built.items():
        def compare(name=name, ours=ours) -> Outcome3:
            theirs = catalog.metric_algebra(name)
            ok = ours.algebra == theirs.algebra and ours.metric.gram == theirs.metric.gram
            return ok, f"dimension {ours.dim}", None
        _item(section, f"{name} from neutral R^4", "catalog entry verbatim", compare)

    for k in range(Config.FAMILY_MIN_K, k_max + 1):
        def member_checks(k=k) -> Outcome3:
            member = family(k, catalog)
            g = member.algebra
            mirage = mirage_of_h(member, catalog)
            checks = {
                "dim": g.dim == k,
                "jacobi": bool(jacobi_check(g)),
                "z in g'": bool(center_in_derived(member)),
                "M1-M4": bool(mirage.m1 and mirage.m2 and mirage.m3 and mirage.m4),
                "certificate": bool(verify_certificate(member, catalog)),
            }
            failed = [key for key, ok in checks.items() if not ok]
            target = f"{member.certificate.target} + R^{member.certificate.abelian_dim}"
            return not failed, f"{member.recipe}; g/z = {target}", ", ".join(failed) or None
        _item(section, f"g_{k}", "dim, Jacobi, metric, z in g', M1-M4, certificate", member_checks)
    return section


def cotangent_section() -> ReportSection:
    section = ReportSection(title="Cotangents")
    for m, s in Config.FREE_INSTANCES:
        prefix = f"T*n_{m},{s}"
        for label, check in (
            ("step", fn.cotangent_step_check),
            ("center", fn.cotangent_center_check),
            ("derived algebra", fn.cotangent_derived_check),
        ):
            def run(check=check, m=m, s=s) -> Outcome3:
                result = check(m, s)
                return bool(result), result.message, None if result else str(result.witness)
            _item(section, f"{prefix} {label}", "PASS", run)

        def irreducible(m=m, s=s) -> Outcome3:
            report = graded_irreducibility(fn.cotangent_free(m, s).graded, fn.cotangent_generic_condition(m, s))
            return report.irreducible, report.verdict, None
        _item(section, f"{prefix} graded irreducibility", "irreducible", irreducible)

        def scale(m=m, s=s) -> Outcome3:
            a = fn.cotangent_nikolayevsky_scale(m, s)
            return 0 < a < 1, f"a = {a}", None
        _item(section, f"{prefix} Nikolayevsky scale", "0 < a < 1", scale)
    return section


# =============================================================================
# NICE ANALYSIS
# =============================================================================

def nice_section(catalog: Catalog, k_max: int) -> ReportSection:
    section = ReportSection(title="Nice analysis")
    for m, s in ((2, 3), (2, 4)):
        def free_basis(m=m, s=s) -> Outcome3:
            result = check_nice_basis(fn.nice_certificate(m, s))
            return bool(result), result.message, None if result else str(result.witness)
        _item(section, f"Hall basis of n_{m},{s} is nice", "PASS", free_basis)

        def cotangent_basis(m=m, s=s) -> Outcome3:
            result = check_nice_basis(identity_certificate(fn.cotangent_free(m, s).algebra))
            return bool(result), result.message, None if result else str(result.witness)
        _item(section, f"dual basis of T*n_{m},{s} is nice", "PASS", cotangent_basis)

    for m in (3, 4):
        def bound(m=m) -> Outcome3:
            violation = eigenspace_bound_obstruction(fn.build(m, 3).algebra, fn.nikolayevsky_free(m, 3))
            if violation is None:
                return False, "no violation", None
            return True, f"dim {violation.bracket_dim} > {violation.bound}", None
        _item(section, f"eigenspace bound on n_{m},3", "violated", bound)

    for name in ("n9", "ntilde10"):
        def by_fingerprint(name=name) -> Outcome3:
            verdict = certify_by_fingerprint(catalog.get(name).algebra, catalog)
            return verdict.nonnice, f"{verdict.verdict} against {', '.join(verdict.candidates)}", None
        _item(section, f"fingerprint of {name}", "nonnice", by_fingerprint)

    targets: List[Tuple[str, Callable]] = [("h12", lambda: catalog.get("h12").algebra)]
    targets += [(f"g_{k}", lambda k=k: family(k, catalog).algebra) for k in range(Config.FAMILY_MIN_K + 1, k_max + 1)]
    for name, algebra in targets:
        def by_ucs(algebra=algebra) -> Outcome3:
            result = ucs_quotient_test(algebra(), catalog)
            actual = result.verdict if not result.nonnice else f"nonnice via C_{result.step}"
            return result.nonnice, actual, None
        _item(section, f"UCS quotient test on {name}", "nonnice", by_ucs)

    def nonnice11() -> Outcome3:
        transcript = replay(NONNICE_SCRIPT, catalog)
        ok = transcript.outcome == Outcome.CONTRADICTION
        return ok, f"{transcript.outcome.value} after {len(transcript.entries)} steps", transcript.contradiction

    _item(section, f"replay {NONNICE_SCRIPT}", Outcome.CONTRADICTION.value, nonnice11)
    return section


def round_trip_section(catalog: Catalog) -> ReportSection:
    section = ReportSection(title="Parser round-trip")
    for entry in catalog:
        emitted = emit_algebra(entry.document)
        section.add(entry.name, emitted == entry.text, expected="byte-identical",
                    actual="identical" if emitted == entry.text else "differs")
    return section


# =============================================================================
# REPORT
# =============================================================================

def build_report(catalog: Optional[Catalog] = None, family_max_k: Optional[int] = None) -> WorkbenchReport:
    """Recompute every acceptance number.

    Args:
        catalog: Catalog to check; the configured one by default.
        family_max_k: Upper end of the g_k range; Config.family_max_k() by default.

    Returns:
        The report; report.passed is True iff every item passed.
    """
    catalog = catalog or get_catalog()
    k_max = family_max_k or Config.family_max_k()
    logger.info(f"building report for {len(catalog.names())} catalog entries, g_k up to k = {k_max}")

    verifications = catalog.verify_all()
    sections = [
        catalog_section(verifications),
        spectra_section(catalog, verifications),
        series_section(catalog),
        free_section(),
        inequalities_section(),
        constructions_section(catalog, k_max),
        cotangent_section(),
        nice_section(catalog, k_max),
        round_trip_section(catalog),
    ]
    report = WorkbenchReport(
        app_name=Config.APP_NAME,
        version=Config.APP_VERSION,
        generated_at=datetime.now().isoformat(timespec="seconds"),
        sections=sections,
    )
    counts = report.counts
    logger.info(f"report: {counts['passed']}/{counts['total']} PASS")
    return report
