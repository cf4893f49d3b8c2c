"""
Catalog of named algebras.

Each entry is a structure-constant file under the catalog directory; the
index (index.json) carries provenance, expected series dimensions, expected
Nikolayevsky spectra and the completeness slices used by fingerprint matching.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src.config import Config
from src.core.derivations import nikolayevsky
from src.core.errors import UnknownAlgebraError, WorkbenchError
from src.core.lie_algebra import LieAlgebra, center, derived_algebra, jacobi_check, lcs, ucs
from src.core.metric import BilinearForm, is_ad_invariant, orth_complement
from src.models.checks import CheckResult
from src.models.documents import CatalogEntrySpec, CatalogIndex, CatalogSlice
from src.services.constructions import MetricLieAlgebra
from src.services.notation import AlgebraDocument, parse_algebra

logger = logging.getLogger(__name__)


@dataclass
class CatalogEntry:
    """A parsed catalog algebra with its index record."""
    name: str
    algebra: LieAlgebra
    metric: Optional[BilinearForm]
    spec: CatalogEntrySpec
    document: AlgebraDocument
    text: str

    @property
    def provenance(self) -> str:
        return self.spec.provenance

    def expected_spectrum(self) -> Optional[List[Fraction]]:
        if self.spec.nikolayevsky is None:
            return None
        return self.spec.nikolayevsky.values(self.algebra.dim)


@dataclass
class EntryVerification:
    name: str
    checks: Dict[str, CheckResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "status": "PASS" if self.passed else "FAIL",
            "checks": {key: check.to_dict() for key, check in self.checks.items()},
        }


def series_dims(g: LieAlgebra) -> Tuple[List[int], List[int]]:
    """(LCS dims, UCS dims) with the LCS ending at its stable term."""
    return [s.dim for s in lcs(g)], [s.dim for s in ucs(g)]


class Catalog:
    """Named algebras loaded from a catalog directory."""

    def __init__(self, directory: Path, index: CatalogIndex, entries: Dict[str, CatalogEntry]):
        self.directory = directory
        self.index = index
        self._entries = entries

    @classmethod
    def load(cls, directory: Optional[Path] = None) -> "Catalog":
        """Read index.json and parse every listed file.

        Raises:
            AlgebraSyntaxError: If a catalog file is malformed.
            JacobiError: If a catalog algebra fails Jacobi.
        """
        directory = Path(directory) if directory else Config.catalog_dir()
        index_path = directory / Config.CATALOG_INDEX
        index = CatalogIndex.model_validate_json(index_path.read_text(encoding="utf-8"))
        entries: Dict[str, CatalogEntry] = {}
        for spec in index.entries:
            text = (directory / spec.file).read_text(encoding="utf-8")
            doc = parse_algebra(text)
            algebra = doc.to_algebra().renamed(spec.name)
            entries[spec.name] = CatalogEntry(
                name=spec.name,
                algebra=algebra,
                metric=doc.to_metric(algebra),
                spec=spec,
                document=doc,
                text=text,
            )
        for sl in index.slices:
            missing = [m for m in sl.members if m not in entries]
            if missing:
                raise WorkbenchError(f"slice {sl.name} names unknown entries: {', '.join(missing)}")
        logger.info(f"Loaded catalog with {len(entries)} entries from {directory}")
        return cls(directory, index, entries)

    def names(self) -> List[str]:
        return [spec.name for spec in self.index.entries]

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __iter__(self):
        return iter(self._entries[name] for name in self.names())

    def get(self, name: str) -> CatalogEntry:
        """
        Raises:
            UnknownAlgebraError: If no entry has this name.
        """
        try:
            return self._entries[name]
        except KeyError:
            raise UnknownAlgebraError(name) from None

    def metric_algebra(self, name: str) -> MetricLieAlgebra:
        entry = self.get(name)
        if entry.metric is None:
            raise WorkbenchError(f"catalog entry {name} has no metric")
        return MetricLieAlgebra(entry.algebra, entry.metric)

    @property
    def slices(self) -> List[CatalogSlice]:
        return list(self.index.slices)

    def slice_for(self, dim: int, lcs_dims: List[int], ucs_dims: List[int]) -> Optional[CatalogSlice]:
        for sl in self.index.slices:
            if sl.dim == dim and sl.lcs == list(lcs_dims) and sl.ucs == list(ucs_dims):
                return sl
        return None

    # ============== Verification ==============

    def verify(self, name: str) -> EntryVerification:
        return verify_entry(self.get(name))

    def verify_all(self) -> List[EntryVerification]:
        return [self.verify(name) for name in self.names()]


def verify_entry(entry: CatalogEntry) -> EntryVerification:
    """Recompute Jacobi, metric properties, series and spectrum for one entry."""
    g = entry.algebra
    report = EntryVerification(name=entry.name)
    report.checks["jacobi"] = jacobi_check(g)

    if entry.metric is not None:
        if not entry.metric.nondegenerate:
            report.checks["nondegenerate"] = CheckResult.failed("metric is degenerate")
        else:
            report.checks["nondegenerate"] = CheckResult.passed("metric is nondegenerate")
            report.checks["ad_invariant"] = is_ad_invariant(entry.metric)
            perp = orth_complement(entry.metric, derived_algebra(g))
            z = center(g)
            report.checks["center_is_derived_perp"] = (
                CheckResult.passed("z(g) = (g')^perp") if perp == z
                else CheckResult.failed("z(g) differs from (g')^perp", center_dim=z.dim, perp_dim=perp.dim)
            )

    spec = entry.spec
    if spec.lcs is not None or spec.ucs is not None:
        lcs_dims, ucs_dims = series_dims(g)
        ok = (spec.lcs is None or spec.lcs == lcs_dims) and (spec.ucs is None or spec.ucs == ucs_dims)
        report.checks["series"] = (
            CheckResult.passed(f"LCS {lcs_dims} / UCS {ucs_dims}") if ok
            else CheckResult.failed("series dimensions differ", lcs=lcs_dims, ucs=ucs_dims,
                                    expected_lcs=spec.lcs, expected_ucs=spec.ucs)
        )

    expected = entry.expected_spectrum()
    if expected is not None:
        try:
            actual = list(nikolayevsky(g).multiset)
        except WorkbenchError as exc:
            report.checks["nikolayevsky"] = CheckResult.failed(f"Nikolayevsky derivation failed: {exc}")
        else:
            report.checks["nikolayevsky"] = (
                CheckResult.passed("spectrum matches") if actual == expected
                else CheckResult.failed("spectrum differs", actual=actual, expected=expected)
            )

    status = "PASS" if report.passed else "FAIL"
    logger.info(f"verify {entry.name}: {status}")
    return report


def load_file(path: Path, check_jacobi: bool = True) -> CatalogEntry:
    """Parse a structure-constant file outside the catalog.

    With check_jacobi=False the algebra is built as written, so verify_entry
    can report the Jacobi witness instead of failing at construction.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    doc = parse_algebra(text)
    name = doc.name or path.stem
    algebra = doc.to_algebra(check_jacobi=check_jacobi).renamed(name)
    spec = CatalogEntrySpec(name=name, file=path.name, provenance=str(path))
    return CatalogEntry(name=name, algebra=algebra, metric=doc.to_metric(algebra), spec=spec, document=doc, text=text)


@lru_cache(maxsize=4)
def _cached(directory: str) -> Catalog:
    return Catalog.load(Path(directory))


def get_catalog(directory: Optional[Path] = None) -> Catalog:
    """Shared catalog instance per directory."""
    return _cached(str(Path(directory) if directory else Config.catalog_dir()))


def load(name: str) -> CatalogEntry:
    return get_catalog().get(name)


def list_names() -> List[str]:
    return get_catalog().names()


def verify_all() -> List[EntryVerification]:
    return get_catalog().verify_all()
