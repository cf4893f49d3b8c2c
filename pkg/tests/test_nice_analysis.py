"""
Tests for nice bases and nonniceness certifiers
"""
import pytest
from fractions import Fraction

from src.core.errors import DimensionMismatchError, SingularMatrixError, WorkbenchError
from src.core.exact_linear import Matrix, Subspace
from src.core.lie_algebra import GradedLieAlgebra, LieAlgebra, abelian, direct_sum
from src.services.nice_analysis import (
    INCONCLUSIVE,
    NONNICE,
    NiceCertificate,
    certify_by_fingerprint,
    check_nice_basis,
    eigenspace_bound,
    fingerprint,
    fingerprint_match,
    graded_irreducibility,
    identity_certificate,
    ucs_quotient_test,
)


class TestNiceBasis:
    """Tests for nice basis certificates"""

    def test_heisenberg_is_nice(self, heisenberg):
        """The standard basis of heis is nice"""
        assert check_nice_basis(identity_certificate(heisenberg))

    def test_bracket_with_two_components(self):
        """[e1, e2] = e3 + e4 breaks the first condition"""
        g = LieAlgebra.from_brackets(4, {(0, 1): {2: 1, 3: 1}})
        result = check_nice_basis(identity_certificate(g))
        assert not result
        assert result.witness["condition"] == "a"

    def test_shared_target(self):
        """e1 brackets into e4 with both e2 and e3"""
        g = LieAlgebra.from_brackets(4, {(0, 1): {3: 1}, (0, 2): {3: 1}})
        result = check_nice_basis(identity_certificate(g))
        assert not result
        assert result.witness["condition"] == "b"
        assert result.witness["element"] == "e1"
        assert result.witness["partners"] == ("e2", "e3")

    def test_change_of_basis_repairs(self):
        """e3 - e2 replaces e3 and the basis becomes nice"""
        g = LieAlgebra.from_brackets(4, {(0, 1): {3: 1}, (0, 2): {3: 1}})
        rows = Matrix.from_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, -1, 1, 0], [0, 0, 0, 1]])
        assert check_nice_basis(NiceCertificate(g, rows))

    def test_singular_certificate(self, heisenberg):
        """The candidate rows must be a basis"""
        rows = Matrix.from_rows([[1, 0, 0], [1, 0, 0], [0, 0, 1]])
        with pytest.raises(SingularMatrixError):
            check_nice_basis(NiceCertificate(heisenberg, rows))

    def test_wrong_size(self, heisenberg):
        """The certificate must be square of the algebra's dimension"""
        with pytest.raises(DimensionMismatchError):
            NiceCertificate(heisenberg, Matrix.identity(2))

    def test_catalog_nice_entries(self, catalog):
        """Entries flagged nice are nice in their stored basis"""
        for entry in catalog:
            if entry.spec.nice_basis:
                assert check_nice_basis(identity_certificate(entry.algebra)), entry.name

    def test_g11_basis_is_not_nice(self, g11):
        """The stored basis of g11 is not nice"""
        assert not check_nice_basis(identity_certificate(g11))


class TestEigenspaceBound:
    """Tests for the bound on dim [[W, W], W]"""

    @pytest.mark.parametrize("m,bound", [(1, 0), (2, 2), (3, 7), (4, 16)])
    def test_values(self, m, bound):
        """m(-4 + 3m + m^2)/6"""
        assert eigenspace_bound(m) == Fraction(bound)


class TestFingerprints:
    """Tests for fingerprint certification"""

    def test_n9_fingerprint(self, n9):
        """n9 has the 965321 series and a zero spectrum"""
        fp = fingerprint(n9)
        assert fp.lcs_dims == (9, 6, 5, 3, 2, 1, 0)
        assert fp.ucs_dims == (1, 3, 4, 6, 7, 9)
        assert fp.nik_eigenvalues == (0,) * 9

    def test_n9_candidates(self, catalog, n9):
        """18a and 18b share the series of n9"""
        assert sorted(fingerprint_match(fingerprint(n9), catalog)) == ["18a", "18b"]

    @pytest.mark.parametrize("name", ["n9", "ntilde10"])
    def test_nonnice_by_fingerprint(self, catalog, name):
        """No nice algebra with the same series has a zero spectrum"""
        verdict = certify_by_fingerprint(catalog.get(name).algebra, catalog)
        assert verdict.verdict == NONNICE
        assert verdict.agreeing == []

    def test_nice_entry_agrees_with_itself(self, catalog):
        """18a is never certified nonnice"""
        verdict = certify_by_fingerprint(catalog.get("18a").algebra, catalog)
        assert verdict.verdict == INCONCLUSIVE
        assert "18a" in verdict.agreeing

    def test_without_slice(self, catalog, heisenberg):
        """No slice covers heis, so the answer is inconclusive"""
        assert certify_by_fingerprint(heisenberg, catalog).verdict == INCONCLUSIVE


class TestUcsQuotients:
    """Tests for the UCS quotient test"""

    def test_h12(self, catalog, h12):
        """h12 / z(h12) = n9 certifies h12 nonnice"""
        result = ucs_quotient_test(h12, catalog)
        assert result.nonnice
        assert result.step == 1
        assert result.quotient_dim == 9

    def test_heisenberg_inconclusive(self, catalog, heisenberg):
        """heis / z is abelian"""
        assert ucs_quotient_test(heisenberg, catalog).verdict == INCONCLUSIVE


class TestGradedIrreducibility:
    """Tests for the graded irreducibility conditions"""

    def test_split_first_layer(self, heisenberg):
        """heis + R in degrees (1, 1, 2, 1) is not shown irreducible"""
        g = direct_sum(heisenberg, abelian(1))
        layers = (Subspace.coordinate(4, [0, 1, 3]), Subspace.coordinate(4, [2]))
        report = graded_irreducibility(GradedLieAlgebra(g, layers, (1, 2)))
        assert not report.irreducible
        assert not report.conditions["condition_1"].ok
        assert not report.conditions["condition_3"].ok
        assert report.to_dict()["verdict"] == INCONCLUSIVE

    def test_invalid_grading(self, heisenberg):
        """A grading violating the bracket is rejected"""
        layers = (Subspace.coordinate(3, [0, 1]), Subspace.coordinate(3, [2]))
        with pytest.raises(WorkbenchError):
            graded_irreducibility(GradedLieAlgebra(heisenberg, layers, (1, 3)))
