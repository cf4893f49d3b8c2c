"""
Tests for the g_k family
"""
import pytest

from src.core.derivations import is_inner
from src.core.errors import WorkbenchError
from src.core.lie_algebra import center, jacobi_check
from src.services.family import (
    center_in_derived,
    derivation_d4n,
    derivation_t,
    derived_set_equality,
    family,
    family_range,
    mirage_of_h,
    verify_certificate,
)


class TestConstruction:
    """Tests for building family members"""

    @pytest.mark.parametrize("k", range(12, 19))
    def test_dimension_and_jacobi(self, catalog, k):
        """g_k has dimension k and satisfies Jacobi"""
        member = family(k, catalog)
        assert member.algebra.dim == k
        assert jacobi_check(member.algebra)

    def test_base_member_is_h(self, catalog, h12):
        """g_12 = h"""
        member = family(12, catalog)
        assert member.algebra == h12
        assert member.derivation is None
        assert member.recipe == "h"

    def test_recipes(self, catalog):
        """Even members are double extensions, odd ones single extensions"""
        assert family(14, catalog).recipe == "double extension of h by t"
        assert family(15, catalog).recipe == "single extension of g14 by f"
        assert family(16, catalog).recipe == "double extension of h + R^2 by D_2"
        assert family(18, catalog).recipe == "double extension of h + R^4 by D_4"

    def test_below_range(self, catalog):
        """The family starts at dimension 12"""
        with pytest.raises(WorkbenchError):
            family(11, catalog)

    def test_family_range(self, catalog):
        """family_range returns consecutive members"""
        assert [m.k for m in family_range(12, 14, catalog)] == [12, 13, 14]

    def test_members_are_cached(self, catalog):
        """Building the same member twice returns the same object"""
        assert family(15, catalog) is family(15, catalog)


class TestCertificates:
    """Tests for the g_k/z(g_k) certificates"""

    @pytest.mark.parametrize("k", range(12, 18))
    def test_certificate_verifies(self, catalog, k):
        """g_k/z = n9 + R^j for even k and ntilde10 + R^j for odd k"""
        member = family(k, catalog)
        assert member.certificate.target == ("n9" if k % 2 == 0 else "ntilde10")
        assert verify_certificate(member, catalog)

    def test_abelian_part(self, catalog):
        """g_16/z(g_16) = n9 + R^j with j = 16 - dim z - 9"""
        member = family(16, catalog)
        z = center(member.algebra)
        assert member.certificate.abelian_dim == 16 - z.dim - 9

    @pytest.mark.parametrize("k", range(12, 18))
    def test_center_in_derived(self, catalog, k):
        """z(g_k) is contained in g_k'"""
        assert center_in_derived(family(k, catalog))


class TestStructure:
    """Tests for the derived algebra and mirage conditions"""

    @pytest.mark.parametrize("k", [14, 16, 18])
    def test_derived_set_equality(self, catalog, k):
        """g_k' = h' + im D + <z> for even k"""
        assert derived_set_equality(family(k, catalog), catalog)

    def test_derived_set_equality_needs_double_extension(self, catalog):
        """Odd members are not double extensions"""
        with pytest.raises(WorkbenchError):
            derived_set_equality(family(13, catalog), catalog)

    @pytest.mark.parametrize("k", [13, 14, 16])
    def test_h_is_a_mirage(self, catalog, k):
        """h sits in g_k satisfying M1-M4"""
        report = mirage_of_h(family(k, catalog), catalog)
        assert report.m1 and report.m2 and report.m3 and report.m4

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [19, 20, 21, 22])
    def test_larger_members(self, catalog, k):
        """Members past 18 still carry verified certificates"""
        member = family(k, catalog)
        assert member.algebra.dim == k
        assert verify_certificate(member, catalog)
        assert center_in_derived(member)

    def test_fourteen_uses_an_outer_derivation(self, catalog, h12):
        """D_0 is inner on h, so g_14 is built from the outer derivation t"""
        assert is_inner(h12, derivation_d4n(h12, 0))
        assert not is_inner(h12, derivation_t(h12))


@pytest.mark.slow
class TestReportRange:
    """Every member covered by the report"""

    @pytest.mark.parametrize("k", range(12, 25))
    def test_member(self, catalog, k):
        """Certificate, z(g_k) in g_k' and M1-M5 for g_k"""
        member = family(k, catalog)
        assert verify_certificate(member, catalog)
        assert center_in_derived(member)
        report = mirage_of_h(member, catalog)
        assert report.m1 and report.m2 and report.m3 and report.m4
        assert report.m5_central is True
        assert report.m5_abelian is True
