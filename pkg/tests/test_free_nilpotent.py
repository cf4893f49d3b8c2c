"""
Tests for free nilpotent Lie algebras and their cotangents
"""
import pytest
from fractions import Fraction

from src.core.derivations import nikolayevsky
from src.core.errors import WorkbenchError
from src.core.exact_linear import unit_vector
from src.core.lie_algebra import graded_check, nilpotency_step
from src.services import free_nilpotent as fn
from src.services.nice_analysis import eigenspace_bound_obstruction, graded_irreducibility

HALL_EXAMPLE = [
    (2, 1, 3), (3, 1, 4), (3, 2, 5), (4, 1, 6), (4, 2, 7), (5, 2, 8),
    (6, 1, 9), (6, 2, 10), (7, 2, 11), (8, 2, 12), (4, 3, 13), (5, 3, 14),
]


class TestWittDimensions:
    """Tests for the layer dimensions d_m(k)"""

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_closed_forms(self, m):
        """d_m(k) agrees with the closed forms for k <= 5"""
        assert fn.witt_dim(m, 1) == m
        assert fn.witt_dim(m, 2) == m * (m - 1) // 2
        assert fn.witt_dim(m, 3) == m * (m * m - 1) // 3
        assert fn.witt_dim(m, 4) == m * m * (m * m - 1) // 4
        assert fn.witt_dim(m, 5) == m * (m ** 4 - 1) // 5

    def test_layer_dims(self):
        """n_{2,5} has layers 2, 1, 2, 3, 6"""
        assert fn.layer_dims(2, 5) == (2, 1, 2, 3, 6)

    def test_invalid_arguments(self):
        """m < 2 is rejected"""
        with pytest.raises(ValueError):
            fn.witt_dim(1, 3)


class TestHallBasis:
    """Tests for the Hall basis construction"""

    def test_dimension(self):
        """n_{2,5} is 14-dimensional and 5-step"""
        free = fn.build(2, 5)
        assert free.dim == 14
        assert nilpotency_step(free.algebra) == 5

    @pytest.mark.parametrize("left,right,result", HALL_EXAMPLE)
    def test_basis_order(self, left, right, result):
        """[e_left, e_right] = e_result in n_{2,5}"""
        free = fn.build(2, 5)
        n = free.dim
        assert free.algebra.bracket(unit_vector(n, left - 1), unit_vector(n, right - 1)) == unit_vector(n, result - 1)

    def test_render(self):
        """e5 of n_{2,5} is [[e2, e1], e2]"""
        words = fn.hall_words(2, 5)
        assert words[4].render(words) == "[[e2, e1], e2]"

    def test_grading(self):
        """The degree layers grade n_{3,3}"""
        free = fn.build(3, 3)
        assert graded_check(free.graded)
        assert [free.layer(k).dim for k in (1, 2, 3)] == [3, 3, 8]

    def test_rejects_small_m(self):
        """One generator does not give a free nilpotent algebra here"""
        with pytest.raises(ValueError):
            fn.build(1, 3)


class TestNikolayevskyFree:
    """Tests for lambda and the free Nikolayevsky derivation"""

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_lambda_step_two(self, m):
        """lambda = m / (2m - 1) for s = 2"""
        assert fn.free_lambda(m, 2) == Fraction(m, 2 * m - 1)

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_lambda_step_three(self, m):
        """lambda = (m^2 + m - 1) / (3m^2 + 2m - 4) for s = 3"""
        assert fn.free_lambda(m, 3) == Fraction(m * m + m - 1, 3 * m * m + 2 * m - 4)

    def test_formula_matches_general_computation(self):
        """lambda sum k pi_k is the Nikolayevsky derivation of n_{2,3}"""
        computed = nikolayevsky(fn.build(2, 3).algebra)
        assert computed.endo.matrix == fn.nikolayevsky_free(2, 3).endo.matrix

    @pytest.mark.parametrize("m,s", [(2, 4), (2, 6), (3, 4), (3, 5), (4, 7)])
    def test_estimate(self, m, s):
        """d_m(s) + 2 sum k d_m(k) < m^s"""
        assert fn.estimate_check(m, s)

    def test_estimate_needs_step_four(self):
        """The estimate is stated for s >= 4"""
        with pytest.raises(WorkbenchError):
            fn.estimate_check(2, 3)

    def test_eigen_equation(self):
        """Only (2, 2) with n = 2 solves the eigenvalue equation among small cases"""
        assert fn.cotangent_eigen_equation(2, 2, 2)
        assert not any(fn.cotangent_eigen_equation(2, 3, n) for n in (1, 2, 3))
        assert not any(fn.cotangent_eigen_equation(3, 3, n) for n in (1, 2, 3))

    def test_eigen_equation_range(self):
        """n must lie in 1..s"""
        with pytest.raises(ValueError):
            fn.cotangent_eigen_equation(2, 3, 4)


class TestNiceness:
    """Tests for the niceness verdicts on n_{m,s}"""

    @pytest.mark.parametrize("m,s,nice,reason", [
        (4, 2, True, "step-at-most-2"),
        (2, 3, True, "hall-basis"),
        (2, 4, True, "hall-basis"),
        (2, 5, False, "pair-obstruction"),
        (3, 3, False, "eigenspace-bound"),
    ])
    def test_verdicts(self, m, s, nice, reason):
        """Nice iff s <= 2 or (m, s) in {(2, 3), (2, 4)}"""
        verdict = fn.niceness_verdict(m, s)
        assert verdict.nice is nice
        assert verdict.reason == reason
        assert verdict.to_dict()["verdict"] == ("nice" if nice else "nonnice")

    def test_pair_obstruction(self):
        """dim W_5 = 6 exceeds 4 for m = 2, computed from the lowest eigenspace"""
        obstruction = fn.pair_obstruction(2, 5)
        assert obstruction.applies
        assert obstruction.w5_dim == 6
        assert not fn.pair_obstruction(3, 5).applies

    def test_eigenspace_verdict_is_computed(self, mocker):
        """The n_{3,3} verdict comes from the eigenspaces of the built algebra"""
        spy = mocker.spy(fn, "eigenspace_bound_obstruction")
        verdict = fn.niceness_verdict(3, 3)
        spy.assert_called_once()
        assert spy.spy_return.bracket_dim == 8
        assert "8 > 7" in verdict.detail

    def test_eigenspace_bound_violated_on_n33(self):
        """dim [[W_1, W_1], W_1] = 8 > 7 on n_{3,3}"""
        violation = eigenspace_bound_obstruction(fn.build(3, 3).algebra, fn.nikolayevsky_free(3, 3))
        assert violation is not None
        assert violation.bracket_dim == 8
        assert violation.bound == 7


class TestCotangents:
    """Tests for T* n_{m,s}"""

    @pytest.mark.parametrize("m,s", [(2, 2), (2, 3)])
    def test_structure_checks(self, m, s):
        """Step, center and derived algebra of T* n_{m,s}"""
        assert fn.cotangent_step_check(m, s)
        assert fn.cotangent_center_check(m, s)
        assert fn.cotangent_derived_check(m, s)

    def test_grading(self):
        """W_i in degree i and W_i* in degree 2s + 1 - i grade T* n_{2,3}"""
        assert graded_check(fn.cotangent_free(2, 3).graded)

    def test_nikolayevsky_scale(self):
        """N~ = a (N - N* + 2P) with 0 < a < 1 on T* n_{2,3}"""
        a = fn.cotangent_nikolayevsky_scale(2, 3)
        assert 0 < a < 1

    def test_w1_eigenspace(self):
        """W_1 is an eigenspace for (2, 3) but shares its eigenvalue with W_2* for (2, 2)"""
        assert fn.w1_eigenspace_check(2, 3)
        assert not fn.w1_eigenspace_check(2, 2)

    def test_irreducible(self):
        """T* n_{2,3} passes all three irreducibility conditions"""
        ct = fn.cotangent_free(2, 3)
        report = graded_irreducibility(ct.graded, fn.cotangent_generic_condition(2, 3))
        assert report.irreducible

    @pytest.mark.slow
    def test_n33_cotangent(self):
        """T* n_{3,3} passes the structure checks"""
        assert fn.cotangent_step_check(3, 3)
        assert fn.cotangent_center_check(3, 3)
        assert fn.cotangent_derived_check(3, 3)
