"""
Tests for Lie algebras, series, quotients and gradings
"""
import pytest
from fractions import Fraction

from src.core import lie_algebra
from src.core.errors import DimensionMismatchError, JacobiError, NotAnIdealError
from src.core.exact_linear import Matrix, Subspace, unit_vector
from src.core.lie_algebra import (
    GradedLieAlgebra,
    LieAlgebra,
    abelian,
    bracket_into,
    center,
    centralizer,
    change_basis,
    derived_algebra,
    direct_sum,
    graded_check,
    ideal_generated,
    is_lie_homomorphism,
    jacobi_check,
    lcs,
    nilpotency_step,
    quotient,
    split_abelian_factor,
    subalgebra,
    ucs,
)


def e(n, i):
    return unit_vector(n, i - 1)


class TestConstruction:
    """Tests for LieAlgebra.from_brackets"""

    def test_antisymmetry(self, heisenberg):
        """[x, y] = -[y, x]"""
        x, y = (1, 2, 0), (0, 1, 5)
        assert heisenberg.bracket(x, y) == tuple(-c for c in heisenberg.bracket(y, x))

    def test_bilinearity(self, filiform4):
        """[2x + y, z] = 2[x, z] + [y, z]"""
        x, y, z = (1, 0, 1, 0), (0, 1, 0, 0), (1, 1, 1, 1)
        lhs = filiform4.bracket(tuple(2 * a + b for a, b in zip(x, y)), z)
        rhs = tuple(2 * a + b for a, b in zip(filiform4.bracket(x, z), filiform4.bracket(y, z)))
        assert lhs == rhs

    def test_reversed_pairs_fold_with_sign(self):
        """Giving [e2, e1] = -e3 is the same as [e1, e2] = e3"""
        a = LieAlgebra.from_brackets(3, {(1, 0): {2: -1}})
        b = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}})
        assert a == b

    def test_jacobi_failure_raises_with_witness(self):
        """Structure constants violating Jacobi are rejected"""
        brackets = {(0, 1): {2: 1}, (0, 2): {3: 1}, (1, 2): {3: 1}, (1, 3): {0: 1}}
        with pytest.raises(JacobiError) as excinfo:
            LieAlgebra.from_brackets(4, brackets)
        assert "triple" in excinfo.value.witness

    def test_jacobi_check_without_raising(self):
        """With check_jacobi=False the defect is reported by jacobi_check"""
        brackets = {(0, 1): {2: 1}, (0, 2): {3: 1}, (1, 2): {3: 1}, (1, 3): {0: 1}}
        g = LieAlgebra.from_brackets(4, brackets, check_jacobi=False)
        result = jacobi_check(g)
        assert not result
        assert result.witness["triple"]

    def test_index_out_of_range(self):
        """Bracket indices must lie inside the dimension"""
        with pytest.raises(DimensionMismatchError):
            LieAlgebra.from_brackets(2, {(0, 2): {1: 1}})

    def test_equality_ignores_name(self, heisenberg):
        """Names and labels do not affect equality"""
        assert heisenberg.renamed("other") == heisenberg


class TestSeries:
    """Tests for center, derived algebra and central series"""

    def test_heisenberg_center(self, heisenberg):
        """z(heis) = <e3> = heis'"""
        assert center(heisenberg) == Subspace.coordinate(3, [2])
        assert derived_algebra(heisenberg) == center(heisenberg)

    def test_filiform_series(self, filiform4):
        """LCS 4,2,1,0 and UCS 1,2,4"""
        assert [s.dim for s in lcs(filiform4)] == [4, 2, 1, 0]
        assert [s.dim for s in ucs(filiform4)] == [1, 2, 4]
        assert nilpotency_step(filiform4) == 3

    def test_non_nilpotent_step(self, sl2):
        """sl(2) is perfect, so it is not nilpotent"""
        assert nilpotency_step(sl2) is None

    def test_abelian_step(self):
        """An abelian algebra is 1-step nilpotent"""
        assert nilpotency_step(abelian(3)) == 1

    def test_centralizer(self, filiform4):
        """C(<e2>) in the filiform algebra is <e2, e3, e4>"""
        assert centralizer(filiform4, Subspace.coordinate(4, [1])) == Subspace.coordinate(4, [1, 2, 3])

    def test_bracket_into(self, filiform4):
        """{x : [x, e1] in <e4>} = <e1, e3, e4>"""
        space = bracket_into(filiform4, [e(4, 1)], Subspace.coordinate(4, [3]))
        assert space == Subspace.coordinate(4, [0, 2, 3])

    def test_ideal_generated(self, filiform4):
        """The ideal generated by e2 is <e2, e3, e4>"""
        assert ideal_generated(filiform4, Subspace.coordinate(4, [1])) == Subspace.coordinate(4, [1, 2, 3])


class TestQuotients:
    """Tests for quotients, sums and basis changes"""

    def test_quotient_by_center(self, filiform4):
        """fil4 / z = heis"""
        q = quotient(filiform4, center(filiform4))
        assert q.algebra == LieAlgebra.from_brackets(3, {(0, 1): {2: 1}})
        assert q.representatives == (0, 1, 2)

    def test_quotient_projection_is_homomorphism(self, filiform4):
        """The projection preserves brackets"""
        q = quotient(filiform4, center(filiform4))
        assert is_lie_homomorphism(filiform4, q.algebra, q.projection)

    def test_quotient_checks_its_projection(self, filiform4, mocker):
        """Building a quotient verifies the projection"""
        spy = mocker.spy(lie_algebra, "is_lie_homomorphism")
        q = quotient(filiform4, center(filiform4))
        spy.assert_called_once_with(filiform4, q.algebra, q.projection)
        assert spy.spy_return

    def test_quotient_by_non_ideal(self, heisenberg):
        """<e1> is not an ideal of heis"""
        with pytest.raises(NotAnIdealError):
            quotient(heisenberg, Subspace.coordinate(3, [0]))

    def test_direct_sum_dimension(self, heisenberg):
        """heis + R^2 has a 3-dimensional center"""
        g = direct_sum(heisenberg, abelian(2))
        assert g.dim == 5
        assert center(g).dim == 3

    def test_change_basis_roundtrip(self, filiform4):
        """Rewriting in a basis and back gives the same constants"""
        rows = [(1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 2, 0), (0, 0, 0, 1)]
        rewritten = change_basis(filiform4, rows)
        assert rewritten != filiform4
        inverse_rows = [(1, -1, 0, 0), (0, 1, 0, 0), (0, 0, Fraction(1, 2), 0), (0, 0, 0, 1)]
        assert change_basis(rewritten, inverse_rows) == filiform4

    def test_subalgebra(self, filiform4):
        """<e1, e3, e4> is a subalgebra with [e1, e3] = e4"""
        sub = subalgebra(filiform4, Subspace.coordinate(4, [0, 2, 3]))
        assert sub == LieAlgebra.from_brackets(3, {(0, 1): {2: 1}})

    def test_split_abelian_factor(self, heisenberg):
        """heis + R^2 splits off a 2-dimensional abelian factor"""
        g = direct_sum(heisenberg, abelian(2))
        ideal, factor = split_abelian_factor(g)
        assert factor.dim == 2
        assert ideal.dim == 3
        assert subalgebra(g, ideal) == heisenberg


class TestGradings:
    """Tests for graded algebras"""

    def test_filiform_grading(self, filiform4):
        """Degrees 1, 2, 3, 4 on e1..e4 grade the filiform algebra"""
        layers = tuple(Subspace.coordinate(4, [i]) for i in range(4))
        graded = GradedLieAlgebra(filiform4, layers, (1, 2, 3, 4))
        assert graded_check(graded)
        assert graded.degree_matrix() == Matrix.diagonal([1, 2, 3, 4])

    def test_invalid_grading(self, heisenberg):
        """[e1, e2] = e3 must land in degree 2"""
        layers = (Subspace.coordinate(3, [0, 1]), Subspace.coordinate(3, [2]))
        assert graded_check(GradedLieAlgebra(heisenberg, layers, (1, 2)))
        assert not graded_check(GradedLieAlgebra(heisenberg, layers, (1, 3)))
