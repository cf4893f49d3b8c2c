"""
Tests for exact rational linear algebra
"""
import pytest
from fractions import Fraction

from src.core import exact_linear
from src.core.errors import DimensionMismatchError, IrrationalSpectrumError, NikolayevskyError, SingularMatrixError
from src.core.exact_linear import (
    Matrix,
    Subspace,
    determinant,
    eigenspace,
    image,
    inverse,
    kernel,
    normalize_projective,
    rank,
    rational_eigenvalues,
    rref,
    semisimple_part,
    solve,
    to_fraction,
    unit_vector,
)


class TestScalars:
    """Tests for scalar and vector helpers"""

    def test_to_fraction_accepts_strings(self):
        """'p/q' strings parse to normalized fractions"""
        assert to_fraction("6/4") == Fraction(3, 2)
        assert to_fraction(-2) == Fraction(-2)

    def test_normalize_projective_first_nonzero_is_one(self):
        """Projective normal form scales the first nonzero entry to 1"""
        assert normalize_projective((0, Fraction(-2), 4)) == (0, 1, -2)


class TestMatrix:
    """Tests for Matrix construction and arithmetic"""

    def test_identity_and_product(self):
        """I @ M = M"""
        m = Matrix.from_rows([[1, 2], [3, 4]])
        assert Matrix.identity(2) @ m == m

    def test_shape_mismatch_raises(self):
        """Adding matrices of different shapes raises"""
        with pytest.raises(DimensionMismatchError):
            Matrix.identity(2) + Matrix.identity(3)

    def test_determinant_and_inverse(self):
        """det and inverse are exact"""
        m = Matrix.from_rows([[2, 1], [1, 1]])
        assert determinant(m) == 1
        assert inverse(m) @ m == Matrix.identity(2)

    def test_inverse_of_singular_matrix_raises(self):
        """Singular matrices have no inverse"""
        with pytest.raises(SingularMatrixError):
            inverse(Matrix.from_rows([[1, 2], [2, 4]]))

    def test_rref_is_idempotent(self):
        """rref(rref(M)) = rref(M)"""
        m = Matrix.from_rows([[1, 2, 3], [2, 4, 7], [1, 1, 1]])
        assert rref(rref(m)) == rref(m)

    def test_rank_nullity(self):
        """rank + dim ker = number of columns"""
        m = Matrix.from_rows([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1]])
        assert rank(m) + kernel(m).dim == m.cols
        assert image(m).dim == rank(m)


class TestSolve:
    """Tests for linear systems"""

    def test_particular_solution(self):
        """A consistent system has a solution with free variables zero"""
        m = Matrix.from_rows([[1, 1, 0], [0, 0, 1]])
        x = solve(m, [3, 5])
        assert m.apply(x) == (3, 5)
        assert x[1] == 0

    def test_inconsistent_system(self):
        """An inconsistent system returns None"""
        m = Matrix.from_rows([[1, 1], [2, 2]])
        assert solve(m, [1, 3]) is None

    def test_wrong_right_hand_side(self):
        """The right-hand side length must match the rows"""
        with pytest.raises(DimensionMismatchError):
            solve(Matrix.identity(2), [1, 2, 3])


class TestSubspace:
    """Tests for canonical subspaces"""

    def test_span_is_canonical(self):
        """Different spanning sets of the same space compare equal"""
        a = Subspace.span([(1, 1, 0), (0, 1, 0)], 3)
        b = Subspace.coordinate(3, [0, 1])
        assert a == b
        assert hash(a) == hash(b)

    def test_membership(self):
        """Vectors in the span are contained, others are not"""
        s = Subspace.span([(1, 2, 3)], 3)
        assert (2, 4, 6) in s
        assert (1, 0, 0) not in s

    def test_grassmann_identity(self):
        """dim(A + B) + dim(A & B) = dim A + dim B"""
        a = Subspace.span([(1, 0, 0, 0), (0, 1, 1, 0)], 4)
        b = Subspace.span([(0, 1, 1, 0), (0, 0, 0, 1), (1, 1, 0, 0)], 4)
        assert (a + b).dim + (a & b).dim == a.dim + b.dim

    def test_intersection(self):
        """Intersection of two planes in Q^3 is a line"""
        a = Subspace.coordinate(3, [0, 1])
        b = Subspace.coordinate(3, [1, 2])
        assert a & b == Subspace.coordinate(3, [1])

    def test_annihilator(self):
        """The annihilator has complementary dimension"""
        s = Subspace.span([(1, 1, 0)], 3)
        ann = s.annihilator()
        assert ann.dim == 2
        assert all(sum(x * y for x, y in zip(v, (1, 1, 0))) == 0 for v in ann.basis)

    def test_ambient_mismatch(self):
        """Subspaces of different ambient spaces do not combine"""
        with pytest.raises(DimensionMismatchError):
            Subspace.zero(2) + Subspace.zero(3)

    def test_complement_indices(self):
        """Non-pivot coordinates complete the subspace"""
        s = Subspace.span([(1, 0, 1), (0, 1, 0)], 3)
        assert s.complement_indices() == (2,)


class TestSpectra:
    """Tests for eigenvalues and the semisimple part"""

    def test_rational_eigenvalues_with_multiplicity(self):
        """Eigenvalues come sorted with algebraic multiplicities"""
        m = Matrix.from_rows([[2, 1, 0], [0, 2, 0], [0, 0, 5]])
        assert rational_eigenvalues(m) == [(Fraction(2), 2), (Fraction(5), 1)]

    def test_irrational_eigenvalue_raises(self):
        """x^2 - 2 has no rational roots"""
        m = Matrix.from_rows([[0, 2], [1, 0]])
        with pytest.raises(IrrationalSpectrumError):
            rational_eigenvalues(m)

    def test_semisimple_part_of_jordan_block(self):
        """The semisimple part of a Jordan block is the scalar part"""
        m = Matrix.from_rows([[3, 1], [0, 3]])
        assert semisimple_part(m) == Matrix.diagonal([3, 3])

    def test_semisimple_part_commutes(self):
        """S commutes with M and M - S is nilpotent"""
        m = Matrix.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 2]])
        s = semisimple_part(m)
        assert s @ m == m @ s
        n = m - s
        assert (n @ n @ n).is_zero()

    def test_semisimple_part_without_convergence(self, monkeypatch):
        """A Newton iteration that runs out of steps is a workbench error"""
        monkeypatch.setattr(exact_linear, "_MAX_NEWTON_STEPS", 0)
        with pytest.raises(NikolayevskyError):
            semisimple_part(Matrix.from_rows([[3, 1], [0, 3]]))

    def test_eigenspace(self):
        """Eigenspace of a diagonal matrix is a coordinate subspace"""
        m = Matrix.diagonal([1, 2, 1])
        assert eigenspace(m, 1) == Subspace.coordinate(3, [0, 2])
        assert unit_vector(3, 1) in eigenspace(m, 2)
