"""
Tests for bilinear forms and ad-invariant metrics
"""
import pytest

from src.core.derivations import LinearEndo
from src.core.errors import DegenerateFormError, DimensionMismatchError
from src.core.exact_linear import Matrix, Subspace
from src.core.lie_algebra import abelian, center, derived_algebra
from src.core.metric import (
    BilinearForm,
    center_is_derived_perp,
    is_ad_invariant,
    is_isotropic,
    is_nondegenerate_on,
    is_skew,
    metric_adjoint,
    neutral_gram,
    orth_complement,
    radical,
    signature,
)
from src.services.constructions import cotangent


@pytest.fixture
def neutral4():
    return BilinearForm(abelian(4), neutral_gram(2))


class TestBilinearForm:
    """Tests for BilinearForm construction"""

    def test_from_terms_is_symmetric(self, heisenberg):
        """An off-diagonal term sets both Gram entries"""
        form = BilinearForm.from_terms(heisenberg, [(0, 2, 1), (1, 1, -2)])
        assert form.gram[0, 2] == form.gram[2, 0] == 1
        assert form.gram[1, 1] == -2

    def test_non_symmetric_gram_rejected(self, heisenberg):
        """Gram matrices must be symmetric"""
        with pytest.raises(ValueError):
            BilinearForm(heisenberg, Matrix.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 1]]))

    def test_wrong_size_rejected(self, heisenberg):
        """Gram matrix size must match the algebra"""
        with pytest.raises(DimensionMismatchError):
            BilinearForm(heisenberg, Matrix.identity(2))

    def test_degenerate_form_has_no_complement(self, heisenberg):
        """orth_complement needs a nondegenerate form"""
        form = BilinearForm.from_terms(heisenberg, [(0, 0, 1)])
        assert not form.nondegenerate
        with pytest.raises(DegenerateFormError):
            orth_complement(form, Subspace.coordinate(3, [0]))


class TestAdInvariance:
    """Tests for ad-invariance and the center/derived identity"""

    def test_cotangent_metric_is_invariant(self, heisenberg):
        """The pairing metric on T*heis is ad-invariant"""
        ct = cotangent(heisenberg)
        assert is_ad_invariant(ct.metric)

    def test_identity_metric_is_not_invariant(self, heisenberg):
        """The identity form on heis fails with a witness triple"""
        result = is_ad_invariant(BilinearForm(heisenberg, Matrix.identity(3)))
        assert not result
        assert len(result.witness["triple"]) == 3

    def test_center_is_derived_perp(self, catalog):
        """z(g) = (g')^perp on g11"""
        entry = catalog.get("g11")
        g = entry.algebra
        assert center_is_derived_perp(entry.metric, center(g), derived_algebra(g))


class TestSubspaces:
    """Tests for complements, restrictions and radicals"""

    def test_signature_of_neutral_form(self, neutral4):
        """The neutral form on R^4 has signature (2, 2)"""
        assert signature(neutral4) == (2, 2, 0)

    def test_signature_with_null_directions(self, heisenberg):
        """diag(1, -1, 0) has one of each"""
        form = BilinearForm(heisenberg, Matrix.diagonal([1, -1, 0]))
        assert signature(form) == (1, 1, 1)

    def test_isotropic_line(self, neutral4):
        """<v1> is isotropic and equals its own radical"""
        line = Subspace.coordinate(4, [0])
        assert is_isotropic(neutral4, line)
        assert not is_nondegenerate_on(neutral4, line)
        assert radical(neutral4, line) == line

    def test_hyperbolic_plane(self, neutral4):
        """<v1, w1> is nondegenerate with complement <v2, w2>"""
        plane = Subspace.coordinate(4, [0, 2])
        assert is_nondegenerate_on(neutral4, plane)
        assert orth_complement(neutral4, plane) == Subspace.coordinate(4, [1, 3])


class TestSkewMaps:
    """Tests for metric adjoints"""

    def test_skew_map_adjoint_is_negative(self, neutral4):
        """D: v1 -> w2, v2 -> -w1 is skew and D* = -D"""
        d = LinearEndo.from_images(neutral4.algebra, {0: (0, 0, 0, 1), 1: (0, 0, -1, 0)})
        assert is_skew(neutral4, d)
        assert metric_adjoint(neutral4, d).matrix == d.matrix.scale(-1)

    def test_symmetric_map_is_not_skew(self, neutral4):
        """The identity is not skew"""
        assert not is_skew(neutral4, LinearEndo.identity(neutral4.algebra))
