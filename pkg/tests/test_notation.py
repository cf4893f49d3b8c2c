"""
Tests for the structure-constant text format
"""
import pytest
from fractions import Fraction

from src.core.errors import AlgebraSyntaxError
from src.core.lie_algebra import LieAlgebra
from src.services.notation import (
    emit_algebra,
    emit_from_algebra,
    format_scaled_diagonal,
    parse_algebra,
)


class TestParsing:
    """Tests for parse_algebra"""

    def test_sign_convention(self):
        """'d e3 = -e1^e2' means [e1, e2] = e3"""
        g = parse_algebra("dim: 3\nd e3 = -e1^e2\n").to_algebra()
        assert g.bracket((1, 0, 0), (0, 1, 0)) == (0, 0, 1)

    def test_emission_matches_convention(self, heisenberg):
        """[e1, e2] = e3 is written back as 'd e3 = -e1^e2'"""
        assert emit_from_algebra(heisenberg) == "name: heis\ndim: 3\nd e3 = -e1^e2\n"

    def test_compact_indices(self):
        """e^{12} and e^{1,10} name the same wedges as e1^e2 and e1^e10"""
        compact = parse_algebra("dim: 10\nd e3 = e^{12}\nd e4 = 2 e^{1,10}\n")
        plain = parse_algebra("dim: 10\nd e3 = e1^e2\nd e4 = 2 e1^e10\n")
        assert compact.differentials == plain.differentials

    def test_ambiguous_compact_indices(self):
        """e^{123} needs a comma"""
        with pytest.raises(AlgebraSyntaxError):
            parse_algebra("dim: 12\nd e3 = e^{123}\n")

    def test_reversed_wedge_flips_sign(self):
        """e2^e1 = -e1^e2"""
        doc = parse_algebra("dim: 3\nd e3 = e2^e1\n")
        assert doc.differentials == {2: {(0, 1): Fraction(-1)}}

    def test_fractions_and_cancellation(self):
        """Coefficients add up and cancelling terms disappear"""
        doc = parse_algebra("dim: 4\nd e4 = 1/2 e1^e2 + e1^e3 - 1/2 e1^e2\n")
        assert doc.differentials == {3: {(0, 2): Fraction(1)}}

    def test_zero_differential(self):
        """'d e1 = 0' is accepted and dropped"""
        doc = parse_algebra("dim: 2\nd e1 = 0\n")
        assert doc.differentials == {}

    def test_metric_line(self):
        """Off-diagonal metric terms set both Gram entries"""
        doc = parse_algebra("name: h\ndim: 3\nd e3 = -e1^e2\ng = e1*e3 + 1/2 e2*e2\n")
        form = doc.to_metric(doc.to_algebra())
        assert form.gram[0, 2] == form.gram[2, 0] == 1
        assert form.gram[1, 1] == Fraction(1, 2)

    def test_comments_and_blank_lines(self):
        """Comments and blank lines are ignored"""
        doc = parse_algebra("# heading\n\nname: x  # trailing\ndim: 3\n\nd e3 = -e1^e2\n")
        assert doc.name == "x"
        assert doc.dim == 3


class TestSyntaxErrors:
    """Tests for error positions"""

    def test_index_out_of_range(self):
        """Indices beyond the dimension are reported with their line"""
        with pytest.raises(AlgebraSyntaxError) as excinfo:
            parse_algebra("dim: 3\nd e3 = e1^e4\n")
        assert excinfo.value.line == 2

    def test_unknown_statement(self):
        """Unknown keywords report line and column"""
        with pytest.raises(AlgebraSyntaxError) as excinfo:
            parse_algebra("dim: 3\n  bracket e1 e2\n")
        assert (excinfo.value.line, excinfo.value.column) == (2, 3)

    def test_missing_dimension(self):
        """A document needs a dim line"""
        with pytest.raises(AlgebraSyntaxError):
            parse_algebra("name: x\n")

    def test_dim_must_come_first(self):
        """Differentials need the dimension"""
        with pytest.raises(AlgebraSyntaxError) as excinfo:
            parse_algebra("d e3 = -e1^e2\ndim: 3\n")
        assert excinfo.value.line == 1

    def test_repeated_differential(self):
        """Each differential appears once"""
        with pytest.raises(AlgebraSyntaxError) as excinfo:
            parse_algebra("dim: 3\nd e3 = e1^e2\nd e3 = e1^e2\n")
        assert excinfo.value.line == 3

    def test_self_wedge(self):
        """e1^e1 vanishes and is rejected"""
        with pytest.raises(AlgebraSyntaxError):
            parse_algebra("dim: 3\nd e3 = e1^e1\n")

    def test_malformed_term(self):
        """Garbage inside a differential is a parse error"""
        with pytest.raises(AlgebraSyntaxError) as excinfo:
            parse_algebra("dim: 3\nd e3 = e1 ^^ e2\n")
        assert excinfo.value.line == 2


class TestEmission:
    """Tests for canonical emission"""

    def test_catalog_round_trip(self, catalog):
        """Every catalog file is already in canonical form"""
        for entry in catalog:
            assert emit_algebra(parse_algebra(entry.text)) == entry.text, entry.name

    def test_emit_then_parse(self, filiform4):
        """Emitted text parses back to the same algebra"""
        again = parse_algebra(emit_from_algebra(filiform4)).to_algebra()
        assert again == filiform4
        assert again == LieAlgebra.from_brackets(4, {(0, 1): {2: 1}, (0, 2): {3: 1}})

    @pytest.mark.parametrize("values,expected", [
        ((Fraction(2, 3), Fraction(2, 3), Fraction(4, 3)), "2/3 * diag(1,1,2)"),
        ((Fraction(1, 2), Fraction(3, 4)), "1/4 * diag(2,3)"),
        ((0, 0, 0), "0"),
        ((2, 4, 6), "2 * diag(1,2,3)"),
    ])
    def test_format_scaled_diagonal(self, values, expected):
        """Weights are coprime integers"""
        assert format_scaled_diagonal(values) == expected
