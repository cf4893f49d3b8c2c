"""
Structure-constant text format.

A document lists the differentials of the dual basis, one line each:

    name: g11
    dim: 11
    d e3 = -e1^e2
    d e5 = 1/2 e2^e4
    g = -e1*e11 + e2*e10 - 2 e5*e5

A term c e^i^e^j in the line for d e^k sets c_ij^k = -c, so "d e3 = -e1^e2"
means [e1, e2] = e3. The compact form e^{1,10} (or e^{12} for single digit
indices) is accepted as input; emission always uses ei^ej. In the metric line
c ei*ej with i != j sets both symmetric Gram entries, and c ei*ei the diagonal.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pyparsing as pp

from src.core.errors import AlgebraSyntaxError
from src.core.exact_linear import Matrix
from src.core.lie_algebra import LieAlgebra
from src.core.metric import BilinearForm

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


# =============================================================================
# GRAMMAR
# =============================================================================

def _compact_indices(s, loc, toks):
    body = toks[0][3:-1]
    if "," in body:
        first, second = body.split(",")
        return [int(first), int(second)]
    if len(body) != 2:
        raise pp.ParseException(s, loc, "indices above 9 need a comma, as in e^{1,10}")
    return [int(body[0]), int(body[1])]


def _make_grammar() -> Dict[str, pp.ParserElement]:
    index = pp.Regex(r"e\d+").set_parse_action(lambda t: int(t[0][1:]))
    compact = pp.Regex(r"e\^\{\d+(?:,\d+)?\}").set_parse_action(_compact_indices)
    wedge = pp.Group(index + pp.Suppress("^") + index | compact)
    product = pp.Group(index + pp.Suppress("*") + index)
    sign = pp.one_of("+ -")
    coefficient = pp.Regex(r"\d+(?:/\d+)?")

    def terms(pair: pp.ParserElement) -> pp.ParserElement:
        first = pp.Group(pp.Opt(sign, "+")("sign") + pp.Opt(coefficient, "1")("coef") + pair("pair"))
        rest = pp.Group(sign("sign") + pp.Opt(coefficient, "1")("coef") + pair("pair"))
        zero = pp.Suppress(pp.Literal("0") + ~pp.FollowedBy(pp.Regex(r"\S")))
        return zero | (first + pp.ZeroOrMore(rest))

    return {
        "name": pp.Suppress(pp.Keyword("name") + ":") + pp.Regex(r"\S.*")("value"),
        "dim": pp.Suppress(pp.Keyword("dim") + ":") + pp.Word(pp.nums)("value"),
        "d": pp.Suppress(pp.Keyword("d")) + index("target") + pp.Suppress("=") + pp.Group(terms(wedge))("terms"),
        "g": pp.Suppress(pp.Keyword("g") + "=") + pp.Group(terms(product))("terms"),
    }


GRAMMAR = _make_grammar()


# =============================================================================
# DOCUMENT
# =============================================================================

@dataclass
class AlgebraDocument:
    """Parsed structure-constant document, 0-based indices.

    differentials[k][(i, j)] with i < j is the coefficient of e^i^e^j in d e^k.
    metric[(i, j)] with i <= j is the coefficient of ei*ej.
    """
    name: str
    dim: int
    differentials: Dict[int, Dict[Pair, Fraction]] = field(default_factory=dict)
    metric: Optional[Dict[Pair, Fraction]] = None

    def to_algebra(self, check_jacobi: bool = True) -> LieAlgebra:
        brackets: Dict[Pair, Dict[int, Fraction]] = {}
        for k, terms in self.differentials.items():
            for (i, j), c in terms.items():
                brackets.setdefault((i, j), {})[k] = -c
        return LieAlgebra.from_brackets(self.dim, brackets, name=self.name, check_jacobi=check_jacobi)

    def to_metric(self, algebra: LieAlgebra) -> Optional[BilinearForm]:
        if self.metric is None:
            return None
        return BilinearForm.from_terms(algebra, ((i, j, c) for (i, j), c in self.metric.items()))


def _error(message: str, line: int, column: int = 1) -> AlgebraSyntaxError:
    return AlgebraSyntaxError(message, line=line, column=column)


def _collect_terms(groups: Iterable[pp.ParseResults], dim: int, lineno: int, symmetric: bool) -> Dict[Pair, Fraction]:
    collected: Dict[Pair, Fraction] = {}
    for term in groups:
        i, j = term["pair"][0], term["pair"][1]
        for index in (i, j):
            if not 1 <= index <= dim:
                raise _error(f"index e{index} outside 1..{dim}", lineno)
        value = Fraction(term["coef"])
        if term["sign"] == "-":
            value = -value
        if i == j and not symmetric:
            raise _error(f"e{i}^e{i} vanishes identically", lineno)
        if i > j:
            i, j = j, i
            if not symmetric:
                value = -value
        key = (i - 1, j - 1)
        total = collected.get(key, Fraction(0)) + value
        if total:
            collected[key] = total
        else:
            collected.pop(key, None)
    return collected


def parse_algebra(text: str) -> AlgebraDocument:
    """Parse a structure-constant document.

    Raises:
        AlgebraSyntaxError: On malformed lines or out-of-range indices,
            with the 1-based line and column.
    """
    name = ""
    dim: Optional[int] = None
    differentials: Dict[int, Dict[Pair, Fraction]] = {}
    metric: Optional[Dict[Pair, Fraction]] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        keyword = line.split(None, 1)[0].rstrip(":=")
        grammar = GRAMMAR.get(keyword)
        if grammar is None:
            raise _error(f"unknown statement '{keyword}'", lineno, len(line) - len(line.lstrip()) + 1)
        try:
            parsed = grammar.parse_string(line, parse_all=True)
        except pp.ParseException as exc:
            raise _error(exc.msg, lineno, exc.column) from exc

        if keyword == "name":
            name = parsed["value"].strip()
        elif keyword == "dim":
            if dim is not None:
                raise _error("dimension given twice", lineno)
            dim = int(parsed["value"])
        else:
            if dim is None:
                raise _error("'dim:' must precede differentials and the metric", lineno)
            if keyword == "d":
                target = parsed["target"]
                if not 1 <= target <= dim:
                    raise _error(f"index e{target} outside 1..{dim}", lineno)
                if target - 1 in differentials:
                    raise _error(f"differential of e{target} given twice", lineno)
                terms = _collect_terms(parsed["terms"], dim, lineno, symmetric=False)
                differentials[target - 1] = terms
            else:
                if metric is not None:
                    raise _error("metric given twice", lineno)
                metric = _collect_terms(parsed["terms"], dim, lineno, symmetric=True)

    if dim is None:
        raise _error("missing 'dim:' line", 1)
    differentials = {k: v for k, v in differentials.items() if v}
    logger.debug(f"parsed document {name or '<unnamed>'} of dimension {dim}")
    return AlgebraDocument(name=name, dim=dim, differentials=differentials, metric=metric)


# =============================================================================
# EMISSION
# =============================================================================

def format_fraction(value: Fraction) -> str:
    """Exact 'p/q' rendering (integers without denominator)."""
    return str(Fraction(value))


def format_vector(values: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_fraction(v) for v in values) + ")"


def format_scaled_diagonal(values: Sequence[Fraction]) -> str:
    """'33/119 * diag(1,1,2,...)' with coprime integer weights, or '0'."""
    values = [Fraction(v) for v in values]
    if not any(values):
        return "0"
    numerators = reduce(gcd, (v.numerator for v in values if v))
    denominators = reduce(lambda a, b: a * b // gcd(a, b), (v.denominator for v in values))
    scale = Fraction(numerators, denominators)
    weights = ",".join(format_fraction(v / scale) for v in values)
    return f"{format_fraction(scale)} * diag({weights})"


def _format_terms(terms: Sequence[Tuple[Fraction, str]]) -> str:
    if not terms:
        return "0"
    parts: List[str] = []
    for position, (c, symbol) in enumerate(terms):
        magnitude = abs(c)
        body = symbol if magnitude == 1 else f"{format_fraction(magnitude)} {symbol}"
        if position == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"{'-' if c < 0 else '+'} {body}")
    return " ".join(parts)


def emit_algebra(doc: AlgebraDocument) -> str:
    """Canonical text: differentials by target, terms by (i, j), metric last."""
    lines = [f"name: {doc.name}", f"dim: {doc.dim}"]
    for k in sorted(doc.differentials):
        terms = [
            (c, f"e{i + 1}^e{j + 1}") for (i, j), c in sorted(doc.differentials[k].items()) if c
        ]
        if terms:
            lines.append(f"d e{k + 1} = {_format_terms(terms)}")
    if doc.metric is not None:
        terms = [(c, f"e{i + 1}*e{j + 1}") for (i, j), c in sorted(doc.metric.items()) if c]
        lines.append(f"g = {_format_terms(terms)}")
    return "\n".join(lines) + "\n"


def document_from_algebra(
    g: LieAlgebra,
    metric: Optional[BilinearForm] = None,
    name: Optional[str] = None,
) -> AlgebraDocument:
    differentials: Dict[int, Dict[Pair, Fraction]] = {}
    for i, j, row in g.nonzero_brackets():
        for k, c in row.items():
            differentials.setdefault(k, {})[(i, j)] = -c
    metric_terms = None
    if metric is not None:
        metric_terms = {(i, j): c for i, j, c in metric.terms()}
    return AlgebraDocument(name=name if name is not None else g.name, dim=g.dim,
                           differentials=differentials, metric=metric_terms)


def emit_from_algebra(g: LieAlgebra, metric: Optional[BilinearForm] = None, name: Optional[str] = None) -> str:
    return emit_algebra(document_from_algebra(g, metric, name))


def gram_from_terms(dim: int, terms: Dict[Pair, Fraction]) -> Matrix:
    cells: Dict[Pair, Fraction] = {}
    for (i, j), c in terms.items():
        cells[(i, j)] = cells.get((i, j), Fraction(0)) + c
        if i != j:
            cells[(j, i)] = cells.get((j, i), Fraction(0)) + c
    return Matrix.from_sparse(cells, dim, dim)
