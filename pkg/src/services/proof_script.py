"""
Proof scripts: replayable nonniceness arguments.

    target g11
    1. E1, E2, E3, E4, E5 := eigenspaces
    2. e3 := bracket_span E1 E1        expect span(e3)
    ...
    12. contradiction e4 ; e5 e6

Each statement binds names to subspaces recomputed by a deduction rule;
one-dimensional results are nice elements and may be used where a rule wants
an element. A script ends with `contradiction v ; w1 w2` or `qed`.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import pyparsing as pp

from src.config import Config
from src.core.errors import AlgebraSyntaxError, ScriptStepError, UnrecordedFactError
from src.core.exact_linear import Subspace, Vector, dense
from src.services.catalog import Catalog, get_catalog
from src.services.deduction import (
    Contradiction,
    DeductionState,
    assume_eigenspaces_nice,
    contradiction_check,
    nice_bracket,
    nice_bracket_subspaces,
    nice_constraint_subspace,
    nice_dim1_promote,
    nice_intersect,
    nice_ker_im,
    nice_sum,
    render_vector,
)

logger = logging.getLogger(__name__)

# rule -> (argument kinds, number of outputs); None means "as many as produced"
RULES: Dict[str, Tuple[str, Optional[int]]] = {
    "eigenspaces": ("", None),
    "bracket": ("ee", 1),
    "bracket_span": ("ss", 1),
    "kerim": ("e", 2),
    "intersect": ("ss", 1),
    "sum": ("ss", 1),
    "promote": ("s", 1),
    "constraint": ("ses", 1),
}


class Outcome(str, Enum):
    CONTRADICTION = "CONTRADICTION"
    QED = "QED"
    INCONCLUSIVE = "INCONCLUSIVE"


# =============================================================================
# GRAMMAR
# =============================================================================

def _make_grammar() -> Dict[str, pp.ParserElement]:
    identifier = pp.Word(pp.alphas + "_", pp.alphanums + "_").add_condition(lambda t: t[0] != "expect")
    label = pp.Opt(pp.Regex(r"\d+\.")("label"))
    sign = pp.one_of("+ -")
    coefficient = pp.Regex(r"\d+(?:/\d+)?")
    basis = pp.Regex(r"e\d+").set_parse_action(lambda t: int(t[0][1:]))
    first = pp.Group(pp.Opt(sign, "+")("sign") + pp.Opt(coefficient, "1")("coef") + basis("index"))
    rest = pp.Group(sign("sign") + pp.Opt(coefficient, "1")("coef") + basis("index"))
    vector_expr = pp.Group(first + pp.ZeroOrMore(rest))
    span = (
        pp.Suppress(pp.Keyword("span") + "(")
        + pp.Opt(pp.DelimitedList(vector_expr))
        + pp.Suppress(")")
    )
    rule = pp.one_of(list(RULES), as_keyword=True)
    statement = (
        label
        + pp.Group(pp.DelimitedList(identifier))("outputs")
        + pp.Suppress(":=")
        + rule("rule")
        + pp.Group(pp.ZeroOrMore(identifier))("args")
        + pp.Opt(pp.Suppress(pp.Keyword("expect")) + pp.Group(span)("expect"))
    )
    return {
        "target": pp.Suppress(pp.Keyword("target")) + pp.Regex(r"\S+")("name"),
        "contradiction": label + pp.Suppress(pp.Keyword("contradiction")) + identifier("v")
        + pp.Suppress(";") + identifier("w1") + identifier("w2"),
        "qed": label + pp.Suppress(pp.Keyword("qed")),
        "statement": statement,
    }


GRAMMAR = _make_grammar()


# =============================================================================
# SCRIPT
# =============================================================================

@dataclass
class ScriptStep:
    label: str
    line: int
    outputs: Tuple[str, ...]
    rule: str
    args: Tuple[str, ...]
    expect: Optional[Tuple[Dict[int, Fraction], ...]] = None
    text: str = ""


@dataclass
class Terminal:
    kind: Outcome
    label: str
    line: int
    args: Tuple[str, ...] = ()
    text: str = ""


@dataclass
class ProofScript:
    target: str
    steps: List[ScriptStep] = field(default_factory=list)
    terminal: Optional[Terminal] = None


def _vector_terms(group: pp.ParseResults) -> Dict[int, Fraction]:
    terms: Dict[int, Fraction] = {}
    for term in group:
        value = Fraction(term["coef"])
        if term["sign"] == "-":
            value = -value
        index = term["index"] - 1
        terms[index] = terms.get(index, Fraction(0)) + value
    return terms


def parse_script(text: str) -> ProofScript:
    """Parse proof-script text.

    Raises:
        AlgebraSyntaxError: On malformed lines, unknown rules, wrong arity or a
            missing target, with the 1-based line and column.
    """
    target: Optional[str] = None
    steps: List[ScriptStep] = []
    terminal: Optional[Terminal] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if terminal is not None:
            raise AlgebraSyntaxError("statement after the terminal step", lineno, 1)
        words = line.split()
        head = words[1] if words[0].endswith(".") and len(words) > 1 else words[0]
        kind = head if head in ("target", "contradiction", "qed") else "statement"
        try:
            parsed = GRAMMAR[kind].parse_string(line, parse_all=True)
        except pp.ParseException as exc:
            raise AlgebraSyntaxError(exc.msg, lineno, exc.column) from exc

        if kind == "target":
            if target is not None or steps:
                raise AlgebraSyntaxError("'target' must come first and only once", lineno, 1)
            target = parsed["name"]
            continue
        if target is None:
            raise AlgebraSyntaxError("missing 'target' line", lineno, 1)

        label = parsed.get("label", f"{len(steps) + 1}.").rstrip(".")
        if kind == "contradiction":
            terminal = Terminal(Outcome.CONTRADICTION, label, lineno,
                                (parsed["v"], parsed["w1"], parsed["w2"]), line)
            continue
        if kind == "qed":
            terminal = Terminal(Outcome.QED, label, lineno, (), line)
            continue

        rule = parsed["rule"]
        kinds, n_outputs = RULES[rule]
        outputs = tuple(parsed["outputs"])
        args = tuple(parsed["args"])
        if len(args) != len(kinds):
            raise AlgebraSyntaxError(f"{rule} takes {len(kinds)} arguments, got {len(args)}", lineno, 1)
        if n_outputs is not None and len(outputs) != n_outputs:
            raise AlgebraSyntaxError(f"{rule} binds {n_outputs} names, got {len(outputs)}", lineno, 1)
        expect = None
        if "expect" in parsed:
            if len(outputs) != 1:
                raise AlgebraSyntaxError("'expect' needs a single bound name", lineno, 1)
            expect = tuple(_vector_terms(v) for v in parsed["expect"])
        steps.append(ScriptStep(label, lineno, outputs, rule, args, expect, line))

    if target is None:
        raise AlgebraSyntaxError("missing 'target' line", 1, 1)
    return ProofScript(target=target, steps=steps, terminal=terminal)


def load_script(path: Union[str, Path]) -> ProofScript:
    """Read a script by path, or by name from the proof directory."""
    candidate = Path(path)
    if not candidate.exists():
        named = Config.proof_dir() / (candidate.name if candidate.suffix else f"{candidate.name}.proof")
        if named.exists():
            candidate = named
    return parse_script(candidate.read_text(encoding="utf-8"))


# =============================================================================
# REPLAY
# =============================================================================

@dataclass
class TranscriptEntry:
    label: str
    statement: str
    outputs: Dict[str, str]


@dataclass
class Transcript:
    target: str
    outcome: Outcome
    entries: List[TranscriptEntry] = field(default_factory=list)
    contradiction: Optional[str] = None
    state: Optional[DeductionState] = None

    def lines(self) -> List[str]:
        out = [f"target {self.target}"]
        for entry in self.entries:
            out.append(f"{entry.label}. {entry.statement}")
            for name, rendered in entry.outputs.items():
                out.append(f"    {name} = {rendered}")
        if self.contradiction:
            out.append(f"    {self.contradiction}")
        out.append(self.outcome.value)
        return out

    def to_dict(self) -> Dict[str, object]:
        return {
            "target": self.target,
            "outcome": self.outcome.value,
            "steps": [
                {"label": e.label, "statement": e.statement, "outputs": e.outputs} for e in self.entries
            ],
            "contradiction": self.contradiction,
        }


def render_subspace(s: Subspace, labels) -> str:
    """RREF basis with basis labels, e.g. <e6, e7>."""
    return "<" + ", ".join(render_vector(v, labels) for v in s.basis) + ">"


class _Replay:
    def __init__(self, script: ProofScript, catalog: Catalog):
        self.script = script
        self.algebra = catalog.get(script.target).algebra
        self.state = DeductionState.initial(self.algebra)
        self.bindings: Dict[str, Subspace] = {}

    def lookup(self, step: str, name: str) -> Subspace:
        if name not in self.bindings:
            raise ScriptStepError(step, f"name '{name}' is used before it is defined")
        return self.bindings[name]

    def element(self, step: str, name: str) -> Vector:
        s = self.lookup(step, name)
        if s.dim != 1:
            raise ScriptStepError(step, f"'{name}' has dimension {s.dim}, not an element")
        return s.basis[0]

    def argument(self, step: str, kind: str, name: str):
        return self.element(step, name) if kind == "e" else self.lookup(step, name)

    def apply(self, step: ScriptStep) -> Tuple[Subspace, ...]:
        kinds, _ = RULES[step.rule]
        args = [self.argument(step.label, k, n) for k, n in zip(kinds, step.args)]
        handlers: Dict[str, Callable] = {
            "eigenspaces": assume_eigenspaces_nice,
            "bracket": nice_bracket,
            "bracket_span": nice_bracket_subspaces,
            "kerim": nice_ker_im,
            "intersect": nice_intersect,
            "sum": nice_sum,
            "promote": nice_dim1_promote,
            "constraint": nice_constraint_subspace,
        }
        try:
            self.state, outputs = handlers[step.rule](self.state, *args)
        except UnrecordedFactError as exc:
            raise ScriptStepError(step.label, str(exc)) from exc
        if len(outputs) != len(step.outputs):
            raise ScriptStepError(step.label, f"{step.rule} produced {len(outputs)} subspaces, "
                                              f"{len(step.outputs)} names given")
        if step.expect is not None:
            expected = Subspace.span((dense(v, self.algebra.dim) for v in step.expect), self.algebra.dim)
            if outputs[0] != expected:
                raise ScriptStepError(
                    step.label,
                    f"expected {render_subspace(expected, self.algebra.labels)}, "
                    f"got {render_subspace(outputs[0], self.algebra.labels)}",
                )
        return outputs


def run_script(script: ProofScript, catalog: Optional[Catalog] = None) -> Transcript:
    """Replay a script, recomputing every subspace.

    Raises:
        UnknownAlgebraError: If the target is not in the catalog.
        ScriptStepError: If a step cannot be validated.
    """
    catalog = catalog or get_catalog()
    replay = _Replay(script, catalog)
    labels = replay.algebra.labels
    transcript = Transcript(target=script.target, outcome=Outcome.INCONCLUSIVE)

    for step in script.steps:
        outputs = replay.apply(step)
        rendered: Dict[str, str] = {}
        for name, space in zip(step.outputs, outputs):
            replay.bindings[name] = space
            rendered[name] = render_subspace(space, labels)
        transcript.entries.append(TranscriptEntry(step.label, step.text, rendered))
        logger.debug(f"step {step.label}: {', '.join(f'{k} = {v}' for k, v in rendered.items())}")

    terminal = script.terminal
    if terminal is None:
        logger.warning(f"script for {script.target} ends without contradiction or qed")
    elif terminal.kind == Outcome.QED:
        transcript.entries.append(TranscriptEntry(terminal.label, terminal.text, {}))
        transcript.outcome = Outcome.QED
    else:
        v, w1, w2 = (replay.element(terminal.label, name) for name in terminal.args)
        try:
            found: Optional[Contradiction] = contradiction_check(replay.state, v, w1, w2)
        except UnrecordedFactError as exc:
            raise ScriptStepError(terminal.label, str(exc)) from exc
        if found is None:
            raise ScriptStepError(terminal.label, "brackets are not nonzero multiples of one element")
        transcript.entries.append(TranscriptEntry(terminal.label, terminal.text, {}))
        transcript.contradiction = found.describe(labels)
        transcript.outcome = Outcome.CONTRADICTION

    transcript.state = replay.state
    logger.info(f"replayed {len(script.steps)} steps on {script.target}: {transcript.outcome.value}")
    return transcript


def replay(path: Union[str, Path], catalog: Optional[Catalog] = None) -> Transcript:
    return run_script(load_script(path), catalog)
