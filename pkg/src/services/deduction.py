"""
Deduction rules for nonniceness arguments.

Assume g has a nice basis. A subspace is nice when it is spanned by nice basis
elements and an element is nice when it is a multiple of one. Every rule below
turns nice inputs into nice outputs, so reaching a Contradiction refutes the
assumption. States are values: each rule returns a new state.
"""

import logging
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import FrozenSet, List, Optional, Sequence, Tuple

from src.core.derivations import NikolayevskyResult, nikolayevsky
from src.core.errors import UnrecordedFactError
from src.core.exact_linear import (
    Subspace,
    Vector,
    image,
    is_zero_vector,
    normalize_projective,
)
from src.core.lie_algebra import LieAlgebra, bracket_into, bracket_subspaces, centralizer

logger = logging.getLogger(__name__)

Derived = Tuple["DeductionState", Tuple[Subspace, ...]]


@dataclass(frozen=True)
class Contradiction:
    """[v, w1] and [v, w2] are nonzero and proportional for independent nice w1, w2."""
    v: Vector
    w1: Vector
    w2: Vector
    image: Vector

    def describe(self, labels: Sequence[str]) -> str:
        return (
            f"[{render_vector(self.v, labels)}, {render_vector(self.w1, labels)}] and "
            f"[{render_vector(self.v, labels)}, {render_vector(self.w2, labels)}] are both multiples of "
            f"{render_vector(self.image, labels)}"
        )


def render_vector(v: Sequence, labels: Sequence[str]) -> str:
    parts = []
    for c, label in zip(v, labels):
        if not c:
            continue
        body = label if abs(c) == 1 else f"{abs(c)} {label}"
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {body}" if parts else (f"-{body}" if c < 0 else body))
    return " ".join(parts) or "0"


@dataclass(frozen=True)
class DeductionState:
    algebra: LieAlgebra
    nice_subspaces: FrozenSet[Subspace] = field(default_factory=frozenset)
    nice_elements: FrozenSet[Vector] = field(default_factory=frozenset)
    history: Tuple[str, ...] = ()

    __hash__ = None

    @classmethod
    def initial(cls, g: LieAlgebra) -> "DeductionState":
        """The zero subspace and g itself are nice for any basis."""
        return cls(algebra=g, nice_subspaces=frozenset({Subspace.zero(g.dim), Subspace.full(g.dim)}))

    # --- queries ---

    def is_nice_subspace(self, s: Subspace) -> bool:
        return s in self.nice_subspaces

    def is_nice_element(self, v: Sequence) -> bool:
        return not is_zero_vector(v) and normalize_projective(v) in self.nice_elements

    def require_subspace(self, s: Subspace) -> None:
        if not self.is_nice_subspace(s):
            raise UnrecordedFactError(f"subspace {s} is not recorded as nice")

    def require_element(self, v: Sequence) -> None:
        if not self.is_nice_element(v):
            raise UnrecordedFactError(f"element {tuple(str(c) for c in v)} is not recorded as nice")

    # --- updates ---

    def with_subspaces(self, spaces: Sequence[Subspace], rule: str) -> "DeductionState":
        """Record nice subspaces; one-dimensional ones also record their element."""
        subspaces = set(self.nice_subspaces)
        elements = set(self.nice_elements)
        for s in spaces:
            subspaces.add(s)
            if s.dim == 1:
                elements.add(normalize_projective(s.basis[0]))
        return replace(
            self,
            nice_subspaces=frozenset(subspaces),
            nice_elements=frozenset(elements),
            history=self.history + (rule,),
        )

    def element_space(self, v: Sequence) -> Subspace:
        return Subspace.span([v], self.algebra.dim)


# =============================================================================
# RULES
# =============================================================================

def assume_eigenspaces_nice(st: DeductionState, nik: Optional[NikolayevskyResult] = None) -> Derived:
    """Up to automorphism the Nikolayevsky derivation is diagonal in a nice basis."""
    nik = nik or nikolayevsky(st.algebra)
    spaces = tuple(nik.eigenspaces)
    return st.with_subspaces(spaces, "eigenspaces"), spaces


def nice_bracket(st: DeductionState, u: Sequence, v: Sequence) -> Derived:
    st.require_element(u)
    st.require_element(v)
    result = Subspace.span([st.algebra.bracket(u, v)], st.algebra.dim)
    return st.with_subspaces([result], "bracket"), (result,)


def nice_ker_im(st: DeductionState, v: Sequence) -> Derived:
    """ker ad v and im ad v for a nice v."""
    st.require_element(v)
    kernel_space = centralizer(st.algebra, st.element_space(v))
    image_space = image(st.algebra.ad(v))
    return st.with_subspaces([kernel_space, image_space], "kerim"), (kernel_space, image_space)


def nice_intersect(st: DeductionState, s: Subspace, t: Subspace) -> Derived:
    st.require_subspace(s)
    st.require_subspace(t)
    result = s & t
    return st.with_subspaces([result], "intersect"), (result,)


def nice_sum(st: DeductionState, s: Subspace, t: Subspace) -> Derived:
    st.require_subspace(s)
    st.require_subspace(t)
    result = s + t
    return st.with_subspaces([result], "sum"), (result,)


def nice_dim1_promote(st: DeductionState, s: Subspace) -> Derived:
    st.require_subspace(s)
    if s.dim != 1:
        raise UnrecordedFactError(f"only one-dimensional nice subspaces promote, got dimension {s.dim}")
    return st.with_subspaces([s], "promote"), (s,)


def nice_bracket_subspaces(st: DeductionState, s: Subspace, t: Subspace) -> Derived:
    st.require_subspace(s)
    st.require_subspace(t)
    result = bracket_subspaces(st.algebra, s, t)
    return st.with_subspaces([result], "bracket_span"), (result,)


def nice_constraint_subspace(st: DeductionState, s: Subspace, w: Sequence, t: Subspace) -> Derived:
    """{v in S : [v, w] in T} for nice S, T and a nice element w."""
    st.require_subspace(s)
    st.require_element(w)
    st.require_subspace(t)
    result = s & bracket_into(st.algebra, [w], t)
    return st.with_subspaces([result], "constraint"), (result,)


def contradiction_check(st: DeductionState, v: Sequence, w1: Sequence, w2: Sequence) -> Optional[Contradiction]:
    """A nice v whose brackets with independent nice w1, w2 are nonzero and proportional."""
    for x in (v, w1, w2):
        st.require_element(x)
    g = st.algebra
    if Subspace.span([w1, w2], g.dim).dim < 2:
        return None
    a, b = g.bracket(v, w1), g.bracket(v, w2)
    if is_zero_vector(a) or is_zero_vector(b):
        return None
    if Subspace.span([a, b], g.dim).dim != 1:
        return None
    found = Contradiction(
        tuple(normalize_projective(v)), tuple(normalize_projective(w1)),
        tuple(normalize_projective(w2)), tuple(normalize_projective(a)),
    )
    logger.info(f"contradiction: {found.describe(g.labels)}")
    return found


# =============================================================================
# BOUNDED CLOSURE
# =============================================================================

@dataclass
class SaturationResult:
    state: DeductionState
    contradiction: Optional[Contradiction]
    rounds: int


def _find_contradiction(st: DeductionState) -> Optional[Contradiction]:
    elements = sorted(st.nice_elements)
    for v in elements:
        for w1, w2 in combinations(elements, 2):
            found = contradiction_check(st, v, w1, w2)
            if found is not None:
                return found
    return None


def saturate(st: DeductionState, rounds: int = 2) -> SaturationResult:
    """Apply ker/im, bracket and intersection breadth-first, checking for contradictions.

    One-dimensional outputs are promoted as they appear. Stops early at a
    fixpoint or a contradiction.
    """
    for round_number in range(1, rounds + 1):
        found = _find_contradiction(st)
        if found is not None:
            return SaturationResult(st, found, round_number - 1)
        elements = sorted(st.nice_elements)
        spaces = sorted(st.nice_subspaces, key=lambda s: (s.dim, s.basis))
        new: List[Subspace] = []
        for v in elements:
            new.extend(nice_ker_im(st, v)[1])
        for u, v in combinations(elements, 2):
            new.extend(nice_bracket(st, u, v)[1])
        for s, t in combinations(spaces, 2):
            new.append(s & t)
        fresh = [s for s in new if s not in st.nice_subspaces]
        if not fresh:
            logger.debug(f"saturation reached a fixpoint after {round_number - 1} rounds")
            return SaturationResult(st, None, round_number - 1)
        st = st.with_subspaces(fresh, f"saturate round {round_number}")
        logger.debug(f"round {round_number}: {len(st.nice_subspaces)} nice subspaces, "
                     f"{len(st.nice_elements)} nice elements")
    return SaturationResult(st, _find_contradiction(st), rounds)
