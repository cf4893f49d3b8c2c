"""
Free nilpotent Lie algebras n_{m,s}.

The Hall basis uses this order: generators by index, words by degree, and
within a degree by (index of the right factor, index of the left factor). A
pair [u, v] is basic iff u > v and, when u = [x, y], y <= v. For m = 2 this
gives [e2, e1] = e3, [e3, e1] = e4, [e3, e2] = e5, ..., [e5, e3] = e14.

Brackets of basis words are rewritten to Hall normal form with
[[x, y], b] = [[x, b], y] + [x, [y, b]], dropping words of degree above s.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from sympy import divisors

from src.core.derivations import LinearEndo, NikolayevskyResult, nikolayevsky
from src.core.errors import NikolayevskyError, WorkbenchError
from src.core.exact_linear import Matrix, Subspace, Vector, unit_vector
from src.core.lie_algebra import (
    GradedLieAlgebra,
    LieAlgebra,
    bracket_subspaces,
    center,
    derived_algebra,
    nilpotency_step,
    quotient,
)
from src.models.checks import CheckResult
from src.services.constructions import MetricLieAlgebra, cotangent
from src.services.nice_analysis import NiceCertificate, check_nice_basis, eigenspace_bound_obstruction

logger = logging.getLogger(__name__)

Combination = Dict[int, int]


# =============================================================================
# WITT DIMENSIONS
# =============================================================================

@lru_cache(maxsize=None)
def witt_dim(m: int, k: int) -> int:
    """d_m(k) from k d_m(k) = m^k - sum over proper divisors l of k of l d_m(l)."""
    if m < 2 or k < 1:
        raise ValueError(f"witt_dim needs m >= 2 and k >= 1, got ({m}, {k})")
    total = m ** k - sum(l * witt_dim(m, l) for l in divisors(k) if l < k)
    return total // k


def layer_dims(m: int, s: int) -> Tuple[int, ...]:
    return tuple(witt_dim(m, k) for k in range(1, s + 1))


# =============================================================================
# HALL BASIS
# =============================================================================

@dataclass(frozen=True)
class HallWord:
    """A basic commutator; generators have no factors."""
    hall_index: int
    degree: int
    left: Optional[int] = None
    right: Optional[int] = None

    @property
    def is_generator(self) -> bool:
        return self.left is None

    def render(self, words: Tuple["HallWord", ...]) -> str:
        if self.is_generator:
            return f"e{self.hall_index + 1}"
        return f"[{words[self.left].render(words)}, {words[self.right].render(words)}]"


def hall_words(m: int, s: int) -> Tuple[HallWord, ...]:
    """Hall basis words of degree <= s, in basis order."""
    words: List[HallWord] = [HallWord(hall_index=i, degree=1) for i in range(m)]
    by_degree: Dict[int, List[int]] = {1: list(range(m))}
    for d in range(2, s + 1):
        candidates: List[Tuple[int, int]] = []
        for du in range(1, d):
            for u in by_degree[du]:
                for v in by_degree[d - du]:
                    if u <= v:
                        continue
                    word = words[u]
                    if not word.is_generator and word.right > v:
                        continue
                    candidates.append((u, v))
        candidates.sort(key=lambda pair: (pair[1], pair[0]))
        by_degree[d] = []
        for u, v in candidates:
            index = len(words)
            words.append(HallWord(hall_index=index, degree=d, left=u, right=v))
            by_degree[d].append(index)
    return tuple(words)


class _HallRewriter:
    """Memoized rewriting of brackets of Hall words into the Hall basis."""

    def __init__(self, words: Tuple[HallWord, ...], s: int):
        self.words = words
        self.s = s
        self.lookup = {(w.left, w.right): w.hall_index for w in words if not w.is_generator}
        self.memo: Dict[Tuple[int, int], Combination] = {}

    def bracket(self, a: int, b: int) -> Combination:
        if a == b or self.words[a].degree + self.words[b].degree > self.s:
            return {}
        if a < b:
            return {k: -c for k, c in self.bracket(b, a).items()}
        key = (a, b)
        if key not in self.memo:
            self.memo[key] = self._reduce(a, b)
        return self.memo[key]

    def _reduce(self, a: int, b: int) -> Combination:
        word = self.words[a]
        if word.is_generator or word.right <= b:
            return {self.lookup[(a, b)]: 1}
        # a = [x, y] with y > b
        x, y = word.left, word.right
        result: Combination = {}
        for w, c in self.bracket(x, b).items():
            self._add(result, self.bracket(w, y), c)
        for w, c in self.bracket(y, b).items():
            self._add(result, self.bracket(x, w), c)
        return result

    @staticmethod
    def _add(target: Combination, combination: Combination, scale: int) -> None:
        for k, c in combination.items():
            value = target.get(k, 0) + scale * c
            if value:
                target[k] = value
            else:
                target.pop(k, None)


@dataclass(frozen=True)
class FreeNilpotent:
    m: int
    s: int
    graded: GradedLieAlgebra
    hall_basis: Tuple[HallWord, ...]
    layer_dims: Tuple[int, ...]

    __hash__ = None

    @property
    def algebra(self) -> LieAlgebra:
        return self.graded.algebra

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def degrees(self) -> Tuple[int, ...]:
        return tuple(w.degree for w in self.hall_basis)

    def layer(self, k: int) -> Subspace:
        return self.graded.layer_of_degree(k)


@lru_cache(maxsize=32)
def build(m: int, s: int) -> FreeNilpotent:
    """Free s-step nilpotent algebra on m generators in its Hall basis."""
    if m < 2 or s < 1:
        raise ValueError(f"free nilpotent algebras need m >= 2 and s >= 1, got ({m}, {s})")
    words = hall_words(m, s)
    rewriter = _HallRewriter(words, s)
    n = len(words)
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            row = rewriter.bracket(i, j)
            if row:
                brackets[(i, j)] = {k: Fraction(c) for k, c in row.items()}
    algebra = LieAlgebra.from_brackets(n, brackets, name=f"n_{m},{s}")
    dims = layer_dims(m, s)
    if sum(dims) != n:
        raise WorkbenchError(f"Hall basis has {n} words, Witt dimensions give {sum(dims)}")
    layers = tuple(
        Subspace.coordinate(n, [w.hall_index for w in words if w.degree == k]) for k in range(1, s + 1)
    )
    graded = GradedLieAlgebra(algebra=algebra, layers=layers, degrees=tuple(range(1, s + 1)))
    logger.info(f"built n_{m},{s} of dimension {n}")
    return FreeNilpotent(m=m, s=s, graded=graded, hall_basis=words, layer_dims=dims)


# =============================================================================
# NIKOLAYEVSKY DERIVATION AND INEQUALITIES
# =============================================================================

def free_lambda(m: int, s: int) -> Fraction:
    """lambda with sum k d_m(k) (k lambda - 1) = 0."""
    dims = layer_dims(m, s)
    linear = sum(k * d for k, d in enumerate(dims, start=1))
    quadratic = sum(k * k * d for k, d in enumerate(dims, start=1))
    return Fraction(linear, quadratic)


def nikolayevsky_free(m: int, s: int) -> NikolayevskyResult:
    """N = lambda * sum k pi_k in the Hall basis."""
    free = build(m, s)
    lam = free_lambda(m, s)
    degrees = free.degrees()
    endo = LinearEndo(free.algebra, Matrix.diagonal([lam * d for d in degrees]))
    eigenvalues = tuple((lam * k, d) for k, d in enumerate(free.layer_dims, start=1) if d)
    spaces = tuple(free.layer(k) for k, d in enumerate(free.layer_dims, start=1) if d)
    return NikolayevskyResult(endo=endo, eigenvalues=eigenvalues, eigenspaces=spaces, method="free-formula")


def estimate_check(m: int, s: int) -> bool:
    """d_m(s) + 2 sum_{k <= [(s+1)/2]} k d_m(k) < m^s.

    Raises:
        WorkbenchError: If s < 4.
    """
    if s < 4:
        raise WorkbenchError(f"the estimate is stated for s >= 4, got s = {s}")
    lhs = witt_dim(m, s) + 2 * sum(k * witt_dim(m, k) for k in range(1, (s + 1) // 2 + 1))
    return lhs < m ** s


def cotangent_eigen_sum(m: int, s: int, n: int) -> int:
    return sum(k * witt_dim(m, k) * (2 * k - n - 1) for k in range(1, s + 1))


def cotangent_eigen_equation(m: int, s: int, n: int) -> bool:
    """Whether sum_k k d_m(k) (2k - n - 1) = 0 holds for this n."""
    if not 1 <= n <= s:
        raise ValueError(f"n must lie in 1..{s}, got {n}")
    return cotangent_eigen_sum(m, s, n) == 0


@dataclass
class PairObstruction:
    applies: bool
    w5_dim: int
    bound: int = 4

    @property
    def message(self) -> str:
        if not self.applies:
            return "pair obstruction needs m = 2 and s >= 5"
        return f"dim W_5 = {self.w5_dim} exceeds {self.bound}, the bound for two nice generators"


def pair_obstruction(m: int, s: int) -> PairObstruction:
    """Two nice generators span at most a 4-dimensional image of W_5.

    The image is recomputed as the span of left-normed brackets of the lowest
    Nikolayevsky eigenspace of the built algebra.
    """
    if m != 2 or s < 5:
        return PairObstruction(applies=False, w5_dim=witt_dim(2, 5) if s >= 5 else 0)
    g = build(m, s).algebra
    lowest = nikolayevsky_free(m, s).eigenspaces[0]
    image = lowest
    for _ in range(4):
        image = bracket_subspaces(g, image, lowest)
    logger.debug(f"n_{m},{s}: degree-5 brackets of the lowest eigenspace span {image.dim} dimensions")
    return PairObstruction(applies=image.dim > 4, w5_dim=image.dim)


@dataclass
class NicenessVerdict:
    m: int
    s: int
    nice: bool
    reason: str
    detail: str
    certificate: Optional[CheckResult] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "m": self.m,
            "s": self.s,
            "verdict": "nice" if self.nice else "nonnice",
            "reason": self.reason,
            "detail": self.detail,
            "certificate": self.certificate.to_dict() if self.certificate is not None else None,
        }


def nice_certificate(m: int, s: int) -> NiceCertificate:
    """The Hall basis itself, as a nice basis candidate."""
    free = build(m, s)
    return NiceCertificate(free.algebra, Matrix.identity(free.dim))


def niceness_verdict(m: int, s: int) -> NicenessVerdict:
    """Decide niceness of n_{m,s}.

    Nice for s <= 2 and for (2, 3), (2, 4), with the Hall basis re-checked.
    Nonnice otherwise: the pair obstruction for m = 2, the eigenspace bound for m >= 3.
    """
    if s <= 2 or (m == 2 and s <= 4):
        check = check_nice_basis(nice_certificate(m, s))
        reason = "step-at-most-2" if s <= 2 else "hall-basis"
        return NicenessVerdict(m, s, nice=bool(check), reason=reason,
                               detail="Hall basis is a nice basis", certificate=check)
    if m == 2:
        obstruction = pair_obstruction(m, s)
        if not obstruction.applies:
            raise WorkbenchError(f"pair obstruction does not refute n_{m},{s}: {obstruction.message}")
        return NicenessVerdict(m, s, nice=False, reason="pair-obstruction", detail=obstruction.message)
    violation = eigenspace_bound_obstruction(build(m, s).algebra, nikolayevsky_free(m, s))
    if violation is None:
        raise WorkbenchError(f"no eigenspace of n_{m},{s} violates the bound")
    return NicenessVerdict(
        m, s, nice=False, reason="eigenspace-bound",
        detail=(f"dim [[W, W], W] = {violation.bracket_dim} > {violation.bound} "
                f"for the {violation.dim}-dimensional eigenspace W of {violation.eigenvalue}"),
    )


# =============================================================================
# COTANGENTS
# =============================================================================

@dataclass(frozen=True)
class CotangentFree:
    """T* n_{m,s} graded by W_i in degree i and W_i* in degree 2s + 1 - i."""
    free: FreeNilpotent
    metric: MetricLieAlgebra
    graded: GradedLieAlgebra

    __hash__ = None

    @property
    def algebra(self) -> LieAlgebra:
        return self.metric.algebra


@lru_cache(maxsize=16)
def cotangent_free(m: int, s: int) -> CotangentFree:
    free = build(m, s)
    metric = cotangent(free.algebra, name=f"T*n_{m},{s}")
    n = free.dim
    degrees = free.degrees()
    layers: List[Subspace] = []
    layer_degrees: List[int] = []
    for k in range(1, s + 1):
        indices = [i for i, d in enumerate(degrees) if d == k]
        layers.append(Subspace.coordinate(2 * n, indices))
        layer_degrees.append(k)
        layers.append(Subspace.coordinate(2 * n, [n + i for i in indices]))
        layer_degrees.append(2 * s + 1 - k)
    graded = GradedLieAlgebra(algebra=metric.algebra, layers=tuple(layers), degrees=tuple(layer_degrees))
    return CotangentFree(free=free, metric=metric, graded=graded)


def cotangent_model(m: int, s: int) -> Vector:
    """Diagonal of N - N* + 2P: lambda k on W_k, 2 - lambda k on W_k*."""
    lam = free_lambda(m, s)
    degrees = build(m, s).degrees()
    return tuple(lam * d for d in degrees) + tuple(2 - lam * d for d in degrees)


def cotangent_nikolayevsky_scale(m: int, s: int) -> Fraction:
    """The rational a with N~ = a (N - N* + 2P) on T* n_{m,s}.

    Raises:
        NikolayevskyError: If the computed derivation is not of that form.
    """
    ct = cotangent_free(m, s)
    computed = nikolayevsky(ct.algebra).endo.matrix
    model = cotangent_model(m, s)
    a = computed[0, 0] / model[0]
    if computed != Matrix.diagonal([a * x for x in model]):
        raise NikolayevskyError(f"Nikolayevsky derivation of T*n_{m},{s} is not a multiple of N - N* + 2P")
    logger.info(f"T*n_{m},{s}: a = {a}")
    return a


def w1_eigenspace_check(m: int, s: int) -> CheckResult:
    """Whether W_1 is a full eigenspace of the Nikolayevsky derivation of T* n_{m,s}."""
    ct = cotangent_free(m, s)
    result = nikolayevsky(ct.algebra)
    w1 = ct.graded.layer_of_degree(1)
    for space in result.eigenspaces:
        if space == w1:
            return CheckResult.passed("W_1 is an eigenspace")
    return CheckResult.failed("W_1 is not an eigenspace", w1_dim=w1.dim)


def cotangent_center_check(m: int, s: int) -> CheckResult:
    """z(T* n_{m,s}) = W_s + W_1*."""
    ct = cotangent_free(m, s)
    expected = ct.graded.layer_of_degree(s) + ct.graded.layer_of_degree(2 * s)
    z = center(ct.algebra)
    if z != expected:
        return CheckResult.failed("center differs from W_s + W_1*", center_dim=z.dim, expected_dim=expected.dim)
    return CheckResult.passed(f"z = W_s + W_1*, dimension {z.dim}")


def cotangent_derived_check(m: int, s: int) -> CheckResult:
    """(T* n_{m,s})' = W_2 + ... + W_s + W_{s-1}* + ... + W_1*."""
    ct = cotangent_free(m, s)
    n = ct.free.dim
    degrees = ct.free.degrees()
    indices = [i for i, d in enumerate(degrees) if d >= 2] + [n + i for i, d in enumerate(degrees) if d <= s - 1]
    expected = Subspace.coordinate(2 * n, indices)
    actual = derived_algebra(ct.algebra)
    if actual != expected:
        return CheckResult.failed("derived algebra differs", actual_dim=actual.dim, expected_dim=expected.dim)
    return CheckResult.passed(f"derived algebra has dimension {actual.dim} as expected")


def cotangent_step_check(m: int, s: int) -> CheckResult:
    step = nilpotency_step(cotangent_free(m, s).algebra)
    if step != s:
        return CheckResult.failed(f"T*n_{m},{s} has step {step}", step=step)
    return CheckResult.passed(f"T*n_{m},{s} is {s}-step nilpotent")


def cotangent_generic_condition(m: int, s: int) -> CheckResult:
    """Condition (1) of graded irreducibility for T* n_{m,s}.

    Modulo I = the layers of degree >= 3, the quotient is n_{m,2}; there the
    brackets [e_i, e_j], i < j, of W_1 are independent, so the centralizer of
    any X in W_1 meets W_1 in <X>.
    """
    ct = cotangent_free(m, s)
    g = ct.algebra
    high = Subspace.zero(g.dim)
    for layer, degree in zip(ct.graded.layers, ct.graded.degrees):
        if degree >= 3:
            high = high + layer
    q = quotient(g, high)
    w1 = [i for i, d in enumerate(ct.free.degrees()) if d == 1]
    reps = q.representatives
    positions = [reps.index(i) for i in w1]
    brackets = [
        q.algebra.bracket(unit_vector(q.algebra.dim, a), unit_vector(q.algebra.dim, b))
        for idx, a in enumerate(positions) for b in positions[idx + 1:]
    ]
    span = Subspace.span(brackets, q.algebra.dim)
    if span.dim != len(brackets):
        return CheckResult.failed("brackets of W_1 are dependent modulo I", rank=span.dim, count=len(brackets))
    return CheckResult.passed("V + C(V) contains W_1 only for V = 0 or W_1")
