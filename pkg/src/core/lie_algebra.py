"""
Lie algebras given by rational structure constants.

Basis elements are 0-based indices internally and carry labels (e1, e2, ...)
for display. Brackets of basis elements are stored sparsely for i < j only:
[e_i, e_j] = sum_k c_ij^k e_k, antisymmetry is implied.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.core.errors import DimensionMismatchError, JacobiError, NotAnIdealError
from src.core.exact_linear import (
    ONE,
    ZERO,
    Matrix,
    SparseRow,
    Subspace,
    Vector,
    dense,
    inverse,
    kernel_basis,
    sparse,
    sub_vectors,
    sum_subspaces,
    to_fraction,
    unit_vector,
    intersect,
)
from src.models.checks import CheckResult

logger = logging.getLogger(__name__)

BracketValue = Union[Mapping[int, object], Sequence[object]]


def _accumulate(target: Dict[int, Fraction], row: Mapping[int, Fraction], coefficient: Fraction) -> None:
    for k, a in row.items():
        value = target.get(k, ZERO) + coefficient * a
        if value:
            target[k] = value
        else:
            target.pop(k, None)


def default_labels(dim: int) -> Tuple[str, ...]:
    return tuple(f"e{i + 1}" for i in range(dim))


# =============================================================================
# LIE ALGEBRA
# =============================================================================

@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Finite-dimensional Lie algebra over Q.

    Equality compares dimension and structure constants; labels are cosmetic.
    """

    dim: int
    brackets: Mapping[Tuple[int, int], Mapping[int, Fraction]]
    labels: Tuple[str, ...] = ()
    name: str = ""

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        brackets: Mapping[Tuple[int, int], BracketValue],
        labels: Optional[Sequence[str]] = None,
        name: str = "",
        check_jacobi: bool = True,
    ) -> "LieAlgebra":
        """Build an algebra from basis brackets.

        Args:
            dim: Dimension.
            brackets: (i, j) -> value of [e_i, e_j], either a dense vector or a
                sparse {k: coefficient} mapping. Pairs with i > j are folded in
                with a sign; at most one of (i, j), (j, i) may be given.
            labels: Basis labels, default e1..en.
            name: Display name.
            check_jacobi: Verify the Jacobi identity and raise JacobiError.

        Returns:
            The LieAlgebra.
        """
        table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j), value in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatchError(f"bracket index ({i}, {j}) outside dimension {dim}")
            row = _as_sparse(value, dim)
            if i == j:
                if row:
                    raise ValueError(f"[e{i + 1}, e{i + 1}] must vanish")
                continue
            sign = ONE if i < j else -ONE
            key = (min(i, j), max(i, j))
            if key in table:
                raise ValueError(f"bracket of e{key[0] + 1}, e{key[1] + 1} given twice")
            if row:
                table[key] = {k: sign * a for k, a in row.items()}
        labels = tuple(labels) if labels else default_labels(dim)
        if len(labels) != dim:
            raise DimensionMismatchError(f"{len(labels)} labels for dimension {dim}")
        algebra = cls(dim=dim, brackets=table, labels=labels, name=name)
        if check_jacobi:
            result = jacobi_check(algebra)
            if not result:
                raise JacobiError(result.message, result.witness)
        return algebra

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and dict(self.brackets) == dict(other.brackets)

    __hash__ = None

    def __repr__(self) -> str:
        return f"LieAlgebra(name={self.name!r}, dim={self.dim}, nonzero_brackets={len(self.brackets)})"

    def renamed(self, name: str) -> "LieAlgebra":
        return LieAlgebra(self.dim, self.brackets, self.labels, name)

    # --- basis level ---

    def basis_bracket(self, i: int, j: int) -> SparseRow:
        """[e_i, e_j] as a sparse row."""
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        if i > j:
            return {k: -a for k, a in self.brackets.get((j, i), {}).items()}
        return {}

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self.basis_bracket(i, j).get(k, ZERO)

    def nonzero_brackets(self) -> Iterator[Tuple[int, int, SparseRow]]:
        for (i, j) in sorted(self.brackets):
            yield i, j, dict(self.brackets[(i, j)])

    def basis_vector(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def is_abelian(self) -> bool:
        return not self.brackets

    # --- vector level ---

    def bracket_sparse(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> SparseRow:
        out: Dict[int, Fraction] = {}
        for i, a in x.items():
            for j, b in y.items():
                if i == j:
                    continue
                row = self.basis_bracket(i, j)
                if row:
                    _accumulate(out, row, a * b)
        return out

    def bracket(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        self._check_vector(x)
        self._check_vector(y)
        return dense(self.bracket_sparse(sparse(x), sparse(y)), self.dim)

    def ad(self, x: Sequence[Fraction]) -> Matrix:
        """Matrix of ad x, columns are [x, e_j]."""
        self._check_vector(x)
        xs = sparse(x)
        columns = [dense(self.bracket_sparse(xs, {j: ONE}), self.dim) for j in range(self.dim)]
        return Matrix.from_columns(columns, self.dim)

    def ad_basis(self, i: int) -> Matrix:
        return self.ad(self.basis_vector(i))

    def right_multiplication(self, y: Sequence[Fraction]) -> Matrix:
        """Matrix of x -> [x, y]."""
        return self.ad(y).scale(-1)

    def _check_vector(self, v: Sequence[Fraction]) -> None:
        if len(v) != self.dim:
            raise DimensionMismatchError(f"vector of length {len(v)} in a {self.dim}-dimensional algebra")


def _as_sparse(value: BracketValue, dim: int) -> Dict[int, Fraction]:
    if isinstance(value, Mapping):
        row = {}
        for k, a in value.items():
            if not 0 <= k < dim:
                raise DimensionMismatchError(f"bracket component e{k + 1} outside dimension {dim}")
            a = to_fraction(a)
            if a:
                row[k] = a
        return row
    if len(value) != dim:
        raise DimensionMismatchError(f"bracket vector of length {len(value)} in dimension {dim}")
    return {k: to_fraction(a) for k, a in enumerate(value) if to_fraction(a)}


def abelian(dim: int, name: str = "") -> LieAlgebra:
    return LieAlgebra(dim=dim, brackets={}, labels=default_labels(dim), name=name or f"R{dim}")


def bracket(g: LieAlgebra, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    return g.bracket(x, y)


# =============================================================================
# JACOBI
# =============================================================================

def jacobi_check(g: LieAlgebra) -> CheckResult:
    """Check the Jacobi identity on all basis triples i < j < k.

    Returns the first triple (1-based labels) whose Jacobiator is nonzero.
    """
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            eij = g.basis_bracket(i, j)
            for k in range(j + 1, g.dim):
                defect: Dict[int, Fraction] = {}
                _accumulate(defect, g.bracket_sparse(eij, {k: ONE}), ONE)
                _accumulate(defect, g.bracket_sparse(g.basis_bracket(j, k), {i: ONE}), ONE)
                _accumulate(defect, g.bracket_sparse(g.basis_bracket(k, i), {j: ONE}), ONE)
                if defect:
                    return CheckResult.failed(
                        f"Jacobi identity fails on ({g.labels[i]}, {g.labels[j]}, {g.labels[k]})",
                        triple=(g.labels[i], g.labels[j], g.labels[k]),
                        defect=dense(defect, g.dim),
                    )
    return CheckResult.passed("Jacobi identity holds")


# =============================================================================
# SUBSPACES AND SERIES
# =============================================================================

def full_space(g: LieAlgebra) -> Subspace:
    return Subspace.full(g.dim)


def bracket_subspaces(g: LieAlgebra, s: Subspace, t: Subspace) -> Subspace:
    """Span of [s, t] over s in S, t in T."""
    vectors = [
        dense(g.bracket_sparse(sparse(a), sparse(b)), g.dim) for a in s.basis for b in t.basis
    ]
    return Subspace.span(vectors, g.dim)


def bracket_into(g: LieAlgebra, vectors: Iterable[Sequence[Fraction]], target: Subspace) -> Subspace:
    """All x with [x, y] in target for every given y."""
    annihilator = target.annihilator()
    rows: List[SparseRow] = []
    for y in vectors:
        right = g.right_multiplication(y)
        if target.dim == 0:
            rows.extend(right.sparse_row(i) for i in range(g.dim))
        else:
            product = annihilator.matrix() @ right
            rows.extend(product.sparse_row(i) for i in range(product.rows))
    return Subspace.span((dense(v, g.dim) for v in kernel_basis(rows, g.dim)), g.dim)


def center(g: LieAlgebra) -> Subspace:
    return bracket_into(g, (g.basis_vector(j) for j in range(g.dim)), Subspace.zero(g.dim))


def centralizer(g: LieAlgebra, u: Subspace) -> Subspace:
    """C(U) = {X : (ad X)|_U = 0}."""
    return bracket_into(g, u.basis, Subspace.zero(g.dim))


def normalizer(g: LieAlgebra, s: Subspace) -> Subspace:
    return bracket_into(g, s.basis, s)


def derived_algebra(g: LieAlgebra) -> Subspace:
    whole = full_space(g)
    return bracket_subspaces(g, whole, whole)


def lcs(g: LieAlgebra) -> List[Subspace]:
    """Lower central series g^0 = g, g^{k+1} = [g, g^k], up to stabilization.

    For a nilpotent algebra the last term is 0; the stabilized term is not repeated.
    """
    whole = full_space(g)
    series = [whole]
    while True:
        nxt = bracket_subspaces(g, whole, series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def ucs(g: LieAlgebra) -> List[Subspace]:
    """Upper central series C_1 = z(g), C_{k+1}/C_k = z(g/C_k), up to stabilization."""
    basis = [g.basis_vector(j) for j in range(g.dim)]
    series = [center(g)]
    while True:
        nxt = bracket_into(g, basis, series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def derived(g: LieAlgebra, order: int) -> Subspace:
    """Derived series term g^(order); derived(g, 1) = g'."""
    term = full_space(g)
    for _ in range(order):
        term = bracket_subspaces(g, term, term)
    return term


def nilpotency_step(g: LieAlgebra) -> Optional[int]:
    """Number of nonzero LCS terms, or None when g is not nilpotent."""
    series = lcs(g)
    if series[-1].dim != 0:
        return None
    return len(series) - 1


def is_ideal(g: LieAlgebra, s: Subspace) -> bool:
    return bracket_subspaces(g, full_space(g), s).is_subspace_of(s)


def ideal_generated(g: LieAlgebra, s: Subspace) -> Subspace:
    """Smallest ideal containing S."""
    whole = full_space(g)
    current = s
    while True:
        nxt = sum_subspaces(current, bracket_subspaces(g, whole, current))
        if nxt == current:
            return current
        current = nxt


# =============================================================================
# QUOTIENTS, SUMS, BASIS CHANGES
# =============================================================================

@dataclass(frozen=True)
class Quotient:
    """g/I with the quotient basis given by the non-pivot unit vectors of I."""
    algebra: LieAlgebra
    projection: Matrix
    representatives: Tuple[int, ...]
    ideal: Subspace


def quotient(g: LieAlgebra, ideal: Subspace, name: str = "") -> Quotient:
    """Quotient by an ideal.

    The projection is checked to be a Lie algebra homomorphism, so the
    quotient brackets satisfy Jacobi whenever g does.

    Raises:
        NotAnIdealError: If the subspace is not an ideal.
    """
    if ideal.ambient_dim != g.dim:
        raise DimensionMismatchError(f"subspace of Q^{ideal.ambient_dim} in a {g.dim}-dimensional algebra")
    if not is_ideal(g, ideal):
        raise NotAnIdealError(f"subspace of dimension {ideal.dim} is not an ideal")
    reps = ideal.complement_indices()

    def project(v: Sequence[Fraction]) -> Vector:
        reduced = ideal.reduce(v)
        return tuple(reduced[c] for c in reps)

    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for a, ca in enumerate(reps):
        for b in range(a + 1, len(reps)):
            value = project(dense(g.basis_bracket(ca, reps[b]), g.dim))
            row = {k: x for k, x in enumerate(value) if x}
            if row:
                brackets[(a, b)] = row
    columns = [project(g.basis_vector(j)) for j in range(g.dim)]
    projection = Matrix.from_columns(columns, len(reps))
    algebra = LieAlgebra.from_brackets(len(reps), brackets, name=name, check_jacobi=False)
    check = is_lie_homomorphism(g, algebra, projection)
    if not check:
        raise NotAnIdealError(f"projection onto the quotient is not a homomorphism: {check.message}")
    logger.debug(f"quotient of {g.name or 'algebra'} by a {ideal.dim}-dimensional ideal")
    return Quotient(algebra=algebra, projection=projection, representatives=reps, ideal=ideal)


def direct_sum(g1: LieAlgebra, g2: LieAlgebra, name: str = "") -> LieAlgebra:
    shift = g1.dim
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {
        key: dict(row) for key, row in g1.brackets.items()
    }
    for (i, j), row in g2.brackets.items():
        brackets[(i + shift, j + shift)] = {k + shift: a for k, a in row.items()}
    labels = default_labels(g1.dim + g2.dim)
    return LieAlgebra(dim=g1.dim + g2.dim, brackets=brackets, labels=labels,
                      name=name or f"{g1.name or 'g'}+{g2.name or 'h'}")


def change_basis(g: LieAlgebra, rows: Sequence[Sequence[Fraction]], name: str = "") -> LieAlgebra:
    """Structure constants in a new basis.

    Args:
        g: The algebra.
        rows: New basis vectors in old coordinates.
        name: Name for the result.

    Returns:
        Algebra whose basis element a corresponds to rows[a].
    """
    if len(rows) != g.dim:
        raise DimensionMismatchError(f"{len(rows)} basis vectors for dimension {g.dim}")
    change = Matrix.from_columns(rows, g.dim)
    back = inverse(change)
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for a in range(g.dim):
        for b in range(a + 1, g.dim):
            value = back.apply(g.bracket(rows[a], rows[b]))
            row = sparse(value)
            if row:
                brackets[(a, b)] = row
    return LieAlgebra(dim=g.dim, brackets=brackets, labels=default_labels(g.dim), name=name or g.name)


def subalgebra(g: LieAlgebra, s: Subspace, name: str = "") -> LieAlgebra:
    """Subalgebra spanned by S in its RREF basis."""
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for a in range(s.dim):
        for b in range(a + 1, s.dim):
            value = g.bracket(s.basis[a], s.basis[b])
            if not s.contains(value):
                raise ValueError("subspace is not closed under the bracket")
            row = sparse(s.coordinates(value))
            if row:
                brackets[(a, b)] = row
    return LieAlgebra(dim=s.dim, brackets=brackets, labels=default_labels(s.dim), name=name)


def split_abelian_factor(g: LieAlgebra) -> Tuple[Subspace, Subspace]:
    """Decompose g = ideal + abelian with abelian central and disjoint from g'.

    The abelian factor completes z(g) & g' inside z(g); the ideal completes g'
    by unit vectors. Both choices are greedy in basis order.
    """
    z = center(g)
    d = derived_algebra(g)
    current = intersect(z, d)
    factor: List[Vector] = []
    for b in z.basis:
        if not current.contains(b):
            factor.append(b)
            current = sum_subspaces(current, Subspace.span([b], g.dim))
    abelian_part = Subspace.span(factor, g.dim)
    ideal_vectors = list(d.basis)
    current = sum_subspaces(d, abelian_part)
    for j in range(g.dim):
        e = g.basis_vector(j)
        if not current.contains(e):
            ideal_vectors.append(e)
            current = sum_subspaces(current, Subspace.span([e], g.dim))
    return Subspace.span(ideal_vectors, g.dim), abelian_part


def is_lie_homomorphism(source: LieAlgebra, target: LieAlgebra, matrix: Matrix) -> CheckResult:
    """Check M[e_i, e_j] = [M e_i, M e_j] on all basis pairs."""
    if (matrix.rows, matrix.cols) != (target.dim, source.dim):
        raise DimensionMismatchError(
            f"{matrix.rows}x{matrix.cols} matrix between dimensions {source.dim} and {target.dim}"
        )
    images = [matrix.column(j) for j in range(source.dim)]
    for i in range(source.dim):
        for j in range(i + 1, source.dim):
            lhs = matrix.apply(dense(source.basis_bracket(i, j), source.dim))
            rhs = target.bracket(images[i], images[j])
            if lhs != rhs:
                return CheckResult.failed(
                    f"map does not preserve [{source.labels[i]}, {source.labels[j]}]",
                    pair=(source.labels[i], source.labels[j]),
                    defect=sub_vectors(lhs, rhs),
                )
    return CheckResult.passed("map is a Lie algebra homomorphism")


# =============================================================================
# GRADINGS
# =============================================================================

@dataclass(frozen=True)
class GradedLieAlgebra:
    """An algebra with layers of positive degree."""
    algebra: LieAlgebra
    layers: Tuple[Subspace, ...]
    degrees: Tuple[int, ...]

    def layer_of_degree(self, degree: int) -> Subspace:
        found = Subspace.zero(self.algebra.dim)
        for layer, d in zip(self.layers, self.degrees):
            if d == degree:
                found = sum_subspaces(found, layer)
        return found

    def degree_matrix(self) -> Matrix:
        """The endomorphism acting as k on the layer of degree k."""
        columns = [v for layer in self.layers for v in layer.basis]
        scales = [d for layer, d in zip(self.layers, self.degrees) for _ in layer.basis]
        change = Matrix.from_columns(columns, self.algebra.dim)
        return change @ Matrix.diagonal(scales) @ inverse(change)


def graded_check(graded: GradedLieAlgebra) -> CheckResult:
    """Check that the layers split g and that [layer_i, layer_j] lies in layer_{i+j}."""
    g = graded.algebra
    if len(graded.layers) != len(graded.degrees):
        raise DimensionMismatchError("one degree per layer is required")
    if any(d <= 0 for d in graded.degrees):
        return CheckResult.failed("degrees must be positive", degrees=list(graded.degrees))
    total = Subspace.zero(g.dim)
    for layer in graded.layers:
        total = sum_subspaces(total, layer)
    if sum(layer.dim for layer in graded.layers) != g.dim or total.dim != g.dim:
        return CheckResult.failed(
            "layers are not independent or do not span the algebra",
            layer_dims=[layer.dim for layer in graded.layers],
            span_dim=total.dim,
        )
    for a, (la, da) in enumerate(zip(graded.layers, graded.degrees)):
        for b, (lb, db) in enumerate(zip(graded.layers, graded.degrees)):
            if b < a:
                continue
            target = graded.layer_of_degree(da + db)
            for u in la.basis:
                for v in lb.basis:
                    w = g.bracket(u, v)
                    if not target.contains(w):
                        return CheckResult.failed(
                            f"bracket of degree {da} and degree {db} leaves degree {da + db}",
                            layers=(a, b),
                            degrees=(da, db),
                            bracket=w,
                        )
    return CheckResult.passed("grading is compatible with the bracket")
