import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ppl import C_Polyhedron, Constraint_System, Linear_Expression, Poly_Gen_Relation, point

from rational import (Vector, dot, format_rational, make_rng, matrix_rank, primitive, random_rational,
                      random_weights, solve_affine)
from riesz import has_rdp2
from table import ElementId, FiniteTable, InternalConsistencyError, partial_meet

# Row layout: (constant, coefficient_0, ..., coefficient_{n-1}) read as
# "constant + coefficients · x = 0" for equalities and "≥ 0" for inequalities.
Row = Tuple[Fraction, ...]


class StateValidationError(Exception):
    """Raised when a value vector is not a state of the table."""
    pass


class NotASimplexError(Exception):
    """Raised when a unique decomposition is requested on a non-simplex."""
    pass


class StateOutsidePolytopeError(Exception):
    """Raised when a state is not a convex combination of the vertices."""
    pass


class EmptyPolytopeError(Exception):
    """Raised when an operation needs a nonempty state space."""
    pass


class BarycenterMismatchError(Exception):
    """Raised when a measure does not have the expected barycenter."""
    pass


class NotApplicableError(Exception):
    """Raised when a check needs meets that the table does not have."""
    pass


@dataclass(frozen=True)
class StateVector:
    """Values of a state, indexed by element id."""
    values: Tuple[Fraction, ...]

    def __getitem__(self, a: ElementId) -> Fraction:
        return self.values[a]

    def __len__(self) -> int:
        return len(self.values)

    def to_list(self) -> List[str]:
        return [format_rational(x) for x in self.values]

    @classmethod
    def of(cls, values: Sequence) -> 'StateVector':
        return cls(tuple(Fraction(x) for x in values))


@dataclass(frozen=True)
class LinearSystem:
    """H-representation of the state space of a table."""
    size: int
    equalities: Tuple[Row, ...]
    inequalities: Tuple[Row, ...]

    def residuals(self, values: Sequence[Fraction]) -> List[Tuple[str, Row, Fraction]]:
        """Return every row the point violates, with its exact residual."""
        broken = []
        for row in self.equalities:
            value = row[0] + dot(row[1:], values)
            if value != 0:
                broken.append(('eq', row, value))
        for row in self.inequalities:
            value = row[0] + dot(row[1:], values)
            if value < 0:
                broken.append(('ineq', row, value))
        return broken

    def contains(self, values: Sequence[Fraction]) -> bool:
        return not self.residuals(values)


class StateClass(Enum):
    EMPTY = 'empty'
    SIMPLEX = 'simplex'
    NON_SIMPLEX = 'non_simplex'


@dataclass(frozen=True)
class StatePolytope:
    """Extreme states of a table in canonical (lexicographic) order."""
    vertices: Tuple[StateVector, ...]
    affine_dim: int
    system: Optional[LinearSystem] = field(default=None, compare=False)

    @property
    def empty(self) -> bool:
        return not self.vertices

    def to_dict(self) -> dict:
        return {
            'empty': self.empty,
            'dim': self.affine_dim,
            'vertices': [v.to_list() for v in self.vertices],
            'class': classify(self).kind.value,
        }


@dataclass(frozen=True)
class Classification:
    """Simplex type of a polytope.

    A finite polytope has a closed set of extreme points, so ``simplex`` means
    Choquet and Bauer simplex at once.
    """
    kind: StateClass
    vertex_count: int
    affine_dim: int

    @property
    def is_simplex(self) -> bool:
        return self.kind is StateClass.SIMPLEX

    @property
    def bauer(self) -> bool:
        return self.is_simplex

    def to_dict(self) -> dict:
        return {
            'class': self.kind.value,
            'vertex_count': self.vertex_count,
            'dim': self.affine_dim,
            'choquet': self.is_simplex,
            'bauer': self.bauer,
        }


@dataclass(frozen=True)
class AffFunction:
    """``constant + coefficients · s`` on state coordinates."""
    coefficients: Tuple[Fraction, ...]
    constant: Fraction = Fraction(0)

    def __call__(self, state) -> Fraction:
        values = state.values if isinstance(state, StateVector) else state
        return self.constant + dot(self.coefficients, values)


@dataclass(frozen=True)
class ConvexPLFunction:
    """Maximum of finitely many affine pieces."""
    pieces: Tuple[AffFunction, ...]

    def __call__(self, state) -> Fraction:
        return max(piece(state) for piece in self.pieces)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability measure on finitely many states; zero weights are dropped."""
    atoms: Tuple[Tuple[StateVector, Fraction], ...]

    @classmethod
    def from_weights(cls, vertices: Sequence[StateVector], weights: Sequence[Fraction]) -> 'DiscreteMeasure':
        if any(w < 0 for w in weights):
            raise StateOutsidePolytopeError(f"Negative weight in {[format_rational(w) for w in weights]}")
        if sum(weights, Fraction(0)) != 1:
            raise StateValidationError("Measure weights must sum to one")
        combined: Dict[StateVector, Fraction] = {}
        for vertex, weight in zip(vertices, weights):
            if weight != 0:
                combined[vertex] = combined.get(vertex, Fraction(0)) + weight
        return cls(tuple(sorted(combined.items(), key=lambda atom: atom[0].values)))

    @classmethod
    def dirac(cls, state: StateVector) -> 'DiscreteMeasure':
        return cls(((state, Fraction(1)),))

    def weights(self) -> Dict[StateVector, Fraction]:
        return dict(self.atoms)

    @property
    def is_dirac(self) -> bool:
        return len(self.atoms) == 1

    def barycenter(self) -> StateVector:
        size = len(self.atoms[0][0])
        return StateVector(tuple(sum((w * v[a] for v, w in self.atoms), Fraction(0))
                                 for a in range(size)))

    def integrate(self, f) -> Fraction:
        return sum((w * f(v) for v, w in self.atoms), Fraction(0))

    def mix(self, other: 'DiscreteMeasure', lam: Fraction) -> 'DiscreteMeasure':
        """Return ``lam·self + (1 - lam)·other``."""
        vertices = [v for v, _ in self.atoms] + [v for v, _ in other.atoms]
        weights = [lam * w for _, w in self.atoms] + [(1 - lam) * w for _, w in other.atoms]
        return DiscreteMeasure.from_weights(vertices, weights)

    def to_dict(self) -> dict:
        return {'atoms': [{'state': v.to_list(), 'weight': format_rational(w)} for v, w in self.atoms]}


@dataclass(frozen=True)
class MeasureWitness:
    """A representing measure and, when uniqueness fails, a second one."""
    measure: DiscreteMeasure
    alternative: Optional[DiscreteMeasure] = None

    @property
    def unique(self) -> bool:
        return self.alternative is None

    def to_dict(self) -> dict:
        return {
            'unique': self.unique,
            'measure': self.measure.to_dict(),
            'alternative': self.alternative.to_dict() if self.alternative else None,
        }


@dataclass(frozen=True)
class AffStateRecord:
    """Positive normalized functional f ↦ f(s) on affine functions."""
    evaluations_match: bool
    normalized: bool
    positive: bool
    samples: int

    @property
    def holds(self) -> bool:
        return self.evaluations_match and self.normalized and self.positive

    def to_dict(self) -> dict:
        return {
            'evaluations_match': self.evaluations_match,
            'normalized': self.normalized,
            'positive': self.positive,
            'samples': self.samples,
        }


def _unit(size: int, index: int, scale: int = 1) -> Tuple[Fraction, ...]:
    return tuple(Fraction(scale if i == index else 0) for i in range(size))


def _normalize_row(row: Sequence[Fraction], equality: bool) -> Optional[Row]:
    if all(x == 0 for x in row):
        return None
    row = primitive(row)
    if equality:
        lead = next(x for x in row if x != 0)
        if lead < 0:
            row = tuple(-x for x in row)
    return row


def build_hrep(table: FiniteTable) -> LinearSystem:
    """Build the linear system whose solutions are the states of ``table``.

    One variable per element, one equality per defined sum, the
    normalization s(0)=0, s(1)=1 and the bounds 0 ≤ s(a) ≤ 1.
    """
    return sum_system(table.size, table.plus.items(), table.zero, table.one)


def sum_system(n: int, sums: Iterable[Tuple[Tuple[ElementId, ElementId], ElementId]],
               zero: ElementId, one: ElementId) -> LinearSystem:
    """State system for ``((a, b), c)`` pairs meaning a + b = c."""
    equalities = set()
    for (a, b), c in sums:
        coefficients = [Fraction(0)] * n
        coefficients[a] += 1
        coefficients[b] += 1
        coefficients[c] -= 1
        row = _normalize_row([Fraction(0)] + coefficients, equality=True)
        if row is not None:
            equalities.add(row)
    equalities.add((Fraction(0),) + _unit(n, zero))
    equalities.add(_normalize_row((Fraction(-1),) + _unit(n, one), equality=True))

    inequalities = set()
    for a in range(n):
        inequalities.add((Fraction(0),) + _unit(n, a))
        inequalities.add((Fraction(1),) + _unit(n, a, -1))
    return LinearSystem(size=n, equalities=tuple(sorted(equalities)),
                        inequalities=tuple(sorted(inequalities)))


def _expression(row: Row) -> Linear_Expression:
    integers = primitive(row)
    return Linear_Expression([int(x) for x in integers[1:]], int(integers[0]))


def to_polyhedron(system: LinearSystem) -> C_Polyhedron:
    """The system as a closed ppl polyhedron in ``system.size`` variables."""
    constraints = Constraint_System()
    for row in system.equalities:
        constraints.insert(_expression(row) == 0)
    for row in system.inequalities:
        constraints.insert(_expression(row) >= 0)
    polyhedron = C_Polyhedron(system.size, 'universe')
    polyhedron.add_constraints(constraints)
    return polyhedron


def _to_point(values: Sequence[Fraction]):
    denominator = lcm(*(Fraction(x).denominator for x in values)) if values else 1
    numerators = [int(Fraction(x) * denominator) for x in values]
    return point(Linear_Expression(numerators, 0), denominator)


def polyhedron_contains(polyhedron: C_Polyhedron, values: Sequence[Fraction]) -> bool:
    relation = polyhedron.relation_with(_to_point(values))
    return relation.implies(Poly_Gen_Relation.subsumes())


def vertex_enumerate(system: LinearSystem) -> List[Vector]:
    """Exact vertices of a bounded polyhedron, in lexicographic order.

    The system goes to ppl as a ``Constraint_System``; the points of the
    minimized generator system are the vertices. An infeasible system gives
    an empty list.

    Raises:
        InternalConsistencyError: If the polyhedron has a ray or a line
    """
    polyhedron = to_polyhedron(system)
    if polyhedron.is_empty():
        return []
    vertices = set()
    for generator in polyhedron.minimized_generators():
        if not generator.is_point():
            raise InternalConsistencyError(f"Polyhedron is unbounded along {generator}")
        divisor = int(generator.divisor())
        values = [Fraction(int(c), divisor) for c in generator.coefficients()]
        values += [Fraction(0)] * (system.size - len(values))
        vertices.add(tuple(values))
    logging.debug(f"{len(vertices)} vertices from {len(system.equalities)} equalities and "
                  f"{len(system.inequalities)} inequalities in {system.size} variables")
    return sorted(vertices)


def affine_dimension(points: Sequence[Sequence[Fraction]]) -> int:
    """Exact affine dimension of a point set; -1 when it is empty."""
    if not points:
        return -1
    base = points[0]
    differences = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    return matrix_rank(differences)


def enumerate_states(system: LinearSystem) -> StatePolytope:
    """Enumerate the extreme states of a state system."""
    vertices = tuple(StateVector(v) for v in vertex_enumerate(system))
    dim = affine_dimension([v.values for v in vertices])
    logging.info(f"State space: {len(vertices)} vertices, dimension {dim}")
    return StatePolytope(vertices=vertices, affine_dim=dim, system=system)


def state_polytope(table: FiniteTable) -> StatePolytope:
    return enumerate_states(build_hrep(table))


def classify(polytope: StatePolytope) -> Classification:
    count = len(polytope.vertices)
    if count == 0:
        kind = StateClass.EMPTY
    elif count == polytope.affine_dim + 1:
        kind = StateClass.SIMPLEX
    else:
        kind = StateClass.NON_SIMPLEX
    return Classification(kind=kind, vertex_count=count, affine_dim=polytope.affine_dim)


def check_state(table: FiniteTable, state: StateVector) -> None:
    """Check that ``state`` is a state of ``table``.

    Raises:
        StateValidationError: Naming the first violated condition
    """
    if len(state) != table.size:
        raise StateValidationError(f"State has {len(state)} values, table has {table.size} elements")
    if state[table.zero] != 0:
        raise StateValidationError(f"s({table.label(table.zero)}) must be 0")
    if state[table.one] != 1:
        raise StateValidationError(f"s({table.label(table.one)}) must be 1")
    for a in table.elements:
        if not 0 <= state[a] <= 1:
            raise StateValidationError(f"s({table.label(a)}) = {format_rational(state[a])} outside [0, 1]")
    for (a, b), c in sorted(table.plus.items()):
        if state[a] + state[b] != state[c]:
            raise StateValidationError(
                f"s({table.label(a)} + {table.label(b)}) != s({table.label(a)}) + s({table.label(b)})")


def evaluation_map(table: FiniteTable, a: ElementId) -> AffFunction:
    """The evaluation function ``â(s) = s(a)``."""
    return AffFunction(coefficients=_unit(table.size, a))


def constant_function(size: int, value: Fraction = Fraction(1)) -> AffFunction:
    return AffFunction(coefficients=tuple(Fraction(0) for _ in range(size)), constant=Fraction(value))


def random_affine_function(rng: random.Random, size: int) -> AffFunction:
    coefficients = tuple(random_rational(rng, Fraction(-1), Fraction(1)) for _ in range(size))
    return AffFunction(coefficients=coefficients, constant=random_rational(rng, Fraction(-1), Fraction(1)))


def random_convex_function(rng: random.Random, size: int, pieces: int = 2) -> ConvexPLFunction:
    return ConvexPLFunction(tuple(random_affine_function(rng, size) for _ in range(pieces)))


def random_state(polytope: StatePolytope, rng: random.Random) -> Tuple[StateVector, DiscreteMeasure]:
    """Draw a relative-interior state as a strictly positive mix of the vertices."""
    if polytope.empty:
        raise EmptyPolytopeError("No states to draw from")
    weights = random_weights(rng, len(polytope.vertices))
    measure = DiscreteMeasure.from_weights(polytope.vertices, weights)
    return measure.barycenter(), measure


def _require_member(polytope: StatePolytope, state: StateVector) -> None:
    if polytope.system is not None and not polytope.system.contains(state.values):
        raise StateOutsidePolytopeError(f"{state.to_list()} does not satisfy the state system")


def barycentric_decompose(polytope: StatePolytope, state: StateVector) -> DiscreteMeasure:
    """Unique weights λᵢ ≥ 0 with ``state = Σ λᵢ·vᵢ`` on a simplex.

    Raises:
        NotASimplexError: If the polytope is not a simplex
        StateOutsidePolytopeError: If a weight is negative or no solution exists
    """
    if not classify(polytope).is_simplex:
        raise NotASimplexError(f"Polytope with {len(polytope.vertices)} vertices and "
                               f"dimension {polytope.affine_dim} is not a simplex")
    vertices = polytope.vertices
    rows = [[v[a] for v in vertices] for a in range(len(state))]
    rows.append([Fraction(1)] * len(vertices))
    rhs = list(state.values) + [Fraction(1)]
    solved = solve_affine(rows, rhs, len(vertices))
    if solved is None:
        raise StateOutsidePolytopeError(f"{state.to_list()} is not in the affine hull of the vertices")
    weights, free = solved
    if free:
        raise InternalConsistencyError("Simplex vertices are affinely dependent")
    if any(w < 0 for w in weights):
        raise StateOutsidePolytopeError(
            f"{state.to_list()} has negative barycentric weight {[format_rational(w) for w in weights]}")
    return DiscreteMeasure.from_weights(vertices, weights)


def measure_polytope(polytope: StatePolytope, state: StateVector) -> List[DiscreteMeasure]:
    """All vertex-supported representing measures of ``state`` that are extreme.

    The set of weight vectors λ ≥ 0, Σλ = 1 with barycenter ``state`` is itself
    a polytope; its vertices are the representations with affinely
    independent support. A single vertex means the representation is unique.
    """
    m = len(polytope.vertices)
    equalities = []
    for a in range(len(state)):
        row = _normalize_row([-state[a]] + [v[a] for v in polytope.vertices], equality=True)
        if row is not None:
            equalities.append(row)
    equalities.append((Fraction(-1),) + tuple(Fraction(1) for _ in range(m)))
    inequalities = tuple((Fraction(0),) + _unit(m, i) for i in range(m))
    system = LinearSystem(size=m, equalities=tuple(equalities), inequalities=inequalities)
    measures = [DiscreteMeasure.from_weights(polytope.vertices, weights)
                for weights in vertex_enumerate(system)]
    return sorted(measures, key=lambda mu: [(v.values, w) for v, w in mu.atoms])


def representing_measures(polytope: StatePolytope, state: StateVector) -> MeasureWitness:
    """A representing measure of ``state`` and a second one if it is not unique.

    Raises:
        EmptyPolytopeError: If there are no states
        StateOutsidePolytopeError: If ``state`` is not in the polytope
    """
    if polytope.empty:
        raise EmptyPolytopeError("The state space is empty")
    _require_member(polytope, state)
    if classify(polytope).is_simplex:
        return MeasureWitness(barycentric_decompose(polytope, state))
    measures = measure_polytope(polytope, state)
    if not measures:
        raise StateOutsidePolytopeError(f"{state.to_list()} is not a convex combination of the vertices")
    alternative = measures[1] if len(measures) > 1 else None
    if alternative is not None:
        logging.info(f"State {state.to_list()} has {len(measures)} basic representing measures")
    return MeasureWitness(measures[0], alternative)


def is_dirac(measure: DiscreteMeasure) -> bool:
    return measure.is_dirac


def is_extreme_state(polytope: StatePolytope, state: StateVector) -> bool:
    """A state is extreme iff its only representing measure is a Dirac measure."""
    measures = measure_polytope(polytope, state)
    return len(measures) == 1 and measures[0].is_dirac


def verify_polytope(polytope: StatePolytope) -> None:
    """Check every vertex exactly: inside the ppl polyhedron, and not a mix of the others.

    Raises:
        InternalConsistencyError: If a vertex breaks a row or is not extreme
    """
    polyhedron = to_polyhedron(polytope.system) if polytope.system is not None else None
    for vertex in polytope.vertices:
        if polyhedron is not None and not polyhedron_contains(polyhedron, vertex.values):
            raise InternalConsistencyError(f"Vertex {vertex.to_list()} violates the state system")
    for vertex in polytope.vertices:
        others = StatePolytope(tuple(v for v in polytope.vertices if v != vertex),
                               affine_dim=polytope.affine_dim)
        if others.vertices and measure_polytope(others, vertex):
            raise InternalConsistencyError(f"Vertex {vertex.to_list()} is a mix of the others")


def jensen_check(measure: DiscreteMeasure, state: StateVector, f: ConvexPLFunction) -> bool:
    """Return True iff ``∫ f dμ ≥ f(s)`` exactly.

    Raises:
        BarycenterMismatchError: If the measure does not have barycenter ``state``
    """
    if measure.barycenter() != state:
        raise BarycenterMismatchError(
            f"Barycenter {measure.barycenter().to_list()} differs from {state.to_list()}")
    return measure.integrate(f) >= f(state)


def extremal_min_rule(table: FiniteTable, state: StateVector,
                      polytope: Optional[StatePolytope] = None) -> bool:
    """Return True iff ``s(a ∧ b) = min(s(a), s(b))`` for every pair.

    With ``polytope`` given on a table with RDP₂ the answer is compared with
    vertex membership.

    Raises:
        NotApplicableError: If some pair has no meet
        InternalConsistencyError: If the rule and vertex membership disagree
    """
    holds = True
    for a in table.elements:
        for b in table.elements:
            meet = partial_meet(table, a, b)
            if meet is None:
                raise NotApplicableError(f"{table.label(a)} ∧ {table.label(b)} does not exist")
            if state[meet] != min(state[a], state[b]):
                holds = False
    if polytope is not None:
        # rdp2 の表でのみ頂点と一致する
        if has_rdp2(table).holds and holds != (state in polytope.vertices):
            raise InternalConsistencyError(
                f"Min rule gives {holds} but vertex membership differs for {state.to_list()}")
    return holds


def aff_state_correspondence(table: FiniteTable, state: StateVector,
                             polytope: Optional[StatePolytope] = None,
                             samples: int = 100,
                             rng: Optional[random.Random] = None) -> AffStateRecord:
    """Check the functional f ↦ f(s) on affine functions over the state space.

    Positivity is tested on ``samples`` random affine functions shifted to be
    nonnegative on every vertex.

    Raises:
        EmptyPolytopeError: If there are no states
        StateOutsidePolytopeError: If ``state`` is not a state
    """
    polytope = polytope or state_polytope(table)
    if polytope.empty:
        raise EmptyPolytopeError("The state space is empty")
    _require_member(polytope, state)
    rng = rng or make_rng()

    evaluations_match = all(evaluation_map(table, a)(state) == state[a] for a in table.elements)
    normalized = constant_function(table.size)(state) == 1
    positive = True
    for _ in range(samples):
        f = random_affine_function(rng, table.size)
        lowest = min(f(v) for v in polytope.vertices)
        shifted = AffFunction(f.coefficients, f.constant - lowest + random_rational(rng))
        if shifted(state) < 0:
            positive = False
            break
    return AffStateRecord(evaluations_match, normalized, positive, samples)


def state_from_mapping(table: FiniteTable, values: Mapping[ElementId, Fraction]) -> StateVector:
    """Complete a partial assignment with s(0)=0 and s(1)=1 and validate it."""
    full = dict(values)
    full.setdefault(table.zero, Fraction(0))
    full.setdefault(table.one, Fraction(1))
    missing = [table.label(a) for a in table.elements if a not in full]
    if missing:
        raise StateValidationError(f"No value for {', '.join(missing)}")
    state = StateVector(tuple(Fraction(full[a]) for a in table.elements))
    check_state(table, state)
    return state


def state_space_report(table: FiniteTable, rng: Optional[random.Random] = None,
                       samples: Optional[int] = None) -> dict:
    """State space fragment of an analysis report."""
    polytope = state_polytope(table)
    result = {'state_space': polytope.to_dict(), 'classification': classify(polytope).to_dict()}
    if not polytope.empty and samples:
        rng = rng or make_rng()
        unique = 0
        for _ in range(samples):
            state, _ = random_state(polytope, rng)
            if representing_measures(polytope, state).unique:
                unique += 1
        result['uniquely_represented'] = f"{unique}/{samples}"
    return result
