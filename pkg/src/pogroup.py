import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import sympy

from provider import get_config
from rational import dot, format_rational, matrix_rank, solve_affine
from statespace import (DiscreteMeasure, StatePolytope, StateVector, check_state,
                        representing_measures, state_polytope)
from table import FiniteTable, Sum, is_symmetric, validate_axioms

GroupElement = Tuple[int, ...]


class PresentationError(Exception):
    """Raised when a presentation is malformed (rank, strictness, normality, directedness)."""
    pass


class MembershipUnknownError(Exception):
    """Raised when cone membership cannot be decided within the coefficient cap."""
    pass


class NotAStrongUnitError(Exception):
    """Raised when an element does not dominate the generators within the cap."""
    pass


class ExtensionError(Exception):
    """Raised when a state has no consistent additive extension to the group."""
    pass


class NotPositiveError(Exception):
    """Raised when a group state takes a negative value on the cone."""
    pass


class WindowRadiusError(Exception):
    """Raised for a window radius that cannot hold the requested elements."""
    pass


def element_label(g: Sequence[int]) -> str:
    return ','.join(str(x) for x in g)


# Variants

@dataclass(frozen=True)
class FreeAbelian:
    """ℤⁿ with a standard, lexicographic or polyhedral cone.

    The lexicographic cone reads the last coordinate as the most significant:
    (x, y) ≥ 0 iff y > 0, or y = 0 and x ≥ 0.
    """
    rank: int
    cone: str = 'standard'
    rows: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise PresentationError(f"Rank must be positive, got {self.rank}")
        if self.cone not in ('standard', 'lex', 'polyhedral'):
            raise PresentationError(f"Unknown cone: {self.cone}")
        if self.cone == 'polyhedral':
            if not self.rows:
                raise PresentationError("Polyhedral cone needs generator rows")
            for row in self.rows:
                if len(row) != self.rank:
                    raise PresentationError(f"Cone row {row} does not have rank {self.rank}")
                if not any(row):
                    raise PresentationError("Cone rows must be nonzero")

    @property
    def is_abelian(self) -> bool:
        return True

    def add(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return tuple(x + y for x, y in zip(g, h))

    def neg(self, g: GroupElement) -> GroupElement:
        return tuple(-x for x in g)

    def cone_contains(self, g: GroupElement) -> bool:
        if self.cone == 'standard':
            return all(x >= 0 for x in g)
        if self.cone == 'lex':
            for x in reversed(g):
                if x != 0:
                    return x > 0
            return True
        return _polyhedral_member(self.rows, tuple(g), get_config().polyhedral_coefficient_cap)

    def finite_candidates(self, u: GroupElement) -> Optional[List[GroupElement]]:
        """Candidates covering [0, u], or None without a finiteness certificate."""
        if self.cone == 'standard' or (self.cone == 'polyhedral'
                                       and all(x >= 0 for row in self.rows for x in row)):
            if any(x < 0 for x in u):
                return None
            return [tuple(g) for g in itertools.product(*(range(x + 1) for x in u))]
        if self.cone == 'lex' and self.rank == 1 and u[0] >= 0:
            return [(t,) for t in range(u[0] + 1)]
        return None

    def describe(self) -> str:
        return f"Z^{self.rank} {self.cone}"


@dataclass(frozen=True)
class SemidirectZxZ2:
    """ℤ ⋉ ℤ² with elements (n, x, y).

    (m, v) + (n, w) = (m + n, φ⁻ⁿ(v) + w) where φ acts on the column (x, y);
    the cone is n > 0, or n = 0 and (x, y) lexicographically positive.
    """
    action: Tuple[Tuple[int, int], Tuple[int, int]]

    rank = 3

    def __post_init__(self):
        if len(self.action) != 2 or any(len(row) != 2 for row in self.action):
            raise PresentationError(f"Action must be a 2x2 matrix, got {self.action}")
        determinant = self.action[0][0] * self.action[1][1] - self.action[0][1] * self.action[1][0]
        if abs(determinant) != 1:
            raise PresentationError(f"Action {self.action} is not unimodular")

    @property
    def is_abelian(self) -> bool:
        return self.action == ((1, 0), (0, 1))

    def twist(self, v: Tuple[int, int], exponent: int) -> Tuple[int, int]:
        """Apply φ^exponent to v."""
        (a, b), (c, d) = _action_power(self.action, exponent)
        return a * v[0] + b * v[1], c * v[0] + d * v[1]

    def add(self, g: GroupElement, h: GroupElement) -> GroupElement:
        m, v = g[0], (g[1], g[2])
        n, w = h[0], (h[1], h[2])
        x, y = self.twist(v, -n)
        return m + n, x + w[0], y + w[1]

    def neg(self, g: GroupElement) -> GroupElement:
        x, y = self.twist((g[1], g[2]), g[0])
        return -g[0], -x, -y

    @staticmethod
    def inner_positive(x: int, y: int) -> bool:
        return y > 0 or (y == 0 and x >= 0)

    def cone_contains(self, g: GroupElement) -> bool:
        if g[0] != 0:
            return g[0] > 0
        return self.inner_positive(g[1], g[2])

    def finite_candidates(self, u: GroupElement) -> Optional[List[GroupElement]]:
        # a strong unit has n > 0, so [0, u] holds every (0, x, y) above 0
        return None

    def describe(self) -> str:
        return f"Z x| Z^2 action {self.action}"


@dataclass(frozen=True)
class LexZ:
    """ℤ ×lex inner: (k, g) ≥ 0 iff k > 0, or k = 0 and g ≥ 0 in the inner group."""
    inner: Union[FreeAbelian, SemidirectZxZ2, 'LexZ']

    @property
    def rank(self) -> int:
        return 1 + self.inner.rank

    @property
    def is_abelian(self) -> bool:
        return self.inner.is_abelian

    def add(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return (g[0] + h[0],) + tuple(self.inner.add(g[1:], h[1:]))

    def neg(self, g: GroupElement) -> GroupElement:
        return (-g[0],) + tuple(self.inner.neg(g[1:]))

    def cone_contains(self, g: GroupElement) -> bool:
        if g[0] != 0:
            return g[0] > 0
        return self.inner.cone_contains(g[1:])

    def finite_candidates(self, u: GroupElement) -> Optional[List[GroupElement]]:
        # a strong unit has k > 0, so [0, u] holds every (0, g) above 0
        return None

    def describe(self) -> str:
        return f"Z lex ({self.inner.describe()})"


Variant = Union[FreeAbelian, SemidirectZxZ2, LexZ]


@lru_cache(maxsize=None)
def _action_power(action: Tuple[Tuple[int, int], Tuple[int, int]], exponent: int):
    matrix = sympy.Matrix(action) ** exponent
    return tuple(tuple(int(x) for x in row) for row in matrix.tolist())


@lru_cache(maxsize=4096)
def _polyhedral_member(rows: Tuple[Tuple[int, ...], ...], g: GroupElement, cap: int) -> bool:
    """Decide whether g is a nonnegative integer combination of ``rows``.

    Raises:
        MembershipUnknownError: If the bounded search cannot decide
    """
    if not any(g):
        return True
    if matrix_rank([[Fraction(x) for x in row] for row in rows]) == len(rows):
        columns = [[Fraction(row[j]) for row in rows] for j in range(len(g))]
        solved = solve_affine(columns, [Fraction(x) for x in g], len(rows))
        if solved is None:
            return False
        coefficients, _ = solved
        return all(c >= 0 and c.denominator == 1 for c in coefficients)

    bounded = all(x >= 0 for row in rows for x in row)
    if bounded:
        if any(x < 0 for x in g):
            return False
        limits = [min(g[j] // row[j] for j in range(len(g)) if row[j] > 0) for row in rows]
    else:
        limits = [cap] * len(rows)
    exceeded = any(limit > cap for limit in limits)
    for coefficients in itertools.product(*(range(min(limit, cap) + 1) for limit in limits)):
        total = tuple(sum(c * row[j] for c, row in zip(coefficients, rows)) for j in range(len(g)))
        if total == g:
            return True
    if bounded and not exceeded:
        return False
    raise MembershipUnknownError(f"Membership of {g} in the cone spanned by {rows} is undecided "
                                 f"with coefficients up to {cap}")


@dataclass(frozen=True)
class PoGroupPresentation:
    """A concrete po-group: a variant carrying the group law and the cone."""
    variant: Variant
    label: str = ''

    @property
    def rank(self) -> int:
        return self.variant.rank

    @property
    def zero(self) -> GroupElement:
        return tuple(0 for _ in range(self.rank))

    @property
    def is_abelian(self) -> bool:
        return self.variant.is_abelian

    def element(self, g: Sequence[int]) -> GroupElement:
        if len(g) != self.rank:
            raise PresentationError(f"Element {tuple(g)} does not have rank {self.rank}")
        return tuple(int(x) for x in g)

    def add(self, g: Sequence[int], h: Sequence[int]) -> GroupElement:
        return self.variant.add(self.element(g), self.element(h))

    def neg(self, g: Sequence[int]) -> GroupElement:
        return self.variant.neg(self.element(g))

    def conjugate(self, g: Sequence[int], by: Sequence[int]) -> GroupElement:
        """Return ``-by + g + by``."""
        return self.add(self.add(self.neg(by), g), by)

    def cone_contains(self, g: Sequence[int]) -> bool:
        return self.variant.cone_contains(self.element(g))

    def leq(self, g: Sequence[int], h: Sequence[int]) -> bool:
        """``g ≤ h`` iff ``-g + h`` lies in the cone."""
        return self.cone_contains(self.add(self.neg(g), h))

    def multiple(self, n: int, g: Sequence[int]) -> GroupElement:
        result = self.zero
        for _ in range(n):
            result = self.add(result, g)
        return result

    def basis(self) -> List[GroupElement]:
        return [tuple(int(i == j) for i in range(self.rank)) for j in range(self.rank)]

    def generators(self) -> List[GroupElement]:
        """Basis vectors and their inverses."""
        return [g for e in self.basis() for g in (e, self.neg(e))]

    def box(self, radius: int) -> List[GroupElement]:
        return [tuple(g) for g in itertools.product(range(-radius, radius + 1), repeat=self.rank)]

    def describe(self) -> str:
        return self.label or self.variant.describe()


def standard_group(rank: int, label: str = '') -> PoGroupPresentation:
    return PoGroupPresentation(FreeAbelian(rank), label)


def lex_group(rank: int, label: str = '') -> PoGroupPresentation:
    return PoGroupPresentation(FreeAbelian(rank, 'lex'), label)


def polyhedral_group(rows: Sequence[Sequence[int]], label: str = '') -> PoGroupPresentation:
    rows = tuple(tuple(int(x) for x in row) for row in rows)
    return PoGroupPresentation(FreeAbelian(len(rows[0]) if rows else 0, 'polyhedral', rows), label)


def semidirect_group(action: Sequence[Sequence[int]] = ((1, 1), (0, 1)), label: str = '') -> PoGroupPresentation:
    return PoGroupPresentation(SemidirectZxZ2(tuple(tuple(int(x) for x in row) for row in action)), label)


def lex_z_group(inner: PoGroupPresentation, label: str = '') -> PoGroupPresentation:
    return PoGroupPresentation(LexZ(inner.variant), label)


def window_cone(group: PoGroupPresentation, radius: Optional[int] = None) -> List[GroupElement]:
    """Cone elements with every coordinate in [-radius, radius]."""
    radius = get_config().window_radius if radius is None else radius
    return [g for g in group.box(radius) if group.cone_contains(g)]


@dataclass(frozen=True)
class PresentationReport:
    strict: bool
    normal: bool
    directed: bool
    witnesses: Dict[str, tuple] = field(default_factory=dict, compare=False)

    @property
    def valid(self) -> bool:
        return self.strict and self.normal and self.directed

    def to_dict(self) -> dict:
        return {
            'strict': self.strict,
            'normal': self.normal,
            'directed': self.directed,
            'window_relative': True,
            'witnesses': {k: [list(x) for x in v] for k, v in sorted(self.witnesses.items())},
        }


def validate_presentation(group: PoGroupPresentation, radius: Optional[int] = None,
                          raise_on_failure: bool = True) -> PresentationReport:
    """Check strictness, normality and directedness of the cone on a window.

    Raises:
        PresentationError: If a check fails and ``raise_on_failure`` is set
    """
    radius = get_config().window_radius if radius is None else radius
    if radius < 1:
        raise WindowRadiusError(f"Window radius must be positive, got {radius}")
    cone = window_cone(group, radius)
    witnesses: Dict[str, tuple] = {}

    strict = True
    for g in cone:
        if g != group.zero and group.cone_contains(group.neg(g)):
            strict = False
            witnesses['strict'] = (g,)
            break

    normal = True
    for g in cone:
        for b in group.generators():
            if not group.cone_contains(group.conjugate(g, b)):
                normal = False
                witnesses['normal'] = (g, b)
                break
        if not normal:
            break

    # 各生成元を錐の元の差として書けるか
    directed = True
    for e in group.basis():
        if not any(group.cone_contains(group.add(group.neg(e), a)) for a in cone):
            directed = False
            witnesses['directed'] = (e,)
            break

    report = PresentationReport(strict, normal, directed, witnesses)
    if not report.valid:
        logging.warning(f"Presentation {group.describe()} fails on radius {radius}: {report.to_dict()}")
        if raise_on_failure:
            raise PresentationError(f"Presentation {group.describe()} is not a po-group on the window: "
                                    f"{sorted(witnesses)}")
    return report


@dataclass(frozen=True)
class StrongUnit:
    """A unit with the least n such that g ≤ n·u for each generator g."""
    unit: GroupElement
    bounds: Tuple[Tuple[GroupElement, int], ...]
    window_radius: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            'unit': list(self.unit),
            'bounds': [{'generator': list(g), 'n': n} for g, n in self.bounds],
            'window_radius': self.window_radius,
        }


def _least_multiple(group: PoGroupPresentation, g: GroupElement, u: GroupElement, cap: int) -> Optional[int]:
    multiple = group.zero
    for n in range(1, cap + 1):
        multiple = group.add(multiple, u)
        if group.leq(g, multiple):
            return n
    return None


def check_strong_unit(group: PoGroupPresentation, u: Sequence[int],
                      window_radius: Optional[int] = None) -> StrongUnit:
    """Find, for every generator and its inverse, the least n ≤ cap with g ≤ n·u.

    With ``window_radius`` every window element is checked as well.

    Raises:
        NotAStrongUnitError: If u is not positive or some element is not dominated
    """
    u = group.element(u)
    cap = get_config().unit_cap
    if u == group.zero or not group.cone_contains(u):
        raise NotAStrongUnitError(f"{u} is not a nonzero cone element")
    bounds = []
    for g in group.generators():
        n = _least_multiple(group, g, u, cap)
        if n is None:
            raise NotAStrongUnitError(f"{g} is not below n·{u} for any n ≤ {cap}")
        bounds.append((g, n))
    if window_radius is not None:
        for g in group.box(window_radius):
            if _least_multiple(group, g, u, cap) is None:
                raise NotAStrongUnitError(f"Window element {g} is not below n·{u} for any n ≤ {cap}")
    return StrongUnit(unit=u, bounds=tuple(bounds), window_radius=window_radius)


@dataclass(frozen=True)
class IntervalAlgebra:
    """Γ(G, u): a finite table with its group elements, or a lazy membership test."""
    group: PoGroupPresentation
    unit: GroupElement
    table: Optional[FiniteTable] = None
    elements: Tuple[GroupElement, ...] = ()

    @property
    def lazy(self) -> bool:
        return self.table is None

    def contains(self, g: Sequence[int]) -> bool:
        return self.group.cone_contains(g) and self.group.leq(g, self.unit)

    def element_id(self, g: Sequence[int]) -> int:
        return self.elements.index(tuple(g))

    def to_dict(self) -> dict:
        return {
            'group': self.group.describe(),
            'unit': list(self.unit),
            'realization': 'lazy' if self.lazy else 'finite',
            'size': None if self.lazy else len(self.elements),
        }


def _ordered(elements: Sequence[GroupElement], zero: GroupElement, unit: GroupElement) -> List[GroupElement]:
    """Sort lexicographically with zero first and the unit last."""
    middle = sorted(g for g in set(elements) if g != zero and g != unit)
    result = [zero] + middle
    if unit != zero:
        result.append(unit)
    return result


def _interval_table(group: PoGroupPresentation, elements: Sequence[GroupElement], name: str,
                    window: Optional[FrozenSet[GroupElement]] = None,
                    unit: Optional[GroupElement] = None) -> Tuple[FiniteTable, FrozenSet[Sum]]:
    index = {g: i for i, g in enumerate(elements)}
    sums = []
    unknown = set()
    for a in elements:
        for b in elements:
            total = group.add(a, b)
            if total in index:
                sums.append((index[a], index[b], index[total]))
            elif window is not None and unit is not None and group.leq(total, unit):
                unknown.add((index[a], index[b]))
    table = FiniteTable.build(len(elements), sums, zero=0, one=len(elements) - 1, name=name,
                              labels=[element_label(g) for g in elements])
    return table, frozenset(unknown)


def gamma_interval(group: PoGroupPresentation, u: Sequence[int]) -> IntervalAlgebra:
    """Build Γ(G, u) = {g : 0 ≤ g ≤ u}.

    The interval is realized as a finite table when the variant certifies
    finiteness and the element count stays within the configured cap;
    otherwise a lazy realization is returned.

    Raises:
        NotAStrongUnitError: If u is not a strong unit
        PresentationError: If the finite table fails the axioms
    """
    u = group.element(u)
    check_strong_unit(group, u)
    name = f"Gamma({group.describe()}, {element_label(u)})"

    candidates = group.variant.finite_candidates(u)
    cap = get_config().interval_cap
    if candidates is None:
        logging.warning(f"{name}: no finiteness certificate, using a lazy realization")
        return IntervalAlgebra(group=group, unit=u)
    if len(candidates) > cap:
        logging.warning(f"{name}: {len(candidates)} candidates exceed the cap {cap}, using a lazy realization")
        return IntervalAlgebra(group=group, unit=u)

    members = [g for g in candidates if group.cone_contains(g) and group.leq(g, u)]
    elements = _ordered(members, group.zero, u)
    table, _ = _interval_table(group, elements, name)
    report = validate_axioms(table)
    if not report.passed:
        raise PresentationError(f"{name} fails the axioms {report.tags()}")
    logging.info(f"{name}: finite interval with {len(elements)} elements")
    return IntervalAlgebra(group=group, unit=u, table=table, elements=tuple(elements))


@dataclass(frozen=True)
class WindowTable:
    """Finite window of an interval; sums leaving the window are unknown, not undefined."""
    table: FiniteTable
    elements: Tuple[GroupElement, ...]
    unknown: FrozenSet[Sum]
    radius: Optional[int] = None

    def is_unknown(self, a: int, b: int) -> bool:
        return (a, b) in self.unknown

    def to_dict(self) -> dict:
        return {
            'radius': self.radius,
            'elements': [self.table.label(a) for a in self.table.elements],
            'unknown': sorted([self.table.label(a), self.table.label(b)] for a, b in self.unknown),
        }


def window_table(interval: IntervalAlgebra, radius: int) -> WindowTable:
    """Finite sub-table of interval elements with coordinates in [-radius, radius].

    Only elements whose two complements also lie in the window are kept.

    Raises:
        WindowRadiusError: If the radius is not positive or misses the unit
    """
    if radius < 1:
        raise WindowRadiusError(f"Window radius must be positive, got {radius}")
    group = interval.group
    u = interval.unit
    if any(abs(x) > radius for x in u):
        raise WindowRadiusError(f"Radius {radius} does not reach the unit {u}")

    members = {g for g in group.box(radius) if interval.contains(g)}
    while True:
        closed = {g for g in members
                  if group.add(u, group.neg(g)) in members and group.add(group.neg(g), u) in members}
        if closed == members:
            break
        members = closed
    elements = _ordered(members, group.zero, u)
    name = f"window {radius} of Gamma({group.describe()}, {element_label(u)})"
    table, unknown = _interval_table(group, elements, name, window=frozenset(members), unit=u)
    logging.info(f"{name}: {len(elements)} elements, {len(unknown)} unknown sums")
    return WindowTable(table=table, elements=tuple(elements), unknown=unknown, radius=radius)


def non_commutative_witness(window: WindowTable) -> Optional[Tuple[int, int]]:
    """First pair with both sums defined in the window and a + b ≠ b + a."""
    table = window.table
    for (a, b), total in sorted(table.plus.items()):
        other = table.add(b, a)
        if other is not None and other != total:
            return a, b
    return None


def window_summary(window: WindowTable) -> dict:
    """Symmetry and commutativity of a window, with a concrete witness pair."""
    table = window.table
    witness = non_commutative_witness(window)
    result = {
        'symmetric': is_symmetric(table),
        'commutative': witness is None,
        'window': window.to_dict(),
    }
    if witness is not None:
        a, b = witness
        result['witness'] = {
            'a': table.label(a),
            'b': table.label(b),
            'a+b': table.label(table.add(a, b)),
            'b+a': table.label(table.add(b, a)),
        }
    return result


# Homomorphisms to the rationals

@dataclass(frozen=True)
class GroupHom:
    """A homomorphism G → ℚ fixed by its values on the basis vectors."""
    values: Tuple[Fraction, ...]

    def __call__(self, g: Sequence[int]) -> Fraction:
        return dot(self.values, [Fraction(x) for x in g])

    def __add__(self, other: 'GroupHom') -> 'GroupHom':
        return GroupHom(tuple(x + y for x, y in zip(self.values, other.values)))

    def __sub__(self, other: 'GroupHom') -> 'GroupHom':
        return GroupHom(tuple(x - y for x, y in zip(self.values, other.values)))

    def __neg__(self) -> 'GroupHom':
        return GroupHom(tuple(-x for x in self.values))

    def to_list(self) -> List[str]:
        return [format_rational(x) for x in self.values]

    @classmethod
    def of(cls, values: Sequence) -> 'GroupHom':
        return cls(tuple(Fraction(x) for x in values))


def make_hom(group: PoGroupPresentation, values: Sequence) -> GroupHom:
    """Build a hom and check additivity on generator pairs.

    For the semidirect variant this forces the values to be invariant under
    the action.

    Raises:
        PresentationError: If the values are not additive
    """
    if len(values) != group.rank:
        raise PresentationError(f"Hom needs {group.rank} values, got {len(values)}")
    f = GroupHom.of(values)
    if not group.is_abelian:
        for g in group.generators():
            for h in group.generators():
                if f(group.add(g, h)) != f(g) + f(h):
                    raise PresentationError(f"Values {f.to_list()} are not additive on ({g}, {h})")
    return f


def _decompose(interval: IntervalAlgebra, x: GroupElement, preference: Sequence[int],
               limit: int) -> Optional[List[int]]:
    group = interval.group
    parts: List[int] = []
    remaining = x
    while remaining != group.zero:
        if len(parts) >= limit:
            return None
        for i in preference:
            if group.leq(interval.elements[i], remaining):
                parts.append(i)
                remaining = group.add(group.neg(interval.elements[i]), remaining)
                break
        else:
            return None
    return parts


def extend_state(interval: IntervalAlgebra, state: StateVector,
                 radius: Optional[int] = None) -> GroupHom:
    """Extend a state on a finite interval to a group state.

    The basis values come from an exact linear solve over the interval
    elements. Every window cone element reachable by greedy decompositions is
    then evaluated through a largest-first and a smallest-first decomposition,
    and both sums must agree with the linear values.

    Raises:
        ExtensionError: If no additive extension exists or decompositions disagree
    """
    if interval.lazy:
        raise ExtensionError("States extend only from finite intervals")
    check_state(interval.table, state)
    group = interval.group
    rows = [[Fraction(x) for x in g] for g in interval.elements]
    solved = solve_affine(rows, list(state.values), group.rank)
    if solved is None:
        raise ExtensionError(f"State {state.to_list()} is not additive on the group")
    values, free = solved
    if free:
        logging.warning(f"Interval does not span the group: {len(free)} basis values fixed to 0")
    f = GroupHom(values)

    nonzero = [i for i in range(len(interval.elements)) if interval.elements[i] != group.zero]
    high = list(reversed(nonzero))
    limit = 4 * get_config().unit_cap
    checked = 0
    for x in window_cone(group, radius):
        first = _decompose(interval, x, high, limit)
        second = _decompose(interval, x, nonzero, limit)
        if first is None or second is None:
            continue
        by_first = sum((state[i] for i in first), Fraction(0))
        by_second = sum((state[i] for i in second), Fraction(0))
        if not by_first == by_second == f(x):
            raise ExtensionError(
                f"Decompositions of {x} give {format_rational(by_first)} and {format_rational(by_second)}, "
                f"linear value {format_rational(f(x))}: no RDP on the tested window")
        checked += 1
    logging.info(f"Extended state {state.to_list()} to {f.to_list()}, {checked} window elements cross-checked")
    return f


def restrict_state(f: GroupHom, interval: IntervalAlgebra, radius: Optional[int] = None) -> StateVector:
    """Restrict a group state to the interval elements.

    Raises:
        NotPositiveError: If f is negative on a window cone element or f(u) ≠ 1
    """
    if interval.lazy:
        raise ExtensionError("States restrict only to finite intervals")
    if f(interval.unit) != 1:
        raise NotPositiveError(f"Group state takes {format_rational(f(interval.unit))} at the unit")
    for g in window_cone(interval.group, radius):
        if f(g) < 0:
            raise NotPositiveError(f"Group state is negative at {g}")
    state = StateVector(tuple(f(g) for g in interval.elements))
    check_state(interval.table, state)
    return state


@dataclass(frozen=True)
class GroupRepresentation:
    """ŝ = Σ λᵢ·v̂ᵢ checked on window group elements."""
    measure: DiscreteMeasure
    extension: GroupHom
    vertex_extensions: Tuple[GroupHom, ...]
    checked: int
    holds: bool

    def to_dict(self) -> dict:
        return {
            'measure': self.measure.to_dict(),
            'extension': self.extension.to_list(),
            'vertex_extensions': [v.to_list() for v in self.vertex_extensions],
            'checked': self.checked,
            'holds': self.holds,
        }


def represent_group_state(interval: IntervalAlgebra, state: StateVector,
                          polytope: Optional[StatePolytope] = None,
                          radius: Optional[int] = None) -> GroupRepresentation:
    """Carry the representing measure of a state over to its group extension."""
    polytope = polytope or state_polytope(interval.table)
    measure = representing_measures(polytope, state).measure
    extension = extend_state(interval, state, radius)
    extensions = tuple(extend_state(interval, v, radius) for v, _ in measure.atoms)
    radius = get_config().window_radius if radius is None else radius
    window = interval.group.box(radius)
    holds = all(extension(g) == sum((w * e(g) for (_, w), e in zip(measure.atoms, extensions)), Fraction(0))
                for g in window)
    return GroupRepresentation(measure, extension, extensions, len(window), holds)
