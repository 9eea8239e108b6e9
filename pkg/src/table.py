import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from provider import provide_commute_mode, provide_fail_fast

ElementId = int
Sum = Tuple[ElementId, ElementId]


class StructuralError(Exception):
    """Raised when a table is malformed (ids out of range, bad zero/one).

    ``cell`` is the offending (a, b) pair when one cell is to blame.
    """

    def __init__(self, message: str, cell: Optional[Sum] = None):
        super().__init__(message)
        self.cell = cell


class UndefinedDifferenceError(Exception):
    """Raised when a difference is requested for a pair with a ≰ b."""
    pass


class InternalConsistencyError(Exception):
    """Raised when a table contradicts a consequence of the axioms."""
    pass


@dataclass(frozen=True)
class FiniteTable:
    """A finite pseudo effect algebra given by its partial addition table.

    ``plus`` maps a pair of element ids to their sum; pairs missing from the
    mapping are undefined. Labels are a side table and never enter the
    arithmetic.
    """
    size: int
    plus: Mapping[Sum, ElementId]
    zero: ElementId
    one: ElementId
    name: Optional[str] = None
    labels: Tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def build(cls, size: int, sums: Iterable[Tuple[ElementId, ElementId, ElementId]],
              zero: ElementId = 0, one: Optional[ElementId] = None,
              name: Optional[str] = None, labels: Sequence[str] = (),
              complete_identities: bool = True) -> 'FiniteTable':
        """Build a table from ``(a, b, c)`` triples meaning ``a + b = c``.

        Identity sums with zero are added when ``complete_identities`` is set.

        Raises:
            StructuralError: If an id is out of range or a cell is defined twice
                with different values
        """
        if one is None:
            one = size - 1
        plus: Dict[Sum, ElementId] = {}
        for a, b, c in sums:
            _check_ids(size, (a, b, c))
            if plus.get((a, b), c) != c:
                raise StructuralError(f"Sum {a} + {b} defined twice: {plus[(a, b)]} and {c}", cell=(a, b))
            plus[(a, b)] = c
        if complete_identities and 0 <= zero < size:
            for x in range(size):
                plus.setdefault((x, zero), x)
                plus.setdefault((zero, x), x)
        table = cls(size=size, plus=plus, zero=zero, one=one, name=name,
                    labels=tuple(labels) if labels else tuple(str(i) for i in range(size)))
        check_structure(table)
        return table

    def add(self, a: ElementId, b: ElementId) -> Optional[ElementId]:
        """Return ``a + b`` or None when the sum is undefined."""
        return self.plus.get((a, b))

    def defined(self, a: ElementId, b: ElementId) -> bool:
        return (a, b) in self.plus

    @property
    def elements(self) -> range:
        return range(self.size)

    def label(self, a: ElementId) -> str:
        return self.labels[a] if a < len(self.labels) else str(a)

    def lookup(self, label: str) -> ElementId:
        """Return the id carrying ``label``."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"Unknown element label: {label}")

    def with_plus(self, plus: Mapping[Sum, ElementId]) -> 'FiniteTable':
        """Return a copy with a different addition (used by mutation tests)."""
        return FiniteTable(size=self.size, plus=dict(plus), zero=self.zero, one=self.one,
                           name=self.name, labels=self.labels)

    @cached_property
    def right_index(self) -> Dict[Sum, List[ElementId]]:
        """Map ``(a, b)`` to every c with ``a + c = b``."""
        index: Dict[Sum, List[ElementId]] = {}
        for (a, c), b in self.plus.items():
            index.setdefault((a, b), []).append(c)
        return index

    @cached_property
    def left_index(self) -> Dict[Sum, List[ElementId]]:
        """Map ``(a, b)`` to every d with ``d + a = b``."""
        index: Dict[Sum, List[ElementId]] = {}
        for (d, a), b in self.plus.items():
            index.setdefault((a, b), []).append(d)
        return index


def _check_ids(size: int, ids: Iterable[ElementId]) -> None:
    for x in ids:
        if not isinstance(x, int) or not 0 <= x < size:
            raise StructuralError(f"Element id {x} outside carrier 0..{size - 1}")


def check_structure(table: FiniteTable) -> None:
    """Check the carrier and distinguished elements.

    Raises:
        StructuralError: If zero/one or a table cell is out of range
    """
    if table.size < 1:
        raise StructuralError("Carrier must contain at least one element")
    if not 0 <= table.zero < table.size:
        raise StructuralError(f"zero={table.zero} outside carrier 0..{table.size - 1}")
    if not 0 <= table.one < table.size:
        raise StructuralError(f"one={table.one} outside carrier 0..{table.size - 1}")
    for (a, b), c in table.plus.items():
        _check_ids(table.size, (a, b, c))


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of an axiom check: every violation with its witness tuple."""
    violations: Tuple[Tuple[str, Tuple[int, ...]], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def tags(self) -> List[str]:
        return sorted({tag for tag, _ in self.violations})

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'violations': [{'axiom': tag, 'witness': list(w)} for tag, w in self.violations],
        }


def validate_axioms(table: FiniteTable, fail_fast: Optional[bool] = None) -> AxiomReport:
    """Check axioms (i)-(iv) of a pseudo effect algebra exhaustively.

    Args:
        table: Table to check
        fail_fast: Stop at the first violation; defaults to the configured value

    Returns:
        AxiomReport listing every violation with its witness

    Raises:
        StructuralError: If the carrier itself is malformed
    """
    check_structure(table)
    if fail_fast is None:
        fail_fast = provide_fail_fast()
    violations: List[Tuple[str, Tuple[int, ...]]] = []
    n = table.size
    one = table.one

    def report(tag: str, witness: Tuple[int, ...]) -> bool:
        violations.append((tag, witness))
        return fail_fast

    # (i) conditional associativity, definedness domains included
    for a in range(n):
        for b in range(n):
            ab = table.add(a, b)
            for c in range(n):
                left = table.add(ab, c) if ab is not None else None
                bc = table.add(b, c)
                right = table.add(a, bc) if bc is not None else None
                if left != right:
                    if report('i', (a, b, c)):
                        return AxiomReport(tuple(violations))

    # (ii) unique right and left complement
    for a in range(n):
        rights = table.right_index.get((a, one), [])
        lefts = table.left_index.get((a, one), [])
        if len(rights) != 1 or len(lefts) != 1:
            if report('ii', (a,)):
                return AxiomReport(tuple(violations))

    # (iii) a + b = d + a = b + e
    for (a, b), s in sorted(table.plus.items()):
        if not table.left_index.get((a, s)) or not table.right_index.get((b, s)):
            if report('iii', (a, b)):
                return AxiomReport(tuple(violations))

    # (iv) only zero is summable with one
    for a in range(n):
        if a != table.zero and (table.defined(one, a) or table.defined(a, one)):
            if report('iv', (a,)):
                return AxiomReport(tuple(violations))

    if violations:
        logging.info(f"Table {table.name or ''} violates axioms {sorted({t for t, _ in violations})}")
    return AxiomReport(tuple(violations))


@dataclass(frozen=True)
class OrderRelation:
    """The order derived from a table, as a boolean matrix plus bitmasks."""
    leq: Tuple[Tuple[bool, ...], ...]

    @cached_property
    def up(self) -> Tuple[int, ...]:
        """Bitmask of the elements above each element."""
        return tuple(sum(1 << b for b, flag in enumerate(row) if flag) for row in self.leq)

    @cached_property
    def down(self) -> Tuple[int, ...]:
        """Bitmask of the elements below each element."""
        n = len(self.leq)
        return tuple(sum(1 << a for a in range(n) if self.leq[a][b]) for b in range(n))

    def __call__(self, a: ElementId, b: ElementId) -> bool:
        return self.leq[a][b]

    def below(self, b: ElementId) -> List[ElementId]:
        return [a for a in range(len(self.leq)) if self.leq[a][b]]


def derive_order(table: FiniteTable) -> OrderRelation:
    """Derive ``a ≤ b ⇔ ∃c a + c = b`` and check it against ``∃d d + a = b``.

    Raises:
        InternalConsistencyError: If the two characterizations disagree or the
            relation is not a partial order with bounds zero and one
    """
    cached = table.__dict__.get('_order')
    if cached is not None:
        return cached
    n = table.size
    leq = [[(a, b) in table.right_index for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(n):
            if leq[a][b] != ((a, b) in table.left_index):
                raise InternalConsistencyError(
                    f"Order characterizations disagree on ({table.label(a)}, {table.label(b)})")
    for a in range(n):
        if not leq[a][a]:
            raise InternalConsistencyError(f"Order not reflexive at {table.label(a)}")
        if not leq[table.zero][a] or not leq[a][table.one]:
            raise InternalConsistencyError(f"Element {table.label(a)} not between zero and one")
        for b in range(n):
            if a != b and leq[a][b] and leq[b][a]:
                raise InternalConsistencyError(
                    f"Order not antisymmetric on ({table.label(a)}, {table.label(b)})")
            if leq[a][b]:
                for c in range(n):
                    if leq[b][c] and not leq[a][c]:
                        raise InternalConsistencyError(
                            f"Order not transitive on ({table.label(a)}, {table.label(b)}, {table.label(c)})")
    order = OrderRelation(tuple(tuple(row) for row in leq))
    table.__dict__['_order'] = order
    return order


def _unique(found: List[ElementId], description: str) -> ElementId:
    if not found:
        raise UndefinedDifferenceError(description)
    if len(found) > 1:
        raise InternalConsistencyError(f"{description}: several candidates {found}")
    return found[0]


def left_minus(table: FiniteTable, a: ElementId, b: ElementId) -> ElementId:
    """Return the unique d with ``d + a = b``.

    Raises:
        UndefinedDifferenceError: If a ≰ b
    """
    return _unique(table.left_index.get((a, b), []),
                   f"{table.label(a)} is not below {table.label(b)}: left difference undefined")


def right_minus(table: FiniteTable, a: ElementId, b: ElementId) -> ElementId:
    """Return the unique c with ``a + c = b``.

    Raises:
        UndefinedDifferenceError: If a ≰ b
    """
    return _unique(table.right_index.get((a, b), []),
                   f"{table.label(a)} is not below {table.label(b)}: right difference undefined")


def complements(table: FiniteTable, a: ElementId) -> Tuple[ElementId, ElementId]:
    """Return ``(a⁻, a˜)`` with ``a⁻ + a = 1`` and ``a + a˜ = 1``."""
    return left_minus(table, a, table.one), right_minus(table, a, table.one)


def is_commutative(table: FiniteTable) -> bool:
    return all(table.add(b, a) == c for (a, b), c in table.plus.items())


def is_symmetric(table: FiniteTable) -> bool:
    return all(complements(table, a)[0] == complements(table, a)[1] for a in table.elements)


def commute(table: FiniteTable, x: ElementId, y: ElementId, mode: Optional[str] = None) -> bool:
    """Decide whether x and y commute.

    The symmetric reading asks that ``x + y`` and ``y + x`` are defined
    together and agree; the strict reading also requires both to be defined.
    Without ``mode`` the configured ``commute_mode`` is used, which is
    ``'symmetric'`` unless ``--commute strict`` or ``set_commute_mode`` changed it.
    """
    mode = mode or provide_commute_mode()
    xy = table.add(x, y)
    yx = table.add(y, x)
    if mode == 'strict':
        return xy is not None and xy == yx
    return xy == yx


def com(table: FiniteTable, a: ElementId, b: ElementId) -> bool:
    """Return True iff every a₁ ≤ a and b₁ ≤ b commute."""
    return com_witness(table, a, b) is None


def com_witness(table: FiniteTable, a: ElementId, b: ElementId) -> Optional[Tuple[ElementId, ElementId]]:
    """Return the first non-commuting pair below (a, b), or None."""
    order = derive_order(table)
    mode = provide_commute_mode()
    for a1 in order.below(a):
        for b1 in order.below(b):
            if not commute(table, a1, b1, mode):
                return a1, b1
    return None


def _extremum(mask: int, relation: Sequence[int]) -> Optional[ElementId]:
    """Return the element of ``mask`` whose relation mask contains all of ``mask``."""
    candidate = mask
    while candidate:
        low = candidate & -candidate
        x = low.bit_length() - 1
        if mask & ~relation[x] == 0:
            return x
        candidate ^= low
    return None


def partial_meet(table: FiniteTable, a: ElementId, b: ElementId) -> Optional[ElementId]:
    """Return the greatest lower bound of a and b, or None if there is none."""
    order = derive_order(table)
    return _extremum(order.down[a] & order.down[b], order.down)


def partial_join(table: FiniteTable, a: ElementId, b: ElementId) -> Optional[ElementId]:
    """Return the least upper bound of a and b, or None if there is none."""
    order = derive_order(table)
    return _extremum(order.up[a] & order.up[b], order.up)


def is_lattice(table: FiniteTable) -> bool:
    return all(partial_meet(table, a, b) is not None and partial_join(table, a, b) is not None
               for a in table.elements for b in table.elements)
