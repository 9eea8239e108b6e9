import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from provider import provide_witness_cap
from table import FiniteTable, ElementId, com, derive_order, partial_meet

LADDER: Tuple[str, ...] = ('rip', 'rdp0', 'rdp', 'rdp1', 'rdp2')


class LadderInconsistencyError(Exception):
    """Raised when computed properties break rdp2 ⇒ rdp1 ⇒ rdp ⇒ rdp0 ⇒ rip."""
    pass


class WindowTooSmallError(Exception):
    """Raised when a cone window misses an element a refinement needs."""
    pass


@dataclass(frozen=True)
class Verdict:
    """A decided property with its counterexample witnesses.

    ``window_relative`` marks verdicts that only speak about a finite window
    of an infinite structure.
    """
    holds: bool
    witnesses: Tuple[tuple, ...] = ()
    window_relative: bool = False

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            'holds': self.holds,
            'window_relative': self.window_relative,
            'witnesses': [list(w) for w in self.witnesses],
        }


@dataclass(frozen=True)
class RieszReport:
    rip: Verdict
    rdp0: Verdict
    rdp: Verdict
    rdp1: Verdict
    rdp2: Verdict

    def vector(self) -> Tuple[bool, ...]:
        return tuple(getattr(self, name).holds for name in LADDER)

    @property
    def weakest_failure(self) -> Optional[str]:
        """Name of the weakest property that fails, if any."""
        for name in LADDER:
            if not getattr(self, name).holds:
                return name
        return None

    @property
    def strongest_failure(self) -> Optional[str]:
        """Name of the strongest property that fails, if any."""
        for name in reversed(LADDER):
            if not getattr(self, name).holds:
                return name
        return None

    def to_dict(self) -> dict:
        result = {name: getattr(self, name).to_dict() for name in LADDER}
        result['weakest_failure'] = self.weakest_failure
        strongest = self.strongest_failure
        result['strongest_failure'] = None if strongest is None else {
            'property': strongest,
            'witnesses': [list(w) for w in getattr(self, strongest).witnesses],
        }
        return result


class _Collector:
    """Collects witnesses up to the configured cap."""

    def __init__(self, cap: Optional[int] = None):
        self.cap = provide_witness_cap() if cap is None else cap
        self.items: List[tuple] = []

    def add(self, witness: tuple) -> bool:
        """Record a witness; return True once the cap is reached."""
        if len(self.items) < self.cap:
            self.items.append(witness)
        return len(self.items) >= self.cap

    def verdict(self, window_relative: bool = False) -> Verdict:
        return Verdict(holds=not self.items, witnesses=tuple(self.items),
                       window_relative=window_relative)


def has_rip(table: FiniteTable, cap: Optional[int] = None) -> Verdict:
    """Riesz interpolation: a₁, a₂ ≤ b₁, b₂ ⇒ ∃c a₁, a₂ ≤ c ≤ b₁, b₂.

    Witnesses are quadruples ``(a1, a2, b1, b2)`` with no interpolant.
    """
    order = derive_order(table)
    collector = _Collector(cap)
    n = table.size
    for a1 in range(n):
        for a2 in range(n):
            uppers = order.up[a1] & order.up[a2]
            for b1 in range(n):
                if not uppers >> b1 & 1:
                    continue
                for b2 in range(n):
                    if not uppers >> b2 & 1:
                        continue
                    if uppers & order.down[b1] & order.down[b2] == 0:
                        if collector.add((a1, a2, b1, b2)):
                            return collector.verdict()
    return collector.verdict()


def has_rdp0(table: FiniteTable, cap: Optional[int] = None) -> Verdict:
    """Weak Riesz decomposition: a ≤ b₁ + b₂ ⇒ a = d₁ + d₂ with d₁ ≤ b₁, d₂ ≤ b₂.

    Only pairs with ``b₁ + b₂`` defined are tested. Witnesses are ``(a, b1, b2)``.
    """
    order = derive_order(table)
    collector = _Collector(cap)
    for (b1, b2), total in sorted(table.plus.items()):
        reachable = set()
        for d1 in order.below(b1):
            for d2 in order.below(b2):
                d = table.add(d1, d2)
                if d is not None:
                    reachable.add(d)
        for a in order.below(total):
            if a not in reachable:
                if collector.add((a, b1, b2)):
                    return collector.verdict()
    return collector.verdict()


Refinement = Tuple[ElementId, ElementId, ElementId, ElementId]


def refinements(table: FiniteTable, a1: ElementId, a2: ElementId,
                b1: ElementId, b2: ElementId) -> List[Refinement]:
    """All ``(d1, d2, d3, d4)`` with d1+d2=a1, d3+d4=a2, d1+d3=b1, d2+d4=b2.

    Listed lexicographically. d1 fixes the rest: d2, d3 and d4 are the unique
    right differences, so scanning d1 is the full search.
    """
    order = derive_order(table)
    found = []
    for d1 in range(table.size):
        if not (order(d1, a1) and order(d1, b1)):
            continue
        d2 = _only(table.right_index.get((d1, a1)))
        d3 = _only(table.right_index.get((d1, b1)))
        if d2 is None or d3 is None:
            continue
        d4 = _only(table.right_index.get((d3, a2)))
        if d4 is None or table.add(d2, d4) != b2:
            continue
        found.append((d1, d2, d3, d4))
    return found


def _only(values: Optional[Sequence[ElementId]]) -> Optional[ElementId]:
    return values[0] if values else None


def _equal_sum_quadruples(table: FiniteTable):
    by_total: Dict[ElementId, List[Tuple[ElementId, ElementId]]] = {}
    for pair, total in sorted(table.plus.items()):
        by_total.setdefault(total, []).append(pair)
    for total in sorted(by_total):
        pairs = by_total[total]
        for a1, a2 in pairs:
            for b1, b2 in pairs:
                yield a1, a2, b1, b2


def _decomposition_check(table: FiniteTable, accept: Callable[[Refinement], bool],
                         cap: Optional[int]) -> Verdict:
    collector = _Collector(cap)
    for a1, a2, b1, b2 in _equal_sum_quadruples(table):
        if not any(accept(d) for d in refinements(table, a1, a2, b1, b2)):
            if collector.add((a1, a2, b1, b2)):
                break
    return collector.verdict()


def has_rdp(table: FiniteTable, cap: Optional[int] = None) -> Verdict:
    """Riesz decomposition; witnesses are quadruples with no refinement."""
    return _decomposition_check(table, lambda d: True, cap)


def has_rdp1(table: FiniteTable, cap: Optional[int] = None) -> Verdict:
    """RDP with the cross terms d₂, d₃ in the com relation."""
    return _decomposition_check(table, lambda d: com(table, d[1], d[2]), cap)


def has_rdp2(table: FiniteTable, cap: Optional[int] = None) -> Verdict:
    """RDP with disjoint cross terms: d₂ ∧ d₃ = 0."""
    return _decomposition_check(table, lambda d: partial_meet(table, d[1], d[2]) == table.zero, cap)


def check_ladder(vector: Sequence[bool]) -> None:
    """Raise if a property vector (rip, rdp0, rdp, rdp1, rdp2) breaks the ladder."""
    for weaker, stronger in zip(range(len(vector) - 1), range(1, len(vector))):
        if vector[stronger] and not vector[weaker]:
            raise LadderInconsistencyError(
                f"{LADDER[stronger]} holds but {LADDER[weaker]} fails: {tuple(vector)}")


def ladder_report(table: FiniteTable, cap: Optional[int] = None) -> RieszReport:
    """Run the five checkers and verify the implication ladder.

    Raises:
        LadderInconsistencyError: If the computed vector breaks the ladder
    """
    report = RieszReport(
        rip=has_rip(table, cap),
        rdp0=has_rdp0(table, cap),
        rdp=has_rdp(table, cap),
        rdp1=has_rdp1(table, cap),
        rdp2=has_rdp2(table, cap),
    )
    check_ladder(report.vector())
    logging.info(f"Riesz ladder for {table.name or 'table'}: {dict(zip(LADDER, report.vector()))}")
    return report


# Cone checks on finite windows of po-groups

def cone_rdp(window: Sequence[tuple], group, level: str = 'rdp',
             cap: Optional[int] = None) -> Verdict:
    """Check a Riesz property on the cone elements of a finite window.

    Only quadruples whose sums stay inside the window are tested, and the
    verdict is window-relative: it is not a statement about the whole group.

    Args:
        window: Cone elements; refinements are searched inside it
        group: PoGroupPresentation supplying add, neg and leq
        level: One of 'rip', 'rdp0', 'rdp', 'rdp1', 'rdp2'

    Raises:
        WindowTooSmallError: If a difference that a refinement needs is a cone
            element outside the window
    """
    if level not in LADDER:
        raise ValueError(f"Unknown property: {level}")
    members = sorted({tuple(g) for g in window})
    inside = set(members)
    zero = tuple(0 for _ in range(group.rank))
    collector = _Collector(cap)
    position = {g: i for i, g in enumerate(members)}
    relation = [[group.leq(a, b) for b in members] for a in members]
    up = [sum(1 << j for j, flag in enumerate(row) if flag) for row in relation]
    down = [sum(1 << i for i in range(len(members)) if relation[i][j]) for j in range(len(members))]

    def leq(a, b) -> bool:
        if a in position and b in position:
            return relation[position[a]][position[b]]
        return group.leq(a, b)

    def minus(a, b):
        """Return c with a + c = b, or None if a ≰ b."""
        c = group.add(group.neg(a), b)
        if not group.cone_contains(c):
            return None
        if c not in inside:
            raise WindowTooSmallError(f"Window misses {c} = -{a} + {b}")
        return c

    if level == 'rip':
        n = len(members)
        for i1 in range(n):
            for i2 in range(n):
                uppers = up[i1] & up[i2]
                for j1 in range(n):
                    if not uppers >> j1 & 1:
                        continue
                    for j2 in range(n):
                        if uppers >> j2 & 1 and uppers & down[j1] & down[j2] == 0:
                            if collector.add((members[i1], members[i2], members[j1], members[j2])):
                                return collector.verdict(window_relative=True)
        return collector.verdict(window_relative=True)

    if level == 'rdp0':
        for b1 in members:
            for b2 in members:
                total = group.add(b1, b2)
                if total not in inside:
                    continue
                parts = {group.add(d1, d2) for d1 in members if leq(d1, b1)
                         for d2 in members if leq(d2, b2)}
                for a in members:
                    if leq(a, total) and a not in parts:
                        if collector.add((a, b1, b2)):
                            return collector.verdict(window_relative=True)
        return collector.verdict(window_relative=True)

    def commute_below(x, y) -> bool:
        below_x = [p for p in members if leq(p, x)]
        below_y = [q for q in members if leq(q, y)]
        return all(group.add(p, q) == group.add(q, p) for p in below_x for q in below_y)

    def disjoint(x, y) -> bool:
        return all(p == zero for p in members if leq(p, x) and leq(p, y))

    accept = {
        'rdp': lambda d: True,
        'rdp1': lambda d: commute_below(d[1], d[2]),
        'rdp2': lambda d: disjoint(d[1], d[2]),
    }[level]

    by_total: Dict[tuple, List[Tuple[tuple, tuple]]] = {}
    for a1 in members:
        for a2 in members:
            total = group.add(a1, a2)
            if total in inside:
                by_total.setdefault(total, []).append((a1, a2))
    for total in sorted(by_total):
        pairs = by_total[total]
        for a1, a2 in pairs:
            for b1, b2 in pairs:
                found = False
                for d1 in members:
                    if not (leq(d1, a1) and leq(d1, b1)):
                        continue
                    d2 = minus(d1, a1)
                    d3 = minus(d1, b1)
                    d4 = minus(d3, a2) if d3 is not None else None
                    if d2 is None or d4 is None or group.add(d2, d4) != b2:
                        continue
                    if accept((d1, d2, d3, d4)):
                        found = True
                        break
                if not found:
                    if collector.add((a1, a2, b1, b2)):
                        return collector.verdict(window_relative=True)
    return collector.verdict(window_relative=True)
