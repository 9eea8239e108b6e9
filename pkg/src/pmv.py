import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from riesz import has_rdp2
from statespace import LinearSystem, StatePolytope, enumerate_states, sum_system
from table import (AxiomReport, ElementId, FiniteTable, complements, derive_order,
                   partial_meet, validate_axioms)


class PmvShapeError(Exception):
    """Raised when a pMV table is not total or its carrier is degenerate."""
    pass


class ConstructionMismatchError(Exception):
    """Raised when a PEA/pMV conversion does not validate."""

    def __init__(self, message: str, reports: Sequence[AxiomReport] = ()):
        super().__init__(message)
        self.reports = tuple(reports)


class PreconditionError(Exception):
    """Raised when an input does not meet a construction's precondition."""
    pass


@dataclass(frozen=True)
class PmvTable:
    """A finite pseudo MV-algebra: total ⊕ and the two negations."""
    size: int
    oplus: Tuple[Tuple[ElementId, ...], ...]
    neg_minus: Tuple[ElementId, ...]
    neg_tilde: Tuple[ElementId, ...]
    zero: ElementId
    one: ElementId
    name: Optional[str] = None
    labels: Tuple[str, ...] = field(default=(), compare=False)

    def add(self, x: ElementId, y: ElementId) -> ElementId:
        return self.oplus[x][y]

    def odot(self, x: ElementId, y: ElementId) -> ElementId:
        """x ⊙ y = (y⁻ ⊕ x⁻)˜"""
        return self.neg_tilde[self.oplus[self.neg_minus[y]][self.neg_minus[x]]]

    def label(self, x: ElementId) -> str:
        return self.labels[x] if x < len(self.labels) else str(x)

    @cached_property
    def order(self) -> Tuple[Tuple[bool, ...], ...]:
        """a ≤ b iff a ⊕ c = b for some c."""
        n = self.size
        reachable = [set(self.oplus[a]) for a in range(n)]
        return tuple(tuple(b in reachable[a] for b in range(n)) for a in range(n))

    def leq(self, a: ElementId, b: ElementId) -> bool:
        return self.order[a][b]

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'size': self.size,
            'labels': [self.label(x) for x in range(self.size)],
            'oplus': [list(row) for row in self.oplus],
            'neg_minus': list(self.neg_minus),
            'neg_tilde': list(self.neg_tilde),
        }


def check_shape(t: PmvTable) -> None:
    """Check that ⊕ is total and the distinguished elements are distinct.

    Raises:
        PmvShapeError: On any shape problem
    """
    n = t.size
    if n < 2:
        raise PmvShapeError("Carrier must contain distinct 0 and 1")
    if not (0 <= t.zero < n and 0 <= t.one < n) or t.zero == t.one:
        raise PmvShapeError(f"zero={t.zero} and one={t.one} must be distinct elements")
    if len(t.oplus) != n or any(len(row) != n for row in t.oplus):
        raise PmvShapeError(f"oplus must be a total {n}x{n} table")
    if len(t.neg_minus) != n or len(t.neg_tilde) != n:
        raise PmvShapeError(f"Negations must have {n} entries")
    for x in itertools.chain(itertools.chain.from_iterable(t.oplus), t.neg_minus, t.neg_tilde):
        if not 0 <= x < n:
            raise PmvShapeError(f"Entry {x} outside carrier 0..{n - 1}")


def validate_pmv(t: PmvTable, fail_fast: bool = False) -> AxiomReport:
    """Check (A1)-(A8) exhaustively; (A6) and (A7) use the derived ⊙."""
    check_shape(t)
    violations: List[Tuple[str, Tuple[int, ...]]] = []
    n = t.size
    plus, minus, tilde, odot = t.add, t.neg_minus, t.neg_tilde, t.odot

    def report(tag: str, witness: Tuple[int, ...]) -> bool:
        violations.append((tag, witness))
        return fail_fast

    checks = []
    for x in range(n):
        checks.append(('A2', (x,), plus(x, t.zero) == x and plus(t.zero, x) == x))
        checks.append(('A3', (x,), plus(x, t.one) == t.one and plus(t.one, x) == t.one))
        checks.append(('A8', (x,), tilde[minus[x]] == x))
    checks.append(('A4', (t.one,), tilde[t.one] == t.zero and minus[t.one] == t.zero))
    for x in range(n):
        for y in range(n):
            checks.append(('A5', (x, y), tilde[plus(minus[x], minus[y])] == minus[plus(tilde[x], tilde[y])]))
            first = plus(x, odot(tilde[x], y))
            same = (first == plus(y, odot(tilde[y], x))
                    == plus(odot(x, minus[y]), y) == plus(odot(y, minus[x]), x))
            checks.append(('A6', (x, y), same))
            checks.append(('A7', (x, y), odot(x, plus(minus[x], y)) == odot(plus(x, tilde[y]), y)))
    for tag, witness, holds in checks:
        if not holds and report(tag, witness):
            return AxiomReport(tuple(violations))

    for x in range(n):
        for y in range(n):
            xy = plus(x, y)
            for z in range(n):
                if plus(x, plus(y, z)) != plus(xy, z):
                    if report('A1', (x, y, z)):
                        return AxiomReport(tuple(violations))

    violations.sort(key=lambda v: (v[0], v[1]))
    if violations:
        logging.info(f"pMV {t.name or ''} violates {sorted({tag for tag, _ in violations})}")
    return AxiomReport(tuple(violations))


def gamma_lgroup(rank: int, u: Sequence[int]) -> PmvTable:
    """Γ(ℤⁿ, u) with x ⊕ y = (x + y) ∧ u and x⁻ = x˜ = u - x.

    Raises:
        PreconditionError: If u is not strictly positive
    """
    u = tuple(int(x) for x in u)
    if len(u) != rank:
        raise PreconditionError(f"Unit {u} does not have rank {rank}")
    if any(x <= 0 for x in u):
        raise PreconditionError(f"Unit {u} must be strictly positive in every coordinate")
    elements = [tuple(g) for g in itertools.product(*(range(x + 1) for x in u))]
    index = {g: i for i, g in enumerate(elements)}
    oplus = tuple(tuple(index[tuple(min(a + b, m) for a, b, m in zip(x, y, u))] for y in elements)
                  for x in elements)
    negation = tuple(index[tuple(m - a for a, m in zip(x, u))] for x in elements)
    t = PmvTable(size=len(elements), oplus=oplus, neg_minus=negation, neg_tilde=negation,
                 zero=0, one=len(elements) - 1, name=f"Gamma(Z^{rank}, {','.join(map(str, u))})",
                 labels=tuple(','.join(map(str, g)) for g in elements))
    report = validate_pmv(t)
    if not report.passed:
        raise ConstructionMismatchError(f"{t.name} fails {report.tags()}", [report])
    return t


def _pmv_from_formula(table: FiniteTable, minus: Sequence[ElementId], tilde: Sequence[ElementId],
                      b_sided: bool) -> Optional[PmvTable]:
    n = table.size
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            if b_sided:
                meet = partial_meet(table, a, minus[b])
                value = table.add(meet, b) if meet is not None else None
            else:
                meet = partial_meet(table, tilde[a], b)
                value = table.add(a, meet) if meet is not None else None
            if value is None:
                return None
            row.append(value)
        rows.append(tuple(row))
    return PmvTable(size=n, oplus=tuple(rows), neg_minus=tuple(minus), neg_tilde=tuple(tilde),
                    zero=table.zero, one=table.one, name=table.name, labels=table.labels)


def pea_to_pmv(table: FiniteTable) -> PmvTable:
    """Turn a PEA with RDP₂ into a pseudo MV-algebra via a ⊕ b = a + (a˜ ∧ b).

    The result is validated against (A1)-(A8). On failure the b-sided formula
    (a ∧ b⁻) + b is built as well and both reports travel with the error.

    Raises:
        PreconditionError: If the table fails the axioms or lacks RDP₂
        ConstructionMismatchError: If the constructed algebra does not validate
    """
    axioms = validate_axioms(table)
    if not axioms.passed:
        raise PreconditionError(f"{table.name or 'table'} violates {axioms.tags()}")
    if not has_rdp2(table, cap=1).holds:
        raise PreconditionError(f"{table.name or 'table'} does not have RDP2")
    minus = [complements(table, a)[0] for a in table.elements]
    tilde = [complements(table, a)[1] for a in table.elements]

    candidate = _pmv_from_formula(table, minus, tilde, b_sided=False)
    report = validate_pmv(candidate) if candidate is not None else None
    if report is not None and report.passed:
        return candidate

    fallback = _pmv_from_formula(table, minus, tilde, b_sided=True)
    fallback_report = validate_pmv(fallback) if fallback is not None else None
    reports = [r for r in (report, fallback_report) if r is not None]
    logging.error(f"pMV construction fails on {table.name or 'table'}: "
                  f"{[r.tags() for r in reports]}")
    raise ConstructionMismatchError(
        f"a + (a~ ^ b) does not give a pseudo MV-algebra on {table.name or 'table'}; "
        f"b-sided formula {'passes' if fallback_report and fallback_report.passed else 'fails'}",
        reports)


def pmv_to_pea(t: PmvTable) -> FiniteTable:
    """Restrict ⊕ to the pairs with a ≤ b⁻.

    Raises:
        PreconditionError: If the pMV table fails (A1)-(A8)
        ConstructionMismatchError: If the image is not a PEA with RDP₂ or its
            order differs from the pMV order
    """
    report = validate_pmv(t)
    if not report.passed:
        raise PreconditionError(f"{t.name or 'pMV'} violates {report.tags()}")
    n = t.size
    sums = [(a, b, t.add(a, b)) for a in range(n) for b in range(n) if t.leq(a, t.neg_minus[b])]
    table = FiniteTable.build(n, sums, zero=t.zero, one=t.one, name=t.name,
                              labels=[t.label(x) for x in range(n)], complete_identities=False)
    axioms = validate_axioms(table)
    if not axioms.passed:
        raise ConstructionMismatchError(f"Image of {t.name or 'pMV'} violates {axioms.tags()}", [axioms])
    if derive_order(table).leq != t.order:
        raise ConstructionMismatchError(f"Image of {t.name or 'pMV'} does not inherit the pMV order")
    if not has_rdp2(table, cap=1).holds:
        raise ConstructionMismatchError(f"Image of {t.name or 'pMV'} lacks RDP2")
    return table


def build_pmv_hrep(t: PmvTable) -> LinearSystem:
    """State system written from ⊕ on the pairs a ≤ b⁻."""
    n = t.size
    sums = [((a, b), t.add(a, b)) for a in range(n) for b in range(n) if t.leq(a, t.neg_minus[b])]
    return sum_system(n, sums, t.zero, t.one)


def pmv_states(t: PmvTable) -> StatePolytope:
    return enumerate_states(build_pmv_hrep(t))
