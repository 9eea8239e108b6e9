import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

from pogroup import FreeAbelian, GroupElement, GroupHom, PoGroupPresentation, window_cone
from provider import get_config
from rational import format_rational
from riesz import Verdict


class NonEnumerableConeError(Exception):
    """Raised when decompositions of a cone element cannot be listed finitely."""
    pass


class DecompositionCapError(Exception):
    """Raised when an element's coordinate sum exceeds the decomposition cap."""
    pass


def require_standard(group: PoGroupPresentation) -> None:
    """Raises NonEnumerableConeError unless the group is ℤⁿ with the standard cone."""
    variant = group.variant
    if not (isinstance(variant, FreeAbelian) and variant.cone == 'standard'):
        raise NonEnumerableConeError(
            f"{group.describe()}: decompositions are only enumerable for the standard cone")


def _check_cap(x: Sequence[int]) -> None:
    cap = get_config().decomposition_cap
    if any(c < 0 for c in x):
        raise ValueError(f"{tuple(x)} is not in the standard cone")
    if sum(x) > cap:
        raise DecompositionCapError(f"Coordinate sum of {tuple(x)} exceeds the cap {cap}")


def is_positive(f: GroupHom, group: PoGroupPresentation, radius: Optional[int] = None) -> Verdict:
    """Decide f(G⁺) ⊆ ℚ⁺.

    Exact on the standard cone; on other cones the window cone elements are
    scanned and the verdict is window-relative.
    """
    variant = group.variant
    if isinstance(variant, FreeAbelian) and variant.cone == 'standard':
        negative = tuple((e,) for e, v in zip(group.basis(), f.values) if v < 0)
        return Verdict(holds=not negative, witnesses=negative)
    negative = tuple((g,) for g in window_cone(group, radius) if f(g) < 0)
    return Verdict(holds=not negative, witnesses=negative[:get_config().witness_cap],
                   window_relative=True)


@dataclass(frozen=True)
class DecompositionSet:
    """Every multiset of nonzero cone elements summing to ``base``."""
    base: GroupElement
    parts: Tuple[Tuple[GroupElement, ...], ...]

    def __len__(self) -> int:
        return len(self.parts)

    def to_dict(self) -> dict:
        return {'base': list(self.base), 'decompositions': [[list(p) for p in d] for d in self.parts]}


def _multisets(x: GroupElement, bound: Optional[GroupElement]) -> Iterator[Tuple[GroupElement, ...]]:
    if not any(x):
        yield ()
        return
    candidates = [tuple(p) for p in itertools.product(*(range(c + 1) for c in x)) if any(p)]
    for part in sorted(candidates, reverse=True):
        if bound is not None and part > bound:
            continue
        rest = tuple(a - b for a, b in zip(x, part))
        for tail in _multisets(rest, part):
            yield (part,) + tail


def enumerate_decompositions(group: PoGroupPresentation, x: Sequence[int]) -> DecompositionSet:
    """List the decompositions of x in canonical form (parts in descending order).

    Raises:
        NonEnumerableConeError: If the cone is not standard
        DecompositionCapError: If the coordinate sum of x exceeds the cap
    """
    require_standard(group)
    x = group.element(x)
    _check_cap(x)
    return DecompositionSet(base=x, parts=tuple(sorted(_multisets(x, None))))


def _compositions(total: int, parts: int) -> List[Tuple[int, ...]]:
    """Ordered ways to write total as ``parts`` nonnegative integers."""
    if parts == 1:
        return [(total,)]
    return [(first,) + rest for first in range(total + 1) for rest in _compositions(total - first, parts - 1)]


def ordered_decompositions(x: Sequence[int], count: int) -> Iterator[Tuple[GroupElement, ...]]:
    """Ordered ``count``-tuples of cone elements, zero parts included, summing to x."""
    per_coordinate = [_compositions(c, count) for c in x]
    for choice in itertools.product(*per_coordinate):
        yield tuple(tuple(column[i] for column in choice) for i in range(count))


def _extreme_value(fs: Sequence[GroupHom], x: Sequence[int], pick) -> Fraction:
    # 座標ごとの寄与を先に計算しておく
    contributions = []
    for c, total in enumerate(x):
        contributions.append([sum((f.values[c] * part for f, part in zip(fs, composition)), Fraction(0))
                              for composition in _compositions(total, len(fs))])
    return pick(sum(choice, Fraction(0)) for choice in itertools.product(*contributions))


def sup_homs(fs: Sequence[GroupHom], x: Sequence[int], group: PoGroupPresentation) -> Fraction:
    """(f₁ ∨ ⋯ ∨ fₙ)(x) = max over x = x₁ + ⋯ + xₙ of f₁(x₁) + ⋯ + fₙ(xₙ).

    Raises:
        NonEnumerableConeError: If the cone is not standard
        DecompositionCapError: If the coordinate sum of x exceeds the cap
    """
    require_standard(group)
    x = group.element(x)
    _check_cap(x)
    if not fs:
        raise ValueError("Need at least one homomorphism")
    return _extreme_value(fs, x, max)


def inf_homs(fs: Sequence[GroupHom], x: Sequence[int], group: PoGroupPresentation) -> Fraction:
    """Dual of :func:`sup_homs` through z ↦ -z."""
    return -sup_homs([-f for f in fs], x, group)


def sup_hom(fs: Sequence[GroupHom], group: PoGroupPresentation) -> GroupHom:
    return GroupHom(tuple(sup_homs(fs, e, group) for e in group.basis()))


def inf_hom(fs: Sequence[GroupHom], group: PoGroupPresentation) -> GroupHom:
    return GroupHom(tuple(inf_homs(fs, e, group) for e in group.basis()))


def hom_leq(f: GroupHom, g: GroupHom, group: PoGroupPresentation, radius: Optional[int] = None) -> bool:
    """f ≤ g iff g - f is positive."""
    return is_positive(g - f, group, radius).holds


@lru_cache(maxsize=None)
def _positive_part(values: Tuple[Fraction, ...], x: GroupElement) -> Fraction:
    d = max(sum((v * c for v, c in zip(values, x)), Fraction(0)), Fraction(0))
    best = d
    for y in itertools.product(*(range(c + 1) for c in x)):
        if not any(y) or y == x:
            continue
        rest = tuple(a - b for a, b in zip(x, y))
        d_y = max(sum((v * c for v, c in zip(values, y)), Fraction(0)), Fraction(0))
        best = max(best, d_y + _positive_part(values, rest))
    return best


def positive_part_value(f: GroupHom, x: Sequence[int], group: PoGroupPresentation) -> Fraction:
    """sup over D(x) of Σ d(xᵢ) with d = f ∨ 0."""
    require_standard(group)
    x = group.element(x)
    _check_cap(x)
    return _positive_part(f.values, x)


def jordan_decompose(f: GroupHom, group: PoGroupPresentation) -> Tuple[GroupHom, GroupHom]:
    """Split f = g - h with g, h positive.

    g is the additive extension of d = f ∨ 0 taken through decomposition
    sups, evaluated on the basis; h = g - f.
    """
    require_standard(group)
    g = GroupHom(tuple(positive_part_value(f, e, group) for e in group.basis()))
    h = g - f
    logging.info(f"Jordan decomposition of {f.to_list()}: {g.to_list()} - {h.to_list()}")
    return g, h


def extension_additive(f: GroupHom, group: PoGroupPresentation, radius: Optional[int] = None) -> bool:
    """Check P(x + y) = P(x) + P(y) for the positive-part extension on window pairs within the cap."""
    require_standard(group)
    cap = get_config().decomposition_cap
    cone = window_cone(group, radius)
    for x in cone:
        for y in cone:
            total = group.add(x, y)
            if sum(total) > cap:
                continue
            if positive_part_value(f, total, group) != (positive_part_value(f, x, group)
                                                        + positive_part_value(f, y, group)):
                return False
    return True


@dataclass(frozen=True)
class OracleReport:
    """Comparison of the decomposition formulas with the coordinatewise max/min."""
    agree: bool
    checked: int
    sup: GroupHom
    inf: GroupHom
    witness: Optional[GroupElement] = None

    def to_dict(self) -> dict:
        return {
            'agree': self.agree,
            'checked': self.checked,
            'sup': self.sup.to_list(),
            'inf': self.inf.to_list(),
            'witness': list(self.witness) if self.witness is not None else None,
        }


def verify_lattice_oracle(fs: Sequence[GroupHom], group: PoGroupPresentation,
                          radius: int = 4) -> OracleReport:
    """Compare sup_homs/inf_homs with the coordinatewise max/min hom on {0..radius}ⁿ."""
    require_standard(group)
    upper = GroupHom(tuple(max(f.values[i] for f in fs) for i in range(group.rank)))
    lower = GroupHom(tuple(min(f.values[i] for f in fs) for i in range(group.rank)))
    checked = 0
    for x in itertools.product(range(radius + 1), repeat=group.rank):
        if sup_homs(fs, x, group) != upper(x) or inf_homs(fs, x, group) != lower(x):
            logging.error(f"Lattice oracle disagrees at {x}")
            return OracleReport(False, checked, upper, lower, tuple(x))
        checked += 1
    return OracleReport(True, checked, upper, lower)


def hom_report(fs: Sequence[GroupHom], x: Sequence[int], group: PoGroupPresentation, op: str) -> dict:
    """Evaluate one lattice operation at x for the command line."""
    if op == 'sup':
        value = sup_homs(fs, x, group)
        hom = sup_hom(fs, group)
    elif op == 'inf':
        value = inf_homs(fs, x, group)
        hom = inf_hom(fs, group)
    elif op == 'jordan':
        parts = [jordan_decompose(f, group) for f in fs]
        return {
            'op': op,
            'at': list(x),
            'parts': [{'f': f.to_list(), 'g': g.to_list(), 'h': h.to_list(),
                       'g_at': format_rational(g(x)), 'h_at': format_rational(h(x))}
                      for f, (g, h) in zip(fs, parts)],
        }
    else:
        raise ValueError(f"Unknown operation: {op}")
    return {'op': op, 'at': list(x), 'value': format_rational(value), 'hom': hom.to_list()}
