import random
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy

from provider import get_config, provide_seed

Vector = Tuple[Fraction, ...]


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational written as an integer or as ``p/q``.

    Decimal notation is rejected: values must stay exact.

    Raises:
        ValueError: If the text is not an exact rational
    """
    text = text.strip()
    if not text or '.' in text or 'e' in text.lower():
        raise ValueError(f"Not an exact rational: {text!r}")
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    """Format a rational as a ``p/q`` string (``0/1`` and ``3/1`` included)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def to_sympy(value: Fraction) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def to_matrix(rows: Sequence[Sequence[Fraction]], columns: Optional[int] = None) -> sympy.Matrix:
    """Build an exact sympy matrix from rows of fractions."""
    if not rows:
        return sympy.zeros(0, columns or 0)
    return sympy.Matrix([[to_sympy(x) for x in row] for row in rows])


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    return to_matrix(rows).rank()


def solve_affine(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction],
                 columns: int) -> Optional[Tuple[Vector, List[Vector]]]:
    """Solve ``rows · x = rhs`` exactly and return its affine parametrization.

    Returns:
        ``(x0, directions)`` with every solution equal to
        ``x0 + Σ t_j · directions[j]``, or None if the system has no solution
    """
    if not rows:
        identity = [tuple(Fraction(int(i == j)) for i in range(columns)) for j in range(columns)]
        return tuple(Fraction(0) for _ in range(columns)), identity

    a = to_matrix(rows)
    b = sympy.Matrix([to_sympy(x) for x in rhs])
    try:
        solution, params = a.gauss_jordan_solve(b)
    except ValueError:
        return None

    free = list(params)
    x0 = solution.subs({p: 0 for p in free})
    directions = []
    for p in free:
        column = solution.diff(p)
        directions.append(tuple(from_sympy(x) for x in column))
    return tuple(from_sympy(x) for x in x0), directions


def dot(u: Iterable[Fraction], v: Iterable[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def primitive(vector: Sequence[Fraction]) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    denominators = [Fraction(x).denominator for x in vector]
    scale = lcm(*denominators) if denominators else 1
    integers = [int(Fraction(x) * scale) for x in vector]
    divisor = 0
    for x in integers:
        divisor = gcd(divisor, x)
    if divisor == 0:
        return tuple(Fraction(0) for _ in vector)
    return tuple(Fraction(x // divisor) for x in integers)


def make_rng(seed: Optional[int] = None) -> random.Random:
    """Create the seeded generator used by every random construction."""
    return random.Random(provide_seed() if seed is None else seed)


def random_rational(rng: random.Random, low: Fraction = Fraction(0),
                    high: Fraction = Fraction(1), bound: Optional[int] = None) -> Fraction:
    """Draw a rational in ``[low, high]`` with numerator/denominator bounded."""
    bound = bound or get_config().random_bound
    denominator = rng.randint(1, bound)
    numerator = rng.randint(0, denominator)
    return low + (high - low) * Fraction(numerator, denominator)


def random_weights(rng: random.Random, count: int, bound: Optional[int] = None) -> List[Fraction]:
    """Draw strictly positive rational weights summing to one."""
    bound = bound or get_config().random_bound
    raw = [Fraction(rng.randint(1, bound)) for _ in range(count)]
    total = sum(raw)
    return [x / total for x in raw]
