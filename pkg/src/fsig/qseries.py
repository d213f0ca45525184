"""Exact Poincaré-series calculus for graded complete intersections.

Series are stored as an integer numerator polynomial over a product of
factors ``(1 - t^k)``.  Nothing is simplified on construction; cancellation
happens only where a computation needs it (``e_prime`` and
``artinian_reduction``).  All arithmetic is on Python integers and
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

from .errors import InvalidDegrees, NotPolynomial, PoleOrderMismatch


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _mul_one_minus(coeffs, k):
    """Multiply a coefficient list by ``1 - t^k``."""
    out = list(coeffs) + [0] * k
    for i, c in enumerate(coeffs):
        out[i + k] -= c
    return out


def _div_one_minus(coeffs, k):
    """Exact quotient by ``1 - t^k``, or None when it does not divide."""
    coeffs = list(coeffs)
    n = len(coeffs)
    if n == 0:
        return []
    quo = [0] * n
    for i in range(n):
        quo[i] = coeffs[i] + (quo[i - k] if i >= k else 0)
    # quotient has degree n-1-k; the tail must vanish
    if any(quo[i] for i in range(max(0, n - k), n)):
        return None
    return quo[: max(0, n - k)]


@dataclass(frozen=True)
class RationalSeries:
    """``numerator(t) / prod_j (1 - t^{k_j})``.

    ``numerator[i]`` is the coefficient of ``t^i``.  ``rel_degrees`` records
    the relation degrees the series was built from, when known.
    """

    numerator: tuple
    denom_factors: tuple
    rel_degrees: tuple = None

    def numerator_degree(self) -> int:
        num = _trim(self.numerator)
        return len(num) - 1

    def __str__(self) -> str:
        return render_series(self)


def _factor(k):
    return "(1-t)" if k == 1 else f"(1-t^{k})"


def render_series(s: RationalSeries) -> str:
    """Display form ``(1-t^a)…/((1-t^b)…)``; numerator shown factored when known."""
    if s.rel_degrees is not None:
        top = "".join(_factor(d) for d in s.rel_degrees) or "1"
    else:
        top = "(" + _render_poly(_trim(s.numerator)) + ")"
    bottom = "".join(_factor(k) for k in s.denom_factors)
    if not bottom:
        return top
    return f"{top}/({bottom})"


def _render_poly(coeffs):
    if not coeffs:
        return "0"
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if i == 0:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def ci_series(weights: Sequence[int], rel_degrees: Sequence[int]) -> RationalSeries:
    """Series ``prod_i (1 - t^{d_i}) / prod_j (1 - t^{w_j})`` of a complete intersection."""
    weights = tuple(int(w) for w in weights)
    rel_degrees = tuple(int(d) for d in rel_degrees)
    if not weights or any(w < 1 for w in weights):
        raise InvalidDegrees(f"weights must be a nonempty list of positive integers, got {weights}")
    if any(d < 1 for d in rel_degrees):
        raise InvalidDegrees(f"relation degrees must be positive, got {rel_degrees}")
    if len(rel_degrees) > len(weights):
        raise InvalidDegrees(f"{len(rel_degrees)} relations in {len(weights)} variables")
    num = [1]
    for d in rel_degrees:
        num = _mul_one_minus(num, d)
    return RationalSeries(_trim(num), weights, rel_degrees)


def a_invariant_by_shifts(weights: Sequence[int], rel_degrees: Sequence[int]) -> int:
    """Start from ``-sum(weights)`` and add each relation degree in turn."""
    a = -sum(weights)
    for d in rel_degrees:
        a += d
    return a


def a_invariant(s: RationalSeries) -> int:
    """Degree of the series as a rational function."""
    a = s.numerator_degree() - sum(s.denom_factors)
    if s.rel_degrees is not None:
        other = a_invariant_by_shifts(s.denom_factors, s.rel_degrees)
        if other != a:
            raise AssertionError(f"a-invariant paths disagree: {a} vs {other}")
    return a


def pole_order(s: RationalSeries) -> int:
    num = _trim(s.numerator)
    mult = 0
    while num and sum(num) == 0:
        num = _trim(_div_one_minus(num, 1))
        mult += 1
    return len(s.denom_factors) - mult


def e_prime(s: RationalSeries, d: int) -> Fraction:
    """Limit of ``(1 - t)^d P(t)`` as ``t -> 1``."""
    num = _trim(s.numerator)
    mult = 0
    while num and sum(num) == 0:
        num = _trim(_div_one_minus(num, 1))
        mult += 1
    order = len(s.denom_factors) - mult
    if order != d:
        raise PoleOrderMismatch(order, d)
    # each (1 - t^k) / (1 - t) evaluates to k at t = 1
    return Fraction(sum(num), prod(s.denom_factors))


def sw_bound(a: int, d: int, eprime) -> Fraction:
    """``(-a)^d e' / (2^{d-1} d!)``."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return Fraction((-a) ** d) * Fraction(eprime) / (2 ** (d - 1) * factorial(d))


def hilbert_coeffs(s: RationalSeries, N: int) -> list:
    """Power-series coefficients ``H(0), …, H(N)``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    c = [0] * (N + 1)
    for i, v in enumerate(s.numerator[: N + 1]):
        c[i] = v
    for k in s.denom_factors:
        for n in range(k, N + 1):
            c[n] += c[n - k]
    return c


@dataclass(frozen=True)
class ArtinianProfile:
    coeffs: tuple
    socle_degree: int

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError(f"profile must start with 1, got {self.coeffs}")
        if self.coeffs[-1] < 1 or len(self.coeffs) - 1 != self.socle_degree:
            raise ValueError(f"profile {self.coeffs} inconsistent with socle degree {self.socle_degree}")
        if any(r < 0 for r in self.coeffs):
            raise ValueError(f"negative entry in profile {self.coeffs}")

    def __getitem__(self, n: int) -> int:
        if 0 <= n <= self.socle_degree:
            return self.coeffs[n]
        return 0

    def total(self) -> int:
        return sum(self.coeffs)

    def partial_sum(self, top: int) -> int:
        """``r_0 + … + r_top`` (zero past the socle degree)."""
        return sum(self.coeffs[: max(0, top + 1)])


def artinian_reduction(s: RationalSeries, param_degrees: Sequence[int]) -> ArtinianProfile:
    """Graded dimensions of the quotient by a system of parameters of the given degrees.

    The caller passes the degrees already scaled (``q * b_i``).  Raises
    :class:`NotPolynomial` if ``P(t) * prod (1 - t^{c_i})`` is not a polynomial.
    """
    params = [int(c) for c in param_degrees]
    if any(c < 1 for c in params):
        raise InvalidDegrees(f"parameter degrees must be positive, got {params}")
    order = pole_order(s)
    if len(params) != order:
        raise NotPolynomial(f"{len(params)} parameters for a series with pole order {order}")
    num = list(_trim(s.numerator))
    for c in params:
        num = _mul_one_minus(num, c)
    for k in s.denom_factors:
        num = _div_one_minus(_trim(num), k)
        if num is None:
            raise NotPolynomial(f"degrees {params} are not parameter degrees for {render_series(s)}")
    num = _trim(num)
    socle = a_invariant(s) + sum(params)
    if any(v < 0 for v in num) or len(num) - 1 != socle:
        raise NotPolynomial(f"degrees {params} give an invalid quotient profile {num}")
    return ArtinianProfile(num, socle)


def check_gorenstein_symmetry(prof) -> bool:
    """True iff ``r_n == r_{s-n}`` for every n."""
    coeffs = tuple(prof.coeffs if isinstance(prof, ArtinianProfile) else prof)
    return coeffs == coeffs[::-1]
