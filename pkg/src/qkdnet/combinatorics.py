"""Exact counting of break-the-segment compromise configurations.

A node attack succeeds when at least c consecutive interior nodes (out of
the N-2 interior positions) are compromised.  f(N, m, c) counts the m-node
configurations with that property; p_success_* turn it into exact and
lowest-order attack probabilities under independent per-node compromise
with mean probability p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import CapExceededError, ValidationError

DEFAULT_ENUM_CAP = 1 << 22


@dataclass(frozen=True)
class RunCountResult:
    n_nodes: int
    compromised: int
    density: int
    count: int


@dataclass(frozen=True)
class AttackProbability:
    """Exact and lowest-order attack success probabilities for one (N, c, p)."""

    exact: float
    approx: float
    regime_valid: bool


def binomial(a: int, b: int) -> int:
    """C(a, b) with the convention that out-of-range b yields 0."""
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def _check_nmc(n_nodes: int, m: int, c: int) -> None:
    if n_nodes < 3:
        raise ValidationError(f"N must be >= 3, got {n_nodes}")
    if not 1 <= c <= n_nodes - 2:
        raise ValidationError(f"c must be in [1, {n_nodes - 2}], got {c}")
    if not 0 <= m <= n_nodes - 2:
        raise ValidationError(f"m must be in [0, {n_nodes - 2}], got {m}")


def f_inclusion_exclusion(n_nodes: int, m: int, c: int) -> int:
    """Count of m-node interior configurations containing a run of >= c.

    Alternating sum over the number j of disjoint length-c runs placed
    among the interior positions.
    """
    _check_nmc(n_nodes, m, c)
    total = 0
    for j in range(1, m // c + 1):
        term = binomial(n_nodes - m - 1, j) * binomial(n_nodes - 2 - c * j, m - c * j)
        total += term if j % 2 == 1 else -term
    return total


def f_generating_function(n_nodes: int, m: int, c: int) -> int:
    """Same count via the complement: C(N-2, m) minus the number of
    run-free configurations, read off as the x^m coefficient of
    (1 + x + ... + x^(c-1))^(N-m-1)."""
    _check_nmc(n_nodes, m, c)
    coeff = _poly_power_coefficient(c, n_nodes - m - 1, m)
    return binomial(n_nodes - 2, m) - coeff


def _poly_power_coefficient(c: int, exponent: int, degree: int) -> int:
    """Coefficient of x^degree in (sum_{k=0}^{c-1} x^k)^exponent, exactly."""
    coeffs = [0] * (degree + 1)
    coeffs[0] = 1
    for _ in range(exponent):
        nxt = [0] * (degree + 1)
        for d, a in enumerate(coeffs):
            if a == 0:
                continue
            for k in range(min(c - 1, degree - d) + 1):
                nxt[d + k] += a
        coeffs = nxt
    return coeffs[degree]


def f_bruteforce(n_nodes: int, m: int, c: int, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Independent oracle: enumerate every m-subset of the interior
    positions and test for a run of >= c consecutive positions."""
    _check_nmc(n_nodes, m, c)
    interior = n_nodes - 2
    if binomial(interior, m) > cap:
        raise CapExceededError(
            f"C({interior},{m}) exceeds enumeration cap {cap}"
        )
    count = 0
    for mask in combinations(range(interior), m):
        if max_run_length(mask) >= c:
            count += 1
    return count


def max_run_length(positions) -> int:
    """Longest run of consecutive integers in a sorted iterable."""
    best = 0
    run = 0
    prev = None
    for pos in positions:
        run = run + 1 if prev is not None and pos == prev + 1 else 1
        best = max(best, run)
        prev = pos
    return best


def _check_probability(p, name: str = "p") -> None:
    if not 0 <= p <= 1:
        raise ValidationError(f"{name} must be in [0, 1], got {p}")


def p_compromise_m(n_nodes: int, m: int, p: float) -> float:
    """Bernoulli mass: probability that exactly m of the N-2 interior
    nodes are compromised when each falls independently with probability p."""
    if n_nodes < 3:
        raise ValidationError(f"N must be >= 3, got {n_nodes}")
    if not 0 <= m <= n_nodes - 2:
        raise ValidationError(f"m must be in [0, {n_nodes - 2}], got {m}")
    _check_probability(p)
    interior = n_nodes - 2
    return float(binomial(interior, m) * Fraction(p) ** m * (1 - Fraction(p)) ** (interior - m))


def p_success_given_m(n_nodes: int, m: int, c: int) -> float:
    """Conditional attack success probability f(N,m,c) / C(N-2, m)."""
    _check_nmc(n_nodes, m, c)
    return float(Fraction(f_inclusion_exclusion(n_nodes, m, c), binomial(n_nodes - 2, m)))


def p_success_exact(n_nodes: int, c: int, p: float) -> float:
    """Exact attack success probability: the mixture of p(s|m) over the
    Bernoulli distribution of m.

    Evaluated in exact rational arithmetic, so no compensated summation is
    needed; only the final result is rounded to float.
    """
    _check_nmc(n_nodes, 0, c)
    _check_probability(p)
    pf = Fraction(p)
    interior = n_nodes - 2
    total = Fraction(0)
    for m in range(c, interior + 1):
        # p(s|m) * p_m with the C(N-2, m) factors cancelled
        total += (
            f_inclusion_exclusion(n_nodes, m, c)
            * pf ** m
            * (1 - pf) ** (interior - m)
        )
    return float(total)


def regime_bound(n_nodes: int, c: int) -> float:
    """Largest p for which the lowest-order approximation is declared valid."""
    return (1.0 / (n_nodes - c - 1)) ** (1.0 / c)


def p_success_approx(n_nodes: int, c: int, p: float) -> AttackProbability:
    """Lowest-order approximation (N-c-1) p^c alongside the exact value."""
    _check_nmc(n_nodes, 0, c)
    _check_probability(p)
    approx = (n_nodes - c - 1) * p ** c
    exact = p_success_exact(n_nodes, c, p)
    return AttackProbability(
        exact=exact,
        approx=approx,
        regime_valid=p <= regime_bound(n_nodes, c),
    )
