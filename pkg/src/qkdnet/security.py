"""Segment-level security scaling and optimal-density analysis.

Combines the per-node authentication failure probability and the per-link
QKD failure probability into a bound on the whole segment, in both
lowest-order and exact form, and solves for the connection density that
maximizes the hash-output reduction factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import p_success_exact, regime_bound
from .errors import CapExceededError, ValidationError
from .topology import NetworkSegment

DEFAULT_EDGE_CAP = 30
ROOT_TOL = 1e-9


@dataclass(frozen=True)
class SecurityParams:
    """Per-element failure probabilities."""

    eps_auth: float
    eps_qkd: float

    def __post_init__(self) -> None:
        for name, value in (("eps_auth", self.eps_auth), ("eps_qkd", self.eps_qkd)):
            if not 0 <= value <= 1:
                raise ValidationError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class SecurityReport:
    """Segment failure bound and its two components.

    Exact fields are None in approx mode.  ``eps_qn`` is the sum of the
    pairing selected by ``mode``, clamped to 1 with ``saturated`` set when
    the raw sum exceeds 1.
    """

    mode: str
    eps1_approx: float
    eps2_approx: float
    eps1_exact: float | None
    eps2_exact: float | None
    eps_qn: float
    regime_flags: tuple[bool, bool]
    saturated: bool

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "eps1_approx": self.eps1_approx,
            "eps2_approx": self.eps2_approx,
            "eps1_exact": self.eps1_exact,
            "eps2_exact": self.eps2_exact,
            "eps_qn": self.eps_qn,
            "regime_auth_valid": self.regime_flags[0],
            "regime_qkd_valid": self.regime_flags[1],
            "saturated": self.saturated,
        }


def _check_interior_density(seg: NetworkSegment) -> None:
    if seg.density > seg.n_nodes - 2:
        raise ValidationError(
            f"density must be <= n_nodes-2 = {seg.n_nodes - 2} for the security "
            f"formulas (run placement count must be positive), got {seg.density}"
        )


def _check_probability(value, name: str) -> None:
    if not 0 <= value <= 1:
        raise ValidationError(f"{name} must be in [0, 1], got {value}")


def epsilon1_approx(seg: NetworkSegment, eps_auth: float) -> float:
    """Lowest-order node-attack bound (N-c-1) * eps_auth^c."""
    _check_interior_density(seg)
    _check_probability(eps_auth, "eps_auth")
    return (seg.n_nodes - seg.density - 1) * eps_auth ** seg.density


def epsilon1_regime_valid(seg: NetworkSegment, eps_auth: float) -> bool:
    return eps_auth <= regime_bound(seg.n_nodes, seg.density)


def epsilon1_exact(seg: NetworkSegment, eps_auth: float) -> float:
    """Exact node-attack probability via the run-of-c mixture."""
    _check_interior_density(seg)
    _check_probability(eps_auth, "eps_auth")
    return p_success_exact(seg.n_nodes, seg.density, eps_auth)


def epsilon2_approx(seg: NetworkSegment, eps_qkd: float) -> float:
    """Lowest-order link-attack bound: 2 * eps_qkd^c for c > 1, and the
    serial-chain value (N-1) * eps_qkd for c = 1."""
    _check_probability(eps_qkd, "eps_qkd")
    if seg.density == 1:
        return (seg.n_nodes - 1) * eps_qkd
    return 2.0 * eps_qkd ** seg.density


def epsilon2_regime_valid(seg: NetworkSegment, eps_qkd: float) -> bool:
    if seg.density == 1:
        return True
    return eps_qkd <= 0.5 ** (1.0 / seg.density)


def epsilon2_exact(
    seg: NetworkSegment, eps_qkd: float, edge_cap: int = DEFAULT_EDGE_CAP
) -> float:
    """Exact probability that independently intercepted links cover every
    route (no clean first-to-last path survives).

    Computed by exact dynamic programming over the joint reachability
    distribution of the trailing window of c nodes; equivalent to subset
    enumeration but polynomial in N.  The edge cap is kept as a guard for
    callers that should switch to Monte Carlo instead.
    """
    _check_probability(eps_qkd, "eps_qkd")
    if seg.edge_count > edge_cap:
        raise CapExceededError(
            f"segment has {seg.edge_count} edges, exceeding the exact-evaluation "
            f"cap {edge_cap}; use the Monte Carlo simulator instead"
        )
    q = Fraction(eps_qkd)
    c = seg.density
    # State: tuple of reachability booleans for nodes (j-c .. j-1), padded
    # with False below node 1.  Node 1 is always reachable.
    init_state = (False,) * (c - 1) + (True,)
    dist: dict[tuple[bool, ...], Fraction] = {init_state: Fraction(1)}
    for _ in range(2, seg.n_nodes + 1):
        nxt: dict[tuple[bool, ...], Fraction] = {}
        for state, mass in dist.items():
            reachable_in_window = sum(state)
            p_reached = 1 - q ** reachable_in_window if reachable_in_window else Fraction(0)
            for reached, p_branch in ((True, p_reached), (False, 1 - p_reached)):
                if p_branch == 0:
                    continue
                new_state = state[1:] + (reached,)
                nxt[new_state] = nxt.get(new_state, Fraction(0)) + mass * p_branch
        dist = nxt
    p_disconnected = sum(
        (mass for state, mass in dist.items() if not state[-1]), Fraction(0)
    )
    return float(p_disconnected)


def epsilon_qn(
    seg: NetworkSegment,
    params: SecurityParams,
    mode: str = "approx",
    edge_cap: int = DEFAULT_EDGE_CAP,
) -> SecurityReport:
    """Composed segment failure bound eps_qn = eps1 + eps2 for the chosen mode."""
    if mode not in ("approx", "exact"):
        raise ValidationError(f"mode must be 'approx' or 'exact', got {mode!r}")
    eps1a = epsilon1_approx(seg, params.eps_auth)
    eps2a = epsilon2_approx(seg, params.eps_qkd)
    eps1e = eps2e = None
    if mode == "exact":
        eps1e = epsilon1_exact(seg, params.eps_auth)
        eps2e = epsilon2_exact(seg, params.eps_qkd, edge_cap=edge_cap)
        raw_sum = eps1e + eps2e
    else:
        raw_sum = eps1a + eps2a
    saturated = raw_sum > 1.0
    return SecurityReport(
        mode=mode,
        eps1_approx=eps1a,
        eps2_approx=eps2a,
        eps1_exact=eps1e,
        eps2_exact=eps2e,
        eps_qn=min(raw_sum, 1.0),
        regime_flags=(
            epsilon1_regime_valid(seg, params.eps_auth),
            epsilon2_regime_valid(seg, params.eps_qkd),
        ),
        saturated=saturated,
    )


def optimal_c_root(n_nodes: int, tol: float = ROOT_TOL) -> float:
    """Real root c* of (N-c-1) ln(N-c-1) = c in [1, N-2], by bisection.

    The left side decreases and the right side increases in c, so the root
    is unique whenever the endpoints bracket a sign change.
    """
    if n_nodes < 4:
        raise ValidationError(f"N must be >= 4, got {n_nodes}")

    def g(c: float) -> float:
        rem = n_nodes - c - 1
        return rem * math.log(rem) - c

    lo, hi = 1.0, float(n_nodes - 2)
    if g(lo) < 0 or g(hi) > 0:
        raise ValidationError(
            f"no sign change of (N-c-1)ln(N-c-1) - c on [1, {n_nodes - 2}] for N={n_nodes}"
        )
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def optimal_c_root_approx(n_nodes: int) -> float:
    """Closed-form estimate (N-1) ln(N-1) / (ln(N-1) + 2) of the root."""
    if n_nodes < 4:
        raise ValidationError(f"N must be >= 4, got {n_nodes}")
    log_term = math.log(n_nodes - 1)
    return (n_nodes - 1) * log_term / (log_term + 2)


def hash_reduction_factor(n_nodes: int, c: int) -> float:
    """Hash-output reduction factor c * log_{N-2}(N-c-1) at density c."""
    if n_nodes < 5:
        raise ValidationError(f"N must be >= 5, got {n_nodes}")
    if not 1 <= c < n_nodes - 2:
        raise ValidationError(f"c must be in [1, {n_nodes - 3}], got {c}")
    return c * math.log(n_nodes - c - 1) / math.log(n_nodes - 2)


def optimal_c_integer(n_nodes: int) -> int:
    """Integer density in [1, N-3] maximizing the hash-reduction factor;
    ties break toward smaller c (fewer QKD links for equal security)."""
    if n_nodes < 5:
        raise ValidationError(f"N must be >= 5, got {n_nodes}")
    best_c = 1
    best_factor = hash_reduction_factor(n_nodes, 1)
    for c in range(2, n_nodes - 2):
        factor = hash_reduction_factor(n_nodes, c)
        if factor > best_factor:
            best_c, best_factor = c, factor
    return best_c
