"""Quantum-domain decision logic for two-state transformation benchmarks.

A channel that admits a measure-and-prepare model (measure the input with
some POVM, then prepare a fresh output that depends only on the outcome)
can never preserve entanglement.  For a pair of non-orthogonal test inputs
with overlap ``gamma`` and a pair of reference targets with overlap
``gamma_prime``, the best average transformation fidelity any such scheme
can reach is a closed-form bound that depends on the two overlaps only
through a single parameter

    B = (1 - gamma_prime**2) * gamma**2

called here the total non-orthogonality of the task.  Beating the bound
with measured fidelities certifies that the channel acts outside the
measure-and-prepare set, i.e. in the quantum domain.

The bound as a function of the prior weight ``p_plus`` of the first input,

    F_c(p_plus) = (1 + sqrt(B * (2*p_plus - 1)**2 + 1 - B)) / 2,

is convex, so a pair of measured fidelities (a, b) beats it for some prior
exactly when the straight chord from (0, a) to (1, b) rises above the
tangent line of matching slope, which requires the chord to be no steeper
than the bound ever gets.  Working that out gives the closed-form test
implemented by :func:`qd_criterion`; :func:`qd_criterion_numeric`
evaluates the same geometry by direct maximisation over the prior and is
used as a cross-check.  The criterion is sufficient only: failing it
proves nothing about the channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = [
    "OverlapPair",
    "PriorEnsemble",
    "FidelityPair",
    "Verdict",
    "CLOSED_FORM",
    "NUMERIC_SUP",
    "total_nonorthogonality",
    "classical_fidelity_bound",
    "tangency_prior",
    "legendre_conjugate",
    "qd_criterion",
    "qd_criterion_numeric",
    "boundary_curve",
]

CLOSED_FORM = "closed_form"
NUMERIC_SUP = "numeric_sup"

#: Default width of the band around lhs == rhs inside which a verdict is
#: flagged as marginal (numerically too close to call).
BOUNDARY_TOL = 1e-9


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class OverlapPair:
    """Overlap moduli of the two inputs and of the two reference targets."""

    gamma: float
    gamma_prime: float

    def __post_init__(self) -> None:
        _check_unit("gamma", self.gamma)
        _check_unit("gamma_prime", self.gamma_prime)

    @property
    def useful(self) -> bool:
        """True when the pair yields B > 0, so the benchmark can be beaten."""
        return self.gamma > 0.0 and self.gamma_prime < 1.0


@dataclass(frozen=True)
class PriorEnsemble:
    """Prior weight of the first input state in the binary ensemble."""

    p_plus: float

    def __post_init__(self) -> None:
        _check_unit("p_plus", self.p_plus)

    @property
    def p_minus(self) -> float:
        return 1.0 - self.p_plus

    @property
    def bias(self) -> float:
        """Signed prior imbalance p_plus - p_minus, in [-1, 1]."""
        return 2.0 * self.p_plus - 1.0


@dataclass(frozen=True)
class FidelityPair:
    """Measured target fidelities of the two transformed inputs.

    ``a`` belongs to the state carrying prior weight ``1 - p_plus``, ``b``
    to the one carrying ``p_plus``; the chord slope used throughout is
    ``b - a``.
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        _check_unit("a", self.a)
        _check_unit("b", self.b)

    @property
    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def slope(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class Verdict:
    """Outcome of the quantum-domain test.

    ``lhs`` is the balanced mean fidelity (a + b) / 2 and ``rhs`` the
    benchmark value it must exceed.  When the inputs are degenerate (the
    bound cannot be beaten for any prior) ``degenerate`` carries the
    reason; ``rhs`` is then NaN if the closed formula turns complex, but
    stays finite when only the tangent construction leaves the admissible
    prior range.  ``marginal`` flags verdicts within the boundary
    tolerance, ``swapped`` records that a > b was relabelled internally.
    """

    is_quantum_domain: bool
    lhs: float
    rhs: float
    method: str
    marginal: bool = False
    swapped: bool = False
    degenerate: str | None = None


def total_nonorthogonality(t: OverlapPair) -> float:
    """Collapse an overlap pair into the single benchmark parameter B."""
    return (1.0 - t.gamma_prime**2) * t.gamma**2


def _bound(B: float, p_plus: float) -> float:
    bias = 2.0 * p_plus - 1.0
    return 0.5 * (1.0 + math.sqrt(B * bias * bias + 1.0 - B))


def classical_fidelity_bound(B: float, p: PriorEnsemble | float) -> float:
    """Best average fidelity any measure-and-prepare scheme can reach.

    Accepts the prior either as a :class:`PriorEnsemble` or as a bare
    ``p_plus`` float.  The value is (1 + K) / 2 with
    K = sqrt(B * (2*p_plus - 1)**2 + 1 - B), lying in [1/2, 1].
    """
    _check_unit("B", B)
    p_plus = p.p_plus if isinstance(p, PriorEnsemble) else _check_unit("p_plus", p)
    return _bound(B, p_plus)


def tangency_prior(B: float, slope: float) -> float:
    """Prior at which the bound's derivative equals ``slope``.

    Only slopes with slope**2 < B admit a tangent point; otherwise a
    ValueError is raised and the caller should treat the configuration as
    degenerate (see :func:`qd_criterion`).  The bound's derivative covers
    only [-B, B] on the physical prior range, so for B < |slope| <
    sqrt(B) the returned value lies outside [0, 1].
    """
    B = float(B)
    if not (0.0 < B <= 1.0):
        raise ValueError(f"B must lie in (0, 1], got {B!r}")
    if slope * slope >= B:
        raise ValueError(
            f"slope {slope!r} lies outside the open tangency range for B={B!r}"
        )
    return 0.5 * (1.0 + slope * math.sqrt((1.0 - B) / (B * (B - slope * slope))))


def legendre_conjugate(B: float, lam: float) -> float:
    """Convex conjugate of the fidelity bound on the prior range [1/2, 1].

    Returns the extreme value of ``lam * p_plus - F_c(p_plus)`` over
    p_plus in [1/2, 1], which for the convex bound is attained at the
    tangency prior when ``lam`` sits inside the derivative range [0, B]
    and at an endpoint otherwise.  Its negative is the intercept of the
    slope-``lam`` tangent line at p_plus = 0, the quantity the chord test
    in :func:`qd_criterion` compares against.
    """
    B = float(B)
    if not (0.0 < B <= 1.0):
        raise ValueError(f"B must lie in (0, 1], got {B!r}")
    lam = float(lam)
    if lam <= 0.0:
        return 0.5 * lam - _bound(B, 0.5)
    if lam >= B:
        return lam - 1.0
    p0 = tangency_prior(B, lam)
    return lam * p0 - _bound(B, p0)


_DEGENERATE_ZERO_B = (
    "benchmark parameter B is zero: the bound is identically 1 and cannot be exceeded"
)
_DEGENERATE_SLOPE = (
    "fidelity slope exceeds the benchmark slope range: no prior can beat the bound"
)
_DEGENERATE_TANGENT = (
    "fidelity slope exceeds the bound's derivative range: the tangent prior falls "
    "outside [0, 1], so no prior can beat the bound"
)


def _ordered(f: FidelityPair) -> tuple[float, float, bool]:
    if f.a > f.b:
        return f.b, f.a, True
    return f.a, f.b, False


def qd_criterion(
    f: FidelityPair, B: float, *, boundary_tol: float = BOUNDARY_TOL
) -> Verdict:
    """Closed-form quantum-domain test for a fidelity pair at parameter B.

    The verdict is true when (a + b) / 2 exceeds
    (1 + sqrt((1 - B) * (B - (b - a)**2) / B)) / 2 and the chord slope
    |b - a| stays within the bound's derivative range [-B, B], so that the
    tangent construction behind the formula lands at an admissible prior.
    For slopes between B and sqrt(B) the formula is still real and is
    reported as ``rhs``, but the tangent point sits outside [0, 1]: the
    chord-bound gap is then monotone in the prior and peaks at an endpoint
    where the bound reaches 1, so the verdict is a degenerate false.
    Steeper chords (slope**2 >= B) and B = 0 are likewise degenerate false
    verdicts rather than errors, with ``rhs`` NaN since the formula turns
    complex there.
    """
    _check_unit("B", B)
    a, b, swapped = _ordered(f)
    lhs = 0.5 * (a + b)
    slope = b - a
    if B == 0.0:
        return Verdict(
            False, lhs, math.nan, CLOSED_FORM, swapped=swapped,
            degenerate=_DEGENERATE_ZERO_B,
        )
    if slope * slope >= B:
        return Verdict(
            False, lhs, math.nan, CLOSED_FORM, swapped=swapped,
            degenerate=_DEGENERATE_SLOPE,
        )
    rhs = 0.5 * (1.0 + math.sqrt((1.0 - B) * (B - slope * slope) / B))
    marginal = abs(lhs - rhs) <= boundary_tol
    if slope > B:
        return Verdict(
            False, lhs, rhs, CLOSED_FORM, marginal=marginal, swapped=swapped,
            degenerate=_DEGENERATE_TANGENT,
        )
    return Verdict(lhs > rhs, lhs, rhs, CLOSED_FORM, marginal=marginal, swapped=swapped)


def qd_criterion_numeric(
    f: FidelityPair,
    B: float,
    *,
    boundary_tol: float = BOUNDARY_TOL,
    grid: int = 256,
) -> Verdict:
    """Same test evaluated by direct maximisation over the prior.

    Maximises ``chord(p) - F_c(p)`` over p_plus in [0, 1] with a coarse
    grid followed by bounded scalar refinement; the gap is concave so the
    refinement is reliable.  Must agree with :func:`qd_criterion` away
    from the boundary; kept as an independent evaluation path.
    """
    _check_unit("B", B)
    a, b, swapped = _ordered(f)
    lhs = 0.5 * (a + b)
    slope = b - a

    def gap(p: float) -> float:
        return a + slope * p - _bound(B, p)

    ps = np.linspace(0.0, 1.0, grid)
    gaps = a + slope * ps - 0.5 * (1.0 + np.sqrt(B * (2.0 * ps - 1.0) ** 2 + 1.0 - B))
    k = int(np.argmax(gaps))
    lo = ps[max(k - 1, 0)]
    hi = ps[min(k + 1, grid - 1)]
    res = minimize_scalar(
        lambda p: -gap(p), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-12},
    )
    sup = max(float(-res.fun), float(gaps[k]))

    rhs = lhs - sup
    degenerate = None
    if B == 0.0:
        degenerate = _DEGENERATE_ZERO_B
    elif slope * slope >= B:
        degenerate = _DEGENERATE_SLOPE
    elif slope > B:
        degenerate = _DEGENERATE_TANGENT
    marginal = abs(sup) <= boundary_tol
    return Verdict(
        sup > 0.0, lhs, rhs, NUMERIC_SUP,
        marginal=marginal, swapped=swapped, degenerate=degenerate,
    )


def boundary_curve(B: float, n_points: int) -> np.ndarray:
    """Sample the classical-quantum boundary in the (a, b) fidelity square.

    The locus (a + b) / 2 = rhs is parameterised by the chord slope
    s = b - a running over [-sqrt(B), sqrt(B)]; the symmetric point
    a = b = (1 + sqrt(1 - B)) / 2 is always included exactly.  Returns an
    (n_points, 2) array of (a, b) rows clipped to the unit square.
    """
    B = float(B)
    if not (0.0 < B < 1.0):
        raise ValueError(f"B must lie in (0, 1) for a boundary curve, got {B!r}")
    n_points = int(n_points)
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    root = math.sqrt(B)
    s = np.linspace(-root, root, n_points)
    s[int(np.argmin(np.abs(s)))] = 0.0
    mid = 0.5 * (1.0 + np.sqrt((1.0 - B) * np.clip(B - s * s, 0.0, None) / B))
    a = np.clip(mid - 0.5 * s, 0.0, 1.0)
    b = np.clip(mid + 0.5 * s, 0.0, 1.0)
    return np.column_stack([a, b])
