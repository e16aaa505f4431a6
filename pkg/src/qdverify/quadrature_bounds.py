"""Fidelity lower bounds built from homodyne quadrature moments.

Direct projection probabilities onto a squeezed-vacuum or coherent
target are rarely measured; first and second quadrature moments are.
Bounding the target's number operator expectation by the measured
moments gives a fidelity floor that needs no tomography:

    F >= 3/2 - s1 * e**(-2r) - s2 * e**(2r)

for the squeezed-vacuum target whose x1 variance is e**(2r) / 4, where
s1, s2 are the measured second moments of centered data.  The bound is
tight exactly when the state is the target itself and can go negative
when the data are too noisy; it is returned unclipped so callers see how
far from useful their data are.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

__all__ = [
    "QuadratureMoments",
    "squeezed_vacuum_bound",
    "optimal_bound_squeezing",
    "coherent_bound",
]

CENTERING_TOL = 1e-9


@dataclass(frozen=True)
class QuadratureMoments:
    """First moments and raw second moments of the two quadratures."""

    m1: float
    m2: float
    s1: float
    s2: float

    def __post_init__(self) -> None:
        for name in ("m1", "m2", "s1", "s2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"moment {name} must be finite")
        v1 = self.s1 - self.m1**2
        v2 = self.s2 - self.m2**2
        if v1 < -1e-12 or v2 < -1e-12:
            raise ValueError("second moments must dominate squared first moments")
        if v1 * v2 < (1.0 / 16.0) * (1.0 - 1e-6):
            warnings.warn(
                "centered variance product below the uncertainty floor 1/16; "
                "the data cannot come from a physical state",
                stacklevel=2,
            )

    def centered(self) -> "QuadratureMoments":
        """Moments of the same data displaced to zero mean."""
        return QuadratureMoments(
            0.0, 0.0, self.s1 - self.m1**2, self.s2 - self.m2**2
        )


def squeezed_vacuum_bound(q: QuadratureMoments, r: float) -> float:
    """Fidelity floor onto the squeezed vacuum with x1 variance e**(2r)/4.

    Requires centered moments; displace the data (or use ``centered()``)
    first, since the target is zero-mean.  May return a negative value,
    in which case the bound certifies nothing.
    """
    if abs(q.m1) > CENTERING_TOL or abs(q.m2) > CENTERING_TOL:
        raise ValueError(
            "moments must be centered: displace the data to zero mean first"
        )
    return 1.5 - q.s1 * math.exp(-2.0 * r) - q.s2 * math.exp(2.0 * r)


def optimal_bound_squeezing(q: QuadratureMoments) -> float:
    """Target squeezing maximising :func:`squeezed_vacuum_bound`.

    r = ln(s1 / s2) / 4, depending only on the moment ratio; the bound at
    this r equals 3/2 - 2 * sqrt(s1 * s2).
    """
    if q.s1 <= 0.0 or q.s2 <= 0.0:
        raise ValueError("second moments must be positive")
    return 0.25 * math.log(q.s1 / q.s2)


def coherent_bound(q_raw: QuadratureMoments, target_mean: tuple[float, float]) -> float:
    """Fidelity floor onto the coherent state centred at ``target_mean``.

    Shifts the raw moments to the target point internally, so uncentered
    data are fine here; equals :func:`squeezed_vacuum_bound` at r = 0 on
    the shifted moments.
    """
    t1, t2 = target_mean
    shifted1 = q_raw.s1 - 2.0 * t1 * q_raw.m1 + t1 * t1
    shifted2 = q_raw.s2 - 2.0 * t2 * q_raw.m2 + t2 * t2
    return 1.5 - shifted1 - shifted2
