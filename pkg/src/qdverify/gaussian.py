"""Single-mode Gaussian state algebra in shot-noise units.

Covariance matrices follow the convention in which the vacuum state is
the identity: entries are four times the symmetrised second moments of
the quadratures x1 = (a + a*) / 2 and x2 = (a - a*) / (2i).  Squeezing
levels quoted in dB are power ratios, variance = 10**(dB / 10), so -3 dB
means roughly half the shot noise.  A squeezed vacuum with parameter r
has covariance diag(e**(2r), e**(-2r)); positive r stretches x1.

Everything here is closed-form: fidelities between arbitrary single-mode
Gaussian states, projections onto pure squeezed-vacuum targets, and the
overlap curves of rotated state pairs that the storage analysis in
:mod:`qdverify.applications` scans over.  The matching truncated
number-basis computations live in :mod:`qdverify.fock_oracle` and are
used in the test suite to validate each formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CovMat2",
    "GaussianState",
    "SqueezingRecord",
    "db_to_linear",
    "rotate_cov",
    "uhlmann_fidelity_gaussian",
    "pure_target_projection",
    "optimal_target_squeezing",
    "input_overlap_sq",
    "target_overlap_sq",
    "mixed_input_gamma",
]

#: Slack allowed below the physical determinant floor det(C) >= 1.
DET_TOL = 1e-9


@dataclass(frozen=True)
class CovMat2:
    """Symmetric 2x2 covariance matrix, vacuum = identity convention."""

    c11: float
    c12: float
    c22: float

    def __post_init__(self) -> None:
        for name in ("c11", "c12", "c22"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"covariance entry {name} must be finite")
        if self.c11 <= 0.0 or self.c22 <= 0.0:
            raise ValueError("diagonal covariance entries must be positive")
        if self.det < 1.0 - DET_TOL:
            raise ValueError(
                f"covariance determinant {self.det!r} is below the physical floor"
            )

    @property
    def det(self) -> float:
        return self.c11 * self.c22 - self.c12 * self.c12

    def as_array(self) -> np.ndarray:
        return np.array([[self.c11, self.c12], [self.c12, self.c22]])

    @classmethod
    def from_array(cls, m: np.ndarray) -> "CovMat2":
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2) or abs(m[0, 1] - m[1, 0]) > 1e-10:
            raise ValueError("expected a symmetric 2x2 array")
        off = 0.5 * (m[0, 1] + m[1, 0])
        return cls(float(m[0, 0]), float(off), float(m[1, 1]))

    @classmethod
    def diagonal(cls, v1: float, v2: float) -> "CovMat2":
        return cls(float(v1), 0.0, float(v2))


@dataclass(frozen=True)
class GaussianState:
    """A covariance matrix plus quadrature means in x-eigenvalue units."""

    cov: CovMat2
    mean1: float = 0.0
    mean2: float = 0.0


@dataclass(frozen=True)
class SqueezingRecord:
    """Measured squeezing and antisqueezing of one state, in dB."""

    squeezing_db: float
    antisqueezing_db: float

    def __post_init__(self) -> None:
        v1, v2 = self.linear_pair
        if v1 * v2 < 1.0 - 1e-6:
            raise ValueError(
                f"variance product {v1 * v2!r} below 1: record is unphysical"
            )

    @property
    def linear_pair(self) -> tuple[float, float]:
        return db_to_linear(self.squeezing_db), db_to_linear(self.antisqueezing_db)


def db_to_linear(db: float) -> float:
    """Convert a dB power ratio to a linear variance (0 dB = shot noise)."""
    return 10.0 ** (db / 10.0)


def rotate_cov(c: CovMat2, theta: float) -> CovMat2:
    """Covariance of the state after a phase rotation by ``theta``."""
    ct, st = math.cos(theta), math.sin(theta)
    c11 = ct * ct * c.c11 + 2.0 * ct * st * c.c12 + st * st * c.c22
    c22 = st * st * c.c11 - 2.0 * ct * st * c.c12 + ct * ct * c.c22
    c12 = ct * st * (c.c22 - c.c11) + (ct * ct - st * st) * c.c12
    return CovMat2(c11, c12, c22)


def uhlmann_fidelity_gaussian(g1: GaussianState, g2: GaussianState) -> float:
    """Unsquared fidelity between two single-mode Gaussian states.

    Evaluates sqrt(2 / (sqrt(D + d) - sqrt(d))) * exp(-q) with
    D = det(C1 + C2), d = (det C1 - 1)(det C2 - 1), and q the quadratic
    form of the mean difference with matrix (C1 + C2)^-1.  The difference
    of square roots is computed as D / (sqrt(D + d) + sqrt(d)) so the
    result stays accurate when d is large or vanishing.
    """
    c1 = g1.cov.as_array()
    c2 = g2.cov.as_array()
    total = c1 + c2
    big = float(np.linalg.det(total))
    small = (g1.cov.det - 1.0) * (g2.cov.det - 1.0)
    # Construction already enforces det >= 1 - DET_TOL; anything mildly
    # negative here is pure roundoff.
    small = max(small, 0.0)
    fid = math.sqrt(2.0 * (math.sqrt(big + small) + math.sqrt(small)) / big)
    d1 = g1.mean1 - g2.mean1
    d2 = g1.mean2 - g2.mean2
    if d1 != 0.0 or d2 != 0.0:
        diff = np.array([d1, d2])
        fid *= math.exp(-float(diff @ np.linalg.solve(total, diff)))
    return min(fid, 1.0)


def pure_target_projection(x_var: float, y_var: float, r: float) -> float:
    """Projection probability of a zero-mean Gaussian onto a squeezed vacuum.

    The state has covariance diag(x_var, y_var); the target is the pure
    squeezed vacuum with parameter ``r``.  Equals the squared fidelity
    2 / sqrt(e**(2r) * y_var + e**(-2r) * x_var + x_var * y_var + 1).
    """
    _check_variances(x_var, y_var, physical=True)
    return 2.0 / math.sqrt(
        math.exp(2.0 * r) * y_var + math.exp(-2.0 * r) * x_var + x_var * y_var + 1.0
    )


def optimal_target_squeezing(x_var: float, y_var: float) -> float:
    """Squeezing parameter maximising :func:`pure_target_projection`.

    r = ln(x_var / y_var) / 4; at this r the projection reduces to
    2 / (1 + sqrt(x_var * y_var)).
    """
    _check_variances(x_var, y_var, physical=False)
    return 0.25 * math.log(x_var / y_var)


def input_overlap_sq(x_var, y_var, theta):
    """Squared fidelity between a zero-mean Gaussian and its rotated copy.

    The state has covariance diag(x_var, y_var) and the copy is rotated
    by ``theta``; works for mixed states (variance product above 1).
    Accepts scalar or array ``theta``.
    """
    _check_variances(x_var, y_var, physical=True)
    prod = x_var * y_var
    spread = _rotation_spread(x_var, y_var, theta)
    return 2.0 / (np.sqrt(prod * prod + spread + 1.0) - prod + 1.0)


def target_overlap_sq(x_var, y_var, theta):
    """Squared overlap of two rotated copies of a pure squeezed vacuum.

    Exact when x_var * y_var = 1.  Callers may also feed mixed-state
    diagonal entries; the value is then just this formula evaluated on
    those entries, which is how the published storage benchmark numbers
    arise, not a physical overlap.  Accepts scalar or array ``theta``.
    """
    _check_variances(x_var, y_var, physical=False)
    return 2.0 / np.sqrt(2.0 + _rotation_spread(x_var, y_var, theta))


def mixed_input_gamma(g1: GaussianState, g2: GaussianState) -> float:
    """Overlap parameter to feed the criterion when the inputs are mixed.

    For mixed test inputs the benchmark stays valid with the input
    overlap replaced by the fidelity between them; this is that value.
    """
    return uhlmann_fidelity_gaussian(g1, g2)


def _rotation_spread(x_var, y_var, theta):
    return 0.5 * (
        (x_var + y_var) ** 2 - (x_var - y_var) ** 2 * np.cos(2.0 * np.asarray(theta))
    )


def _check_variances(x_var: float, y_var: float, *, physical: bool) -> None:
    if x_var <= 0.0 or y_var <= 0.0:
        raise ValueError("variances must be positive")
    if physical and x_var * y_var < 1.0 - DET_TOL:
        raise ValueError(
            f"variance product {x_var * y_var!r} below 1: state is unphysical"
        )
