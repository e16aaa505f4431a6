"""Truncated number-basis oracle for the Gaussian closed forms.

States are dense matrices on the first ``dim`` Fock levels, built from
the standard ladder operators: squeeze and displacement unitaries come
from matrix exponentials of their generators, thermal states from the
geometric photon distribution.  Fidelities are computed by Hermitian
eigendecomposition square roots.  Nothing here assumes any Gaussian
identity, which is the point: agreement with :mod:`qdverify.gaussian`
validates those identities independently.

Truncation is treated as a hard precondition, not a degradation: state
constructors raise when the retained trace falls below 1 - 1e-6, or,
for the squeeze constructor whose truncated exponential is unitary
regardless, when the top level carries more than that tolerance.  The
default dimension of 120 comfortably covers squeezing up to about 6 dB
with up to one thermal photon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

__all__ = [
    "FockDensity",
    "destroy",
    "coherent_fock",
    "thermal_fock",
    "squeeze_matrix",
    "displacement_matrix",
    "squeezed_thermal",
    "uhlmann_fock",
    "quadrature_moments_fock",
]

DEFAULT_DIM = 120
TRACE_TOL = 1e-6
HERMITICITY_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
#: A state whose top eigenvalue reaches 1 - PURITY_TOL is treated as pure.
PURITY_TOL = 1e-11


@dataclass(frozen=True, eq=False)
class FockDensity:
    """A truncated density matrix with its invariants checked on entry."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise ValueError("density matrix must be Hermitian")
        tr = float(np.trace(m).real)
        if not (1.0 - TRACE_TOL <= tr <= 1.0 + HERMITICITY_TOL):
            raise ValueError(
                f"trace {tr!r} outside [1 - {TRACE_TOL}, 1]: truncation insufficient"
            )
        if float(np.linalg.eigvalsh(m).min()) < EIGENVALUE_FLOOR:
            raise ValueError("density matrix has a significantly negative eigenvalue")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def destroy(dim: int) -> np.ndarray:
    """Annihilation operator on the first ``dim`` Fock levels."""
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def coherent_fock(alpha: complex, dim: int = DEFAULT_DIM) -> FockDensity:
    """Coherent state built from its analytic number-basis amplitudes."""
    amps = np.zeros(dim, dtype=complex)
    amps[0] = 1.0
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    amps *= math.exp(-0.5 * abs(alpha) ** 2)
    return FockDensity(np.outer(amps, amps.conj()))


def thermal_fock(nbar: float, dim: int = DEFAULT_DIM) -> FockDensity:
    """Thermal state with mean photon number ``nbar`` (geometric weights)."""
    if nbar < 0.0:
        raise ValueError("nbar must be non-negative")
    if nbar == 0.0:
        p = np.zeros(dim)
        p[0] = 1.0
    else:
        ratio = nbar / (1.0 + nbar)
        p = ratio ** np.arange(dim) / (1.0 + nbar)
    return FockDensity(np.diag(p.astype(complex)))


def squeeze_matrix(r: float, dim: int) -> np.ndarray:
    """Squeeze unitary scaling the x1 variance of the vacuum by e**(2r)."""
    a = destroy(dim)
    gen = 0.5 * r * (a.T @ a.T - a @ a)
    return expm(gen)


def displacement_matrix(alpha: complex, dim: int) -> np.ndarray:
    """Displacement unitary moving the vacuum to the coherent state alpha."""
    a = destroy(dim).astype(complex)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return expm(gen)


def _phase_rotation(theta: float, dim: int) -> np.ndarray:
    # Diagonal rotation whose covariance action matches rotate_cov.
    return np.diag(np.exp(-1j * theta * np.arange(dim)))


def squeezed_thermal(
    r: float, nbar: float, theta: float = 0.0, dim: int = DEFAULT_DIM
) -> FockDensity:
    """Rotated squeezed thermal state.

    The covariance is (2*nbar + 1) times the rotated diag(e**(2r),
    e**(-2r)).  Parameter choices the truncation cannot represent are
    rejected by inspecting the two highest level populations: the
    truncated squeeze exponential stays unitary, so a starved basis shows
    up as weight parked near the top rather than as a trace deficit (two
    levels because squeezing a diagonal base populates levels in steps of
    two, leaving one parity empty).
    """
    base = thermal_fock(nbar, dim).matrix
    s = squeeze_matrix(r, dim)
    m = s @ base @ s.T.conj()
    if float(m.diagonal().real[-2:].sum()) > TRACE_TOL:
        raise ValueError(f"squeezing r={r!r} needs more than {dim} Fock levels")
    if theta != 0.0:
        u = _phase_rotation(theta, dim)
        m = u @ m @ u.conj().T
    return FockDensity(0.5 * (m + m.conj().T))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(m)
    if float(vals.min()) < EIGENVALUE_FLOOR:
        raise ValueError("matrix is not positive semidefinite within tolerance")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def uhlmann_fock(r1: FockDensity, r2: FockDensity) -> float:
    """Fidelity Tr sqrt(sqrt(p1) p2 sqrt(p1)) by direct linear algebra.

    A numerically rank-one operand is routed through the projection
    formula sqrt(<psi| rho |psi>) instead: near a pure state the general
    square-root path turns eigensolver dust of order 1e-16 into 1e-8
    error, which is exactly where tight equality checks live.
    """
    if r1.dim != r2.dim:
        raise ValueError(f"dimension mismatch: {r1.dim} vs {r2.dim}")
    for first, second in ((r1, r2), (r2, r1)):
        vals, vecs = np.linalg.eigh(first.matrix)
        if float(vals.min()) < EIGENVALUE_FLOOR:
            raise ValueError("matrix is not positive semidefinite within tolerance")
        if float(vals[-1]) >= 1.0 - PURITY_TOL:
            psi = vecs[:, -1]
            overlap = float((psi.conj() @ second.matrix @ psi).real)
            return math.sqrt(max(overlap, 0.0))
    root = _psd_sqrt(r1.matrix)
    inner = root @ r2.matrix @ root
    vals = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sqrt(np.clip(vals, 0.0, None)).sum())


def quadrature_moments_fock(r: FockDensity) -> tuple[float, float, float, float]:
    """First and raw second quadrature moments (m1, m2, <x1^2>, <x2^2>)."""
    a = destroy(r.dim).astype(complex)
    x1 = 0.5 * (a + a.conj().T)
    x2 = (a - a.conj().T) / 2j
    m = r.matrix
    m1 = float(np.trace(m @ x1).real)
    m2 = float(np.trace(m @ x2).real)
    v11 = float(np.trace(m @ x1 @ x1).real)
    v22 = float(np.trace(m @ x2 @ x2).real)
    return m1, m2, v11, v22
