import math

import numpy as np
import pytest

from qdverify.criterion import (
    CLOSED_FORM,
    NUMERIC_SUP,
    FidelityPair,
    OverlapPair,
    PriorEnsemble,
    boundary_curve,
    classical_fidelity_bound,
    legendre_conjugate,
    qd_criterion,
    qd_criterion_numeric,
    tangency_prior,
    total_nonorthogonality,
)

# Values computed independently from the defining formulas (exact binomial
# of square roots, long-double grid sweeps), frozen here.
RHS_FLAT_B025 = 0.9330127018922193
RHS_SLOPED_B025 = 0.8464101615137753
BOUND_B025_P075 = 0.9506939094329987
SUP_GAP_082_B025 = -0.11301270189221935
TANGENT_PRIOR_B025_S02 = 0.8779644730092273
HELSTROM_G09 = 0.7179449471770336


def test_bound_examples():
    assert classical_fidelity_bound(0.25, 0.5) == pytest.approx(RHS_FLAT_B025)
    assert classical_fidelity_bound(0.25, 0.75) == pytest.approx(BOUND_B025_P075)
    assert classical_fidelity_bound(0.25, 1.0) == pytest.approx(1.0)
    assert classical_fidelity_bound(0.25, PriorEnsemble(0.75)) == pytest.approx(
        BOUND_B025_P075
    )


def test_bound_symmetric_in_prior():
    rng = np.random.default_rng(5)
    for _ in range(50):
        B = rng.uniform(0.0, 1.0)
        p = rng.uniform(0.0, 1.0)
        assert classical_fidelity_bound(B, p) == pytest.approx(
            classical_fidelity_bound(B, 1.0 - p), abs=1e-14
        )


def test_bound_convex_in_prior():
    rng = np.random.default_rng(6)
    for _ in range(200):
        B = rng.uniform(0.01, 1.0)
        p1, p2 = rng.uniform(0.0, 1.0, 2)
        t = rng.uniform(0.0, 1.0)
        mix = classical_fidelity_bound(B, t * p1 + (1.0 - t) * p2)
        chord = t * classical_fidelity_bound(B, p1) + (1.0 - t) * classical_fidelity_bound(B, p2)
        assert mix <= chord + 1e-12


def test_bound_range_and_endpoints():
    for B in (0.05, 0.3, 0.7, 1.0):
        assert classical_fidelity_bound(B, 0.0) == pytest.approx(1.0)
        assert classical_fidelity_bound(B, 1.0) == pytest.approx(1.0)
        floor = 0.5 * (1.0 + math.sqrt(1.0 - B))
        assert classical_fidelity_bound(B, 0.5) == pytest.approx(floor)


def test_total_nonorthogonality():
    assert total_nonorthogonality(OverlapPair(0.8, 0.6)) == pytest.approx(0.4096)
    assert total_nonorthogonality(OverlapPair(1.0, 0.0)) == pytest.approx(1.0)
    assert total_nonorthogonality(OverlapPair(0.0, 0.5)) == 0.0
    assert OverlapPair(0.8, 0.6).useful
    assert not OverlapPair(0.0, 0.6).useful
    assert not OverlapPair(0.8, 1.0).useful


def test_input_validation():
    with pytest.raises(ValueError):
        OverlapPair(1.2, 0.5)
    with pytest.raises(ValueError):
        OverlapPair(0.5, -0.1)
    with pytest.raises(ValueError):
        FidelityPair(-0.01, 0.5)
    with pytest.raises(ValueError):
        FidelityPair(0.5, 1.01)
    with pytest.raises(ValueError):
        PriorEnsemble(1.5)
    with pytest.raises(ValueError):
        classical_fidelity_bound(1.1, 0.5)


def test_prior_ensemble_bias():
    p = PriorEnsemble(0.75)
    assert p.p_minus == pytest.approx(0.25)
    assert p.bias == pytest.approx(0.5)


def test_flat_chord_verdicts():
    fail = qd_criterion(FidelityPair(0.82, 0.82), 0.25)
    assert not fail.is_quantum_domain
    assert fail.lhs == pytest.approx(0.82)
    assert fail.rhs == pytest.approx(RHS_FLAT_B025)
    assert fail.method == CLOSED_FORM
    assert not fail.marginal
    assert not fail.swapped
    assert fail.degenerate is None

    ok = qd_criterion(FidelityPair(0.95, 0.95), 0.25)
    assert ok.is_quantum_domain
    assert ok.rhs == pytest.approx(RHS_FLAT_B025)


def test_sloped_chord_verdict():
    v = qd_criterion(FidelityPair(0.6, 0.9), 0.25)
    assert v.rhs == pytest.approx(RHS_SLOPED_B025)
    assert v.lhs == pytest.approx(0.75)
    assert not v.is_quantum_domain
    # slope 0.3 already exceeds the derivative range [-B, B] = [-0.25, 0.25],
    # so this pair could never be certified regardless of lhs
    assert v.degenerate


def test_chord_steeper_than_derivative_range_never_certifies():
    # slope 0.3 with B = 0.16: the closed formula is still real (0.3 < 0.4 =
    # sqrt(B)) but the tangent prior lies beyond p_plus = 1.  The mean can sit
    # above the reported rhs and the verdict must still be false, because the
    # chord-bound gap peaks at p_plus = 1 where the bound reaches 1.
    v = qd_criterion(FidelityPair(0.69, 0.99), 0.16)
    assert v.lhs == pytest.approx(0.84)
    assert v.lhs > v.rhs
    assert not v.is_quantum_domain
    assert v.degenerate
    assert not math.isnan(v.rhs)

    n = qd_criterion_numeric(FidelityPair(0.69, 0.99), 0.16)
    assert not n.is_quantum_domain
    assert n.degenerate == v.degenerate
    # best gap sits at p_plus = 1: sup = b - 1, so the numeric rhs is
    # lhs + 1 - b
    assert (n.lhs - n.rhs) == pytest.approx(0.99 - 1.0, abs=1e-9)


def test_swapped_pair_gives_same_benchmark():
    fwd = qd_criterion(FidelityPair(0.6, 0.9), 0.25)
    rev = qd_criterion(FidelityPair(0.9, 0.6), 0.25)
    assert rev.swapped and not fwd.swapped
    assert rev.rhs == pytest.approx(fwd.rhs)
    assert rev.is_quantum_domain == fwd.is_quantum_domain


def test_zero_nonorthogonality_is_degenerate():
    v = qd_criterion(FidelityPair(0.99, 0.99), 0.0)
    assert not v.is_quantum_domain
    assert math.isnan(v.rhs)
    assert v.degenerate


def test_steep_chord_is_degenerate():
    # slope 0.7 with B = 0.25: the chord is steeper than the bound anywhere
    v = qd_criterion(FidelityPair(0.2, 0.9), 0.25)
    assert not v.is_quantum_domain
    assert math.isnan(v.rhs)
    assert v.degenerate
    # inclusive at slope**2 == B
    v = qd_criterion(FidelityPair(0.25, 0.75), 0.25)
    assert v.degenerate


def test_marginal_flag():
    on_the_line = qd_criterion(FidelityPair(RHS_FLAT_B025, RHS_FLAT_B025), 0.25)
    assert on_the_line.marginal
    clear = qd_criterion(FidelityPair(0.95, 0.95), 0.25)
    assert not clear.marginal


def test_numeric_path_examples():
    v = qd_criterion_numeric(FidelityPair(0.82, 0.82), 0.25)
    assert v.method == NUMERIC_SUP
    assert not v.is_quantum_domain
    assert v.rhs == pytest.approx(RHS_FLAT_B025, abs=1e-9)
    assert (v.lhs - v.rhs) == pytest.approx(SUP_GAP_082_B025, abs=1e-9)


def test_numeric_agrees_with_closed_form():
    rng = np.random.default_rng(17)
    checked = 0
    for _ in range(400):
        a, b = rng.uniform(0.0, 1.0, 2)
        B = rng.uniform(1e-4, 1.0)
        closed = qd_criterion(FidelityPair(a, b), B)
        numeric = qd_criterion_numeric(FidelityPair(a, b), B)
        if closed.degenerate is not None:
            assert numeric.degenerate == closed.degenerate
            assert not numeric.is_quantum_domain
            continue
        if abs(closed.lhs - closed.rhs) < 1e-6:
            continue
        assert numeric.is_quantum_domain == closed.is_quantum_domain
        assert numeric.rhs == pytest.approx(closed.rhs, abs=1e-7)
        checked += 1
    assert checked > 200


def test_tangency_prior_example():
    p0 = tangency_prior(0.25, 0.2)
    assert p0 == pytest.approx(TANGENT_PRIOR_B025_S02)
    h = 1e-6
    slope = (
        classical_fidelity_bound(0.25, p0 + h) - classical_fidelity_bound(0.25, p0 - h)
    ) / (2.0 * h)
    assert slope == pytest.approx(0.2, abs=1e-6)


def test_tangency_prior_validation():
    with pytest.raises(ValueError):
        tangency_prior(0.25, 0.5)
    with pytest.raises(ValueError):
        tangency_prior(0.25, -0.6)
    with pytest.raises(ValueError):
        tangency_prior(0.0, 0.0)


@pytest.mark.parametrize(
    "lam, expected",
    [
        (0.0, -0.9330127018922193),
        (0.1, -0.8742640687119293),
        (0.2, -0.7968626966596887),
        (0.25, -0.75),
        (0.3, -0.7),
    ],
)
def test_legendre_conjugate_frozen(lam, expected):
    assert legendre_conjugate(0.25, lam) == pytest.approx(expected, abs=1e-12)


def test_legendre_conjugate_matches_grid():
    rng = np.random.default_rng(23)
    ps = np.linspace(0.5, 1.0, 20001)
    for _ in range(25):
        B = rng.uniform(0.05, 1.0)
        lam = rng.uniform(-0.2, 1.2)
        bound = 0.5 * (1.0 + np.sqrt(B * (2.0 * ps - 1.0) ** 2 + 1.0 - B))
        grid = float(np.max(lam * ps - bound))
        assert legendre_conjugate(B, lam) == pytest.approx(grid, abs=1e-7)


def test_legendre_support_line_minorises_bound():
    # The support line of slope lam sits below the convex bound and touches
    # it at the point where the conjugate's extremum is attained.
    ps = np.linspace(0.5, 1.0, 2001)
    for B, lam in [(0.3, 0.1), (0.8, 0.5), (0.25, 0.2)]:
        intercept = -legendre_conjugate(B, lam)
        bound = 0.5 * (1.0 + np.sqrt(B * (2.0 * ps - 1.0) ** 2 + 1.0 - B))
        line = lam * ps + intercept
        assert np.all(line <= bound + 1e-12)
        p0 = tangency_prior(B, lam)
        touch = lam * p0 + intercept
        assert touch == pytest.approx(classical_fidelity_bound(B, p0), abs=1e-12)

    # beyond the derivative range the support point is the endpoint p_plus = 1
    intercept = -legendre_conjugate(0.3, 0.5)
    bound = 0.5 * (1.0 + np.sqrt(0.3 * (2.0 * ps - 1.0) ** 2 + 0.7))
    line = 0.5 * ps + intercept
    assert np.all(line <= bound + 1e-12)
    assert line[-1] == pytest.approx(1.0, abs=1e-12)


def test_helstrom_special_case():
    # Orthogonal targets turn the task into plain discrimination, so the
    # bound collapses to the best guessing probability for overlap gamma.
    gamma = 0.9
    guess = 0.5 * (1.0 + math.sqrt(1.0 - gamma * gamma))
    assert classical_fidelity_bound(gamma * gamma, 0.5) == pytest.approx(guess)
    assert classical_fidelity_bound(0.81, 0.5) == pytest.approx(HELSTROM_G09)


def test_boundary_curve_shape():
    curve = boundary_curve(0.5, 101)
    assert curve.shape == (101, 2)
    assert np.all(curve >= 0.0) and np.all(curve <= 1.0)
    mid = 0.5 * (1.0 + math.sqrt(0.5))
    k = int(np.argmin(np.abs(curve[:, 1] - curve[:, 0])))
    assert curve[k, 0] == mid and curve[k, 1] == mid


def test_boundary_curve_lies_on_the_boundary():
    curve = boundary_curve(0.5, 41)
    for a, b in curve:
        if (b - a) ** 2 >= 0.5 - 1e-9:
            continue
        v = qd_criterion(FidelityPair(float(a), float(b)), 0.5)
        assert v.marginal


def test_boundary_curve_validation():
    with pytest.raises(ValueError):
        boundary_curve(0.0, 10)
    with pytest.raises(ValueError):
        boundary_curve(1.0, 10)
    with pytest.raises(ValueError):
        boundary_curve(0.5, 1)
