import numpy as np
import pytest

from nuevolve import (
    AlgebraKind,
    FlowState,
    IntegratorConfig,
    NoStationaryPointError,
    SingularFlowError,
    eval_coeffs,
    flow_rhs,
    integrate_flow,
    integrate_riccati,
    riccati_rhs,
    stationary_state,
)
from nuevolve.flow import METHOD_FIXED_RK4
from tests.conftest import constant_coeffs

SU2, SU11 = AlgebraKind.SU2, AlgebraKind.SU11

SWANSON_PHI = 0.20871215252208003  # root of 0.2 phi^2 - phi + 0.2


def polar_of(omega, alpha, beta):
    _, polar = eval_coeffs(constant_coeffs(omega, alpha, beta), 0.0)
    return polar


def test_rhs_pure_omega():
    polar = polar_of(1.0, 0.0, 0.0)
    s = FlowState(t=0.0, phi=0.123, varphi=0.4, theta_zero=-0.8)
    assert flow_rhs(s, polar, SU11) == (2.0, 0.0, 0.0)


def test_rhs_swanson_fixed_point():
    polar = polar_of(1.0, 0.2, 0.2)
    s = FlowState(t=0.0, phi=SWANSON_PHI, varphi=0.0, theta_zero=0.7)
    dv, dphi, dth0 = flow_rhs(s, polar, SU11)
    assert abs(dv) < 1e-12 and abs(dphi) < 1e-12 and abs(dth0) < 1e-12


def test_rhs_real_case_reduction(rng):
    # with varphi = 0 and real coefficients the equations collapse to the
    # real-mu specialization termwise
    for _ in range(20):
        w, a, b = rng.uniform(0.2, 1.5), rng.uniform(0.01, 0.5), rng.uniform(0.01, 0.5)
        phi = rng.uniform(0.05, 0.8) * rng.choice([-1, 1])
        th0 = rng.uniform(0.1, 2.0) * rng.choice([-1, 1])
        for kind in (SU2, SU11):
            D = kind.d
            s = FlowState(t=0.0, phi=phi, varphi=0.0, theta_zero=th0)
            dv, dphi, dth0_ = flow_rhs(s, polar_of(w, a, b), kind)
            assert dv == pytest.approx(2 * w - 2 * a / phi + D * phi * b, rel=1e-12)
            assert dphi == pytest.approx(0.0, abs=1e-15)
            assert dth0_ == pytest.approx(0.0, abs=1e-15)


def test_rhs_singular_phi():
    polar = polar_of(1.0, 0.2, 0.2)
    with pytest.raises(SingularFlowError):
        flow_rhs(FlowState(t=1.5, phi=0.0, varphi=0.0, theta_zero=1.0), polar, SU11)


def test_rhs_phi_zero_allowed_without_ladder_terms():
    polar = polar_of(1.0, 0.0, 0.0)
    s = FlowState(t=0.0, phi=0.0, varphi=0.0, theta_zero=1.0)
    assert flow_rhs(s, polar, SU2) == (2.0, 0.0, 0.0)


def test_stationary_swanson():
    st = stationary_state(polar_of(1.0, 0.2, 0.2), SU11)
    assert st.phi == pytest.approx(SWANSON_PHI, abs=1e-8)
    assert st.varphi == 0.0
    # theta0 chosen so the static K+ coefficient vanishes: phi^2 - alpha/beta
    assert st.theta_zero == pytest.approx(SWANSON_PHI**2 - 1.0, rel=1e-10)


def test_stationary_su2():
    st = stationary_state(polar_of(1.0, 0.1, 0.1), SU2)
    assert st.phi == pytest.approx(0.09901951, abs=1e-8)
    assert st.varphi == 0.0


def test_stationary_degenerate_alpha_beta_zero():
    with pytest.raises(NoStationaryPointError):
        stationary_state(polar_of(1.0, 0.0, 0.0), SU11)


def test_stationary_broken_regime():
    # omega^2 - 4 alpha beta < 0 leaves no real root for D=-2
    with pytest.raises(NoStationaryPointError):
        stationary_state(polar_of(1.0, 0.5, 0.6), SU11)


def test_stationary_rhs_zero_complex_coeffs():
    # a genuinely complex stationary point found numerically
    polar = polar_of(1.0, 0.2 * np.exp(0.3j), 0.2 * np.exp(-0.3j))
    st = stationary_state(polar, SU11)
    dv, dphi, dth0 = flow_rhs(st, polar, SU11)
    assert max(abs(dv), abs(dphi), abs(dth0)) < 1e-9


def test_fixed_point_persistence(swanson_coeffs):
    st = stationary_state(polar_of(1.0, 0.2, 0.2), SU11)
    traj = integrate_flow(swanson_coeffs, SU11, st, 10.0, IntegratorConfig())
    traj2 = integrate_flow(
        swanson_coeffs, SU11, st, 10.0, IntegratorConfig(rtol=5e-11, atol=5e-13)
    )
    for t in np.linspace(0, 10, 21):
        s = traj.state_at(t)
        assert s.phi == pytest.approx(st.phi, abs=1e-9)
        assert s.varphi == pytest.approx(0.0, abs=1e-9)
        assert s.theta_zero == pytest.approx(st.theta_zero, abs=1e-9)
        s2 = traj2.state_at(t)
        assert s.phi == pytest.approx(s2.phi, abs=1e-9)


def test_varphi_linear_growth():
    c = constant_coeffs(1.0, 0.0, 0.0)
    init = FlowState(t=0.0, phi=0.3, varphi=0.1, theta_zero=1.0)
    traj = integrate_flow(c, SU2, init, 5.0)
    s = traj.state_at(5.0)
    assert s.varphi == pytest.approx(0.1 + 10.0, abs=1e-10)
    assert s.phi == pytest.approx(0.3, abs=1e-12)


def test_tolerance_halving_shrinks_run_differences(su2_drive_coeffs):
    # the gap between a run and its halved-tolerance twin shrinks as the
    # tolerance drops, the practical signature of a convergent adaptive scheme
    st = stationary_state(polar_of(1.0, 0.05, 0.05), SU2)

    def endpoint(rtol, atol):
        cfg = IntegratorConfig(rtol=rtol, atol=atol)
        s = integrate_flow(su2_drive_coeffs, SU2, st, 5.0, cfg).state_at(5.0)
        return np.array([s.varphi, s.phi, s.theta_zero])

    gap_coarse = np.abs(endpoint(1e-4, 1e-7) - endpoint(5e-5, 5e-8)).max()
    gap_fine = np.abs(endpoint(1e-8, 1e-11) - endpoint(5e-9, 5e-12)).max()
    assert gap_fine < gap_coarse


def test_fixed_rk4_convergence_order(su2_drive_coeffs):
    st = stationary_state(polar_of(1.0, 0.05, 0.05), SU2)
    ref = integrate_flow(
        su2_drive_coeffs, SU2, st, 2.0, IntegratorConfig(rtol=1e-13, atol=1e-15)
    ).state_at(2.0)

    def endpoint_err(h):
        cfg = IntegratorConfig(max_step=h, method=METHOD_FIXED_RK4)
        s = integrate_flow(su2_drive_coeffs, SU2, st, 2.0, cfg).state_at(2.0)
        return max(
            abs(s.phi - ref.phi), abs(s.varphi - ref.varphi), abs(s.theta_zero - ref.theta_zero)
        )

    # the step-halving order estimate climbs toward the method's order 4
    e1, e2, e3 = endpoint_err(0.1), endpoint_err(0.05), endpoint_err(0.025)
    assert np.log2(e2 / e3) >= 3.9
    assert np.log2(e2 / e3) >= np.log2(e1 / e2) - 0.05


def test_singular_flow_detected():
    # imaginary omega drives phi exponentially to zero
    c = constant_coeffs(2j, 0.1, 0.1)
    init = FlowState(t=0.0, phi=0.1, varphi=0.0, theta_zero=1.0)
    with pytest.raises(SingularFlowError) as excinfo:
        integrate_flow(c, SU11, init, 10.0)
    assert "singular-flow" in str(excinfo.value)


def test_theta_zero_sign_conserved(rng, su2_drive_coeffs):
    st = stationary_state(polar_of(1.0, 0.05, 0.05), SU2)
    traj = integrate_flow(su2_drive_coeffs, SU2, st, 5.0)
    signs = np.sign(traj.states[:, 2])
    assert np.all(signs == signs[0])


def test_trajectory_domain_guard(swanson_coeffs):
    st = stationary_state(polar_of(1.0, 0.2, 0.2), SU11)
    traj = integrate_flow(swanson_coeffs, SU11, st, 2.0)
    with pytest.raises(ValueError):
        traj.state_at(2.5)


def test_riccati_rhs_values():
    assert riccati_rhs(0.0, (1.0, 0.3, 0.1), SU11) == pytest.approx(2j * 0.3)
    # Swanson fixed point: th_- = -phi with real coefficients
    val = riccati_rhs(-SWANSON_PHI, (1.0, 0.2, 0.2), SU11)
    assert abs(val) < 1e-12
    # alpha = beta = 0: pure phase rotation, modulus conserved
    val = riccati_rhs(0.5 + 0.2j, (1.0, 0.0, 0.0), SU2)
    assert val == pytest.approx(2j * (0.5 + 0.2j))


def test_riccati_ladder_free_modulus_conserved():
    # real omega with alpha = beta = 0 rotates th_- without changing |th_-|
    c = constant_coeffs(1.0, 0.0, 0.0)
    sol = integrate_riccati(c, SU2, 0.5 + 0.2j, 0.0, 4.0)
    mods = [abs(sol.sol(t)[0]) for t in np.linspace(0, 4, 9)]
    assert np.abs(np.array(mods) - mods[0]).max() < 1e-10


def test_riccati_consistency_with_flow(su2_drive_coeffs):
    st = stationary_state(polar_of(1.0, 0.05, 0.05), SU2)
    traj = integrate_flow(su2_drive_coeffs, SU2, st, 5.0)
    th0 = -st.phi * np.exp(1j * st.varphi)
    sol = integrate_riccati(su2_drive_coeffs, SU2, th0, 0.0, 5.0)
    sign0 = np.sign(st.phi)
    for t in np.linspace(0.3, 5.0, 12):
        tm = sol.sol(t)[0]
        phi_r = sign0 * abs(tm)
        varphi_r = np.angle(-tm / phi_r)
        s = traj.state_at(t)
        assert abs(phi_r - s.phi) < 1e-7
        assert abs(np.angle(np.exp(1j * (varphi_r - s.varphi)))) < 1e-7


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(rtol=1e-14)
    with pytest.raises(ValueError):
        IntegratorConfig(atol=1e-16)
    with pytest.raises(ValueError):
        IntegratorConfig(max_step=-1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(method="leapfrog")
