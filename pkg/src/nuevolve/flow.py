"""The auxiliary constraint flow that pins the transformed generator to K0.

Written in the reduced parametrization (varphi, phi, theta0), the conditions
Q(t) = 0, Y(t) = 0, Im W(t) = 0 on the transformed Hamiltonian coefficients
reduce to three coupled real ODEs:

    dvarphi/dt = 2|w| cos p_w - 2(|a|/phi) cos(p_a - varphi)
                 + D phi |b| cos(varphi + p_b)
    dphi/dt    = -2 phi |w| sin p_w + 2|a| sin(p_a - varphi)
                 - D phi^2 |b| sin(varphi + p_b)
    dtheta0/dt = (2 theta0 / phi) [ -2 phi |w| sin p_w + |a| sin(p_a - varphi)
                 + (chi - D phi^2) |b| sin(varphi + p_b) ]

with chi = -(D/2) phi^2 - theta0 and (|w|, p_w, ...) the polar coefficient
data.  The 1/phi terms carry |a| or |b| factors; a zero crossing of phi with
those factors alive means the trajectory left the decomposition's regular
cell and is reported as an error, never regularized.  theta0 obeys a linear
homogeneous equation, so its sign is conserved along any valid trajectory.

An equivalent lower-dimensional mode evolves the single complex coefficient
th_- through a Riccati equation; see riccati_rhs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import root

from .algebra import AlgebraKind
from .errors import NoStationaryPointError, SingularFlowError, StiffnessError
from .model import CoefficientSet, PolarCoeffs, eval_coeffs

_PHI_TOL = 1e-12

METHOD_ADAPTIVE = "adaptive-embedded-rk"
METHOD_FIXED_RK4 = "fixed-rk4"


@dataclass(frozen=True)
class FlowState:
    """One point of the constraint flow.

    phi must stay away from 0 whenever the coefficients keep the 1/phi terms
    alive; theta0 keeps the sign it had at t0.
    """

    t: float
    phi: float
    varphi: float
    theta_zero: float


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = math.inf
    method: str = METHOD_ADAPTIVE

    def __post_init__(self):
        if self.rtol < 1e-13:
            raise ValueError("rtol below 1e-13 is not supported")
        if self.atol < 1e-15:
            raise ValueError("atol below 1e-15 is not supported")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")
        if self.method not in (METHOD_ADAPTIVE, METHOD_FIXED_RK4):
            raise ValueError(f"unknown method {self.method!r}")


def flow_rhs(s: FlowState, polar: PolarCoeffs, kind: AlgebraKind):
    """(dvarphi, dphi, dtheta0) at one state.

    Raises SingularFlowError when a 1/phi term is needed with |phi| below
    tolerance.  Terms whose modulus prefactor vanishes are short-circuited so
    the alpha = beta = 0 family remains regular at phi = 0.
    """
    D = kind.d
    phi, v, th0 = s.phi, s.varphi, s.theta_zero
    w, pw = polar.mod_omega, polar.arg_omega
    a, pa = polar.mod_alpha, polar.arg_alpha
    b, pb = polar.mod_beta, polar.arg_beta

    ca, sa = math.cos(pa - v), math.sin(pa - v)
    cb, sb = math.cos(v + pb), math.sin(v + pb)
    cw, sw = math.cos(pw), math.sin(pw)

    needs_inv_phi = a != 0.0 or b != 0.0
    if needs_inv_phi and abs(phi) < _PHI_TOL:
        raise SingularFlowError(f"singular-flow at t={s.t}: phi reached 0", t=s.t)

    alpha_over_phi = (a / phi) if a != 0.0 else 0.0
    dvarphi = 2.0 * w * cw - 2.0 * alpha_over_phi * ca + D * phi * b * cb
    dphi = -2.0 * phi * w * sw + 2.0 * a * sa - D * phi**2 * b * sb

    chi = -(D / 2.0) * phi**2 - th0
    bracket = -2.0 * phi * w * sw
    if a != 0.0:
        bracket += a * sa
    if b != 0.0:
        bracket += (chi - D * phi**2) * b * sb
    if a == 0.0 and b == 0.0:
        dtheta0 = 2.0 * th0 * (-2.0 * w * sw)
    else:
        dtheta0 = (2.0 * th0 / phi) * bracket
    return dvarphi, dphi, dtheta0


class Trajectory:
    """Dense-output solution of the constraint flow on [t0, t1].

    Stores the solver nodes, the states at the nodes, the right-hand-side
    samples there, and an interpolant for queries at arbitrary interior
    times.
    """

    def __init__(self, ts, states, derivs, dense, interpolation_order: int):
        self.ts = np.asarray(ts, dtype=float)
        self.states = np.asarray(states, dtype=float)  # columns: varphi, phi, theta0
        self.derivs = np.asarray(derivs, dtype=float)
        self._dense = dense
        self.interpolation_order = interpolation_order

    @property
    def t0(self) -> float:
        return float(self.ts[0])

    @property
    def t1(self) -> float:
        return float(self.ts[-1])

    def _raw_at(self, t: float) -> np.ndarray:
        if t < self.t0 - 1e-12 or t > self.t1 + 1e-12:
            raise ValueError(f"t={t} outside trajectory span [{self.t0}, {self.t1}]")
        t = min(max(t, self.t0), self.t1)
        return np.asarray(self._dense(t), dtype=float)

    def state_at(self, t: float) -> FlowState:
        y = self._raw_at(t)
        return FlowState(t=float(t), phi=float(y[1]), varphi=float(y[0]), theta_zero=float(y[2]))


def _node_derivs(c, kind, ts, states):
    out = np.empty_like(states)
    for i, t in enumerate(ts):
        s = FlowState(t=t, phi=states[i, 1], varphi=states[i, 0], theta_zero=states[i, 2])
        _, polar = eval_coeffs(c, t)
        out[i] = flow_rhs(s, polar, kind)
    return out


def integrate_flow(
    c: CoefficientSet,
    kind: AlgebraKind,
    initial: FlowState,
    t1: float,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Integrate the constraint flow from ``initial`` up to t1.

    Adaptive mode uses an embedded Runge-Kutta pair with dense output; the
    fixed-RK4 mode (step = max_step) exists for convergence-order studies.
    Zero crossings of phi or theta0 terminate the run with a SingularFlowError
    carrying the crossing time; a solver stall raises StiffnessError.
    """
    cfg = cfg or IntegratorConfig()
    if t1 <= initial.t:
        raise ValueError("t1 must exceed the initial time")
    _, polar0 = eval_coeffs(c, initial.t)
    flow_rhs(initial, polar0, kind)  # validates the initial state

    def rhs(t, y):
        s = FlowState(t=t, phi=y[1], varphi=y[0], theta_zero=y[2])
        _, polar = eval_coeffs(c, t)
        return list(flow_rhs(s, polar, kind))

    y0 = [initial.varphi, initial.phi, initial.theta_zero]

    if cfg.method == METHOD_FIXED_RK4:
        return _integrate_fixed_rk4(c, kind, rhs, initial.t, y0, t1, cfg)

    def phi_crossing(t, y):
        return y[1]

    def theta0_crossing(t, y):
        return y[2]

    phi_crossing.terminal = True
    theta0_crossing.terminal = True
    # a run legitimately started at phi = 0 (ladder-free coefficients) must
    # not be killed by roundoff wobble around zero
    events = [theta0_crossing] if initial.phi == 0.0 else [phi_crossing, theta0_crossing]

    sol = solve_ivp(
        rhs,
        (initial.t, t1),
        y0,
        method="DOP853",
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_step=cfg.max_step,
        dense_output=True,
        events=events,
    )
    if sol.status == 1:
        t_cross = min(float(te[0]) for te in sol.t_events if te.size)
        raise SingularFlowError(
            f"singular-flow at t={t_cross}: phi or theta0 crossed zero", t=t_cross
        )
    if sol.status != 0:
        raise StiffnessError(f"flow integration stalled: {sol.message}")

    states = sol.y.T
    derivs = _node_derivs(c, kind, sol.t, states)
    return Trajectory(sol.t, states, derivs, sol.sol, interpolation_order=7)


def _integrate_fixed_rk4(c, kind, rhs, t0, y0, t1, cfg):
    if not math.isfinite(cfg.max_step):
        raise ValueError("fixed-rk4 requires a finite max_step as the step size")
    nsteps = max(1, int(math.ceil((t1 - t0) / cfg.max_step)))
    h = (t1 - t0) / nsteps
    ts = [t0]
    ys = [np.asarray(y0, dtype=float)]
    y = ys[0]
    t = t0
    sign_phi, sign_th0 = np.sign(y[1]), np.sign(y[2])
    for _ in range(nsteps):
        k1 = np.asarray(rhs(t, y))
        k2 = np.asarray(rhs(t + h / 2, y + h / 2 * k1))
        k3 = np.asarray(rhs(t + h / 2, y + h / 2 * k2))
        k4 = np.asarray(rhs(t + h, y + h * k3))
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        if (sign_phi != 0 and np.sign(y[1]) not in (0.0, sign_phi)) or (
            sign_th0 != 0 and np.sign(y[2]) not in (0.0, sign_th0)
        ):
            raise SingularFlowError(
                f"singular-flow at t={t}: phi or theta0 crossed zero", t=t
            )
        ts.append(t)
        ys.append(y)
    ts = np.asarray(ts)
    states = np.asarray(ys)
    derivs = _node_derivs(c, kind, ts, states)
    dense = CubicHermiteSpline(ts, states, derivs, axis=0)
    return Trajectory(ts, states, derivs, dense, interpolation_order=3)


def _values_are_real(values, tol=1e-12) -> bool:
    return all(abs(v.imag) <= tol * (1.0 + abs(v)) for v in values)


def _real_stationary_phi(w: float, a: float, b: float, D: int) -> float:
    """Smaller-|phi| root of D b phi^2 + 2 w phi - 2 a = 0 for real coefficients."""
    qa, qb, qc = D * b, 2.0 * w, -2.0 * a
    if abs(qa) < 1e-300:
        if abs(qb) < 1e-300:
            raise NoStationaryPointError("omega and beta both vanish; no stationary point")
        return -qc / qb
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0:
        raise NoStationaryPointError(
            "stationary quadratic has no real root (broken real-spectrum regime)"
        )
    sq = math.sqrt(disc)
    r1 = (-qb + sq) / (2.0 * qa)
    r2 = (-qb - sq) / (2.0 * qa)
    return r1 if abs(r1) <= abs(r2) else r2


def _stationary_theta_zero(phi, varphi, omega, alpha, beta, D):
    """theta0 making the static K+ coefficient vanish at the stationary point.

    Solves beta chi^2 + omega th_+ chi - (D/2) alpha th_+^2 = 0 for chi and
    keeps the root giving a real, nonvanishing theta0.
    """
    thp = -phi * np.exp(-1j * varphi)
    roots = np.roots([beta, omega * thp, -(D / 2.0) * alpha * thp**2])
    candidates = []
    for chi in np.atleast_1d(roots):
        th0 = -(D / 2.0) * phi**2 - chi
        if abs(th0.imag) <= 1e-9 * (1.0 + abs(th0)) and abs(th0.real) > 1e-10:
            candidates.append(float(th0.real))
    if not candidates:
        raise NoStationaryPointError(
            "no real nonvanishing theta0 makes the static K+ coefficient vanish"
        )
    return max(candidates, key=abs)


def stationary_state(polar: PolarCoeffs, kind: AlgebraKind, t: float = 0.0) -> FlowState:
    """A fixed point of the constraint flow for the coefficients at one instant.

    For all-real coefficients this is varphi = 0 and the smaller-|phi| root of
    D beta phi^2 + 2 omega phi - 2 alpha = 0; for complex coefficients the
    2D system (dphi, dvarphi) = 0 is solved numerically.  theta0 is then fixed
    so the static K+ coefficient of the transformed Hamiltonian vanishes.
    Raises NoStationaryPointError when no admissible point exists, in which
    case explicit initial conditions must be supplied.
    """
    D = kind.d
    omega = polar.mod_omega * np.exp(1j * polar.arg_omega)
    alpha = polar.mod_alpha * np.exp(1j * polar.arg_alpha)
    beta = polar.mod_beta * np.exp(1j * polar.arg_beta)

    if polar.mod_alpha == 0.0 and polar.mod_beta == 0.0:
        raise NoStationaryPointError(
            "alpha = beta = 0 is degenerate; supply explicit initial conditions"
        )

    real_case = _values_are_real((omega, alpha, beta))
    if real_case:
        phi = _real_stationary_phi(omega.real, alpha.real, beta.real, D)
        if abs(phi) < _PHI_TOL:
            raise NoStationaryPointError("stationary phi vanishes (alpha = 0 degeneracy)")
        varphi = 0.0
    else:
        phi, varphi = _complex_stationary(polar, kind)

    th0 = _stationary_theta_zero(phi, varphi, omega, alpha, beta, D)
    state = FlowState(t=t, phi=float(phi), varphi=float(varphi), theta_zero=th0)
    if not real_case:
        # the theta0 equation must also rest at this point; for real
        # coefficients that is automatic, for complex ones it is a genuine
        # extra condition
        rates = flow_rhs(state, polar, kind)
        if max(abs(r) for r in rates) > 1e-8:
            raise NoStationaryPointError(
                "candidate point does not still the theta0 equation; supply explicit "
                "initial conditions"
            )
    return state


def _complex_stationary(polar: PolarCoeffs, kind: AlgebraKind):
    def system(x):
        s = FlowState(t=0.0, phi=x[0], varphi=x[1], theta_zero=1.0)
        try:
            dv, dphi, _ = flow_rhs(s, polar, kind)
        except SingularFlowError:
            return [1e6, 1e6]
        return [dphi, x[0] * dv]

    guesses = []
    try:
        phi0 = _real_stationary_phi(polar.mod_omega, polar.mod_alpha, polar.mod_beta, kind.d)
    except NoStationaryPointError:
        phi0 = polar.mod_alpha / max(polar.mod_omega, 1e-3)
    for v0 in (polar.arg_alpha, polar.arg_alpha + np.pi, 0.0):
        guesses.append((phi0, v0))
        guesses.append((-phi0, v0))
    for g in guesses:
        if abs(g[0]) < _PHI_TOL:
            continue
        sol = root(system, g, tol=1e-14)
        if sol.success and np.max(np.abs(system(sol.x))) < 1e-10 and abs(sol.x[0]) > _PHI_TOL:
            varphi = float(np.angle(np.exp(1j * sol.x[1])))
            return float(sol.x[0]), varphi
    raise NoStationaryPointError("no stationary point found for complex coefficients")


def riccati_rhs(theta_minus: complex, coeffs, kind: AlgebraKind) -> complex:
    """Right-hand side of the single-coefficient constraint mode.

    Cancelling the transformed K- coefficient alone gives
    dth_-/dt = 2i [ omega th_- + alpha - (D/2) beta th_-^2 ]; the solution
    maps back onto (phi, varphi) through th_- = -phi exp(+i varphi).
    """
    omega, alpha, beta = coeffs
    D = kind.d
    return 2j * (omega * theta_minus + alpha - (D / 2.0) * beta * theta_minus**2)


def integrate_riccati(
    c: CoefficientSet,
    kind: AlgebraKind,
    theta_minus0: complex,
    t0: float,
    t1: float,
    cfg: IntegratorConfig | None = None,
):
    """Integrate the Riccati constraint mode; returns the scipy solution object."""
    cfg = cfg or IntegratorConfig()

    def rhs(t, y):
        values, _ = eval_coeffs(c, t)
        return [riccati_rhs(y[0], values, kind)]

    sol = solve_ivp(
        rhs,
        (t0, t1),
        np.asarray([theta_minus0], dtype=complex),
        method="DOP853",
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_step=cfg.max_step,
        dense_output=True,
    )
    if sol.status != 0:
        raise StiffnessError(f"riccati integration stalled: {sol.message}")
    return sol
