"""Closed-form evolving states, the phase law, and the metric inner product.

A certified constraint flow turns the transformed Hamiltonian into
2 Re W(t) K0, so the transformed-frame states only accumulate the phase
integral I(t) = int_0^t 2 Re W dt'.  Undoing the transformation gives the
closed-form solutions of the original problem,

    psi_n(t) = exp(sigma i lambda_n I(t)) V^-1(t) e_n ,

with e_n the K0 eigenvector of eigenvalue lambda_n and sigma a global sign
convention.  The naive norm <psi|psi> drifts (the evolution is not unitary);
the conserved object is the metric inner product <psi| V'V |psi>, which the
oracle-facing checks monitor.

The sign sigma defaults to -1; sign_convention_audit picks it empirically by
minimizing the Schrodinger residual of the assembled solution, which settles
the convention without trusting any printed sign.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .algebra import AlgebraKind, Representation
from .decomposition import invert_group_element
from .errors import SingularDecompositionError
from .flow import Trajectory
from .model import CoefficientSet, eval_coeffs, h_matrix
from .transform import coeffs_along, gauss_params_at, re_w

_GL_NODES, _GL_WEIGHTS = leggauss(7)


@dataclass(frozen=True)
class EigenIndex:
    """Index n of a K0 eigenvector together with its eigenvalue lambda_n.

    n is a Fock level for su(1,1) and a magnetic number (half-integer for
    half-integer spin) for su(2).
    """

    n: float
    lambda_n: float


@dataclass(frozen=True)
class StateVector:
    """Complex amplitude vector in the representation basis at one time."""

    amplitudes: np.ndarray
    t: float

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def eigen_index(rep: Representation, n: float) -> EigenIndex:
    """Validated EigenIndex for representation basis index n.

    su(1,1): Fock level n >= 0 with lambda_n = (n + 1/2)/2.
    su(2): magnetic number n in {-j..j} with lambda_n = n.
    """
    if rep.kind is AlgebraKind.SU11:
        if n != int(n) or not (0 <= n < rep.dim):
            raise ValueError(f"index {n} out of range for cutoff {rep.dim}")
        return EigenIndex(n=int(n), lambda_n=(n + 0.5) / 2.0)
    j = rep.label
    if not (-j <= n <= j and abs((j - n) - round(j - n)) < 1e-9):
        raise ValueError(f"index {n} out of range for spin j={j}")
    return EigenIndex(n=n, lambda_n=float(n))


def basis_position(rep: Representation, idx: EigenIndex) -> int:
    """Row of the basis vector carrying idx in the construction ordering."""
    if rep.kind is AlgebraKind.SU11:
        return idx.n
    return int(round(rep.label - idx.n))


def basis_vector(rep: Representation, idx: EigenIndex) -> np.ndarray:
    e = np.zeros(rep.dim, dtype=complex)
    e[basis_position(rep, idx)] = 1.0
    return e


def _gl_panel(f, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * sum(w * f(mid + half * x) for x, w in zip(_GL_NODES, _GL_WEIGHTS))


class PhaseLaw:
    """Cumulative phase integral I(t) = int 2 Re W dt' along a trajectory.

    Node values are accumulated with Gauss-Legendre panels on the flow's
    dense output, sharing its node structure so no second error budget
    appears; value() resolves interior times with a partial panel.
    """

    def __init__(self, traj: Trajectory, c: CoefficientSet, kind: AlgebraKind, sigma: int = -1):
        if sigma not in (-1, +1):
            raise ValueError("sigma must be +1 or -1")
        self.sigma = sigma
        self._traj = traj
        self._c = c
        self._kind = kind
        self.ts = traj.ts.copy()
        cum = np.zeros(len(self.ts))
        for i in range(1, len(self.ts)):
            cum[i] = cum[i - 1] + _gl_panel(
                self._integrand, float(self.ts[i - 1]), float(self.ts[i])
            )
        self.cumulative = cum

    def _integrand(self, t: float) -> float:
        _, polar = eval_coeffs(self._c, t)
        return 2.0 * re_w(self._traj.state_at(t), polar, self._kind)

    def value(self, t: float) -> float:
        """I(t) for t inside the trajectory span."""
        if t < self.ts[0] - 1e-12 or t > self.ts[-1] + 1e-12:
            raise ValueError(f"t={t} outside phase-law span")
        t = min(max(t, self.ts[0]), self.ts[-1])
        k = bisect.bisect_right(self.ts, t) - 1
        k = min(max(k, 0), len(self.ts) - 2)
        base = self.cumulative[k]
        if t > self.ts[k]:
            base = base + _gl_panel(self._integrand, float(self.ts[k]), t)
        return float(base)


def phase_integral(
    traj: Trajectory, c: CoefficientSet, kind: AlgebraKind, sigma: int = -1
) -> PhaseLaw:
    """Phase law for a certified trajectory (sigma defaults to -1)."""
    return PhaseLaw(traj, c, kind, sigma=sigma)


def closed_form_state(
    idx: EigenIndex,
    t: float,
    traj: Trajectory,
    c: CoefficientSet,
    rep: Representation,
    phase: PhaseLaw | None = None,
    sigma: int | None = None,
) -> StateVector:
    """exp(sigma i lambda_n I(t)) V^-1(t) e_n at one time.

    Passing a precomputed PhaseLaw avoids re-accumulating the integral for
    repeated queries; sigma defaults to the phase law's convention.
    """
    if phase is None:
        phase = phase_integral(traj, c, rep.kind, sigma=-1 if sigma is None else sigma)
    sig = phase.sigma if sigma is None else sigma
    s = traj.state_at(t)
    try:
        vinv = invert_group_element(gauss_params_at(s, rep.kind), rep)
    except SingularDecompositionError as exc:
        raise SingularDecompositionError(f"{exc} (at t={t})") from exc
    amp = np.exp(sig * 1j * idx.lambda_n * phase.value(t)) * (vinv @ basis_vector(rep, idx))
    return StateVector(amplitudes=amp, t=float(t))


def _amps(x) -> np.ndarray:
    if isinstance(x, StateVector):
        return x.amplitudes
    return np.asarray(x, dtype=complex)


def metric_overlap(a, b, V: np.ndarray) -> complex:
    """<a| V'V |b>; with a = b this is the conserved metric norm."""
    va, vb = _amps(a), _amps(b)
    if va.shape != vb.shape or V.shape != (va.size, va.size):
        raise ValueError("dimension mismatch in metric_overlap")
    return complex(np.vdot(V @ va, V @ vb))


def _complex_w_integral(
    traj: Trajectory | None, c: CoefficientSet, kind: AlgebraKind, t0: float, t: float
) -> complex:
    """int_{t0}^{t} W dt' with the full complex W (constraints not applied).

    traj=None means the identity transformation, where W reduces to omega(t).
    """
    if traj is None:

        def f(tt):
            values, _ = eval_coeffs(c, tt)
            return values[0]

        edges = np.linspace(t0, t, 33)
    else:

        def f(tt):
            return coeffs_along(traj, c, kind, tt).W

        inner = traj.ts[(traj.ts > t0) & (traj.ts < t)]
        edges = np.concatenate(([t0], inner, [t]))
    total = 0.0 + 0.0j
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        total += half * sum(w * f(mid + half * x) for x, w in zip(_GL_NODES, _GL_WEIGHTS))
    return total


def naive_norm_drift(
    idx: EigenIndex,
    traj: Trajectory | None,
    c: CoefficientSet,
    rep: Representation,
    t: float,
    sigma: int = -1,
) -> float:
    """Norm ratio <phi_n(t)|phi_n(t)> / <phi_n(0)|phi_n(0)> in the transformed frame.

    The transformed-frame state is phi_n(t) = exp(sigma i lambda_n int W) e_n
    with the full complex W, so the ratio equals
    exp(-2 sigma lambda_n Im int W dt').  It is 1 exactly when Im W vanishes
    (certified runs) and quantifies the failure of naive norm preservation
    otherwise.
    """
    t0 = 0.0 if traj is None else traj.t0
    J = _complex_w_integral(traj, c, rep.kind, t0, t)
    return float(np.exp(-2.0 * sigma * idx.lambda_n * J.imag))


def schrodinger_residual(
    idx: EigenIndex,
    t: float,
    traj: Trajectory,
    c: CoefficientSet,
    rep: Representation,
    phase: PhaseLaw,
    sigma: int | None = None,
    h: float = 1e-3,
) -> float:
    """|| i dpsi/dt - H psi || / ||psi|| with fourth-order differenced dpsi/dt."""
    if t - 2 * h < traj.t0 or t + 2 * h > traj.t1:
        raise ValueError("t too close to the trajectory endpoints for differencing")

    def psi(tt):
        return closed_form_state(idx, tt, traj, c, rep, phase=phase, sigma=sigma).amplitudes

    dpsi = (-psi(t + 2 * h) + 8 * psi(t + h) - 8 * psi(t - h) + psi(t - 2 * h)) / (12.0 * h)
    p0 = psi(t)
    resid = 1j * dpsi - h_matrix(c, rep, t) @ p0
    return float(np.linalg.norm(resid) / np.linalg.norm(p0))


def sign_convention_audit(
    traj: Trajectory,
    c: CoefficientSet,
    rep: Representation,
    idx: EigenIndex | None = None,
    times=None,
) -> tuple[int, dict]:
    """Pick the phase sign by minimizing the Schrodinger residual.

    Returns (sigma, residuals) where residuals maps each candidate sign to
    its worst residual over the sampled times.  The winner must beat the
    loser decisively; a tie means the scenario cannot distinguish the signs
    (e.g. lambda_n = 0) and the default -1 is kept.
    """
    if idx is None:
        idx = _default_audit_index(rep)
    if times is None:
        span = traj.t1 - traj.t0
        times = traj.t0 + span * np.asarray([0.3, 0.5, 0.7])
    residuals = {}
    for sig in (-1, +1):
        phase = phase_integral(traj, c, rep.kind, sigma=sig)
        residuals[sig] = max(
            schrodinger_residual(idx, float(t), traj, c, rep, phase, sigma=sig) for t in times
        )
    if residuals[-1] <= residuals[+1]:
        return -1, residuals
    return +1, residuals


def _default_audit_index(rep: Representation) -> EigenIndex:
    if rep.kind is AlgebraKind.SU11:
        return eigen_index(rep, 0)
    # the m = j state has lambda != 0 for every spin
    return eigen_index(rep, rep.label)


def stacked_singular_min(states: list[StateVector]) -> float:
    """Smallest singular value of the matrix whose columns are the states.

    Bounded away from zero means the evolved set stayed linearly
    independent.
    """
    M = np.column_stack([s.amplitudes for s in states])
    return float(np.linalg.svd(M, compute_uv=False)[-1])
