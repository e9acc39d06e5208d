"""Independent brute-force verification of the closed-form machinery.

Everything here deliberately avoids the flow/decomposition code paths: the
propagator consumes only the Hamiltonian matrix, the spectrum check only a
dense eigensolver, and the boson-exponential oracle only the generator power
series.  Agreement between these routes and the closed-form pipeline is the
package's end-to-end evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .algebra import AlgebraKind, Representation, build_su11_boson_rep
from .decomposition import CanonicalParams
from .errors import StiffnessError, TruncationError
from .flow import IntegratorConfig
from .model import CoefficientSet, h_matrix
from .solution import StateVector

# Defaults for the reference propagator (tighter than the flow defaults).
ORACLE_RTOL = 1e-11
ORACLE_ATOL = 1e-13

# Truncation guards for su(1,1): initial support must sit in the lower half
# of the Fock ladder, and the top two levels must stay essentially empty.
_SUPPORT_TOL = 1e-8
_LEAKAGE_TOL = 1e-8


@dataclass(frozen=True)
class PropagationResult:
    """Reference solution samples plus integrator bookkeeping.

    ``local_error_bound`` is the per-step error target the adaptive scheme
    enforced (atol + rtol * max sampled norm); ``truncation_contaminated``
    is set when the leakage monitor saw the top two Fock levels exceed their
    mass threshold at any sample.
    """

    times: np.ndarray
    states: list[StateVector]
    n_steps: int
    n_rhs_evaluations: int
    local_error_bound: float
    max_leakage: float
    truncation_contaminated: bool


def propagate_direct(
    c: CoefficientSet,
    rep: Representation,
    psi0,
    times,
    cfg: IntegratorConfig | None = None,
) -> PropagationResult:
    """Adaptive dense integration of i dpsi/dt = H(t) psi sampled at ``times``."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be a strictly increasing 1-D sequence")
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (rep.dim,):
        raise ValueError(f"psi0 has shape {psi0.shape}, expected ({rep.dim},)")

    if rep.kind is AlgebraKind.SU11:
        total = float(np.vdot(psi0, psi0).real)
        tail = float(np.sum(np.abs(psi0[rep.dim // 2 :]) ** 2))
        if total == 0.0 or tail > _SUPPORT_TOL * total:
            raise TruncationError(
                "initial state support extends past the lower half of the Fock ladder "
                f"(tail fraction {tail / max(total, 1e-300):.2e})"
            )

    if cfg is None:
        cfg = IntegratorConfig(rtol=ORACLE_RTOL, atol=ORACLE_ATOL)

    def rhs(t, y):
        return -1j * (h_matrix(c, rep, t) @ y)

    sol = solve_ivp(
        rhs,
        (float(times[0]), float(times[-1])),
        psi0,
        method="DOP853",
        t_eval=times,
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_step=cfg.max_step,
        dense_output=True,
    )
    if sol.status != 0:
        raise StiffnessError(f"oracle propagation stalled: {sol.message}")

    states = [StateVector(amplitudes=sol.y[:, k].copy(), t=float(t)) for k, t in enumerate(times)]

    max_leak = 0.0
    if rep.kind is AlgebraKind.SU11:
        for sv in states:
            total = float(np.vdot(sv.amplitudes, sv.amplitudes).real)
            top = float(np.sum(np.abs(sv.amplitudes[-2:]) ** 2))
            if total > 0:
                max_leak = max(max_leak, top / total)

    max_norm = max(sv.norm() for sv in states)
    return PropagationResult(
        times=times,
        states=states,
        n_steps=len(sol.sol.ts) - 1,
        n_rhs_evaluations=int(sol.nfev),
        local_error_bound=cfg.atol + cfg.rtol * max_norm,
        max_leakage=max_leak,
        truncation_contaminated=max_leak > _LEAKAGE_TOL,
    )


def state_error(a, b) -> float:
    """||a - b||_2 / max(||a||, ||b||), global phase included.

    Both sides of a comparison solve the same linear initial-value problem,
    so no phase alignment is performed.
    """
    va = a.amplitudes if isinstance(a, StateVector) else np.asarray(a, dtype=complex)
    vb = b.amplitudes if isinstance(b, StateVector) else np.asarray(b, dtype=complex)
    if va.shape != vb.shape:
        raise ValueError("state dimensions differ")
    na, nb = np.linalg.norm(va), np.linalg.norm(vb)
    if na == 0.0 and nb == 0.0:
        raise ValueError("state_error is undefined for two zero vectors")
    return float(np.linalg.norm(va - vb) / max(na, nb))


def swanson_spectrum(omega: complex, alpha: complex, beta: complex, cutoff: int):
    """Eigenvalues of the constant quadratic-boson Hamiltonian.

    Returns (eigenvalues, trusted) with eigenvalues sorted by real part (then
    imaginary part) and a boolean mask marking the leading cutoff/2 values,
    the only ones the truncation leaves meaningful.
    """
    if cutoff < 20:
        raise ValueError("cutoff must be at least 20 for a meaningful spectrum")
    rep = build_su11_boson_rep(cutoff)
    H = 2.0 * omega * rep.K0 + 2.0 * alpha * rep.Kminus + 2.0 * beta * rep.Kplus
    vals = np.linalg.eigvals(H)
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    trusted = np.zeros(cutoff, dtype=bool)
    trusted[: cutoff // 2] = True
    return vals, trusted


def boson_exponential_columns(
    p: CanonicalParams, cutoff: int, ncols: int, max_terms: int | None = None
):
    """Leading columns of the boson-realization exponential, with truncation margin.

    Sums the generator power series exp(X) e_j, j < ncols, inside an enlarged
    internal cutoff so that no path of the retained series length can feel
    the edge; the result restricted to ``cutoff`` rows is then an exact
    partial sum of the infinite-dimensional series.  Returns
    (block, verifiable) where ``verifiable`` is False when intermediate terms
    overwhelm the final scale (float64 cancellation) or the tail had not
    converged, both of which happen for strong parameters where the
    entrywise exponential series stops being numerically meaningful.
    """
    m2 = 2.0 * abs(p.mu)
    if max_terms is None:
        if m2 < 1e-6:
            max_terms = 40
        else:
            q = min(m2, 0.9)
            max_terms = max(60, int(math.ceil(math.log(1e-16) / math.log(q))) + 60)
    n_int = cutoff + 2 * max_terms + 4

    # X is banded (main diagonal plus the +-2 offsets), so apply it with
    # shifted slices; the dense matrix would dominate the runtime budget.
    n = np.arange(n_int)
    diag = 2.0 * p.eps * (n + 0.5) / 2.0
    ladder = 0.5 * np.sqrt(n[2:] * (n[2:] - 1.0))  # level m -> m-2 amplitude
    up = 2.0 * p.mu * ladder  # row m-2 takes column m
    down = 2.0 * np.conj(p.mu) * ladder  # row m takes column m-2

    def apply_x(v):
        out = diag[:, None] * v
        out[:-2] += up[:, None] * v[2:]
        out[2:] += down[:, None] * v[:-2]
        return out

    block = np.zeros((n_int, ncols), dtype=complex)
    for j in range(ncols):
        block[j, j] = 1.0
    term = block.copy()
    out = block.copy()
    max_term = 1.0
    for k in range(1, max_terms + 1):
        term = apply_x(term) / k
        out += term
        max_term = max(max_term, float(np.abs(term[:cutoff]).max(initial=0.0)))
    scale = float(np.abs(out[:cutoff]).max(initial=0.0))
    tail = float(np.abs(term[:cutoff]).max(initial=0.0))
    verifiable = (
        np.all(np.isfinite(out[:cutoff]))
        and scale > 0.0
        and max_term / scale < 1e4
        and tail / scale < 1e-13
    )
    return out[:cutoff], bool(verifiable)
