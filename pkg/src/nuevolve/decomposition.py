"""Triangular (Gauss) disentangling of non-unitary group elements.

A group element generated as

    V = exp(2 eps K0 + 2 mu K- + 2 mu* K+),   eps real, mu complex,

factors into the ordered product

    V = exp(th_+ K+) . exp(ln th_0 K0) . exp(th_- K-)

wherever th_0 stays away from zero (the regular cell of the decomposition).
The factor coefficients are functions of theta^2 = eps^2 + 2 D |mu|^2 only
through cosh(theta) and sinh(theta)/theta, both entire in theta^2, so a
negative theta^2 (possible for D = -2) needs no square-root branch choice.

A reduced three-real-parameter form (phi, varphi, chi) with

    th_+- = -phi exp(-+ i varphi),    th_0 = -(D/2) phi^2 - chi

is what the constraint flow evolves.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .algebra import AlgebraKind, Representation
from .errors import SingularDecompositionError

# Regular-cell guard on cosh(theta) - eps*sinh(theta)/theta.
_SINGULAR_TOL = 1e-13


@dataclass(frozen=True)
class CanonicalParams:
    """Exponent data (eps, mu) of the canonical group element."""

    eps: float
    mu: complex

    def __post_init__(self):
        if not (np.isfinite(self.eps) and np.isfinite(abs(self.mu))):
            raise ValueError("eps and mu must be finite")


@dataclass(frozen=True)
class GaussParams:
    """Coefficients of the ordered triangular factorization.

    ``theta`` is the auxiliary root sqrt(eps^2 + 2 D |mu|^2) when the
    parameters came from a canonical element, or None when reconstructed from
    the reduced form (where no root is defined).
    """

    theta_plus: complex
    theta_zero: complex
    theta_minus: complex
    theta: complex | None = None


@dataclass(frozen=True)
class ReducedParams:
    """Reduced parametrization (phi, varphi, chi) plus the modulus of z = 2 mu / eps.

    phi is kept signed exactly as the decomposition defines it (negative for
    small eps > 0 and mu -> 0); varphi is always arg(mu).  z_mod is infinite
    for eps = 0 with mu != 0.
    """

    phi: float
    varphi: float
    chi: float
    z_mod: float


def _cosh_like(w: float) -> float:
    """cosh(sqrt(w)) as an entire function of real w."""
    if abs(w) < 1e-5:
        return 1.0 + w / 2.0 + w * w / 24.0
    r = np.sqrt(abs(w))
    return float(np.cosh(r)) if w > 0 else float(np.cos(r))


def _sinc_like(w: float) -> float:
    """sinh(sqrt(w))/sqrt(w) as an entire function of real w."""
    if abs(w) < 1e-5:
        return 1.0 + w / 6.0 + w * w / 120.0
    r = np.sqrt(abs(w))
    return float(np.sinh(r) / r) if w > 0 else float(np.sin(r) / r)


def _cell_quantities(p: CanonicalParams, kind: AlgebraKind):
    """(c, s, den, theta2) with den = cosh(theta) - eps*sinh(theta)/theta."""
    theta2 = p.eps**2 + 2.0 * kind.d * abs(p.mu) ** 2
    c = _cosh_like(theta2)
    s = _sinc_like(theta2)
    den = c - p.eps * s
    if abs(den) < _SINGULAR_TOL:
        raise SingularDecompositionError(
            f"group element leaves the Gauss cell (eps={p.eps}, mu={p.mu}, D={kind.d})"
        )
    return c, s, den, theta2


def _theta_root(theta2: float) -> complex:
    if theta2 >= 0.0:
        return complex(np.sqrt(theta2))
    return 1j * np.sqrt(-theta2)


def gauss_decompose(p: CanonicalParams, kind: AlgebraKind) -> GaussParams:
    """Factor coefficients (th_+, th_0, th_-) of the canonical element.

    th_0 = (cosh th - (eps/th) sinh th)^-2 and
    th_+- = 2 mu^(*) sinh th / (th cosh th - eps sinh th), evaluated through
    the even-analytic cosh/sinc forms.  Raises SingularDecompositionError on
    the cell boundary.
    """
    c, s, den, theta2 = _cell_quantities(p, kind)
    return GaussParams(
        theta_plus=2.0 * np.conj(p.mu) * s / den,
        theta_zero=complex(den**-2.0),
        theta_minus=2.0 * p.mu * s / den,
        theta=_theta_root(theta2),
    )


def reduce_params(p: CanonicalParams, kind: AlgebraKind) -> ReducedParams:
    """Reduced parameters (phi, varphi, chi, |z|) of the canonical element.

    phi and chi are computed from the Gauss form, which stays regular at
    eps = 0 where z = 2 mu / eps is undefined.
    """
    c, s, den, _ = _cell_quantities(p, kind)
    phi = -2.0 * abs(p.mu) * s / den
    varphi = float(np.angle(p.mu)) if p.mu != 0 else 0.0
    chi = -(c + p.eps * s) / den
    if p.eps != 0.0:
        z_mod = abs(2.0 * p.mu / p.eps)
    else:
        z_mod = 0.0 if p.mu == 0 else np.inf
    return ReducedParams(phi=float(phi), varphi=varphi, chi=float(chi), z_mod=float(z_mod))


def gauss_from_reduced(r: ReducedParams, kind: AlgebraKind) -> GaussParams:
    """Rebuild Gauss coefficients from the reduced parametrization."""
    phase = np.exp(1j * r.varphi)
    return GaussParams(
        theta_plus=-r.phi / phase,
        theta_zero=complex(-(kind.d / 2.0) * r.phi**2 - r.chi),
        theta_minus=-r.phi * phase,
        theta=None,
    )


def fold_reduced(r: ReducedParams) -> ReducedParams:
    """The equivalent reduced parameters with the sign of phi flipped.

    (phi, varphi) and (-phi, varphi + pi) generate identical Gauss
    coefficients; this helper exposes the folding without ever applying it
    silently.
    """
    varphi = r.varphi + np.pi
    if varphi > np.pi:
        varphi -= 2.0 * np.pi
    return ReducedParams(phi=-r.phi, varphi=float(varphi), chi=r.chi, z_mod=r.z_mod)


def continuous_log(values) -> np.ndarray:
    """Logarithms of a complex sequence with the argument unwrapped.

    Use along trajectories where th_0 may wander across the negative real
    axis; pointwise principal logs would put spurious jumps into V(t).
    """
    values = np.asarray(values, dtype=complex)
    mags = np.abs(values)
    if np.any(mags == 0.0):
        raise SingularDecompositionError("cannot take log of a vanishing theta_zero")
    args = np.unwrap(np.angle(values))
    return np.log(mags) + 1j * args


def _check_regular(g: GaussParams):
    if abs(g.theta_zero) < _SINGULAR_TOL:
        raise SingularDecompositionError("theta_zero vanished; decomposition is singular")


def build_group_element(
    g: GaussParams, rep: Representation, log_theta_zero: complex | None = None
) -> np.ndarray:
    """Dense matrix of exp(th_+ K+) exp(ln th_0 K0) exp(th_- K-).

    The middle factor is evaluated elementwise on K0's diagonal.  The log of
    th_0 defaults to the principal branch; callers tracking a trajectory can
    pass an explicitly unwrapped ``log_theta_zero`` instead.
    """
    _check_regular(g)
    ln0 = cmath.log(g.theta_zero) if log_theta_zero is None else log_theta_zero
    mid = np.diag(np.exp(ln0 * rep.k0_diagonal()))
    return expm(g.theta_plus * rep.Kplus) @ mid @ expm(g.theta_minus * rep.Kminus)


def invert_group_element(
    g: GaussParams, rep: Representation, log_theta_zero: complex | None = None
) -> np.ndarray:
    """Dense matrix of the inverse, exp(-th_- K-) exp(-ln th_0 K0) exp(-th_+ K+)."""
    _check_regular(g)
    ln0 = cmath.log(g.theta_zero) if log_theta_zero is None else log_theta_zero
    mid = np.diag(np.exp(-ln0 * rep.k0_diagonal()))
    return expm(-g.theta_minus * rep.Kminus) @ mid @ expm(-g.theta_plus * rep.Kplus)


def canonical_exponential(p: CanonicalParams, rep: Representation) -> np.ndarray:
    """Direct dense exponential of 2 eps K0 + 2 mu K- + 2 mu* K+.

    Serves as the oracle for gauss_decompose + build_group_element on su(2)
    and on truncation-clean su(1,1) parameter ranges; see
    oracle.boson_exponential_columns for the truncation-margin variant.
    """
    X = 2.0 * p.eps * rep.K0 + 2.0 * p.mu * rep.Kminus + 2.0 * np.conj(p.mu) * rep.Kplus
    return expm(X)
