"""Time-dependent coefficient profiles and the model Hamiltonian matrix.

The Hamiltonian family is

    H(t) = 2 omega(t) K0 + 2 alpha(t) K- + 2 beta(t) K+,

with three arbitrary complex coefficient functions.  Users specify the
coefficients as complex re/im profiles (constant, sinusoid, or an
interpolated table read from CSV); the constraint flow consumes them in polar
form, which is computed on demand.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .algebra import Representation
from .errors import ProfileDomainError


@dataclass(frozen=True)
class ConstantProfile:
    """Time-independent complex coefficient."""

    value: complex

    def __call__(self, t: float) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class SinusoidProfile:
    """offset + amplitude * sin(frequency * t + phase0), complex amplitude/offset."""

    amplitude: complex
    frequency: float
    phase0: float = 0.0
    offset: complex = 0.0 + 0.0j

    def __call__(self, t: float) -> complex:
        return complex(self.offset) + complex(self.amplitude) * np.sin(
            self.frequency * t + self.phase0
        )


class TableProfile:
    """Coefficient interpolated from (t, re, im) samples.

    Sample times must be strictly increasing; evaluation outside the sampled
    range raises ProfileDomainError.  Interpolation order is "cubic" (default,
    needed for smooth flow right-hand sides) or "linear" for non-smooth data.
    """

    def __init__(self, ts, values, order: str = "cubic"):
        ts = np.asarray(ts, dtype=float)
        values = np.asarray(values, dtype=complex)
        if ts.ndim != 1 or ts.size < 2:
            raise ValueError("table profile needs at least two samples")
        if values.shape != ts.shape:
            raise ValueError("table times and values must have matching shapes")
        if not np.all(np.diff(ts) > 0):
            raise ValueError("table sample times must be strictly increasing")
        if order not in ("linear", "cubic"):
            raise ValueError(f"unknown interpolation order {order!r}")
        if order == "cubic" and ts.size < 4:
            order = "linear"
        self.ts = ts
        self.values = values
        self.order = order
        if order == "cubic":
            self._re = CubicSpline(ts, values.real)
            self._im = CubicSpline(ts, values.imag)
        else:
            self._re = self._im = None

    @classmethod
    def from_csv(cls, path, order: str = "cubic") -> "TableProfile":
        """Read samples from a CSV file with header ``t,re,im``."""
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["t", "re", "im"]:
                raise ValueError(f"{path}: expected CSV header 't,re,im'")
            rows = [(float(r[0]), float(r[1]), float(r[2])) for r in reader if r]
        ts = [r[0] for r in rows]
        vals = [complex(r[1], r[2]) for r in rows]
        return cls(ts, vals, order=order)

    def __call__(self, t: float) -> complex:
        if t < self.ts[0] - 1e-12 or t > self.ts[-1] + 1e-12:
            raise ProfileDomainError(
                f"t={t} outside table domain [{self.ts[0]}, {self.ts[-1]}]"
            )
        t = min(max(t, self.ts[0]), self.ts[-1])
        if self.order == "cubic":
            return complex(self._re(t), self._im(t))
        return complex(
            np.interp(t, self.ts, self.values.real),
            np.interp(t, self.ts, self.values.imag),
        )


TimeProfile = ConstantProfile | SinusoidProfile | TableProfile


@dataclass(frozen=True)
class CoefficientSet:
    """The three coefficient functions omega(t), alpha(t), beta(t)."""

    omega: TimeProfile
    alpha: TimeProfile
    beta: TimeProfile


@dataclass(frozen=True)
class PolarCoeffs:
    """Polar form of the coefficient triple at one instant.

    Moduli are non-negative and arguments lie in (-pi, pi]; a vanishing
    modulus carries argument 0.
    """

    mod_omega: float
    arg_omega: float
    mod_alpha: float
    arg_alpha: float
    mod_beta: float
    arg_beta: float

    @classmethod
    def from_values(cls, omega: complex, alpha: complex, beta: complex) -> "PolarCoeffs":
        return cls(*_polar(omega), *_polar(alpha), *_polar(beta))


def _polar(z: complex) -> tuple[float, float]:
    mod = abs(z)
    if mod == 0.0:
        return 0.0, 0.0
    return mod, float(np.angle(z))


def eval_coeffs(c: CoefficientSet, t: float):
    """Evaluate the coefficient triple at time t.

    Returns ``((omega, alpha, beta), PolarCoeffs)``.  Raises
    ProfileDomainError outside a table profile's domain and ValueError if any
    profile returns a non-finite value.
    """
    values = (c.omega(t), c.alpha(t), c.beta(t))
    if not all(np.isfinite(v.real) and np.isfinite(v.imag) for v in values):
        raise ValueError(f"coefficient evaluation at t={t} returned a non-finite value")
    return values, PolarCoeffs.from_values(*values)


def h_matrix(c: CoefficientSet, rep: Representation, t: float) -> np.ndarray:
    """The Hamiltonian matrix 2 omega K0 + 2 alpha K- + 2 beta K+ at time t."""
    (omega, alpha, beta), _ = eval_coeffs(c, t)
    return 2.0 * omega * rep.K0 + 2.0 * alpha * rep.Kminus + 2.0 * beta * rep.Kplus
