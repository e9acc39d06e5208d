"""Finite matrix representations of the su(2) and truncated su(1,1) generator triples.

The generator triple (K0, K+, K-) obeys

    [K0, K+] = K+,    [K0, K-] = -K-,    [K+, K-] = D K0,

with structure constant D = +2 for su(2) and D = -2 for su(1,1).  su(2) is
realized by the standard spin-j matrices (K0 = Jz, K+- = J+-) on a basis
ordered by descending magnetic number m = j..-j.  su(1,1) uses the quadratic
boson realization

    K0 = (a'a + 1/2)/2,    K- = a^2/2,    K+ = (a')^2/2,

on a Fock space |0>, |1>, ..., |N-1> truncated at a cutoff N.  Truncation
breaks [K+, K-] = -2 K0 in the last two rows/columns, so every representation
carries a ``trusted_dim`` marking the leading sub-block on which all three
relations hold exactly; assertions about the algebra are only meaningful
there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class AlgebraKind(enum.Enum):
    """Which real form the generator triple closes on.

    The enum value is the structure constant D in [K+, K-] = D K0.
    """

    SU2 = 2
    SU11 = -2

    @property
    def d(self) -> int:
        """Structure constant D."""
        return self.value

    @classmethod
    def from_name(cls, name: str) -> "AlgebraKind":
        table = {"su2": cls.SU2, "su11": cls.SU11}
        try:
            return table[name.lower()]
        except KeyError:
            raise ValueError(f"unknown algebra {name!r}; expected 'su2' or 'su11'") from None


@dataclass(frozen=True)
class Representation:
    """Concrete matrices for one generator triple.

    K0 is real diagonal in the construction basis and Kplus is exactly the
    conjugate transpose of Kminus.  ``label`` is the spin j for su(2) or the
    Fock cutoff N for su(1,1).  ``trusted_dim`` bounds the sub-block on which
    the commutation relations hold exactly (the full dimension for su(2),
    N - 2 for the truncated boson realization).
    """

    kind: AlgebraKind
    dim: int
    K0: np.ndarray
    Kplus: np.ndarray
    Kminus: np.ndarray
    label: float
    trusted_dim: int

    def k0_diagonal(self) -> np.ndarray:
        """Real diagonal of K0 (the H0 eigenvalues in the construction basis)."""
        return np.diag(self.K0).real


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build_su2_rep(j: float) -> Representation:
    """Spin-j matrices with K0 = Jz on the descending-m basis.

    Parameters
    ----------
    j : positive half-integer.

    The ladder entries are the standard angular-momentum matrix elements
    sqrt(j(j+1) - m(m+1)) so that Kplus is exactly Kminus's conjugate
    transpose.
    """
    two_j = 2.0 * j
    if j <= 0 or abs(two_j - round(two_j)) > 1e-12:
        raise ValueError(f"j must be a positive half-integer, got {j}")
    dim = int(round(two_j)) + 1
    ms = j - np.arange(dim)
    K0 = np.diag(ms.astype(complex))
    Kplus = np.zeros((dim, dim), dtype=complex)
    for i in range(1, dim):
        m_from = ms[i]
        Kplus[i - 1, i] = np.sqrt(j * (j + 1) - m_from * (m_from + 1))
    Kminus = Kplus.conj().T.copy()
    return Representation(
        kind=AlgebraKind.SU2,
        dim=dim,
        K0=_freeze(K0),
        Kplus=_freeze(Kplus),
        Kminus=_freeze(Kminus),
        label=float(j),
        trusted_dim=dim,
    )


def build_su11_boson_rep(cutoff: int) -> Representation:
    """Truncated boson realization of su(1,1) on Fock levels 0..cutoff-1.

    K0 = diag((n + 1/2)/2) and Kminus carries (1/2) sqrt(n(n-1)) mapping level
    n to n - 2.  The pair relation [K+, K-] = -2 K0 fails in the last two
    rows/columns, hence trusted_dim = cutoff - 2.
    """
    if int(cutoff) != cutoff or cutoff < 4:
        raise ValueError(f"cutoff must be an integer >= 4, got {cutoff}")
    cutoff = int(cutoff)
    n = np.arange(cutoff)
    K0 = np.diag(((n + 0.5) / 2.0).astype(complex))
    Kminus = np.zeros((cutoff, cutoff), dtype=complex)
    for lev in range(2, cutoff):
        Kminus[lev - 2, lev] = 0.5 * np.sqrt(lev * (lev - 1))
    Kplus = Kminus.conj().T.copy()
    return Representation(
        kind=AlgebraKind.SU11,
        dim=cutoff,
        K0=_freeze(K0),
        Kplus=_freeze(Kplus),
        Kminus=_freeze(Kminus),
        label=float(cutoff),
        trusted_dim=cutoff - 2,
    )


@dataclass(frozen=True)
class CommutatorResiduals:
    """Max-norm residuals of the three commutation relations on the trusted block."""

    k0_kplus: float
    k0_kminus: float
    kplus_kminus: float


def commutator_residuals(rep: Representation, block: int | None = None) -> CommutatorResiduals:
    """Residuals of [K0,K+]-K+, [K0,K-]+K-, [K+,K-]-D*K0.

    Products are formed with the full matrices and the residual matrices are
    then restricted to the leading ``block`` sub-block (default: the
    representation's trusted_dim).
    """
    td = rep.trusted_dim if block is None else block
    D = rep.kind.d

    def comm(a, b):
        return a @ b - b @ a

    r1 = comm(rep.K0, rep.Kplus) - rep.Kplus
    r2 = comm(rep.K0, rep.Kminus) + rep.Kminus
    r3 = comm(rep.Kplus, rep.Kminus) - D * rep.K0
    return CommutatorResiduals(
        k0_kplus=float(np.abs(r1[:td, :td]).max()),
        k0_kminus=float(np.abs(r2[:td, :td]).max()),
        kplus_kminus=float(np.abs(r3[:td, :td]).max()),
    )
