import numpy as np
import pytest

from nuevolve import (
    AlgebraKind,
    build_su2_rep,
    build_su11_boson_rep,
    commutator_residuals,
)


def test_su2_half_matrices(su2_half):
    assert su2_half.dim == 2
    assert np.allclose(np.diag(su2_half.K0), [0.5, -0.5], atol=0)
    assert np.array_equal(su2_half.Kplus, [[0, 1], [0, 0]])
    assert np.array_equal(su2_half.Kminus, [[0, 0], [1, 0]])


def test_su2_spin1_superdiagonal(su2_one):
    sup = np.diag(su2_one.Kplus, k=1)
    assert np.allclose(sup, [np.sqrt(2), np.sqrt(2)], rtol=1e-15)


def test_su2_half_commutators_exact(su2_half):
    res = commutator_residuals(su2_half)
    assert res.k0_kplus <= 1e-15
    assert res.k0_kminus <= 1e-15
    assert res.kplus_kminus <= 1e-15


def test_su11_k0_diagonal_n4():
    rep = build_su11_boson_rep(4)
    assert np.allclose(np.diag(rep.K0), [0.25, 0.75, 1.25, 1.75], atol=0)


def test_su11_kminus_entry_n4():
    rep = build_su11_boson_rep(4)
    assert rep.Kminus[0, 2] == pytest.approx(np.sqrt(2) / 2, abs=1e-15)


def test_su11_truncation_artifact_location():
    # [K+,K-] + 2K0 vanishes on the leading block and is nonzero only in the
    # last two rows/columns.
    rep = build_su11_boson_rep(6)
    r = rep.Kplus @ rep.Kminus - rep.Kminus @ rep.Kplus + 2 * rep.K0
    assert np.abs(r[:4, :4]).max() < 1e-14
    assert np.abs(r[4:, 4:]).max() > 0.1


def test_commutator_residuals_su11_trusted_vs_full():
    rep = build_su11_boson_rep(8)
    res = commutator_residuals(rep)
    assert max(res.k0_kplus, res.k0_kminus, res.kplus_kminus) < 1e-13
    full = commutator_residuals(rep, block=rep.dim)
    assert full.kplus_kminus > 0.1


@pytest.mark.parametrize("j", [0.5, 1, 2.5, 10])
def test_su2_residuals_across_spins(j):
    res = commutator_residuals(build_su2_rep(j))
    assert max(res.k0_kplus, res.k0_kminus, res.kplus_kminus) < 1e-12


@pytest.mark.parametrize("cutoff", [4, 30, 200])
def test_su11_residuals_across_cutoffs(cutoff):
    # the pairing relation involves ladder products of size ~N^2/4, so the
    # roundoff floor scales with the matrix magnitude
    rep = build_su11_boson_rep(cutoff)
    res = commutator_residuals(rep)
    tol = 1e-12 * max(1.0, 2.0 * np.abs(rep.K0).max())
    assert max(res.k0_kplus, res.k0_kminus, res.kplus_kminus) < tol
    if cutoff <= 60:
        assert max(res.k0_kplus, res.k0_kminus, res.kplus_kminus) < 1e-12


def test_hermiticity_bitwise(su11_30, su2_one):
    for rep in (su11_30, su2_one):
        assert np.array_equal(rep.K0, rep.K0.conj().T)
        assert np.array_equal(rep.Kplus, rep.Kminus.conj().T)


def test_k0_spectrum_exact(su2_one, su11_30):
    assert np.array_equal(np.diag(su2_one.K0).real, [1.0, 0.0, -1.0])
    n = np.arange(30)
    assert np.array_equal(np.diag(su11_30.K0).real, (n + 0.5) / 2)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        build_su2_rep(0.3)
    with pytest.raises(ValueError):
        build_su2_rep(-1)
    with pytest.raises(ValueError):
        build_su11_boson_rep(3)


def test_kind_structure_constants():
    assert AlgebraKind.SU2.d == 2
    assert AlgebraKind.SU11.d == -2
    assert AlgebraKind.from_name("su2") is AlgebraKind.SU2
    with pytest.raises(ValueError):
        AlgebraKind.from_name("so3")


def test_matrices_are_readonly(su2_one):
    with pytest.raises(ValueError):
        su2_one.K0[0, 0] = 5.0
