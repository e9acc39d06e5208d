import numpy as np
import pytest
from scipy.linalg import expm

from nuevolve import (
    AlgebraKind,
    CanonicalParams,
    ReducedParams,
    SingularDecompositionError,
    boson_exponential_columns,
    build_group_element,
    build_su2_rep,
    canonical_exponential,
    continuous_log,
    fold_reduced,
    gauss_decompose,
    gauss_from_reduced,
    invert_group_element,
    reduce_params,
)

SU2, SU11 = AlgebraKind.SU2, AlgebraKind.SU11


# 2x2 faithful matrices for both structure constants: the su(2) defining rep
# and the non-unitary D=-2 rep K0 = sigma_z/2, K+- = i sigma_+-.  Both are
# exact (no truncation), so they oracle the factor formulas over the whole
# parameter domain.
def defining_rep(kind):
    K0 = np.diag([0.5, -0.5]).astype(complex)
    sp = np.array([[0, 1], [0, 0]], dtype=complex)
    sm = np.array([[0, 0], [1, 0]], dtype=complex)
    if kind is SU2:
        return K0, sp, sm
    return K0, 1j * sp, 1j * sm


def defining_direct(p, kind):
    K0, Kp, Km = defining_rep(kind)
    return expm(2 * p.eps * K0 + 2 * p.mu * Km + 2 * np.conj(p.mu) * Kp)


def defining_product(g, kind):
    K0, Kp, Km = defining_rep(kind)
    mid = np.diag(np.exp(np.log(complex(g.theta_zero)) * np.array([0.5, -0.5])))
    return expm(g.theta_plus * Kp) @ mid @ expm(g.theta_minus * Km)


def test_mu_zero_is_pure_k0_exponential():
    g = gauss_decompose(CanonicalParams(0.5, 0.0), SU11)
    assert g.theta_plus == 0 and g.theta_minus == 0
    assert g.theta_zero.real == pytest.approx(np.e, abs=1e-10)
    assert g.theta == pytest.approx(0.5)


def test_su2_point_matches_2x2_exponential():
    g = gauss_decompose(CanonicalParams(0.0, 0.25), SU2)
    assert g.theta == pytest.approx(0.5)
    assert g.theta_plus == pytest.approx(np.tanh(0.5), abs=1e-12)
    assert g.theta_minus == pytest.approx(np.tanh(0.5), abs=1e-12)
    assert g.theta_zero == pytest.approx(1 / np.cosh(0.5) ** 2, abs=1e-12)
    p = CanonicalParams(0.0, 0.25)
    assert np.abs(defining_product(g, SU2) - defining_direct(p, SU2)).max() < 1e-12


def test_su11_point_matches_defining_exponential():
    p = CanonicalParams(0.0, 0.25)
    g = gauss_decompose(p, SU11)
    assert g.theta**2 == pytest.approx(-0.25)
    assert g.theta_plus == pytest.approx(np.tan(0.5), abs=1e-12)
    assert g.theta_zero == pytest.approx(1 / np.cos(0.5) ** 2, abs=1e-12)
    assert np.abs(defining_product(g, SU11) - defining_direct(p, SU11)).max() < 1e-12


def test_defining_rep_identity_over_domain(rng):
    for _ in range(100):
        p = CanonicalParams(
            rng.uniform(-1, 1), rng.uniform(0, 0.4) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        )
        for kind in (SU2, SU11):
            g = gauss_decompose(p, kind)
            diff = np.abs(defining_product(g, kind) - defining_direct(p, kind)).max()
            assert diff < 1e-12


def test_reduce_params_mu_zero():
    r = reduce_params(CanonicalParams(0.5, 0.0), SU11)
    assert r.phi == 0.0
    assert r.chi == pytest.approx(-np.e, abs=1e-10)
    g = gauss_from_reduced(r, SU11)
    assert g.theta_zero.real == pytest.approx(np.e, abs=1e-10)


def test_reduce_params_identity_limit():
    r = reduce_params(CanonicalParams(0.0, 0.0), SU2)
    assert r.phi == 0.0
    assert r.chi == pytest.approx(-1.0, abs=1e-14)
    g = gauss_from_reduced(r, SU2)
    assert g.theta_zero == pytest.approx(1.0, abs=1e-14)


def test_reduced_matches_gauss_complex_mu():
    p = CanonicalParams(0.3, 0.1 * np.exp(1j * np.pi / 4))
    r = reduce_params(p, SU2)
    assert r.varphi == pytest.approx(np.pi / 4, abs=1e-14)
    g = gauss_decompose(p, SU2)
    assert abs(-r.phi * np.exp(-1j * r.varphi) - g.theta_plus) < 1e-12
    assert abs(-r.phi * np.exp(+1j * r.varphi) - g.theta_minus) < 1e-12


def test_phi_sign_convention():
    # phi is negative for small eps > 0 with mu -> 0
    r = reduce_params(CanonicalParams(0.1, 1e-4), SU2)
    assert r.phi < 0


def test_roundtrip_reduce_and_rebuild(rng):
    for _ in range(100):
        p = CanonicalParams(
            rng.uniform(-1, 1), rng.uniform(0, 0.4) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        )
        for kind in (SU2, SU11):
            g = gauss_decompose(p, kind)
            r = reduce_params(p, kind)
            g2 = gauss_from_reduced(r, kind)
            scale = 1.0 + abs(g.theta_zero)
            assert abs(g2.theta_plus - g.theta_plus) < 1e-12 * scale
            assert abs(g2.theta_minus - g.theta_minus) < 1e-12 * scale
            assert abs(g2.theta_zero - g.theta_zero) < 1e-12 * scale


def test_conjugation_symmetry(rng):
    for _ in range(50):
        p = CanonicalParams(
            rng.uniform(-1, 1), rng.uniform(0, 0.4) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        )
        g = gauss_decompose(p, SU11)
        assert abs(g.theta_plus - np.conj(g.theta_minus)) < 1e-13
        assert abs(g.theta_zero.imag) < 1e-12 * abs(g.theta_zero)
        assert g.theta**2 == pytest.approx(p.eps**2 - 4 * abs(p.mu) ** 2, rel=1e-12)


def test_folding_identity():
    r = ReducedParams(phi=0.37, varphi=0.9, chi=-1.2, z_mod=1.0)
    folded = fold_reduced(r)
    g1 = gauss_from_reduced(r, SU2)
    g2 = gauss_from_reduced(folded, SU2)
    assert abs(g1.theta_plus - g2.theta_plus) < 1e-15
    assert abs(g1.theta_minus - g2.theta_minus) < 1e-15
    assert abs(g1.theta_zero - g2.theta_zero) < 1e-15


def test_identity_group_element(su2_one):
    from nuevolve import GaussParams

    g = GaussParams(theta_plus=0.0, theta_zero=1.0, theta_minus=0.0)
    assert np.allclose(build_group_element(g, su2_one), np.eye(3), atol=1e-15)
    assert np.allclose(invert_group_element(g, su2_one), np.eye(3), atol=1e-15)


def test_diagonal_group_element(su2_half):
    g = gauss_decompose(CanonicalParams(0.5, 0.0), SU2)
    V = build_group_element(g, su2_half)
    assert np.allclose(V, np.diag([np.exp(0.5), np.exp(-0.5)]), atol=1e-12)
    Vinv = invert_group_element(g, su2_half)
    assert np.allclose(Vinv, np.diag([np.exp(-0.5), np.exp(0.5)]), atol=1e-12)


def test_product_form_spin_half_symmetric():
    g = gauss_decompose(CanonicalParams(0.0, 0.25), SU2)
    rep = build_su2_rep(0.5)
    V = build_group_element(g, rep)
    c, s = np.cosh(0.5), np.sinh(0.5)
    assert np.allclose(V, [[c, s], [s, c]], atol=1e-12)


def test_inverse_is_inverse(rng, su2_one):
    for _ in range(20):
        p = CanonicalParams(
            rng.uniform(-1, 1), rng.uniform(0, 0.4) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        )
        g = gauss_decompose(p, SU2)
        V = build_group_element(g, su2_one)
        Vinv = invert_group_element(g, su2_one)
        assert np.abs(V @ Vinv - np.eye(3)).max() < 1e-11


def test_canonical_exponential_identity_and_diag(su2_half):
    assert np.allclose(
        canonical_exponential(CanonicalParams(0.0, 0.0), su2_half), np.eye(2), atol=1e-15
    )
    assert np.allclose(
        canonical_exponential(CanonicalParams(0.5, 0.0), su2_half),
        np.diag([np.exp(0.5), np.exp(-0.5)]),
        atol=1e-12,
    )


def test_su11_decomposition_identity_with_margin(su11_30):
    p = CanonicalParams(0.2, 0.1 + 0.05j)
    ref, ok = boson_exponential_columns(p, 30, 15)
    assert ok
    g = gauss_decompose(p, SU11)
    prod = build_group_element(g, su11_30)[:, :15]
    assert np.abs(prod - ref).max() / np.abs(ref).max() < 1e-10
    # the plain truncated expm inherits edge contamination in the bottom rows
    # of every column; deep inside the block and at mild parameters it agrees
    # with the margin oracle
    mild = CanonicalParams(0.05, 0.02 + 0.01j)
    direct = canonical_exponential(mild, su11_30)[:15, :15]
    ref2, ok2 = boson_exponential_columns(mild, 30, 15)
    assert ok2
    assert np.abs(direct - ref2[:15]).max() / np.abs(ref2[:15]).max() < 1e-12


def test_adjoint_identities(rng, su2_one, su11_30):
    # all six conjugation rules behind the transformed-coefficient algebra
    for rep in (su2_one, su11_30):
        D = rep.kind.d
        td = rep.trusted_dim
        K0, Kp, Km = rep.K0, rep.Kplus, rep.Kminus
        for _ in range(25):
            # draws bracket the flow's working range; larger |th| or more
            # extreme lam only raise the roundoff floor of the big matrix
            # products, not the mathematical content
            th = rng.uniform(0.05, 0.5) * np.exp(1j * rng.uniform(-np.pi, np.pi))
            lam = rng.uniform(0.5, 1.5)
            Em, Emi = expm(th * Km), expm(-th * Km)
            Ep, Epi = expm(th * Kp), expm(-th * Kp)
            B, Bi = np.diag(np.exp(np.log(lam) * np.diag(K0))), np.diag(
                np.exp(-np.log(lam) * np.diag(K0))
            )
            checks = [
                (Em @ K0 @ Emi, K0 + th * Km),
                (Ep @ K0 @ Epi, K0 - th * Kp),
                (B @ Km @ Bi, Km / lam),
                (Ep @ Km @ Epi, Km + D * th * K0 - (D / 2) * th**2 * Kp),
                (B @ Kp @ Bi, lam * Kp),
                (Em @ Kp @ Emi, Kp - D * th * K0 - (D / 2) * th**2 * Km),
            ]
            for lhs, rhs in checks:
                assert np.abs((lhs - rhs)[:td, :td]).max() < 1e-11


def test_singular_cell_raises():
    # for D=-2 the cell boundary sits where cos|theta| = eps sinc|theta|
    with pytest.raises(SingularDecompositionError):
        gauss_decompose(CanonicalParams(0.0, np.pi / 4), SU11)


def test_zero_theta_zero_raises(su2_one):
    from nuevolve import GaussParams

    with pytest.raises(SingularDecompositionError):
        build_group_element(GaussParams(0.1, 0.0, 0.1), su2_one)
    with pytest.raises(SingularDecompositionError):
        invert_group_element(GaussParams(0.1, 0.0, 0.1), su2_one)


def test_continuous_log_unwraps():
    ts = np.linspace(0, 4 * np.pi, 200)
    vals = np.exp(1j * ts)
    logs = continuous_log(vals)
    assert logs[-1].imag == pytest.approx(4 * np.pi, abs=1e-9)
    # pointwise principal logs would wrap back into (-pi, pi]
    assert np.log(vals[-1]).imag < 1.0


def test_theta_branch_free_small_theta():
    # near theta^2 = 0 the series evaluation stays smooth for both signs
    for w_sign in (+1, -1):
        mu = 0.1
        eps = np.sqrt(4 * mu**2 + w_sign * 1e-9)
        kind = SU11
        g = gauss_decompose(CanonicalParams(eps, mu), kind)
        assert np.isfinite(g.theta_zero.real)
        assert abs(g.theta_plus) < 10
