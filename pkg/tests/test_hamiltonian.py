import numpy as np
import pytest

from nucspec import constants
from nucspec.hamiltonian import (EffectiveModelParams, FullJModelParams,
                                 ResonatorParams, build_effective,
                                 build_fullJ, build_manifold, lamb_shifts,
                                 quantization_hyperfine, secular_projection)
from nucspec.quadrupole import SphericalForm, from_spherical

QUAD = from_spherical(SphericalForm(S0=-237353.0, S1=2667.0, S2=149443.0,
                                    Delta=-0.002, zeta=0.0))
PARAMS = EffectiveModelParams(nu_S=7.9e9, nu_I=-4.733e6, A_par=133497.0,
                              A_perp=55e3, Q=QUAD, Q_sdq=66.0)


def test_effective_hermitian():
    h = build_effective(PARAMS)
    assert np.allclose(h, h.conj().T)
    assert h.shape == (20, 20)


def test_manifold_matches_secular_block():
    # with A_perp = 0 the 20x20 model is block diagonal and each block is
    # the corresponding 10x10 manifold Hamiltonian
    p = EffectiveModelParams(nu_S=7.9e9, nu_I=-4.733e6, A_par=133497.0,
                             A_perp=0.0, Q=QUAD, Q_sdq=66.0, C4=9.6)
    h = build_effective(p)
    up = h[:10, :10]
    down = h[10:, 10:]
    assert np.allclose(h[:10, 10:], 0.0)
    assert np.allclose(up, build_manifold(p, "up"))
    assert np.allclose(down, build_manifold(p, "down"))


def test_transverse_term_exact_oracle():
    # the geometric S_z I_x term with a pure nuclear Zeeman gives the
    # closed-form ladder m * sqrt(nu_I^2 + A_perp^2/4) in each manifold
    nu_i, a_perp = -4.733e6, 55e3
    p = EffectiveModelParams(nu_S=7.9e9, nu_I=nu_i, A_perp=a_perp)
    w = np.linalg.eigvalsh(build_effective(p))
    m = 4.5 - np.arange(10)
    tilted = m * np.hypot(nu_i, a_perp / 2)
    ref = np.sort(np.concatenate([tilted - 7.9e9 / 2, tilted + 7.9e9 / 2]))
    assert np.allclose(np.sort(w), ref, atol=1e-6)


def test_multipole_terms_diagonal():
    p = EffectiveModelParams(nu_I=-4.733e6, C3=24.1, C4=9.6)
    h = build_manifold(p, "down")
    assert np.allclose(h, np.diag(np.diag(h)))


def test_lamb_shift_sign_and_scale():
    r = ResonatorParams(nu_r=7.9e9, kappa=1e6, g0=1e3)
    freqs = np.array([7.905e9, 7.895e9])
    s = lamb_shifts(r, freqs)
    # detuning is nu_r - nu_spin: a spin above the cavity is pulled down
    assert s[0] < 0 < s[1]
    delta, kappa, g0 = 5e6, 1e6, 1e3
    mag = g0 ** 2 * delta / (delta ** 2 + kappa ** 2 / 4)
    assert np.abs(s) == pytest.approx(mag, rel=1e-9)


def test_fullJ_rejects_bad_keys():
    with pytest.raises(ValueError):
        FullJModelParams(B0_vec=np.array([0, 0, 0.45]),
                         Bkq={(2, 1): 1.0}, nu_I=-4.7e6)
    with pytest.raises(ValueError):
        FullJModelParams(B0_vec=np.array([0, 0, 0.45]), Bkq={}, nu_I=-4.7e6,
                         lam=-0.1)


def test_fullJ_dimensions_and_hermiticity():
    p = FullJModelParams(B0_vec=np.array([0.0, 0.0, 0.454]),
                         Bkq={(2, 0): -6.3e10, (4, 4): 1.4e10},
                         nu_I=-4.733e6)
    h = build_fullJ(p)
    assert h.shape == (160, 160)
    assert np.allclose(h, h.conj().T)


def test_fullJ_zeeman_only_oracle():
    # without crystal field or hyperfine, levels are an exact product of
    # electron and nuclear Zeeman ladders
    b0 = 0.454
    p = FullJModelParams(B0_vec=np.array([0.0, 0.0, b0]), Bkq={},
                         nu_I=-constants.GAMMA_NB * b0)
    w = np.sort(np.linalg.eigvalsh(build_fullJ(p)))
    nu_e = p.gJ * constants.MU_B_HZ_PER_T * b0
    mj = constants.J_ER - np.arange(16)
    mi = constants.I_NB - np.arange(10)
    ref = np.sort((nu_e * mj[:, None] + p.nu_I * mi[None, :]).ravel())
    assert np.allclose(w, ref, rtol=0, atol=1e-5 * abs(nu_e))


def test_quantization_frame_projection():
    # isotropic hyperfine is frame independent
    a = np.eye(3) * 100e3
    gamma_e = np.array([constants.GAMMA_PERP, constants.GAMMA_PERP,
                        constants.GAMMA_PAR])
    b = np.array([0.01, 0.02, 0.45])
    aq = quantization_hyperfine(a, gamma_e, b)
    assert np.allclose(aq, a, atol=1e-6)
    a_par, a_perp = secular_projection(a, gamma_e, b)
    assert a_par == pytest.approx(100e3)
    assert a_perp == pytest.approx(0.0, abs=1e-6)
