import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nucspec.quadrupole import (PrincipalForm, QuadrupoleTensor,
                                SphericalForm, from_principal,
                                from_spherical, quad_hamiltonian,
                                to_principal, to_spherical)

finite = st.floats(allow_nan=False, allow_infinity=False)
coeff = st.floats(min_value=-3e5, max_value=3e5)
angle = st.floats(min_value=-np.pi, max_value=np.pi)


def spectrum(t, spin=4.5):
    return np.linalg.eigvalsh(quad_hamiltonian(t, spin))


@given(coeff, coeff, coeff, angle, angle)
@settings(max_examples=100, deadline=None)
def test_spectrum_invariant_under_zeta(s0, s1, s2, delta, zeta):
    # rotating the tensor about the quantization axis must not change the
    # single-axis spectrum
    a = from_spherical(SphericalForm(S0=s0, S1=s1, S2=s2, Delta=delta,
                                     zeta=0.0))
    b = from_spherical(SphericalForm(S0=s0, S1=s1, S2=s2, Delta=delta,
                                     zeta=zeta))
    wa, wb = spectrum(a), spectrum(b)
    scale = max(1.0, np.abs(wa).max())
    assert np.max(np.abs(wa - wb)) / scale < 1e-9


@given(coeff, coeff, coeff, angle, angle)
@settings(max_examples=100, deadline=None)
def test_cartesian_traceless_symmetric(s0, s1, s2, delta, zeta):
    t = from_spherical(SphericalForm(S0=s0, S1=s1, S2=s2, Delta=delta,
                                     zeta=zeta))
    m = t.cart
    scale = max(1.0, np.abs(m).max())
    assert abs(np.trace(m)) / scale < 1e-12
    assert np.max(np.abs(m - m.T)) / scale < 1e-12


@given(coeff, coeff, coeff, angle, angle)
@settings(max_examples=100, deadline=None)
def test_spherical_round_trip(s0, s1, s2, delta, zeta):
    s = SphericalForm(S0=s0, S1=s1, S2=s2, Delta=delta, zeta=zeta)
    t = from_spherical(s)
    back = from_spherical(to_spherical(t))
    scale = max(1.0, np.abs(t.cart).max())
    assert np.max(np.abs(t.cart - back.cart)) / scale < 1e-10


@given(st.floats(min_value=1e3, max_value=1e8),
       st.floats(min_value=0.0, max_value=0.95))
@settings(max_examples=100, deadline=None)
def test_principal_round_trip(cq, eta):
    p = PrincipalForm(Cq=cq, eta=eta, axes=np.eye(3), nuclear_spin=4.5)
    t = from_principal(p)
    q = to_principal(t)
    assert abs(q.Cq - cq) / cq < 1e-10
    assert abs(q.eta - eta) < 1e-10
    back = from_principal(q)
    scale = max(1.0, np.abs(t.cart).max())
    assert np.max(np.abs(t.cart - back.cart)) / scale < 1e-10


def test_eta_range():
    # eta from to_principal is always within [0, 1] by axis ordering
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = rng.standard_normal((3, 3))
        m = a + a.T
        m -= np.trace(m) / 3 * np.eye(3)
        p = to_principal(QuadrupoleTensor(m))
        assert 0.0 <= p.eta <= 1.0 + 1e-12


def test_quad_hamiltonian_traceless_hermitian():
    t = from_spherical(SphericalForm(S0=-237353.0, S1=2667.0, S2=149443.0,
                                     Delta=-0.002, zeta=0.3))
    h = quad_hamiltonian(t, 4.5)
    assert np.allclose(h, h.conj().T)
    assert abs(np.trace(h).real) < 1e-6 * np.abs(h).max()


def test_single_axis_gauge():
    # single_axis=True reports the zeta = 0 representative of the orbit
    s = SphericalForm(S0=-1e5, S1=3e3, S2=1.5e5, Delta=0.2, zeta=1.1)
    t = from_spherical(s)
    g = to_spherical(t, single_axis=True)
    assert g.zeta == 0.0
    a = spectrum(from_spherical(g))
    b = spectrum(t)
    assert np.max(np.abs(a - b)) / np.abs(b).max() < 1e-9


def test_zero_tensor():
    z = QuadrupoleTensor.zero()
    assert np.allclose(z.cart, 0.0)
    assert np.allclose(spectrum(z), 0.0)
