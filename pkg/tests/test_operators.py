import numpy as np
import pytest

from nucspec.operators import (SpinSystem, dimension, eigh_phase_fixed,
                               spin_operators, stevens_operator)


@pytest.mark.parametrize("j", [0.5, 1.0, 1.5, 4.5, 7.5])
def test_angular_momentum_algebra(j):
    ops = spin_operators(j)
    jx, jy, jz = ops.x, ops.y, ops.z
    # commutation relations and Casimir, the defining algebra
    assert np.allclose(jx @ jy - jy @ jx, 1j * jz, atol=1e-12)
    assert np.allclose(jy @ jz - jz @ jy, 1j * jx, atol=1e-12)
    casimir = jx @ jx + jy @ jy + jz @ jz
    assert np.allclose(casimir, j * (j + 1) * np.eye(dimension(j)),
                       atol=1e-12)


def test_ladder_operators():
    ops = spin_operators(1.5)
    assert np.allclose(ops.plus, ops.x + 1j * ops.y)
    assert np.allclose(ops.minus, ops.plus.conj().T)


def test_spin_operators_rejects_bad_j():
    with pytest.raises(ValueError):
        spin_operators(1.2)
    with pytest.raises(ValueError):
        spin_operators(-0.5)


@pytest.mark.parametrize("k,q", [(2, 0), (4, 0), (6, 0), (4, 4), (4, -4),
                                 (6, 4), (6, -4)])
def test_stevens_hermitian(k, q):
    o = stevens_operator(7.5, k, q)
    assert np.allclose(o, o.conj().T)


def test_stevens_o20_diagonal():
    # O_2^0 = 3 Jz^2 - J(J+1) has a closed-form diagonal
    j = 2.0
    o = stevens_operator(j, 2, 0)
    mz = np.diag(spin_operators(j).z).real
    assert np.allclose(np.diag(o).real, 3 * mz ** 2 - j * (j + 1))
    assert np.allclose(o - np.diag(np.diag(o)), 0.0)


def test_stevens_o44_matrix_elements():
    # O_4^4 = (J+^4 + J-^4)/2: only |delta m| = 4 elements
    j = 7.5
    o = stevens_operator(j, 4, 4)
    ops = spin_operators(j)
    ref = (np.linalg.matrix_power(ops.plus, 4) +
           np.linalg.matrix_power(ops.minus, 4)) / 2
    assert np.allclose(o, ref, atol=1e-6 * np.abs(ref).max())


def test_spin_system_dimensions():
    sys = SpinSystem(0.5, 4.5)
    assert sys.dim == 20
    assert sys.S[0].shape == (20, 20)
    assert sys.I[2].shape == (20, 20)
    # electron and nuclear operators commute
    c = sys.S[0] @ sys.I[2] - sys.I[2] @ sys.S[0]
    assert np.allclose(c, 0.0, atol=1e-12)


def test_eigh_phase_fixed_deterministic():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    h = a + a.conj().T
    w1, v1 = eigh_phase_fixed(h)
    w2, v2 = eigh_phase_fixed(h.copy())
    assert np.array_equal(v1, v2)
    # largest-magnitude component of each vector is real positive
    for k in range(6):
        i = np.argmax(np.abs(v1[:, k]))
        assert v1[i, k].real > 0
        assert abs(v1[i, k].imag) < 1e-12
