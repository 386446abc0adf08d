"""Declarative Hamiltonian assembly for the coupled electron-nuclear system.

Three model levels:

* ``build_manifold`` — the 10x10 nuclear Hamiltonian within one electron
  manifold m_S = -1/2 (down) or +1/2 (up).
* ``build_effective`` — the 20x20 effective spin-1/2 x spin-9/2 model with the
  full hyperfine tensor, SDQ/octupole/hexadecapole terms and the resonator
  Lamb shift.
* ``build_fullJ`` — the 160x160 crystal-field model on J=15/2 x I=9/2 with a
  scalable hyperfine coupling lambda.

All parameters are linear frequencies (Hz); compiled matrices are H/h.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constants import G_J, I_NB, J_ER, MU_B_HZ_PER_T
from .operators import SpinSystem, eigh_phase_fixed, spin_operators, stevens_operator
from .quadrupole import QuadrupoleTensor, quad_hamiltonian

S4_ALLOWED_KQ = {(2, 0), (4, 0), (6, 0), (4, 4), (4, -4), (6, 4), (6, -4)}


@dataclass(frozen=True)
class ResonatorParams:
    nu_r: float
    kappa: float
    g0: float

    def __post_init__(self):
        if min(self.nu_r, self.kappa, self.g0) <= 0:
            raise ValueError("resonator parameters must be positive")


@dataclass(frozen=True)
class EffectiveModelParams:
    """Parameters of Eqs. for the effective two-spin model."""

    nu_S: float = 0.0
    nu_I: float = 0.0
    A_par: float = 0.0
    A_perp: float = 0.0
    A_full: Optional[np.ndarray] = None          # 3x3 in the quantization frame
    Q: QuadrupoleTensor = field(default_factory=QuadrupoleTensor.zero)
    Q_sdq: float = 0.0
    C3: float = 0.0
    C4: float = 0.0
    resonator: Optional[ResonatorParams] = None
    nuclear_spin: float = I_NB

    def hyperfine_tensor(self):
        """Full 3x3 hyperfine tensor; secular-only rows when A_full absent."""
        if self.A_full is not None:
            a = np.asarray(self.A_full, dtype=float)
            if a.shape != (3, 3):
                raise ValueError("A_full must be 3x3")
            return a
        a = np.zeros((3, 3))
        a[2, 2] = self.A_par
        a[2, 0] = self.A_perp
        return a


@dataclass(frozen=True)
class FullJModelParams:
    B0_vec: np.ndarray
    Bkq: dict
    nu_I: float
    Q: QuadrupoleTensor = field(default_factory=QuadrupoleTensor.zero)
    AJ: Optional[np.ndarray] = None
    lam: float = 0.0
    gJ: float = G_J
    J: float = J_ER
    nuclear_spin: float = I_NB

    def __post_init__(self):
        bad = set(self.Bkq) - S4_ALLOWED_KQ
        if bad:
            raise ValueError(f"crystal-field keys outside the S4-allowed set: {sorted(bad)}")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")


def _ms_value(m_s):
    if m_s in ("down", -0.5):
        return -0.5
    if m_s in ("up", 0.5):
        return 0.5
    raise ValueError(f"manifold must be 'down'/'up' or +-1/2, got {m_s}")


def _multipole_diagonal(p, iz, ident, i):
    """Octupole and hexadecapole diagonal terms with the paper normalizations."""
    h = np.zeros_like(ident)
    if p.C3:
        h = h + p.C3 / (i * (2 * i - 1) * (i - 1)) * np.linalg.matrix_power(iz, 3)
    if p.C4:
        h = h + p.C4 / (i * (2 * i - 1) * (i - 1) * (2 * i - 3)) * np.linalg.matrix_power(iz, 4)
    return h


def build_manifold(p: EffectiveModelParams, m_s) -> np.ndarray:
    """Nuclear Hamiltonian H(m_S)/h within one electron manifold (10x10)."""
    ms = _ms_value(m_s)
    i = p.nuclear_spin
    ops = spin_operators(i)
    ident = ops.identity
    iz, ix = ops.z, ops.x
    quad_sec = (3 * iz @ iz - i * (i + 1) * ident) / 2
    h = ms * p.nu_S * ident
    h = h + p.nu_I * iz
    h = h + ms * (p.A_par * iz + p.A_perp * ix)
    h = h + quad_hamiltonian(p.Q, i)
    h = h + ms * p.Q_sdq * quad_sec
    h = h + _multipole_diagonal(p, iz, ident, i)
    return h


def build_effective(p: EffectiveModelParams, lamb_shift=True) -> np.ndarray:
    """Full 20x20 effective model H/h, including the Lamb shift if a
    resonator is configured and ``lamb_shift`` is true."""
    i = p.nuclear_spin
    sys = SpinSystem(0.5, i)
    svec, ivec = sys.S, sys.I
    sz = svec[2]
    iz = ivec[2]
    ident = np.eye(sys.dim, dtype=complex)
    a = p.hyperfine_tensor()
    h = p.nu_S * sz + p.nu_I * iz
    for ai in range(3):
        for bi in range(3):
            if a[ai, bi] != 0:
                h = h + a[ai, bi] * (svec[ai] @ ivec[bi])
    h = h + sys.embed_nucleus(quad_hamiltonian(p.Q, i))
    h = h + p.Q_sdq * sz @ (3 * iz @ iz - i * (i + 1) * ident) / 2
    h = h + sys.embed_nucleus(_multipole_diagonal(
        p, sys.nucleus.z, sys.nucleus.identity, i))
    if p.resonator is not None and lamb_shift:
        h = h + _lamb_term(h, sz, p.resonator)
    return h


def _manifold_split(h, sz):
    """Eigensolve and split levels by electron manifold.

    Returns (energies, vectors, sz_expect, down_idx, up_idx, ambiguous) with
    each manifold index list sorted by ascending energy.
    """
    w, v = eigh_phase_fixed(h)
    sz_exp = np.real(np.einsum("ij,jk,ki->i", v.conj().T, sz, v))
    ambiguous = bool(np.any(np.abs(sz_exp) < 0.4))
    down = np.where(sz_exp < 0)[0]
    up = np.where(sz_exp >= 0)[0]
    return w, v, sz_exp, down, up, ambiguous


def lamb_shifts(r: ResonatorParams, epr_freqs) -> np.ndarray:
    """Dispersive shifts of |up, n>: g0^2 * Delta_n / (Delta_n^2 + kappa^2/4),
    Delta_n = nu_r - nu_n, all linear frequencies."""
    delta = r.nu_r - np.asarray(epr_freqs, dtype=float)
    return r.g0 ** 2 * delta / (delta ** 2 + r.kappa ** 2 / 4)


def _lamb_term(h0, sz, resonator):
    """Matrix adding the Lamb shift to the up-manifold eigenprojectors."""
    w, v, _, down, up, _ = _manifold_split(h0, sz)
    if len(down) != len(up):
        raise ValueError("manifold split failed; cannot attach Lamb shift")
    epr = w[up] - w[down]
    shifts = lamb_shifts(resonator, epr)
    term = np.zeros_like(h0)
    for n, s in zip(up, shifts):
        vec = v[:, n]
        term = term + s * np.outer(vec, vec.conj())
    return term


def quantization_hyperfine(a_crystal, gamma_e, b_vec):
    """Rotate a crystal-frame hyperfine tensor into the quantization frames.

    The electron axis is -unit(gamma.B) (sign chosen so the c-axis site's
    A_par is positive), the nuclear axis is B-hat, and the nuclear x axis is
    aligned with the transverse hyperfine component so the S_z I_y projection
    vanishes.  Returns the 3x3 tensor with rows (x_e, y_e, z_e) and columns
    (x_n, y_n, z_n); its z-row is (A_perp, 0, A_par).
    """
    a = np.asarray(a_crystal, dtype=float)
    b = np.asarray(b_vec, dtype=float)
    bn = np.linalg.norm(b)
    if bn == 0:
        raise ValueError("B0 must be non-zero")
    g = np.asarray(gamma_e, dtype=float)
    if g.shape == (3,):
        g = np.diag(g)
    u = g @ b
    z_e = -u / np.linalg.norm(u)
    z_n = b / bn
    v = a.T @ z_e
    a_par = float(v @ z_n)
    t = v - a_par * z_n
    tn = np.linalg.norm(t)
    if tn > 1e-12 * max(1.0, np.max(np.abs(a))):
        x_n = t / tn
    else:
        seed = np.array([1.0, 0.0, 0.0])
        if abs(seed @ z_n) > 0.9:
            seed = np.array([0.0, 1.0, 0.0])
        x_n = seed - (seed @ z_n) * z_n
        x_n /= np.linalg.norm(x_n)
    y_n = np.cross(z_n, x_n)
    x_e = x_n - (x_n @ z_e) * z_e
    x_e /= np.linalg.norm(x_e)
    y_e = np.cross(z_e, x_e)
    e = np.column_stack([x_e, y_e, z_e])
    n = np.column_stack([x_n, y_n, z_n])
    return e.T @ a @ n


def secular_projection(a_full, gamma_e, b_vec):
    """(A_par, A_perp) Hilbert-Schmidt projections onto S_z I_z and S_z I_x."""
    aq = quantization_hyperfine(a_full, gamma_e, b_vec)
    return float(aq[2, 2]), float(aq[2, 0])


def build_fullJ(p: FullJModelParams) -> np.ndarray:
    """H/h = gJ muB B0.J + sum Bkq Okq + nu_I Iz + I.Q.I + lambda J.AJ.I."""
    sys = SpinSystem(p.J, p.nuclear_spin)
    jvec, ivec = sys.S, sys.I
    b = np.asarray(p.B0_vec, dtype=float)
    h = p.gJ * MU_B_HZ_PER_T * sum(b[k] * jvec[k] for k in range(3))
    for (k, q), coeff in sorted(p.Bkq.items()):
        if coeff != 0:
            h = h + coeff * sys.embed_electron(stevens_operator(p.J, k, q))
    h = h + p.nu_I * ivec[2]
    h = h + sys.embed_nucleus(quad_hamiltonian(p.Q, p.nuclear_spin))
    if p.lam != 0 and p.AJ is not None:
        aj = np.asarray(p.AJ, dtype=float)
        for a in range(3):
            for bi in range(3):
                if aj[a, bi] != 0:
                    h = h + p.lam * aj[a, bi] * (jvec[a] @ ivec[bi])
    return h
