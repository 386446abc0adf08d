"""Angular-momentum operator algebra.

Matrices use the |j, m> basis ordered by descending m, so Jz is diagonal with
entries (j, j-1, ..., -j).  Composite systems are built by Kronecker products
with the electron slot first (slowest index).
"""

from dataclasses import dataclass

import numpy as np


def _check_j(j):
    if j < 0 or abs(2 * j - round(2 * j)) > 1e-12:
        raise ValueError(f"j must be a non-negative half-integer, got {j}")
    return round(2 * j) / 2.0


def dimension(j):
    """Hilbert-space dimension 2j+1 of a spin-j system."""
    j = _check_j(j)
    return int(round(2 * j + 1))


@dataclass(frozen=True)
class SpinOps:
    """Spin matrices for a single spin j (complex, descending-m basis)."""

    j: float
    z: np.ndarray
    x: np.ndarray
    y: np.ndarray
    plus: np.ndarray
    minus: np.ndarray

    @property
    def vec(self):
        """(3, d, d) stack (x, y, z)."""
        return np.stack([self.x, self.y, self.z])

    @property
    def identity(self):
        return np.eye(dimension(self.j), dtype=complex)


def spin_operators(j):
    """Return SpinOps for spin j.

    J+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>, Jz diagonal with m descending.
    """
    j = _check_j(j)
    d = dimension(j)
    m = j - np.arange(d)
    jz = np.diag(m).astype(complex)
    # raising operator: couples column m to row m+1; with descending order the
    # nonzero entries sit on the first superdiagonal.
    amp = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jp = np.zeros((d, d), dtype=complex)
    jp[np.arange(d - 1), np.arange(1, d)] = amp
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    return SpinOps(j=j, z=jz, x=jx, y=jy, plus=jp, minus=jm)


# polynomial parts f_kq(Jz) of the extended Stevens operators, with
# X = J(J+1); q = k entries are the identity polynomial.
def _stevens_poly(k, q, jz, x):
    ident = np.eye(jz.shape[0], dtype=complex)
    z2 = jz @ jz
    z3 = z2 @ jz
    z4 = z2 @ z2
    z5 = z4 @ jz
    if k == 2:
        table = {2: ident, 1: jz}
    elif k == 4:
        table = {
            4: ident,
            3: jz,
            2: 7 * z2 - (x + 5) * ident,
            1: 7 * z3 - (3 * x + 1) * jz,
        }
    elif k == 6:
        table = {
            6: ident,
            5: jz,
            4: 11 * z2 - (x + 38) * ident,
            3: 11 * z3 - (3 * x + 59) * jz,
            2: 33 * z4 - (18 * x + 123) * z2 + (x * x + 10 * x + 102) * ident,
            1: 33 * z5 - (30 * x - 15) * z3 + (5 * x * x - 10 * x + 12) * jz,
        }
    else:  # pragma: no cover - guarded by caller
        raise ValueError(k)
    return table[q]


def stevens_operator(j, k, q):
    """Extended Stevens operator O_k^q for k in {2, 4, 6}, |q| <= k.

    Positive q uses the cosine (J+^q + J-^q) combination, negative q the sine
    combination (J+^|q| - J-^|q|)/i, both symmetrized with the Jz polynomial.
    """
    j = _check_j(j)
    if k not in (2, 4, 6):
        raise ValueError(f"rank k must be one of 2, 4, 6; got {k}")
    if abs(q) > k or q != int(q):
        raise ValueError(f"q must be an integer with |q| <= {k}; got {q}")
    q = int(q)
    ops = spin_operators(j)
    x = j * (j + 1)
    if q == 0:
        jz = ops.z
        z2 = jz @ jz
        ident = np.eye(jz.shape[0], dtype=complex)
        if k == 2:
            return 3 * z2 - x * ident
        z4 = z2 @ z2
        if k == 4:
            return 35 * z4 - (30 * x - 25) * z2 + (3 * x * x - 6 * x) * ident
        z6 = z4 @ z2
        return (231 * z6 - (315 * x - 735) * z4
                + (105 * x * x - 525 * x + 294) * z2
                + (-5 * x ** 3 + 40 * x * x - 60 * x) * ident)
    aq = np.linalg.matrix_power(ops.plus, abs(q))
    if q > 0:
        ladder = aq + aq.conj().T
    else:
        ladder = (aq - aq.conj().T) / 1j
    f = _stevens_poly(k, abs(q), ops.z, x)
    return 0.25 * (f @ ladder + ladder @ f)


class SpinSystem:
    """Electron spin s coupled to nuclear spin i (electron slot first)."""

    def __init__(self, s, i):
        self.s = _check_j(s)
        self.i = _check_j(i)
        self.ds = dimension(s)
        self.di = dimension(i)
        self.dim = self.ds * self.di
        self.electron = spin_operators(s)
        self.nucleus = spin_operators(i)

    def embed_electron(self, op):
        """Lift an electron-space operator into the product space."""
        return np.kron(op, np.eye(self.di, dtype=complex))

    def embed_nucleus(self, op):
        """Lift a nuclear-space operator into the product space."""
        return np.kron(np.eye(self.ds, dtype=complex), op)

    @property
    def S(self):
        """(3, dim, dim) electron spin components in the product space."""
        return np.stack([self.embed_electron(o) for o in
                         (self.electron.x, self.electron.y, self.electron.z)])

    @property
    def I(self):
        """(3, dim, dim) nuclear spin components in the product space."""
        return np.stack([self.embed_nucleus(o) for o in
                         (self.nucleus.x, self.nucleus.y, self.nucleus.z)])


def eigh_phase_fixed(h):
    """Eigendecomposition of a Hermitian matrix with a fixed phase gauge.

    Eigenvalues ascend; each eigenvector is scaled so its largest-magnitude
    component is real and positive.  Accepts stacked matrices (..., n, n).
    """
    h = np.asarray(h)
    herm_err = np.max(np.abs(h - np.swapaxes(h, -1, -2).conj()))
    if herm_err > 1e-9 * max(1.0, np.max(np.abs(h))):
        raise ValueError(f"matrix is not Hermitian (deviation {herm_err:.3g})")
    w, v = np.linalg.eigh(h)
    idx = np.argmax(np.abs(v), axis=-2)
    lead = np.take_along_axis(v, idx[..., None, :], axis=-2)
    phase = lead / np.abs(lead)
    v = v * phase.conj()
    return w, v
