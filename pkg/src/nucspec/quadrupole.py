"""Quadrupole tensor in Cartesian, principal-axis and spherical parameterizations.

All tensor entries are linear frequencies (Hz, energy/h): the nuclear
Hamiltonian contribution is H/h = sum_ab Q_ab I_a I_b.

Conventions
-----------
* Principal axes follow the largest-eigenvalue naming: X carries the largest
  |eigenvalue|, Z the second largest, Y the smallest.  With N = 4I(2I-1),
  Q_X = 2Cq/N, Q_Y = (eta-1)Cq/N, Q_Z = -(1+eta)Cq/N and
  eta = (Q_Y - Q_Z)/Q_X.
* The spherical form (S0, S1, S2, Delta, zeta) maps to Cartesian via

      Q(zeta) = [[ S2 cos(2z+2D) - S0/2,  S2 sin(2z+2D),         S1 cos z],
                 [ S2 sin(2z+2D),        -S2 cos(2z+2D) - S0/2,  S1 sin z],
                 [ S1 cos z,              S1 sin z,              S0      ]]

  The spin spectrum is independent of zeta (rotation about z).
"""

from dataclasses import dataclass, field

import numpy as np

from .operators import spin_operators


@dataclass(frozen=True)
class QuadrupoleTensor:
    """Symmetric traceless 3x3 interaction tensor (Hz)."""

    cart: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.cart, dtype=float)
        if m.shape != (3, 3):
            raise ValueError("quadrupole tensor must be 3x3")
        scale = max(1.0, np.max(np.abs(m)))
        if np.max(np.abs(m - m.T)) > 1e-9 * scale:
            raise ValueError("quadrupole tensor must be symmetric")
        if abs(np.trace(m)) > 1e-6 * scale:
            raise ValueError("quadrupole tensor must be traceless")
        m = (m + m.T) / 2
        m = m - np.eye(3) * np.trace(m) / 3
        object.__setattr__(self, "cart", m)

    @classmethod
    def zero(cls):
        return cls(np.zeros((3, 3)))

    def to_dict(self):
        return {"cart": self.cart.tolist()}


@dataclass(frozen=True)
class PrincipalForm:
    """Cq/eta parameterization plus the rotation to the principal frame.

    ``axes`` columns are the X, Y, Z principal directions in the crystal
    frame (equivalently the active Z-Y-Z rotation taking crystal axes to
    principal axes).  ``nuclear_spin`` fixes the N = 4I(2I-1) normalization.
    """

    Cq: float
    eta: float
    axes: np.ndarray = field(default_factory=lambda: np.eye(3))
    nuclear_spin: float = 4.5
    unique: bool = True

    def principal_values(self):
        n = 4 * self.nuclear_spin * (2 * self.nuclear_spin - 1)
        qx = 2 * self.Cq / n
        qy = (self.eta - 1) * self.Cq / n
        qz = -(1 + self.eta) * self.Cq / n
        return qx, qy, qz

    def to_dict(self):
        return {"Cq_hz": self.Cq, "eta": self.eta, "axes": np.asarray(self.axes).tolist()}


@dataclass(frozen=True)
class SphericalForm:
    """Spherical invariants (S0, |S1|, |S2|, Delta) plus the free angle zeta."""

    S0: float
    S1: float
    S2: float
    Delta: float
    zeta: float = 0.0

    def to_dict(self):
        return {"S0_hz": self.S0, "S1_hz": self.S1, "S2_hz": self.S2,
                "Delta_rad": self.Delta, "zeta_rad": self.zeta}


def from_principal(p: PrincipalForm) -> QuadrupoleTensor:
    """Cartesian tensor from (Cq, eta, axes)."""
    if not 0 <= p.eta <= 1:
        raise ValueError(f"eta must lie in [0, 1], got {p.eta}")
    qx, qy, qz = p.principal_values()
    r = np.asarray(p.axes, dtype=float)
    cart = r @ np.diag([qx, qy, qz]) @ r.T
    return QuadrupoleTensor(cart)


def to_principal(t: QuadrupoleTensor, nuclear_spin=4.5) -> PrincipalForm:
    """Diagonalize into the X/Z/Y naming convention (see module docstring)."""
    w, v = np.linalg.eigh(t.cart)
    order = np.argsort(-np.abs(w))          # |X| >= |Z| >= |Y|
    qx, qz, qy = w[order]
    ex, ez, ey = v[:, order].T
    axes = np.column_stack([ex, ey, ez])
    if np.linalg.det(axes) < 0:
        axes[:, 1] = -axes[:, 1]
    n = 4 * nuclear_spin * (2 * nuclear_spin - 1)
    cq = n * qx / 2
    eta = (qy - qz) / qx if qx != 0 else 0.0
    spread = np.max(np.abs(w)) if np.max(np.abs(w)) > 0 else 1.0
    unique = np.min(np.abs(np.diff(np.sort(w)))) > 1e-9 * spread
    return PrincipalForm(Cq=cq, eta=eta, axes=axes, nuclear_spin=nuclear_spin,
                         unique=bool(unique))


def from_spherical(s: SphericalForm) -> QuadrupoleTensor:
    """Cartesian tensor from the spherical form via the Q(zeta) matrix."""
    c2 = np.cos(2 * s.zeta + 2 * s.Delta)
    g2 = np.sin(2 * s.zeta + 2 * s.Delta)
    cz, sz = np.cos(s.zeta), np.sin(s.zeta)
    cart = np.array([
        [s.S2 * c2 - s.S0 / 2, s.S2 * g2, s.S1 * cz],
        [s.S2 * g2, -s.S2 * c2 - s.S0 / 2, s.S1 * sz],
        [s.S1 * cz, s.S1 * sz, s.S0],
    ])
    return QuadrupoleTensor(cart)


def to_spherical(t: QuadrupoleTensor, single_axis=False) -> SphericalForm:
    """Extract (S0, S1, S2, Delta, zeta) from a Cartesian tensor.

    With ``single_axis=True`` the unobservable angle is fixed to zeta = 0 and
    Delta is reported in (-pi/2, pi/2] with S2 >= 0, covering the single-axis
    sign priors S1 > 0, S2 > 0, Delta in (-pi/4, pi/4).
    """
    q = t.cart
    s0 = q[2, 2]
    s1 = float(np.hypot(q[0, 2], q[1, 2]))
    zeta = float(np.arctan2(q[1, 2], q[0, 2])) if s1 > 0 else 0.0
    s2 = float(np.hypot(q[0, 1], q[0, 0] + s0 / 2))
    phi = float(np.arctan2(q[0, 1], q[0, 0] + s0 / 2)) if s2 > 0 else 0.0
    delta = (phi - 2 * zeta) / 2
    if single_axis:
        # zeta = 0 representative of the rotation orbit about the
        # quantization axis; Delta is gauge-invariant and kept
        zeta = 0.0
    # Delta is defined modulo pi at fixed S2 >= 0; report in (-pi/2, pi/2]
    delta = delta - np.pi * np.floor(delta / np.pi + 0.5)
    if delta == -np.pi / 2:
        delta = np.pi / 2
    return SphericalForm(S0=s0, S1=s1, S2=s2, Delta=float(delta), zeta=zeta)


def quad_hamiltonian(t: QuadrupoleTensor, nuclear_spin) -> np.ndarray:
    """H_Q/h = sum_ab Q_ab I_a I_b on the (2I+1)-dimensional space."""
    ops = spin_operators(nuclear_spin).vec
    q = t.cart
    h = np.zeros_like(ops[0])
    for a in range(3):
        for b in range(3):
            if q[a, b] != 0:
                h = h + q[a, b] * (ops[a] @ ops[b])
    return h


def reduced_anharmonicity(Cq, eta, nuclear_spin=4.5):
    """Secular ladder anharmonicity omega_Q' = -((eta+1)/2) * 3Cq/(2I(2I-1))."""
    return -((eta + 1) / 2) * 3 * Cq / (2 * nuclear_spin * (2 * nuclear_spin - 1))
