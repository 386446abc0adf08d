"""First-order perturbation theory for the hyperfine-mixed nuclear ladder.

The nuclear Zeeman + secular quadrupole part is treated as the unperturbed
Hamiltonian; transverse hyperfine (single-quantum) and the non-secular
quadrupole terms (double-quantum) mix neighbouring levels.  Everything here
is closed-form and is meant to be validated against exact diagonalization,
never to replace it: level labels use the n = 0..2I convention with the
mapping m_I = I - n (ascending energy for a negative nuclear Zeeman term).
"""

from dataclasses import dataclass

import numpy as np

from .operators import dimension

#: transverse-hyperfine azimuth: the in-plane hyperfine axis sits at 45 deg
#: from the crystal x axis for the c-axis site.
ALPHA_HF = np.pi / 4

#: first-order mixing beyond this magnitude is flagged as unreliable
MIXING_VALIDITY = 0.3

#: denominators closer than this to zero (Hz) indicate a level crossing
CROSSING_TOL = 1e3


@dataclass(frozen=True)
class ReducedQuadParams:
    """Reduced quadrupole parameters of the secular/non-secular split.

    ``omega_Q_prime`` is the (signed, Hz) anharmonicity of the nuclear
    ladder, ``eta_prime`` the signed non-secular asymmetry combination and
    ``alpha`` the azimuth mismatch between the transverse hyperfine axis and
    the in-plane quadrupole axis.
    """

    omega_Q_prime: float
    eta_prime: float
    alpha: float


@dataclass(frozen=True)
class MixingInputs:
    """Everything the analytic mixing formulas need besides (m_S, m_I).

    ``S1``/``zeta`` describe the single-quantum part of the quadrupole
    tensor; the printed mixing formulas ignore it (it is equal in both
    electron manifolds and cancels to leading order in transition
    frequencies) but the perturbed-state builder can include it, which
    matters for the small drive matrix elements.
    """

    reduced: ReducedQuadParams
    A_par: float
    A_perp: float
    omega_I: float
    S1: float = 0.0
    zeta: float = 0.0
    nuclear_spin: float = 4.5


def reduced_params(Cq, eta, alpha_Q=0.0, alpha_hf=ALPHA_HF, nuclear_spin=4.5):
    """Reduced (omega_Q', eta', alpha) from the principal-frame (Cq, eta).

    omega_Q' = -((eta+1)/2) * 3 Cq / (2I(2I-1)) and
    eta' = (eta - 3)/(1 + eta); alpha = alpha_hf - alpha_Q.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    i = nuclear_spin
    wq = -(eta + 1) / 2 * 3 * Cq / (2 * i * (2 * i - 1))
    etap = (eta - 3) / (1 + eta)
    return ReducedQuadParams(omega_Q_prime=wq, eta_prime=etap,
                             alpha=alpha_hf - alpha_Q)


def reduced_from_spherical(s, nuclear_spin=4.5):
    """Reduced parameters straight from a spherical-form tensor.

    The ladder anharmonicity equals three times the axial component,
    omega_Q' = 3 S0.  The double-quantum coupling of the tensor is
    (S2/2) exp(-2i(zeta+Delta)) I+^2 + h.c.; rewriting it in the
    (omega_Q' eta'/12) exp(-2i alpha) form fixes alpha = zeta + Delta when
    S2 and omega_Q' eta' share a sign and shifts it by pi/2 otherwise (the
    magnitude pair (omega_Q', eta') cannot carry the in-plane sign of S2).
    Validated against exact diagonalization for both sign cases.
    """
    from .quadrupole import from_spherical, to_principal

    pf = to_principal(from_spherical(s), nuclear_spin=nuclear_spin)
    etap = (pf.eta - 3) / (1 + pf.eta)
    wq = 3 * s.S0
    alpha = s.zeta + s.Delta
    if s.S2 * wq * etap < 0:
        alpha -= np.pi / 2
    return ReducedQuadParams(omega_Q_prime=wq, eta_prime=etap, alpha=alpha)


def ladder_coeffs(nuclear_spin, m):
    """(C+, C-, D+, D-) ladder matrix elements at magnetic number m.

    C(+/-)_m = <m +/- 1|I_+/-|m> = sqrt(I(I+1) - m(m +/- 1)); the
    two-quantum D(+/-)_m = C(+/-)_m * C(+/-)_{m +/- 1}.  Coefficients off
    the end of the ladder are zero.
    """
    i = nuclear_spin
    if abs(m) > i + 1e-12:
        raise ValueError("|m| must not exceed the spin")

    def c(sign, mm):
        val = i * (i + 1) - mm * (mm + sign)
        return np.sqrt(val) if val > 0 else 0.0

    cp, cm = c(+1, m), c(-1, m)
    dp = cp * c(+1, m + 1)
    dm = cm * c(-1, m - 1)
    return cp, cm, dp, dm


def mixing_coefficients(p: MixingInputs, m_s, m_i):
    """First-order amplitudes (M+1, M-1, M+2, M-2) mixing |m_I +/- 1, 2>.

    Returns ``(coeffs, flags)`` where ``flags`` is a dict with ``valid``
    (all |M| below the first-order threshold) and ``crossing`` (some
    denominator within 1 kHz of zero).
    """
    r = p.reduced
    wq, etap, alpha = r.omega_Q_prime, r.eta_prime, r.alpha
    cp, cm, dp, dm = ladder_coeffs(p.nuclear_spin, m_i)
    den = {
        +1: p.omega_I + p.A_par * m_s + wq * (m_i + 0.5),
        -1: p.omega_I + p.A_par * m_s + wq * (m_i - 0.5),
        +2: p.omega_I + p.A_par * m_s + wq * (m_i + 1.0),
        -2: p.omega_I + p.A_par * m_s + wq * (m_i - 1.0),
    }
    crossing = any(abs(d) < CROSSING_TOL for d in den.values())

    def safe(num, d):
        return 0.0 if abs(d) < CROSSING_TOL else num / d

    m_p1 = -safe(cp * p.A_perp * m_s / 2, den[+1])
    m_m1 = +safe(cm * p.A_perp * m_s / 2, den[-1])
    m_p2 = -np.exp(-2j * alpha) * safe(dp * wq * etap / 12, 2 * den[+2])
    m_m2 = +np.exp(+2j * alpha) * safe(dm * wq * etap / 12, 2 * den[-2])
    coeffs = (m_p1, m_m1, m_p2, m_m2)
    valid = all(abs(c) < MIXING_VALIDITY for c in coeffs)
    return coeffs, {"valid": valid, "crossing": crossing}


def perturbed_state(p: MixingInputs, m_s, m_i):
    """Normalized first-order eigenvector in the m-descending nuclear basis.

    Includes the hyperfine/double-quantum amplitudes of
    ``mixing_coefficients`` plus, when ``p.S1`` is nonzero, the
    single-quantum quadrupole amplitudes (S1/2) e^{-i zeta} (2m+1) C+ and
    (S1/2) e^{+i zeta} (2m-1) C- over the same denominators.
    """
    coeffs, flags = mixing_coefficients(p, m_s, m_i)
    i = p.nuclear_spin
    dim = dimension(i)
    vec = np.zeros(dim, dtype=complex)

    def idx(m):
        return int(round(i - m))

    vec[idx(m_i)] = 1.0
    shifts = [+1, -1, +2, -2]
    amps = list(coeffs)
    if p.S1 != 0.0:
        wq = p.reduced.omega_Q_prime
        cp, cm, _, _ = ladder_coeffs(i, m_i)
        den_p = p.omega_I + p.A_par * m_s + wq * (m_i + 0.5)
        den_m = p.omega_I + p.A_par * m_s + wq * (m_i - 0.5)
        if min(abs(den_p), abs(den_m)) >= CROSSING_TOL:
            shifts += [+1, -1]
            amps += [
                -(p.S1 / 2) * np.exp(-1j * p.zeta) * (2 * m_i + 1) * cp / den_p,
                +(p.S1 / 2) * np.exp(+1j * p.zeta) * (2 * m_i - 1) * cm / den_m,
            ]
    for shift, amp in zip(shifts, amps):
        m_new = m_i + shift
        if abs(m_new) <= i + 1e-12:
            vec[idx(m_new)] += amp
    return vec / np.linalg.norm(vec), flags


def approx_elements(p: MixingInputs, n):
    """Analytic electron-drive matrix elements at level pair around n.

    Returns a dict with the two sideband elements <down, n+1|S_x|up, n>
    (``plus``) and <down, n-1|S_x|up, n> (``minus``) plus the carrier
    element (``diag``), together with the validity flags.  Levels are
    labeled ascending in energy; m_I = I - n.  The elements are overlaps of
    the first-order perturbed states of the two manifolds (times the 1/2
    electron factor); ``plus_leading``/``minus_leading`` carry the one-term
    closed forms -/+ (1/4) A_perp C-/+ / (omega_I + omega_Q' (m -/+ 1/2)).
    """
    i = p.nuclear_spin
    if not 0 <= n <= 2 * i:
        raise ValueError("level index out of range")
    m = i - n
    wq = p.reduced.omega_Q_prime
    cp, cm, _, _ = ladder_coeffs(i, m)
    den_minus = p.omega_I + wq * (m - 0.5)   # pairs n with n + 1
    den_plus = p.omega_I + wq * (m + 0.5)    # pairs n with n - 1
    crossing = min(abs(den_minus), abs(den_plus)) < CROSSING_TOL
    lead_plus = 0.0 if abs(den_minus) < CROSSING_TOL else \
        p.A_perp * cm / (4 * den_minus)
    lead_minus = 0.0 if abs(den_plus) < CROSSING_TOL else \
        -p.A_perp * cp / (4 * den_plus)

    up_n, fl_up = perturbed_state(p, +0.5, m)
    el = {}
    for key, n_other in (("plus", n + 1), ("minus", n - 1)):
        if 0 <= n_other <= 2 * i:
            dn_other, fl_dn = perturbed_state(p, -0.5, i - n_other)
            el[key] = 0.5 * np.vdot(dn_other, up_n)
            crossing = crossing or fl_up["crossing"] or fl_dn["crossing"]
        else:
            el[key] = 0.0
    dn_n, _ = perturbed_state(p, -0.5, m)
    valid = max(abs(lead_plus), abs(lead_minus)) < MIXING_VALIDITY
    return {
        "plus": el["plus"],
        "minus": el["minus"],
        "plus_leading": lead_plus,
        "minus_leading": lead_minus,
        "diag": 0.5 * np.vdot(dn_n, up_n),
        "valid": valid,
        "crossing": crossing,
    }
