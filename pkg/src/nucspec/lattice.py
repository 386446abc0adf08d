"""Scheelite lattice geometry, point-dipole hyperfine, and site assignment.

The paramagnetic ion substitutes a Ca site; candidate nuclear-spin hosts are
the ten nearest W sites, grouped in three symmetry classes by distance:

* type 1: four in-plane neighbours at (+/-a/2, +/-a/2, 0), r = 3.71 A
* type 2: four neighbours at (0, +/-a/2, -c/4) and (+/-a/2, 0, +c/4),
  r = 3.87 A
* type 3: two on-axis neighbours at (0, 0, +/-c/2), r = 5.69 A

All positions are displacements from the electron site in Angstrom, in the
crystal frame (z along the c axis).  The module also carries the
magnetically-induced electric-dipole estimate for the electron spin and the
table of stable I = 9/2 isotopes used for species identification.
"""

from dataclasses import dataclass, field

import numpy as np

from . import constants
from .hamiltonian import secular_projection

#: nuclear electric quadrupole moment of 93Nb (m^2)
QUAD_MOMENT_NB = -0.32e-28

#: stable I = 9/2 nuclei and their gyromagnetic ratios (MHz/T)
ISOTOPES = (
    ("73Ge", -1.489),
    ("83Kr", -1.644),
    ("87Sr", -1.851),
    ("93Nb", 10.452),
    ("113In", 9.365),
    ("115In", 9.386),
    ("209Bi", 6.962),
)


def _default_sites(a, c):
    sites = []
    for sx in (1, -1):
        for sy in (1, -1):
            sites.append((f"type1_{'p' if sx > 0 else 'm'}{'p' if sy > 0 else 'm'}",
                          1, np.array([sx * a / 2, sy * a / 2, 0.0])))
    for s in (1, -1):
        sites.append((f"type2_y{'p' if s > 0 else 'm'}", 2,
                      np.array([0.0, s * a / 2, -c / 4])))
        sites.append((f"type2_x{'p' if s > 0 else 'm'}", 2,
                      np.array([s * a / 2, 0.0, c / 4])))
    for s in (1, -1):
        sites.append((f"type3_{'top' if s > 0 else 'bottom'}", 3,
                      np.array([0.0, 0.0, s * c / 2])))
    return tuple(sites)


@dataclass(frozen=True)
class CrystalConfig:
    """Crystal geometry and electron magnetic parameters.

    Lattice constants are in Angstrom; gyromagnetic values in Hz/T (signed);
    ``beta0`` is the out-of-plane tilt of the applied field in radians.
    ``eps_r`` is the relative permittivity used to screen electrostatic
    quantities inside the crystal.
    """

    a: float = constants.LATTICE_A * 1e10
    c: float = constants.LATTICE_C * 1e10
    gamma_par: float = constants.GAMMA_PAR
    gamma_perp: float = constants.GAMMA_PERP
    beta0: float = np.deg2rad(constants.BETA0_DEG)
    eps_r: float = 12.4
    sites: tuple = None

    def __post_init__(self):
        if self.sites is None:
            object.__setattr__(self, "sites", _default_sites(self.a, self.c))
        if len(self.sites) != 10:
            raise ValueError("site catalog must contain the 10 nearest W sites")

    def gamma_tensor(self):
        return np.diag([self.gamma_perp, self.gamma_perp, self.gamma_par])

    def field_direction(self, theta):
        """Unit field direction at in-plane angle theta (rad) from the c
        projection, tilted out of plane by beta0."""
        return np.array([
            np.sin(theta),
            np.cos(theta) * np.sin(self.beta0),
            np.cos(theta) * np.cos(self.beta0),
        ])


def dipolar_tensor(r_vec, gamma_e, gamma_n):
    """Point-dipole hyperfine tensor (Hz) for displacement ``r_vec`` (A).

    ``gamma_e`` is the (gamma_x, gamma_y, gamma_z) diagonal of the electron
    gyromagnetic tensor and ``gamma_n`` the nuclear gyromagnetic ratio, all
    in Hz/T.  A_ab = (mu0 h gamma_e,a gamma_n / 4 pi r^3)(delta_ab -
    3 rhat_a rhat_b): the anisotropic electron moment weights the rows.
    """
    r_vec = np.asarray(r_vec, dtype=float)
    r = np.linalg.norm(r_vec)
    if r < 0.5:
        raise ValueError("point-dipole approximation invalid below 0.5 A")
    rhat = r_vec / r
    ang = np.eye(3) - 3 * np.outer(rhat, rhat)
    pref = constants.MU0 * constants.H_PLANCK * gamma_n / (4 * np.pi * (r * 1e-10) ** 3)
    return pref * np.asarray(gamma_e, dtype=float)[:, None] * ang


def site_tensor(config: CrystalConfig, site, gamma_n=constants.GAMMA_NB):
    """Dipolar hyperfine tensor for one catalog entry (site_id or tuple)."""
    if isinstance(site, str):
        match = [s for s in config.sites if s[0] == site]
        if not match:
            raise KeyError(f"unknown site {site!r}")
        site = match[0]
    _, _, r_vec = site
    gdiag = np.array([config.gamma_perp, config.gamma_perp, config.gamma_par])
    return dipolar_tensor(r_vec, gdiag, gamma_n)


def angular_sweep(config: CrystalConfig, site, thetas, gamma_n=constants.GAMMA_NB):
    """(A_par, A_perp) of one site for each in-plane field angle (rad)."""
    a_full = site_tensor(config, site, gamma_n)
    gamma = config.gamma_tensor()
    out = np.empty((len(thetas), 2))
    for k, th in enumerate(thetas):
        out[k] = secular_projection(a_full, gamma, config.field_direction(th))
    return out


def assign_site(config: CrystalConfig, a_par, a_par_sigma, a_perp,
                a_perp_sigma, theta, gamma_n=constants.GAMMA_NB):
    """Rank catalog sites by chi-square against measured (A_par, A_perp).

    The comparison uses magnitudes (the overall sign of the couplings is a
    convention).  Returns a list of dicts sorted by ascending chi2; exact
    chi2 ties are broken by Euclidean distance.
    """
    gamma = config.gamma_tensor()
    b_hat = config.field_direction(theta)
    rows = []
    for site_id, site_type, r_vec in config.sites:
        a_full = site_tensor(config, (site_id, site_type, r_vec), gamma_n)
        ap, at = secular_projection(a_full, gamma, b_hat)
        chi2 = ((abs(ap) - abs(a_par)) / a_par_sigma) ** 2 + \
            ((abs(at) - abs(a_perp)) / a_perp_sigma) ** 2
        dist = float(np.hypot(abs(ap) - abs(a_par), abs(at) - abs(a_perp)))
        rows.append({"site": site_id, "type": site_type, "A_par": ap,
                     "A_perp": at, "chi2": float(chi2), "distance": dist})
    return sorted(rows, key=lambda r: (r["chi2"], r["distance"]))


def gamma_eff(b_direction, gamma_par=constants.GAMMA_PAR,
              gamma_perp=constants.GAMMA_PERP):
    """Effective electron gyromagnetic ratio along a unit field direction."""
    b = np.asarray(b_direction, dtype=float)
    n = np.linalg.norm(b)
    if not np.isclose(n, 1.0, atol=1e-6):
        raise ValueError("field direction must be a unit vector")
    g = np.array([gamma_perp, gamma_perp, gamma_par])
    return float(np.linalg.norm(g * b))


def identify_isotope(gamma_measured_mhz, table=ISOTOPES):
    """Best-matching I = 9/2 isotope for a measured |gamma| in MHz/T.

    Returns (name, table value, margin) where margin is the distance gap to
    the runner-up.
    """
    diffs = sorted(table, key=lambda e: abs(abs(e[1]) - abs(gamma_measured_mhz)))
    best, second = diffs[0], diffs[1]
    margin = abs(abs(second[1]) - abs(gamma_measured_mhz)) - \
        abs(abs(best[1]) - abs(gamma_measured_mhz))
    return best[0], best[1], float(margin)


def _dipole_tensor_T():
    """Spin-field-field coupling tensor T_kij in SI, (J/T)/(V/m)."""
    t = np.zeros((3, 3, 3))

    def sym(k, i, j, v):
        t[k, i, j] = v
        t[k, j, i] = v

    sym(0, 2, 0, 1.4e-32)
    sym(0, 2, 1, 1.0e-32)
    sym(2, 0, 0, 5.4e-32)
    sym(2, 1, 0, 2.9e-32)
    sym(2, 1, 1, -5.4e-32)
    sym(1, 2, 1, -1.4e-32)
    sym(1, 2, 0, -1.0e-32)
    return t


def electric_dipole(config: CrystalConfig, b0, theta, m_s="down", r_nb=None,
                    t_tensor=None, nuclear_spin=4.5,
                    quad_moment=QUAD_MOMENT_NB):
    """Spin-state electric dipole and its field/gradient at the nuclear site.

    ``b0`` is the field magnitude (T) applied at in-plane angle ``theta``
    (rad, out-of-plane tilt from the config).  Returns a dict with the
    dipole ``d_mD`` (milli-Debye, crystal frame), the screened electric
    field ``E_V_per_cm`` at ``r_nb`` (default: the on-axis type-3 site), the
    screened gradient ``Vzz_uV_per_A2`` and the resulting quadrupole shift
    estimate ``Q_sdq_dipole_Hz``.

    The electron polarization uses the saturated convention |<S>| = 1 with
    the sign set by the electron state; fields inside the crystal are
    screened by ``config.eps_r``.  A field exactly along the c axis gives a
    strictly zero dipole; the returned dict flags that degeneracy.
    """
    t = _dipole_tensor_T() if t_tensor is None else np.asarray(t_tensor)
    b_hat = config.field_direction(theta)
    g_b = np.array([config.gamma_perp, config.gamma_perp, config.gamma_par]) * b_hat
    sign = -1.0 if m_s in ("down", -0.5) else +1.0
    degenerate = np.hypot(b_hat[0], b_hat[1]) < 1e-12
    s_vec = np.zeros(3) if degenerate else sign * g_b / np.linalg.norm(g_b)
    d = np.einsum('kij,i,j->k', t, s_vec, b0 * b_hat)  # C m

    if r_nb is None:
        r_nb = np.array([0.0, 0.0, config.c / 2])
    r_vec = np.asarray(r_nb, dtype=float) * 1e-10
    r = np.linalg.norm(r_vec)
    rhat = r_vec / r
    pref = 1.0 / (4 * np.pi * constants.EPS0 * config.eps_r)
    e_field = pref * (3 * np.dot(d, rhat) * rhat - d) / r ** 3

    # on-axis zz-gradient of the dipole field, d/dz of E_z along rhat ~ z
    vzz = -pref * 6 * np.dot(d, rhat) / r ** 4

    n_norm = 2 * nuclear_spin * (2 * nuclear_spin - 1)
    q_sdq = constants.E_CHARGE * quad_moment * vzz / (n_norm * constants.H_PLANCK)
    return {
        "d_mD": d / (constants.DEBYE * 1e-3),
        "E_V_per_cm": e_field / 100.0,
        "Vzz_uV_per_A2": vzz * 1e-14,
        "Q_sdq_dipole_Hz": float(q_sdq),
        "degenerate": bool(degenerate),
    }
