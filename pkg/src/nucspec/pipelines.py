"""End-to-end studies composing the other modules.

Two kinds of work live here: the lambda sweeps that quantify how much
apparent nuclear multipole structure the crystal-field-mixed electron
wavefunction generates through the hyperfine coupling (pseudo-quadrupole
and pseudo-hexadecapole), and the ``reproduce`` workflows that rerun the
published analyses on the in-repo fixture tables and emit machine-readable
pass/fail reports.
"""

import importlib.resources
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import constants, lattice
from .config import load_crystal_field, load_dataset
from .hamiltonian import FullJModelParams, build_fullJ
from .operators import spin_operators, stevens_operator
from .quadrupole import (QuadrupoleTensor, SphericalForm, from_spherical,
                         to_principal, to_spherical)
from . import inference
from .inference import FrequencyDataset, FitSpec, default_spec
from .spectra import signal_curves

DEFAULT_LAMBDAS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)

#: minimum electron-branch overlap below which a sweep point is flagged
BRANCH_WEIGHT_MIN = 0.6

#: lab-frame quadrupole used in the 160-dim model (hexadecapole-fit values,
#: single-axis gauge)
DEFAULT_QUAD_SPH = SphericalForm(S0=-237354.14, S1=2732.0, S2=149451.5,
                                 Delta=0.1858, zeta=0.0)

#: field magnitude (T) and tilts (deg) of the coupled-model operating point
DEFAULT_B0 = 0.454129
DEFAULT_THETA_DEG = -0.5


def _data_path(name):
    return str(importlib.resources.files("nucspec") / "data" / name)


# ---------------------------------------------------------------------------
# pseudo-multipole lambda sweeps

@dataclass
class LambdaSweepResult:
    """Per-lambda fitted effective parameters of a hyperfine sweep.

    ``q_sdq_pq`` is the difference of the secular quadrupole coefficients
    fitted to the two electron branches; ``c4_pseudo`` the fitted diagonal
    quartic coefficient of the down branch.  ``flagged`` marks lambda points
    where branch identification failed (level crossing).
    """

    lambdas: np.ndarray
    b_fit: np.ndarray
    cq_fit: np.ndarray
    eta_fit: np.ndarray
    q_sdq_pq: np.ndarray
    c4_pseudo: np.ndarray
    chi2: np.ndarray
    flagged: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def rows(self):
        """Plot-ready list of per-lambda dicts."""
        out = []
        for k, lam in enumerate(self.lambdas):
            out.append({"lambda": float(lam),
                        "b_fit_t": float(self.b_fit[k]),
                        "cq_fit_hz": float(self.cq_fit[k]),
                        "eta_fit": float(self.eta_fit[k]),
                        "q_sdq_pq_hz": float(self.q_sdq_pq[k]),
                        "c4_pseudo_hz": float(self.c4_pseudo[k]),
                        "chi2": float(self.chi2[k]),
                        "flagged": bool(self.flagged[k])})
        return out


def _aj_tensor(site_r_vec=None, gamma_n=constants.GAMMA_NB):
    """Point-dipole J-space hyperfine tensor (Hz) for the assigned site.

    The electron moment in the 160-dim model is the bare multiplet moment
    gJ muB (isotropic in J space); the anisotropy of the doublet emerges
    from the crystal-field mixing itself.
    """
    if site_r_vec is None:
        site_r_vec = (0.0, 0.0, constants.LATTICE_C * 1e10 / 2)
    g = constants.G_J * constants.MU_B_HZ_PER_T
    return lattice.dipolar_tensor(site_r_vec, (g, g, g), gamma_n)


def base_fullJ_params(coeffs=None, b0=DEFAULT_B0, theta_deg=DEFAULT_THETA_DEG,
                      beta0_deg=constants.BETA0_DEG, quad=None, aj=None,
                      lam=1.0):
    """FullJModelParams at the coupled-model operating point.

    ``coeffs`` is a Stevens-coefficient dict (k, q) -> Hz; omitted, the
    packaged placeholder set (calibrated to the doublet g tensor and the
    0.6 THz first crystal-field gap) is used.
    """
    if coeffs is None:
        coeffs = load_crystal_field(_data_path("crystal_field_placeholder.json"))
    theta, beta0 = np.deg2rad(theta_deg), np.deg2rad(beta0_deg)
    b_vec = b0 * np.array([np.sin(theta),
                           np.cos(theta) * np.sin(beta0),
                           np.cos(theta) * np.cos(beta0)])
    if quad is None:
        quad = from_spherical(DEFAULT_QUAD_SPH)
    if aj is None:
        aj = _aj_tensor()
    return FullJModelParams(B0_vec=b_vec, Bkq=coeffs,
                            nu_I=-constants.GAMMA_NB * b0, Q=quad,
                            AJ=aj, lam=lam)


def _electron_hamiltonian(p: FullJModelParams):
    """Electron-only (Zeeman + crystal field) matrix, dim 2J + 1."""
    ops = spin_operators(p.J)
    b = np.asarray(p.B0_vec, dtype=float)
    h = p.gJ * constants.MU_B_HZ_PER_T * (b[0] * ops.x + b[1] * ops.y
                                          + b[2] * ops.z)
    for (k, q), coeff in sorted(p.Bkq.items()):
        if coeff != 0:
            h = h + coeff * stevens_operator(p.J, k, q)
    return h


def _electron_doublet(p: FullJModelParams):
    """Two lowest electron-only eigenvectors (dim 16) at the sweep field."""
    _, v = np.linalg.eigh(_electron_hamiltonian(p))
    return v[:, :2]


def _branch_ladders(p: FullJModelParams, e_ref):
    """NMR ladders (9 gaps each) of the down/up electron branches.

    The lowest 20 eigenstates of the 160-dim model are partitioned by the
    squared overlap of their electron factor with the zero-coupling doublet
    states ``e_ref``.  Returns (ladder_down, ladder_up, min_weight, ok).
    """
    h = build_fullJ(p)
    w, v = np.linalg.eigh(h)
    di = int(round(2 * p.nuclear_spin + 1))
    # The raw eigenvalues carry an absolute noise floor of eps * ||H|| with
    # ||H|| set by the THz crystal-field terms, which swamps the sub-Hz
    # nuclear structure.  Refine each level as the expectation value of the
    # exact splitting: the electron part evaluated in the electron eigenbasis
    # (so the dominant eigenvalue multiplies exactly its own weight and
    # cancels within a branch) plus a Rayleigh quotient of the small
    # nuclear + hyperfine matrix.
    we, ve = np.linalg.eigh(_electron_hamiltonian(p))
    h_small = build_fullJ(replace(p, Bkq={}, gJ=0.0))
    energies = np.empty(2 * di, dtype=np.longdouble)
    labels, weights = [], []
    for s in range(2 * di):
        vec = v[:, s]
        m = vec.reshape(-1, di)
        c2 = np.abs(ve.conj().T @ m) ** 2
        wb = np.sum(c2, axis=1)
        b0 = int(np.argmax(wb))
        nrm = np.longdouble(np.sum(wb))
        big = (np.longdouble(we[b0])
               + np.longdouble((we - we[b0]) @ wb) / nrm)
        small = np.longdouble(np.real(vec.conj() @ (h_small @ vec))) / nrm
        energies[s] = big + small
        ww = np.sum(np.abs(e_ref.conj().T @ m) ** 2, axis=1)
        labels.append(int(np.argmax(ww)))
        weights.append(float(np.max(ww)))
    labels = np.array(labels)
    ok = (np.min(weights) >= BRANCH_WEIGHT_MIN
          and np.sum(labels == 0) == di and np.sum(labels == 1) == di)
    ladders = []
    for b in (0, 1):
        e = np.sort(energies[labels == b]) if np.sum(labels == b) else None
        ladders.append(np.diff(e).astype(float)
                       if e is not None and len(e) == di else None)
    return ladders[0], ladders[1], float(np.min(weights)), ok


#: full-variant bounds with the hyperfine sign left free (the placeholder
#: crystal field fixes the branch ordering, not the coupling sign)
PQ_FULL_BOUNDS = np.array(inference.FULL_BOUNDS)
PQ_FULL_BOUNDS[1] = (-170e3, 170e3)


def _effective_couplings(p: FullJModelParams, e_ref):
    """First-order doublet-projected hyperfine couplings at lambda = 1.

    Contracts the branch expectation values of J with the J-space tensor.
    The couplings are split along/across the crystal z axis because the
    model applies the nuclear Zeeman along z.  Returns (a_par, a_perp,
    branch_perp): the longitudinal and transverse components of the
    up-minus-down coupling vector and the transverse component seen by the
    lower branch alone.
    """
    ops = spin_operators(p.J)
    aj = np.asarray(p.AJ, dtype=float)
    c = np.zeros((2, 3))
    for b in range(2):
        for a, op in enumerate((ops.x, ops.y, ops.z)):
            jexp = float(np.real(e_ref[:, b].conj() @ op @ e_ref[:, b]))
            c[b] += jexp * aj[a, :]
    diff = c[1] - c[0]
    a_par = float(diff[2])
    a_perp = float(np.hypot(diff[0], diff[1]))
    branch_perp = float(np.hypot(c[0][0], c[0][1]))
    return a_par, a_perp, branch_perp


def pseudo_quadrupole_study(coeffs=None, lambdas=DEFAULT_LAMBDAS,
                            **point_kwargs) -> LambdaSweepResult:
    """Sweep the hyperfine scale and refit with the coupled effective model.

    For each lambda the 160-dim model is diagonalized, the two lowest
    electron branches are identified, and the synthetic 18-value dataset
    (down ladder plus up-minus-down differences) is fitted with the same
    coupled-manifold model used for the measured data, with the transverse
    coupling fixed at its lambda-scaled projected value.  The fitted
    ``Q_sdq`` parameter is the pseudo-quadrupole: the secular-coefficient
    difference left over once the first-order quantization-axis tilt is
    modeled explicitly.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    n = len(lambdas)
    b_fit, cq, eta = np.zeros(n), np.zeros(n), np.zeros(n)
    qpq, chi2 = np.zeros(n), np.zeros(n)
    flagged = np.zeros(n, dtype=bool)
    min_w = np.zeros(n)
    p0 = base_fullJ_params(coeffs, lam=1.0, **point_kwargs)
    e_ref = _electron_doublet(base_fullJ_params(coeffs, lam=0.0,
                                                **point_kwargs))
    _, a_perp1, _ = _effective_couplings(p0, e_ref)
    for k, lam in enumerate(lambdas):
        p = base_fullJ_params(coeffs, lam=float(lam), **point_kwargs)
        dn, up, min_w[k], ok = _branch_ladders(p, e_ref)
        if not ok:
            flagged[k] = True
            b_fit[k] = cq[k] = eta[k] = qpq[k] = chi2[k] = np.nan
            continue
        values = np.concatenate([dn, up - dn])
        ds = FrequencyDataset(tuple(f"pq{j}" for j in range(18)), "full",
                              values, np.ones(18))
        spec = FitSpec(variant="full", names=inference.FULL_NAMES,
                       bounds=PQ_FULL_BOUNDS,
                       fixed={"A_perp": float(lam) * a_perp1})
        x = inference.initial_guess(spec, ds)
        model = inference._variant_model(spec, ds)
        qpq[k] = x[7]
        b_fit[k] = x[0]
        pr = to_principal(from_spherical(SphericalForm(
            S0=x[2], S1=x[3], S2=x[4], Delta=x[5], zeta=x[6])))
        cq[k], eta[k] = pr.Cq, pr.eta
        chi2[k] = float(inference.chi_square(model(x), ds))
    return LambdaSweepResult(lambdas, b_fit, cq, eta, qpq, np.zeros(n),
                             chi2, flagged,
                             {"min_branch_weight": min_w.tolist(),
                              "a_perp_scale_hz": a_perp1})


HEX_SWEEP_NAMES = ("B0", "S0", "S1", "S2", "Delta", "C4")
HEX_SWEEP_BOUNDS = np.vstack([inference.GROUND_BOUNDS[:1],
                              inference.MULTIPOLE_BOUNDS])


def _hex_sweep_model(theta, a_perp=0.0):
    """Six-parameter differential model with the field left free.

    ``a_perp`` carries the known first-order transverse coupling of the
    fitted branch (an I_x term); without it the quantization-axis tilt
    aliases into the quartic coefficient.
    """
    theta = np.asarray(theta, dtype=float)
    b0, s0, s1, s2, delta, c4 = np.moveaxis(theta, -1, 0)
    q = inference._quad_cart_stack(s0, s1, s2, delta, 0.0)
    h = inference._manifold_stack(-constants.GAMMA_NB * b0, q, ms=1.0,
                                  a_perp=a_perp, c4=c4)
    w = np.linalg.eigvalsh(h)
    return np.diff(np.diff(w, axis=-1), axis=-1)


def pseudo_hexadecapole_study(coeffs=None, lambdas=DEFAULT_LAMBDAS,
                              **point_kwargs) -> LambdaSweepResult:
    """Sweep the hyperfine scale and fit down-branch differentials.

    Synthetic differential frequencies (nearest-neighbour ladder
    differences, 8 per lambda) are fitted with the effective model
    including the quartic diagonal term and a free field magnitude.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    n = len(lambdas)
    b_fit, cq, eta = np.zeros(n), np.zeros(n), np.zeros(n)
    c4, chi2 = np.zeros(n), np.zeros(n)
    flagged = np.zeros(n, dtype=bool)
    min_w = np.zeros(n)
    e_ref = _electron_doublet(base_fullJ_params(coeffs, lam=0.0,
                                                **point_kwargs))
    _, _, branch_perp1 = _effective_couplings(
        base_fullJ_params(coeffs, lam=1.0, **point_kwargs), e_ref)
    b0_in = point_kwargs.get("b0", DEFAULT_B0)
    spec = FitSpec(variant="hexadecapole", names=HEX_SWEEP_NAMES,
                   bounds=HEX_SWEEP_BOUNDS)
    rng = np.random.default_rng(0)
    x_prev = None
    for k, lam in enumerate(lambdas):
        p = base_fullJ_params(coeffs, lam=float(lam), **point_kwargs)
        dn, _, min_w[k], ok = _branch_ladders(p, e_ref)
        if not ok:
            flagged[k] = True
            b_fit[k] = cq[k] = eta[k] = c4[k] = chi2[k] = np.nan
            continue
        diffs = np.diff(dn)
        ds = FrequencyDataset(tuple(f"ph{j}" for j in range(len(diffs))),
                              "differential", diffs, np.ones(len(diffs)))
        sph = to_spherical(p.Q, single_axis=True)
        seed = np.array([b0_in, sph.S0, sph.S1, sph.S2, sph.Delta, 0.0])
        a_perp = float(lam) * branch_perp1

        def model(t, a_perp=a_perp):
            return _hex_sweep_model(t, a_perp=a_perp)

        # The cost surface has shallow local minima once the transverse
        # coupling tilts the quantisation axis, so track the solution by
        # continuation from the previous lambda and add a few perturbed
        # restarts, keeping the lowest chi-square.
        starts = [seed] if x_prev is None else [x_prev, seed]
        x, best = None, np.inf
        for s in starts:
            for trial in range(3):
                x0 = s if trial == 0 else s * (
                    1.0 + 1e-4 * rng.standard_normal(len(s)))
                xt = inference.initial_guess(spec, ds, model=model, x0=x0)
                for _ in range(3):
                    xt = inference.initial_guess(spec, ds, model=model, x0=xt)
                c = float(inference.chi_square(model(xt), ds))
                if c < best:
                    best, x = c, xt
        x_prev = x.copy()
        b_fit[k], c4[k] = x[0], x[5]
        pr = to_principal(from_spherical(SphericalForm(
            S0=x[1], S1=x[2], S2=x[3], Delta=x[4], zeta=0.0)))
        cq[k], eta[k] = pr.Cq, pr.eta
        chi2[k] = float(inference.chi_square(model(x), ds))
    return LambdaSweepResult(lambdas, b_fit, cq, eta, np.zeros(n), c4,
                             chi2, flagged,
                             {"min_branch_weight": min_w.tolist(),
                              "b0_input": b0_in})


def quadratic_scaling_residual(lambdas, values, lam_max=0.6):
    """Relative residual of values(lambda) from a pure quadratic.

    Fits ``values = a lambda^2`` over the points with lambda <= lam_max and
    returns max |values - a lambda^2| / max |values| over that range.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    values = np.asarray(values, dtype=float)
    sel = (lambdas <= lam_max + 1e-12) & ~np.isnan(values)
    lam2 = lambdas[sel] ** 2
    v = values[sel]
    denom = np.max(np.abs(v))
    if denom == 0:
        return 0.0
    a = np.dot(lam2, v) / np.dot(lam2, lam2)
    return float(np.max(np.abs(v - a * lam2)) / denom)


def linear_r_squared(x, y):
    """Coefficient of determination of an affine fit y ~ a + b x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sel = ~np.isnan(y)
    x, y = x[sel], y[sel]
    b, a = np.polyfit(x, y, 1)
    ss_res = np.sum((y - a - b * x) ** 2)
    ss_tot = np.sum((y - np.mean(y)) ** 2)
    if ss_tot == 0:
        return 1.0
    return float(1.0 - ss_res / ss_tot)


# ---------------------------------------------------------------------------
# synthetic count records for the bootstrap demonstration

def synthetic_count_records(n_averages, seed=0, f0=5.0, n_tau=41,
                            tau_max=0.8, decay_time=1.2, counts_per_shot=0.04):
    """Per-delay single-shot Poisson count arrays for a Ramsey fringe.

    Returns (delays, records) where ``records[k]`` holds ``n_averages``
    Poisson draws at delay ``delays[k]``.  The default photon budget is
    tuned so a 600-average record bootstraps to a frequency uncertainty of
    a few mHz.
    """
    tau = np.linspace(0.0, tau_max, n_tau)
    prob, _ = signal_curves("ramsey", f0, tau, decay_time)
    rng = np.random.Generator(np.random.Philox(key=[seed, 7]))
    records = [rng.poisson(counts_per_shot * prob[k], size=n_averages)
               for k in range(n_tau)]
    return tau, records


def bootstrap_scaling(seed=0, n_resamples=400, **record_kwargs):
    """sd(150-average) / sd(600-average) for one synthetic dataset.

    The 600-average record is split into four 150-average subsets; the
    subset standard deviations are pooled (rms) before taking the ratio.
    """
    f0 = record_kwargs.get("f0", 5.0)
    tau, rec = synthetic_count_records(600, seed=seed, **record_kwargs)
    sd600 = inference.bootstrap(tau, rec, f0, n_resamples=n_resamples,
                                seed=seed)["sd"]
    sds = []
    for j in range(4):
        sub = [r[150 * j:150 * (j + 1)] for r in rec]
        sds.append(inference.bootstrap(tau, sub, f0, n_resamples=n_resamples,
                                       seed=seed + 31 * (j + 1))["sd"])
    sd150 = float(np.sqrt(np.mean(np.square(sds))))
    return {"sd_600": float(sd600), "sd_150": sd150,
            "ratio": sd150 / sd600}


# ---------------------------------------------------------------------------
# reproduction workflows

WORKFLOWS = ("ground_fit", "excited_fit", "full_fit", "hexadecapole_fit",
             "site_assignment", "isotope_id", "electric_dipole",
             "bootstrap_demo")


def _check(name, computed, published, tol):
    ok = bool(abs(computed - published) <= tol)
    return {"name": name, "computed": float(computed),
            "published": float(published), "tolerance": float(tol),
            "pass": ok}


def _interval_check(name, computed, lo, hi):
    return {"name": name, "computed": float(computed),
            "published": [float(lo), float(hi)],
            "tolerance": 0.0, "pass": bool(lo <= computed <= hi)}


def _fit_report(variant, data_file, checks, seed=0, iterations=10000,
                **fit_kwargs):
    ds = load_dataset(_data_path(data_file))
    _, summ = inference.fit_variant(variant, ds, seed=seed,
                                    iterations=iterations, **fit_kwargs)
    # Reduced chi-square as quoted for the ladder fits: the posterior is
    # sampled with the measured per-point uncertainties, but the figure of
    # merit is evaluated at the median parameter vector against a uniform
    # 1 Hz scale.
    spec = inference.default_spec(variant, seed=seed, iterations=iterations,
                                  **fit_kwargs)
    model = inference._variant_model(spec, ds)
    med = np.array([summ["median"][n] for n in spec.names])
    resid = model(med) - ds.values
    summ["chi2_nu_median_unit"] = float(resid @ resid) / summ["dof"]
    rows = [chk(summ) for chk in checks]
    return summ, rows


def reproduce(workflow, seed=0, iterations=10000):
    """Run one named analysis on fixture data; JSON-ready pass/fail report.

    Every report carries the same top-level keys: workflow, seed, status
    (``pass`` / ``fail`` / ``conditional``), elapsed_s, checks (list of
    name/computed/published/tolerance/pass records) and details.
    """
    if workflow not in WORKFLOWS:
        raise ValueError(f"unknown workflow {workflow!r}; "
                         f"choose from {WORKFLOWS}")
    t0 = time.time()
    checks, details = [], {}

    if workflow == "ground_fit":
        summ, checks = _fit_report("ground", "ladder_ground.csv", [
            lambda s: _check("B0_t", s["median"]["B0"], 0.46054333, 3 * 8e-8),
            lambda s: _check("S0_hz", s["median"]["S0"], -237353.0, 3 * 0.1),
            lambda s: _check("S2_hz", s["median"]["S2"], 149443.0, 3 * 1.0),
            lambda s: _interval_check("chi2_nu", s["chi2_nu_median_unit"],
                                      0.45, 1.05),
        ], seed=seed, iterations=iterations)
        details["summary"] = summ
    elif workflow == "excited_fit":
        ref = load_dataset(_data_path("ladder_ground.csv")).values
        summ, checks = _fit_report("excited", "ladder_excited_diff.csv", [
            lambda s: _check("B0_t", s["median"]["B0"], 0.447732, 3 * 7e-6),
            lambda s: _check("S0_hz", s["median"]["S0"], -237224.0, 3 * 11.0),
        ], seed=seed, iterations=iterations,
            fixed={"reference_down": ref})
        details["summary"] = summ
    elif workflow == "full_fit":
        summ, checks = _fit_report("full", "ladder_full.csv", [
            lambda s: _check("Q_sdq_hz", s["median"]["Q_sdq"], 66.0, 18.0),
            lambda s: _check("A_par_hz", s["median"]["A_par"], 133497.0, 50.0),
            lambda s: _interval_check("chi2_nu", s["chi2_nu"], 0.8, 1.8),
        ], seed=seed, iterations=iterations)
        details["summary"] = summ
    elif workflow == "hexadecapole_fit":
        summ, checks = _fit_report("hexadecapole", "differentials.csv", [
            lambda s: _check("C4_hz", s["median"]["C"], 9.6, 0.3),
            lambda s: _check("S0_hz", s["median"]["S0"], -237354.14, 1.0),
        ], seed=seed, iterations=iterations)
        details["summary"] = summ
    elif workflow == "site_assignment":
        cfg = lattice.CrystalConfig()
        ranked = lattice.assign_site(cfg, 133.5e3, 8.0, 55e3, 9e3,
                                     theta=np.deg2rad(-0.5))
        top = ranked[0]
        checks = [{"name": "top_site_type", "computed": int(top["type"]),
                   "published": 3, "tolerance": 0.0,
                   "pass": bool(top["type"] == 3)}]
        details["ranking"] = ranked
    elif workflow == "isotope_id":
        name, value, margin = lattice.identify_isotope(10.61)
        checks = [{"name": "isotope", "computed": name, "published": "93Nb",
                   "tolerance": 0.0, "pass": bool(name == "93Nb")}]
        details["gamma_mhz_per_t"] = float(value)
        details["margin_mhz_per_t"] = float(margin)
    elif workflow == "electric_dipole":
        cfg = lattice.CrystalConfig()
        res = lattice.electric_dipole(cfg, b0=DEFAULT_B0,
                                      theta=np.deg2rad(-0.5))
        pub_d = (-0.26, 0.25, 0.02)
        pub_e = (34.0, -33.6, 7.0)
        for ax, want, got in zip("xyz", pub_d, res["d_mD"]):
            checks.append(_check(f"d_{ax}_mD", got, want, 0.1 * abs(want)))
        for ax, want, got in zip("xyz", pub_e, res["E_V_per_cm"]):
            checks.append(_check(f"E_{ax}_V_per_cm", got, want,
                                 0.1 * abs(want)))
        checks.append(_check("Vzz_uV_per_A2", res["Vzz_uV_per_A2"], 0.02,
                             0.1 * 0.02))
        details["result"] = {k: (v.tolist() if isinstance(v, np.ndarray)
                                 else v) for k, v in res.items()}
    elif workflow == "bootstrap_demo":
        one = bootstrap_scaling(seed=seed, n_resamples=200)
        checks = [
            _interval_check("sd_600_hz", one["sd_600"], 0.02, 0.1),
            _check("ratio_150_over_600", one["ratio"], 2.0, 0.4),
        ]
        details["scaling"] = one

    status = "pass" if all(c["pass"] for c in checks) else "fail"
    return {"workflow": workflow, "seed": int(seed), "status": status,
            "elapsed_s": float(time.time() - t0), "checks": checks,
            "details": details}
