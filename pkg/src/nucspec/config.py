"""Configuration and dataset I/O.

Model configuration is INI-style text with a fixed schema (sections and key
names are documented in docs/formats.md).  Unknown sections or keys are
rejected so typos fail loudly.  Datasets are CSV files with the header
``id,kind,value_hz,sigma_hz``.  All floating-point output is serialized with
17 significant digits so a write/read round trip is bit exact.
"""

import configparser
import csv
import io
import json

import numpy as np

from . import constants
from .hamiltonian import (EffectiveModelParams, FullJModelParams,
                          ResonatorParams)
from .inference import FrequencyDataset
from .lattice import CrystalConfig
from .quadrupole import (PrincipalForm, QuadrupoleTensor, SphericalForm,
                         from_principal, from_spherical)

FLOAT_FMT = "%.17g"

#: allowed keys per section of a model config
SCHEMA = {
    "field": {"b0_t", "theta_deg", "beta0_deg"},
    "nuclear": {"gamma_hz_per_t", "spin", "nu_i_hz"},
    "quadrupole": {"parameterization",
                   "s0_hz", "s1_hz", "s2_hz", "delta_rad", "zeta_rad",
                   "cq_hz", "eta"},
    "hyperfine": {"a_par_hz", "a_perp_hz"},
    "multipole": {"q_sdq_hz", "c3_hz", "c4_hz"},
    "resonator": {"nu_r_hz", "kappa_hz", "g0_hz"},
    "crystal_field": {"coefficients_json", "lambda", "gj", "j"},
    "lattice": {"a_angstrom", "c_angstrom", "gamma_par_hz_per_t",
                "gamma_perp_hz_per_t", "beta0_deg", "eps_r"},
    "fit": {"variant", "walkers", "iterations", "seed", "stretch_a",
            "a_perp_mean_hz", "a_perp_sd_hz", "n_draws"},
}


class ConfigError(ValueError):
    """Raised for malformed configuration or dataset input."""


def fmt(x):
    """17-significant-digit string for a float (round-trip exact)."""
    return FLOAT_FMT % float(x)


def _validate(cp):
    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key in cp[section]:
            if key not in SCHEMA[section]:
                raise ConfigError(
                    f"unknown key {key!r} in section [{section}]")


def load_config(path_or_text):
    """Parse and validate a model config; returns a dict of dicts."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        if "\n" in str(path_or_text) or "=" in str(path_or_text):
            cp.read_string(str(path_or_text))
        else:
            with open(path_or_text) as f:
                cp.read_file(f)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    _validate(cp)
    return {s: dict(cp[s]) for s in cp.sections()}


def _get(cfg, section, key, default=None, cast=float):
    try:
        raw = cfg[section][key]
    except KeyError:
        if default is None:
            raise ConfigError(f"missing [{section}] {key}")
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for [{section}] {key}: {raw!r}") from exc


def quadrupole_from_config(cfg) -> QuadrupoleTensor:
    par = _get(cfg, "quadrupole", "parameterization", "spherical", str)
    if par == "spherical":
        s = SphericalForm(S0=_get(cfg, "quadrupole", "s0_hz"),
                          S1=_get(cfg, "quadrupole", "s1_hz", 0.0),
                          S2=_get(cfg, "quadrupole", "s2_hz", 0.0),
                          Delta=_get(cfg, "quadrupole", "delta_rad", 0.0),
                          zeta=_get(cfg, "quadrupole", "zeta_rad", 0.0))
        return from_spherical(s)
    if par == "principal":
        p = PrincipalForm(Cq=_get(cfg, "quadrupole", "cq_hz"),
                          eta=_get(cfg, "quadrupole", "eta"),
                          axes=np.eye(3),
                          nuclear_spin=_get(cfg, "nuclear", "spin",
                                            constants.I_NB))
        return from_principal(p)
    if par == "none":
        return QuadrupoleTensor.zero()
    raise ConfigError(f"unknown quadrupole parameterization {par!r}")


def resonator_from_config(cfg):
    if "resonator" not in cfg:
        return None
    return ResonatorParams(nu_r=_get(cfg, "resonator", "nu_r_hz"),
                           kappa=_get(cfg, "resonator", "kappa_hz"),
                           g0=_get(cfg, "resonator", "g0_hz"))


def effective_model_from_config(cfg) -> EffectiveModelParams:
    gamma = _get(cfg, "nuclear", "gamma_hz_per_t", constants.GAMMA_NB)
    if "nuclear" in cfg and "nu_i_hz" in cfg.get("nuclear", {}):
        nu_i = _get(cfg, "nuclear", "nu_i_hz")
    else:
        nu_i = -gamma * _get(cfg, "field", "b0_t")
    b0 = _get(cfg, "field", "b0_t", 0.0) if "field" in cfg else 0.0
    theta = np.deg2rad(_get(cfg, "field", "theta_deg", 0.0)) \
        if "field" in cfg else 0.0
    beta0 = np.deg2rad(_get(cfg, "field", "beta0_deg",
                            constants.BETA0_DEG)) if "field" in cfg else 0.0
    b_hat = np.array([np.sin(theta),
                      np.cos(theta) * np.sin(beta0),
                      np.cos(theta) * np.cos(beta0)])
    gamma_e = np.array([constants.GAMMA_PERP, constants.GAMMA_PERP,
                        constants.GAMMA_PAR])
    nu_s = float(np.linalg.norm(gamma_e * b_hat) * b0)
    return EffectiveModelParams(
        nu_S=nu_s,
        nu_I=nu_i,
        A_par=_get(cfg, "hyperfine", "a_par_hz", 0.0)
        if "hyperfine" in cfg else 0.0,
        A_perp=_get(cfg, "hyperfine", "a_perp_hz", 0.0)
        if "hyperfine" in cfg else 0.0,
        Q=quadrupole_from_config(cfg) if "quadrupole" in cfg
        else QuadrupoleTensor.zero(),
        Q_sdq=_get(cfg, "multipole", "q_sdq_hz", 0.0)
        if "multipole" in cfg else 0.0,
        C3=_get(cfg, "multipole", "c3_hz", 0.0) if "multipole" in cfg else 0.0,
        C4=_get(cfg, "multipole", "c4_hz", 0.0) if "multipole" in cfg else 0.0,
        resonator=resonator_from_config(cfg),
        nuclear_spin=_get(cfg, "nuclear", "spin", constants.I_NB),
    )


def lattice_from_config(cfg) -> CrystalConfig:
    if "lattice" not in cfg:
        return CrystalConfig()
    sec = cfg["lattice"]
    kw = {}
    if "a_angstrom" in sec:
        kw["a"] = float(sec["a_angstrom"])
    if "c_angstrom" in sec:
        kw["c"] = float(sec["c_angstrom"])
    if "gamma_par_hz_per_t" in sec:
        kw["gamma_par"] = float(sec["gamma_par_hz_per_t"])
    if "gamma_perp_hz_per_t" in sec:
        kw["gamma_perp"] = float(sec["gamma_perp_hz_per_t"])
    if "beta0_deg" in sec:
        kw["beta0"] = float(np.deg2rad(float(sec["beta0_deg"])))
    if "eps_r" in sec:
        kw["eps_r"] = float(sec["eps_r"])
    return CrystalConfig(**kw)


def load_crystal_field(path) -> dict:
    """Stevens coefficients {(k, q): Hz} from a JSON coefficient file."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read crystal-field file: {exc}") from exc
    table = doc.get("Bkq", doc) if isinstance(doc, dict) else doc
    out = {}
    try:
        for key, val in table.items():
            k, q = (int(t) for t in str(key).split(","))
            out[(k, q)] = float(val)
    except (ValueError, AttributeError) as exc:
        raise ConfigError(f"malformed crystal-field table: {exc}") from exc
    return out


def fullJ_from_config(cfg, coeffs=None, lam=None) -> FullJModelParams:
    b0 = _get(cfg, "field", "b0_t")
    theta = np.deg2rad(_get(cfg, "field", "theta_deg", 0.0))
    beta0 = np.deg2rad(_get(cfg, "field", "beta0_deg", constants.BETA0_DEG))
    b_vec = b0 * np.array([np.sin(theta),
                           np.cos(theta) * np.sin(beta0),
                           np.cos(theta) * np.cos(beta0)])
    if coeffs is None:
        coeffs = load_crystal_field(_get(cfg, "crystal_field",
                                         "coefficients_json", cast=str))
    gamma = _get(cfg, "nuclear", "gamma_hz_per_t", constants.GAMMA_NB)
    if lam is None:
        lam = _get(cfg, "crystal_field", "lambda", 1.0)
    return FullJModelParams(
        B0_vec=b_vec,
        Bkq=coeffs,
        nu_I=-gamma * b0,
        Q=quadrupole_from_config(cfg) if "quadrupole" in cfg
        else QuadrupoleTensor.zero(),
        AJ=None,
        lam=float(lam),
        gJ=_get(cfg, "crystal_field", "gj", constants.G_J),
        J=_get(cfg, "crystal_field", "j", constants.J_ER),
    )


# ---------------------------------------------------------------------------
# dataset I/O

VALID_KINDS = {"ground", "excited_diff", "full", "differential"}


def load_dataset(path_or_file) -> FrequencyDataset:
    """Read a frequency dataset CSV (columns id, kind, value_hz, sigma_hz)."""
    close = False
    if hasattr(path_or_file, "read"):
        f = path_or_file
    else:
        try:
            f = open(path_or_file, newline="")
        except OSError as exc:
            raise ConfigError(f"cannot open dataset: {exc}") from exc
        close = True
    try:
        reader = csv.DictReader(f)
        required = {"id", "kind", "value_hz", "sigma_hz"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ConfigError(
                f"dataset header must contain {sorted(required)}")
        ids, kinds, vals, sigs = [], [], [], []
        for row in reader:
            ids.append(row["id"])
            kinds.append(row["kind"])
            try:
                vals.append(float(row["value_hz"]))
                sigs.append(float(row["sigma_hz"]))
            except ValueError as exc:
                raise ConfigError(f"bad dataset row {row!r}") from exc
    finally:
        if close:
            f.close()
    if not ids:
        raise ConfigError("dataset is empty")
    kinds_set = set(kinds)
    if not kinds_set <= VALID_KINDS:
        raise ConfigError(f"unknown dataset kind(s) {kinds_set - VALID_KINDS}")
    kind = kinds[0] if len(kinds_set) == 1 else "full"
    try:
        return FrequencyDataset(tuple(ids), kind, np.array(vals),
                                np.array(sigs))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def save_dataset(ds: FrequencyDataset, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["id", "kind", "value_hz", "sigma_hz"])
        for i, v, s in zip(ds.ids, ds.values, ds.sigmas):
            w.writerow([i, ds.kind, fmt(v), fmt(s)])


def dataset_to_json(ds: FrequencyDataset) -> str:
    return json.dumps({
        "kind": ds.kind,
        "entries": [{"id": i, "value_hz": float(fmt(v)),
                     "sigma_hz": float(fmt(s))}
                    for i, v, s in zip(ds.ids, ds.values, ds.sigmas)],
    }, indent=1)


def dump_json(obj, fp=None):
    """JSON serialization with 17-significant-digit floats."""

    def convert(o):
        if isinstance(o, dict):
            return {str(k): convert(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [convert(v) for v in o]
        if isinstance(o, np.ndarray):
            return convert(o.tolist())
        if isinstance(o, (float, np.floating)):
            return float(fmt(o))
        if isinstance(o, (int, np.integer, bool)) or o is None:
            return o
        if isinstance(o, complex):
            return {"re": float(fmt(o.real)), "im": float(fmt(o.imag))}
        return str(o)

    text = json.dumps(convert(obj), indent=1)
    if fp is not None:
        fp.write(text)
    return text
