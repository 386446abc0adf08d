"""Batch command-line front end.

Single binary with subcommands; every run writes its outputs plus one
``manifest.json`` into ``--out``.  Outputs are accumulated in memory and
persisted only after the whole run succeeds, so a failing run never leaves
partial files behind.  Malformed input produces machine-readable error JSON
on stderr and a non-zero exit status.
"""

import argparse
import csv
import datetime
import io
import json
import os
import secrets
import sys

import numpy as np

from . import __version__, config, inference, lattice, pipelines, spectra
from .config import ConfigError, dump_json, fmt
from .hamiltonian import build_effective


# ---------------------------------------------------------------------------
# output staging

class RunOutputs:
    """Staged output files plus the run manifest."""

    def __init__(self, command, out_dir, seed=None,
                 config_paths=(), dataset_paths=()):
        self.out_dir = out_dir
        self.files = {}
        self.manifest = {
            "command": command,
            "config_paths": list(config_paths),
            "dataset_paths": list(dataset_paths),
            "seed": seed,
            "version": __version__,
            "timestamp": datetime.datetime.now(
                datetime.timezone.utc).isoformat(),
            "output_dir": out_dir,
        }

    def add(self, name, text):
        self.files[name] = text

    def add_json(self, name, obj):
        self.files[name] = dump_json(obj)

    def write(self):
        os.makedirs(self.out_dir, exist_ok=True)
        self.files["manifest.json"] = dump_json(self.manifest)
        for name, text in self.files.items():
            with open(os.path.join(self.out_dir, name), "w") as f:
                f.write(text)
                if not text.endswith("\n"):
                    f.write("\n")


def _csv_text(fieldnames, rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fieldnames)
    w.writeheader()
    for row in rows:
        w.writerow({k: (fmt(v) if isinstance(v, float) else v)
                    for k, v in row.items()})
    return buf.getvalue()


def _resolve_seed(args):
    """Explicit seed, or a fresh one recorded in the manifest."""
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = secrets.randbelow(2 ** 31)
    return int(seed)


# ---------------------------------------------------------------------------
# subcommand handlers

def cmd_spectrum(args):
    cfg = config.load_config(args.config)
    p = config.effective_model_from_config(cfg)
    table = spectra.transitions(build_effective(p))
    run = RunOutputs("spectrum", args.out, config_paths=[args.config])
    run.add("transitions.csv", table.to_csv())
    run.add("transitions.json", table.to_json())
    run.write()
    return 0


def _fit_overrides(cfg, args):
    over = {}
    sec = cfg.get("fit", {})
    for key, cast in (("walkers", int), ("iterations", int),
                      ("stretch_a", float)):
        if key in sec:
            over[key] = cast(sec[key])
    if args.iterations is not None:
        over["iterations"] = args.iterations
    if args.walkers is not None:
        over["walkers"] = args.walkers
    return over


def cmd_fit(args):
    cfg = config.load_config(args.config)
    ds = config.load_dataset(args.data)
    seed = _resolve_seed(args)
    over = _fit_overrides(cfg, args)
    if args.variant == "excited":
        ref_path = pipelines._data_path("ladder_ground.csv") \
            if args.reference is None else args.reference
        over["fixed"] = {"reference_down": config.load_dataset(
            ref_path).values}
    spec = inference.default_spec(args.variant, seed=seed, **over)
    sec = cfg.get("fit", {})
    if args.variant == "full" and "a_perp_mean_hz" in sec:
        summ = inference.marginalize_nuisance(
            spec, ds, ("A_perp", float(sec["a_perp_mean_hz"]),
                       float(sec["a_perp_sd_hz"])),
            n_draws=int(sec.get("n_draws", 40)), seed=seed)
        chains_rows = []
    else:
        ens, summ = inference.fit_variant(args.variant, ds, spec=spec)
        flat = ens.flat()
        chains_rows = [dict(zip(spec.names, row)) for row in flat]
    run = RunOutputs(f"fit {args.variant}", args.out, seed=seed,
                     config_paths=[args.config], dataset_paths=[args.data])
    run.add_json("summary.json", summ)
    if chains_rows:
        run.add("chains.csv", _csv_text(list(spec.names), chains_rows))
    run.write()
    return 0


def cmd_bootstrap(args):
    delays, records = _load_counts(args.counts)
    seed = _resolve_seed(args)
    res = inference.bootstrap(delays, records, args.f0,
                              n_resamples=args.resamples, seed=seed)
    run = RunOutputs("bootstrap", args.out, seed=seed,
                     dataset_paths=[args.counts])
    run.add_json("bootstrap.json", {k: v for k, v in res.items()
                                    if k != "histogram"} |
                 {"histogram": res["histogram"]})
    run.write()
    return 0


def _load_counts(path):
    """Long-format counts CSV (columns delay_s, count) -> per-delay arrays."""
    try:
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None or \
                    not {"delay_s", "count"} <= set(reader.fieldnames):
                raise ConfigError(
                    "counts header must contain ['count', 'delay_s']")
            groups = {}
            for row in reader:
                try:
                    groups.setdefault(float(row["delay_s"]), []).append(
                        float(row["count"]))
                except ValueError as exc:
                    raise ConfigError(f"bad counts row {row!r}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot open counts file: {exc}") from exc
    if not groups:
        raise ConfigError("counts file is empty")
    delays = sorted(groups)
    return np.array(delays), [np.array(groups[d]) for d in delays]


def cmd_sweep_lambda(args):
    cfg = config.load_config(args.config)
    coeffs = config.load_crystal_field(
        config._get(cfg, "crystal_field", "coefficients_json", cast=str)) \
        if "crystal_field" in cfg and "coefficients_json" in \
        cfg["crystal_field"] else None
    kw = {}
    if "field" in cfg:
        kw["b0"] = config._get(cfg, "field", "b0_t", pipelines.DEFAULT_B0)
        kw["theta_deg"] = config._get(cfg, "field", "theta_deg",
                                      pipelines.DEFAULT_THETA_DEG)
    study = pipelines.pseudo_quadrupole_study if args.study == "quadrupole" \
        else pipelines.pseudo_hexadecapole_study
    res = study(coeffs, **kw)
    run = RunOutputs(f"sweep-lambda {args.study}", args.out,
                     config_paths=[args.config])
    rows = res.rows()
    run.add("sweep.csv", _csv_text(list(rows[0].keys()), rows))
    run.add_json("sweep.json", {"rows": rows, "diagnostics": res.diagnostics})
    run.write()
    return 0


def cmd_site_assign(args):
    cfg = config.load_config(args.config)
    lat = config.lattice_from_config(cfg)
    ranked = lattice.assign_site(lat, args.a_par, args.a_par_sigma,
                                 args.a_perp, args.a_perp_sigma,
                                 theta=np.deg2rad(args.theta_deg))
    run = RunOutputs("site-assign", args.out, config_paths=[args.config])
    run.add("ranking.csv", _csv_text(list(ranked[0].keys()), ranked))
    run.write()
    return 0


def cmd_edipole(args):
    cfg = config.load_config(args.config)
    lat = config.lattice_from_config(cfg)
    res = lattice.electric_dipole(lat, b0=args.b0,
                                  theta=np.deg2rad(args.theta_deg))
    run = RunOutputs("edipole", args.out, config_paths=[args.config])
    run.add_json("edipole.json", res)
    run.write()
    return 0


def cmd_signal(args):
    seed = _resolve_seed(args) if args.mean_counts is not None else None
    tau = np.linspace(0.0, args.tau_max, args.n_tau)
    prob, counts = spectra.signal_curves(
        args.kind, args.freq_delta, tau, args.decay_time, nu_if=args.nu_if,
        mean_counts=args.mean_counts, seed=seed)
    rows = []
    for k in range(len(tau)):
        row = {"tau_s": float(tau[k]), "probability": float(prob[k])}
        if counts is not None:
            row["counts"] = float(counts[k])
        rows.append(row)
    run = RunOutputs(f"signal {args.kind}", args.out, seed=seed)
    run.add("signal.csv", _csv_text(list(rows[0].keys()), rows))
    run.write()
    return 0


def cmd_reproduce(args):
    seed = 0 if args.seed is None else args.seed
    report = pipelines.reproduce(args.workflow, seed=seed,
                                 iterations=args.iterations)
    run = RunOutputs(f"reproduce {args.workflow}", args.out, seed=seed)
    run.add_json("report.json", report)
    run.write()
    print(f"{args.workflow}: {report['status']}")
    return 0 if report["status"] == "pass" else 1


# ---------------------------------------------------------------------------
# argument parsing

def build_parser():
    p = argparse.ArgumentParser(
        prog="nucspec",
        description="Coupled electron-nuclear spin spectroscopy toolkit.")
    p.add_argument("--threads", type=int, default=1,
                   help="BLAS thread cap (outputs are thread-count "
                        "independent)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--out", default="out", help="output directory")
        if seed:
            sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("spectrum", help="transition table from a model "
                                         "config")
    sp.add_argument("config")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("fit", help="ensemble-MCMC fit of a dataset")
    sp.add_argument("variant", choices=["ground", "excited", "full",
                                        "quadrupole", "hexadecapole",
                                        "octupole"])
    sp.add_argument("config")
    sp.add_argument("data")
    sp.add_argument("--reference", default=None,
                    help="ground-ladder dataset for the excited variant")
    sp.add_argument("--iterations", type=int, default=None)
    sp.add_argument("--walkers", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("bootstrap", help="bootstrap frequency uncertainty "
                                          "from count records")
    sp.add_argument("counts")
    sp.add_argument("--f0", type=float, required=True,
                    help="initial frequency guess (Hz)")
    sp.add_argument("--resamples", type=int, default=1000)
    common(sp)
    sp.set_defaults(func=cmd_bootstrap)

    sp = sub.add_parser("sweep-lambda", help="pseudo-multipole scaling study")
    sp.add_argument("config")
    sp.add_argument("--study", choices=["quadrupole", "hexadecapole"],
                    default="quadrupole")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_sweep_lambda)

    sp = sub.add_parser("site-assign", help="rank lattice sites against "
                                            "measured couplings")
    sp.add_argument("config")
    sp.add_argument("a_par", type=float)
    sp.add_argument("a_par_sigma", type=float)
    sp.add_argument("a_perp", type=float)
    sp.add_argument("a_perp_sigma", type=float)
    sp.add_argument("--theta-deg", type=float, default=-0.5)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_site_assign)

    sp = sub.add_parser("edipole", help="electric-dipole moment, field and "
                                        "gradient at the nuclear site")
    sp.add_argument("config")
    sp.add_argument("--b0", type=float, default=pipelines.DEFAULT_B0)
    sp.add_argument("--theta-deg", type=float, default=-0.5)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_edipole)

    sp = sub.add_parser("signal", help="pulse-sequence probability/counts "
                                       "curves")
    sp.add_argument("kind", choices=["ramsey", "excited_ramsey", "hahn_echo",
                                     "correlated_echo"])
    sp.add_argument("--freq-delta", type=float, required=True)
    sp.add_argument("--tau-max", type=float, default=1.0)
    sp.add_argument("--n-tau", type=int, default=101)
    sp.add_argument("--decay-time", type=float, default=1.0)
    sp.add_argument("--nu-if", type=float, default=0.0)
    sp.add_argument("--mean-counts", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_signal)

    sp = sub.add_parser("reproduce", help="run a published-result workflow "
                                          "and report pass/fail")
    sp.add_argument("workflow", choices=list(pipelines.WORKFLOWS))
    sp.add_argument("--iterations", type=int, default=10000)
    common(sp)
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(args.threads))
    try:
        return args.func(args)
    except (ConfigError, ValueError, KeyError) as exc:
        json.dump({"error": str(exc), "type": type(exc).__name__},
                  sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
