"""Transition tables, rates, Rabi frequencies and pulse-sequence signal models.

Transition classes (n = nuclear label, ascending energy per manifold):

* EPR:  |down, n> <-> |up, n>
* NMR:  |m_S, n> <-> |m_S, n+1> within one manifold
* ZQ:   |down, n> <-> |up, n+1>   (zero-quantum)
* DQ:   |down, n+1> <-> |up, n>   (double-quantum)

All frequencies are linear (Hz).  Relaxation rates are returned in 1/s; the
Purcell/Lamb Lorentzians are evaluated with every input in linear frequency
and a single 2*pi conversion applied to rates (regression-pinned convention).
"""

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .hamiltonian import ResonatorParams, _manifold_split
from .operators import SpinSystem


@dataclass
class TransitionTable:
    levels: list                    # dicts: manifold, n, energy_hz, dominant_mI
    epr: np.ndarray                 # nu_n, n = 0..9
    nmr_down: np.ndarray            # nu_{n,n+1} down, n = 0..8
    nmr_up: np.ndarray
    zq: np.ndarray                  # E(up,n+1) - E(down,n)
    dq: np.ndarray                  # E(up,n) - E(down,n+1)
    elements: dict                  # (class, n) -> |<f|Sx|i>|
    elements_signed: dict           # (class, n) -> complex <f|Sx|i>
    ambiguous: bool = False

    def to_rows(self):
        rows = []
        for cls, freqs in (("epr", self.epr), ("nmr_down", self.nmr_down),
                           ("nmr_up", self.nmr_up), ("zq", self.zq), ("dq", self.dq)):
            for n, f in enumerate(freqs):
                el = self.elements.get((cls, n))
                rows.append({"class": cls, "n": n, "frequency_hz": float(f),
                             "element": "" if el is None else float(el)})
        return rows

    def to_csv(self, path_or_buf=None):
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["class", "n", "frequency_hz", "element"])
        w.writeheader()
        for row in self.to_rows():
            out = dict(row)
            out["frequency_hz"] = f"{out['frequency_hz']:.17g}"
            if out["element"] != "":
                out["element"] = f"{out['element']:.17g}"
            w.writerow(out)
        text = buf.getvalue()
        if path_or_buf is not None:
            with open(path_or_buf, "w") as fh:
                fh.write(text)
        return text

    def to_json(self):
        return json.dumps({
            "levels": self.levels,
            "epr_hz": [float(x) for x in self.epr],
            "nmr_down_hz": [float(x) for x in self.nmr_down],
            "nmr_up_hz": [float(x) for x in self.nmr_up],
            "zq_hz": [float(x) for x in self.zq],
            "dq_hz": [float(x) for x in self.dq],
            "elements": {f"{k[0]}:{k[1]}": float(v) for k, v in self.elements.items()},
            "ambiguous": self.ambiguous,
        }, indent=2)


def transitions(h: np.ndarray) -> TransitionTable:
    """Full transition table of a compiled 2x(2I+1) effective Hamiltonian."""
    dim = h.shape[0]
    if dim % 2:
        raise ValueError("effective Hamiltonian dimension must be even")
    i_spin = dim / 4 - 0.5
    sys = SpinSystem(0.5, i_spin)
    sx = sys.S[0]
    sz = sys.S[2]
    w, v, sz_exp, down, up, ambiguous = _manifold_split(h, sz)
    if len(down) != len(up):
        raise ValueError("manifold assignment failed: unequal manifold sizes")
    di = sys.di

    levels = []
    for manifold, idx in (("down", down), ("up", up)):
        for n, k in enumerate(idx):
            weights = np.abs(v[:, k].reshape(2, di)) ** 2
            mi_idx = int(np.argmax(weights.sum(axis=0)))
            levels.append({"manifold": manifold, "n": n,
                           "energy_hz": float(w[k]),
                           "dominant_mI": i_spin - mi_idx,
                           "sz": float(sz_exp[k])})

    sx_full = v.conj().T @ sx @ v
    epr = w[up] - w[down]
    nmr_down = np.diff(w[down])
    nmr_up = np.diff(w[up])
    zq = w[up][1:] - w[down][:-1]
    dq = w[up][:-1] - w[down][1:]

    elements, signed = {}, {}
    for n in range(di):
        el = sx_full[up[n], down[n]]
        elements[("epr", n)] = abs(el)
        signed[("epr", n)] = el
    for n in range(di - 1):
        el = sx_full[up[n + 1], down[n]]
        elements[("zq", n)] = abs(el)
        signed[("zq", n)] = el
        el = sx_full[up[n], down[n + 1]]
        elements[("dq", n)] = abs(el)
        signed[("dq", n)] = el
    return TransitionTable(levels=levels, epr=epr, nmr_down=nmr_down,
                           nmr_up=nmr_up, zq=zq, dq=dq, elements=elements,
                           elements_signed=signed, ambiguous=ambiguous)


def differential_frequencies(table: TransitionTable) -> np.ndarray:
    """Delta nu_n = nu_down_{n+1,n+2} - nu_down_{n,n+1}, n = 0..7 (signed)."""
    return np.diff(table.nmr_down)


@dataclass
class PurcellRates:
    gamma_direct: np.ndarray        # per-n radiative rate, 1/s
    gamma_cross: dict               # (n, i) -> rate 1/s, i in {-2,-1,+1,+2}
    p_cross: dict                   # (n, i) -> branching probability
    p_direct: np.ndarray


def _lorentz_rate(r: ResonatorParams, nu):
    """kappa g0^2 / (kappa^2/4 + (nu_r - nu)^2), converted to 1/s."""
    return 2 * np.pi * r.kappa * r.g0 ** 2 / (r.kappa ** 2 / 4 + (r.nu_r - nu) ** 2)


def purcell_rates(r: ResonatorParams, table: TransitionTable) -> PurcellRates:
    """Radiative and cross-relaxation rates of the |up, n> states."""
    n_levels = len(table.epr)
    energies_down = np.concatenate([[0.0], np.cumsum(table.nmr_down)])
    gamma_direct = np.empty(n_levels)
    gamma_cross, p_cross = {}, {}
    p_direct = np.empty(n_levels)
    for n in range(n_levels):
        el0 = table.elements[("epr", n)]
        gamma_direct[n] = _lorentz_rate(r, table.epr[n]) * (el0 / 0.5) ** 2
        total = gamma_direct[n]
        branch = {}
        for i in (-2, -1, 1, 2):
            m = n + i
            if not 0 <= m < n_levels:
                continue
            # |up,n> -> |down,n+i> transition frequency
            nu = table.epr[n] + energies_down[n] - energies_down[m]
            key = ("dq", n) if i == 1 else ("zq", m) if i == -1 else None
            if key is not None:
                el = table.elements[key]
            else:
                el = 0.0
            if el == 0.0:
                continue
            rate = _lorentz_rate(r, nu) * (el / 0.5) ** 2
            branch[(n, i)] = rate
            total += rate
        for k, rate in branch.items():
            gamma_cross[k] = rate
            p_cross[k] = rate / total
        p_direct[n] = gamma_direct[n] / total
    return PurcellRates(gamma_direct=gamma_direct, gamma_cross=gamma_cross,
                        p_cross=p_cross, p_direct=p_direct)


def g0_from_t1(kappa, t1):
    """Invert the on-resonance Purcell rate: g0 = (1/2pi) sqrt(2pi*kappa/(4 T1))."""
    return np.sqrt(2 * np.pi * kappa / (4 * t1)) / (2 * np.pi)


def sideband_rabi(n, alpha, omega_e, r: ResonatorParams, table: TransitionTable):
    """Double-quantum sideband Rabi frequency at relative drive amplitude alpha."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    el = table.elements[("dq", n)]
    filt = np.sqrt(1 + 4 * (r.nu_r - table.dq[n]) ** 2 / r.kappa ** 2)
    return (omega_e / alpha) * 2 * el / filt


@dataclass
class RamanRabi:
    total: float
    path1: complex
    path2: complex
    pole_flag: bool


def raman_rabi(n, omega_a, omega_b, delta, table: TransitionTable,
               pole_guard=10.0) -> RamanRabi:
    """Two-path stimulated-Raman Rabi frequency for |down,n> <-> |down,n+1>.

    delta is the detuning of the first drive below the EPR transition nu_n;
    the second path is additionally detuned by the up-manifold splitting.
    """
    if omega_a == 0 or omega_b == 0:
        raise ValueError("both drive amplitudes must be non-zero")
    omega_up = table.nmr_up[n]
    d1 = delta
    d2 = delta + omega_up
    guard = pole_guard * 1.0  # Hz-scale linewidth guard
    pole_flag = abs(d1) < guard or abs(d2) < guard
    r1 = table.elements_signed[("zq", n)] / table.elements_signed[("epr", n)]
    r2 = table.elements_signed[("dq", n)] / table.elements_signed[("epr", n + 1)]
    path1 = omega_a * omega_b / (2 * d1) * r1
    path2 = omega_a * omega_b / (2 * d2) * r2
    total = abs(path1 + path2)
    return RamanRabi(total=float(total), path1=path1, path2=path2,
                     pole_flag=bool(pole_flag))


def signal_curves(kind, freq_delta, tau_grid, decay_time, nu_if=0.0,
                  mean_counts=None, seed=None):
    """Pulse-sequence probability curves, optionally with Poisson counts.

    P(tau) = 0.5 * (1 + cos(2 pi (freq_delta + nu_if) tau)) * envelope(tau)
    with a Gaussian envelope for the ground Ramsey and an exponential one for
    excited Ramsey / echoes.
    """
    kinds = {"ramsey": "gauss", "excited_ramsey": "exp",
             "hahn_echo": "exp", "correlated_echo": "exp"}
    if kind not in kinds:
        raise ValueError(f"unknown sequence kind {kind!r}")
    tau = np.asarray(tau_grid, dtype=float)
    if np.any(np.diff(tau) < 0):
        raise ValueError("tau_grid must ascend")
    if kinds[kind] == "gauss":
        env = np.exp(-((tau / decay_time) ** 2))
    else:
        env = np.exp(-tau / decay_time)
    prob = 0.5 * (1 + np.cos(2 * np.pi * (freq_delta + nu_if) * tau)) * env
    counts = None
    if mean_counts is not None:
        rng = np.random.Generator(np.random.Philox(seed))
        counts = rng.poisson(np.asarray(mean_counts) * prob)
    return prob, counts
