"""Seeded Monte Carlo experiment runners emitting CSV tables.

Each runner draws every random quantity from a named substream of the
master seed, so a (config, seed) pair fully determines the output.
Offloading trials share their population draws across sweep values
(common random numbers), which is what makes the sweep trends exact
per instance instead of statistical.
"""

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import allocation as al
from .channels import (Dimensions, LinkBudget, complex_normal, dbm_to_watts,
                       path_loss, sample_channel_set)
from .config import ExperimentConfig
from .ledger import Ledger, RecordKind, payload_digest
from .manifold import channel_gain, effective_channel, optimize_phases, retract
from .manifold import analytic_optimum_miso
from .secrecy import (cdf_sup_distance, ergodic_wiretap_capacity, gamma_fit,
                      optimal_coding_rate, outage_probability,
                      effective_secrecy_rate, pdf_divergence,
                      sample_wiretap_gains)
from .streams import substream

GAMMA_PAIRS = ((2, 16), (4, 16), (4, 64), (8, 64))
ERGODIC_N_VALUES = (8, 16, 32, 64, 128)
ERGODIC_NE_VALUES = (1, 4, 16)
PHASE_BENCH_N_VALUES = (0, 4, 8, 16, 32, 64)
SCHEMES = ("bidding", "group", "ecm", "proposed")


@dataclass(frozen=True)
class Table:
    columns: Tuple[str, ...]
    rows: List[tuple]


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".9g")
    return str(value)


def emit_csv(table: Table, path) -> None:
    """Write a table as UTF-8 CSV, floats at 9 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_fmt(v) for v in row])


def theorem_budget(cfg: ExperimentConfig) -> LinkBudget:
    """Unit-path-loss budget used for theorem validation (SNR = P/sigma^2)."""
    return LinkBudget(alpha=1.0, alpha_e=1.0,
                      power_w=dbm_to_watts(cfg.power_dbm),
                      noise_w=dbm_to_watts(cfg.noise_dbm),
                      noise_e_w=dbm_to_watts(cfg.noise_dbm),
                      bandwidth_hz=cfg.bandwidth_hz)


def _fixed_phase_vector(cfg: ExperimentConfig, n_irs: int, tag: int) -> np.ndarray:
    rng = substream(cfg.master_seed, "fixed-phase", n_irs, tag)
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n_irs))


# ---------------------------------------------------------------------------
# Lemma-1 Gamma fit validation

def run_gamma_validation(cfg: ExperimentConfig,
                         pairs: Sequence[Tuple[int, int]] = GAMMA_PAIRS) -> Table:
    """Sample true wiretap gains and score the Gamma fit per (N_e, N)."""
    rows = []
    for idx, (n_eve, n_irs) in enumerate(pairs):
        dims = Dimensions(n_irs=n_irs, n_bs=1, n_eve=n_eve)
        q = _fixed_phase_vector(cfg, n_irs, idx)
        rng = substream(cfg.master_seed, "gamma-gains", idx)
        x = sample_wiretap_gains(rng, dims, q, cfg.runs)
        fit = gamma_fit(n_eve, n_irs)
        rows.append((
            n_eve, n_irs, cfg.runs,
            pdf_divergence(x, fit),
            cdf_sup_distance(x, fit),
            float(x.mean()), fit.mean,
            float(x.var()), fit.variance,
        ))
    return Table(
        columns=("n_eve", "n_irs", "draws", "d_p", "cdf_ks",
                 "sample_mean", "analytic_mean", "sample_var", "analytic_var"),
        rows=rows,
    )


# ---------------------------------------------------------------------------
# ergodic secrecy rate sweep (Theorem 1)

def measured_gains(cfg: ExperimentConfig, n_bs: int, n_irs: int, draws: int,
                   purpose: str = "gain-cache") -> np.ndarray:
    """Optimized channel gains over fresh channel draws (seeded)."""
    dims = Dimensions(n_irs=n_irs, n_bs=n_bs, n_eve=1)
    rng = substream(cfg.master_seed, purpose, n_bs, n_irs)
    out = np.empty(draws)
    for j in range(draws):
        ch = sample_channel_set(rng, dims)
        ec = effective_channel(ch.A, ch.h, ch.l)
        out[j] = optimize_phases(ec, rng=rng).gain
    return out


def run_ergodic_sweep(cfg: ExperimentConfig,
                      n_values: Sequence[int] = ERGODIC_N_VALUES,
                      n_eve_values: Sequence[int] = ERGODIC_NE_VALUES) -> Table:
    """Mean optimized main capacity minus analytic wiretap capacity."""
    budget = theorem_budget(cfg)
    rows = []
    for n_irs in n_values:
        gains = measured_gains(cfg, cfg.dims.n_bs, n_irs, cfg.runs,
                               purpose="ergodic-gains")
        c_m_bar = float(np.log2(1.0 + budget.snr * gains).mean())
        for n_eve in n_eve_values:
            e_cw = ergodic_wiretap_capacity(gamma_fit(n_eve, n_irs), budget)
            rows.append((n_irs, n_eve, c_m_bar, e_cw, max(0.0, c_m_bar - e_cw)))
    return Table(columns=("n_irs", "n_eve", "c_m_bar", "e_cw", "r_bar"),
                 rows=rows)


# ---------------------------------------------------------------------------
# effective secrecy rate vs coding rate (Theorem 2)

def run_coding_sweep(cfg: ExperimentConfig, grid_points: int = 1000) -> Table:
    """Theorem-2 curve over one channel draw plus the golden-section pick."""
    budget = theorem_budget(cfg)
    rng = substream(cfg.master_seed, "coding-draw")
    ch = sample_channel_set(rng, cfg.dims)
    ec = effective_channel(ch.A, ch.h, ch.l)
    opt = optimize_phases(ec, rng=rng)
    c_m = math.log2(1.0 + budget.snr * opt.gain)
    irs_gain = float((np.abs(ch.h) ** 2).sum())  # |diag(q) h|^2, any unit q
    n_eve = cfg.dims.n_eve
    rows = []
    for r_hat in np.linspace(0.0, c_m, grid_points):
        p = outage_probability(float(r_hat), c_m, irs_gain, n_eve, budget)
        rows.append((float(r_hat), p, (1.0 - p) * float(r_hat), "grid"))
    best = optimal_coding_rate(c_m, irs_gain, n_eve, budget, cfg.epsilon_outage)
    p_best = outage_probability(best.rate, c_m, irs_gain, n_eve, budget)
    rows.append((best.rate, p_best, best.effective_rate, "golden"))
    return Table(columns=("r_hat", "outage_probability", "effective_rate", "source"),
                 rows=rows)


# ---------------------------------------------------------------------------
# optimized vs random phases (manifold benchmark)

def run_phase_bench(cfg: ExperimentConfig,
                    n_values: Sequence[int] = PHASE_BENCH_N_VALUES) -> Table:
    """Paired comparison: CG-optimized phases vs the random start point."""
    rows = []
    for n_irs in n_values:
        dims = Dimensions(n_irs=n_irs, n_bs=cfg.dims.n_bs, n_eve=1)
        sum_m = sum_r = sum_o = 0.0
        wins = 0
        for t in range(cfg.runs):
            rng = substream(cfg.master_seed, "phase-bench", n_irs, t)
            ch = sample_channel_set(rng, dims)
            ec = effective_channel(ch.A, ch.h, ch.l)
            if n_irs > 0:
                q0 = retract(complex_normal(rng, n_irs))
                res = optimize_phases(ec, q0=q0)
                g_rand = channel_gain(q0, ec)
            else:
                res = optimize_phases(ec, q0=np.empty(0, dtype=np.complex128))
                g_rand = res.gain
            sum_m += res.gain
            sum_r += g_rand
            wins += res.gain > g_rand
            if dims.n_bs == 1:
                sum_o += analytic_optimum_miso(ch.l[0], ch.A[0], ch.h)[1]
        oracle = sum_o / cfg.runs if dims.n_bs == 1 else float("nan")
        rows.append((n_irs, cfg.runs, sum_m / cfg.runs, sum_r / cfg.runs,
                     oracle, wins / cfg.runs))
    return Table(columns=("n_irs", "trials", "gain_manifold", "gain_random",
                          "gain_oracle_miso", "win_fraction"),
                 rows=rows)


# ---------------------------------------------------------------------------
# offloading experiments

_OFFLOAD_DEFAULT_VALUES = {
    "rb_count": tuple(range(1, 9)),
    "n_irs": (10, 20, 40, 80),
    "c_per_bit": (5.0, 10.0, 15.0, 20.0),
}


class ECwTable:
    """Cached ergodic wiretap capacity as a function of eavesdropper SNR."""

    def __init__(self, fit, snr_lo: float, snr_hi: float, points: int = 129):
        self._fixed = None
        if snr_hi <= snr_lo * (1.0 + 1e-12):
            budget = _snr_budget(snr_lo)
            self._fixed = ergodic_wiretap_capacity(fit, budget)
            return
        self._log_grid = np.linspace(math.log(snr_lo), math.log(snr_hi), points)
        self._values = np.array([
            ergodic_wiretap_capacity(fit, _snr_budget(math.exp(s)))
            for s in self._log_grid
        ])

    def lookup(self, snr_e) -> np.ndarray:
        snr_e = np.asarray(snr_e, dtype=float)
        if self._fixed is not None:
            return np.full(snr_e.shape, self._fixed)
        return np.interp(np.log(snr_e), self._log_grid, self._values)


def _snr_budget(snr_e: float) -> LinkBudget:
    return LinkBudget(alpha=1.0, alpha_e=1.0, power_w=snr_e,
                      noise_w=1.0, noise_e_w=1.0, bandwidth_hz=1.0)


@dataclass
class OffloadResult:
    table: Table
    ledger: Ledger
    meta: Dict[str, float] = field(default_factory=dict)


def _offload_caches(cfg: ExperimentConfig, n_irs_values):
    """Per-N gain samples and wiretap-capacity lookup tables."""
    p = dbm_to_watts(cfg.power_dbm)
    sigma = dbm_to_watts(cfg.noise_dbm)
    d_lo, d_hi = cfg.distances_m
    snr_of = lambda d: path_loss(d, cfg.carrier_hz) ** 2 * p / sigma
    if cfg.eve_distance_m is None:
        snr_e_lo, snr_e_hi = snr_of(d_hi) * 0.99, snr_of(d_lo) * 1.01
    else:
        snr_e_lo = snr_e_hi = snr_of(cfg.eve_distance_m)
    gains = {}
    ecw = {}
    for n in sorted(set(int(v) for v in n_irs_values)):
        gains[n] = measured_gains(cfg, cfg.dims.n_bs, n, cfg.gain_draws)
        ecw[n] = ECwTable(gamma_fit(cfg.dims.n_eve, n), snr_e_lo, snr_e_hi)
    return gains, ecw


def _population(cfg: ExperimentConfig, rng: np.random.Generator):
    d = rng.uniform(*cfg.distances_m, cfg.n_sensors)
    data_bits = rng.uniform(*cfg.d_range, cfg.n_sensors)
    gas = rng.uniform(*cfg.gas_range, cfg.n_sensors)
    f = rng.uniform(*cfg.f_range_hz, cfg.n_servers)
    return d, data_bits, gas, f


def _sensor_rates(cfg: ExperimentConfig, d: np.ndarray, gains: np.ndarray,
                  ecw: ECwTable) -> np.ndarray:
    p = dbm_to_watts(cfg.power_dbm)
    sigma = dbm_to_watts(cfg.noise_dbm)
    alpha = np.array([path_loss(x, cfg.carrier_hz) for x in d])
    snr = alpha**2 * p / sigma
    if cfg.eve_distance_m is None:
        snr_e = snr
    else:
        a_e = path_loss(cfg.eve_distance_m, cfg.carrier_hz)
        snr_e = np.full(d.shape, a_e**2 * p / sigma)
    c_m = np.log2(1.0 + snr[:, None] * gains[None, :]).mean(axis=1)
    return np.maximum(0.0, c_m - ecw.lookup(snr_e))


def _sweep_params(cfg: ExperimentConfig, sweep: str, value):
    """Resolve (bandwidth, n_irs, c, epsilon) for one sweep point."""
    bw, n, c, eps = cfg.bandwidth_hz, cfg.dims.n_irs, cfg.c_per_bit, cfg.epsilon_dissat
    if sweep == "rb_count":
        bw = float(value) * (cfg.bandwidth_hz / cfg.rb_count)
    elif sweep == "n_irs":
        n = int(value)
    elif sweep == "c_per_bit":
        c = float(value)
    elif sweep == "epsilon":
        eps = int(value)
    else:
        raise ValueError(f"unknown sweep kind {sweep!r}")
    return bw, n, c, eps


def _offload_trial(cfg: ExperimentConfig, sweep: str, values, gains_cache,
                   ecw_cache, t: int):
    """One paired instance evaluated at every sweep value.

    Returns (per-value scheme results, ledger events, redraw count).
    Populations with any zero ergodic rate are redrawn.
    """
    n = cfg.n_sensors
    needed_n = sorted(gains_cache.keys())
    for attempt in range(100):
        rng = substream(cfg.master_seed, "offload", t, attempt)
        d, data_bits, gas, f = _population(cfg, rng)
        rates_by_n = {m: _sensor_rates(cfg, d, gains_cache[m], ecw_cache[m])
                      for m in needed_n}
        if all((r > 0.0).all() for r in rates_by_n.values()):
            break
    else:
        raise RuntimeError("could not draw a feasible population in 100 tries")
    redraws = attempt

    p_w = np.full(n, dbm_to_watts(cfg.power_dbm))
    row_order = al.rank_desc(gas)

    def ranked_entries(bw, n_irs, c):
        rates = rates_by_n[n_irs]
        col_order = al.rank_desc(f / c)[:n]
        entries = al.energy_matrix(
            data_bits[row_order], p_w[row_order], rates[row_order],
            f[col_order], np.full(n, c), np.full(n, cfg.eta), bw)
        return entries, col_order

    results = {}
    first_proposed = None
    first_col_order = None
    if sweep == "epsilon":
        bw, n_irs, c, _ = _sweep_params(cfg, sweep, values[0])
        entries, col_order = ranked_entries(bw, n_irs, c)
        shared = _fixed_schemes(cfg, entries)
        for value in values:
            eps = int(value)
            assign, total = al.solve_entries(al.band_masked(entries, eps))
            results[value] = dict(shared)
            results[value]["proposed"] = (total, _max_gap(assign))
            if first_proposed is None:
                base_assign, _ = al.solve_entries(
                    al.band_masked(entries, cfg.epsilon_dissat))
                first_proposed = base_assign
                first_col_order = col_order
    else:
        for value in values:
            bw, n_irs, c, eps = _sweep_params(cfg, sweep, value)
            entries, col_order = ranked_entries(bw, n_irs, c)
            res = _fixed_schemes(cfg, entries)
            assign, total = al.solve_entries(al.band_masked(entries, eps))
            res["proposed"] = (total, _max_gap(assign))
            results[value] = res
            if first_proposed is None:
                first_proposed = assign
                first_col_order = col_order

    events = []
    for i in range(n):
        events.append((RecordKind.TASK_PUBLISH,
                       payload_digest("task", t, i, data_bits[i], gas[i]),
                       f"sensor-{i}", float(gas[i])))
    for pos in range(n):
        sensor = int(row_order[pos])
        server = int(first_col_order[first_proposed[pos]])
        events.append((RecordKind.RESULT_UPLOAD,
                       payload_digest("result", t, sensor, server),
                       f"server-{server}", float(gas[sensor])))
    return results, events, redraws


def _max_gap(assignment: np.ndarray) -> int:
    return int(np.abs(assignment - np.arange(assignment.shape[0])).max())


def _fixed_schemes(cfg: ExperimentConfig, entries: np.ndarray):
    """Bidding, group, and ECM results on one ranked matrix."""
    n = entries.shape[0]
    out = {}
    out["bidding"] = (al.assignment_total(entries, np.arange(n)), 0)
    g_assign, g_total = al.solve_groups(entries, cfg.n_groups)
    out["group"] = (g_total, _max_gap(g_assign))
    e_assign, e_total = al.solve_entries(entries)
    out["ecm"] = (e_total, _max_gap(e_assign))
    return out


def run_offload_experiments(cfg: ExperimentConfig, sweep: str = "rb_count",
                            values: Optional[Sequence] = None) -> OffloadResult:
    """Paired-population sweep over one offloading parameter.

    Emits mean total energy and worst-case dissatisfaction per
    (sweep value, scheme); the ledger records one publish and one upload
    per drawn task, under the first sweep value's proposed allocation.
    """
    if values is None:
        values = (_OFFLOAD_DEFAULT_VALUES[sweep] if sweep != "epsilon"
                  else tuple(range(cfg.n_sensors)))
    values = tuple(values)
    if not values:
        raise ValueError("sweep values must be nonempty")
    n_irs_values = ({int(v) for v in values} if sweep == "n_irs"
                    else {cfg.dims.n_irs})
    gains_cache, ecw_cache = _offload_caches(cfg, n_irs_values)

    energy_sums = {(v, s): 0.0 for v in values for s in SCHEMES}
    dissat_max = {(v, s): 0 for v in values for s in SCHEMES}
    ordering_ok = 0
    redraws_total = 0
    ledger = Ledger()
    for t in range(cfg.runs):
        results, events, redraws = _offload_trial(
            cfg, sweep, values, gains_cache, ecw_cache, t)
        redraws_total += redraws
        trial_ok = True
        for v in values:
            for s in SCHEMES:
                energy, gap = results[v][s]
                energy_sums[(v, s)] += energy
                dissat_max[(v, s)] = max(dissat_max[(v, s)], gap)
            e_ecm = results[v]["ecm"][0]
            e_prop = results[v]["proposed"][0]
            e_bid = results[v]["bidding"][0]
            slack = 1e-9 * max(1.0, abs(e_bid))
            if not (e_ecm <= e_prop + slack and e_prop <= e_bid + slack):
                trial_ok = False
        ordering_ok += trial_ok
        for kind, digest, sender, gas in events:
            ledger.append(kind, digest, sender, gas)

    rows = [(v, s, energy_sums[(v, s)] / cfg.runs, dissat_max[(v, s)])
            for v in values for s in SCHEMES]
    table = Table(columns=("sweep_value", "scheme", "total_energy_j",
                           "max_dissatisfaction"), rows=rows)
    meta = {
        "sweep": sweep,
        "runs": cfg.runs,
        "redraws": redraws_total,
        "ordering_fraction": ordering_ok / cfg.runs,
        "ledger_ok": ledger.verify_chain(),
    }
    return OffloadResult(table=table, ledger=ledger, meta=meta)
