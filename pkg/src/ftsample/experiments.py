"""Experiment sweeps: config parsing, parallel execution, CSV/JSON artifacts.

A run turns one ExperimentConfig into a flat list of BoundReports plus a
manifest.  Every row is a report, so a single CSV schema serves all
experiment kinds, every row carries the parameters to reproduce it, and
the exit-status rule (fail iff some non-vacuous check fails) needs no
per-kind cases.  Results are byte-identical across runs for a fixed
(config, seed); the manifest is not, since it records wall-clock duration.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - python < 3.11
    import tomli as tomllib

from . import bounds
from .bounds import CSV_HEADER, BoundReport, ThresholdParams
from .errors import ConfigError, RecoveryFailedError
from .hidden_linear import (
    counting_bound_check,
    good_pairs,
    good_triple_mass,
    joint_distribution,
    predicted_good_frequency,
    random_hidden_linear_instance,
    recover_ratios,
)
from .periodfind import ModularExponentiation, PeriodicInstance, random_modexp_instance, run_pipeline
from .sampling import IndexSet, dist_beta, dist_gamma, l1_distance
from .transform import MultiSuperposition, Superposition

VERSION = "0.1.0"

KINDS = (
    "delta-concentration-sweep",
    "phase-sum-sweep",
    "l1-convergence",
    "uniform-mass",
    "restricted-mass",
    "closeness-threshold",
    "multidim",
    "shor",
    "boneh-lipton",
)

FORMATS = ("csv", "json")

# Per-axis cells a multidim sweep may enumerate; guards p**k explosions.
_MULTIDIM_CELL_CAP = 4096

# Oversized domains are taken as q = multiplier*p + 1.  The offset keeps q
# off exact multiples (where every distance collapses to zero and sweeps
# would compare nothing), while fixing the fractional structure q*i/p = i/p
# so ladder rungs differ only in scale.
_Q_OFFSET = 1


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a kind, its parameter grids, and output routing."""

    kind: str
    p_values: tuple = (8,)
    q_multipliers: tuple = (3,)
    trials: int = 100
    s_n: float = 2.0
    r: int = 1
    k: int = 2
    m: int = 1
    seed: int = 0
    out_path: str = "out"
    fmt: str = "csv"
    jobs: int | None = None

    def to_json_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["p_values"] = list(self.p_values)
        d["q_multipliers"] = list(self.q_multipliers)
        return d


@dataclass(frozen=True)
class RunManifest:
    """What a run did: config echo, version, duration, pass/fail tallies."""

    version: str
    config: dict
    duration_s: float
    passed: int
    failed: int
    vacuous: int

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.vacuous

    def to_json_dict(self) -> dict:
        return {
            "version": self.version,
            "config": dict(self.config),
            "duration_s": self.duration_s,
            "tallies": {
                "passed": self.passed,
                "failed": self.failed,
                "vacuous": self.vacuous,
                "total": self.total,
            },
        }


def _intlist(value, path, errors, minimum):
    if not isinstance(value, list) or not value:
        errors.append((path, "must be a nonempty list of integers"))
        return ()
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, int):
            errors.append((f"{path}[{i}]", "must be an integer"))
        elif v < minimum:
            errors.append((f"{path}[{i}]", f"must be >= {minimum}"))
        else:
            out.append(v)
    return tuple(out)


def _scalar(table, key, path, errors, kind, minimum, default):
    if key not in table:
        return default
    v = table[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        errors.append((path, "must be an integer"))
        return default
    if kind is float:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            errors.append((path, "must be a number"))
            return default
        v = float(v)
    if v < minimum:
        errors.append((path, f"must be >= {minimum}"))
        return default
    return v


def validate_config(text: str) -> ExperimentConfig:
    """Parse and range-check a TOML experiment config.

    Raises ConfigError carrying (field path, message) pairs; all problems
    are reported in one pass, not just the first.
    """
    errors = []
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError([("", f"not valid TOML: {e}")])
    exp = doc.get("experiment")
    if not isinstance(exp, dict):
        raise ConfigError([("experiment", "missing [experiment] table")])
    kind = exp.get("kind")
    if kind not in KINDS:
        errors.append(("experiment.kind", f"unknown kind {kind!r}; valid kinds: {', '.join(KINDS)}"))
        kind = None
    grid = exp.get("grid", {})
    if not isinstance(grid, dict):
        errors.append(("experiment.grid", "must be a table"))
        grid = {}
    p_values = (8,)
    if "p" in grid:
        p_values = _intlist(grid["p"], "experiment.grid.p", errors, 2)
    q_multipliers = (3,)
    if "q_multiplier" in grid:
        q_multipliers = _intlist(grid["q_multiplier"], "experiment.grid.q_multiplier", errors, 2)
    trials = _scalar(exp, "trials", "experiment.trials", errors, int, 1, 100)
    s_n = _scalar(exp, "s_n", "experiment.s_n", errors, float, 1.0, 2.0)
    r = _scalar(exp, "r", "experiment.r", errors, int, 1, 1)
    k = _scalar(exp, "k", "experiment.k", errors, int, 1, 2)
    m = _scalar(exp, "m", "experiment.m", errors, int, 1, 1)
    seed = _scalar(exp, "seed", "experiment.seed", errors, int, 0, 0)
    out = doc.get("output", {})
    if not isinstance(out, dict):
        errors.append(("output", "must be a table"))
        out = {}
    out_path = out.get("path", "out")
    if not isinstance(out_path, str) or not out_path:
        errors.append(("output.path", "must be a nonempty string"))
        out_path = "out"
    fmt = out.get("format", "csv")
    if fmt not in FORMATS:
        errors.append(("output.format", f"must be one of: {', '.join(FORMATS)}"))
        fmt = "csv"
    jobs = _scalar(out, "jobs", "output.jobs", errors, int, 1, None)
    if kind == "multidim":
        for p in p_values:
            if p**k > _MULTIDIM_CELL_CAP:
                errors.append(
                    ("experiment.grid.p", f"p={p} with k={k} enumerates {p**k} cells, over the cap {_MULTIDIM_CELL_CAP}")
                )
    if kind == "boneh-lipton" and m > r:
        errors.append(("experiment.m", f"order bound m={m} cannot exceed the period r={r}"))
    if errors:
        raise ConfigError(errors)
    return ExperimentConfig(
        kind=kind,
        p_values=p_values,
        q_multipliers=q_multipliers,
        trials=trials,
        s_n=s_n,
        r=r,
        k=k,
        m=m,
        seed=seed,
        out_path=out_path,
        fmt=fmt,
        jobs=jobs,
    )


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as f:
        return validate_config(f.read())


def _report(check, params, computed, bound, direction, vacuous=False) -> BoundReport:
    return BoundReport(
        check=check,
        params={k: v for k, v in params.items()},
        computed=float(computed),
        bound=float(bound),
        direction=direction,
        vacuous=vacuous,
    )


def _random_unit(rng, p: int) -> Superposition:
    v = rng.normal(size=p) + 1j * rng.normal(size=p)
    return Superposition(v / np.linalg.norm(v))


def _task_concentration(cfg: ExperimentConfig, payload, seed_seq) -> list:
    p, mult = payload
    q = mult * p + _Q_OFFSET
    rows = []
    for j in range(p):
        center, off = bounds.concentration_check(j, p, q)
        rows.append(center)
        rows.append(off)
    return rows


def _task_phase_sum(cfg: ExperimentConfig, payload, seed_seq) -> list:
    (p,) = payload
    rows = []
    for x in range(1, 3 * p + 1):
        if x % p != 0:
            rows.append(bounds.phase_sum_check(float(x), p))
    for k in range(3 * p):
        rows.append(bounds.phase_sum_check(k + 0.5, p))
    rng = np.random.default_rng(seed_seq)
    drawn = 0
    while drawn < cfg.trials:
        x = float(rng.uniform(0.0, p))
        if bounds.signed_mod(x, p) < 1e-9:
            continue
        rows.append(bounds.phase_sum_check(x, p))
        drawn += 1
    return rows


def _task_l1(cfg: ExperimentConfig, payload, seed_seq) -> list:
    p, mult = payload
    q = mult * p + _Q_OFFSET
    rng = np.random.default_rng(seed_seq)
    rows = []
    for t in range(cfg.trials):
        alpha = _random_unit(rng, p)
        l1 = l1_distance(dist_beta(alpha), dist_gamma(alpha, q))
        rows.append(
            _report(
                "l1-trial",
                {"p": p, "q": q, "q_multiplier": mult, "trial": t},
                l1,
                2.0,
                "upper",
            )
        )
    return rows


def _delta_uniform_state(rng, p: int, set_size: int, delta: float):
    support = tuple(sorted(rng.choice(p, size=set_size, replace=False).tolist()))
    mags = rng.uniform(delta, 1.0, size=set_size)
    phases = np.exp(2j * np.pi * rng.random(set_size))
    v = np.zeros(p, dtype=np.complex128)
    v[list(support)] = mags * phases
    return Superposition(v / np.linalg.norm(v)), support


def _task_uniform_mass(cfg: ExperimentConfig, payload, seed_seq) -> list:
    p, mult = payload
    q = mult * p + _Q_OFFSET
    rng = np.random.default_rng(seed_seq)
    delta = 1.0 - 1.0 / (100.0 * cfg.r)
    rows = []
    for t in range(cfg.trials):
        set_size = int(rng.integers(1, p + 1))
        beta, support = _delta_uniform_state(rng, p, set_size, delta)
        rep = bounds.uniform_mass_check(beta, IndexSet.of(support, p), delta, cfg.r, q)
        rep.params["trial"] = t
        rep.params["q_multiplier"] = mult
        rows.append(rep)
    return rows


def _task_restricted_mass(cfg: ExperimentConfig, payload, seed_seq) -> list:
    p, mult = payload
    q = mult * p + _Q_OFFSET
    rng = np.random.default_rng(seed_seq)
    rows = []
    for t in range(cfg.trials):
        set_size = int(rng.integers(1, p + 1))
        support = tuple(sorted(rng.choice(p, size=set_size, replace=False).tolist()))
        beta = _random_unit(rng, p)
        rep = bounds.restricted_mass_check(beta, IndexSet.of(support, p), cfg.r, q)
        rep.params["trial"] = t
        rep.params["q_multiplier"] = mult
        rows.append(rep)
    return rows


def _task_closeness(cfg: ExperimentConfig, payload, seed_seq) -> list:
    (p,) = payload
    params = ThresholdParams.from_accuracy(p, cfg.s_n)
    t_mult = bounds.closeness_threshold(params)
    q = math.ceil(t_mult * p)
    rng = np.random.default_rng(seed_seq)
    rows = []
    for t in range(cfg.trials):
        alpha = _random_unit(rng, p)
        rep = bounds.closeness_check(alpha, cfg.s_n, q)
        rep.params["trial"] = t
        rep.params["threshold_multiplier"] = t_mult
        rows.append(rep)
    return rows


def _task_multidim(cfg: ExperimentConfig, payload, seed_seq) -> list:
    p, mult = payload
    dims_p = (p,) * cfg.k
    dims_q = tuple(mult * d + _Q_OFFSET for d in dims_p)
    rows = []
    for y in np.ndindex(*dims_p):
        center, off = bounds.multidim_concentration_check(tuple(int(c) for c in y), dims_p, dims_q)
        rows.append(center)
        rows.append(off)
    if p < 3:
        return rows  # the leakage ceiling is stated for per-axis extents >= 3
    rng = np.random.default_rng(seed_seq)
    cells = int(np.prod(dims_p))
    for t in range(cfg.trials):
        set_size = int(rng.integers(1, min(cells, 16) + 1))
        flat = rng.choice(cells, size=set_size, replace=False)
        indices = tuple(tuple(int(c) for c in np.unravel_index(int(i), dims_p)) for i in sorted(flat))
        v = rng.normal(size=dims_p) + 1j * rng.normal(size=dims_p)
        state = MultiSuperposition(v / np.linalg.norm(v))
        rep = bounds.multidim_cross_term_check(state, indices, dims_q)
        rep.params["trial"] = t
        rows.append(rep)
    return rows


def _task_shor(cfg: ExperimentConfig, payload, seed_seq) -> list:
    (trial,) = payload
    inst = _shor_instance(cfg)
    seed = int(np.random.default_rng(seed_seq).integers(0, 2**63))
    try:
        outcome = run_pipeline(inst, seed)
        recovered = outcome["recovered"]
        correct = outcome["correct"]
    except RecoveryFailedError:
        recovered = None
        correct = False
    return [
        _report(
            "shor-run",
            {
                "trial": trial,
                "seed": seed,
                "instance": inst.to_json_dict(),
                "recovered": recovered,
                "true_period": inst.period,
            },
            1.0 if correct else 0.0,
            0.0,
            "lower",
        )
    ]


def _shor_instance(cfg: ExperimentConfig) -> PeriodicInstance:
    if cfg.r == 6:
        return PeriodicInstance(evaluator=ModularExponentiation(2, 9), period=6)
    rng = np.random.default_rng(cfg.seed)
    return random_modexp_instance(rng, r_max=max(2, cfg.r))


def _task_bl(cfg: ExperimentConfig, payload, seed_seq) -> list:
    (mult,) = payload
    rng = np.random.default_rng(seed_seq)
    inst = random_hidden_linear_instance(np.random.default_rng(cfg.seed), cfg.r, cfg.m)
    rows = []
    for b, ts in sorted(inst.value_classes().items()):
        rep = counting_bound_check(ts, inst.r)
        rep.params["b"] = int(b) if isinstance(b, (int, np.integer)) else b
        rep.params["alpha"] = inst.alpha
        rows.append(rep)
    q_exact = mult * inst.r
    joint = joint_distribution(inst, q_exact)
    off_line = 0.0
    for bi in range(len(joint.values)):
        for z1 in range(inst.r):
            for z2 in range(inst.r):
                if z2 != (inst.alpha * z1) % inst.r:
                    off_line += float(joint.weights[bi] * joint.grids[bi][z1, z2])
    rows.append(
        _report(
            "bl-support",
            {"r": inst.r, "m": inst.m, "alpha": inst.alpha, "q_sim": q_exact},
            off_line,
            0.0,
            "upper",
        )
    )
    q_gen = mult * inst.r + _Q_OFFSET
    joint_gen = joint_distribution(inst, q_gen)
    draws = joint_gen.sample_many(rng, cfg.trials)
    good = {b: set(pairs) for b, pairs in good_pairs(inst, q_gen).items()}
    hits = sum(1 for y1, y2, b in draws if (y1, y2) in good[b])
    rows.append(
        _report(
            "bl-good-frequency",
            {
                "r": inst.r,
                "m": inst.m,
                "alpha": inst.alpha,
                "q_sim": q_gen,
                "draws": cfg.trials,
                "exact_mass": good_triple_mass(inst, q_gen),
            },
            hits / cfg.trials,
            predicted_good_frequency(inst, q_gen),
            "lower",
        )
    )
    # Exact recovery through convergents needs the floor error 1/q below
    # half the gap 1/r^2 between fractions with denominators <= r.
    den_bound = inst.r + 1
    q_rec = q_gen if q_gen > 2 * inst.r * inst.r else inst.r * (2 * inst.r + 1) + _Q_OFFSET
    rec_draws = joint_distribution(inst, q_rec).sample_many(rng, cfg.trials)
    dividing = 0
    for d in rec_draws:
        f1, f2 = recover_ratios(d, q_rec, den_bound)
        if inst.r % f1.denominator == 0 and inst.r % f2.denominator == 0:
            dividing += 1
    rows.append(
        _report(
            "bl-recover-denominators",
            {
                "r": inst.r,
                "m": inst.m,
                "alpha": inst.alpha,
                "q_sim": q_rec,
                "draws": cfg.trials,
                "den_bound": den_bound,
            },
            dividing / cfg.trials,
            1.0,
            "lower",
        )
    )
    return rows


_TASK_RUNNERS = {
    "delta-concentration-sweep": _task_concentration,
    "phase-sum-sweep": _task_phase_sum,
    "l1-convergence": _task_l1,
    "uniform-mass": _task_uniform_mass,
    "restricted-mass": _task_restricted_mass,
    "closeness-threshold": _task_closeness,
    "multidim": _task_multidim,
    "shor": _task_shor,
    "boneh-lipton": _task_bl,
}


def _build_tasks(cfg: ExperimentConfig) -> list:
    if cfg.kind in ("delta-concentration-sweep", "l1-convergence", "uniform-mass", "restricted-mass", "multidim"):
        return [(p, mult) for p in cfg.p_values for mult in cfg.q_multipliers]
    if cfg.kind in ("phase-sum-sweep", "closeness-threshold"):
        return [(p,) for p in cfg.p_values]
    if cfg.kind == "shor":
        return [(t,) for t in range(cfg.trials)]
    if cfg.kind == "boneh-lipton":
        return [(mult,) for mult in cfg.q_multipliers]
    raise ConfigError([("experiment.kind", f"unknown kind {cfg.kind!r}")])


def _execute(args):
    cfg, payload, seed_seq = args
    return _TASK_RUNNERS[cfg.kind](cfg, payload, seed_seq)


def _summarize(cfg: ExperimentConfig, rows: list) -> list:
    """Cross-task summary rows appended after the per-task rows."""
    out = []
    if cfg.kind == "l1-convergence" and len(cfg.q_multipliers) >= 2:
        for p in cfg.p_values:
            medians = []
            for mult in cfg.q_multipliers:
                vals = [
                    r.computed
                    for r in rows
                    if r.check == "l1-trial" and r.params["p"] == p and r.params["q_multiplier"] == mult
                ]
                medians.append(float(np.median(vals)))
            worst_rise = max(b - a for a, b in zip(medians, medians[1:]))
            out.append(
                _report(
                    "l1-median-monotone",
                    {"p": p, "q_multipliers": list(cfg.q_multipliers), "medians": medians},
                    worst_rise,
                    0.0,
                    "upper",
                )
            )
    if cfg.kind == "shor":
        successes = sum(1 for r in rows if r.check == "shor-run" and r.computed == 1.0)
        out.append(
            _report(
                "shor-success-rate",
                {"trials": cfg.trials, "successes": successes, "r": cfg.r},
                successes / cfg.trials,
                0.95,
                "lower",
            )
        )
    return out


def resolve_jobs(cfg: ExperimentConfig, override: int | None = None) -> int:
    if override is not None:
        return max(1, int(override))
    env = os.environ.get("FTSAMPLE_JOBS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError([("FTSAMPLE_JOBS", f"not an integer: {env!r}")])
    if cfg.jobs is not None:
        return max(1, cfg.jobs)
    return os.cpu_count() or 1


def run(cfg: ExperimentConfig, jobs: int | None = None) -> RunManifest:
    """Execute the configured experiment; write results and manifest files.

    Tasks run in parallel but results are collected in task order, so the
    output is deterministic for a fixed (config, seed) at any job count.
    """
    start = time.monotonic()
    tasks = _build_tasks(cfg)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(tasks))
    args = [(cfg, payload, seed) for payload, seed in zip(tasks, seeds)]
    n_jobs = resolve_jobs(cfg, jobs)
    if n_jobs == 1 or len(tasks) == 1:
        chunks = [_execute(a) for a in args]
    else:
        chunksize = max(1, len(args) // (n_jobs * 4))
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            chunks = list(pool.map(_execute, args, chunksize=chunksize))
    rows = [row for chunk in chunks for row in chunk]
    rows.extend(_summarize(cfg, rows))
    os.makedirs(cfg.out_path, exist_ok=True)
    write_results(rows, os.path.join(cfg.out_path, f"results.{cfg.fmt}"), cfg.fmt)
    passed = sum(1 for r in rows if not r.vacuous and r.passed)
    vacuous = sum(1 for r in rows if r.vacuous)
    failed = sum(1 for r in rows if not r.passed)
    manifest = RunManifest(
        version=VERSION,
        config=cfg.to_json_dict(),
        duration_s=time.monotonic() - start,
        passed=passed,
        failed=failed,
        vacuous=vacuous,
    )
    with open(os.path.join(cfg.out_path, "manifest.json"), "w", encoding="utf-8") as f:
        json.dump(manifest.to_json_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
    return manifest


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def write_results(rows: list, path: str, fmt: str) -> None:
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for r in rows:
                writer.writerow([_fmt_cell(c) for c in r.csv_row()])
    elif fmt == "json":
        with open(path, "w", encoding="utf-8") as f:
            json.dump([r.to_json_dict() for r in rows], f, indent=2, sort_keys=True)
            f.write("\n")
    else:
        raise ConfigError([("output.format", f"must be one of: {', '.join(FORMATS)}")])


def emit_figure_data(kind: str, j: int, p: int, q: int, path: str) -> str:
    """Plot-ready response profile: index, source magnitude, image magnitude.

    The source column tabulates the p-domain transform magnitudes (a point
    mass at j); it is empty past index p.  The image column tabulates the
    q-domain magnitudes of the same state, whose peak sits near q*j/p.
    """
    if kind != "delta-response":
        raise ConfigError([("figure.kind", f"unknown figure kind {kind!r}; valid kinds: delta-response")])
    j, p, q = int(j), int(p), int(q)
    if not 0 <= j < p:
        raise ConfigError([("figure.j", f"index {j} outside [0, {p})")])
    gamma = bounds.delta_response(j, p, q)
    beta = np.zeros(p)
    beta[j] = 1.0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(("index", "source_mag", "image_mag"))
        for i in range(q):
            src = f"{beta[i]:.17g}" if i < p else ""
            writer.writerow((i, src, f"{abs(gamma.amplitudes[i]):.17g}"))
    return path
