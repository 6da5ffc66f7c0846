"""Seeded scenarios and experiment drivers.

Units follow the deployment study: kilometres, hours, and abstract watts, so
energies come out in watt-hours.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence

import numpy as np

from . import placement
from .deployment import Fleet, InfeasibleError, UavSpec, minmax_general, minsum_dp
from .power import ConstantPower, PowerModel, power_from_dict

log = logging.getLogger(__name__)

OBJECTIVES = ("minmax", "minsum")
MAX_RESAMPLES = 10
CSV_COLUMNS = ("n", "objective", "mean_max_energy", "mean_total_energy", "trials", "seed")


@dataclass
class ScenarioConfig:
    seed: int = 42
    n_range: tuple[int, ...] = (5, 10, 15, 20)
    trials: int = 30
    beta: float = 10.0              # km
    mean_speed: float = 40.0        # km/h
    mean_radius: float = 2.0        # km
    mean_altitude: float = 5.0      # km
    spread: float = 0.25
    power: PowerModel = field(default_factory=ConstantPower)
    epsilon: float = 0.01
    delta: Optional[float] = None   # defaults to beta / 200
    mech_profiles: int = 1000
    mech_grid: int = 9
    mech_max_users: int = 8

    def __post_init__(self):
        self.n_range = tuple(int(n) for n in self.n_range)
        if any(n < 1 for n in self.n_range):
            raise ValueError("fleet sizes must be positive")
        if min(self.mean_speed, self.mean_radius, self.mean_altitude, self.beta) <= 0:
            raise ValueError("means and beta must be positive")
        if not 0 <= self.spread < 1:
            raise ValueError("spread must lie in [0, 1)")
        if self.trials < 1:
            raise ValueError("trials must be positive")

    @property
    def grid_delta(self) -> float:
        return self.beta / 200 if self.delta is None else self.delta

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["n_range"] = list(self.n_range)
        d["power"] = self.power.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        if "power" in d:
            d["power"] = power_from_dict(d["power"])
        return cls(**d)


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return ScenarioConfig.from_dict(json.load(fh))


def generate_fleet(cfg: ScenarioConfig, n: int, trial: int, attempt: int = 0) -> Fleet:
    """Draw v, r, h uniformly in mean*(1 +/- spread) and x0 uniformly in [0, beta]."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, n, trial, attempt]))
    jitter = lambda mean: mean * (1 + cfg.spread * rng.uniform(-1.0, 1.0, size=n))  # noqa: E731
    v, r, h = jitter(cfg.mean_speed), jitter(cfg.mean_radius), jitter(cfg.mean_altitude)
    x0 = rng.uniform(0.0, cfg.beta, size=n)
    if min(v.min(), r.min(), h.min()) <= 0:
        raise ValueError("sampled a nonpositive UAV parameter")
    uavs = tuple(UavSpec(float(a), float(b), float(c), float(d), cfg.power) for a, b, c, d in zip(x0, h, v, r))
    return Fleet(uavs, cfg.beta)


def feasible_fleet(cfg: ScenarioConfig, n: int, trial: int) -> tuple[Optional[Fleet], int]:
    """First draw whose footprints can span beta, with the number of draws used."""
    for attempt in range(MAX_RESAMPLES + 1):
        fleet = generate_fleet(cfg, n, trial, attempt)
        if fleet.total_width >= fleet.beta:
            return fleet, attempt + 1
    return None, MAX_RESAMPLES + 1


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    trial: int
    objective: str
    max_energy: float
    total_energy: float
    runtime: float
    seed: int
    feasible: bool = True


def run_tradeoff_experiment(cfg: ScenarioConfig) -> list[ExperimentRecord]:
    """Solve both objectives on the same fleets; one record per (n, trial, objective)."""
    records = []
    for n in cfg.n_range:
        for trial in range(cfg.trials):
            fleet, draws = feasible_fleet(cfg, n, trial)
            if fleet is None:
                log.warning("n=%d trial=%d: no feasible fleet after %d draws", n, trial, draws)
                records.extend(ExperimentRecord(n, trial, obj, float("nan"), float("nan"), 0.0, cfg.seed, False)
                               for obj in OBJECTIVES)
                continue
            for obj in OBJECTIVES:
                t0 = time.perf_counter()
                try:
                    dep = minmax_general(fleet, cfg.epsilon) if obj == "minmax" else minsum_dp(fleet, cfg.grid_delta)
                except InfeasibleError:
                    records.append(ExperimentRecord(n, trial, obj, float("nan"), float("nan"),
                                                    time.perf_counter() - t0, cfg.seed, False))
                    continue
                records.append(ExperimentRecord(n, trial, obj, dep.max_energy, dep.total_energy,
                                                time.perf_counter() - t0, cfg.seed))
    return sorted(records, key=lambda r: (r.n, r.objective, r.trial))


def summarize(records: Sequence[ExperimentRecord]) -> list[dict]:
    groups: dict[tuple[int, str], list[ExperimentRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.objective), []).append(r)
    rows = []
    for (n, obj), recs in sorted(groups.items()):
        ok = [r for r in recs if r.feasible]
        rows.append({
            "n": n,
            "objective": obj,
            "mean_max_energy": statistics.fmean(r.max_energy for r in ok) if ok else float("nan"),
            "mean_total_energy": statistics.fmean(r.total_energy for r in ok) if ok else float("nan"),
            "trials": len(ok),
            "seed": recs[0].seed,
        })
    return rows


def _fmt(x) -> str:
    return f"{x:.9g}" if isinstance(x, float) else str(x)


def results_csv(records: Sequence[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in summarize(records):
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def results_json(records: Sequence[ExperimentRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=2)


def parse_records_json(text: str) -> list[ExperimentRecord]:
    return [ExperimentRecord(**d) for d in json.loads(text)]


def emit_results(records: Sequence[ExperimentRecord], fmt: str = "csv", path=None) -> None:
    """Write the per-n summary (CSV) or the full record list (JSON) to ``path`` or stdout."""
    fmt = fmt.lower()
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    text = results_csv(records) if fmt == "csv" else results_json(records) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# placement suites

def mean_counterexample_profile() -> placement.Profile:
    """Two facility users at x=0 and x=2 on a line."""
    return placement.Profile.build([(0, 0, 0), (2, 0, 0)], domain=placement.Cuboid(2.0, 1.0, 1.0))


def vertex_counterexample_profile(A: float = 1.0) -> placement.Profile:
    """Two adverse users at 0.4A and 1.2A, sharing the mid-plane in y and z."""
    return placement.Profile.build([(0.4 * A, A, A), (1.2 * A, A, A)], kind="adverse",
                                   domain=placement.Cuboid(A, A, A))


def counterexamples() -> dict[str, placement.StrategyproofnessReport]:
    line_pair = mean_counterexample_profile()
    adverse_pair = vertex_counterexample_profile()
    return {
        "weighted_mean": placement.verify_strategyproof("weighted_mean", line_pair, [(4.0, 0.0, 0.0)]),
        "optimal_vertex": placement.verify_strategyproof("optimal_vertex", adverse_pair, [(2.0, 1.0, 1.0)]),
    }


def _ratio_summary(ratios: list[float]) -> dict:
    arr = np.asarray(ratios)
    finite = arr[np.isfinite(arr)]
    return {
        "count": int(arr.size),
        "infinite": int(arr.size - finite.size),
        "mean": float(finite.mean()) if finite.size else float("nan"),
        "p50": float(np.quantile(finite, 0.5)) if finite.size else float("nan"),
        "p90": float(np.quantile(finite, 0.9)) if finite.size else float("nan"),
        "max": float(finite.max()) if finite.size else float("nan"),
    }


def run_mechanism_suite(cfg: ScenarioConfig) -> dict:
    """Fuzz both strategyproof mechanisms, replay the two counterexamples, sample ratios."""
    report: dict = {"seed": cfg.seed, "fuzz": {}, "counterexamples": {}, "ratios": {}}
    for k, name in enumerate(("mechanism1", "mechanism2")):
        t0 = time.perf_counter()
        rep = placement.fuzz_strategyproof(name, cfg.mech_profiles, seed=cfg.seed + k,
                                           max_users=cfg.mech_max_users, grid=cfg.mech_grid)
        report["fuzz"][name] = {"profiles": rep.profiles, "trials": rep.trials,
                                "violations": len(rep.violations), "runtime": time.perf_counter() - t0}
    for name, rep in counterexamples().items():
        report["counterexamples"][name] = rep.to_dict()
    for k, name in enumerate(("mechanism1", "mechanism2")):
        samples = placement.ratio_samples(name, min(cfg.mech_profiles, 200), seed=cfg.seed + 100 + k,
                                          max_users=cfg.mech_max_users)
        report["ratios"][name] = _ratio_summary(samples)
    return report
