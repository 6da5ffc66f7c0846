"""UAV placement from (possibly strategic) user location reports.

Facility users want the UAV close, adverse users want it far away. Both are
scored by weighted squared Euclidean distance. Every mechanism here has a
batched numpy core operating on arrays of shape ``(..., n, 3)`` so that the
strategyproofness harness can evaluate thousands of misreports per call.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

TOL = 1e-9


class Kind(str, Enum):
    FACILITY = "facility"
    ADVERSE = "adverse"


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ValueError(f"non-finite coordinate in {self!r}")

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def of(cls, p) -> "Point3":
        if isinstance(p, Point3):
            return p
        x, y, z = (float(c) for c in p)
        return cls(x, y, z)


@dataclass(frozen=True)
class Cuboid:
    """The box [0, 2A] x [0, 2B] x [0, 2C]."""

    A: float = 1.0
    B: float = 1.0
    C: float = 1.0

    def __post_init__(self):
        if not (self.A > 0 and self.B > 0 and self.C > 0):
            raise ValueError(f"half-extents must be positive, got {self!r}")

    @property
    def half(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C], dtype=float)

    @property
    def upper(self) -> np.ndarray:
        return 2.0 * self.half

    def contains(self, p, tol: float = TOL) -> bool:
        q = np.asarray(tuple(p), dtype=float)
        return bool(np.all(q >= -tol) and np.all(q <= self.upper + tol))

    def vertices(self) -> np.ndarray:
        """All 8 corners in lexicographic order, shape (8, 3)."""
        return np.array(list(itertools.product((0.0, 2 * self.A), (0.0, 2 * self.B), (0.0, 2 * self.C))))

    def grid(self, k: int) -> np.ndarray:
        """k**3 evenly spaced points including the faces, shape (k**3, 3)."""
        axes = [np.linspace(0.0, u, k) for u in self.upper]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)


@dataclass(frozen=True)
class UserReport:
    location: Point3
    weight: float = 1.0
    kind: Kind = Kind.FACILITY

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError(f"user weight must be positive, got {self.weight}")


@dataclass(frozen=True)
class Profile:
    users: tuple[UserReport, ...]
    domain: Cuboid = field(default_factory=Cuboid)

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        if not self.users:
            raise ValueError("profile has no users")
        kinds = {u.kind for u in self.users}
        if len(kinds) != 1:
            raise ValueError("mixed facility/adverse profiles are not supported")
        for i, u in enumerate(self.users):
            if not self.domain.contains(u.location):
                raise ValueError(f"user {i} at {tuple(u.location)} lies outside the domain")

    @classmethod
    def build(cls, locations, weights=None, kind: Kind | str = Kind.FACILITY,
              domain: Cuboid | None = None) -> "Profile":
        kind = Kind(kind)
        locations = [Point3.of(p) for p in locations]
        if weights is None:
            weights = [1.0] * len(locations)
        if len(weights) != len(locations):
            raise ValueError("locations and weights differ in length")
        users = tuple(UserReport(p, float(w), kind) for p, w in zip(locations, weights))
        return cls(users, domain or Cuboid())

    @property
    def kind(self) -> Kind:
        return self.users[0].kind

    @property
    def n(self) -> int:
        return len(self.users)

    def locations(self) -> np.ndarray:
        return np.array([tuple(u.location) for u in self.users], dtype=float)

    def weights(self) -> np.ndarray:
        return np.array([u.weight for u in self.users], dtype=float)

    def with_report(self, i: int, location) -> "Profile":
        users = list(self.users)
        users[i] = UserReport(Point3.of(location), users[i].weight, users[i].kind)
        return Profile(tuple(users), self.domain)

    def to_dict(self) -> dict:
        return {
            "domain": {"A": self.domain.A, "B": self.domain.B, "C": self.domain.C},
            "kind": self.kind.value,
            "users": [{"x": u.location.x, "y": u.location.y, "z": u.location.z, "w": u.weight}
                      for u in self.users],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Profile":
        dom = d.get("domain", {})
        domain = Cuboid(float(dom.get("A", 1.0)), float(dom.get("B", 1.0)), float(dom.get("C", 1.0)))
        users = d.get("users") or []
        locs = [(u["x"], u.get("y", 0.0), u.get("z", 0.0)) for u in users]
        return cls.build(locs, [u.get("w", 1.0) for u in users], d.get("kind", "facility"), domain)


def load_profile(path) -> Profile:
    with open(path, encoding="utf-8") as fh:
        return Profile.from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# batched cores: locs (..., n, 3), weights (n,) -> (..., 3)

def _weighted_sq_dist(points: np.ndarray, locs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """sum_i w_i |locs_i - point|^2 for points (..., 3) against locs (..., n, 3)."""
    diff = locs - points[..., None, :]
    return np.einsum("...nk,...nk,n->...", diff, diff, weights)


def _median_core(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # smallest value whose cumulative weight reaches half the total
    order = np.argsort(values, axis=-1, kind="stable")
    sorted_vals = np.take_along_axis(values, order, axis=-1)
    cum = np.cumsum(weights[order], axis=-1)
    total = weights.sum()
    idx = np.argmax(cum >= 0.5 * total - 1e-12 * total, axis=-1)
    return np.take_along_axis(sorted_vals, idx[..., None], axis=-1)[..., 0]


def _mean_batch(locs, weights, domain):
    return np.einsum("...nk,n->...k", locs, weights) / weights.sum()


def _median_batch(locs, weights, domain):
    return np.stack([_median_core(locs[..., k], weights) for k in range(3)], axis=-1)


def _vertex_batch(locs, weights, domain):
    verts = domain.vertices()
    util = np.stack([_weighted_sq_dist(np.broadcast_to(v, locs.shape[:-2] + (3,)), locs, weights)
                     for v in verts], axis=-1)
    best = util.max(axis=-1, keepdims=True)
    idx = np.argmax(util >= best - TOL * np.maximum(1.0, best), axis=-1)
    return verts[idx]


def _majority_batch(locs, weights, domain):
    half = domain.half
    left = np.einsum("...nk,n->...k", (locs < half).astype(float), weights)
    right = weights.sum() - left
    return np.where(left <= right + TOL, 0.0, 2.0 * half)


@dataclass(frozen=True)
class Mechanism:
    name: str
    kind: Kind
    batch: Callable[[np.ndarray, np.ndarray, Cuboid], np.ndarray] = field(repr=False)
    strategyproof: bool = False

    def __call__(self, profile: Profile) -> Point3:
        _check_kind(profile, self.kind, self.name)
        out = self.batch(profile.locations(), profile.weights(), profile.domain)
        return Point3.of(out)


def _check_kind(profile: Profile, kind: Kind, what: str) -> None:
    if profile.kind is not kind:
        raise ValueError(f"{what} expects a {kind.value} profile, got {profile.kind.value}")


MEAN = Mechanism("weighted_mean", Kind.FACILITY, _mean_batch)
MEDIAN = Mechanism("mechanism1", Kind.FACILITY, _median_batch, strategyproof=True)
VERTEX = Mechanism("optimal_vertex", Kind.ADVERSE, _vertex_batch)
MAJORITY = Mechanism("mechanism2", Kind.ADVERSE, _majority_batch, strategyproof=True)

MECHANISMS: dict[str, Mechanism] = {
    "weighted_mean": MEAN, "mean": MEAN,
    "mechanism1": MEDIAN, "median": MEDIAN, "m1": MEDIAN,
    "optimal_vertex": VERTEX, "vertex": VERTEX,
    "mechanism2": MAJORITY, "majority": MAJORITY, "m2": MAJORITY,
}


# ---------------------------------------------------------------------------
# public operations

def social_cost(point, profile: Profile) -> float:
    """Total weighted squared distance of facility users to ``point``."""
    _check_kind(profile, Kind.FACILITY, "social_cost")
    return float(_weighted_sq_dist(Point3.of(point).as_array(), profile.locations(), profile.weights()))


def social_utility(point, profile: Profile) -> float:
    """Total weighted squared distance of adverse users to ``point``."""
    _check_kind(profile, Kind.ADVERSE, "social_utility")
    return float(_weighted_sq_dist(Point3.of(point).as_array(), profile.locations(), profile.weights()))


def weighted_median_1d(values: Sequence[float], weights: Sequence[float]) -> float:
    """Smallest reported value with at least half the total weight on each side.

    >>> weighted_median_1d([0.0, 10.0], [3.0, 1.0])
    0.0
    >>> weighted_median_1d([0.0, 2.0], [1.0, 1.0])
    0.0
    """
    vals = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    if vals.ndim != 1 or vals.size == 0 or vals.shape != w.shape:
        raise ValueError("values and weights must be equal-length nonempty sequences")
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    return float(_median_core(vals, w))


def weighted_mean_optimal(profile: Profile) -> Point3:
    return MEAN(profile)


def mechanism1_weighted_median(profile: Profile) -> Point3:
    return MEDIAN(profile)


def obnoxious_optimal_vertex(profile: Profile) -> Point3:
    """Cuboid corner maximizing social utility; ties go to the lexicographically smallest."""
    return VERTEX(profile)


def mechanism2_majority_corner(profile: Profile) -> Point3:
    """Per axis, put the UAV at 0 unless the lower half [0, A) outweighs [A, 2A]."""
    return MAJORITY(profile)


_BY_FUNCTION = {
    weighted_mean_optimal: MEAN,
    mechanism1_weighted_median: MEDIAN,
    obnoxious_optimal_vertex: VERTEX,
    mechanism2_majority_corner: MAJORITY,
}


def get_mechanism(mechanism) -> Mechanism:
    if isinstance(mechanism, Mechanism):
        return mechanism
    if isinstance(mechanism, str):
        try:
            return MECHANISMS[mechanism]
        except KeyError:
            raise ValueError(f"unknown mechanism {mechanism!r}; choose from {sorted(MECHANISMS)}") from None
    if mechanism in _BY_FUNCTION:
        return _BY_FUNCTION[mechanism]
    raise TypeError(f"not a placement mechanism: {mechanism!r}")


def benchmark_for(kind: Kind) -> Mechanism:
    return MEAN if kind is Kind.FACILITY else VERTEX


# ---------------------------------------------------------------------------
# strategyproofness

@dataclass(frozen=True)
class Violation:
    user: int
    true_location: tuple[float, float, float]
    misreport: tuple[float, float, float]
    truthful_value: float
    misreport_value: float
    truthful_outcome: tuple[float, float, float]
    misreport_outcome: tuple[float, float, float]

    def to_dict(self) -> dict:
        return {
            "user": self.user,
            "true_location": list(self.true_location),
            "misreport": list(self.misreport),
            "truthful_value": self.truthful_value,
            "misreport_value": self.misreport_value,
            "truthful_outcome": list(self.truthful_outcome),
            "misreport_outcome": list(self.misreport_outcome),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Violation":
        return cls(int(d["user"]), tuple(d["true_location"]), tuple(d["misreport"]),
                   float(d["truthful_value"]), float(d["misreport_value"]),
                   tuple(d["truthful_outcome"]), tuple(d["misreport_outcome"]))


@dataclass
class StrategyproofnessReport:
    mechanism: str
    violations: list[Violation] = field(default_factory=list)
    trials: int = 0
    profiles: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "StrategyproofnessReport") -> None:
        self.violations.extend(other.violations)
        self.trials += other.trials
        self.profiles += other.profiles

    def to_dict(self) -> dict:
        return {"mechanism": self.mechanism, "trials": self.trials, "profiles": self.profiles,
                "violations": [v.to_dict() for v in self.violations]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "StrategyproofnessReport":
        return cls(d["mechanism"], [Violation.from_dict(v) for v in d.get("violations", [])],
                   int(d.get("trials", 0)), int(d.get("profiles", 0)))


def _tuple3(a) -> tuple[float, float, float]:
    return tuple(float(c) for c in a)  # type: ignore[return-value]


def verify_strategyproof(mechanism, profile: Profile, misreport_candidates) -> StrategyproofnessReport:
    """Try every candidate as a unilateral misreport for every user.

    A violation is recorded when the deviating user's true cost drops (or true
    utility rises, for adverse users) by more than ``TOL``. Weights are public,
    so only locations are perturbed.
    """
    mech = get_mechanism(mechanism)
    _check_kind(profile, mech.kind, mech.name)
    cands = np.asarray([tuple(Point3.of(c)) for c in misreport_candidates], dtype=float).reshape(-1, 3)
    upper = profile.domain.upper
    if np.any(cands < -TOL) or np.any(cands > upper + TOL):
        raise ValueError("misreport candidates must lie inside the domain")

    report = StrategyproofnessReport(mech.name, profiles=1)
    if cands.size == 0:
        return report
    truthful = mech.batch(profile.locations(), profile.weights(), profile.domain)
    for i in range(profile.n):
        _scan_user(mech, profile, truthful, i, cands, report)
    return report


def _scan_user(mech: Mechanism, profile: Profile, truthful: np.ndarray, i: int,
               cands: np.ndarray, report: StrategyproofnessReport) -> None:
    locs = profile.locations()
    w = profile.weights()
    batch = np.repeat(locs[None], len(cands), axis=0)
    batch[:, i, :] = cands
    outcomes = mech.batch(batch, w, profile.domain)
    true_val = float(w[i] * np.sum((locs[i] - truthful) ** 2))
    mis_vals = w[i] * np.sum((locs[i] - outcomes) ** 2, axis=-1)
    if mech.kind is Kind.FACILITY:
        bad = mis_vals < true_val - TOL
    else:
        bad = mis_vals > true_val + TOL
    for j in np.flatnonzero(bad):
        report.violations.append(Violation(
            i, _tuple3(locs[i]), _tuple3(cands[j]), true_val, float(mis_vals[j]),
            _tuple3(truthful), _tuple3(outcomes[j])))
    report.trials += len(cands)


def misreport_candidates(profile: Profile, user: int, grid: int = 9) -> np.ndarray:
    """Per-axis values (a ``grid``-point lattice plus the other users' coordinates), crossed."""
    locs = profile.locations()
    others = np.delete(locs, user, axis=0)
    axes = [np.unique(np.concatenate([np.linspace(0.0, u, grid), others[:, k]]))
            for k, u in enumerate(profile.domain.upper)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)


def random_profile(rng: np.random.Generator, kind: Kind | str = Kind.FACILITY, n: int | None = None,
                   max_users: int = 8, weight_range=(0.1, 10.0), domain: Cuboid | None = None) -> Profile:
    kind = Kind(kind)
    if n is None:
        n = int(rng.integers(1, max_users + 1))
    if domain is None:
        A, B, C = rng.uniform(0.5, 3.0, size=3)
        domain = Cuboid(float(A), float(B), float(C))
    locs = rng.uniform(0.0, 1.0, size=(n, 3)) * domain.upper
    weights = rng.uniform(*weight_range, size=n)
    return Profile.build(locs, weights, kind, domain)


def fuzz_strategyproof(mechanism, n_profiles: int = 1000, seed: int = 0, max_users: int = 8,
                       grid: int = 9, weight_range=(0.1, 10.0)) -> StrategyproofnessReport:
    """Random-profile misreport search; returns the merged report."""
    mech = get_mechanism(mechanism)
    rng = np.random.default_rng(seed)
    total = StrategyproofnessReport(mech.name)
    for _ in range(n_profiles):
        profile = random_profile(rng, mech.kind, max_users=max_users, weight_range=weight_range)
        truthful = mech.batch(profile.locations(), profile.weights(), profile.domain)
        for i in range(profile.n):
            _scan_user(mech, profile, truthful, i, misreport_candidates(profile, i, grid), total)
        total.profiles += 1
    return total


def approximation_ratio(mechanism, profile: Profile) -> float:
    """Benchmark-relative quality; 1 is optimal, larger is worse."""
    mech = get_mechanism(mechanism)
    _check_kind(profile, mech.kind, mech.name)
    if mech.kind is Kind.FACILITY:
        value = social_cost(mech(profile), profile)
        bench = social_cost(MEAN(profile), profile)
        num, den = value, bench
    else:
        value = social_utility(mech(profile), profile)
        bench = social_utility(VERTEX(profile), profile)
        num, den = bench, value
    if den <= TOL:
        return 1.0 if num <= TOL else math.inf
    return max(1.0, num / den)


def ratio_samples(mechanism, n_profiles: int, seed: int = 0, max_users: int = 8) -> list[float]:
    mech = get_mechanism(mechanism)
    rng = np.random.default_rng(seed)
    return [approximation_ratio(mech, random_profile(rng, mech.kind, max_users=max_users))
            for _ in range(n_profiles)]

