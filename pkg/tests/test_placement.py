import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavecon import placement as P
from uavecon.harness import mean_counterexample_profile, vertex_counterexample_profile

# ---------------------------------------------------------------------------
# independent pure-python oracles


def median_oracle(values, weights, tol=1e-12):
    W = sum(weights)
    ok = []
    for m in values:
        left = sum(w for v, w in zip(values, weights) if v <= m)
        right = sum(w for v, w in zip(values, weights) if v >= m)
        if left >= W / 2 - tol * W and right >= W / 2 - tol * W:
            ok.append(m)
    return min(ok)


def sq_sum(point, locs, weights):
    return sum(w * sum((a - b) ** 2 for a, b in zip(p, point)) for p, w in zip(locs, weights))


def vertex_oracle(locs, weights, A, B, C):
    corners = sorted(itertools.product((0.0, 2 * A), (0.0, 2 * B), (0.0, 2 * C)))
    best = max(sq_sum(c, locs, weights) for c in corners)
    return next(c for c in corners if sq_sum(c, locs, weights) >= best - 1e-9 * max(1.0, best))


def majority_oracle(locs, weights, A, B, C):
    out = []
    for k, half in enumerate((A, B, C)):
        left = sum(w for p, w in zip(locs, weights) if p[k] < half)
        right = sum(w for p, w in zip(locs, weights) if p[k] >= half)
        out.append(0.0 if left <= right + 1e-9 else 2 * half)
    return tuple(out)


def line(xs, weights=None, kind="facility", A=2.0):
    return P.Profile.build([(x, 0, 0) for x in xs], weights, kind, P.Cuboid(A, 1.0, 1.0))


def profiles(kind):
    @st.composite
    def make(draw):
        n = draw(st.integers(1, 6))
        A, B, C = (draw(st.floats(0.5, 3.0)) for _ in range(3))
        unit = st.floats(0.0, 1.0)
        locs = [(draw(unit) * 2 * A, draw(unit) * 2 * B, draw(unit) * 2 * C) for _ in range(n)]
        w = [draw(st.floats(0.1, 10.0)) for _ in range(n)]
        return P.Profile.build(locs, w, kind, P.Cuboid(A, B, C))
    return make()


# ---------------------------------------------------------------------------
# social cost / utility


def test_social_cost_examples():
    prof = line([0, 2])
    assert P.social_cost((1, 0, 0), prof) == 2.0
    assert P.social_cost((2, 0, 0), prof) == 4.0
    assert P.social_cost((0.5, 0.5, 0.5), P.Profile.build([(0.5, 0.5, 0.5)])) == 0.0


def test_social_utility_examples():
    assert P.social_utility((2, 0, 0), line([0.4], kind="adverse", A=1.0)) == pytest.approx(2.56, abs=1e-12)
    sym = P.Profile.build([(0.5, 1, 1), (1.5, 1, 1)], kind="adverse")
    assert P.social_utility((1, 1, 1), sym) == pytest.approx(2 * 0.5 ** 2)
    assert P.social_utility((0.3, 0.3, 0.3), P.Profile.build([(0.3, 0.3, 0.3)], kind="adverse")) == 0.0


# ---------------------------------------------------------------------------
# facility side


def test_weighted_mean_examples():
    assert P.weighted_mean_optimal(line([0, 2])).x == 1.0
    assert P.weighted_mean_optimal(line([0, 2], [1, 3])).x == 1.5
    assert tuple(P.weighted_mean_optimal(P.Profile.build([(0.2, 1.1, 1.7)]))) == (0.2, 1.1, 1.7)


@pytest.mark.parametrize("values, weights, expected", [
    ((1, 2, 3, 4, 5), (1,) * 5, 3),
    ((0, 10), (3, 1), 0),
    ((0, 2), (1, 1), 0),
    ((5, 1, 3), (1, 1, 1), 3),
])
def test_weighted_median_examples(values, weights, expected):
    assert P.weighted_median_1d(values, weights) == expected
    assert median_oracle(values, weights) == expected


@given(st.lists(st.tuples(st.floats(-50, 50), st.floats(0.1, 10)), min_size=1, max_size=9))
def test_weighted_median_matches_oracle(pairs):
    values, weights = zip(*pairs)
    m = P.weighted_median_1d(values, weights)
    assert m in values
    assert m == median_oracle(values, weights)


def test_mechanism1_examples():
    five = line([0.3, 0.9, 1.4, 2.2, 3.8])
    assert P.mechanism1_weighted_median(five).x == 1.4
    one = P.Profile.build([(0.1, 0.2, 0.3)])
    assert tuple(P.mechanism1_weighted_median(one)) == (0.1, 0.2, 0.3)
    two = P.Profile.build([(0, 0, 0), (2, 4, 6)], [3, 1], domain=P.Cuboid(1, 2, 3))
    assert tuple(P.mechanism1_weighted_median(two)) == (0.0, 0.0, 0.0)


@settings(max_examples=60, deadline=None)
@given(profiles("facility"))
def test_mechanism1_range_and_decomposability(prof):
    out = P.mechanism1_weighted_median(prof).as_array()
    locs = prof.locations()
    for k in range(3):
        assert out[k] in locs[:, k]
        assert out[k] == median_oracle(list(locs[:, k]), list(prof.weights()))
    perm = P.Profile(tuple(reversed(prof.users)), prof.domain)
    assert tuple(P.mechanism1_weighted_median(perm)) == tuple(out)


# ---------------------------------------------------------------------------
# adverse side


def test_vertex_examples():
    assert P.obnoxious_optimal_vertex(vertex_counterexample_profile()).x == 2.0
    assert tuple(P.obnoxious_optimal_vertex(P.Profile.build([(0, 0, 0)], kind="adverse",
                                                            domain=P.Cuboid(1, 2, 3)))) == (2, 4, 6)
    centred = P.Profile.build([(0.5, 1, 1), (1.5, 1, 1)], kind="adverse")
    assert tuple(P.obnoxious_optimal_vertex(centred)) == (0, 0, 0)


def test_mechanism2_examples():
    five = line([0.1, 0.3, 0.8, 1.2, 1.9], kind="adverse", A=1.0)
    assert P.mechanism2_majority_corner(five).x == 2.0
    assert P.mechanism2_majority_corner(line([0.4, 1.2], kind="adverse", A=1.0)).x == 0.0
    right = P.Profile.build([(1.0, 1.5, 1.2), (1.9, 1.0, 2.0)], kind="adverse")
    assert tuple(P.mechanism2_majority_corner(right)) == (0, 0, 0)


@settings(max_examples=60, deadline=None)
@given(profiles("adverse"))
def test_adverse_mechanisms_match_oracles(prof):
    locs, w, d = prof.locations().tolist(), prof.weights().tolist(), prof.domain
    assert tuple(P.obnoxious_optimal_vertex(prof)) == vertex_oracle(locs, w, d.A, d.B, d.C)
    out = P.mechanism2_majority_corner(prof)
    assert tuple(out) == majority_oracle(locs, w, d.A, d.B, d.C)
    assert any(np.array_equal(out.as_array(), v) for v in d.vertices())


def test_mechanism2_boundary_counts_right():
    # a user exactly at A belongs to the right half
    prof = line([0.2, 1.0], [1.0, 1.0], kind="adverse", A=1.0)
    assert P.mechanism2_majority_corner(prof).x == 0.0
    prof = line([0.2, 0.6, 1.0], kind="adverse", A=1.0)
    assert P.mechanism2_majority_corner(prof).x == 2.0


# ---------------------------------------------------------------------------
# strategyproofness


def test_weighted_mean_counterexample():
    rep = P.verify_strategyproof("weighted_mean", mean_counterexample_profile(), [(4, 0, 0)])
    assert not rep.ok and len(rep.violations) == 1
    v = rep.violations[0]
    assert v.user == 1 and v.true_location == (2, 0, 0)
    assert (v.truthful_value, v.misreport_value) == (1.0, 0.0)
    assert v.truthful_outcome == (1, 0, 0) and v.misreport_outcome == (2, 0, 0)


def test_vertex_counterexample():
    rep = P.verify_strategyproof("optimal_vertex", vertex_counterexample_profile(), [(2, 1, 1)])
    v = rep.violations[0]
    assert v.user == 1 and v.truthful_outcome[0] == 2.0 and v.misreport_outcome[0] == 0.0
    assert v.misreport_value > v.truthful_value


def test_violation_is_recheckable():
    # a recorded violation replays exactly through the public API
    prof = mean_counterexample_profile()
    v = P.verify_strategyproof(P.weighted_mean_optimal, prof, [(4, 0, 0)]).violations[0]
    moved = prof.with_report(v.user, v.misreport)
    assert tuple(P.weighted_mean_optimal(moved)) == v.misreport_outcome
    assert P.social_cost(v.misreport_outcome, P.Profile.build([v.true_location], domain=prof.domain)) == v.misreport_value


@pytest.mark.parametrize("name, kind", [("mechanism1", "facility"), ("mechanism2", "adverse")])
def test_strategyproof_small_fuzz(name, kind):
    rep = P.fuzz_strategyproof(name, n_profiles=40, seed=7)
    assert rep.ok and rep.profiles == 40 and rep.trials > 0


def test_fuzz_finds_mean_violations():
    assert not P.fuzz_strategyproof("weighted_mean", n_profiles=5, seed=1).ok


def test_verify_rejects_kind_mismatch_and_outside_candidates():
    with pytest.raises(ValueError):
        P.verify_strategyproof("mechanism2", mean_counterexample_profile(), [(0, 0, 0)])
    with pytest.raises(ValueError):
        P.verify_strategyproof("mechanism1", mean_counterexample_profile(), [(9, 0, 0)])


def test_misreport_candidates_contains_grid_and_reports():
    prof = P.Profile.build([(0.3, 0.7, 1.1), (1.3, 0.2, 0.9)])
    cands = {tuple(c) for c in P.misreport_candidates(prof, 0, grid=3)}
    assert (0.0, 1.0, 2.0) in cands and (1.3, 0.2, 0.9) in cands
    assert len(cands) == 4 ** 3


# ---------------------------------------------------------------------------
# approximation ratio


def test_ratio_examples():
    assert P.approximation_ratio("mechanism1", P.Profile.build([(0.4, 0.4, 0.4)])) == 1.0
    assert P.approximation_ratio("mechanism1", line([0, 2])) == pytest.approx(2.0)
    right = P.Profile.build([(1.2, 1.5, 1.1), (1.7, 1.9, 1.3)], kind="adverse")
    assert P.approximation_ratio("mechanism2", right) >= 1.0


def test_ratio_sentinel_for_zero_mechanism_utility():
    # an adverse rule that parks on the lone user earns zero utility
    stay = P.Mechanism("stay", P.Kind.ADVERSE, P._mean_batch)
    prof = P.Profile.build([(0.5, 0.5, 0.5)], kind="adverse")
    assert P.approximation_ratio(stay, prof) == math.inf
    assert math.isfinite(P.approximation_ratio("mechanism2", prof))


# ---------------------------------------------------------------------------
# serialization and validation


def test_profile_json_roundtrip(tmp_path):
    prof = P.Profile.build([(0.3, 0.7, 1.1), (1.3, 0.2, 0.9)], [2.5, 0.5], "adverse", P.Cuboid(1, 1, 0.6))
    path = tmp_path / "p.json"
    path.write_text(json.dumps(prof.to_dict()))
    assert P.load_profile(path) == prof


def test_report_json_roundtrip():
    rep = P.verify_strategyproof("weighted_mean", mean_counterexample_profile(), [(4, 0, 0), (3, 0, 0)])
    again = P.StrategyproofnessReport.from_dict(json.loads(rep.to_json()))
    assert again.to_dict() == rep.to_dict()


@pytest.mark.parametrize("bad", [
    lambda: P.Profile.build([]),
    lambda: P.Profile.build([(0, 0, 0)], [0.0]),
    lambda: P.Profile.build([(3, 0, 0)]),
    lambda: P.Cuboid(0, 1, 1),
    lambda: P.Point3(float("nan"), 0, 0),
])
def test_invalid_inputs(bad):
    with pytest.raises(ValueError):
        bad()
