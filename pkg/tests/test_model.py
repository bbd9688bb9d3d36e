import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsrmb.errors import DisconnectedVertices, InsufficientDrivers, NonUniformScenarios
from tsrmb.instances import (gen_line_counterexample, gen_random_euclidean,
                             gen_surplus_counterexample, line_instance)
from tsrmb.model import (MetricInstance, ScenarioSet, cost1, cost2, decision_from_drivers,
                         metric_closure, surplus, validate)

from oracles import bottleneck_bf, min_perfect_bf


def test_cost1_single_edge():
    inst = line_instance([0], [9], [5, 20], ScenarioSet.of([[0]]))
    assert cost1(inst, [0]) == 5


def test_line_counterexample_costs():
    inst = gen_line_counterexample(3, 0.1)
    greedy = (1, 2, 3)
    assert cost1(inst, greedy) == pytest.approx(0.9, abs=1e-9)
    assert cost2(inst, [0], [0]) == pytest.approx(6.7, abs=1e-9)


def test_cost2_example():
    inst = line_instance([100], [0], [3, -5, 50], ScenarioSet.of([[0]]))
    assert cost2(inst, [0, 1], [0]) == 3
    with pytest.raises(InsufficientDrivers):
        cost2(inst, [], [0])


def test_costs_match_bruteforce(rng):
    for seed in range(15):
        inst = gen_random_euclidean(3, 4, 8, "explicit:1x4", 10.0, seed)
        d1 = tuple(sorted(rng.choice(8, 3, replace=False).tolist()))
        ref1 = min_perfect_bf(inst.r1_to_d(list(d1))) / 3
        assert cost1(inst, d1) == pytest.approx(ref1, abs=1e-9)
        avail = [j for j in range(8) if j not in d1]
        assert cost2(inst, avail, [0, 1, 2, 3]) == pytest.approx(
            bottleneck_bf(inst.r2_to_d([0, 1, 2, 3], avail)), abs=1e-12)


def test_cost1_recomputes_matching():
    inst = gen_random_euclidean(3, 2, 5, "explicit:1x2", 1.0, 3)
    d1 = decision_from_drivers(inst, [4, 0, 2])
    assert d1.drivers == (0, 2, 4)
    assert sorted(j for _, j in d1.matching.pairs) == [0, 2, 4]
    assert cost1(inst, d1) == pytest.approx(d1.matching.total_weight / 3)


def test_surplus_values():
    inst = gen_random_euclidean(3, 4, 5, "implicit:2", 1.0, 0)
    assert surplus(inst) == 0
    inst = gen_random_euclidean(3, 4, 8, "implicit:2", 1.0, 0)
    assert surplus(inst) == 3
    assert surplus(gen_surplus_counterexample(4)) == 1
    mixed = line_instance([0], [1, 2, 3], [0, 1, 2, 3], ScenarioSet.of([[0], [1, 2]]))
    with pytest.raises(NonUniformScenarios):
        surplus(mixed)
    neg = gen_random_euclidean(3, 4, 4, "implicit:2", 1.0, 0)
    assert surplus(neg) == -1


def test_validate_triangle_and_symmetry():
    d = np.array([[0, 10, 20], [10, 0, 1], [20, 1, 0]], dtype=float)
    # vertices: one R1 rider, one R2 rider, one driver
    inst = MetricInstance(1, ["x"], 1, d, ScenarioSet.of([[0]]))
    out = validate(inst)
    assert len([v for v in out if "triangle" in v]) == 2  # (0,1,2) and its mirror (2,1,0)
    assert any("(0,1,2)" in v for v in out)
    d2 = np.array([[0, 1, 1], [2, 0, 1], [1, 1, 0]], dtype=float)
    out2 = validate(MetricInstance(1, ["x"], 1, d2, ScenarioSet.of([[0]])))
    assert any("asymmetric" in v for v in out2)
    d3 = np.zeros((3, 3))
    d3[0, 0] = 1
    assert any("expected 0" in v for v in validate(MetricInstance(1, ["x"], 1, d3, ScenarioSet.of([[0]]))))


def test_validate_scenarios():
    inst = line_instance([0], [1, 2], [0, 1, 2], ScenarioSet.of([[0], []]))
    assert any("empty" in v for v in validate(inst))
    inst = line_instance([0], [1, 2], [0, 1, 2], ScenarioSet.implicit(3))
    assert any("implicit" in v for v in validate(inst))


def test_metric_closure_examples():
    metric = gen_random_euclidean(2, 2, 3, "explicit:1x2", 1.0, 1).dist
    assert np.allclose(metric_closure(metric), metric, atol=1e-12)
    star = np.full((4, 4), np.inf)
    star[0, 1:] = 1
    assert metric_closure(star)[1, 2] == 2
    with pytest.raises(DisconnectedVertices):
        metric_closure(np.array([[0, np.inf], [np.inf, 0]]))


def test_metric_closure_keeps_forbidden():
    raw = np.full((3, 3), np.inf)
    raw[0, 1] = raw[1, 2] = 1
    forb = np.zeros((3, 3), bool)
    forb[0, 2] = True
    out = metric_closure(raw, forb)
    assert out[0, 2] == np.inf and out[2, 0] == np.inf and out[0, 1] == 1


@given(st.integers(3, 7).flatmap(lambda n: st.lists(st.floats(0.1, 50), min_size=n * n,
                                                   max_size=n * n).map(lambda v: (n, v))))
def test_closure_always_validates(data):
    n, vals = data
    raw = np.array(vals).reshape(n, n)
    closed = metric_closure(raw)
    inst = MetricInstance(1, ["x"], n - 2, closed, ScenarioSet.of([[0]]))
    assert validate(inst) == []


def test_cost2_monotone_and_permutation_invariant(rng):
    for seed in range(10):
        inst = gen_random_euclidean(1, 3, 8, "explicit:1x3", 5.0, seed)
        base = [2, 4, 6]
        more = base + [0, 7]
        assert cost2(inst, more, [0, 1, 2]) <= cost2(inst, base, [0, 1, 2])
        perm = list(rng.permutation(more))
        assert cost2(inst, perm, [2, 0, 1]) == cost2(inst, more, [0, 1, 2])


def test_empty_r1_rejected():
    with pytest.raises(ValueError):
        MetricInstance(0, ["x"], 1, np.zeros((2, 2)), ScenarioSet.of([[0]]))


def test_surplus_zero_leaves_k_drivers():
    inst = gen_random_euclidean(2, 5, 5, "implicit:3", 1.0, 2)
    assert surplus(inst) == 0
    d1 = decision_from_drivers(inst, [1, 3])
    assert len(d1.available(inst.n_d)) == 3
