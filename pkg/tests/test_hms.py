import dataclasses
import math

import numpy as np
import pytest

from ahmp.bayesnet import default_network, success_probability
from ahmp.hms import (HmsStore, MotionPrimitive, cache_path, dump_store,
                      path_min_clearance, reweight, score,
                      select_approach_node, update_uncertainty)
from ahmp.model import Configuration, forward_kinematics
from ahmp.roadmap import Roadmap
from ahmp.world import Environment, Sphere


def chain_roadmap(n=6):
    """Path graph 0-1-2-...; node i sits at x = i, all edge weights 1."""
    rm = Roadmap()
    for i in range(n):
        rm.add_node(np.array([float(i), 0, 0, 0, 0]))
    for i in range(n - 1):
        rm.add_edge(i, i + 1, 1.0)
    return rm


def put(store, rm, path, weight=1.0, uncertainty=0.0, clearance=None):
    prim = MotionPrimitive(id=store._next_id, path=tuple(path),
                           terminal=path[-1], length=float(len(path) - 1),
                           uncertainty=uncertainty, weight=weight,
                           time_estimate=float(len(path) - 1),
                           clearance_state=clearance)
    store._next_id += 1
    store.primitives.append(prim)
    return prim


def test_store_validates_hyperparameters():
    with pytest.raises(ValueError):
        HmsStore(tau=0.0)
    with pytest.raises(ValueError):
        HmsStore(lambda_=-1.0)
    with pytest.raises(ValueError):
        HmsStore(alpha=0.0)


def test_score_frozen_value():
    # U = 0.5 and terminal-goal distance 2: exp(-0.5) / 3
    rm = chain_roadmap()
    store = HmsStore()
    prim = put(store, rm, [0, 1], uncertainty=0.5)
    goal = Configuration([3.0, 0, 0, 0, 0])  # node 1 is at x=1, distance 2
    got = score(prim, goal, rm, store.lambda_)
    assert got == pytest.approx(math.exp(-0.5) / 3.0, abs=1e-12)
    assert got == pytest.approx(0.2021768866, abs=1e-9)


def test_score_decreases_with_uncertainty_and_distance():
    rm = chain_roadmap()
    store = HmsStore()
    goal = Configuration([2.0, 0, 0, 0, 0])
    last = None
    for u in np.linspace(0.0, 1.0, 11):
        prim = put(store, rm, [0, 1], uncertainty=float(u))
        val = score(prim, goal, rm, store.lambda_)
        if last is not None:
            assert val < last
        last = val
    prim = put(store, rm, [0, 1], uncertainty=0.3)
    vals = [score(prim, Configuration([x, 0, 0, 0, 0]), rm, store.lambda_)
            for x in np.linspace(1.0, 4.0, 13)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_cache_sequence_gives_frozen_weights():
    rm = chain_roadmap()
    store = HmsStore(alpha=0.5)
    cache_path(store, 1, [0, 1], rm)           # length 1
    assert [p.weight for p in store.primitives] == [1.0]
    cache_path(store, 2, [0, 1, 2], rm)        # length 2
    assert [p.weight for p in store.primitives] == pytest.approx([0.5, 0.5])
    cache_path(store, 4, [0, 1, 2, 3, 4], rm)  # length 4
    assert [p.weight for p in store.primitives] == pytest.approx(
        [0.25, 0.25, 0.5], abs=1e-12)
    assert store.weight_sum() == pytest.approx(1.0, abs=1e-12)


def test_cache_path_records_length_and_terminal():
    rm = chain_roadmap()
    store = HmsStore()
    prim = cache_path(store, 3, [0, 1, 2, 3], rm)
    assert prim.terminal == 3
    assert prim.length == pytest.approx(3.0)
    assert prim.time_estimate == pytest.approx(prim.length)


def test_cache_path_rejects_bad_input():
    rm = chain_roadmap()
    store = HmsStore()
    with pytest.raises(ValueError):
        cache_path(store, 1, [], rm)
    with pytest.raises(ValueError):
        cache_path(store, 2, [0, 1], rm)  # last node is 1, not 2
    with pytest.raises(KeyError):
        cache_path(store, 3, [0, 3], rm)  # 0 and 3 are not adjacent


def test_reweight_preserves_ratios():
    rm = chain_roadmap()
    store = HmsStore(alpha=0.3)
    a = put(store, rm, [0, 1], weight=0.25)
    b = put(store, rm, [1, 2], weight=0.75)
    reweight(store, 5.0)
    weights = [p.weight for p in store.primitives]
    assert weights == pytest.approx([0.25, 0.75], abs=1e-12)


def test_reweight_sum_stays_one_over_random_sequences():
    rng = np.random.default_rng(12)
    rm = chain_roadmap(8)
    for _ in range(200):
        store = HmsStore(alpha=float(rng.uniform(0.05, 2.0)))
        for _ in range(int(rng.integers(1, 12))):
            ln = int(rng.integers(1, 7))
            cache_path(store, ln, list(range(ln + 1)), rm)
        assert store.weight_sum() == pytest.approx(1.0, abs=1e-9)


def test_reweight_underflow_resets_uniform():
    rm = chain_roadmap()
    store = HmsStore()
    put(store, rm, [0, 1], weight=0.0)
    put(store, rm, [1, 2], weight=0.0)
    reweight(store, 1.0)
    assert [p.weight for p in store.primitives] == [0.5, 0.5]


def test_select_respects_tau():
    rm = chain_roadmap()
    store = HmsStore(tau=1.0)
    near = put(store, rm, [0, 1])           # terminal at x=1
    far = put(store, rm, [0, 1, 2, 3, 4])   # terminal at x=4
    bn = default_network()
    goal = Configuration([1.5, 0, 0, 0, 0])
    chosen = select_approach_node(store, goal, bn, {}, rm)
    assert chosen is not None and chosen.id == near.id
    lonely = select_approach_node(store, Configuration([9.0, 0, 0, 0, 0]),
                                  bn, {}, rm)
    assert lonely is None
    assert select_approach_node(HmsStore(), goal, bn, {}, rm) is None


def test_select_matches_exhaustive_scan():
    rng = np.random.default_rng(21)
    rm = chain_roadmap(8)
    bn = default_network()
    for _ in range(50):
        store = HmsStore(tau=float(rng.uniform(0.5, 4.0)))
        for _ in range(int(rng.integers(1, 9))):
            end = int(rng.integers(1, 8))
            put(store, rm, list(range(end + 1)),
                weight=float(rng.uniform(0.05, 1.0)),
                uncertainty=float(rng.uniform(0.0, 1.0)),
                clearance=("low", "high", None)[int(rng.integers(3))])
        goal = Configuration([float(rng.uniform(0, 8)), 0, 0, 0, 0])
        evidence = {} if rng.random() < 0.5 else {"Disturbance": "high"}
        got = select_approach_node(store, goal, bn, evidence, rm)

        best, best_val = None, -1.0
        for prim in store.primitives:
            from ahmp.model import config_distance
            if config_distance(rm.config(prim.terminal), goal) > store.tau:
                continue
            ev = dict(evidence)
            if prim.clearance_state is not None:
                ev["Clearance"] = prim.clearance_state
            val = (score(prim, goal, rm, store.lambda_) * prim.weight
                   * success_probability(bn, ev))
            if val > best_val:
                best, best_val = prim, val
        assert (got is None) == (best is None)
        if got is not None:
            assert got.id == best.id


def test_select_invariant_under_uniform_weight_scaling():
    rm = chain_roadmap(8)
    bn = default_network()
    rng = np.random.default_rng(31)
    for _ in range(30):
        store = HmsStore(tau=3.0)
        for _ in range(5):
            end = int(rng.integers(1, 8))
            put(store, rm, list(range(end + 1)),
                weight=float(rng.uniform(0.1, 1.0)),
                uncertainty=float(rng.uniform(0.0, 1.0)))
        goal = Configuration([float(rng.uniform(0, 8)), 0, 0, 0, 0])
        before = select_approach_node(store, goal, bn, {}, rm)
        scale = float(rng.uniform(2.0, 50.0))
        store.primitives = [dataclasses.replace(p, weight=p.weight * scale)
                            for p in store.primitives]
        after = select_approach_node(store, goal, bn, {}, rm)
        assert before.id == after.id


def test_select_ties_resolve_to_lowest_id():
    rm = chain_roadmap()
    store = HmsStore(tau=2.0)
    first = put(store, rm, [0, 1], weight=0.5, uncertainty=0.2)
    put(store, rm, [0, 1], weight=0.5, uncertainty=0.2)  # identical twin
    bn = default_network()
    chosen = select_approach_node(store, Configuration([1.0, 0, 0, 0, 0]),
                                  bn, {}, rm)
    assert chosen.id == first.id


def test_clearance_bucketing_drives_uncertainty(chain):
    bn = default_network()
    tip = forward_kinematics(chain, Configuration([0.0] * 5))[-1]
    # obstacle 0.4 from the tip with radius 0.3: clearance 0.1 (low bucket)
    env = Environment(np.zeros(3), np.array([3.5, 3.0, 2.5]),
                      (Sphere(tip + np.array([0.0, 0.4, 0.0]), 0.3),))
    rm = Roadmap()
    rm.add_node(np.zeros(5))                      # the pose near the obstacle
    rm.add_node(np.array([0.5, 0, 0, 0, 0]))      # raised, clears the sphere
    store = HmsStore(clearance_threshold=0.15)
    near = put(store, rm, [0])
    far = put(store, rm, [1])
    update_uncertainty(store, bn, {}, rm, env, chain)
    near2, far2 = store.primitives
    assert near2.clearance_state == "low"
    assert far2.clearance_state == "high"
    assert near2.uncertainty == pytest.approx(
        1.0 - success_probability(bn, {"Clearance": "low"}), abs=1e-12)
    assert far2.uncertainty == pytest.approx(
        1.0 - success_probability(bn, {"Clearance": "high"}), abs=1e-12)
    assert far2.uncertainty == pytest.approx(0.148, abs=1e-9)
    assert near2.uncertainty > far2.uncertainty


def test_evidence_joins_clearance_in_uncertainty(chain, empty_env):
    bn = default_network()
    rm = Roadmap()
    rm.add_node(np.array([0.5, 0, 0, 0, 0]))
    store = HmsStore()
    put(store, rm, [0])
    update_uncertainty(store, bn, {"Disturbance": "high"}, rm, empty_env, chain)
    prim = store.primitives[0]
    want = 1.0 - success_probability(
        bn, {"Disturbance": "high", "Clearance": prim.clearance_state})
    assert prim.uncertainty == pytest.approx(want, abs=1e-12)


def test_path_min_clearance_measures_worst_node(chain, empty_env):
    rm = Roadmap()
    rm.add_node(np.array([0.2, 0, 0, 0, 0]))
    rm.add_node(np.array([1.4, 0, 0, 0, 0]))
    solo = path_min_clearance(rm, empty_env, chain, [0])
    both = path_min_clearance(rm, empty_env, chain, [0, 1])
    assert both <= solo + 1e-12


def test_dump_store_format():
    rm = chain_roadmap()
    store = HmsStore()
    cache_path(store, 2, [0, 1, 2], rm)
    text = dump_store(store)
    lines = text.strip().splitlines()
    assert lines[0] == "id terminal length uncertainty weight"
    assert lines[1].split() == ["0", "2", "2.000000", "0.000000", "1.000000"]
