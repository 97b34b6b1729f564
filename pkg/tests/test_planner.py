import numpy as np
import pytest

from ahmp.bayesnet import default_network, success_probability
from ahmp.model import Configuration, Pose3, config_distance
from ahmp.planner import (CostWeights, PlanRequest, PlannerConfig, composite_cost,
                          make_store, path_cost, plan_multi_goal, resolve_goal,
                          stitch)
from ahmp.roadmap import Roadmap
from ahmp.search import astar
from ahmp.world import CollisionError, Environment, Sphere

from oracles import path_cost_reference, validate_path


def line_roadmap(n=5):
    rm = Roadmap()
    for i in range(n):
        rm.add_node(np.array([float(i), 0, 0, 0, 0]))
    for i in range(n - 1):
        rm.add_edge(i, i + 1, 1.0)
    return rm


def diamond_roadmap():
    """Two heave corridors A-L1-L2-B (short) and A-H1-H2-B (rotated, longer)."""
    configs = [
        [0.2, 0.0, 0, 0, 0],   # 0: A
        [0.5, 0.0, 0, 0, 0],   # 1: L1
        [0.8, 0.0, 0, 0, 0],   # 2: L2
        [0.5, 0.6, 0, 0, 0],   # 3: H1
        [0.8, 0.6, 0, 0, 0],   # 4: H2
        [1.1, 0.0, 0, 0, 0],   # 5: B
    ]
    rm = Roadmap()
    for c in configs:
        rm.add_node(np.array(c, dtype=float))
    for u, v in [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]:
        w = config_distance(rm.config(u), rm.config(v), rm.weights)
        rm.add_edge(u, v, w)
    return rm


def plan_once(env, chain, rm, request, cfg=None, store=None, bn=None):
    cfg = cfg or PlannerConfig()
    store = store if store is not None else make_store(cfg)
    bn = bn or default_network()
    res = plan_multi_goal(env, chain, rm, store, bn, request, cfg)
    return res, store, cfg


def test_cost_weights_validation():
    with pytest.raises(ValueError):
        CostWeights(distance=-0.1)
    with pytest.raises(ValueError):
        CostWeights(0.0, 0.0, 0.0, 0.0)
    assert CostWeights(0.0, 0.0, 1.0, 0.0).energy == 1.0


def test_make_store_copies_hyperparameters():
    cfg = PlannerConfig(tau=2.5, lambda_=0.7, alpha=0.2, clearance_threshold=0.3)
    store = make_store(cfg)
    assert (store.tau, store.lambda_, store.alpha, store.clearance_threshold) \
        == (2.5, 0.7, 0.2, 0.3)


def test_plan_request_evidence_schedule():
    req = PlanRequest(start=0, goals=(1, 2, 3),
                      evidence_schedule=({"Disturbance": "high"}, None))
    assert req.evidence_for(0) == {"Disturbance": "high"}
    assert req.evidence_for(1) == {}
    assert req.evidence_for(2) == {}  # past the end of the schedule
    assert req.evidence_for(0) is not req.evidence_schedule[0]


def test_stitch_elides_junctions():
    assert stitch([7, 3], [3, 4, 5], [5, 9]) == [7, 3, 4, 5, 9]
    assert stitch([3], [3], [3]) == [3]


def test_stitch_rejects_mismatched_segments():
    with pytest.raises(ValueError):
        stitch([], [1, 2], [2, 3])
    with pytest.raises(ValueError):
        stitch([0, 1], [2, 3], [3, 4])
    with pytest.raises(ValueError):
        stitch([0, 1], [1, 2], [5, 6])


def test_path_cost_matches_reference():
    rm = line_roadmap()
    path = [0, 1, 2, 3]
    assert path_cost(rm, path) == pytest.approx(
        path_cost_reference(rm, path), abs=1e-12)
    assert path_cost(rm, [2]) == 0.0


def test_composite_cost_frozen_example():
    import dataclasses
    rm = line_roadmap()
    cfg = PlannerConfig()
    store = make_store(cfg)
    from ahmp.hms import cache_path
    prim = cache_path(store, 2, [1, 2], rm)
    store.primitives = [dataclasses.replace(prim, uncertainty=0.3)]
    path = [0, 1, 2]
    # distance 2 plus the mean uncertainty of path-sharing primitives
    assert composite_cost(path, store, cfg, rm) == pytest.approx(2.3, abs=1e-12)
    rich = PlannerConfig(cost_weights=CostWeights(1.0, 1.0, 0.5, 0.25))
    assert composite_cost(path, store, rich, rm) == pytest.approx(
        2.0 + 0.3 + 0.5 * 2.0 + 0.25 * 3, abs=1e-12)
    # no primitive touches the path: uncertainty term drops out
    assert composite_cost([3, 4], store, cfg, rm) == pytest.approx(1.0)


def test_resolve_goal_reuses_exact_duplicate(empty_env, chain):
    rm = line_roadmap()
    before = rm.n_nodes
    idx = resolve_goal(Configuration([2.0, 0, 0, 0, 0]), rm, empty_env, chain)
    assert idx == 2 and rm.n_nodes == before


def test_resolve_goal_connects_new_config(empty_env, chain):
    rm = line_roadmap()
    before = rm.n_nodes
    idx = resolve_goal(Configuration([2.0, 0.05, 0, 0, 0]), rm, empty_env, chain)
    assert idx == before and rm.n_nodes == before + 1


def test_resolve_goal_rejects_colliding_duplicate(chain):
    rm = line_roadmap()
    # sphere swallowing the arm at node 2's pose
    env = Environment(np.zeros(3), np.array([3.5, 3.0, 2.5]),
                      (Sphere(np.array([1.7, 1.5, 2.5]), 2.0),))
    with pytest.raises(CollisionError):
        resolve_goal(Configuration([2.0, 0, 0, 0, 0]), rm, env, chain)


def test_resolve_goal_pose_picks_nearest_tip(empty_env, chain):
    rm = line_roadmap()
    # node i has tip (2.4, 1.5, 0.5 + i); aim just above node 3's tip
    idx = resolve_goal(Pose3(np.array([2.4, 1.5, 3.45])), rm, empty_env, chain)
    assert idx == 3
    with pytest.raises(ValueError):
        resolve_goal(Pose3(np.zeros(3)), Roadmap(), empty_env, chain)
    with pytest.raises(TypeError):
        resolve_goal([1, 2, 3], rm, empty_env, chain)


def test_single_goal_matches_plain_astar(empty_env, chain):
    rm = diamond_roadmap()
    req = PlanRequest(start=0, goals=(Configuration([1.1, 0.0, 0, 0, 0]),))
    res, store, _ = plan_once(empty_env, chain, rm, req)
    direct = astar(rm, 0, 5)
    plan = res.goals[0]
    assert plan.mode == "full_astar"
    assert plan.path == direct.path
    assert plan.cost == direct.cost  # exact, both sum the same weights
    assert plan.stats.nodes_expanded == direct.stats.nodes_expanded
    assert res.total_expanded() == direct.stats.nodes_expanded
    assert len(store.primitives) == 1


def test_repeat_goal_rides_cache_for_free(empty_env, chain):
    rm = diamond_roadmap()
    goal = Configuration([1.1, 0.0, 0, 0, 0])
    res, _, _ = plan_once(empty_env, chain, rm, PlanRequest(0, (goal, goal)))
    first, second = res.goals
    assert first.mode == "full_astar"
    assert second.mode == "hms_stitched" and second.cache_hit
    assert second.path == [5] and second.cost == 0.0
    assert second.stats.nodes_expanded == 0


def test_return_trip_rides_cached_highway(empty_env, chain):
    # A -> B caches the corridor; a later A -> B run replays it with no search
    rm = diamond_roadmap()
    goal = Configuration([1.1, 0.0, 0, 0, 0])
    cfg = PlannerConfig()
    store = make_store(cfg)
    bn = default_network()
    first = plan_multi_goal(empty_env, chain, rm, store, bn,
                            PlanRequest(0, (goal,)), cfg)
    again = plan_multi_goal(empty_env, chain, rm, store, bn,
                            PlanRequest(0, (goal,)), cfg)
    assert again.goals[0].mode == "hms_stitched"
    assert again.goals[0].path == first.goals[0].path
    assert again.goals[0].stats.nodes_expanded == 0


def test_colliding_goal_fails_and_planner_continues(chain):
    rm = diamond_roadmap()
    env = Environment(np.zeros(3), np.array([3.5, 3.0, 2.5]),
                      (Sphere(np.array([2.4, 1.5, 1.3]), 0.05),))
    bad = Configuration([0.8, 0.0, 0, 0, 0])   # node 2's tip sits in the sphere
    good = Configuration([1.1, 0.0, 0, 0, 0])
    res, _, _ = plan_once(env, chain, rm, PlanRequest(0, (bad, good)))
    assert res.goals[0].mode == "failed"
    assert res.goals[0].path == [] and res.goals[0].cost == 0.0
    assert res.goals[1].mode == "full_astar"
    assert res.goals[1].path[0] == 0  # failure leaves the arm where it was
    assert res.modes() == ["failed", "full_astar"]
    assert res.total_cost() == res.goals[1].cost


def test_obstacle_edit_invalidates_cache(chain, empty_env):
    rm = diamond_roadmap()
    goal = Configuration([1.1, 0.0, 0, 0, 0])
    cfg = PlannerConfig()
    store = make_store(cfg)
    bn = default_network()
    first = plan_multi_goal(empty_env, chain, rm, store, bn,
                            PlanRequest(0, (goal,)), cfg)
    assert first.goals[0].path == [0, 1, 2, 5]  # the short heave corridor

    # block the low corridor mid-edge: tip of [0.65,...] is (2.4, 1.5, 1.15)
    edited = empty_env.with_obstacles(
        (Sphere(np.array([2.4, 1.5, 1.15]), 0.1),))
    second = plan_multi_goal(edited, chain, rm, store, bn,
                             PlanRequest(0, (goal,)), cfg)
    plan = second.goals[0]
    assert plan.mode == "full_astar"
    assert plan.path == [0, 3, 4, 5]
    assert validate_path(rm, edited, chain, plan.path, 0, 5) == []


def test_revalidation_off_replays_stale_cache(chain, empty_env):
    rm = diamond_roadmap()
    goal = Configuration([1.1, 0.0, 0, 0, 0])
    cfg = PlannerConfig(revalidate_cached=False)
    store = make_store(cfg)
    bn = default_network()
    plan_multi_goal(empty_env, chain, rm, store, bn, PlanRequest(0, (goal,)), cfg)
    edited = empty_env.with_obstacles(
        (Sphere(np.array([2.4, 1.5, 1.15]), 0.1),))
    stale = plan_multi_goal(edited, chain, rm, store, bn,
                            PlanRequest(0, (goal,)), cfg)
    # skipping revalidation trades safety for speed: the stale ride comes back
    assert stale.goals[0].mode == "hms_stitched"
    assert stale.goals[0].path == [0, 1, 2, 5]


def test_evidence_updates_cached_uncertainty(empty_env, chain):
    rm = diamond_roadmap()
    goal = Configuration([1.1, 0.0, 0, 0, 0])
    req = PlanRequest(0, (goal,), ({"Disturbance": "high"},))
    res, store, _ = plan_once(empty_env, chain, rm, req)
    prim = store.primitives[0]
    bn = default_network()
    want = 1.0 - success_probability(
        bn, {"Disturbance": "high", "Clearance": prim.clearance_state})
    assert prim.uncertainty == pytest.approx(want, abs=1e-12)


def test_start_validation(empty_env, chain):
    rm = diamond_roadmap()
    with pytest.raises(IndexError):
        plan_once(empty_env, chain, rm, PlanRequest(99, (Configuration([1.1, 0, 0, 0, 0]),)))
    res, _, _ = plan_once(
        empty_env, chain, rm,
        PlanRequest(Configuration([0.2, 0.0, 0, 0, 0]),
                    (Configuration([1.1, 0.0, 0, 0, 0]),)))
    assert res.start_node == 0
    assert res.current_node == 5


def test_planner_leaves_edge_weights_alone(empty_env, chain):
    rm = diamond_roadmap()
    before = {(u, v): w for u, v, w in rm.edges()}
    goal = Configuration([1.1, 0.0, 0, 0, 0])
    plan_once(empty_env, chain, rm, PlanRequest(0, (goal, goal)))
    assert {(u, v): w for u, v, w in rm.edges()} == before


def test_stitched_cost_never_beats_optimal(env, chain, small_roadmap):
    # reuse is allowed to cost extra distance, never to undercut A*
    rm = small_roadmap.copy()
    hub = 40
    nearby = [idx for idx, _ in rm.neighbors(hub)[:3]]
    order = [hub, nearby[0], hub, nearby[1], hub, nearby[2]]
    goals = tuple(Configuration(rm.config(i).values) for i in order)
    res, _, _ = plan_once(env, chain, rm, PlanRequest(0, goals))
    stitched = 0
    current = res.start_node
    for plan in res.goals:
        if plan.mode == "failed":
            continue
        direct = astar(rm, current, plan.node)
        assert plan.cost >= direct.cost - 1e-9
        stitched += plan.mode == "hms_stitched"
        current = plan.node
    assert stitched > 0  # the invariant must actually see reused paths
