"""Benchmark harness: scenario files, the experiment matrix, and reports.

A scenario is a single JSON document describing the tank, the arm, the
Bayesian network, the goal rule, planner parameters, and the experiment
matrix (planners x max_samples x n_goals x seeds).  Reports are CSV or
markdown; every column except wall_time_s is byte-deterministic for a
fixed scenario.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bayesnet import BayesNet, NodeSpec, default_network
from .model import (Configuration, JointLimits, KinematicChain, Pose3,
                    config_distance, make_rng)
from .planner import (CostWeights, MODE_FAILED, MODE_FULL, PlanRequest,
                      PlannerConfig, make_store, plan_multi_goal, resolve_goal)
from .roadmap import (BuildParams, InfeasibleEnvironmentError, Roadmap, build_prm)
from .search import RrtParams, SearchStats, astar, polyline_cost, rrt_plan
from .world import (Box, CollisionError, Environment, Sphere, configs_free_batch)

_STREAM_GOALS = 1
_STREAM_RRT_GOAL = 3

CSV_HEADER = "planner,max_samples,n_goals,seed,nodes_expanded,path_cost,wall_time_s,modes"
RATIO_HEADER = "max_samples,n_goals,seed,ahmp_expanded,prm_astar_expanded,ratio"
PLANNER_NAMES = ("prm_astar", "rrt", "ahmp")
MODE_RRT = "rrt"
MODE_BUILD_FAILED = "build_failed"


@dataclass
class SchemaError:
    path: str
    reason: str

    def __str__(self) -> str:
        return f"{self.path}: {self.reason}"


class ScenarioError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid scenario:\n" + "\n".join(str(e) for e in self.errors))


@dataclass(frozen=True)
class MatrixSpec:
    planners: tuple
    max_samples: tuple
    n_goals: tuple
    seeds: tuple


@dataclass
class Scenario:
    env: Environment
    chain: KinematicChain
    limits: JointLimits
    weights: np.ndarray
    start: Configuration
    goal_rule: dict
    bn: BayesNet
    evidence_schedule: tuple
    planner_cfg: PlannerConfig
    rrt_step_size: float
    rrt_goal_bias: float
    rrt_goal_tolerance: float
    matrix: MatrixSpec
    k_neighbors: int
    max_rejection_factor: int
    raw: dict = field(repr=False, default_factory=dict)


@dataclass
class ReportRow:
    planner: str
    max_samples: int
    n_goals: int
    seed: int
    nodes_expanded: int
    path_cost: float
    wall_time_s: float
    modes: list

    def csv_line(self) -> str:
        return (f"{self.planner},{self.max_samples},{self.n_goals},{self.seed},"
                f"{self.nodes_expanded},{float(self.path_cost)!r},"
                f"{float(self.wall_time_s)!r},{';'.join(self.modes)}")

    @property
    def failed(self) -> bool:
        return any(m in (MODE_FAILED, MODE_BUILD_FAILED) for m in self.modes)


# ---------------------------------------------------------------------------
# schema loading


def _expect(raw, path, errors, typ, default=None, required=False):
    cur = raw
    for part in path.split("."):
        if not isinstance(cur, dict) or part not in cur:
            if required:
                errors.append(SchemaError(path, "missing required field"))
            return default
        cur = cur[part]
    if typ is float and isinstance(cur, (int, float)) and not isinstance(cur, bool):
        return float(cur)
    if typ is int and isinstance(cur, int) and not isinstance(cur, bool):
        return cur
    if typ is not None and not isinstance(cur, typ):
        errors.append(SchemaError(path, f"expected {typ.__name__}, got {type(cur).__name__}"))
        return default
    return cur


def _vector(raw, path, errors, size):
    val = _expect(raw, path, errors, list, required=True)
    if val is None:
        return None
    if len(val) != size or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                                   for x in val):
        errors.append(SchemaError(path, f"expected {size} numbers"))
        return None
    return [float(x) for x in val]


def _parse_obstacles(raw, errors):
    out = []
    items = _expect(raw, "environment.obstacles", errors, list, default=[])
    for i, item in enumerate(items or []):
        base = f"environment.obstacles[{i}]"
        if not isinstance(item, dict):
            errors.append(SchemaError(base, "expected an object"))
            continue
        shape = item.get("shape")
        if shape == "sphere":
            c = _vector(item, "center", errors, 3)
            r = _expect(item, "radius", errors, float, required=True)
            if c is not None and r is not None:
                if r <= 0:
                    errors.append(SchemaError(base + ".radius", "must be positive"))
                else:
                    out.append(Sphere(np.array(c), r))
        elif shape == "box":
            lo = _vector(item, "min", errors, 3)
            hi = _vector(item, "max", errors, 3)
            if lo is not None and hi is not None:
                if any(a >= b for a, b in zip(lo, hi)):
                    errors.append(SchemaError(base, "min must be strictly below max"))
                else:
                    out.append(Box(np.array(lo), np.array(hi)))
        else:
            errors.append(SchemaError(base + ".shape", "must be 'sphere' or 'box'"))
    return out


def _parse_bn(raw, errors):
    spec = _expect(raw, "bayes_net", errors, dict)
    if spec is None:
        return default_network()
    nodes = []
    for i, nd in enumerate(spec.get("nodes", [])):
        base = f"bayes_net.nodes[{i}]"
        if not isinstance(nd, dict):
            errors.append(SchemaError(base, "expected an object"))
            continue
        name = nd.get("name")
        states = nd.get("states")
        parents = tuple(nd.get("parents", []))
        if not isinstance(name, str) or not isinstance(states, list):
            errors.append(SchemaError(base, "needs 'name' and 'states'"))
            continue
        cpt_raw = nd.get("cpt")
        cpt = {}
        if parents:
            if not isinstance(cpt_raw, list):
                errors.append(SchemaError(base + ".cpt", "expected a list of rows"))
                continue
            for j, row in enumerate(cpt_raw):
                if (not isinstance(row, dict) or "given" not in row or "p" not in row):
                    errors.append(SchemaError(f"{base}.cpt[{j}]",
                                              "row needs 'given' and 'p'"))
                    continue
                try:
                    key = tuple(row["given"][p] for p in parents)
                except (KeyError, TypeError):
                    errors.append(SchemaError(f"{base}.cpt[{j}].given",
                                              "must assign every parent"))
                    continue
                cpt[key] = row["p"]
        else:
            if not isinstance(cpt_raw, list):
                errors.append(SchemaError(base + ".cpt",
                                          "root node expects a probability list"))
                continue
            cpt[()] = cpt_raw
        nodes.append(NodeSpec(name, tuple(states), parents, cpt))
    if not nodes:
        errors.append(SchemaError("bayes_net.nodes", "no valid nodes"))
        return default_network()
    try:
        net = BayesNet(nodes)
    except (ValueError, KeyError) as exc:
        errors.append(SchemaError("bayes_net", str(exc)))
        return default_network()
    if "PathSuccess" not in net.nodes:
        errors.append(SchemaError("bayes_net", "must define a PathSuccess node"))
    elif "true" not in net.node("PathSuccess").states:
        errors.append(SchemaError("bayes_net.nodes", "PathSuccess needs a 'true' state"))
    return net


def scenario_from_dict(raw: dict) -> Scenario:
    """Validate a scenario document; raises ScenarioError listing every problem."""
    errors: list[SchemaError] = []

    bmin = _vector(raw, "environment.bounds.min", errors, 3)
    bmax = _vector(raw, "environment.bounds.max", errors, 3)
    res = _expect(raw, "environment.check_resolution", errors, float, default=0.05)
    obstacles = _parse_obstacles(raw, errors)
    env = None
    if bmin is not None and bmax is not None:
        try:
            env = Environment(np.array(bmin), np.array(bmax), tuple(obstacles), res)
        except ValueError as exc:
            errors.append(SchemaError("environment", str(exc)))

    lengths = _vector(raw, "chain.link_lengths", errors, 4)
    mount = _vector(raw, "chain.mount_offset", errors, 3)
    base_axis = _vector(raw, "chain.base_axis", errors, 3) \
        if "base_axis" in raw.get("chain", {}) else [0.0, 0.0, 1.0]
    axes_raw = raw.get("chain", {}).get("joint_axes")
    chain = None
    if lengths is not None and mount is not None:
        try:
            kwargs = {"link_lengths": np.array(lengths),
                      "mount_offset": np.array(mount),
                      "base_axis": np.array(base_axis)}
            if axes_raw is not None:
                kwargs["joint_axes"] = np.array(axes_raw, dtype=np.float64)
            chain = KinematicChain(**kwargs)
        except (ValueError, TypeError) as exc:
            errors.append(SchemaError("chain", str(exc)))

    lo = _vector(raw, "limits.lower", errors, 5)
    hi = _vector(raw, "limits.upper", errors, 5)
    limits = None
    if lo is not None and hi is not None:
        try:
            limits = JointLimits(np.array(lo), np.array(hi))
        except ValueError as exc:
            errors.append(SchemaError("limits", str(exc)))

    weights = np.ones(5)
    if "distance_weights" in raw:
        wv = _vector(raw, "distance_weights", errors, 5)
        if wv is not None:
            if any(x <= 0 for x in wv):
                errors.append(SchemaError("distance_weights", "must be positive"))
            else:
                weights = np.array(wv)

    start_vals = _vector(raw, "start", errors, 5)
    start = None
    if start_vals is not None and limits is not None:
        try:
            start = Configuration.validated(start_vals, limits)
        except ValueError as exc:
            errors.append(SchemaError("start", str(exc)))

    goal_rule = _expect(raw, "goals", errors, dict, required=True) or {}
    gtype = goal_rule.get("type")
    if gtype not in ("explicit", "clustered", "uniform"):
        errors.append(SchemaError("goals.type",
                                  "must be 'explicit', 'clustered', or 'uniform'"))
    elif gtype == "clustered":
        if not isinstance(goal_rule.get("clusters"), int) or goal_rule["clusters"] < 1:
            errors.append(SchemaError("goals.clusters", "need a positive integer"))
        spread = goal_rule.get("spread")
        if not isinstance(spread, (int, float)) or spread <= 0:
            errors.append(SchemaError("goals.spread", "need a positive number"))
    elif gtype == "explicit":
        items = goal_rule.get("items")
        if not isinstance(items, list) or not items:
            errors.append(SchemaError("goals.items", "need a nonempty list"))
        else:
            for i, item in enumerate(items):
                if not isinstance(item, dict) or not ("config" in item or "position" in item):
                    errors.append(SchemaError(f"goals.items[{i}]",
                                              "need 'config' or 'position'"))
                elif "config" in item:
                    _vector(item, "config", errors, 5)
                else:
                    _vector(item, "position", errors, 3)

    bn = _parse_bn(raw, errors)

    schedule = _expect(raw, "evidence_schedule", errors, list, default=[])
    sched_out = []
    for i, ev in enumerate(schedule or []):
        if not isinstance(ev, dict):
            errors.append(SchemaError(f"evidence_schedule[{i}]", "expected an object"))
            continue
        for var, state in ev.items():
            if var not in bn.nodes:
                errors.append(SchemaError(f"evidence_schedule[{i}].{var}",
                                          "unknown variable"))
            elif state not in bn.node(var).states:
                errors.append(SchemaError(f"evidence_schedule[{i}].{var}",
                                          f"{state!r} is not a valid state"))
        sched_out.append(dict(ev))

    p = raw.get("planner", {})
    cw = p.get("cost_weights", {})
    planner_cfg = None
    try:
        planner_cfg = PlannerConfig(
            tau=float(p.get("tau", 1.0)),
            lambda_=float(p.get("lambda", 1.0)),
            alpha=float(p.get("alpha", 0.1)),
            clearance_threshold=float(p.get("clearance_threshold", 0.15)),
            cost_weights=CostWeights(
                distance=float(cw.get("distance", 1.0)),
                uncertainty=float(cw.get("uncertainty", 1.0)),
                energy=float(cw.get("energy", 0.0)),
                time=float(cw.get("time", 0.0)),
            ),
            revalidate_cached=bool(p.get("revalidate_cached", True)),
        )
        if planner_cfg.tau <= 0 or planner_cfg.lambda_ <= 0 or planner_cfg.alpha <= 0:
            errors.append(SchemaError("planner", "tau, lambda, alpha must be positive"))
    except (ValueError, TypeError) as exc:
        errors.append(SchemaError("planner", str(exc)))

    r = raw.get("rrt", {})
    step = float(r.get("step_size", 0.3))
    bias = float(r.get("goal_bias", 0.05))
    tol = float(r.get("goal_tolerance", 0.1))
    if step <= 0:
        errors.append(SchemaError("rrt.step_size", "must be positive"))
    if not 0 <= bias <= 1:
        errors.append(SchemaError("rrt.goal_bias", "must lie in [0, 1]"))
    if tol < 0:
        errors.append(SchemaError("rrt.goal_tolerance", "must be nonnegative"))

    m = raw.get("matrix", {})
    planners = m.get("planners", ["prm_astar", "ahmp"])
    if (not isinstance(planners, list) or not planners
            or any(pl not in PLANNER_NAMES for pl in planners)):
        errors.append(SchemaError("matrix.planners",
                                  f"must be a nonempty subset of {PLANNER_NAMES}"))
        planners = ["prm_astar"]
    for key, default in (("max_samples", [1000, 5000, 10000]),
                         ("n_goals", [1, 5, 10]), ("seeds", [7, 11])):
        vals = m.get(key, default)
        if (not isinstance(vals, list) or not vals
                or any(not isinstance(v, int) or isinstance(v, bool) or v < 1
                       for v in vals)):
            if key == "seeds" and isinstance(vals, list) \
                    and all(isinstance(v, int) and not isinstance(v, bool) for v in vals or []):
                pass  # seeds may be any integer, including 0 or negative
            else:
                errors.append(SchemaError(f"matrix.{key}",
                                          "must be a nonempty list of positive integers"))
                vals = default
        m = {**m, key: vals}
    matrix = MatrixSpec(tuple(planners), tuple(m["max_samples"]),
                        tuple(m["n_goals"]), tuple(m["seeds"]))

    if gtype == "explicit" and isinstance(goal_rule.get("items"), list):
        if len(goal_rule["items"]) < max(matrix.n_goals, default=0):
            errors.append(SchemaError("goals.items",
                                      f"need at least {max(matrix.n_goals)} items "
                                      "for the largest n_goals"))
        if "rrt" in matrix.planners and any("position" in item
                                            for item in goal_rule["items"]
                                            if isinstance(item, dict)):
            errors.append(SchemaError("goals.items",
                                      "pose goals are not supported by the rrt planner"))

    b = raw.get("build", {})
    k_neighbors = b.get("k_neighbors", 10)
    rej = b.get("max_rejection_factor", 50)
    if not isinstance(k_neighbors, int) or k_neighbors < 1:
        errors.append(SchemaError("build.k_neighbors", "must be a positive integer"))
        k_neighbors = 10
    if not isinstance(rej, int) or rej < 1:
        errors.append(SchemaError("build.max_rejection_factor",
                                  "must be a positive integer"))
        rej = 50

    if errors:
        raise ScenarioError(errors)
    return Scenario(env, chain, limits, weights, start, dict(goal_rule), bn,
                    tuple(sched_out), planner_cfg, step, bias, tol, matrix,
                    k_neighbors, rej, raw=raw)


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError([SchemaError("(document)", f"invalid JSON: {exc}")])
    if not isinstance(raw, dict):
        raise ScenarioError([SchemaError("(document)", "top level must be an object")])
    return scenario_from_dict(raw)


def save_scenario(scn: Scenario, path):
    Path(path).write_text(json.dumps(scn.raw, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# goal generation


def _sample_free_config(env, chain, limits, rng, attempts=2000):
    span = limits.upper - limits.lower
    for _ in range(attempts):
        q = limits.lower + rng.random(5) * span
        if configs_free_batch(env, chain, q[None, :])[0]:
            return Configuration(q)
    raise InfeasibleEnvironmentError("could not sample a free goal configuration")


def generate_goals(scn: Scenario, n_goals: int, seed: int) -> list:
    """The goal list for one cell; deterministic in (scenario, n_goals, seed)."""
    rule = scn.goal_rule
    if rule["type"] == "explicit":
        out = []
        for item in rule["items"][:n_goals]:
            if "config" in item:
                out.append(Configuration(np.array(item["config"], dtype=np.float64)))
            else:
                out.append(Pose3(np.array(item["position"], dtype=np.float64)))
        return out
    rng = make_rng(seed, _STREAM_GOALS)
    if rule["type"] == "uniform":
        return [_sample_free_config(scn.env, scn.chain, scn.limits, rng)
                for _ in range(n_goals)]
    # clustered: goals hop round-robin between cluster centers
    centers = [_sample_free_config(scn.env, scn.chain, scn.limits, rng)
               for _ in range(rule["clusters"])]
    spread = float(rule["spread"])
    goals = []
    for i in range(n_goals):
        center = centers[i % len(centers)]
        for _ in range(2000):
            q = np.clip(center.values + rng.normal(0.0, spread, 5),
                        scn.limits.lower, scn.limits.upper)
            if configs_free_batch(scn.env, scn.chain, q[None, :])[0]:
                goals.append(Configuration(q))
                break
        else:
            raise InfeasibleEnvironmentError("could not sample a goal near a cluster")
    return goals


# ---------------------------------------------------------------------------
# per-cell runners


def _run_prm_astar(scn: Scenario, rm: Roadmap, goals, detail):
    """Chained baseline: an independent full A* query for every goal."""
    start = resolve_goal(scn.start, rm, scn.env, scn.chain)
    current = start
    expanded = 0
    cost = 0.0
    modes = []
    paths = []
    goal_nodes = []
    for goal in goals:
        try:
            node = resolve_goal(goal, rm, scn.env, scn.chain)
        except CollisionError:
            modes.append(MODE_FAILED)
            paths.append([])
            goal_nodes.append(-1)
            continue
        goal_nodes.append(node)
        res = astar(rm, current, node)
        expanded += res.stats.nodes_expanded
        if res.found:
            cost += res.cost
            current = node
            modes.append(MODE_FULL)
            paths.append(res.path)
        else:
            modes.append(MODE_FAILED)
            paths.append([])
    if detail is not None:
        detail.update(start=start, goal_nodes=goal_nodes, paths=paths,
                      trajectory=_node_trajectory(rm, start, paths))
    return expanded, cost, modes


def _run_ahmp(scn: Scenario, rm: Roadmap, goals, detail):
    store = make_store(scn.planner_cfg)
    request = PlanRequest(scn.start, goals, scn.evidence_schedule)
    result = plan_multi_goal(scn.env, scn.chain, rm, store, scn.bn, request,
                             scn.planner_cfg)
    paths = [g.path for g in result.goals]
    if detail is not None:
        detail.update(start=result.start_node,
                      goal_nodes=[g.node for g in result.goals], paths=paths,
                      result=result, store=store,
                      trajectory=_node_trajectory(rm, result.start_node, paths))
    return result.total_expanded(), result.total_cost(), result.modes()


def _run_rrt(scn: Scenario, cell, goals, detail):
    current = scn.start
    expanded = 0
    cost = 0.0
    modes = []
    polylines = []
    for i, goal in enumerate(goals):
        seed_i = int(np.random.SeedSequence(
            [cell.seed, _STREAM_RRT_GOAL, i]).generate_state(1)[0])
        params = RrtParams(seed=seed_i, max_iter=cell.max_samples,
                           step_size=scn.rrt_step_size,
                           goal_bias=scn.rrt_goal_bias,
                           goal_tolerance=scn.rrt_goal_tolerance)
        path, stats = rrt_plan(scn.env, scn.chain, scn.limits, current, goal,
                               params, scn.weights)
        expanded += stats.nodes_expanded
        if path:
            cost += polyline_cost(path, scn.weights)
            current = path[-1]
            modes.append(MODE_RRT)
            polylines.append(path)
        else:
            modes.append(MODE_FAILED)
            polylines.append([])
    if detail is not None:
        traj = [scn.start.values]
        for poly in polylines:
            for cfg in poly[1:]:
                traj.append(cfg.values)
        detail.update(polylines=polylines, trajectory=np.array(traj))
    return expanded, cost, modes


def _node_trajectory(rm: Roadmap, start: int, paths) -> np.ndarray:
    coords = rm.coords()
    traj = [coords[start]]
    for path in paths:
        for node in path[1:]:
            traj.append(coords[node])
    return np.array(traj)


@dataclass(frozen=True)
class Cell:
    planner: str
    max_samples: int
    n_goals: int
    seed: int


def iter_cells(scn: Scenario, include_30k=False, seed_override=None):
    """Canonical matrix order: planner, then max_samples, then n_goals, then seed."""
    samples = list(scn.matrix.max_samples) + ([30000] if include_30k else [])
    seeds = [seed_override] if seed_override is not None else list(scn.matrix.seeds)
    for planner in scn.matrix.planners:
        for ms in samples:
            for ng in scn.matrix.n_goals:
                for seed in seeds:
                    yield Cell(planner, ms, ng, seed)


def run_matrix(scn: Scenario, include_30k=False, seed_override=None,
               on_cell=None) -> list:
    """Run every cell; failed builds mark the row and the matrix continues.

    ``on_cell(row, detail)``, when given, receives each cell's roadmap,
    node paths, and joint trajectory right after the cell finishes.
    """
    builds: dict = {}
    goal_cache: dict = {}
    rows: list[ReportRow] = []
    for cell in iter_cells(scn, include_30k, seed_override):
        t0 = time.perf_counter()
        key = (cell.max_samples, cell.seed)
        detail: dict | None = {} if on_cell else None
        if cell.planner in ("prm_astar", "ahmp"):
            if key not in builds:
                try:
                    builds[key] = build_prm(
                        scn.env, scn.chain, scn.limits,
                        BuildParams(cell.max_samples, cell.seed,
                                    scn.k_neighbors, scn.max_rejection_factor),
                        scn.weights)
                except InfeasibleEnvironmentError:
                    builds[key] = None
            if builds[key] is None:
                row = ReportRow(cell.planner, cell.max_samples, cell.n_goals,
                                cell.seed, 0, 0.0, time.perf_counter() - t0,
                                [MODE_BUILD_FAILED])
                rows.append(row)
                if on_cell:
                    on_cell(row, {})
                continue
        gkey = (cell.n_goals, cell.seed)
        if gkey not in goal_cache:
            goal_cache[gkey] = generate_goals(scn, cell.n_goals, cell.seed)
        goals = goal_cache[gkey]
        if cell.planner == "rrt":
            expanded, cost, modes = _run_rrt(scn, cell, goals, detail)
        else:
            rm = builds[key].copy()
            if detail is not None:
                detail["roadmap"] = rm
            runner = _run_prm_astar if cell.planner == "prm_astar" else _run_ahmp
            try:
                expanded, cost, modes = runner(scn, rm, goals, detail)
            except CollisionError:
                expanded, cost, modes = 0, 0.0, ["start_failed"]
        row = ReportRow(cell.planner, cell.max_samples, cell.n_goals, cell.seed,
                        expanded, cost, time.perf_counter() - t0, modes)
        rows.append(row)
        if on_cell:
            on_cell(row, detail or {})
    return rows


def expansion_ratios(rows) -> list:
    """ahmp/prm_astar expansion ratios for cells present under both planners."""
    prm = {(r.max_samples, r.n_goals, r.seed): r for r in rows
           if r.planner == "prm_astar"}
    out = []
    for r in rows:
        if r.planner != "ahmp":
            continue
        base = prm.get((r.max_samples, r.n_goals, r.seed))
        if base is None or base.nodes_expanded == 0:
            continue
        out.append({"max_samples": r.max_samples, "n_goals": r.n_goals,
                    "seed": r.seed, "ahmp_expanded": r.nodes_expanded,
                    "prm_astar_expanded": base.nodes_expanded,
                    "ratio": r.nodes_expanded / base.nodes_expanded})
    return out


# ---------------------------------------------------------------------------
# reports


def report_csv(rows) -> str:
    if not rows:
        raise ValueError("no rows to report")
    return "\n".join([CSV_HEADER] + [r.csv_line() for r in rows]) + "\n"


def ratios_csv(ratios) -> str:
    lines = [RATIO_HEADER]
    for r in ratios:
        lines.append(f"{r['max_samples']},{r['n_goals']},{r['seed']},"
                     f"{r['ahmp_expanded']},{r['prm_astar_expanded']},"
                     f"{float(r['ratio'])!r}")
    return "\n".join(lines) + "\n"


def report_markdown(rows, ratios=None) -> str:
    if not rows:
        raise ValueError("no rows to report")
    cols = CSV_HEADER.split(",")
    lines = ["| " + " | ".join(cols) + " |",
             "|" + "|".join(["---"] * len(cols)) + "|"]
    for r in rows:
        lines.append("| " + " | ".join(r.csv_line().split(",")) + " |")
    if ratios:
        lines.append("")
        rcols = RATIO_HEADER.split(",")
        lines.append("| " + " | ".join(rcols) + " |")
        lines.append("|" + "|".join(["---"] * len(rcols)) + "|")
        for rr in ratios:
            lines.append("| " + " | ".join(
                ratios_csv([rr]).splitlines()[1].split(",")) + " |")
    return "\n".join(lines) + "\n"


def emit_report(rows, format: str, out) -> None:
    """Write rows to ``out`` as 'csv' or 'markdown'."""
    if format == "csv":
        text = report_csv(rows)
    elif format == "markdown":
        text = report_markdown(rows)
    else:
        raise ValueError(f"unknown report format {format!r}")
    Path(out).write_text(text)


def parse_report_csv(text: str) -> list:
    lines = text.strip().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        rows.append(ReportRow(parts[0], int(parts[1]), int(parts[2]),
                              int(parts[3]), int(parts[4]), float(parts[5]),
                              float(parts[6]), parts[7].split(";")))
    return rows


# ---------------------------------------------------------------------------
# trajectory comparison


@dataclass
class JointErrorStats:
    mean: np.ndarray
    std: np.ndarray

    @property
    def overall_mean(self) -> float:
        return float(self.mean.mean())


def _as_traj_array(traj) -> np.ndarray:
    if isinstance(traj, np.ndarray):
        arr = np.asarray(traj, dtype=np.float64)
    else:
        arr = np.array([c.values if isinstance(c, Configuration) else c
                        for c in traj], dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 5 or arr.shape[0] == 0:
        raise ValueError("trajectory must be a nonempty sequence of 5-vectors")
    return arr


def resample_trajectory(traj, samples=200, weights=None) -> np.ndarray:
    """Resample to ``samples`` points uniformly by normalized arc length.

    Arc length uses the weighted configuration metric; a single-point or
    zero-length trajectory resamples to a constant.
    """
    arr = _as_traj_array(traj)
    if arr.shape[0] == 1:
        return np.tile(arr[0], (samples, 1))
    steps = [config_distance(Configuration(a), Configuration(b), weights)
             for a, b in zip(arr[:-1], arr[1:])]
    s = np.concatenate(([0.0], np.cumsum(steps)))
    if s[-1] == 0.0:
        return np.tile(arr[0], (samples, 1))
    u = s / s[-1]
    keep = np.concatenate(([True], np.diff(u) > 0))
    u = u[keep]
    arr = arr[keep]
    grid = np.linspace(0.0, 1.0, samples)
    return np.column_stack([np.interp(grid, u, arr[:, j]) for j in range(5)])


def mean_abs_joint_error(traj_a, traj_b, samples=200, weights=None) -> JointErrorStats:
    """Per-joint mean and population std of |a - b| after arc-length resampling."""
    ra = resample_trajectory(traj_a, samples, weights)
    rb = resample_trajectory(traj_b, samples, weights)
    diff = np.abs(ra - rb)
    return JointErrorStats(diff.mean(axis=0), diff.std(axis=0))


def save_trajectory(path, traj):
    arr = _as_traj_array(traj)
    lines = [" ".join(repr(float(x)) for x in row) for row in arr]
    Path(path).write_text("\n".join(lines) + "\n")


def load_trajectory(path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 5 values, got {len(parts)}")
        rows.append([float(x) for x in parts])
    if not rows:
        raise ValueError("empty trajectory file")
    return np.array(rows)


# ---------------------------------------------------------------------------
# shipped default scenario


def default_scenario_dict() -> dict:
    """The default tank/arm/matrix document, identical to scenarios/default.json."""
    return {
        "environment": {
            "bounds": {"min": [0.0, 0.0, 0.0], "max": [3.5, 3.0, 2.5]},
            "check_resolution": 0.05,
            "obstacles": [
                {"shape": "box", "min": [1.6, 1.0, 0.6], "max": [2.0, 1.4, 1.6]},
                {"shape": "box", "min": [0.4, 1.8, 0.8], "max": [0.9, 2.3, 1.5]},
            ],
        },
        "chain": {
            "link_lengths": [0.5, 0.4, 0.3, 0.2],
            "mount_offset": [1.0, 1.5, 0.5],
            "base_axis": [0.0, 0.0, 1.0],
        },
        "limits": {
            "lower": [0.0, -3.1, -2.2, -2.2, -2.2],
            "upper": [1.5, 3.1, 2.2, 2.2, 2.2],
        },
        "start": [0.2, 0.0, 0.3, -0.4, 0.2],
        "goals": {"type": "clustered", "clusters": 3, "spread": 0.15},
        "bayes_net": {
            "nodes": [
                {"name": "Disturbance", "states": ["low", "high"],
                 "cpt": [0.7, 0.3]},
                {"name": "SensorNoise", "states": ["low", "high"],
                 "cpt": [0.8, 0.2]},
                {"name": "Clearance", "states": ["low", "high"],
                 "cpt": [0.4, 0.6]},
                {"name": "PathSuccess", "states": ["true", "false"],
                 "parents": ["Disturbance", "SensorNoise", "Clearance"],
                 "cpt": [
                     {"given": {"Disturbance": "low", "SensorNoise": "low",
                                "Clearance": "low"}, "p": [0.75, 0.25]},
                     {"given": {"Disturbance": "low", "SensorNoise": "low",
                                "Clearance": "high"}, "p": [0.95, 0.05]},
                     {"given": {"Disturbance": "low", "SensorNoise": "high",
                                "Clearance": "low"}, "p": [0.6, 0.4]},
                     {"given": {"Disturbance": "low", "SensorNoise": "high",
                                "Clearance": "high"}, "p": [0.85, 0.15]},
                     {"given": {"Disturbance": "high", "SensorNoise": "low",
                                "Clearance": "low"}, "p": [0.45, 0.55]},
                     {"given": {"Disturbance": "high", "SensorNoise": "low",
                                "Clearance": "high"}, "p": [0.7, 0.3]},
                     {"given": {"Disturbance": "high", "SensorNoise": "high",
                                "Clearance": "low"}, "p": [0.3, 0.7]},
                     {"given": {"Disturbance": "high", "SensorNoise": "high",
                                "Clearance": "high"}, "p": [0.55, 0.45]},
                 ]},
            ]
        },
        "evidence_schedule": [
            {}, {"Disturbance": "low"}, {}, {"SensorNoise": "low"}, {},
            {"Disturbance": "high"}, {}, {}, {"SensorNoise": "high"}, {},
        ],
        "planner": {
            "tau": 1.0, "lambda": 1.0, "alpha": 0.1,
            "clearance_threshold": 0.15,
            "cost_weights": {"distance": 1.0, "uncertainty": 1.0,
                             "energy": 0.0, "time": 0.0},
            "revalidate_cached": True,
        },
        "rrt": {"step_size": 0.3, "goal_bias": 0.05, "goal_tolerance": 0.1},
        "matrix": {
            "planners": ["prm_astar", "rrt", "ahmp"],
            "max_samples": [1000, 5000, 10000],
            "n_goals": [1, 5, 10],
            "seeds": [7, 11],
        },
        "build": {"k_neighbors": 10, "max_rejection_factor": 50},
    }


def default_scenario() -> Scenario:
    return scenario_from_dict(default_scenario_dict())
