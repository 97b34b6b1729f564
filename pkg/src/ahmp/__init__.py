"""Adaptive heuristic motion planning for a tank-mounted 5-DOF arm.

Multi-goal planning over a dense probabilistic roadmap: frequently used
paths are cached as motion primitives, scored against a small Bayesian
network, and stitched into later queries so most goals avoid a full
graph search.  Heavy kernels run under numba when available; set
``AHMP_BACKEND=numpy`` to force the pure-numpy implementations.
"""
from ._kernels import BACKEND_NAME
from .bayesnet import (BayesNet, Evidence, ImpossibleEvidenceError, NodeSpec,
                       default_network, posterior, success_probability)
from .bench import (Scenario, ScenarioError, default_scenario,
                    default_scenario_dict, emit_report, expansion_ratios,
                    generate_goals, load_scenario, load_trajectory,
                    mean_abs_joint_error, parse_report_csv, report_csv,
                    report_markdown, run_matrix, save_trajectory)
from .hms import (HmsStore, MotionPrimitive, cache_path, score,
                  select_approach_node, update_uncertainty)
from .model import (Configuration, JointLimits, KinematicChain, Pose3,
                    config_distance, forward_kinematics, interpolate,
                    sample_uniform)
from .planner import (CostWeights, GoalPlan, PlanRequest, PlanResult,
                      PlannerConfig, composite_cost, make_store,
                      plan_multi_goal, resolve_goal, stitch)
from .roadmap import (BuildParams, InfeasibleEnvironmentError, Roadmap,
                      build_prm, connect_query_node)
from .search import (RrtParams, SearchResult, SearchStats, astar,
                     polyline_cost, rrt_plan)
from .world import (Box, CollisionError, Environment, Sphere, is_config_free,
                    is_segment_free, min_clearance, signed_clearance)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME", "BayesNet", "Box", "BuildParams", "CollisionError",
    "Configuration", "CostWeights", "Environment", "Evidence", "GoalPlan",
    "HmsStore", "ImpossibleEvidenceError", "InfeasibleEnvironmentError",
    "JointLimits", "KinematicChain", "MotionPrimitive", "NodeSpec",
    "PlanRequest", "PlanResult", "PlannerConfig", "Pose3", "Roadmap",
    "RrtParams", "Scenario", "ScenarioError", "SearchResult", "SearchStats",
    "Sphere", "astar", "build_prm", "cache_path", "composite_cost",
    "config_distance", "connect_query_node", "default_network",
    "default_scenario", "default_scenario_dict", "emit_report",
    "expansion_ratios",
    "forward_kinematics", "generate_goals", "interpolate", "is_config_free",
    "is_segment_free", "load_scenario", "load_trajectory", "make_store",
    "mean_abs_joint_error", "min_clearance", "parse_report_csv",
    "plan_multi_goal", "polyline_cost", "posterior", "report_csv",
    "report_markdown", "resolve_goal", "rrt_plan", "run_matrix",
    "sample_uniform", "save_trajectory", "score", "select_approach_node",
    "signed_clearance", "stitch", "success_probability", "update_uncertainty",
]
