"""Event-driven receding-horizon patrol simulator for target networks."""

__version__ = "0.1.0"

from .model import (Target, TargetGraph, TargetState, NeighborhoodParams,
                    PlannedVisit, evolve_target, segment_cost, visit_cost,
                    local_objective, neighborhood_params,
                    neighborhood_params_two_hop)
from .rfop import (RationalObjective, PolytopeBounds, SegmentRestriction,
                   RfopResult, solve_rfop, solve_quartic, stationary_points,
                   minimize_segment, restrict_to_line, delta_h)
from .rhcp import (RhcpContext, ControlDecision, active_time_bound,
                   solve_rhcp1, solve_rhcp2, solve_rhcp3,
                   solve_rhcp3_extended, next_visit, weighted_next_visit,
                   extended_weighted_next_visit, denominator_free_rhcp3,
                   denominator_free_next_visit)
from .scenario import (Scenario, ScenarioError, parse_scenario,
                       write_scenario, generate_scenario, apply_overrides)
from .simulator import (Simulation, SimulationResult, SimulationAbort,
                        EventRecord, run, accumulate_objective)
from .sweep import run_sweep

__all__ = [
    "Target", "TargetGraph", "TargetState", "NeighborhoodParams",
    "PlannedVisit", "evolve_target", "segment_cost", "visit_cost",
    "local_objective", "neighborhood_params", "neighborhood_params_two_hop",
    "RationalObjective", "PolytopeBounds", "SegmentRestriction", "RfopResult",
    "solve_rfop", "solve_quartic", "stationary_points", "minimize_segment",
    "restrict_to_line", "delta_h",
    "RhcpContext", "ControlDecision", "active_time_bound", "solve_rhcp1",
    "solve_rhcp2", "solve_rhcp3", "solve_rhcp3_extended", "next_visit",
    "weighted_next_visit", "extended_weighted_next_visit",
    "denominator_free_rhcp3", "denominator_free_next_visit",
    "Scenario", "ScenarioError", "parse_scenario", "write_scenario",
    "generate_scenario", "apply_overrides",
    "Simulation", "SimulationResult", "SimulationAbort", "EventRecord",
    "run", "accumulate_objective", "run_sweep",
]
