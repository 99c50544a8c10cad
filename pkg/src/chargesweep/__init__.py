"""Periodic sweep-coverage schedules for rechargeable mobile sensors."""

from .bounds import approximation_bound, mutual_loop_ratio
from .csc2 import CompositionState, is_reasonable, solve_2csc_tc_ge_tt, solve_2csc_tt_gt_tc
from .instance import (EPS_LEN, Instance, InstanceError, ParseError, ValidationReport, View,
                       induced_subgraph, load, save, validate)
from .kernels import (KernelConfig, KernelLimitError, KernelResult, InfeasibleError,
                      rooted_orienteering, rooted_team_orienteering, st_loop, st_orienteering)
from .oracle import OracleResult, opt_restricted, opt_true
from .rcsc import GreedyTrace, TraceStep, solve_rcsc_tc_ge_tt, solve_rcsc_tt_gt_tc
from .routes import (ContractError, Itinerary, Loop, Schedule, Segment, Variant, VariantError,
                     chain_segments, place_sensors_on_loop, targets_on)
from .solve import solve
from .verify import CoverageReport, objective, verify

__version__ = "0.1.0"
