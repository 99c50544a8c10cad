"""Pick the solver matching a variant family and the instance's periods."""

from __future__ import annotations

from .csc2 import solve_2csc_tc_ge_tt, solve_2csc_tt_gt_tc
from .instance import Instance
from .kernels import DEFAULT_CONFIG, KernelConfig
from .rcsc import GreedyTrace, solve_rcsc_tc_ge_tt, solve_rcsc_tt_gt_tc
from .routes import Schedule, Variant

SOLVERS = {
    Variant.RCSC_TC_GE_TT: solve_rcsc_tc_ge_tt,
    Variant.RCSC_TT_GT_TC: solve_rcsc_tt_gt_tc,
    Variant.CSC2_TC_GE_TT: solve_2csc_tc_ge_tt,
    Variant.CSC2_TT_GT_TC: solve_2csc_tt_gt_tc,
}


def solve(instance: Instance, variant: Variant | str,
          kernels: KernelConfig = DEFAULT_CONFIG) -> tuple[Schedule, GreedyTrace]:
    """``variant`` is either a full variant or a family name ("rcsc" / "csc2")."""
    if variant in ("rcsc", "csc2"):
        variant = Variant.for_instance(variant, instance)
    return SOLVERS[Variant(variant)](instance, kernels)
