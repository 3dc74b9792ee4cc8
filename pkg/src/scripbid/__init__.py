"""Exact equilibria for two-player bidding games and sequential scrip auctions."""

from .dyadic import Dyadic, NotDyadic
from .game import BLACK, WHITE, BiddingGame, Player, generic_key, pareto_set, prefers
from .outcome import OutcomeMap
from .grid import GridConfig, StrategyTables, find_lower_pspe_grid, get_outcome, play, simulate, solve_grid
from .fast import FastSolution, IntervalProfile, find_pspe_fast, outcome_map, play_fast, query, solve_fast
from .compilers import (
    BargainingSpec,
    SsaSpec,
    compile_additive,
    compile_bargaining,
    compile_multiweight,
    compile_naive,
    compile_single_peaked,
    expand_to_binary,
    pad_to_balanced,
)
from .fixtures import fixture
from .richman import ZeroSumGame, mst_check, richman_values, satisfaction_rank, to_win_lose
from .analysis import (
    AuditReport,
    check_budget_intervals,
    check_monotone,
    check_pareto_optimal,
    check_surjective,
    price_trajectory,
    verify_pspe,
)

__all__ = [name for name in dir() if not name.startswith("_")]
