"""Two-player games on concurrent programs under TSO.

The process player schedules instructions, the update player flushes store
buffers.  Without fairness the game is decided exactly through finite view
games; the fairness variants are solved on buffer-capped arenas.
"""
from .program import (
    BOTTOM, NO_FAIRNESS, PROCESS_FAIR, REACH, SAFETY, UPDATE_FAIR,
    Instruction, Objective, Process, Program, ProgramError, validate_program,
)
from .dsl import DslError, format_pcs, format_program, parse_pcs, parse_program
from .tso import Move, TsoConfig, enabled_moves, initial_config, step_instruction, update_closure
from .graph import A, B, GameGraph, Play, PositionalStrategy
from .game import Arena, GameConfig, build_bounded_arena
from .solve import WinningRegions, attractor, solve, verify_strategy
from .views import build_view_game, check_bisimulation_fragment, solve_concurrent, view_of
from .fair import (
    solve_parity, solve_process_fair_safety, solve_streett, solve_update_fair_reachability,
    streett_pairs, streett_to_parity,
)
from .pcs import Pcs, gen_process_fair_program, gen_update_fair_program, pcs_reachable_bounded
from .loadbuffer import build_lb_arena, fig6_program

__all__ = [
    "BOTTOM", "NO_FAIRNESS", "PROCESS_FAIR", "REACH", "SAFETY", "UPDATE_FAIR",
    "Instruction", "Objective", "Process", "Program", "ProgramError", "validate_program",
    "DslError", "format_pcs", "format_program", "parse_pcs", "parse_program",
    "Move", "TsoConfig", "enabled_moves", "initial_config", "step_instruction", "update_closure",
    "A", "B", "GameGraph", "Play", "PositionalStrategy",
    "Arena", "GameConfig", "build_bounded_arena",
    "WinningRegions", "attractor", "solve", "verify_strategy",
    "build_view_game", "check_bisimulation_fragment", "solve_concurrent", "view_of",
    "solve_parity", "solve_process_fair_safety", "solve_streett", "solve_update_fair_reachability",
    "streett_pairs", "streett_to_parity",
    "Pcs", "gen_process_fair_program", "gen_update_fair_program", "pcs_reachable_bounded",
    "build_lb_arena", "fig6_program",
]
