"""Finite view games for single processes and the concurrent decision procedure.

A single process cannot tell its buffer from memory: all it can observe is
its local state, the value each read would return, and whether a fence is
possible.  Those triples (views) form a finite game equivalent to the
single-process TSO game, and the concurrent game is won by the process
player iff she wins the view game of at least one process.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .game import UP, GameConfig
from .graph import A, B, GameGraph, PositionalStrategy
from .program import FENCE, NO_FAIRNESS, READ, REACH, SAFETY, WRITE, Program, ProgramError
from .solve import SolverError, WinningRegions, solve, verify_strategy
from .tso import Move, TsoConfig, enabled_moves, initial_config, step_instruction, update_closure


class View(NamedTuple):
    state: str
    values: tuple   # readable value per variable, declaration order
    fence: bool


class ViewNode(NamedTuple):
    turn: str
    view: View

    def __str__(self):
        vals = ",".join(self.view.values)
        return f"{self.turn} ({self.view.state}; {vals}; {'T' if self.view.fence else 'F'})"


def view_of(p: Program, c: TsoConfig, pid: Optional[str] = None) -> View:
    """View of process `pid` (default: the only process) on configuration `c`."""
    i = 0 if pid is None else p.pid_index(pid)
    buf = c.buffers[i]
    values = list(c.memory)
    pending = set()
    for var, d in reversed(buf):
        if var not in pending:
            pending.add(var)
            values[p.var_index(var)] = d
    return View(c.states[i], tuple(values), not buf)


class ViewGame(GameGraph):
    def __init__(self, program: Program):
        super().__init__()
        self.program = program

    def targets(self, states=None) -> set[int]:
        if states is None:
            states = self.program.objective.targets
        local = {s for _, s in states}
        return {v for v, n in enumerate(self.nodes) if n.view.state in local}


def build_view_game(p: Program, initial: Optional[TsoConfig] = None) -> ViewGame:
    if len(p.processes) != 1:
        raise ProgramError("view games are built for single-process programs")
    proc = p.processes[0]
    c0 = initial_config(p) if initial is None else initial
    g = ViewGame(p)
    root = ViewNode("A", view_of(p, c0))
    g.initial = g.add_node(root, A)
    queue = deque([g.initial])

    def node(n, owner, **kw):
        before = len(g)
        v = g.add_node(n, owner, **kw)
        if v == before:
            queue.append(v)
        return v

    while queue:
        v = queue.popleft()
        turn, (state, values, fence) = g.nodes[v]
        if turn == "A":
            movers = set()
            for instr, dst in proc.successors(state):
                if instr.kind == READ and values[p.var_index(instr.var)] != instr.value:
                    continue
                if instr.kind == FENCE and not fence:
                    continue
                if instr.kind == WRITE:
                    xi = p.var_index(instr.var)
                    nxt = View(dst, values[:xi] + (instr.value,) + values[xi + 1:], False)
                else:
                    nxt = View(dst, values, fence)
                movers.add(proc.id)
                w = node(ViewNode("B", nxt), B, mover=proc.id)
                g.add_edge(v, Move(proc.id, instr, dst), w)
            g.enabled[v] = frozenset(movers)
        else:
            g.add_edge(v, UP, node(ViewNode("A", View(state, values, fence)), A))
            if not fence:
                g.add_edge(v, UP, node(ViewNode("A", View(state, values, True)), A))
    return g


# -- concurrent games -----------------------------------------------------

@dataclass
class ConcurrentResult:
    winner: str
    witness_process: Optional[str]
    regions: dict = field(default_factory=dict)      # pid -> WinningRegions on its view game
    games: dict = field(default_factory=dict)        # pid -> ViewGame

    @property
    def witness_strategy(self) -> Optional[PositionalStrategy]:
        if self.witness_process is None:
            return None
        return self.regions[self.witness_process].strategy_a


def solve_view_game(p: Program, initial: Optional[TsoConfig] = None) -> WinningRegions:
    g = build_view_game(p, initial)
    return solve(g, p.objective.kind, g.targets())


def solve_concurrent(p: Program, initial: Optional[TsoConfig] = None) -> ConcurrentResult:
    """Decide the unbounded game without fairness, one process at a time."""
    if p.objective.fairness != NO_FAIRNESS:
        raise SolverError("fairness objectives need the bounded fair solvers")
    c0 = initial_config(p) if initial is None else initial
    if any(c0.buffers):
        raise SolverError("the initial configuration must have empty buffers")
    res = ConcurrentResult("B", None)
    targets = p.objective.targets
    at_target = any((pid, s) in targets for pid, s in zip(p.pids, c0.states))
    for pid in p.pids:
        sub = p.restricted_to(pid)
        i = p.pid_index(pid)
        sub_c0 = TsoConfig((c0.states[i],), ((),), c0.memory)
        g = build_view_game(sub, sub_c0)
        reg = solve(g, p.objective.kind, g.targets())
        res.games[pid] = g
        res.regions[pid] = reg
        if reg.winner == "A" and res.witness_process is None:
            res.witness_process = pid
    if p.objective.kind == SAFETY and at_target:
        res.witness_process = None
    elif p.objective.kind == REACH and at_target:
        res.witness_process = next(pid for pid, s in zip(p.pids, c0.states) if (pid, s) in targets)
    res.winner = "A" if res.witness_process is not None else "B"
    return res


# -- bisimulation fragment check ------------------------------------------

@dataclass
class BisimReport:
    checked: int = 0
    violations: list = field(default_factory=list)   # (kind, concrete node, detail)

    @property
    def ok(self) -> bool:
        return not self.violations


def _concrete_edges(p: Program, cfg: GameConfig):
    if cfg.turn == "A":
        return [(m, GameConfig(step_instruction(p, cfg.base, m), "B", m.pid))
                for m in enabled_moves(p, cfg.base)]
    return [(UP, GameConfig(c, "A")) for c in sorted(update_closure(p, cfg.base))]


def check_bisimulation_fragment(p: Program, k: int, vg: Optional[ViewGame] = None) -> BisimReport:
    """Check {(c, view(c))} against `vg` on concrete configs with buffers shorter than k.

    Colour: the view of every concrete node is a node of the view game.
    Zig: every concrete edge is matched by a view edge with the same label.
    Zag: every view edge is matched by a concrete edge with the same label.
    """
    if k < 1:
        raise ValueError("bound must be at least 1")
    if len(p.processes) != 1:
        raise ProgramError("bisimulation check is per process")
    vg = build_view_game(p) if vg is None else vg
    report = BisimReport()
    start = GameConfig(initial_config(p), "A")
    seen = {start}
    queue = deque([start])

    def vnode(cfg):
        return ViewNode(cfg.turn, view_of(p, cfg.base))

    while queue:
        cfg = queue.popleft()
        report.checked += 1
        vn = vnode(cfg)
        vi = vg.index.get(vn)
        if vi is None:
            report.violations.append(("colour", cfg, f"view {vn} missing from view game"))
            continue
        concrete = _concrete_edges(p, cfg)
        view_edges = {(lbl, vg.nodes[w]) for lbl, w in zip(vg.labels[vi], vg.succ[vi])}
        concrete_views = {(lbl, vnode(nxt)) for lbl, nxt in concrete}
        for lbl, nxt in concrete:
            if (lbl, vnode(nxt)) not in view_edges:
                report.violations.append(("zig", cfg, f"{lbl} -> {vnode(nxt)} unmatched"))
        for lbl, vw in sorted(view_edges, key=str):
            if (lbl, vw) not in concrete_views:
                report.violations.append(("zag", cfg, f"{lbl} -> {vw} unmatched"))
        for _, nxt in concrete:
            if len(nxt.base.buffers[0]) < k and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return report


def verify_concurrent(p: Program, res: ConcurrentResult) -> list:
    """Counterexamples to the per-process strategies backing `res` (empty = all verified)."""
    bad = []
    kind = p.objective.kind
    for pid, reg in res.regions.items():
        g = res.games[pid]
        strat = reg.strategy_a if reg.winner == "A" else reg.strategy_b
        cex = verify_strategy(g, strat, kind, g.targets())
        if cex is not None:
            bad.append((pid, cex))
    return bad
