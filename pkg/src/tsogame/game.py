"""The alternating process-player / update-player game on TSO programs.

A-nodes are configurations where the process player executes one enabled
instruction; B-nodes are configurations where the update player flushes
any number of buffer messages (possibly none).  B-nodes remember which
process moved last, so process fairness can be phrased on nodes.

Arenas are bounded: a write that would push a buffer past the cap is left
out and the arena is flagged as truncated.  An A-node whose only moves were
cut off gets a ``cap`` self-loop, i.e. a play that runs into the cap is
treated as continuing forever without reaching any target.
"""
from __future__ import annotations

from typing import NamedTuple, Optional

from .graph import A, B, GameGraph, Play, PositionalStrategy
from .program import WRITE, Program
from .tso import (
    Move, TsoConfig, _update, enabled_moves, initial_config, step_instruction,
    update_closure,
)

UP = "up*"
STOP = "stop"
CAP = "cap"


class GameConfig(NamedTuple):
    base: TsoConfig
    turn: str                      # "A" or "B"
    last_mover: Optional[str] = None
    updating: bool = False         # B-node in the middle of a stepwise update

    def __str__(self):
        tag = self.turn + (f"/{self.last_mover}" if self.last_mover else "")
        return f"{tag}{'~' if self.updating else ''} {tuple(self.base)}"


class GameError(ValueError):
    pass


class StrategyLiftError(GameError):
    """A lifted single-process choice is not enabled in the full game."""


class Arena(GameGraph):
    def __init__(self, program: Program, cap: Optional[int], semantics: str = "sb",
                 stepwise: bool = False):
        super().__init__()
        self.program = program
        self.cap = cap
        self.semantics = semantics
        self.stepwise = stepwise
        self.truncated = False
        self.truncated_nodes: set[int] = set()
        self.frontier: set[int] = set()

    def base(self, v: int):
        return self.nodes[v].base

    def targets(self, states=None) -> set[int]:
        """Nodes where some process sits in one of `states` (default: objective)."""
        p = self.program
        if states is None:
            states = p.objective.targets
        per = [frozenset(s for pid, s in states if pid == q) for q in p.pids]
        return {v for v, node in enumerate(self.nodes)
                if any(s in per[i] for i, s in enumerate(node.base.states))}


def build_bounded_arena(p: Program, k: Optional[int], stepwise: bool = False,
                        max_nodes: Optional[int] = None) -> Arena:
    """All game configurations reachable with every buffer of length <= k.

    ``k=None`` builds the unbounded arena (only terminates when the program
    can only write finitely often).  With ``stepwise=True`` the update
    player's turn is unfolded into single flushes through intermediate
    B-nodes; this avoids enumerating the whole up* closure as edges and
    yields the same winners.  Exceeding `max_nodes` raises GameError.
    """
    arena = Arena(p, k, "sb", stepwise)
    c0 = GameConfig(initial_config(p), "A")
    arena.initial = arena.add_node(c0, A)
    todo = [arena.initial]
    pids = p.pids

    def node(cfg, owner, **kw):
        before = len(arena)
        v = arena.add_node(cfg, owner, **kw)
        if v == before:
            todo.append(v)
            if max_nodes is not None and v >= max_nodes:
                raise GameError(f"arena exceeds {max_nodes} nodes")
        return v

    while todo:
        v = todo.pop()
        cfg = arena.nodes[v]
        base = cfg.base
        if cfg.turn == "A":
            kept, cut = [], 0
            for m in enabled_moves(p, base):
                if m.instr.kind == WRITE and k is not None and \
                        len(base.buffers[p.pid_index(m.pid)]) + 1 > k:
                    cut += 1
                    continue
                kept.append(m)
            arena.enabled[v] = frozenset(m.pid for m in kept)
            for m in kept:
                w = node(GameConfig(step_instruction(p, base, m), "B", m.pid), B, mover=m.pid)
                arena.add_edge(v, m, w)
            if cut:
                arena.truncated = True
                arena.truncated_nodes.add(v)
                if not kept:
                    arena.frontier.add(v)
                    arena.add_edge(v, CAP, v)
        elif not stepwise:
            for nxt in sorted(update_closure(p, base)):
                arena.add_edge(v, UP, node(GameConfig(nxt, "A"), A))
        else:
            arena.add_edge(v, STOP, node(GameConfig(base, "A"), A))
            for i, buf in enumerate(base.buffers):
                if buf:
                    w = node(GameConfig(_update(p, base, i), "B", None, True), B)
                    arena.add_edge(v, f"up({pids[i]})", w)
    return arena


# -- plays ---------------------------------------------------------------

def winner_of_finite_play(play: Play) -> str:
    """A wins a finite play iff it ends in a deadlock of B."""
    if play.is_lasso:
        raise GameError("play is infinite")
    last = play.nodes[-1]
    if play.game.succ[last]:
        raise GameError("play does not end in a deadlock")
    return "A" if play.game.owner[last] == B else "B"


def check_update_fairness(play: Play) -> Optional[int]:
    """Index of the first A-deadlock with a pending buffer, or None."""
    g = play.game
    for k, v in enumerate(play.nodes):
        if g.owner[v] == A and not g.succ[v] and any(g.nodes[v].base.buffers):
            return k
    return None


def check_process_fairness(play: Play) -> Optional[str]:
    """A process enabled somewhere on the cycle of a lasso that never moves on it."""
    if not play.is_lasso:
        return None
    g = play.game
    cycle = play.cycle()
    requested, granted = set(), set()
    for v in cycle:
        if g.owner[v] == A:
            requested |= g.enabled[v]
        if g.mover[v] is not None:
            granted.add(g.mover[v])
    for _, lbl, _ in play.steps()[play.cycle_start:]:
        if isinstance(lbl, Move):
            granted.add(lbl.pid)
    missing = sorted(requested - granted)
    return missing[0] if missing else None


# -- projections ---------------------------------------------------------

def restrict(p: Program, c: GameConfig, pid: str) -> GameConfig:
    i = p.pid_index(pid)
    base = TsoConfig((c.base.states[i],), (c.base.buffers[i],), c.base.memory)
    return GameConfig(base, c.turn, pid if c.last_mover == pid else None, c.updating)


def extend(p: Program, c_iota: GameConfig, c0: GameConfig, pid: str) -> GameConfig:
    i = p.pid_index(pid)
    b = c_iota.base
    if len(b.states) != 1 or len(b.buffers) != 1 or len(b.memory) != len(c0.base.memory):
        raise GameError("not a single-process configuration of this program")
    if b.states[0] not in p.process(pid).states:
        raise GameError(f"{b.states[0]!r} is not a state of {pid}")
    s0 = c0.base
    base = TsoConfig(
        s0.states[:i] + b.states + s0.states[i + 1:],
        s0.buffers[:i] + b.buffers + s0.buffers[i + 1:],
        b.memory,
    )
    return GameConfig(base, c_iota.turn, c_iota.last_mover, c_iota.updating)


# -- strategies ----------------------------------------------------------

def lift_strategy(sigma: PositionalStrategy, sub: GameGraph, pid: str,
                  arena: Arena) -> PositionalStrategy:
    """Play in the full arena what `sigma` plays on the projection to `pid`.

    `sub` is the game `sigma` lives on: a single-process arena or a view
    game.  Nodes whose projection `sigma` does not cover stay undefined, as
    do nodes where the chosen write was cut off by the cap.  A choice that
    is not enabled at all raises :class:`StrategyLiftError`.
    """
    from .views import ViewNode, view_of

    if sigma.owner != A:
        raise GameError("only process-player strategies can be lifted")
    p = arena.program
    i = p.pid_index(pid)
    by_view = bool(sub.nodes) and isinstance(sub.nodes[0], ViewNode)
    choice = {}
    for v, cfg in enumerate(arena.nodes):
        if arena.owner[v] != A:
            continue
        r = restrict(p, cfg, pid)
        key = ViewNode("A", view_of(p, r.base)) if by_view else r
        sv = sub.index.get(key)
        if sv is None or sigma(sv) is None:
            continue
        lbl = sub.edge_label(sv, sigma(sv))
        want = Move(pid, lbl.instr, lbl.target)
        for elbl, w in zip(arena.labels[v], arena.succ[v]):
            if elbl == want:
                choice[v] = w
                break
        else:
            enabled = want in enabled_moves(p, cfg.base)
            cut = enabled and want.instr.kind == WRITE and arena.cap is not None and \
                len(cfg.base.buffers[i]) + 1 > arena.cap
            if not cut:
                raise StrategyLiftError(f"{want} not enabled at {cfg}")
    return PositionalStrategy(A, choice)


def never_update_strategy(arena: Arena) -> PositionalStrategy:
    """Update player that never flushes anything."""
    choice = {}
    for v, cfg in enumerate(arena.nodes):
        if arena.owner[v] != B:
            continue
        for lbl, w in zip(arena.labels[v], arena.succ[v]):
            if arena.nodes[w].turn == "A" and arena.nodes[w].base == cfg.base:
                choice[v] = w
                break
    return PositionalStrategy(B, choice)


def only_process_strategy(arena: Arena, pid: str) -> PositionalStrategy:
    """Process player that moves `pid` whenever it can."""
    choice = {}
    for v in range(len(arena)):
        if arena.owner[v] != A or not arena.succ[v]:
            continue
        pick = arena.succ[v][0]
        for lbl, w in zip(arena.labels[v], arena.succ[v]):
            if isinstance(lbl, Move) and lbl.pid == pid:
                pick = w
                break
        choice[v] = pick
    return PositionalStrategy(A, choice)
