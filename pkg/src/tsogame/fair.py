"""Bounded solvers for the two fairness variants.

Update fairness (reachability): an A-node where no instruction is enabled
but some buffer is non-empty counts as a win for the process player, since
a fair update player would have flushed.

Process fairness (safety): every process enabled infinitely often must move
infinitely often.  On arenas this is a Streett condition with one pair per
process: requests are A-nodes where the process has a move, grants are
B-nodes it moved into.  It is solved through an index appearance record
product and a Zielonka parity solver, or directly by a recursive Streett
solver when the product would be too large.
"""
from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .game import Arena
from .graph import A, B, GameGraph, PositionalStrategy, complete_strategy
from .program import PROCESS_FAIR, SAFETY, UPDATE_FAIR
from .solve import SolverError, WinningRegions, _attractor, attractor, trap_strategy


def _bounded_info(arena, fairness, method=None):
    info = {"fairness": fairness, "bounded": True,
            "cap": getattr(arena, "cap", None), "truncated": getattr(arena, "truncated", False)}
    if method:
        info["method"] = method
    return info


# -- update fairness ------------------------------------------------------

def update_fair_targets(arena: Arena, targets=None) -> set[int]:
    if not isinstance(arena, Arena):
        raise SolverError("update-fair targets need a TSO arena")
    base = arena.targets() if targets is None else set(targets)
    stuck = {v for v in range(len(arena))
             if arena.owner[v] == A and not arena.succ[v] and any(arena.nodes[v].base.buffers)}
    return base | stuck


def solve_update_fair_reachability(arena: Arena, targets=None) -> WinningRegions:
    if not isinstance(arena, Arena):
        raise SolverError("update-fair solving needs a TSO arena with truncation info")
    goal = update_fair_targets(arena, targets)
    win_a, strat, _ = _attractor(arena, goal, A)
    win_b = arena.node_set() - win_a
    return WinningRegions(
        arena, win_a, win_b,
        complete_strategy(arena, PositionalStrategy(A, strat)),
        complete_strategy(arena, PositionalStrategy(B, trap_strategy(arena, win_b, B))),
        "reach", frozenset(goal), _bounded_info(arena, UPDATE_FAIR),
    )


# -- Streett pairs ----------------------------------------------------------

@dataclass(frozen=True)
class StreettPair:
    """Infinitely many `requests` force infinitely many `grants`."""

    name: str
    requests: frozenset
    grants: frozenset


def streett_pairs(game: GameGraph) -> list[StreettPair]:
    if len(game.enabled) != len(game) or len(game.mover) != len(game):
        raise SolverError("game lacks enabled/mover annotations")
    if hasattr(game, "program"):
        names = list(game.program.pids)
    else:
        names = sorted({p for s in game.enabled for p in s} | {m for m in game.mover if m})
    pairs = []
    for pid in names:
        req = frozenset(v for v in range(len(game)) if game.owner[v] == A and pid in game.enabled[v])
        grant = frozenset(v for v in range(len(game)) if game.mover[v] == pid)
        pairs.append(StreettPair(pid, req, grant))
    return pairs


# -- parity games -----------------------------------------------------------

class ParityGame(GameGraph):
    """Max-parity game: A (owner 0) wins when the top recurring priority is even."""

    def __init__(self):
        super().__init__()
        self.priority: list[int] = []
        self.origin: list = []   # arena node each product node projects to (None for sinks)

    def add_pnode(self, node, owner, priority, origin=None) -> int:
        before = len(self)
        v = self.add_node(node, owner)
        if v == before:
            self.priority.append(priority)
            self.origin.append(origin)
        return v


def _iar_step(record: tuple, reqs: frozenset, grants: frozenset):
    """Priority of visiting a node with `record`, and the record afterwards.

    Pairs sit in `record` in order of their last grant (most recent first).
    A request at position h that beats every grant gives odd 2h+1; otherwise
    the deepest grant at position h gives even 2h+2.
    """
    h_req = max((h for h, i in enumerate(record) if i in reqs), default=-1)
    h_grant = max((h for h, i in enumerate(record) if i in grants), default=-1)
    prio = 2 * h_req + 1 if h_req > h_grant else 2 * h_grant + 2
    if grants:
        moved = tuple(i for i in record if i in grants)
        record = moved + tuple(i for i in record if i not in grants)
    return prio, record


def streett_to_parity(game: GameGraph, pairs, bad=frozenset(), winners_at_sinks=None) -> ParityGame:
    """Index-appearance-record product of `game` with the Streett pairs.

    Bad nodes become absorbing and losing for A; deadlocks become sinks
    losing for their owner.  Every arena node v is represented by the
    product node (v, initial record); winners do not depend on the record.
    """
    bad = frozenset(bad)
    active = [p for p in pairs if p.requests]
    n = len(active)
    reqs_at, grants_at = {}, {}
    for i, p in enumerate(active):
        for v in p.requests:
            reqs_at.setdefault(v, set()).add(i)
        for v in p.grants:
            grants_at.setdefault(v, set()).add(i)
    top_odd = 2 * n + 1
    pg = ParityGame()
    start = tuple(range(n))
    queue = deque()
    empty = frozenset()

    def pnode(v, rec):
        key = (v, rec)
        before = len(pg)
        if v in bad:
            w = pg.add_pnode(key, game.owner[v], top_odd, v)
        elif not game.succ[v]:
            w = pg.add_pnode(key, game.owner[v], top_odd if game.owner[v] == A else 0, v)
        else:
            prio, _ = _iar_step(rec, frozenset(reqs_at.get(v, empty)), frozenset(grants_at.get(v, empty)))
            w = pg.add_pnode(key, game.owner[v], prio, v)
        if w == before:
            queue.append(w)
        return w

    for v in range(len(game)):
        pnode(v, start)
    pg.initial = pg.index[(game.initial, start)]
    while queue:
        w = queue.popleft()
        v, rec = pg.nodes[w]
        if v in bad or not game.succ[v]:
            pg.add_edge(w, "sink", w)
            continue
        _, nrec = _iar_step(rec, frozenset(reqs_at.get(v, empty)), frozenset(grants_at.get(v, empty)))
        for lbl, u in zip(game.labels[v], game.succ[v]):
            pg.add_edge(w, lbl, pnode(u, nrec))
    pg.pairs = active
    return pg


def _zielonka(pg: ParityGame, domain: set):
    """Returns (W0, W1, strategy0, strategy1) on the deadlock-free `domain`."""
    if not domain:
        return set(), set(), {}, {}
    prio = pg.priority
    d = max(prio[v] for v in domain)
    p = d % 2
    o = 1 - p
    top = {v for v in domain if prio[v] == d}
    attr, astrat, _ = _attractor(pg, top, p, domain)
    sub = domain - attr
    W = [None, None]
    S = [None, None]
    W[0], W[1], S[0], S[1] = _zielonka(pg, sub)
    if not W[o]:
        strat_p = dict(S[p])
        strat_p.update(astrat)
        for v in top:
            if pg.owner[v] == p:
                strat_p[v] = next(w for w in pg.succ[v] if w in domain)
        out = [None, None]
        out[p], out[o] = set(domain), set()
        strats = [None, None]
        strats[p], strats[o] = strat_p, {}
        return out[0], out[1], strats[0], strats[1]
    battr, bstrat, _ = _attractor(pg, W[o], o, domain)
    W2 = [None, None]
    S2 = [None, None]
    W2[0], W2[1], S2[0], S2[1] = _zielonka(pg, domain - battr)
    win_o = W2[o] | battr
    strat_o = dict(S2[o])
    strat_o.update(bstrat)
    strat_o.update(S[o])
    out = [None, None]
    out[p], out[o] = W2[p], win_o
    strats = [None, None]
    strats[p], strats[o] = dict(S2[p]), strat_o
    return out[0], out[1], strats[0], strats[1]


def solve_parity(pg: ParityGame) -> WinningRegions:
    """Zielonka's recursive algorithm; deadlocked nodes lose for their owner."""
    dead = pg.deadlocks()
    if dead:
        # treat each deadlock as a self-loop with a priority losing for its owner
        top = (max(pg.priority, default=0) // 2 + 1) * 2    # even, above all priorities
        prio = list(pg.priority)
        succ = [list(s) for s in pg.succ]
        for v in dead:
            prio[v] = top + 1 if pg.owner[v] == A else top
            succ[v] = [v]
        shadow = ParityGame()
        shadow.nodes, shadow.index, shadow.owner = pg.nodes, pg.index, pg.owner
        shadow.succ, shadow.priority = succ, prio
        shadow.labels = pg.labels
        work = shadow
    else:
        work = pg
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * len(pg) + 1000))
    try:
        W0, W1, s0, s1 = _zielonka(work, pg.node_set())
    finally:
        sys.setrecursionlimit(limit)
    s0 = {v: w for v, w in s0.items() if v not in dead}
    s1 = {v: w for v, w in s1.items() if v not in dead}
    return WinningRegions(
        pg, W0, W1,
        complete_strategy(pg, PositionalStrategy(A, s0)),
        complete_strategy(pg, PositionalStrategy(B, s1)),
        "parity",
    )


# -- direct Streett solving -------------------------------------------------

def _rabin_region(g, domain: set, pairs: list) -> set:
    """Where B wins "some pair is requested infinitely often and granted finitely often"."""
    if not pairs or not domain:
        return set()
    domain = set(domain)
    won = set()
    while domain:
        for i, pair in enumerate(pairs):
            hide = domain - attractor(g, pair.grants & domain, A, domain)
            if not hide:
                continue
            x = _buchi_or_rabin(g, hide, pair.requests, pairs[:i] + pairs[i + 1:])
            if x:
                z = attractor(g, x, B, domain)
                won |= z
                domain -= z
                break
        else:
            break
    return won


def _buchi_or_rabin(g, domain: set, requests, pairs: list) -> set:
    """B-region for "infinitely many `requests`, or the Rabin condition of `pairs`"."""
    domain = set(domain)
    while domain:
        keep_out = domain - attractor(g, requests & domain, B, domain)
        if not keep_out:
            return domain
        safe_a = keep_out - _rabin_region(g, keep_out, pairs)
        if not safe_a:
            return domain
        domain -= attractor(g, safe_a, A, domain)
    return domain


def solve_streett(game: GameGraph, pairs, bad=frozenset()) -> tuple[set, set]:
    """(A-region, B-region) for "avoid `bad` and satisfy every pair"."""
    everything = game.node_set()
    lost = attractor(game, set(bad), B)               # A-deadlocks are attracted too
    rest = everything - lost
    b_dead = {v for v in rest if game.owner[v] == B and not game.succ[v]}
    won_early = attractor(game, b_dead, A, rest)
    core = rest - won_early
    active = [p for p in pairs if p.requests & core]
    sys_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(sys_limit, 5000))
    try:
        b_core = _rabin_region(game, core, active)
    finally:
        sys.setrecursionlimit(sys_limit)
    win_b = lost | b_core
    return everything - win_b, win_b


AUTO_PARITY_LIMIT = 20000


def solve_process_fair_safety(arena: GameGraph, bad=None, method: str = "parity") -> WinningRegions:
    """Bounded verdict for safety under process fairness.

    ``method="parity"`` runs streett_pairs -> streett_to_parity ->
    solve_parity and projects back; strategies are positional on the
    product and reported in ``info["parity"]``, with their projections
    through the initial record as arena strategies.  ``method="streett"``
    solves the Streett game directly (regions only); ``method="auto"``
    picks parity for arenas below AUTO_PARITY_LIMIT nodes.
    """
    if bad is None:
        bad = arena.targets()
    bad = frozenset(bad)
    if method == "auto":
        method = "parity" if len(arena) < AUTO_PARITY_LIMIT else "streett"
    pairs = streett_pairs(arena)
    info = _bounded_info(arena, PROCESS_FAIR, method)
    if method == "streett":
        win_a, win_b = solve_streett(arena, pairs, bad)
        return WinningRegions(arena, win_a, win_b, PositionalStrategy(A), PositionalStrategy(B),
                              SAFETY, bad, info)
    if method != "parity":
        raise SolverError(f"unknown method {method!r}")
    pg = streett_to_parity(arena, pairs, bad)
    preg = solve_parity(pg)
    start = tuple(range(len(pg.pairs)))
    win_a, win_b = set(), set()
    sa, sb = {}, {}
    for v in range(len(arena)):
        w = pg.index[(v, start)]
        (win_a if w in preg.win_a else win_b).add(v)
        strat = preg.strategy_a if arena.owner[v] == A else preg.strategy_b
        nxt = strat(w)
        if nxt is not None and nxt != w:
            (sa if arena.owner[v] == A else sb)[v] = pg.nodes[nxt][0]
    info["parity"] = (pg, preg)
    info["product_size"] = len(pg)
    return WinningRegions(arena, win_a, win_b, PositionalStrategy(A, sa), PositionalStrategy(B, sb),
                          SAFETY, bad, info)
