"""Attractors, reachability/safety solving and strategy checking."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .graph import A, B, PLAYER_NAME, GameGraph, Play, PositionalStrategy, complete_strategy
from .program import REACH, SAFETY


class SolverError(ValueError):
    pass


def _attractor(game: GameGraph, targets, player: int, domain=None):
    """Least player-attractor of `targets` inside `domain`.

    Returns ``(region, strategy, rank)``; the strategy picks, for player
    nodes outside `targets`, the successor of least rank (ties: lowest
    index).  Opponent nodes without successors in `domain` are attracted.
    """
    inside = (lambda v: True) if domain is None else domain.__contains__
    succ, pred, owner = game.succ, game.pred, game.owner
    region = set(t for t in targets if inside(t))
    rank = {t: 0 for t in region}
    queue = deque(sorted(region))
    count = {}
    nodes = range(len(game)) if domain is None else domain
    for v in nodes:
        if v in region or owner[v] == player:
            continue
        n = sum(1 for w in succ[v] if inside(w))
        if n == 0:
            region.add(v)
            rank[v] = 0
            queue.append(v)
        else:
            count[v] = n
    while queue:
        w = queue.popleft()
        for v in pred[w]:
            if v in region or not inside(v):
                continue
            if owner[v] == player:
                region.add(v)
                rank[v] = rank[w] + 1
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    region.add(v)
                    rank[v] = rank[w] + 1
                    queue.append(v)
    strategy = {}
    tset = set(targets)
    for v in region:
        if owner[v] == player and v not in tset:
            best = min((rank[w], w) for w in succ[v] if w in rank)
            strategy[v] = best[1]
    return region, strategy, rank


def attractor(game: GameGraph, targets, player: int, domain=None) -> set[int]:
    return _attractor(game, targets, player, domain)[0]


def trap_strategy(game: GameGraph, region: set[int], player: int) -> dict:
    """For `player` nodes in `region`, a successor that stays in `region`."""
    out = {}
    for v in region:
        if game.owner[v] == player:
            for w in game.succ[v]:
                if w in region:
                    out[v] = w
                    break
    return out


@dataclass
class WinningRegions:
    game: GameGraph
    win_a: set
    win_b: set
    strategy_a: PositionalStrategy
    strategy_b: PositionalStrategy
    kind: Optional[str] = None
    targets: frozenset = frozenset()
    info: dict = field(default_factory=dict)

    @property
    def winner(self) -> str:
        return "A" if self.game.initial in self.win_a else "B"

    def winner_at(self, v: int) -> str:
        return "A" if v in self.win_a else "B"

    def is_partition(self) -> bool:
        return not (self.win_a & self.win_b) and (self.win_a | self.win_b) == self.game.node_set()


def solve(game: GameGraph, kind: str, targets=None) -> WinningRegions:
    """Solve a reachability or safety game for the process player.

    Reachability: A wins on the A-attractor of the targets (B-deadlocks are
    attracted automatically).  Safety: B wins on the B-attractor of the bad
    nodes (A-deadlocks likewise).  Strategies are total: on the winning
    region they follow the attractor ranks or stay in the region, elsewhere
    they take the first successor.
    """
    if kind not in (REACH, SAFETY):
        raise SolverError(f"solve handles plain reach/safety objectives, not {kind!r}")
    if targets is None:
        targets = game.targets()
    targets = frozenset(targets)
    everything = game.node_set()
    if kind == REACH:
        win_a, strat, _ = _attractor(game, targets, A)
        win_b = everything - win_a
        sa, sb = strat, trap_strategy(game, win_b, B)
    else:
        win_b, strat, _ = _attractor(game, targets, B)
        win_a = everything - win_b
        sb, sa = strat, trap_strategy(game, win_a, A)
    return WinningRegions(
        game, win_a, win_b,
        complete_strategy(game, PositionalStrategy(A, sa)),
        complete_strategy(game, PositionalStrategy(B, sb)),
        kind, targets,
    )


def _path_to(parent, v):
    path = []
    while v is not None:
        path.append(v)
        v = parent[v]
    return path[::-1]


def verify_strategy(game: GameGraph, strategy: PositionalStrategy, kind: str,
                    targets=None, start: Optional[int] = None) -> Optional[Play]:
    """Check that `strategy` wins from `start` by exhaustive search.

    Returns None when every play consistent with the strategy is won by its
    owner, otherwise a counterexample: a play ending in a losing deadlock, a
    prefix reaching a losing node, or a lasso that never reaches the goal.
    """
    if targets is None:
        targets = game.targets()
    targets = set(targets)
    start = game.initial if start is None else start
    me = strategy.owner

    def moves(v):
        if game.owner[v] == me:
            w = strategy(v)
            if w is None:
                if game.succ[v]:
                    raise SolverError(f"strategy undefined at node {v}")
                return []
            if w not in game.succ[v]:
                raise SolverError(f"strategy picks a non-edge at node {v}")
            return [w]
        return game.succ[v]

    reach_goal = (kind == REACH) == (me == A)
    if not reach_goal:
        parent = {start: None}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            if v in targets:
                return Play(game, _path_to(parent, v))
            nxt = moves(v)
            if not nxt and game.owner[v] == me:
                return Play(game, _path_to(parent, v))
            for w in nxt:
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
        return None

    # reach goal: no owner deadlock and no cycle outside the targets
    WHITE, GREY, BLACK = 0, 1, 2
    color = {}
    stack_path = []
    color[start] = GREY
    stack = [(start, iter(() if start in targets else moves(start)))]
    stack_path.append(start)
    if start not in targets and not moves(start) and game.owner[start] == me:
        return Play(game, [start])
    while stack:
        v, it = stack[-1]
        for w in it:
            if w in targets:
                continue
            c = color.get(w, WHITE)
            if c == GREY:
                return Play(game, list(stack_path), stack_path.index(w))
            if c == WHITE:
                color[w] = GREY
                stack_path.append(w)
                nxt = moves(w)
                if not nxt and game.owner[w] == me:
                    return Play(game, list(stack_path))
                stack.append((w, iter(nxt)))
                break
        else:
            color[v] = BLACK
            stack.pop()
            stack_path.pop()
    return None


def describe(regions: WinningRegions) -> str:
    return (f"winner {regions.winner}: |win A|={len(regions.win_a)} "
            f"|win B|={len(regions.win_b)} ({PLAYER_NAME[A]}=process, {PLAYER_NAME[B]}=update)")
