"""Explicit two-player game graphs.

Nodes are hashable objects numbered in insertion order.  Player A (the
process player) owns nodes with owner 0, player B (the update player)
owns nodes with owner 1.  All solvers work on node indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional

A, B = 0, 1
PLAYER_NAME = {A: "A", B: "B"}


class GameGraph:
    def __init__(self):
        self.nodes: list = []
        self.index: dict = {}
        self.owner: list[int] = []
        self.succ: list[list[int]] = []
        self.labels: list[list] = []
        self.initial: int = 0
        # optional fairness annotations: processes with an enabled move at
        # an A-node, and the process that moved into a B-node
        self.enabled: list[frozenset] = []
        self.mover: list[Optional[str]] = []
        self._pred = None

    def __len__(self):
        return len(self.nodes)

    def add_node(self, node: Hashable, owner: int, enabled=frozenset(), mover=None) -> int:
        i = self.index.get(node)
        if i is not None:
            return i
        i = len(self.nodes)
        self.nodes.append(node)
        self.index[node] = i
        self.owner.append(owner)
        self.succ.append([])
        self.labels.append([])
        self.enabled.append(frozenset(enabled))
        self.mover.append(mover)
        self._pred = None
        return i

    def add_edge(self, src: int, label, dst: int) -> None:
        self.succ[src].append(dst)
        self.labels[src].append(label)
        self._pred = None

    @property
    def pred(self) -> list[list[int]]:
        if self._pred is None:
            pred = [[] for _ in self.nodes]
            for v, out in enumerate(self.succ):
                for w in out:
                    pred[w].append(v)
            self._pred = pred
        return self._pred

    def edges(self):
        for v, out in enumerate(self.succ):
            for lbl, w in zip(self.labels[v], out):
                yield v, lbl, w

    def edge_label(self, src: int, dst: int):
        for lbl, w in zip(self.labels[src], self.succ[src]):
            if w == dst:
                return lbl
        raise KeyError((src, dst))

    def deadlocks(self, player: Optional[int] = None) -> set[int]:
        return {v for v, out in enumerate(self.succ)
                if not out and (player is None or self.owner[v] == player)}

    def node_set(self) -> set[int]:
        return set(range(len(self.nodes)))


@dataclass
class PositionalStrategy:
    """Choice of successor per owned node (node index -> successor index)."""

    owner: int
    choice: dict = field(default_factory=dict)

    def __call__(self, v: int) -> Optional[int]:
        return self.choice.get(v)

    def restricted(self, nodes: Iterable[int]) -> "PositionalStrategy":
        keep = set(nodes)
        return PositionalStrategy(self.owner, {v: w for v, w in self.choice.items() if v in keep})


def complete_strategy(game: GameGraph, strategy: PositionalStrategy) -> PositionalStrategy:
    """Fill undefined owner nodes with their first successor."""
    choice = dict(strategy.choice)
    for v in range(len(game)):
        if game.owner[v] == strategy.owner and v not in choice and game.succ[v]:
            choice[v] = game.succ[v][0]
    return PositionalStrategy(strategy.owner, choice)


@dataclass
class Play:
    """A finite play, or a lasso ``stem + cycle`` when `cycle_start` is set.

    For a lasso the last node has an edge back to ``nodes[cycle_start]``.
    """

    game: GameGraph
    nodes: list
    cycle_start: Optional[int] = None

    @property
    def is_lasso(self) -> bool:
        return self.cycle_start is not None

    def steps(self):
        """(src, label, dst) for every edge taken, the closing edge included."""
        out = []
        for a, b in zip(self.nodes, self.nodes[1:]):
            out.append((a, self.game.edge_label(a, b), b))
        if self.is_lasso:
            a, b = self.nodes[-1], self.nodes[self.cycle_start]
            out.append((a, self.game.edge_label(a, b), b))
        return out

    def cycle(self) -> list:
        return self.nodes[self.cycle_start:] if self.is_lasso else []

    def validate(self) -> None:
        for a, b in zip(self.nodes, self.nodes[1:]):
            if b not in self.game.succ[a]:
                raise ValueError(f"{a}->{b} is not an edge")
        if self.is_lasso:
            if self.nodes[self.cycle_start] not in self.game.succ[self.nodes[-1]]:
                raise ValueError("lasso does not close")


def play_from(game: GameGraph, strategies: dict, start: Optional[int] = None) -> Play:
    """The unique play induced by positional strategies of both players."""
    v = game.initial if start is None else start
    nodes, seen = [], {}
    while True:
        if v in seen:
            return Play(game, nodes, seen[v])
        seen[v] = len(nodes)
        nodes.append(v)
        if not game.succ[v]:
            return Play(game, nodes)
        w = strategies[game.owner[v]](v)
        if w is None:
            raise ValueError(f"strategy of {PLAYER_NAME[game.owner[v]]} undefined at {v}")
        v = w
