"""DOT rendering and JSON result documents."""
from __future__ import annotations

import json

from .game import GameConfig
from .graph import A, B, GameGraph
from .tso import Move, TsoConfig, format_config
from .views import ViewNode


def format_base(p, c) -> str:
    if isinstance(c, TsoConfig):
        return format_config(p, c)
    # load-buffer configuration
    sigma = ",".join(f"{pid}:{s}" for pid, s in zip(p.pids, c.states))
    beta = "|".join(f"{pid}:" + "".join(str(m) for m in buf) for pid, buf in zip(p.pids, c.buffers))
    mu = ",".join(f"{x}={d}" for x, d in zip(p.var_names, c.memory))
    return f"σ=[{sigma}] β=[{beta}] μ=[{mu}]"


def node_text(game: GameGraph, v: int) -> str:
    n = game.nodes[v]
    if isinstance(n, GameConfig):
        tag = n.turn
        if n.last_mover:
            tag += "/" + n.last_mover
        if n.updating:
            tag += "~"
        return f"{tag} {format_base(game.program, n.base)}"
    if isinstance(n, ViewNode):
        return str(n)
    return str(n)


def edge_text(label) -> str:
    if isinstance(label, Move):
        return f"{label.pid}:{label.instr}"
    return str(label)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(game: GameGraph, name: str = "game", regions=None) -> str:
    """Deterministic DOT: nodes in index order, A as boxes, B as circles."""
    out = [f"digraph {_quote(name)} {{", "  rankdir=LR;"]
    for v in range(len(game)):
        attrs = [f"label={_quote(node_text(game, v))}",
                 f"shape={'box' if game.owner[v] == A else 'circle'}"]
        if v == game.initial:
            attrs.append("penwidth=2")
        if regions is not None:
            attrs.append(f"color={'blue' if v in regions.win_a else 'red'}")
        out.append(f"  n{v} [{', '.join(attrs)}];")
    for v, lbl, w in game.edges():
        out.append(f"  n{v} -> n{w} [label={_quote(edge_text(lbl))}];")
    out.append("}")
    return "\n".join(out) + "\n"


def strategy_entries(regions) -> list:
    """Choices of the winner on its winning region, in node order."""
    game = regions.game
    if regions.winner == "A":
        strat, region = regions.strategy_a, regions.win_a
    else:
        strat, region = regions.strategy_b, regions.win_b
    out = []
    for v in sorted(region):
        w = strat(v)
        if w is None or game.owner[v] != strat.owner:
            continue
        out.append({"config": node_text(game, v), "chosenEdge": edge_text(game.edge_label(v, w)),
                    "target": node_text(game, w)})
    return out


def result_document(regions=None, concurrent=None, fairness="none") -> dict:
    """JSON-ready summary of a bounded solve or of a concurrent (view-game) solve."""
    if concurrent is not None:
        doc = {"winner": concurrent.winner, "witnessProcess": concurrent.witness_process,
               "regionSizes": {pid: {"A": len(r.win_a), "B": len(r.win_b)}
                               for pid, r in concurrent.regions.items()},
               "strategy": [], "fairness": fairness, "cap": None, "truncated": False}
        if concurrent.witness_process is not None:
            doc["strategy"] = strategy_entries(concurrent.regions[concurrent.witness_process])
        return doc
    info = regions.info
    return {"winner": regions.winner, "witnessProcess": None,
            "regionSizes": {"A": len(regions.win_a), "B": len(regions.win_b)},
            "strategy": strategy_entries(regions),
            "fairness": info.get("fairness", fairness),
            "cap": info.get("cap", getattr(regions.game, "cap", None)),
            "truncated": bool(info.get("truncated", getattr(regions.game, "truncated", False)))}


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=True) + "\n"
