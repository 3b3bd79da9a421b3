"""Command-line front end.

Exit codes: 0 when the process player wins (or a check passes), 1 when the
update player wins (or a check finds problems), 2 on any error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from .dsl import DslError, format_program, parse_pcs, parse_program
from .export import dump_json, edge_text, node_text, result_document, to_dot
from .fair import solve_process_fair_safety, solve_update_fair_reachability
from .game import GameError, build_bounded_arena, check_process_fairness, check_update_fairness, \
    never_update_strategy
from .graph import A, Play
from .loadbuffer import build_lb_arena
from .pcs import PcsError, gen_process_fair_program, gen_update_fair_program
from .program import (
    NO_FAIRNESS, PROCESS_FAIR, UPDATE_FAIR, Objective, ProgramError, errors, validate_program,
)
from .solve import SolverError, solve
from .tso import SemanticsError
from .views import build_view_game, check_bisimulation_fragment, solve_concurrent

DEFAULT_CAP = 3


class CliError(Exception):
    pass


def _load_program(path, fairness=None):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    p = parse_program(text)
    if fairness is not None and fairness != p.objective.fairness:
        obj = p.objective
        p = p.with_objective(Objective(obj.kind, obj.targets, fairness))
    bad = errors(validate_program(p))
    if bad:
        raise CliError("; ".join(str(d) for d in bad))
    return p


def _arena(p, semantics, cap, fairness):
    if semantics == "lb":
        return build_lb_arena(p, cap, stepwise=fairness == PROCESS_FAIR)
    return build_bounded_arena(p, cap, stepwise=fairness == PROCESS_FAIR)


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")
    return str(path)


def cmd_solve(args) -> int:
    p = _load_program(args.file, args.fairness)
    fairness = p.objective.fairness
    t0 = time.perf_counter()
    report = {"command": " ".join(["solve", str(args.file)] + args.echo), "artifacts": []}
    if fairness == NO_FAIRNESS and args.semantics == "sb" and args.cap is None:
        res = solve_concurrent(p)
        doc = result_document(concurrent=res)
        print(f"winner: {res.winner} ({'process' if res.winner == 'A' else 'update'} player)")
        if res.witness_process:
            print(f"witness process: {res.witness_process}")
        for pid, reg in res.regions.items():
            print(f"  view game {pid}: {len(reg.game)} nodes, |win A|={len(reg.win_a)} |win B|={len(reg.win_b)}")
        winner = res.winner
    else:
        cap = DEFAULT_CAP if args.cap is None else args.cap
        arena = _arena(p, args.semantics, cap, fairness)
        if fairness == UPDATE_FAIR:
            reg = solve_update_fair_reachability(arena)
        elif fairness == PROCESS_FAIR:
            reg = solve_process_fair_safety(arena, method="auto")
        else:
            reg = solve(arena, p.objective.kind, arena.targets())
            reg.info.update(fairness=NO_FAIRNESS, cap=cap, truncated=arena.truncated)
        doc = result_document(reg)
        winner = reg.winner
        print(f"winner: {winner} ({'process' if winner == 'A' else 'update'} player)")
        print(f"bounded verdict at cap {cap} ({args.semantics}), fairness {fairness}, "
              f"truncated={arena.truncated}")
        print(f"arena: {len(arena)} nodes, |win A|={len(reg.win_a)} |win B|={len(reg.win_b)}")
    if not args.strategy:
        doc["strategy"] = []
    doc["timings"] = {"solve_s": round(time.perf_counter() - t0, 4)}
    if args.json:
        report["artifacts"].append(_write(args.json, dump_json(doc)))
    return 0 if winner == "A" else 1


def _load_strategy(path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return {e["config"]: e["target"] for e in doc["strategy"]}
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CliError(f"incompatible strategy file {path}: {exc}") from None


def cmd_simulate(args) -> int:
    p = _load_program(args.file, args.fairness)
    fairness = p.objective.fairness
    cap = DEFAULT_CAP if args.cap is None else args.cap
    arena = _arena(p, args.semantics, cap, NO_FAIRNESS)
    rng = random.Random(args.seed)
    b_fixed = never_update_strategy(arena) if args.b_strategy == "never-update" else None
    a_fixed = _load_strategy(args.a_strategy) if args.a_strategy else None
    v = arena.initial
    seen = {v: 0}
    nodes = [v]
    lasso = None
    lines = [f"0: {node_text(arena, v)}"]
    for step in range(1, args.steps + 1):
        out = arena.succ[v]
        if not out:
            break
        w = None
        if arena.owner[v] == A and a_fixed is not None:
            want = a_fixed.get(node_text(arena, v))
            if want is not None:
                matches = [u for u in out if node_text(arena, u) == want]
                if not matches:
                    raise CliError(f"strategy file chooses a non-successor at {node_text(arena, v)}")
                w = matches[0]
        elif arena.owner[v] != A and b_fixed is not None:
            w = b_fixed(v)
        if w is None:
            w = rng.choice(out)
        lbl = arena.edge_label(v, w)
        who = "A" if arena.owner[v] == A else "B"
        lines.append(f"{step}: {who} {edge_text(lbl)} -> {node_text(arena, w)}")
        v = w
        if v in seen and lasso is None:
            lasso = seen[v]
        seen.setdefault(v, len(nodes))
        nodes.append(v)
        if lasso is not None:
            break
    if lasso is not None:
        cyc_start = nodes.index(v)
        play = Play(arena, nodes[:-1], cyc_start)
        lines.append(f"lasso closes at step {cyc_start}")
        if fairness == PROCESS_FAIR:
            missing = check_process_fairness(play)
            lines.append("W_P satisfied on the cycle" if missing is None
                         else f"W_P violated: {missing} enabled but never moves")
    else:
        play = Play(arena, nodes)
        if not arena.succ[v]:
            owner = "A" if arena.owner[v] == A else "B"
            lines.append(f"deadlock of {owner}")
        if fairness == UPDATE_FAIR and check_update_fairness(play) is not None:
            lines.append("W_U violated: process player deadlocked with pending buffers")
    if any(arena.nodes[u].turn == "A" and u in arena.targets() for u in nodes):
        lines.append("target visited")
    print("\n".join(lines))
    if args.json:
        _write(args.json, dump_json({"seed": args.seed, "transcript": lines}))
    return 0


def cmd_reduce(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {args.file}: {exc.strerror}") from None
    s = parse_pcs(text)
    if args.fairness == PROCESS_FAIR:
        p = gen_process_fair_program(s)
    elif args.fairness == UPDATE_FAIR:
        p = gen_update_fair_program(s)
    else:
        raise CliError("reduce needs --fairness update or process")
    out = format_program(p)
    if args.output:
        _write(args.output, out)
    else:
        sys.stdout.write(out)
    return 0


def cmd_export(args) -> int:
    p = _load_program(args.file)
    if args.what == "arena":
        cap = DEFAULT_CAP if args.cap is None else args.cap
        g = _arena(p, args.semantics, cap, NO_FAIRNESS)
        name = f"arena_cap{cap}"
    elif args.what == "viewgame":
        pid = args.process or p.pids[0]
        g = build_view_game(p.restricted_to(pid))
        name = f"viewgame_{pid}"
    else:
        raise CliError(f"unknown --what {args.what!r}")
    dot = to_dot(g, name)
    if args.dot:
        _write(args.dot, dot)
    else:
        sys.stdout.write(dot)
    return 0


def cmd_check(args) -> int:
    p = _load_program(args.file)
    diags = validate_program(p)
    for d in diags:
        print(d)
    ok = True
    for pid in p.pids:
        rep = check_bisimulation_fragment(p.restricted_to(pid), args.bound)
        print(f"{pid}: {rep.checked} configurations checked at bound {args.bound}, "
              f"{len(rep.violations)} violations")
        for kind, cfg, detail in rep.violations[:10]:
            print(f"  {kind}: {detail}")
        ok = ok and rep.ok
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tsogame", description="TSO games: solve, simulate, reduce, export, check")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(sp, fairness=True):
        sp.add_argument("file")
        sp.add_argument("--semantics", choices=["sb", "lb"], default="sb")
        sp.add_argument("--cap", type=int, default=None)
        if fairness:
            sp.add_argument("--fairness", choices=["none", "update", "process"], default=None)
        sp.add_argument("--json", default=None, metavar="PATH")

    sp = sub.add_parser("solve", help="decide who wins")
    common(sp)
    sp.add_argument("--strategy", action="store_true", help="include the winning strategy in --json")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("simulate", help="random playout")
    common(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--steps", type=int, default=50)
    sp.add_argument("--b-strategy", choices=["random", "never-update"], default="random")
    sp.add_argument("--a-strategy", default=None, metavar="PATH", help="strategy from 'solve --json --strategy'")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("reduce", help="channel system to TSO program")
    sp.add_argument("file")
    sp.add_argument("--fairness", choices=["update", "process"], required=True)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("export", help="DOT rendering of an arena or view game")
    common(sp, fairness=False)
    sp.add_argument("--what", default="arena")
    sp.add_argument("--process", default=None)
    sp.add_argument("--dot", default=None, metavar="PATH")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("check", help="static checks and the bisimulation fragment check")
    sp.add_argument("file")
    sp.add_argument("--bound", type=int, default=3)
    sp.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    args.echo = argv[2:]
    try:
        return args.func(args)
    except (CliError, DslError, ProgramError, PcsError, GameError, SolverError,
            SemanticsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
