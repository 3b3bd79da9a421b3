"""Load-buffer semantics and its game arena.

Writes hit memory at once and leave an own-message in the writer's buffer.
The environment (the update player) speculates on future reads by
propagating the current memory value of a variable into a buffer, and
deletes buffer heads.  A read is justified by the newest own-message on
the variable, or, when there is none, by a matching non-own message at the
head of the buffer.
"""
from __future__ import annotations

from itertools import product
from typing import NamedTuple

from .game import CAP, STOP, Arena, GameConfig
from .graph import A, B
from .program import (
    FENCE, PROCESS_FAIR, READ, SAFETY, SKIP_INSTR, WRITE, Objective, Process, Program, read, write,
)
from .tso import Move, SemanticsError

ENV = "env*"


class LbMessage(NamedTuple):
    var: str
    value: str
    own: bool = False

    def __str__(self):
        return f"<{self.var},{self.value}{',own' if self.own else ''}>"


class LbConfig(NamedTuple):
    states: tuple
    buffers: tuple      # per process: tuple of LbMessage, oldest first
    memory: tuple


def lb_initial_config(p: Program) -> LbConfig:
    n = len(p.processes)
    return LbConfig(tuple(q.initial for q in p.processes), ((),) * n, tuple(d for _, d in p.variables))


def lb_read_values(buf, var) -> set:
    """Values a process with buffer `buf` may read from `var`."""
    for m in reversed(buf):
        if m.own and m.var == var:
            return {m.value}
    if buf and not buf[0].own and buf[0].var == var:
        return {buf[0].value}
    return set()


def _lb_ok(buf, instr) -> bool:
    if instr.kind == READ:
        return instr.value in lb_read_values(buf, instr.var)
    if instr.kind == FENCE:
        return not buf
    return True


def lb_enabled(p: Program, c: LbConfig) -> list[Move]:
    out = []
    for i, proc in enumerate(p.processes):
        for instr, dst in proc.successors(c.states[i]):
            if _lb_ok(c.buffers[i], instr):
                out.append(Move(proc.id, instr, dst))
    return out


def lb_step_instruction(p: Program, c: LbConfig, m: Move) -> LbConfig:
    i = p.pid_index(m.pid)
    if (m.instr, m.target) not in p.processes[i].successors(c.states[i]):
        raise SemanticsError(f"{m} is not a transition")
    if not _lb_ok(c.buffers[i], m.instr):
        raise SemanticsError(f"{m} is not enabled")
    states = c.states[:i] + (m.target,) + c.states[i + 1:]
    if m.instr.kind != WRITE:
        return LbConfig(states, c.buffers, c.memory)
    xi = p.var_index(m.instr.var)
    memory = c.memory[:xi] + (m.instr.value,) + c.memory[xi + 1:]
    buf = c.buffers[i] + (LbMessage(m.instr.var, m.instr.value, True),)
    return LbConfig(states, c.buffers[:i] + (buf,) + c.buffers[i + 1:], memory)


def _env_moves(p: Program, c: LbConfig, cap):
    """Single propagate/delete steps as (label, successor) pairs."""
    for i, buf in enumerate(c.buffers):
        pid = p.pids[i]
        if buf:
            yield f"del({pid})", LbConfig(c.states, c.buffers[:i] + (buf[1:],) + c.buffers[i + 1:], c.memory)
        if cap is None or len(buf) < cap:
            for xi, (x, _) in enumerate(p.variables):
                nb = buf + (LbMessage(x, c.memory[xi]),)
                yield f"prop({pid},{x})", LbConfig(c.states, c.buffers[:i] + (nb,) + c.buffers[i + 1:], c.memory)


def _buffer_closure(p: Program, buf: tuple, memory: tuple, cap: int) -> list:
    """Buffers one process can end up with: a suffix of `buf`, then propagated messages."""
    fresh = [LbMessage(x, memory[xi]) for xi, (x, _) in enumerate(p.variables)]
    out = set()
    for k in range(len(buf) + 1):
        layer = [buf[k:]]
        while layer:
            out.update(layer)
            layer = [b + (m,) for b in layer if len(b) < cap for m in fresh]
    return sorted(out)


def lb_env_closure(p: Program, c: LbConfig, cap: int) -> set[LbConfig]:
    """Everything reachable by propagate/delete sequences, `c` included.

    Buffers evolve independently and memory is fixed during the
    environment's turn, so the closure is a product of per-process sets.
    """
    if cap is None or cap < 0:
        raise ValueError("the environment closure needs a cap >= 0")
    per = [_buffer_closure(p, buf, c.memory, cap) for buf in c.buffers]
    return {LbConfig(c.states, bufs, c.memory) for bufs in product(*per)}


def _can_go_live(p: Program, c: LbConfig, cap: int) -> bool:
    """Some configuration in the closure of `c` enables an instruction."""
    for i, proc in enumerate(p.processes):
        succ = proc.successors(c.states[i])
        if not succ:
            continue
        for buf in _buffer_closure(p, c.buffers[i], c.memory, cap):
            if any(_lb_ok(buf, instr) for instr, _ in succ):
                return True
    return False


def build_lb_arena(p: Program, cap: int, progress: bool = True, stepwise: bool = False) -> Arena:
    """Alternating arena: A executes an instruction, B plays any env* sequence.

    With ``progress`` the update player must hand back a configuration in
    which some instruction is enabled whenever one exists in her closure;
    without it she could win safety games by starving every reader.
    ``stepwise`` unfolds B's turn into single propagate/delete steps ended
    by ``stop``; intermediate nodes carry whether B still owes a live
    configuration.  Both forms give the same winners.
    """
    if cap is None or cap < 1:
        raise ValueError("load-buffer arenas need a cap >= 1")
    arena = Arena(p, cap, "lb", stepwise)
    arena.initial = arena.add_node(GameConfig(lb_initial_config(p), "A"), A)
    todo = [arena.initial]

    def node(cfg, owner, **kw):
        before = len(arena)
        v = arena.add_node(cfg, owner, **kw)
        if v == before:
            todo.append(v)
        return v

    while todo:
        v = todo.pop()
        cfg = arena.nodes[v]
        base = cfg.base
        if cfg.turn == "A":
            kept, cut = [], 0
            for m in lb_enabled(p, base):
                if m.instr.kind == WRITE and len(base.buffers[p.pid_index(m.pid)]) + 1 > cap:
                    cut += 1
                    continue
                kept.append(m)
            arena.enabled[v] = frozenset(m.pid for m in kept)
            for m in kept:
                w = node(GameConfig(lb_step_instruction(p, base, m), "B", m.pid), B, mover=m.pid)
                arena.add_edge(v, m, w)
            if cut:
                arena.truncated = True
                arena.truncated_nodes.add(v)
                if not kept:
                    arena.frontier.add(v)
                    arena.add_edge(v, CAP, v)
        elif stepwise:
            owed = cfg.updating if cfg.updating else (
                "live" if progress and _can_go_live(p, base, cap) else "free")
            if owed == "free" or lb_enabled(p, base):
                arena.add_edge(v, STOP, node(GameConfig(base, "A"), A))
            for lbl, nxt in _env_moves(p, base, cap):
                arena.add_edge(v, lbl, node(GameConfig(nxt, "B", None, owed), B))
        else:
            closure = sorted(lb_env_closure(p, base, cap))
            if progress:
                live = [c for c in closure if lb_enabled(p, c)]
                closure = live or closure
            for nxt in closure:
                arena.add_edge(v, ENV, node(GameConfig(nxt, "A"), A))
    return arena


def fig6_program() -> Program:
    """Three processes separating store-buffer and load-buffer games.

    P1 and P2 each write x once.  P3 commits to seeing the values in one
    order and must never observe them in the other.
    """
    p1 = Process("P1", ("s1", "s2"), "s1", (("s1", write("x", "1"), "s2"),))
    p2 = Process("P2", ("s1", "s2"), "s1", (("s1", write("x", "2"), "s2"),))
    p3 = Process("P3", ("s1", "s2", "s3", "s4", "s5", "sF"), "s1", (
        ("s1", SKIP_INSTR, "s2"),
        ("s1", SKIP_INSTR, "s3"),
        ("s2", read("x", "0"), "s2"),
        ("s2", read("x", "2"), "s2"),
        ("s3", read("x", "0"), "s3"),
        ("s3", read("x", "1"), "s3"),
        ("s2", read("x", "1"), "s4"),
        ("s3", read("x", "2"), "s5"),
        ("s4", read("x", "1"), "s4"),
        ("s5", read("x", "2"), "s5"),
        ("s4", read("x", "2"), "sF"),
        ("s5", read("x", "1"), "sF"),
    ))
    obj = Objective(SAFETY, frozenset({("P3", "sF")}), PROCESS_FAIR)
    return Program(("0", "1", "2"), (("x", "0"),), (p1, p2, p3), obj)
