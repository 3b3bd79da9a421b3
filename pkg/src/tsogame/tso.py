"""Store-buffer TSO semantics.

Buffers are stored oldest-first: index 0 is the head, the next message to
reach memory, and new writes are appended at the end.  (Written the other
way round, newest on the left, this is the usual ``<x,d> . beta`` form.)
"""
from __future__ import annotations

from collections import deque
from typing import NamedTuple

from .program import FENCE, READ, SKIP, WRITE, Instruction, Program, ProgramError


class SemanticsError(ValueError):
    pass


class TsoConfig(NamedTuple):
    states: tuple      # local state per process, program order
    buffers: tuple     # per process: tuple of (var, value), oldest first
    memory: tuple      # value per variable, declaration order


class Move(NamedTuple):
    pid: str
    instr: Instruction
    target: str

    def __str__(self):
        return f"{self.pid}:{self.instr}->{self.target}"


def initial_config(p: Program) -> TsoConfig:
    n = len(p.processes)
    return TsoConfig(
        tuple(proc.initial for proc in p.processes),
        ((),) * n,
        tuple(d for _, d in p.variables),
    )


def check_config(p: Program, c: TsoConfig) -> None:
    n = len(p.processes)
    if len(c.states) != n or len(c.buffers) != n or len(c.memory) != len(p.variables):
        raise SemanticsError("configuration shape does not match program")
    values = set(p.domain)
    for proc, s in zip(p.processes, c.states):
        if s not in proc.states:
            raise SemanticsError(f"{s!r} is not a state of {proc.id}")
    for buf in c.buffers:
        for var, d in buf:
            p.var_index(var)
            if d not in values:
                raise SemanticsError(f"buffered value {d!r} not in domain")
    for d in c.memory:
        if d not in values:
            raise SemanticsError(f"memory value {d!r} not in domain")


def _buffered_value(buf, var):
    for v, d in reversed(buf):
        if v == var:
            return d
    return None


def read_value(p: Program, c: TsoConfig, pid: str, var: str) -> str:
    """Value a read of `var` by `pid` returns: its newest own write, else memory."""
    xi = p.var_index(var)
    d = _buffered_value(c.buffers[p.pid_index(pid)], var)
    return c.memory[xi] if d is None else d


def _enabled(p: Program, c: TsoConfig, i: int, instr: Instruction) -> bool:
    if instr.kind == READ:
        d = _buffered_value(c.buffers[i], instr.var)
        if d is None:
            d = c.memory[p.var_index(instr.var)]
        return d == instr.value
    if instr.kind == FENCE:
        return not c.buffers[i]
    return True


def enabled_moves(p: Program, c: TsoConfig) -> list[Move]:
    """Instruction moves enabled at `c`, in program order."""
    moves = []
    for i, proc in enumerate(p.processes):
        for instr, dst in proc.successors(c.states[i]):
            if _enabled(p, c, i, instr):
                moves.append(Move(proc.id, instr, dst))
    return moves


def step_instruction(p: Program, c: TsoConfig, m: Move) -> TsoConfig:
    i = p.pid_index(m.pid)
    proc = p.processes[i]
    if (m.instr, m.target) not in proc.successors(c.states[i]):
        raise SemanticsError(f"{m} is not a transition of {m.pid} at {c.states[i]}")
    if not _enabled(p, c, i, m.instr):
        raise SemanticsError(f"{m} is not enabled")
    states = c.states[:i] + (m.target,) + c.states[i + 1:]
    buffers = c.buffers
    if m.instr.kind == WRITE:
        buffers = buffers[:i] + (buffers[i] + ((m.instr.var, m.instr.value),),) + buffers[i + 1:]
    return TsoConfig(states, buffers, c.memory)


def update_once(p: Program, c: TsoConfig, pid: str) -> TsoConfig:
    """Flush the oldest message of `pid`'s buffer to memory."""
    i = p.pid_index(pid)
    return _update(p, c, i)


def _update(p: Program, c: TsoConfig, i: int) -> TsoConfig:
    buf = c.buffers[i]
    if not buf:
        raise SemanticsError(f"buffer of {p.processes[i].id} is empty")
    (var, d), rest = buf[0], buf[1:]
    xi = p.var_index(var)
    memory = c.memory[:xi] + (d,) + c.memory[xi + 1:]
    return TsoConfig(c.states, c.buffers[:i] + (rest,) + c.buffers[i + 1:], memory)


def update_closure(p: Program, c: TsoConfig) -> set[TsoConfig]:
    """Every configuration reachable from `c` by zero or more updates."""
    seen = {c}
    queue = deque([c])
    while queue:
        cur = queue.popleft()
        for i, buf in enumerate(cur.buffers):
            if buf:
                nxt = _update(p, cur, i)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return seen


def format_config(p: Program, c: TsoConfig) -> str:
    sigma = ",".join(f"{pid}:{s}" for pid, s in zip(p.pids, c.states))
    beta = "|".join(
        f"{pid}:" + "".join(f"({x},{d})" for x, d in buf) for pid, buf in zip(p.pids, c.buffers)
    )
    mu = ",".join(f"{x}={d}" for x, d in zip(p.var_names, c.memory))
    return f"σ=[{sigma}] β=[{beta}] μ=[{mu}]"


def parse_config(p: Program, text: str) -> TsoConfig:
    """Inverse of :func:`format_config`."""
    import re

    m = re.fullmatch(r"\s*σ=\[(.*?)\]\s*β=\[(.*?)\]\s*μ=\[(.*?)\]\s*", text)
    if not m:
        raise SemanticsError(f"malformed configuration {text!r}")
    states = dict(part.split(":", 1) for part in m.group(1).split(",") if part)
    bufs = {}
    for part in m.group(2).split("|"):
        pid, _, rest = part.partition(":")
        bufs[pid] = tuple(tuple(x.split(",")) for x in re.findall(r"\(([^()]*)\)", rest))
    mem = dict(part.split("=", 1) for part in m.group(3).split(",") if part)
    try:
        c = TsoConfig(
            tuple(states[pid] for pid in p.pids),
            tuple(bufs.get(pid, ()) for pid in p.pids),
            tuple(mem[x] for x in p.var_names),
        )
    except KeyError as exc:
        raise SemanticsError(f"configuration misses {exc}") from None
    check_config(p, c)
    return c


__all__ = [
    "SemanticsError", "TsoConfig", "Move", "initial_config", "check_config",
    "read_value", "enabled_moves", "step_instruction", "update_once",
    "update_closure", "format_config", "parse_config", "ProgramError",
]
