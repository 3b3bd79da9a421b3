"""Perfect channel systems and their reductions to TSO games.

A PCS is a finite automaton with one unbounded, lossless FIFO channel.
The generators below turn a PCS into a two-player TSO program whose
process player (update fairness, reachability) or update player (process
fairness, safety) wins exactly when the PCS can reach its final state.
Since the underlying problems are undecidable, the reductions are only
checked at bounded scale against :func:`pcs_reachable_bounded`.

Generated names start with ``$``, which the PCS DSL does not accept, so
they never clash with user names.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .program import (
    BOTTOM, FENCE_INSTR, PROCESS_FAIR, REACH, SAFETY, SKIP_INSTR, UPDATE_FAIR,
    Objective, Process, Program, read, write,
)

SEND, RECV, NOP = "send", "recv", "nop"

XW, XR, Y, Z = "x_w", "x_r", "y", "z"
P1, P2 = "P1", "P2"
SINK = "$sF"


class PcsError(ValueError):
    pass


def _check_name(kind, name):
    if not name or "$" in name or name == BOTTOM:
        raise PcsError(f"{kind} name {name!r} is reserved")


@dataclass(frozen=True)
class Pcs:
    states: tuple
    messages: tuple
    transitions: tuple          # (src, (op, message or None), dst)
    initial: str
    initial_channel: tuple = ()
    final: str = ""

    def __post_init__(self):
        for s in self.states:
            _check_name("state", s)
        for m in self.messages:
            _check_name("message", m)
            if m in ("0", "1"):
                raise PcsError(f"message name {m!r} clashes with a flag value")
        if len(set(self.states)) != len(self.states) or len(set(self.messages)) != len(self.messages):
            raise PcsError("duplicate state or message names")
        known = set(self.states)
        msgs = set(self.messages)
        for s in (self.initial, self.final):
            if s not in known:
                raise PcsError(f"unknown state {s!r}")
        for src, (op, m), dst in self.transitions:
            if src not in known or dst not in known:
                raise PcsError(f"transition {src}->{dst} uses an unknown state")
            if op == NOP:
                if m is not None:
                    raise PcsError("nop carries no message")
            elif op in (SEND, RECV):
                if m not in msgs:
                    raise PcsError(f"unknown message {m!r}")
            else:
                raise PcsError(f"unknown channel operation {op!r}")
        for m in self.initial_channel:
            if m not in msgs:
                raise PcsError(f"unknown message {m!r} in initial channel")


class PcsConfig(NamedTuple):
    state: str
    channel: tuple      # head (oldest) first


def pcs_step(s: Pcs, c: PcsConfig) -> set:
    """All (transition, successor) pairs from `c`."""
    out = set()
    for t in s.transitions:
        src, (op, m), dst = t
        if src != c.state:
            continue
        if op == SEND:
            out.add((t, PcsConfig(dst, c.channel + (m,))))
        elif op == RECV:
            if c.channel and c.channel[0] == m:
                out.add((t, PcsConfig(dst, c.channel[1:])))
        else:
            out.add((t, PcsConfig(dst, c.channel)))
    return out


@dataclass
class PcsReach:
    reachable: bool
    run: list            # configs from the initial one to the final state
    ops: list            # transitions taken along `run`
    explored: int = 0

    def __bool__(self):
        return self.reachable


def pcs_reachable_bounded(s: Pcs, bound: int) -> PcsReach:
    """Breadth-first search over configurations with channel length <= bound."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    start = PcsConfig(s.initial, tuple(s.initial_channel))
    if len(start.channel) > bound:
        return PcsReach(False, [], [], 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        if c.state == s.final:
            run, ops = [c], []
            while parent[c] is not None:
                t, c = parent[c]
                ops.append(t)
                run.append(c)
            return PcsReach(True, run[::-1], ops[::-1], len(parent))
        for t, nxt in sorted(pcs_step(s, c)):
            if len(nxt.channel) <= bound and nxt not in parent:
                parent[nxt] = (t, c)
                queue.append(nxt)
    return PcsReach(False, [], [], len(parent))


# -- reductions -------------------------------------------------------------

def _p2(messages) -> Process:
    s1, s3, s4, s5, s6, s7, s8, s9, s10, s11 = (f"$s{i}" for i in (1, 3, 4, 5, 6, 7, 8, 9, 10, 11))
    states = [s1] + [f"$s_{m}" for m in messages] + [s3, s4, s5, s6, s7, s8, s9, s10, s11, SINK]
    tr = []
    for m in messages:
        tr.append((s1, read(XW, m), f"$s_{m}"))
        tr.append((f"$s_{m}", write(XR, m), s3))
    tr += [
        (s3, write(XW, BOTTOM), s4),
        (s4, FENCE_INSTR, s5),
        (s5, read(Y, "0"), s6),
        (s6, read(Y, "1"), s7),
        (s7, write(Y, "0"), s8),
        (s8, FENCE_INSTR, s9),
        (s9, read(XW, BOTTOM), s10),
        (s10, write(XR, BOTTOM), s11),
        (s11, FENCE_INSTR, s1),
        # protocol violations let the process player escape
        (s5, read(Y, "1"), SINK),
        (s6, read(Y, "0"), SINK),
    ]
    tr += [(s9, read(XW, m), SINK) for m in messages]
    tr.append((SINK, SKIP_INSTR, SINK))
    return Process(P2, tuple(states), s1, tuple(tr))


def _p1(s: Pcs, guard: bool):
    """Main process; with `guard` every gadget starts with Read(z, delta).

    Returns (states, initial state, transitions, receive-gadget states per
    message).
    """
    states = []
    tr = []
    recv_mid = {m: set() for m in s.messages}

    def st(name):
        if name not in states:
            states.append(name)
        return name

    # preamble for a non-empty initial channel
    first = s.initial
    if s.initial_channel:
        first = "$pre0"
        for j, m in enumerate(s.initial_channel):
            here = st(f"$pre{j}")
            h = st(f"$pre{j}h")
            nxt = s.initial if j == len(s.initial_channel) - 1 else f"$pre{j + 1}"
            tr.append((here, write(XW, m), h))
            tr.append((h, write(Y, "1"), nxt))
    for q in s.states:
        st(q)
    for k, (src, (op, m), dst) in enumerate(s.transitions):
        at = src
        if guard:
            # every gadget begins with a read of its transition symbol
            if op == NOP:
                tr.append((src, read(Z, _delta(k)), dst))
                continue
            at = st(f"$h{k}_0")
            tr.append((src, read(Z, _delta(k)), at))
        if op == NOP:
            tr.append((src, SKIP_INSTR, dst))
        elif op == SEND:
            h = st(f"$h{k}_1")
            tr.append((at, write(XW, m), h))
            tr.append((h, write(Y, "1"), dst))
        else:
            if guard:
                h1 = at
            else:
                h1 = st(f"$h{k}_1")
                tr.append((at, SKIP_INSTR, h1))
            h2 = st(f"$h{k}_2")
            tr.append((h1, read(XR, m), h2))
            tr.append((h2, read(XR, BOTTOM), dst))
            recv_mid[m] |= {h1, h2}
    # sinks and the final state idle instead of deadlocking
    has_exit = {src for src, _, _ in tr}
    for q in s.states:
        if q not in has_exit or q == s.final:
            tr.append((q, SKIP_INSTR, q))
    return states, first, tr, recv_mid


def _delta(k: int) -> str:
    return f"$t{k}"


def _domain(s: Pcs, deltas=()):
    return (BOTTOM, "0", "1") + tuple(s.messages) + tuple(deltas)


def gen_update_fair_program(s: Pcs) -> Program:
    """Reduction to reachability under update fairness."""
    states, first, tr, _ = _p1(s, guard=False)
    p1 = Process(P1, tuple(states), first, tuple(dict.fromkeys(tr)))
    obj = Objective(REACH, frozenset({(P1, s.final), (P2, SINK)}), UPDATE_FAIR)
    variables = ((XW, BOTTOM), (XR, BOTTOM), (Y, "0"))
    return Program(_domain(s), variables, (p1, _p2(s.messages)), obj)


def gen_process_fair_program(s: Pcs) -> Program:
    """Reduction to safety under process fairness.

    The update player picks the simulated transition by flushing a
    ⟨z, delta⟩ message written by the auxiliary process of delta.
    """
    states, first, tr, recv_mid = _p1(s, guard=True)
    states.append(SINK)
    for q in list(states):
        if q == SINK:
            continue
        for m in s.messages:
            if q not in recv_mid[m]:
                tr.append((q, read(XR, m), SINK))
    tr.append((SINK, SKIP_INSTR, SINK))
    p1 = Process(P1, tuple(states), first, tuple(dict.fromkeys(tr)))
    deltas = [_delta(k) for k in range(len(s.transitions))]
    aux = tuple(Process(f"P{d}", ("$q",), "$q", (("$q", write(Z, d), "$q"),)) for d in deltas)
    obj = Objective(SAFETY, frozenset({(P1, s.final)}), PROCESS_FAIR)
    variables = ((XW, BOTTOM), (XR, BOTTOM), (Y, "0"), (Z, BOTTOM))
    return Program(_domain(s, deltas), variables, (p1, _p2(s.messages)) + aux, obj)
