"""Seeded random programs and a small hand-written channel-system suite."""
from __future__ import annotations

import random

from .dsl import parse_pcs
from .program import (
    REACH, SAFETY, SKIP_INSTR, FENCE_INSTR, Objective, Process, Program, read, write,
)


def random_program(rng: random.Random, n_procs: int = 2, max_states: int = 5,
                   max_vars: int = 2, max_domain: int = 2, kind=None) -> Program:
    """A small random program; reach targets always have a skip exit and no
    target is an initial state."""
    domain = tuple(str(d) for d in range(rng.randint(1, max_domain)))
    var_names = ["x", "y"][: rng.randint(1, max_vars)]
    variables = tuple((v, rng.choice(domain)) for v in var_names)
    kind = kind or rng.choice([REACH, SAFETY])
    procs, targets = [], set()
    for i in range(n_procs):
        pid = f"P{i + 1}"
        states = [f"q{j}" for j in range(rng.randint(1, max_states))]
        trans = set()
        for _ in range(rng.randint(1, 2 * len(states))):
            src, dst = rng.choice(states), rng.choice(states)
            r = rng.random()
            if r < 0.35:
                instr = write(rng.choice(var_names), rng.choice(domain))
            elif r < 0.75:
                instr = read(rng.choice(var_names), rng.choice(domain))
            elif r < 0.9:
                instr = SKIP_INSTR
            else:
                instr = FENCE_INSTR
            trans.add((src, instr, dst))
        # targets are never initial, so the initial configuration is undecided
        if rng.random() < 0.7 and len(states) > 1:
            t = rng.choice(states[1:])
            targets.add((pid, t))
            if kind == REACH:
                trans.add((t, SKIP_INSTR, t))
        procs.append(Process(pid, tuple(states), states[0], tuple(sorted(trans))))
    return Program(domain, variables, tuple(procs), Objective(kind, frozenset(targets)))


def random_corpus(seed: int, n: int, **kw) -> list[Program]:
    rng = random.Random(seed)
    return [random_program(rng, **kw) for _ in range(n)]


# final state reachable with at most 2 messages in the channel
REACHABLE_PCS = {
    "send-recv": 'pcs { init q0 ""; final qF; q0 -> q1 : send a; q1 -> qF : recv a; }',
    "nop": 'pcs { init q0 ""; final qF; q0 -> qF : nop; }',
    "nop-chain": 'pcs { init q0 ""; final qF; q0 -> q1 : nop; q1 -> qF : nop; }',
    "preloaded": 'pcs { init q0 "a"; final qF; q0 -> qF : recv a; }',
    "preloaded-nop": 'pcs { init q0 "a"; final qF; q0 -> q1 : recv a; q1 -> qF : nop; }',
    "drain-a": 'pcs { messages a b; init q0 "b"; final qF; q0 -> qF : recv b; q0 -> q0 : recv a; }',
}

# final state unreachable at every bound
UNREACHABLE_PCS = {
    "disconnected": 'pcs { states q0 q1 qF; init q0 ""; final qF; q0 -> q1 : send a; }',
    "empty-recv": 'pcs { messages a; init q0 ""; final qF; q0 -> qF : recv a; }',
    "wrong-message": 'pcs { messages a b; init q0 ""; final qF; q0 -> q1 : send a; q1 -> qF : recv b; }',
    "nop-cycle": 'pcs { states q0 q1 qF; init q0 ""; final qF; q0 -> q1 : nop; q1 -> q0 : nop; }',
    "preloaded-wrong": 'pcs { messages a b; init q0 "a"; final qF; q0 -> qF : recv b; }',
    "recv-twice": 'pcs { init q0 "a"; final qF; q0 -> q1 : recv a; q1 -> qF : recv a; }',
}

# Unreachable, but a receive may be attempted while another message is at
# the head.  The update-fair reduction lets the process player consume the
# head through a rotation and then receive the later message, so it wins.
SKIPS_HEAD_PCS = 'pcs { init q0 ""; final qF; q0 -> q1 : send a; q1 -> q2 : send b; q2 -> qF : recv b; }'


def pcs_suite():
    """(name, Pcs, expected reachable) for the hand-written suite."""
    out = [(k, parse_pcs(v), True) for k, v in REACHABLE_PCS.items()]
    out += [(k, parse_pcs(v), False) for k, v in UNREACHABLE_PCS.items()]
    return out
