import random

import pytest
from hypothesis import given, strategies as st

from conftest import program_from_seed
from tsogame.dsl import parse_program
from tsogame.fair import solve_process_fair_safety
from tsogame.game import build_bounded_arena
from tsogame.loadbuffer import (
    LbConfig, LbMessage, _env_moves, build_lb_arena, fig6_program, lb_enabled, lb_env_closure,
    lb_initial_config, lb_read_values, lb_step_instruction,
)
from tsogame.program import FENCE_INSTR, WRITE, errors, read, validate_program, write
from tsogame.tso import Move, SemanticsError

P = parse_program("""domain 0 1 2; var x = 0; var y = 0;
process P1 { init q; q -> r : read x 1; q -> r : read x 2; q -> r : fence; q -> r : write x 1; }""")


def one(buf, mem=("0", "0"), state="q"):
    return LbConfig((state,), (tuple(buf),), tuple(mem))


def instrs(c):
    return {str(m.instr) for m in lb_enabled(P, c)}


def test_read_from_foreign_head():
    c = one([LbMessage("x", "2"), LbMessage("x", "1")])
    assert "read x 2" in instrs(c) and "read x 1" not in instrs(c)


def test_own_message_wins_over_head():
    c = one([LbMessage("x", "2"), LbMessage("x", "1", True)])
    assert "read x 1" in instrs(c) and "read x 2" not in instrs(c)


def test_empty_buffer_blocks_reads():
    assert instrs(one([])) == {"fence", "write x 1"}


def test_write_hits_memory_and_records_own_message():
    c = lb_step_instruction(P, one([]), Move("P1", write("x", "1"), "r"))
    assert c == LbConfig(("r",), ((LbMessage("x", "1", True),),), ("1", "0"))


def test_read_leaves_buffers():
    c = one([LbMessage("x", "2")])
    assert lb_step_instruction(P, c, Move("P1", read("x", "2"), "r")).buffers == c.buffers


def test_fence_with_pending_messages_fails():
    with pytest.raises(SemanticsError):
        lb_step_instruction(P, one([LbMessage("y", "0")]), Move("P1", FENCE_INSTR, "r"))


def test_closure_cap_zero():
    c = one([])
    assert lb_env_closure(P, c, 0) == {c}


def test_closure_cap_one():
    p = parse_program("domain 0 1 2; var x = 2; process P1 { init q; }")
    c = lb_initial_config(p)
    assert lb_env_closure(p, c, 1) == {c, c._replace(buffers=((LbMessage("x", "2"),),))}
    full = LbConfig(("q",), ((LbMessage("x", "1", True),),), ("2",))
    assert lb_env_closure(p, full, 1) == {full, c, c._replace(buffers=((LbMessage("x", "2"),),))}


lb_messages = st.builds(LbMessage, st.sampled_from(["x", "y"]), st.sampled_from(["0", "1", "2"]), st.booleans())


@given(st.lists(lb_messages, max_size=3), st.lists(lb_messages, max_size=2), st.integers(1, 3))
def test_closure_matches_step_search(b1, b2, cap):
    p = parse_program("""domain 0 1 2; var x = 1; var y = 2;
process P1 { init q; } process P2 { init q; }""")
    c = LbConfig(("q", "q"), (tuple(b1), tuple(b2)), ("1", "2"))
    seen, todo = {c}, [c]
    while todo:
        d = todo.pop()
        for _, e in _env_moves(p, d, cap):
            if e not in seen:
                seen.add(e)
                todo.append(e)
    closure = lb_env_closure(p, c, cap)
    assert closure == seen
    assert c._replace(buffers=((), ())) in closure


@given(st.lists(lb_messages, max_size=4))
def test_own_message_read_is_singleton(buf):
    for var in ("x", "y"):
        vals = lb_read_values(tuple(buf), var)
        if any(m.own and m.var == var for m in buf):
            assert len(vals) == 1
        assert len(vals) <= 1


# -- Fig. 6 ------------------------------------------------------------------------

def test_fig6_validates():
    assert errors(validate_program(fig6_program())) == []


def test_fig6_store_buffer_cap1():
    assert solve_process_fair_safety(build_bounded_arena(fig6_program(), 1)).winner == "B"


def test_fig6_load_buffer_cap2():
    arena = build_lb_arena(fig6_program(), 2, stepwise=True)
    assert solve_process_fair_safety(arena, method="auto").winner == "A"


@pytest.mark.parametrize("stepwise", [False, True])
def test_fig6_load_buffer_cap1_forms_agree(stepwise):
    arena = build_lb_arena(fig6_program(), 1, stepwise=stepwise)
    assert solve_process_fair_safety(arena).winner == "A"


def test_fig6_literal_environment_starves_reader():
    arena = build_lb_arena(fig6_program(), 1, progress=False, stepwise=True)
    assert solve_process_fair_safety(arena).winner == "B"


def test_fig6_message_order():
    """Once P1 wrote first, P3 never holds <x,2> older than <x,1> (and vice versa)."""
    p = fig6_program()
    arena = build_lb_arena(p, 2, stepwise=True)
    start = (arena.initial, None)
    seen, todo = {start}, [start]
    while todo:
        v, first = todo.pop()
        buf = [m.value for m in arena.nodes[v].base.buffers[2] if m.var == "x"]
        early, late = ("1", "2") if first == "P1" else ("2", "1")
        if first is not None and late in buf:
            assert early not in buf[buf.index(late):]
        for lbl, w in zip(arena.labels[v], arena.succ[v]):
            nf = first
            if first is None and isinstance(lbl, Move) and lbl.instr.kind == WRITE:
                nf = lbl.pid
            if (w, nf) not in seen:
                seen.add((w, nf))
                todo.append((w, nf))


def lb_reachable_states(p, k):
    c0 = lb_initial_config(p)
    seen, todo = {c0}, [c0]
    while todo:
        c = todo.pop()
        nxt = [lb_step_instruction(p, c, m) for m in lb_enabled(p, c)
               if not (m.instr.kind == WRITE and len(c.buffers[p.pid_index(m.pid)]) >= k)]
        nxt += [d for _, d in _env_moves(p, c, k)]
        for d in nxt:
            if d not in seen:
                seen.add(d)
                todo.append(d)
    return {c.states for c in seen}


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_state_reachability_matches_store_buffers(seed, k):
    p = program_from_seed(seed)
    sb = {n.base.states for n in build_bounded_arena(p, k, stepwise=True).nodes}
    assert lb_reachable_states(p, k) == sb


def test_cap_must_be_positive():
    with pytest.raises(ValueError):
        build_lb_arena(fig6_program(), 0)
