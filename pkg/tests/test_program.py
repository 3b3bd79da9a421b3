import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import program_from_seed
from tsogame.dsl import DslError, format_program, parse_program
from tsogame.pcs import P2, Pcs, SINK, gen_update_fair_program
from tsogame.program import (
    FENCE_INSTR, PROCESS_FAIR, REACH, SAFETY, SKIP_INSTR, UPDATE_FAIR,
    Objective, Process, Program, ProgramError, errors, instruction_successors, read,
    validate_program, write,
)
from tsogame.tso import TsoConfig, enabled_moves


def one_proc(trans, targets=(), kind=REACH, states=("q0", "q1")):
    proc = Process("P1", states, "q0", tuple(trans))
    return Program(("0", "1"), (("x", "0"),), (proc,),
                   Objective(kind, frozenset(("P1", t) for t in targets)))


def test_parse_minimal_program():
    p = parse_program("domain 0 1; var x = 0;\nprocess P1 { init q0; q0 -> q1 : write x 1 }")
    assert len(p.processes) == 1
    assert set(p.processes[0].states) == {"q0", "q1"}
    assert p.processes[0].transitions == (("q0", write("x", "1"), "q1"),)


def test_parse_fig6(fig6_text):
    p = parse_program(fig6_text)
    assert p.pids == ("P1", "P2", "P3")
    assert p.domain == ("0", "1", "2")
    assert p.variables == (("x", "0"),)
    assert p.objective == Objective(SAFETY, frozenset({("P3", "sF")}), PROCESS_FAIR)


def test_undeclared_state_is_named():
    text = "domain 0 1; var x = 0; process P1 { states q0; init q0; q0 -> q9 : skip; }"
    with pytest.raises(DslError, match="q9"):
        parse_program(text)


def test_parse_errors_carry_position():
    with pytest.raises(DslError) as exc:
        parse_program("domain 0 1;\nvar x = 5;\nprocess P1 { init q0; }")
    assert exc.value.line == 2


@pytest.mark.parametrize("text", [
    "",
    "domain ; var x = 0; process P1 { init q0; }",
    "domain 0; process P1 { init q0; }",
    "domain 0; var x = 0; process P1 { init q0; q0 -> q0 : read y 0; }",
    "domain 0; var x = 0; process P1 { init q0; q0 -> q0 : write x 7; }",
    "domain 0; var x = 0; process P1 { init q0; } reach P2.q0;",
    "domain 0; var x = 0; process P1 { init q0; } avoid P1.q0; fairness update;",
    "domain 0; var x = 0; process P1 { init q0; } process P1 { init q0; }",
    "domain 0; var x = 0; process P1 { init q0; q0 -> q0 : jump; }",
])
def test_malformed_inputs_rejected(text):
    with pytest.raises(DslError):
        parse_program(text)


def test_program_constructor_checks():
    proc = Process("P1", ("q0",), "q0", ())
    with pytest.raises(ProgramError):
        Program((), (("x", "0"),), (proc,))
    with pytest.raises(ProgramError):
        Program(("0",), (("x", "1"),), (proc,))
    with pytest.raises(ProgramError):
        Process("P1", ("q0",), "q1", ())
    with pytest.raises(ProgramError):
        Objective(SAFETY, frozenset(), UPDATE_FAIR)
    with pytest.raises(ProgramError):
        Objective(REACH, frozenset(), PROCESS_FAIR)


def test_target_with_skip_loop_is_clean():
    p = one_proc([("q0", write("x", "1"), "q1"), ("q1", SKIP_INSTR, "q1")], ["q1"])
    assert validate_program(p) == []


def test_target_without_exit_may_deadlock():
    p = one_proc([("q0", write("x", "1"), "q1")], ["q1"])
    diags = validate_program(p)
    assert len(errors(diags)) == 1
    assert "may deadlock" in str(diags[0])


def test_safety_sinks_are_fine():
    p = one_proc([("q0", write("x", "1"), "q1")], ["q1"], kind=SAFETY)
    assert validate_program(p) == []


def test_read_only_target_is_a_warning():
    p = one_proc([("q0", SKIP_INSTR, "q1"), ("q1", read("x", "1"), "q1")], ["q1"])
    diags = validate_program(p)
    assert [d.severity for d in diags] == ["warning"]
    # reading every value of x can never block
    p = one_proc([("q0", SKIP_INSTR, "q1"), ("q1", read("x", "1"), "q1"),
                  ("q1", read("x", "0"), "q0")], ["q1"])
    assert validate_program(p) == []


def test_fig4_p2_successors():
    s = Pcs(("q0", "qF"), ("a",), (("q0", ("send", "a"), "qF"),), "q0", (), "qF")
    p2 = gen_update_fair_program(s).process(P2)
    assert instruction_successors(p2, "$s4") == {(FENCE_INSTR, "$s5")}
    assert instruction_successors(p2, "$s5") == {(read("y", "0"), "$s6"), (read("y", "1"), SINK)}


def test_state_without_exit_has_no_successors():
    p = one_proc([("q0", SKIP_INSTR, "q1")])
    assert instruction_successors(p.processes[0], "q1") == set()


def _all_configs(p, pid, state, max_buf=1):
    """Every configuration of `p` with `pid` at `state` and short buffers."""
    i = p.pid_index(pid)
    msgs = [(x, d) for x in p.var_names for d in p.domain]
    bufs = [()] + [(m,) for m in msgs] if max_buf else [()]
    for mem in itertools.product(p.domain, repeat=len(p.var_names)):
        for buf in bufs:
            states = tuple(state if j == i else q.initial for j, q in enumerate(p.processes))
            buffers = tuple(buf if j == i else () for j in range(len(p.processes)))
            yield TsoConfig(states, buffers, mem)


@given(st.integers(0, 10**6))
def test_validate_is_sound_and_complete(seed):
    p = program_from_seed(seed, kind=REACH)
    flagged = {d.message.split()[1] for d in validate_program(p)}
    for pid, state in p.objective.targets:
        stuck = any(not [m for m in enabled_moves(p, c) if m.pid == pid]
                    for c in _all_configs(p, pid, state))
        assert (f"{pid}.{state}" in flagged) == stuck


@given(st.integers(0, 10**6))
def test_round_trip(seed):
    p = program_from_seed(seed, n_procs=3)
    q = parse_program(format_program(p))
    assert q == p
    assert format_program(q) == format_program(p)
