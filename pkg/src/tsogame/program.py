"""Program syntax: instructions, processes, objectives and static checks.

States, variables and values are plain strings.  Local states are
namespaced by their process, so two processes may both own a state ``q0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

READ, WRITE, SKIP, FENCE = "read", "write", "skip", "fence"

REACH, SAFETY = "reach", "safety"
NO_FAIRNESS, UPDATE_FAIR, PROCESS_FAIR = "none", "update", "process"

BOTTOM = "⊥"


class ProgramError(ValueError):
    """Raised when a program is structurally invalid."""


@dataclass(frozen=True, order=True)
class Instruction:
    kind: str
    var: Optional[str] = None
    value: Optional[str] = None

    def __post_init__(self):
        if self.kind in (READ, WRITE):
            if self.var is None or self.value is None:
                raise ProgramError(f"{self.kind} needs a variable and a value")
        elif self.kind in (SKIP, FENCE):
            if self.var is not None or self.value is not None:
                raise ProgramError(f"{self.kind} takes no operands")
        else:
            raise ProgramError(f"unknown instruction kind {self.kind!r}")

    def __str__(self):
        if self.kind in (READ, WRITE):
            return f"{self.kind} {self.var} {self.value}"
        return self.kind


def read(var: str, value: str) -> Instruction:
    return Instruction(READ, var, value)


def write(var: str, value: str) -> Instruction:
    return Instruction(WRITE, var, value)


SKIP_INSTR = Instruction(SKIP)
FENCE_INSTR = Instruction(FENCE)


@dataclass(frozen=True)
class Process:
    """A finite labelled transition system over instructions."""

    id: str
    states: tuple[str, ...]
    initial: str
    transitions: tuple[tuple[str, Instruction, str], ...]

    def __post_init__(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise ProgramError(f"process {self.id}: duplicate state names")
        if self.initial not in known:
            raise ProgramError(f"process {self.id}: unknown initial state {self.initial!r}")
        for src, _, dst in self.transitions:
            for s in (src, dst):
                if s not in known:
                    raise ProgramError(f"process {self.id}: undeclared state {s!r}")
        # successor table, built once; the dataclass stays frozen
        table: dict[str, list[tuple[Instruction, str]]] = {s: [] for s in self.states}
        for src, instr, dst in self.transitions:
            table[src].append((instr, dst))
        object.__setattr__(
            self, "_succ", {s: tuple(sorted(set(v))) for s, v in table.items()}
        )

    def successors(self, state: str) -> tuple[tuple[Instruction, str], ...]:
        try:
            return self._succ[state]
        except KeyError:
            raise ProgramError(f"process {self.id}: unknown state {state!r}") from None


@dataclass(frozen=True)
class Objective:
    kind: str = REACH
    targets: frozenset = field(default_factory=frozenset)  # of (pid, state)
    fairness: str = NO_FAIRNESS

    def __post_init__(self):
        if self.kind not in (REACH, SAFETY):
            raise ProgramError(f"unknown objective kind {self.kind!r}")
        if self.fairness not in (NO_FAIRNESS, UPDATE_FAIR, PROCESS_FAIR):
            raise ProgramError(f"unknown fairness {self.fairness!r}")
        if self.fairness == UPDATE_FAIR and self.kind != REACH:
            raise ProgramError("update fairness applies to reachability objectives only")
        if self.fairness == PROCESS_FAIR and self.kind != SAFETY:
            raise ProgramError("process fairness applies to safety objectives only")
        object.__setattr__(self, "targets", frozenset(self.targets))


@dataclass(frozen=True)
class Program:
    domain: tuple[str, ...]
    variables: tuple[tuple[str, str], ...]  # (name, initial value), declaration order
    processes: tuple[Process, ...]
    objective: Objective = field(default_factory=Objective)

    def __post_init__(self):
        if not self.domain:
            raise ProgramError("empty data domain")
        if len(set(self.domain)) != len(self.domain):
            raise ProgramError("duplicate values in data domain")
        if not self.processes:
            raise ProgramError("a program needs at least one process")
        names = [v for v, _ in self.variables]
        if len(set(names)) != len(names):
            raise ProgramError("duplicate variable names")
        ids = [p.id for p in self.processes]
        if len(set(ids)) != len(ids):
            raise ProgramError("duplicate process ids")
        values = set(self.domain)
        for var, init in self.variables:
            if init not in values:
                raise ProgramError(f"initial value {init!r} of {var} not in domain")
        for proc in self.processes:
            for _, instr, _ in proc.transitions:
                if instr.var is not None and instr.var not in names:
                    raise ProgramError(f"process {proc.id}: undeclared variable {instr.var!r}")
                if instr.value is not None and instr.value not in values:
                    raise ProgramError(f"process {proc.id}: value {instr.value!r} not in domain")
        by_id = {p.id: p for p in self.processes}
        for pid, state in self.objective.targets:
            if pid not in by_id:
                raise ProgramError(f"objective names unknown process {pid!r}")
            if state not in by_id[pid].states:
                raise ProgramError(f"objective names unknown state {pid}.{state}")
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_pid_index", {pid: i for i, pid in enumerate(ids)})
        object.__setattr__(self, "_var_index", {v: i for i, v in enumerate(names)})

    @property
    def var_names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.variables)

    @property
    def pids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.processes)

    def process(self, pid: str) -> Process:
        try:
            return self._by_id[pid]
        except KeyError:
            raise ProgramError(f"unknown process {pid!r}") from None

    def pid_index(self, pid: str) -> int:
        try:
            return self._pid_index[pid]
        except KeyError:
            raise ProgramError(f"unknown process {pid!r}") from None

    def var_index(self, var: str) -> int:
        try:
            return self._var_index[var]
        except KeyError:
            raise ProgramError(f"unknown variable {var!r}") from None

    def target_states(self, pid: str) -> frozenset:
        return frozenset(s for p, s in self.objective.targets if p == pid)

    def restricted_to(self, pid: str) -> "Program":
        """The single-process program of `pid` with targets intersected."""
        proc = self.process(pid)
        obj = Objective(
            self.objective.kind,
            frozenset((pid, s) for s in self.target_states(pid)),
            NO_FAIRNESS,
        )
        return Program(self.domain, self.variables, (proc,), obj)

    def with_objective(self, objective: Objective) -> "Program":
        return Program(self.domain, self.variables, self.processes, objective)


GlobalState = tuple  # local state per process, in program order


def instruction_successors(proc: Process, state: str) -> set[tuple[Instruction, str]]:
    return set(proc.successors(state))


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str

    def __str__(self):
        return f"{self.severity}: {self.message}"


def _can_block(p: Program, succ) -> bool:
    """Some configuration disables every instruction in `succ` (reads and fences only)."""
    read_vals: dict[str, set] = {}
    for instr, _ in succ:
        if instr.kind == READ:
            read_vals.setdefault(instr.var, set()).add(instr.value)
    # a fence is blocked by any pending message; reads by a value nobody reads
    return all(len(vals) < len(p.domain) for vals in read_vals.values())


def validate_program(p: Program) -> list[Diagnostic]:
    """Static checks beyond the structural ones done at construction time.

    A reachability target passes when it has an outgoing skip or write,
    since those are enabled in every configuration, or when its reads
    cover the whole domain of some variable.  Other targets with only
    read/fence exits get a warning; targets with no exit at all are errors.
    """
    diags: list[Diagnostic] = []
    if p.objective.kind != REACH:
        return diags
    for pid, state in sorted(p.objective.targets):
        succ = p.process(pid).successors(state)
        if not succ:
            diags.append(Diagnostic("error", f"target {pid}.{state} may deadlock (no outgoing transition)"))
        elif not any(i.kind in (SKIP, WRITE) for i, _ in succ) and _can_block(p, succ):
            diags.append(Diagnostic(
                "warning",
                f"target {pid}.{state} may deadlock (only read/fence transitions)",
            ))
    return diags


def errors(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diags if d.severity == "error"]
