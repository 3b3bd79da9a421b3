"""Line-oriented text formats for programs and channel systems.

Program grammar (``#`` starts a comment)::

    program ::= "domain" value+ ";" ("var" ident "=" value ";")+ proc+ [obj]
    proc    ::= "process" ident "{" ["states" ident+ ";"] "init" ident ";"
                (ident "->" ident ":" instr ";")* "}"
    instr   ::= "read" ident value | "write" ident value | "skip" | "fence"
    obj     ::= ("reach"|"avoid") (ident "." ident)* ";"
                ["fairness" ("none"|"update"|"process") ";"]

When ``states`` is omitted the states are the initial state plus every
transition endpoint.  The trailing ``;`` before ``}`` is optional.

Channel-system grammar::

    pcs { [messages m+ ;] [states q+ ;] init q "w1 w2 ..." ; final q ;
          (q -> q : (send m | recv m | nop) ;)* }
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .program import (
    NO_FAIRNESS, PROCESS_FAIR, REACH, SAFETY, UPDATE_FAIR,
    Instruction, Objective, Process, Program, ProgramError,
    FENCE_INSTR, SKIP_INSTR, read, write,
)

_TOKEN = re.compile(r'\s+|#[^\n]*|"[^"\n]*"|->|[;{}:.=]|[\w$⊥\']+')
_IDENT = re.compile(r'[\w$⊥\']+\Z')


class DslError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line = line
        self.col = col


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        s = m.group()
        if not (s[0].isspace() or s[0] == "#"):
            toks.append(_Tok(s, line, pos - line_start + 1))
        for i, ch in enumerate(s):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i].text if self.i < len(self.toks) else None

    def here(self):
        if self.i < len(self.toks):
            return self.toks[self.i].line, self.toks[self.i].col
        if self.toks:
            return self.toks[-1].line, self.toks[-1].col + len(self.toks[-1].text)
        return 1, 1

    def fail(self, msg):
        raise DslError(msg, *self.here())

    def next(self):
        if self.i >= len(self.toks):
            self.fail("unexpected end of input")
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        if self.peek() != text:
            self.fail(f"expected {text!r}, found {self.peek()!r}")
        return self.next()

    def ident(self, what="identifier"):
        if self.peek() is None or not _IDENT.match(self.peek()):
            self.fail(f"expected {what}, found {self.peek()!r}")
        return self.next().text

    def accept(self, text):
        if self.peek() == text:
            self.i += 1
            return True
        return False


_FAIRNESS = {"none": NO_FAIRNESS, "update": UPDATE_FAIR, "process": PROCESS_FAIR}


def parse_program(text: str) -> Program:
    ps = _Parser(text)
    ps.expect("domain")
    domain = []
    while ps.peek() != ";":
        domain.append(ps.ident("value"))
    if not domain:
        ps.fail("domain needs at least one value")
    ps.expect(";")
    dom = set(domain)
    if len(dom) != len(domain):
        ps.fail("duplicate values in domain")

    variables = []
    while ps.peek() == "var":
        ps.next()
        line, col = ps.here()
        name = ps.ident("variable name")
        ps.expect("=")
        vline, vcol = ps.here()
        init = ps.ident("value")
        ps.expect(";")
        if init not in dom:
            raise DslError(f"value {init!r} not in domain", vline, vcol)
        if name in (v for v, _ in variables):
            raise DslError(f"variable {name!r} declared twice", line, col)
        variables.append((name, init))
    if not variables:
        ps.fail("expected at least one 'var' declaration")
    var_names = {v for v, _ in variables}

    processes = []
    while ps.peek() == "process":
        processes.append(_parse_process(ps, dom, var_names, {p.id for p in processes}))
    if not processes:
        ps.fail("expected at least one 'process'")

    objective = Objective()
    if ps.peek() in ("reach", "avoid"):
        kind = REACH if ps.next().text == "reach" else SAFETY
        by_id = {p.id: p for p in processes}
        targets = []
        while ps.peek() != ";":
            line, col = ps.here()
            pid = ps.ident("process id")
            ps.expect(".")
            state = ps.ident("state")
            if pid not in by_id:
                raise DslError(f"undeclared process {pid!r}", line, col)
            if state not in by_id[pid].states:
                raise DslError(f"undeclared state {state!r} of process {pid}", line, col)
            targets.append((pid, state))
        ps.expect(";")
        fairness = NO_FAIRNESS
        if ps.accept("fairness"):
            word = ps.ident("fairness mode")
            if word not in _FAIRNESS:
                ps.fail(f"unknown fairness {word!r}")
            fairness = _FAIRNESS[word]
            ps.expect(";")
        try:
            objective = Objective(kind, frozenset(targets), fairness)
        except ProgramError as exc:
            ps.fail(str(exc))
    if ps.peek() is not None:
        ps.fail(f"unexpected {ps.peek()!r}")
    try:
        return Program(tuple(domain), tuple(variables), tuple(processes), objective)
    except ProgramError as exc:
        raise DslError(str(exc)) from None


def _parse_process(ps: _Parser, dom, var_names, seen_ids) -> Process:
    ps.expect("process")
    line, col = ps.here()
    pid = ps.ident("process id")
    if pid in seen_ids:
        raise DslError(f"duplicate process id {pid!r}", line, col)
    ps.expect("{")
    declared = None
    if ps.accept("states"):
        declared = []
        while ps.peek() != ";":
            sline, scol = ps.here()
            s = ps.ident("state")
            if s in declared:
                raise DslError(f"duplicate state {s!r}", sline, scol)
            declared.append(s)
        ps.expect(";")
    ps.expect("init")
    iline, icol = ps.here()
    init = ps.ident("state")
    ps.expect(";")
    order = [init] if declared is None else list(declared)
    if declared is not None and init not in declared:
        raise DslError(f"undeclared state {init!r}", iline, icol)

    def state_ref(name, line, col):
        if declared is not None:
            if name not in declared:
                raise DslError(f"undeclared state {name!r}", line, col)
        elif name not in order:
            order.append(name)

    transitions = []
    while ps.peek() != "}":
        sline, scol = ps.here()
        src = ps.ident("state")
        ps.expect("->")
        dline, dcol = ps.here()
        dst = ps.ident("state")
        ps.expect(":")
        instr = _parse_instr(ps, dom, var_names)
        state_ref(src, sline, scol)
        state_ref(dst, dline, dcol)
        transitions.append((src, instr, dst))
        if not ps.accept(";") and ps.peek() != "}":
            ps.fail(f"expected ';' or '}}', found {ps.peek()!r}")
    ps.expect("}")
    return Process(pid, tuple(order), init, tuple(transitions))


def _parse_instr(ps: _Parser, dom, var_names) -> Instruction:
    line, col = ps.here()
    op = ps.ident("instruction")
    if op == "skip":
        return SKIP_INSTR
    if op == "fence":
        return FENCE_INSTR
    if op not in ("read", "write"):
        raise DslError(f"unknown instruction {op!r}", line, col)
    vline, vcol = ps.here()
    var = ps.ident("variable")
    if var not in var_names:
        raise DslError(f"undeclared variable {var!r}", vline, vcol)
    dline, dcol = ps.here()
    value = ps.ident("value")
    if value not in dom:
        raise DslError(f"value {value!r} not in domain", dline, dcol)
    return read(var, value) if op == "read" else write(var, value)


def format_program(p: Program) -> str:
    out = [f"domain {' '.join(p.domain)};"]
    out += [f"var {v} = {d};" for v, d in p.variables]
    for proc in p.processes:
        out.append(f"process {proc.id} {{")
        out.append(f"  states {' '.join(proc.states)};")
        out.append(f"  init {proc.initial};")
        for src, instr, dst in proc.transitions:
            out.append(f"  {src} -> {dst} : {instr};")
        out.append("}")
    obj = p.objective
    if obj.targets or obj.kind != REACH or obj.fairness != NO_FAIRNESS:
        word = "reach" if obj.kind == REACH else "avoid"
        targets = " ".join(f"{pid}.{s}" for pid, s in sorted(obj.targets))
        out.append(f"{word} {targets};")
        if obj.fairness != NO_FAIRNESS:
            out.append(f"fairness {obj.fairness};")
    return "\n".join(out) + "\n"


def parse_pcs(text: str):
    from .pcs import NOP, RECV, SEND, Pcs, PcsError

    ps = _Parser(text)
    ps.expect("pcs")
    ps.expect("{")
    messages = None
    states = None
    init = init_word = final = None
    transitions = []
    while ps.peek() != "}":
        word = ps.peek()
        if word == "messages":
            ps.next()
            messages = []
            while ps.peek() != ";":
                messages.append(ps.ident("message"))
            ps.next()
        elif word == "states":
            ps.next()
            states = []
            while ps.peek() != ";":
                states.append(ps.ident("state"))
            ps.next()
        elif word == "init":
            ps.next()
            init = ps.ident("state")
            init_word = ()
            if ps.peek() is not None and ps.peek().startswith('"'):
                init_word = tuple(ps.next().text.strip('"').split())
            ps.expect(";")
        elif word == "final":
            ps.next()
            final = ps.ident("state")
            ps.expect(";")
        else:
            src = ps.ident("state")
            ps.expect("->")
            dst = ps.ident("state")
            ps.expect(":")
            line, col = ps.here()
            op = ps.ident("channel operation")
            if op in ("send", "recv"):
                msg = ps.ident("message")
                transitions.append((src, (SEND if op == "send" else RECV, msg), dst))
            elif op == "nop":
                transitions.append((src, (NOP, None), dst))
            else:
                raise DslError(f"unknown channel operation {op!r}", line, col)
            if not ps.accept(";") and ps.peek() != "}":
                ps.fail(f"expected ';', found {ps.peek()!r}")
    ps.expect("}")
    if ps.peek() is not None:
        ps.fail(f"unexpected {ps.peek()!r}")
    if init is None:
        ps.fail("missing 'init'")
    if final is None:
        ps.fail("missing 'final'")
    if states is None:
        states = []
        for s in [init, final] + [x for t in transitions for x in (t[0], t[2])]:
            if s not in states:
                states.append(s)
    if messages is None:
        messages = []
        for m in list(init_word) + [t[1][1] for t in transitions if t[1][1] is not None]:
            if m not in messages:
                messages.append(m)
    try:
        return Pcs(tuple(states), tuple(messages), tuple(transitions), init, tuple(init_word), final)
    except PcsError as exc:
        raise DslError(str(exc)) from None


def format_pcs(s) -> str:
    from .pcs import NOP

    out = ["pcs {"]
    out.append(f"  messages {' '.join(s.messages)};" if s.messages else "  messages ;")
    out.append(f"  states {' '.join(s.states)};")
    out.append(f'  init {s.initial} "{" ".join(s.initial_channel)}";')
    out.append(f"  final {s.final};")
    for src, (op, m), dst in s.transitions:
        out.append(f"  {src} -> {dst} : {op if op == NOP else f'{op} {m}'};")
    out.append("}")
    return "\n".join(out) + "\n"
