"""Reader and pretty-printer for the line-oriented ``.fal`` program format.

One instruction per line; ``;`` starts a comment. Mnemonics are
case-insensitive. ``LABEL name`` marks a jump target.
"""
from __future__ import annotations

import re

from .errors import InvalidArgumentError, ParseError
from .symbolic import ElementKind
from .vm import MNEMONICS, Instr, Program

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.$]*$")
_INT = re.compile(r"[+-]?\d+$")
_KIND = re.compile(r"int(\[\])*$")
_RELATIONS = ("eq", "ne", "lt", "le", "gt", "ge")

_NO_ARGS = {"ADD", "SUB", "MUL", "FREEITEM", "ALOAD", "ASTORE", "ARRAYLENGTH", "FAIL", "CHECKDELAYED", "RETURN"}


def _int(tok, line, col):
    if not _INT.match(tok):
        raise ParseError(f"expected integer, got {tok!r}", line, col)
    return int(tok)


def _name(tok, line, col):
    if not _NAME.match(tok):
        raise ParseError(f"bad name {tok!r}", line, col)
    return tok


def _parse_args(op, toks, line, cols):
    n = len(toks)

    def arity(*allowed):
        if n not in allowed:
            want = " or ".join(str(a) for a in allowed)
            raise ParseError(f"{op} takes {want} operand(s), got {n}", line, cols[0] if cols else None)

    if op in _NO_ARGS:
        arity(0)
        return ()
    if op in ("CONST", "ARRINIT"):
        arity(1)
        v = _int(toks[0], line, cols[0])
        if op == "ARRINIT" and v < 0:
            raise ParseError("ARRINIT count must be non-negative", line, cols[0])
        return (v,)
    if op in ("LOAD", "STORE", "GOTO", "LABEL"):
        arity(1)
        return (_name(toks[0], line, cols[0]),)
    if op == "FREEINT":
        arity(1, 3)
        name = _name(toks[0], line, cols[0])
        if n == 1:
            return (name,)
        lo, hi = _int(toks[1], line, cols[1]), _int(toks[2], line, cols[2])
        if lo > hi:
            raise ParseError(f"empty domain [{lo}, {hi}]", line, cols[1])
        return (name, lo, hi)
    if op == "IFCMP":
        arity(2)
        rel = toks[0].lower()
        if rel not in _RELATIONS:
            raise ParseError(f"unknown comparison {toks[0]!r}", line, cols[0])
        return (rel, _name(toks[1], line, cols[1]))
    if op in ("NEWARR_FREE", "NEWARR_FIXED"):
        args = []
        rest = list(zip(toks, cols))
        if op == "NEWARR_FIXED" and rest and rest[0][0].lower() == "free":
            args.append("free")
            rest.pop(0)
        kind = None
        if rest and _KIND.match(rest[-1][0]):
            kind = rest.pop()[0]
        nums = [_int(t, line, c) for t, c in rest]
        allowed = (0, 1, 2, 3) if op == "NEWARR_FREE" else (0, 2)
        if len(nums) not in allowed:
            raise ParseError(f"{op}: unexpected operands {' '.join(toks)!r}", line, cols[0])
        if op == "NEWARR_FREE" and len(nums) in (1, 3) and nums[0] < 0:
            raise ParseError("negative maximum length", line, cols[0])
        if len(nums) >= 2 and nums[-2] > nums[-1]:
            raise ParseError(f"empty element domain [{nums[-2]}, {nums[-1]}]", line, cols[0])
        if kind is not None:
            try:
                ElementKind.parse(kind)
            except InvalidArgumentError as exc:
                raise ParseError(str(exc), line, cols[-1]) from None
        return tuple(args + nums + ([kind] if kind else []))
    raise ParseError(f"unknown mnemonic {op!r}", line, 1)


def parse_program(text: str, name: str = "program") -> Program:
    instrs: list[Instr] = []
    labels: dict[str, int] = {}
    local_names: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = raw.split(";", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", code)]
        if not toks:
            continue
        (head, col), rest = toks[0], toks[1:]
        op = head.upper()
        if op not in MNEMONICS:
            raise ParseError(f"unknown mnemonic {head!r}", lineno, col)
        args = _parse_args(op, [t for t, _ in rest], lineno, [c for _, c in rest] or [col])
        if op == "LABEL":
            if args[0] in labels:
                raise ParseError(f"duplicate label {args[0]!r}", lineno, rest[0][1])
            labels[args[0]] = len(instrs)
        if op in ("STORE", "FREEINT") and args[0] not in local_names:
            local_names.append(args[0])
        instrs.append(Instr(op, args, lineno))
    for ins in instrs:
        if ins.op in ("GOTO", "IFCMP") and ins.args[-1] not in labels:
            raise ParseError(f"undefined label {ins.args[-1]!r}", ins.line)
    return Program(name, instrs, labels, local_names)


def format_program(program: Program) -> str:
    """Canonical text; ``parse_program(format_program(p))`` reproduces ``p``."""
    lines = []
    for ins in program.instrs:
        text = str(ins)
        lines.append(text if ins.op == "LABEL" else "    " + text)
    return "\n".join(lines) + "\n"
