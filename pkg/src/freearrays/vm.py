"""Stack machine executing one search region.

:meth:`Machine.step` executes a single instruction and reports what
happened: a successor state, a choice between constrained alternatives, or
a leaf (returned value, thrown exception, failure). The machine never
backtracks itself; that is the search engine's job.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Mapping

from .errors import ForbiddenFreeIndexError, InvalidArgumentError, JavaException, ProgramFormatError
from .solver import ConsistencyResult, ConstraintStore, Strategy, Trigger
from .symbolic import (
    FREE,
    INT,
    Add,
    ArrayBase,
    Const,
    Constraint,
    ElementKind,
    FreeArray,
    Mul,
    Relation,
    Sub,
    SymExpr,
    Var,
)

AIOOBE = "ArrayIndexOutOfBoundsException"
NASE = "NegativeArraySizeException"

MNEMONICS = frozenset({
    "CONST", "LOAD", "STORE", "ADD", "SUB", "MUL", "FREEINT", "NEWARR_FREE",
    "NEWARR_FIXED", "FREEITEM", "ARRINIT", "ALOAD", "ASTORE", "ARRAYLENGTH",
    "IFCMP", "GOTO", "LABEL", "FAIL", "CHECKDELAYED", "RETURN",
})


@dataclass(frozen=True)
class Instr:
    op: str
    args: tuple = ()
    line: int | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return " ".join([self.op, *(str(a) for a in self.args)])


@dataclass
class Program:
    name: str
    instrs: list[Instr]
    labels: dict[str, int]
    local_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        for ins in self.instrs:
            if ins.op in ("GOTO", "IFCMP"):
                target = ins.args[-1]
                if target not in self.labels:
                    raise ProgramFormatError(f"undefined label {target!r}")


@dataclass(frozen=True)
class ArrRef:
    id: int

    def __str__(self):
        return f"&arr{self.id}"


@dataclass(frozen=True)
class VmState:
    """Immutable machine state; alternatives of a choice never share frames.

    ``decls`` lists the free variables and arrays created on this path in
    creation order, ``path`` the branch constraints imposed so far (display
    form). ``trusted`` marks that the bounds check for the instruction at
    ``pc`` has already been settled by an enclosing choice, and ``throw``
    makes the next step raise the named exception.
    """

    pc: int = 0
    stack: tuple = ()
    locals: Mapping[str, Any] = field(default_factory=dict)
    depth: int = 0
    steps: int = 0
    decls: tuple = ()
    path: tuple = ()
    trusted: bool = False
    throw: str | None = None


@dataclass
class Continue:
    state: VmState
    constraints: tuple = ()


@dataclass
class Choice:
    alternatives: list  # of (constraints tuple, VmState)
    origin: str


@dataclass
class Solution:
    value: Any
    state: VmState


@dataclass
class ExceptionLeaf:
    kind: str
    state: VmState


@dataclass
class Failure:
    state: VmState


_REL = {r.value: r for r in Relation}


class Machine:
    def __init__(self, program: Program, store: ConstraintStore, strategy: Strategy | None = None):
        self.program = program
        self.store = store
        self.strategy = strategy or store.strategy

    # -- helpers ------------------------------------------------------------

    def _pop(self, state: VmState, n: int, ins: Instr):
        if len(state.stack) < n:
            raise ProgramFormatError(f"stack underflow at {ins} (line {ins.line})")
        if n == 0:
            return (), state.stack
        return state.stack[-n:], state.stack[:-n]

    def _int(self, v, ins: Instr) -> SymExpr:
        if isinstance(v, SymExpr):
            return self.store.simplify(v)
        raise ProgramFormatError(f"{ins} expects an int operand, got {v!r}")

    def _arr(self, v, ins: Instr) -> FreeArray:
        if isinstance(v, ArrRef):
            return self.store.arrays[v.id]
        raise ProgramFormatError(f"{ins} expects an array operand, got {v!r}")

    def _next(self, state: VmState, stack, **kw) -> VmState:
        return replace(state, pc=state.pc + 1, stack=tuple(stack), trusted=False, **kw)

    def _branch(self, alternatives, origin: str):
        """Drop inconsistent alternatives; collapse a single survivor into ``Continue``."""
        live = [(cons, st) for cons, st in alternatives if self.store.is_consistent(cons)]
        if not live:
            return Failure(alternatives[0][1])
        if len(live) == 1:
            return Continue(live[0][1], live[0][0])
        return Choice(live, origin)

    # -- dispatch -----------------------------------------------------------

    def step(self, state: VmState):
        if state.throw is not None:
            return ExceptionLeaf(state.throw, state)
        instrs = self.program.instrs
        if not 0 <= state.pc < len(instrs):
            raise ProgramFormatError(f"program counter {state.pc} out of range (missing RETURN?)")
        ins = instrs[state.pc]
        state = replace(state, steps=state.steps + 1)
        handler = getattr(self, "_op_" + ins.op.lower(), None)
        if handler is None:
            raise ProgramFormatError(f"unknown instruction {ins.op!r}")
        return handler(state, ins)

    def _op_const(self, state, ins):
        return Continue(self._next(state, state.stack + (Const(ins.args[0]),)))

    def _op_load(self, state, ins):
        name = ins.args[0]
        if name not in state.locals:
            raise ProgramFormatError(f"local {name!r} read before assignment (line {ins.line})")
        return Continue(self._next(state, state.stack + (state.locals[name],)))

    def _op_store(self, state, ins):
        (v,), rest = self._pop(state, 1, ins)
        return Continue(self._next(state, rest, locals={**state.locals, ins.args[0]: v}))

    def _arith(self, state, ins, node):
        (a, b), rest = self._pop(state, 2, ins)
        expr = self.store.simplify(node(self._int(a, ins), self._int(b, ins)))
        return Continue(self._next(state, rest + (expr,)))

    def _op_add(self, state, ins):
        return self._arith(state, ins, Add)

    def _op_sub(self, state, ins):
        return self._arith(state, ins, Sub)

    def _op_mul(self, state, ins):
        return self._arith(state, ins, Mul)

    def _op_freeint(self, state, ins):
        name, *bounds = ins.args
        var = self.store.new_int_var(name, *bounds) if bounds else self.store.new_int_var(name)
        return Continue(self._next(state, state.stack, locals={**state.locals, name: Var(var.id, name)},
                                   decls=state.decls + (("var", var.id, name),)))

    def _op_freeitem(self, state, ins):
        return Continue(self._next(state, state.stack + (FREE,)))

    def _op_newarr_free(self, state, ins):
        max_len, elem_range, kind = _array_opts(ins.args)
        arr = self.store.new_free_array(kind, max_len, elem_range=elem_range)
        return Continue(self._next(state, state.stack + (ArrRef(arr.id),),
                                   decls=state.decls + (("arr", arr.id, arr.name),)))

    def _op_newarr_fixed(self, state, ins):
        free = bool(ins.args) and ins.args[0] == "free"
        _, elem_range, kind = _array_opts(ins.args[1:] if free else ins.args, with_max=False)
        (n,), rest = self._pop(state, 1, ins)
        n = self._int(n, ins)
        store = self.store
        lo, hi = store.bounds(n)
        if isinstance(n, Const) and n.value < 0 or hi < 0:
            return ExceptionLeaf(NASE, state)
        if not state.trusted and not isinstance(n, Const) and (lo < 0 or hi > store.max_len):
            ok = replace(state, trusted=True)
            alts = [((Constraint(Relation.GE, n, Const(0)), Constraint(Relation.LE, n, Const(store.max_len))), ok)]
            if lo < 0:
                alts.append(((Constraint(Relation.LT, n, Const(0)),), replace(state, throw=NASE)))
            return self._branch(alts, "newarray")
        try:
            arr = store.new_fixed_array(n, free, kind, elem_range=elem_range)
        except (JavaException, InvalidArgumentError) as exc:
            if isinstance(exc, JavaException):
                return ExceptionLeaf(exc.kind, state)
            raise ProgramFormatError(str(exc)) from None
        return Continue(self._next(state, rest + (ArrRef(arr.id),),
                                   decls=state.decls + (("arr", arr.id, arr.name),)))

    def _op_arrinit(self, state, ins):
        k = ins.args[0]
        items, rest = self._pop(state, k, ins)
        values = [v if v is FREE else self._int(v, ins) for v in items]
        arr = self.store.array_from_initializer(values)
        return Continue(self._next(state, rest + (ArrRef(arr.id),),
                                   decls=state.decls + (("arr", arr.id, arr.name),)))

    def _op_arraylength(self, state, ins):
        (ref,), rest = self._pop(state, 1, ins)
        arr = self._arr(ref, ins)
        length = arr.length
        value = Const(length.domain.min()) if length.domain.is_singleton() else Var(length.id, length.name)
        return Continue(self._next(state, rest + (value,)))

    # -- array access ---------------------------------------------------------

    def _bounds_check(self, state, arr: FreeArray, index: SymExpr):
        """``None`` when access is in range, else the outcome deciding the bounds."""
        if state.trusted:
            return None
        store = self.store
        lo, hi = store.bounds(index)
        n = arr.length
        nlo, nhi = n.domain.min(), n.domain.max()
        if lo >= 0 and hi <= nlo - 1:
            return None
        if hi < 0 or lo >= nhi:
            return ExceptionLeaf(AIOOBE, state)
        length = Var(n.id, n.name)
        inside = (Constraint(Relation.GE, index, Const(0)),
                  Constraint(Relation.LE, index, store.simplify(Sub(length, Const(1)))))
        alts = [(inside, replace(state, trusted=True)),
                ((Constraint(Relation.GE, index, store.simplify(length)),), replace(state, throw=AIOOBE)),
                ((Constraint(Relation.LT, index, Const(0)),), replace(state, throw=AIOOBE))]
        return self._branch(alts, "bounds")

    def _label_index(self, state, arr: FreeArray, index: SymExpr):
        """Branch over every admissible concrete value of a free index."""
        lo, hi = self.store.bounds(index)
        lo = max(lo, 0)
        hi = min(hi, arr.length.domain.max() - 1)
        trusted = replace(state, trusted=True)
        alts = [((Constraint(Relation.EQ, index, Const(v)),), trusted) for v in range(lo, hi + 1)]
        if not alts:
            return Failure(state)
        return self._branch(alts, "label-index")

    def _symbolic_arrays(self, arr: FreeArray) -> bool:
        return arr.kind.is_int and self.strategy in (Strategy.SYMBOLIC, Strategy.DELAYED)

    def _op_aload(self, state, ins):
        (ref, index), rest = self._pop(state, 2, ins)
        arr = self._arr(ref, ins)
        index = self._int(index, ins)
        decided = self._bounds_check(state, arr, index)
        if decided is not None:
            return decided
        store = self.store
        if not isinstance(index, Const):
            if self.strategy is Strategy.FORBID:
                raise ForbiddenFreeIndexError(f"free index {index} in {ins} (line {ins.line})")
            if not self._symbolic_arrays(arr):
                return self._label_index(state, arr, index)
            value = store.read(store.simplify_term(arr.term), index)
            return Continue(self._next(state, rest + (value,)))
        k = index.value
        if self._symbolic_arrays(arr) and not isinstance(arr.term, ArrayBase):
            value = store.read(store.simplify_term(arr.term), index)
        else:
            elem = store.element_at(arr, k)
            if isinstance(elem, FreeArray):
                value = ArrRef(elem.id)
            else:
                value = store.simplify(Var(elem.id, elem.name))
        return Continue(self._next(state, rest + (value,)))

    def _op_astore(self, state, ins):
        (ref, index, value), rest = self._pop(state, 3, ins)
        arr = self._arr(ref, ins)
        index = self._int(index, ins)
        if arr.kind.is_int:
            value = self._int(value, ins)
        elif not isinstance(value, ArrRef):
            raise ProgramFormatError(f"{ins} stores a non-array into a nested array (line {ins.line})")
        decided = self._bounds_check(state, arr, index)
        if decided is not None:
            return decided
        store = self.store
        if self._symbolic_arrays(arr):
            if self.strategy is Strategy.FORBID and not isinstance(index, Const):
                raise ForbiddenFreeIndexError(f"free index {index} in {ins}")
            store.write_symbolic(arr, index, value)
            return Continue(self._next(state, rest))
        if not isinstance(index, Const):
            if self.strategy is Strategy.FORBID:
                raise ForbiddenFreeIndexError(f"free index {index} in {ins} (line {ins.line})")
            return self._label_index(state, arr, index)
        k = index.value
        if isinstance(value, ArrRef):
            store.write_element(arr, k, store.arrays[value.id])
        else:
            store.write_element(arr, k, store.value_var(value, f"{arr.name}[{k}]'"))
        return Continue(self._next(state, rest))

    # -- control --------------------------------------------------------------

    def _op_ifcmp(self, state, ins):
        rel, target = _REL[ins.args[0]], ins.args[1]
        (a, b), rest = self._pop(state, 2, ins)
        lhs, rhs = self._int(a, ins), self._int(b, ins)
        jump = replace(state, pc=self.program.labels[target], stack=rest, trusted=False)
        fall = self._next(state, rest)
        if isinstance(lhs, Const) and isinstance(rhs, Const):
            return Continue(jump if rel.holds(lhs.value, rhs.value) else fall)
        c = Constraint(rel, lhs, rhs)
        return self._branch([((c,), jump), ((c.complement(),), fall)], "ifcmp")

    def _op_goto(self, state, ins):
        return Continue(replace(state, pc=self.program.labels[ins.args[0]], trusted=False))

    def _op_label(self, state, ins):
        return Continue(self._next(state, state.stack))

    def _op_fail(self, state, ins):
        return Failure(state)

    def _op_checkdelayed(self, state, ins):
        if self.strategy is Strategy.DELAYED:
            if self.store.check_delayed(Trigger.EXPLICIT_DEMAND) is ConsistencyResult.INCONSISTENT:
                return Failure(state)
        return Continue(self._next(state, state.stack))

    def _op_return(self, state, ins):
        (v,), rest = self._pop(state, 1, ins)
        if isinstance(v, SymExpr):
            v = self.store.simplify(v)
        elif not isinstance(v, ArrRef):
            raise ProgramFormatError(f"cannot return {v!r}")
        return Solution(v, replace(state, stack=rest))


def _array_opts(args, with_max=True):
    """Split optional ``[maxlen] [lo hi] [kind]`` operands."""
    args = list(args)
    kind = INT
    if args and isinstance(args[-1], str):
        kind = ElementKind.parse(args.pop())
    max_len = None
    if with_max and len(args) in (1, 3):
        max_len = args.pop(0)
    elem_range = None
    if len(args) == 2:
        elem_range = (args[0], args[1])
    elif args:
        raise ProgramFormatError(f"bad array operands {args!r}")
    return max_len, elem_range, kind
