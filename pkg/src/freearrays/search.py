"""Encapsulated depth-first search over the machine's choice tree."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields, replace
from typing import Any, Iterator

from .errors import BudgetExceededError, InvariantViolation, PendingDelayedConstraintsError
from .solver import (
    DEFAULT_ENUM_BUDGET,
    DEFAULT_INT_RANGE,
    DEFAULT_MAX_LEN,
    ConsistencyResult,
    ConstraintStore,
    Strategy,
    Trigger,
    solution_check,
)
from .symbolic import ArrayBase, Const, FreeArray, SymExpr, Var
from .vm import ArrRef, Choice, Continue, ExceptionLeaf, Failure, Machine, Program, Solution, VmState

log = logging.getLogger(__name__)


@dataclass
class SearchConfig:
    strategy: Strategy = Strategy.SYMBOLIC
    max_solutions: int | None = None
    max_len: int = DEFAULT_MAX_LEN
    step_budget: int = 10**6
    enum_budget: int = DEFAULT_ENUM_BUDGET
    label_on_solution: bool = True
    int_range: tuple[int, int] = DEFAULT_INT_RANGE
    check: bool = False

    def __post_init__(self):
        if self.step_budget <= 0 or self.enum_budget <= 0:
            raise ValueError("budgets must be positive")
        if self.max_solutions is not None and self.max_solutions <= 0:
            raise ValueError("max_solutions must be positive")


@dataclass
class SolutionRecord:
    kind: str  # "value" | "exception"
    value: Any
    bindings: dict[str, int] = field(default_factory=dict)
    arrays: dict[str, list] = field(default_factory=dict)
    constraints: list[str] = field(default_factory=list)
    symbolic: str = ""
    exception: str | None = None
    checked: bool | None = None

    def key(self) -> tuple:
        """Canonical hashable form used to compare solution multisets."""
        return (self.kind, _freeze(self.value), tuple(sorted(self.bindings.items())),
                tuple(sorted((k, _freeze(v)) for k, v in self.arrays.items())))

    def as_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value, "bindings": self.bindings,
                "arrays": self.arrays, "constraints": self.constraints}


@dataclass
class SearchStats:
    steps: int = 0
    choices: int = 0
    failures: int = 0
    pruned: int = 0
    leaves: int = 0
    unlabelable_leaves: int = 0
    solutions: int = 0

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class SearchEngine:
    """Runs one program under one configuration.

    Iterating :meth:`solutions` drives the search lazily; every store level
    pushed during exploration is popped again even when the consumer stops
    early.
    """

    def __init__(self, program: Program, config: SearchConfig | None = None):
        self.program = program
        self.config = config or SearchConfig()
        self.store = ConstraintStore(self.config.strategy, max_len=self.config.max_len,
                                     int_range=self.config.int_range,
                                     enum_budget=self.config.enum_budget)
        self.machine = Machine(program, self.store)
        self.stats = SearchStats()

    def solutions(self) -> Iterator[SolutionRecord]:
        count = 0
        self.store.push_level()
        try:
            for rec in self._explore(VmState()):
                count += 1
                self.stats.solutions = count
                yield rec
                if self.config.max_solutions is not None and count >= self.config.max_solutions:
                    return
        finally:
            self.store.backtrack_to(0)

    def run(self) -> list[SolutionRecord]:
        return list(self.solutions())

    def all_stats(self) -> dict:
        return {**self.stats.as_dict(), **self.store.stats.as_dict()}

    # -- exploration ----------------------------------------------------------

    def _impose(self, constraints) -> bool:
        for c in constraints:
            if not self.store.add_constraint(c):
                return False
        return True

    def _explore(self, state: VmState) -> Iterator[SolutionRecord]:
        budget = self.config.step_budget
        machine = self.machine
        while True:
            if state.steps >= budget:
                raise BudgetExceededError(f"path exceeded step budget of {budget}")
            self.stats.steps += 1
            out = machine.step(state)
            if isinstance(out, Continue):
                state = out.state
                if out.constraints:
                    if not self._impose(out.constraints):
                        self.stats.pruned += 1
                        return
                    state = replace(state, path=state.path + tuple(str(self.store.simplify(c))
                                                                   for c in out.constraints))
                continue
            if isinstance(out, Choice):
                self.stats.choices += 1
                for constraints, succ in out.alternatives:
                    depth = self.store.depth
                    self.store.push_level()
                    try:
                        if self._impose(constraints):
                            succ = replace(succ, path=succ.path + tuple(str(self.store.simplify(c))
                                                                        for c in constraints))
                            yield from self._explore(succ)
                        else:
                            self.stats.pruned += 1
                    finally:
                        self.store.backtrack_to(depth)
                return
            if isinstance(out, Failure):
                self.stats.failures += 1
                return
            yield from self._leaf(out)
            return

    def _leaf(self, out) -> Iterator[SolutionRecord]:
        self.stats.leaves += 1
        store = self.store
        state = out.state
        if isinstance(out, ExceptionLeaf):
            kind, value, exc = "exception", out.kind, out.kind
        else:
            kind, value, exc = "value", out.value, None
        depth = store.depth
        store.push_level()
        try:
            if store.delayed:
                if not self.config.label_on_solution:
                    raise PendingDelayedConstraintsError(
                        f"{len(store.delayed)} delayed constraint(s) unchecked when leaving the search region: "
                        + ", ".join(str(c) for c in store.delayed))
                if store.check_delayed(Trigger.LABELING) is ConsistencyResult.INCONSISTENT:
                    self.stats.unlabelable_leaves += 1
                    return
            symbolic = _display(store, value)
            if not self.config.label_on_solution:
                yield self._record(kind, value, exc, state, symbolic, labeled=False)
                return
            variables = [store.vars[i] for tag, i, _ in state.decls if tag == "var"]
            arrays = [store.arrays[i] for tag, i, _ in state.decls if tag == "arr"]
            found = False
            for bindings in store.label(variables, arrays):
                found = True
                rec = self._record(kind, value, exc, state, symbolic, labeled=True)
                if self.config.check:
                    rec.checked = solution_check(bindings, store.concrete_arrays(bindings),
                                                 store.all_constraints())
                yield rec
            if not found:
                self.stats.unlabelable_leaves += 1
        finally:
            store.backtrack_to(depth)

    def _record(self, kind, value, exc, state, symbolic, labeled) -> SolutionRecord:
        store = self.store
        bindings = {}
        for tag, i, name in state.decls:
            if tag == "var":
                dom = store.vars[i].domain
                if dom.is_singleton():
                    bindings[name] = dom.min()
        arrays = {}
        for name, v in state.locals.items():
            if isinstance(v, ArrRef):
                contents = self.concrete_contents(store.arrays[v.id], strict=labeled)
                if contents is not None:
                    arrays[name] = contents
        if isinstance(value, ArrRef):
            shown = self.concrete_contents(store.arrays[value.id], strict=labeled)
        elif isinstance(value, SymExpr):
            s = store.simplify(value)
            shown = s.value if isinstance(s, Const) else str(s)
        else:
            shown = value
        return SolutionRecord(kind, shown, bindings, arrays, list(state.path), symbolic, exc)

    def concrete_contents(self, arr: FreeArray, strict: bool = True):
        """Current contents of ``arr`` as nested lists, or ``None`` if not ground."""
        store = self.store
        n = arr.length.domain
        if not n.is_singleton():
            if strict:
                raise InvariantViolation(f"length of {arr.name} not fixed after labeling")
            return None
        out = []
        for k in range(n.min()):
            if not arr.kind.is_int:
                out.append(self.concrete_contents(store.element_at(arr, k), strict))
                continue
            if isinstance(arr.term, ArrayBase):
                ref = store.element_at(arr, k)
                e = store.simplify(Var(ref.id, ref.name))
            else:
                e = store.simplify(store.read(store.simplify_term(arr.term), Const(k)))
            if not isinstance(e, Const):
                if strict:
                    raise InvariantViolation(f"{arr.name}[{k}] not ground after labeling: {e}")
                return None
            out.append(e.value)
        return out


def _display(store, value) -> str:
    if isinstance(value, SymExpr):
        return str(store.simplify(value))
    return str(value)


def _freeze(v):
    if isinstance(v, list):
        return tuple(_freeze(x) for x in v)
    return v


def get_all_solutions(program: Program, config: SearchConfig | None = None) -> list[SolutionRecord]:
    return SearchEngine(program, config).run()


def get_one_solution(program: Program, config: SearchConfig | None = None) -> SolutionRecord | None:
    config = replace(config or SearchConfig(), max_solutions=1)
    for rec in SearchEngine(program, config).solutions():
        return rec
    return None
