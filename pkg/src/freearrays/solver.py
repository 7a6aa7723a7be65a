"""Leveled constraint store with bounds propagation and free-index handling.

The store owns every logic variable and array of one search instance. All
mutations go through a trail so that :meth:`ConstraintStore.pop_level`
restores the exact state seen at the matching :meth:`push_level`.

Constraints whose array accesses still have a non-constant index are never
propagated directly. Depending on the :class:`Strategy` they are checked by
enumerating index bindings, queued until their indices become fixed, or
rejected outright.
"""
from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .domain import IntDomain
from .errors import (
    BudgetExceededError,
    ForbiddenFreeIndexError,
    InvalidArgumentError,
    InvalidDomainError,
    InvariantViolation,
    JavaException,
)
from .symbolic import (
    INT,
    FREE,
    Add,
    ArrayBase,
    Const,
    Constraint,
    ElementKind,
    FreeArray,
    IntVar,
    Mul,
    Relation,
    Select,
    Store,
    Sub,
    SymExpr,
    Var,
    as_expr,
    eval_concrete,
    has_free_index,
    has_select,
    var_ids,
    walk,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_LEN = 16
DEFAULT_INT_RANGE = (-10, 10)
DEFAULT_ENUM_BUDGET = 10**6

_INF = math.inf
_MISSING = object()


class Strategy(enum.Enum):
    LABEL = "label"
    SYMBOLIC = "symbolic"
    DELAYED = "delayed"
    FORBID = "forbid"


class ConsistencyResult(enum.Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    DELAYED_ACCEPTED = "delayed-accepted"

    def __bool__(self) -> bool:
        return self is not ConsistencyResult.INCONSISTENT


class Trigger(enum.Enum):
    SINGLETON_DOMAIN = "singleton"
    LABELING = "labeling"
    EXPLICIT_DEMAND = "explicit"


@dataclass
class SolverStats:
    propagations: int = 0
    enum_checks: int = 0
    enum_tuples: int = 0
    delayed_queued: int = 0
    delayed_singleton_checks: int = 0
    delayed_label_checks: int = 0

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class ConstraintStore:
    """Trailed store of variables, arrays and constraints.

    The public surface used by the VM and search engine is ``push_level``,
    ``pop_level``, ``add_constraint``, ``is_consistent`` and ``label``; an
    adapter for an external solver would implement the same five methods.
    """

    def __init__(self, strategy: Strategy = Strategy.SYMBOLIC, *,
                 max_len: int = DEFAULT_MAX_LEN,
                 int_range: tuple[int, int] = DEFAULT_INT_RANGE,
                 enum_budget: int = DEFAULT_ENUM_BUDGET):
        if enum_budget <= 0:
            raise InvalidArgumentError("enumeration budget must be positive")
        self.strategy = strategy
        self.max_len = max_len
        self.int_range = int_range
        self.enum_budget = enum_budget
        self.vars: list[IntVar] = []
        self.arrays: list[FreeArray] = []
        self.constraints: list[Constraint] = []
        self.delayed: tuple[Constraint, ...] = ()
        self.failed = False
        self._changes = 0
        self.stats = SolverStats()
        self._trail: list[tuple] = []
        self._levels: list[int] = []

    # -- levels ----------------------------------------------------------

    @property
    def depth(self) -> int:
        return len(self._levels)

    def push_level(self) -> int:
        self._levels.append(len(self._trail))
        return len(self._levels)

    def pop_level(self) -> None:
        if not self._levels:
            raise InvariantViolation("pop_level on empty level stack")
        mark = self._levels.pop()
        trail = self._trail
        while len(trail) > mark:
            entry = trail.pop()
            tag = entry[0]
            if tag == "dom":
                entry[1].domain = entry[2]
            elif tag == "cons":
                self.constraints.pop()
            elif tag == "delayed":
                self.delayed = entry[1]
            elif tag == "var":
                self.vars.pop()
            elif tag == "arr":
                self.arrays.pop()
            elif tag == "init":
                del entry[1].initial[entry[2]]
            elif tag == "ovr":
                if entry[3] is _MISSING:
                    del entry[1].overrides[entry[2]]
                else:
                    entry[1].overrides[entry[2]] = entry[3]
            elif tag == "term":
                entry[1].term = entry[2]
            elif tag == "failed":
                self.failed = entry[1]
            else:  # pragma: no cover
                raise InvariantViolation(f"unknown trail entry {tag!r}")

    def backtrack_to(self, depth: int) -> None:
        if depth > self.depth or depth < 0:
            raise InvariantViolation(f"cannot backtrack to depth {depth} from {self.depth}")
        while self.depth > depth:
            self.pop_level()

    def _record(self, entry: tuple) -> None:
        if self._levels:
            self._trail.append(entry)

    def snapshot(self) -> tuple:
        """Hashable view of all variable domains and store contents (for tests)."""
        return (
            tuple((v.id, v.domain.intervals) for v in self.vars),
            tuple(self.constraints),
            self.delayed,
            self.failed,
            tuple((a.id, tuple(sorted((k, _ref_id(r)) for k, r in a.initial.items())),
                   tuple(sorted((k, _ref_id(r)) for k, r in a.overrides.items())), a.term)
                  for a in self.arrays),
        )

    # -- variables and arrays -------------------------------------------

    def new_int_var(self, name: str, lo: int | None = None, hi: int | None = None) -> IntVar:
        if lo is None:
            lo, hi = self.int_range
        if lo > hi:
            raise InvalidDomainError(f"invalid domain [{lo}, {hi}] for {name!r}")
        var = IntVar(len(self.vars), name, IntDomain.range(lo, hi))
        self.vars.append(var)
        self._record(("var",))
        return var

    def _register_array(self, name, kind, length, max_len, elem_range, free_elements):
        lo, hi = elem_range if elem_range is not None else self.int_range
        if lo > hi:
            raise InvalidDomainError(f"invalid element domain [{lo}, {hi}]")
        arr = FreeArray(len(self.arrays), name or f"arr{len(self.arrays)}", kind, length,
                        max_len, lo, hi, free_elements)
        self.arrays.append(arr)
        self._record(("arr",))
        return arr

    def new_free_array(self, kind: ElementKind = INT, max_len: int | None = None, *,
                       name: str = "", elem_range: tuple[int, int] | None = None) -> FreeArray:
        max_len = self.max_len if max_len is None else max_len
        if max_len < 0:
            raise InvalidArgumentError(f"negative maximum length {max_len}")
        label = name or f"arr{len(self.arrays)}"
        length = self.new_int_var(f"{label}.length", 0, max_len)
        return self._register_array(label, kind, length, max_len, elem_range, True)

    def new_fixed_array(self, length, free_elements: bool = True, kind: ElementKind = INT, *,
                        name: str = "", elem_range: tuple[int, int] | None = None,
                        max_len: int | None = None) -> FreeArray:
        """Array whose length equals ``length`` (an int, ``Const``, ``Var`` or expression).

        A free length variable is aliased; the caller must already have
        constrained it to ``[0, max_len]``.
        """
        max_len = self.max_len if max_len is None else max_len
        if not free_elements and not kind.is_int:
            raise InvalidArgumentError("nested arrays must have free elements")
        expr = self.simplify(as_expr(length))
        if isinstance(expr, Const):
            if expr.value < 0:
                raise JavaException("NegativeArraySizeException")
            max_len = max(max_len, expr.value)
            label = name or f"arr{len(self.arrays)}"
            lvar = self.new_int_var(f"{label}.length", expr.value, expr.value)
        elif isinstance(expr, Var):
            lvar = self.vars[expr.id]
            self.set_domain(lvar, lvar.domain.clamp(0, max_len))
        else:
            label = name or f"arr{len(self.arrays)}"
            lvar = self.new_int_var(f"{label}.length", 0, max_len)
            self.add_constraint(Constraint(Relation.EQ, Var(lvar.id, lvar.name), expr))
        return self._register_array(name, kind, lvar, max_len, elem_range, free_elements)

    def array_from_initializer(self, items: Sequence, *, name: str = "",
                               elem_range: tuple[int, int] | None = None) -> FreeArray:
        """Int array of fixed length; ``FREE`` items become fresh free elements."""
        label = name or f"arr{len(self.arrays)}"
        lvar = self.new_int_var(f"{label}.length", len(items), len(items))
        arr = self._register_array(label, INT, lvar, max(len(items), self.max_len), elem_range, True)
        for k, item in enumerate(items):
            if item is FREE:
                ref = self.new_int_var(f"{label}[{k}]", arr.elem_lo, arr.elem_hi)
            else:
                ref = self.value_var(item, f"{label}[{k}]")
            arr.initial[k] = ref
            self._record(("init", arr, k))
        return arr

    def value_var(self, value, name: str) -> IntVar:
        """A variable holding ``value``: the variable itself, a singleton, or an aux var."""
        if isinstance(value, IntVar):
            return value
        expr = self.simplify(as_expr(value))
        if isinstance(expr, Var):
            return self.vars[expr.id]
        if isinstance(expr, Const):
            return self.new_int_var(name, expr.value, expr.value)
        lo, hi = self.bounds(expr)
        if lo == -_INF or hi == _INF:
            lo, hi = self.int_range
        aux = self.new_int_var(name, int(lo), int(hi))
        self.add_constraint(Constraint(Relation.EQ, Var(aux.id, aux.name), expr))
        return aux

    def _initial_element(self, arr: FreeArray, k: int):
        ref = arr.initial.get(k)
        if ref is None:
            if not 0 <= k < arr.max_len:
                raise InvariantViolation(f"index {k} outside [0, {arr.max_len}) for {arr.name}")
            label = f"{arr.name}[{k}]"
            if not arr.kind.is_int:
                length = self.new_int_var(f"{label}.length", 0, arr.max_len)
                ref = self._register_array(label, arr.kind.inner, length, arr.max_len,
                                           (arr.elem_lo, arr.elem_hi), True)
            elif arr.free_elements:
                ref = self.new_int_var(label, arr.elem_lo, arr.elem_hi)
            else:
                ref = self.new_int_var(label, 0, 0)
            arr.initial[k] = ref
            self._record(("init", arr, k))
        return ref

    def element_at(self, arr: FreeArray, k: int):
        """Current element reference at concrete index ``k``; materializes on first access."""
        ref = arr.overrides.get(k)
        if ref is not None:
            return ref
        return self._initial_element(arr, k)

    def write_element(self, arr: FreeArray, k: int, ref) -> None:
        """Destructive, trailed write of an element reference at a concrete index."""
        if not 0 <= k < arr.max_len:
            raise InvariantViolation(f"index {k} outside [0, {arr.max_len}) for {arr.name}")
        self._record(("ovr", arr, k, arr.overrides.get(k, _MISSING)))
        arr.overrides[k] = ref

    def write_symbolic(self, arr: FreeArray, index: SymExpr, value: SymExpr) -> None:
        """Functional write: the array's contents become ``Store(term, index, value)``."""
        self._record(("term", arr, arr.term))
        arr.term = Store(arr.term, index, value)

    def set_domain(self, var: IntVar, dom: IntDomain) -> bool:
        if dom != var.domain:
            self._record(("dom", var, var.domain))
            var.domain = dom
            self._changes += 1
        return not dom.is_empty()

    def _fail(self) -> ConsistencyResult:
        if not self.failed:
            self._record(("failed", False))
            self.failed = True
        return ConsistencyResult.INCONSISTENT

    # -- expressions ------------------------------------------------------

    def var(self, e: Var) -> IntVar:
        return self.vars[e.id]

    def simplify(self, e):
        """Substitute fixed variables, fold constants and resolve array reads."""
        if isinstance(e, Const):
            return e
        if isinstance(e, Var):
            dom = self.vars[e.id].domain
            if dom.is_singleton():
                return Const(dom.intervals[0][0])
            return e
        if isinstance(e, (Add, Sub, Mul)):
            left = self.simplify(e.left)
            right = self.simplify(e.right)
            if isinstance(left, Const) and isinstance(right, Const):
                if isinstance(e, Add):
                    return Const(left.value + right.value)
                if isinstance(e, Sub):
                    return Const(left.value - right.value)
                return Const(left.value * right.value)
            if isinstance(e, Mul) and (left == Const(0) or right == Const(0)):
                return Const(0)
            if left is e.left and right is e.right:
                return e
            return type(e)(left, right)
        if isinstance(e, Select):
            return self.read(self.simplify_term(e.array), self.simplify(e.index))
        if isinstance(e, Constraint):
            return Constraint(e.relation, self.simplify(e.lhs), self.simplify(e.rhs), e.delayed)
        raise InvariantViolation(f"cannot simplify {e!r}")

    def simplify_term(self, t):
        if isinstance(t, ArrayBase):
            return t
        inner = self.simplify_term(t.array)
        idx = self.simplify(t.index)
        val = self.simplify(t.value)
        if inner is t.array and idx is t.index and val is t.value:
            return t
        return Store(inner, idx, val)

    def read(self, term, index: SymExpr) -> SymExpr:
        """Read-over-write resolution of ``term[index]`` (both already simplified)."""
        while isinstance(term, Store):
            if term.index == index:
                return term.value
            if self._distinct(term.index, index):
                term = term.array
                continue
            return Select(term, index)
        if isinstance(index, Const):
            arr = self.arrays[term.array_id]
            if arr.kind.is_int and 0 <= index.value < arr.max_len:
                ref = self._initial_element(arr, index.value)
                return self.simplify(Var(ref.id, ref.name))
        return Select(term, index)

    def _distinct(self, x: SymExpr, y: SymExpr) -> bool:
        """True when the store entails ``x != y`` (disjoint domains or a recorded disequality)."""
        if isinstance(x, Const) and isinstance(y, Const):
            return x.value != y.value
        (a, b), (c, d) = self.bounds(x), self.bounds(y)
        if b < c or d < a:
            return True
        if isinstance(x, Var) and isinstance(y, Var):
            if self.vars[x.id].domain.intersect(self.vars[y.id].domain).is_empty():
                return True
        pair = {x, y}
        for con in self.constraints:
            if con.relation in (Relation.NE, Relation.LT, Relation.GT) and not has_select(con) and \
                    {self.simplify(con.lhs), self.simplify(con.rhs)} == pair:
                return True
        return False

    def bounds(self, e) -> tuple:
        if isinstance(e, Const):
            return e.value, e.value
        if isinstance(e, Var):
            dom = self.vars[e.id].domain
            if dom.is_empty():
                return 1, 0
            return dom.intervals[0][0], dom.intervals[-1][1]
        if isinstance(e, Add):
            (a, b), (c, d) = self.bounds(e.left), self.bounds(e.right)
            return a + c, b + d
        if isinstance(e, Sub):
            (a, b), (c, d) = self.bounds(e.left), self.bounds(e.right)
            return a - d, b - c
        if isinstance(e, Mul):
            (a, b), (c, d) = self.bounds(e.left), self.bounds(e.right)
            products = (a * c, a * d, b * c, b * d)
            return min(products), max(products)
        return -_INF, _INF

    # -- propagation -------------------------------------------------------

    def _narrow(self, e, lo, hi) -> bool:
        elo, ehi = self.bounds(e)
        lo = max(lo, elo)
        hi = min(hi, ehi)
        if lo > hi:
            return False
        if isinstance(e, Const):
            return True
        if isinstance(e, Var):
            var = self.vars[e.id]
            return self.set_domain(var, var.domain.clamp(lo, hi))
        if isinstance(e, Add):
            blo, bhi = self.bounds(e.right)
            if not self._narrow(e.left, lo - bhi, hi - blo):
                return False
            alo, ahi = self.bounds(e.left)
            return self._narrow(e.right, lo - ahi, hi - alo)
        if isinstance(e, Sub):
            blo, bhi = self.bounds(e.right)
            if not self._narrow(e.left, lo + blo, hi + bhi):
                return False
            alo, ahi = self.bounds(e.left)
            return self._narrow(e.right, alo - hi, ahi - lo)
        if isinstance(e, Mul):
            rng = _quotient_range(lo, hi, *self.bounds(e.right))
            if rng is None:
                return False
            if not self._narrow(e.left, *rng):
                return False
            rng = _quotient_range(lo, hi, *self.bounds(e.left))
            if rng is None:
                return False
            return self._narrow(e.right, *rng)
        return True

    def _propagate_one(self, c: Constraint) -> bool:
        lhs, rhs = c.lhs, c.rhs
        rel = c.relation
        if isinstance(lhs, Const) and isinstance(rhs, Const):
            return rel.holds(lhs.value, rhs.value)
        if rel is Relation.NE:
            (a, b), (x, y) = self.bounds(lhs), self.bounds(rhs)
            if a == b and x == y:
                return a != x
            if a == b and isinstance(rhs, Var):
                var = self.vars[rhs.id]
                return self.set_domain(var, var.domain.remove(a))
            if x == y and isinstance(lhs, Var):
                var = self.vars[lhs.id]
                return self.set_domain(var, var.domain.remove(x))
            return True
        lo, hi = _DIFF_RANGE[rel]
        return self._narrow(Sub(lhs, rhs), lo, hi)

    def propagate(self) -> ConsistencyResult:
        """Run bounds consistency to a fixpoint over all index-free constraints."""
        if self.failed:
            return ConsistencyResult.INCONSISTENT
        self.stats.propagations += 1
        while True:
            changed = False
            for c in self.constraints:
                s = self.simplify(c)
                if has_select(s):
                    continue
                mark = self._changes
                if not self._propagate_one(s):
                    return self._fail()
                changed |= self._changes != mark
            if self.strategy is Strategy.DELAYED and self.delayed:
                changed |= self._release_delayed()
            if not changed:
                return ConsistencyResult.CONSISTENT

    def _release_delayed(self) -> bool:
        """Move queued constraints whose indices are all fixed into the store."""
        keep = []
        released = []
        for q in self.delayed:
            s = self.simplify(q)
            if has_free_index(s):
                keep.append(s)
            else:
                released.append(Constraint(s.relation, s.lhs, s.rhs, False))
        if not released and tuple(keep) == self.delayed:
            return False
        self._record(("delayed", self.delayed))
        self.delayed = tuple(keep)
        for c in released:
            self.stats.delayed_singleton_checks += 1
            self._append(c)
        return bool(released)

    def _append(self, c: Constraint) -> None:
        self.constraints.append(c)
        self._record(("cons",))

    def add_constraint(self, c: Constraint, strategy: Strategy | None = None) -> ConsistencyResult:
        strategy = strategy or self.strategy
        s = self.simplify(c)
        free = has_free_index(s)
        if free and strategy is Strategy.FORBID:
            raise ForbiddenFreeIndexError(f"constraint {s} uses a free array index")
        if free and strategy is Strategy.DELAYED:
            self._record(("delayed", self.delayed))
            self.delayed = self.delayed + (Constraint(s.relation, s.lhs, s.rhs, True),)
            self.stats.delayed_queued += 1
            if not self.propagate():
                return ConsistencyResult.INCONSISTENT
            return ConsistencyResult.DELAYED_ACCEPTED
        self._append(s)
        if not self.propagate():
            return ConsistencyResult.INCONSISTENT
        if strategy is Strategy.SYMBOLIC and not free and not self._ground_check(s):
            return self._fail()
        if strategy is not Strategy.DELAYED:
            touched = var_ids(s)
            for other in list(self.constraints):
                o = self.simplify(other)
                if has_free_index(o) and (o is s or other is s or var_ids(o) & touched):
                    if not self.enumerate_array_check(o):
                        return self._fail()
        return ConsistencyResult.CONSISTENT

    def is_consistent(self, constraints: Iterable[Constraint] = ()) -> bool:
        """Would adding ``constraints`` keep the store consistent? The store is left unchanged."""
        self.push_level()
        try:
            for c in constraints:
                if not self.add_constraint(c):
                    return False
            return bool(self.propagate())
        finally:
            self.pop_level()

    # -- free-index handling ----------------------------------------------

    def enumerate_array_check(self, c: Constraint) -> bool:
        """Is there a binding of the index variables of ``c`` that satisfies it?

        Iterates over every tuple drawn from the index variables' current
        domains, stopping at the first satisfying one.
        """
        self.stats.enum_checks += 1
        budget = [self.enum_budget]
        self.push_level()
        try:
            return self._exists(c, budget)
        finally:
            self.pop_level()

    def _exists(self, c, budget) -> bool:
        s = self.simplify(c)
        if not has_free_index(s):
            return self._ground_satisfiable(s)
        ids = sorted(_free_index_vars(s))
        doms = [self.vars[i].domain for i in ids]
        total = 1
        for d in doms:
            total *= d.size()
        if total > budget[0]:
            raise BudgetExceededError(
                f"enumerating {total} index tuples for {s} exceeds budget {budget[0]}")
        for values in itertools.product(*doms):
            budget[0] -= 1
            self.stats.enum_tuples += 1
            self.push_level()
            try:
                ok = all(self.set_domain(self.vars[i], IntDomain.singleton(v))
                         for i, v in zip(ids, values))
                if ok and self.propagate() and self._exists(s, budget):
                    return True
            finally:
                self.pop_level()
        return False

    def _ground_satisfiable(self, s: Constraint) -> bool:
        self._append(s)
        if not self.propagate():
            return False
        s = self.simplify(s)
        if has_select(s):
            return False
        names = sorted(i for i in var_ids(s) if not self.vars[i].domain.is_singleton())
        return self._label_exists([self.vars[i] for i in names])

    def _ground_check(self, c: Constraint) -> bool:
        """Exact check of an index-free constraint by labeling its open variables.

        Bounds propagation alone accepts e.g. ``1 == x + x``. Past the
        enumeration budget the constraint is accepted on bounds evidence.
        """
        s = self.simplify(c)
        todo = [self.vars[i] for i in sorted(var_ids(s)) if not self.vars[i].domain.is_singleton()]
        if not todo or has_select(s):
            return True
        self.stats.enum_checks += 1
        self.push_level()
        try:
            return self._label_exists(todo, [self.enum_budget])
        except BudgetExceededError:
            log.debug("ground check of %s over budget; accepted on bounds", s)
            return True
        finally:
            self.pop_level()

    def _label_exists(self, todo: list[IntVar], budget: list | None = None) -> bool:
        todo = [v for v in todo if not v.domain.is_singleton()]
        if not todo:
            return True
        head = todo[0]
        for value in head.domain:
            if budget is not None:
                budget[0] -= 1
                if budget[0] < 0:
                    raise BudgetExceededError("ground satisfiability check exceeds budget")
            self.push_level()
            try:
                if self.set_domain(head, IntDomain.singleton(value)) and self.propagate() \
                        and self._label_exists(todo[1:], budget):
                    return True
            finally:
                self.pop_level()
        return False

    def check_delayed(self, trigger: Trigger = Trigger.EXPLICIT_DEMAND) -> ConsistencyResult:
        if trigger is Trigger.SINGLETON_DOMAIN:
            self._release_delayed()
            return self.propagate()
        if not self.propagate():
            return ConsistencyResult.INCONSISTENT
        pending = self.delayed
        for q in pending:
            self.stats.delayed_label_checks += 1
            if not self.enumerate_array_check(q):
                return self._fail()
        self._record(("delayed", self.delayed))
        self.delayed = ()
        for q in pending:
            self._append(Constraint(q.relation, q.lhs, q.rhs, False))
        return self.propagate()

    # -- labeling -----------------------------------------------------------

    def label(self, variables: Sequence[IntVar] = (), arrays: Sequence[FreeArray] = ()) -> Iterator[dict[int, int]]:
        """Depth-first enumeration of all total bindings consistent with the store.

        Variables are labeled in the given order with ascending values, then
        arrays (length first, then elements ``0..len-1``), then any other
        variable occurring in a constraint. Each yielded map has been checked
        against every constraint, including queued delayed ones. The store is
        positioned at the labeled state while the consumer holds the value.
        """
        if not self.propagate():
            return
        items = list(variables) + list(arrays)
        yield from self._label_items(items, False)

    def _label_items(self, items, tail_done):
        if not items:
            if not tail_done:
                rest = set()
                for c in itertools.chain(self.constraints, self.delayed):
                    rest |= var_ids(self.simplify(c))
                aux = [self.vars[i] for i in sorted(rest) if not self.vars[i].domain.is_singleton()]
                yield from self._label_items(aux, True)
                return
            if self._all_hold():
                yield {v.id: v.domain.intervals[0][0] for v in self.vars if v.domain.is_singleton()}
            return
        head, rest = items[0], items[1:]
        if isinstance(head, FreeArray):
            length = head.length
            for n in list(length.domain):
                self.push_level()
                try:
                    if self.set_domain(length, IntDomain.singleton(n)) and self.propagate():
                        elems = [self._initial_element(head, k) for k in range(n)]
                        yield from self._label_items(elems + rest, tail_done)
                finally:
                    self.pop_level()
            return
        if head.domain.is_singleton():
            yield from self._label_items(rest, tail_done)
            return
        for value in list(head.domain):
            self.push_level()
            try:
                if self.set_domain(head, IntDomain.singleton(value)) and self.propagate():
                    yield from self._label_items(rest, tail_done)
            finally:
                self.pop_level()

    def _all_hold(self) -> bool:
        for c in itertools.chain(self.constraints, self.delayed):
            s = self.simplify(c)
            if not (isinstance(s.lhs, Const) and isinstance(s.rhs, Const)):
                return False
            if not s.relation.holds(s.lhs.value, s.rhs.value):
                return False
        return True

    # -- solution checking ----------------------------------------------------

    def concrete_arrays(self, bindings: Mapping[int, int]) -> dict[int, list[int]]:
        """Initial contents of every int array whose length and elements are bound."""
        out = {}
        for arr in self.arrays:
            if not arr.kind.is_int or arr.length.id not in bindings:
                continue
            n = bindings[arr.length.id]
            refs = [arr.initial.get(k) for k in range(n)]
            if all(r is not None and r.id in bindings for r in refs):
                out[arr.id] = [bindings[r.id] for r in refs]
        return out

    def all_constraints(self) -> list[Constraint]:
        return list(self.constraints) + list(self.delayed)


def solution_check(bindings: Mapping[int, int], arrays: Mapping[int, Sequence[int]],
                   constraints: Iterable[Constraint]) -> bool:
    """True iff every constraint holds under concrete evaluation."""
    try:
        return all(eval_concrete(c, bindings, arrays) for c in constraints)
    except (KeyError, IndexError):
        return False


_DIFF_RANGE = {
    Relation.EQ: (0, 0),
    Relation.LT: (-_INF, -1),
    Relation.LE: (-_INF, 0),
    Relation.GT: (1, _INF),
    Relation.GE: (0, _INF),
}


def _ref_id(ref):
    return ("a", ref.id) if isinstance(ref, FreeArray) else ("v", ref.id)


def _array_nodes(s):
    return (n for n in walk(s) if isinstance(n, (Select, Store)))


def _free_index_vars(s) -> set[int]:
    out = set()
    for n in _array_nodes(s):
        if not isinstance(n.index, Const):
            out |= var_ids(n.index)
    return out


def _div(x, d):
    if x == _INF or x == -_INF:
        return x if d > 0 else -x
    return Fraction(x, d)


def _quotient_range(lo, hi, blo, bhi):
    """Bounds on ``a`` given ``a * b`` in ``[lo, hi]`` and ``b`` in ``[blo, bhi]``.

    Returns ``None`` when no ``a`` can exist.
    """
    if blo > bhi:
        return None
    if blo <= 0 <= bhi and lo <= 0 <= hi:
        return -_INF, _INF
    parts = []
    if blo < 0:
        parts.append((blo, min(bhi, -1)))
    if bhi > 0:
        parts.append((max(blo, 1), bhi))
    if not parts:
        return None
    qs = [_div(x, d) for p, q in parts for d in (p, q) for x in (lo, hi)]
    return min(qs), max(qs)
