"""Logic variables, free arrays and symbolic expressions.

Expression nodes are frozen dataclasses, so trees are immutable and
hashable. Array contents are modelled as *array terms*: ``ArrayBase`` is
the initial contents of a free array, and ``Store`` is a functional update
on top of another term. ``Select`` reads an element of a term.
"""
from __future__ import annotations

import enum
import operator
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .domain import IntDomain
from .errors import BoundsError, InvalidArgumentError, InvariantViolation, MissingBindingError


@dataclass(frozen=True)
class ElementKind:
    """``ElementKind()`` is ``int``; ``ElementKind(ElementKind())`` is ``int[]``."""

    inner: ElementKind | None = None

    @property
    def is_int(self) -> bool:
        return self.inner is None

    @property
    def depth(self) -> int:
        return 0 if self.inner is None else 1 + self.inner.depth

    @classmethod
    def parse(cls, text: str) -> ElementKind:
        if not text.startswith("int") or (len(text) - 3) % 2 or text[3:] != "[]" * ((len(text) - 3) // 2):
            raise InvalidArgumentError(f"bad element kind {text!r}")
        kind = INT
        for _ in range((len(text) - 3) // 2):
            kind = ElementKind(kind)
        return kind

    def __str__(self) -> str:
        return "int" + "[]" * self.depth


INT = ElementKind()


class IntVar:
    """Integer logic variable. ``domain`` is only reassigned by the owning store."""

    __slots__ = ("id", "name", "domain")

    def __init__(self, id: int, name: str, domain: IntDomain):
        self.id = id
        self.name = name
        self.domain = domain

    def __repr__(self) -> str:
        return f"IntVar({self.name}#{self.id} in {self.domain!r})"


class FreeArray:
    """Internal representation of a (possibly) free array.

    ``initial`` holds lazily materialized initial elements; ``overrides``
    holds destructive writes at concrete indices; ``term`` is the current
    contents as an array term (``ArrayBase`` until a symbolic write happens).
    Element references are ``IntVar`` for int arrays and ``FreeArray`` for
    nested ones.
    """

    __slots__ = ("id", "name", "kind", "length", "max_len", "elem_lo", "elem_hi",
                 "free_elements", "initial", "overrides", "term")

    def __init__(self, id, name, kind, length, max_len, elem_lo, elem_hi, free_elements=True):
        self.id = id
        self.name = name
        self.kind = kind
        self.length = length
        self.max_len = max_len
        self.elem_lo = elem_lo
        self.elem_hi = elem_hi
        self.free_elements = free_elements
        self.initial = {}
        self.overrides = {}
        self.term = ArrayBase(id)

    def __repr__(self) -> str:
        return f"FreeArray({self.name}#{self.id}, {self.kind}, len={self.length.domain!r})"


class _FreeMarker:
    __slots__ = ()

    def __repr__(self) -> str:
        return "FREE"


FREE = _FreeMarker()


# -- expressions -------------------------------------------------------------

class SymExpr:
    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __mul__(self, other):
        return Mul(self, as_expr(other))


@dataclass(frozen=True, slots=True)
class Const(SymExpr):
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True, slots=True)
class Var(SymExpr):
    id: int
    name: str = field(default="", compare=False)

    def __str__(self):
        return self.name or f"v{self.id}"


@dataclass(frozen=True, slots=True)
class Add(SymExpr):
    left: SymExpr
    right: SymExpr

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True, slots=True)
class Sub(SymExpr):
    left: SymExpr
    right: SymExpr

    def __str__(self):
        return f"({self.left} - {self.right})"


@dataclass(frozen=True, slots=True)
class Mul(SymExpr):
    left: SymExpr
    right: SymExpr

    def __str__(self):
        return f"({self.left} * {self.right})"


@dataclass(frozen=True, slots=True)
class ArrayBase:
    array_id: int

    def __str__(self):
        return f"arr{self.array_id}"


@dataclass(frozen=True, slots=True)
class Store:
    array: ArrayTerm
    index: SymExpr
    value: SymExpr

    def __str__(self):
        return f"store({self.array}, {self.index}, {self.value})"


ArrayTerm = Union[ArrayBase, Store]


@dataclass(frozen=True, slots=True)
class Select(SymExpr):
    array: ArrayTerm
    index: SymExpr

    def __str__(self):
        return f"{self.array}[{self.index}]"


def StoreView(array_id: int, store_index: SymExpr, store_value: SymExpr, inner_index: SymExpr) -> Select:
    """Read ``inner_index`` from ``array_id`` after writing ``store_value`` at ``store_index``."""
    return Select(Store(ArrayBase(array_id), store_index, store_value), inner_index)


_ARITH = {Add: operator.add, Sub: operator.sub, Mul: operator.mul}


def as_expr(x) -> SymExpr:
    if isinstance(x, SymExpr):
        return x
    if isinstance(x, IntVar):
        return Var(x.id, x.name)
    if isinstance(x, int):
        return Const(x)
    raise TypeError(f"cannot convert {x!r} to an expression")


# -- constraints -------------------------------------------------------------

class Relation(enum.Enum):
    EQ = "eq"
    NE = "ne"
    LT = "lt"
    LE = "le"
    GT = "gt"
    GE = "ge"

    @property
    def complement(self) -> Relation:
        return _COMPLEMENT[self]

    @property
    def symbol(self) -> str:
        return _SYMBOL[self]

    def holds(self, a: int, b: int) -> bool:
        return _PYOP[self](a, b)


_COMPLEMENT = {
    Relation.EQ: Relation.NE, Relation.NE: Relation.EQ,
    Relation.LT: Relation.GE, Relation.GE: Relation.LT,
    Relation.LE: Relation.GT, Relation.GT: Relation.LE,
}
_SYMBOL = {Relation.EQ: "==", Relation.NE: "!=", Relation.LT: "<",
           Relation.LE: "<=", Relation.GT: ">", Relation.GE: ">="}
_PYOP = {Relation.EQ: operator.eq, Relation.NE: operator.ne, Relation.LT: operator.lt,
         Relation.LE: operator.le, Relation.GT: operator.gt, Relation.GE: operator.ge}


@dataclass(frozen=True, slots=True)
class Constraint:
    relation: Relation
    lhs: SymExpr
    rhs: SymExpr
    delayed: bool = False

    def complement(self) -> Constraint:
        return Constraint(self.relation.complement, self.lhs, self.rhs, self.delayed)

    def __str__(self):
        return f"{self.lhs} {self.relation.symbol} {self.rhs}"


# -- traversal helpers -------------------------------------------------------

def walk(node):
    """Yield every expression and array-term node below ``node`` (inclusive)."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, (Add, Sub, Mul)):
            stack.append(n.right)
            stack.append(n.left)
        elif isinstance(n, Select):
            stack.append(n.index)
            stack.append(n.array)
        elif isinstance(n, Store):
            stack.append(n.value)
            stack.append(n.index)
            stack.append(n.array)
        elif isinstance(n, Constraint):
            stack.append(n.rhs)
            stack.append(n.lhs)


def var_ids(node) -> set[int]:
    return {n.id for n in walk(node) if isinstance(n, Var)}


def array_ids(node) -> set[int]:
    return {n.array_id for n in walk(node) if isinstance(n, ArrayBase)}


def index_var_ids(node) -> set[int]:
    """Variables occurring in the index position of any ``Select``/``Store``."""
    out = set()
    for n in walk(node):
        if isinstance(n, (Select, Store)):
            out |= var_ids(n.index)
    return out


def has_free_index(node) -> bool:
    """True when some array access still has a non-constant index."""
    for n in walk(node):
        if isinstance(n, (Select, Store)) and not isinstance(n.index, Const):
            return True
    return False


def has_select(node) -> bool:
    return any(isinstance(n, Select) for n in walk(node))


# -- concrete evaluation -----------------------------------------------------

def eval_concrete(e, bindings: Mapping[int, int], arrays: Mapping[int, Sequence[int]]) -> int:
    """Evaluate ``e`` under concrete variable bindings and array contents.

    ``arrays`` maps an array id to its *initial* contents; ``Store`` layers
    are applied functionally on top.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return bindings[e.id]
        except KeyError:
            raise MissingBindingError(f"no binding for variable {e}") from None
    op = _ARITH.get(type(e))
    if op is not None:
        return op(eval_concrete(e.left, bindings, arrays), eval_concrete(e.right, bindings, arrays))
    if isinstance(e, Select):
        return _read(e.array, eval_concrete(e.index, bindings, arrays), bindings, arrays)
    if isinstance(e, Constraint):
        return int(e.relation.holds(eval_concrete(e.lhs, bindings, arrays),
                                    eval_concrete(e.rhs, bindings, arrays)))
    raise InvariantViolation(f"cannot evaluate {e!r}")


def _read(term, k, bindings, arrays):
    while isinstance(term, Store):
        if eval_concrete(term.index, bindings, arrays) == k:
            return eval_concrete(term.value, bindings, arrays)
        term = term.array
    try:
        contents = arrays[term.array_id]
    except KeyError:
        raise MissingBindingError(f"no contents for array {term}") from None
    if not 0 <= k < len(contents):
        raise BoundsError(f"index {k} out of bounds for length {len(contents)}")
    return contents[k]


def eval_array(term, bindings, arrays) -> list[int]:
    """Concrete contents of an array term."""
    base = term
    writes = []
    while isinstance(base, Store):
        writes.append(base)
        base = base.array
    out = list(arrays[base.array_id])
    for w in reversed(writes):
        k = eval_concrete(w.index, bindings, arrays)
        if not 0 <= k < len(out):
            raise BoundsError(f"store index {k} out of bounds for length {len(out)}")
        out[k] = eval_concrete(w.value, bindings, arrays)
    return out
