"""Free arrays for constraint-logic search.

Array-typed logic variables with symbolic length and non-deterministic
element access, executed by a small stack machine under encapsulated
depth-first search.
"""
__version__ = "0.1.0"

from .asm import format_program, parse_program
from .domain import IntDomain
from .errors import (
    BudgetExceededError,
    ForbiddenFreeIndexError,
    FreeArrayError,
    ParseError,
    PendingDelayedConstraintsError,
)
from .kernels import BACKEND
from .search import SearchConfig, SearchEngine, SolutionRecord, get_all_solutions, get_one_solution
from .solver import ConsistencyResult, ConstraintStore, Strategy, Trigger, solution_check
from .symbolic import (
    FREE,
    INT,
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
    StoreView,
    Sub,
    Var,
    eval_concrete,
)
