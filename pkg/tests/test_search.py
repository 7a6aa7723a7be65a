from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bruteforce
from freearrays import (
    BudgetExceededError, PendingDelayedConstraintsError, SearchConfig, SearchEngine, Strategy,
    get_all_solutions, get_one_solution, parse_program, solution_check,
)
from freearrays.listings import load_corpus, simplesort_source

STRATEGIES = [Strategy.LABEL, Strategy.SYMBOLIC, Strategy.DELAYED]


def keys(recs):
    return Counter(r.key() for r in recs)


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_listing2_values(strategy):
    recs = get_all_solutions(load_corpus("listing2"), SearchConfig(strategy))
    assert sorted(r.value for r in recs) == [0, 2, 4, 6, 8, 10]


def test_constant_program():
    recs = get_all_solutions(parse_program("CONST 1\nRETURN"))
    assert [(r.kind, r.value) for r in recs] == [("value", 1)]


def test_listing4_length_bound():
    engine = SearchEngine(load_corpus("listing4"))
    recs = engine.run()
    assert recs and all(len(r.value) <= 5 for r in recs)
    assert engine.stats.failures == 1


def test_get_one_leftmost():
    expected = min(2 * n for n in range(-100, 101) if 0 <= n <= 5)
    assert get_one_solution(load_corpus("listing2")).value == expected


def test_always_fail_is_none():
    assert get_one_solution(parse_program("FAIL")) is None


def test_sort3_first_solution():
    b = [2, 1, 3]
    import itertools
    oracle = next(list(p) for p in itertools.permutations(b) if list(p) == sorted(p))
    rec = get_one_solution(parse_program(simplesort_source(b)), SearchConfig(max_len=8))
    assert rec.value == oracle


def test_oob_exception():
    recs = get_all_solutions(load_corpus("oob"))
    assert [(r.kind, r.value) for r in recs] == [("exception", "ArrayIndexOutOfBoundsException")]


def test_determinism():
    prog = load_corpus("listing1")
    a = [r.as_dict() for r in get_all_solutions(prog)]
    b = [r.as_dict() for r in get_all_solutions(prog)]
    assert a == b


def test_solutions_pass_solution_check():
    engine = SearchEngine(load_corpus("listing1"), SearchConfig(check=True))
    recs = engine.run()
    assert recs and all(r.checked is True for r in recs)


def test_store_pristine_after_search():
    engine = SearchEngine(load_corpus("bounds"))
    engine.store.push_level()
    before = engine.store.snapshot()
    engine.store.pop_level()
    gen = engine.solutions()
    next(gen)
    gen.close()
    assert engine.store.depth == 0
    engine.store.push_level()
    assert engine.store.snapshot() == before


@pytest.mark.parametrize("name", ["bounds", "listing1", "nested", "sort3"])
def test_sibling_isolation(name):
    """Each backtrack restores the store exactly as it was before the matching push."""
    engine = SearchEngine(load_corpus(name), SearchConfig(max_len=8))
    store = engine.store
    saved = []
    push, pop = store.push_level, store.pop_level

    def spy_push():
        saved.append(store.snapshot())
        return push()

    def spy_pop():
        pop()
        assert store.snapshot() == saved.pop()

    store.push_level, store.pop_level = spy_push, spy_pop
    assert engine.run()
    assert not saved


def test_step_budget():
    prog = parse_program("LABEL top\nGOTO top")
    with pytest.raises(BudgetExceededError):
        get_all_solutions(prog, SearchConfig(step_budget=50))


def test_pending_delayed():
    with pytest.raises(PendingDelayedConstraintsError):
        get_all_solutions(load_corpus("delayed"), SearchConfig(Strategy.DELAYED, label_on_solution=False))


def test_delayed_matches_symbolic():
    prog = load_corpus("delayed")
    assert keys(get_all_solutions(prog, SearchConfig(Strategy.DELAYED))) == \
        keys(get_all_solutions(prog, SearchConfig(Strategy.SYMBOLIC)))


def test_bad_config():
    with pytest.raises(ValueError):
        SearchConfig(step_budget=0)
    with pytest.raises(ValueError):
        SearchConfig(max_solutions=0)


def test_max_solutions():
    recs = get_all_solutions(load_corpus("listing2"), SearchConfig(max_solutions=2))
    assert [r.value for r in recs] == [0, 2]


# -- randomized exhaustiveness against the concrete executor -------------------------

_OPS = ["eq", "ne", "lt", "le", "gt", "ge"]


@st.composite
def small_programs(draw):
    lines = ["CONST 2", "NEWARR_FIXED free 0 2", "STORE a",
             "FREEINT x -1 2", "FREEINT y 0 2"]
    operands = ["LOAD x", "LOAD y", "CONST 1", "a[x]", "a[y]", "a[1]"]

    def push(tok):
        if tok.startswith("a["):
            idx = tok[2]
            return ["LOAD a", "LOAD " + idx if idx.isalpha() else "CONST " + idx, "ALOAD"]
        return [tok]

    for k in range(draw(st.integers(1, 3))):
        kind = draw(st.sampled_from(["cut", "write"]))
        if kind == "write":
            lines += ["LOAD a"] + push(draw(st.sampled_from(["LOAD x", "LOAD y", "CONST 0"]))) + \
                push(draw(st.sampled_from(operands))) + ["ASTORE"]
        else:
            lines += push(draw(st.sampled_from(operands))) + push(draw(st.sampled_from(operands)))
            lines += [f"IFCMP {draw(st.sampled_from(_OPS))} cut"]
    lines += push(draw(st.sampled_from(operands))) + push(draw(st.sampled_from(operands))) + \
        [draw(st.sampled_from(["ADD", "SUB", "MUL"])), "RETURN", "LABEL cut", "FAIL"]
    return "\n".join(lines)


@settings(max_examples=60, deadline=None)
@given(src=small_programs(), strategy=st.sampled_from(STRATEGIES))
def test_random_programs_match_oracle(src, strategy):
    prog = parse_program(src)
    expected = Counter(bruteforce.run_all(prog, max_len=4, int_range=(0, 2)))
    recs = get_all_solutions(prog, SearchConfig(strategy, max_len=4, int_range=(0, 2), check=True))
    assert all(r.checked for r in recs)
    assert keys(recs) == expected
