import pytest
from hypothesis import given
from hypothesis import strategies as st

from freearrays import (
    FREE, INT, Add, ArrayBase, Const, ConstraintStore, ElementKind, Select, Store, StoreView,
    Var, eval_concrete,
)
from freearrays.errors import (
    BoundsError, InvalidArgumentError, InvalidDomainError, InvariantViolation, JavaException,
    MissingBindingError,
)
from freearrays.symbolic import Relation, Constraint, Mul, eval_array


@pytest.fixture
def store():
    return ConstraintStore()


class TestNewIntVar:
    def test_range(self, store):
        v = store.new_int_var("i", 0, 10)
        assert v.domain.intervals == ((0, 10),)

    def test_singleton(self, store):
        assert store.new_int_var("n", 5, 5).domain.is_singleton()

    def test_invalid(self, store):
        with pytest.raises(InvalidDomainError):
            store.new_int_var("x", 3, 1)

    def test_ids_unique_names_are_labels(self, store):
        a = store.new_int_var("x", 0, 1)
        b = store.new_int_var("x", 0, 1)
        assert a.id != b.id


class TestNewFreeArray:
    def test_int_kind(self, store):
        arr = store.new_free_array(INT, 16)
        assert arr.length.domain.intervals == ((0, 16),)
        assert not arr.initial and not arr.overrides

    def test_nested_kind(self, store):
        arr = store.new_free_array(ElementKind(INT), 4)
        inner = store.element_at(arr, 0)
        assert inner.kind == INT
        assert inner.length.domain.intervals == ((0, 4),)

    def test_zero_bound(self, store):
        arr = store.new_free_array(INT, 0)
        assert arr.length.domain.intervals == ((0, 0),)
        with pytest.raises(InvariantViolation):
            store.element_at(arr, 0)

    def test_negative_bound(self, store):
        with pytest.raises(InvalidArgumentError):
            store.new_free_array(INT, -1)


class TestNewFixedArray:
    def test_constant_length(self, store):
        arr = store.new_fixed_array(Const(3), True)
        assert arr.length.domain.intervals == ((3, 3),)
        assert store.element_at(arr, 2).domain == store.element_at(arr, 2).domain

    def test_free_length_aliases(self, store):
        n = store.new_int_var("n", 0, 5)
        arr = store.new_fixed_array(Var(n.id), True)
        assert arr.length is n

    def test_zero_length_plain(self, store):
        arr = store.new_fixed_array(Const(0), False)
        assert arr.length.domain.intervals == ((0, 0),)

    def test_plain_elements_are_zero(self, store):
        arr = store.new_fixed_array(Const(2), False)
        assert store.element_at(arr, 1).domain.intervals == ((0, 0),)

    def test_negative_length(self, store):
        with pytest.raises(JavaException) as exc:
            store.new_fixed_array(Const(-1))
        assert exc.value.kind == "NegativeArraySizeException"


class TestInitializer:
    def test_mixed(self, store):
        arr = store.array_from_initializer([Const(1), FREE, Const(0)], elem_range=(0, 9))
        assert arr.length.domain.intervals == ((3, 3),)
        assert store.element_at(arr, 0).domain.intervals == ((1, 1),)
        assert store.element_at(arr, 1).domain.intervals == ((0, 9),)
        assert store.element_at(arr, 2).domain.intervals == ((0, 0),)

    def test_empty(self, store):
        assert store.array_from_initializer([]).length.domain.intervals == ((0, 0),)

    def test_independent_free_items(self, store):
        arr = store.array_from_initializer([FREE, FREE])
        assert store.element_at(arr, 0) is not store.element_at(arr, 1)


class TestElementAt:
    def test_materializes_once(self, store):
        arr = store.new_free_array(INT, 4)
        first = store.element_at(arr, 2)
        assert store.element_at(arr, 2) is first

    def test_binding_persists(self, store):
        arr = store.new_free_array(INT, 4)
        store.write_element(arr, 2, store.value_var(Const(7), "seven"))
        assert store.element_at(arr, 2).domain.intervals == ((7, 7),)

    def test_out_of_range(self, store):
        arr = store.new_free_array(INT, 4)
        with pytest.raises(InvariantViolation):
            store.element_at(arr, 4)


class TestEvalConcrete:
    def test_add(self):
        assert eval_concrete(Add(Const(2), Var(0)), {0: 3}, {}) == 5

    def test_select(self):
        assert eval_concrete(Select(ArrayBase(0), Const(1)), {}, {0: [4, 9]}) == 9

    def test_store_view(self):
        assert eval_concrete(StoreView(0, Const(1), Const(7), Const(1)), {}, {0: [4, 9]}) == 7

    def test_missing_binding(self):
        with pytest.raises(MissingBindingError):
            eval_concrete(Var(3), {}, {})

    def test_out_of_bounds(self):
        with pytest.raises(BoundsError):
            eval_concrete(Select(ArrayBase(0), Const(2)), {}, {0: [4, 9]})

    def test_eval_array_applies_writes_in_order(self):
        term = Store(Store(ArrayBase(0), Const(0), Const(5)), Const(0), Const(6))
        assert eval_array(term, {}, {0: [1, 2]}) == [6, 2]


def test_expressions_are_immutable_and_hashable():
    e = Add(Var(1, "x"), Mul(Const(2), Var(2, "y")))
    h = hash(e)
    with pytest.raises(AttributeError):
        e.left = Const(0)
    assert hash(e) == h
    assert e == Add(Var(1), Mul(Const(2), Var(2)))


def test_relation_complements():
    for rel in Relation:
        assert rel.complement.complement is rel
        for a in range(-2, 3):
            for b in range(-2, 3):
                assert rel.holds(a, b) != rel.complement.holds(a, b)
    c = Constraint(Relation.LT, Var(0), Const(1))
    assert c.complement().relation is Relation.GE


def test_element_kind_parse():
    assert ElementKind.parse("int") == INT
    assert ElementKind.parse("int[][]").depth == 2
    with pytest.raises(InvalidArgumentError):
        ElementKind.parse("long[]")


arrays = st.lists(st.integers(-20, 20), min_size=1, max_size=8)


@given(data=st.data(), contents=arrays, v=st.integers(-50, 50))
def test_read_over_write(data, contents, v):
    i = data.draw(st.integers(0, len(contents) - 1))
    assert eval_concrete(StoreView(0, Const(i), Const(v), Const(i)), {}, {0: contents}) == v


@given(data=st.data(), contents=arrays, v=st.integers(-50, 50))
def test_write_elsewhere(data, contents, v):
    i = data.draw(st.integers(0, len(contents) - 1))
    j = data.draw(st.integers(0, len(contents) - 1).filter(lambda j: j != i) if len(contents) > 1
                  else st.just(i))
    if i == j:
        return
    lhs = eval_concrete(StoreView(0, Const(i), Const(v), Const(j)), {}, {0: contents})
    assert lhs == eval_concrete(Select(ArrayBase(0), Const(j)), {}, {0: contents})
