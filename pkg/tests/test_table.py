import pytest

from corpus import boolean, chain, corpus_tables, mo2
from provider import set_commute_mode, set_fail_fast
from table import (FiniteTable, StructuralError, UndefinedDifferenceError, com, com_witness, commute,
                   complements, derive_order, is_commutative, is_lattice, is_symmetric, left_minus,
                   partial_join, partial_meet, right_minus, validate_axioms)


def three_chain() -> FiniteTable:
    return FiniteTable.build(3, [(1, 1, 2)], labels=['0', 'h', '1'], name='three')


def test_build_completes_identities():
    t = three_chain()
    assert t.add(0, 1) == 1
    assert t.add(1, 0) == 1
    assert t.add(1, 1) == 2
    assert t.add(2, 1) is None
    assert t.lookup('h') == 1


def test_build_rejects_out_of_range_ids():
    with pytest.raises(StructuralError):
        FiniteTable.build(2, [(0, 1, 5)])


def test_build_rejects_conflicting_cells():
    with pytest.raises(StructuralError) as info:
        FiniteTable.build(3, [(1, 1, 2), (1, 1, 1)])
    assert info.value.cell == (1, 1)


def test_unknown_label():
    with pytest.raises(KeyError):
        three_chain().lookup('x')


def test_chain_passes_axioms():
    report = validate_axioms(chain(3))
    assert report.passed
    assert report.to_dict() == {'passed': True, 'violations': []}


def test_missing_complements_are_reported():
    t = FiniteTable.build(4, [])
    report = validate_axioms(t)
    assert not report.passed
    assert ('ii', (1,)) in report.violations
    assert ('ii', (2,)) in report.violations
    assert report.tags() == ['ii']


def test_fail_fast_stops_at_first_violation():
    t = FiniteTable.build(4, [])
    assert len(validate_axioms(t, fail_fast=True).violations) == 1
    set_fail_fast(True)
    assert len(validate_axioms(t).violations) == 1


def test_sum_with_one_breaks_axiom_iv():
    t = three_chain()
    plus = dict(t.plus)
    plus[(2, 1)] = 2
    report = validate_axioms(t.with_plus(plus))
    assert 'iv' in report.tags()


def test_derived_order_on_chain():
    order = derive_order(chain(3))
    for a in range(4):
        for b in range(4):
            assert order(a, b) == (a <= b)
    assert order.below(2) == [0, 1, 2]


def test_differences_and_complements():
    t = chain(3)
    assert right_minus(t, 1, 3) == 2
    assert left_minus(t, 1, 3) == 2
    assert complements(t, 1) == (2, 2)
    with pytest.raises(UndefinedDifferenceError):
        left_minus(t, 3, 1)
    with pytest.raises(UndefinedDifferenceError):
        right_minus(t, 2, 1)


def test_chain_is_commutative_and_symmetric():
    t = chain(3)
    assert is_commutative(t)
    assert is_symmetric(t)


def test_commute_readings():
    t = chain(3)
    # 2 + 2 is undefined on both sides
    assert commute(t, 2, 2)
    assert not commute(t, 2, 2, mode='strict')
    set_commute_mode('strict')
    assert not commute(t, 2, 2)
    with pytest.raises(ValueError):
        set_commute_mode('loose')


def test_com_holds_on_effect_algebras():
    t = chain(3)
    assert all(com(t, a, b) for a in t.elements for b in t.elements)
    assert com_witness(t, 3, 3) is None


def test_meets_and_joins_in_mo2():
    t = mo2()
    a, a_, b, one = t.lookup('a'), t.lookup("a'"), t.lookup('b'), t.lookup('1')
    assert partial_meet(t, a, b) == t.zero
    assert partial_join(t, a, b) == one
    assert partial_meet(t, a, a_) == t.zero
    assert partial_join(t, a, a) == a
    assert is_lattice(t)


def test_boolean_meets_are_componentwise():
    t = boolean(2)
    left, right = t.lookup('1,0'), t.lookup('0,1')
    assert partial_meet(t, left, right) == t.lookup('0,0')
    assert partial_join(t, left, right) == t.lookup('1,1')


TABLES = corpus_tables()


@pytest.mark.parametrize('name', sorted(TABLES))
def test_differences_invert_the_sum(name):
    t = TABLES[name]
    order = derive_order(t)
    for a in t.elements:
        for b in t.elements:
            if order(a, b):
                assert t.add(left_minus(t, a, b), a) == b
                assert t.add(a, right_minus(t, a, b)) == b
            else:
                with pytest.raises(UndefinedDifferenceError):
                    left_minus(t, a, b)
                with pytest.raises(UndefinedDifferenceError):
                    right_minus(t, a, b)
    for (a, b), c in t.plus.items():
        assert left_minus(t, b, c) == a
        assert right_minus(t, a, c) == b


@pytest.mark.parametrize('name', sorted(TABLES))
def test_complements_undo_each_other(name):
    t = TABLES[name]
    for a in t.elements:
        minus, tilde = complements(t, a)
        assert complements(t, minus)[1] == a
        assert complements(t, tilde)[0] == a


@pytest.mark.parametrize('name', sorted(TABLES))
def test_commutative_tables_are_symmetric(name):
    t = TABLES[name]
    if is_commutative(t):
        assert is_symmetric(t)
