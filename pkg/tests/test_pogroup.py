from fractions import Fraction

import pytest

from corpus import NON_COMMUTATIVE_UNIT, chain, lex_semidirect_group, non_commutative_window
from pogroup import (ExtensionError, GroupHom, MembershipUnknownError, NotAStrongUnitError, NotPositiveError,
                     PresentationError, SemidirectZxZ2, WindowRadiusError, check_strong_unit, extend_state,
                     gamma_interval, lex_group, make_hom, non_commutative_witness, polyhedral_group,
                     represent_group_state, restrict_state, semidirect_group, standard_group,
                     validate_presentation, window_summary, window_table)
from provider import update_config
from statespace import StateVector, state_polytope
from table import derive_order, is_commutative, is_symmetric, validate_axioms


def test_standard_order():
    group = standard_group(2)
    assert group.leq((0, 1), (1, 1))
    assert not group.leq((1, 0), (0, 1))
    assert group.cone_contains((0, 0))


def test_lex_cone_reads_the_last_coordinate_first():
    group = lex_group(2)
    assert group.cone_contains((-3, 1))
    assert not group.cone_contains((3, -1))
    assert group.cone_contains((2, 0))
    assert group.leq((5, 0), (0, 1))


def test_polyhedral_cone_membership():
    group = polyhedral_group(((1, 0), (1, 1)))
    assert group.cone_contains((2, 1))
    assert group.cone_contains((1, 0))
    assert not group.cone_contains((0, 1))
    assert not group.cone_contains((-1, 0))


def test_polyhedral_membership_can_be_undecided():
    update_config(polyhedral_coefficient_cap=2)
    group = polyhedral_group(((1, 0), (0, 1), (1, -1)))
    assert group.cone_contains((1, 1))
    with pytest.raises(MembershipUnknownError):
        group.cone_contains((-1, 0))


def test_rank_mismatch():
    with pytest.raises(PresentationError):
        standard_group(2).add((1, 0), (1, 0, 0))


def test_semidirect_law():
    group = semidirect_group()
    g, h = (1, 0, 0), (0, 0, 1)
    assert group.add(g, h) == (1, 0, 1)
    assert group.add(h, g) == (1, -1, 1)
    assert not group.is_abelian
    for x in [(1, 2, -1), (0, 1, 1), (-2, 0, 3)]:
        assert group.add(group.neg(x), x) == group.zero
        assert group.add(x, group.neg(x)) == group.zero
    a, b, c = (1, 1, 0), (-1, 0, 2), (2, -1, 1)
    assert group.add(group.add(a, b), c) == group.add(a, group.add(b, c))


def test_identity_action_is_abelian():
    assert semidirect_group(((1, 0), (0, 1))).is_abelian


def test_action_must_be_unimodular():
    with pytest.raises(PresentationError):
        SemidirectZxZ2(((2, 0), (0, 1)))


@pytest.mark.parametrize('group', [standard_group(2), lex_group(2), semidirect_group(), lex_semidirect_group(),
                                   polyhedral_group(((1, 0), (1, 1)))])
def test_presentations_are_po_groups(group):
    assert validate_presentation(group, radius=2).valid


def test_non_strict_cone_is_rejected():
    group = polyhedral_group(((1,), (-1,)))
    with pytest.raises(PresentationError):
        validate_presentation(group, radius=2)
    report = validate_presentation(group, radius=2, raise_on_failure=False)
    assert not report.strict
    assert 'strict' in report.to_dict()['witnesses']


def test_window_radius_must_be_positive():
    with pytest.raises(WindowRadiusError):
        validate_presentation(standard_group(1), radius=0)


def test_strong_units():
    unit = check_strong_unit(standard_group(2), (1, 1))
    assert all(n == 1 for _, n in unit.bounds)
    assert dict(check_strong_unit(standard_group(1), (1,)).bounds)[(1,)] == 1
    assert check_strong_unit(lex_group(2), (0, 1)).unit == (0, 1)
    with pytest.raises(NotAStrongUnitError):
        check_strong_unit(standard_group(2), (1, 0))
    with pytest.raises(NotAStrongUnitError):
        check_strong_unit(standard_group(2), (0, 0))


def test_unit_multiples_are_least():
    unit = check_strong_unit(standard_group(1), (2,), window_radius=5)
    assert dict(unit.bounds) == {(1,): 1, (-1,): 1}
    unit = check_strong_unit(polyhedral_group(((1, 0), (1, 1))), (2, 1))
    assert dict(unit.bounds)[(0, 1)] == 1


def test_finite_interval_of_the_plane():
    interval = gamma_interval(standard_group(2), (1, 1))
    assert not interval.lazy
    assert interval.elements == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert validate_axioms(interval.table).passed
    assert interval.to_dict()['realization'] == 'finite'


def test_polyhedral_interval_is_a_square():
    interval = gamma_interval(polyhedral_group(((1, 0), (1, 1))), (2, 1))
    assert len(interval.elements) == 4
    assert is_commutative(interval.table)


def test_rank_one_lex_interval_is_a_chain():
    interval = gamma_interval(lex_group(1), (3,))
    assert not interval.lazy
    assert interval.elements == ((0,), (1,), (2,), (3,))
    assert interval.table.plus == chain(3).plus


def test_first_axis_is_not_a_strong_unit_under_lex():
    with pytest.raises(NotAStrongUnitError):
        gamma_interval(lex_group(2), (3, 0))


def test_units_with_positive_leading_coordinate_give_lazy_intervals():
    assert gamma_interval(semidirect_group(), (1, 0, 0)).lazy
    assert gamma_interval(lex_semidirect_group(), (1, 0, 0, 0)).lazy
    with pytest.raises(NotAStrongUnitError):
        gamma_interval(semidirect_group(), (0, 3, 0))


def test_lex_interval_is_lazy():
    interval = gamma_interval(lex_group(2), (0, 1))
    assert interval.lazy
    assert interval.contains((-7, 1))
    assert interval.contains((7, 0))
    assert not interval.contains((1, 1))
    assert interval.to_dict()['size'] is None


def test_interval_cap_forces_lazy():
    update_config(interval_cap=3)
    assert gamma_interval(standard_group(2), (1, 1)).lazy


def test_window_of_a_lazy_interval():
    window = window_table(gamma_interval(lex_group(2), (0, 1)), 2)
    assert window.elements[0] == (0, 0)
    assert window.elements[-1] == (0, 1)
    assert set(window.elements) == {(0, 0), (1, 0), (2, 0), (-2, 1), (-1, 1), (0, 1)}
    assert is_symmetric(window.table)
    assert non_commutative_witness(window) is None


def test_window_radius_errors():
    interval = gamma_interval(lex_group(2), (0, 1))
    with pytest.raises(WindowRadiusError):
        window_table(interval, 0)
    with pytest.raises(WindowRadiusError):
        window_table(gamma_interval(standard_group(1), (3,)), 2)


def test_lex_semidirect_window_is_symmetric_and_not_commutative():
    window = non_commutative_window()
    table = window.table
    assert window.elements[-1] == NON_COMMUTATIVE_UNIT
    assert is_symmetric(table)
    a, b = non_commutative_witness(window)
    assert table.add(a, b) is not None and table.add(b, a) is not None
    assert table.add(a, b) != table.add(b, a)
    summary = window_summary(window)
    assert summary['symmetric'] and not summary['commutative']
    assert summary['witness']['a+b'] != summary['witness']['b+a']


def test_make_hom_checks_additivity():
    group = semidirect_group()
    assert make_hom(group, [1, 0, 0])((2, 5, 7)) == 2
    assert make_hom(group, [0, 0, 1])((2, 5, 7)) == 7
    with pytest.raises(PresentationError):
        make_hom(group, [0, 1, 0])
    with pytest.raises(PresentationError):
        make_hom(standard_group(2), [1])


def test_hom_arithmetic():
    f, g = GroupHom.of([1, 2]), GroupHom.of([Fraction(1, 2), -1])
    assert (f + g).values == (Fraction(3, 2), Fraction(1))
    assert (f - g).values == (Fraction(1, 2), Fraction(3))
    assert (-f)((1, 1)) == -3
    assert f.to_list() == ['1/1', '2/1']


def test_extend_and_restrict_on_a_chain():
    interval = gamma_interval(standard_group(1), (2,))
    state = StateVector.of([0, Fraction(1, 2), 1])
    f = extend_state(interval, state)
    assert f.values == (Fraction(1, 2),)
    assert restrict_state(f, interval) == state


def test_restrict_rejects_unnormalized_and_negative_homs():
    interval = gamma_interval(standard_group(2), (1, 1))
    with pytest.raises(NotPositiveError):
        restrict_state(GroupHom.of([1, 1]), interval)
    with pytest.raises(NotPositiveError):
        restrict_state(GroupHom.of([2, -1]), interval)


def test_lazy_intervals_do_not_extend():
    interval = gamma_interval(lex_group(2), (0, 1))
    with pytest.raises(ExtensionError):
        extend_state(interval, StateVector.of([0, 1]))


def test_group_representation_of_a_state():
    interval = gamma_interval(standard_group(2), (1, 1))
    state = StateVector.of([0, Fraction(1, 3), Fraction(2, 3), 1])
    representation = represent_group_state(interval, state, state_polytope(interval.table), radius=2)
    assert representation.holds
    assert representation.extension.values == (Fraction(2, 3), Fraction(1, 3))
    assert sorted(e.values for e in representation.vertex_extensions) == [(0, 1), (1, 0)]
    assert representation.checked == 25


def test_interval_and_window_lookups():
    interval = gamma_interval(standard_group(2), (1, 1))
    assert interval.element_id((1, 0)) == 2
    window = non_commutative_window()
    for a, b in window.unknown:
        assert window.is_unknown(a, b)
        assert not window.table.defined(a, b)
    assert not window.is_unknown(0, 0)


@pytest.mark.parametrize('group, unit', [
    (standard_group(2), (2, 1)),
    (standard_group(3), (1, 1, 1)),
    (polyhedral_group(((1, 0), (1, 1))), (2, 1)),
    (lex_group(1), (4,)),
])
def test_interval_order_is_the_group_order(group, unit):
    interval = gamma_interval(group, unit)
    order = derive_order(interval.table)
    for i, g in enumerate(interval.elements):
        for j, h in enumerate(interval.elements):
            difference = group.add(h, group.neg(g))
            assert order(i, j) == group.cone_contains(difference) == group.leq(g, h)
