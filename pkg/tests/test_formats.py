from fractions import Fraction

import pytest

from corpus import boolean, chain, non_commutative_window, pmv_chain, presentations
from formats import (ParseError, format_grp, format_pea, format_pmv, format_state, format_window, load,
                     load_state, parse_grp, parse_pea, parse_pmv, parse_state, parse_window, write_text)
from pmv import PmvTable
from pogroup import FreeAbelian, LexZ, SemidirectZxZ2
from statespace import StateValidationError, StateVector

CHAIN_TEXT = """\
# three element chain
name: c3
elements: 0 h 1
zero: 0
one: 1
h + h = 1
"""


def test_parse_pea():
    t = parse_pea(CHAIN_TEXT)
    assert t.name == 'c3'
    assert t.labels == ('0', 'h', '1')
    assert t.add(1, 1) == 2
    assert t.add(0, 1) == 1


def test_written_table_parses_back():
    t = chain(3)
    assert parse_pea(format_pea(t, ['header'])).plus == t.plus
    assert 'header' in format_pea(t, ['header']).splitlines()[0]


def test_unknown_element_has_a_position():
    with pytest.raises(ParseError) as info:
        parse_pea("elements: 0 1\n0 + x = 1\n", 'bad.pea')
    assert info.value.line == 2
    assert info.value.column == 5
    assert 'bad.pea:2:5' in str(info.value)


def test_malformed_sum_line():
    with pytest.raises(ParseError) as info:
        parse_pea("elements: 0 1\n0 plus 1\n")
    assert info.value.line == 2


def test_missing_elements():
    with pytest.raises(ParseError):
        parse_pea("0 + 0 = 0\n")
    with pytest.raises(ParseError):
        parse_pea("")


def test_duplicate_element():
    with pytest.raises(ParseError):
        parse_pea("elements: 0 a a 1\n")


def test_conflicting_sums_are_parse_errors():
    with pytest.raises(ParseError):
        parse_pea("elements: 0 a 1\na + a = 1\na + a = a\n")


def test_unknown_lines_only_in_windows():
    text = "elements: 0 a 1\nunknown: a a\n"
    with pytest.raises(ParseError):
        parse_pea(text)
    table, unknown = parse_window(text)
    assert unknown == frozenset({(1, 1)})
    assert not table.defined(1, 1)


def test_window_text_keeps_unknown_sums():
    window = non_commutative_window()
    table, unknown = parse_window(format_window(window))
    assert unknown == window.unknown
    assert table.plus == window.table.plus


def test_parse_pmv():
    t = parse_pmv(format_pmv(pmv_chain(2)))
    assert isinstance(t, PmvTable)
    assert t.oplus == pmv_chain(2).oplus
    assert t.neg_minus == (2, 1, 0)


def test_pmv_rows_must_be_complete():
    with pytest.raises(ParseError):
        parse_pmv("elements: 0 1\noplus 0: 0 1\noplus 1: 1 1\nneg 0: 1 1\n")
    with pytest.raises(ParseError):
        parse_pmv("elements: 0 1\noplus 0: 0\n")


@pytest.mark.parametrize('name', sorted(presentations()))
def test_group_files(name):
    group, unit = presentations()[name]
    parsed = parse_grp(format_grp(group, unit))
    assert parsed.group == group
    assert parsed.unit == unit


def test_parse_lex_semidirect():
    text = "variant: lex-z\ninner: semidirect\naction: 1 1 ; 0 1\nunit: 1 0 0 0\n"
    parsed = parse_grp(text)
    assert isinstance(parsed.group.variant, LexZ)
    assert parsed.group.variant.inner == SemidirectZxZ2(((1, 1), (0, 1)))
    assert parsed.unit == (1, 0, 0, 0)


def test_parse_polyhedral():
    parsed = parse_grp("variant: free-abelian\nrank: 2\ncone: polyhedral\nrows: 1 0 ; 1 1\nunit: 2 1\n")
    assert parsed.group.variant == FreeAbelian(2, 'polyhedral', ((1, 0), (1, 1)))


def test_group_file_errors():
    with pytest.raises(ParseError):
        parse_grp("variant: free-abelian\nrank: 2\n")
    with pytest.raises(ParseError):
        parse_grp("variant: torus\nunit: 1\n")
    with pytest.raises(ParseError):
        parse_grp("variant: free-abelian\nrank: 2\nunit: 1\n")
    with pytest.raises(ParseError) as info:
        parse_grp("variant: free-abelian\nrank: two\nunit: 1 1\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_grp("variant: free-abelian\nrank: 2\ncone: round\nunit: 1 1\n")


def test_parse_state():
    t = chain(2)
    state = parse_state("1 = 1/2\n", t)
    assert state == StateVector.of([0, Fraction(1, 2), 1])
    assert parse_state(format_state(t, state), t) == state


def test_state_errors():
    t = chain(2)
    with pytest.raises(ParseError):
        parse_state("1 = 0.5\n", t)
    with pytest.raises(ParseError):
        parse_state("7 = 1/2\n", t)
    with pytest.raises(ParseError):
        parse_state("1 1/2\n", t)
    with pytest.raises(StateValidationError, match=r"1 \+ 1"):
        parse_state("1 = 1/3\n", t)


def test_state_lines_need_no_spaces():
    t = boolean(2)
    state = parse_state("1,0=1/2\n0,1=1/2\n", t)
    assert state == StateVector.of([0, Fraction(1, 2), Fraction(1, 2), 1])
    assert parse_state("  1,0 =1/2\n0,1=  1/2  # half\n", t) == state
    with pytest.raises(ParseError) as info:
        parse_state("1,0=1/2\n0,1=x\n", t)
    assert (info.value.line, info.value.column) == (2, 5)
    with pytest.raises(ParseError):
        parse_state("1,0 0,1 = 1/2\n", t)
    with pytest.raises(ParseError):
        parse_state("1,0 =\n", t)


def test_conflicting_sums_point_at_the_second_definition():
    with pytest.raises(ParseError) as info:
        parse_pea("elements: 0 a 1\na + a = 1\n\n  a + a = a\na + a = 1\n", 'clash.pea')
    assert (info.value.line, info.value.column) == (4, 3)
    assert 'clash.pea:4:3' in str(info.value)
    assert 'defined twice' in info.value.message


def test_load_by_suffix(tmp_path):
    write_text(tmp_path / 'c.pea', CHAIN_TEXT)
    write_text(tmp_path / 'c.pmv', format_pmv(pmv_chain(1)))
    write_text(tmp_path / 'c.txt', CHAIN_TEXT)
    write_text(tmp_path / 'half.state', "h = 1/2\n")
    table = load(tmp_path / 'c.pea')
    assert table.size == 3
    assert isinstance(load(tmp_path / 'c.pmv'), PmvTable)
    assert load_state(tmp_path / 'half.state', table)[1] == Fraction(1, 2)
    with pytest.raises(ParseError):
        load(tmp_path / 'c.txt')
    with pytest.raises(ParseError):
        load(tmp_path / 'missing.pea')
