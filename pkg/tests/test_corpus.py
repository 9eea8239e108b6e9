"""Corpus-wide checks: every fixture against the structural theorems at finite scale."""
from fractions import Fraction

import pytest

from corpus import (boolean, chain, corpus_pmv, corpus_tables, direct_product, gamma_z2, horizontal_sum, mo2,
                    mutate_cell, non_commutative_window, write_corpus)
from homlattice import jordan_decompose, verify_lattice_oracle
from init import GRP_SUFFIX, PEA_SUFFIX, PMV_SUFFIX, WINDOW_SUFFIX
from formats import load
from pmv import pea_to_pmv, pmv_states, pmv_to_pea, validate_pmv
from pogroup import GroupHom, extend_state, gamma_interval, restrict_state, standard_group, window_summary
from rational import make_rng
from riesz import check_ladder, has_rdp0, has_rdp1, has_rdp2, ladder_report
from statespace import (ConvexPLFunction, StateVector, barycentric_decompose, classify,
                        extremal_min_rule, jensen_check, measure_polytope, random_affine_function,
                        random_convex_function, random_state, representing_measures, state_polytope,
                        verify_polytope)
from table import is_commutative, is_symmetric, partial_meet, validate_axioms

TABLES = corpus_tables()
NAMES = sorted(TABLES)
RDP2_NAMES = [name for name in NAMES if has_rdp2(TABLES[name]).holds]


def test_corpus_size():
    assert len(TABLES) >= 12
    for expected in ('chain1', 'chain5', 'bool8', 'mo2', 'gamma-z2-u11', 'pmv-chain3'):
        assert expected in TABLES


def test_expected_fixtures_have_rdp2():
    for name in ('chain1', 'chain3', 'bool2', 'bool4', 'bool8', 'gamma-z2-u11', 'gamma-z2-u21',
                 'polyhedral-u21', 'pmv-chain3', 'pmv-z2-u12'):
        assert name in RDP2_NAMES
    assert 'mo2' not in RDP2_NAMES
    assert 'hsum-chain2-chain2' not in RDP2_NAMES


@pytest.mark.parametrize('name', NAMES)
def test_fixture_passes_axioms(name):
    assert validate_axioms(TABLES[name]).passed


@pytest.mark.parametrize('name', NAMES)
def test_mutations_never_crash(name):
    table = TABLES[name]
    rng = make_rng()
    for _ in range(100):
        mutant = mutate_cell(table, rng)
        report = validate_axioms(mutant)
        for tag, witness in report.violations:
            assert tag in ('i', 'ii', 'iii', 'iv')
            assert all(0 <= x < mutant.size for x in witness)


@pytest.mark.parametrize('name', NAMES)
def test_mutation_changes_one_defined_cell(name):
    table = TABLES[name]
    rng = make_rng()
    for _ in range(50):
        mutant = mutate_cell(table, rng)
        changed = {cell for cell in set(table.plus) | set(mutant.plus)
                   if table.plus.get(cell) != mutant.plus.get(cell)}
        assert len(changed) == 1
        assert changed <= set(table.plus)


@pytest.mark.parametrize('name', NAMES)
def test_riesz_ladder(name):
    table = TABLES[name]
    report = ladder_report(table)
    check_ladder(report.vector())
    if is_commutative(table):
        assert report.rdp0.holds == report.rdp1.holds
    if report.rdp2.holds:
        assert all(partial_meet(table, a, b) is not None for a in table.elements for b in table.elements)


@pytest.mark.parametrize('name', NAMES)
def test_rdp1_tables_have_simplex_state_spaces(name):
    table = TABLES[name]
    polytope = state_polytope(table)
    if has_rdp1(table).holds and not polytope.empty:
        c = classify(polytope)
        assert c.is_simplex
        assert c.vertex_count == c.affine_dim + 1


def test_mo2_is_not_a_simplex():
    c = classify(state_polytope(TABLES['mo2']))
    assert not c.is_simplex
    assert (c.vertex_count, c.affine_dim) == (4, 2)
    assert not has_rdp0(TABLES['mo2']).holds


@pytest.mark.parametrize('name', NAMES)
def test_enumerated_vertices_are_extreme_states(name):
    verify_polytope(state_polytope(TABLES[name]))


@pytest.mark.parametrize('name', RDP2_NAMES)
def test_interior_states_decompose_uniquely(name):
    table = TABLES[name]
    polytope = state_polytope(table)
    rng = make_rng()
    for _ in range(100):
        state, _ = random_state(polytope, rng)
        measure = barycentric_decompose(polytope, state)
        for a in table.elements:
            assert sum((w * v[a] for v, w in measure.atoms), Fraction(0)) == state[a]
        assert measure_polytope(polytope, state) == [measure]


def test_mo2_center_has_two_measures():
    table = TABLES['mo2']
    polytope = state_polytope(table)
    half = Fraction(1, 2)
    center = StateVector.of([0, half, half, half, half, 1])
    witness = representing_measures(polytope, center)
    assert witness.alternative is not None
    assert witness.measure != witness.alternative


@pytest.mark.parametrize('name', RDP2_NAMES)
def test_vertices_are_exactly_the_min_rule_states(name):
    table = TABLES[name]
    polytope = state_polytope(table)
    for vertex in polytope.vertices:
        assert extremal_min_rule(table, vertex, polytope)
    rng = make_rng()
    for _ in range(25):
        state, _ = random_state(polytope, rng)
        assert extremal_min_rule(table, state, polytope) == (state in polytope.vertices)


@pytest.mark.parametrize('name', RDP2_NAMES + ['mo2'])
def test_representing_measures_pass_jensen(name):
    polytope = state_polytope(TABLES[name])
    rng = make_rng()
    size = TABLES[name].size
    for _ in range(5):
        state, _ = random_state(polytope, rng)
        witness = representing_measures(polytope, state)
        measures = [witness.measure] + ([witness.alternative] if witness.alternative is not None else [])
        for measure in measures:
            for _ in range(20):
                assert jensen_check(measure, state, random_convex_function(rng, size))
            for _ in range(5):
                f = random_affine_function(rng, size)
                assert measure.integrate(f) == f(state)
                assert jensen_check(measure, state, ConvexPLFunction((f,)))


@pytest.mark.parametrize('rank, unit', [(1, (n,)) for n in range(1, 6)] + [(2, (1, 1))])
def test_state_extension_round_trip(rank, unit):
    interval = gamma_interval(standard_group(rank), unit)
    polytope = state_polytope(interval.table)
    rng = make_rng()
    states = [random_state(polytope, rng)[0] for _ in range(10)]
    extensions = [extend_state(interval, s) for s in states]
    for s, f in zip(states, extensions):
        assert restrict_state(f, interval) == s
    lam = Fraction(1, 3)
    for (s, f), (t, g) in zip(zip(states, extensions), zip(states[1:], extensions[1:])):
        mixed = StateVector(tuple(lam * x + (1 - lam) * y for x, y in zip(s.values, t.values)))
        expected = GroupHom(tuple(lam * x + (1 - lam) * y for x, y in zip(f.values, g.values)))
        assert extend_state(interval, mixed) == expected


@pytest.mark.parametrize('rank', [1, 2, 3])
def test_hom_lattice_oracle(rank):
    rng = make_rng()
    group = standard_group(rank)
    for count in (1, 2, 3):
        fs = [GroupHom.of([rng.randint(-4, 4) for _ in range(rank)]) for _ in range(count)]
        report = verify_lattice_oracle(fs, group, radius=4)
        assert report.agree, report.witness
        assert report.checked == 5 ** rank


def test_jordan_on_seeded_homs():
    rng = make_rng()
    for _ in range(20):
        rank = rng.randint(1, 3)
        values = [rng.randint(-6, 6) for _ in range(rank)]
        g, h = jordan_decompose(GroupHom.of(values), standard_group(rank))
        assert g.values == tuple(max(v, 0) for v in values)
        assert h.values == tuple(max(-v, 0) for v in values)


@pytest.mark.parametrize('name', RDP2_NAMES)
def test_pmv_equivalence(name):
    table = TABLES[name]
    pmv = pea_to_pmv(table)
    assert validate_pmv(pmv).passed
    assert pmv_to_pea(pmv).plus == table.plus
    assert pmv_states(pmv).vertices == state_polytope(table).vertices


@pytest.mark.parametrize('n', range(1, 6))
def test_chain_has_exactly_one_state(n):
    polytope = state_polytope(chain(n))
    assert len(polytope.vertices) == 1
    assert polytope.vertices[0] == StateVector.of([Fraction(k, n) for k in range(n + 1)])


def test_non_commutative_window():
    window = non_commutative_window()
    assert is_symmetric(window.table)
    assert not is_commutative(window.table)
    summary = window_summary(window)
    assert summary['witness']['a+b'] != summary['witness']['b+a']


def test_constructions_validate():
    assert validate_axioms(direct_product(chain(2), chain(1))).passed
    assert validate_axioms(horizontal_sum([chain(3), boolean(2), chain(1)])).passed
    assert mo2().size == 6
    assert gamma_z2((2, 1)).size == 6


def test_pmv_fixtures_validate():
    for t in corpus_pmv().values():
        assert validate_pmv(t).passed


def test_written_corpus_loads_back(tmp_path):
    written = write_corpus(tmp_path)
    suffixes = {path.suffix for path in written}
    assert suffixes == {PEA_SUFFIX, PMV_SUFFIX, GRP_SUFFIX, WINDOW_SUFFIX}
    pea_files = [path for path in written if path.suffix == PEA_SUFFIX]
    assert len(pea_files) >= 12
    for path in pea_files:
        assert validate_axioms(load(path)).passed
    for path in written:
        if path.suffix == PMV_SUFFIX:
            assert validate_pmv(load(path)).passed
