import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from formats import format_grp, format_pea, format_pmv, format_window, write_text
from init import GRP_SUFFIX, PEA_SUFFIX, PMV_SUFFIX, TOOL_NAME, VERSION, WINDOW_SUFFIX
from pmv import PmvTable, gamma_lgroup, pmv_to_pea
from pogroup import (PoGroupPresentation, WindowTable, gamma_interval, lex_z_group, lex_group,
                     polyhedral_group, semidirect_group, standard_group, window_table)
from table import FiniteTable, StructuralError, validate_axioms

NON_COMMUTATIVE_UNIT: Tuple[int, ...] = (1, 0, 0, 0)
NON_COMMUTATIVE_RADIUS: int = 2


def chain(n: int) -> FiniteTable:
    """Γ(ℤ, n), the chain 0 < 1 < ⋯ < n."""
    table = gamma_interval(standard_group(1, 'Z'), (n,)).table
    return _renamed(table, f"chain{n}")


def gamma_z2(u: Sequence[int]) -> FiniteTable:
    table = gamma_interval(standard_group(2, 'Z^2'), tuple(u)).table
    return _renamed(table, f"gamma-z2-u{''.join(map(str, u))}")


def _renamed(table: FiniteTable, name: str, labels: Optional[Sequence[str]] = None) -> FiniteTable:
    return FiniteTable(size=table.size, plus=dict(table.plus), zero=table.zero, one=table.one,
                       name=name, labels=tuple(labels) if labels else table.labels)


def direct_product(left: FiniteTable, right: FiniteTable, name: Optional[str] = None) -> FiniteTable:
    """Componentwise sum, defined when both components are defined."""
    pairs = [(a, b) for a in left.elements for b in right.elements]
    index = {p: i for i, p in enumerate(pairs)}
    sums = []
    for (a1, b1), c1 in left.plus.items():
        for (a2, b2), c2 in right.plus.items():
            sums.append((index[(a1, a2)], index[(b1, b2)], index[(c1, c2)]))
    labels = [f"{left.label(a)},{right.label(b)}" for a, b in pairs]
    return FiniteTable.build(len(pairs), sums, zero=index[(left.zero, right.zero)],
                             one=index[(left.one, right.one)], labels=labels,
                             name=name or f"{left.name}x{right.name}")


def boolean(k: int) -> FiniteTable:
    """The Boolean algebra 2^k as a product of two-element chains."""
    if k < 1:
        raise StructuralError("Boolean algebra needs at least one atom")
    table = chain(1)
    for _ in range(k - 1):
        table = direct_product(table, chain(1))
    return _renamed(table, f"bool{2 ** k}")


def horizontal_sum(tables: Sequence[FiniteTable], name: Optional[str] = None,
                   labels: Optional[Sequence[str]] = None) -> FiniteTable:
    """Glue the zeros and the ones of the summands; other elements stay apart."""
    ids: List[Dict[int, int]] = []
    names = ['0']
    next_id = 1
    for position, table in enumerate(tables, start=1):
        mapping = {}
        for a in table.elements:
            if a in (table.zero, table.one):
                continue
            mapping[a] = next_id
            names.append(f"{table.label(a)}_{position}")
            next_id += 1
        ids.append(mapping)
    one = next_id
    names.append('1')
    sums = []
    for table, mapping in zip(tables, ids):
        def image(x: int) -> int:
            if x == table.zero:
                return 0
            if x == table.one:
                return one
            return mapping[x]
        for (a, b), c in table.plus.items():
            sums.append((image(a), image(b), image(c)))
    return FiniteTable.build(one + 1, sums, zero=0, one=one, labels=labels or names,
                             name=name or '+'.join(t.name or '?' for t in tables))


def mo2() -> FiniteTable:
    """Horizontal sum of two four-element Boolean algebras."""
    return horizontal_sum([boolean(2), boolean(2)], name='mo2',
                          labels=['0', 'a', "a'", 'b', "b'", '1'])


def pmv_chain(n: int) -> PmvTable:
    t = gamma_lgroup(1, (n,))
    return PmvTable(size=t.size, oplus=t.oplus, neg_minus=t.neg_minus, neg_tilde=t.neg_tilde,
                    zero=t.zero, one=t.one, name=f"pmv-chain{n}", labels=t.labels)


def pmv_z2(u: Sequence[int]) -> PmvTable:
    t = gamma_lgroup(2, u)
    return PmvTable(size=t.size, oplus=t.oplus, neg_minus=t.neg_minus, neg_tilde=t.neg_tilde,
                    zero=t.zero, one=t.one, name=f"pmv-z2-u{''.join(map(str, u))}", labels=t.labels)


def lex_semidirect_group() -> PoGroupPresentation:
    """ℤ ×lex (ℤ ⋉ ℤ²) with the action [[1, 1], [0, 1]]."""
    return lex_z_group(semidirect_group(((1, 1), (0, 1))), 'lex-semidirect')


def non_commutative_window(radius: int = NON_COMMUTATIVE_RADIUS) -> WindowTable:
    interval = gamma_interval(lex_semidirect_group(), NON_COMMUTATIVE_UNIT)
    return window_table(interval, radius)


def presentations() -> Dict[str, Tuple[PoGroupPresentation, Tuple[int, ...]]]:
    return {
        'z1-u3': (standard_group(1, 'Z'), (3,)),
        'z2-std-u11': (standard_group(2, 'Z^2'), (1, 1)),
        'z2-lex-u01': (lex_group(2, 'Z^2 lex'), (0, 1)),
        'lex-semidirect': (lex_semidirect_group(), NON_COMMUTATIVE_UNIT),
        'polyhedral-u21': (polyhedral_group(((1, 0), (1, 1)), 'Z^2 polyhedral'), (2, 1)),
    }


def corpus_tables() -> Dict[str, FiniteTable]:
    """Every finite table of the corpus by fixture name."""
    tables: Dict[str, FiniteTable] = {}
    for n in range(1, 6):
        tables[f"chain{n}"] = chain(n)
    for k in range(1, 4):
        tables[f"bool{2 ** k}"] = boolean(k)
    tables['mo2'] = mo2()
    tables['hsum-chain2-chain2'] = horizontal_sum([chain(2), chain(2)], name='hsum-chain2-chain2')
    tables['hsum-chain2-bool4'] = horizontal_sum([chain(2), boolean(2)], name='hsum-chain2-bool4')
    tables['gamma-z2-u11'] = gamma_z2((1, 1))
    tables['gamma-z2-u21'] = gamma_z2((2, 1))
    polyhedral, unit = presentations()['polyhedral-u21']
    tables['polyhedral-u21'] = _renamed(gamma_interval(polyhedral, unit).table, 'polyhedral-u21')
    for t in corpus_pmv().values():
        tables[t.name] = pmv_to_pea(t)
    return tables


def corpus_pmv() -> Dict[str, PmvTable]:
    return {t.name: t for t in (pmv_chain(3), pmv_z2((1, 2)))}


def write_corpus(directory: Union[str, Path]) -> List[Path]:
    """Write the corpus files and return their paths.

    Raises:
        OSError: If the directory cannot be written
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    header = [f"{TOOL_NAME} {VERSION} corpus"]
    written: List[Path] = []

    for name, table in corpus_tables().items():
        report = validate_axioms(table)
        if not report.passed:
            logging.error(f"Fixture {name} fails {report.tags()}; skipped")
            continue
        path = directory / f"{name}{PEA_SUFFIX}"
        write_text(path, format_pea(table, header))
        written.append(path)

    for name, t in corpus_pmv().items():
        path = directory / f"{name}{PMV_SUFFIX}"
        write_text(path, format_pmv(t, header))
        written.append(path)

    for name, (group, unit) in presentations().items():
        path = directory / f"{name}{GRP_SUFFIX}"
        write_text(path, format_grp(group, unit, header))
        written.append(path)

    window = non_commutative_window()
    path = directory / f"lex-semidirect-r{window.radius}{WINDOW_SUFFIX}"
    write_text(path, format_window(window, header + [f"window radius {window.radius}; unknown sums leave the window"]))
    written.append(path)

    logging.info(f"Wrote {len(written)} corpus files to {directory}")
    return written


def mutate_cell(table: FiniteTable, rng: random.Random) -> FiniteTable:
    """Change one defined cell of the addition table: undefine it or point it elsewhere."""
    a, b = rng.choice(sorted(table.plus))
    plus = dict(table.plus)
    choice = rng.choice([c for c in range(table.size + 1) if c != plus[(a, b)]])
    if choice == table.size:
        del plus[(a, b)]
    else:
        plus[(a, b)] = choice
    return table.with_plus(plus)
