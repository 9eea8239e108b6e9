import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from init import GRP_SUFFIX, PEA_SUFFIX, PMV_SUFFIX, STATE_SUFFIX, WINDOW_SUFFIX
from pmv import PmvTable
from pogroup import (FreeAbelian, LexZ, PoGroupPresentation, PresentationError, SemidirectZxZ2,
                     WindowTable, element_label)
from rational import format_rational, parse_rational
from statespace import StateVector, state_from_mapping
from table import FiniteTable, StructuralError, Sum


class ParseError(Exception):
    """Raised for malformed input, with the 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = '<text>'):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.source = source


_KEY_PATTERN = re.compile(r'^([A-Za-z][\w-]*)\s*:(.*)$')
_ROW_PATTERN = re.compile(r'^(oplus|neg)\s+(\S+)\s*:(.*)$')


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    """Yield ``(line number, content)`` with comments and blank lines removed."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split('#', 1)[0].rstrip()
        if content.strip():
            yield number, content


def _tokens(content: str, offset: int = 0) -> List[Tuple[str, int]]:
    return [(m.group(0), m.start() + 1 + offset) for m in re.finditer(r'\S+', content)]


def _value_offset(content: str) -> int:
    return content.index(':') + 1


class _Labels:
    """Element labels of a file, resolved with their positions."""

    def __init__(self, source: str):
        self.source = source
        self.names: List[str] = []
        self.index: Dict[str, int] = {}

    def define(self, tokens: Sequence[Tuple[str, int]], line: int) -> None:
        for token, column in tokens:
            if token in self.index:
                raise ParseError(f"Duplicate element {token!r}", line, column, self.source)
            if token in ('+', '='):
                raise ParseError(f"Invalid element name {token!r}", line, column, self.source)
            self.index[token] = len(self.names)
            self.names.append(token)

    def resolve(self, token: str, line: int, column: int) -> int:
        if not self.names:
            raise ParseError("'elements:' must come first", line, column, self.source)
        try:
            return self.index[token]
        except KeyError:
            raise ParseError(f"Unknown element {token!r}", line, column, self.source)


@dataclass(frozen=True)
class _TableText:
    labels: Tuple[str, ...]
    sums: Tuple[Tuple[int, int, int], ...]
    zero: int
    one: int
    name: Optional[str]
    unknown: FrozenSet[Sum]
    positions: Dict[Sum, Tuple[int, int]]

    def build(self, source: str) -> FiniteTable:
        try:
            return FiniteTable.build(len(self.labels), self.sums, zero=self.zero, one=self.one,
                                     name=self.name, labels=self.labels)
        except StructuralError as e:
            line, column = self.positions.get(e.cell, (1, 1))
            raise ParseError(str(e), line, column, source)


def _parse_table_text(text: str, source: str, allow_unknown: bool) -> _TableText:
    labels = _Labels(source)
    sums = []
    unknown = set()
    positions: Dict[Sum, Tuple[int, int]] = {}
    defined: Dict[Sum, int] = {}
    clashes = set()
    header: Dict[str, Tuple[str, int, int]] = {}
    for line, content in _lines(text):
        match = _KEY_PATTERN.match(content.strip())
        if match:
            key = match.group(1)
            offset = _value_offset(content)
            tokens = _tokens(content[offset:], offset)
            if key == 'elements':
                labels.define(tokens, line)
            elif key in ('zero', 'one'):
                if len(tokens) != 1:
                    raise ParseError(f"'{key}:' takes one element", line, offset + 1, source)
                header[key] = (tokens[0][0], line, tokens[0][1])
            elif key == 'name':
                header['name'] = (content[offset:].strip(), line, offset + 1)
            elif key == 'unknown' and allow_unknown:
                if len(tokens) != 2:
                    raise ParseError("'unknown:' takes two elements", line, offset + 1, source)
                unknown.add((labels.resolve(tokens[0][0], line, tokens[0][1]),
                             labels.resolve(tokens[1][0], line, tokens[1][1])))
            else:
                raise ParseError(f"Unknown key {key!r}", line, 1, source)
            continue

        tokens = _tokens(content)
        if len(tokens) != 5 or tokens[1][0] != '+' or tokens[3][0] != '=':
            raise ParseError("Expected 'a + b = c'", line, tokens[0][1], source)
        a, b, c = (labels.resolve(token, line, column) for token, column in (tokens[0], tokens[2], tokens[4]))
        if (a, b) not in clashes:
            positions[(a, b)] = (line, tokens[0][1])
            if defined.setdefault((a, b), c) != c:
                clashes.add((a, b))
        sums.append((a, b, c))

    if not labels.names:
        raise ParseError("Missing 'elements:'", 1, 1, source)
    zero = labels.resolve(*header['zero']) if 'zero' in header else 0
    one = labels.resolve(*header['one']) if 'one' in header else len(labels.names) - 1
    name = header['name'][0] if 'name' in header else None
    return _TableText(tuple(labels.names), tuple(sums), zero, one, name, frozenset(unknown), positions)


def parse_pea(text: str, source: str = '<text>') -> FiniteTable:
    """Parse a ``.pea`` table.

    Raises:
        ParseError: If the text is malformed
    """
    return _parse_table_text(text, source, allow_unknown=False).build(source)


def parse_window(text: str, source: str = '<text>') -> Tuple[FiniteTable, FrozenSet[Sum]]:
    parsed = _parse_table_text(text, source, allow_unknown=True)
    return parsed.build(source), parsed.unknown


def parse_pmv(text: str, source: str = '<text>') -> PmvTable:
    """Parse a ``.pmv`` table: ``oplus a:`` rows and ``neg a: a⁻ a˜`` lines.

    Raises:
        ParseError: If the text is malformed or a row is missing
    """
    labels = _Labels(source)
    header: Dict[str, Tuple[str, int, int]] = {}
    rows: Dict[int, Tuple[int, ...]] = {}
    negations: Dict[int, Tuple[int, int]] = {}
    last_line = 1
    for line, content in _lines(text):
        last_line = line
        stripped = content.strip()
        row_match = _ROW_PATTERN.match(stripped)
        if row_match:
            kind, label = row_match.group(1), row_match.group(2)
            offset = _value_offset(content)
            element = labels.resolve(label, line, content.index(label) + 1)
            tokens = _tokens(content[offset:], offset)
            values = tuple(labels.resolve(token, line, column) for token, column in tokens)
            if kind == 'oplus':
                if len(values) != len(labels.names):
                    raise ParseError(f"Row of {label!r} needs {len(labels.names)} entries",
                                     line, offset + 1, source)
                rows[element] = values
            else:
                if len(values) != 2:
                    raise ParseError(f"'neg {label}:' takes two elements", line, offset + 1, source)
                negations[element] = (values[0], values[1])
            continue
        key_match = _KEY_PATTERN.match(stripped)
        if not key_match:
            raise ParseError("Expected 'key: value', 'oplus a: ...' or 'neg a: ...'", line, 1, source)
        key = key_match.group(1)
        offset = _value_offset(content)
        tokens = _tokens(content[offset:], offset)
        if key == 'elements':
            labels.define(tokens, line)
        elif key in ('zero', 'one') and len(tokens) == 1:
            header[key] = (tokens[0][0], line, tokens[0][1])
        elif key == 'name':
            header['name'] = (content[offset:].strip(), line, offset + 1)
        else:
            raise ParseError(f"Unexpected {key!r} line", line, 1, source)

    n = len(labels.names)
    if not n:
        raise ParseError("Missing 'elements:'", 1, 1, source)
    for a in range(n):
        if a not in rows:
            raise ParseError(f"Missing 'oplus {labels.names[a]}:' row", last_line, 1, source)
        if a not in negations:
            raise ParseError(f"Missing 'neg {labels.names[a]}:' line", last_line, 1, source)
    zero = labels.resolve(*header['zero']) if 'zero' in header else 0
    one = labels.resolve(*header['one']) if 'one' in header else n - 1
    return PmvTable(size=n, oplus=tuple(rows[a] for a in range(n)),
                    neg_minus=tuple(negations[a][0] for a in range(n)),
                    neg_tilde=tuple(negations[a][1] for a in range(n)),
                    zero=zero, one=one, name=header['name'][0] if 'name' in header else None,
                    labels=tuple(labels.names))


@dataclass(frozen=True)
class GroupFile:
    group: PoGroupPresentation
    unit: Tuple[int, ...]


def _integers(tokens: Sequence[Tuple[str, int]], line: int, source: str) -> Tuple[int, ...]:
    values = []
    for token, column in tokens:
        try:
            values.append(int(token))
        except ValueError:
            raise ParseError(f"Expected an integer, got {token!r}", line, column, source)
    return tuple(values)


def _matrix(content: str, line: int, offset: int, source: str) -> Tuple[Tuple[int, ...], ...]:
    rows = []
    position = offset
    for chunk in content[offset:].split(';'):
        rows.append(_integers(_tokens(chunk, position), line, source))
        position += len(chunk) + 1
    return tuple(row for row in rows if row)


def parse_grp(text: str, source: str = '<text>') -> GroupFile:
    """Parse a ``.grp`` presentation with its unit.

    Raises:
        ParseError: If the text is malformed or describes no valid presentation
    """
    fields: Dict[str, Tuple[str, int, int]] = {}
    for line, content in _lines(text):
        match = _KEY_PATTERN.match(content.strip())
        if not match:
            raise ParseError("Expected 'key: value'", line, 1, source)
        key = match.group(1)
        if key not in ('variant', 'rank', 'cone', 'rows', 'action', 'inner', 'unit', 'label'):
            raise ParseError(f"Unknown key {key!r}", line, 1, source)
        fields[key] = (content, line, _value_offset(content))

    def value(key: str) -> str:
        return fields[key][0][fields[key][2]:].strip()

    def require(key: str) -> None:
        if key not in fields:
            raise ParseError(f"Missing '{key}:'", 1, 1, source)

    def build(kind: str):
        if kind == 'free-abelian':
            require('rank')
            content, line, offset = fields['rank']
            rank = _integers(_tokens(content[offset:], offset), line, source)
            cone = value('cone') if 'cone' in fields else 'standard'
            rows = _matrix(*fields['rows'], source) if 'rows' in fields else ()
            return FreeAbelian(rank[0] if rank else 0, cone, rows)
        if kind == 'semidirect':
            action = _matrix(*fields['action'], source) if 'action' in fields else ((1, 1), (0, 1))
            return SemidirectZxZ2(tuple(tuple(row) for row in action))
        raise ParseError(f"Unknown variant {kind!r}", fields['variant'][1], fields['variant'][2] + 1, source)

    require('variant')
    require('unit')
    kind = value('variant')
    try:
        if kind == 'lex-z':
            require('inner')
            variant = LexZ(build(value('inner')))
        else:
            variant = build(kind)
    except PresentationError as e:
        raise ParseError(str(e), fields['variant'][1], 1, source)
    content, line, offset = fields['unit']
    unit = _integers(_tokens(content[offset:], offset), line, source)
    group = PoGroupPresentation(variant, value('label') if 'label' in fields else '')
    if len(unit) != group.rank:
        raise ParseError(f"Unit needs {group.rank} coordinates", line, offset + 1, source)
    return GroupFile(group=group, unit=unit)


def parse_state(text: str, table: FiniteTable, source: str = '<text>') -> StateVector:
    """Parse ``element = p/q`` lines; zero and one may be omitted.

    Raises:
        ParseError: If a line or value is malformed
        StateValidationError: If the values do not form a state, naming the sum
    """
    values: Dict[int, Fraction] = {}
    for line, content in _lines(text):
        left, equals, right = content.partition('=')
        label, value = left.strip(), right.strip()
        column = len(left) - len(left.lstrip()) + 1
        value_column = len(left) + 2 + len(right) - len(right.lstrip())
        if not equals or not label or not value or len(label.split()) > 1:
            raise ParseError("Expected 'element = p/q'", line, column, source)
        if label not in table.labels:
            raise ParseError(f"Unknown element {label!r}", line, column, source)
        try:
            values[table.lookup(label)] = parse_rational(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"Not an exact rational: {value!r}", line, value_column, source)
    return state_from_mapping(table, values)


def format_pea(table: FiniteTable, header: Sequence[str] = (), unknown: Sequence[Sum] = ()) -> str:
    """Write a table; identity sums with zero are left implicit."""
    lines = [f"# {h}" for h in header]
    if table.name:
        lines.append(f"name: {table.name}")
    lines.append("elements: " + ' '.join(table.label(a) for a in table.elements))
    lines.append(f"zero: {table.label(table.zero)}")
    lines.append(f"one: {table.label(table.one)}")
    for (a, b), c in sorted(table.plus.items()):
        if (a == table.zero and c == b) or (b == table.zero and c == a):
            continue
        lines.append(f"{table.label(a)} + {table.label(b)} = {table.label(c)}")
    for a, b in sorted(unknown):
        lines.append(f"unknown: {table.label(a)} {table.label(b)}")
    return '\n'.join(lines) + '\n'


def format_window(window: WindowTable, header: Sequence[str] = ()) -> str:
    return format_pea(window.table, header, sorted(window.unknown))


def format_pmv(t: PmvTable, header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    if t.name:
        lines.append(f"name: {t.name}")
    lines.append("elements: " + ' '.join(t.label(x) for x in range(t.size)))
    lines.append(f"zero: {t.label(t.zero)}")
    lines.append(f"one: {t.label(t.one)}")
    for x in range(t.size):
        lines.append(f"oplus {t.label(x)}: " + ' '.join(t.label(y) for y in t.oplus[x]))
    for x in range(t.size):
        lines.append(f"neg {t.label(x)}: {t.label(t.neg_minus[x])} {t.label(t.neg_tilde[x])}")
    return '\n'.join(lines) + '\n'


def _format_variant(variant, prefix: str = '') -> List[str]:
    if isinstance(variant, FreeAbelian):
        lines = [f"{prefix}: free-abelian", f"rank: {variant.rank}", f"cone: {variant.cone}"]
        if variant.rows:
            lines.append("rows: " + ' ; '.join(' '.join(map(str, row)) for row in variant.rows))
        return lines
    if isinstance(variant, SemidirectZxZ2):
        return [f"{prefix}: semidirect",
                "action: " + ' ; '.join(' '.join(map(str, row)) for row in variant.action)]
    raise PresentationError(f"Cannot write nested variant {variant}")


def format_grp(group: PoGroupPresentation, unit: Sequence[int], header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    if group.label:
        lines.append(f"label: {group.label}")
    if isinstance(group.variant, LexZ):
        lines.append("variant: lex-z")
        lines.extend(_format_variant(group.variant.inner, 'inner'))
    else:
        lines.extend(_format_variant(group.variant, 'variant'))
    lines.append("unit: " + ' '.join(map(str, unit)))
    return '\n'.join(lines) + '\n'


def format_state(table: FiniteTable, state: StateVector) -> str:
    return ''.join(f"{table.label(a)} = {format_rational(state[a])}\n" for a in table.elements)


def read_text(path: Union[str, Path]) -> str:
    """Read an input file.

    Raises:
        ParseError: If the file cannot be read
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except (FileNotFoundError, IOError, UnicodeDecodeError) as e:
        logging.error(f"Failed to read {path}: {e}")
        raise ParseError(f"Cannot read file: {e}", 0, 0, str(path))


def write_text(path: Union[str, Path], text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


def load(path: Union[str, Path]):
    """Load a ``.pea``, ``.window``, ``.pmv`` or ``.grp`` file by suffix.

    Raises:
        ParseError: On unreadable or malformed input, or an unknown suffix
    """
    path = Path(path)
    text = read_text(path)
    suffix = path.suffix
    if suffix == PEA_SUFFIX:
        return parse_pea(text, str(path))
    if suffix == WINDOW_SUFFIX:
        return parse_window(text, str(path))[0]
    if suffix == PMV_SUFFIX:
        return parse_pmv(text, str(path))
    if suffix == GRP_SUFFIX:
        return parse_grp(text, str(path))
    raise ParseError(f"Unknown file type {suffix!r} (expected {PEA_SUFFIX}, {WINDOW_SUFFIX}, "
                     f"{PMV_SUFFIX} or {GRP_SUFFIX})", 0, 0, str(path))


def load_state(path: Union[str, Path], table: FiniteTable) -> StateVector:
    path = Path(path)
    if path.suffix != STATE_SUFFIX:
        logging.warning(f"{path} does not have the {STATE_SUFFIX} suffix")
    return parse_state(read_text(path), table, str(path))

