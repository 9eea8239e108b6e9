import json
from fractions import Fraction

import pytest

from corpus import chain
from init import get_log_root, get_run_log_dir
from provider import get_config, reset_config, set_commute_mode, set_log_directory, update_config
from report import Timings, build_report, content_hash, dumps
from table import validate_axioms


def test_report_envelope():
    report = build_report('validate', {'axioms': validate_axioms(chain(2))}, 'c.pea', 'text')
    assert report['tool'] == 'pealab'
    assert report['version'] == 'v1.0.0'
    assert report['input'] == {'name': 'c.pea', 'sha256': content_hash('text')}
    assert report['axioms'] == {'passed': True, 'violations': []}


def test_rationals_become_strings():
    report = build_report('hom', {'value': Fraction(2), 'pair': (Fraction(1, 2), 3)})
    assert report['value'] == '2/1'
    assert report['pair'] == ['1/2', 3]


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        build_report('hom', {'value': 0.5})


def test_dumps_sorts_keys():
    text = dumps({'b': 1, 'a': Fraction(1, 3)})
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {'a': '1/3', 'b': 1}


def test_timings_are_opt_in():
    timings = Timings()
    with timings.step('load'):
        pass
    assert 'timing' not in build_report('analyze', {}, timings=timings)
    update_config(include_timing=True)
    assert set(build_report('analyze', {}, timings=timings)['timing']) == {'load'}


def test_config_accessors():
    update_config(witness_cap=2)
    assert get_config().witness_cap == 2
    with pytest.raises(ValueError):
        update_config(colour='blue')
    with pytest.raises(ValueError):
        set_commute_mode('loose')
    reset_config()
    assert get_config().witness_cap == 8


def test_run_log_directory(tmp_path):
    assert get_run_log_dir() == get_log_root()
    set_log_directory(str(tmp_path))
    assert get_run_log_dir() == tmp_path
