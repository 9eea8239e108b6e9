import logging

from log import LOG_FILE, setup_logging


def test_log_file_keeps_info_and_console_keeps_warnings(tmp_path, capsys):
    path = setup_logging(tmp_path / 'run')
    assert path == tmp_path / 'run' / LOG_FILE
    logging.info('table loaded')
    logging.warning('window too small')
    logging.debug('cell 1 + 2')
    text = path.read_text(encoding='utf-8')
    assert 'table loaded' in text and 'window too small' in text
    assert 'cell 1 + 2' not in text
    err = capsys.readouterr().err
    assert 'window too small' in err
    assert 'table loaded' not in err


def test_verbose_logging(tmp_path, capsys):
    path = setup_logging(tmp_path, verbose=True)
    logging.debug('cell 1 + 2')
    logging.info('table loaded')
    assert 'cell 1 + 2' in path.read_text(encoding='utf-8')
    err = capsys.readouterr().err
    assert 'table loaded' in err
    assert 'cell 1 + 2' not in err


def test_unwritable_directory_falls_back_to_the_console(tmp_path, capsys):
    taken = tmp_path / 'taken'
    taken.write_text('', encoding='utf-8')
    assert setup_logging(taken) is None
    logging.warning('still reported')
    err = capsys.readouterr().err
    assert 'Failed to setup logging' in err
    assert 'still reported' in err
