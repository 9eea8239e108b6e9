import hashlib
import json
import logging
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterator, Optional, Union

from init import TOOL_NAME, VERSION
from provider import get_config
from rational import format_rational


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def _jsonable(value):
    """Convert report values: rationals become ``p/q`` strings, tuples lists."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, 'to_dict'):
        return _jsonable(value.to_dict())
    if isinstance(value, float):
        raise TypeError("Floating point values are not allowed in reports")
    return str(value)


class Timings:
    """Wall-clock durations per pipeline step, logged always and reported on request."""

    def __init__(self):
        self.steps: Dict[str, float] = {}

    @contextmanager
    def step(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.steps[name] = elapsed
            logging.info(f"{name} took {elapsed:.3f}s")

    def to_dict(self) -> Dict[str, str]:
        # 秒をミリ秒の整数文字列で残す
        return {name: f"{int(seconds * 1000)}ms" for name, seconds in sorted(self.steps.items())}


def build_report(command: str, sections: dict, source: Optional[Union[str, Path]] = None,
                 text: Optional[str] = None, timings: Optional[Timings] = None) -> dict:
    """Wrap report sections in the tool envelope."""
    report = {
        'tool': TOOL_NAME,
        'version': VERSION,
        'command': command,
    }
    if source is not None:
        report['input'] = {
            'name': Path(source).name,
            'sha256': content_hash(text) if text is not None else None,
        }
    report.update(sections)
    if timings is not None and get_config().include_timing:
        report['timing'] = timings.to_dict()
    return _jsonable(report)


def dumps(report: dict) -> str:
    """Serialize deterministically: sorted keys, exact rationals."""
    return json.dumps(_jsonable(report), ensure_ascii=False, indent=4, sort_keys=True)
