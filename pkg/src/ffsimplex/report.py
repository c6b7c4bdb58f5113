"""Report assembly and lossless JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

SCHEMA = 'ffsimplex-report/1'
MAX_SAFE_INT = 2 ** 53


def clean(obj):
    """JSON-ready copy: integers above 2^53 become strings, reals keep 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [clean(v) for v in items]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        v = int(obj)
        return str(v) if abs(v) > MAX_SAFE_INT else v
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return None
        return float(f'{v:.12g}')
    return obj


def make_report(command, config, metrics, flags, wall_time=None):
    report = {
        'schema': SCHEMA,
        'command': command,
        'config': config,
        'metrics': metrics,
        'flags': {k: bool(v) for k, v in flags.items()},
        'passed': all(bool(v) for v in flags.values()),
    }
    if wall_time is not None:
        report['wall_time'] = wall_time
    return clean(report)


def _flatten(obj, prefix=''):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f'{prefix}.{k}' if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f'{prefix}.{i}')
    else:
        yield prefix, json.dumps(obj) if isinstance(obj, list) else obj


def render(report, fmt='json') -> str:
    if fmt == 'json':
        return json.dumps(report, indent=2) + '\n'
    if fmt == 'csv':
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(['key', 'value'])
        for key, value in _flatten(report):
            writer.writerow([key, '' if value is None else value])
        return buf.getvalue()
    raise ValueError(f'unknown format {fmt!r}')
