"""CSV tables and JSON summaries emitted by experiments"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Tuple

import numpy as np

from .files import PathLike, atomic_write_text

CSV_SCHEMA = "randwave-csv v1"


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def format_csv(experiment: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    CSV text with a schema comment line, a header row and repr-exact floats

    The output depends only on the values, so identical runs give identical bytes.
    """
    buffer = io.StringIO()
    buffer.write(f"# {CSV_SCHEMA} {experiment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row of {len(row)} cells for {len(columns)} columns")
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def write_csv(path: PathLike, experiment: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    return atomic_write_text(path, format_csv(experiment, columns, rows))


def read_csv(path: PathLike) -> Tuple[str, List[str], List[List[float]]]:
    """Experiment name, column names and float rows of a randwave CSV"""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    prefix = f"# {CSV_SCHEMA} "
    if not lines or not lines[0].startswith(prefix):
        raise ValueError(f"{path} is not a {CSV_SCHEMA} file")
    reader = csv.reader(lines[1:])
    columns = next(reader)
    rows = [[float(cell) for cell in row] for row in reader]
    return lines[0][len(prefix):], columns, rows


def _to_builtin(obj: Any) -> Any:
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def _finite(obj: Any) -> Any:
    """Replace non-finite floats by strings so the output stays strict JSON"""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def format_json(payload: Any) -> str:
    normalized = json.loads(json.dumps(payload, default=_to_builtin))
    return json.dumps(_finite(normalized), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: PathLike, payload: Any) -> Path:
    return atomic_write_text(path, format_json(payload))
