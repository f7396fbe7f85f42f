import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, NamedTuple, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ShapeMismatchError, ValidationError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Cell = Union[int, float, str]


class CsvTable(NamedTuple):
    metadata: Dict[str, str]
    columns: Tuple[str, ...]
    rows: List[Tuple[Cell, ...]]


def format_value(value: Any) -> str:
    """
    Floats use `repr`, the shortest text that reads back to the same double.
    """
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))

    if isinstance(value, (int, np.integer)):
        return str(int(value))

    if isinstance(value, (float, np.floating)):
        return repr(float(value))

    return str(value)


def parse_value(text: str) -> Cell:
    try:
        return int(text)

    except ValueError:
        pass

    try:
        return float(text)

    except ValueError:
        return text


def _metadata_lines(metadata: Mapping[str, str]):
    return "".join(f"# {key}={value}\n" for key, value in metadata.items())


def dumps_csv(
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
    metadata: Mapping[str, str],
) -> str:
    """
    `# key=value` metadata lines, a header row, then one line per row.
    """
    buffer = io.StringIO()
    buffer.write(_metadata_lines(metadata))

    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)

    for row in rows:
        if len(row) != len(columns):
            raise ShapeMismatchError(
                f"Row has {len(row)} values for {len(columns)} columns"
            )

        writer.writerow([format_value(value) for value in row])

    return buffer.getvalue()


def _split_metadata(text: str) -> Tuple[Dict[str, str], List[str]]:
    metadata: Dict[str, str] = {}
    body: List[str] = []

    for line in text.splitlines():
        if not body and line.startswith("#"):
            key, separator, value = line[1:].strip().partition("=")

            if not separator:
                raise ValidationError(f"Malformed metadata line: {line!r}")

            metadata[key] = value
            continue

        if line.strip():
            body.append(line)

    return metadata, body


def loads_csv(text: str):
    metadata, body = _split_metadata(text)

    if not body:
        raise ValidationError("CSV has no header row")

    reader = csv.reader(body)
    columns = tuple(next(reader))
    rows = [tuple(parse_value(cell) for cell in row) for row in reader]

    return CsvTable(metadata=metadata, columns=columns, rows=rows)


def dumps_json(payload: Mapping[str, Any], metadata: Mapping[str, str]) -> str:
    if "meta" in payload:
        raise ValidationError("Payload must not define a 'meta' key")

    return json.dumps({"meta": dict(metadata), **payload}, indent=2, sort_keys=True) + "\n"


def loads_json(text: str) -> Tuple[Dict[str, str], Dict[str, Any]]:
    data = json.loads(text)

    if not isinstance(data, dict):
        raise ValidationError("Expected a JSON object")

    metadata = data.pop("meta", {})

    return metadata, data


def dumps_matrix(matrix: ArrayLike, metadata: Mapping[str, str]) -> str:
    """
    A numeric matrix: metadata lines, a `rows,cols` dimension line, then the
    rows. Vectors are written as one column.
    """
    array = np.asarray(matrix, dtype=float)

    if array.ndim == 1:
        array = array[:, None]

    if array.ndim != 2:
        raise ShapeMismatchError(f"Expected a matrix, got shape {array.shape}")

    lines = [f"{array.shape[0]},{array.shape[1]}"]
    lines.extend(",".join(format_value(value) for value in row) for row in array)

    return _metadata_lines(metadata) + "\n".join(lines) + "\n"


def loads_matrix(text: str) -> Tuple[Dict[str, str], NDArray[np.float64]]:
    metadata, body = _split_metadata(text)

    if not body:
        raise ValidationError("Matrix file has no dimension line")

    try:
        rows, cols = (int(part) for part in body[0].split(","))
        values = [[float(cell) for cell in line.split(",")] for line in body[1:]]

    except ValueError as e:
        raise ValidationError(f"Malformed matrix file: {e}") from e

    if len(values) != rows or any(len(row) != cols for row in values):
        raise ShapeMismatchError(
            f"Matrix file declares ({rows}, {cols}) but the rows do not match"
        )

    return metadata, np.array(values, dtype=float).reshape(rows, cols)


def write_text(path: PathLike, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")

    logger.info("Wrote %s", path)


def read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")

    except OSError as e:
        raise ValidationError(f"Cannot read {path}: {e.strerror}") from e
