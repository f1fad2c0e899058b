"""CSV and JSON artifacts.

Datasets are CSV with a header row ``n1_a1,...,n1_am,n2_a1,...`` and one
sample per row.  Square matrices are header-less CSV.  Floats are written
with ``repr`` so files round-trip exactly and reruns are byte-identical.
Node numbers in files are one-based.
"""

import csv
import json
from pathlib import Path

import numpy as np

from .covariance import MultiAttributeDataset
from .exceptions import ParseError

__all__ = [
    "write_dataset",
    "read_dataset",
    "read_table",
    "write_matrix",
    "read_matrix",
    "write_edges",
    "write_rows",
    "write_json",
    "read_json",
    "edges_to_json",
    "edges_from_json",
]


def _fmt(v):
    return repr(float(v))


def _open_w(path):
    path = Path(path)
    try:
        return path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def write_dataset(path, data):
    with _open_w(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(data.column_names())
        for row in data.samples:
            w.writerow([_fmt(v) for v in row])


def _read_rows(path):
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            return list(csv.reader(fh))
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc


def _parse_numeric(rows, path, first_line):
    out = []
    width = None
    for offset, row in enumerate(rows):
        lineno = first_line + offset
        if not row or all(not c.strip() for c in row):
            continue
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"{path}:{lineno}: expected {width} fields, found {len(row)}")
        try:
            out.append([float(c) for c in row])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-numeric field in {row!r}") from None
    if not out:
        raise ParseError(f"{path}: no data rows")
    arr = np.array(out)
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"{path}: non-finite values are not supported")
    return arr


def read_dataset(path, m):
    """Read a dataset CSV; the header row is required."""
    rows = _read_rows(path)
    if not rows:
        raise ParseError(f"{path}:1: empty file")
    header = rows[0]
    try:
        [float(c) for c in header]
    except ValueError:
        pass
    else:
        raise ParseError(f"{path}:1: missing header row")
    arr = _parse_numeric(rows[1:], path, first_line=2)
    if arr.shape[1] != len(header):
        raise ParseError(f"{path}:2: header has {len(header)} columns, data has {arr.shape[1]}")
    if arr.shape[1] % m:
        raise ValueError(f"{path}: column count {arr.shape[1]} is not a multiple of m={m}")
    return MultiAttributeDataset(arr, m)


def read_table(path):
    """Read a headed numeric CSV; returns ``(header, array)``."""
    rows = _read_rows(path)
    if not rows:
        raise ParseError(f"{path}:1: empty file")
    arr = _parse_numeric(rows[1:], path, first_line=2)
    if arr.shape[1] != len(rows[0]):
        raise ParseError(f"{path}:2: header has {len(rows[0])} columns, data has {arr.shape[1]}")
    return [h.strip() for h in rows[0]], arr


def write_matrix(path, M):
    with _open_w(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(M):
            w.writerow([_fmt(v) for v in row])


def read_matrix(path):
    return _parse_numeric(_read_rows(path), path, first_line=1)


def write_edges(path, edges, norms):
    """``k,l,norm`` rows (one-based nodes) sorted by node pair."""
    with _open_w(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "l", "norm"])
        for k, l in sorted(edges):
            w.writerow([k + 1, l + 1, _fmt(norms[k, l])])


def write_rows(path, header, rows):
    """Headed CSV; float cells are written with ``repr``."""
    with _open_w(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])


def write_json(path, obj):
    with _open_w(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from None


def edges_to_json(edges):
    return [[k + 1, l + 1] for k, l in sorted(edges)]


def edges_from_json(pairs):
    out = set()
    for pair in pairs:
        k, l = (int(v) - 1 for v in pair)
        out.add((min(k, l), max(k, l)))
    return frozenset(out)
