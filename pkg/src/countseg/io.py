"""Input parsing and the self-describing result document.

Counts come in as plain text, one observation per line (blank lines and
'#' comments ignored), or as a named column of a headered CSV.  Results
go out as a versioned key-value/section document ("countseg-result v1")
that round-trips every number bit-identically via repr/float.  Writes are
atomic: temp file in the target directory, then rename.
"""

from __future__ import annotations

import csv
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError

RESULT_MAGIC = "countseg-result v1"


def load_counts(path, csv_column: str | None = None) -> np.ndarray:
    """Read a series from a text or CSV file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if csv_column is not None:
        return _load_csv_column(path, text, csv_column)
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: not a number: {line!r}") from exc
    if not values:
        raise InputError(f"{path}: no observations found")
    return np.asarray(values, dtype=np.float64)


def _load_csv_column(path, text, column):
    reader = csv.DictReader(text.splitlines())
    if reader.fieldnames is None or column not in reader.fieldnames:
        raise InputError(f"{path}: CSV has no column named {column!r}")
    values = []
    for lineno, row in enumerate(reader, start=2):
        raw = (row.get(column) or "").strip()
        if not raw:
            continue
        try:
            values.append(float(raw))
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: not a number: {raw!r}") from exc
    if not values:
        raise InputError(f"{path}: no observations in column {column!r}")
    return np.asarray(values, dtype=np.float64)


@dataclass
class ResultDoc:
    """In-memory form of a segmentation result document."""

    n: int
    model: str
    kmax: int
    phi: float | None = None
    phi_mode: str | None = None  # "fixed" | "auto"
    h0: int | None = None
    time_seconds: float | None = None
    costs: list[float] = field(default_factory=list)  # index k-1
    breakpoints: list[list[int]] = field(default_factory=list)
    params: list[list[float]] = field(default_factory=list)
    selection: dict | None = None


def _fmt(x) -> str:
    return repr(float(x))


def write_result(doc: ResultDoc, path) -> None:
    lines = [RESULT_MAGIC]
    lines.append(f"n {doc.n}")
    lines.append(f"model {doc.model}")
    lines.append(f"kmax {doc.kmax}")
    if doc.phi is not None:
        lines.append(f"phi {_fmt(doc.phi)}")
    if doc.phi_mode is not None:
        lines.append(f"phi_mode {doc.phi_mode}")
    if doc.h0 is not None:
        lines.append(f"h0 {doc.h0}")
    if doc.time_seconds is not None:
        lines.append(f"time_seconds {_fmt(doc.time_seconds)}")
    lines.append("[costs]")
    for k, c in enumerate(doc.costs, start=1):
        lines.append(f"{k} {_fmt(c)}")
    lines.append("[breakpoints]")
    for k, bp in enumerate(doc.breakpoints, start=1):
        lines.append(" ".join([str(k)] + [str(b) for b in bp]))
    lines.append("[params]")
    for k, ps in enumerate(doc.params, start=1):
        lines.append(" ".join([str(k)] + [_fmt(p) for p in ps]))
    if doc.selection is not None:
        sel = doc.selection
        lines.append("[selection]")
        lines.append(f"criterion {sel['criterion']}")
        lines.append(f"k_hat {sel['k_hat']}")
        if sel.get("beta") is not None:
            lines.append(f"beta {_fmt(sel['beta'])}")
        lines.append("[selection_values]")
        for k, v in enumerate(sel["values"], start=1):
            lines.append(f"{k} {_fmt(v)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_result(path) -> ResultDoc:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or lines[0].strip() != RESULT_MAGIC:
        raise InputError(f"{path}: not a {RESULT_MAGIC!r} document")
    header: dict[str, str] = {}
    sections: dict[str, list[str]] = {}
    current: list[str] | None = None
    for raw in lines[1:]:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = sections.setdefault(line[1:-1], [])
            continue
        if current is None:
            key, _, value = line.partition(" ")
            header[key] = value.strip()
        else:
            current.append(line)
    try:
        doc = ResultDoc(
            n=int(header["n"]),
            model=header["model"],
            kmax=int(header["kmax"]),
            phi=float(header["phi"]) if "phi" in header else None,
            phi_mode=header.get("phi_mode"),
            h0=int(header["h0"]) if "h0" in header else None,
            time_seconds=float(header["time_seconds"]) if "time_seconds" in header else None,
        )
        doc.costs = [float(ln.split()[1]) for ln in sections.get("costs", [])]
        doc.breakpoints = [
            [int(b) for b in ln.split()[1:]] for ln in sections.get("breakpoints", [])
        ]
        doc.params = [
            [float(p) for p in ln.split()[1:]] for ln in sections.get("params", [])
        ]
        if "selection" in sections:
            sel: dict = {}
            for ln in sections["selection"]:
                key, _, value = ln.partition(" ")
                sel[key] = value.strip()
            sel["k_hat"] = int(sel["k_hat"])
            if "beta" in sel:
                sel["beta"] = float(sel["beta"])
            sel["values"] = [
                float(ln.split()[1]) for ln in sections.get("selection_values", [])
            ]
            doc.selection = sel
    except (KeyError, IndexError, ValueError) as exc:
        raise InputError(f"{path}: malformed result document: {exc}") from exc
    return doc


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file and rename, so failures leave no partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_tsv(path_or_stream, header: list[str], rows) -> None:
    """Plot-ready TSV with a one-line header; '-' or a stream writes stdout/stream."""
    def _emit(fh):
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(_cell(row.get(col, "")) for col in header) + "\n")

    if hasattr(path_or_stream, "write"):
        _emit(path_or_stream)
        return
    if str(path_or_stream) == "-":
        import sys

        _emit(sys.stdout)
        return
    import io as _io

    buf = _io.StringIO()
    _emit(buf)
    atomic_write_text(path_or_stream, buf.getvalue())


def _cell(value) -> str:
    if isinstance(value, float):
        return _fmt(value)
    return str(value)
