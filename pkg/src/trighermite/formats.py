"""Line-oriented text documents for samples and splines.

Both start with ``format=trig-hermite/1`` and a ``kind`` line, followed by
``key=value`` lines. Numeric rows are space separated and written with 17
significant digits, which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import PreconditionError
from .hermite_spline import HermiteSpline, MeanLedger
from .trig_interp import SampleSet, UniformGrid

__all__ = ["FORMAT", "FormatError", "dump_samples", "load_samples", "dump_spline", "load_spline"]

FORMAT = "trig-hermite/1"


class FormatError(PreconditionError):
    """Malformed or inconsistent document."""


def _num(x):
    return format(float(x), ".17g")


def _row(values):
    return " ".join(_num(v) for v in values)


def _parse(text, kind):
    fields = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"line {lineno}: expected key=value")
        key = key.strip()
        if key in fields:
            raise FormatError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = value.strip()
    if fields.get("format") != FORMAT:
        raise FormatError(f"missing or unsupported format header (want format={FORMAT})")
    if fields.get("kind") != kind:
        raise FormatError(f"expected kind={kind}, got {fields.get('kind')!r}")
    return fields


def _get(fields, key, conv=str):
    if key not in fields:
        raise FormatError(f"missing key {key!r}")
    try:
        return conv(fields[key])
    except ValueError as exc:
        raise FormatError(f"bad value for {key!r}: {exc}") from None


def _floats(fields, key, size):
    raw = _get(fields, key)
    try:
        arr = np.array([float(x) for x in raw.split()]) if raw else np.zeros(0)
    except ValueError as exc:
        raise FormatError(f"bad numeric row {key!r}: {exc}") from None
    if arr.size != size:
        raise FormatError(f"row {key!r} has {arr.size} values, expected {size}")
    return arr


def _grid(fields):
    p = _get(fields, "p", int)
    if p not in (1, 2):
        raise FormatError(f"p must be 1 or 2, got {p}")
    try:
        grid = UniformGrid(_get(fields, "N", int), _get(fields, "variant", int))
    except PreconditionError as exc:
        raise FormatError(str(exc)) from None
    return p, grid


def dump_samples(samples, function=None):
    grid = samples[0].grid
    lines = [f"format={FORMAT}", "kind=samples", f"p={len(samples) - 1}", f"N={grid.N}", f"variant={grid.variant}"]
    if function:
        lines.append(f"function={function}")
    lines.append("t=" + _row(grid.nodes))
    lines += [f"f{q}=" + _row(smp.values) for q, smp in enumerate(samples)]
    return "\n".join(lines) + "\n"


def load_samples(text):
    """Parse a sample document into a list of SampleSet (orders 0..p)."""
    fields = _parse(text, "samples")
    p, grid = _grid(fields)
    if "t" in fields and not np.allclose(_floats(fields, "t", grid.N), grid.nodes, rtol=0, atol=1e-12):
        raise FormatError("t row does not match the nodes of the declared grid")
    return [SampleSet(grid, q, _floats(fields, f"f{q}", grid.N)) for q in range(p + 1)]


def dump_spline(spline):
    grid = spline.grid
    lines = [
        f"format={FORMAT}",
        "kind=spline",
        f"p={spline.order}",
        f"N={grid.N}",
        f"variant={grid.variant}",
        f"tol={_num(spline.tol)}",
        f"a00={_num(spline.a00)}",
        f"mu1={_num(spline.ledger.mu1)}",
        f"mu2={_num(spline.ledger.mu2)}",
    ]
    lines += [f"a{i}=" + _row(row) for i, row in enumerate(spline.a)]
    lines += [f"b{i}=" + _row(row) for i, row in enumerate(spline.b)]
    return "\n".join(lines) + "\n"


def load_spline(text):
    fields = _parse(text, "spline")
    p, grid = _grid(fields)
    if p == 2 and grid.variant != 0:
        raise FormatError("p=2 splines require variant=0")
    n = grid.n
    a = [_floats(fields, f"a{i}", n) for i in range(p + 1)]
    b = [_floats(fields, f"b{i}", n) for i in range(p + 1)]
    ledger = MeanLedger(_get(fields, "mu1", float), _get(fields, "mu2", float))
    tol = _get(fields, "tol", float)
    if not tol >= 1e-15:
        raise FormatError(f"tol must be >= 1e-15, got {tol}")
    return HermiteSpline(p, grid, _get(fields, "a00", float), np.array(a), np.array(b), ledger, tol)
