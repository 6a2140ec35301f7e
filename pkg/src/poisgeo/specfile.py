"""On-disk manifold and foliation descriptions (JSON with expression leaves).

A manifold spec stores the upper triangle of the bivector and cometric as
expression strings; a foliation spec stores a leaf frame, tangent metric and
2-form the same way.  Loading is strict: missing keys, wrong shapes, or bad
indices raise SpecFileError (the CLI maps those to exit code 2), while parse
errors inside expressions surface as ExprSyntaxError with offsets.
"""

import hashlib
import json
from fractions import Fraction

from .chart import Chart
from .connection import CoMetric
from .errors import SpecFileError
from .foliation import TangentMetric
from .parser import parse_scalar
from .poisson import Bivector
from .reconstruct import FoliationInput
from .scalar import ScalarField
from .tensor import PForm, VectorField


class ManifoldSpec:
    """A named (chart, bivector, cometric, declared rank, samples) bundle."""

    __slots__ = ("name", "chart", "pi", "cometric", "declared_rank", "samples")

    def __init__(self, name, chart, pi, cometric, declared_rank, samples):
        self.name = name
        self.chart = chart
        self.pi = pi
        self.cometric = cometric
        self.declared_rank = declared_rank
        self.samples = tuple(tuple(Fraction(c) for c in p) for p in samples)
        if not self.samples:
            raise SpecFileError("manifold spec needs at least one sample")
        for p in self.samples:
            if len(p) != chart.dim:
                raise SpecFileError(f"sample {p} has wrong dimension")

    def to_dict(self):
        n = self.chart.dim
        return {
            "name": self.name,
            "coordinates": list(self.chart.names),
            "pi": [
                [i, j, str(self.pi.entry(i, j))]
                for i in range(n)
                for j in range(i + 1, n)
                if not self.pi.entry(i, j).is_zero
            ],
            "cometric": [
                [i, j, str(self.cometric.entry(i, j))]
                for i in range(n)
                for j in range(i, n)
                if not self.cometric.entry(i, j).is_zero
            ],
            "declared_rank": self.declared_rank,
            "samples": [[_fraction_str(c) for c in p] for p in self.samples],
        }


class FoliationSpec:
    """A named (chart, leaf frame, tangent metric, 2-form, samples) bundle."""

    __slots__ = ("name", "chart", "frame", "tangent_metric", "omega", "samples")

    def __init__(self, name, chart, frame, tangent_metric, omega, samples):
        self.name = name
        self.chart = chart
        self.frame = tuple(frame)
        self.tangent_metric = tangent_metric
        self.omega = omega
        self.samples = tuple(tuple(Fraction(c) for c in p) for p in samples)
        if not self.samples:
            raise SpecFileError("foliation spec needs at least one sample")

    def foliation_input(self):
        return FoliationInput(
            self.chart, self.frame, self.tangent_metric, self.omega, self.samples
        )


def _fraction_str(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _require(mapping, key, kind, where):
    if key not in mapping:
        raise SpecFileError(f"{where}: missing required key {key!r}")
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise SpecFileError(f"{where}: key {key!r} has the wrong type")
    return value


def _load_chart(data, where):
    coords = _require(data, "coordinates", list, where)
    if not all(isinstance(c, str) for c in coords):
        raise SpecFileError(f"{where}: coordinates must be strings")
    try:
        return Chart(coords)
    except Exception as exc:
        raise SpecFileError(f"{where}: {exc}") from None


def _load_samples(data, chart, where):
    raw = _require(data, "samples", list, where)
    samples = []
    for p in raw:
        if not isinstance(p, list) or len(p) != chart.dim:
            raise SpecFileError(f"{where}: sample {p!r} has wrong shape")
        try:
            samples.append(tuple(Fraction(str(c)) for c in p))
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecFileError(f"{where}: bad sample entry ({exc})") from None
    return samples


def _load_entries(raw, chart, where, symmetric):
    if not isinstance(raw, list):
        raise SpecFileError(f"{where}: expected a list of [i, j, expr] triples")
    out = {}
    n = chart.dim
    for item in raw:
        if (
            not isinstance(item, list)
            or len(item) != 3
            or not isinstance(item[0], int)
            or not isinstance(item[1], int)
            or not isinstance(item[2], str)
        ):
            raise SpecFileError(f"{where}: bad entry {item!r}, want [i, j, \"expr\"]")
        i, j, expr = item
        if not (0 <= i < n and 0 <= j < n and (i <= j if symmetric else i < j)):
            raise SpecFileError(f"{where}: index pair ({i}, {j}) out of range")
        if (i, j) in out:
            raise SpecFileError(f"{where}: duplicate entry ({i}, {j})")
        out[(i, j)] = parse_scalar(expr, chart)
    return out


def load_manifold_spec(data, where="manifold spec"):
    """Build a ManifoldSpec from a parsed JSON object."""
    if not isinstance(data, dict):
        raise SpecFileError(f"{where}: top level must be an object")
    name = _require(data, "name", str, where)
    chart = _load_chart(data, where)
    pi_entries = _load_entries(_require(data, "pi", list, where), chart, where, False)
    g_entries = _load_entries(
        _require(data, "cometric", list, where), chart, where, True
    )
    declared_rank = _require(data, "declared_rank", int, where)
    samples = _load_samples(data, chart, where)
    pi = Bivector.from_upper(chart, pi_entries)
    cometric = CoMetric.from_upper(chart, g_entries)
    return ManifoldSpec(name, chart, pi, cometric, declared_rank, samples)


def load_foliation_spec(data, where="foliation spec"):
    """Build a FoliationSpec from a parsed JSON object."""
    if not isinstance(data, dict):
        raise SpecFileError(f"{where}: top level must be an object")
    name = _require(data, "name", str, where)
    chart = _load_chart(data, where)
    raw_frame = _require(data, "frame", list, where)
    frame = []
    for row in raw_frame:
        if not isinstance(row, list) or len(row) != chart.dim:
            raise SpecFileError(f"{where}: frame row {row!r} has wrong shape")
        frame.append(
            VectorField(chart, [parse_scalar(str(e), chart) for e in row])
        )
    g_entries = _load_entries(
        _require(data, "tangent_metric", list, where), chart, where, True
    )
    n = chart.dim
    zero = ScalarField.zero(chart)
    g_matrix = [[zero] * n for _ in range(n)]
    for (i, j), val in g_entries.items():
        g_matrix[i][j] = val
        g_matrix[j][i] = val
    tangent = TangentMetric(chart, g_matrix)
    omega_entries = _load_entries(_require(data, "omega", list, where), chart, where, False)
    omega = PForm(chart, 2, {k: v for k, v in omega_entries.items()})
    samples = _load_samples(data, chart, where)
    return FoliationSpec(name, chart, frame, tangent, omega, samples)


def classify_spec(data):
    """'manifold' if the object has a bivector, 'foliation' if it has a frame."""
    if isinstance(data, dict) and "pi" in data:
        return "manifold"
    if isinstance(data, dict) and "frame" in data:
        return "foliation"
    raise SpecFileError("spec object has neither 'pi' nor 'frame'")


def load_spec_file(path):
    """Read a JSON spec file; returns (kind, spec, sha256-hex)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SpecFileError(f"{path}: not valid JSON ({exc})") from None
    kind = classify_spec(data)
    if kind == "manifold":
        return kind, load_manifold_spec(data, where=str(path)), digest
    return kind, load_foliation_spec(data, where=str(path)), digest


def load_samples_file(path, chart):
    """Read an override sample list (JSON array of points)."""
    with open(path, "rb") as fh:
        data = json.loads(fh.read().decode("utf-8"))
    if not isinstance(data, list):
        raise SpecFileError(f"{path}: samples override must be a JSON array")
    return _load_samples({"samples": data}, chart, str(path))
