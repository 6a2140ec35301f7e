"""Coordinate charts and exact rational points."""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import PoisgeoError

_NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


@dataclass(frozen=True)
class Chart:
    """An ordered tuple of coordinate names; everything lives over one of these."""

    names: tuple

    def __init__(self, names):
        names = tuple(names)
        if not names:
            raise PoisgeoError("chart needs at least one coordinate")
        if len(set(names)) != len(names):
            raise PoisgeoError(f"duplicate coordinate names in {names}")
        for nm in names:
            if not _NAME_RE.match(nm):
                raise PoisgeoError(f"bad coordinate name {nm!r}")
        object.__setattr__(self, "names", names)

    @property
    def dim(self):
        return len(self.names)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise PoisgeoError(f"{name!r} is not a coordinate of {self}") from None

    def __repr__(self):
        return f"Chart({', '.join(self.names)})"


def as_point(chart, coords):
    """Normalize a point to a tuple of Fractions of the chart dimension.

    Accepts ints, Fractions, and 'p/q' strings.
    """
    pt = tuple(Fraction(c) for c in coords)
    if len(pt) != chart.dim:
        raise PoisgeoError(
            f"point has {len(pt)} coordinates, chart {chart} has {chart.dim}"
        )
    return pt
