"""Two-user binary-input real adder channel study.

Both receivers see the integer sum of the binary inputs plus their own
Bernoulli noise, so the outputs live on {0,1,2,3}.  For this channel every
bound of the two secrecy strategies has a closed form in the entropies of a
handful of small mixtures; this module evaluates them, classifies the
resulting two-dimensional regions (secret rate of user 1 against open rate
of user 2), sweeps the input-probability grid, hulls the collected corners,
and certifies that the single-user secrecy strategy reaches points the
all-users strategy cannot.

The closed forms are self-checked against the generic table machinery in
:mod:`macwt.probability` (see ``closed_form_entropies``), and the
separation step returns an exact LP certificate.
"""

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from macwt.geometry.hull2d import (
    SeparatingLine,
    convex_hull_2d,
    distance_to_point_set,
    separate_point,
)
from macwt.probability import InputDistribution, MacWiretapChannel

Point = tuple[float, float]


@dataclass(frozen=True)
class AdderParams:
    """alpha = P(X1=1), beta = P(X2=1), q1/q2 = noise rates at Bob/Eve."""

    alpha: float
    beta: float
    q1: float
    q2: float

    def __post_init__(self):
        for name in ("alpha", "beta", "q1", "q2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")


@dataclass(frozen=True)
class AdderBounds:
    """The five rate bounds of the two 2D regions, all nonnegative with
    c1 >= a1 and c2 >= a2 guaranteed."""

    a1: float
    b: float
    c1: float
    a2: float
    c2: float


@dataclass(frozen=True)
class RegionCase:
    case_id: int
    corner_points: tuple[Point, ...]


def _plogp(p: float) -> float:
    return 0.0 if p <= 0.0 else -p * math.log2(p)


def _sum_entropy(alpha: float, beta: float, q: float) -> float:
    """Entropy of X1 + X2 + N over {0,1,2,3}."""
    return (
        _plogp((1 - alpha) * (1 - beta) * (1 - q))
        + _plogp((1 - alpha) * (1 - beta) * q + (1 - alpha) * beta * (1 - q) + alpha * (1 - beta) * (1 - q))
        + _plogp((1 - alpha) * beta * q + alpha * (1 - beta) * q + alpha * beta * (1 - q))
        + _plogp(alpha * beta * q)
    )


def _sum_entropy_given_other(p_other: float, q: float) -> float:
    """Entropy of X_other + N given one input: three conditional masses."""
    return (
        _plogp((1 - p_other) * (1 - q))
        + _plogp((1 - p_other) * q + p_other * (1 - q))
        + _plogp(p_other * q)
    )


def closed_form_entropies(params: AdderParams) -> dict[str, float]:
    """All eight entropies the region bounds consume, in bits.

    Keys: H_N1, H_N2, H_Y, H_Y_given_X1, H_Y_given_X2, H_Z, H_Z_given_X1,
    H_Z_given_X2.  Each value matches the generic computation on the
    materialised joint within 1e-12.
    """
    a, b, q1, q2 = params.alpha, params.beta, params.q1, params.q2
    return {
        "H_N1": _plogp(q1) + _plogp(1 - q1),
        "H_N2": _plogp(q2) + _plogp(1 - q2),
        "H_Y": _sum_entropy(a, b, q1),
        "H_Y_given_X1": _sum_entropy_given_other(b, q1),
        "H_Y_given_X2": _sum_entropy_given_other(a, q1),
        "H_Z": _sum_entropy(a, b, q2),
        "H_Z_given_X1": _sum_entropy_given_other(b, q2),
        "H_Z_given_X2": _sum_entropy_given_other(a, q2),
    }


def build_adder_channel(
    params: AdderParams,
) -> tuple[MacWiretapChannel, InputDistribution]:
    """Materialise the channel table and product input for given parameters.

    The two noise variables are coupled independently given the inputs; the
    region bounds only ever see the marginals to Bob and to Eve, so any
    coupling yields the same regions.
    """
    pmf = np.zeros((2, 2, 4, 4))
    for x1 in range(2):
        for x2 in range(2):
            s = x1 + x2
            for n1 in range(2):
                p1 = params.q1 if n1 else 1 - params.q1
                for n2 in range(2):
                    p2 = params.q2 if n2 else 1 - params.q2
                    pmf[x1, x2, s + n1, s + n2] += p1 * p2
    channel = MacWiretapChannel((2, 2), 4, 4, pmf)
    dist = InputDistribution(
        (
            np.array([1 - params.alpha, params.alpha]),
            np.array([1 - params.beta, params.beta]),
        )
    )
    return channel, dist


def region_bounds(params: AdderParams) -> AdderBounds:
    """Evaluate the five bounds.

    ``a1``/``a2`` are derived from ``c1``/``c2`` by subtracting the clamped
    I(X2;Y), which makes c1 >= a1 and c2 >= a2 hold exactly in floating
    point, the same chain-rule argument the closed forms come from.
    """
    h = closed_form_entropies(params)
    i_x2_y = max(0.0, h["H_Y"] - h["H_Y_given_X2"])
    b = max(0.0, h["H_Y_given_X1"] - h["H_N1"])

    c1_raw = h["H_Y"] - h["H_N1"] - h["H_Z"] + h["H_Z_given_X1"]
    a1_first = c1_raw - i_x2_y
    a1_second = h["H_Y"] - h["H_N1"] - h["H_Z"] + h["H_N2"]
    c1 = max(0.0, c1_raw)
    a1 = min(max(0.0, a1_first), max(0.0, a1_second))

    c2_raw = h["H_Y"] - h["H_N1"] - h["H_Z_given_X2"] + h["H_N2"]
    a2_raw = c2_raw - i_x2_y
    c2 = max(0.0, c2_raw)
    a2 = max(0.0, a2_raw)

    bounds = AdderBounds(a1=a1, b=b, c1=c1, a2=a2, c2=c2)
    assert bounds.c1 >= bounds.a1 and bounds.c2 >= bounds.a2
    return bounds


def region_case(bounds: AdderBounds, which: str) -> RegionCase:
    """Classify one 2D region and list its corner points.

    ``which`` selects the strategy: ``old`` uses (a1, c1); ``new1`` uses
    (a2, c2); ``b`` caps the open rate in both.  The five shapes: a point,
    a segment, a rectangle, a pentagon, a trapezoid.
    """
    if which == "old":
        a, c = bounds.a1, bounds.c1
    elif which == "new1":
        a, c = bounds.a2, bounds.c2
    else:
        raise ValueError(f"which must be 'old' or 'new1', got {which!r}")
    b = bounds.b
    if c <= 0.0:
        return RegionCase(1, ((0.0, 0.0),))
    if a <= 0.0:
        return RegionCase(2, ((0.0, 0.0), (0.0, min(b, c))))
    if b <= c - a:
        return RegionCase(3, ((0.0, 0.0), (a, 0.0), (a, b), (0.0, b)))
    if b <= c:
        return RegionCase(
            4, ((0.0, 0.0), (a, 0.0), (a, c - a), (c - b, b), (0.0, b))
        )
    return RegionCase(5, ((0.0, 0.0), (a, 0.0), (a, c - a), (0.0, c)))


@dataclass(frozen=True)
class SweepCell:
    alpha: float
    beta: float
    bounds: AdderBounds


@dataclass(frozen=True)
class SweepResult:
    q1: float
    q2: float
    delta: float
    cells: tuple[SweepCell, ...]
    hull_old: tuple[Point, ...]
    hull_new1: tuple[Point, ...]


def sweep_and_hull(q1: float, q2: float, delta: float) -> SweepResult:
    """Sweep the (alpha, beta) grid, collect case corners, hull them.

    The grid covers [0, 1] in both directions with the given step; cells are
    visited row-major in (alpha, beta), which fixes the output table order.
    """
    if not 0.0 < delta <= 0.5:
        raise ValueError(f"delta={delta} outside (0, 0.5]")
    steps = int(round(1.0 / delta)) + 1
    cells = []
    old_corners: list[Point] = []
    new_corners: list[Point] = []
    for i in range(steps):
        alpha = min(i * delta, 1.0)
        for j in range(steps):
            beta = min(j * delta, 1.0)
            params = AdderParams(alpha, beta, q1, q2)
            bounds = region_bounds(params)
            cells.append(SweepCell(alpha, beta, bounds))
            old_corners.extend(region_case(bounds, "old").corner_points)
            new_corners.extend(region_case(bounds, "new1").corner_points)
    hull_old = tuple(convex_hull_2d(old_corners))
    hull_new1 = tuple(convex_hull_2d(new_corners))
    return SweepResult(q1, q2, delta, tuple(cells), hull_old, hull_new1)


@dataclass(frozen=True)
class SeparationRecord:
    v0: Point
    line: SeparatingLine
    distance: float

    @property
    def w(self) -> tuple[float, float]:
        return self.line.w

    @property
    def t(self) -> float:
        return self.line.t


def reproduce_separation(sweep: SweepResult) -> SeparationRecord:
    """Pick the most separated extreme point of the new hull and certify it.

    Candidates are the extreme points of ``hull_new1``; each is tested for
    strict separability from ``hull_old``'s extreme points (the constraint
    cloud of the separation LP).  Among the separable ones, the point
    farthest from that cloud wins, ties broken toward larger open rate.
    Raises if no extreme point separates: the two strategies would not be
    strictly nested at this noise pair.
    """
    separable: list[tuple[Point, SeparatingLine, float]] = []
    for v in sweep.hull_new1:
        line = separate_point(v, sweep.hull_old)
        if line is not None:
            separable.append((v, line, distance_to_point_set(v, sweep.hull_old)))
    if not separable:
        raise RuntimeError(
            f"regions not strictly nested at (q1, q2)=({sweep.q1}, {sweep.q2}): "
            "no extreme point of the new hull separates from the old hull"
        )
    v, line, dist = max(separable, key=lambda item: (item[2], item[0][1]))
    return SeparationRecord(v, line, dist)


def write_sweep_csv(sweep: SweepResult, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "beta", "a1", "b", "c1", "a2", "c2"])
        for cell in sweep.cells:
            bd = cell.bounds
            writer.writerow(
                [
                    f"{cell.alpha:.10g}",
                    f"{cell.beta:.10g}",
                    repr(bd.a1),
                    repr(bd.b),
                    repr(bd.c1),
                    repr(bd.a2),
                    repr(bd.c2),
                ]
            )


def write_hull_csv(hull, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["R1s", "R2o"])
        for x, y in hull:
            writer.writerow([repr(x), repr(y)])


def write_separation_json(record: SeparationRecord, path: Path) -> None:
    doc = {
        "v0": [record.v0[0], record.v0[1]],
        "w": [record.w[0], record.w[1]],
        "t": record.t,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
