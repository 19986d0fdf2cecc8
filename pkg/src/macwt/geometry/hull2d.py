"""2D convex hulls and linear separation certificates.

Hull extraction uses Andrew's monotone chain with a cross-product tolerance,
so nearly-collinear chain points are treated as edge-interior and removed.
Separation solves the LP relaxation of the max-margin problem: feasibility
of the two margin constraint families under an L1 bound on the normal,
doubling the bound until it succeeds; hull membership is certified exactly
when it cannot.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from macwt.geometry.simplex import lp_solve
from macwt.geometry.systems import LinearInequality, LinearSystem, to_fraction

Point = tuple[float, float]


def _cross(o: Point, a: Point, b: Point) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points, tol: float = 1e-9) -> list[Point]:
    """Counterclockwise extreme points of the hull.

    Interior and edge-interior points are removed; collinear point sets
    degenerate to their two endpoints, a single repeated point to itself.
    """
    pts = sorted({(float(x), float(y)) for x, y in points})
    if not pts:
        raise ValueError("convex_hull_2d requires at least one point")
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) > 1 and _cross(lower[-2], lower[-1], p) <= tol:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) > 1 and _cross(upper[-2], upper[-1], p) <= tol:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def polygon_to_system(
    hull: list[Point], names: tuple[str, str] = ("x", "y")
) -> LinearSystem:
    """Facet inequalities of a CCW hull (edges become halfplanes).

    Degenerate hulls (segment, point) are encoded with equality rows along
    the degenerate directions.
    """
    xn, yn = names
    if len(hull) == 1:
        (px, py) = hull[0]
        rows = (
            LinearInequality({xn: 1}, "==", to_fraction(px)),
            LinearInequality({yn: 1}, "==", to_fraction(py)),
        )
        return LinearSystem(names, rows)
    if len(hull) == 2:
        (ax, ay), (bx, by) = hull
        ex, ey = bx - ax, by - ay
        rows = (
            # on the supporting line
            LinearInequality(
                {xn: to_fraction(ey), yn: to_fraction(-ex)},
                "==",
                to_fraction(ey) * to_fraction(ax) - to_fraction(ex) * to_fraction(ay),
            ),
            # between the endpoints
            LinearInequality(
                {xn: to_fraction(ex), yn: to_fraction(ey)},
                ">=",
                to_fraction(ex) * to_fraction(ax) + to_fraction(ey) * to_fraction(ay),
            ),
            LinearInequality(
                {xn: to_fraction(ex), yn: to_fraction(ey)},
                "<=",
                to_fraction(ex) * to_fraction(bx) + to_fraction(ey) * to_fraction(by),
            ),
        )
        return LinearSystem(names, rows)
    rows = []
    n = len(hull)
    for i in range(n):
        (ax, ay), (bx, by) = hull[i], hull[(i + 1) % n]
        # CCW edge (a->b): interior satisfies (b-a) x (p-a) >= 0
        cx = to_fraction(by - ay)
        cy = to_fraction(-(bx - ax))
        rhs = cx * to_fraction(ax) + cy * to_fraction(ay)
        rows.append(LinearInequality({xn: cx, yn: cy}, "<=", rhs, tag=f"edge{i}"))
    return LinearSystem(names, tuple(rows))


@dataclass(frozen=True)
class SeparatingLine:
    """Certificate w.target - t >= 1 and w.cloud_j - t <= -1 for all j.

    The exact rational certificate is kept alongside float projections so
    the margin inequalities can be re-verified without rounding."""

    w_exact: tuple[Fraction, Fraction]
    t_exact: Fraction

    @property
    def w(self) -> tuple[float, float]:
        return (float(self.w_exact[0]), float(self.w_exact[1]))

    @property
    def t(self) -> float:
        return float(self.t_exact)

    def margin_of(self, point: Point) -> Fraction:
        return (
            self.w_exact[0] * to_fraction(point[0])
            + self.w_exact[1] * to_fraction(point[1])
            - self.t_exact
        )


def _hull_membership(target: Point, cloud) -> bool:
    lam = [f"l{i}" for i in range(len(cloud))]
    rows = [
        LinearInequality({v: 1 for v in lam}, "==", 1),
        LinearInequality(
            {lam[i]: to_fraction(p[0]) for i, p in enumerate(cloud) if p[0] != 0},
            "==",
            to_fraction(target[0]),
        ),
        LinearInequality(
            {lam[i]: to_fraction(p[1]) for i, p in enumerate(cloud) if p[1] != 0},
            "==",
            to_fraction(target[1]),
        ),
    ]
    system = LinearSystem(tuple(lam), tuple(rows))
    return lp_solve(system, {}, "max", nonneg="all").status == "optimal"


def separate_point(target: Point, cloud_extremes) -> SeparatingLine | None:
    """Find (w, t) strictly separating ``target`` from a point cloud.

    Returns ``None`` (inseparable) exactly when the target lies in the
    cloud's convex hull, certified by an exact membership LP.  Otherwise the
    margin LP is solved with ``|w|_1 <= B``, doubling B until feasible.
    """
    cloud = [(float(x), float(y)) for x, y in cloud_extremes]
    if not cloud:
        raise ValueError("cloud must be nonempty")
    if _hull_membership(target, cloud):
        return None
    names = ("wx_pos", "wx_neg", "wy_pos", "wy_neg", "t")
    tx, ty = to_fraction(target[0]), to_fraction(target[1])
    bound = Fraction(1)
    while True:
        rows = [
            LinearInequality(
                {"wx_pos": tx, "wx_neg": -tx, "wy_pos": ty, "wy_neg": -ty, "t": -1},
                ">=",
                1,
            )
        ]
        for j, (px, py) in enumerate(cloud):
            fx, fy = to_fraction(px), to_fraction(py)
            rows.append(
                LinearInequality(
                    {"wx_pos": fx, "wx_neg": -fx, "wy_pos": fy, "wy_neg": -fy, "t": -1},
                    "<=",
                    -1,
                    tag=f"cloud{j}",
                )
            )
        rows.append(
            LinearInequality(
                {"wx_pos": 1, "wx_neg": 1, "wy_pos": 1, "wy_neg": 1}, "<=", bound
            )
        )
        system = LinearSystem(names, tuple(rows))
        res = lp_solve(
            system, {}, "max", nonneg=("wx_pos", "wx_neg", "wy_pos", "wy_neg")
        )
        if res.status == "optimal":
            w = (
                res.witness["wx_pos"] - res.witness["wx_neg"],
                res.witness["wy_pos"] - res.witness["wy_neg"],
            )
            return SeparatingLine(w, res.witness["t"])
        bound *= 2
        if bound > Fraction(1 << 80):
            raise RuntimeError(
                "separation LP did not converge although membership was excluded"
            )


def distance_to_point_set(point: Point, cloud) -> float:
    """Euclidean distance from a point to the nearest cloud point."""
    return min(math.hypot(point[0] - x, point[1] - y) for x, y in cloud)


def distance_outside_hull(point: Point, hull: list[Point]) -> float:
    """Euclidean distance to a CCW hull polygon; 0 if the point is inside."""
    n = len(hull)
    if n == 1:
        return math.hypot(point[0] - hull[0][0], point[1] - hull[0][1])
    inside = n > 2
    best = math.inf
    for i in range(n):
        a = hull[i]
        b = hull[(i + 1) % n] if n > 2 else hull[1]
        ex, ey = b[0] - a[0], b[1] - a[1]
        rx, ry = point[0] - a[0], point[1] - a[1]
        if inside and ex * ry - ey * rx < 0:
            inside = False
        ll = ex * ex + ey * ey
        t = 0.0 if ll == 0 else max(0.0, min(1.0, (rx * ex + ry * ey) / ll))
        best = min(best, math.hypot(rx - t * ex, ry - t * ey))
        if n == 2:
            break
    return 0.0 if inside else best
