"""Projection and pruning, checked against LP-lift feasibility."""

from fractions import Fraction

import numpy as np

from macwt.geometry.fme import fourier_motzkin_project, redundancy_prune
from macwt.geometry.simplex import lp_solve, polytope_equal, system_feasible
from macwt.geometry.systems import (
    LinearInequality,
    LinearSystem,
    contains_point,
    pin_variables,
)


def leq(coeffs, rhs, tag=None):
    return LinearInequality(coeffs, "<=", Fraction(rhs), tag)


def geq(coeffs, rhs, tag=None):
    return LinearInequality(coeffs, ">=", Fraction(rhs), tag)


def test_single_user_wiretap_projection():
    # {Ra >= 0, Rs+Ro+Ra <= c, Ro+Ra >= d} projects to {Rs+Ro <= c, Rs <= c-d}
    c, d = Fraction(4, 5), Fraction(3, 10)
    system = LinearSystem(
        ("Rs", "Ro", "Ra"),
        (
            geq({"Ra": 1}, 0),
            leq({"Rs": 1, "Ro": 1, "Ra": 1}, c),
            geq({"Ro": 1, "Ra": 1}, d),
        ),
    )
    projected = fourier_motzkin_project(system, ["Ra"])
    expected = LinearSystem(
        ("Rs", "Ro"),
        (leq({"Rs": 1, "Ro": 1}, c), leq({"Rs": 1}, c - d)),
    )
    keys = {r.canonical() for r in projected.rows}
    assert keys == {r.canonical() for r in expected.rows}


def test_trivial_single_pairing():
    system = LinearSystem(
        ("x", "y"),
        (geq({"x": 1}, 0), leq({"x": 1, "y": 1}, 1)),
    )
    projected = fourier_motzkin_project(system, ["x"])
    assert projected.variables == ("y",)
    assert {r.canonical() for r in projected.rows} == {leq({"y": 1}, 1).canonical()}


def test_empty_input_projects_to_empty():
    system = LinearSystem(("x",), ())
    projected = fourier_motzkin_project(system, ["x"])
    assert projected.variables == ()
    assert projected.rows == ()


def test_projection_of_infeasible_system_is_infeasible():
    system = LinearSystem(
        ("x", "y"),
        (leq({"x": 1}, 0), geq({"x": 1}, 1), leq({"y": 1}, 1)),
    )
    projected = fourier_motzkin_project(system, ["x"])
    assert not system_feasible(projected)


def test_projection_soundness_random_systems():
    # a point satisfies the projection iff it lifts: LP feasibility oracle
    rng = np.random.default_rng(3)
    systems_checked = 0
    for trial in range(200):
        n = int(rng.integers(2, 6))
        m = int(rng.integers(2, 13))
        variables = tuple(f"v{i}" for i in range(n))
        rows = []
        for _ in range(m):
            coeffs = {
                v: Fraction(int(rng.integers(-3, 4))) for v in variables
            }
            rows.append(leq(coeffs, int(rng.integers(-1, 5))))
        system = LinearSystem(variables, tuple(rows))
        drop = [variables[-1]]
        projected = fourier_motzkin_project(system, drop)
        systems_checked += 1
        for _ in range(3):
            point = {
                v: Fraction(int(rng.integers(-4, 5)), 2) for v in projected.variables
            }
            inside = contains_point(projected, point)
            lifted = pin_variables(system, point)
            liftable = lp_solve(lifted, {}, "max").status == "optimal"
            assert inside == liftable
    assert systems_checked == 200


def test_prune_dominated_bound():
    system = LinearSystem(
        ("x",), (leq({"x": 1}, 1), leq({"x": 1}, 2))
    )
    pruned = redundancy_prune(system)
    assert [r.rhs for r in pruned.rows] == [1]


def test_prune_implied_by_sum_and_nonnegativity():
    system = LinearSystem(
        ("x", "y"),
        (
            leq({"x": 1, "y": 1}, 1),
            leq({"x": 1}, 1),
            leq({"y": 1}, 1),
            geq({"x": 1}, 0),
            geq({"y": 1}, 0),
        ),
    )
    pruned = redundancy_prune(system)
    kept = {r.canonical() for r in pruned.rows}
    assert leq({"x": 1}, 1).canonical() not in kept
    assert leq({"y": 1}, 1).canonical() not in kept
    assert leq({"x": 1, "y": 1}, 1).canonical() in kept
    assert len(pruned.rows) == 3


def test_prune_preserves_membership_on_random_points():
    rng = np.random.default_rng(5)
    for trial in range(10):
        n = int(rng.integers(2, 4))
        variables = tuple(f"v{i}" for i in range(n))
        rows = [geq({v: 1}, 0) for v in variables]
        for _ in range(int(rng.integers(3, 9))):
            coeffs = {v: Fraction(int(rng.integers(-2, 4))) for v in variables}
            rows.append(leq(coeffs, int(rng.integers(0, 5))))
        system = LinearSystem(variables, tuple(rows))
        pruned = redundancy_prune(system)
        assert len(pruned.rows) <= len(system.rows)
        for _ in range(1000):
            point = {v: Fraction(int(rng.integers(-2, 7)), 3) for v in variables}
            assert contains_point(system, point) == contains_point(pruned, point)


def test_prune_keeps_equalities():
    system = LinearSystem(
        ("x", "y"),
        (
            LinearInequality({"x": 1}, "==", 0),
            leq({"x": 1, "y": 1}, 1),
            leq({"y": 1}, 1),  # implied given x == 0 and the sum row? no: x=0 -> y<=1 twice
        ),
    )
    pruned = redundancy_prune(system)
    assert any(r.relation == "==" for r in pruned.rows)
    # y <= 1 is implied by x == 0 and x + y <= 1
    assert len(pruned.rows) == 2


def test_projection_equals_original_when_nothing_eliminated():
    system = LinearSystem(
        ("x", "y"),
        (leq({"x": 1, "y": 1}, 1), geq({"x": 1}, 0), geq({"y": 1}, 0)),
    )
    projected = fourier_motzkin_project(system, [])
    assert polytope_equal(projected, system)
