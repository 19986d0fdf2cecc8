"""Exact two-phase simplex over rationals, with certificates.

``lp_solve`` maximises or minimises a linear objective over a
:class:`LinearSystem`.  Free variables are split into nonnegative pairs;
callers that know their variables are nonnegative can say so and skip the
split (this also gives redundancy checks the cheap "many columns, few rows"
orientation).  Bland's rule guarantees termination; all arithmetic is
``Fraction``-exact.

Outcomes are values, never exceptions:

- ``optimal``    carries a witness satisfying every row exactly, plus dual
  multipliers for the normalised ``<=`` rows with ``optimum == duals . rhs``;
- ``infeasible`` carries a Farkas certificate: nonnegative multipliers whose
  row combination reads ``0 <= negative``;
- ``unbounded``  carries neither.

Containment tests (`polytope_contains`, `polytope_equal`) certify each row
of one system against the other via the dual LP.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from macwt.geometry.systems import (
    LinearInequality,
    LinearSystem,
    to_fraction,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    optimum: Fraction | None = None
    witness: dict[str, Fraction] | None = None
    duals: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    normalized_rows: tuple[LinearInequality, ...] = ()


class _Tableau:
    """Dense simplex tableau in basis-canonical form.

    Row layout: structural columns, then one slack per row, then artificials,
    then the right-hand side.  ``obj[j]`` holds the reduced cost of column j
    and ``obj[-1]`` holds minus the objective value.
    """

    def __init__(self, rows, rhs, ncols):
        self.ncols = ncols
        self.m = len(rows)
        self.slack0 = ncols
        self.art0 = ncols + self.m
        self.sigma = []
        self.T = []
        self.basis = []
        art_cols = []
        for i, (row, b) in enumerate(zip(rows, rhs)):
            sigma = _ONE if b >= 0 else -_ONE
            self.sigma.append(sigma)
            dense = [sigma * row.get(j, _ZERO) for j in range(ncols)]
            slack = [_ZERO] * self.m
            slack[i] = sigma
            self.T.append(dense + slack + [sigma * b])
            if sigma > 0:
                self.basis.append(self.slack0 + i)
            else:
                art_cols.append(i)
                self.basis.append(None)  # patched below
        for j, i in enumerate(art_cols):
            col = self.art0 + j
            for r in range(self.m):
                self.T[r].insert(self.art0 + j, _ONE if r == i else _ZERO)
            self.basis[i] = col
        self.nart = len(art_cols)
        self.total = ncols + self.m + self.nart
        self.obj = None

    def price_out(self, costs):
        obj = list(costs) + [_ZERO] * (self.total - len(costs)) + [_ZERO]
        for i, bcol in enumerate(self.basis):
            cb = costs[bcol] if bcol < len(costs) else _ZERO
            if cb:
                row = self.T[i]
                obj = [o - cb * t for o, t in zip(obj, row)]
        self.obj = obj

    def pivot(self, pr, pc):
        row = self.T[pr]
        piv = row[pc]
        self.T[pr] = row = [v / piv for v in row]
        for r in range(self.m):
            if r != pr and self.T[r][pc]:
                f = self.T[r][pc]
                self.T[r] = [a - f * b for a, b in zip(self.T[r], row)]
        if self.obj[pc]:
            f = self.obj[pc]
            self.obj = [a - f * b for a, b in zip(self.obj, row)]
        self.basis[pr] = pc

    def optimize(self, allowed_upto):
        """Bland's rule; returns 'optimal' or 'unbounded'."""
        while True:
            enter = None
            for j in range(allowed_upto):
                if self.obj[j] > 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            leave = None
            best = None
            for i in range(self.m):
                a = self.T[i][enter]
                if a > 0:
                    ratio = self.T[i][-1] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave is None:
                return "unbounded"
            self.pivot(leave, enter)

    def objective_value(self):
        return -self.obj[-1]

    def retire_artificials(self):
        """After a feasible phase 1: pivot artificials out of the basis where
        possible.  A row that is all-zero outside the artificial block is a
        redundant constraint; its artificial stays basic at value 0 and the
        row can never change again (every later pivot scales it by 0), so it
        is simply left in place.  Phase 2 then forbids artificial columns
        from entering."""
        for r in range(self.m):
            if self.basis[r] >= self.art0:
                pc = next(
                    (j for j in range(self.art0) if self.T[r][j] != 0),
                    None,
                )
                if pc is not None:
                    self.pivot(r, pc)

    def solution(self):
        x = [_ZERO] * self.ncols
        for i, bcol in enumerate(self.basis):
            if bcol < self.ncols:
                x[bcol] = self.T[i][-1]
        return x

    def row_multipliers(self):
        """Multipliers y on the original <= rows: y_i = -reduced_cost(slack_i)."""
        return [-self.obj[self.slack0 + i] for i in range(self.m)]


def _solve_leq(rows, rhs, costs, ncols):
    """max costs.x  s.t.  rows.x <= rhs, x >= 0 componentwise."""
    tab = _Tableau(rows, rhs, ncols)
    if tab.nart:
        phase1 = [_ZERO] * (tab.ncols + tab.m) + [-_ONE] * tab.nart
        tab.price_out(phase1)
        status = tab.optimize(tab.total)
        assert status == "optimal", "phase 1 cannot be unbounded"
        if tab.objective_value() < 0:
            farkas = tab.row_multipliers()
            return "infeasible", None, None, None, farkas
        tab.retire_artificials()
    tab.price_out(list(costs))
    status = tab.optimize(tab.art0)
    if status == "unbounded":
        return "unbounded", None, None, None, None
    # dual multipliers live on slack reduced costs, also for deleted rows
    # (their slack columns survive truncation)
    duals = tab.row_multipliers()
    return "optimal", tab.objective_value(), tab.solution(), duals, None


def lp_solve(
    system: LinearSystem,
    objective: Mapping[str, object],
    sense: str = "max",
    nonneg: str | Iterable[str] | None = None,
) -> LpResult:
    """Solve max/min of ``objective`` over ``system``.

    ``nonneg`` names variables known to be >= 0 (or ``"all"``); the rest are
    treated as free.  Certificates are asserted before returning.
    """
    if sense not in ("max", "min"):
        raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")
    unknown = set(objective) - set(system.variables)
    if unknown:
        raise ValueError(f"objective uses undeclared variables {unknown}")
    if nonneg == "all":
        nonneg_set = set(system.variables)
    else:
        nonneg_set = set(nonneg or ())
    leq = system.leq_rows()

    # column layout: one column for nonneg vars, a +/- pair for free vars
    col_of = {}
    neg_col_of = {}
    ncols = 0
    for v in system.variables:
        col_of[v] = ncols
        ncols += 1
        if v not in nonneg_set:
            neg_col_of[v] = ncols
            ncols += 1

    rows = []
    rhs = []
    for r in leq:
        dense = {}
        for v, c in r.coeffs.items():
            dense[col_of[v]] = dense.get(col_of[v], _ZERO) + c
            if v in neg_col_of:
                dense[neg_col_of[v]] = dense.get(neg_col_of[v], _ZERO) - c
        rows.append(dense)
        rhs.append(r.rhs)

    sign = _ONE if sense == "max" else -_ONE
    costs = [_ZERO] * ncols
    for v, c in objective.items():
        c = sign * to_fraction(c)
        costs[col_of[v]] += c
        if v in neg_col_of:
            costs[neg_col_of[v]] -= c

    status, opt, x, duals, farkas = _solve_leq(rows, rhs, costs, ncols)

    if status == "infeasible":
        farkas = tuple(farkas)
        _check_farkas(leq, system.variables, col_of, neg_col_of, farkas)
        return LpResult("infeasible", farkas=farkas, normalized_rows=leq)
    if status == "unbounded":
        return LpResult("unbounded", normalized_rows=leq)

    witness = {}
    for v in system.variables:
        val = x[col_of[v]]
        if v in neg_col_of:
            val -= x[neg_col_of[v]]
        witness[v] = val
    optimum = sign * opt
    duals = tuple(duals)

    value = sum((to_fraction(c) * witness[v] for v, c in objective.items()), _ZERO)
    assert value == optimum, "witness does not achieve the reported optimum"
    for r in leq:
        assert r.satisfied_by(witness), f"witness violates row {r.format()!r}"
    assert sum((y * r.rhs for y, r in zip(duals, leq)), _ZERO) == opt, (
        "strong duality violated"
    )
    return LpResult("optimal", optimum, witness, duals, None, leq)


def _check_farkas(leq, variables, col_of, neg_col_of, farkas):
    assert all(y >= 0 for y in farkas), "Farkas multipliers must be nonnegative"
    combo_rhs = sum((y * r.rhs for y, r in zip(farkas, leq)), _ZERO)
    assert combo_rhs < 0, "Farkas combination must have negative rhs"
    for v in variables:
        total = sum((y * r.coeffs.get(v, _ZERO) for y, r in zip(farkas, leq)), _ZERO)
        if v in neg_col_of:
            assert total == 0, f"Farkas combination not zero on free var {v}"
        else:
            assert total >= 0, f"Farkas combination negative on nonneg var {v}"


def system_feasible(system: LinearSystem, nonneg=None) -> bool:
    return lp_solve(system, {}, "max", nonneg=nonneg).status == "optimal"


def row_implied(
    row: LinearInequality, context: Iterable[LinearInequality], variables
) -> bool:
    """Certify that a ``<=`` row follows from ``context`` (``<=`` rows).

    Searches for nonnegative multipliers lambda with
    ``sum lambda_i a_i == a_row`` and ``sum lambda_i b_i <= b_row``; such a
    combination proves the row for every point of the context, and by LP
    duality it exists whenever the row is valid over a feasible context.
    """
    context = list(context)
    lam = [f"l{i}" for i in range(len(context))]
    rows = []
    for v in variables:
        coeffs = {
            lam[i]: r.coeffs[v] for i, r in enumerate(context) if v in r.coeffs
        }
        rows.append(LinearInequality(coeffs, "==", row.coeffs.get(v, _ZERO)))
    budget = {lam[i]: r.rhs for i, r in enumerate(context) if r.rhs != 0}
    rows.append(LinearInequality(budget, "<=", row.rhs))
    dual = LinearSystem(tuple(lam), tuple(rows))
    return lp_solve(dual, {}, "max", nonneg="all").status == "optimal"


def polytope_contains(outer: LinearSystem, inner: LinearSystem) -> bool:
    """True iff every point of ``inner`` satisfies ``outer``."""
    if set(outer.variables) != set(inner.variables):
        raise ValueError(
            f"variable mismatch: {outer.variables} vs {inner.variables}"
        )
    if not system_feasible(inner):
        return True
    inner_rows = inner.leq_rows()
    return all(
        row_implied(r, inner_rows, outer.variables) for r in outer.leq_rows()
    )


def polytope_equal(a: LinearSystem, b: LinearSystem) -> bool:
    """Mutual containment, certified row by row via exact LPs."""
    return polytope_contains(a, b) and polytope_contains(b, a)
