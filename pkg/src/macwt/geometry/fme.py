"""Fourier-Motzkin projection and LP-certified redundancy removal.

Variables are eliminated in the order given; after each elimination the row
set is deduplicated (scale-invariant canonical form) and, by default, pruned
with one LP certificate per row.  Intermediate row counts are famously
order-dependent and doubly exponential without pruning, so pruning per step
keeps the desk-scale instances tiny.
"""

from fractions import Fraction

from macwt.geometry.simplex import row_implied
from macwt.geometry.systems import LinearInequality, LinearSystem

_ZERO = Fraction(0)


def _combine(lower: LinearInequality, upper: LinearInequality, var: str) -> LinearInequality:
    """Add scaled <= rows so that ``var`` cancels exactly."""
    cu = upper.coeffs[var]
    cl = lower.coeffs[var]
    wu = 1 / cu
    wl = -1 / cl
    coeffs = {}
    for v, c in upper.coeffs.items():
        coeffs[v] = wu * c
    for v, c in lower.coeffs.items():
        coeffs[v] = coeffs.get(v, _ZERO) + wl * c
    coeffs.pop(var, None)
    return LinearInequality(coeffs, "<=", wu * upper.rhs + wl * lower.rhs)


def _dedupe(rows):
    seen = set()
    out = []
    for r in rows:
        key = r.canonical()
        if key in seen:
            continue
        seen.add(key)
        if not r.coeffs and r.satisfied_by({}):
            continue  # trivially true constant row
        out.append(r)
    return out


def _prune_leq(rows, variables):
    """Drop every row implied by the current survivors (LP certificate)."""
    rows = _dedupe(rows)
    kept = list(rows)
    i = 0
    while i < len(kept):
        candidate = kept[i]
        rest = kept[:i] + kept[i + 1 :]
        if row_implied(candidate, rest, variables):
            kept = rest
        else:
            i += 1
    return kept


def fourier_motzkin_project(
    system: LinearSystem, eliminate, *, prune: bool = True
) -> LinearSystem:
    """Project a system onto the variables not in ``eliminate``.

    A point satisfies the result iff it lifts to a point of the input; the
    returned rows are all ``<=`` (equalities are split before elimination).
    """
    eliminate = [str(v) for v in eliminate]
    missing = set(eliminate) - set(system.variables)
    if missing:
        raise ValueError(f"cannot eliminate undeclared variables {missing}")
    keep = tuple(v for v in system.variables if v not in eliminate)
    rows = _dedupe(system.leq_rows())
    done = set()
    for var in eliminate:
        uppers = [r for r in rows if r.coeffs.get(var, _ZERO) > 0]
        lowers = [r for r in rows if r.coeffs.get(var, _ZERO) < 0]
        others = [r for r in rows if var not in r.coeffs]
        combined = [_combine(lo, up, var) for up in uppers for lo in lowers]
        rows = _dedupe(others + combined)
        done.add(var)
        if prune:
            active = [v for v in system.variables if v not in done]
            rows = _prune_leq(rows, active)
    return LinearSystem(keep, tuple(rows))


def redundancy_prune(system: LinearSystem) -> LinearSystem:
    """Remove rows implied by the rest; equality rows are kept verbatim.

    Each removal is certified by one LP (the row's maximum over the
    surviving rows stays below its right-hand side), so no satisfying point
    is gained or lost.
    """
    equalities = [r for r in system.rows if r.relation == "=="]
    inequalities = [r for r in system.rows if r.relation != "=="]
    eq_context = [img for r in equalities for img in r.as_leq()]

    seen = set()
    survivors = []
    for r in inequalities:
        key = r.as_leq()[0].canonical()
        if key in seen:
            continue
        seen.add(key)
        leq = r.as_leq()[0]
        if not leq.coeffs and leq.satisfied_by({}):
            continue
        survivors.append(r)

    i = 0
    while i < len(survivors):
        candidate = survivors[i].as_leq()[0]
        rest = survivors[:i] + survivors[i + 1 :]
        context = [img for r in rest for img in r.as_leq()] + eq_context
        if row_implied(candidate, context, system.variables):
            survivors = rest
        else:
            i += 1
    return LinearSystem(system.variables, tuple(equalities + survivors))
