"""Linear inequality systems over exact rationals.

A :class:`LinearInequality` stores sparse rational coefficients, a relation
(``<=``, ``>=`` or ``==``), a rational right-hand side, and an optional
provenance tag naming whatever generated the row (e.g. the subset triple).
A :class:`LinearSystem` is an ordered variable list plus rows.

Rows with an empty coefficient map are pure constant tests (``0 <= rhs``);
they arise naturally from substitution and projection and are kept when
violated so that infeasibility stays visible.
"""

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

FIXED_DENOMINATOR_BITS = 48

Relation = str  # "<=", ">=", "=="
_RELATIONS = ("<=", ">=", "==")


def to_fraction(value) -> Fraction:
    """Exact conversion; floats convert via their binary expansion."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} to a rational")


def to_fixed_rational(value: float, bits: int = FIXED_DENOMINATOR_BITS) -> Fraction:
    """Round a float to the fixed dyadic grid used for MI right-hand sides.

    Keeping every irrational quantity on the 2**-bits grid makes projection
    and containment results reproducible and exactly comparable.
    """
    scale = 1 << bits
    return Fraction(round(value * scale), scale)


@dataclass(frozen=True)
class LinearInequality:
    coeffs: Mapping[str, Fraction]
    relation: Relation
    rhs: Fraction
    tag: str | None = None

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"relation must be one of {_RELATIONS}, got {self.relation!r}")
        clean = {}
        for var, c in self.coeffs.items():
            c = to_fraction(c)
            if c != 0:
                clean[str(var)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        object.__setattr__(self, "rhs", to_fraction(self.rhs))

    def lhs_value(self, point: Mapping[str, object]) -> Fraction:
        total = Fraction(0)
        for var, c in self.coeffs.items():
            if var not in point:
                raise KeyError(f"point does not assign variable {var!r}")
            total += c * to_fraction(point[var])
        return total

    def satisfied_by(self, point: Mapping[str, object], tol=Fraction(0)) -> bool:
        tol = to_fraction(tol)
        gap = self.lhs_value(point) - self.rhs
        if self.relation == "<=":
            return gap <= tol
        if self.relation == ">=":
            return gap >= -tol
        return abs(gap) <= tol

    def as_leq(self) -> tuple["LinearInequality", ...]:
        """Equivalent list of `<=` rows (equalities split into two)."""
        if self.relation == "<=":
            return (self,)
        neg = LinearInequality(
            {v: -c for v, c in self.coeffs.items()}, "<=", -self.rhs, self.tag
        )
        if self.relation == ">=":
            return (neg,)
        return (LinearInequality(self.coeffs, "<=", self.rhs, self.tag), neg)

    def canonical(self) -> tuple:
        """Scale-invariant key: divide by the leading coefficient magnitude.

        Two `<=` rows with the same canonical key cut the same halfplane.
        """
        if not self.coeffs:
            return (self.relation, (), self.rhs)
        lead = abs(next(iter(self.coeffs.values())))
        items = tuple((v, c / lead) for v, c in self.coeffs.items())
        return (self.relation, items, self.rhs / lead)

    def format(self) -> str:
        if not self.coeffs:
            lhs = "0"
        else:
            parts = []
            for var, c in self.coeffs.items():
                if c == 1:
                    term = var
                elif c == -1:
                    term = f"-{var}"
                else:
                    term = f"{c}*{var}"
                parts.append(term)
            lhs = " + ".join(parts).replace("+ -", "- ")
        rel = {"<=": "<=", ">=": ">=", "==": "="}[self.relation]
        text = f"{lhs} {rel} {self.rhs}"
        if self.tag:
            text += f"    # {self.tag}"
        return text


@dataclass(frozen=True)
class LinearSystem:
    variables: tuple[str, ...]
    rows: tuple[LinearInequality, ...] = field(default_factory=tuple)

    def __post_init__(self):
        variables = tuple(str(v) for v in self.variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variables in {variables}")
        rows = tuple(self.rows)
        known = set(variables)
        for row in rows:
            extra = set(row.coeffs) - known
            if extra:
                raise ValueError(f"row {row.format()!r} uses undeclared variables {extra}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "rows", rows)

    def leq_rows(self) -> tuple[LinearInequality, ...]:
        out = []
        for row in self.rows:
            out.extend(row.as_leq())
        return tuple(out)

    def with_rows(self, rows) -> "LinearSystem":
        return LinearSystem(self.variables, tuple(rows))

    def to_text(self) -> str:
        lines = [f"# variables: {', '.join(self.variables)}"]
        lines += [row.format() for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        def frac(q: Fraction):
            return [str(q.numerator), str(q.denominator)]

        return {
            "variables": list(self.variables),
            "rows": [
                {
                    "coeffs": {v: frac(c) for v, c in row.coeffs.items()},
                    "relation": row.relation,
                    "rhs": frac(row.rhs),
                    **({"tag": row.tag} if row.tag else {}),
                }
                for row in self.rows
            ],
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "LinearSystem":
        rows = []
        for r in doc["rows"]:
            coeffs = {v: Fraction(int(n), int(d)) for v, (n, d) in r["coeffs"].items()}
            rhs = Fraction(int(r["rhs"][0]), int(r["rhs"][1]))
            rows.append(LinearInequality(coeffs, r["relation"], rhs, r.get("tag")))
        return LinearSystem(tuple(doc["variables"]), tuple(rows))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def contains_point(system: LinearSystem, point: Mapping[str, object], tol=0) -> bool:
    """True iff every row is satisfied within ``tol``.

    With rational inputs and ``tol=0`` the test is exact.  A missing variable
    assignment raises ``KeyError``.
    """
    for var in system.variables:
        if var not in point:
            raise KeyError(f"point does not assign variable {var!r}")
    tol = to_fraction(tol)
    return all(row.satisfied_by(point, tol) for row in system.rows)


def pin_variables(system: LinearSystem, values: Mapping[str, object]) -> LinearSystem:
    """Substitute fixed values for some variables and drop them.

    Constant rows that become trivially true are removed; violated constant
    rows are kept so the resulting system is visibly infeasible.
    """
    pinned = {v: to_fraction(x) for v, x in values.items()}
    unknown = set(pinned) - set(system.variables)
    if unknown:
        raise ValueError(f"cannot pin undeclared variables {unknown}")
    keep_vars = tuple(v for v in system.variables if v not in pinned)
    rows = []
    for row in system.rows:
        shift = sum((c * pinned[v] for v, c in row.coeffs.items() if v in pinned), Fraction(0))
        coeffs = {v: c for v, c in row.coeffs.items() if v not in pinned}
        new = LinearInequality(coeffs, row.relation, row.rhs - shift, row.tag)
        if not new.coeffs and new.satisfied_by({}):
            continue
        rows.append(new)
    return LinearSystem(keep_vars, tuple(rows))


def nonneg_rows(variables: Sequence[str], tag: str = "nonneg") -> list[LinearInequality]:
    return [
        LinearInequality({v: Fraction(1)}, ">=", Fraction(0), f"{tag}:{v}")
        for v in variables
    ]
