"""Rate-region construction for K-user wiretap channels.

Given a channel, a product input distribution and a secrecy set K' (the
users carrying secret messages), this module builds every inequality system
the achievability analysis needs:

- the full clamped region over secret/open rates, one row per subset triple
  (S, S', T) with S in K', S' in S, T in the complement of K';
- the auxiliary-rate structure whose feasibility certifies a rate point
  (solved exactly as a small LP);
- the K'=K inner/outer pair whose Fourier-Motzkin projection equivalence is
  the package's core verification oracle;
- the secrecy-only and no-wiretap collapses;
- the extremal sum rates (max secrecy sum, max open sum at that point) and
  the secrecy-set reduction containment check.

Every irrational right-hand side is a mutual information; each distinct MI
is computed once, snapped below 1e-12 to zero, and rounded onto the 2**-48
dyadic grid, so all systems built from one (channel, input) pair share
literally identical rational constants and projection results compare
exactly.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from macwt.geometry.simplex import lp_solve
from macwt.geometry.systems import (
    LinearInequality,
    LinearSystem,
    contains_point,
    pin_variables,
    to_fixed_rational,
)
from macwt.probability import (
    InputDistribution,
    MacWiretapChannel,
    conditional_mutual_information,
    joint_distribution,
    x_names,
)
from macwt.subsets import format_set, members, subsets

_ZERO = Fraction(0)

COND_TOL = 1e-9


def rate_var(k: int, kind: str) -> str:
    if kind not in ("s", "o", "a"):
        raise ValueError(f"unknown rate kind {kind!r}")
    return f"R{k}{kind}"


class MutualInformationTable:
    """Computes and caches every I(X_A; Y-or-Z | X_B) for one (channel, input).

    The float cache feeds reports; the fraction cache is the single source of
    rational right-hand sides for all systems built from this table.
    """

    def __init__(self, channel: MacWiretapChannel, input_dist: InputDistribution):
        self.channel = channel
        self.user_count = channel.user_count
        self.joint = joint_distribution(channel, input_dist)
        self._floats: dict[tuple[str, int, int], float] = {}

    @staticmethod
    def label(target: str, subset: int, given: int) -> str:
        base = f"I(X{format_set(subset)};{target}"
        if given:
            base += f"|X{format_set(given)}"
        return base + ")"

    def mi(self, target: str, subset: int, given: int = 0) -> float:
        if subset & given:
            raise ValueError("subset and conditioning set overlap")
        key = (target, subset, given)
        if key not in self._floats:
            value = conditional_mutual_information(
                self.joint, x_names(subset), (target,), x_names(given)
            )
            self._floats[key] = value
        return self._floats[key]

    def mi_frac(self, target: str, subset: int, given: int = 0) -> Fraction:
        return to_fixed_rational(self.mi(target, subset, given))

    def float_cache(self) -> dict[str, float]:
        return {
            self.label(t, s, g): v for (t, s, g), v in sorted(self._floats.items())
        }


@dataclass(frozen=True)
class RegionDescriptor:
    """A built inequality system plus the provenance needed to audit it."""

    kind: str
    user_count: int
    secrecy_set: int
    system: LinearSystem
    mi_cache: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "user_count": self.user_count,
            "secrecy_set": list(members(self.secrecy_set)),
            "system": self.system.to_json_dict(),
        }


def _validate_kprime(channel: MacWiretapChannel, kprime: int) -> int:
    full = (1 << channel.user_count) - 1
    if kprime & ~full:
        raise ValueError(
            f"secrecy set {format_set(kprime)} exceeds K={channel.user_count}"
        )
    return full


def _rate_variables(user_count: int, aux_for: int = 0) -> tuple[str, ...]:
    out = []
    for k in range(1, user_count + 1):
        out += [rate_var(k, "s"), rate_var(k, "o")]
    out += [rate_var(k, "a") for k in members(aux_for)]
    return tuple(out)


def _nonneg(varnames) -> list[LinearInequality]:
    return [
        LinearInequality({v: 1}, ">=", _ZERO, tag=f"nonneg:{v}") for v in varnames
    ]


def build_theorem3_region(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    kprime: int,
    mi: MutualInformationTable | None = None,
) -> RegionDescriptor:
    """The achievable region for one secrecy set, with clamped bounds.

    Rows: R_k^s = 0 off the secrecy set; for every triple (S, S', T) with
    S union T nonempty, the secret rates of S plus the open rates of S\\S'
    and T are bounded by [I(X_{S u T}; Y | rest) - I(X_{S'}; Z | K'bar)]^+.
    K' = empty gives the plain no-wiretap region over open rates.
    """
    full = _validate_kprime(channel, kprime)
    kbar = full ^ kprime
    mi = mi or MutualInformationTable(channel, input_dist)
    varnames = _rate_variables(channel.user_count)
    rows: list[LinearInequality] = []
    for k in members(kbar):
        rows.append(
            LinearInequality({rate_var(k, "s"): 1}, "==", _ZERO, tag=f"no_secret:{k}")
        )
    rows += _nonneg(
        [rate_var(k, "s") for k in members(kprime)]
        + [rate_var(k, "o") for k in range(1, channel.user_count + 1)]
    )
    for s_set in subsets(kprime):
        for sp_set in subsets(s_set):
            for t_set in subsets(kbar):
                union = s_set | t_set
                if not union:
                    continue
                iy = mi.mi_frac("Y", union, full ^ union)
                iz = mi.mi_frac("Z", sp_set, kbar)
                rhs = max(iy - iz, _ZERO)
                coeffs: dict[str, Fraction] = {}
                for k in members(s_set):
                    coeffs[rate_var(k, "s")] = Fraction(1)
                for k in members(s_set & ~sp_set):
                    coeffs[rate_var(k, "o")] = Fraction(1)
                for k in members(t_set):
                    coeffs[rate_var(k, "o")] = Fraction(1)
                tag = f"S={format_set(s_set)} S'={format_set(sp_set)} T={format_set(t_set)}"
                rows.append(LinearInequality(coeffs, "<=", rhs, tag=tag))
    kind = "theorem3" if kprime else "mac_capacity"
    return RegionDescriptor(
        kind, channel.user_count, kprime, LinearSystem(varnames, tuple(rows)),
        mi.float_cache(),
    )


def build_theorem1_structure(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    kprime: int,
    mi: MutualInformationTable | None = None,
) -> RegionDescriptor:
    """The auxiliary-rate inequality structure for one secrecy set.

    Over variables {R_k^s, R_k^o} plus {R_k^a : k in K'}: auxiliary rates are
    nonnegative, every (S, T) sum stays inside Bob's decoding capability, and
    every S-sum of open-plus-auxiliary rates exceeds Eve's decoding
    capability.  Feasibility in R^a certifies achievability of a rate point.
    """
    full = _validate_kprime(channel, kprime)
    kbar = full ^ kprime
    mi = mi or MutualInformationTable(channel, input_dist)
    varnames = _rate_variables(channel.user_count, aux_for=kprime)
    rows: list[LinearInequality] = []
    rows += [
        LinearInequality({rate_var(k, "a"): 1}, ">=", _ZERO, tag=f"aux_nonneg:{k}")
        for k in members(kprime)
    ]
    for s_set in subsets(kprime):
        for t_set in subsets(kbar):
            union = s_set | t_set
            if not union:
                continue
            coeffs: dict[str, Fraction] = {}
            for k in members(s_set):
                coeffs[rate_var(k, "s")] = Fraction(1)
                coeffs[rate_var(k, "o")] = Fraction(1)
                coeffs[rate_var(k, "a")] = Fraction(1)
            for k in members(t_set):
                coeffs[rate_var(k, "o")] = Fraction(1)
            rows.append(
                LinearInequality(
                    coeffs,
                    "<=",
                    mi.mi_frac("Y", union, full ^ union),
                    tag=f"bob:S={format_set(s_set)} T={format_set(t_set)}",
                )
            )
    for s_set in subsets(kprime):
        if not s_set:
            continue
        coeffs = {}
        for k in members(s_set):
            coeffs[rate_var(k, "o")] = Fraction(1)
            coeffs[rate_var(k, "a")] = Fraction(1)
        rows.append(
            LinearInequality(
                coeffs,
                ">=",
                mi.mi_frac("Z", s_set, kbar),
                tag=f"eve:S={format_set(s_set)}",
            )
        )
    return RegionDescriptor(
        "theorem1_structure",
        channel.user_count,
        kprime,
        LinearSystem(varnames, tuple(rows)),
        mi.float_cache(),
    )


def build_lemma1_systems(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    mi: MutualInformationTable | None = None,
) -> tuple[RegionDescriptor, RegionDescriptor]:
    """The K'=K inner (with auxiliary rates) and outer (projected) systems.

    The outer right-hand sides are unclamped differences; under the standing
    feasibility condition they are nonnegative.  Projecting the auxiliary
    rates out of the inner system must reproduce the outer system exactly.
    """
    full = (1 << channel.user_count) - 1
    mi = mi or MutualInformationTable(channel, input_dist)
    inner = build_theorem1_structure(channel, input_dist, full, mi)
    rate_names = _rate_variables(channel.user_count)
    inner_rows = list(inner.system.rows) + _nonneg(rate_names)
    inner_system = LinearSystem(inner.system.variables, tuple(inner_rows))

    outer_rows: list[LinearInequality] = list(_nonneg(rate_names))
    for s_set in subsets(full):
        if not s_set:
            continue
        iy = mi.mi_frac("Y", s_set, full ^ s_set)
        for sp_set in subsets(s_set):
            iz = mi.mi_frac("Z", sp_set, 0)
            coeffs: dict[str, Fraction] = {}
            for k in members(s_set):
                coeffs[rate_var(k, "s")] = Fraction(1)
            for k in members(s_set & ~sp_set):
                coeffs[rate_var(k, "o")] = Fraction(1)
            outer_rows.append(
                LinearInequality(
                    coeffs,
                    "<=",
                    iy - iz,
                    tag=f"S={format_set(s_set)} S'={format_set(sp_set)}",
                )
            )
    cache = mi.float_cache()
    inner_desc = RegionDescriptor(
        "lemma1_inner", channel.user_count, full, inner_system, cache
    )
    outer_desc = RegionDescriptor(
        "lemma1_outer",
        channel.user_count,
        full,
        LinearSystem(rate_names, tuple(outer_rows)),
        cache,
    )
    return inner_desc, outer_desc


def build_lemma2_region(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    kprime: int,
    mi: MutualInformationTable | None = None,
) -> RegionDescriptor:
    """Secrecy-only collapse: open rates pinned to zero, simplified bounds."""
    full = _validate_kprime(channel, kprime)
    kbar = full ^ kprime
    mi = mi or MutualInformationTable(channel, input_dist)
    varnames = tuple(rate_var(k, "s") for k in range(1, channel.user_count + 1))
    rows: list[LinearInequality] = []
    for k in members(kbar):
        rows.append(
            LinearInequality({rate_var(k, "s"): 1}, "==", _ZERO, tag=f"no_secret:{k}")
        )
    rows += _nonneg([rate_var(k, "s") for k in members(kprime)])
    for s_set in subsets(kprime):
        if not s_set:
            continue
        iy = mi.mi_frac("Y", s_set, full ^ s_set)
        iz = mi.mi_frac("Z", s_set, kbar)
        coeffs = {rate_var(k, "s"): Fraction(1) for k in members(s_set)}
        rows.append(
            LinearInequality(
                coeffs, "<=", max(iy - iz, _ZERO), tag=f"S={format_set(s_set)}"
            )
        )
    return RegionDescriptor(
        "lemma2_secrecy",
        channel.user_count,
        kprime,
        LinearSystem(varnames, tuple(rows)),
        mi.float_cache(),
    )


@dataclass(frozen=True)
class Cond1Report:
    holds: bool
    violating_subsets: tuple[int, ...]
    differences: dict[int, float]


def check_condition_cond1(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    kprime: int,
    strict: bool = False,
    tol: float = COND_TOL,
    mi: MutualInformationTable | None = None,
) -> Cond1Report:
    """Check the secrecy feasibility condition for one secrecy set.

    For every S in K': I(X_S; Y | X_{K\\S}) - I(X_S; Z | X_{K'bar}) must be
    nonnegative (``strict=True`` demands > tol instead, the strict-interior
    variant).  Differences in (-tol, 0] count as equality.
    """
    full = _validate_kprime(channel, kprime)
    kbar = full ^ kprime
    mi = mi or MutualInformationTable(channel, input_dist)
    diffs: dict[int, float] = {}
    violations = []
    for s_set in subsets(kprime):
        if not s_set:
            continue
        diff = mi.mi("Y", s_set, full ^ s_set) - mi.mi("Z", s_set, kbar)
        diffs[s_set] = diff
        bad = diff <= tol if strict else diff < -tol
        if bad:
            violations.append(s_set)
    return Cond1Report(not violations, tuple(violations), diffs)


@dataclass(frozen=True)
class AuxRateSolution:
    feasible: bool
    rates: dict[int, Fraction]


def find_aux_rates(structure: RegionDescriptor, point) -> AuxRateSolution:
    """Solve the auxiliary-rate polytope for a fixed secret/open rate point.

    Returns an exact witness when feasible (it satisfies every structure row
    with rational equality/inequality), and ``feasible=False`` otherwise.
    """
    if structure.kind != "theorem1_structure":
        raise ValueError(f"need a theorem1_structure descriptor, got {structure.kind}")
    aux_vars = [v for v in structure.system.variables if v.endswith("a")]
    pinned = {v: point[v] for v in structure.system.variables if not v.endswith("a")}
    reduced = pin_variables(structure.system, pinned)
    result = lp_solve(reduced, {}, "max", nonneg="all")
    if result.status != "optimal":
        return AuxRateSolution(False, {})
    rates = {int(v[1:-1]): result.witness[v] for v in aux_vars}
    merged = dict(pinned)
    merged.update({v: result.witness[v] for v in aux_vars})
    assert contains_point(structure.system, merged), "aux witness must be row-exact"
    return AuxRateSolution(True, rates)


def max_sum_secrecy_rate(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    mi: MutualInformationTable | None = None,
) -> tuple[float, int]:
    """Maximum achievable sum secrecy rate and its secrecy set.

    Enumerates all 2^K sets; ties go to the smallest bitmask (the empty set
    when everything clamps to zero).
    """
    mi = mi or MutualInformationTable(channel, input_dist)
    full = (1 << channel.user_count) - 1
    best = 0.0
    best_mask = 0
    for mask in range(1 << channel.user_count):
        kbar = full ^ mask
        value = max(0.0, mi.mi("Y", mask, kbar) - mi.mi("Z", mask, kbar))
        if value > best:
            best = value
            best_mask = mask
    return best, best_mask


def max_open_sum_at_secrecy_max(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    mi: MutualInformationTable | None = None,
) -> float:
    """Maximum open sum rate while the secrecy sum is at its maximum.

    Splits into the open traffic of the non-secret users, decoded treating
    the secret users as noise, plus the open rate the secret users can hide
    inside Eve's decoding capability.
    """
    mi = mi or MutualInformationTable(channel, input_dist)
    value, mask = max_sum_secrecy_rate(channel, input_dist, mi)
    if value <= 0.0:
        raise ValueError(
            "maximum sum secrecy rate is zero; the open-rate formula requires "
            "a strictly positive secrecy optimum"
        )
    full = (1 << channel.user_count) - 1
    kbar = full ^ mask
    return mi.mi("Y", kbar, 0) + mi.mi("Z", mask, kbar)


def lp_sum_secrecy_max(
    channel: MacWiretapChannel, input_dist: InputDistribution
) -> float:
    """Independent cross-check: LP-maximise the secrecy sum over every
    secrecy-set region and take the overall maximum."""
    best = 0.0
    objective = {
        rate_var(k, "s"): 1 for k in range(1, channel.user_count + 1)
    }
    mi = MutualInformationTable(channel, input_dist)
    for mask in range(1 << channel.user_count):
        desc = build_theorem3_region(channel, input_dist, mask, mi)
        res = lp_solve(desc.system, objective, "max")
        assert res.status == "optimal", "secrecy-rate LP must be bounded"
        best = max(best, float(res.optimum))
    return best


def lp_open_sum_at_secrecy_max(
    channel: MacWiretapChannel, input_dist: InputDistribution
) -> float:
    """Independent cross-check for the open-rate formula: constrain the
    secrecy sum to its maximum inside the best region, maximise open sum."""
    mi = MutualInformationTable(channel, input_dist)
    value, mask = max_sum_secrecy_rate(channel, input_dist, mi)
    if value <= 0.0:
        raise ValueError("secrecy optimum is zero")
    full = (1 << channel.user_count) - 1
    kbar = full ^ mask
    desc = build_theorem3_region(channel, input_dist, mask, mi)
    secrecy_rhs = max(
        mi.mi_frac("Y", mask, kbar) - mi.mi_frac("Z", mask, kbar), _ZERO
    )
    pin_row = LinearInequality(
        {rate_var(k, "s"): 1 for k in members(mask)},
        "==",
        secrecy_rhs,
        tag="secrecy_sum_at_max",
    )
    system = desc.system.with_rows(desc.system.rows + (pin_row,))
    objective = {rate_var(k, "o"): 1 for k in range(1, channel.user_count + 1)}
    res = lp_solve(system, objective, "max")
    assert res.status == "optimal", "open-rate LP must be bounded and feasible"
    return float(res.optimum)


@dataclass(frozen=True)
class Theorem5Report:
    hypotheses_hold: bool
    eq46_holds: bool | None
    vertices_contained: bool | None
    sampled_points: tuple[dict, ...]


def find_reduction_set(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    kprime: int,
    tol: float = COND_TOL,
    mi: MutualInformationTable | None = None,
) -> int | None:
    """Smallest-bitmask K0 strictly inside K' that triggers the reduction:
    adding K0 to the conditioning makes the condition strict for every
    extension, while K0 itself fails it."""
    full = _validate_kprime(channel, kprime)
    kbar = full ^ kprime
    mi = mi or MutualInformationTable(channel, input_dist)
    for k0 in subsets(kprime):
        if k0 == kprime:
            continue
        if mi.mi("Y", k0, full ^ k0) - mi.mi("Z", k0, kbar) > tol:
            continue
        rest = kprime & ~k0
        ok = True
        for v_set in subsets(rest):
            if not v_set:
                continue
            big = k0 | v_set
            if mi.mi("Y", big, full ^ big) - mi.mi("Z", big, kbar) <= tol:
                ok = False
                break
        if ok:
            return k0
    return None


def containment_theorem5(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    kprime: int,
    k0: int,
    samples: int = 24,
    seed: int = 0,
    tol: float = COND_TOL,
) -> Theorem5Report:
    """Check the secrecy-set reduction: when K0 in K' has nonpositive margin
    but every strict superset inside K' has positive margin, points of the
    K' region must also lie in the region for K'' = K' minus K0.

    Sampled boundary vertices of the K' region (random-objective LP optima)
    are tested for membership in the K'' region.
    """
    full = _validate_kprime(channel, kprime)
    if k0 & ~kprime or k0 == kprime:
        raise ValueError(
            f"K0={format_set(k0)} must be a proper subset of K'={format_set(kprime)}"
        )
    kbar = full ^ kprime
    mi = MutualInformationTable(channel, input_dist)

    eq44 = mi.mi("Y", k0, full ^ k0) - mi.mi("Z", k0, kbar) <= tol if k0 else True
    eq45 = True
    for v_set in subsets(kprime & ~k0):
        if not v_set:
            continue
        big = k0 | v_set
        if mi.mi("Y", big, full ^ big) - mi.mi("Z", big, kbar) <= tol:
            eq45 = False
            break
    hypotheses = eq44 and eq45
    if not hypotheses:
        return Theorem5Report(False, None, None, ())

    ksec = kprime & ~k0
    kbar2 = full ^ ksec
    eq46 = True
    for v_set in subsets(ksec):
        if not v_set:
            continue
        if mi.mi("Y", v_set, full ^ v_set) - mi.mi("Z", v_set, kbar2) <= tol:
            eq46 = False
            break

    region_prime = build_theorem3_region(channel, input_dist, kprime, mi)
    region_reduced = build_theorem3_region(channel, input_dist, ksec, mi)
    rng = np.random.default_rng(seed)
    contained = True
    points = []
    for _ in range(samples):
        objective = {
            v: Fraction(int(rng.integers(0, 1000)), 1000)
            for v in region_prime.system.variables
        }
        res = lp_solve(region_prime.system, objective, "max")
        assert res.status == "optimal"
        vertex = res.witness
        ok = contains_point(region_reduced.system, vertex, tol=Fraction(tol))
        points.append({v: float(x) for v, x in vertex.items()})
        contained = contained and ok
    return Theorem5Report(True, eq46, contained, tuple(points))
