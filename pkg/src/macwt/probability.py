"""Finite-alphabet probability primitives.

Dense-table channels, product input distributions, joint pmfs, entropies and
conditional mutual informations, all in bits.  Every object is immutable
after construction and every operation is pure, so values can be shared
freely across workers.

Conventions:

- the channel table is indexed ``pmf[x1, ..., xK, y, z]``;
- joint variables are named ``"X1" .. "XK", "Y", "Z"``;
- ``0 * log 0 == 0`` by continuity;
- mutual informations with magnitude below ``SNAP_TOL`` are snapped to 0 so
  that downstream sign decisions at region boundaries are stable.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from macwt.subsets import members

PMF_TOL = 1e-12
SNAP_TOL = 1e-12


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if np.any(arr < 0):
        raise ValueError(f"{name} has negative entries (min {arr.min()})")
    return arr


@dataclass(frozen=True)
class MacWiretapChannel:
    """A K-user memoryless channel with a legitimate output Y and a wiretap
    output Z, given by the joint conditional table P(y, z | x1..xK)."""

    input_sizes: tuple[int, ...]
    y_size: int
    z_size: int
    pmf: np.ndarray

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.input_sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"input_sizes must be positive, got {sizes}")
        if self.y_size < 1 or self.z_size < 1:
            raise ValueError("output alphabets must be nonempty")
        arr = _as_float_array(self.pmf, "channel pmf")
        expected = sizes + (self.y_size, self.z_size)
        if arr.shape != expected:
            raise ValueError(
                f"channel pmf has shape {arr.shape}, expected {expected}"
            )
        sums = arr.sum(axis=(-2, -1))
        bad = np.abs(sums - 1.0) > PMF_TOL
        if np.any(bad):
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            raise ValueError(
                f"P(y,z|x) does not sum to 1 for input {idx}: sum={sums[bad][0]!r}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "input_sizes", sizes)
        object.__setattr__(self, "pmf", arr)

    @property
    def user_count(self) -> int:
        return len(self.input_sizes)

    def z_marginal(self) -> np.ndarray:
        """P(z | x1..xK), shape (*input_sizes, z_size)."""
        return self.pmf.sum(axis=-2)

    def y_marginal(self) -> np.ndarray:
        """P(y | x1..xK), shape (*input_sizes, y_size)."""
        return self.pmf.sum(axis=-1)


@dataclass(frozen=True)
class InputDistribution:
    """Independent per-user input pmfs P_{X_1} x ... x P_{X_K}."""

    per_user_pmf: tuple[np.ndarray, ...]

    def __post_init__(self):
        pmfs = []
        for k, p in enumerate(self.per_user_pmf, start=1):
            arr = _as_float_array(p, f"input pmf of user {k}")
            if arr.ndim != 1:
                raise ValueError(f"input pmf of user {k} must be a vector")
            if abs(arr.sum() - 1.0) > PMF_TOL:
                raise ValueError(
                    f"input pmf of user {k} sums to {arr.sum()!r}, expected 1"
                )
            arr = arr.copy()
            arr.flags.writeable = False
            pmfs.append(arr)
        object.__setattr__(self, "per_user_pmf", tuple(pmfs))

    @property
    def user_count(self) -> int:
        return len(self.per_user_pmf)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.per_user_pmf)

    @staticmethod
    def uniform(sizes: Sequence[int]) -> "InputDistribution":
        return InputDistribution(tuple(np.full(s, 1.0 / s) for s in sizes))


class JointDistribution:
    """A joint pmf over named variables (the X's, Y and Z)."""

    def __init__(self, names: Sequence[str], table: np.ndarray):
        if len(names) != table.ndim:
            raise ValueError("one name per table axis required")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = tuple(names)
        table = np.asarray(table, dtype=float).copy()
        table.flags.writeable = False
        self.table = table

    def _axes(self, which: Iterable[str]) -> tuple[int, ...]:
        try:
            return tuple(self.names.index(v) for v in which)
        except ValueError as exc:
            raise KeyError(f"unknown variable in {tuple(which)}; have {self.names}") from exc

    def marginal(self, keep: Sequence[str]) -> np.ndarray:
        keep_axes = self._axes(keep)
        drop = tuple(a for a in range(self.table.ndim) if a not in keep_axes)
        marg = self.table.sum(axis=drop) if drop else self.table
        # after summing, remaining axes sit in original order; permute to the
        # requested variable order
        ordered = sorted(keep_axes)
        perm = tuple(ordered.index(a) for a in keep_axes)
        return np.transpose(marg, perm) if perm else marg

    def entropy(self, of: Sequence[str], given: Sequence[str] = ()) -> float:
        return entropy(self, of, given)

    def mutual_information(
        self, left: Sequence[str], right: Sequence[str], given: Sequence[str] = ()
    ) -> float:
        return conditional_mutual_information(self, left, right, given)


def joint_distribution(
    channel: MacWiretapChannel, input_dist: InputDistribution
) -> JointDistribution:
    """Materialise the joint pmf of (X1..XK, Y, Z) under a product input."""
    if input_dist.sizes() != channel.input_sizes:
        raise ValueError(
            f"input alphabet sizes {input_dist.sizes()} do not match channel "
            f"input sizes {channel.input_sizes}"
        )
    weight = np.array(1.0)
    for p in input_dist.per_user_pmf:
        weight = np.multiply.outer(weight, p)
    table = weight[..., None, None] * channel.pmf
    names = [f"X{k}" for k in range(1, channel.user_count + 1)] + ["Y", "Z"]
    return JointDistribution(names, table)


def _plogp_sum(table: np.ndarray) -> float:
    flat = table.reshape(-1)
    nz = flat[flat > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def entropy(
    joint: JointDistribution, of: Sequence[str], given: Sequence[str] = ()
) -> float:
    """H(of | given) in bits."""
    of = tuple(of)
    given = tuple(given)
    if not of:
        raise ValueError("entropy requires a nonempty variable set")
    if set(of) & set(given):
        raise ValueError(f"variable sets overlap: {set(of) & set(given)}")
    h_joint = _plogp_sum(joint.marginal(of + given))
    if not given:
        return h_joint
    return h_joint - _plogp_sum(joint.marginal(given))


def conditional_mutual_information(
    joint: JointDistribution,
    left: Sequence[str],
    right: Sequence[str],
    given: Sequence[str] = (),
) -> float:
    """I(left; right | given) in bits, snapped to 0 below SNAP_TOL."""
    left, right, given = tuple(left), tuple(right), tuple(given)
    if not left or not right:
        return 0.0
    overlap = (set(left) & set(right)) | (set(left) & set(given)) | (set(right) & set(given))
    if overlap:
        raise ValueError(f"variable sets overlap: {overlap}")
    # I(L;R|G) = H(LG) + H(RG) - H(LRG) - H(G)
    value = (
        _plogp_sum(joint.marginal(left + given))
        + _plogp_sum(joint.marginal(right + given))
        - _plogp_sum(joint.marginal(left + right + given))
        - (_plogp_sum(joint.marginal(given)) if given else 0.0)
    )
    if abs(value) < SNAP_TOL:
        return 0.0
    return max(value, 0.0)


def x_names(mask: int) -> tuple[str, ...]:
    return tuple(f"X{k}" for k in members(mask))


def sample_channel(
    rng: np.random.Generator,
    input_sizes: Sequence[int],
    y_size: int,
    z_size: int,
    degraded: bool = True,
) -> MacWiretapChannel:
    """Draw a random channel.

    With ``degraded=True`` the wiretap output is a random garbling of Y, so
    X -> Y -> Z forms a Markov chain and every secrecy feasibility condition
    of the form I(X_S; Y | X_rest) >= I(X_S; Z | X_bar) holds with generic
    strict margin.  This is the sampler behind the projection oracle.
    """
    sizes = tuple(int(s) for s in input_sizes)
    p_y = rng.random(sizes + (y_size,)) + 0.05
    p_y /= p_y.sum(axis=-1, keepdims=True)
    if degraded:
        garble = rng.random((y_size, z_size)) + 0.05
        garble /= garble.sum(axis=-1, keepdims=True)
        pmf = p_y[..., :, None] * garble[(None,) * len(sizes)]
    else:
        p_z = rng.random(sizes + (z_size,)) + 0.05
        p_z /= p_z.sum(axis=-1, keepdims=True)
        pmf = p_y[..., :, None] * p_z[..., None, :]
    return MacWiretapChannel(sizes, y_size, z_size, pmf)


def sample_input(
    rng: np.random.Generator, sizes: Sequence[int]
) -> InputDistribution:
    pmfs = []
    for s in sizes:
        p = rng.random(s) + 0.05
        pmfs.append(p / p.sum())
    return InputDistribution(tuple(pmfs))
