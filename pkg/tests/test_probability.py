import math

import numpy as np
import pytest

from conftest import identity_channel, independent_eve_channel
from macwt.probability import (
    InputDistribution,
    MacWiretapChannel,
    conditional_mutual_information,
    entropy,
    joint_distribution,
    sample_channel,
    sample_input,
)


def test_channel_validation_rejects_bad_sum():
    pmf = np.zeros((2, 2, 2))
    pmf[0, 0, 0] = 0.5  # should be 1.0
    pmf[1, 1, 1] = 1.0
    with pytest.raises(ValueError, match=r"input \(0,\)"):
        MacWiretapChannel((2,), 2, 2, pmf)


def test_channel_validation_rejects_negative():
    pmf = np.full((2, 2, 2), 0.25)
    pmf[0, 0, 0] = -0.25
    pmf[0, 0, 1] = 0.75
    with pytest.raises(ValueError, match="negative"):
        MacWiretapChannel((2,), 2, 2, pmf)


def test_channel_shape_mismatch():
    with pytest.raises(ValueError, match="shape"):
        MacWiretapChannel((2, 2), 2, 2, np.full((2, 2, 2), 0.25))


def test_input_distribution_must_normalise():
    with pytest.raises(ValueError, match="sums to"):
        InputDistribution((np.array([0.5, 0.4]),))


def test_identity_joint_mass():
    chan = identity_channel()
    dist = InputDistribution.uniform([2])
    joint = joint_distribution(chan, dist)
    assert joint.table[0, 0, 0] == pytest.approx(0.5)
    assert joint.table[1, 1, 1] == pytest.approx(0.5)
    assert joint.table.sum() == pytest.approx(1.0, abs=1e-12)
    assert joint.table[0, 1, 1] == 0.0


def test_degenerate_input_gives_point_mass_marginal(rng):
    chan = sample_channel(rng, (2, 2), 3, 3)
    dist = InputDistribution((np.array([0.0, 1.0]), np.array([0.6, 0.4])))
    joint = joint_distribution(chan, dist)
    x1 = joint.marginal(["X1"])
    assert x1 == pytest.approx([0.0, 1.0], abs=1e-15)


def test_joint_marginals_reproduce_inputs(rng):
    chan = sample_channel(rng, (2, 3), 3, 2)
    dist = sample_input(rng, (2, 3))
    joint = joint_distribution(chan, dist)
    np.testing.assert_allclose(
        joint.marginal(["X1"]), dist.per_user_pmf[0], atol=1e-12
    )
    np.testing.assert_allclose(
        joint.marginal(["X2"]), dist.per_user_pmf[1], atol=1e-12
    )


def test_dimension_mismatch_error(rng):
    chan = sample_channel(rng, (2, 2), 2, 2)
    dist = sample_input(rng, (2, 3))
    with pytest.raises(ValueError, match="do not match"):
        joint_distribution(chan, dist)


def test_noiseless_bit_has_one_bit_of_information():
    chan = identity_channel()
    joint = joint_distribution(chan, InputDistribution.uniform([2]))
    assert conditional_mutual_information(joint, ["X1"], ["Y"]) == pytest.approx(1.0)


def test_entropy_examples():
    # H of a uniform bit and of a Bernoulli(3/4)
    chan = identity_channel()
    joint = joint_distribution(chan, InputDistribution.uniform([2]))
    assert entropy(joint, ["X1"]) == pytest.approx(1.0, abs=1e-12)
    joint_biased = joint_distribution(
        chan, InputDistribution((np.array([0.25, 0.75]),))
    )
    expected = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
    assert entropy(joint_biased, ["X1"]) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.811278, abs=1e-6)


def test_entropy_errors():
    chan = identity_channel()
    joint = joint_distribution(chan, InputDistribution.uniform([2]))
    with pytest.raises(ValueError, match="nonempty"):
        entropy(joint, [])
    with pytest.raises(ValueError, match="overlap"):
        entropy(joint, ["Y"], ["Y"])
    with pytest.raises(ValueError, match="overlap"):
        conditional_mutual_information(joint, ["X1"], ["Y"], ["X1"])


def test_chain_rule_on_random_small_channels(rng):
    # I(X_S, X_T; Y | C) = I(X_S; Y | C) + I(X_T; Y | X_S, C)
    for _ in range(25):
        k = int(rng.integers(2, 4))
        sizes = tuple(int(s) for s in rng.integers(2, 4, size=k))
        chan = sample_channel(rng, sizes, 3, 3, degraded=bool(rng.integers(0, 2)))
        joint = joint_distribution(chan, sample_input(rng, sizes))
        left = ["X1"]
        right = ["X2"]
        lhs = conditional_mutual_information(joint, left + right, ["Y"])
        rhs = conditional_mutual_information(
            joint, left, ["Y"]
        ) + conditional_mutual_information(joint, right, ["Y"], left)
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_monotonicity_in_subset(rng):
    # I(X_{S'}; Z | C) <= I(X_S; Z | C) for S' inside S
    for _ in range(25):
        chan = sample_channel(rng, (2, 2, 2), 3, 3, degraded=False)
        joint = joint_distribution(chan, sample_input(rng, (2, 2, 2)))
        small = conditional_mutual_information(joint, ["X1"], ["Z"])
        big = conditional_mutual_information(joint, ["X1", "X2"], ["Z"])
        assert small <= big + 1e-9


def test_conditioning_on_independent_variable_is_noop(rng):
    # Z independent of everything: I(X_S; Z | anything) == 0, and conditioning
    # an MI on an input-independent Z leaves it unchanged
    chan = independent_eve_channel(rng, (2, 2), 3, 2)
    joint = joint_distribution(chan, sample_input(rng, (2, 2)))
    assert conditional_mutual_information(joint, ["X1", "X2"], ["Z"]) == 0.0
    base = conditional_mutual_information(joint, ["X1"], ["Y"], ["X2"])
    conditioned = conditional_mutual_information(joint, ["X1"], ["Y"], ["X2", "Z"])
    assert base == pytest.approx(conditioned, abs=1e-9)


def test_nonnegativity_and_snap(rng):
    for _ in range(10):
        chan = sample_channel(rng, (2, 2), 2, 2)
        joint = joint_distribution(chan, sample_input(rng, (2, 2)))
        v = conditional_mutual_information(joint, ["X1"], ["Z"], ["X2"])
        assert v >= 0.0
