import itertools
import math

import numpy as np
import pytest

from conftest import bsc_eavesdropper, independent_eve_channel
from macwt.probability import InputDistribution
from macwt.resolvability import (
    condition_margins,
    draw_codebooks,
    draw_resolvability_codebooks,
    exact_information_leakage,
    exact_output_distribution,
    expected_tv_distance,
    log_linear_slope,
    message_count,
    per_secret_tv_distances,
)


def uniform_binary():
    return InputDistribution.uniform([2])


def brute_force_distribution(channel, codewords, n):
    """Nested-loop oracle: average channel rows over codewords, enumerate z."""
    ztab = channel.z_marginal()
    z_size = channel.z_size
    dist = {}
    for zcfg in itertools.product(range(z_size), repeat=n):
        total = 0.0
        for cw in codewords:
            p = 1.0
            for i in range(n):
                p *= ztab[(cw[i], zcfg[i])]
            total += p
        dist[zcfg] = total / len(codewords)
    flat = np.zeros(z_size ** n)
    for idx, zcfg in enumerate(itertools.product(range(z_size), repeat=n)):
        flat[idx] = dist[zcfg]
    return flat


def test_message_count_rounding():
    assert message_count(0.5, 2) == 2
    assert message_count(0.5, 6) == 8
    assert message_count(0.05, 6) == 1
    assert message_count(0.0, 4) == 1


def test_single_codeword_distribution_is_channel_row():
    chan = bsc_eavesdropper(0.3)
    rng = np.random.default_rng(0)
    ensemble = draw_resolvability_codebooks(uniform_binary(), 1, 1, [0.0], rng)
    dist = exact_output_distribution(ensemble, chan, "full")
    x = int(ensemble.codewords[0].reshape(-1)[0])
    expected = chan.z_marginal()[x]
    np.testing.assert_allclose(dist, expected, atol=1e-15)


def test_exact_distribution_matches_nested_loop_oracle():
    chan = bsc_eavesdropper(0.3)
    rng = np.random.default_rng(4)
    # 2^{n Q} = 4 codewords at n=2
    ensemble = draw_resolvability_codebooks(uniform_binary(), 1, 2, [1.0], rng)
    assert ensemble.aux_counts == (4,)
    dist = exact_output_distribution(ensemble, chan, "full")
    oracle = brute_force_distribution(
        chan, list(ensemble.codewords[0].reshape(-1, 2)), 2
    )
    np.testing.assert_allclose(dist, oracle, atol=1e-14)
    assert dist.sum() == pytest.approx(1.0, abs=1e-12)


def test_subset_conditioning_is_iid_product(rng):
    chan = bsc_eavesdropper(0.3)
    ensemble = draw_resolvability_codebooks(uniform_binary(), 1, 3, [0.5], rng)
    sub = exact_output_distribution(ensemble, chan, "subset")
    # uniform input through a BSC gives a uniform output, tensorised
    np.testing.assert_allclose(sub, np.full(8, 1 / 8), atol=1e-12)


def test_input_independent_eavesdropper_tv_zero(rng):
    chan = independent_eve_channel(rng, (2,), 2, 3)
    dist = uniform_binary()
    result = expected_tv_distance(chan, dist, 1, [0.5], [1, 2], 5, seed=3)
    assert all(r.mean_tv == pytest.approx(0.0, abs=1e-12) for r in result.rows)


def test_guard_rejects_large_enumerations():
    chan = bsc_eavesdropper(0.1)
    rng = np.random.default_rng(0)
    # 2^12 z-configurations times 2^12 codewords exceeds the guard
    ensemble = draw_resolvability_codebooks(uniform_binary(), 1, 12, [1.0], rng)
    with pytest.raises(ValueError, match="enumeration guard"):
        exact_output_distribution(ensemble, chan, "full")


def test_condition_margins_classification():
    chan = bsc_eavesdropper(0.3)
    dist = uniform_binary()
    margins = condition_margins(chan, dist, 1, [0.5])
    assert margins[1] == pytest.approx(0.5 - (1 - _h2(0.3)), abs=1e-9)
    low = condition_margins(chan, dist, 1, [0.05])
    assert low[1] < 0


def _h2(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def test_tv_decay_seeded_determinism():
    chan = bsc_eavesdropper(0.3)
    dist = uniform_binary()
    a = expected_tv_distance(chan, dist, 1, [0.5], [2, 4], 20, seed=11)
    b = expected_tv_distance(chan, dist, 1, [0.5], [2, 4], 20, seed=11)
    assert a.means == b.means
    c = expected_tv_distance(chan, dist, 1, [0.5], [2, 4], 20, seed=12)
    assert a.means != c.means


def test_tv_decay_trend_at_sufficient_rate():
    chan = bsc_eavesdropper(0.3)
    dist = uniform_binary()
    result = expected_tv_distance(chan, dist, 1, [0.5], [2, 4, 6], 200, seed=1)
    assert result.rows[0].condition_holds
    means = result.means
    assert means[0] > means[1] > means[2]
    assert log_linear_slope(result.blocklengths, means) < 0


def test_tv_no_decay_below_rate():
    chan = bsc_eavesdropper(0.3)
    dist = uniform_binary()
    hi = expected_tv_distance(chan, dist, 1, [0.5], [2], 200, seed=1)
    lo = expected_tv_distance(chan, dist, 1, [0.05], [6], 200, seed=1)
    assert not lo.rows[0].condition_holds
    assert lo.rows[0].mean_tv > hi.rows[0].mean_tv


def test_leakage_zero_for_input_independent_eavesdropper(rng):
    chan = independent_eve_channel(rng, (2,), 2, 2)
    ensemble = draw_codebooks(
        uniform_binary(), 1, 3, [0.4], [0.0], [0.4], np.random.default_rng(5)
    )
    assert exact_information_leakage(ensemble, chan) == pytest.approx(0.0, abs=1e-12)


def test_leakage_zero_for_single_secret_message():
    chan = bsc_eavesdropper(0.3)
    ensemble = draw_codebooks(
        uniform_binary(), 1, 3, [0.0], [0.3], [0.4], np.random.default_rng(6)
    )
    assert ensemble.secret_counts == (1,)
    assert exact_information_leakage(ensemble, chan) == pytest.approx(0.0, abs=1e-12)


def test_leakage_bounded_and_reduced_by_padding():
    chan = bsc_eavesdropper(0.3)
    dist = uniform_binary()
    n = 4
    padded, bare = [], []
    for s in range(50):
        rng_a = np.random.default_rng((9, s))
        rng_b = np.random.default_rng((9, s))
        with_aux = draw_codebooks(dist, 1, n, [0.5], [0.0], [0.5], rng_a)
        without = draw_codebooks(dist, 1, n, [0.5], [0.0], [0.0], rng_b)
        la = exact_information_leakage(with_aux, chan)
        lb = exact_information_leakage(without, chan)
        bound = n * math.log2(chan.z_size)
        assert 0 <= la <= bound and 0 <= lb <= bound
        padded.append(la)
        bare.append(lb)
    assert np.mean(padded) < np.mean(bare)


def test_triangle_inequality_of_one_sided_distances():
    chan = bsc_eavesdropper(0.25)
    ensemble = draw_codebooks(
        uniform_binary(), 1, 3, [0.4], [0.2], [0.4], np.random.default_rng(13)
    )
    for record in per_secret_tv_distances(ensemble, chan).values():
        assert (
            record["tv"]
            <= record["mixture_vs_guess"] + record["secret_vs_guess"] + 1e-12
        )


def test_leakage_tv_link():
    # leakage <= 2 d (n log2|Z| - log2(2 d)) with d the largest per-secret TV
    chan = bsc_eavesdropper(0.3)
    dist = uniform_binary()
    for s in range(10):
        ensemble = draw_codebooks(
            dist, 1, 4, [0.25], [0.25], [0.75], np.random.default_rng((21, s))
        )
        leak = exact_information_leakage(ensemble, chan)
        max_tv = max(
            r["tv"] for r in per_secret_tv_distances(ensemble, chan).values()
        )
        if 0 < max_tv <= 1 / math.e:
            n, zsz = ensemble.blocklength, chan.z_size
            bound = 2 * max_tv * (n * math.log2(zsz) - math.log2(2 * max_tv))
            assert leak <= bound + 1e-12


def test_realized_rates_reported():
    ensemble = draw_codebooks(
        uniform_binary(), 1, 4, [0.5], [0.0], [0.5], np.random.default_rng(2)
    )
    rates = ensemble.realized_rates()
    assert rates["rs1"] == pytest.approx(0.5)
    assert rates["ra1"] == pytest.approx(0.5)
    assert rates["ro1"] == 0.0
