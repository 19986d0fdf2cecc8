"""Exact small-blocklength codebook experiments.

Random layered codebooks (secret / open / auxiliary indices per user on the
secrecy set, open-only off it), with every output statistic computed by
exhaustive enumeration: the induced channel-output distribution over Z^n,
total-variation distances between the fully-informed and partially-informed
conditionals, and the exact information leakage of the secret messages.

Message-set sizes are 2**(n*rate) rounded to the nearest integer (at least
one); realized rates log2(count)/n are reported next to nominal ones.
Everything is seeded and bit-for-bit reproducible: trial t of a run uses the
t-th child of the master seed, and the same child stream drives every
blocklength of that trial (common random numbers), so comparisons across
blocklengths see the same codeword noise.
"""

import csv
import itertools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from macwt.probability import InputDistribution, MacWiretapChannel
from macwt.regions import MutualInformationTable
from macwt.subsets import complement, members, subsets

ENUMERATION_GUARD = 10**7


def message_count(rate: float, n: int) -> int:
    return max(1, round(2.0 ** (n * rate)))


def realized_rate(count: int, n: int) -> float:
    return math.log2(count) / n


@dataclass(frozen=True)
class LayeredCodebooks:
    """One drawn codebook ensemble.

    Users on the secrecy set index codewords by (secret, open, auxiliary);
    the others by their open message only.  Codeword symbols are iid from
    the user's input pmf.
    """

    kprime: int
    blocklength: int
    input_dist: InputDistribution
    secret_counts: tuple[int, ...]
    open_counts: tuple[int, ...]
    aux_counts: tuple[int, ...]
    codewords: tuple[np.ndarray, ...]
    seed: object = None

    @property
    def user_count(self) -> int:
        return len(self.codewords)

    def counts_of(self, k: int) -> tuple[int, int, int]:
        return (
            self.secret_counts[k - 1],
            self.open_counts[k - 1],
            self.aux_counts[k - 1],
        )

    def realized_rates(self) -> dict[str, float]:
        n = self.blocklength
        out = {}
        for k in range(1, self.user_count + 1):
            ms, mo, ma = self.counts_of(k)
            out[f"rs{k}"] = realized_rate(ms, n)
            out[f"ro{k}"] = realized_rate(mo, n)
            out[f"ra{k}"] = realized_rate(ma, n)
        return out

    def total_messages(self) -> int:
        total = 1
        for k in range(1, self.user_count + 1):
            ms, mo, ma = self.counts_of(k)
            total *= ms * mo * ma
        return total


def draw_codebooks(
    input_dist: InputDistribution,
    kprime: int,
    blocklength: int,
    secret_rates,
    open_rates,
    aux_rates,
    rng: np.random.Generator,
    seed=None,
) -> LayeredCodebooks:
    user_count = input_dist.user_count
    secret_counts, open_counts, aux_counts, books = [], [], [], []
    for k in range(1, user_count + 1):
        pmf = input_dist.per_user_pmf[k - 1]
        in_kprime = bool(kprime & (1 << (k - 1)))
        mo = message_count(open_rates[k - 1], blocklength)
        if in_kprime:
            ms = message_count(secret_rates[k - 1], blocklength)
            ma = message_count(aux_rates[k - 1], blocklength)
            shape = (ms, mo, ma, blocklength)
        else:
            if secret_rates[k - 1] or aux_rates[k - 1]:
                raise ValueError(
                    f"user {k} is outside the secrecy set; its secret and "
                    "auxiliary rates must be 0"
                )
            ms, ma = 1, 1
            shape = (mo, blocklength)
        books.append(rng.choice(len(pmf), size=shape, p=pmf))
        secret_counts.append(ms)
        open_counts.append(mo)
        aux_counts.append(ma)
    return LayeredCodebooks(
        kprime,
        blocklength,
        input_dist,
        tuple(secret_counts),
        tuple(open_counts),
        tuple(aux_counts),
        tuple(books),
        seed,
    )


def draw_resolvability_codebooks(
    input_dist: InputDistribution,
    kprime: int,
    blocklength: int,
    qrates,
    rng: np.random.Generator,
    seed=None,
) -> LayeredCodebooks:
    """The flat scheme: each secrecy-set user has one codebook of
    2**(n*Q_k) codewords (encoded as auxiliary indices), everyone else a
    single codeword."""
    user_count = input_dist.user_count
    zeros = [0.0] * user_count
    aux = list(qrates)
    for k in range(1, user_count + 1):
        if not kprime & (1 << (k - 1)):
            if qrates[k - 1]:
                raise ValueError(f"Q must be 0 for user {k} outside the secrecy set")
            aux[k - 1] = 0.0
    return draw_codebooks(
        input_dist, kprime, blocklength, zeros, zeros, aux, rng, seed
    )


def _guard(z_size: int, n: int, messages: int) -> None:
    load = (z_size ** n) * messages
    if load > ENUMERATION_GUARD:
        raise ValueError(
            f"enumeration guard exceeded: |Z|^n * messages = {z_size}^{n} * "
            f"{messages} = {load} > {ENUMERATION_GUARD}"
        )


def _kron_row(ztab: np.ndarray, symbols: np.ndarray) -> np.ndarray:
    """P(z^n | x^n) as a flat vector: Kronecker product of per-position rows.

    ``symbols`` has one row per user, one column per position; ``ztab`` maps
    an input tuple to the single-letter output row."""
    vec = np.ones(1)
    for i in range(symbols.shape[1]):
        vec = np.kron(vec, ztab[tuple(symbols[:, i])])
    return vec


def _guess_table(channel: MacWiretapChannel, input_dist, kprime: int) -> np.ndarray:
    """Single-letter P(z | x_outside) with secrecy-set inputs averaged out."""
    ztab = channel.z_marginal()
    for k in sorted(members(kprime), reverse=True):
        pmf = input_dist.per_user_pmf[k - 1]
        ztab = np.tensordot(pmf, ztab, axes=([0], [k - 1]))
    return ztab


def exact_output_distribution(
    ensemble: LayeredCodebooks,
    channel: MacWiretapChannel,
    conditioning: str = "full",
) -> np.ndarray:
    """The eavesdropper-output pmf over Z^n induced by the drawn codebooks.

    ``full`` averages over every message of every user.  ``subset`` keeps
    only the codebooks outside the secrecy set and replaces the secrecy-set
    inputs by fresh draws from the input law (the distribution an observer
    reaches without any secrecy-set codebook knowledge).
    """
    if conditioning not in ("full", "subset"):
        raise ValueError(f"conditioning must be 'full' or 'subset', got {conditioning!r}")
    n = ensemble.blocklength
    kbar = complement(ensemble.kprime, ensemble.user_count)
    if conditioning == "full":
        books = [b.reshape(-1, n) for b in ensemble.codewords]
        ztab = channel.z_marginal()
    else:
        books = [
            ensemble.codewords[k - 1].reshape(-1, n) for k in members(kbar)
        ]
        ztab = _guess_table(channel, ensemble.input_dist, ensemble.kprime)
    total = 1
    for b in books:
        total *= b.shape[0]
    _guard(channel.z_size, n, total)
    if not books:
        # no codebooks left: the guess table is already unconditional
        vec = np.ones(1)
        for _ in range(n):
            vec = np.kron(vec, ztab)
        return vec
    dist = np.zeros(channel.z_size ** n)
    for combo in itertools.product(*(range(b.shape[0]) for b in books)):
        symbols = np.stack([b[m] for b, m in zip(books, combo)])
        dist += _kron_row(ztab, symbols)
    return dist / total


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return float(np.abs(p - q).sum())


@dataclass(frozen=True)
class TvDecayRow:
    blocklength: int
    mean_tv: float
    trials: int
    condition_holds: bool
    realized_qrates: tuple[float, ...]
    # the best codebook seen; the existential claim itself is not certifiable
    # at desk scale, only witnessed
    min_tv: float = float("nan")


@dataclass(frozen=True)
class TvDecayResult:
    rows: tuple[TvDecayRow, ...]
    condition_margins: dict[int, float]

    @property
    def means(self) -> list[float]:
        return [r.mean_tv for r in self.rows]

    @property
    def blocklengths(self) -> list[int]:
        return [r.blocklength for r in self.rows]


def condition_margins(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    kprime: int,
    qrates,
) -> dict[int, float]:
    """Per nonempty subset S of the secrecy set: sum_S Q - I(X_S; Z | rest)."""
    mi = MutualInformationTable(channel, input_dist)
    kbar = complement(kprime, channel.user_count)
    out = {}
    for s_set in subsets(kprime):
        if not s_set:
            continue
        q_sum = sum(qrates[k - 1] for k in members(s_set))
        out[s_set] = q_sum - mi.mi("Z", s_set, kbar)
    return out


def expected_tv_distance(
    channel: MacWiretapChannel,
    input_dist: InputDistribution,
    kprime: int,
    qrates,
    blocklengths,
    trials: int,
    seed: int,
) -> TvDecayResult:
    """Monte-Carlo mean of the total-variation distance, per blocklength.

    Each trial draws one master symbol block per user and reuses its prefix
    for every blocklength, so the per-trial comparison across blocklengths
    is a paired one.  The decay condition (every nonempty subset of the
    secrecy set has positive rate margin over Eve's information) is
    evaluated once and reported with every row.
    """
    blocklengths = sorted(int(n) for n in blocklengths)
    margins = condition_margins(channel, input_dist, kprime, qrates)
    holds = all(v > 0 for v in margins.values())
    max_n = blocklengths[-1]
    counts = {
        n: [
            message_count(qrates[k - 1], n) if kprime & (1 << (k - 1)) else 1
            for k in range(1, channel.user_count + 1)
        ]
        for n in blocklengths
    }
    for n in blocklengths:
        _guard(channel.z_size, n, int(np.prod(counts[n])))
    max_counts = [
        max(counts[n][k] for n in blocklengths)
        for k in range(channel.user_count)
    ]
    ztab = channel.z_marginal()
    guess = _guess_table(channel, input_dist, kprime)
    kbar = complement(kprime, channel.user_count)
    kbar_idx = [k - 1 for k in members(kbar)]
    totals = {n: 0.0 for n in blocklengths}
    minima = {n: math.inf for n in blocklengths}
    children = np.random.SeedSequence(seed).spawn(trials)
    for t in range(trials):
        rng = np.random.default_rng(children[t])
        blocks = [
            rng.choice(
                len(input_dist.per_user_pmf[k]),
                size=(max_counts[k], max_n),
                p=input_dist.per_user_pmf[k],
            )
            for k in range(channel.user_count)
        ]
        for n in blocklengths:
            books = [blocks[k][: counts[n][k], :n] for k in range(channel.user_count)]
            total = int(np.prod([b.shape[0] for b in books]))
            dist = np.zeros(channel.z_size ** n)
            for combo in itertools.product(*(range(b.shape[0]) for b in books)):
                symbols = np.stack([b[m] for b, m in zip(books, combo)])
                dist += _kron_row(ztab, symbols)
            dist /= total
            if kbar_idx:
                sub_books = [books[k] for k in kbar_idx]
                sub_total = int(np.prod([b.shape[0] for b in sub_books]))
                sub = np.zeros(channel.z_size ** n)
                for combo in itertools.product(*(range(b.shape[0]) for b in sub_books)):
                    symbols = np.stack([b[m] for b, m in zip(sub_books, combo)])
                    sub += _kron_row(guess, symbols)
                sub /= sub_total
            else:
                sub = np.ones(1)
                for _ in range(n):
                    sub = np.kron(sub, guess)
            tv = total_variation(dist, sub)
            totals[n] += tv
            minima[n] = min(minima[n], tv)
    rows = tuple(
        TvDecayRow(
            n,
            totals[n] / trials,
            trials,
            holds,
            tuple(
                realized_rate(counts[n][k - 1], n)
                for k in range(1, channel.user_count + 1)
            ),
            minima[n],
        )
        for n in blocklengths
    )
    return TvDecayResult(rows, margins)


def log_linear_slope(blocklengths, means) -> float:
    """Least-squares slope of log(mean) against n."""
    if any(m <= 0 for m in means):
        raise ValueError("slope fit requires positive means")
    return float(np.polyfit(blocklengths, np.log(means), 1)[0])


def _secret_conditionals(ensemble: LayeredCodebooks, channel: MacWiretapChannel):
    """Yield (open-tuple of outsiders, matrix of P(z^n | secrets)) pairs.

    For each assignment of the outsiders' open messages, the returned matrix
    has one row per secrecy-set secret-message tuple: the output pmf with
    that tuple fixed and all open/auxiliary indices averaged out.
    """
    n = ensemble.blocklength
    kbar = complement(ensemble.kprime, ensemble.user_count)
    kp_idx = [k - 1 for k in members(ensemble.kprime)]
    kbar_idx = [k - 1 for k in members(kbar)]
    _guard(channel.z_size, n, ensemble.total_messages())
    ztab = channel.z_marginal()
    secret_ranges = [range(ensemble.secret_counts[k]) for k in kp_idx]
    open_bar_ranges = [range(ensemble.open_counts[k]) for k in kbar_idx]
    for mobar in itertools.product(*open_bar_ranges):
        outsider_words = [
            ensemble.codewords[k][m] for k, m in zip(kbar_idx, mobar)
        ]
        matrix = []
        for secrets in itertools.product(*secret_ranges):
            inner_ranges = [
                range(ensemble.open_counts[k] * ensemble.aux_counts[k])
                for k in kp_idx
            ]
            acc = np.zeros(channel.z_size ** n)
            count = 0
            for inner in itertools.product(*inner_ranges):
                rows = []
                pos_bar = 0
                for k in range(ensemble.user_count):
                    if k in kp_idx:
                        idx = kp_idx.index(k)
                        book = ensemble.codewords[k].reshape(
                            ensemble.secret_counts[k], -1, n
                        )
                        rows.append(book[secrets[idx], inner[idx]])
                    else:
                        rows.append(outsider_words[pos_bar])
                        pos_bar += 1
                acc += _kron_row(ztab, np.stack(rows))
                count += 1
            matrix.append(acc / count)
        yield mobar, np.array(matrix)


def exact_information_leakage(
    ensemble: LayeredCodebooks, channel: MacWiretapChannel
) -> float:
    """I(secret messages; Z^n | outsiders' open messages, codebooks) in bits.

    Exact for the drawn codebooks: uniform secrets, uniform open/auxiliary
    padding, the outsiders' open messages conditioned on and averaged."""

    def entropy_bits(p: np.ndarray) -> float:
        nz = p[p > 0]
        return float(-(nz * np.log2(nz)).sum())

    leakage = 0.0
    blocks = 0
    for _, matrix in _secret_conditionals(ensemble, channel):
        mixture = matrix.mean(axis=0)
        leakage += entropy_bits(mixture) - sum(
            entropy_bits(row) for row in matrix
        ) / len(matrix)
        blocks += 1
    value = leakage / blocks
    assert -1e-12 <= value <= ensemble.blocklength * math.log2(channel.z_size) + 1e-9
    return max(value, 0.0)


def per_secret_tv_distances(
    ensemble: LayeredCodebooks, channel: MacWiretapChannel
) -> dict[tuple, dict[str, float]]:
    """For each (outsider opens, secret tuple): the distance between the
    secret-averaged conditional and the secret-fixed conditional, plus the
    two one-sided distances to the input-law guess distribution."""
    n = ensemble.blocklength
    guess = _guess_table(channel, ensemble.input_dist, ensemble.kprime)
    kbar = complement(ensemble.kprime, ensemble.user_count)
    kbar_idx = [k - 1 for k in members(kbar)]
    out = {}
    for mobar, matrix in _secret_conditionals(ensemble, channel):
        mixture = matrix.mean(axis=0)
        if kbar_idx:
            rows = [ensemble.codewords[k][m] for k, m in zip(kbar_idx, mobar)]
            guess_dist = _kron_row(guess, np.stack(rows))
        else:
            guess_dist = np.ones(1)
            for _ in range(n):
                guess_dist = np.kron(guess_dist, guess)
        for s_idx, row in enumerate(matrix):
            out[(mobar, s_idx)] = {
                "tv": total_variation(mixture, row),
                "mixture_vs_guess": total_variation(mixture, guess_dist),
                "secret_vs_guess": total_variation(row, guess_dist),
            }
    return out


def write_tv_csv(result: TvDecayResult, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "mean_tv", "trials", "condition_holds"])
        for row in result.rows:
            writer.writerow(
                [row.blocklength, repr(row.mean_tv), row.trials, row.condition_holds]
            )


def write_leakage_csv(rows, path: Path) -> None:
    """rows: list of (blocklength, leakage_bits, realized_rates dict)."""
    if not rows:
        raise ValueError("no leakage rows to write")
    rate_keys = sorted(rows[0][2])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "leakage_bits"] + [f"realized_{k}" for k in rate_keys])
        for n, leak, rates in rows:
            writer.writerow([n, repr(leak)] + [repr(rates[k]) for k in rate_keys])
