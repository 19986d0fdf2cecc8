"""Command-line entry point.

Subcommands:

- ``region``        build secrecy-set regions from a channel file
- ``verify-lemma1`` run the projection-equivalence oracle on random channels
- ``adder``         the two-user adder-channel sweep, hulls and separation
- ``resolve``       output-statistics decay and exact leakage experiments

Outputs are files only; every invocation writes a ``run.json`` manifest next
to them so a run can be reproduced exactly.  Exit codes: 0 success, 1
verification failure, 2 usage or parse error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from macwt import adder as adder_mod
from macwt import figures
from macwt import resolvability as res_mod
from macwt.channel_io import ChannelSpecError, load_channel
from macwt.geometry.fme import fourier_motzkin_project
from macwt.geometry.simplex import polytope_equal
from macwt.probability import InputDistribution, sample_channel, sample_input
from macwt.regions import (
    build_lemma1_systems,
    build_theorem3_region,
    check_condition_cond1,
)
from macwt.subsets import format_set, members


def _write_manifest(outdir: Path, subcommand: str, params: dict, outputs: list):
    doc = {
        "subcommand": subcommand,
        "parameters": params,
        "outputs": sorted(str(p.name) for p in outputs),
    }
    path = outdir / "run.json"
    path.write_text(json.dumps(doc, indent=2) + "\n")


def _rates(text: str, user_count: int, name: str) -> list[float]:
    parts = [p for p in text.split(",") if p != ""]
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"{name}: expected comma-separated numbers, got {text!r}") from exc
    if len(values) == 1:
        values = values * user_count
    if len(values) != user_count:
        raise ValueError(
            f"{name}: expected 1 or {user_count} entries, got {len(values)}"
        )
    return values


def cmd_region(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    channel, dist = load_channel(args.channel)
    if dist is None:
        dist = InputDistribution.uniform(channel.input_sizes)
    if args.kprime is not None and args.kprime >= (1 << channel.user_count):
        raise ValueError(
            f"--kprime {args.kprime} out of range for K={channel.user_count}"
        )
    masks = (
        [args.kprime]
        if args.kprime is not None
        else list(range(1 << channel.user_count))
    )
    outputs = []
    for mask in masks:
        desc = build_theorem3_region(channel, dist, mask)
        report = check_condition_cond1(channel, dist, mask, tol=args.tol)
        base = f"region_k{mask}"
        region_path = outdir / f"{base}.json"
        region_path.write_text(json.dumps(desc.to_json_dict(), indent=2) + "\n")
        text_path = outdir / f"{base}.txt"
        text_path.write_text(desc.system.to_text())
        mi_path = outdir / f"mi_cache_k{mask}.json"
        mi_path.write_text(json.dumps(desc.mi_cache, indent=2) + "\n")
        cond_path = outdir / f"cond1_k{mask}.json"
        cond_path.write_text(
            json.dumps(
                {
                    "kprime": list(members(mask)),
                    "holds": report.holds,
                    "violating_subsets": [
                        list(members(m)) for m in report.violating_subsets
                    ],
                    "differences": {
                        format_set(m): v for m, v in report.differences.items()
                    },
                },
                indent=2,
            )
            + "\n"
        )
        outputs += [region_path, text_path, mi_path, cond_path]
        if not report.holds:
            print(
                f"note: feasibility condition fails for K'={format_set(mask)} "
                f"on subsets {[format_set(m) for m in report.violating_subsets]}"
            )
    _write_manifest(
        outdir,
        "region",
        {
            "channel": str(args.channel),
            "kprime": args.kprime,
            "tol": args.tol,
        },
        outputs,
    )
    return 0


def cmd_verify_lemma1(args) -> int:
    sizes = {1: ((2,), 3, 3), 2: ((2, 2), 3, 3), 3: ((2, 2, 2), 3, 3)}
    input_sizes, y_size, z_size = sizes[args.k]
    rng = np.random.default_rng(args.seed)
    aux_vars = [f"R{k}a" for k in range(1, args.k + 1)]
    trials = []
    all_pass = True
    for t in range(args.trials):
        channel = sample_channel(rng, input_sizes, y_size, z_size)
        dist = sample_input(rng, input_sizes)
        full = (1 << args.k) - 1
        cond = check_condition_cond1(channel, dist, full)
        inner, outer = build_lemma1_systems(channel, dist)
        projected = fourier_motzkin_project(inner.system, aux_vars)
        equal = polytope_equal(projected, outer.system)
        all_pass = all_pass and equal and cond.holds
        record = {
            "trial": t,
            "condition_holds": cond.holds,
            "inner_rows": len(inner.system.rows),
            "projected_rows": len(projected.rows),
            "outer_rows": len(outer.system.rows),
            "equal": equal,
        }
        trials.append(record)
        print(
            f"trial {t}: inner={record['inner_rows']} rows, "
            f"projected={record['projected_rows']}, outer={record['outer_rows']}, "
            f"equal={equal}"
        )
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        report = outdir / "lemma1_report.json"
        report.write_text(
            json.dumps({"K": args.k, "trials": trials, "all_pass": all_pass}, indent=2)
            + "\n"
        )
        _write_manifest(
            outdir,
            "verify-lemma1",
            {"K": args.k, "trials": args.trials, "seed": args.seed},
            [report],
        )
    print("PASS" if all_pass else "FAIL")
    return 0 if all_pass else 1


def cmd_adder(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    sweep = adder_mod.sweep_and_hull(args.q1, args.q2, args.delta)
    outputs = []
    sweep_path = outdir / "sweep.csv"
    adder_mod.write_sweep_csv(sweep, sweep_path)
    old_path = outdir / "hull_old.csv"
    adder_mod.write_hull_csv(sweep.hull_old, old_path)
    new_path = outdir / "hull_new1.csv"
    adder_mod.write_hull_csv(sweep.hull_new1, new_path)
    outputs += [sweep_path, old_path, new_path]
    params = {"q1": args.q1, "q2": args.q2, "delta": args.delta}
    try:
        separation = adder_mod.reproduce_separation(sweep)
    except RuntimeError:
        # sweep and hull files stay valid; the failed reproduction is the
        # verification failure the exit code reports
        if args.figures:
            hull_fig = outdir / "hulls.png"
            figures.render_hulls(sweep, None, hull_fig)
            outputs.append(hull_fig)
        _write_manifest(outdir, "adder", params, outputs)
        raise
    sep_path = outdir / "separation.json"
    adder_mod.write_separation_json(separation, sep_path)
    outputs.append(sep_path)
    print(
        f"separated extreme point ({separation.v0[0]:.7g}, {separation.v0[1]:.7g}) "
        f"with w=({separation.w[0]:.6g}, {separation.w[1]:.6g}), t={separation.t:.6g}"
    )
    if args.figures:
        hull_fig = outdir / "hulls.png"
        figures.render_hulls(sweep, separation, hull_fig)
        outputs.append(hull_fig)
        outputs += figures.render_bound_surfaces(sweep, outdir)
    _write_manifest(outdir, "adder", params, outputs)
    return 0


def cmd_resolve(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    channel, dist = load_channel(args.channel)
    if dist is None:
        dist = InputDistribution.uniform(channel.input_sizes)
    user_count = channel.user_count
    if args.kprime >= (1 << user_count):
        raise ValueError(f"--kprime {args.kprime} out of range for K={user_count}")
    qrates = _rates(args.q, user_count, "--q")
    for k in range(1, user_count + 1):
        if not args.kprime & (1 << (k - 1)) and qrates[k - 1] != 0.0:
            raise ValueError(
                f"--q: user {k} is outside the secrecy set, its rate must be 0"
            )
    blocklengths = [int(n) for n in args.blocklengths.split(",") if n]
    result = res_mod.expected_tv_distance(
        channel, dist, args.kprime, qrates, blocklengths, args.trials, args.seed
    )
    outputs = []
    tv_path = outdir / "tv_decay.csv"
    res_mod.write_tv_csv(result, tv_path)
    outputs.append(tv_path)
    for row in result.rows:
        print(
            f"n={row.blocklength}: mean TV {row.mean_tv:.6f} over {row.trials} "
            f"trials (condition holds: {row.condition_holds})"
        )

    leak_rs = _rates(args.leak_rs, user_count, "--leak-rs")
    leak_ro = _rates(args.leak_ro, user_count, "--leak-ro")
    leak_ra = [
        q if q > 0 else 0.0 for q in qrates
    ] if args.leak_ra is None else _rates(args.leak_ra, user_count, "--leak-ra")
    for k in range(1, user_count + 1):
        if not args.kprime & (1 << (k - 1)):
            leak_rs[k - 1] = 0.0
            leak_ra[k - 1] = 0.0
    leak_rows = []
    children = np.random.SeedSequence((args.seed, 0xC0DE)).spawn(len(blocklengths))
    for i, n in enumerate(blocklengths):
        rng = np.random.default_rng(children[i])
        ensemble = res_mod.draw_codebooks(
            dist, args.kprime, n, leak_rs, leak_ro, leak_ra, rng
        )
        leak = res_mod.exact_information_leakage(ensemble, channel)
        leak_rows.append((n, leak, ensemble.realized_rates()))
    leak_path = outdir / "leakage.csv"
    res_mod.write_leakage_csv(leak_rows, leak_path)
    outputs.append(leak_path)

    if args.figures:
        fig_path = outdir / "tv_decay.png"
        figures.render_tv_decay(result, fig_path)
        outputs.append(fig_path)
    _write_manifest(
        outdir,
        "resolve",
        {
            "channel": str(args.channel),
            "kprime": args.kprime,
            "q": qrates,
            "blocklengths": blocklengths,
            "trials": args.trials,
            "seed": args.seed,
            "leak_rs": leak_rs,
            "leak_ro": leak_ro,
            "leak_ra": leak_ra,
        },
        outputs,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macwt",
        description="Rate regions and resolvability experiments for "
        "multiple-access wiretap channels.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_region = sub.add_parser("region", help="build secrecy-set rate regions")
    p_region.add_argument("--channel", required=True, help="channel-spec JSON file")
    p_region.add_argument(
        "--kprime",
        type=int,
        default=None,
        help="secrecy-set bitmask (bit k-1 = user k); omit to build all sets",
    )
    p_region.add_argument("--out", required=True, help="output directory")
    p_region.add_argument("--tol", type=float, default=1e-9)
    p_region.set_defaults(func=cmd_region)

    p_verify = sub.add_parser(
        "verify-lemma1", help="projection-equivalence oracle on random channels"
    )
    p_verify.add_argument("--k", type=int, choices=(1, 2, 3), required=True)
    p_verify.add_argument("--trials", type=int, default=3)
    p_verify.add_argument("--seed", type=int, default=1)
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(func=cmd_verify_lemma1)

    p_adder = sub.add_parser("adder", help="two-user adder-channel study")
    p_adder.add_argument("--q1", type=float, default=0.5)
    p_adder.add_argument("--q2", type=float, default=0.75)
    p_adder.add_argument("--delta", type=float, default=0.01)
    p_adder.add_argument("--out", required=True)
    p_adder.add_argument(
        "--no-figures", dest="figures", action="store_false", default=True
    )
    p_adder.set_defaults(func=cmd_adder)

    p_resolve = sub.add_parser(
        "resolve", help="output-statistics decay and leakage experiments"
    )
    p_resolve.add_argument("--channel", required=True)
    p_resolve.add_argument("--kprime", type=int, default=1)
    p_resolve.add_argument("--q", default="0.5", help="per-user rates, comma list")
    p_resolve.add_argument("--blocklengths", default="2,4,6")
    p_resolve.add_argument("--trials", type=int, default=200)
    p_resolve.add_argument("--seed", type=int, default=1)
    p_resolve.add_argument("--leak-rs", default="0.25")
    p_resolve.add_argument("--leak-ro", default="0.0")
    p_resolve.add_argument("--leak-ra", default=None)
    p_resolve.add_argument("--out", required=True)
    p_resolve.add_argument(
        "--no-figures", dest="figures", action="store_false", default=True
    )
    p_resolve.set_defaults(func=cmd_resolve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ChannelSpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
