"""Command-line interface.

Commands: sample, count, verify {uniformity|census|forward-bias|oracle},
stats, render, figure1.  Every randomized command requires --seed; there
is no wall-clock seeding, so identical invocations produce identical
output.  Exit codes: 0 success, 1 failed verification, 2 bad input or a
sampler error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .engine import (
    cftp_sample,
    coalescence_stats,
    forward_coalescence_sample,
)
from .errors import SamplerError, UnsupportedFamily
from .families import FAMILY_NAMES, make_family
from .oracle import (
    IdealCounter,
    chi_square_uniformity,
    count_ideals,
    enumerate_ideals,
    enumerate_states,
    exact_cftp_census,
    forward_bias_exact,
    recursive_exact_sample,
)
from .randomness import RandomnessOracle
from .render import FORMATS, RenderSpec, render_state

_MASK64 = (1 << 64) - 1

SCHEDULES = ("uniform", "sweep", "rank-parity")


def _parse_params(text: str | None) -> dict:
    """k=v[,k=v...] into a string dict; values with commas need a file."""
    out: dict = {}
    for piece in (text or "").split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise ValueError(f"bad parameter {piece!r}, expected key=value")
        k, v = piece.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _state_label(instance, state) -> str:
    return json.dumps(instance.encode_state(state), sort_keys=True)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_sample(args) -> int:
    if args.format != "json":
        raise ValueError("sample emits json records; use the render command for svg/ascii")
    instance = make_family(args.family, _parse_params(args.params))
    records = []
    for i in range(args.samples):
        rec = cftp_sample(
            instance.system,
            seed=(args.seed + i) & _MASK64,
            schedule=args.schedule,
            q=args.q,
        )
        payload = rec.to_json_dict(
            family=instance.family,
            params=instance.params,
            state_encoder=instance.encode_state,
        )
        payload["tool_version"] = __version__
        records.append(payload)
    _emit(json.dumps(records, sort_keys=True, indent=1) + "\n", args.out)
    return 0


def cmd_count(args) -> int:
    instance = make_family(args.family, _parse_params(args.params))
    if instance.count_exact is not None:
        count, method = instance.count_exact, "formula"
    else:
        count = enumerate_states(instance.system, limit=args.budget).count
        method = "enumeration"
    doc = {
        "family": instance.family,
        "params": instance.params,
        "count": count,
        "method": method,
        "tool_version": __version__,
    }
    _emit(json.dumps(doc, sort_keys=True) + "\n", args.out)
    return 0


def cmd_verify_uniformity(args) -> int:
    instance = make_family(args.family, _parse_params(args.params))
    enum = enumerate_states(instance.system, limit=args.budget)
    index = enum.index()
    counts = [0] * enum.count
    for i in range(args.samples):
        rec = cftp_sample(
            instance.system,
            seed=(args.seed + i) & _MASK64,
            schedule=args.schedule,
            q=args.q,
        )
        counts[index[rec.state]] += 1
    weights = None
    if args.q != 1.0:
        weights = [args.q ** instance.system.rank_of(s) for s in enum.states]
    result = chi_square_uniformity(counts, weights, alpha=args.alpha)
    print(f"family {instance.family} params {json.dumps(instance.params, sort_keys=True)}")
    print(f"states {enum.count}  samples {args.samples}  schedule {args.schedule}  q {args.q}")
    print(
        f"chi2 {result.statistic:.4f}  df {result.degrees}  p {result.pvalue:.6g}"
        f"  alpha {result.alpha}"
    )
    print("uniformity " + ("PASS" if result.passed else "FAIL"))
    return 0 if result.passed else 1


def cmd_verify_census(args) -> int:
    instance = make_family(args.family, _parse_params(args.params))
    census = exact_cftp_census(
        instance.system,
        schedule=args.schedule,
        horizon=args.horizon,
        budget=args.budget,
    )
    target = Fraction(1, len(census.states))
    print(
        f"family {instance.family}  horizon {args.horizon}  schedule {args.schedule}  "
        f"target 1/{len(census.states)}"
    )
    ok = True
    for s in census.states:
        lo, hi = census.lower[s], census.upper[s]
        contains = lo <= target <= hi
        ok = ok and contains
        print(
            f"state {_state_label(instance, s)}: [{lo}, {hi}] "
            + ("contains target" if contains else "MISSES target")
        )
    print(f"uncoalesced mass {census.uncoalesced}")
    print("census " + ("PASS" if ok else "FAIL"))
    return 0 if ok else 1


def cmd_verify_forward_bias(args) -> int:
    instance = make_family(args.family, _parse_params(args.params))
    exact = forward_bias_exact(instance.system, budget=args.budget)
    enum = enumerate_states(instance.system, limit=args.budget)
    index = enum.index()
    counts = [0] * enum.count
    for i in range(args.samples):
        state = forward_coalescence_sample(
            instance.system, seed=(args.seed + i) & _MASK64, schedule=args.schedule
        )
        counts[index[state]] += 1
    n = args.samples
    print(f"family {instance.family}  samples {n}  (forward coupling, biased by design)")
    ok = True
    for s in enum.states:
        p = float(exact.get(s, Fraction(0)))
        emp = counts[index[s]] / n
        sigma = math.sqrt(p * (1.0 - p) / n)
        within = abs(emp - p) <= 3 * sigma if sigma > 0 else counts[index[s]] in (0, n)
        ok = ok and within
        print(
            f"state {_state_label(instance, s)}: exact {p:.6f}  empirical {emp:.6f}  "
            + ("within 3 sigma" if within else "OUTSIDE 3 sigma")
        )
    try:
        chi = chi_square_uniformity(counts, alpha=args.alpha)
        verdict = "rejected" if not chi.passed else "NOT rejected"
        print(f"uniformity {verdict} (p {chi.pvalue:.6g}); forward coupling is not a uniform sampler")
    except SamplerError as e:
        print(f"uniformity test skipped: {e}")
    print("forward-bias " + ("PASS" if ok else "FAIL"))
    return 0 if ok else 1


def cmd_verify_oracle(args) -> int:
    instance = make_family(args.family, _parse_params(args.params))
    if instance.poset is None:
        raise UnsupportedFamily(
            f"family {instance.family!r} has no explicit element poset; "
            "oracle verification needs one"
        )
    enum = enumerate_ideals(instance.poset, limit=args.budget)
    counted = count_ideals(instance.poset, budget=args.budget)
    lines = [f"enumerated ideals {enum.count}", f"deletion-recursion count {counted}"]
    ok = counted == enum.count
    if instance.count_exact is not None:
        lines.append(f"closed-form count {instance.count_exact}")
        ok = ok and instance.count_exact == enum.count
    for line in lines:
        print(line)
    index = {bits: i for i, bits in enumerate(enum.states)}
    counter = IdealCounter(instance.poset, budget=args.budget)
    counts = [0] * enum.count
    for i in range(args.samples):
        ideal = recursive_exact_sample(
            instance.poset,
            RandomnessOracle((args.seed + i) & _MASK64),
            counter=counter,
        )
        counts[index[ideal.bits]] += 1
    chi = chi_square_uniformity(counts, alpha=args.alpha)
    print(
        f"recursive sampler: {args.samples} draws, chi2 {chi.statistic:.4f} "
        f"df {chi.degrees} p {chi.pvalue:.6g}"
    )
    ok = ok and chi.passed
    print("oracle " + ("PASS" if ok else "FAIL"))
    return 0 if ok else 1


def _stats_png(path: str, per_schedule: dict) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    horizons = sorted({t for st in per_schedule.values() for t in st.histogram})
    pos = {t: i for i, t in enumerate(horizons)}
    width = 0.8 / max(len(per_schedule), 1)
    fig, ax = plt.subplots(figsize=(7, 4))
    for k, (name, st) in enumerate(sorted(per_schedule.items())):
        xs = [pos[t] + k * width for t in sorted(st.histogram)]
        ys = [st.histogram[t] for t in sorted(st.histogram)]
        ax.bar(xs, ys, width=width, label=name)
    ax.set_xticks([pos[t] + 0.4 - width / 2 for t in horizons])
    ax.set_xticklabels([str(t) for t in horizons])
    ax.set_xlabel("detected coalescence horizon T")
    ax.set_ylabel("trials")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_stats(args) -> int:
    instance = make_family(args.family, _parse_params(args.params))
    if args.schedule == "all":
        schedules = ["uniform", "sweep"]
        if instance.system.graded:
            schedules.append("rank-parity")
    else:
        schedules = [args.schedule]
    per_schedule = {}
    for sched in schedules:
        per_schedule[sched] = coalescence_stats(
            instance.system, schedule=sched, trials=args.samples, seed=args.seed, q=args.q
        )
    base = str(args.out)
    for suffix in (".json", ".csv", ".png"):
        if base.endswith(suffix):
            base = base[: -len(suffix)]
    doc = {
        "family": instance.family,
        "params": instance.params,
        "seed": args.seed,
        "q": args.q,
        "trials": args.samples,
        "tool_version": __version__,
        "schedules": {k: v.to_json_dict() for k, v in per_schedule.items()},
    }
    Path(base + ".json").write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    with open(base + ".csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["schedule", "t_final", "count", "frequency"])
        for sched in schedules:
            st = per_schedule[sched]
            for t in sorted(st.histogram):
                writer.writerow([sched, t, st.histogram[t], st.window_frequency[t]])
    _stats_png(base + ".png", per_schedule)
    print(f"family {instance.family}  trials {args.samples}  q {args.q}")
    print(f"{'schedule':<12} {'mean T':>8} {'median':>8} {'max':>6} {'mean updates':>14}")
    for sched in schedules:
        st = per_schedule[sched]
        print(
            f"{sched:<12} {st.mean:>8.2f} {st.median:>8.1f} "
            f"{max(st.t_finals):>6} {st.mean_updates:>14.1f}"
        )
    print(f"wrote {base}.json {base}.csv {base}.png")
    return 0


def _provenance_comment(rec: dict) -> str:
    """SVG header comment carrying the fields needed to regenerate the draw."""
    keys = ("family", "params", "seed", "schedule", "q", "algorithm_id")
    fields = {k: rec[k] for k in keys if k in rec}
    fields["tool_version"] = __version__
    return f"<!-- {json.dumps(fields, sort_keys=True)} -->\n"


def cmd_render(args) -> int:
    with open(args.records) as f:
        obj = json.load(f)
    records = obj if isinstance(obj, list) else [obj]
    if not 0 <= args.index < len(records):
        raise ValueError(f"index {args.index} outside 0..{len(records) - 1}")
    rec = records[args.index]
    instance = make_family(rec["family"], rec["params"])
    state = instance.decode_state(rec["state"])
    spec = RenderSpec(format=args.format, scale=args.scale)
    text = render_state(instance, instance.encode_state(state), spec)
    if args.format == "svg":
        text = _provenance_comment(rec) + text
    _emit(text, args.out)
    return 0


def cmd_figure1(args) -> int:
    side = args.side
    instance = make_family("boxes", {"a": side, "b": side, "c": side})
    rec = cftp_sample(instance.system, seed=args.seed, schedule=args.schedule, q=1.0)
    spec = RenderSpec(format="svg", scale=args.scale)
    head = _provenance_comment(
        rec.to_json_dict(
            family=instance.family,
            params=instance.params,
            state_encoder=instance.encode_state,
        )
    )
    _emit(head + render_state(instance, instance.encode_state(rec.state), spec), args.out)
    boxes = instance.system.rank_of(rec.state)
    print(
        f"wrote {args.out}: side {side}, seed {args.seed}, schedule {rec.schedule}, "
        f"T_final {rec.t_final}, updates {rec.update_count}, boxes {boxes}"
    )
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_family(sp, required: bool = True) -> None:
    sp.add_argument(
        "--family",
        required=required,
        help=f"family descriptor ({', '.join(FAMILY_NAMES)})",
    )
    sp.add_argument("--params", default="", help="family parameters as k=v[,k=v...]")


def _add_seed(sp) -> None:
    sp.add_argument("--seed", type=int, required=True, help="base seed (required)")


def _add_schedule(sp, extra=()) -> None:
    sp.add_argument(
        "--schedule", choices=SCHEDULES + tuple(extra), default="uniform",
        help="site-selection schedule",
    )


def _add_out(sp) -> None:
    sp.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cftpsample",
        description="Exact uniform sampling of lattice families by coupling from the past.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="draw exact samples as JSON records")
    _add_family(sp)
    _add_seed(sp)
    sp.add_argument(
        "--samples", type=int, required=True,
        help="number of draws, fixed before looking at any output; "
        "stopping adaptively on the results would bias them",
    )
    _add_schedule(sp)
    sp.add_argument("--q", type=float, default=1.0, help="bias: stationary law q^rank")
    sp.add_argument("--format", choices=FORMATS, default="json")
    _add_out(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("count", help="exact state count (formula or enumeration)")
    _add_family(sp)
    sp.add_argument("--budget", type=int, default=1_000_000, help="enumeration cap")
    _add_out(sp)
    sp.set_defaults(func=cmd_count)

    verify = sub.add_parser("verify", help="statistical and exact self-checks")
    vsub = verify.add_subparsers(dest="check", required=True)

    sp = vsub.add_parser("uniformity", help="chi-square of sampler output vs oracle enumeration")
    _add_family(sp)
    _add_seed(sp)
    sp.add_argument("--samples", type=int, required=True)
    _add_schedule(sp)
    sp.add_argument("--q", type=float, default=1.0)
    sp.add_argument("--alpha", type=float, default=0.001)
    sp.add_argument("--budget", type=int, default=1_000_000)
    sp.set_defaults(func=cmd_verify_uniformity)

    sp = vsub.add_parser("census", help="exhaustive coin-sequence census brackets uniformity")
    _add_family(sp)
    sp.add_argument("--horizon", type=int, default=4, help="backward window cap")
    _add_schedule(sp)
    sp.add_argument("--budget", type=int, default=1_000_000)
    sp.set_defaults(func=cmd_verify_census)

    sp = vsub.add_parser(
        "forward-bias", help="demonstrate that forward coupling is biased"
    )
    _add_family(sp)
    _add_seed(sp)
    sp.add_argument("--samples", type=int, required=True)
    _add_schedule(sp)
    sp.add_argument("--alpha", type=float, default=0.001)
    sp.add_argument("--budget", type=int, default=20_000)
    sp.set_defaults(func=cmd_verify_forward_bias)

    sp = vsub.add_parser("oracle", help="cross-check counts and the recursive sampler")
    _add_family(sp)
    _add_seed(sp)
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--alpha", type=float, default=0.001)
    sp.add_argument("--budget", type=int, default=200_000)
    sp.set_defaults(func=cmd_verify_oracle)

    sp = sub.add_parser("stats", help="coalescence-time report: JSON + CSV + PNG")
    _add_family(sp)
    _add_seed(sp)
    sp.add_argument("--samples", type=int, default=100, help="independent trials")
    _add_schedule(sp, extra=("all",))
    sp.add_argument("--q", type=float, default=1.0)
    sp.add_argument("--out", required=True, help="output base path (suffixes added)")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("render", help="render a stored sample record")
    sp.add_argument("records", help="JSON file from the sample command")
    sp.add_argument("--index", type=int, default=0, help="record index in the file")
    sp.add_argument("--format", choices=FORMATS, default="svg")
    sp.add_argument("--scale", type=float, default=24.0)
    _add_out(sp)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("figure1", help="random lozenge tiling of a hexagon, as SVG")
    sp.add_argument("--side", type=int, default=32)
    _add_seed(sp)
    sp.add_argument("--schedule", choices=SCHEDULES, default="rank-parity")
    sp.add_argument("--scale", type=float, default=12.0)
    sp.add_argument("--out", default="figure1.svg")
    sp.set_defaults(func=cmd_figure1)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SamplerError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
