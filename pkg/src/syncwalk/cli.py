"""Command line front end.

Exit codes: 0 ok, 1 unreadable input, 2 precondition failed (chain not
mixing, support not synchronizing, law does not match), 3 search or depth
budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .chain import MIXING, classify, ratio_str, stationary
from .coloring import SearchBudgetExceeded, compose, synchronizing_word
from .entropy import (
    entropy_family,
    entropy_gap_floor,
    entropy_report,
    law_entropy,
)
from .formats import (
    FormatError,
    coloring_to_json,
    law_from_json,
    law_to_json,
    matrix_from_json,
    read_json,
    write_json,
)
from .law import NotMixingError, synchronizing_mapping_law, verify_mapping_law
from .sampler import DEFAULT_DEPTH_CAP, CoalescenceTimeout, NotSynchronizingError, sample_report

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3

FAMILY_NS = (10, 100, 1000, 10000)


def _prefix(args, source: str, tag: str) -> Path:
    if args.out:
        return Path(args.out)
    p = Path(source)
    return p.with_name(p.name.removesuffix(".json") + "." + tag)


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(cfg.items())}


def cmd_realize(args) -> int:
    Q = matrix_from_json(read_json(args.matrix), maxden=args.maxden)
    kind = classify(Q)
    if kind != MIXING:
        print(f"chain is {kind}; a synchronizing mapping law needs a mixing chain", file=sys.stderr)
        return EXIT_PRECONDITION
    mu, parts = synchronizing_mapping_law(Q, seed=args.seed, budget=args.search_budget, return_parts=True)
    word = synchronizing_word(mu.support)
    target = compose(word)[0]
    prefix = _prefix(args, args.matrix, "realize")
    config = _config(args)
    law_out = law_to_json(mu) | {"config": config}
    col_out = coloring_to_json(parts["coloring"]) | {
        "eps": ratio_str(parts["eps"]),
        "word": [s.labels() for s in word],
        "word_target": target + 1,
        "config": config,
    }
    law_path = Path(f"{prefix}.law.json")
    col_path = Path(f"{prefix}.coloring.json")
    write_json(law_path, law_out)
    write_json(col_path, col_out)
    print(f"chain: m={Q.m}, {kind}")
    print(f"support graph: {parts['graph'].d}-out, synchronizing coloring with {parts['coloring'].d} colors")
    print(f"eps = {parts['eps']}")
    print(f"mapping law: {len(mu)} maps, verified exactly: {verify_mapping_law(mu, Q)}")
    print(f"certificate: word of length {len(word)} maps every state to {target + 1}")
    print(f"wrote {law_path} and {col_path}")
    return EXIT_OK


def cmd_sample(args) -> int:
    mu = law_from_json(read_json(args.law))
    report = sample_report(mu, args.samples, args.seed, args.depth_cap)
    report["config"] = _config(args)
    path = Path(args.out) if args.out else Path(f"{_prefix(args, args.law, 'sample')}.json")
    write_json(path, report)
    print(f"{args.samples} exact stationary samples, seed {args.seed}")
    print("state  empirical  stationary")
    for x, c in report["empirical"].items():
        print(f"{x:>5}  {c / args.samples:9.4f}  {report['stationary'][x]:>10}")
    print(f"total variation distance: {report['tv_distance']:.5f}")
    print(f"mean coalescence depth: {report['mean_depth']:.3f}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_entropy(args) -> int:
    Q = matrix_from_json(read_json(args.matrix), maxden=args.maxden)
    kind = classify(Q)
    try:
        stationary(Q)
    except ValueError as exc:
        print(f"error: {exc}; the entropy rate is not defined", file=sys.stderr)
        return EXIT_PRECONDITION
    law = law_from_json(read_json(args.law)) if args.law else None
    if law is not None and not verify_mapping_law(law, Q):
        print("law is not a mapping law for this matrix", file=sys.stderr)
        return EXIT_PRECONDITION
    rep = entropy_report(Q, law, seed=args.seed)
    out = {"config": _config(args), "classification": kind}
    family_law = None
    if args.n is not None:
        if not rep.p_uniform or kind != MIXING:
            print("entropy family needs a mixing p-uniform chain", file=sys.stderr)
            return EXIT_PRECONDITION
        family_law = entropy_family(Q, args.n, seed=args.seed)
    if law is None:
        law = family_law
    if law is None and kind == MIXING:
        law = synchronizing_mapping_law(Q, seed=args.seed, budget=args.search_budget)
    hY = rep.hY
    hN = None if law is None else law_entropy(law)
    out.update(hY=hY, hN=hN, gap=None if hN is None else hN - hY, p_uniform=rep.p_uniform, n_min=rep.n_min)
    if rep.p_uniform and kind == MIXING:
        table = []
        for n in FAMILY_NS:
            if n >= rep.n_min:
                h = law_entropy(entropy_family(Q, n, seed=args.seed))
                table.append({"n": n, "hN": h, "gap": h - hY})
        out["family"] = table
    if Q.m <= 3 and kind == MIXING:
        out["gap_floor"] = entropy_gap_floor(Q, Fraction(1, 1000), seed=args.seed)
    prefix = _prefix(args, args.matrix, "entropy")
    path = Path(f"{prefix}.json")
    write_json(path, out)
    print(f"h(Y) = {hY:.6f} nats")
    if hN is not None:
        print(f"h(N) = {hN:.6f} nats, gap = {hN - hY:.6f}")
    print(f"p-uniform: {rep.p_uniform}" + (f" (least family index n = {rep.n_min})" if rep.n_min else ""))
    if "family" in out:
        print("     n         h(N)          gap")
        for row in out["family"]:
            print(f"{row['n']:>6}  {row['hN']:11.6f}  {row['gap']:11.6f}")
    if "gap_floor" in out:
        print(f"grid floor of the gap: {out['gap_floor']:.6f}")
    if family_law is not None:
        fpath = Path(f"{prefix}.family-{args.n}.law.json")
        write_json(fpath, law_to_json(family_law) | {"config": _config(args)})
        print(f"wrote {fpath}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    mu = law_from_json(read_json(args.law))
    Q = matrix_from_json(read_json(args.matrix))
    if mu.m != Q.m:
        print(f"FAIL: law acts on {mu.m} states, matrix has {Q.m}")
        return EXIT_PRECONDITION
    ok = verify_mapping_law(mu, Q)
    print(("PASS" if ok else "FAIL") + f": {args.law} {'is' if ok else 'is not'} a mapping law for {args.matrix}")
    print(f"synchronizing support: {mu.has_synchronizing_support()}")
    return EXIT_OK if ok else EXIT_PRECONDITION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="syncwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--maxden", type=int, default=10**6, help="denominator bound for float input")
    common.add_argument("--search-budget", type=int, default=10**6, help="max colorings tried")
    common.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)
    common.add_argument("--samples", type=int, default=10**4)
    common.add_argument("--out", help="output path or prefix")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("realize", parents=[common], help="synchronizing mapping law for a mixing chain")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("sample", parents=[common], help="exact stationary samples by coupling from the past")
    p.add_argument("law")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("entropy", parents=[common], help="chain and driving-noise entropies")
    p.add_argument("matrix")
    p.add_argument("--law")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("verify", parents=[common], help="check a law against a matrix exactly")
    p.add_argument("law")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotMixingError, NotSynchronizingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (SearchBudgetExceeded, CoalescenceTimeout) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
