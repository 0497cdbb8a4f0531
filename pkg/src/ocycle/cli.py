"""Command-line front door: play, sweep, verify, solve, serve.

Bias flags accept either an absolute ``--b`` or a fraction ``--b-frac``
of the form ``p/q``, ``p/q+c`` or ``p/q-c``, evaluated as ceil(p*n/q) + c
in exact integer arithmetic.  Sweeps emit one CSV row per game plus a
trailing summary comment; the ``ARENA_THREADS`` environment variable caps
their parallelism.

Exit codes: 0 clean, 1 violations found, 2 usage or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .engine import (
    GameConfig,
    OBREAKER_NAMES,
    Transcript,
    Unsolved,
    play,
    referee_check,
    solve_exact,
)
from .omaker import OMAKER_NAMES


def parse_b_frac(spec: str, n: int) -> int:
    """Evaluate 'p/q', 'p/q+c' or 'p/q-c' as ceil(p*n/q) + c."""
    body, shift = spec, 0
    for sign in ("+", "-"):
        if sign in spec[spec.index("/") :]:
            cut = spec.index(sign, spec.index("/"))
            body, shift = spec[:cut], int(spec[cut:])
            break
    p_str, q_str = body.split("/")
    p, q = int(p_str), int(q_str)
    if p <= 0 or q <= 0:
        raise ValueError(f"invalid fraction {spec!r}")
    return -(-p * n // q) + shift


def parse_int_range(spec: str) -> list[int]:
    """'12,18' | '12..48' | '12..48:6' -> explicit integer list."""
    out: list[int] = []
    for item in spec.split(","):
        item = item.strip()
        if ".." in item:
            lo_str, rest = item.split("..")
            step = 1
            if ":" in rest:
                hi_str, step_str = rest.split(":")
                step = int(step_str)
            else:
                hi_str = rest
            out.extend(range(int(lo_str), int(hi_str) + 1, step))
        elif item:
            out.append(int(item))
    return out


def _resolve_bias(args, n: int) -> int:
    if args.b_frac:
        return parse_b_frac(args.b_frac, n)
    if args.b is None:
        raise ValueError("one of --b or --b-frac is required")
    return args.b


def cmd_play(args) -> int:
    try:
        b = _resolve_bias(args, args.n)
        cfg = GameConfig(
            n=args.n,
            b=b,
            rules=args.rules,
            obreaker=args.obreaker,
            omaker=args.omaker,
            seed=args.seed,
            check=args.check,
        )
        cfg.validate()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    tr = play(cfg)
    payload = json.dumps(tr.to_json(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    violations = referee_check(tr)
    for item in violations:
        print(f"violation: {item}", file=sys.stderr)
    print(
        f"winner={tr.winner} terminal={tr.terminal} rounds={len(tr.rounds)}",
        file=sys.stderr,
    )
    return 1 if violations else 0


def _sweep_row(cfg_json: dict) -> tuple:
    cfg = GameConfig.from_json(cfg_json)
    tr = play(cfg)
    max_reply = max((len(r["breaker"]) for r in tr.rounds), default=0)
    return (
        cfg.n,
        cfg.b,
        cfg.rules,
        cfg.obreaker,
        cfg.omaker,
        cfg.seed,
        tr.winner,
        max_reply,
        len(tr.rounds),
    )


def cmd_sweep(args) -> int:
    try:
        ns = parse_int_range(args.n)
        seeds = parse_int_range(args.seeds)
        omakers = args.omaker.split(",")
        configs = []
        for n in ns:
            b = _resolve_bias(args, n)
            for om in omakers:
                for seed in seeds:
                    cfg = GameConfig(
                        n=n,
                        b=b,
                        rules=args.rules,
                        obreaker=args.obreaker,
                        omaker=om,
                        seed=seed,
                    )
                    cfg.validate()
                    configs.append(cfg.to_json())
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    threads = int(os.environ.get("ARENA_THREADS", "1"))
    if threads > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_row, configs))
    else:
        rows = [_sweep_row(c) for c in configs]
    out = sys.stdout if not args.out else open(args.out, "w")
    try:
        print("n,b,rules,obreaker,omaker,seed,winner,max_reply,rounds", file=out)
        wins: dict[str, int] = {}
        max_reply = 0
        for row in rows:
            print(",".join(str(x) for x in row), file=out)
            wins[row[6]] = wins.get(row[6], 0) + 1
            max_reply = max(max_reply, row[7])
        counts = " ".join(f"{k}={v}" for k, v in sorted(wins.items()))
        print(f"# summary: games={len(rows)} {counts} max_reply={max_reply}", file=out)
    finally:
        if args.out:
            out.close()
    return 0


def cmd_verify(args) -> int:
    try:
        with open(args.infile) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read transcript: {exc}", file=sys.stderr)
        return 2
    try:
        violations = referee_check(Transcript.from_json(payload), deep=args.deep)
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed transcript: {exc}", file=sys.stderr)
        return 2
    for item in violations:
        print(f"violation: {item}")
    print(f"{len(violations)} violation(s)")
    return 1 if violations else 0


def cmd_solve(args) -> int:
    try:
        b = _resolve_bias(args, args.n)
        res = solve_exact(args.n, b, args.rules, node_cap=args.node_cap)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Unsolved as exc:
        print(f"unsolved: {exc}", file=sys.stderr)
        return 1
    print(
        json.dumps(
            {
                "n": res.n,
                "b": res.b,
                "rules": res.rules,
                "winner": res.winner,
                "nodes": res.nodes,
            }
        )
    )
    return 0


def cmd_serve(args) -> int:
    from .service import run_server

    run_server(port=args.port, persist_dir=args.persist_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ocycle", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_bias(p):
        p.add_argument("--b", type=int, default=None, help="absolute bias")
        p.add_argument(
            "--b-frac", default=None, help="bias as ceil(p*n/q)+c, e.g. 19/20 or 5/6+2"
        )

    p = sub.add_parser("play", help="play one game and write its transcript")
    p.add_argument("--n", type=int, required=True)
    add_bias(p)
    p.add_argument("--rules", choices=("monotone", "strict"), default="monotone")
    p.add_argument("--obreaker", choices=OBREAKER_NAMES, default="trivial")
    p.add_argument("--omaker", choices=OMAKER_NAMES, default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", choices=("none", "certificate", "deep"), default="none")
    p.add_argument("--out", default=None, help="transcript file (default stdout)")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("sweep", help="play a grid of games, emit CSV")
    p.add_argument("--n", required=True, help="e.g. 12,18 or 60..120:25")
    add_bias(p)
    p.add_argument("--rules", choices=("monotone", "strict"), default="monotone")
    p.add_argument("--obreaker", choices=OBREAKER_NAMES, default="trivial")
    p.add_argument("--omaker", default="random", help="comma list of adversaries")
    p.add_argument("--seeds", default="0", help="e.g. 0..19")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="re-simulate and referee a transcript")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--deep", action="store_true", help="also replay the strategies")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="exact small-board solver")
    p.add_argument("--n", type=int, required=True)
    add_bias(p)
    p.add_argument("--rules", choices=("monotone", "strict"), default="monotone")
    p.add_argument("--node-cap", type=int, default=2_000_000)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("serve", help="run the interactive HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--persist-dir", default=None)
    p.set_defaults(func=cmd_serve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
