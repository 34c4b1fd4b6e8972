"""Command line interface.

Exit codes: 0 success, 2 usage or bad magic, 3 data or codec error,
4 resource limit.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .codec import decode_freq, encode_freq
from .dynamics import parse_model
from .errors import CodecError, ResourceError, SupportViolation
from .experiments import ExperimentConfig, brudno_rows, rows_to_csv, summary_lines, verify_report
from .formats import BadMagic, dump_word, load_word, pack_bits, unpack_bits
from .groups import parse_group
from .monotiling import DEFAULT_BUDGET, DEFAULT_CAP, parse_monotiling

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_RESOURCE = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _tiling(args):
    try:
        group = parse_group(args.group)
        kw = {}
        if args.budget is not None:
            kw = {"cap": args.budget, "budget": args.budget}
        return parse_monotiling(args.tiling, group, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args) -> int:
    M = _tiling(args)
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    print(f"verify {M.group.token} {M.token} n_max={args.n_max}")
    for name, errs in verify_report(M, args.n_max):
        if errs is None:
            print(f"skip {name}: exceeds the element cap")
            continue
        if errs:
            print(f"FAIL {name}: {errs[0]}")
            return EXIT_DATA
        print(f"ok   {name}")
    return EXIT_OK


def cmd_encode(args) -> int:
    data = Path(args.word).read_bytes()
    kw = {} if args.budget is None else {"cap": args.budget, "budget": args.budget}
    word, M = load_word(data, **kw)
    n = getattr(word.support, "n", None)
    if M is None or args.n is not None:
        if args.tiling is None or args.n is None:
            raise UsageError("word support is not a tile; pass --tiling and --n")
        M = parse_monotiling(args.tiling, word.group, **kw)
        n = args.n[0]
    bits = min((encode_freq(word, k, M, n) for k in args.k), key=len)
    Path(args.out).write_bytes(pack_bits(bits))
    print(f"{len(bits)} bits for {M.tile_size(n)} sites ({len(bits) / M.tile_size(n):.4f} bits/site)")
    return EXIT_OK


def cmd_decode(args) -> int:
    M = _tiling(args)
    bits = unpack_bits(Path(args.bits).read_bytes())
    word = decode_freq(bits, M, args.alphabet)
    Path(args.out).write_bytes(dump_word(word, M))
    return EXIT_OK


def cmd_brudno(args) -> int:
    M = _tiling(args)
    try:
        model = parse_model(args.model, args.seed)
        cfg = ExperimentConfig(args.group, args.tiling, model, args.k, args.n, args.samples, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = brudno_rows(cfg, M)
    text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for line in summary_lines(rows):
        print(line, file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_tempered(args) -> int:
    M = _tiling(args)
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    seq = M.tempered_subsequence(args.count, size_cap=args.budget)
    print(" ".join(str(n) for n in seq))
    for i in range(2, len(seq) + 1):
        r = M.temperedness_ratio(seq, i)
        print(f"ratio {i}: {float(r):.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="folner", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tiling_required=True):
        sp.add_argument("--group", required=tiling_required)
        sp.add_argument("--tiling", required=tiling_required)
        sp.add_argument("--budget", type=int, default=None,
                        help=f"element cap and search budget (defaults {DEFAULT_CAP}, {DEFAULT_BUDGET})")

    v = sub.add_parser("verify", help="run the monotiling invariant suite")
    common(v)
    v.add_argument("--n-max", type=int, default=4)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("encode", help="MTW1 word file to MTB1 frequency program")
    e.add_argument("word")
    common(e, tiling_required=False)
    e.add_argument("--k", type=_ints, required=True)
    e.add_argument("--n", type=_ints, default=None)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="MTB1 frequency program to MTW1 word file")
    d.add_argument("bits")
    common(d)
    d.add_argument("--alphabet", type=int, default=2)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_decode)

    b = sub.add_parser("brudno", help="compression rate experiment, CSV output")
    common(b)
    b.add_argument("--model", required=True)
    b.add_argument("--k", type=_ints, required=True)
    b.add_argument("--n", type=_ints, required=True)
    b.add_argument("--samples", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_brudno)

    t = sub.add_parser("tempered", help="print a tempered subsequence of tile indices")
    common(t)
    t.add_argument("--count", type=int, default=3)
    t.set_defaults(func=cmd_tempered)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BadMagic as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource limit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (CodecError, SupportViolation) as exc:
        print(f"data error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
