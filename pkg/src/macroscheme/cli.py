"""Command line entry point: ``macroscheme <command> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor

from . import generators
from .annealing import AnnealParams, LOCAL_MINIMUM, run
from .certificate import (attractor_of, check_certificate, de_bruijn_bound,
                          de_bruijn_bound_ceil, lower_bound, verify_attractor, ATTRACTOR_CAP)
from .lz import lz_parse
from .suffix_index import build
from .text import FormatError, SentinelCollision, Text, materialize, read_scheme, validate, write_scheme
from .validation import check_text

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IO = 3

TRACE_HEADER = ["family", "params", "seed", "iteration", "k", "temperature"]
BENCH_HEADER = ["family", "params", "seed", "iteration", "k", "temperature",
                "lz_size", "lower_bound", "certificate"]


class CliError(Exception):
    pass


def _read_bytes(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc


def _write_bytes(path, payload):
    try:
        with open(path, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from exc


def _load_text(path) -> Text:
    try:
        return check_text(_read_bytes(path))
    except SentinelCollision as exc:
        raise CliError(f"{path}: {exc}") from exc


def _load_scheme(path):
    try:
        return read_scheme(_read_bytes(path))[0]
    except FormatError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("ascii")


def family_text(args):
    """Build the family instance; returns (text, params label, lower bound)."""
    fam = args.family
    if fam == "fibonacci":
        _need(args, "index")
        text = generators.fibonacci(args.index)
        return text, f"index={args.index}", lower_bound("fibonacci")
    if fam == "thue-morse":
        _need(args, "index")
        text = generators.thue_morse(args.index)
        return text, f"index={args.index}", lower_bound("thue-morse", text)
    if fam == "debruijn":
        _need(args, "order")
        text = generators.de_bruijn(args.order)
        return text, f"order={args.order}", lower_bound("debruijn", order=args.order)
    if fam == "planted":
        _need(args, "n")
        _need(args, "d")
        text, _ = generators.planted(args.n, args.d, args.seed)
        return text, f"n={args.n};d={args.d};seed={args.seed}", lower_bound("planted", d=args.d)
    raise CliError(f"unknown family {fam}")


def _need(args, name):
    if getattr(args, name) is None:
        raise CliError(f"--{name} is required for family {args.family}")


def _params(args, seed):
    return AnnealParams(t0=args.t0, alpha=args.alpha, cool_every=args.cool_every,
                        max_iters=args.max_iters, retries=args.retries, seed=seed, init=args.init)


def _progress(enabled):
    if not enabled:
        return None

    def sink(iteration, k, t):
        if iteration % 1000 == 0:
            print(f"iteration {iteration}: k={k} t={t:.4g}", file=sys.stderr)
    return sink


def cmd_generate(args):
    text, _, _ = family_text(args)
    _write_bytes(args.output, text.raw)
    return EXIT_OK


def cmd_compress(args):
    text = _load_text(args.input)
    idx = build(text)
    result = run(text, _params(args, args.seed), _progress(args.verbose), idx=idx)
    _write_bytes(args.output, write_scheme(result.scheme))
    if args.trace:
        label = f"input={os.path.basename(args.input)}"
        rows = [["file", label, args.seed, i, k, repr(t)] for i, k, t in result.trace]
        _write_bytes(args.trace, _csv_text(TRACE_HEADER, rows))
    print(f"seed={args.seed} k={result.k} iterations={result.iterations} "
          f"stop_reason={result.stop_reason} certificate={str(result.certificate).lower()}")
    return EXIT_OK


def cmd_decompress(args):
    scheme = _load_scheme(args.input)
    try:
        text = materialize(scheme)
    except Exception as exc:  # LoopDetected or a misplaced sentinel
        raise CliError(f"{args.input}: {exc}") from exc
    _write_bytes(args.output, text.raw)
    return EXIT_OK


def cmd_lz(args):
    text = _load_text(args.input)
    scheme = lz_parse(text)
    _write_bytes(args.output, write_scheme(scheme))
    print(f"k={scheme.k}")
    return EXIT_OK


def cmd_verify(args):
    scheme = _load_scheme(args.input)
    text = _load_text(args.text)
    if scheme.n != text.n:
        raise CliError(f"scheme covers {scheme.n} positions but the text has {text.n}")
    verdict = validate(scheme, text)
    lines = [{
        "check": "validity",
        "valid": verdict.valid,
        "k": scheme.k,
        "cycles": [sorted(c) for c in verdict.cycles],
        "mismatched_phrases": list(verdict.mismatches),
    }]
    if args.certificate:
        report = check_certificate(scheme, text, lower_bound=lower_bound("generic", text))
        lines.append({
            "check": "certificate",
            "holds": report.holds,
            "k": report.k,
            "lower_bound": report.lower_bound,
            "attractor_size": attractor_of(scheme).size,
            "witness": report.witness,
            "reading": report.reading,
        })
    if args.attractor_bruteforce:
        if text.n > args.attractor_cap:
            lines.append({"check": "attractor", "skipped": True, "n": text.n, "cap": args.attractor_cap})
        else:
            gamma = attractor_of(scheme)
            lines.append({"check": "attractor", "is_attractor": verify_attractor(text, gamma.positions, args.attractor_cap),
                          "attractor_size": gamma.size})
    for line in lines:
        print(json.dumps(line, sort_keys=True))
    return EXIT_OK if verdict.valid else EXIT_INVALID


def _bench_one(job):
    text, params, family, label, lz_k, bound = job
    result = run(text, params)
    rows = []
    last = len(result.trace) - 1
    for pos, (it, k, t) in enumerate(result.trace):
        cert = str(result.certificate).lower() if pos == last else ""
        rows.append([family, label, params.seed, it, k, repr(t), lz_k, bound, cert])
    return params.seed, rows, result


def cmd_bench(args):
    if args.runs < 1:
        raise CliError("--runs must be at least 1")
    text, label, bound = family_text(args)
    lz_k = lz_parse(text).k
    seeds = list(range(args.first_seed, args.first_seed + args.runs))
    jobs = [(text, _params(args, s), args.family, label, lz_k, bound) for s in seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            outcomes = list(pool.map(_bench_one, jobs))
    else:
        outcomes = [_bench_one(job) for job in jobs]
    outcomes.sort(key=lambda o: o[0])
    rows = [row for _, seed_rows, _ in outcomes for row in seed_rows]
    _write_bytes(args.csv, _csv_text(BENCH_HEADER, rows))

    finals = [res.k for _, _, res in outcomes]
    certs = sum(res.certificate for _, _, res in outcomes)
    minima = sum(res.stop_reason == LOCAL_MINIMUM for _, _, res in outcomes)
    summary = (f"family={args.family} {label} runs={args.runs} seeds={seeds[0]}..{seeds[-1]} lz_size={lz_k} lower_bound={bound} "
               f"min_k={min(finals)} median_k={statistics.median(finals)} max_k={max(finals)} "
               f"local_minima={minima} certificates={certs}")
    if args.family == "debruijn":
        summary += f" bound_floor={de_bruijn_bound(args.order)} bound_ceil={de_bruijn_bound_ceil(args.order)}"
    print(summary)
    return EXIT_OK


def _add_family_args(p):
    p.add_argument("--family", required=True, choices=generators.FAMILIES)
    p.add_argument("--index", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--seed", type=int, default=0)


def _add_anneal_args(p):
    defaults = AnnealParams()
    p.add_argument("--t0", type=float, default=defaults.t0)
    p.add_argument("--alpha", type=float, default=defaults.alpha)
    p.add_argument("--cool-every", type=int, default=defaults.cool_every)
    p.add_argument("--max-iters", type=int, default=defaults.max_iters)
    p.add_argument("--retries", type=int, default=defaults.retries)
    p.add_argument("--init", choices=("explicit", "lz"), default=defaults.init)


def build_parser():
    parser = argparse.ArgumentParser(prog="macroscheme", description="Bidirectional macro scheme toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a test-family text")
    _add_family_args(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("compress", help="anneal a small macro scheme")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_anneal_args(p)
    p.add_argument("--trace")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="decode a scheme file")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("lz", help="Lempel-Ziv baseline parse")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_lz)

    p = sub.add_parser("verify", help="check a scheme against a text")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--certificate", action="store_true")
    p.add_argument("--attractor-bruteforce", action="store_true")
    p.add_argument("--attractor-cap", type=int, default=ATTRACTOR_CAP)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="multi-seed convergence traces as CSV")
    _add_family_args(p)
    _add_anneal_args(p)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--first-seed", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, generators.GiveUp) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
