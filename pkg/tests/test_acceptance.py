"""Acceptance criteria, one PASS/FAIL line each.

Runs under pytest (``pytest tests/test_acceptance.py -v``) or directly
(``python tests/test_acceptance.py``). The multi-seed family benchmarks are
run once and shared by every criterion that inspects them; expect tens of
minutes on a single core.
"""
from __future__ import annotations

import functools
import math
import random
import statistics
import sys
import time

import pytest

from macroscheme import generators
from macroscheme.annealing import LOCAL_MINIMUM, AnnealParams, run
from macroscheme.certificate import attractor_of, check_certificate, naive_certificate, verify_attractor
from macroscheme.cli import TRACE_HEADER, _csv_text
from macroscheme.linkcut import AlreadyRoot, LinkCutForest, NotRoot, WouldCycle
from macroscheme.lz import lz_parse, lz_size, naive_lz_parse
from macroscheme.suffix_index import build, naive_suffix_array
from macroscheme.text import (MacroScheme, attach_sentinel, decode_chain, materialize,
                              read_scheme, validate, write_scheme)

SEEDS = range(1, 21)
PLANTED_N, PLANTED_D, PLANTED_INSTANCE = 300, 14, 1

pytestmark = pytest.mark.slow


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    print(line, file=sys.__stdout__, flush=True)
    return ok


@pytest.fixture
def emit(capsys):
    def _emit(number, ok, detail):
        with capsys.disabled():
            report(number, ok, detail)
        return ok
    return _emit


def random_text(rng, n):
    alphabet = rng.choice([b"ab", b"abc", b"acgt", bytes(range(1, 256))])
    return attach_sentinel(bytes(rng.choice(alphabet) for _ in range(n)))


def family_instances():
    out = [("fibonacci", i, generators.fibonacci(i)) for i in range(1, 16)]
    out += [("thue-morse", i, generators.thue_morse(i)) for i in range(0, 13)]
    out += [("debruijn", o, generators.de_bruijn(o)) for o in range(1, 11)]
    out += [("planted", n, generators.planted(n, d, seed=n)[0])
            for n, d in ((10, 3), (100, 8), (300, 14), (1000, 30))]
    return out


# -- shared benchmark runs ----------------------------------------------------

@functools.lru_cache(maxsize=None)
def family_text(name):
    if name == "fibonacci":
        return generators.fibonacci(13)
    if name == "thue-morse":
        return generators.thue_morse(12)
    if name == "debruijn":
        return generators.de_bruijn(10)
    if name == "planted":
        return generators.planted(PLANTED_N, PLANTED_D, seed=PLANTED_INSTANCE)[0]
    raise KeyError(name)


@functools.lru_cache(maxsize=None)
def bench(name):
    text = family_text(name)
    idx = build(text)
    return [run(text, AnnealParams(seed=s), idx=idx) for s in SEEDS]


def finals(name):
    return [r.k for r in bench(name)]


# -- criteria -------------------------------------------------------------------

def criterion_1():
    started = time.perf_counter()
    rng = random.Random(2024)
    failures = 0
    cases = 0
    for trial in range(500):
        n = rng.choice([rng.randint(0, 64), rng.randint(0, 4095)])
        text = random_text(rng, n)
        scheme = run(text, AnnealParams(seed=trial, max_iters=300)).scheme
        back, _ = read_scheme(write_scheme(scheme))
        failures += materialize(back) != text
        cases += 1
    for _, _, text in family_instances():
        for scheme in (run(text, AnnealParams(seed=1, max_iters=2000)).scheme, lz_parse(text)):
            back, _ = read_scheme(write_scheme(scheme))
            failures += materialize(back).raw != text.raw
            cases += 1
    elapsed = time.perf_counter() - started
    ok = failures == 0 and elapsed < 300
    return ok, f"round trip {cases - failures}/{cases} exact in {elapsed:.1f}s (limit 300s)"


def _naive_cycles(parent):
    cycles = set()
    for v in range(1, len(parent)):
        seen = []
        cur = v
        while parent[cur] and cur not in seen:
            seen.append(cur)
            cur = parent[cur]
        if parent[cur]:
            cycles.add(frozenset(seen[seen.index(cur):]))
    return cycles


def _random_tiling(rng, n):
    triples = []
    pos = 1
    while True:
        length = rng.randint(0, min(8, n - pos))
        src = 0
        if length:
            src = rng.choice([s for s in range(1, n - length + 2) if s != pos])
        last = pos + length == n
        triples.append((src, length, 0 if last else 97))
        if last:
            return MacroScheme.from_triples(triples)
        pos += length + 1


def _split_lz(rng, text):
    triples = []
    for ph in lz_parse(text).phrases:
        src, length, start = ph.source, ph.length, ph.start
        while length > 1 and rng.random() < 0.3:
            cut = rng.randrange(length)
            triples.append((src if cut else 0, cut, text[start + cut]))
            src, length, start = src + cut + 1, length - cut - 1, start + cut + 1
        triples.append((src if length else 0, length, ph.letter))
    return MacroScheme.from_triples(triples)


def _forest_mismatches(n=1000, ops=100_000, seed=1):
    rng = random.Random(seed)
    forest = LinkCutForest(n)
    parent = [0] * (n + 1)

    def path(v):
        out = [v]
        while parent[out[-1]]:
            out.append(parent[out[-1]])
        return out

    bad = 0
    for _ in range(ops):
        op = rng.random()
        v, u = rng.randint(1, n), rng.randint(1, n)
        if op < 0.35:
            expected = NotRoot if parent[v] else WouldCycle if path(u)[-1] == v else None
            try:
                forest.link(v, u)
                got = None
            except (NotRoot, WouldCycle) as exc:
                got = type(exc)
            bad += got is not expected
            if expected is None:
                parent[v] = u
        elif op < 0.55:
            try:
                forest.cut(v)
                bad += parent[v] == 0
            except AlreadyRoot:
                bad += parent[v] != 0
            parent[v] = 0
        elif op < 0.7:
            bad += forest.find_root(v) != path(v)[-1]
        elif op < 0.85:
            p = path(v)
            k = rng.randrange(len(p))
            bad += forest.kth_on_path(v, k) != p[k]
        else:
            bad += forest.on_root_path(v, u) != (u in path(v))
    bad += forest.parents() != parent
    return bad


def _validate_cycles_vs_chain():
    # on a run of one letter every copy is a true occurrence, so only the source map matters
    rng = random.Random(5)
    bad = 0
    for _ in range(200):
        n = rng.randint(2, 1000)
        scheme = _random_tiling(rng, n)
        text = attach_sentinel(b"a" * (n - 1))
        bad += set(validate(scheme, text).cycles) != _naive_cycles(scheme.parent_map())
    return bad


def criterion_2():
    rng = random.Random(77)
    counts = {}

    bad = 0
    for n in [0, 1, 2, 17, 255, 1000, 4095] + [rng.randint(1, 4095) for _ in range(20)]:
        text = random_text(rng, n)
        bad += build(text).sa[1:] != naive_suffix_array(text.data)
    for _, _, text in family_instances():
        if text.n <= 4097:
            bad += build(text).sa[1:] != naive_suffix_array(text.data)
    counts["suffix index"] = bad

    counts["link-cut forest"] = _forest_mismatches()

    bad = _validate_cycles_vs_chain()
    counts["validate"] = bad

    bad = 0
    for _ in range(150):
        text = random_text(rng, rng.randint(0, 512))
        bad += lz_parse(text) != naive_lz_parse(text)
    counts["lz"] = bad

    bad = 0
    for _ in range(120):
        text = random_text(rng, rng.choice([rng.randint(1, 60), rng.randint(100, 2047)]))
        scheme = _split_lz(rng, text) if rng.random() < 0.7 else MacroScheme.explicit(text)
        bad += check_certificate(scheme, text).holds != naive_certificate(scheme, text)
    counts["certificate"] = bad

    ok = all(v == 0 for v in counts.values())
    return ok, "oracle mismatches " + ", ".join(f"{k}={v}" for k, v in counts.items())


def criterion_3():
    a, b = ord("a"), ord("b")
    text = attach_sentinel(b"abaababaabaababaababa")
    sample = MacroScheme.from_triples([(6, 6, b), (16, 4, a), (0, 0, b), (9, 8, 0)])
    looped = MacroScheme.from_triples([(6, 6, b), (3, 4, a), (0, 0, b), (9, 8, 0)])
    checks = {
        "sample valid": bool(validate(sample, text)),
        "sample decodes": materialize(sample) == text,
        "looped has four cycles": len(validate(looped, text).cycles) == 4,
        "looped has {6,11}": frozenset({6, 11}) in validate(looped, text).cycles,
        "chain of 4": decode_chain(sample, 4) == [4, 9, 17, 12],
    }
    ok = all(checks.values())
    return ok, "worked-example checks " + ", ".join(f"{k}={'ok' if v else 'BAD'}" for k, v in checks.items())


def criterion_4():
    audited = violations = 0
    for name in ("fibonacci", "thue-morse", "debruijn", "planted"):
        for res in bench(name):
            for tr in res.transitions:
                audited += 1
                if tr.delta <= 0 and not tr.accepted:
                    violations += 1
                if tr.accepted and tr.delta > 0 and not tr.delta <= -tr.t * math.log(tr.p):
                    violations += 1
    return violations == 0, f"{audited} logged transitions audited, {violations} violations"


def criterion_5():
    stops = cert_fail = 0
    for name in ("fibonacci", "thue-morse", "debruijn", "planted"):
        text = family_text(name)
        for res in bench(name):
            if res.stop_reason == LOCAL_MINIMUM:
                stops += 1
                cert_fail += not (res.certificate and check_certificate(res.scheme, text).holds)

    rng = random.Random(31)
    schemes = attr_fail = 0
    for trial in range(150):
        text = random_text(rng, rng.randint(0, 255))
        for scheme in (lz_parse(text), _split_lz(rng, text),
                       run(text, AnnealParams(seed=trial, max_iters=400)).scheme):
            if validate(scheme, text):
                schemes += 1
                attr_fail += not verify_attractor(text, attractor_of(scheme).positions)

    planted_fail = 0
    planted_certs = 0
    for res in bench("planted"):
        if res.certificate:
            planted_certs += 1
            planted_fail += res.k > 2 * PLANTED_D
    ok = cert_fail == 0 and attr_fail == 0 and planted_fail == 0
    return ok, (f"local minima with certificate {stops - cert_fail}/{stops}; "
                f"attractor checks {schemes - attr_fail}/{schemes}; "
                f"planted certificate implies k<=2d {planted_certs - planted_fail}/{planted_certs}")


def _run_bytes(text, seed, max_iters):
    res = run(text, AnnealParams(seed=seed, max_iters=max_iters))
    rows = [["file", "acceptance", seed, i, k, repr(t)] for i, k, t in res.trace]
    return write_scheme(res.scheme), _csv_text(TRACE_HEADER, rows)


def criterion_6():
    texts = [generators.fibonacci(13), generators.planted(300, 14, seed=3)[0], generators.de_bruijn(7)]
    pairs = same = 0
    for text in texts:
        for seed in (1, 2):
            pairs += 1
            same += _run_bytes(text, seed, 5000) == _run_bytes(text, seed, 5000)
    return same == pairs, f"{same}/{pairs} repeated runs byte-identical (scheme file and trace)"


def criterion_7():
    results = bench("fibonacci")
    ks = [r.k for r in results]
    reach = [any(k <= 6 for it, k, _ in r.trace if it <= 20000) for r in results]
    ok = min(ks) == 3 and all(reach)
    return ok, (f"F13 min k={min(ks)} (want 3); seeds reaching k<=6 by iteration 20000: "
                f"{sum(reach)}/{len(reach)}; finals={ks}")


def criterion_8():
    ks = finals("thue-morse")
    lz = lz_size(family_text("thue-morse"))
    med = statistics.median(ks)
    ok = min(ks) <= 13 and med < lz
    return ok, f"T12 min k={min(ks)} (want <=13), median={med} vs lz={lz}; finals={ks}"


def criterion_9():
    results = bench("debruijn")
    ks = [r.k for r in results]
    converged = [r.k for r in results if r.stop_reason == LOCAL_MINIMUM]
    certs = sum(r.certificate for r in results)
    med = statistics.median(ks)
    in_range = all(103 <= k <= 200 for k in converged)
    ok = in_range and 110 <= med <= 175 and certs >= 0.8 * len(results)
    return ok, (f"dB10 converged k in [103,200]: {in_range} ({len(converged)} converged), "
                f"median={med} (want 110..175), certificates={certs}/{len(results)} (want >=80%); finals={ks}")


def criterion_10():
    results = bench("planted")
    ks = [r.k for r in results]
    certs = sum(r.certificate for r in results)
    lz = lz_size(family_text("planted"))
    med = statistics.median(ks)
    ok = min(ks) <= 18 and certs >= 1 and med <= lz
    return ok, (f"planted n=300 d=14 min k={min(ks)} (want <=18), certificates={certs}, "
                f"median={med} vs lz={lz}; finals={ks}")


def criterion_11():
    parts = []
    ok = True
    for name in ("fibonacci", "thue-morse", "planted"):
        med = statistics.median(finals(name))
        lz = lz_size(family_text(name))
        ok &= med < lz
        parts.append(f"{name} median={med} lz={lz}")
    return ok, "; ".join(parts)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, emit):
    ok, detail = CRITERIA[number - 1]()
    assert emit(number, ok, detail), detail


if __name__ == "__main__":
    failed = 0
    for number, crit in enumerate(CRITERIA, start=1):
        ok, detail = crit()
        failed += not report(number, ok, detail)
    sys.exit(1 if failed else 0)
