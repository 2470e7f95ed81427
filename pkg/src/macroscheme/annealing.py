"""Simulated annealing over phrase merges and splits.

A step picks an admissible phrase, merges it with its successor by giving
the union a fresh source, and, when every sampled source closes a decoding
loop, breaks the loops by turning loop positions into explicit letters.
Every mutation goes through an undo journal so that a rejected step can be
replayed back to the exact prior state.
"""
from __future__ import annotations

import math
import random

import numpy as np
from dataclasses import dataclass, field
from typing import Callable, Optional

from sortedcontainers import SortedList

from .linkcut import LinkCutForest
from .lz import lz_parse
from .suffix_index import SuffixIndex, build
from .text import MacroScheme, Phrase, Text

CLEAN = "clean"
SPLIT = "split"
UNMERGEABLE = "unmergeable"

LOCAL_MINIMUM = "LocalMinimum"
BUDGET = "Budget"

TRACE_EVERY = 100


class Exhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class AnnealParams:
    t0: float = 4.0
    alpha: float = 0.99
    cool_every: int = 100
    max_iters: int = 60000
    retries: int = 4
    seed: int = 0
    init: str = "explicit"

    def __post_init__(self):
        if not self.t0 > 0:
            raise ValueError("t0 must be positive")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if self.cool_every < 1:
            raise ValueError("cool_every must be >= 1")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.retries < 1:
            raise ValueError("retries must be >= 1")
        if self.init not in ("explicit", "lz"):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass(frozen=True)
class Transition:
    iteration: int
    phrase_index: int
    outcome: str
    delta: int
    p: Optional[float]
    t: float
    accepted: bool
    splits_performed: int = 0
    abandoned: bool = False


@dataclass(frozen=True)
class MergeOutcome:
    kind: str
    splits: int = 0
    p: Optional[float] = None
    abandoned: bool = False


def accept(delta: int, t: float, p: float) -> bool:
    """Metropolis-style rule on the phrase-count change."""
    return delta <= -t * math.log(p)


class AnnealState:
    def __init__(self, text: Text, idx: SuffixIndex | None = None, params: AnnealParams | None = None,
                 initial: MacroScheme | None = None):
        self.text = text
        self.idx = idx if idx is not None else build(text)
        self.params = params or AnnealParams()
        self.rng = random.Random(self.params.seed)
        self.t = self.params.t0
        self.iteration = 0
        n = text.n
        self.n = n
        self.forest = LinkCutForest(n)
        self.length = [-1] * (n + 2)
        self.source = [0] * (n + 2)
        self.starts = SortedList()
        self.admissible = SortedList()
        self.cache = {}
        self._journal = []
        self._pinned = np.zeros(n + 1, dtype=np.uint8)

        if initial is None:
            if self.params.init == "lz":
                initial = lz_parse(text, self.idx)
            else:
                initial = MacroScheme.explicit(text)
        for ph in initial:
            self.length[ph.start] = ph.length
            self.source[ph.start] = ph.source
            self.starts.add(ph.start)
            for off in range(ph.length):
                self.forest.link(ph.start + off, ph.source + off)
            if ph.end != n:
                self.admissible.add(ph.start)
        self.forest.recording = True

    # -- journaled primitives -------------------------------------------------

    def _set_phrase(self, start, length, source):
        self._journal.append(("phrase", start, self.length[start], self.source[start]))
        self.length[start] = length
        self.source[start] = source

    def _add_start(self, s):
        self.starts.add(s)
        self._journal.append(("start+", s))

    def _remove_start(self, s):
        self.starts.remove(s)
        self._journal.append(("start-", s))

    def _admit(self, s):
        if s not in self.admissible and s + self.length[s] != self.n:
            self.admissible.add(s)
            self._journal.append(("adm+", s))

    def _dismiss(self, s):
        if s in self.admissible:
            self.admissible.remove(s)
            self._journal.append(("adm-", s))

    def _set_cache(self, s, interval):
        self._journal.append(("cache", s, self.cache.get(s)))
        if interval is None:
            self.cache.pop(s, None)
        else:
            self.cache[s] = interval

    def _mark(self):
        return len(self._journal), self.forest.mark()

    def _rollback(self, mark):
        """Undo back to ``mark``; forest edits live on the forest's own stack."""
        journal = self._journal
        self.forest.rollback(mark[1])
        while len(journal) > mark[0]:
            entry = journal.pop()
            kind = entry[0]
            if kind == "phrase":
                self.length[entry[1]] = entry[2]
                self.source[entry[1]] = entry[3]
            elif kind == "start+":
                self.starts.remove(entry[1])
            elif kind == "start-":
                self.starts.add(entry[1])
            elif kind == "adm+":
                self.admissible.remove(entry[1])
            elif kind == "adm-":
                self.admissible.add(entry[1])
            elif kind == "cache":
                if entry[2] is None:
                    self.cache.pop(entry[1], None)
                else:
                    self.cache[entry[1]] = entry[2]

    # -- queries ---------------------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.starts)

    def scheme(self) -> MacroScheme:
        data = self.text.data
        return MacroScheme(
            Phrase(s, self.source[s], self.length[s], data[s + self.length[s] - 1])
            for s in self.starts
        )

    def snapshot(self):
        """Comparable view of everything a rollback must restore."""
        return (
            tuple(self.forest.parents()),
            tuple(self.length),
            tuple(self.source),
            tuple(self.starts),
            tuple(self.admissible),
            tuple(sorted(self.cache.items(), key=lambda kv: kv[0])),
        )

    def check_coherence(self):
        """Full scan: roots are explicit letters, parents follow phrase sources."""
        expected = [0] * (self.n + 1)
        pos = 1
        for s in self.starts:
            if s != pos:
                raise AssertionError(f"phrase table breaks tiling at {pos}")
            for off in range(self.length[s]):
                expected[s + off] = self.source[s] + off
            pos = s + self.length[s] + 1
        if pos != self.n + 1:
            raise AssertionError("phrase table does not cover the text")
        if self.forest.parents() != expected:
            raise AssertionError("forest disagrees with the phrase table")
        for s in self.admissible:
            if self.length[s] < 0 or s + self.length[s] == self.n:
                raise AssertionError(f"admissible set holds bad phrase {s}")

    def _copy_interval(self, s):
        interval = self.cache.get(s)
        if interval is None:
            interval = self.idx.locate(s, self.length[s])
            self._set_cache(s, interval)
        return interval

    def merged_interval(self, i):
        """Suffix-array interval of phrase ``i``'s copy, letter and next copy."""
        idx = self.idx
        j = i + self.length[i] + 1
        left = idx.merge_intervals(self._copy_interval(i), idx.letter_interval(self.text[j - 1]))
        return idx.merge_intervals(left, self._copy_interval(j))

    # -- moves -----------------------------------------------------------------

    def _split_at(self, c):
        """Make position ``c`` explicit, splitting the phrase that copies it."""
        starts = self.starts
        s = starts[starts.bisect_right(c) - 1]
        length, src = self.length[s], self.source[s]
        left_len = c - s
        self._set_phrase(s, left_len, src if left_len else 0)
        if self.forest.parent(c):
            self.forest.cut(c)
        right = c + 1
        right_len = length - left_len - 1
        self._add_start(right)
        self._set_phrase(right, right_len, src + left_len + 1 if right_len else 0)
        self._set_cache(s, None)
        self._admit(s)
        self._admit(right)
        k = starts.index(s)
        if k:
            self._admit(starts[k - 1])

    def _relink(self, i, wlen, src, split, max_splits=math.inf):
        """Point positions i..i+wlen-1 at src..; returns splits made, or None
        when a loop appears and splitting is not allowed.

        Stops early, leaving the block partly linked, once more than
        ``max_splits`` splits were needed.
        """
        forest = self.forest
        offset = src - i
        end = i + wlen
        pinned = self._pinned
        splits = 0
        touched = []
        q = forest.relink(i, end, offset, i, True, pinned)
        while q >= 0:
            if not split:
                return None
            # the loop is q plus tgt's whole root path, q being the root
            tgt = q + offset
            depth = forest.path_to_root_length(tgt)
            c = forest.kth_on_path(tgt, self.rng.randrange(depth + 1))
            self._split_at(c)
            splits += 1
            if splits > max_splits:
                break
            if c == q:
                q += 1
            elif q < c < end:
                pinned[c] = 1
                touched.append(c)
            q = forest.relink(i, end, offset, q, False, pinned)
        for c in touched:
            pinned[c] = 0
        return splits

    def attempt_merge(self, i):
        """Try to merge phrase ``i`` (a start position) with its successor.

        State is left in the merged form for CLEAN and SPLIT, untouched
        (apart from the admissible set) otherwise. Before splitting, the
        acceptance draw ``p`` is taken; splitting stops as soon as the phrase
        count has grown past what that draw can accept, since further splits
        only raise it.
        """
        idx = self.idx
        li = self.length[i]
        j = i + li + 1
        lj = self.length[j]
        wlen = li + 1 + lj
        interval = self.merged_interval(i)
        if interval.count <= 1:
            self._dismiss(i)
            return MergeOutcome(UNMERGEABLE)

        own_rank = idx.isa[i]
        rng = self.rng

        def sample():
            r = interval.lo + rng.randrange(interval.count - 1)
            if r >= own_rank:
                r += 1
            return idx.sa[r]

        def restructure(src):
            self._dismiss(j)
            self._remove_start(j)
            self._set_phrase(j, -1, 0)
            self._set_cache(j, None)
            self._set_phrase(i, wlen, src)
            self._set_cache(i, interval)

        for _ in range(self.params.retries):
            mark = self._mark()
            src = sample()
            restructure(src)
            if self._relink(i, wlen, src, split=False) is not None:
                self._after_merge(i)
                return MergeOutcome(CLEAN)
            self._rollback(mark)

        src = sample()
        p = 1.0 - rng.random()
        # delta = splits - 1 must stay <= -t ln p
        budget = math.floor(1 - self.t * math.log(p))
        restructure(src)
        splits = self._relink(i, wlen, src, split=True, max_splits=budget)
        if splits > budget:
            return MergeOutcome(SPLIT, splits, p, abandoned=True)
        self._after_merge(i)
        return MergeOutcome(SPLIT, splits, p)

    def _after_merge(self, i):
        if i + self.length[i] == self.n:
            self._dismiss(i)
        else:
            self._admit(i)
        k = self.starts.bisect_left(i)
        if k:
            self._admit(self.starts[k - 1])

    def step(self) -> Transition:
        if not self.admissible:
            raise Exhausted("admissible set is empty")
        self._journal.clear()
        self.forest.commit()
        rng = self.rng
        i = self.admissible[rng.randrange(len(self.admissible))]
        ordinal = self.starts.index(i)
        k_before = self.k
        out = self.attempt_merge(i)
        self.iteration += 1
        if out.kind == UNMERGEABLE:
            tr = Transition(self.iteration, ordinal, out.kind, 0, None, self.t, False)
        else:
            delta = self.k - k_before
            ok = out.kind == CLEAN or (not out.abandoned and accept(delta, self.t, out.p))
            if not ok:
                self._rollback((0, 0))
            tr = Transition(self.iteration, ordinal, out.kind, delta, out.p, self.t, ok,
                            out.splits, out.abandoned)
        self._journal.clear()
        self.forest.commit()
        if self.iteration % self.params.cool_every == 0:
            self.t *= self.params.alpha
        return tr


@dataclass
class RunResult:
    scheme: MacroScheme
    k: int
    iterations: int
    stop_reason: str
    certificate: bool
    trace: list = field(default_factory=list)
    transitions: list = field(default_factory=list)


def run(
    text: Text,
    params: AnnealParams | None = None,
    trace_sink: Callable[[int, int, float], None] | None = None,
    idx: SuffixIndex | None = None,
    debug: bool = False,
) -> RunResult:
    """Anneal until the admissible set empties or the budget runs out."""
    from .certificate import check_certificate

    params = params or AnnealParams()
    idx = idx if idx is not None else build(text)
    state = AnnealState(text, idx, params)
    trace = []
    transitions = []

    def emit():
        row = (state.iteration, state.k, state.t)
        trace.append(row)
        if trace_sink is not None:
            trace_sink(*row)

    emit()
    while state.admissible and state.iteration < params.max_iters:
        tr = state.step()
        if tr.outcome != UNMERGEABLE:
            transitions.append(tr)
        if debug:
            state.check_coherence()
        if state.iteration % TRACE_EVERY == 0:
            emit()
    if trace[-1][0] != state.iteration:
        emit()

    scheme = state.scheme()
    certificate = False
    if not state.admissible:
        stop = LOCAL_MINIMUM
        certificate = check_certificate(scheme, text, idx).holds
    else:
        stop = BUDGET
    return RunResult(scheme, scheme.k, state.iteration, stop, certificate, trace, transitions)
