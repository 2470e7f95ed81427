"""Suffix array over a sentinel-terminated text.

Ranks and positions are 1-based. ``isa[n + 1]`` is 0 so that an empty
suffix sorts before every real one; this keeps interval merging total
when a pattern ends at the sentinel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .text import Text


@dataclass(frozen=True)
class SAInterval:
    lo: int
    hi: int
    pat_len: int

    @property
    def count(self) -> int:
        return self.hi - self.lo + 1


def _prefix_doubling(data: bytes) -> np.ndarray:
    n = len(data)
    rank = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    h = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if h < n:
            second[: n - h] = rank[h:]
        sa = np.lexsort((second, rank))
        key_r, key_s = rank[sa], second[sa]
        new = np.empty(n, dtype=np.int64)
        new[sa] = np.concatenate(([0], np.cumsum((key_r[1:] != key_r[:-1]) | (key_s[1:] != key_s[:-1]))))
        rank = new
        if rank.max() == n - 1:
            return sa
        h *= 2


class SuffixIndex:
    def __init__(self, text: Text):
        self.text = text
        self.n = text.n
        sa0 = _prefix_doubling(text.data)
        self.sa = [0] + (sa0 + 1).tolist()
        isa = [0] * (self.n + 2)
        for r in range(1, self.n + 1):
            isa[self.sa[r]] = r
        self.isa = isa
        # first rank of each single symbol, for one-letter intervals
        self._letter = {}
        for r in range(1, self.n + 1):
            c = text.data[self.sa[r] - 1]
            lo, _ = self._letter.get(c, (r, r))
            self._letter[c] = (lo, r)

    def full(self) -> SAInterval:
        return SAInterval(1, self.n, 0)

    def letter_interval(self, symbol: int):
        if symbol not in self._letter:
            return None
        lo, hi = self._letter[symbol]
        return SAInterval(lo, hi, 1)

    def locate_pattern(self, pattern: bytes):
        m = len(pattern)
        if m == 0:
            return self.full()
        data, sa = self.text.data, self.sa
        lo, hi = 1, self.n + 1
        while lo < hi:
            mid = (lo + hi) // 2
            p = sa[mid] - 1
            if data[p:p + m] < pattern:
                lo = mid + 1
            else:
                hi = mid
        first = lo
        hi = self.n + 1
        while lo < hi:
            mid = (lo + hi) // 2
            p = sa[mid] - 1
            if data[p:p + m] <= pattern:
                lo = mid + 1
            else:
                hi = mid
        if first == lo:
            return None
        return SAInterval(first, lo - 1, m)

    def locate(self, pos: int, length: int) -> SAInterval:
        """Interval of the suffixes prefixed by ``text[pos .. pos+length-1]``."""
        if length < 0 or pos < 1 or pos + length - 1 > self.n:
            raise IndexError(f"span ({pos}, {length}) outside the text")
        return self.locate_pattern(self.text.span(pos, length))

    def occurrences(self, interval: SAInterval):
        return sorted(self.sa[interval.lo:interval.hi + 1])

    def merge_intervals(self, left: SAInterval, right: SAInterval):
        """Interval of the concatenation of ``left``'s and ``right``'s patterns.

        Inside ``left`` the suffixes agree on the first ``pat_len`` symbols,
        so the ranks of their shifted suffixes increase with rank; two binary
        searches find the run that lands inside ``right``. Returns None when
        the concatenation does not occur.
        """
        if right.pat_len == 0:
            return left
        if left.pat_len == 0:
            return right
        sa, isa, p = self.sa, self.isa, left.pat_len
        n1 = self.n + 1
        a, b = left.lo, left.hi + 1
        while a < b:
            mid = (a + b) // 2
            q = sa[mid] + p
            if (isa[q] if q <= n1 else 0) < right.lo:
                a = mid + 1
            else:
                b = mid
        first = a
        b = left.hi + 1
        while a < b:
            mid = (a + b) // 2
            q = sa[mid] + p
            if (isa[q] if q <= n1 else 0) <= right.hi:
                a = mid + 1
            else:
                b = mid
        if first == a:
            return None
        return SAInterval(first, a - 1, p + right.pat_len)


def build(text: Text) -> SuffixIndex:
    return SuffixIndex(text)


def naive_suffix_array(data: bytes):
    return [i + 1 for i in sorted(range(len(data)), key=lambda i: data[i:])]
