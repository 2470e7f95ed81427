"""Symbol-terminated Lempel-Ziv parse (self-overlapping sources allowed)."""
from __future__ import annotations

from .suffix_index import SuffixIndex, build
from .text import MacroScheme, Phrase, Text


class _RangeMin:
    def __init__(self, values):
        self.table = [list(values)]
        j = 1
        while (1 << j) <= len(values):
            prev = self.table[-1]
            half = 1 << (j - 1)
            self.table.append([min(prev[i], prev[i + half]) for i in range(len(values) - (1 << j) + 1)])
            j += 1

    def query(self, lo, hi):
        j = (hi - lo + 1).bit_length() - 1
        row = self.table[j]
        return min(row[lo], row[hi - (1 << j) + 1])


def _narrow(idx: SuffixIndex, lo, hi, offset, symbol):
    """Sub-interval of [lo, hi] whose suffixes carry ``symbol`` at ``offset``."""
    data, sa, n = idx.text.data, idx.sa, idx.n

    def sym(r):
        p = sa[r] - 1 + offset
        return data[p] if p < n else -1

    a, b = lo, hi + 1
    while a < b:
        mid = (a + b) // 2
        if sym(mid) < symbol:
            a = mid + 1
        else:
            b = mid
    first = a
    b = hi + 1
    while a < b:
        mid = (a + b) // 2
        if sym(mid) <= symbol:
            a = mid + 1
        else:
            b = mid
    return first, a - 1


def lz_parse(text: Text, idx: SuffixIndex | None = None) -> MacroScheme:
    if idx is None:
        idx = build(text)
    rmq = _RangeMin(idx.sa)
    data, n = text.data, text.n
    phrases = []
    i = 1
    while i <= n:
        lo, hi = 1, n
        length, source = 0, 0
        while i + length < n:
            lo, hi = _narrow(idx, lo, hi, length, data[i - 1 + length])
            if lo > hi:
                break
            leftmost = rmq.query(lo, hi)
            if leftmost >= i:
                break
            length += 1
            source = leftmost
        phrases.append(Phrase(i, source if length else 0, length, data[i - 1 + length]))
        i += length + 1
    return MacroScheme(phrases)


def lz_size(text: Text, idx: SuffixIndex | None = None) -> int:
    return lz_parse(text, idx).k


def naive_lz_parse(text: Text) -> MacroScheme:
    """Quadratic reference parse used to cross-check ``lz_parse``."""
    data, n = text.data, text.n
    phrases = []
    i = 0
    while i < n:
        length, source = 0, 0
        while i + length < n - 1:
            pat = data[i:i + length + 1]
            j = data.find(pat, 0, i + length)  # occurrences starting before i
            if j < 0 or j >= i:
                break
            length += 1
            source = j + 1
        phrases.append(Phrase(i + 1, source, length, data[i + length]))
        i += length + 1
    return MacroScheme(phrases)
