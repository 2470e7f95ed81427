"""2-approximation certificates, attractors and lower bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .suffix_index import SuffixIndex, build
from .text import MacroScheme, Text

ATTRACTOR_CAP = 256

# which concatenation the uniqueness test uses
PAIR_READING = "copy+letter+next-copy"


@dataclass(frozen=True)
class CertificateReport:
    holds: bool
    witness: Optional[int]
    k: int
    lower_bound: Optional[int] = None
    ratio_bound: Optional[float] = None
    reading: str = PAIR_READING

    def as_dict(self):
        return {
            "holds": self.holds,
            "witness": self.witness,
            "k": self.k,
            "lower_bound": self.lower_bound,
            "ratio_bound": self.ratio_bound,
            "reading": self.reading,
        }


@dataclass(frozen=True)
class Attractor:
    positions: frozenset

    @property
    def size(self) -> int:
        return len(self.positions)


def pair_span(scheme: MacroScheme, i: int):
    """(start, length) of phrase i's copy, its letter and phrase i+1's copy."""
    a, b = scheme.phrases[i], scheme.phrases[i + 1]
    return a.start, b.start + b.length - a.start


def check_certificate(scheme: MacroScheme, text: Text, idx: SuffixIndex | None = None,
                      lower_bound: int | None = None) -> CertificateReport:
    """Holds when every merge of consecutive phrases is unique in the text."""
    idx = idx if idx is not None else build(text)
    witness = None
    for i in range(scheme.k - 1):
        start, length = pair_span(scheme, i)
        if idx.locate(start, length).count != 1:
            witness = i
            break
    holds = witness is None
    return CertificateReport(holds, witness, scheme.k, lower_bound, 2.0 if holds else None)


def naive_certificate(scheme: MacroScheme, text: Text) -> bool:
    data = text.data
    for i in range(scheme.k - 1):
        start, length = pair_span(scheme, i)
        pat = data[start - 1:start - 1 + length]
        hits = sum(1 for p in range(len(data) - length + 1) if data[p:p + length] == pat)
        if hits != 1:
            return False
    return True


def attractor_of(scheme: MacroScheme) -> Attractor:
    return Attractor(frozenset(scheme.explicit_positions()))


def verify_attractor(text: Text, positions, cap: int = ATTRACTOR_CAP) -> bool:
    """Exhaustively check that every substring has an occurrence hitting ``positions``."""
    n = text.n
    if n > cap:
        raise ValueError(f"text of length {n} exceeds the brute-force cap {cap}")
    # next_marked[i]: smallest marked position >= i (1-based), n+1 if none
    marked = set(positions)
    next_marked = [n + 1] * (n + 2)
    for i in range(n, 0, -1):
        next_marked[i] = i if i in marked else next_marked[i + 1]
    data = text.data
    covered = {}
    for i in range(1, n + 1):
        nm = next_marked[i]
        for j in range(i, n + 1):
            s = data[i - 1:j]
            covered[s] = covered.get(s, False) or nm <= j
    return all(covered.values())


def distinct_substrings(data: bytes, length: int) -> int:
    return len({data[i:i + length] for i in range(len(data) - length + 1)})


def generic_lower_bound(text: Text) -> int:
    """max over window lengths l of ceil(distinct l-substrings / l)."""
    n = text.n
    top = min(n, math.ceil(math.log2(n)) ** 2) if n > 1 else 1
    best = 1
    for ell in range(1, top + 1):
        best = max(best, -(-distinct_substrings(text.data, ell) // ell))
    return best


def de_bruijn_bound(order: int) -> int:
    # 1 + 2^t/t, rounded down before adding one: 103 for order 10
    return 1 + (1 << order) // order


def de_bruijn_bound_ceil(order: int) -> int:
    return math.ceil(1 + (1 << order) / order)


def lower_bound(family: str, text: Text | None = None, *, order: int | None = None,
                d: int | None = None) -> int:
    family = family.replace("_", "-")
    if family == "fibonacci":
        return 3
    if family == "thue-morse":
        return max(3, generic_lower_bound(text)) if text is not None else 3
    if family == "debruijn" or family == "de-bruijn":
        return de_bruijn_bound(order)
    if family == "planted":
        return d
    if family == "generic":
        return generic_lower_bound(text)
    raise ValueError(f"unknown family {family!r}")
