"""String families with known optimal scheme sizes or lower bounds."""
from __future__ import annotations

import random

from .text import SENTINEL, LoopDetected, MacroScheme, Phrase, Text, attach_sentinel, materialize


class GiveUp(RuntimeError):
    pass


def fibonacci_word(i: int) -> bytes:
    if i < 1:
        raise ValueError("Fibonacci index starts at 1")
    if i == 1:
        return b"b"
    prev, cur = b"b", b"a"
    for _ in range(i - 2):
        prev, cur = cur, cur + prev
    return cur


def fibonacci(i: int) -> Text:
    return attach_sentinel(fibonacci_word(i))


def thue_morse_word(i: int) -> bytes:
    if i < 0:
        raise ValueError("Thue-Morse index starts at 0")
    word = b"0"
    flip = bytes.maketrans(b"01", b"10")
    for _ in range(i):
        word = word + word.translate(flip)
    return word


def thue_morse(i: int) -> Text:
    return attach_sentinel(thue_morse_word(i))


def de_bruijn_word(order: int) -> bytes:
    """Binary de Bruijn sequence of the given order, linearized.

    Concatenation of Lyndon words whose length divides ``order`` in
    lexicographic order (FKM), followed by its first ``order-1`` symbols.
    """
    if not 1 <= order <= 20:
        raise ValueError("de Bruijn order must be within [1, 20]")
    a = [0] * (order + 1)
    seq = []

    def gen(t, p):
        if t > order:
            if order % p == 0:
                seq.extend(a[1:p + 1])
            return
        a[t] = a[t - p]
        gen(t + 1, p)
        for j in range(a[t - p] + 1, 2):
            a[t] = j
            gen(t + 1, t)

    gen(1, 1)
    seq += seq[:order - 1]
    return bytes(b"01"[s] for s in seq)


def de_bruijn(order: int) -> Text:
    return attach_sentinel(de_bruijn_word(order))


def planted(n: int, d: int, seed=None, max_rejections: int = 10**6):
    """Random text whose smallest scheme has exactly ``d`` phrases.

    Returns ``(text, scheme)``. Phrase ends are drawn uniformly, the letters
    1..d-1 are shuffled over all but the last phrase, and sources are drawn
    uniformly until the scheme decodes.
    """
    if not 2 <= d <= min(n, 255):
        raise ValueError(f"need 2 <= d <= min(n, 255), got n={n} d={d}")
    rng = random.Random(seed)
    for _ in range(max_rejections + 1):
        ends = sorted(rng.sample(range(1, n), d - 1)) + [n]
        letters = list(range(1, d))
        rng.shuffle(letters)
        letters.append(SENTINEL)
        phrases = []
        start = 1
        for end, letter in zip(ends, letters):
            length = end - start
            source = 0
            if length:
                # whole occurrences that stay clear of the sentinel position
                source = rng.randrange(1, n - length)
                if source >= start:
                    source += 1
            phrases.append(Phrase(start, source, length, letter))
            start = end + 1
        scheme = MacroScheme(phrases)
        try:
            return materialize(scheme), scheme
        except LoopDetected:
            continue
    raise GiveUp(f"no acyclic scheme for n={n}, d={d} after {max_rejections} rejections")


FAMILIES = ("fibonacci", "thue-morse", "debruijn", "planted")
