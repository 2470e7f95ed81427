"""Texts, phrases and macro schemes.

Positions are 1-based everywhere in this module's public surface. A text
always ends with the sentinel byte 0x00, which occurs nowhere else.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

SENTINEL = 0


class SentinelCollision(ValueError):
    pass


class FormatError(ValueError):
    pass


class LoopDetected(Exception):
    """Decoding entered a cycle; ``cycle`` holds exactly the positions on it."""

    def __init__(self, cycle):
        self.cycle = frozenset(cycle)
        super().__init__(f"decoding loop through positions {sorted(self.cycle)}")


@dataclass(frozen=True)
class Text:
    data: bytes

    def __post_init__(self):
        if not self.data or self.data[-1] != SENTINEL:
            raise ValueError("text must end with the sentinel byte")
        if self.data.count(SENTINEL) != 1:
            raise SentinelCollision("sentinel must occur exactly once")

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def sentinel(self) -> int:
        return SENTINEL

    def __len__(self):
        return len(self.data)

    def __getitem__(self, pos: int) -> int:
        return self.data[pos - 1]

    def span(self, pos: int, length: int) -> bytes:
        return self.data[pos - 1:pos - 1 + length]

    @property
    def raw(self) -> bytes:
        return self.data[:-1]


def attach_sentinel(raw: bytes) -> Text:
    raw = bytes(raw)
    if SENTINEL in raw:
        raise SentinelCollision("input contains the reserved byte 0x00")
    return Text(raw + bytes([SENTINEL]))


@dataclass(frozen=True)
class Phrase:
    start: int
    source: int
    length: int
    letter: int

    @property
    def end(self) -> int:
        """Position of the explicit letter."""
        return self.start + self.length

    def as_triple(self):
        return (self.source, self.length, self.letter)


@dataclass(frozen=True)
class MacroScheme:
    phrases: tuple

    def __post_init__(self):
        object.__setattr__(self, "phrases", tuple(self.phrases))
        pos = 1
        for ph in self.phrases:
            if ph.start != pos:
                raise FormatError(f"phrase starting at {ph.start} breaks the tiling at {pos}")
            if ph.length < 0:
                raise FormatError("negative copy length")
            if ph.length == 0 and ph.source != 0:
                raise FormatError(f"empty copy part at {ph.start} must have source 0")
            if not 0 <= ph.letter <= 255:
                raise FormatError(f"letter {ph.letter} is not a byte")
            pos = ph.end + 1
        n = pos - 1
        for ph in self.phrases:
            if ph.length > 0:
                if not 1 <= ph.source <= n or ph.source + ph.length - 1 > n:
                    raise FormatError(f"source {ph.source} of phrase at {ph.start} out of range")
                if ph.source == ph.start:
                    raise FormatError(f"phrase at {ph.start} points to itself")

    @classmethod
    def from_triples(cls, triples: Iterable[Sequence[int]]) -> "MacroScheme":
        phrases = []
        pos = 1
        for source, length, letter in triples:
            phrases.append(Phrase(pos, source, length, letter))
            pos += length + 1
        return cls(phrases)

    @classmethod
    def explicit(cls, text: Text) -> "MacroScheme":
        return cls(Phrase(i, 0, 0, c) for i, c in enumerate(text.data, 1))

    @property
    def k(self) -> int:
        return len(self.phrases)

    @property
    def n(self) -> int:
        return self.phrases[-1].end if self.phrases else 0

    def __len__(self):
        return len(self.phrases)

    def __iter__(self) -> Iterator[Phrase]:
        return iter(self.phrases)

    def triples(self):
        return [ph.as_triple() for ph in self.phrases]

    def explicit_positions(self):
        return [ph.end for ph in self.phrases]

    def parent_map(self):
        """1-based list: parent[j] is the decode source of j, or 0 for explicit positions."""
        parent = [0] * (self.n + 1)
        for ph in self.phrases:
            for off in range(ph.length):
                parent[ph.start + off] = ph.source + off
        return parent

    def letters(self):
        out = {}
        for ph in self.phrases:
            out[ph.end] = ph.letter
        return out


def _owner(scheme: MacroScheme, pos: int) -> Phrase:
    lo, hi = 0, len(scheme.phrases) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if scheme.phrases[mid].end < pos:
            lo = mid + 1
        else:
            hi = mid
    return scheme.phrases[lo]


def decode_position(scheme: MacroScheme, pos: int) -> int:
    """Follow copy pointers from ``pos`` to an explicit letter and return it.

    Raises LoopDetected carrying only the positions of the cycle, not the
    tail that leads into it.
    """
    n = scheme.n
    if not 1 <= pos <= n:
        raise IndexError(f"position {pos} outside [1, {n}]")
    order = {}
    cur = pos
    while True:
        ph = _owner(scheme, cur)
        if cur == ph.end:
            return ph.letter
        if cur in order:
            first = order[cur]
            raise LoopDetected(p for p, i in order.items() if i >= first)
        order[cur] = len(order)
        cur = ph.source + (cur - ph.start)


def decode_chain(scheme: MacroScheme, pos: int):
    """Positions visited while decoding ``pos``, ending at the explicit one."""
    parent = scheme.parent_map()
    chain = [pos]
    seen = {pos}
    while parent[chain[-1]]:
        nxt = parent[chain[-1]]
        if nxt in seen:
            idx = chain.index(nxt)
            raise LoopDetected(chain[idx:])
        seen.add(nxt)
        chain.append(nxt)
    return chain


def find_cycles(parent: Sequence[int]):
    """All cycles of a 1-based functional graph where 0 means 'no parent'."""
    n = len(parent) - 1
    state = bytearray(n + 1)  # 0 unseen, 1 on current walk, 2 done
    cycles = []
    for v in range(1, n + 1):
        if state[v]:
            continue
        walk = []
        cur = v
        while cur and not state[cur]:
            state[cur] = 1
            walk.append(cur)
            cur = parent[cur]
        if cur and state[cur] == 1:
            cycles.append(frozenset(walk[walk.index(cur):]))
        for w in walk:
            state[w] = 2
    return cycles


@dataclass(frozen=True)
class Validity:
    valid: bool
    cycles: tuple = ()
    mismatches: tuple = ()

    def __bool__(self):
        return self.valid


def validate(scheme: MacroScheme, text: Text) -> Validity:
    if scheme.n != text.n:
        raise FormatError(f"scheme covers {scheme.n} positions, text has {text.n}")
    mismatches = []
    for ph in scheme.phrases:
        if text[ph.end] != ph.letter:
            mismatches.append(ph.start)
        elif ph.length and text.span(ph.source, ph.length) != text.span(ph.start, ph.length):
            mismatches.append(ph.start)
    cycles = find_cycles(scheme.parent_map())
    cycles.sort(key=min)
    return Validity(not cycles and not mismatches, tuple(cycles), tuple(mismatches))


def materialize(scheme: MacroScheme) -> Text:
    n = scheme.n
    parent = scheme.parent_map()
    out = [-1] * (n + 1)
    for pos, letter in scheme.letters().items():
        out[pos] = letter
    for v in range(1, n + 1):
        if out[v] >= 0:
            continue
        walk = []
        cur = v
        seen = set()
        while out[cur] < 0:
            if cur in seen:
                raise LoopDetected(walk[walk.index(cur):])
            seen.add(cur)
            walk.append(cur)
            cur = parent[cur]
        c = out[cur]
        for w in walk:
            out[w] = c
    return Text(bytes(out[1:]))


def write_scheme(scheme: MacroScheme, stream=None):
    lines = ["BMS 1", f"n {scheme.n}", f"k {scheme.k}"]
    lines += [f"{s} {ln} {c}" for s, ln, c in scheme.triples()]
    payload = ("\n".join(lines) + "\n").encode("ascii")
    if stream is None:
        return payload
    stream.write(payload)
    return payload


def read_scheme(stream):
    """Parse the ``BMS 1`` format; returns ``(scheme, n)``."""
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    try:
        body = stream.read().decode("ascii")
    except UnicodeDecodeError as exc:
        raise FormatError("scheme file is not ASCII") from exc
    if "\r" in body:
        raise FormatError("scheme files use LF line endings")
    lines = body.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 3 or lines[0] != "BMS 1":
        raise FormatError("bad magic line")
    n = _header_int(lines[1], "n")
    k = _header_int(lines[2], "k")
    rows = lines[3:]
    if len(rows) != k:
        raise FormatError(f"declared k={k} but found {len(rows)} phrase lines")
    triples = []
    for row in rows:
        parts = row.split(" ")
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise FormatError(f"malformed phrase line {row!r}")
        triples.append(tuple(int(p) for p in parts))
    scheme = MacroScheme.from_triples(triples)
    if scheme.n != n:
        raise FormatError(f"phrases cover {scheme.n} positions, header says {n}")
    if k and scheme.phrases[-1].letter != SENTINEL:
        raise FormatError("last phrase must end with the sentinel")
    return scheme, n


def _header_int(line, key):
    parts = line.split(" ")
    if len(parts) != 2 or parts[0] != key or not parts[1].isdigit():
        raise FormatError(f"expected '{key} <int>', got {line!r}")
    return int(parts[1])
