import itertools

import pytest

from macroscheme.text import MacroScheme, Text, attach_sentinel, find_cycles

SAMPLE_RAW = b"abaababaabaababaababa"
B, A, S = ord("b"), ord("a"), 0


@pytest.fixture
def sample_text():
    return attach_sentinel(SAMPLE_RAW)


@pytest.fixture
def sample_scheme():
    return MacroScheme.from_triples([(6, 6, B), (16, 4, A), (0, 0, B), (9, 8, S)])


@pytest.fixture
def looped_scheme():
    return MacroScheme.from_triples([(6, 6, B), (3, 4, A), (0, 0, B), (9, 8, S)])


@pytest.fixture
def short_scheme():
    return MacroScheme.from_triples([(12, 2, A), (12, 3, B), (3, 4, A), (0, 0, B), (9, 8, S)])


@pytest.fixture
def split_scheme():
    return MacroScheme.from_triples([(6, 6, B), (16, 4, A), (0, 0, B), (0, 0, A), (10, 7, S)])


CERTIFIED_RAW = b"aaaaabaaabbaababaabbbababbabbbb"
CERTIFIED_ENDS = [3, 6, 9, 12, 15, 18, 21, 24, 27, 30, 32]


def scheme_with_ends(text: Text, ends):
    """Some valid scheme whose explicit letters sit exactly at ``ends``.

    Sources are chosen by depth-first search over the occurrences of each
    copy part; fine for these tiny strings.
    """
    data = text.data
    spans = []
    start = 1
    for end in ends:
        spans.append((start, end - start))
        start = end + 1
    options = []
    for st, ln in spans:
        if ln == 0:
            options.append([0])
            continue
        pat = data[st - 1:st - 1 + ln]
        occ = [p + 1 for p in range(len(data) - ln + 1) if data[p:p + ln] == pat and p + 1 != st]
        options.append(occ)
    for choice in itertools.product(*options):
        triples = [(src, ln, data[st + ln - 1]) for (st, ln), src in zip(spans, choice)]
        scheme = MacroScheme.from_triples(triples)
        if not find_cycles(scheme.parent_map()):
            return scheme
    raise ValueError("no valid scheme with these explicit positions")


@pytest.fixture
def certified():
    text = attach_sentinel(CERTIFIED_RAW)
    return text, scheme_with_ends(text, CERTIFIED_ENDS)
