"""Input checks shared by the estimators and the CLI."""
from __future__ import annotations

import numbers

import numpy as np

from .text import MacroScheme, Text, attach_sentinel


def check_text(X) -> Text:
    """Coerce raw input to a sentinel-terminated Text.

    Accepts bytes-like objects, latin-1 encodable strings, 1-D uint8 arrays
    and already-built Text values. Raw input must not contain 0x00.
    """
    if isinstance(X, Text):
        return X
    if isinstance(X, str):
        try:
            X = X.encode("latin-1")
        except UnicodeEncodeError as exc:
            raise ValueError("string input must be latin-1 encodable") from exc
    elif isinstance(X, np.ndarray):
        if X.ndim != 1:
            raise ValueError(f"expected a 1-D array of bytes, got shape {X.shape}")
        if X.size and (X.min() < 0 or X.max() > 255):
            raise ValueError("array values must be bytes (0..255)")
        X = X.astype(np.uint8).tobytes()
    elif isinstance(X, (list, tuple)):
        X = bytes(X)
    if not isinstance(X, (bytes, bytearray, memoryview)):
        raise TypeError(f"cannot interpret {type(X).__name__} as a byte string")
    return attach_sentinel(bytes(X))


def check_scheme(scheme) -> MacroScheme:
    if isinstance(scheme, MacroScheme):
        return scheme
    return MacroScheme.from_triples(scheme)


def check_seed(random_state) -> int:
    """Integer seed for the engine; None draws one from numpy's global state."""
    if random_state is None:
        return int(np.random.randint(0, 2**31 - 1))
    if isinstance(random_state, np.random.RandomState):
        return int(random_state.randint(0, 2**31 - 1))
    if isinstance(random_state, numbers.Integral):
        return int(random_state)
    raise ValueError(f"{random_state!r} cannot be used as a seed")
