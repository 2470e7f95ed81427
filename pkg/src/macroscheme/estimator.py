"""scikit-learn style front ends.

``fit`` takes one raw byte string (the sentinel is appended internally),
``transform`` returns the fitted scheme and ``inverse_transform`` decodes a
scheme back to the raw bytes.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .annealing import AnnealParams, run
from .lz import lz_parse
from .suffix_index import build
from .text import materialize
from .validation import check_scheme, check_seed, check_text


class _SchemeTransformer(TransformerMixin, BaseEstimator):
    def transform(self, X):
        check_is_fitted(self, "scheme_")
        if check_text(X) != self.text_:
            raise ValueError("transform expects the text the estimator was fitted on")
        return self.scheme_

    def inverse_transform(self, scheme):
        return materialize(check_scheme(scheme)).raw


_DEFAULTS = AnnealParams()


class MacroSchemeAnnealer(_SchemeTransformer):
    """Small bidirectional macro scheme found by simulated annealing.

    Parameters
    ----------
    t0 : float
        Starting temperature.
    alpha : float
        Geometric cooling factor applied every ``cool_every`` iterations.
    cool_every : int
    max_iters : int
        Iteration budget.
    retries : int
        Source samples tried before loops are broken by splitting.
    init : {"explicit", "lz"}
        Starting parse.
    random_state : int, RandomState or None

    Attributes
    ----------
    scheme_ : MacroScheme
    k_ : int
    n_iter_ : int
    stop_reason_ : str
        ``"LocalMinimum"`` or ``"Budget"``.
    certificate_ : bool
        True when the result provably has at most twice the optimal size.
    trace_ : list of (iteration, k, temperature)
    transitions_ : list of Transition
    seed_ : int
    """

    def __init__(self, t0=_DEFAULTS.t0, alpha=_DEFAULTS.alpha, cool_every=_DEFAULTS.cool_every,
                 max_iters=_DEFAULTS.max_iters, retries=_DEFAULTS.retries, init=_DEFAULTS.init,
                 random_state=0):
        self.t0 = t0
        self.alpha = alpha
        self.cool_every = cool_every
        self.max_iters = max_iters
        self.retries = retries
        self.init = init
        self.random_state = random_state

    def fit(self, X, y=None):
        text = check_text(X)
        self.seed_ = check_seed(self.random_state)
        params = AnnealParams(
            t0=self.t0, alpha=self.alpha, cool_every=self.cool_every, max_iters=self.max_iters,
            retries=self.retries, seed=self.seed_, init=self.init,
        )
        self.text_ = text
        self.index_ = build(text)
        result = run(text, params, idx=self.index_)
        self.scheme_ = result.scheme
        self.k_ = result.k
        self.n_iter_ = result.iterations
        self.stop_reason_ = result.stop_reason
        self.certificate_ = result.certificate
        self.trace_ = result.trace
        self.transitions_ = result.transitions
        return self

    def score(self, X, y=None):
        """Negative phrase count, so that larger is better."""
        return -self.transform(X).k


class LempelZivParser(_SchemeTransformer):
    """Greedy symbol-terminated Lempel-Ziv parse as a transformer."""

    def fit(self, X, y=None):
        self.text_ = check_text(X)
        self.scheme_ = lz_parse(self.text_)
        self.k_ = self.scheme_.k
        return self
