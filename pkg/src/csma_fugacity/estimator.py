"""scikit-learn style wrappers.

``FugacityEstimator`` is fitted on a conflict graph (it builds the region
collection once) and then maps target service-rate vectors to log-fugacities.
``GibbsMarginals`` does the reverse: log-fugacities to exact service rates.
Both accept one vector ``(n,)`` or a batch ``(m, n)``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_fugacities, check_graph, check_rates
from .evaluation import approx_error
from .exact import exact_marginals
from .exceptions import ParameterError
from .fugacity import bethe_raf, clique_raf, cycle4_raf
from .regions import METHODS, build_collection


def _rowwise(func, X):
    if X.ndim == 1:
        return func(X)
    return np.vstack([func(row) for row in X])


class FugacityEstimator(TransformerMixin, BaseEstimator):
    """Region-approximated fugacities for target service rates.

    Parameters
    ----------
    method : {'bethe', 'clique', 'cycle4'}
        Region family used for the approximation.

    Attributes
    ----------
    graph_ : ConflictGraph
    collection_ : RegionCollection
    n_features_in_ : int
        Number of links.
    """

    def __init__(self, method="clique"):
        self.method = method

    def fit(self, X, y=None):
        """``X`` is a ``ConflictGraph`` or a symmetric adjacency matrix."""
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        self.graph_ = check_graph(X)
        self.collection_ = build_collection(self.graph_, self.method)
        self.n_features_in_ = self.graph_.n
        return self

    def transform(self, X):
        """Rates ``(n,)`` or ``(m, n)`` to log-fugacities of the same shape."""
        check_is_fitted(self, "collection_")
        S = check_rates(X, self.n_features_in_, allow_2d=True)
        g, c = self.graph_, self.collection_
        if self.method == "bethe":
            func = lambda s: bethe_raf(g, s)  # noqa: E731
        elif self.method == "clique":
            func = lambda s: clique_raf(g, c, s)  # noqa: E731
        else:
            func = lambda s: cycle4_raf(g, c, s)  # noqa: E731
        return _rowwise(func, S)

    def inverse_transform(self, X):
        """Exact service rates supported by log-fugacities ``X``."""
        check_is_fitted(self, "collection_")
        V = check_fugacities(X, self.n_features_in_, allow_2d=True)
        return _rowwise(lambda v: exact_marginals(self.graph_, v).marginals, V)

    def score(self, X, y=None):
        """Negative mean approximation error (max over links) on rate vectors ``X``."""
        S = check_rates(X, self.n_features_in_, allow_2d=True)
        S2 = np.atleast_2d(S)
        achieved = np.atleast_2d(self.inverse_transform(self.transform(S2)))
        return -float(np.mean([approx_error(s, a) for s, a in zip(S2, achieved)]))


class GibbsMarginals(TransformerMixin, BaseEstimator):
    """Exact per-link activity probabilities of the CSMA Gibbs distribution."""

    def fit(self, X, y=None):
        self.graph_ = check_graph(X)
        self.n_features_in_ = self.graph_.n
        return self

    def transform(self, X):
        check_is_fitted(self, "graph_")
        V = check_fugacities(X, self.n_features_in_, allow_2d=True)
        return _rowwise(lambda v: exact_marginals(self.graph_, v).marginals, V)
