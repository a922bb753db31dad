"""scikit-learn style wrappers around the deciders.

Inputs are sequences of cycle words (any representation); outputs are
per-cycle labels.  ``fit`` only validates and records metadata: every
decider here is exact, so there is nothing to learn.
"""
from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .digraph import CycleId, as_cycle
from .pathcond import (
    DEFAULT_BRUTEFORCE_GIRTH,
    WitnessParams,
    path_condition_bruteforce,
    path_condition_syntactic,
    path_condition_word_criterion,
)
from .slupecki import DEFAULT_BUDGET, find_slupecki_counterexample

METHODS = ("syntactic", "bruteforce", "word-criterion")


def check_cycles(X) -> list[CycleId]:
    """Validate a 1-d collection of cycle words and canonicalize it."""
    if isinstance(X, (str, CycleId)):
        raise ValueError("expected a sequence of cycles, got a single cycle")
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d sequence of cycle words, got shape {arr.shape}")
    return [as_cycle(x) for x in arr]


class PathConditionClassifier(ClassifierMixin, BaseEstimator):
    """Label each cycle ``True`` if it fails the path condition.

    ``method`` picks the decider.  ``"word-criterion"`` is one-sided: a
    ``True`` there only means the standard witness did not separate.
    """

    def __init__(self, method: str = "syntactic", witness_N: Optional[int] = None,
                 max_girth: int = DEFAULT_BRUTEFORCE_GIRTH):
        self.method = method
        self.witness_N = witness_N
        self.max_girth = max_girth

    def _validate_params(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.witness_N is not None and self.witness_N < 1:
            raise ValueError("witness_N must be positive")
        if self.max_girth < 3:
            raise ValueError("max_girth must be at least 3")

    def fit(self, X, y=None):
        self._validate_params()
        cycles = check_cycles(X)
        self.classes_ = np.array([False, True])
        self.n_features_in_ = 1
        self.girths_ = sorted({c.girth for c in cycles})
        return self

    def verdicts(self, X):
        check_is_fitted(self, "classes_")
        out = []
        for c in check_cycles(X):
            if self.method == "syntactic":
                out.append(path_condition_syntactic(c))
            elif self.method == "bruteforce":
                out.append(path_condition_bruteforce(c, max_girth=self.max_girth))
            else:
                params = WitnessParams(self.witness_N) if self.witness_N else None
                out.append(path_condition_word_criterion(c, params))
        return out

    def predict(self, X):
        return np.array([v.fails for v in self.verdicts(X)], dtype=bool)


class SlupeckiSearch(BaseEstimator):
    """Run the counterexample search at a fixed arity on each cycle.

    ``predict`` returns the verdict strings; ``outcomes`` the full records.
    """

    def __init__(self, arity: int = 2, budget_nodes: Optional[int] = DEFAULT_BUDGET):
        self.arity = arity
        self.budget_nodes = budget_nodes

    def fit(self, X, y=None):
        if self.arity < 2:
            raise ValueError("arity must be at least 2")
        if self.budget_nodes is not None and self.budget_nodes < 1:
            raise ValueError("budget_nodes must be positive")
        check_cycles(X)
        self.n_features_in_ = 1
        return self

    def outcomes(self, X):
        check_is_fitted(self, "n_features_in_")
        return [find_slupecki_counterexample(c, self.arity, self.budget_nodes) for c in check_cycles(X)]

    def predict(self, X):
        return np.array([o.verdict for o in self.outcomes(X)], dtype=object)


__all__ = ["PathConditionClassifier", "SlupeckiSearch", "check_cycles"]
