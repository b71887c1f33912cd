"""Scikit-learn style wrappers around the filter and classifier cores.

The graph is a constructor argument (it is structural side information, not
a sample axis), so `get_params`/`set_params`, cloning and grid search all
work as usual on the node-feature matrix X.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from .data import Dataset, Split
from .filters import clenshaw_propagate_linear, horner_propagate_linear
from .graphs import normalized_adjacency
from .models import ModelConfig
from .training import train
from .validation import check_feature_matrix, check_graph, check_indices, check_labels


class ChebyshevGraphFilter(TransformerMixin, BaseEstimator):
    """Linear polynomial graph filter applied to node features.

    `coefficients` are in layer order; with the default "clenshaw"
    recurrence the realized spectral response is the second-kind Chebyshev
    series with reversed coefficients, with "horner" the analogous monomial
    one.
    """

    def __init__(self, graph=None, coefficients=(1.0,), recurrence="clenshaw"):
        self.graph = graph
        self.coefficients = coefficients
        self.recurrence = recurrence

    def fit(self, X, y=None):
        g = check_graph(self.graph)
        check_feature_matrix(X, g.n)
        if self.recurrence not in ("clenshaw", "horner"):
            raise ValueError(f"unknown recurrence {self.recurrence!r}")
        coeffs = np.asarray(self.coefficients, dtype=np.float64).ravel()
        if coeffs.size < 1 or not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be a nonempty finite vector")
        self.operator_ = normalized_adjacency(g)
        self.coefficients_ = coeffs
        return self

    def transform(self, X):
        if not hasattr(self, "operator_"):
            raise NotFittedError("ChebyshevGraphFilter is not fitted")
        x = check_feature_matrix(X, self.operator_.n)
        k = self.coefficients_.size - 1
        propagate = (
            clenshaw_propagate_linear if self.recurrence == "clenshaw" else horner_propagate_linear
        )
        return propagate(self.operator_, x, self.coefficients_, k).final


class ClenshawNodeClassifier(ClassifierMixin, BaseEstimator):
    """Transductive node classifier trained with the full-graph loop.

    fit(X, y) trains on the nodes in `train_idx` (early stopping on
    `val_idx`); when the index sets are omitted a seeded random split is
    drawn.  predict returns classes for every node.
    """

    def __init__(
        self,
        graph=None,
        variant="clenshaw",
        k=16,
        hidden=64,
        lambda_=0.5,
        dropout=0.5,
        lr_alpha=0.1,
        lr_weights=0.01,
        weight_decay=1e-5,
        momentum=0.9,
        fixed_alpha=None,
        patience=300,
        max_epochs=2000,
        val_fraction=0.2,
        seed=0,
    ):
        self.graph = graph
        self.variant = variant
        self.k = k
        self.hidden = hidden
        self.lambda_ = lambda_
        self.dropout = dropout
        self.lr_alpha = lr_alpha
        self.lr_weights = lr_weights
        self.weight_decay = weight_decay
        self.momentum = momentum
        self.fixed_alpha = fixed_alpha
        self.patience = patience
        self.max_epochs = max_epochs
        self.val_fraction = val_fraction
        self.seed = seed

    def _config(self) -> ModelConfig:
        return ModelConfig(
            variant=self.variant,
            k=self.k,
            hidden=self.hidden,
            lambda_=self.lambda_,
            dropout=self.dropout,
            lr_alpha=self.lr_alpha,
            lr_weights=self.lr_weights,
            weight_decay=self.weight_decay,
            momentum=self.momentum,
            fixed_alpha=self.fixed_alpha,
            seed=self.seed,
        )

    def fit(self, X, y, train_idx=None, val_idx=None):
        g = check_graph(self.graph)
        x = check_feature_matrix(X, g.n)
        labels = check_labels(y, g.n)
        if (train_idx is None) != (val_idx is None):
            raise ValueError("pass both train_idx and val_idx or neither")
        if train_idx is None:
            rng = np.random.default_rng(self.seed)
            perm = rng.permutation(g.n)
            n_val = max(1, int(g.n * self.val_fraction))
            val_idx = np.sort(perm[:n_val])
            train_idx = np.sort(perm[n_val:])
        train_idx = check_indices(train_idx, g.n, "train_idx")
        val_idx = check_indices(val_idx, g.n, "val_idx")
        if train_idx.size == 0 or val_idx.size == 0:
            raise ValueError("train_idx and val_idx must be nonempty")

        dataset = Dataset(graph=g, features=x, labels=labels)
        split = Split(
            train=train_idx, val=val_idx, test=np.empty(0, dtype=np.int64), seed=self.seed
        )
        result, model = train(
            dataset, split, self._config(), patience=self.patience, max_epochs=self.max_epochs
        )
        self.classes_ = np.arange(dataset.n_classes)
        self.result_ = result
        self.model_ = model
        self.operator_ = normalized_adjacency(g)
        return self

    def decision_function(self, X):
        if not hasattr(self, "model_"):
            raise NotFittedError("ClenshawNodeClassifier is not fitted")
        x = check_feature_matrix(X, self.operator_.n)
        return self.model_.logits(self.operator_, x, mode="eval")

    def predict(self, X):
        return np.argmax(self.decision_function(X), axis=1)

    def predict_proba(self, X):
        logits = self.decision_function(X)
        shifted = logits - logits.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        return e / e.sum(axis=1, keepdims=True)
