"""Full-graph training loop with validation-accuracy early stopping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autodiff import Tape, backward
from .data import Dataset, Split
from .graphs import normalized_adjacency
from .models import ModelConfig, PropagationModel, predict
from .optim import Adam, SGDMomentum, zero_grads


class TrainingDiverged(RuntimeError):
    def __init__(self, epoch: int):
        super().__init__(f"non-finite training loss at epoch {epoch}")
        self.epoch = epoch


@dataclass
class TrainResult:
    best_val_acc: float
    test_acc_at_best_val: float
    best_epoch: int
    epochs_run: int
    loss_curve: list[float]
    learned_alphas: list[float] | None
    seed: int

    def to_dict(self) -> dict:
        return {
            "best_val_acc": self.best_val_acc,
            "test_acc": self.test_acc_at_best_val,
            "best_epoch": self.best_epoch,
            "epochs": self.epochs_run,
            "alphas": self.learned_alphas,
            "seed": self.seed,
        }


def evaluate(logits: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> float:
    """Fraction of masked nodes whose argmax class matches the label."""
    mask = np.asarray(mask, dtype=np.int64)
    if mask.size == 0:
        raise ValueError("evaluate needs a nonempty mask")
    labels = np.asarray(labels, dtype=np.int64)
    return float(np.mean(predict(logits)[mask] == labels[mask]))


def train(
    dataset: Dataset,
    split: Split,
    config: ModelConfig,
    patience: int = 300,
    max_epochs: int = 2000,
) -> tuple[TrainResult, PropagationModel]:
    """Train one model; test accuracy is reported at the best-validation epoch.

    Per epoch: train-mode forward on the train mask, backward, SGD-momentum
    step on the residue coefficients, Adam step on all other weights, then
    an eval-mode pass for validation accuracy.  Stops once validation
    accuracy has not improved for `patience` epochs (ties keep the earlier
    checkpoint).
    """
    if split.train.size == 0:
        raise ValueError("train split is empty")
    p = normalized_adjacency(dataset.graph)
    model = PropagationModel(config, dataset.features.shape[1], dataset.n_classes)
    params = model.parameters()
    opt_alpha = SGDMomentum(model.alpha_parameters(), lr=config.lr_alpha, momentum=config.momentum)
    opt_weights = Adam(
        model.weight_parameters(), lr=config.lr_weights, weight_decay=config.weight_decay
    )

    best_val = -1.0
    best_epoch = -1
    test_at_best = 0.0
    alphas_at_best = None
    loss_curve: list[float] = []
    epochs_run = 0

    for epoch in range(max_epochs):
        epochs_run = epoch + 1
        zero_grads(params)
        tape = Tape()
        logits = model.forward(tape, p, dataset.features, mode="train", epoch=epoch)
        loss = tape.nll_loss(tape.log_softmax_rows(logits), dataset.labels, split.train)
        if not np.isfinite(loss.value):
            raise TrainingDiverged(epoch)
        loss_curve.append(float(loss.value))
        backward(tape, loss)
        if opt_alpha.params:
            opt_alpha.step()
        opt_weights.step()

        eval_logits = model.logits(p, dataset.features, mode="eval")
        val_acc = evaluate(eval_logits, dataset.labels, split.val)
        if val_acc > best_val:
            best_val = val_acc
            best_epoch = epoch
            if split.test.size:
                test_at_best = evaluate(eval_logits, dataset.labels, split.test)
            else:
                test_at_best = float("nan")
            if model.alphas is not None:
                alphas_at_best = model.alphas.value.tolist()
            elif model.fixed_alphas is not None:
                alphas_at_best = model.fixed_alphas.tolist()
        if epoch - best_epoch >= patience:
            break

    result = TrainResult(
        best_val_acc=best_val,
        test_acc_at_best_val=test_at_best,
        best_epoch=best_epoch,
        epochs_run=epochs_run,
        loss_curve=loss_curve,
        learned_alphas=alphas_at_best,
        seed=config.seed,
    )
    return result, model
