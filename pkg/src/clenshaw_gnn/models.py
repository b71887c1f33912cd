"""Nonlinear residual graph convolution models and their ablations.

One class covers the five variants; they share the MLP bracket and differ
only in the stack recursion:

* ``clenshaw``     two back-states, 2 P H1 - H2 + alpha_ell h_star
* ``horner``       one back-state, P H1 + alpha_ell h_star
* ``fixed-param``  clenshaw recursion with frozen teleport-style alphas
* ``gcn``          plain sigma(P H W) stack
* ``gcnii``        fixed initial residue (1-a) P H1 + a h_star

``linear`` mode strips nonlinearities, dropout and every weight matrix so
the stack reduces exactly to the matching rule in :mod:`.filters`; it is
the bridge used by all equivalence checks, not a test hack.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .autodiff import ALPHA_GROUP, WEIGHT_GROUP, Node, Parameter, Tape, identity_mapping
from .filters import fixed_param_coefficients
from .graphs import PropagationOperator

VARIANTS = ("clenshaw", "horner", "fixed-param", "gcn", "gcnii")
MODES = ("train", "eval", "linear")


@dataclass
class ModelConfig:
    variant: str = "clenshaw"
    k: int = 16
    hidden: int = 64
    lambda_: float = 0.5
    dropout: float = 0.5
    lr_alpha: float = 0.1
    lr_weights: float = 0.01
    weight_decay: float = 1e-5
    momentum: float = 0.9
    fixed_alpha: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        if self.hidden < 1:
            raise ValueError(f"hidden must be >= 1, got {self.hidden}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1), got {self.dropout}")
        if self.variant in ("fixed-param", "gcnii"):
            if self.fixed_alpha is None:
                raise ValueError(f"variant {self.variant} requires fixed_alpha")
            if not 0.0 <= self.fixed_alpha <= 1.0:
                raise ValueError(f"fixed_alpha must be in [0, 1], got {self.fixed_alpha}")


def beta_schedule(position: int, lam: float) -> float:
    """Identity-mapping strength of the stack's layer at 0-based position."""
    return float(np.log(lam / (position + 1) + 1.0))


class PropagationModel:
    """Residual graph convolution stack bracketed by two affine layers."""

    def __init__(self, config: ModelConfig, in_dim: int, n_classes: int):
        self.config = config
        self.in_dim = in_dim
        self.n_classes = n_classes
        rng = np.random.default_rng(config.seed)
        h = config.hidden

        def uniform(fan_in, shape):
            s = 1.0 / np.sqrt(fan_in)
            return rng.uniform(-s, s, size=shape)

        self.pre_w = Parameter(uniform(in_dim, (in_dim, h)), WEIGHT_GROUP, "pre_w")
        self.pre_b = Parameter(np.zeros(h), WEIGHT_GROUP, "pre_b")
        n_layers = config.k if config.variant in ("gcn", "gcnii") else config.k + 1
        self.layer_w = [
            Parameter(uniform(h, (h, h)), WEIGHT_GROUP, f"layer_w_{i}") for i in range(n_layers)
        ]
        self.post_w = Parameter(uniform(h, (h, n_classes)), WEIGHT_GROUP, "post_w")
        self.post_b = Parameter(np.zeros(n_classes), WEIGHT_GROUP, "post_b")

        self.alphas: Parameter | None = None
        self.fixed_alphas: np.ndarray | None = None
        if config.variant in ("clenshaw", "horner"):
            init = np.zeros(config.k + 1)
            init[-1] = 1.0
            self.alphas = Parameter(init, ALPHA_GROUP, "alphas")
        elif config.variant == "fixed-param":
            self.fixed_alphas = fixed_param_coefficients(config.fixed_alpha, config.k)

    def parameters(self) -> list[Parameter]:
        params = [self.pre_w, self.pre_b, *self.layer_w, self.post_w, self.post_b]
        if self.alphas is not None:
            params.append(self.alphas)
        return params

    def alpha_parameters(self) -> list[Parameter]:
        return [self.alphas] if self.alphas is not None else []

    def weight_parameters(self) -> list[Parameter]:
        return [p for p in self.parameters() if p.group == WEIGHT_GROUP]

    # -- forward ----------------------------------------------------------

    def forward(
        self,
        tape: Tape,
        p: PropagationOperator,
        x: np.ndarray,
        mode: str = "eval",
        epoch: int = 0,
    ) -> Node:
        """Logits node for all n nodes; shape (n, C), or (n, f) in linear mode."""
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}, expected one of {MODES}")
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[0] != p.n:
            raise ValueError(f"feature shape {x.shape} incompatible with n={p.n}")
        if mode != "linear" and x.shape[1] != self.in_dim:
            raise ValueError(f"expected {self.in_dim} input features, got {x.shape[1]}")
        cfg = self.config

        dropout_calls = [0]

        def drop(node):
            rng = np.random.default_rng([cfg.seed, epoch, dropout_calls[0]])
            dropout_calls[0] += 1
            return tape.dropout(node, cfg.dropout, rng, mode)

        x_node = tape.constant(x)
        if mode == "linear":
            h_star = x_node
        else:
            pre = tape.add_bias(tape.matmul(drop(x_node), tape.param(self.pre_w)), tape.param(self.pre_b))
            h_star = tape.relu(pre)

        out = self._propagate(tape, p, h_star, mode)

        if mode == "linear":
            return out
        return tape.add_bias(tape.matmul(drop(out), tape.param(self.post_w)), tape.param(self.post_b))

    def _propagate(self, tape: Tape, p: PropagationOperator, h_star: Node, mode: str) -> Node:
        cfg = self.config
        linear = mode == "linear"

        def transform(node, position):
            if linear:
                return node
            beta = beta_schedule(position, cfg.lambda_)
            if cfg.variant == "gcn":
                return tape.relu(tape.matmul(node, tape.param(self.layer_w[position])))
            mapped = identity_mapping(tape, node, tape.param(self.layer_w[position]), beta)
            return tape.relu(mapped)

        if cfg.variant in ("clenshaw", "fixed-param"):
            alpha_node = tape.param(self.alphas) if self.alphas is not None else None
            zero = tape.constant(np.zeros_like(h_star.value))
            prev2, prev1 = zero, zero
            cur = zero
            for ell in range(cfg.k + 1):
                if alpha_node is not None:
                    residue = tape.scale(h_star, tape.get(alpha_node, ell))
                else:
                    residue = tape.scale_const(h_star, self.fixed_alphas[ell])
                combo = tape.add(
                    tape.sub(tape.scale_const(tape.spmm_const(p, prev1), 2.0), prev2), residue
                )
                cur = transform(combo, ell)
                prev2, prev1 = prev1, cur
            return cur

        if cfg.variant == "horner":
            alpha_node = tape.param(self.alphas)
            cur = tape.constant(np.zeros_like(h_star.value))
            for ell in range(cfg.k + 1):
                residue = tape.scale(h_star, tape.get(alpha_node, ell))
                combo = tape.add(tape.spmm_const(p, cur), residue)
                cur = transform(combo, ell)
            return cur

        if cfg.variant == "gcn":
            cur = h_star
            for i in range(cfg.k):
                cur = transform(tape.spmm_const(p, cur), i)
            return cur

        # gcnii
        a = cfg.fixed_alpha
        cur = h_star
        for i in range(cfg.k):
            combo = tape.add(
                tape.scale_const(tape.spmm_const(p, cur), 1.0 - a),
                tape.scale_const(h_star, a),
            )
            cur = transform(combo, i)
        return cur

    def logits(self, p: PropagationOperator, x: np.ndarray, mode: str = "eval", epoch: int = 0) -> np.ndarray:
        """Forward pass on a throwaway tape, returning a plain array."""
        tape = Tape()
        node = self.forward(tape, p, x, mode=mode, epoch=epoch)
        return np.asarray(node.value)

    # -- checkpointing -----------------------------------------------------

    def state_dict(self) -> dict:
        state = {p.name: p.value.tolist() for p in self.parameters()}
        if self.fixed_alphas is not None:
            state["fixed_alphas"] = self.fixed_alphas.tolist()
        return state

    def save_checkpoint(self, path, extra: dict | None = None):
        doc = {
            "config": asdict(self.config),
            "seed": self.config.seed,
            "in_dim": self.in_dim,
            "n_classes": self.n_classes,
            "params": self.state_dict(),
        }
        if extra:
            doc.update(extra)
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)

    @classmethod
    def load_checkpoint(cls, path) -> "PropagationModel":
        with open(path) as fh:
            doc = json.load(fh)
        config = ModelConfig(**doc["config"])
        model = cls(config, doc["in_dim"], doc["n_classes"])
        for p in model.parameters():
            stored = np.asarray(doc["params"][p.name], dtype=np.float64)
            if stored.shape != p.value.shape:
                raise ValueError(f"checkpoint shape mismatch for {p.name}")
            p.value = stored
        return model


def predict(logits: np.ndarray) -> np.ndarray:
    """Row-wise argmax; ties resolve to the lowest class index."""
    logits = np.asarray(logits)
    if logits.ndim != 2:
        raise ValueError(f"logits must be 2-D, got shape {logits.shape}")
    return np.argmax(logits, axis=1)
