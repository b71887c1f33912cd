"""Command-line surface: verify / train / filter-response / homophily / spectrum.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.  All
commands are deterministic given their flags and seed; the default seed
comes from the CLENSHAW_SEED environment variable.  Alongside every file
output a small manifest records the resolved invocation.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .data import generate_sbm, homophily, load_dataset, random_split
from .filters import layer_alphas_to_filter_coeffs
from .graphs import build_graph, normalized_adjacency, read_edge_list
from .models import ModelConfig
from .polybasis import CHEBYSHEV_T, CHEBYSHEV_U, MONOMIAL, CoeffVector
from .spectral import eig_sym, filter_response
from .training import TrainingDiverged, train
from .verify import SUITES, run_suite

SBM_PRESETS = {
    "hetero-default": dict(n_per_block=200, blocks=2, p_in=0.02, p_out=0.2, feature_dim=16, noise=1.0),
    "homo-default": dict(n_per_block=200, blocks=2, p_in=0.2, p_out=0.02, feature_dim=16, noise=1.0),
}


def _default_seed() -> int:
    return int(os.environ.get("CLENSHAW_SEED", "0"))


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _write_manifest(out_path: Path, command: str, args: dict, artifacts: list[str]):
    manifest = {
        "command": command,
        "args": args,
        "artifacts": artifacts,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    path = out_path.with_suffix(out_path.suffix + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _emit(text: str, out: str | None, command: str, args: dict):
    if out is None:
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        _write_manifest(path, command, args, [str(path)])


def _parse_seeds(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in spec.split(",") if tok.strip()]


def _parse_alphas(spec: str) -> np.ndarray:
    """Inline comma list, a text file of numbers, or a checkpoint JSON."""
    path = Path(spec)
    if path.exists():
        if path.suffix == ".json":
            doc = json.loads(path.read_text())
            if "params" in doc and "alphas" in doc["params"]:
                return np.asarray(doc["params"]["alphas"], dtype=np.float64)
            if "alphas" in doc:
                return np.asarray(doc["alphas"], dtype=np.float64)
            raise ValueError(f"{spec}: no alphas entry in checkpoint")
        toks = path.read_text().replace(",", " ").split()
        return np.asarray([float(t) for t in toks], dtype=np.float64)
    try:
        return np.asarray([float(t) for t in spec.split(",") if t.strip()], dtype=np.float64)
    except ValueError:
        raise ValueError(f"cannot parse alphas from {spec!r}") from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    report = run_suite(args.suite, seed=args.seed, trials=args.trials)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    _emit(text, args.out, "verify", {"suite": args.suite, "seed": args.seed, "trials": args.trials})
    for check in report["checks"]:
        status = "pass" if check["passed"] else "FAIL"
        print(
            f"[{status}] {check['name']}: max err {check['max_err']:.3e}"
            f" (tol {check['tol']:.1e}, {check['cases']} cases)",
            file=sys.stderr,
        )
    return 0 if report["passed"] else 1


def _load_from_args(args):
    if args.sbm:
        params = dict(SBM_PRESETS[args.sbm])
        for key in ("n_per_block", "blocks", "p_in", "p_out", "feature_dim", "noise"):
            override = getattr(args, f"sbm_{key}", None)
            if override is not None:
                params[key] = override
        return generate_sbm(seed=args.sbm_seed, **params)
    if not (args.edges and args.features and args.labels):
        raise ValueError("pass --sbm PRESET or all of --edges/--features/--labels")
    return load_dataset(args.edges, args.features, args.labels, normalize_features=args.normalize_features)


def cmd_train(args) -> int:
    dataset = _load_from_args(args)
    seeds = _parse_seeds(args.seeds)
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)

    runs = []
    test_accs = []
    artifacts = []
    for seed in seeds:
        config = ModelConfig(
            variant=args.variant,
            k=args.k,
            hidden=args.hidden,
            lambda_=getattr(args, "lambda_"),
            dropout=args.dropout,
            lr_alpha=args.lr_alpha,
            lr_weights=args.lr_weights,
            weight_decay=args.wd,
            fixed_alpha=args.fixed_alpha,
            seed=seed,
        )
        split = random_split(dataset.n, seed=seed)
        try:
            result, model = train(
                dataset, split, config, patience=args.patience, max_epochs=args.max_epochs
            )
        except TrainingDiverged as exc:
            runs.append({"seed": seed, "error": str(exc), "epoch": exc.epoch})
            continue
        runs.append({"config": asdict(config), **result.to_dict()})
        test_accs.append(result.test_acc_at_best_val)
        if out_dir:
            ckpt = out_dir / f"checkpoint_seed{seed}.json"
            model.save_checkpoint(ckpt, extra={"test_acc": result.test_acc_at_best_val})
            artifacts.append(str(ckpt))

    summary = {
        "variant": args.variant,
        "k": args.k,
        "seeds": seeds,
        "runs": runs,
        "mean_test_acc": float(np.mean(test_accs)) if test_accs else None,
        "std_test_acc": float(np.std(test_accs, ddof=1)) if len(test_accs) > 1 else 0.0,
    }
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if out_dir:
        results_path = out_dir / "results.json"
        results_path.write_text(text)
        artifacts.append(str(results_path))
        _write_manifest(results_path, "train", {k: v for k, v in vars(args).items() if k != "func"}, artifacts)
    sys.stdout.write(text)
    return 0


def cmd_filter_response(args) -> int:
    alphas = _parse_alphas(args.alphas)
    basis = {"monomial": MONOMIAL, "chebyshev-u": CHEBYSHEV_U, "chebyshev-t": CHEBYSHEV_T}[args.basis]
    if args.coeff_order == "layer":
        coeffs = layer_alphas_to_filter_coeffs(alphas, basis)
    else:
        coeffs = CoeffVector(alphas, basis)
    grid = np.linspace(-1.0, 1.0, args.grid)
    lines = ["mu,h"]
    for mu, h in filter_response(coeffs, grid):
        lines.append(f"{_fmt(mu)},{_fmt(h)}")
    _emit(
        "\n".join(lines) + "\n",
        args.out,
        "filter-response",
        {"alphas": alphas.tolist(), "basis": args.basis, "grid": args.grid, "coeff_order": args.coeff_order},
    )
    return 0


def cmd_homophily(args) -> int:
    if args.labels is None:
        raise ValueError("--labels is required")
    labels = []
    with open(args.labels) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                labels.append(int(line))
    n = len(labels)
    graph = build_graph(read_edge_list(args.edges), n=n)
    value = homophily(graph, np.asarray(labels))
    doc = {"homophily": value, "n": n, "edges": graph.num_edges}
    _emit(
        json.dumps(doc, indent=2, sort_keys=True) + "\n",
        args.out,
        "homophily",
        {"edges": args.edges, "labels": args.labels},
    )
    return 0


def cmd_spectrum(args) -> int:
    edges = read_edge_list(args.edges)
    n = args.n if args.n is not None else (max((max(u, v) for u, v, _ in edges), default=-1) + 1)
    if n <= 0:
        raise ValueError("cannot infer node count; pass --n")
    if n > args.dense_limit:
        raise ValueError(
            f"graph has {n} nodes, over the dense limit {args.dense_limit};"
            " raise --dense-limit if you really want a dense decomposition"
        )
    p = normalized_adjacency(build_graph(edges, n=n))
    decomp = eig_sym(p.to_dense(), dense_limit=args.dense_limit)
    lines = ["mu"] + [_fmt(mu) for mu in decomp.mu]
    _emit(
        "\n".join(lines) + "\n",
        args.out,
        "spectrum",
        {"edges": args.edges, "n": n, "dense_limit": args.dense_limit},
    )
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clenshaw-gnn",
        description="Chebyshev/Clenshaw graph filters: verification, training, analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    p_verify.add_argument("--seed", type=int, default=_default_seed())
    p_verify.add_argument("--trials", type=int, default=None)
    p_verify.add_argument("--out", default=None, help="write the JSON report here")
    p_verify.set_defaults(func=cmd_verify)

    p_train = sub.add_parser("train", help="train one model variant over several seeds")
    p_train.add_argument("--edges")
    p_train.add_argument("--features")
    p_train.add_argument("--labels")
    p_train.add_argument("--normalize-features", action="store_true")
    p_train.add_argument("--sbm", choices=sorted(SBM_PRESETS))
    p_train.add_argument("--sbm-seed", type=int, default=0)
    p_train.add_argument("--sbm-n-per-block", dest="sbm_n_per_block", type=int)
    p_train.add_argument("--sbm-blocks", dest="sbm_blocks", type=int)
    p_train.add_argument("--sbm-p-in", dest="sbm_p_in", type=float)
    p_train.add_argument("--sbm-p-out", dest="sbm_p_out", type=float)
    p_train.add_argument("--sbm-feature-dim", dest="sbm_feature_dim", type=int)
    p_train.add_argument("--sbm-noise", dest="sbm_noise", type=float)
    p_train.add_argument("--variant", default="clenshaw")
    p_train.add_argument("--k", type=int, default=16)
    p_train.add_argument("--hidden", type=int, default=64)
    p_train.add_argument("--lambda", dest="lambda_", type=float, default=0.5)
    p_train.add_argument("--dropout", type=float, default=0.5)
    p_train.add_argument("--lr-alpha", type=float, default=0.1)
    p_train.add_argument("--lr-weights", type=float, default=0.01)
    p_train.add_argument("--wd", type=float, default=1e-5)
    p_train.add_argument("--fixed-alpha", type=float, default=None)
    p_train.add_argument("--patience", type=int, default=300)
    p_train.add_argument("--max-epochs", type=int, default=2000)
    p_train.add_argument("--seeds", default=str(_default_seed()))
    p_train.add_argument("--out", default=None, help="directory for results and checkpoints")
    p_train.set_defaults(func=cmd_train)

    p_fr = sub.add_parser("filter-response", help="emit h(mu) over a grid as CSV")
    p_fr.add_argument("--alphas", required=True, help="inline comma list, text file, or checkpoint JSON")
    p_fr.add_argument("--basis", choices=["monomial", "chebyshev-u", "chebyshev-t"], default="chebyshev-u")
    p_fr.add_argument("--coeff-order", choices=["layer", "degree"], default="layer",
                      help="layer: reverse into degree order as the stack theorems do")
    p_fr.add_argument("--grid", type=int, default=101)
    p_fr.add_argument("--out", default=None)
    p_fr.set_defaults(func=cmd_filter_response)

    p_h = sub.add_parser("homophily", help="mean same-label neighbor fraction")
    p_h.add_argument("--edges", required=True)
    p_h.add_argument("--labels", required=True)
    p_h.add_argument("--out", default=None)
    p_h.set_defaults(func=cmd_homophily)

    p_s = sub.add_parser("spectrum", help="dump the propagation spectrum as CSV")
    p_s.add_argument("--edges", required=True)
    p_s.add_argument("--n", type=int, default=None)
    p_s.add_argument("--dense-limit", type=int, default=2048)
    p_s.add_argument("--out", default=None)
    p_s.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
