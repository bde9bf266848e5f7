"""Command-line interface.

Subcommands: ``landscape`` (stationary-point table), ``simulate``
(generate a dataset), ``couple`` (same, with the paired reference
chain), ``stats`` (reduce raw CSVs), ``oracle-check`` (exact
enumeration residuals).  Exit codes: 0 success, 1 configuration error,
2 runtime or I/O error.
"""

from __future__ import annotations

import argparse
import sys

from ergmwell import experiments
from ergmwell.experiments import ConfigError, RunManifest, dataset_from_dict, load_config
from ergmwell.landscape import classify_regime
from ergmwell.oracle import exact_distribution, exact_edge_marginal, verify_detailed_balance


def _cmd_landscape(args) -> int:
    ds = load_config(args.config)
    report = classify_regime(ds.spec)
    in_m = {id(s) for s in report.m_beta}
    print("p,L,L2,kind,global")
    for s in report.stationary_points:
        flag = 1 if id(s) in in_m else 0
        print(f"{s.p:.12g},{s.L:.12g},{s.L2:.12g},{s.kind.value},{flag}")
    print(f"# regime: {report.regime.value}")
    return 0


def _load_dataset(args):
    if getattr(args, "manifest", None):
        from pathlib import Path

        manifest = RunManifest.from_json(Path(args.manifest).read_text())
        return dataset_from_dict(manifest.dataset)
    return load_config(args.config)


def _cmd_simulate(args, force_coupling=None) -> int:
    ds = _load_dataset(args)
    if force_coupling and ds.coupling != force_coupling:
        extra = tuple(
            o for o in experiments.COUPLED_OBSERVABLES if o not in ds.observables
        )
        ds = experiments.DatasetSpec(
            name=ds.name,
            spec=ds.spec,
            well=ds.well,
            samples=ds.samples,
            base=ds.base,
            s_min=ds.s_min,
            s_max=ds.s_max,
            coupling=force_coupling,
            observables=ds.observables + extra,
            seed=ds.seed,
        )
    manifest = experiments.run_dataset(ds, args.out, force=args.force, workers=args.workers)
    print(f"wrote {len(manifest.files)} files to {args.out} (p* = {manifest.p_star:.6f})")
    return 0


def _cmd_couple(args) -> int:
    return _cmd_simulate(args, force_coupling="erdos_renyi")


def _cmd_stats(args) -> int:
    written = experiments.analyze(args.in_dir, args.out)
    print(f"wrote {len(written)} files to {args.out}")
    return 0


def _cmd_oracle_check(args) -> int:
    ds = load_config(args.config)
    n = args.n
    model = exact_distribution(ds.spec, n)
    total = float(model.probabilities.sum())
    marginals = [
        exact_edge_marginal(model, (u, v)) for u in range(n) for v in range(u + 1, n)
    ]
    spread = max(marginals) - min(marginals)
    residual = verify_detailed_balance(ds.spec, n)
    print(f"states: {model.probabilities.size} (n = {n})")
    print(f"probability total deviation: {abs(total - 1.0):.3e}")
    print(f"edge marginal spread: {spread:.3e}")
    print(f"detailed balance residual: {residual:.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ergmwell", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("landscape", help="stationary points and regime of a model")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_landscape)

    for name, func, help_text in (
        ("simulate", _cmd_simulate, "generate dataset samples"),
        ("couple", _cmd_couple, "generate dataset samples with the paired reference chain"),
    ):
        p = sub.add_parser(name, help=help_text)
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--config")
        group.add_argument("--manifest", help="replay a previous run's manifest")
        p.add_argument("--out", required=True)
        p.add_argument("--force", action="store_true")
        p.add_argument("--workers", type=int, default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("stats", help="reduce raw observable CSVs")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("oracle-check", help="exact enumeration residuals")
    p.add_argument("--config", required=True)
    p.add_argument("--n", type=int, default=4)
    p.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 1
    except (OSError, RuntimeError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
