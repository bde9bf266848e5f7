"""Reproducible dataset runner and CSV post-processing.

A dataset names a model, a target well, a ladder of system sizes
n = floor(base^s), and a sample count per size.  Every (size, sample)
task gets its own generator seeded by a documented mixing chain, so runs
are reproducible bit for bit regardless of how tasks are scheduled:

    h = splitmix64(master_seed XOR fnv1a64(dataset_name))
    h = splitmix64(h XOR n)
    seed = splitmix64(h XOR sample_index)

Raw outputs are one CSV per observable with rows (n, sample, value);
``analyze`` reduces them to per-size series (sample std, mean, KS
statistic) plus log-log slope fits.
"""

from __future__ import annotations

import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ergmwell.glauber import run_chain, run_coupled_er
from ergmwell.landscape import resolve_well
from ergmwell.model import ErgmSpec
from ergmwell.observables import average_clustering, edge_counts, signed_difference, triangle_counts
from ergmwell.patterns import Kind
from ergmwell.stats import DegenerateSampleError, StatSeries, ks_normal, loglog_fit, summary_stats

_MASK64 = (1 << 64) - 1

TOOL_VERSION = "0.1.0"

# Local observables are anchored at vertex 0: the measure is
# vertex-exchangeable, so any fixed vertex is equivalent, and fixing one
# keeps outputs deterministic.
SAMPLE_OBSERVABLES = {
    "total_edges": lambda x: edge_counts(x),
    "local_edges": lambda x: edge_counts(x, 0),
    "total_triangles": lambda x: triangle_counts(x),
    "local_triangles": lambda x: triangle_counts(x, 0),
}

COUPLED_OBSERVABLES = ("hamming", "signed_discrepancy", "diff_clustering")

DEFAULT_OBSERVABLES = tuple(SAMPLE_OBSERVABLES)


class ConfigError(Exception):
    """Bad dataset description: unusable before any work starts."""


def splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return h


def derive_seed(master_seed: int, name: str, n: int, sample: int) -> int:
    """Per-task seed from (master seed, dataset name, size, sample index)."""
    h = splitmix64((master_seed & _MASK64) ^ fnv1a64(name))
    h = splitmix64(h ^ (n & _MASK64))
    return splitmix64(h ^ (sample & _MASK64))


@dataclass(frozen=True)
class DatasetSpec:
    """A runnable experiment description."""

    name: str
    spec: ErgmSpec
    well: object  # "low", "high", or a numeric density hint
    samples: int
    base: float
    s_min: int
    s_max: int
    coupling: str = "none"  # "none" or "erdos_renyi"
    observables: tuple[str, ...] = DEFAULT_OBSERVABLES
    seed: int = 0

    def __post_init__(self):
        if self.samples < 2:
            raise ConfigError("samples must be at least 2")
        if self.base <= 1.0:
            raise ConfigError("base must exceed 1")
        if self.s_min > self.s_max:
            raise ConfigError("scale range is empty")
        if self.coupling not in ("none", "erdos_renyi"):
            raise ConfigError(f"unknown coupling {self.coupling!r}")
        for obs in self.observables:
            if obs in SAMPLE_OBSERVABLES:
                continue
            if obs in COUPLED_OBSERVABLES:
                if self.coupling != "erdos_renyi":
                    raise ConfigError(f"observable {obs!r} needs coupling = erdos_renyi")
                continue
            raise ConfigError(f"unknown observable {obs!r}")
        self.n_values()  # validate the size ladder eagerly

    def n_values(self) -> list[int]:
        ns = [int(math.floor(self.base**s)) for s in range(self.s_min, self.s_max + 1)]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError(f"size ladder {ns} is not strictly increasing after flooring")
        return ns


_CONFIG_KEYS = {
    "name", "graph", "beta", "well", "samples", "base",
    "s_min", "s_max", "coupling", "observables", "seed",
}


def parse_config(text: str) -> DatasetSpec:
    """Parse the flat ``key = value`` dataset format.

    ``graph`` and ``beta`` lines repeat, in matching order; every other
    key appears at most once.  ``#`` starts a comment.
    """
    kinds: list[str] = []
    betas: list[float] = []
    single: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key == "graph":
            kinds.append(value)
        elif key == "beta":
            try:
                betas.append(float(value))
            except ValueError:
                raise ConfigError(f"line {lineno}: bad beta {value!r}")
        elif key in single:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        else:
            single[key] = value
    if len(kinds) != len(betas) or not kinds:
        raise ConfigError(
            f"need matching graph/beta lines, got {len(kinds)} graphs and {len(betas)} betas"
        )
    try:
        spec = ErgmSpec.from_kinds(kinds, betas)
    except ValueError as err:
        raise ConfigError(str(err))

    def _get(key, default=None, cast=str):
        if key not in single:
            if default is None:
                raise ConfigError(f"missing required key {key!r}")
            return default
        try:
            return cast(single[key])
        except ValueError:
            raise ConfigError(f"bad value for {key!r}: {single[key]!r}")

    well = single.get("well", "low")
    if well not in ("low", "high"):
        try:
            well = float(well)
        except ValueError:
            raise ConfigError(f"well must be 'low', 'high', or a number, got {well!r}")
    observables = DEFAULT_OBSERVABLES
    coupling = _get("coupling", "none")
    if "observables" in single:
        observables = tuple(
            token.strip() for token in single["observables"].split(",") if token.strip()
        )
    elif coupling == "erdos_renyi":
        observables = DEFAULT_OBSERVABLES + COUPLED_OBSERVABLES
    return DatasetSpec(
        name=_get("name", "dataset"),
        spec=spec,
        well=well,
        samples=_get("samples", 128, int),
        base=_get("base", math.sqrt(2.0), float),
        s_min=_get("s_min", 6, int),
        s_max=_get("s_max", 12, int),
        coupling=coupling,
        observables=observables,
        seed=_get("seed", 0, int),
    )


def load_config(path) -> DatasetSpec:
    return parse_config(Path(path).read_text())


def dataset_to_dict(ds: DatasetSpec) -> dict:
    for g in ds.spec.graphs:
        if g.kind is Kind.GENERIC:
            raise ConfigError("generic patterns cannot be serialized to a config")
    return {
        "name": ds.name,
        "graphs": [g.kind.value for g in ds.spec.graphs],
        "betas": list(ds.spec.betas),
        "well": ds.well,
        "samples": ds.samples,
        "base": ds.base,
        "s_min": ds.s_min,
        "s_max": ds.s_max,
        "coupling": ds.coupling,
        "observables": list(ds.observables),
        "seed": ds.seed,
    }


def dataset_from_dict(d: dict) -> DatasetSpec:
    return DatasetSpec(
        name=d["name"],
        spec=ErgmSpec.from_kinds(d["graphs"], d["betas"]),
        well=d["well"],
        samples=int(d["samples"]),
        base=float(d["base"]),
        s_min=int(d["s_min"]),
        s_max=int(d["s_max"]),
        coupling=d["coupling"],
        observables=tuple(d["observables"]),
        seed=int(d["seed"]),
    )


@dataclass
class RunManifest:
    """Everything needed to reproduce a run's outputs bit for bit."""

    dataset: dict
    p_star: float
    n_values: list[int]
    seeds: dict  # str(n) -> list of per-sample seeds
    files: list[str]
    tool_version: str = TOOL_VERSION
    created_utc: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))


def _fmt(v) -> str:
    """Stable CSV formatting: integers verbatim, floats to 12 significant digits."""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def emit_series_csv(path, ns, values) -> None:
    """Aggregated statistic: one row per system size, columns x,y."""
    for v in values:
        if not math.isfinite(float(v)):
            raise ValueError(f"non-finite value in series for {path}")
    lines = ["x,y"] + [f"{_fmt(n)},{_fmt(v)}" for n, v in zip(ns, values)]
    Path(path).write_text("\n".join(lines) + "\n")


def emit_histogram_csv(path, values) -> None:
    """Per-sample values: one row per sample, single column."""
    for v in values:
        if not math.isfinite(float(v)):
            raise ValueError(f"non-finite value in histogram for {path}")
    lines = ["value"] + [_fmt(v) for v in values]
    Path(path).write_text("\n".join(lines) + "\n")


def parse_series_csv(path) -> tuple[list[float], list[float]]:
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0] != "x,y":
        raise ValueError(f"{path} is not a series CSV (missing x,y header)")
    xs, ys = [], []
    for line in lines[1:]:
        a, b = line.split(",")
        xs.append(float(a))
        ys.append(float(b))
    return xs, ys


def _run_sample(args):
    """One (size, sample) task; returns observable name -> value."""
    spec, p_star, n, steps, seed, coupled, obs_names = args
    rng = np.random.default_rng(seed)
    if coupled:
        x, y = run_coupled_er(spec, p_star, n, steps, rng)
        diff = signed_difference(x, y)
    else:
        x = run_chain(spec, p_star, n, steps, rng)
        diff = None
    out = {}
    for name in obs_names:
        if name in SAMPLE_OBSERVABLES:
            out[name] = SAMPLE_OBSERVABLES[name](x)
        elif name == "hamming":
            out[name] = diff.hamming
        elif name == "signed_discrepancy":
            out[name] = diff.signed_discrepancy
        elif name == "diff_clustering":
            out[name] = average_clustering(diff.difference_graph)
        else:
            raise ValueError(f"unknown observable {name!r}")
    return out


def worker_count(requested=None) -> int:
    """Requested worker count, capped by the ERGM_THREADS environment variable."""
    count = requested if requested else (os.cpu_count() or 1)
    cap = os.environ.get("ERGM_THREADS")
    if cap:
        try:
            count = min(count, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, count)


def run_dataset(ds: DatasetSpec, out_dir, force: bool = False, workers=None) -> RunManifest:
    """Generate all samples of a dataset and write raw per-observable CSVs.

    Each size n runs n^3 updates from a warm start at the resolved well
    density.  Files are refused if they already exist, unless ``force``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        well = resolve_well(ds.spec, ds.well)
    except ValueError as err:
        raise ConfigError(f"cannot resolve well {ds.well!r}: {err}")
    p_star = well.p

    file_names = [f"{obs}.csv" for obs in ds.observables] + ["manifest.json"]
    if not force:
        existing = [name for name in file_names if (out / name).exists()]
        if existing:
            raise ConfigError(
                f"refusing to overwrite {existing} in {out} (pass force/--force)"
            )

    ns = ds.n_values()
    coupled = ds.coupling == "erdos_renyi"
    seeds = {str(n): [derive_seed(ds.seed, ds.name, n, i) for i in range(ds.samples)] for n in ns}
    tasks = [
        (ds.spec, p_star, n, n**3, seeds[str(n)][i], coupled, ds.observables)
        for n in ns
        for i in range(ds.samples)
    ]

    nworkers = worker_count(workers)
    if nworkers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(_run_sample, tasks, chunksize=4))
    else:
        results = [_run_sample(t) for t in tasks]

    rows = []  # (n, sample, {obs: value}) in deterministic task order
    idx = 0
    for n in ns:
        for i in range(ds.samples):
            rows.append((n, i, results[idx]))
            idx += 1

    for obs in ds.observables:
        lines = ["n,sample,value"]
        for n, i, rec in rows:
            lines.append(f"{n},{i},{_fmt(rec[obs])}")
        (out / f"{obs}.csv").write_text("\n".join(lines) + "\n")

    manifest = RunManifest(
        dataset=dataset_to_dict(ds),
        p_star=p_star,
        n_values=ns,
        seeds=seeds,
        files=sorted(file_names),
    )
    (out / "manifest.json").write_text(manifest.to_json())
    return manifest


def read_raw_csv(path) -> dict[int, list[float]]:
    """Raw observable CSV -> {n: values ordered by sample index}."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0] != "n,sample,value":
        raise ValueError(f"{path} is not a raw observable CSV")
    grouped: dict[int, list[tuple[int, float]]] = {}
    for line in lines[1:]:
        n_s, i_s, v_s = line.split(",")
        grouped.setdefault(int(n_s), []).append((int(i_s), float(v_s)))
    return {
        n: [v for _, v in sorted(pairs)] for n, pairs in sorted(grouped.items())
    }


def analyze(in_dir, out_dir) -> dict[str, str]:
    """Reduce raw observable CSVs to per-size series and slope fits.

    Emits ``<obs>_stds.csv``, ``<obs>_means.csv``, ``<obs>_kss.csv``
    (sizes whose sample is degenerate are reported and skipped), a
    standardized histogram of the largest size per observable, and a
    ``fits.csv`` with a log-log slope for every all-positive series.
    """
    src = Path(in_dir)
    if not src.is_dir():
        raise FileNotFoundError(f"input directory {src} does not exist")
    raw_files = sorted(
        p for p in src.glob("*.csv") if not p.name.endswith(("_stds.csv", "_means.csv", "_kss.csv"))
    )
    if not raw_files:
        raise FileNotFoundError(f"no raw observable CSVs found in {src}")
    dst = Path(out_dir)
    dst.mkdir(parents=True, exist_ok=True)

    written: dict[str, str] = {}
    fit_rows = []
    for path in raw_files:
        obs = path.stem
        try:
            grouped = read_raw_csv(path)
        except ValueError:
            continue  # not a raw file (e.g. foreign CSV in the directory)
        ns = sorted(grouped)
        series = {}
        means = [float(np.mean(grouped[n])) for n in ns]
        series["means"] = (ns, means)
        std_ns, stds = [], []
        ks_ns, kss = [], []
        for n in ns:
            vals = grouped[n]
            if len(vals) >= 2:
                std_ns.append(n)
                stds.append(summary_stats(vals)[1])
                try:
                    ks_ns.append(n)
                    kss.append(ks_normal(vals))
                except DegenerateSampleError as err:
                    ks_ns.pop()
                    print(f"analyze: {obs} at n={n}: {err}", file=sys.stderr)
        series["stds"] = (std_ns, stds)
        series["kss"] = (ks_ns, kss)

        for stat, (xs, ys) in series.items():
            if not xs:
                continue
            name = f"{obs}_{stat}.csv"
            emit_series_csv(dst / name, xs, ys)
            written[name] = str(dst / name)
            label = f"{obs}_{stat}"
            if len(xs) >= 3 and all(v > 0 for v in ys):
                fit = loglog_fit(StatSeries(label=label, ns=tuple(xs), values=tuple(ys)))
                fit_rows.append((label, fit))
            else:
                print(f"analyze: skipping fit for {label} (needs >= 3 positive points)",
                      file=sys.stderr)

        largest = ns[-1]
        vals = grouped[largest]
        if len(vals) >= 2:
            try:
                mean, std = summary_stats(vals)
                if std > 0:
                    standardized = [(v - mean) / std for v in vals]
                    name = f"{obs}_standardized_n{largest}.csv"
                    emit_histogram_csv(dst / name, standardized)
                    written[name] = str(dst / name)
            except ValueError:
                pass

    lines = ["label,slope,intercept,residual"]
    for label, fit in fit_rows:
        lines.append(f"{label},{_fmt(fit.slope)},{_fmt(fit.intercept)},{_fmt(fit.residual)}")
    (dst / "fits.csv").write_text("\n".join(lines) + "\n")
    written["fits.csv"] = str(dst / "fits.csv")
    return written
