"""Sweeps over graph families comparing the quantum pipeline with Gavril's
approximation, and the CSV / JSON / TSV files they produce."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .classical import approximation_quality, exact_min_vertex_cover, gavril_2approx
from .graph import Graph, gen_cycle, gen_erdos_renyi, gen_johnson, gen_star, read_edge_list
from .optimize import OptimizerConfig, maximize_f
from .problem import VertexCoverInstance, build_tables

__all__ = [
    "FAMILIES",
    "ExperimentConfig",
    "ExperimentRecord",
    "generate_instances",
    "solve_graph",
    "run_experiment",
    "emit_results",
    "summarize",
]

log = logging.getLogger(__name__)

FAMILIES = ("erdos_renyi", "cycle", "star", "johnson", "file")
Z_95 = 1.959963984540054


@dataclass(frozen=True)
class ExperimentConfig:
    family: str
    n_min: int = 4
    n_max: int = 12
    prob: float = 0.5
    k: tuple = (1, 2, 3)
    path: str | None = None
    instances_per_point: int = 1
    classical_seeds: int = 1000
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    output_dir: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.instances_per_point < 1:
            raise ValueError("instances_per_point must be >= 1")
        if self.classical_seeds < 1:
            raise ValueError("classical_seeds must be >= 1")
        if self.family == "file" and not self.path:
            raise ValueError("family 'file' needs a path")
        if self.family != "file" and self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        object.__setattr__(self, "k", tuple(np.atleast_1d(self.k).astype(int).tolist()))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        opt = dict(data.pop("optimizer", {}))
        if "beta_window" in opt:
            opt["beta_window"] = tuple(opt["beta_window"])
        return cls(optimizer=OptimizerConfig(**opt), **data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class ExperimentRecord:
    family: str
    label: str
    n: int
    instance: int
    instance_seed: int
    optimal_size: int
    quantum_cover_size: int
    quantum_quality: float
    classical_quality: float
    best_f: float
    wall_time: float


def _derived_seed(*key) -> int:
    return int(np.random.SeedSequence([int(k) for k in key]).generate_state(1)[0])


def generate_instances(config: ExperimentConfig):
    """Yield ``(label, instance_index, instance_seed, graph)`` in sweep order."""
    fam = config.family
    if fam == "file":
        graph = read_edge_list(Path(config.path).read_text())
        yield Path(config.path).name, 0, config.seed, graph
        return
    for n in range(config.n_min, config.n_max + 1):
        if fam == "johnson":
            for k in config.k:
                if 1 <= k <= n:
                    yield f"J({n},{k})", 0, config.seed, gen_johnson(n, k)
            continue
        for i in range(config.instances_per_point):
            seed = _derived_seed(config.seed, n, i)
            if fam == "erdos_renyi":
                graph = gen_erdos_renyi(n, config.prob, seed)
            elif fam == "cycle":
                graph = gen_cycle(n)
            else:
                graph = gen_star(n)
            yield f"{fam}({n})", i, seed, graph


def solve_graph(graph: Graph, optimizer: OptimizerConfig, classical_seeds: int = 1000, seed: int = 0) -> dict:
    """Quantum run, exact optimum and mean Gavril quality for one graph."""
    instance = VertexCoverInstance(graph)
    tables = build_tables(instance, optimizer.max_bits)
    optimal = exact_min_vertex_cover(graph)
    run = maximize_f(instance, optimizer, tables=tables)
    cover_size = graph.n_vertices - run.best_c
    classical = [
        approximation_quality(optimal.size, gavril_2approx(graph, _derived_seed(seed, 2, j)).size)
        for j in range(classical_seeds)
    ]
    quantum_quality = optimal.size / cover_size if cover_size else 1.0
    return {
        "run": run,
        "optimal": optimal,
        "quantum_cover": frozenset(v for v in range(graph.n_vertices) if run.best_x >> v & 1),
        "quantum_cover_size": cover_size,
        "quantum_quality": quantum_quality,
        "classical_quality": float(np.mean(classical)),
    }


def run_experiment(config: ExperimentConfig) -> list[ExperimentRecord]:
    """Run the sweep; write outputs when ``config.output_dir`` is set.

    A capacity or numerical failure stops the sweep. The records finished so
    far are written (if an output directory is configured), attached to the
    exception as ``partial_records`` and the exception is re-raised.
    """
    records = []
    try:
        for label, index, inst_seed, graph in generate_instances(config):
            t0 = time.perf_counter()
            opt_cfg = OptimizerConfig(
                **{**config.optimizer.__dict__, "seed": _derived_seed(config.seed, graph.n_vertices, index, 1)}
            )
            res = solve_graph(graph, opt_cfg, config.classical_seeds, inst_seed)
            rec = ExperimentRecord(
                family=config.family,
                label=label,
                n=graph.n_vertices,
                instance=index,
                instance_seed=inst_seed,
                optimal_size=res["optimal"].size,
                quantum_cover_size=res["quantum_cover_size"],
                quantum_quality=res["quantum_quality"],
                classical_quality=res["classical_quality"],
                best_f=res["run"].best_f,
                wall_time=round(time.perf_counter() - t0, 6),
            )
            log.info("%s #%d: quantum %.3f classical %.3f", label, index, rec.quantum_quality, rec.classical_quality)
            records.append(rec)
    except Exception as exc:
        exc.partial_records = records
        if config.output_dir and records:
            emit_results(records, config.output_dir)
        raise
    records.sort(key=lambda r: (r.n, r.label, r.instance))
    if config.output_dir:
        emit_results(records, config.output_dir)
    return records


def _stats(values) -> dict:
    v = np.asarray(values, dtype=float)
    half = Z_95 * v.std(ddof=1) / math.sqrt(v.size) if v.size > 1 else 0.0
    return {"mean": float(v.mean()), "min": float(v.min()), "max": float(v.max()), "ci95": float(half)}


def summarize(records) -> dict:
    """Per-n mean/min/max quality with normal-approximation 95% half-widths."""
    by_n = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r)
    points = []
    for n in sorted(by_n):
        group = by_n[n]
        points.append(
            {
                "n": n,
                "count": len(group),
                "labels": sorted({r.label for r in group}),
                "quantum": _stats([r.quantum_quality for r in group]),
                "classical": _stats([r.classical_quality for r in group]),
                "optimal_fraction": sum(r.quantum_cover_size == r.optimal_size for r in group) / len(group),
            }
        )
    return {"families": sorted({r.family for r in records}), "points": points}


def _records_csv(records) -> str:
    buf = io.StringIO()
    names = [f.name for f in fields(ExperimentRecord)]
    writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(asdict(r))
    return buf.getvalue()


def _tsv(header, rows) -> str:
    lines = ["\t".join(header)]
    lines.extend("\t".join(repr(v) if isinstance(v, float) else str(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str):
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def emit_results(records, output_dir) -> list[Path]:
    """Write ``records.csv``, ``summary.json`` and ``plotdata_*.tsv``."""
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out}: {exc}") from exc

    summary = summarize(records)
    written = []
    path = out / "records.csv"
    _write(path, _records_csv(records))
    written.append(path)

    path = out / "summary.json"
    _write(path, json.dumps(summary, indent=2) + "\n")
    written.append(path)

    rows = [
        (
            p["n"],
            p["quantum"]["mean"],
            p["quantum"]["ci95"],
            p["quantum"]["min"],
            p["quantum"]["max"],
            p["classical"]["mean"],
            p["classical"]["ci95"],
        )
        for p in summary["points"]
    ]
    header = ("n", "quantum_mean", "quantum_ci95", "quantum_min", "quantum_max", "classical_mean", "classical_ci95")
    path = out / "plotdata_quality.tsv"
    _write(path, _tsv(header, rows))
    written.append(path)

    path = out / "plotdata_instances.tsv"
    rows = [(r.n, r.instance, r.quantum_quality, r.classical_quality) for r in records]
    _write(path, _tsv(("n", "instance", "quantum_quality", "classical_quality"), rows))
    written.append(path)
    return written
