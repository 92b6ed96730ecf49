"""
A small benchmark sweep with result files
==========================================

The same sweep is available from the shell as
``cqaoa run --family erdos_renyi --n-min 4 --n-max 6 --instances 5 --out sweep_out``.
"""

# %%
import json
from pathlib import Path

from cqaoa.bench import ExperimentConfig, run_experiment
from cqaoa.optimize import OptimizerConfig

out = Path("sweep_out")
config = ExperimentConfig(
    family="erdos_renyi",
    n_min=4,
    n_max=6,
    instances_per_point=5,
    classical_seeds=200,
    optimizer=OptimizerConfig(p=2, restarts=5),
    output_dir=str(out),
)
records = run_experiment(config)

# %%
summary = json.loads((out / "summary.json").read_text())
for point in summary["points"]:
    q, c = point["quantum"], point["classical"]
    print(f"n={point['n']}: quantum {q['mean']:.3f} +- {q['ci95']:.3f}   classical {c['mean']:.3f} +- {c['ci95']:.3f}")
print(sorted(p.name for p in out.iterdir()))
