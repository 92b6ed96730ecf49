"""
Gavril's matching algorithm against the exact optimum
======================================================
"""

# %%
import numpy as np

from cqaoa import approximation_quality, exact_min_vertex_cover, gavril_2approx
from cqaoa.graph import gen_cycle, gen_johnson, gen_star

graphs = {"star(10)": gen_star(10), "cycle(101)": gen_cycle(101)}
graphs.update({f"J(6,{k})": gen_johnson(6, k) for k in (1, 2, 3)})

for name, graph in graphs.items():
    if graph.n_vertices <= 24:
        optimum = exact_min_vertex_cover(graph).size
    else:
        optimum = -(-graph.n_vertices // 2)  # cycles only
    qualities = [approximation_quality(optimum, gavril_2approx(graph, s).size) for s in range(1000)]
    print(f"{name:>10}: optimum {optimum:3d}  mean quality {np.mean(qualities):.3f}  "
          f"range [{min(qualities):.3f}, {max(qualities):.3f}]")
