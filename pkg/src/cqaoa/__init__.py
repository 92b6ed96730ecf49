"""Classical simulation of QAOA with constraint-preserving quantum-walk mixers.

Solutions are bitstrings over ``n`` qubits. The mixer is a continuous-time
quantum walk on the hypercube restricted to feasible bitstrings, so the
evolved state only ever has weight on feasible solutions. Minimum vertex
cover is the worked problem; see :mod:`cqaoa.bench` for the experiment sweeps.
"""

from .classical import approximation_quality, exact_min_vertex_cover, gavril_2approx
from .estimate import SamplePlan, estimate_expectation, exact_expectation, sample_measurement
from .evolve import (
    Params,
    StateVector,
    apply_phase,
    basis_state,
    evolve,
    expm_apply,
    make_evolver,
    mixer_matvec,
)
from .exceptions import CapacityError, EdgeListError, KrylovConvergenceError
from .graph import Graph, gen_cycle, gen_erdos_renyi, gen_johnson, gen_star, read_edge_list, write_edge_list
from .optimize import OptimizerConfig, RunResult, level_nesting_check, maximize_f, nelder_mead
from .problem import NpoInstance, VertexCoverInstance, build_tables, feasible_connected

__version__ = "0.1.0"
