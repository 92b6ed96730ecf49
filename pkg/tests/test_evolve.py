import itertools
import math

import numpy as np
import pytest

from cqaoa.evolve import (
    ConstrainedMixer,
    KrylovEvolver,
    Params,
    StateVector,
    SubspaceEvolver,
    apply_phase,
    basis_state,
    evolve,
    expm_apply,
    make_evolver,
    mixer_matrix,
    mixer_matvec,
)
from cqaoa.exceptions import KrylovConvergenceError
from cqaoa.graph import Graph, gen_cycle, gen_erdos_renyi, gen_star
from cqaoa.problem import VertexCoverInstance, build_tables
from cqaoa.verify import all_graphs

from oracles import covers, dense_evolve, dense_expm, dense_mixer

SINGLE_EDGE = Graph(2, frozenset({(0, 1)}))


def setup(graph):
    inst = VertexCoverInstance(graph)
    return inst, build_tables(inst)


def test_basis_state():
    assert np.array_equal(basis_state(2, 0b11).amplitudes, [0, 0, 0, 1])
    assert np.array_equal(basis_state(1, 0).amplitudes, [1, 0])
    assert basis_state(5, 17).norm() == 1.0
    with pytest.raises(IndexError):
        basis_state(2, 4)


def test_state_vector_is_read_only():
    s = basis_state(2, 1)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 1.0


def test_params_reduce_gammas_and_check_lengths():
    p = Params((0.1, 0.2), (7.0,))
    assert p.p == 2
    assert p.gammas[0] == pytest.approx(7.0 - 2 * math.pi)
    with pytest.raises(ValueError):
        Params((0.1, 0.2), ())
    with pytest.raises(ValueError):
        Params((), ())
    v = p.to_vector()
    assert Params.from_vector(v, 2) == p
    assert p.extended() == Params((0.1, 0.2, 0.0), (p.gammas[0], 0.0))


def test_apply_phase():
    inst, t = setup(gen_cycle(4))
    rng = np.random.default_rng(0)
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    state = StateVector(4, psi / np.linalg.norm(psi))
    assert np.array_equal(apply_phase(state, 0.0, t.measure).amplitudes, state.amplitudes)
    zero_c = basis_state(4, 0b1111)
    assert np.allclose(apply_phase(zero_c, 1.234, t.measure).amplitudes, zero_c.amplitudes, atol=0)
    full_turn = apply_phase(state, 2 * math.pi, t.measure)
    assert np.linalg.norm(full_turn.amplitudes - state.amplitudes) < 1e-12
    assert abs(apply_phase(state, 0.77, t.measure).norm() - 1.0) < 1e-14


def test_mixer_uniform_state_on_unconstrained_cube():
    n = 4
    _, t = setup(Graph(n))
    uniform = StateVector(n, np.full(1 << n, 0.25))
    assert np.allclose(mixer_matvec(uniform, t.validity), n * uniform.amplitudes)


def test_mixer_single_edge():
    _, t = setup(SINGLE_EDGE)
    out = mixer_matvec(basis_state(2, 0b11), t.validity)
    assert np.array_equal(out, [0, 1, 1, 0])


def test_mixer_kills_infeasible_support():
    _, t = setup(gen_cycle(4))
    infeasible = np.flatnonzero(~t.validity)
    amps = np.zeros(16, complex)
    amps[infeasible] = 1 / math.sqrt(infeasible.size)
    assert not mixer_matvec(StateVector(4, amps), t.validity).any()


@pytest.mark.parametrize("variant", ["feasible", "equal_validity"])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_mixer_matches_definition_and_is_symmetric(n, variant):
    for graph in all_graphs(n):
        _, t = setup(graph)
        ref = dense_mixer(n, lambda x: covers(graph.edges, x), variant)
        mixer = ConstrainedMixer(t.validity, variant)
        cols = np.column_stack([mixer(np.eye(1 << n)[b].astype(complex)) for b in range(1 << n)])
        assert np.array_equal(cols.real, ref)
        assert np.array_equal(cols, cols.T)
        assert np.array_equal(mixer_matrix(t.validity, variant), ref)


def test_mixer_rejects_unknown_variant():
    with pytest.raises(ValueError):
        ConstrainedMixer(np.ones(4, bool), "other")


def test_expm_zero_time_is_identity():
    _, t = setup(gen_cycle(4))
    s = basis_state(4, 15)
    assert np.array_equal(expm_apply(s, 0.0, ConstrainedMixer(t.validity)).amplitudes, s.amplitudes)


@pytest.mark.parametrize("beta", [0.3, 1.0, -2.5, 7.0])
def test_expm_uniform_eigenvector(beta):
    n = 5
    _, t = setup(Graph(n))
    uniform = np.full(1 << n, 1 / math.sqrt(1 << n), dtype=complex)
    out = expm_apply(uniform, beta, ConstrainedMixer(t.validity))
    assert np.linalg.norm(out - np.exp(-1j * beta * n) * uniform) < 1e-10


def test_expm_matches_dense_oracle_random_betas():
    rng = np.random.default_rng(3)
    for graph in [gen_cycle(4), gen_star(4), SINGLE_EDGE, gen_cycle(3), Graph(3)]:
        inst, t = setup(graph)
        n = graph.n_vertices
        dense = dense_mixer(n, lambda x: covers(graph.edges, x))
        start = basis_state(n, inst.initial_feasible)
        mixer = ConstrainedMixer(t.validity)
        for beta in rng.uniform(-10, 10, 10):
            out = expm_apply(start, beta, mixer)
            assert np.linalg.norm(out.amplitudes - dense_expm(dense, beta, start.amplitudes)) < 1e-8
            assert abs(out.norm() - 1) < 1e-10


def test_expm_splits_long_walks_on_larger_cube():
    # spectral radius 12 and beta 40: a single 64-vector Krylov space is not enough
    n = 12
    _, t = setup(Graph(n))
    start = np.zeros(1 << n, complex)
    start[-1] = 1.0
    out = expm_apply(start, 40.0, ConstrainedMixer(t.validity), max_dim=20)
    # unconstrained walk factorises per qubit: |1> -> cos b |1> - i sin b |0>
    c, s = math.cos(40.0), -1j * math.sin(40.0)
    pop = np.array([bin(x).count("1") for x in range(1 << n)])
    expected = c**pop * s ** (n - pop)
    assert np.linalg.norm(out - expected) < 1e-9


def test_expm_reports_non_convergence():
    _, t = setup(Graph(8))
    start = np.zeros(256, complex)
    start[-1] = 1
    with pytest.raises(KrylovConvergenceError) as err:
        expm_apply(start, 50.0, ConstrainedMixer(t.validity), max_dim=2, max_splits=2)
    assert err.value.residual > 0


def test_evolve_degenerate_cases():
    inst, t = setup(gen_cycle(4))
    start = basis_state(4, 15)
    one = evolve(inst, t, Params((0.8,)))
    assert np.allclose(one.amplitudes, expm_apply(start, 0.8, ConstrainedMixer(t.validity)).amplitudes)
    zero = evolve(inst, t, Params((0.0, 0.0, 0.0), (0.0, 0.0)))
    assert np.array_equal(zero.amplitudes, start.amplitudes)


@pytest.mark.parametrize("beta", [0.0, 0.4, 1.3, 2.9, -5.0])
def test_evolve_single_edge_closed_form(beta):
    # feasible states 01 - 11 - 10 form a path with 11 in the middle; the
    # path's spectrum is {0, +-sqrt 2}, so <mid|exp(-i b B)|mid> = cos(sqrt(2) b)
    inst, t = setup(SINGLE_EDGE)
    out = evolve(inst, t, Params((beta,)))
    assert abs(out.probabilities()[0b11] - math.cos(math.sqrt(2) * beta) ** 2) < 1e-12


def test_evolve_rejects_infeasible_initial_state():
    inst, t = setup(SINGLE_EDGE)
    with pytest.raises(ValueError):
        evolve(inst, t, Params((0.3,)), basis_state(2, 0))


def test_evolve_matches_dense_pipeline():
    rng = np.random.default_rng(8)
    for graph in [gen_cycle(4), gen_star(4), gen_erdos_renyi(4, 0.5, 2)]:
        inst, t = setup(graph)
        for _ in range(5):
            betas = rng.uniform(-3, 3, 3)
            gammas = rng.uniform(0, 2 * math.pi, 2)
            out = evolve(inst, t, Params(tuple(betas), tuple(gammas)))
            ref = dense_evolve(4, graph.edges, betas, gammas)
            assert np.linalg.norm(out.amplitudes - ref) < 1e-9


def random_params(rng, p):
    return Params(tuple(rng.uniform(-4, 4, p)), tuple(rng.uniform(0, 2 * math.pi, p - 1)))


def test_evolution_invariants_small_graphs():
    rng = np.random.default_rng(1)
    for n in range(1, 5):
        for graph in all_graphs(n):
            inst, t = setup(graph)
            for p in (1, 2, 3):
                params = random_params(rng, p)
                out = evolve(inst, t, params)
                assert abs(out.norm() - 1) < 1e-8
                assert np.abs(out.amplitudes[~t.validity]).max(initial=0) <= 1e-10
                other = evolve(inst, t, params, variant="equal_validity")
                assert np.linalg.norm(out.amplitudes - other.amplitudes) < 1e-10


def test_gamma_periodicity_with_unreduced_angles():
    inst, t = setup(gen_cycle(5))
    rng = np.random.default_rng(2)
    mixer = ConstrainedMixer(t.validity)
    c = t.measure.astype(float)
    for _ in range(5):
        b1, b2 = rng.uniform(0, 3, 2)
        g = rng.uniform(0, 2 * math.pi)
        runs = []
        for gamma in (g, g + 2 * math.pi, g - 4 * math.pi):
            vec = expm_apply(basis_state(5, 31).amplitudes, b1, mixer)
            runs.append(expm_apply(vec * np.exp(-1j * gamma * c), b2, mixer))
        assert np.linalg.norm(runs[0] - runs[1]) < 1e-10
        assert np.linalg.norm(runs[0] - runs[2]) < 1e-10


def test_engines_agree():
    rng = np.random.default_rng(4)
    for graph in [gen_cycle(7), gen_star(6), gen_erdos_renyi(8, 0.5, 1)]:
        inst, t = setup(graph)
        sub = SubspaceEvolver(inst, t)
        kry = KrylovEvolver(inst, t)
        for p in (1, 2, 3):
            params = random_params(rng, p)
            a = sub.amplitudes(params)
            b = kry.amplitudes(params)
            assert np.linalg.norm(a - b) < 1e-9
            assert np.linalg.norm(sub.state(params).amplitudes - kry.state(params).amplitudes) < 1e-9


def test_subspace_engine_with_custom_initial_state():
    inst, t = setup(gen_cycle(5))
    start = basis_state(5, 0b10101)
    params = Params((0.7, 1.2), (2.2,))
    a = SubspaceEvolver(inst, t, start).state(params)
    b = evolve(inst, t, params, start)
    assert np.linalg.norm(a.amplitudes - b.amplitudes) < 1e-9


def test_make_evolver_auto_choice():
    inst, t = setup(gen_cycle(6))
    assert isinstance(make_evolver(inst, t), SubspaceEvolver)
    assert isinstance(make_evolver(inst, t, subspace_limit=3), KrylovEvolver)
    with pytest.raises(ValueError):
        make_evolver(inst, t, "gpu")


def test_itertools_all_graphs_counts():
    assert sum(1 for _ in all_graphs(4)) == 2 ** len(list(itertools.combinations(range(4), 2)))
