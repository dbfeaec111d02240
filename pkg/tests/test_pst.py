import numpy as np
import pytest

from _graphgen import random_properly_colored_graph, random_transfer_case
from hqw import linalg
from hqw.graphs import Edge, LabeledGraph, subgraph_adjacency, validate_proper_coloring
from hqw.pst import (STEP_TIME, build_operators, demo_tree, make_plan, run_pst,
                     segment_line_transfer, verify_pst)


def three_vertex_path():
    return LabeledGraph(3, (Edge(0, 1, "0"), Edge(1, 2, "1")), ("0", "1"))


def test_plan_defaults_to_bfs_path():
    plan = make_plan(three_vertex_path(), 0, 2)
    assert plan.path == (0, 1, 2)
    assert plan.path_labels == ("0", "1")
    assert plan.primed_labels == ("0'", "1'")
    assert plan.coin_dim == 4


def test_plan_validations():
    bad_color = LabeledGraph(3, (Edge(0, 1, "0"), Edge(1, 2, "0")), ("0",))
    with pytest.raises(ValueError, match="not proper"):
        make_plan(bad_color, 0, 2)
    heavy = LabeledGraph(2, (Edge(0, 1, "0", 2.0),), ("0",))
    with pytest.raises(ValueError, match="unit edge weights"):
        make_plan(heavy, 0, 1)
    with pytest.raises(ValueError, match="distinct"):
        make_plan(three_vertex_path(), 1, 1)
    split = LabeledGraph(4, (Edge(0, 1, "0"), Edge(2, 3, "0")), ("0", "1"))
    with pytest.raises(ValueError, match="not connected"):
        make_plan(split, 0, 3)
    with pytest.raises(ValueError, match="does not run"):
        make_plan(three_vertex_path(), 0, 2, path=[1, 2])
    with pytest.raises(ValueError, match="backtrack"):
        make_plan(three_vertex_path(), 0, 1, path=[0, 1, 0, 1])


def test_operators_are_unitary_permutations():
    plan = make_plan(three_vertex_path(), 0, 2)
    ops = build_operators(plan)
    stack = [ops.P, *ops.C, *ops.D, *ops.E]
    for U in stack:
        assert np.abs(U.conj().T @ U - np.eye(plan.coin_dim)).max() <= 1e-12
    np.testing.assert_allclose(ops.P @ ops.P, np.eye(plan.coin_dim), atol=1e-14)


def test_operator_actions_on_basis():
    plan = make_plan(three_vertex_path(), 0, 2)
    N = plan.num_colors
    ops = build_operators(plan)
    # C_1 swaps the first two path colors and fixes every primed label
    i1 = plan.labels.index(plan.path_labels[0])
    i2 = plan.labels.index(plan.path_labels[1])
    e = np.eye(plan.coin_dim)
    np.testing.assert_allclose(ops.C[0] @ e[i1], e[i2])
    for l in range(N):
        np.testing.assert_allclose(ops.C[0] @ e[N + l], e[N + l])
    # D_1 maps the first primed label onto the first path color
    np.testing.assert_allclose(ops.D[0] @ e[N + 0], e[i1])


def test_transfer_single_component_and_phase():
    plan = make_plan(three_vertex_path(), 0, 2)
    final, transcript = run_pst(plan, np.array([1.0, 0.0]))
    assert transcript.fidelity > 1 - 1e-9
    l, measured, expected = transcript.phase_checks[0]
    assert l == 0
    assert abs(expected - (1j**2) * 1.0) < 1e-12  # two path edges: phase i^2 = -1
    assert abs(measured - expected) < 1e-9
    # final state is (global i^M) alpha on the unprimed sector at the target
    mat = final.reshape(plan.coin_dim, 3)
    assert abs(abs(mat[0, 2]) - 1.0) < 1e-9


def test_intermediate_state_supports():
    # after iteration 1, component 1 is parked at b, the rest still wait at a
    g = demo_tree()
    plan = make_plan(g, 0, 14)
    N = plan.num_colors
    alpha = np.array([0.6, 0.48, 0.64], dtype=complex)
    alpha /= np.linalg.norm(alpha)
    _, transcript = run_pst(plan, alpha)
    stage = next(s for s in transcript.stages if s.name == "iter1.E")
    mat = stage.state.reshape(plan.coin_dim, g.n)
    assert abs(abs(mat[N + 0, plan.target]) - abs(alpha[0])) < 1e-9
    for i in (1, 2):
        assert abs(abs(mat[N + i, plan.source]) - abs(alpha[i])) < 1e-9
    # nothing lives in unprimed sectors between iterations
    assert np.abs(mat[:N]).max() < 1e-9


def test_parked_components_are_frozen_during_walks():
    plan = make_plan(demo_tree(), 0, 14)
    N = plan.num_colors
    alpha = np.ones(3, dtype=complex) / np.sqrt(3)
    _, transcript = run_pst(plan, alpha)
    for stage in transcript.stages:
        if ".C" in stage.name or ".D" in stage.name:
            mat = stage.state.reshape(plan.coin_dim, plan.graph.n)
            active = np.abs(mat[:N]) ** 2
            # exactly one unprimed sector carries amplitude during a walk phase
            sector_mass = active.sum(axis=1)
            assert (sector_mass > 1e-12).sum() == 1


def test_uniform_alpha_on_tree():
    plan = make_plan(demo_tree(), 0, 14)
    alpha = np.ones(3, dtype=complex) / np.sqrt(3)
    final, transcript = run_pst(plan, alpha)
    assert transcript.fidelity > 1 - 1e-9
    assert verify_pst(plan, final, alpha) > 1 - 1e-9
    # wrong target vertex scores zero
    assert verify_pst(plan, final, alpha, target=1) < 1e-9


def test_adjacent_endpoints_single_edge():
    g = LabeledGraph(2, (Edge(0, 1, "0"),), ("0", "1"))
    plan = make_plan(g, 0, 1)
    final, transcript = run_pst(plan, np.array([0.6, 0.8], dtype=complex))
    assert transcript.fidelity > 1 - 1e-9
    assert abs(transcript.expected_phase - 1j) < 1e-12  # single edge: phase i


def test_single_color_graph_transfer():
    # minimal color set: one color, doubled coin space of dimension 2
    g = LabeledGraph(2, (Edge(0, 1, "0"),), ("0",))
    plan = make_plan(g, 0, 1)
    assert plan.coin_dim == 2
    _, transcript = run_pst(plan, np.array([1.0], dtype=complex))
    assert transcript.fidelity > 1 - 1e-9


def test_run_pst_rejects_bad_alpha():
    plan = make_plan(three_vertex_path(), 0, 2)
    with pytest.raises(ValueError, match="not normalized"):
        run_pst(plan, np.array([1.0, 1.0]))
    with pytest.raises(ValueError, match="coin amplitudes"):
        run_pst(plan, np.array([1.0]))


def test_randomized_transfer_cases():
    rng = np.random.default_rng(42)
    for _ in range(10):
        g = random_properly_colored_graph(rng)
        a, b, path, alpha = random_transfer_case(rng, g)
        plan = make_plan(g, a, b, path=path)
        final, transcript = run_pst(plan, alpha)
        assert transcript.fidelity >= 1 - 1e-9
        M = plan.num_edges
        for l, measured, expected in transcript.phase_checks:
            assert abs(measured - expected) < 1e-9
            assert abs(expected - (1j**M) * alpha[l]) < 1e-12
        # coin amplitude magnitudes survive the transfer
        mat = final.reshape(plan.coin_dim, g.n)
        for i in range(plan.num_colors):
            assert abs(abs(mat[i, b]) - abs(alpha[i])) < 1e-9


def test_run_pst_matches_literal_dense_composition():
    # independent route: build the doubled-coin Hamiltonian and every protocol
    # operator as dense matrices and multiply them out in the stated order
    rng = np.random.default_rng(6)
    g = random_properly_colored_graph(rng, max_n=7, max_colors=3)
    a, b, path, alpha = random_transfer_case(rng, g, max_path_edges=4)
    plan = make_plan(g, a, b, path=path)
    ops = build_operators(plan)
    N, n, M = plan.num_colors, g.n, plan.num_edges

    H = np.zeros((2 * N * n, 2 * N * n), dtype=complex)
    for i, lab in enumerate(plan.labels):
        H[i * n:(i + 1) * n, i * n:(i + 1) * n] = subgraph_adjacency(g, lab)
    w, V = linalg.hermitian_eig(H)
    U = (V * np.exp(-1j * w * STEP_TIME)) @ V.conj().T

    def lift(op):
        return np.kron(op, np.eye(n))

    total = lift(ops.P)
    for l in range(N):
        total = U @ lift(ops.D[l]) @ total
        for k in range(M - 1):
            total = U @ lift(ops.C[k]) @ total
        total = lift(ops.E[l]) @ total
    total = lift(ops.P) @ total

    psi0 = np.zeros(2 * N * n, dtype=complex)
    for i in range(N):
        psi0[i * n + a] = alpha[i]
    final, _ = run_pst(plan, alpha)
    np.testing.assert_allclose(final, total @ psi0, atol=1e-10)


def test_norm_preserved_at_every_stage():
    rng = np.random.default_rng(1)
    g = random_properly_colored_graph(rng, max_n=9)
    a, b, path, alpha = random_transfer_case(rng, g)
    _, transcript = run_pst(make_plan(g, a, b, path=path), alpha)
    for stage in transcript.stages:
        assert abs(np.linalg.norm(stage.state) - 1.0) < 1e-10


def test_transcript_json_dump():
    plan = make_plan(three_vertex_path(), 0, 2)
    _, transcript = run_pst(plan, np.array([0.0, 1.0], dtype=complex))
    doc = transcript.to_json_dict()
    assert doc["fidelity"] > 1 - 1e-9
    assert doc["stages"][0]["name"] == "P"
    first = doc["stages"][0]["state"]
    assert first == {"1'|0": [1.0, 0.0]}
    assert len(doc["phase_checks"]) == 2


# ---------------------------------------------------------------------------
# Segment-line switching demo


def test_segment_transfer_two_vertices():
    res = segment_line_transfer(2)
    assert abs(res.final_probability - 1.0) < 1e-12
    # one step: e^{-iX pi/2}|1> = -i|2> in the blue sector
    amp = res.states[-1].reshape(2, 2)[1, 1]
    assert abs(amp + 1j) < 1e-12


def test_segment_transfer_reaches_target():
    for M in (3, 5, 8):
        res = segment_line_transfer(M)
        assert abs(res.final_probability - 1.0) < 1e-9
        assert res.target_vertex == M - 1


def test_segment_coin_record_alternates():
    res = segment_line_transfer(6)
    assert res.coin_record == ("b", "r", "b", "r", "b")


def test_segment_transfer_rejects_short_line():
    with pytest.raises(ValueError, match=">= 2"):
        segment_line_transfer(1)


def test_demo_tree_shape():
    g = demo_tree()
    assert g.n == 15
    assert validate_proper_coloring(g).proper
    assert len(g.labels) == 3


def test_step_time_is_three_quarter_period():
    assert abs(STEP_TIME - 3 * np.pi / 2) < 1e-15
