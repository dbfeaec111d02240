import numpy as np
import pytest

from _graphgen import random_regular_adjacency, random_regular_sequence
from hqw import linalg
from hqw.graphs import complete, cubic8, cycle, star
from hqw.matmul import (MultiRegisterState, classical_product, classical_triangle_count,
                        classical_triangles_at_vertex, generalized_cnot, initial_state,
                        product_entry, product_matrix, product_trace,
                        projection_probability, regular_sequence, run_sequence,
                        sample_projector, stage_walk, triangle_count,
                        triangles_at_vertex)

C4 = np.array([[0, 1, 0, 1],
               [1, 0, 1, 0],
               [0, 1, 0, 1],
               [1, 0, 1, 0]], dtype=int)
K3 = np.array([[0, 1, 1],
               [1, 0, 1],
               [1, 1, 0]], dtype=int)


def vertex_star_matrix(A, k):
    S = np.zeros(A.shape, dtype=complex)
    S[:, k] = A[:, k]
    S[k, :] = A[k, :]
    return S


# ---------------------------------------------------------------------------
# Sequence validation


def test_regular_sequence_from_graphs_and_arrays():
    ring8 = np.zeros((8, 8), dtype=int)
    for i in range(8):
        ring8[i, (i + 1) % 8] = ring8[(i + 1) % 8, i] = 1
    seq = regular_sequence([cubic8(), ring8])
    assert seq.degrees == (3, 2)
    assert seq.n == 8
    assert seq.degree_product == 6


def test_regular_sequence_rejections():
    with pytest.raises(ValueError, match="not regular"):
        regular_sequence([star(4)])
    with pytest.raises(ValueError, match="disagree"):
        regular_sequence([C4, K3])
    with pytest.raises(ValueError, match="zero diagonal"):
        regular_sequence([np.eye(4, dtype=int)])
    with pytest.raises(ValueError, match="symmetric"):
        regular_sequence([np.triu(C4)])
    with pytest.raises(ValueError, match="0 or 1"):
        regular_sequence([2 * C4])
    with pytest.raises(ValueError, match="at least one"):
        regular_sequence([])


# ---------------------------------------------------------------------------
# Stage walk against the generic evolution oracle


def test_stage_walk_column_matches_generic_evolution():
    rng = np.random.default_rng(10)
    for n, d in ((4, 2), (6, 3), (8, 3), (4, 1)):
        A = random_regular_adjacency(rng, n, d) if d > 1 else np.kron(np.eye(n // 2, dtype=int), np.array([[0, 1], [1, 0]]))
        t = np.pi / (2 * np.sqrt(d))
        for k in range(n):
            state = stage_walk(initial_state(n, 1, k), 1, A, d)
            got = np.zeros(n, dtype=complex)
            for tup, amp in state.amps.items():
                assert tup[0] == k
                got[tup[1]] = amp
            want = linalg.evolve(vertex_star_matrix(A, k), t, np.eye(n)[k].astype(complex))
            np.testing.assert_allclose(got, want, atol=1e-10)


def test_stage_walk_smallest_cases():
    # single edge (d = 1): quarter-period swap with a -i factor
    edge = np.array([[0, 1], [1, 0]], dtype=int)
    out = stage_walk(initial_state(2, 1, 0), 1, edge, 1)
    assert set(out.amps) == {(0, 1)}
    assert abs(out.amps[(0, 1)] + 1j) < 1e-12
    # 4-cycle (d = 2), coin 0: |0> -> -i(|1> + |3>)/sqrt(2)
    out = stage_walk(initial_state(4, 1, 0), 1, C4, 2)
    want = {(0, 1): -1j / np.sqrt(2), (0, 3): -1j / np.sqrt(2)}
    assert set(out.amps) == set(want)
    for tup, amp in want.items():
        assert abs(out.amps[tup] - amp) < 1e-12


def test_stage_walk_general_position_matches_generic_evolution():
    # the off-coin branch of the closed form is the full unitary, not just the
    # column the algorithm uses
    rng = np.random.default_rng(11)
    A = random_regular_adjacency(rng, 6, 3)
    d = 3
    t = np.pi / (2 * np.sqrt(d))
    k = 2
    for v in range(6):
        state = MultiRegisterState(n=6, num_registers=2, amps={(k, v): 1.0 + 0j})
        out = stage_walk(state, 1, A, d)
        got = np.zeros(6, dtype=complex)
        for tup, amp in out.amps.items():
            got[tup[1]] = amp
        want = linalg.evolve(vertex_star_matrix(A, k), t, np.eye(6)[v].astype(complex))
        np.testing.assert_allclose(got, want, atol=1e-10)
    # unitarity on a superposed input
    sup = MultiRegisterState(n=6, num_registers=2,
                             amps={(k, v): 1 / np.sqrt(6) for v in range(6)})
    assert abs(stage_walk(sup, 1, A, d).norm() - 1.0) < 1e-12


def test_stage_walk_register_bounds():
    state = initial_state(4, 2, 0)
    with pytest.raises(ValueError, match="stage register"):
        stage_walk(state, 3, C4, 2)


# ---------------------------------------------------------------------------
# Generalized CNOT


def test_generalized_cnot_examples():
    st = MultiRegisterState(n=8, num_registers=4, amps={(0, 2, 3, 0): 1.0})
    out = generalized_cnot(st, control=2, target=3)
    assert out.amps == {(0, 2, 5, 0): 1.0}

    st = MultiRegisterState(n=8, num_registers=2, amps={(0, 5): 1.0})
    out = generalized_cnot(st, control=1, target=2)
    assert out.amps == {(0, 5): 1.0}  # control value 0 acts as identity

    st = MultiRegisterState(n=8, num_registers=2, amps={(7, 7): 1.0})
    out = generalized_cnot(st, control=1, target=2)
    assert out.amps == {(7, 6): 1.0}  # 14 mod 8


def test_generalized_cnot_rejections():
    st = initial_state(4, 2, 1)
    with pytest.raises(ValueError, match="differ"):
        generalized_cnot(st, 2, 2)
    with pytest.raises(ValueError, match="outside"):
        generalized_cnot(st, 0, 2)


# ---------------------------------------------------------------------------
# Product entries against classical oracles


def test_c4_squared_entry():
    want = C4 @ C4  # classical oracle: (A^2)_00 = 2 for the 4-cycle
    assert want[0, 0] == 2
    seq = regular_sequence([C4, C4])
    est = product_entry(seq, 0, 0)
    assert abs(est.probability - 0.5) < 1e-12
    assert abs(est.value - 2.0) < 1e-9
    assert est.rounded == 2


def test_k3_cubed_entry():
    want = K3 @ K3 @ K3
    assert want[0, 0] == 2
    seq = regular_sequence([K3, K3, K3])
    est = product_entry(seq, 0, 0)
    assert abs(est.probability - 0.25) < 1e-12
    assert abs(est.value - 2.0) < 1e-9


def test_benchmark_graph_anchor():
    seq = regular_sequence([cubic8()] * 3)
    est = product_entry(seq, 0, 0)
    assert abs(est.probability - 2.0 / 27.0) < 1e-12
    assert est.rounded == 2


def test_exact_values_are_near_integers():
    rng = np.random.default_rng(3)
    seq = random_regular_sequence(rng)
    C = product_matrix(seq)
    assert np.abs(C - np.rint(C)).max() < 1e-6


def test_product_matrix_matches_classical():
    seq = regular_sequence([C4, C4])
    want = np.array([[2, 0, 2, 0], [0, 2, 0, 2], [2, 0, 2, 0], [0, 2, 0, 2]])
    np.testing.assert_allclose(product_matrix(seq), want, atol=1e-9)

    seq1 = regular_sequence([cubic8()])
    np.testing.assert_allclose(product_matrix(seq1), classical_product(seq1), atol=1e-9)

    rng = np.random.default_rng(5)
    A = random_regular_adjacency(rng, 8, 3)
    B = random_regular_adjacency(rng, 8, 3)
    seq2 = regular_sequence([A, B])
    np.testing.assert_allclose(product_matrix(seq2), B @ A, atol=1e-9)
    np.testing.assert_allclose(classical_product(seq2), B @ A)


def test_factor_order_is_right_to_left():
    rng = np.random.default_rng(9)
    A = random_regular_adjacency(rng, 6, 2)
    B = random_regular_adjacency(rng, 6, 3)
    seq = regular_sequence([A, B])  # C = B @ A, not A @ B
    np.testing.assert_allclose(product_matrix(seq), B @ A, atol=1e-9)


def test_product_trace_cases():
    assert abs(product_trace(regular_sequence([K3] * 3)) - 6.0) < 1e-9
    assert abs(product_trace(regular_sequence([C4] * 3))) < 1e-9  # bipartite: no odd closed walks
    # handshake identity: tr(A^2) = n * d
    for g, n, d in ((cycle(6), 6, 2), (cubic8(), 8, 3)):
        assert abs(product_trace(regular_sequence([g, g])) - n * d) < 1e-9


def test_column_sums_equal_degree_product():
    rng = np.random.default_rng(7)
    for _ in range(5):
        seq = random_regular_sequence(rng)
        C = product_matrix(seq)
        np.testing.assert_allclose(C.sum(axis=0), np.full(seq.n, seq.degree_product), atol=1e-9)


def test_run_sequence_matches_dense_statevector():
    # independent route: simulate the full n^(K+1)-dimensional statevector with
    # dense conditional-walk and modular-add permutation matrices
    rng = np.random.default_rng(21)
    n, K = 4, 3
    mats = [random_regular_adjacency(rng, n, d) for d in (2, 1, 2)]
    seq = regular_sequence(mats)
    dim = n ** (K + 1)

    def dense_walk(A, d, reg):
        t = np.pi / (2 * np.sqrt(d))
        W = np.zeros((dim, dim), dtype=complex)
        for k in range(n):
            S = vertex_star_matrix(A, k)
            w, V = np.linalg.eigh(S)
            Uk = (V * np.exp(-1j * w * t)) @ V.conj().T
            # project register `reg` (1-based) on k, act with Uk on register K+1
            mats_ = [np.eye(n, dtype=complex)] * (K + 1)
            mats_[reg - 1] = np.zeros((n, n), dtype=complex)
            mats_[reg - 1][k, k] = 1.0
            mats_[K] = Uk
            block = mats_[0]
            for m in mats_[1:]:
                block = np.kron(block, m)
            W += block
        return W

    def dense_gc(control, target):
        P = np.zeros((dim, dim), dtype=complex)
        for idx in range(dim):
            digits = []
            rest = idx
            for _ in range(K + 1):
                digits.append(rest % n)
                rest //= n
            digits = digits[::-1]  # register 1 is the most significant
            digits[target - 1] = (digits[target - 1] + digits[control - 1]) % n
            out = 0
            for dgt in digits:
                out = out * n + dgt
            P[out, idx] = 1.0
        return P

    j = 2
    psi = np.zeros(dim, dtype=complex)
    init = [j] + [0] * (K - 1) + [j]
    idx0 = 0
    for dgt in init:
        idx0 = idx0 * n + dgt
    psi[idx0] = 1.0
    for l in range(1, K + 1):
        psi = dense_walk(mats[l - 1], seq.degrees[l - 1], l) @ psi
        if l < K:
            psi = dense_gc(K + 1, l + 1) @ psi

    state = run_sequence(seq, j)
    sparse = np.zeros(dim, dtype=complex)
    for tup, amp in state.amps.items():
        idx = 0
        for dgt in tup:
            idx = idx * n + dgt
        sparse[idx] = amp
    np.testing.assert_allclose(sparse, psi, atol=1e-10)


def test_projection_probabilities_count_paths():
    # |Pi_ij Psi_f|^2 * D equals the number of 0/1 paths j -> i, enumerated here
    seq = regular_sequence([cubic8()] * 3)
    A = seq.mats[0]
    state = run_sequence(seq, 0)
    n = seq.n
    for i in range(n):
        paths = sum(int(A[i, p2] and A[p2, p1] and A[p1, 0])
                    for p1 in range(n) for p2 in range(n))
        got = seq.degree_product * projection_probability(state, i, 0)
        assert abs(got - paths) < 1e-9


def test_entry_validation():
    seq = regular_sequence([C4])
    with pytest.raises(ValueError, match="outside"):
        product_entry(seq, 0, 7)
    with pytest.raises(ValueError, match="mode"):
        product_entry(seq, 0, 0, mode="guess")
    with pytest.raises(ValueError, match="seed"):
        product_entry(seq, 0, 0, mode="shots", shots=100)
    with pytest.raises(ValueError, match="shot count"):
        product_entry(seq, 0, 0, mode="shots", shots=0, seed=1)


# ---------------------------------------------------------------------------
# Triangles


def test_triangle_counts():
    assert triangles_at_vertex(K3, 0) == 1
    assert triangle_count(K3) == 1
    assert triangle_count(C4) == 0
    assert triangles_at_vertex(C4, 2) == 0
    # K4 via the enumeration oracle
    A4 = np.asarray(np.ones((4, 4)) - np.eye(4), dtype=int)
    assert classical_triangle_count(A4) == 4
    assert triangle_count(complete(4)) == 4
    assert triangles_at_vertex(cubic8(), 0) == 1 == classical_triangles_at_vertex(cubic8(), 0)
    assert triangle_count(cubic8()) == classical_triangle_count(cubic8()) == 1


def test_triangles_reject_irregular():
    with pytest.raises(ValueError, match="not regular"):
        triangle_count(star(5))


# ---------------------------------------------------------------------------
# Shot sampling


def test_sampling_degenerate_probabilities():
    seq = regular_sequence([C4, C4])
    state = run_sequence(seq, 0)
    # p = 0.5 for (0,0); craft p = 0 and p = 1 cases directly
    hits, est = sample_projector(state, 1, 0, shots=500, seed=4)  # (A^2)_10 = 0
    assert hits == 0 and est == 0.0
    point = MultiRegisterState(n=4, num_registers=3, amps={(2, 1, 3): 1.0})
    hits, est = sample_projector(point, 3, 2, shots=250, seed=4)
    assert hits == 250 and est == 1.0


def test_sampling_is_reproducible():
    seq = regular_sequence([cubic8()] * 3)
    state = run_sequence(seq, 0)
    a = sample_projector(state, 0, 0, shots=20000, seed=123)
    b = sample_projector(state, 0, 0, shots=20000, seed=123)
    assert a == b
    c = sample_projector(state, 0, 0, shots=20000, seed=124)
    assert a != c


def test_shots_estimator_unbiased():
    seq = regular_sequence([cubic8()] * 3)
    state = run_sequence(seq, 0)
    p = projection_probability(state, 0, 0)
    shots = 400
    runs = 200
    estimates = [sample_projector(state, 0, 0, shots=shots, seed=s)[1] for s in range(runs)]
    stderr = np.sqrt(p * (1 - p) / shots) / np.sqrt(runs)
    assert abs(np.mean(estimates) - p) < 4 * stderr


def test_shots_mode_estimate_fields():
    seq = regular_sequence([cubic8()] * 3)
    est = product_entry(seq, 0, 0, mode="shots", shots=20000, seed=7)
    assert est.shots == 20000 and est.seed == 7
    assert est.hits is not None
    assert abs(est.probability - est.hits / 20000) < 1e-15
    assert abs(est.value - 27 * est.probability) < 1e-12
    assert est.ci_radius is not None
    assert est.meets_half_integer == (est.ci_radius < 0.5)


def test_product_matrix_shots_deterministic_per_seed():
    seq = regular_sequence([C4, C4])
    a = product_matrix(seq, mode="shots", shots=1000, seed=5)
    b = product_matrix(seq, mode="shots", shots=1000, seed=5)
    np.testing.assert_array_equal(a, b)
