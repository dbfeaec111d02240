"""Products of regular-graph adjacency matrices via multi-register walks.

To read off C_ij = (A^(K) ... A^(1))_ij, the state |j,0,...,0,j> over K+1
base-n registers is pushed through one walk stage per factor. Stage l walks
register K+1 for time pi/(2 sqrt(d_l)) conditioned on register l, mapping a
vertex onto the uniform superposition of its neighbors (times -i), and a
generalized CNOT then copies the new vertex into register l+1. Projecting
the final state on register 1 = j and register K+1 = i leaves squared
amplitude C_ij / (d_K ... d_1), because every surviving path contributes the
0/1 product of its adjacency entries.

Exact projection is the default readout; a seeded binomial sampler stands in
for hardware-style amplitude estimation. Classical oracles for products and
triangle counts live here too, so every quantum result can be cross-checked.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .graphs import LabeledGraph, adjacency

_PRUNE_ATOL = 1e-15


def _as_adjacency(g) -> np.ndarray:
    """0/1 integer adjacency from a LabeledGraph or array-like."""
    A = adjacency(g).real if isinstance(g, LabeledGraph) else np.asarray(g, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {A.shape}")
    if np.abs(A - np.rint(A)).max(initial=0.0) > 1e-12 or A.min(initial=0.0) < 0 or A.max(initial=0.0) > 1:
        raise ValueError("adjacency entries must be 0 or 1")
    A = np.rint(A).astype(int)
    if (np.diag(A) != 0).any():
        raise ValueError("adjacency must have a zero diagonal")
    if (A != A.T).any():
        raise ValueError("adjacency must be symmetric")
    return A


def _regular_degree(A: np.ndarray) -> int:
    row_sums = A.sum(axis=1)
    if len(set(row_sums.tolist())) != 1:
        listing = ", ".join(f"{v}:{d}" for v, d in enumerate(row_sums))
        raise ValueError(f"graph is not regular; per-vertex degrees: {listing}")
    d = int(row_sums[0])
    if d < 1:
        raise ValueError("regular degree must be at least 1")
    return d


@dataclass(frozen=True)
class RegularGraphSequence:
    """Ordered factors A^(1)..A^(K), all d_l-regular on a common vertex set."""

    mats: tuple[np.ndarray, ...]
    degrees: tuple[int, ...]
    n: int

    @property
    def K(self) -> int:
        return len(self.mats)

    @property
    def degree_product(self) -> int:
        return int(np.prod(self.degrees))


def regular_sequence(factors) -> RegularGraphSequence:
    """Validate and package factor graphs (LabeledGraphs or 0/1 arrays)."""
    mats = tuple(_as_adjacency(g) for g in factors)
    if not mats:
        raise ValueError("need at least one factor graph")
    n = mats[0].shape[0]
    if any(A.shape[0] != n for A in mats):
        raise ValueError(f"factor graphs disagree on vertex count: {[A.shape[0] for A in mats]}")
    return RegularGraphSequence(mats=mats, degrees=tuple(_regular_degree(A) for A in mats), n=n)


# ---------------------------------------------------------------------------
# Multi-register states


@dataclass
class MultiRegisterState:
    """Sparse amplitudes over tuples of (num_registers) base-n register values."""

    n: int
    num_registers: int
    amps: dict

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amps.values())))

    def copy(self) -> "MultiRegisterState":
        return MultiRegisterState(self.n, self.num_registers, dict(self.amps))


def initial_state(n: int, K: int, j: int) -> MultiRegisterState:
    """|j, 0, ..., 0, j> over K+1 registers."""
    if not 0 <= j < n:
        raise ValueError(f"vertex index {j} outside 0..{n - 1}")
    tup = (j,) + (0,) * (K - 1) + (j,)
    return MultiRegisterState(n=n, num_registers=K + 1, amps={tup: 1.0 + 0j})


def stage_walk(state: MultiRegisterState, l: int, A, d: int) -> MultiRegisterState:
    """Walk the last register for time pi/(2 sqrt(d)), conditioned on register l.

    For coin value k the star-of-k block has the two nonzero eigenvalues
    +-sqrt(d), so the quarter-period evolution has a closed form: the vertex
    |k> itself maps to -i/sqrt(d) times the sum of its neighbors, and any
    other vertex v picks up -i A_vk/sqrt(d) |k> minus A_vk/d times the
    neighbor sum. The algorithm only ever hits the first branch.
    """
    A = _as_adjacency(A)
    if A.shape[0] != state.n:
        raise ValueError(f"adjacency of size {A.shape[0]} does not match register base {state.n}")
    if not 1 <= l <= state.num_registers - 1:
        raise ValueError(f"stage register {l} outside 1..{state.num_registers - 1}")
    neighbors = [np.nonzero(A[:, k])[0] for k in range(state.n)]
    last = state.num_registers - 1
    scale = -1j / np.sqrt(d)
    out: dict = defaultdict(complex)
    for tup, amp in state.amps.items():
        k = tup[l - 1]
        v = tup[last]
        if v == k:
            for p in neighbors[k]:
                out[tup[:last] + (int(p),)] += amp * scale
        elif A[v, k] == 0:
            out[tup] += amp
        else:
            out[tup] += amp * (1.0 - 1.0 / d)
            out[tup[:last] + (k,)] += amp * scale
            for p in neighbors[k]:
                if p != v:
                    out[tup[:last] + (int(p),)] += amp * (-1.0 / d)
    amps = {tup: a for tup, a in out.items() if abs(a) > _PRUNE_ATOL}
    return MultiRegisterState(n=state.n, num_registers=state.num_registers, amps=amps)


def generalized_cnot(state: MultiRegisterState, control: int, target: int) -> MultiRegisterState:
    """Map the target register value j to (j + i) mod n with i the control value."""
    R = state.num_registers
    for name, r in (("control", control), ("target", target)):
        if not 1 <= r <= R:
            raise ValueError(f"{name} register {r} outside 1..{R}")
    if control == target:
        raise ValueError("control and target registers must differ")
    amps = {}
    for tup, amp in state.amps.items():
        new = list(tup)
        new[target - 1] = (tup[target - 1] + tup[control - 1]) % state.n
        amps[tuple(new)] = amp
    return MultiRegisterState(n=state.n, num_registers=R, amps=amps)


def run_sequence(seq: RegularGraphSequence, j: int) -> MultiRegisterState:
    """Final state for column j: stages 1..K, with the copy step after each
    stage except the last (register K+1 already holds the stage-K vertex)."""
    state = initial_state(seq.n, seq.K, j)
    for l in range(1, seq.K + 1):
        state = stage_walk(state, l, seq.mats[l - 1], seq.degrees[l - 1])
        if l < seq.K:
            state = generalized_cnot(state, control=seq.K + 1, target=l + 1)
    return state


def projection_probability(state: MultiRegisterState, i: int, j: int) -> float:
    """Squared norm of the projection onto register 1 = j, last register = i."""
    last = state.num_registers - 1
    return float(sum(abs(a) ** 2 for tup, a in state.amps.items()
                     if tup[0] == j and tup[last] == i))


def sample_projector(state: MultiRegisterState, i: int, j: int,
                     shots: int, seed) -> tuple[int, float]:
    """Seeded binomial draw of the projection event; returns (hits, estimate)."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p = projection_probability(state, i, j)
    rng = np.random.default_rng(seed)
    hits = int(rng.binomial(shots, p))
    return hits, hits / shots


# ---------------------------------------------------------------------------
# Product entries, traces, triangles


@dataclass(frozen=True)
class ProductEstimate:
    i: int
    j: int
    value: float
    probability: float
    mode: str
    shots: int | None = None
    seed: object = None
    hits: int | None = None
    ci_radius: float | None = None
    meets_half_integer: bool = True

    @property
    def rounded(self) -> int:
        return int(round(self.value))


def _check_mode(mode: str, shots, seed):
    if mode not in ("exact", "shots"):
        raise ValueError(f"mode must be 'exact' or 'shots', got {mode!r}")
    if mode == "shots":
        if shots is None or shots < 1:
            raise ValueError("shots mode needs a positive shot count")
        if seed is None:
            raise ValueError("shots mode needs a seed for reproducibility")


def product_entry(seq: RegularGraphSequence, i: int, j: int, mode: str = "exact",
                  shots: int | None = None, seed=None) -> ProductEstimate:
    """Estimate C_ij = (A^(K)...A^(1))_ij = d_K...d_1 * P(register projection)."""
    if not (0 <= i < seq.n and 0 <= j < seq.n):
        raise ValueError(f"entry ({i},{j}) outside 0..{seq.n - 1}")
    _check_mode(mode, shots, seed)
    state = run_sequence(seq, j)
    D = seq.degree_product
    if mode == "exact":
        p = projection_probability(state, i, j)
        return ProductEstimate(i=i, j=j, value=D * p, probability=p, mode=mode)
    hits, est = sample_projector(state, i, j, shots, seed)
    radius = 3.0 * D * np.sqrt(max(est * (1.0 - est), 0.0) / shots)
    return ProductEstimate(i=i, j=j, value=D * est, probability=est, mode=mode,
                           shots=shots, seed=seed, hits=hits, ci_radius=radius,
                           meets_half_integer=bool(radius < 0.5))


def product_matrix(seq: RegularGraphSequence, mode: str = "exact",
                   shots: int | None = None, seed=None) -> np.ndarray:
    """All entries; one walk per column, shared across the column's projections."""
    _check_mode(mode, shots, seed)
    D = seq.degree_product
    C = np.zeros((seq.n, seq.n), dtype=float)
    for j in range(seq.n):
        state = run_sequence(seq, j)
        for i in range(seq.n):
            p = projection_probability(state, i, j)
            if mode == "exact":
                C[i, j] = D * p
            else:
                rng = np.random.default_rng([seed, i, j])
                C[i, j] = D * rng.binomial(shots, p) / shots
    return C


def product_trace(seq: RegularGraphSequence, mode: str = "exact",
                  shots: int | None = None, seed=None) -> float:
    """Sum of the diagonal entries."""
    _check_mode(mode, shots, seed)
    total = 0.0
    for k in range(seq.n):
        if mode == "exact":
            total += product_entry(seq, k, k, mode="exact").value
        else:
            total += product_entry(seq, k, k, mode="shots", shots=shots, seed=[seed, k]).value
    return total


def triangles_at_vertex(g, k: int, mode: str = "exact",
                        shots: int | None = None, seed=None) -> int:
    """Triangles containing vertex k, as round((A^3)_kk) / 2."""
    A = _as_adjacency(g)
    seq = regular_sequence([A, A, A])
    est = product_entry(seq, k, k, mode=mode, shots=shots, seed=seed)
    return int(round(est.value)) // 2


def triangle_count(g, mode: str = "exact", shots: int | None = None, seed=None) -> int:
    """Total number of triangles, tr(A^3) / 6."""
    A = _as_adjacency(g)
    seq = regular_sequence([A, A, A])
    tr = product_trace(seq, mode=mode, shots=shots, seed=seed)
    return int(round(tr / 6.0))


# ---------------------------------------------------------------------------
# Classical oracles


def classical_product(seq: RegularGraphSequence) -> np.ndarray:
    """Integer matrix product A^(K) @ ... @ A^(1); the verification baseline."""
    return reduce(lambda acc, A: A @ acc, seq.mats, np.eye(seq.n, dtype=int))


def classical_triangles_at_vertex(g, k: int) -> int:
    """Enumerate neighbor pairs of k that are themselves adjacent."""
    A = _as_adjacency(g)
    nbrs = np.nonzero(A[k])[0]
    return sum(1 for x in range(len(nbrs)) for y in range(x + 1, len(nbrs))
               if A[nbrs[x], nbrs[y]])


def classical_triangle_count(g) -> int:
    """Enumerate all vertex triples; O(n^3) but independent of everything above."""
    A = _as_adjacency(g)
    n = A.shape[0]
    return sum(1 for a in range(n) for b in range(a + 1, n) for c in range(b + 1, n)
               if A[a, b] and A[b, c] and A[a, c])
