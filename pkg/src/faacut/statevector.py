"""Dense statevector backend.

Qubit j is bit j of the statevector index (little-endian), and qubit j
carries vertex j of the graph. The ZZ layer is diagonal, so it is applied
as per-basis-state phases from a precomputed integer energy table; the layer
therefore cannot depend on any edge ordering.
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph
from .schedule import LayerPlan

DEFAULT_MAX_QUBITS = 26


def _check_size(n_qubits: int, max_qubits: int) -> None:
    if n_qubits < 1:
        raise ValueError(f"need at least one qubit, got {n_qubits}")
    if n_qubits > max_qubits:
        raise ValueError(f"{n_qubits} qubits exceeds the statevector cap of {max_qubits}")


def init_plus(n_qubits: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Uniform superposition, the ground state of the pure driver term."""
    _check_size(n_qubits, max_qubits)
    dim = 1 << n_qubits
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)


def n_qubits_of(state: np.ndarray) -> int:
    n = int(np.log2(state.shape[0]) + 0.5)
    if state.ndim != 1 or (1 << n) != state.shape[0]:
        raise ValueError(f"state length {state.shape} is not a power of two")
    return n


def apply_x_layer(state: np.ndarray, theta: float) -> np.ndarray:
    """exp(-i theta X) on every qubit, in place."""
    n = n_qubits_of(state)
    c, s = np.cos(theta), np.sin(theta)
    if s == 0.0 and c == 1.0:
        return state
    for j in range(n):
        view = state.reshape(-1, 2, 1 << j)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = c * a - 1j * s * b
        view[:, 1, :] = c * b - 1j * s * a
    return state


def basis_energies(g: Graph, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Ising energy of every basis state, as an int8 table of length 2^L."""
    _check_size(g.n_vertices, max_qubits)
    if g.n_edges > 127:
        raise ValueError("energy table limited to 127 edges (int8)")
    table = np.zeros(1 << g.n_vertices, dtype=np.int8)
    for u, v in g.edges:
        blocks = table.reshape(-1, 2, 1 << (v - u - 1), 2, 1 << u)
        blocks[:, 0, :, 0, :] += 1
        blocks[:, 1, :, 1, :] += 1
        blocks[:, 0, :, 1, :] -= 1
        blocks[:, 1, :, 0, :] -= 1
    return table


def apply_zz_layer(state: np.ndarray, theta: float, energies: np.ndarray) -> np.ndarray:
    """Multiply each amplitude by exp(+i theta energy), in place."""
    if energies.shape != state.shape:
        raise ValueError("energy table does not match state size")
    n_edges = int(np.max(np.abs(energies))) if energies.size else 0
    lut = np.exp(1j * theta * np.arange(-n_edges, n_edges + 1))
    state *= lut[energies.astype(np.int16) + n_edges]
    return state


def run_plan(g: Graph, plan: LayerPlan, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Evolve |+...+> through the full schedule and return the state."""
    state = init_plus(g.n_vertices, max_qubits)
    energies = basis_energies(g, max_qubits)
    for st in plan.steps:
        apply_x_layer(state, st.x_angle)
        apply_zz_layer(state, st.zz_angle, energies)
    return state


def probabilities(state: np.ndarray) -> np.ndarray:
    p = np.abs(state) ** 2
    total = p.sum()
    if not np.isfinite(total) or total <= 0:
        raise ValueError("state has no norm")
    return p / total


def sample(state: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Measure all qubits `shots` times; returns a (shots, n_qubits) bit matrix."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    n = n_qubits_of(state)
    cdf = np.cumsum(probabilities(state))
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(shots), side="right")
    return ((idx[:, None] >> np.arange(n)[None, :]) & 1).astype(np.uint8)


def allclose_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> bool:
    """True if a and b differ by at most a global phase, within tol."""
    if a.shape != b.shape:
        return False
    k = int(np.argmax(np.abs(a)))
    if abs(a[k]) == 0 or abs(b[k]) == 0:
        return bool(np.allclose(a, b, atol=tol, rtol=0))
    phase = (b[k] / a[k]) / abs(b[k] / a[k])
    return bool(np.max(np.abs(a * phase - b)) <= tol)


def save_state(state: np.ndarray, path) -> None:
    """Write amplitudes as little-endian float64 (re, im) pairs in index order."""
    n_qubits_of(state)
    out = np.empty(2 * state.shape[0], dtype="<f8")
    out[0::2] = state.real
    out[1::2] = state.imag
    out.tofile(path)


def load_state(path) -> np.ndarray:
    raw = np.fromfile(path, dtype="<f8")
    if raw.size == 0 or raw.size % 2 != 0:
        raise ValueError(f"{path}: truncated state dump")
    state = raw[0::2] + 1j * raw[1::2]
    n_qubits_of(state)
    return state
