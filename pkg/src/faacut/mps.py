"""Matrix product state backend with a hard bond-dimension cap.

Site s holds a (chi_left, 2, chi_right) tensor; boundary bonds have size 1.
A movable orthogonality center keeps every tensor left of it left-orthogonal
and every tensor right of it right-orthogonal, so norms, truncations and
sampling stay local. Vertices (qubits) are assigned to sites through a
layout permutation; non-adjacent ZZ gates are routed by swapping the left
qubit next to the right one and swapping it back, which restores the layout
after every edge.

Truncation keeps at most max_bond singular values, always drops values
below SV_CUTOFF, rescales the kept spectrum to preserve the norm, and
reports the discarded weight (discarded squared spectrum over total).
"""

from __future__ import annotations

import ctypes
import glob
import math
import os
import time
from dataclasses import dataclass

import numpy as np
import scipy
import scipy.linalg
from scipy.linalg import lapack
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import reverse_cuthill_mckee

from .graphs import Graph
from .schedule import LayerPlan

SV_CUTOFF = 1e-14

_svd_lwork: dict[tuple[int, int], int] = {}
_qr_lwork: dict[tuple[int, int], int] = {}


def _load_jacobi_kernel():
    """Find the one-sided Jacobi SVD (zgesvj) in the LAPACK scipy links.

    scipy does not wrap the complex Jacobi driver, so bind it directly.
    Returns the raw Fortran entry point or None if unavailable.
    """
    libs_dir = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(scipy.__file__))), "scipy.libs")
    candidates = sorted(glob.glob(os.path.join(libs_dir, "*openblas*"))) + sorted(
        glob.glob(os.path.join(libs_dir, "*lapack*"))
    )
    for path in candidates:
        try:
            lib = ctypes.CDLL(path)
        except OSError:
            continue
        for sym in ("scipy_zgesvj_", "zgesvj_"):
            fn = getattr(lib, sym, None)
            if fn is not None:
                fn.restype = None
                return fn
    return None


_JACOBI_KERNEL = _load_jacobi_kernel()
_svd_driver = "jacobi" if _JACOBI_KERNEL is not None else "gesvd"


def svd_driver() -> str:
    return _svd_driver


def set_svd_driver(name: str) -> None:
    global _svd_driver
    if name not in ("jacobi", "gesvd"):
        raise ValueError(f"unknown svd driver {name!r}")
    if name == "jacobi" and _JACOBI_KERNEL is None:
        raise ValueError("jacobi driver unavailable: no zgesvj in the linked LAPACK")
    _svd_driver = name


_I32 = ctypes.c_int32
_VP = ctypes.c_void_p
_SZ = ctypes.c_size_t


def _jacobi_svd(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Economy SVD via zgesvj; singular values come back sorted descending.

    zgesvj wants m >= n, so wide inputs are factored through their conjugate
    transpose. The A buffer is overwritten with the left vectors.
    """
    m, n = a.shape
    wide = m < n
    A = np.asfortranarray(a.conj().T if wide else a)
    m, n = A.shape
    sva = np.empty(n)
    v = np.empty((n, n), dtype=np.complex128, order="F")
    lwork = max(6, m + n)
    cwork = np.empty(lwork, np.complex128)
    rwork = np.empty(lwork)
    info = _I32(0)
    _JACOBI_KERNEL(
        b"G", b"U", b"V",
        ctypes.byref(_I32(m)), ctypes.byref(_I32(n)),
        A.ctypes.data_as(_VP), ctypes.byref(_I32(m)),
        sva.ctypes.data_as(_VP), ctypes.byref(_I32(0)),
        v.ctypes.data_as(_VP), ctypes.byref(_I32(n)),
        cwork.ctypes.data_as(_VP), ctypes.byref(_I32(lwork)),
        rwork.ctypes.data_as(_VP), ctypes.byref(_I32(lwork)),
        ctypes.byref(info),
        _SZ(1), _SZ(1), _SZ(1),
    )
    if info.value != 0:
        raise RuntimeError(f"zgesvj failed with info={info.value}")
    s = sva if rwork[0] == 1.0 else sva * rwork[0]
    if wide:
        return v, s, A.conj().T
    return A, s, v.conj().T


def _svd_trunc(mat: np.ndarray, max_bond: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Truncated SVD of mat; returns (u, vh, kept s, discarded weight).

    Driver policy: one-sided Jacobi when the linked LAPACK provides it (the
    most accurate dense SVD, with dependable cubic cost in the bond
    dimension), otherwise gesvd; gesdd only as a last-resort rescue. The
    kept spectrum is rescaled to preserve the norm.
    """
    u = None
    if _svd_driver == "jacobi":
        try:
            u, s, vh = _jacobi_svd(mat)
        except RuntimeError:
            u = None
    if u is None:
        key = mat.shape
        lwork = _svd_lwork.get(key)
        if lwork is None:
            res = lapack.zgesvd_lwork(key[0], key[1], compute_uv=1, full_matrices=0)
            lwork = int(res[0].real)
            _svd_lwork[key] = lwork
        u, s, vh, info = lapack.zgesvd(mat, compute_uv=1, full_matrices=0, lwork=lwork)
        if info != 0:
            u, s, vh = scipy.linalg.svd(mat, full_matrices=False, lapack_driver="gesdd")
    sl = s.tolist()
    total = 0.0
    nnz = 0
    for x in sl:
        total += x * x
        if x > SV_CUTOFF:
            nnz += 1
    if total <= 0.0:
        raise ValueError("zero matrix in truncation")
    keep = max(1, min(nnz, max_bond))
    kept = 0.0
    for x in sl[:keep]:
        kept += x * x
    discarded = max(0.0, 1.0 - kept / total)
    sk = np.array(sl[:keep]) * math.sqrt(total / kept)
    return u[:, :keep], vh[:keep], sk, discarded


def _qr_reduced(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Economy QR via geqrf/ungqr; a is (m, n), q is (m, k), r is (k, n)."""
    m, n = a.shape
    k = min(m, n)
    lwork = _qr_lwork.get((m, n))
    if lwork is None:
        lwork = int(lapack.zgeqrf_lwork(m, n)[0].real)
        lwork = max(lwork, n)
        _qr_lwork[(m, n)] = lwork
    qr_, tau, work, info = lapack.zgeqrf(a, lwork=lwork)
    if info != 0:
        return np.linalg.qr(a)
    r = np.triu(qr_[:k, :])
    q, work, info = lapack.zungqr(qr_[:, :k], tau, lwork=lwork)
    if info != 0:
        return np.linalg.qr(a)
    return q, r


@dataclass
class TruncationInfo:
    chi: int
    discarded_weight: float


@dataclass
class StepRecord:
    step: int
    max_chi: int
    discarded_weight: float
    wall_time_s: float


@dataclass
class MpsRunReport:
    layout: str
    qubit_of_site: np.ndarray
    steps: list[StepRecord]

    @property
    def total_discarded_weight(self) -> float:
        return float(sum(st.discarded_weight for st in self.steps))

    @property
    def max_chi(self) -> int:
        return max((st.max_chi for st in self.steps), default=1)


class MpsState:
    def __init__(self, tensors: list[np.ndarray], center: int, qubit_of_site: np.ndarray):
        self.tensors = tensors
        self.center = center
        self.qubit_of_site = np.asarray(qubit_of_site, dtype=np.int64)
        self.site_of_qubit = np.argsort(self.qubit_of_site)

    # -- construction ----------------------------------------------------

    @classmethod
    def plus_state(cls, n_qubits: int, qubit_of_site=None) -> "MpsState":
        if n_qubits < 1:
            raise ValueError(f"need at least one qubit, got {n_qubits}")
        v = np.full(2, 1.0 / np.sqrt(2.0), dtype=np.complex128)
        tensors = [v.reshape(1, 2, 1).copy() for _ in range(n_qubits)]
        if qubit_of_site is None:
            qubit_of_site = np.arange(n_qubits)
        return cls(tensors, 0, qubit_of_site)

    @classmethod
    def product_state(cls, vectors, qubit_of_site=None) -> "MpsState":
        tensors = []
        for v in vectors:
            v = np.asarray(v, dtype=np.complex128).reshape(2)
            nv = np.linalg.norm(v)
            if nv == 0:
                raise ValueError("zero local vector")
            tensors.append((v / nv).reshape(1, 2, 1))
        if qubit_of_site is None:
            qubit_of_site = np.arange(len(tensors))
        return cls(tensors, 0, qubit_of_site)

    def copy(self) -> "MpsState":
        return MpsState([t.copy() for t in self.tensors], self.center, self.qubit_of_site.copy())

    # -- basics ------------------------------------------------------------

    @property
    def n_qubits(self) -> int:
        return len(self.tensors)

    def bond_dims(self) -> list[int]:
        return [t.shape[2] for t in self.tensors[:-1]]

    def max_chi(self) -> int:
        return max(self.bond_dims(), default=1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.tensors[self.center]))

    # -- canonical form ----------------------------------------------------

    def _push_right(self) -> None:
        s = self.center
        t = self.tensors[s]
        cl, _, cr = t.shape
        q, r = _qr_reduced(t.reshape(cl * 2, cr))
        k = q.shape[1]
        self.tensors[s] = q.reshape(cl, 2, k)
        nxt = self.tensors[s + 1]
        self.tensors[s + 1] = (r @ nxt.reshape(cr, -1)).reshape(k, 2, nxt.shape[2])
        self.center = s + 1

    def _push_left(self) -> None:
        s = self.center
        t = self.tensors[s]
        cl, _, cr = t.shape
        q, r = _qr_reduced(t.reshape(cl, 2 * cr).conj().T)
        k = q.shape[1]
        self.tensors[s] = q.conj().T.reshape(k, 2, cr)
        prv = self.tensors[s - 1]
        left = r.conj().T  # (cl, k)
        self.tensors[s - 1] = (prv.reshape(-1, cl) @ left).reshape(prv.shape[0], 2, k)
        self.center = s - 1

    def move_center(self, target: int) -> None:
        if not 0 <= target < self.n_qubits:
            raise ValueError(f"center target {target} out of range")
        while self.center < target:
            self._push_right()
        while self.center > target:
            self._push_left()

    # -- gates -------------------------------------------------------------

    def apply_1q(self, site: int, u2: np.ndarray) -> None:
        t = self.tensors[site]
        cl, _, cr = t.shape
        m = t.transpose(1, 0, 2).reshape(2, cl * cr)
        self.tensors[site] = (u2 @ m).reshape(2, cl, cr).transpose(1, 0, 2)

    def apply_x_layer(self, theta: float) -> None:
        """exp(-i theta X) on every qubit."""
        c, s = np.cos(theta), np.sin(theta)
        u = np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
        for site in range(self.n_qubits):
            self.apply_1q(site, u)

    def _two_site_theta(self, site: int) -> tuple[np.ndarray, int, int]:
        if self.center < site:
            self.move_center(site)
        elif self.center > site + 1:
            self.move_center(site + 1)
        a, b = self.tensors[site], self.tensors[site + 1]
        cl, _, mid = a.shape
        cr = b.shape[2]
        theta = a.reshape(cl * 2, mid) @ b.reshape(mid, 2 * cr)
        return theta.reshape(cl, 2, 2, cr), cl, cr

    def _split_two_site(self, site: int, theta4, cl: int, cr: int, max_bond: int, absorb: str) -> TruncationInfo:
        u, vh, s, discarded = _svd_trunc(theta4.reshape(cl * 2, 2 * cr), max_bond)
        k = s.shape[0]
        if absorb == "left":
            self.tensors[site] = (u * s).reshape(cl, 2, k)
            self.tensors[site + 1] = vh.reshape(k, 2, cr)
            self.center = site
        elif absorb == "right":
            self.tensors[site] = u.reshape(cl, 2, k)
            self.tensors[site + 1] = (s[:, None] * vh).reshape(k, 2, cr)
            self.center = site + 1
        else:
            raise ValueError(f"absorb must be 'left' or 'right', got {absorb!r}")
        return TruncationInfo(k, discarded)

    def apply_2q(self, site: int, gate: np.ndarray, max_bond: int, absorb: str = "left") -> TruncationInfo:
        """Arbitrary two-site gate on (site, site+1).

        gate is (4, 4) over the combined physical index 2*left + right.
        """
        theta4, cl, cr = self._two_site_theta(site)
        g = np.asarray(gate, dtype=np.complex128).reshape(2, 2, 2, 2)
        new = np.einsum("abcd,icdj->iabj", g, theta4)
        return self._split_two_site(site, new, cl, cr, max_bond, absorb)

    def apply_zz_adjacent(self, site: int, theta: float, max_bond: int, absorb: str = "left") -> TruncationInfo:
        """exp(+i theta Z Z) on (site, site+1): diagonal phases, then split."""
        t4, cl, cr = self._two_site_theta(site)
        p, q = np.exp(1j * theta), np.exp(-1j * theta)
        t4[:, 0, 0, :] *= p
        t4[:, 1, 1, :] *= p
        t4[:, 0, 1, :] *= q
        t4[:, 1, 0, :] *= q
        return self._split_two_site(site, t4, cl, cr, max_bond, absorb)

    def swap_sites(self, site: int, max_bond: int, absorb: str) -> TruncationInfo:
        """Swap the qubits at (site, site+1) and update the layout."""
        t4, cl, cr = self._two_site_theta(site)
        swapped = np.ascontiguousarray(t4.transpose(0, 2, 1, 3))
        info = self._split_two_site(site, swapped, cl, cr, max_bond, absorb)
        qa, qb = self.qubit_of_site[site], self.qubit_of_site[site + 1]
        self.qubit_of_site[site], self.qubit_of_site[site + 1] = qb, qa
        self.site_of_qubit[qa], self.site_of_qubit[qb] = site + 1, site
        return info

    def apply_zz_edge(self, qu: int, qv: int, theta: float, max_bond: int) -> TruncationInfo:
        """exp(+i theta Z Z) between two qubits anywhere in the chain.

        Routes by swapping the left qubit rightwards until adjacent, applies
        the phase gate, then swaps back; the layout is unchanged afterwards.
        Returns the max bond reached and total discarded weight of the chain.
        """
        su, sv = int(self.site_of_qubit[qu]), int(self.site_of_qubit[qv])
        if su == sv:
            raise ValueError("edge endpoints map to one site")
        if su > sv:
            su, sv = sv, su
        max_chi = 1
        discarded = 0.0
        if self.center < su:
            self.move_center(su)
        elif self.center > sv:
            self.move_center(sv)
        for s in range(su, sv - 1):
            info = self.swap_sites(s, max_bond, absorb="right")
            max_chi = max(max_chi, info.chi)
            discarded += info.discarded_weight
        info = self.apply_zz_adjacent(sv - 1, theta, max_bond, absorb="left")
        max_chi = max(max_chi, info.chi)
        discarded += info.discarded_weight
        for s in range(sv - 2, su - 1, -1):
            info = self.swap_sites(s, max_bond, absorb="left")
            max_chi = max(max_chi, info.chi)
            discarded += info.discarded_weight
        return TruncationInfo(max_chi, discarded)

    # -- readout -------------------------------------------------------------

    def sample(self, shots: int, rng: np.random.Generator) -> np.ndarray:
        """Z-basis samples, one row per shot, column q = bit of qubit q.

        Moves the center to site 0 (gauge change only), then walks the chain
        once per shot, drawing each site's bit from its conditional
        distribution given the bits already fixed.
        """
        if shots < 1:
            raise ValueError(f"shots must be >= 1, got {shots}")
        self.move_center(0)
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot sample a zero state")
        self.tensors[0] = self.tensors[0] / nrm
        out = np.empty((shots, self.n_qubits), dtype=np.uint8)
        for shot in range(shots):
            a = np.ones(1, dtype=np.complex128)
            for s, t in enumerate(self.tensors):
                amp0 = a @ t[:, 0, :]
                amp1 = a @ t[:, 1, :]
                p0 = float(np.vdot(amp0, amp0).real)
                p1 = float(np.vdot(amp1, amp1).real)
                tot = p0 + p1
                if rng.random() < p0 / tot:
                    out[shot, self.qubit_of_site[s]] = 0
                    a = amp0 / np.sqrt(p0)
                else:
                    out[shot, self.qubit_of_site[s]] = 1
                    a = amp1 / np.sqrt(p1)
        return out

    def to_dense(self, max_qubits: int = 20) -> np.ndarray:
        """Full statevector with qubit q at bit q of the index."""
        n = self.n_qubits
        if n > max_qubits:
            raise ValueError(f"{n} qubits exceeds the dense cap of {max_qubits}")
        acc = np.ones((1, 1), dtype=np.complex128)
        for t in self.tensors:
            acc = np.tensordot(acc, t, axes=(1, 0))
            acc = acc.reshape(-1, t.shape[2])
        psi = acc.reshape((2,) * n) if n > 0 else acc
        axes = [int(self.site_of_qubit[q]) for q in range(n - 1, -1, -1)]
        return np.ascontiguousarray(psi.transpose(axes)).reshape(-1)


def rcm_order(g: Graph) -> np.ndarray:
    """Bandwidth-reducing vertex order; entry s is the qubit placed at site s."""
    u, v = g.edge_arrays()
    data = np.ones(2 * g.n_edges, dtype=np.int8)
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    adj = csr_matrix((data, (rows, cols)), shape=(g.n_vertices, g.n_vertices))
    return np.asarray(reverse_cuthill_mckee(adj, symmetric_mode=True), dtype=np.int64)


def edge_order_for_layout(g: Graph, site_of_qubit: np.ndarray) -> list[tuple[int, int]]:
    """Edges sorted by site distance under the layout, ties lexicographic."""
    return sorted(g.edges, key=lambda e: (abs(int(site_of_qubit[e[0]]) - int(site_of_qubit[e[1]])), e))


def run_plan(
    g: Graph,
    plan: LayerPlan,
    max_bond: int,
    layout: str = "identity",
) -> tuple[MpsState, MpsRunReport]:
    """Evolve |+...+> through the schedule at bond dimension max_bond.

    layout "identity" maps qubit q to site q; "rcm" places qubits in
    reverse Cuthill-McKee order to shorten swap routes. Each step applies
    the X layer, then every edge's ZZ phase in a fixed order.
    """
    if max_bond < 1:
        raise ValueError(f"max_bond must be >= 1, got {max_bond}")
    if layout == "identity":
        qubit_of_site = np.arange(g.n_vertices)
    elif layout == "rcm":
        qubit_of_site = rcm_order(g)
    else:
        raise ValueError(f"unknown layout {layout!r}")
    psi = MpsState.plus_state(g.n_vertices, qubit_of_site)
    order = edge_order_for_layout(g, psi.site_of_qubit)
    records = []
    for st in plan.steps:
        t0 = time.perf_counter()
        psi.apply_x_layer(st.x_angle)
        step_chi = 1
        step_disc = 0.0
        for qu, qv in order:
            info = psi.apply_zz_edge(qu, qv, st.zz_angle, max_bond)
            step_chi = max(step_chi, info.chi)
            step_disc += info.discarded_weight
        records.append(StepRecord(st.step, step_chi, step_disc, time.perf_counter() - t0))
    return psi, MpsRunReport(layout, psi.qubit_of_site.copy(), records)
