"""Distances, mixed logical weight profiles and logical bases."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np
from numba import njit

from .decoders import BpOsdDecoder, DecodingFailure
from .gf2 import (
    BitMatrix,
    as_bitmatrix,
    kernel_basis,
    pack_rows,
    row_space_contains,
    unpack_rows,
    vstack,
    _rref,
)

DEFAULT_P_GRID = (1e-4, 1e-3, 1e-2, 1e-1, 0.49)
DEFAULT_ETA_GRID = (1.0, 10.0, 1e3, 1e5, 1e7, 1e9, 1e11, 1e13)
DEFAULT_GRID = tuple((p, eta) for p in DEFAULT_P_GRID for eta in DEFAULT_ETA_GRID)


def _random_subset(rng, m: int) -> np.ndarray:
    while True:
        sel = rng.integers(0, 2, size=m).astype(bool)
        if sel.any():
            return sel


def test_logicals(h_x, h_z) -> list[np.ndarray]:
    """Kernel vectors of h_z that are not in the row space of h_x."""
    h_x = as_bitmatrix(h_x)
    return [v for v in kernel_basis(h_z) if not row_space_contains(h_x, v)]


def _decode_unit(parity: BitMatrix, test: np.ndarray, priors, osd_order=None, osd_method="cs", bp_iters=1):
    """Solve parity.v = 0, test.v = 1 with BP+OSD."""
    aug = vstack(parity, BitMatrix.from_dense(test))
    syn = np.zeros(aug.rows, np.uint8)
    syn[-1] = 1
    order = aug.cols if osd_order is None else osd_order
    dec = BpOsdDecoder(aug, priors, bp_iters=bp_iters, osd_order=order, osd_method=osd_method)
    return dec.decode(syn).correction


def code_distance(
    h_x,
    h_z,
    samples: Optional[int] = None,
    convergence_window: int = 100,
    seed: int = 0,
    p: float = 1e-4,
    max_samples: int = 20000,
):
    """Upper bound on the Z distance by decoding test logicals (unit syndrome trick).

    Stops after ``convergence_window`` consecutive samples without improvement,
    or after ``samples`` samples when given.  Returns (d, witness).
    """
    h_x = as_bitmatrix(h_x)
    h_z = as_bitmatrix(h_z)
    tests = test_logicals(h_x, h_z)
    if not tests:
        raise ValueError("the code encodes no logical qubits")
    T = np.array(tests, dtype=np.uint8)
    rng = np.random.default_rng(seed)
    best, witness = None, None
    stale = 0
    limit = samples if samples is not None else max_samples
    for _ in range(limit):
        sel = _random_subset(rng, len(T))
        test = (T[sel].sum(axis=0) & 1).astype(np.uint8)
        try:
            cand = _decode_unit(h_x, test, p)
        except DecodingFailure:
            continue
        w = int(cand.sum())
        if best is None or w < best:
            best, witness, stale = w, cand, 0
        else:
            stale += 1
        if samples is None and stale >= convergence_window:
            break
    assert not ((h_x.dense.astype(np.int64) @ witness) & 1).any()
    assert not row_space_contains(h_z, witness)
    return best, witness


# ---------------------------------------------------------------------------
# exact low-weight enumeration


class ExactDistance(NamedTuple):
    value: int
    exact: bool

    def __str__(self):
        return str(self.value) if self.exact else f"≥ {self.value}"


class BudgetExceeded(RuntimeError):
    pass


@njit(cache=True)
def _popcount(words):
    c = 0
    for i in range(words.shape[0]):
        v = words[i]
        v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
        v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
        v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        c += (v * np.uint64(0x0101010101010101)) >> np.uint64(56)
    return c


@njit(cache=True)
def _outside_span(vec, span_words, span_piv, scratch):
    for t in range(vec.shape[0]):
        scratch[t] = vec[t]
    for i in range(span_piv.shape[0]):
        col = span_piv[i]
        if scratch[col >> 6] & (np.uint64(1) << np.uint64(col & 63)):
            for t in range(scratch.shape[0]):
                scratch[t] ^= span_words[i, t]
    for t in range(scratch.shape[0]):
        if scratch[t]:
            return True
    return False


@njit(cache=True)
def _enumerate_level(G, t, best, span_words, span_piv, out):
    """Scan all XORs of exactly t rows of G; track the lightest word outside the span."""
    D = G.shape[0]
    nw = G.shape[1]
    if t > D or t == 0:
        return best
    idx = np.empty(t, np.int64)
    acc = np.zeros((t + 1, nw), np.uint64)
    scratch = np.empty(nw, np.uint64)
    for i in range(t):
        idx[i] = i
    start = 0
    while True:
        for lvl in range(start, t):
            for w in range(nw):
                acc[lvl + 1, w] = acc[lvl, w] ^ G[idx[lvl], w]
        wt = _popcount(acc[t])
        if wt < best and wt > 0:
            if _outside_span(acc[t], span_words, span_piv, scratch):
                best = wt
                for w in range(nw):
                    out[w] = acc[t, w]
        j = t - 1
        while j >= 0 and idx[j] == D - t + j:
            j -= 1
        if j < 0:
            break
        idx[j] += 1
        for i in range(j + 1, t):
            idx[i] = idx[i - 1] + 1
        start = j
    return best


def _information_sets(G: np.ndarray):
    """Systematic generators on (mostly) disjoint information sets: [(packed G_j, new_cols_j)]."""
    D, n = G.shape
    used = np.zeros(n, bool)
    out = []
    while True:
        order = np.r_[np.flatnonzero(~used), np.flatnonzero(used)]
        words = pack_rows(G[:, order])
        piv = _rref(words, n)
        if len(piv) < D:
            raise ValueError("generator matrix is not full rank")
        piv_cols = order[piv]
        new = int((~used[piv_cols]).sum())
        if new == 0:
            break
        # un-permute columns back to the original order
        sysg = unpack_rows(words, n)
        restored = np.zeros_like(sysg)
        restored[:, order] = sysg
        out.append((pack_rows(restored), new))
        used[piv_cols] = True
        if used.all():
            break
    return out


def _lower_bound(t: int, D: int, sets) -> int:
    return sum(max(0, t + 1 - (D - new)) for _, new in sets)


def min_weight_outside(kernel_of, span_of, w_max: int, budget: float = 5e9):
    """Lightest vector of ker(kernel_of) not in rowspace(span_of), searched up to weight w_max."""
    kernel_of = as_bitmatrix(kernel_of)
    span_of = as_bitmatrix(span_of)
    basis = kernel_basis(kernel_of)
    n = kernel_of.cols
    if not basis:
        return ExactDistance(w_max + 1, False), None
    G = np.array(basis, dtype=np.uint8)
    D = G.shape[0]
    sets = _information_sets(G)
    span_words, span_piv = span_of.rref()
    span_words = np.ascontiguousarray(span_words)
    best = n + 1
    out = np.zeros(pack_rows(G[:1]).shape[1], np.uint64)
    cost = 0.0
    for t in range(1, D + 1):
        cost += len(sets) * math.comb(D, t)
        if cost > budget:
            raise BudgetExceeded(f"enumeration would exceed {budget:g} combinations")
        for Gj, _ in sets:
            best = _enumerate_level(Gj, t, best, span_words, span_piv, out)
        lb = _lower_bound(t, D, sets)
        if best <= lb:
            return ExactDistance(int(best), True), unpack_rows(out.reshape(1, -1), n)[0]
        if lb > w_max:
            return ExactDistance(w_max + 1, False), None
    if best <= n:
        return ExactDistance(int(best), True), unpack_rows(out.reshape(1, -1), n)[0]
    return ExactDistance(w_max + 1, False), None


def exact_distance_low_weight(code, w_max: int, budget: float = 5e9) -> ExactDistance:
    """Exact CSS distance if it is at most ``w_max``, otherwise a certified lower bound.

    Every pure-X and pure-Z logical of weight <= w_max is found by
    information-set enumeration, which is equivalent to a full sweep over all
    vectors of that weight.  The local Clifford deformation does not change the
    distance, so the CSS parent matrices are used.
    """
    dz, _ = min_weight_outside(code.h_x, code.h_z, w_max, budget)
    if code.h_x == code.h_z:
        dx = dz
    else:
        dx, _ = min_weight_outside(code.h_z, code.h_x, w_max, budget)
    vals = [d for d in (dz, dx) if d.exact and d.value <= w_max]
    if vals:
        return ExactDistance(min(d.value for d in vals), True)
    return ExactDistance(w_max + 1, False)


# ---------------------------------------------------------------------------
# mixed logical weight profiles


@dataclass
class WeightProfile:
    """L(s): least weight seen for a logical with s non-Z Paulis in the deformed code."""

    entries: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    grid: list = field(default_factory=list)

    def add(self, s: int, weight: int):
        s = int(s)
        self.counts[s] = self.counts.get(s, 0) + 1
        if s not in self.entries or weight < self.entries[s]:
            self.entries[s] = int(weight)

    def merge(self, other: "WeightProfile") -> "WeightProfile":
        out = WeightProfile(dict(self.entries), dict(self.counts), list(self.grid) + list(other.grid))
        for s, w in other.entries.items():
            if s not in out.entries or w < out.entries[s]:
                out.entries[s] = w
        for s, c in other.counts.items():
            out.counts[s] = out.counts.get(s, 0) + c
        return out

    @property
    def distance(self) -> Optional[int]:
        return min(self.entries.values()) if self.entries else None

    def __getitem__(self, s):
        return self.entries[s]

    def get(self, s, default=None):
        return self.entries.get(s, default)

    def to_rows(self, code_id: str):
        return [(code_id, s, self.entries[s], self.counts.get(s, 0)) for s in sorted(self.entries)]

    def write_csv(self, path, code_id: str):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["code_id", "s", "L_s", "n_samples"])
            w.writerows(self.to_rows(code_id))

    @classmethod
    def from_dict(cls, entries: dict) -> "WeightProfile":
        return cls({int(k): int(v) for k, v in entries.items()})


def sampling_priors(code, p: float, eta: float) -> np.ndarray:
    """Per-qubit priors for Z-type CSS logicals: p on black, p/eta on gray.

    A CSS Z operator on a gray qubit is an X operator in the deformed code,
    hence the smaller prior there.
    """
    px = 0.0 if math.isinf(eta) else p / eta
    return np.where(code.gray_mask.astype(bool), px, p)


def sample_logicals(code, grid=DEFAULT_GRID, combos_per_point: int = 128, seed: int = 0) -> WeightProfile:
    """Low-weight Z logicals of the CSS parent under rotated biased priors, binned by gray count."""
    tests = test_logicals(code.h_x, code.h_z)
    if not tests:
        raise ValueError("the code encodes no logical qubits")
    T = np.array(tests, dtype=np.uint8)
    rng = np.random.default_rng(seed)
    gray = code.gray_mask.astype(bool)
    prof = WeightProfile(grid=list(grid))
    for p, eta in grid:
        priors = sampling_priors(code, p, eta)
        for _ in range(combos_per_point):
            sel = _random_subset(rng, len(T))
            test = (T[sel].sum(axis=0) & 1).astype(np.uint8)
            try:
                v = _decode_unit(code.h_x, test, priors)
            except DecodingFailure:
                continue
            prof.add(int(v[gray].sum()), int(v.sum()))
    return prof


def effective_distance(profile, p_z: float, eta: float) -> float:
    """min over s of L(s) + s * delta with delta = -ln(eta) / ln(p_z)."""
    if not 0 < p_z < 1:
        raise ValueError("p_z must lie strictly between 0 and 1")
    entries = profile.entries if isinstance(profile, WeightProfile) else dict(profile)
    if math.isinf(eta):
        return float(entries[0]) if 0 in entries else math.inf
    delta = -math.log(eta) / math.log(p_z)
    return float(min(L + s * delta for s, L in entries.items()))


def v_infinity(k: int, d_c: int, n: int) -> Fraction:
    if n <= 0:
        raise ValueError("n must be positive")
    return Fraction(int(k) * int(d_c), int(n))


# ---------------------------------------------------------------------------
# logical basis


def symplectic_form(a, b) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, np.int64))
    b = np.atleast_2d(np.asarray(b, np.int64))
    n = a.shape[1] // 2
    return ((a[:, :n] @ b[:, n:].T + a[:, n:] @ b[:, :n].T) & 1).astype(np.uint8)


@dataclass
class LogicalBasis:
    """Paired logicals as symplectic [x | z] rows in the frame of the code."""

    x_logicals: np.ndarray
    z_logicals: np.ndarray

    @property
    def k(self) -> int:
        return self.z_logicals.shape[0]

    def pairing(self) -> np.ndarray:
        return symplectic_form(self.x_logicals, self.z_logicals)


def normalizer_logicals(stab: BitMatrix) -> list[np.ndarray]:
    """Basis of operators commuting with every stabilizer, minus the stabilizer span."""
    n = stab.cols // 2
    S = stab.dense
    # omega(s, u) = s_x . u_z + s_z . u_x  -> rows [s_z | s_x] acting on [u_x | u_z]
    M = BitMatrix.from_dense(np.hstack([S[:, n:], S[:, :n]]))
    return [v for v in kernel_basis(M) if not row_space_contains(stab, v)]


def logical_basis(code, p: float = 0.01, combos: int = 64, seed: int = 0, max_rounds: int = 50) -> LogicalBasis:
    """Logical basis whose Z logicals are pure Z operators in the frame of ``code``.

    Z logicals come from decoding a unit syndrome on the X components of the
    stabilizers augmented with a random test logical, i.e. the decoding
    problem at infinite bias.  Each batch is sorted by weight and kept while
    independent.  Partners are then found by decoding unit syndromes on the
    stabilizers augmented with the Z logicals found so far.
    """
    n = code.n
    k = code.k
    if k < 1:
        raise ValueError("the code encodes no logical qubits")
    stab = code.stabilizers()
    S = stab.dense
    Sx = S[:, :n]
    Sx = Sx[Sx.any(axis=1)]
    # commutation with the stabilizers for a general Pauli [u_x | u_z]
    comm = np.hstack([S[:, n:], S[:, :n]])
    tests = normalizer_logicals(stab)
    tests = [t for t in tests if t[:n].any()]
    if not tests:
        raise ValueError("no test logical anticommutes with a pure-Z operator")
    T = np.array(tests, np.uint8)
    rng = np.random.default_rng(seed)
    zl: list[np.ndarray] = []
    parity_z = BitMatrix.from_dense(Sx)
    span = stab
    for _ in range(max_rounds):
        if len(zl) == k:
            break
        cands = []
        for _ in range(combos):
            sel = _random_subset(rng, len(T))
            test = (T[sel].sum(axis=0) & 1).astype(np.uint8)
            if not test[:n].any():
                continue
            try:
                z = _decode_unit(parity_z, test[:n], p, osd_method="cs")
            except DecodingFailure:
                continue
            cands.append(z)
        cands.sort(key=lambda v: (int(v.sum()), v.tobytes()))
        for z in cands:
            full = np.concatenate([np.zeros(n, np.uint8), z])
            if not row_space_contains(span, full):
                span = vstack(span, BitMatrix.from_dense(full))
                zl.append(full)
                if len(zl) == k:
                    break
    if len(zl) != k:
        raise RuntimeError(f"found {len(zl)} of {k} independent Z logicals; raise the sample budget")
    Z = np.array(zl, np.uint8)
    # partner X_i: commutes with the stabilizers and every Z_j, j != i
    cons = BitMatrix.from_dense(np.vstack([comm, np.hstack([Z[:, n:], Z[:, :n]])]))
    xl = []
    for i in range(k):
        syn = np.zeros(cons.rows, np.uint8)
        syn[comm.shape[0] + i] = 1
        dec = BpOsdDecoder(cons, p, bp_iters=1, osd_order=0, osd_method="cs")
        xl.append(dec.decode(syn).correction)
    X = np.array(xl, np.uint8)
    # make the X logicals mutually commute without touching the pairing
    for j in range(k):
        for i in range(j):
            if symplectic_form(X[i], X[j])[0, 0]:
                X[j] ^= Z[i]
    basis = LogicalBasis(X, Z)
    assert np.array_equal(basis.pairing(), np.eye(k, dtype=np.uint8))
    assert not symplectic_form(S, X).any() and not symplectic_form(S, Z).any()
    return basis
