"""Syndrome decoders.

* ``bp_decode``: product-sum belief propagation, flooding schedule, LLR domain.
* ``osd_post``: ordered-statistics post-processing, exhaustive (E) or
  combination sweep (CS).
* ``CssBpOsd``: BP+OSD on the X and Z halves of a CSS syndrome.
* ``HybridDecoder``: CSS split plus the pure phase-flip classical problem and
  its n single bit-flip variants, keeping the cheapest correction.
* ``ExhaustiveMLDecoder``: most likely Pauli error up to a weight cap, for
  small codes.

Quantum syndromes are ``concat(s_x, s_z)`` with ``s_x = h_x e_z`` and
``s_z = h_z e_x``.  Quantum corrections are ``concat(c_z, c_x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .gf2 import BitMatrix, as_bitmatrix, rank
from .noise import NoiseModel

LLR_CLAMP = 30.0
P_MIN = 1.0 / (1.0 + math.exp(LLR_CLAMP))
MAX_E_ORDER = 24


class DecodingFailure(RuntimeError):
    """Raised when no correction consistent with the syndrome is found."""


def prior_llr(p) -> np.ndarray:
    p = np.clip(np.asarray(p, dtype=np.float64), P_MIN, 1 - P_MIN)
    return np.clip(np.log((1 - p) / p), -LLR_CLAMP, LLR_CLAMP)


@dataclass
class DecodeResult:
    correction: np.ndarray
    converged: bool
    method: str
    cost: float = 0.0
    iterations: int = 0


class DecodeProblem:
    """A parity-check matrix with per-bit error priors and its Tanner graph."""

    def __init__(self, parity, priors):
        self.parity = as_bitmatrix(parity)
        priors = np.broadcast_to(np.asarray(priors, dtype=np.float64), (self.parity.cols,)).copy()
        if np.any(priors < 0) or np.any(priors > 1):
            raise ValueError("priors must be probabilities")
        self.priors = np.clip(priors, P_MIN, 0.5)
        self.llr = prior_llr(self.priors)
        self.cost = self.llr.copy()
        H = self.parity.dense
        self.H = np.ascontiguousarray(H, dtype=np.uint8)
        rows, cols = np.nonzero(H)
        self.edge_chk = rows.astype(np.int64)
        self.edge_var = cols.astype(np.int64)
        self.chk_ptr = np.zeros(H.shape[0] + 1, np.int64)
        np.add.at(self.chk_ptr, rows + 1, 1)
        self.chk_ptr = np.cumsum(self.chk_ptr)
        order = np.argsort(cols, kind="stable")
        self.var_edges = order.astype(np.int64)
        self.var_ptr = np.zeros(H.shape[1] + 1, np.int64)
        np.add.at(self.var_ptr, cols + 1, 1)
        self.var_ptr = np.cumsum(self.var_ptr)
        self._rank = None
        self._left_null = None

    @property
    def n(self) -> int:
        return self.parity.cols

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = rank(self.parity)
        return self._rank

    @property
    def max_order(self) -> int:
        return self.n - self.rank

    @property
    def left_null(self) -> np.ndarray:
        """Rows y with y H = 0; a syndrome s is reachable iff y . s = 0 for all of them."""
        if self._left_null is None:
            from .gf2 import kernel_basis, transpose

            kb = kernel_basis(transpose(self.parity)) if self.parity.rows else []
            self._left_null = (
                np.array(kb, dtype=np.int64) if kb else np.zeros((0, self.parity.rows), np.int64)
            )
        return self._left_null

    def consistent(self, syndrome) -> bool:
        ln = self.left_null
        if ln.shape[0] == 0:
            return True
        return not ((ln @ np.asarray(syndrome, np.int64)) & 1).any()

    def syndrome_of(self, e) -> np.ndarray:
        return ((self.H.astype(np.int64) @ np.asarray(e, np.int64)) & 1).astype(np.uint8)


@njit(cache=True, fastmath=True)
def _bp(chk_ptr, edge_var, var_ptr, var_edges, prior, syndrome, max_iters, H_rows):
    ne = edge_var.shape[0]
    n = prior.shape[0]
    m = chk_ptr.shape[0] - 1
    v2c = np.empty(ne)
    c2v = np.zeros(ne)
    for e in range(ne):
        v2c[e] = prior[edge_var[e]]
    post = prior.copy()
    hard = np.zeros(n, np.uint8)
    tanhs = np.empty(ne)
    it = 0
    converged = False
    while it < max_iters:
        it += 1
        for c in range(m):
            a = chk_ptr[c]
            b = chk_ptr[c + 1]
            if b == a:
                continue
            prod = 1.0
            nzero = 0
            zi = -1
            for e in range(a, b):
                ex = math.exp(v2c[e])
                t = (ex - 1.0) / (ex + 1.0)
                tanhs[e] = t
                if t == 0.0:
                    nzero += 1
                    zi = e
                else:
                    prod *= t
            sgn = -1.0 if syndrome[c] else 1.0
            for e in range(a, b):
                if nzero == 0:
                    val = prod / tanhs[e]
                elif nzero == 1 and e == zi:
                    val = prod
                else:
                    val = 0.0
                val *= sgn
                if val >= 1.0:
                    msg = LLR_CLAMP
                elif val <= -1.0:
                    msg = -LLR_CLAMP
                else:
                    msg = math.log((1.0 + val) / (1.0 - val))
                    if msg > LLR_CLAMP:
                        msg = LLR_CLAMP
                    elif msg < -LLR_CLAMP:
                        msg = -LLR_CLAMP
                c2v[e] = msg
        for v in range(n):
            s = prior[v]
            for t in range(var_ptr[v], var_ptr[v + 1]):
                s += c2v[var_edges[t]]
            post[v] = s
            hard[v] = 1 if s < 0 else 0
        ok = True
        for c in range(m):
            par = 0
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                par ^= hard[edge_var[e]]
            if par != syndrome[c]:
                ok = False
                break
        if ok:
            converged = True
            break
        for e in range(ne):
            val = post[edge_var[e]] - c2v[e]
            if val > LLR_CLAMP:
                val = LLR_CLAMP
            elif val < -LLR_CLAMP:
                val = -LLR_CLAMP
            v2c[e] = val
    return post, hard, converged, it


def bp_decode(prob: DecodeProblem, syndrome, max_iters: int = 1000):
    """Returns (posterior LLRs, hard decision, converged, iterations)."""
    s = np.asarray(syndrome, np.uint8).reshape(-1)
    if s.shape[0] != prob.parity.rows:
        raise ValueError("syndrome length does not match the number of checks")
    post, hard, conv, it = _bp(
        prob.chk_ptr, prob.edge_var, prob.var_ptr, prob.var_edges, prob.llr, s, max(1, int(max_iters)), prob.parity.rows
    )
    return post, hard, bool(conv), int(it)


@njit(cache=True)
def _osd(H, syndrome, perm, costs, order, cs):
    """Ordered-statistics decoding on columns ``perm`` (most suspicious first).

    Returns (solution in original column order, cost, feasible).
    """
    m, n = H.shape
    A = np.empty((m, n), np.uint8)
    for i in range(m):
        for j in range(n):
            A[i, j] = H[i, perm[j]]
    b = syndrome.copy()
    pivcols = np.empty(min(m, n), np.int64)
    is_piv = np.zeros(n, np.uint8)
    rk = 0
    for col in range(n):
        if rk == m:
            break
        sel = -1
        for i in range(rk, m):
            if A[i, col]:
                sel = i
                break
        if sel < 0:
            continue
        if sel != rk:
            for j in range(n):
                tmp = A[sel, j]
                A[sel, j] = A[rk, j]
                A[rk, j] = tmp
            tb = b[sel]
            b[sel] = b[rk]
            b[rk] = tb
        for i in range(m):
            if i != rk and A[i, col]:
                for j in range(col, n):
                    A[i, j] ^= A[rk, j]
                b[i] ^= b[rk]
        pivcols[rk] = col
        is_piv[col] = 1
        rk += 1
    out = np.zeros(n, np.uint8)
    for i in range(rk, m):
        if b[i]:
            return out, np.inf, False
    nfree = n - rk
    free = np.empty(nfree, np.int64)
    t = 0
    for j in range(n):
        if not is_piv[j]:
            free[t] = j
            t += 1
    pc = np.empty(rk)
    for i in range(rk):
        pc[i] = costs[perm[pivcols[i]]]
    fc = np.empty(nfree)
    for t in range(nfree):
        fc[t] = costs[perm[free[t]]]
    y0 = b[:rk].copy()
    cost0 = 0.0
    for i in range(rk):
        if y0[i]:
            cost0 += pc[i]
    # sign[i] = change in cost if pivot bit i is toggled from its OSD-0 value
    sgn = np.empty(rk)
    for i in range(rk):
        sgn[i] = -pc[i] if y0[i] else pc[i]
    best = cost0
    lam = min(order, nfree)
    best_a = -1
    best_b = -1
    best_mask = np.int64(0)
    if cs:
        # all single flips
        for a in range(nfree):
            f = free[a]
            c = cost0 + fc[a]
            for i in range(rk):
                if A[i, f]:
                    c += sgn[i]
            if c < best:
                best = c
                best_a = a
                best_b = -1
        # pairs among the first lam free columns
        for a in range(lam):
            fa = free[a]
            for bb in range(a + 1, lam):
                fb = free[bb]
                c = cost0 + fc[a] + fc[bb]
                for i in range(rk):
                    if A[i, fa] ^ A[i, fb]:
                        c += sgn[i]
                if c < best:
                    best = c
                    best_a = a
                    best_b = bb
        y = y0.copy()
        if best_a >= 0:
            out[perm[free[best_a]]] = 1
            for i in range(rk):
                if A[i, free[best_a]]:
                    y[i] ^= 1
        if best_b >= 0:
            out[perm[free[best_b]]] = 1
            for i in range(rk):
                if A[i, free[best_b]]:
                    y[i] ^= 1
    else:
        y = y0.copy()
        c = cost0
        state = np.zeros(lam, np.uint8)
        total = np.int64(1) << np.int64(lam)
        for g in range(1, total):
            tz = 0
            x = g
            while (x & 1) == 0:
                x >>= 1
                tz += 1
            f = free[tz]
            if state[tz]:
                c -= fc[tz]
            else:
                c += fc[tz]
            state[tz] ^= 1
            for i in range(rk):
                if A[i, f]:
                    if y[i]:
                        c -= pc[i]
                    else:
                        c += pc[i]
                    y[i] ^= 1
            if c < best - 1e-12:
                best = c
                best_mask = g ^ (g >> 1)
        y = y0.copy()
        for tz in range(lam):
            if (best_mask >> tz) & 1:
                f = free[tz]
                out[perm[f]] = 1
                for i in range(rk):
                    if A[i, f]:
                        y[i] ^= 1
    for i in range(rk):
        if y[i]:
            out[perm[pivcols[i]]] = 1
    return out, best, True


def reliability_order(soft: np.ndarray) -> np.ndarray:
    """Columns sorted most-likely-flipped first; ties by lowest index."""
    return np.argsort(np.asarray(soft, np.float64), kind="stable").astype(np.int64)


def osd_post(prob: DecodeProblem, syndrome, soft, order: int = 0, strategy: str = "cs") -> DecodeResult:
    """OSD on top of BP soft output; ``strategy`` is 'e' (exhaustive) or 'cs'."""
    strategy = strategy.lower()
    if strategy not in ("e", "cs"):
        raise ValueError("strategy must be 'e' or 'cs'")
    if order < 0:
        raise ValueError("order must be non-negative")
    order = min(int(order), prob.max_order)
    if strategy == "e" and order > MAX_E_ORDER:
        raise ValueError(f"exhaustive OSD order {order} exceeds {MAX_E_ORDER}")
    s = np.asarray(syndrome, np.uint8).reshape(-1)
    perm = reliability_order(soft)
    out, cost, ok = _osd(prob.H, s, perm, prob.cost, order, strategy == "cs")
    if not ok:
        raise DecodingFailure("syndrome is outside the column space of the parity checks")
    return DecodeResult(out, False, "osd-" + strategy, float(cost))


class BpOsdDecoder:
    """BP followed by OSD when BP does not converge."""

    def __init__(self, parity, priors, bp_iters: int = 1000, osd_order: int = 50, osd_method: str = "cs"):
        self.problem = DecodeProblem(parity, priors)
        self.bp_iters = int(bp_iters)
        self.osd_method = osd_method.lower()
        self.osd_order = min(int(osd_order), self.problem.max_order)
        if self.osd_method == "e" and self.osd_order > MAX_E_ORDER:
            raise ValueError(f"exhaustive OSD order {self.osd_order} exceeds {MAX_E_ORDER}")

    def decode(self, syndrome) -> DecodeResult:
        prob = self.problem
        s = np.asarray(syndrome, np.uint8).reshape(-1)
        if not s.any():
            return DecodeResult(np.zeros(prob.n, np.uint8), True, "bp", 0.0, 0)
        if not prob.consistent(s):
            raise DecodingFailure("syndrome is outside the column space of the parity checks")
        post, hard, conv, it = bp_decode(prob, s, self.bp_iters)
        if conv:
            return DecodeResult(hard, True, "bp", float(prob.cost[hard.astype(bool)].sum()), it)
        res = osd_post(prob, s, post, self.osd_order, self.osd_method)
        res.iterations = it
        return res


def correction_cost(c_z, c_x, wz, wx) -> float:
    return float(wz[np.asarray(c_z, bool)].sum() + wx[np.asarray(c_x, bool)].sum())


class QuantumDecoder:
    """Common plumbing: split syndromes and score corrections."""

    tag = "quantum"

    def __init__(self, code, noise: NoiseModel):
        self.code = code
        self.noise = noise
        self.n = code.n
        self.mx = code.h_x.rows
        pz, px = noise.marginals(code.gray_mask)
        self.pz, self.px = pz, px
        self.wz = prior_llr(pz)
        self.wx = prior_llr(px)

    def split(self, syndrome):
        s = np.asarray(syndrome, np.uint8).reshape(-1)
        return s[: self.mx], s[self.mx :]

    def decode(self, syndrome) -> DecodeResult:
        raise NotImplementedError


class CssBpOsd(QuantumDecoder):
    """Independent BP+OSD on the X-check and Z-check halves."""

    def __init__(self, code, noise, bp_iters=1000, osd_order=50, osd_method="cs"):
        super().__init__(code, noise)
        self.tag = f"bposd-{osd_method}"
        self.dz = BpOsdDecoder(code.h_x, self.pz, bp_iters, osd_order, osd_method)
        self.dx = BpOsdDecoder(code.h_z, self.px, bp_iters, osd_order, osd_method)

    def decode(self, syndrome) -> DecodeResult:
        sx, sz = self.split(syndrome)
        rz = self.dz.decode(sx)
        rx = self.dx.decode(sz)
        corr = np.concatenate([rz.correction, rx.correction])
        return DecodeResult(
            corr, rz.converged and rx.converged, self.tag, correction_cost(rz.correction, rx.correction, self.wz, self.wx)
        )


_MISSING = object()


class SectorDecoder:
    """Classical decoder for one sector of the pure phase-flip problem, memoised by syndrome."""

    def __init__(self, parity: BitMatrix, priors, bp_iters=1000, osd_order=None, cache_size=200000):
        prob = DecodeProblem(parity, priors)
        order = prob.max_order if osd_order is None else min(int(osd_order), prob.max_order)
        self.dec = BpOsdDecoder(parity, priors, bp_iters, order, "e")
        self.cache: dict = {}
        self.cache_size = cache_size

    def decode(self, syndrome) -> np.ndarray:
        key = np.packbits(syndrome).tobytes()
        hit = self.cache.get(key, _MISSING)
        if hit is None:
            raise DecodingFailure("syndrome is outside the column space of the parity checks")
        if hit is not _MISSING:
            return hit
        try:
            c = self.dec.decode(syndrome).correction
        except DecodingFailure:
            self.cache[key] = None
            raise
        c.setflags(write=False)
        if len(self.cache) >= self.cache_size:
            self.cache.clear()
        self.cache[key] = c
        return c


class InfiniteBiasDecoder(QuantumDecoder):
    """Decodes the two decoupled classical codes only (pure phase-flip assumption)."""

    tag = "classical"

    def __init__(self, code, noise, bp_iters=1000, osd_order=None):
        super().__init__(code, noise)
        if not code.deformed:
            raise ValueError("the classical decomposition needs a deformed code")
        self.black = code.black
        self.gray = code.gray
        self.sec_b = SectorDecoder(BitMatrix.from_dense(code.h_x.dense[:, self.black]), self.pz[self.black], bp_iters, osd_order)
        self.sec_g = SectorDecoder(BitMatrix.from_dense(code.h_z.dense[:, self.gray]), self.px[self.gray], bp_iters, osd_order)

    def assemble(self, cb, cg):
        c_z = np.zeros(self.n, np.uint8)
        c_x = np.zeros(self.n, np.uint8)
        c_z[self.black] = cb
        c_x[self.gray] = cg
        return c_z, c_x

    def decode(self, syndrome) -> DecodeResult:
        sx, sz = self.split(syndrome)
        c_z, c_x = self.assemble(self.sec_b.decode(sx), self.sec_g.decode(sz))
        return DecodeResult(np.concatenate([c_z, c_x]), True, self.tag, correction_cost(c_z, c_x, self.wz, self.wx))


class HybridDecoder(InfiniteBiasDecoder):
    """n + 2 decoding problems; the cheapest consistent correction wins."""

    tag = "hybrid"

    def __init__(self, code, noise, bp_iters=1000, osd_order=50, classical_order=None):
        super().__init__(code, noise, bp_iters, classical_order)
        self.css = CssBpOsd(code, noise, bp_iters, osd_order, "cs")
        self.hx = code.h_x.dense
        self.hz = code.h_z.dense

    def candidates(self, syndrome):
        """Yields (label, c_z, c_x) for every branch."""
        sx, sz = self.split(syndrome)
        r = self.css.decode(syndrome)
        yield "css", r.correction[: self.n], r.correction[self.n :]
        try:
            cb = self.sec_b.decode(sx)
        except DecodingFailure:
            cb = None
        try:
            cg = self.sec_g.decode(sz)
        except DecodingFailure:
            cg = None
        if cb is not None and cg is not None:
            yield "classical", *self.assemble(cb, cg)
        for q in range(self.n):
            if (cg if self.code.gray_mask[q] else cb) is None:
                continue
            try:
                if self.code.gray_mask[q]:
                    # bit-flip on a gray qubit is a CSS Z error there
                    c_z, c_x = self.assemble(self.sec_b.decode(sx ^ self.hx[:, q]), cg)
                    c_z[q] ^= 1
                else:
                    c_z, c_x = self.assemble(cb, self.sec_g.decode(sz ^ self.hz[:, q]))
                    c_x[q] ^= 1
            except DecodingFailure:
                # the remaining syndrome cannot come from phase-flips alone
                continue
            yield f"flip{q}", c_z, c_x

    def decode(self, syndrome) -> DecodeResult:
        best = None
        for label, c_z, c_x in self.candidates(syndrome):
            cost = correction_cost(c_z, c_x, self.wz, self.wx)
            if best is None or cost < best[0] - 1e-12:
                best = (cost, label, c_z, c_x)
        cost, label, c_z, c_x = best
        return DecodeResult(np.concatenate([c_z, c_x]), label != "css", self.tag, cost)


def hybrid_decode(code, noise, syndrome, **kw) -> DecodeResult:
    return HybridDecoder(code, noise, **kw).decode(syndrome)


@njit(cache=True)
def _enumerate_errors(n, cap, syn_words, logw, out_syn, out_err_z, out_err_x, out_lp):
    """All Pauli errors of weight <= cap (types 0=X, 1=Y, 2=Z)."""
    cnt = 0
    idx = np.zeros(cap + 1, np.int64)
    for w in range(0, cap + 1):
        for i in range(w):
            idx[i] = i
        while True:
            ntype = 1
            for i in range(w):
                ntype *= 3
            for tcode in range(ntype):
                x = tcode
                s = np.int64(0)
                ez = np.int64(0)
                ex = np.int64(0)
                lp = 0.0
                for i in range(w):
                    t = x % 3
                    x //= 3
                    q = idx[i]
                    s ^= syn_words[q, t]
                    lp += logw[q, t]
                    if t != 0:
                        ez |= np.int64(1) << np.int64(q)
                    if t != 2:
                        ex |= np.int64(1) << np.int64(q)
                out_syn[cnt] = s
                out_err_z[cnt] = ez
                out_err_x[cnt] = ex
                out_lp[cnt] = lp
                cnt += 1
            # next combination
            j = w - 1
            while j >= 0 and idx[j] == n - w + j:
                j -= 1
            if j < 0:
                break
            idx[j] += 1
            for i in range(j + 1, w):
                idx[i] = idx[i - 1] + 1
    return cnt


class ExhaustiveMLDecoder(QuantumDecoder):
    """Most likely Pauli error of weight <= ``weight_cap`` for each syndrome (lookup table)."""

    tag = "exhaustive"

    def __init__(self, code, noise, weight_cap: int = 5, budget: float = 1e8):
        super().__init__(code, noise)
        n = self.n
        nsyn = code.h_x.rows + code.h_z.rows
        if n > 62 or nsyn > 62:
            raise ValueError("exhaustive decoding is limited to 62 qubits and 62 checks")
        total = sum(math.comb(n, w) * 3**w for w in range(weight_cap + 1))
        if total > budget:
            raise ValueError(f"{total} candidate errors exceed the budget {budget:g}")
        self.weight_cap = weight_cap
        PX, PY, PZ = noise.per_qubit(code.gray_mask)
        probs = np.stack([PX, PY, PZ], axis=1)
        ptot = np.clip(1 - probs.sum(axis=1), 1e-300, 1)
        with np.errstate(divide="ignore"):
            logw = np.log(probs) - np.log(ptot)[:, None]
        # syndrome bits per (qubit, pauli type)
        hx = code.h_x.dense.astype(np.int64)
        hz = code.h_z.dense.astype(np.int64)
        weights = np.int64(1) << np.arange(nsyn, dtype=np.int64)
        sx_bits = hx.T @ weights[: hx.shape[0]]
        sz_bits = hz.T @ weights[hx.shape[0] :]
        syn = np.stack([sz_bits, sx_bits ^ sz_bits, sx_bits], axis=1).astype(np.int64)
        out_syn = np.empty(total, np.int64)
        ez = np.empty(total, np.int64)
        ex = np.empty(total, np.int64)
        lp = np.empty(total)
        cnt = _enumerate_errors(n, weight_cap, syn, logw, out_syn, ez, ex, lp)
        order = np.lexsort((np.arange(cnt), -lp[:cnt], out_syn[:cnt]))
        s_sorted = out_syn[order]
        first = np.r_[True, s_sorted[1:] != s_sorted[:-1]]
        keep = order[first]
        keep = keep[np.isfinite(lp[keep])]
        self.table_syn = out_syn[keep]
        self.table_ez = ez[keep]
        self.table_ex = ex[keep]
        self.table_lp = lp[keep]
        self.weights = weights

    def decode(self, syndrome) -> DecodeResult:
        s = np.asarray(syndrome, np.int64).reshape(-1)
        key = int(s @ self.weights)
        i = np.searchsorted(self.table_syn, key)
        if i >= len(self.table_syn) or self.table_syn[i] != key:
            raise DecodingFailure(f"no error of weight <= {self.weight_cap} has this syndrome")
        bits = np.arange(self.n, dtype=np.int64)
        c_z = ((self.table_ez[i] >> bits) & 1).astype(np.uint8)
        c_x = ((self.table_ex[i] >> bits) & 1).astype(np.uint8)
        return DecodeResult(np.concatenate([c_z, c_x]), True, self.tag, -float(self.table_lp[i]))


def exhaustive_ml_decode(code, noise, syndrome, weight_cap: int = 5) -> DecodeResult:
    return ExhaustiveMLDecoder(code, noise, weight_cap).decode(syndrome)


DECODERS = ("bposd-cs", "bposd-e", "hybrid", "classical", "exhaustive")


def make_decoder(name: str, code, noise, bp_iters=1000, osd_order=50, weight_cap=5) -> QuantumDecoder:
    name = name.lower()
    if name == "bposd-cs":
        return CssBpOsd(code, noise, bp_iters, osd_order, "cs")
    if name == "bposd-e":
        return CssBpOsd(code, noise, bp_iters, osd_order, "e")
    if name == "hybrid":
        return HybridDecoder(code, noise, bp_iters, osd_order)
    if name == "classical":
        return InfiniteBiasDecoder(code, noise, bp_iters)
    if name == "exhaustive":
        return ExhaustiveMLDecoder(code, noise, weight_cap)
    raise ValueError(f"unknown decoder {name!r}; choose from {DECODERS}")
