"""Cellular-automaton stencils and the classical codes they generate on a torus."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .gf2 import BitMatrix, kernel_basis, pack_rows, rank

# Exact codeword enumeration is used up to this many encoded bits.
EXACT_CAP = 20


@dataclass(frozen=True, order=True)
class CARule:
    """An m x m binary stencil; ``cells`` holds (col, row) pairs with row 0 at the bottom."""

    m: int
    cells: tuple[tuple[int, int], ...]

    def __post_init__(self):
        cells = tuple(sorted((int(c), int(r)) for c, r in self.cells))
        object.__setattr__(self, "cells", cells)
        if not cells:
            raise ValueError("a rule needs at least one cell")
        if len(set(cells)) != len(cells):
            raise ValueError("duplicate cells")
        for c, r in cells:
            if not (0 <= c < self.m and 0 <= r < self.m):
                raise ValueError(f"cell {(c, r)} outside the {self.m}x{self.m} grid")

    @property
    def weight(self) -> int:
        return len(self.cells)

    @property
    def extent(self) -> tuple[int, int]:
        """(width, height) of the occupied bounding box."""
        return (max(c for c, _ in self.cells) + 1, max(r for _, r in self.cells) + 1)

    def touches_boundary(self) -> bool:
        """At least one cell in the bottom row and one in the left column."""
        return any(r == 0 for _, r in self.cells) and any(c == 0 for c, _ in self.cells)

    def matrix(self) -> np.ndarray:
        """Stencil as an m x m array, printed with the top row first."""
        mat = np.zeros((self.m, self.m), np.uint8)
        for c, r in self.cells:
            mat[self.m - 1 - r, c] = 1
        return mat

    def to_dict(self) -> dict:
        return {"m": self.m, "cells": [list(c) for c in self.cells]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "CARule":
        return cls(int(d["m"]), tuple(tuple(c) for c in d["cells"]))

    @classmethod
    def from_json(cls, s: str) -> "CARule":
        return cls.from_dict(json.loads(s))

    def __str__(self):
        return f"m={self.m}:" + ",".join(f"({c},{r})" for c, r in self.cells)


def enumerate_rules(m: int, w: int) -> list[CARule]:
    """All weight-``w`` stencils in an m x m grid touching the bottom row and left column."""
    if w > m * m:
        raise ValueError(f"weight {w} does not fit in a {m}x{m} stencil")
    sites = [(c, r) for r in range(m) for c in range(m)]
    out = []
    for comb in itertools.combinations(sites, w):
        rule = CARule(m, comb)
        if rule.touches_boundary():
            out.append(rule)
    return sorted(set(out))


def stencil_matrix(cells, H: int, L: int) -> np.ndarray:
    """One check per site (row-major index j*L+i) on the H x L torus."""
    h = np.zeros((H * L, H * L), np.uint8)
    for j in range(H):
        for i in range(L):
            for c, r in cells:
                h[j * L + i, ((j + r) % H) * L + (i + c) % L] ^= 1
    return h


@dataclass
class ClassicalCode:
    parity: BitMatrix
    rule: Optional[CARule] = None
    lattice: tuple[int, int] = (0, 0)
    k: Optional[int] = None
    d: Optional[int] = None
    d_exact: bool = False

    @property
    def n(self) -> int:
        return self.parity.cols

    @property
    def params(self) -> tuple[int, Optional[int], Optional[int]]:
        return (self.n, self.k, self.d)


def build_classical_code(rule: CARule, H: int, L: int) -> ClassicalCode:
    width, height = rule.extent
    if H < height or L < width:
        raise ValueError(f"lattice {H}x{L} smaller than the stencil {rule}")
    h = BitMatrix.from_dense(stencil_matrix(rule.cells, H, L))
    return ClassicalCode(parity=h, rule=rule, lattice=(H, L), k=h.cols - rank(h))


@njit(cache=True)
def _min_weight_gray(basis_words, ncols):
    """Minimum weight of the nonzero span of ``basis_words`` via a Gray-code walk."""
    k = basis_words.shape[0]
    nw = basis_words.shape[1]
    cur = np.zeros(nw, dtype=np.uint64)
    best = ncols + 1
    best_idx = 0
    total = np.int64(1) << np.int64(k)
    for g in range(1, total):
        t = 0
        x = g
        while (x & 1) == 0:
            x >>= 1
            t += 1
        wgt = 0
        for i in range(nw):
            cur[i] ^= basis_words[t, i]
            v = cur[i]
            # popcount
            v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
            v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
            v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
            wgt += (v * np.uint64(0x0101010101010101)) >> np.uint64(56)
        if wgt < best:
            best = wgt
            best_idx = g ^ (g >> 1)
    return best, best_idx


def min_weight_codeword(parity) -> tuple[Optional[int], Optional[np.ndarray]]:
    """Exact minimum distance of ker(parity) by enumerating every nonzero codeword."""
    parity = parity if isinstance(parity, BitMatrix) else BitMatrix.from_dense(parity)
    basis = kernel_basis(parity)
    if not basis:
        return None, None
    B = np.array(basis, dtype=np.uint8)
    best, idx = _min_weight_gray(pack_rows(B), parity.cols)
    sel = np.array([(idx >> i) & 1 for i in range(len(basis))], dtype=np.int64)
    word = (sel @ B.astype(np.int64) % 2).astype(np.uint8)
    return int(best), word


def classical_params(code: ClassicalCode, exact_cap: int = EXACT_CAP, seed: int = 0):
    """(n_c, k_c, d_c); d_c is exact when k_c <= exact_cap, else a decoder-based upper bound."""
    n = code.n
    k = n - rank(code.parity)
    code.k = k
    if k == 0:
        code.d, code.d_exact = None, True
    elif k <= exact_cap:
        code.d, _ = min_weight_codeword(code.parity)
        code.d_exact = True
    else:
        from .analysis import code_distance

        d, _ = code_distance(code.parity, BitMatrix.zeros(0, n), seed=seed)
        code.d, code.d_exact = d, False
    return (n, k, code.d)


def check_graph_connected(parity) -> bool:
    """Connectivity of the graph joining checks that share a bit."""
    parity = parity if isinstance(parity, BitMatrix) else BitMatrix.from_dense(parity)
    dense = parity.dense
    r = dense.shape[0]
    if r <= 1:
        return True
    parent = list(range(r))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for col in range(dense.shape[1]):
        rows = np.flatnonzero(dense[:, col])
        for a in rows[1:]:
            ra, rb = find(int(rows[0])), find(int(a))
            if ra != rb:
                parent[ra] = rb
    return len({find(i) for i in range(r)}) == 1


def is_connected(code: ClassicalCode) -> bool:
    return check_graph_connected(code.parity)
