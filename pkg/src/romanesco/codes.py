"""Romanesco code construction on the torus, cylinder and open plane.

Qubits are indexed black sector first (site ``row * L + col``), then the gray
sector with the same layout.  On the plane, the two corner qubits come last:
the extra black qubit at index n-2 and the extra gray qubit at index n-1.

``StabilizerCode`` always stores the CSS parent matrices ``h_x`` (X-type
checks) and ``h_z`` (Z-type checks).  The ``deformed`` flag records that a
Hadamard acts on every gray qubit; ``stabilizers()`` returns the symplectic
check matrix of the code actually represented.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .automaton import CARule, stencil_matrix
from .gf2 import BitMatrix, rank

BOUNDARIES = ("torus", "cylinder", "plane")


def rotate_180(rule: CARule) -> CARule:
    m = rule.m
    return CARule(m, tuple((m - 1 - c, m - 1 - r) for c, r in rule.cells))


@dataclass
class StabilizerCode:
    h_x: BitMatrix
    h_z: BitMatrix
    gray_mask: np.ndarray
    lattice: tuple = (0, 0, "torus")
    rules: tuple = (None, None)
    deformed: bool = False
    d: Optional[int] = None
    d_c: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        if self.h_x.cols != self.h_z.cols:
            raise ValueError("h_x and h_z act on different numbers of qubits")
        self.gray_mask = np.asarray(self.gray_mask, np.uint8).reshape(-1)
        if self.gray_mask.shape[0] != self.h_x.cols:
            raise ValueError("gray mask length differs from qubit count")

    @property
    def n(self) -> int:
        return self.h_x.cols

    @property
    def k(self) -> int:
        return self.n - rank(self.h_x) - rank(self.h_z)

    @property
    def black(self) -> np.ndarray:
        return np.flatnonzero(self.gray_mask == 0)

    @property
    def gray(self) -> np.ndarray:
        return np.flatnonzero(self.gray_mask)

    @property
    def boundary(self) -> str:
        return self.lattice[2]

    @property
    def params(self):
        return (self.n, self.k, self.d, self.d_c)

    @property
    def code_id(self) -> str:
        if self.name:
            return self.name
        H, L, b = self.lattice
        tag = "def" if self.deformed else "css"
        return f"{b}_{H}x{L}_n{self.n}_{tag}"

    def stabilizers(self) -> BitMatrix:
        """Symplectic check matrix [x | z]: X-type rows first, then Z-type rows."""
        n = self.n
        x = np.vstack([self.h_x.dense, np.zeros((self.h_z.rows, n), np.uint8)])
        z = np.vstack([np.zeros((self.h_x.rows, n), np.uint8), self.h_z.dense])
        if self.deformed:
            g = self.gray_mask.astype(bool)
            x[:, g], z[:, g] = z[:, g].copy(), x[:, g].copy()
        return BitMatrix.from_dense(np.hstack([x, z]))

    def x_part(self) -> BitMatrix:
        return BitMatrix.from_dense(self.stabilizers().dense[:, : self.n])

    def z_part(self) -> BitMatrix:
        return BitMatrix.from_dense(self.stabilizers().dense[:, self.n :])


def symplectic_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise symplectic products of rows of ``a`` and ``b`` ([x | z] layout)."""
    a = np.atleast_2d(a).astype(np.int64)
    b = np.atleast_2d(b).astype(np.int64)
    n = a.shape[1] // 2
    return ((a[:, :n] @ b[:, n:].T + a[:, n:] @ b[:, :n].T) & 1).astype(np.uint8)


def _self_dual(h: np.ndarray, gray_mask, lattice, rules, name="") -> StabilizerCode:
    bm = BitMatrix.from_dense(h)
    return StabilizerCode(h_x=bm, h_z=bm, gray_mask=gray_mask, lattice=lattice, rules=rules, name=name)


def build_torus(r1: CARule, r2: CARule, H: int, L: int) -> StabilizerCode:
    """Self-dual CSS code h = [A | B] with A, B the stencil translates of r1, r2."""
    for r in (r1, r2):
        w, h = r.extent
        if H < h or L < w:
            raise ValueError(f"lattice {H}x{L} smaller than the stencil {r}")
    h = np.hstack([stencil_matrix(r1.cells, H, L), stencil_matrix(r2.cells, H, L)])
    mask = np.r_[np.zeros(H * L, np.uint8), np.ones(H * L, np.uint8)]
    return _self_dual(h, mask, (H, L, "torus"), (r1, r2))


@dataclass(frozen=True)
class PolySpec:
    """Bivariate bicycle data: monomials x^p y^q with x shifting rows (size l), y columns (size m)."""

    a_terms: tuple
    b_terms: tuple
    l: int
    m: int


def _shift(size: int, power: int) -> np.ndarray:
    return np.roll(np.eye(size, dtype=np.int64), power % size, axis=1)


def _poly_matrix(terms, l, m) -> np.ndarray:
    out = np.zeros((l * m, l * m), np.int64)
    for p, q in terms:
        out += np.kron(_shift(l, p), _shift(m, q))
    return (out & 1).astype(np.uint8)


def build_from_polynomials(spec: PolySpec) -> StabilizerCode:
    """H_X = [A | B], H_Z = [B^T | A^T]."""
    A = _poly_matrix(spec.a_terms, spec.l, spec.m)
    B = _poly_matrix(spec.b_terms, spec.l, spec.m)
    hx = BitMatrix.from_dense(np.hstack([A, B]))
    hz = BitMatrix.from_dense(np.hstack([B.T, A.T]))
    nn = spec.l * spec.m
    mask = np.r_[np.zeros(nn, np.uint8), np.ones(nn, np.uint8)]
    return StabilizerCode(h_x=hx, h_z=hz, gray_mask=mask, lattice=(spec.l, spec.m, "torus"))


def polyspec_from_rules(r1: CARule, r2: CARule, H: int, L: int) -> PolySpec:
    """Stencil cell (col, row) becomes the monomial x^row y^col."""
    return PolySpec(
        tuple((r, c) for c, r in r1.cells), tuple((r, c) for c, r in r2.cells), H, L
    )


def clifford_deform(code: StabilizerCode) -> StabilizerCode:
    """Hadamard on every gray qubit (swaps X and Z blocks on gray columns)."""
    if code.deformed:
        warnings.warn("code is already deformed; deforming again restores the CSS code", stacklevel=2)
    return replace(code, deformed=not code.deformed)


def build_cylinder(r1: CARule, r2: CARule, H: int, L: int, min_weight: int = 4) -> StabilizerCode:
    """Periodic in the column direction, open at top and bottom.

    Each sub-lattice keeps H-1 rows.  Every stencil placement that overlaps
    the patch is truncated to the existing qubits and kept when its weight is
    at least ``min_weight``.
    """
    Hs = H - 1
    if Hs < 1 or L < max(r1.extent[0], r2.extent[0]):
        raise ValueError(f"lattice {H}x{L} too small for a cylinder")
    m = max(r1.m, r2.m)
    nb = Hs * L
    rows = []
    for j in range(-(m + 1), Hs + 2):
        for i in range(L):
            row = np.zeros(2 * nb, np.uint8)
            for c, r in r1.cells:
                y = j + r
                if 0 <= y < Hs:
                    row[y * L + (i + c) % L] ^= 1
            for c, r in r2.cells:
                y = j + r
                if 0 <= y < Hs:
                    row[nb + y * L + (i + c) % L] ^= 1
            if row.sum() >= min_weight:
                rows.append(row)
    h = np.array(rows, dtype=np.uint8)
    mask = np.r_[np.zeros(nb, np.uint8), np.ones(nb, np.uint8)]
    code = _self_dual(h, mask, (H, L, "cylinder"), (r1, r2))
    _require_commuting(code)
    return code


def plane_layout(d: int):
    """Site lists for the open-plane patch: ((col,row) black sites, gray sites)."""
    S = d - 1
    square = [(x, y) for y in range(S) for x in range(S)]
    black = square + [(S - 1, -1)]
    gray = square + [(0, S)]
    return black, gray


def build_plane(r1: CARule, r2: CARule, d: int, min_weight: int = 4) -> StabilizerCode:
    """Open-boundary patch with two (d-1) x (d-1) sub-lattices plus two corner qubits."""
    if d < 3:
        raise ValueError("plane codes need d >= 3")
    black, gray = plane_layout(d)
    nsq = (d - 1) ** 2
    # square sites of both sectors first, then the black and gray corners
    index = {("b", p): t for t, p in enumerate(black[:-1])}
    index.update({("g", p): nsq + t for t, p in enumerate(gray[:-1])})
    index[("b", black[-1])] = 2 * nsq
    index[("g", gray[-1])] = 2 * nsq + 1
    n = 2 * nsq + 2
    pts = black + gray
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    m = max(r1.m, r2.m)
    rows = []
    for j in range(min(ys) - m, max(ys) + 2):
        for i in range(min(xs) - m, max(xs) + 2):
            row = np.zeros(n, np.uint8)
            for c, r in r1.cells:
                t = index.get(("b", (i + c, j + r)))
                if t is not None:
                    row[t] = 1
            for c, r in r2.cells:
                t = index.get(("g", (i + c, j + r)))
                if t is not None:
                    row[t] = 1
            if row.sum() >= min_weight:
                rows.append(row)
    h = np.array(rows, dtype=np.uint8)
    mask = np.zeros(n, np.uint8)
    mask[nsq : 2 * nsq] = 1
    mask[2 * nsq + 1] = 1
    code = _self_dual(h, mask, (d, d, "plane"), (r1, r2))
    _require_commuting(code)
    return code


def _require_commuting(code: StabilizerCode):
    if not commutes(code):
        raise ValueError(f"stabilizers of {code.code_id} do not commute")


def commutes(code: StabilizerCode) -> bool:
    s = code.stabilizers().dense
    return not symplectic_product(s, s).any()


@dataclass
class ValidationReport:
    commutes: bool
    weight2_ok: bool
    k: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def weight2_filter(code: StabilizerCode, gray_qubit: Optional[int] = None) -> bool:
    """No undetectable pair of one gray bit-flip and one black phase-flip.

    In the CSS picture both errors are Z-type (the gray bit-flip is rotated by
    the Hadamard), so their syndromes are columns of ``h_x``.
    """
    hx = code.h_x.dense
    gray = code.gray
    if len(gray) == 0 or len(code.black) == 0:
        return True
    g = int(gray[0]) if gray_qubit is None else int(gray_qubit)
    sg = hx[:, g]
    if not sg.any():
        return False
    for b in code.black:
        sb = hx[:, b]
        joint = sg ^ sb
        if not joint.any() or not sb.any() or np.array_equal(joint, sg) or np.array_equal(joint, sb):
            return False
    return True


def validate(code: StabilizerCode) -> ValidationReport:
    failures = []
    ok_comm = commutes(code)
    if not ok_comm:
        failures.append("stabilizers do not commute")
    ok_w2 = weight2_filter(code)
    if not ok_w2:
        failures.append("weight-2 mixed logical present")
    k = code.k
    if k < 1:
        failures.append("no encoded qubits")
    return ValidationReport(commutes=ok_comm, weight2_ok=ok_w2, k=k, failures=failures)


def sector_parity(code: StabilizerCode, sector: str) -> BitMatrix:
    """Classical parity checks felt by pure phase-flips in the deformed code.

    Black phase-flips are CSS Z errors seen by ``h_x``; gray phase-flips become
    CSS X errors seen by ``h_z``.  All-zero rows are dropped.
    """
    if sector == "black":
        m = code.h_x.dense[:, code.black]
    elif sector == "gray":
        m = code.h_z.dense[:, code.gray]
    else:
        raise ValueError("sector must be 'black' or 'gray'")
    return BitMatrix.from_dense(m[m.any(axis=1)].reshape(-1, m.shape[1]))
