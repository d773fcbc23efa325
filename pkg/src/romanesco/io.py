"""File formats: alist, dense 0/1 text and JSON code specs."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .automaton import CARule
from .codes import BOUNDARIES, StabilizerCode, build_cylinder, build_plane, build_torus, clifford_deform, rotate_180
from .gf2 import BitMatrix


def write_alist(matrix, path):
    """MacKay alist: 1-based indices, zero padded to the maximum degree."""
    h = matrix.dense if isinstance(matrix, BitMatrix) else np.asarray(matrix, np.uint8)
    m, n = h.shape
    cols = [np.flatnonzero(h[:, j]) + 1 for j in range(n)]
    rows = [np.flatnonzero(h[i]) + 1 for i in range(m)]
    max_c = max((len(c) for c in cols), default=0)
    max_r = max((len(r) for r in rows), default=0)

    def pad(v, width):
        return " ".join(str(int(x)) for x in list(v) + [0] * (width - len(v)))

    lines = [f"{n} {m}", f"{max_c} {max_r}"]
    lines.append(" ".join(str(len(c)) for c in cols))
    lines.append(" ".join(str(len(r)) for r in rows))
    lines += [pad(c, max_c) for c in cols]
    lines += [pad(r, max_r) for r in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def read_alist(path) -> BitMatrix:
    tokens = [list(map(int, ln.split())) for ln in Path(path).read_text().splitlines() if ln.strip()]
    n, m = tokens[0]
    col_deg = tokens[2]
    if len(col_deg) != n:
        raise ValueError("alist column degree line does not match n")
    h = np.zeros((m, n), np.uint8)
    for j in range(n):
        for i in tokens[4 + j][: col_deg[j]]:
            if i:
                h[i - 1, j] = 1
    row_deg = tokens[3]
    for i in range(m):
        for j in tokens[4 + n + i][: row_deg[i]]:
            if j and not h[i, j - 1]:
                raise ValueError("alist row and column lists disagree")
    return BitMatrix.from_dense(h)


def write_dense(matrix, path):
    h = matrix.dense if isinstance(matrix, BitMatrix) else np.asarray(matrix, np.uint8)
    Path(path).write_text("".join("".join(map(str, row)) + "\n" for row in h.tolist()))


def read_dense(path) -> BitMatrix:
    rows = [ln.strip().replace(" ", "") for ln in Path(path).read_text().splitlines() if ln.strip()]
    if any(set(r) - {"0", "1"} for r in rows):
        raise ValueError("dense matrix rows must contain only 0 and 1")
    return BitMatrix.from_dense(np.array([[int(c) for c in r] for r in rows], np.uint8))


def code_spec(code: StabilizerCode) -> dict:
    r1, r2 = code.rules
    H, L, b = code.lattice
    return {
        "rule1": r1.to_dict(),
        "rule2": r2.to_dict(),
        "H": H,
        "L": L,
        "boundary": b,
        "deformed": bool(code.deformed),
    }


def load_spec(path_or_dict) -> dict:
    if isinstance(path_or_dict, dict):
        return dict(path_or_dict)
    return json.loads(Path(path_or_dict).read_text())


def build_from_spec(spec) -> StabilizerCode:
    """Build the code described by a spec dict (or a path to its JSON)."""
    spec = load_spec(spec)
    if "rule1" not in spec:
        raise ValueError("code spec needs 'rule1'")
    r1 = CARule.from_dict(spec["rule1"])
    r2 = CARule.from_dict(spec["rule2"]) if spec.get("rule2") else rotate_180(r1)
    boundary = spec.get("boundary", "torus")
    if boundary not in BOUNDARIES:
        raise ValueError(f"unknown boundary {boundary!r}")
    if boundary == "plane":
        d = int(spec.get("d", spec.get("H", 0)))
        code = build_plane(r1, r2, d)
    else:
        H, L = int(spec["H"]), int(spec["L"])
        code = (build_torus if boundary == "torus" else build_cylinder)(r1, r2, H, L)
    if spec.get("deformed", True):
        code = clifford_deform(code)
    if spec.get("name"):
        code.name = spec["name"]
    return code


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
