"""Biased Pauli noise with optional Hadamard rotation on the gray sector."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INF = math.inf


def parse_eta(value) -> float:
    """Accept numbers or the strings 'inf'/'infinity'."""
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
        return INF
    eta = float(value)
    if eta < 1:
        raise ValueError(f"bias must be >= 1, got {eta}")
    return eta


@dataclass(frozen=True)
class NoiseModel:
    """Pauli channel with p_X = p_Y = p_Z / eta.

    ``eta = math.inf`` is pure phase-flip noise.  When ``rotated`` is set the
    per-qubit X and Z probabilities are swapped on gray qubits, which turns a
    simulation of the deformed code into one of its CSS parent.
    """

    p_z: float
    eta: float = 1.0
    rotated: bool = True

    def __post_init__(self):
        object.__setattr__(self, "eta", parse_eta(self.eta))
        if not 0 <= self.p_z <= 1:
            raise ValueError("p_z must lie in [0, 1]")
        px, py, pz = self.pauli_probs()
        if px + py + pz > 1 + 1e-12:
            raise ValueError("total error probability exceeds one")

    @property
    def infinite(self) -> bool:
        return math.isinf(self.eta)

    def pauli_probs(self) -> tuple[float, float, float]:
        if self.infinite:
            return 0.0, 0.0, self.p_z
        px = self.p_z / self.eta
        return px, px, self.p_z

    def per_qubit(self, gray_mask) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Arrays (p_X, p_Y, p_Z) per qubit in the frame that is simulated."""
        gray_mask = np.asarray(gray_mask).astype(bool)
        px, py, pz = self.pauli_probs()
        n = gray_mask.shape[0]
        PX = np.full(n, px)
        PY = np.full(n, py)
        PZ = np.full(n, pz)
        if self.rotated:
            PX[gray_mask], PZ[gray_mask] = pz, px
        return PX, PY, PZ

    def marginals(self, gray_mask) -> tuple[np.ndarray, np.ndarray]:
        """Per-qubit probabilities of a Z component and of an X component."""
        PX, PY, PZ = self.per_qubit(gray_mask)
        return PZ + PY, PX + PY

    def label(self) -> str:
        return "inf" if self.infinite else f"{self.eta:g}"
