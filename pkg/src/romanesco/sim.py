"""Code-capacity memory experiments under biased Pauli noise.

The deformed code is simulated through its CSS parent with the noise rotated
on gray qubits.  Each shot draws its randomness from a Philox stream keyed by
(seed, shot index), so any subset or ordering of shots reproduces exactly.
"""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.stats import chi2

from .analysis import LogicalBasis
from .automaton import ClassicalCode
from .codes import StabilizerCode, sector_parity
from .decoders import DecodingFailure, QuantumDecoder
from .gf2 import rank
from .noise import NoiseModel

RESULT_COLUMNS = [
    "code_id",
    "boundary",
    "p_z",
    "eta",
    "shots",
    "x_fails",
    "z_fails",
    "p_l",
    "ci_low",
    "ci_high",
    "decoder",
    "seed",
    "wall_time_s",
]


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, 0, int(shot), 0]))


def sample_error(noise: NoiseModel, n_or_mask, rng: np.random.Generator):
    """Draw (e_z, e_x): one Pauli per qubit, Y sets both components.

    ``n_or_mask`` is either the qubit count (no rotation) or the gray mask.
    """
    if np.isscalar(n_or_mask):
        mask = np.zeros(int(n_or_mask), np.uint8)
    else:
        mask = np.asarray(n_or_mask, np.uint8)
    PX, PY, PZ = noise.per_qubit(mask)
    u = rng.random(mask.shape[0])
    x = u < PX
    y = (u >= PX) & (u < PX + PY)
    z = (u >= PX + PY) & (u < PX + PY + PZ)
    return (y | z).astype(np.uint8), (x | y).astype(np.uint8)


def poisson_ci(failures: int, shots: int, level: float = 0.95) -> tuple[float, float]:
    """Exact (Garwood) Poisson interval on the rate failures / shots."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    if failures < 0 or failures > shots:
        raise ValueError("failures must lie in [0, shots]")
    a = 1 - level
    low = 0.0 if failures == 0 else chi2.ppf(a / 2, 2 * failures) / 2
    high = chi2.ppf(1 - a / 2, 2 * failures + 2) / 2
    return float(low / shots), float(high / shots)


@dataclass
class ExperimentResult:
    code_id: str
    boundary: str
    p_z: float
    eta: float
    shots: int
    x_failures: int
    z_failures: int
    decoder: str
    seed: int
    wall_time_s: float = 0.0
    decoder_failures: int = 0
    level: float = 0.95

    @property
    def rate_x(self) -> float:
        return self.x_failures / self.shots

    @property
    def rate_z(self) -> float:
        return self.z_failures / self.shots

    @property
    def p_l(self) -> float:
        return 0.5 * (self.rate_x + self.rate_z)

    @property
    def ci_x(self):
        return poisson_ci(self.x_failures, self.shots, self.level)

    @property
    def ci_z(self):
        return poisson_ci(self.z_failures, self.shots, self.level)

    @property
    def ci(self):
        """Interval on the averaged rate from the pooled failure count."""
        lo, hi = poisson_ci(self.x_failures + self.z_failures, 2 * self.shots, self.level)
        return lo, hi

    def row(self) -> list:
        lo, hi = self.ci
        eta = "inf" if math.isinf(self.eta) else f"{self.eta:g}"
        return [
            self.code_id,
            self.boundary,
            f"{self.p_z:g}",
            eta,
            self.shots,
            self.x_failures,
            self.z_failures,
            f"{self.p_l:.10g}",
            f"{lo:.10g}",
            f"{hi:.10g}",
            self.decoder,
            self.seed,
            f"{self.wall_time_s:.3f}",
        ]


def css_to_code_frame(code: StabilizerCode, r_z, r_x) -> np.ndarray:
    """Symplectic [x | z] vector of a CSS-frame Pauli in the frame of ``code``."""
    x = np.array(r_x, np.uint8)
    z = np.array(r_z, np.uint8)
    if code.deformed:
        g = code.gray_mask.astype(bool)
        x[g], z[g] = z[g].copy(), x[g].copy()
    return np.concatenate([x, z])


def run_memory_experiment(
    code: StabilizerCode,
    noise: NoiseModel,
    basis: LogicalBasis,
    decoder: QuantumDecoder,
    shots: int,
    seed: int = 0,
    min_failures: Optional[int] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> ExperimentResult:
    """Sample, decode and classify ``shots`` errors.

    A shot is an X failure when the residual anticommutes with a Z logical and
    a Z failure when it anticommutes with an X logical.  With ``min_failures``
    the run stops early once that many shots have failed.
    """
    if noise.rotated != code.deformed:
        raise ValueError("rotate the noise exactly when simulating a deformed code")
    n = code.n
    hx = code.h_x.dense.astype(np.int64)
    hz = code.h_z.dense.astype(np.int64)
    zl = basis.z_logicals.astype(np.int64)
    xl = basis.x_logicals.astype(np.int64)
    # symplectic test rows: omega(L, r) = L_x . r_z + L_z . r_x
    zl_swap = np.hstack([zl[:, n:], zl[:, :n]])
    xl_swap = np.hstack([xl[:, n:], xl[:, :n]])
    xf = zf = failed = dfail = 0
    done = 0
    t0 = time.perf_counter()
    for shot in range(shots):
        rng = shot_rng(seed, shot)
        e_z, e_x = sample_error(noise, code.gray_mask, rng)
        syn = np.concatenate([(hx @ e_z) & 1, (hz @ e_x) & 1]).astype(np.uint8)
        done += 1
        try:
            corr = decoder.decode(syn).correction
        except DecodingFailure:
            dfail += 1
            xf += 1
            zf += 1
            failed += 1
            continue
        c_z, c_x = corr[:n], corr[n:]
        if ((hx @ c_z) & 1).astype(np.uint8).tolist() != syn[: hx.shape[0]].tolist() or (
            (hz @ c_x) & 1
        ).astype(np.uint8).tolist() != syn[hx.shape[0] :].tolist():
            raise AssertionError("decoder returned a correction with the wrong syndrome")
        res = css_to_code_frame(code, e_z ^ c_z, e_x ^ c_x).astype(np.int64)
        xfail = bool(((zl_swap @ res) & 1).any())
        zfail = bool(((xl_swap @ res) & 1).any())
        xf += xfail
        zf += zfail
        failed += xfail or zfail
        if progress is not None and (shot + 1) % 1000 == 0:
            progress(shot + 1, failed)
        if min_failures is not None and failed >= min_failures:
            break
    return ExperimentResult(
        code_id=code.code_id,
        boundary=code.boundary,
        p_z=noise.p_z,
        eta=noise.eta,
        shots=done,
        x_failures=xf,
        z_failures=zf,
        decoder=getattr(decoder, "tag", type(decoder).__name__),
        seed=seed,
        wall_time_s=time.perf_counter() - t0,
        decoder_failures=dfail,
    )


def infinite_bias_mode(code: StabilizerCode) -> tuple[ClassicalCode, ClassicalCode]:
    """The two decoupled classical codes felt by pure phase-flip noise."""
    if not code.deformed:
        raise ValueError("infinite-bias decomposition needs a deformed code")
    out = []
    for sector, rule in zip(("black", "gray"), code.rules):
        h = sector_parity(code, sector)
        cc = ClassicalCode(parity=h, rule=rule, lattice=tuple(code.lattice[:2]))
        cc.k = h.cols - rank(h)
        out.append(cc)
    return out[0], out[1]


def write_results_csv(path_or_buf, results, header_comments=()):
    own = isinstance(path_or_buf, (str, bytes)) or hasattr(path_or_buf, "__fspath__")
    fh = open(path_or_buf, "w", newline="") if own else path_or_buf
    try:
        for line in header_comments:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in results:
            w.writerow(r.row())
    finally:
        if own:
            fh.close()


def read_results_csv(path) -> list[dict]:
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("".join(lines))))
