"""Rule enumeration, code filtering, selection and family fits."""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional


from .analysis import BudgetExceeded, code_distance, exact_distance_low_weight, v_infinity
from .automaton import (
    EXACT_CAP,
    CARule,
    build_classical_code,
    check_graph_connected,
    classical_params,
    enumerate_rules,
)
from .codes import build_torus, commutes, rotate_180, weight2_filter

EXACT_D_CAP = 6


@dataclass
class SearchConfig:
    m_range: tuple = (2, 3)
    w_range: tuple = (3, 4)
    lattices: tuple = tuple((3 * q, 3 * q) for q in range(1, 6))
    min_kc: int = 4
    min_dc: int = 4
    max_n: int = 1000
    exact_cap: int = EXACT_CAP
    exact_d_cap: int = EXACT_D_CAP
    exact_budget: float = 5e9
    time_budget_s: Optional[float] = None
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        self.m_range = tuple(self.m_range)
        self.w_range = tuple(self.w_range)
        self.lattices = tuple(tuple(x) for x in self.lattices)
        if not self.m_range or not self.w_range or not self.lattices:
            raise ValueError("search ranges must be non-empty")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class CodeRecord:
    rule: tuple
    m: int
    weight: int
    lattice: tuple
    n: int = 0
    k: int = 0
    d: Optional[int] = None
    d_exact: bool = False
    n_c: int = 0
    k_c: int = 0
    d_c: Optional[int] = None
    d_c_exact: bool = False
    connected: bool = False
    weight2_ok: bool = False
    commutes: bool = False
    status: str = "ok"

    @property
    def key(self) -> str:
        return f"{self.m}:{list(map(list, self.rule))}@{self.lattice[0]}x{self.lattice[1]}"

    @property
    def carule(self) -> CARule:
        return CARule(self.m, tuple(tuple(c) for c in self.rule))

    @property
    def v_inf(self) -> Optional[Fraction]:
        if not self.n or self.d_c is None:
            return None
        return v_infinity(self.k, self.d_c, self.n)

    @property
    def stabilizer_weight(self) -> int:
        return 2 * self.weight

    @property
    def params(self):
        return (self.n, self.k, self.d), (self.n_c, self.k_c, self.d_c)

    def to_json(self) -> str:
        d = asdict(self)
        d["rule"] = [list(c) for c in self.rule]
        d["lattice"] = list(self.lattice)
        v = self.v_inf
        d["v_inf"] = None if v is None else f"{v.numerator}/{v.denominator}"
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "CodeRecord":
        d = json.loads(line)
        d.pop("v_inf", None)
        d["rule"] = tuple(tuple(c) for c in d["rule"])
        d["lattice"] = tuple(d["lattice"])
        return cls(**d)

    def __str__(self):
        v = self.v_inf
        vs = "-" if v is None else f"{float(v):.2f}"
        return (
            f"[[{self.n},{self.k},{self.d}]] / [{self.n_c},{self.k_c},{self.d_c}] "
            f"v_inf={vs} rule={self.carule} lattice={self.lattice[0]}x{self.lattice[1]}"
        )


def work_items(cfg: SearchConfig) -> list[tuple[CARule, tuple]]:
    """Deterministic (rule, lattice) order: lattices ascending, rules sorted."""
    items = []
    for H, L in sorted(cfg.lattices):
        if 2 * H * L > cfg.max_n:
            continue
        for m in sorted(cfg.m_range):
            for w in sorted(cfg.w_range):
                if w > m * m:
                    continue
                for rule in enumerate_rules(m, w):
                    width, height = rule.extent
                    if H >= height and L >= width:
                        items.append((rule, (H, L)))
    return items


def evaluate_item(rule: CARule, lattice, cfg: SearchConfig) -> CodeRecord:
    """Run the filter pipeline on one rule and lattice."""
    H, L = lattice
    rec = CodeRecord(rule=rule.cells, m=rule.m, weight=rule.weight, lattice=(H, L))
    cc = build_classical_code(rule, H, L)
    rec.n_c = cc.n
    rec.k_c = cc.k
    if cc.k < cfg.min_kc:
        rec.status = "k_c below threshold"
        return rec
    classical_params(cc, exact_cap=cfg.exact_cap, seed=cfg.seed)
    rec.d_c, rec.d_c_exact = cc.d, cc.d_exact
    if cc.d is None or cc.d < cfg.min_dc:
        rec.status = "d_c below threshold"
        return rec
    rec.connected = check_graph_connected(cc.parity)
    if not rec.connected:
        rec.status = "disconnected"
        return rec
    code = build_torus(rule, rotate_180(rule), H, L)
    rec.n = code.n
    rec.weight2_ok = weight2_filter(code)
    if not rec.weight2_ok:
        rec.status = "weight-2 logical"
        return rec
    rec.commutes = commutes(code)
    if not rec.commutes:
        rec.status = "non-commuting"
        return rec
    rec.k = code.k
    if rec.k == 0:
        rec.status = "no logical qubits"
        return rec
    d, _ = code_distance(code.h_x, code.h_z, seed=cfg.seed)
    rec.d = d
    if d <= cfg.exact_d_cap:
        try:
            ex = exact_distance_low_weight(code, d, budget=cfg.exact_budget)
            rec.d, rec.d_exact = ex.value, ex.exact
        except BudgetExceeded:
            rec.d_exact = False
    return rec


def _evaluate_packed(args):
    rule, lattice, cfg = args
    return evaluate_item(rule, lattice, cfg)


def load_ledger(path) -> dict[str, CodeRecord]:
    out = {}
    p = Path(path)
    if not p.exists():
        return out
    for line in p.read_text().splitlines():
        line = line.strip()
        if line and '"rule"' in line:
            rec = CodeRecord.from_json(line)
            out[rec.key] = rec
    return out


@dataclass
class SearchResult:
    records: list
    evaluated: int
    partial: bool = False

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def run_search(
    cfg: SearchConfig, ledger: Optional[str] = None, resume: bool = False, header: Optional[dict] = None
) -> SearchResult:
    """Evaluate every work item and return the surviving records.

    With ``ledger`` every evaluated item (surviving or not) is appended as one
    JSON line; with ``resume`` items already in the ledger are not recomputed.
    ``header`` is written as the first line of a fresh ledger.
    """
    items = work_items(cfg)
    done = load_ledger(ledger) if (ledger and resume) else {}
    fresh = not (resume and ledger and Path(ledger).exists())
    fh = open(ledger, "w" if fresh else "a") if ledger else None
    if fh and fresh:
        fh.write(json.dumps({"config": cfg.to_dict(), **(header or {})}, sort_keys=True, default=str) + "\n")
    t0 = time.perf_counter()
    results: dict[str, CodeRecord] = {}
    todo = []
    for rule, lat in items:
        key = CodeRecord(rule=rule.cells, m=rule.m, weight=rule.weight, lattice=lat).key
        if key in done:
            results[key] = done[key]
        else:
            todo.append((key, rule, lat))
    partial = False
    try:
        if cfg.threads > 1 and todo:
            with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
                recs = pool.map(_evaluate_packed, [(r, lat, cfg) for _, r, lat in todo])
                for (key, _, _), rec in zip(todo, recs):
                    results[key] = rec
                    if fh:
                        fh.write(rec.to_json() + "\n")
        else:
            for key, rule, lat in todo:
                if cfg.time_budget_s is not None and time.perf_counter() - t0 > cfg.time_budget_s:
                    partial = True
                    break
                rec = evaluate_item(rule, lat, cfg)
                results[key] = rec
                if fh:
                    fh.write(rec.to_json() + "\n")
                    fh.flush()
    finally:
        if fh:
            fh.close()
    ordered = [results[k] for k in (
        CodeRecord(rule=r.cells, m=r.m, weight=r.weight, lattice=lat).key for r, lat in items
    ) if k in results]
    return SearchResult([r for r in ordered if r.status == "ok"], len(ordered), partial)


def select_best(records: Iterable[CodeRecord]) -> list[CodeRecord]:
    """Tiered selection per lattice size.

    Per k keep the largest d_c, then the lowest stabilizer weight, then the
    smallest cell size; drop records beaten in both k and d_c; per (k, d_c)
    keep the largest d.  Records with identical parameters collapse to the
    first one in rule order.
    """
    records = [r for r in records if r.status == "ok"]
    out = []
    for n in sorted({r.n for r in records}):
        pool = [r for r in records if r.n == n]
        sel = []
        for k in sorted({r.k for r in pool}):
            g = [r for r in pool if r.k == k]
            best = max(r.d_c for r in g)
            g = [r for r in g if r.d_c == best]
            w = min(r.stabilizer_weight for r in g)
            g = [r for r in g if r.stabilizer_weight == w]
            m = min(r.m for r in g)
            sel += [r for r in g if r.m == m]
        sel = [r for r in sel if not any(o.k > r.k and o.d_c > r.d_c for o in sel)]
        for k, dc in sorted({(r.k, r.d_c) for r in sel}):
            g = [r for r in sel if (r.k, r.d_c) == (k, dc)]
            dmax = max((r.d or 0) for r in g)
            g = [r for r in g if (r.d or 0) == dmax]
            seen = set()
            for r in sorted(g, key=lambda r: (r.m, r.rule)):
                p = r.params
                if p not in seen:
                    seen.add(p)
                    out.append(r)
    return out


# ---------------------------------------------------------------------------
# families

MODULI = (2, 3, 4, 6, 8, 12)


@dataclass
class FamilyPoint:
    H: int
    L: int
    n: int
    k: int
    d: Optional[int]
    d_c: Optional[int]


@dataclass
class FamilyDescriptor:
    rules: tuple
    k: Optional[int]
    dc_slope: Optional[Fraction]
    d_coeffs: Optional[tuple]
    constraint: str
    points: list = field(default_factory=list)
    excluded: list = field(default_factory=list)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.k is not None and self.dc_slope is not None and self.d_coeffs is not None

    def predict(self, H: int, L: int) -> tuple:
        """(n, k, d, d_c) predicted on an H x L torus satisfying the constraint."""
        if not self.ok:
            raise ValueError(f"no stable family fit: {self.message}")
        n = 2 * H * L
        mu, nu = self.d_coeffs
        d = min(mu * H, nu * L)
        dc = self.dc_slope * n
        return n, self.k, int(d), int(dc)


def _family_point(r1: CARule, r2: CARule, H: int, L: int, seed: int) -> FamilyPoint:
    code = build_torus(r1, r2, H, L)
    k = code.k
    n = code.n
    if k == 0:
        return FamilyPoint(H, L, n, 0, None, None)
    cc = build_classical_code(r1, H, L)
    classical_params(cc, seed=seed)
    d, _ = code_distance(code.h_x, code.h_z, seed=seed)
    return FamilyPoint(H, L, n, k, d, cc.d)


def _describe_exclusion(points, excluded) -> str:
    """Find a condition 'H%a==0 and L%b==0' that holds exactly on the excluded points."""
    if not excluded:
        return "all swept lattices"
    ex = {(p.H, p.L) for p in excluded}
    for a in MODULI:
        for b in MODULI:
            hits = {(p.H, p.L) for p in points if p.H % a == 0 and p.L % b == 0}
            if hits == ex:
                return f"not (H%{a}==0 and L%{b}==0)"
    return "lattices other than " + ", ".join(f"{h}x{l}" for h, l in sorted(ex))


def family_fit(rule_pair, lattice_sweep, seed: int = 0) -> FamilyDescriptor:
    """Fit constant k, d_c = c*n and d = min(mu*H, nu*L) over a lattice sweep.

    Lattices whose (k, d_c / n) differs from the most common pair are treated
    as outside the family and described by a modular constraint when one fits.
    """
    r1, r2 = rule_pair if isinstance(rule_pair, (tuple, list)) else (rule_pair, rotate_180(rule_pair))
    sweep = [tuple(x) for x in lattice_sweep]
    if len(sweep) < 4:
        raise ValueError("family fits need at least 4 lattice sizes")
    pts = [_family_point(r1, r2, H, L, seed) for H, L in sweep]
    ks = [p.k for p in pts if p.k > 0]
    if not ks:
        return FamilyDescriptor((r1, r2), None, None, None, "", pts, pts, "no lattice encodes a qubit")
    def sig(p):
        return (p.k, Fraction(p.d_c, p.n) if p.d_c else None)

    sigs = [sig(p) for p in pts if p.k > 0]
    counts = {s: sigs.count(s) for s in set(sigs)}
    k, slope = max(sorted(counts, key=str), key=lambda x: counts[x])
    fam = [p for p in pts if sig(p) == (k, slope)]
    excl = [p for p in pts if sig(p) != (k, slope)]
    constraint = _describe_exclusion(pts, excl)
    desc = FamilyDescriptor((r1, r2), k, slope, None, constraint, fam, excl)
    if len(fam) < 2 or slope is None:
        desc.k = None
        desc.dc_slope = None
        desc.message = "fewer than two lattices share k and d_c / n"
        return desc
    cand_mu = sorted({Fraction(p.d, p.H) for p in fam if p.d})
    cand_nu = sorted({Fraction(p.d, p.L) for p in fam if p.d})
    fits = [
        (mu, nu)
        for mu in cand_mu
        for nu in cand_nu
        if all(p.d == min(mu * p.H, nu * p.L) for p in fam)
    ]
    if fits:
        desc.d_coeffs = max(fits, key=lambda f: (f[0] == f[1], -abs(f[0] - f[1]), f))
    else:
        desc.message = (desc.message + "; " if desc.message else "") + "d does not follow min(mu*H, nu*L)"
    return desc
