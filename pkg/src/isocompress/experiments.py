"""Scenario runners behind the command-line harness.

Each runner takes a validated :class:`ExperimentConfig` and returns a
:class:`Table`: fixed CSV columns, rows in deterministic order, and summary
lines for the terminal. Nothing here touches the filesystem.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .compression import CompressedState, compress, min_feasible_width, probe_weight
from .config import ExperimentConfig
from .discrimination import discriminate_report, helstrom_cost, make_general_pair
from .errors import ConfigError, InvariantError
from .maxent import CutoffPolicy, shannon_entropy
from .well_basis import StateVector, WellGeometry, state_energy

SCHEMA_VERSION = 1
ENERGY_RTOL = 1e-9
NORM_TOL = 1e-9


@dataclass
class Table:
    scenario: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    summary: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def schema(self) -> str:
        return f"{self.scenario}/{SCHEMA_VERSION}"


@dataclass(frozen=True)
class ScanRow:
    N: int
    epsilon: float
    cost_after: float
    cost_delta: float
    beta: float
    cutoff_used: int


def low_state(width: float) -> StateVector:
    """(|1> + |2>)/sqrt2, the state that compresses onto the new ground level."""
    h = 1.0 / math.sqrt(2.0)
    return StateVector.from_levels({1: h, 2: h}, WellGeometry(width))


def spread_state(N: int, width: float) -> StateVector:
    """(|1> + |N>)/sqrt2."""
    h = 1.0 / math.sqrt(2.0)
    return StateVector.from_levels({1: h, N: h}, WellGeometry(width))


def _policy(p: dict) -> CutoffPolicy:
    return CutoffPolicy(tail_tol=p["tail_tol"])


def _target_width(p: dict) -> float:
    if p["new_width"] is not None:
        return p["new_width"]
    return min_feasible_width(low_state(p["width"]))


def validate_compressed(cs: CompressedState, constraint_tol: float = 1e-10) -> None:
    """Re-check normalization and energy conservation of a compressed state."""
    total = float(cs.weights.weights.sum())
    if abs(total - 1.0) > NORM_TOL:
        raise InvariantError(f"compressed weights sum to {total!r}")
    rtol = max(ENERGY_RTOL, 10.0 * constraint_tol)
    rel = abs(cs.energy - cs.initial_energy) / cs.initial_energy
    if rel > rtol:
        raise InvariantError(
            f"energy not conserved: {cs.energy!r} vs {cs.initial_energy!r} (rel {rel:.3g})")


def _weight_rows(cs: CompressedState, min_levels: int = 3) -> list[list]:
    return [[n, probe_weight(cs, n)] for n in range(1, max(cs.cutoff, min_levels) + 1)]


def run_example1(cfg: ExperimentConfig) -> Table:
    p = cfg.parameters
    phi = low_state(p["width"])
    w = _target_width(p)
    expect = p["expect_degenerate"]
    if expect is None:
        expect = p["new_width"] is None
    cs = compress(phi, w, constraint_tol=p["constraint_tol"], cutoff_policy=_policy(p))
    validate_compressed(cs, p["constraint_tol"])
    if expect and not cs.degenerate:
        raise InvariantError(f"width {w!r} did not give the single-level outcome")
    t = Table("example1", ["level", "weight"], _weight_rows(cs))
    head = ", ".join(f"{probe_weight(cs, n):.6g}" for n in range(1, 4))
    t.summary = [
        f"initial energy        {state_energy(phi):.17g}",
        f"min feasible width    {min_feasible_width(phi):.17g}",
        f"new width             {w:.17g}",
        f"final energy          {cs.energy:.17g}",
        f"degenerate            {cs.degenerate}",
        f"final weights         ({head}, ...)",
    ]
    if not cs.degenerate:
        t.summary.append(f"beta                  {cs.beta:.17g}")
    t.stats = {"degenerate": cs.degenerate, "energy": cs.energy, "p1": probe_weight(cs, 1)}
    return t


def run_spread(cfg: ExperimentConfig) -> Table:
    p = cfg.parameters
    psi = spread_state(p["N"], p["width"])
    w = _target_width(p)
    cs = compress(psi, w, constraint_tol=p["constraint_tol"], cutoff_policy=_policy(p))
    validate_compressed(cs, p["constraint_tol"])
    rep = discriminate_report(p["xi"], low_state(p["width"]), psi, w,
                              constraint_tol=p["constraint_tol"], cutoff_policy=_policy(p))
    t = Table("spread", ["level", "weight"], _weight_rows(cs))
    t.summary = [
        f"N                     {p['N']}",
        f"initial energy        {state_energy(psi):.17g}",
        f"new width             {w:.17g}",
        f"target <n^2>          {cs.solution.target:.17g}",
        f"beta                  {cs.beta:.17g}",
        f"cutoff                {cs.cutoff}",
        f"entropy               {shannon_entropy(cs.weights):.17g}",
        f"epsilon (p_1)         {probe_weight(cs, 1):.17g}",
        f"overlap before        {rep.overlap_before:.17g}",
        f"cost before           {rep.cost_before:.17g}",
        f"cost after ({rep.overlap_kind})  {rep.cost_after:.17g}",
        f"cost delta            {rep.cost_delta:.17g}",
    ]
    t.stats = {"epsilon": probe_weight(cs, 1), "beta": cs.beta, "report": rep}
    return t


def scan_row(N: int, width: float, new_width: float, xi: float,
             constraint_tol: float = 1e-10, policy: CutoffPolicy | None = None) -> ScanRow:
    phi = low_state(width)
    psi = spread_state(N, width)
    cs = compress(psi, new_width, constraint_tol=constraint_tol, cutoff_policy=policy)
    validate_compressed(cs, constraint_tol)
    rep = discriminate_report(xi, phi, psi, new_width, constraint_tol=constraint_tol,
                              cutoff_policy=policy)
    return ScanRow(N, rep.overlap_after, rep.cost_after, rep.cost_delta, cs.beta, cs.cutoff)


def loglog_slope(x, y) -> float:
    """Least-squares slope of log(y) against log(x)."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


def run_epsilon_scan(cfg: ExperimentConfig) -> Table:
    p = cfg.parameters
    w = _target_width(p)
    policy = _policy(p)

    def one(N):
        return scan_row(N, p["width"], w, p["xi"], p["constraint_tol"], policy)

    if p["jobs"] > 1:
        with ThreadPoolExecutor(max_workers=p["jobs"]) as pool:
            rows = list(pool.map(one, p["N_list"]))
    else:
        rows = [one(N) for N in p["N_list"]]

    for a, b in zip(rows, rows[1:]):
        if b.N > a.N and not b.epsilon < a.epsilon:
            raise InvariantError(f"epsilon did not decrease from N={a.N} to N={b.N}")

    t = Table("epsilon_scan", ["N", "epsilon", "cost_after", "cost_delta", "beta", "cutoff_used"],
              [[r.N, r.epsilon, r.cost_after, r.cost_delta, r.beta, r.cutoff_used] for r in rows])
    t.summary = [f"new width  {w:.17g}", f"xi         {p['xi']:.17g}"]
    t.summary += [f"N={r.N:<6d} epsilon={r.epsilon:.10g}  cost_after={r.cost_after:.10g}"
                  for r in rows]
    distinct = {r.N for r in rows}
    if len(distinct) > 1:
        slope = loglog_slope([r.N for r in rows], [r.epsilon for r in rows])
        t.summary.append(f"log-log slope of epsilon vs N: {slope:.17g}")
        t.stats["slope"] = slope
    t.stats["rows"] = rows
    return t


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    count = int(round((stop - start) / step)) + 1
    return np.array([round(start + k * step, 12) for k in range(count)])


def run_cost_grid(cfg: ExperimentConfig) -> Table:
    p = cfg.parameters
    xis = _grid(p["xi_start"], p["xi_stop"], p["xi_step"])
    eps = _grid(p["eps_start"], p["eps_stop"], p["eps_step"])
    if xis[-1] >= 1 or eps[-1] > 1:
        raise ConfigError("grid runs past its allowed range")
    a = p["overlap_before"]
    rows = []
    min_in, negatives = math.inf, 0
    for x in xis:
        c_before = helstrom_cost(x, a)
        for e in eps:
            c_after = helstrom_cost(x, e)
            d = c_before - c_after
            rows.append([float(x), float(e), c_before, c_after, d])
            if e <= a:
                min_in = min(min_in, d)
            if d < 0:
                negatives += 1
    t = Table("cost_grid", ["xi", "epsilon", "cost_before", "cost_after", "delta"], rows)
    t.summary = [
        f"grid                  {len(xis)} x {len(eps)}",
        f"overlap before        {a:.17g}",
        f"min delta (eps<=before) {min_in:.17g}" if math.isfinite(min_in)
        else "min delta (eps<=before) n/a",
        f"negative deltas       {negatives}",
    ]
    if math.isfinite(min_in) and min_in < -1e-12:
        raise InvariantError(f"cost difference negative ({min_in!r}) with epsilon <= overlap")
    t.stats = {"min_delta": min_in, "negatives": negatives}
    return t


def run_general_pair(cfg: ExperimentConfig) -> Table:
    p = cfg.parameters
    phi, psi = make_general_pair(p["alpha"], p["N"], p["width"])
    w = _target_width(p)
    rep = discriminate_report(p["xi"], phi, psi, w, constraint_tol=p["constraint_tol"],
                              cutoff_policy=_policy(p))
    cols = ["alpha", "N", "xi", "new_width", "overlap_before", "overlap_after", "overlap_kind",
            "cost_before", "cost_after", "cost_delta", "probe_cost", "beta_psi", "cutoff_psi"]
    row = [p["alpha"], p["N"], p["xi"], w, rep.overlap_before, rep.overlap_after,
           rep.overlap_kind, rep.cost_before, rep.cost_after, rep.cost_delta, rep.probe_cost,
           rep.beta_psi, rep.cutoff_psi]
    t = Table("general_pair", cols, [row])
    t.summary = [f"{c:<16s}{v:.17g}" if isinstance(v, float) else f"{c:<16s}{v}"
                 for c, v in zip(cols, row)]
    t.summary.append(f"({rep.label})")
    t.stats = {"report": rep}
    return t


RUNNERS = {
    "example1": run_example1,
    "spread": run_spread,
    "epsilon_scan": run_epsilon_scan,
    "cost_grid": run_cost_grid,
    "general_pair": run_general_pair,
}


def run(cfg: ExperimentConfig) -> Table:
    return RUNNERS[cfg.scenario](cfg)
