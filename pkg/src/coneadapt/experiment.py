"""Monte Carlo success-rate experiments, cost-bound reports and the adversary demo."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from . import _uniform
from .cone import ConeSpec, cost_bounds
from .funlab import cone_probability, make_bump, oscillatory_fluky, sample_bump
from .heuristic import heuristic_trapezoid
from .linf import SplineFamily, approximate_adaptive, sup_error_on_grid
from .trapezoid import TrapezoidFamily, integrate_adaptive

__all__ = [
    "ExperimentConfig",
    "RunRecord",
    "ExperimentRow",
    "ExperimentReport",
    "run_experiment",
    "run_one",
    "bounds_report",
    "fool_demo",
    "CSV_COLUMNS",
]

PROBLEMS = {"integrate": "integration", "approximate": "approximation"}
OUTCOMES = ("success_no_warning", "success_warning", "failure_no_warning", "failure_warning")

CSV_COLUMNS = (
    "problem", "tau", "n_functions", "eps", "budget", "seed",
    "prob_in_cone_initial", "prob_in_cone_final",
    *OUTCOMES,
    *(f"count_{o}" for o in OUTCOMES),
    "count_in_cone_initial", "count_in_cone_final", "audit_violations",
)


@dataclass
class ExperimentConfig:
    problem: str = "integrate"
    n_functions: int = 10000
    eps: float = 1e-8
    tau_list: list = field(default_factory=lambda: [10.0, 100.0, 1000.0])
    budget: int = 10**7
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {sorted(PROBLEMS)}")
        if self.n_functions < 1 or self.workers < 1 or self.budget < 2:
            raise ValueError("n_functions, workers must be >= 1 and budget >= 2")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if any(not t >= 2 for t in self.tau_list):
            raise ValueError("every tau must be at least 2")


@dataclass
class RunRecord:
    index: int
    tau: float
    a: float
    z: float
    error: float
    cost: int
    success: bool
    warning: bool
    in_cone_initial: bool
    in_cone_final: bool
    final_tau: float


@dataclass
class ExperimentRow:
    tau: float
    n_functions: int
    counts: dict
    count_in_cone_initial: int
    count_in_cone_final: int
    audit_violations: int
    prob_in_cone_theory: float

    def fraction(self, key: str) -> float:
        return self.counts[key] / self.n_functions

    @property
    def prob_in_cone_initial(self) -> float:
        return self.count_in_cone_initial / self.n_functions

    @property
    def prob_in_cone_final(self) -> float:
        return self.count_in_cone_final / self.n_functions

    def exact_fractions(self) -> dict:
        return {k: Fraction(v, self.n_functions) for k, v in self.counts.items()}


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list
    records: list = field(default_factory=list, repr=False)

    @property
    def audit_violations(self) -> int:
        return sum(r.audit_violations for r in self.rows)

    def row(self, tau: float) -> ExperimentRow:
        for r in self.rows:
            if r.tau == tau:
                return r
        raise KeyError(tau)

    def to_dicts(self) -> list:
        c = self.config
        out = []
        for r in self.rows:
            d = {
                "problem": c.problem, "tau": r.tau, "n_functions": r.n_functions,
                "eps": c.eps, "budget": c.budget, "seed": c.seed,
                "prob_in_cone_initial": r.prob_in_cone_initial,
                "prob_in_cone_final": r.prob_in_cone_final,
            }
            d.update({o: r.fraction(o) for o in OUTCOMES})
            d.update({f"count_{o}": r.counts[o] for o in OUTCOMES})
            d.update(count_in_cone_initial=r.count_in_cone_initial,
                     count_in_cone_final=r.count_in_cone_final,
                     audit_violations=r.audit_violations)
            out.append(d)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for d in self.to_dicts():
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in d.items()})
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"config": asdict(self.config), "rows": self.to_dicts()}, indent=2)


def run_one(problem: str, spec, tau: float, eps: float, budget: int, index: int = 0) -> RunRecord:
    """Run the adaptive algorithm for ``problem`` on one bump and classify the outcome."""
    bump = make_bump(spec)
    if problem == "integrate":
        res = integrate_adaptive(bump, eps, tau=tau, budget=budget)
        error = abs(res.answer - bump.exact_integral)
    else:
        res, approximant = approximate_adaptive(bump, eps, tau=tau, budget=budget)
        error = sup_error_on_grid(bump, approximant)
    ratio = bump.cone_ratio
    return RunRecord(index, tau, bump.a, bump.z, error, res.cost, error <= eps, res.warning,
                     ratio <= tau, ratio <= res.final_tau, res.final_tau)


def _run_chunk(args):
    problem, seed, indices, tau_list, eps, budget = args
    family = PROBLEMS[problem]
    out = []
    for idx in indices:
        spec = sample_bump([seed, idx], family)
        for tau in tau_list:
            out.append(run_one(problem, spec, tau, eps, budget, idx))
    return out


def run_experiment(config: ExperimentConfig, keep_records: bool = False) -> ExperimentReport:
    """Sample ``n_functions`` bumps and run the adaptive algorithm for every ``tau``.

    Function ``i`` is drawn from the generator seeded with ``[seed, i]``, so
    the report does not depend on ``workers``.  A run succeeds when its true
    error is at most ``eps``.
    """
    c = config
    taus = [float(t) for t in c.tau_list]
    idx = list(range(c.n_functions))
    nchunks = max(1, min(c.n_functions, 8 * c.workers))
    chunks = [idx[i::nchunks] for i in range(nchunks)]
    jobs = [(c.problem, c.seed, ch, taus, c.eps, c.budget) for ch in chunks if ch]
    if c.workers == 1:
        parts = [_run_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=c.workers) as ex:
            parts = list(ex.map(_run_chunk, jobs))
    records = sorted((r for p in parts for r in p), key=lambda r: (r.index, taus.index(r.tau)))

    rows = []
    for tau in taus:
        rs = [r for r in records if r.tau == tau]
        counts = dict.fromkeys(OUTCOMES, 0)
        for r in rs:
            key = ("success" if r.success else "failure") + ("_warning" if r.warning else "_no_warning")
            counts[key] += 1
        rows.append(ExperimentRow(
            tau, len(rs), counts,
            sum(r.in_cone_initial for r in rs),
            sum(r.in_cone_final for r in rs),
            sum((not r.success) and r.in_cone_final and not r.warning for r in rs),
            cone_probability(tau, PROBLEMS[c.problem]),
        ))
    return ExperimentReport(c, rows, records if keep_records else [])


def bounds_report(problem: str, tau: float, eps: float, seminorm_value: float, which_norm: str = "F",
                  sigma: Optional[float] = None) -> list:
    """Cost bounds for one input, instantiated with the spline-family formulas.

    Rows, each a dict with ``row``, ``kind`` (``lower``/``exact``/``upper``)
    and ``value``:

    * ``ball_lower`` -- any algorithm guaranteed on the ball of radius ``sigma``;
    * ``cone_lower`` -- any algorithm guaranteed on the cone (``None`` if ``tau <= 2``);
    * ``non_adaptive`` -- fixed sample size for the ball, independent of the input;
    * ``adaptive_min``, ``adaptive_max`` -- the adaptive algorithm's cost bracket.

    With ``which_norm="Ftilde"`` the strong semi-norm entering the lower
    bounds is replaced by its guaranteed minimum ``2 * seminorm_value``.
    ``sigma`` defaults to the strong semi-norm (or ``tau * seminorm_value``
    for the weak one, the largest it can be inside the cone).
    """
    if problem not in PROBLEMS:
        raise ValueError(f"problem must be one of {sorted(PROBLEMS)}")
    if which_norm not in ("F", "Ftilde"):
        raise ValueError("which_norm must be F or Ftilde")
    if not seminorm_value > 0 or not eps > 0 or not tau >= 2:
        raise ValueError("need seminorm_value > 0, eps > 0 and tau >= 2")
    family = TrapezoidFamily() if problem == "integrate" else SplineFamily()
    if which_norm == "F":
        s, sig = seminorm_value, sigma or seminorm_value
    else:
        s, sig = 2 * seminorm_value, sigma or tau * seminorm_value
    lo, up = cost_bounds("multi_stage", family, ConeSpec(tau, 2.0), seminorm_value, which_norm, eps)
    return [
        {"row": "ball_lower", "kind": "lower", "value": _uniform.lower_bound("ball", sig, s, eps)},
        {"row": "cone_lower", "kind": "lower",
         "value": _uniform.lower_bound("cone", tau, s, eps) if tau > 2 else None},
        {"row": "non_adaptive", "kind": "exact", "value": _uniform.h_inverse_closed(eps / sig)},
        {"row": "adaptive_min", "kind": "lower", "value": lo},
        {"row": "adaptive_max", "kind": "upper", "value": up},
    ]


def fool_demo(k: int = 8, eps: float = 1e-14, tau: float = 100.0, budget: int = 10**7,
              min_level: int = 1) -> dict:
    """Heuristic doubling versus the guaranteed rule on ``1 - cos(2 pi k x)``."""
    f = oscillatory_fluky(k)
    truth = f.exact_integral
    h = heuristic_trapezoid(f, eps, min_level=min_level)
    g = integrate_adaptive(f, eps, tau=tau, budget=budget)
    h_err, g_err = abs(h.answer - truth), abs(g.answer - truth)
    return {
        "k": k, "eps": eps, "tau": tau,
        "true_value": float(truth),
        "cone_ratio": f.cone_ratio,
        "in_cone": bool(f.cone_ratio <= tau),
        "heuristic": {
            "answer": float(h.answer), "claimed_error": float(h.claimed_error), "true_error": float(h_err),
            "stopped_at": h.stopped_at, "cost": h.cost,
            "fooled": bool(h.claimed_error <= eps < h_err),
        },
        "guaranteed": {
            "answer": float(g.answer), "true_error": float(g_err), "cost": g.cost, "final_n": g.final_n,
            "warning": bool(g.warning), "success": bool(g_err <= eps),
        },
    }

