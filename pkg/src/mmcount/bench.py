"""Batch evaluation: per-run records, TQP scores and relative bound quality."""
from __future__ import annotations

import csv
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import permutations
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .formula import CnfFormula, compute_cut, read_dimacs
from .hashcount import DEFAULT_DELTA, hashcount_lower_bound, independent_support
from .mingen import encode_mingen, read_transactions
from .minlb import DEFAULT_CUT_LIMIT, minlb
from .minmodel import BRUTE_FORCE_MAX_VARS, DEFAULT_CAP, brute_force_count
from .projenum import ProjEnumConfig, proj_enum_count
from .results import LowerBoundResult
from .sat import Budget, BudgetExceeded, is_satisfiable

log = logging.getLogger(__name__)

METHOD_NAMES = ("projenum", "hashcount", "minlb", "bruteforce")
INSTANCE_SUFFIXES = (".cnf", ".txns")


@dataclass
class TqpConfig:
    timeout_s: float = 5000.0
    log_base: float = 10.0

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")
        if self.log_base <= 1:
            raise ValueError("log base must exceed 1")


@dataclass
class BenchConfig(TqpConfig):
    seed: int = 0
    delta: float = DEFAULT_DELTA
    cut_limit: int = DEFAULT_CUT_LIMIT
    cap: int = DEFAULT_CAP
    workers: int = 1
    xor_over_all_vars: bool = False


@dataclass
class RunRecord:
    """One method on one instance.  No bound is recorded as ``has_bound=False``."""

    instance: str
    method: str
    time_s: float
    status: str = "ok"
    has_bound: bool = True
    bound_log2: Optional[float] = None
    count: Optional[int] = None
    exact: bool = False
    seed: Optional[int] = None
    delta: Optional[float] = None
    cut_size: Optional[int] = None
    support_size: Optional[int] = None
    error: Optional[str] = None

    def __post_init__(self):
        if self.time_s < 0:
            raise ValueError("elapsed time must be non-negative")

    @classmethod
    def no_bound(cls, instance, method, time_s, status, **kw) -> "RunRecord":
        return cls(instance, method, time_s, status=status, has_bound=False, **kw)

    def log_c_plus_1(self, base: float) -> float:
        """``log_base(C + 1)`` computed without materializing huge bounds."""
        if self.count is not None:
            return math.log(self.count + 1) / math.log(base)
        return _log_pow2_plus_1(self.bound_log2) / math.log(base)

    def to_json(self) -> dict:
        return asdict(self)


def _log_pow2_plus_1(l2: Optional[float]) -> float:
    # natural log of 2**l2 + 1
    if l2 is None:
        return 0.0
    if l2 > 0:
        return l2 * math.log(2) + math.log1p(2.0 ** -l2)
    return math.log1p(2.0 ** l2)


def _tqp(t: float, log_c1: float, log_cmin1: float, timeout: float) -> float:
    return t + timeout * (1 + log_cmin1) / (1 + log_c1)


def tqp_score(rec: RunRecord, c_min: float, cfg: TqpConfig | None = None) -> float:
    """Time Quality Penalty: ``2T`` without a bound, else
    ``t + T * (1 + log(c_min + 1)) / (1 + log(C + 1))``."""
    cfg = cfg or TqpConfig()
    if not rec.has_bound:
        return 2 * cfg.timeout_s
    log_cmin1 = math.log(c_min + 1) / math.log(cfg.log_base)
    return _tqp(rec.time_s, rec.log_c_plus_1(cfg.log_base), log_cmin1, cfg.timeout_s)


def relative_quality(c_a: float, c_b: float, cfg: TqpConfig | None = None) -> float:
    """``(1 + log(C_A + 1)) / (1 + log(C_B + 1))``; above 1 means A's bound is better."""
    if c_a < 0 or c_b < 0:
        raise ValueError("bounds must be non-negative")
    base = (cfg or TqpConfig()).log_base
    return (1 + math.log(c_a + 1, base)) / (1 + math.log(c_b + 1, base))


# -- running -------------------------------------------------------------------

def load_instance(path: Path) -> CnfFormula:
    if path.suffix == ".txns":
        return encode_mingen(read_transactions(path)).formula
    return read_dimacs(path)


def _record_from(instance: str, method: str, res: LowerBoundResult, cfg: BenchConfig,
                 elapsed: float) -> RunRecord:
    d = res.details
    status = "timeout" if d.get("budget_hit") or d.get("timed_out") else "ok"
    # an enumeration cut off before finding anything returned no bound
    has_bound = not (status == "timeout" and res.count == 0)
    return RunRecord(instance, method, elapsed, status=status, has_bound=has_bound,
                     bound_log2=res.bound_log2,
                     count=res.count, exact=res.exact, seed=cfg.seed, delta=res.delta,
                     cut_size=d.get("cut_size"), support_size=d.get("support_size"))


def run_one(path: Path | str, method: str, cfg: BenchConfig, instance: str | None = None) -> RunRecord:
    """Run one method on one instance; failures become no-bound records."""
    path = Path(path)
    instance = instance or path.name
    start = time.monotonic()
    budget = Budget(cfg.timeout_s)
    try:
        formula = load_instance(path)
        if method == "projenum":
            res = proj_enum_count(formula, compute_cut(formula), ProjEnumConfig(cfg.cap), budget)
        elif method == "hashcount":
            sat = is_satisfiable(formula, budget)
            if sat is None:
                raise BudgetExceeded
            if not sat:
                res = LowerBoundResult.from_count(0, True, "HashCount")
            else:
                xs = formula.all_vars if cfg.xor_over_all_vars else independent_support(formula, budget)
                res = hashcount_lower_bound(formula, xs, cfg.delta, cfg.seed, budget)
        elif method == "minlb":
            res = minlb(formula, cfg.delta, cfg.cut_limit, ProjEnumConfig(cfg.cap), cfg.seed, budget,
                        cfg.xor_over_all_vars)
        elif method == "bruteforce":
            if formula.num_vars > BRUTE_FORCE_MAX_VARS:
                return RunRecord.no_bound(instance, method, time.monotonic() - start, "refused",
                                          seed=cfg.seed)
            res = LowerBoundResult.from_count(brute_force_count(formula), True, "BruteForce")
        else:
            raise ValueError(f"unknown method {method!r}")
    except BudgetExceeded:
        return RunRecord.no_bound(instance, method, time.monotonic() - start, "timeout", seed=cfg.seed)
    except Exception as exc:  # a failing instance must not abort the suite
        log.warning("%s on %s failed: %s", method, instance, exc)
        return RunRecord.no_bound(instance, method, time.monotonic() - start, "error",
                                  seed=cfg.seed, error=str(exc))
    return _record_from(instance, method, res, cfg, time.monotonic() - start)


def _run_task(args):
    return run_one(*args)


@dataclass
class Report:
    config: BenchConfig
    records: list[RunRecord] = field(default_factory=list)

    @property
    def methods(self) -> list[str]:
        return sorted({r.method for r in self.records}, key=_method_key)

    @property
    def instances(self) -> list[str]:
        return sorted({r.instance for r in self.records})

    def by_instance(self) -> dict[str, dict[str, RunRecord]]:
        out: dict[str, dict[str, RunRecord]] = {}
        for r in self.records:
            out.setdefault(r.instance, {})[r.method] = r
        return out

    def scores(self) -> dict[str, dict[str, float]]:
        """TQP score per instance and method."""
        out = {}
        base, timeout = self.config.log_base, self.config.timeout_s
        for inst, recs in self.by_instance().items():
            bounded = [r.log_c_plus_1(base) for r in recs.values() if r.has_bound]
            log_cmin1 = min(bounded, default=0.0)
            out[inst] = {
                m: (_tqp(r.time_s, r.log_c_plus_1(base), log_cmin1, timeout) if r.has_bound
                    else 2 * timeout)
                for m, r in recs.items()
            }
        return out

    def tqp_totals(self) -> dict[str, float]:
        totals = {m: 0.0 for m in self.methods}
        for per in self.scores().values():
            for m, s in per.items():
                totals[m] += s
        return totals

    def relative_quality(self) -> dict[str, list[tuple[str, float]]]:
        """Pairwise ``r_AB`` series over instances where both A and B returned a bound."""
        base = self.config.log_base
        series: dict[str, list[tuple[str, float]]] = {}
        grouped = self.by_instance()
        for a, b in permutations(self.methods, 2):
            pts = []
            for inst in self.instances:
                ra, rb = grouped[inst].get(a), grouped[inst].get(b)
                if ra and rb and ra.has_bound and rb.has_bound:
                    pts.append((inst, (1 + ra.log_c_plus_1(base)) / (1 + rb.log_c_plus_1(base))))
            series[f"{a}/{b}"] = pts
        return series

    def summary(self) -> dict:
        return {
            "instances": len(self.instances),
            "methods": self.methods,
            "log_base": self.config.log_base,
            "timeout_s": self.config.timeout_s,
            "seed": self.config.seed,
            "delta": self.config.delta,
            "tqp_totals": self.tqp_totals(),
            "relative_quality": {k: [list(p) for p in v] for k, v in self.relative_quality().items()},
        }


def _method_key(m: str):
    return (METHOD_NAMES.index(m) if m in METHOD_NAMES else len(METHOD_NAMES), m)


def collect_instances(root: Path | str) -> list[Path]:
    root = Path(root)
    if root.is_file():
        return [root]
    return sorted(p for p in root.rglob("*") if p.suffix in INSTANCE_SUFFIXES and p.is_file())


def run_suite(instances: Iterable[Path | str], methods: Sequence[str],
              cfg: BenchConfig | None = None) -> Report:
    """Evaluate every method on every instance.

    Records come back ordered by (instance, method) regardless of
    ``cfg.workers``.
    """
    cfg = cfg or BenchConfig()
    for m in methods:
        if m not in METHOD_NAMES:
            raise ValueError(f"unknown method {m!r}; choose from {', '.join(METHOD_NAMES)}")
    tasks = [(Path(p), m, cfg) for p in sorted(map(Path, instances)) for m in methods]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_run_task, tasks))
    else:
        records = [_run_task(t) for t in tasks]
    records.sort(key=lambda r: (r.instance, _method_key(r.method)))
    return Report(cfg, records)


FIELDS = ("instance", "method", "status", "time_s", "has_bound", "bound_log2", "count", "exact", "seed", "delta",
          "cut_size", "support_size", "error")


def write_jsonl(report: Report, path: Path | str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in report.records:
            fh.write(json.dumps({k: getattr(r, k) for k in FIELDS}, sort_keys=True) + "\n")
        fh.write(json.dumps({"summary": report.summary()}, sort_keys=True) + "\n")


def write_csv(report: Report, path: Path | str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=FIELDS)
        w.writeheader()
        for r in report.records:
            w.writerow({k: getattr(r, k) for k in FIELDS})


def read_jsonl(path: Path | str) -> tuple[list[RunRecord], dict]:
    records, summary = [], {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            if "summary" in obj:
                summary = obj["summary"]
            else:
                records.append(RunRecord(**obj))
    return records, summary
