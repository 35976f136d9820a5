"""Instance generators, randomized check suites and timing.

Every suite is a pure function of its config and seed, so a failure replays
exactly. A failing instance is written to ``failures/`` (instance JSON plus
whatever trace the solver produced) before the suite aborts.
"""

from __future__ import annotations

import json
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Optional

from .core import AmmsError, Instance, Partition, ReducedInstanceView, alpha_for, format_rational
from .matching import build_graph, perfect_matching
from .mms import mms, mms_partition, normalize
from .procedures import bag_fill, capped_bag_filling, load_balancing, partition_merging
from .solvers import ReductionTrace, solve
from .verify import naive_mms, verify_allocation

log = logging.getLogger(__name__)

COST_MODELS = ("uniform", "rational", "adversarial")


class SuiteFailure(AmmsError):
    """A randomized check found a counterexample."""

    def __init__(self, message: str, artifact: Optional[Path] = None):
        super().__init__(message)
        self.artifact = artifact


def _small_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 8), rng.choice((2, 3, 4, 8)))


def _adversarial_candidate(n: int, m: int, rng: random.Random) -> Instance:
    # Everyone but the last agent finds one bundle of the last agent's MMS
    # partition cheap and every other item expensive.
    owner = [1] * m if rng.random() < 0.5 else [rng.randint(1, 3) for _ in range(m)]
    cheap = mms_partition(Instance.from_rows([owner]), 0, range(m), n)[0] if m else frozenset()
    cheap_hi = rng.randint(1, 3)
    rows = []
    for _ in range(n - 1):
        rows.append([
            rng.randint(1, cheap_hi) if e in cheap else rng.randint(cheap_hi + 1, 4 * cheap_hi + 2)
            for e in range(m)
        ])
    rows.append(owner)
    return Instance.from_rows(rows)


def gen_random(n: int, m: int, cost_model: str = "uniform", seed: int = 0) -> Instance:
    """A random instance, fully determined by its arguments.

    ``uniform``: integer costs in [0, 100]. ``rational``: small-denominator
    rationals. ``adversarial``: built so that the feasibility graph on the last
    agent's MMS partition has no perfect matching. This is retried up to 50
    times and can be impossible for very few items.
    """
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    rng = random.Random(f"{cost_model}:{n}:{m}:{seed}")
    if cost_model == "uniform":
        return Instance.from_rows([[rng.randint(0, 100) for _ in range(m)] for _ in range(n)])
    if cost_model == "rational":
        return Instance.from_rows([[_small_rational(rng) for _ in range(m)] for _ in range(n)])
    if cost_model == "adversarial":
        candidate = _adversarial_candidate(n, m, rng)
        for _ in range(50):
            norm = normalize(candidate)
            graph = build_graph(norm.full_view(), norm.witnesses[n - 1])
            if perfect_matching(graph) is None:
                break
            candidate = _adversarial_candidate(n, m, rng)
        return candidate
    raise ValueError(f"unknown cost model {cost_model!r}; choose from {COST_MODELS}")


TIGHT_EXAMPLE_ROWS = (
    ("3/8", "3/8", "3/8", "3/8", "3/8", "1/4", "1/4", "5/8"),
    ("3/8", "3/8", "3/8", "3/8", "3/8", "1/4", "1/4", "5/8"),
    ("1/2", "1/2", "1/3", "1/3", "1/3", "1/3", "1/3", "1/3"),
)


def tight_example() -> Instance:
    """The three-agent, eight-item instance on which the three-agent solver reaches 9/8."""
    return Instance.from_rows(TIGHT_EXAMPLE_ROWS)


gen_paper_example = tight_example


def _liking(liked: Iterable[int], blocks: int = 4) -> list[int]:
    # Items 2j, 2j+1 form bundle j of the pairing partition. A disliked bundle
    # holds one item of cost 6, which is also the agent's MMS.
    liked = set(liked)
    row = []
    for j in range(blocks):
        row += [1, 1] if j in liked else [6, 1]
    return row


def _atomic(d: int) -> list[int]:
    # Four blocks of four items with costs d, 100, 101, 103: every MMS bundle
    # takes exactly one item of each block.
    return [d] * 4 + [100] * 4 + [101] * 4 + [103] * 4


def constructed_instances() -> dict[str, Instance]:
    """Hand-built instances, one per solver branch, keyed by the case tag."""
    lb_row = [1, 1, 1, 4, 4, 4, 4, 4, 4]
    return {
        "three/direct": tight_example(),
        "three/load-balancing": Instance.from_rows([lb_row, lb_row, [1] * 9]),
        "four/s2": Instance.from_rows([_liking([0]), _liking([0]), [1] * 8, [1] * 8]),
        "four/s3-l2-single": Instance.from_rows([_liking([0]), _liking([0]), _liking([1]), [1] * 8]),
        "four/s3-l2-double": Instance.from_rows(
            [[7, 8, 6, 7, 6, 1, 9, 9], [10, 6, 8, 10, 1, 4, 11, 3], [3, 2, 9, 5, 1, 11, 2, 2],
             [1, 2, 1, 1, 1, 1, 1, 1]]),
        "four/s3-l1-atomic": Instance.from_rows([_liking([0])] * 3 + [[1] * 8]),
        "four/s3-l1-beta-low": Instance.from_rows([_atomic(10)] * 3 + [[1] * 16]),
        "four/s3-l1-beta-boundary": Instance.from_rows([_atomic(76)] * 3 + [[1] * 16]),
        "four/s3-l1-beta-high": Instance.from_rows([_atomic(90)] * 3 + [[1] * 16]),
    }


def hall_example(extra_edge: bool = False) -> tuple[Instance, Partition]:
    """Four agents over the pairing partition of eight items.

    Feasibility edges are 0-P0, 1-P1, 2-P1, 3-P1 and 3-P3. With ``extra_edge``
    agent 3 also likes P2, which shrinks the maximum violator to {0, 1, 2}.
    """
    last = [1, 3] + ([2] if extra_edge else [])
    rows = [_liking([0]), _liking([1]), _liking([1]), _liking(last)]
    return Instance.from_rows(rows), Partition([frozenset({2 * j, 2 * j + 1}) for j in range(4)])


# -- failure artifacts -------------------------------------------------------

def write_failure(directory, name: str, instance: Instance, extra: Optional[dict] = None) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name}.json"
    payload = {"instance": instance.to_json()}
    if extra:
        payload.update(extra)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True))
    return path


# -- per-instance checks -----------------------------------------------------

def check_solver(instance: Instance) -> dict:
    """Solve, verify independently, and check every reduction step."""
    allocation, trace = solve(instance)
    alpha = alpha_for(instance.n)
    report = verify_allocation(instance, allocation, alpha)
    result = {
        "passed": report.passed,
        "reason": report.reason,
        "max_ratio": max(report.ratios, default=Fraction(0)),
        "case": allocation.case,
        "rounds": 0,
    }
    if isinstance(trace, ReductionTrace):
        result["trace"] = trace.to_json()
        result["rounds"] = len(trace.steps)
        norm = normalize(instance)
        if len(trace.steps) > instance.n:
            result.update(passed=False, reason="more than n reduction rounds")
        for step in trace.steps:
            for i in step.survivors:
                if norm.cost(i, step.remaining_items) > len(step.survivors):
                    result.update(passed=False, reason=f"agent {i} breaks the valid-reduction bound")
    return result


def _solver_job(args) -> tuple:
    n, m, model, seed = args
    instance = gen_random(n, m, model, seed)
    try:
        return args, instance, check_solver(instance)
    except AmmsError as exc:
        return args, instance, {"passed": False, "reason": f"{type(exc).__name__}: {exc}"}


def _oracle_job(rng: random.Random, max_items: int) -> tuple[bool, dict]:
    m = rng.randint(0, max_items)
    k = rng.randint(1, 4)
    row = [Fraction(rng.randint(0, 30), rng.choice((1, 2, 3, 4))) for _ in range(m)]
    items = [e for e in range(m) if rng.random() < 0.85]
    got = mms(Instance.from_rows([row]) if m else Instance.from_rows([[]]), 0, items, k).value
    want = naive_mms(row, items, k)
    return got == want, {"row": [format_rational(c) for c in row], "items": items, "k": k,
                         "dp": format_rational(got), "naive": format_rational(want)}


# -- lemma case generators ---------------------------------------------------

def positive_row(rng: random.Random, m: int, total_cap: int) -> list[Fraction]:
    """Item costs in (0, 1] with sum at most ``total_cap``."""
    row = [Fraction(rng.randint(1, 24), 24) for _ in range(m)]
    total = sum(row, Fraction(0))
    if total > total_cap:
        row = [c * total_cap / total for c in row]
    return row


def reduced_view(rng: random.Random, n: int, k: int, m: int, agent_pool: Optional[Iterable[int]] = None,
                 strict: bool = True) -> tuple:
    """A random normalized instance and a reduced view with ``k`` agents whose
    remaining cost is below ``k`` (at most ``k`` when ``strict`` is False)."""
    instance = Instance.from_rows([[rng.randint(1, 40) for _ in range(m)] for _ in range(n)])
    norm = normalize(instance)
    agents = sorted(rng.sample(range(n) if agent_pool is None else list(agent_pool), k))
    items = set(range(m))
    order = list(range(m))
    rng.shuffle(order)

    def ok(i):
        c = norm.cost(i, items)
        return c < k if strict else c <= k

    while not all(ok(i) for i in agents):
        items.discard(order.pop())
    return norm, ReducedInstanceView(norm, frozenset(agents), frozenset(items))


def lemma_checks(rng: random.Random) -> list[tuple[str, bool, dict]]:
    """One random case of each structural bound; returns ``(name, ok, detail)``."""
    out = []

    n_prime = rng.randint(1, 4)
    row = positive_row(rng, rng.randint(0, 10), n_prime)
    lb = load_balancing(range(len(row)), n_prime, row)
    ok = all(sum((row[x] for x in b if x != e), Fraction(0)) < 1 for b in lb for e in b)
    out.append(("load-balancing", ok, {"row": [format_rational(c) for c in row], "n_prime": n_prime}))

    row = positive_row(rng, rng.randint(0, 10), 2)
    halves = sorted(sum((row[e] for e in b), Fraction(0)) for b in load_balancing(range(len(row)), 2, row))
    ok = halves[1] <= Fraction(4, 3) and halves[0] <= 1
    out.append(("four-thirds-split", ok, {"row": [format_rational(c) for c in row]}))

    n = rng.randint(5, 8)
    k = rng.randint(1, (n + 1) // 2)
    norm, view = reduced_view(rng, n, k, rng.randint(k, 11), strict=False)
    agent = min(view.agents)
    bundles, leftover = bag_fill(view.items, k, view.row(agent))
    part = capped_bag_filling(view, agent)
    costs = part.costs(view, agent)
    ok = (len(leftover) <= k - 1 and all(c <= 1 for c in costs[:-1])
          and costs[-1] <= Fraction(k * k, 2 * k - 1))
    out.append(("capped-bag-filling", ok, {"n": n, "k": k, "costs": [format_rational(c) for c in costs]}))

    n = rng.randint(5, 8)
    k = rng.randint((n + 1) // 2 + 1, n)
    norm, view = reduced_view(rng, n, k, rng.randint(n, 11))
    agent = min(view.agents)
    part = partition_merging(norm, view, agent)
    costs = part.costs(view, agent)
    ok = all(c <= 1 for c in costs[:-1]) and costs[-1] < Fraction(-k * k + (1 + n) * k, n)
    out.append(("partition-merging", ok, {"n": n, "k": k, "costs": [format_rational(c) for c in costs]}))

    n = rng.randint(2, 4)
    m = rng.randint(2, 8)
    row = [Fraction(rng.randint(1, 20)) for _ in range(m)]
    inst = Instance.from_rows([row])
    value = mms(inst, 0, range(m), n).value
    ok = True
    for e1, e2 in combinations(range(m), 2):
        if row[e1] + row[e2] >= value:
            rest = [e for e in range(m) if e not in (e1, e2)]
            if mms(inst, 0, rest, n - 1).value > value:
                ok = False
    out.append(("two-item-reduction", ok, {"row": [format_rational(c) for c in row], "n": n}))
    return out


# -- suites ------------------------------------------------------------------

def _suite_solver(cfg: dict, seed: int, workers: int, failures: Path) -> dict:
    ns = cfg.get("ns", [3, 4, 5])
    count = cfg.get("count", 50)
    max_items = cfg.get("max_items", 9)
    models = cfg.get("models", ["uniform", "adversarial"])
    jobs = []
    for n in ns:
        rng = random.Random(f"solver:{seed}:{n}")
        for s in range(count):
            jobs.append((n, rng.randint(0, max_items), models[s % len(models)], seed * 100_000 + s))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_solver_job, jobs, chunksize=8))
    else:
        results = [_solver_job(j) for j in jobs]
    max_ratio: dict = {}
    cases: dict = {}
    for (n, m, model, s), instance, res in results:
        if not res["passed"]:
            path = write_failure(failures, f"solver-n{n}-m{m}-{model}-{s}", instance,
                                 {"reason": res["reason"], "trace": res.get("trace")})
            raise SuiteFailure(f"solver failed on n={n} m={m} {model} seed={s}: {res['reason']}", path)
        max_ratio[n] = max(max_ratio.get(n, Fraction(0)), res["max_ratio"])
        cases[res["case"]] = cases.get(res["case"], 0) + 1
    return {
        "instances": len(results),
        "failures": 0,
        "max_ratio": {str(n): format_rational(r) for n, r in sorted(max_ratio.items())},
        "bound": {str(n): format_rational(alpha_for(n)) for n in ns},
        "cases": dict(sorted(cases.items())),
    }


def _suite_oracle(cfg: dict, seed: int, failures: Path) -> dict:
    rng = random.Random(f"oracle:{seed}")
    count = cfg.get("count", 200)
    for q in range(count):
        ok, detail = _oracle_job(rng, cfg.get("max_items", 8))
        if not ok:
            path = Path(failures)
            path.mkdir(parents=True, exist_ok=True)
            (path / f"oracle-{seed}-{q}.json").write_text(json.dumps(detail, indent=2))
            raise SuiteFailure(f"oracle disagreement on query {q}: {detail}", path)
    return {"instances": count, "failures": 0}


def _suite_lemmas(cfg: dict, seed: int, failures: Path) -> dict:
    rng = random.Random(f"lemmas:{seed}")
    count = cfg.get("count", 200)
    per: dict = {}
    for q in range(count):
        for name, ok, detail in lemma_checks(rng):
            if not ok:
                path = Path(failures)
                path.mkdir(parents=True, exist_ok=True)
                (path / f"lemma-{name}-{seed}-{q}.json").write_text(json.dumps(detail, indent=2))
                raise SuiteFailure(f"{name} bound violated: {detail}", path)
            per[name] = per.get(name, 0) + 1
    return {"instances": sum(per.values()), "failures": 0, "per_lemma": per}


def _suite_tightness(cfg: dict, seed: int, failures: Path) -> dict:
    instance = tight_example()
    allocation, _ = solve(instance)
    report = verify_allocation(instance, allocation, Fraction(9, 8))
    ratios = sorted(report.ratios)
    if not report.passed or ratios != [Fraction(3, 4), Fraction(1), Fraction(9, 8)]:
        path = write_failure(failures, "tightness", instance, {"allocation": allocation.to_json()})
        raise SuiteFailure(f"tight example gave ratios {ratios}", path)
    return {"instances": 1, "failures": 0, "ratios": [format_rational(r) for r in report.ratios]}


SUITES = ("oracle-cross-check", "lemma-invariants", "solver-by-n", "tightness")


def run_suite(config: dict) -> dict:
    """Run the suites named in ``config["suites"]`` and return a JSON-able summary.

    ``config`` looks like ``{"seed": 0, "workers": 1, "failures_dir": "failures",
    "suites": {"solver-by-n": {"ns": [3], "count": 500}, "tightness": {}}}``.
    Raises :class:`SuiteFailure` on the first counterexample.
    """
    suites = config.get("suites") or {}
    if isinstance(suites, (list, tuple)):
        suites = {name: {} for name in suites}
    seed = config.get("seed", 0)
    workers = config.get("workers", 1)
    failures = Path(config.get("failures_dir", "failures"))
    report: dict = {"seed": seed, "suites": {}}
    start = time.perf_counter()
    for name, cfg in suites.items():
        t0 = time.perf_counter()
        if name == "solver-by-n":
            summary = _suite_solver(cfg, seed, workers, failures)
        elif name == "oracle-cross-check":
            summary = _suite_oracle(cfg, seed, failures)
        elif name == "lemma-invariants":
            summary = _suite_lemmas(cfg, seed, failures)
        elif name == "tightness":
            summary = _suite_tightness(cfg, seed, failures)
        else:
            raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
        summary["seconds"] = round(time.perf_counter() - t0, 3)
        log.info("suite %s: %s", name, summary)
        report["suites"][name] = summary
    report["seconds"] = round(time.perf_counter() - start, 3)
    return report


def format_report(report: dict) -> str:
    """Plain-text table of a :func:`run_suite` summary."""
    lines = [f"{'suite':<20} {'instances':>9} {'failures':>8} {'seconds':>8}  notes"]
    for name, s in report.get("suites", {}).items():
        notes = ""
        if "max_ratio" in s:
            notes = " ".join(f"n={n}:{r}<={s['bound'][n]}" for n, r in s["max_ratio"].items())
        lines.append(f"{name:<20} {s['instances']:>9} {s['failures']:>8} {s['seconds']:>8}  {notes}")
    return "\n".join(lines)


def bench(ns: Iterable[int], ms: Iterable[int], repeats: int = 5, seed: int = 0,
          timer: Callable[[], float] = time.perf_counter) -> list[dict]:
    """Mean and worst wall time of :func:`solve` per (n, m)."""
    rows = []
    for n in ns:
        for m in ms:
            times = []
            for r in range(repeats):
                instance = gen_random(n, m, "uniform", seed + r)
                t0 = timer()
                solve(instance)
                times.append(timer() - t0)
            rows.append({"n": n, "m": m, "mean_s": sum(times) / len(times), "max_s": max(times)})
    return rows
