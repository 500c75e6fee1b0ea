"""Bounded DTW nearest-neighbor search with selective bound deployment.

For every query, candidates are scanned in their given order while the best
exact DTW distance so far (d_best) shrinks.  Each candidate first faces the
cheap envelope bound; if that fails to prune and the bound lands in the
triggering band (trigger < bound/d_best < 1), the configured advanced bound
gets a chance; only then is the exact banded DTW computed, itself abandoned
as soon as a whole DP row exceeds d_best.  Bounds never change answers: a
candidate is skipped only when a lower bound of its DTW distance already
reaches d_best, and d_best only improves on exact distances, so every method
returns the nearest neighbor the plain linear scan finds.

Method and parameter selection on a data sample ranks configurations by a
deterministic work model (DP cells and bound point-touches, dimension
weighted) rather than wall time, so repeated runs with one seed pick the same
configuration and produce bit-identical counters; wall times are still
measured and reported.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .core import InvalidInputError, Method, SearchParams, TiVariant, as_series
from .dtw import dtw_banded
from .lb_mv import build_envelope, lb_ad, lb_mv
from .lb_pc import build_box_sets, lb_pc
from .lb_ti import NeighborDistances, lb_ti, neighbor_steps

TUNE_CANDIDATE_SAMPLE = 23
TUNE_QUERY_SAMPLE = 8


@dataclass
class NnOutcome:
    """Result and instrumentation of one query's nearest-neighbor scan.

    `abandon_count` counts early-abandoned DTW evaluations.  `work` is the
    deterministic work-model total used for tuning decisions.  Timers are
    seconds; lb_time + dtw_time <= total_time.
    """

    best_index: int
    best_distance: float
    dtw_computed: int = 0
    dtw_skipped: int = 0
    lb_mv_evals: int = 0
    advanced_lb_evals: int = 0
    abandon_count: int = 0
    lb_time: float = 0.0
    dtw_time: float = 0.0
    total_time: float = 0.0
    work: float = 0.0


def _advanced_method(params: SearchParams, advanced: Method | None) -> Method | None:
    """Resolve which bound runs at the cascade's second step, if any."""
    method = params.method
    if method in (Method.NONE, Method.LB_MV):
        return None
    if method == Method.TC_DTW:
        if advanced not in (Method.LB_TI, Method.LB_PC):
            raise InvalidInputError("TC_DTW must be resolved with tc_dtw_select first")
        return advanced
    return method


def _trigger(params: SearchParams, advanced: Method) -> float:
    return params.trigger_pc if advanced == Method.LB_PC else params.trigger_ti


def nn_search(
    query,
    candidates,
    params: SearchParams,
    advanced: Method | None = None,
    dim_range: np.ndarray | None = None,
) -> NnOutcome:
    """Find the candidate with the smallest banded DTW distance to `query`.

    Candidates are processed in the given order; d_best starts from an exact
    DTW against the first candidate.  `advanced` names the second-step bound
    when params.method is TC_DTW (fill it from tc_dtw_select).  `dim_range`
    is the dataset's per-dimension value range, used by the clustering bound's
    minimum cell size.
    """
    t_start = time.perf_counter()
    qa = as_series(query)
    cas = [as_series(c) for c in candidates]
    if not cas:
        raise InvalidInputError("candidate list is empty")
    n, dims = qa.shape
    method = params.method
    adv = _advanced_method(params, advanced)
    w = params.effective_window(n)

    out = NnOutcome(best_index=0, best_distance=0.0)

    # Per-query preparation, all charged to lb_time as bound overhead.
    env = None
    nd = None
    boxes = None
    t0 = time.perf_counter()
    if method != Method.NONE:
        env = build_envelope(qa, w)
        out.work += n * dims
    if adv == Method.LB_TI:
        nd = NeighborDistances(query_steps=neighbor_steps(qa))
        out.work += n * dims
    elif adv == Method.LB_PC:
        boxes = build_box_sets(
            qa, w, params.group_width, params.quant_levels, params.max_boxes,
            params.min_cell_frac, dim_range,
        )
        out.work += n * dims * (1 + params.quant_levels)
    out.lb_time += time.perf_counter() - t0

    # Deterministic per-evaluation work model (point-dimension touches).
    work_mv = n * dims
    work_ti = n * (4.0 + (2.0 + w / params.refresh_period) * dims)
    work_pc = n * params.max_boxes * dims
    work_ad = n * (2.0 * w + 1.0) * dims

    t0 = time.perf_counter()
    first = dtw_banded(qa, cas[0], w)
    out.dtw_time += time.perf_counter() - t0
    out.dtw_computed += 1
    out.work += first.cells * dims
    d_best = first.distance
    best_idx = 0

    abandon = None if method == Method.NONE else True
    for k in range(1, len(cas)):
        ca = cas[k]
        if method != Method.NONE:
            t0 = time.perf_counter()
            b1 = lb_mv(ca, env, abandon_above=d_best)
            out.lb_time += time.perf_counter() - t0
            out.lb_mv_evals += 1
            out.work += work_mv
            if b1.value >= d_best:
                out.dtw_skipped += 1
                continue
            if adv is not None and b1.value > _trigger(params, adv) * d_best:
                t0 = time.perf_counter()
                if adv == Method.LB_TI:
                    b2 = lb_ti(
                        qa, ca, w, TiVariant.TIP_TOP, params.refresh_period,
                        neighbor=nd, abandon_above=d_best,
                    )
                    out.work += work_ti
                elif adv == Method.LB_PC:
                    b2 = lb_pc(ca, boxes, abandon_above=d_best)
                    out.work += work_pc
                else:
                    b2 = lb_ad(qa, ca, w, abandon_above=d_best)
                    out.work += work_ad
                out.lb_time += time.perf_counter() - t0
                out.advanced_lb_evals += 1
                if b2.value >= d_best:
                    out.dtw_skipped += 1
                    continue
        t0 = time.perf_counter()
        res = dtw_banded(qa, ca, w, abandon_above=d_best if abandon else None)
        out.dtw_time += time.perf_counter() - t0
        out.dtw_computed += 1
        out.work += res.cells * dims
        if res.abandoned:
            out.abandon_count += 1
        elif res.distance < d_best:
            d_best = res.distance
            best_idx = k

    out.best_index = best_idx
    out.best_distance = d_best
    out.total_time = time.perf_counter() - t_start
    return out


def _sample(items: list, size: int, rng: np.random.Generator) -> list:
    if len(items) <= size:
        return list(items)
    idx = rng.choice(len(items), size=size, replace=False)
    return [items[i] for i in sorted(idx)]


def _run_sample(queries, candidates, params, advanced, dim_range, metric) -> float:
    cost = 0.0
    for q in queries:
        out = nn_search(q, candidates, params, advanced=advanced, dim_range=dim_range)
        cost += out.total_time if metric == "time" else out.work
    return cost


def tc_dtw_select(
    sample_queries,
    sample_candidates,
    params: SearchParams,
    dim_range: np.ndarray | None = None,
    metric: str = "work",
) -> Method:
    """Pick the cheaper of the triangle and clustering bounds on a sample.

    Runs the search with both bounds over the sample and returns the method
    with the smaller cost; ties go to LB_PC.  The default cost metric is the
    deterministic work model; pass metric="time" for wall time.
    """
    if not sample_queries or not sample_candidates:
        raise InvalidInputError("selection sample is empty")
    as_ti = replace(params, method=Method.LB_TI)
    as_pc = replace(params, method=Method.LB_PC)
    cost_ti = _run_sample(sample_queries, sample_candidates, as_ti, None, dim_range, metric)
    cost_pc = _run_sample(sample_queries, sample_candidates, as_pc, None, dim_range, metric)
    return Method.LB_TI if cost_ti < cost_pc else Method.LB_PC


def tune_params(
    queries,
    candidates,
    params: SearchParams,
    grids: dict | None = None,
    seed: int = 0,
    dim_range: np.ndarray | None = None,
    metric: str = "work",
    log: list | None = None,
) -> SearchParams:
    """Grid-search triggering thresholds (and quantization level) on a sample.

    The sample is a seeded uniform draw of up to 23 candidate series and up
    to 8 query series.  Depending on params.method the grid covers the
    triangle trigger (3 runs), the clustering trigger x quantization level
    (4 runs), or both (7 runs for TC_DTW).  Refresh period, box cap, and
    group width stay fixed.  Each grid evaluation is appended to `log` when
    given, as (method, params, cost).
    """
    from .core import default_grids

    grids = grids or default_grids()
    method = params.method
    if method in (Method.NONE, Method.LB_MV):
        return params
    rng = np.random.default_rng(seed)
    sq = _sample(list(queries), TUNE_QUERY_SAMPLE, rng)
    sc = _sample(list(candidates), TUNE_CANDIDATE_SAMPLE, rng)

    def eval_grid(adv: Method, variants: list[SearchParams]) -> SearchParams:
        best, best_cost = None, None
        for p in variants:
            cost = _run_sample(sq, sc, replace(p, method=adv), None, dim_range, metric)
            if log is not None:
                log.append((adv, p, cost))
            if best_cost is None or cost < best_cost:
                best, best_cost = p, cost
        return best

    tuned = params
    if method in (Method.LB_TI, Method.LB_AD, Method.TC_DTW):
        adv = Method.LB_TI if method == Method.TC_DTW else method
        cands = [replace(params, trigger_ti=e) for e in grids["trigger_ti"]]
        tuned = replace(tuned, trigger_ti=eval_grid(adv, cands).trigger_ti)
    if method in (Method.LB_PC, Method.TC_DTW):
        cands = [
            replace(params, trigger_pc=e, quant_levels=lv)
            for e in grids["trigger_pc"]
            for lv in grids["quant_levels"]
        ]
        best = eval_grid(Method.LB_PC, cands)
        tuned = replace(tuned, trigger_pc=best.trigger_pc, quant_levels=best.quant_levels)
    return tuned
