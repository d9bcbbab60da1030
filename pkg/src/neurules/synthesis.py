"""Layer-wise growth of the Boolean neuron network.

Layer 1 pairs the pooled features; later layers pair each surviving neuron
with one fresh feature, so a neuron of layer r has exactly r connective
levels.  A candidate survives only when its error count strictly beats both
of its operands and the best error seen so far, which makes the per-layer
minimum strictly decreasing and bounds the depth by the initial minimum.
Growth stops when errors hit zero, when no candidate is admissible, or (in
split mode) when the exterior criterion stops improving by more than delta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .collective import DEFAULT_CHI0, Collective
from .dataset import LearningSet, SplitPair, split_even
from .errors import DataError, DegenerateSplitError
from .features import overlapping_factors, search_products, substitute
from .neurons import CONNECTIVES, Expr, Neuron, SplitScores, apply_connective, eval_expr
from .quantization import QuantizedFeature, hamming, product_values, quantize, quantize_source

MODE_STATEMENT1 = "statement1"
MODE_SPLIT = "split"

STOP_ZERO_ERRORS = "CR=0"
STOP_NO_ADMISSIONS = "L_{r+1}=0"
STOP_DELTA_RULE = "delta-rule"
STOP_LAYER_CAP = "layer-cap"

STALL_DIAGNOSTIC = (
    "no admissible candidate remains while errors stay positive; "
    "add new input variables or exclude the doubtful instances"
)


@dataclass
class SynthesisConfig:
    mode: str = MODE_STATEMENT1
    delta: int = 0
    f_ratio: Fraction = Fraction(2, 5)
    max_layers: int = 10
    max_p: int | None = None
    chi0: Fraction = DEFAULT_CHI0
    seed: int = 0
    prune_products: bool = True

    def __post_init__(self) -> None:
        if self.mode not in (MODE_STATEMENT1, MODE_SPLIT):
            raise ValueError(f"mode must be {MODE_STATEMENT1!r} or {MODE_SPLIT!r}")
        if self.delta < 0:
            raise ValueError("delta must be a non-negative integer")
        if self.max_p is not None and self.max_p < 1:
            raise ValueError("max_p must be at least 1 (1 disables product search)")
        if self.max_layers < 1:
            raise ValueError("max_layers must be at least 1")
        self.f_ratio = _as_fraction(self.f_ratio)
        self.chi0 = _as_fraction(self.chi0)
        if not 0 < self.f_ratio <= 1:
            raise ValueError("f_ratio must lie in (0, 1]")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "delta": self.delta,
            "f_ratio": str(self.f_ratio),
            "max_layers": self.max_layers,
            "max_p": self.max_p,
            "chi0": str(self.chi0),
            "seed": self.seed,
            "prune_products": self.prune_products,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SynthesisConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


def _as_fraction(value) -> Fraction:
    # floats go through repr so 0.8 means the decimal 8/10, not its binary image
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class Candidate:
    """A generated neuron plus the error counts of its two operands."""

    neuron: Neuron
    parent_errors: int
    leaf_errors: int


@dataclass
class LayerTrace:
    """Per-layer bookkeeping; layer 0 records the feature pool itself."""

    index: int
    pairs: int = 0              # operand pairs examined (the L_r count)
    expanded: int = 0           # concrete candidates after connective expansion and dedup
    admitted: int = 0
    min_errors: int | None = None
    min_cr: int | None = None
    survivors: list[Neuron] = field(default_factory=list, repr=False)
    stop_cause: str | None = None


@dataclass(frozen=True)
class StopDecision:
    stop: bool
    cause: str | None = None
    keep_layer: int = 0
    diagnostic: str | None = None


# ---------------------------------------------------------------------------
# candidate generation and admission
# ---------------------------------------------------------------------------

def generate_candidates(
    pool: list[QuantizedFeature],
    survivors: list[Neuron] | None,
    r: int,
    labels: np.ndarray,
) -> tuple[int, list[Candidate]]:
    """Expand one layer's operand pairs through every reference connective.

    Layer 1 takes all unordered pairs of distinct pool features; later layers
    pair each survivor with every pool feature it does not already use.
    Candidates whose output column duplicates a survivor's or an earlier
    candidate's are dropped (the duplicate with fewest distinct leaves wins).
    Returns the pair count and the deduplicated candidate list.
    """
    if not pool:
        raise DataError("no features")
    if r == 1 and survivors:
        raise ValueError("layer 1 takes no survivors")
    raw: list[Candidate] = []
    pairs = 0
    if r == 1:
        columns = [f.column for f in pool]
        for j in range(len(pool)):
            for k in range(j + 1, len(pool)):
                pairs += 1
                for name in CONNECTIVES:
                    col = apply_connective(name, columns[j], columns[k])
                    neuron = Neuron((name, j, k), r, hamming(col, labels), col)
                    raw.append(Candidate(neuron, pool[j].errors, pool[k].errors))
    else:
        for z in survivors or ():
            used = z.leaves
            for k in range(len(pool)):
                if k in used:
                    continue
                pairs += 1
                for name in CONNECTIVES:
                    col = apply_connective(name, z.column, pool[k].column)
                    neuron = Neuron((name, z.expression, k), r, hamming(col, labels), col)
                    raw.append(Candidate(neuron, z.errors, pool[k].errors))

    survivor_keys = {s.column.tobytes() for s in survivors} if survivors else set()
    chosen: dict[bytes, Candidate] = {}
    order: list[bytes] = []
    for cand in raw:
        key = cand.neuron.column.tobytes()
        if key in survivor_keys:
            continue
        held = chosen.get(key)
        if held is None:
            chosen[key] = cand
            order.append(key)
        elif len(cand.neuron.leaves) < len(held.neuron.leaves):
            chosen[key] = cand
    return pairs, [chosen[k] for k in order]


def admit(candidate: Neuron, parent_errors: int, leaf_errors: int) -> bool:
    """Exterior-addition admission: strictly beat both operands' error counts."""
    return candidate.errors < min(parent_errors, leaf_errors)


def default_f_cap(pairs: int, f_ratio: Fraction = Fraction(2, 5)) -> int:
    """Survivor cap for a layer that examined ``pairs`` operand pairs."""
    return max(1, math.ceil(_as_fraction(f_ratio) * pairs))


def select_survivors(
    admitted: list[Neuron],
    f_cap: int,
    by_criteria: bool = False,
) -> list[Neuron]:
    """Keep the best ``f_cap`` neurons; stable sort preserves generation order.

    Statement-1 ranking is (errors, leaf count); split-criteria ranking puts
    the exterior criterion first.
    """
    if f_cap < 1:
        raise ValueError("f_cap must be at least 1")
    if by_criteria:
        key = lambda n: (n.criteria.cr, n.errors, len(n.leaves))
    else:
        key = lambda n: (n.errors, len(n.leaves))
    return sorted(admitted, key=key)[:f_cap]


# ---------------------------------------------------------------------------
# split-criteria scoring
# ---------------------------------------------------------------------------

def _subset_fit_columns(
    pool: list[QuantizedFeature],
    subset: tuple[int, ...],
    ls: LearningSet,
) -> list[np.ndarray]:
    """Refit every pool feature's cut on one subset; return columns over all of W."""
    idx = np.asarray(subset, dtype=int)
    sub_labels = ls.labels[idx]
    if len(set(sub_labels.tolist())) < 2:
        raise DegenerateSplitError("degenerate split: a subset holds a single class")
    columns = []
    for f in pool:
        values = product_values(ls.values, f.source)
        refit = quantize(values[idx], sub_labels, f.source)
        columns.append(refit.apply(values))
    return columns


def _scores_from_fits(expr: Expr, fit_a, fit_b, labels) -> SplitScores:
    out_a = eval_expr(expr, fit_a)
    out_b = eval_expr(expr, fit_b)
    unbiasedness = int(np.count_nonzero(out_a != out_b))
    regularity = hamming(out_a, labels) + hamming(out_b, labels)
    return SplitScores(unbiasedness, regularity)


def split_criteria(
    expr: Expr,
    pool: list[QuantizedFeature],
    split: SplitPair,
    ls: LearningSet,
) -> SplitScores:
    """Unbiasedness and regularity of one candidate structure.

    The candidate's structure is refit twice, on subset A and on subset B
    (thresholds re-chosen, connectives kept), and both refits are evaluated on
    the whole set: unbiasedness counts where the two disagree with each other,
    regularity sums their disagreements with the teacher labels.
    """
    fit_a = _subset_fit_columns(pool, split.subset_a, ls)
    fit_b = _subset_fit_columns(pool, split.subset_b, ls)
    return _scores_from_fits(expr, fit_a, fit_b, ls.labels)


# ---------------------------------------------------------------------------
# stopping
# ---------------------------------------------------------------------------

def should_stop(
    traces: list[LayerTrace],
    mode: str,
    delta: int = 0,
    max_layers: int | None = None,
) -> StopDecision:
    """Decide whether growth ends with the trace history seen so far.

    Zero admissions end growth keeping the previous layer.  In statement-1
    mode a zero-error layer ends growth keeping that layer; in split mode the
    delta rule compares the last two layers' criteria and keeps the earlier
    layer when the criterion stopped improving.  The layer cap is a safety
    bound and reports its own cause.
    """
    last = traces[-1]
    if last.admitted == 0 and last.index > 0:
        keep = last.index - 1
        diagnostic = STALL_DIAGNOSTIC if (traces[keep].min_errors or 0) > 0 else None
        return StopDecision(True, STOP_NO_ADMISSIONS, keep, diagnostic)
    if mode == MODE_STATEMENT1:
        if last.min_errors == 0:
            return StopDecision(True, STOP_ZERO_ERRORS, last.index)
    else:
        scored = [(t.index, t.min_cr) for t in traces if t.min_cr is not None]
        if len(scored) >= 2 and scored[-2][1] <= scored[-1][1] + delta:
            return StopDecision(True, STOP_DELTA_RULE, scored[-2][0])
    if max_layers is not None and last.index >= max_layers:
        return StopDecision(True, STOP_LAYER_CAP, last.index)
    return StopDecision(False)


# ---------------------------------------------------------------------------
# end-to-end synthesis
# ---------------------------------------------------------------------------

@dataclass
class SynthesisReport:
    mode: str
    config: dict
    variable_names: tuple[str, ...]
    label_names: tuple[str, str]
    base_errors: list[int]
    products: list[dict]
    overlap_variables: tuple[int, ...]
    pool_description: list[str]
    initial_min_errors: int
    traces: list[LayerTrace]
    stop_cause: str
    kept_layer: int
    final_errors: int
    collective_size: int
    doubtful_instances: tuple[int, ...]
    diagnostic: str | None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "config": dict(self.config),
            "variable_names": list(self.variable_names),
            "label_names": list(self.label_names),
            "base_errors": list(self.base_errors),
            "products": [dict(p) for p in self.products],
            "overlap_variables": list(self.overlap_variables),
            "pool": list(self.pool_description),
            "initial_min_errors": self.initial_min_errors,
            "layers": [
                {
                    "layer": t.index,
                    "pairs": t.pairs,
                    "expanded": t.expanded,
                    "admitted": t.admitted,
                    "min_errors": t.min_errors,
                    "min_cr": t.min_cr,
                    "survivors": len(t.survivors),
                    "stop_cause": t.stop_cause,
                }
                for t in self.traces
            ],
            "stop_cause": self.stop_cause,
            "kept_layer": self.kept_layer,
            "final_errors": self.final_errors,
            "collective_size": self.collective_size,
            "doubtful_instances": list(self.doubtful_instances),
            "diagnostic": self.diagnostic,
        }


def _majority_misfits(members: list[Neuron], labels: np.ndarray) -> tuple[int, ...]:
    """Instances the collective's majority vote misses or cannot decide."""
    votes = np.sum([m.column for m in members], axis=0)
    total = len(members)
    doubtful = []
    for i, (n1, label) in enumerate(zip(votes.tolist(), labels.tolist())):
        n0 = total - n1
        if n1 == n0 or int(n1 > n0) != label:
            doubtful.append(i)
    return tuple(doubtful)


def synthesize(ls: LearningSet, config: SynthesisConfig | None = None) -> tuple[Collective, SynthesisReport]:
    """Quantize, search products, grow layers, and assemble the collective.

    Returns the deployable collective (all kept-layer neurons sharing the
    minimal error count) and the full per-layer report.
    """
    config = config or SynthesisConfig()
    labels = ls.labels
    base = [quantize_source(ls, (j,)) for j in range(ls.m)]
    max_p = min(config.max_p, ls.m) if config.max_p is not None else min(ls.m, 4)
    admitted_products = []
    if ls.m >= 2 and max_p >= 2:
        admitted_products = search_products(ls, base, max_p, prune=config.prune_products)
    pool = substitute(base, admitted_products)

    split: SplitPair | None = None
    fit_a = fit_b = None
    if config.mode == MODE_SPLIT:
        split = split_even(ls, config.seed)
        fit_a = _subset_fit_columns(pool, split.subset_a, ls)
        fit_b = _subset_fit_columns(pool, split.subset_b, ls)

    def attach_criteria(neuron: Neuron) -> None:
        neuron.criteria = _scores_from_fits(neuron.expression, fit_a, fit_b, labels)

    # layer 0: the pool itself, deduplicated by output column
    layer0: list[Neuron] = []
    seen: set[bytes] = set()
    for i, f in enumerate(pool):
        key = f.column.tobytes()
        if key in seen:
            continue
        seen.add(key)
        neuron = Neuron(i, 0, f.errors, f.column)
        if split is not None:
            attach_criteria(neuron)
        layer0.append(neuron)

    trace0 = LayerTrace(
        index=0,
        pairs=0,
        expanded=len(pool),
        admitted=len(layer0),
        min_errors=min(f.errors for f in pool),
        min_cr=min(n.criteria.cr for n in layer0) if split is not None else None,
        survivors=layer0,
    )
    traces = [trace0]
    best_errors = trace0.min_errors
    decision = should_stop(traces, config.mode, config.delta, config.max_layers)

    while not decision.stop:
        r = traces[-1].index + 1
        parents = traces[-1].survivors if r > 1 else None
        pairs, candidates = generate_candidates(pool, parents, r, labels)
        if split is not None:
            for cand in candidates:
                attach_criteria(cand.neuron)
        if config.mode == MODE_STATEMENT1:
            kept = [
                c.neuron
                for c in candidates
                if admit(c.neuron, c.parent_errors, c.leaf_errors)
                and c.neuron.errors < best_errors
            ]
        else:
            kept = [c.neuron for c in candidates]
        trace = LayerTrace(index=r, pairs=pairs, expanded=len(candidates), admitted=len(kept))
        if kept:
            survivors = select_survivors(
                kept, default_f_cap(pairs, config.f_ratio), by_criteria=split is not None
            )
            trace.survivors = survivors
            trace.min_errors = min(n.errors for n in survivors)
            if split is not None:
                trace.min_cr = min(n.criteria.cr for n in survivors)
            best_errors = min(best_errors, trace.min_errors)
        traces.append(trace)
        decision = should_stop(traces, config.mode, config.delta, config.max_layers)

    traces[-1].stop_cause = decision.cause
    kept_layer = decision.keep_layer
    members_pool = traces[kept_layer].survivors
    final_errors = min(n.errors for n in members_pool)
    members = [n for n in members_pool if n.errors == final_errors]
    collective = Collective(
        neurons=members,
        pool=pool,
        chi0=config.chi0,
        label_names=ls.label_names,
        variable_names=ls.variable_names,
    )

    doubtful: tuple[int, ...] = ()
    if decision.cause == STOP_NO_ADMISSIONS and final_errors > 0:
        doubtful = _majority_misfits(members, labels)

    report = SynthesisReport(
        mode=config.mode,
        config=config.to_dict(),
        variable_names=ls.variable_names,
        label_names=ls.label_names,
        base_errors=[f.errors for f in base],
        products=[
            {
                "source": list(g.source),
                "errors": g.feature.errors,
                "factor_errors": {str(i): v for i, v in g.factor_errors.items()},
            }
            for g in admitted_products
        ],
        overlap_variables=overlapping_factors(admitted_products),
        pool_description=[f.describe(ls.variable_names) for f in pool],
        initial_min_errors=trace0.min_errors,
        traces=traces,
        stop_cause=decision.cause,
        kept_layer=kept_layer,
        final_errors=final_errors,
        collective_size=len(members),
        doubtful_instances=doubtful,
        diagnostic=decision.diagnostic,
    )
    return collective, report
