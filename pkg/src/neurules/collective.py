"""Majority-vote classification with coherence scoring and refusal.

The collective is the deployable classifier: the final-layer neurons sharing
the minimal training error count, voting with equal weight.  Coherence is the
exact fraction of voters agreeing with the outcome; it is kept as a rational
number so comparisons against the refusal threshold are never subject to
float rounding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .dataset import LearningSet
from .errors import DataError
from .neurons import Neuron, eval_expr
from .quantization import QuantizedFeature, product_values

DEFAULT_CHI0 = Fraction(4, 5)


@dataclass
class Collective:
    """Equal-error neurons plus everything needed to quantize fresh inputs.

    ``weights`` is a hook for efficiency-weighted voting; members share one
    error count by construction, so it defaults to uniform and stays None in
    every model this package trains.
    """

    neurons: list[Neuron]
    pool: list[QuantizedFeature]
    chi0: Fraction
    label_names: tuple[str, str]
    variable_names: tuple[str, ...]
    weights: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not self.neurons:
            raise ValueError("collective needs at least one neuron")
        if not Fraction(1, 2) <= self.chi0 <= 1:
            raise ValueError(f"chi0 must lie in [1/2, 1], got {self.chi0}")
        if self.weights is not None and len(self.weights) != len(self.neurons):
            raise ValueError("one weight per neuron required")

    @property
    def size(self) -> int:
        return len(self.neurons)

    @property
    def errors(self) -> int:
        return min(n.errors for n in self.neurons)


@dataclass(frozen=True)
class Verdict:
    """One classification outcome; ``decision`` is None when refused."""

    decision: str | None
    chi: Fraction
    votes: tuple[int, ...]

    @property
    def refused(self) -> bool:
        return self.decision is None


@dataclass(frozen=True)
class CoherenceTable:
    rows: dict[tuple[int, ...], Fraction]
    refused_fraction: Fraction


@dataclass
class EvalMetrics:
    total: int
    errors: int
    refusals: int
    per_class_errors: dict[str, int]
    mean_chi: Fraction
    low_coherence_warning: bool
    verdicts: list[Verdict] = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "errors": self.errors,
            "refusals": self.refusals,
            "per_class_errors": dict(self.per_class_errors),
            "mean_chi": str(self.mean_chi),
            "mean_chi_decimal": float(self.mean_chi),
            "low_coherence_warning": self.low_coherence_warning,
        }


def quantize_input(c: Collective, x) -> tuple[int, ...]:
    """Map one raw measurement vector to the pool's Boolean feature values."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (len(c.variable_names),):
        raise DataError(
            f"width mismatch: model expects {len(c.variable_names)} values, got {x.shape}"
        )
    if not np.all(np.isfinite(x)):
        raise DataError("non-finite value in input vector")
    row = x.reshape(1, -1)
    return tuple(int(f.apply(product_values(row, f.source))[0]) for f in c.pool)


def vote(c: Collective, bits: tuple[int, ...]) -> Verdict:
    """Tally the neurons on quantized pool bits and apply the refusal rule."""
    scalar_bits = [np.array([b], dtype=bool) for b in bits]
    votes = tuple(int(eval_expr(n.expression, scalar_bits)[0]) for n in c.neurons)
    weights = c.weights if c.weights is not None else (1,) * len(votes)
    tally = [0, 0]
    for v, w in zip(votes, weights):
        tally[v] += w
    total = tally[0] + tally[1]
    if tally[0] == tally[1]:
        return Verdict(None, Fraction(1, 2), votes)
    winner = int(tally[1] > tally[0])
    chi = Fraction(tally[winner], total)
    if chi < c.chi0:
        return Verdict(None, chi, votes)
    return Verdict(c.label_names[winner], chi, votes)


def classify(c: Collective, x) -> Verdict:
    """Classify one raw input vector; refuses on low coherence or an exact tie."""
    return vote(c, quantize_input(c, x))


def coherence_table(c: Collective) -> CoherenceTable:
    """Coherence for every combination of the pool's Boolean inputs.

    Also reports the fraction of combinations the collective would refuse at
    its configured threshold.
    """
    k = len(c.pool)
    if k > 20:
        raise ValueError(f"table too large: 2^{k} combinations")
    rows: dict[tuple[int, ...], Fraction] = {}
    refused = 0
    for bits in product((0, 1), repeat=k):
        verdict = vote(c, bits)
        rows[bits] = verdict.chi
        refused += verdict.refused
    return CoherenceTable(rows, Fraction(refused, 2 ** k))


def evaluate(c: Collective, values, labels) -> EvalMetrics:
    """Classify a labeled batch; errors count only over non-refused decisions.

    ``labels`` are encoded 0/1 against the collective's label_names.  A mean
    coherence below chi0 raises the quality-control warning flag: the feature
    set or the learning set needs revision.
    """
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels)
    if values.shape[0] < 1:
        raise DataError("n >= 1 rows required")
    verdicts = [classify(c, values[i]) for i in range(values.shape[0])]
    errors = 0
    refusals = 0
    per_class = {name: 0 for name in c.label_names}
    chi_sum = Fraction(0)
    for verdict, label in zip(verdicts, labels):
        chi_sum += verdict.chi
        if verdict.refused:
            refusals += 1
        elif verdict.decision != c.label_names[int(label)]:
            errors += 1
            per_class[c.label_names[int(label)]] += 1
    mean_chi = chi_sum / len(verdicts)
    return EvalMetrics(
        total=len(verdicts),
        errors=errors,
        refusals=refusals,
        per_class_errors=per_class,
        mean_chi=mean_chi,
        low_coherence_warning=mean_chi < c.chi0,
        verdicts=verdicts,
    )


def evaluate_set(c: Collective, ls: LearningSet) -> EvalMetrics:
    """Evaluate on a full LearningSet (labels must use the same literals).

    The literal order may differ from the model's (it follows first occurrence
    in each file); labels are re-encoded against the model's mapping.
    """
    if set(ls.label_names) != set(c.label_names):
        raise DataError(
            f"label literals {ls.label_names} do not match the model's {c.label_names}"
        )
    labels = np.array([c.label_names.index(ls.label_names[v]) for v in ls.labels])
    return evaluate(c, ls.values, labels)
