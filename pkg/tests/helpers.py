"""Dataset generators and independent oracles shared across the test suite.

Oracles here are deliberately written from scratch (plain loops over
explicit enumerations) so they cannot inherit a bug from the package code
they check.
"""
from __future__ import annotations

import numpy as np

import neurules as nr


def random_set(seed: int) -> nr.LearningSet:
    """Seeded continuous dataset, m <= 6, n <= 64, both classes present."""
    rng = np.random.default_rng(1000 + seed)
    m = int(rng.integers(2, 7))
    n = int(rng.integers(8, 65))
    values = rng.normal(size=(n, m)) * rng.uniform(0.5, 3) + rng.normal()
    labels = rng.integers(0, 2, size=n).astype(np.uint8)
    if labels.min() == labels.max():
        labels[0] ^= 1
    return nr.from_arrays(values, labels)


def contradiction_set(seed: int) -> tuple[nr.LearningSet, int]:
    """Monotone-aligned variables plus k duplicated rows with flipped labels.

    Every variable is a positive affine image of one increasing sequence, so
    a single cut separates the base rows perfectly; each duplicated pair then
    forces exactly one error on any classifier.  Returns (set, k).
    """
    rng = np.random.default_rng(2000 + seed)
    m = int(rng.integers(1, 4))
    n = int(rng.integers(6, 17))
    base = np.sort(rng.uniform(1, 50, size=n))
    coef = rng.uniform(0.5, 2.0, size=m)
    offset = rng.uniform(0, 3, size=m)
    values = base[:, None] * coef[None, :] + offset[None, :]
    cut = int(rng.integers(1, n))
    labels = (np.arange(n) >= cut).astype(np.uint8)
    k = int(rng.integers(1, 4))
    picks = rng.choice(n, size=k, replace=False)
    values = np.vstack([values, values[picks]])
    labels = np.concatenate([labels, 1 - labels[picks]]).astype(np.uint8)
    return nr.from_arrays(values, labels), k


def xor_set(rng: np.random.Generator) -> nr.LearningSet:
    """Boolean 2-variable dataset labeled by XOR, with all four combinations
    present and class balance such that the per-variable optimal cut is the
    variable itself (or its negation), never a constant column."""
    while True:
        c = rng.integers(1, 6, size=4)
        n00, n01, n10, n11 = (int(v) for v in c)
        const = min(n00 + n11, n01 + n10)
        if min(n01 + n11, n00 + n10) <= const and min(n10 + n11, n00 + n01) <= const:
            break
    rows: list[list[int]] = []
    labels: list[int] = []
    for (a, b), cnt in zip(((0, 0), (0, 1), (1, 0), (1, 1)), (n00, n01, n10, n11)):
        rows.extend([[a, b]] * cnt)
        labels.extend([a ^ b] * cnt)
    return nr.from_arrays(np.array(rows, dtype=float), np.array(labels, dtype=np.uint8))


def brute_best_cut_errors(values, labels) -> int:
    """Exhaustive-scan oracle: fewest label disagreements over every threshold
    column on these values, both polarities, constants included."""
    values = [float(v) for v in values]
    labels = [int(v) for v in labels]
    best = len(values)
    thresholds = sorted(set(values)) + [max(values) + 1.0]
    for u in thresholds:
        ge = sum((v >= u) != bool(y) for v, y in zip(values, labels))
        best = min(best, ge, len(values) - ge)
    return best


_TRUTH = {
    "AND": (0, 0, 0, 1),
    "OR": (0, 1, 1, 1),
    "XOR": (0, 1, 1, 0),
    "NAND": (1, 1, 1, 0),
    "NOR": (1, 0, 0, 0),
    "XNOR": (1, 0, 0, 1),
    "NIMPLIES": (0, 0, 1, 0),
    "NIMPLIED_BY": (0, 1, 0, 0),
    "IMPLIES": (1, 1, 0, 1),
    "IMPLIED_BY": (1, 0, 1, 1),
}


def eval_bits(expr, bits) -> int:
    """Independent scalar expression evaluator over a tuple of 0/1 pool bits."""
    if isinstance(expr, (int, np.integer)):
        return int(bits[int(expr)])
    name, left, right = expr
    return _TRUTH[name][(eval_bits(expr=left, bits=bits) << 1) | eval_bits(expr=right, bits=bits)]
