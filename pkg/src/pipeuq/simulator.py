"""Seeded Monte Carlo simulation of the detect -> fix -> re-detect pipeline.

One trial walks a synthetic population through the whole pipeline:

1. ground truth: each of ``n_items`` items is vulnerable with probability
   ``prevalence``;
2. first classifier: vulnerable items labeled TP with probability ``recall``
   else FN; clean items labeled TN with probability ``specificity`` else FP;
3. fixer: every positive-labeled item (TP and FP) is repaired with
   probability ``fix_rate`` and independently broken with ``break_rate``;
4. second classifier: same recall and specificity, applied to every item that
   went through the fixer and judged against its post-fixer vulnerability;
   items never sent keep their first-stage labels;
5. counter: tp_out = tp2, fn_out = fn1 + fn2, tn_out = tn1 + tn2,
   fp_out = fp2; final prevalence = (tp_out + fn_out) / n_items; realized fix
   rate = 1 - final_prevalence / prevalence; fn growth = fn_out / fn1.

Reproducibility contract: a trial consumes uniforms in a fixed order (ground
truth n, first classifier n, fixer fix m then break m, second classifier m,
with m the positive-labeled count), and every trial's integer seed is derived
from ``(master_seed, stream_code, trial_index)`` via ``numpy.random
.SeedSequence``. Reports are therefore identical for a given master seed
regardless of execution order, trial scheduling, or kernel backend.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum

import numpy as np

from . import _kernels
from .core import ClassifierProfile, ConfusionCounts, DomainSpec, FixerSpec, _check_unit
from .errors import InvalidParameterError
from .pbox import Interval, PBoxParams, sample_recall_streams

__all__ = [
    "StageLabel",
    "Item",
    "Items",
    "TrialOutcome",
    "SimulationReport",
    "METRICS",
    "STREAM_OPTIMISTIC",
    "STREAM_PESSIMISTIC",
    "generate_ground_truth",
    "classify",
    "apply_fixer",
    "run_trial",
    "run_experiment",
    "trial_seed",
]

METRICS = ("final_prevalence", "real_fix_rate", "fn_ratio")
STREAM_OPTIMISTIC = "optimistic"
STREAM_PESSIMISTIC = "pessimistic"
_STREAM_CODES = {STREAM_OPTIMISTIC: 1, STREAM_PESSIMISTIC: 2}


class StageLabel(IntEnum):
    UNVISITED = _kernels.UNVISITED
    TP = _kernels.TP
    FN = _kernels.FN
    TN = _kernels.TN
    FP = _kernels.FP


@dataclass(frozen=True)
class Item:
    """Scalar view of one simulated item."""

    id: int
    truly_vulnerable: bool
    stage_label: StageLabel
    went_through_fixer: bool
    fixed: bool
    broken: bool


@dataclass
class Items:
    """A population stored column-wise as numpy arrays (one row per item)."""

    ids: np.ndarray
    truly_vulnerable: np.ndarray
    stage_label: np.ndarray
    went_through_fixer: np.ndarray
    fixed: np.ndarray
    broken: np.ndarray

    @classmethod
    def from_flags(cls, vulnerable: np.ndarray) -> "Items":
        n = len(vulnerable)
        return cls(
            ids=np.arange(n, dtype=np.int64),
            truly_vulnerable=vulnerable.astype(bool).copy(),
            stage_label=np.full(n, _kernels.UNVISITED, dtype=np.uint8),
            went_through_fixer=np.zeros(n, dtype=bool),
            fixed=np.zeros(n, dtype=bool),
            broken=np.zeros(n, dtype=bool),
        )

    def __len__(self) -> int:
        return len(self.ids)

    def item(self, i: int) -> Item:
        return Item(
            id=int(self.ids[i]),
            truly_vulnerable=bool(self.truly_vulnerable[i]),
            stage_label=StageLabel(int(self.stage_label[i])),
            went_through_fixer=bool(self.went_through_fixer[i]),
            fixed=bool(self.fixed[i]),
            broken=bool(self.broken[i]),
        )

    def take(self, indices: np.ndarray) -> "Items":
        """Copy out the rows at ``indices`` as a new population."""
        return Items(
            ids=self.ids[indices],
            truly_vulnerable=self.truly_vulnerable[indices],
            stage_label=self.stage_label[indices],
            went_through_fixer=self.went_through_fixer[indices],
            fixed=self.fixed[indices],
            broken=self.broken[indices],
        )

    def put(self, indices: np.ndarray, other: "Items") -> None:
        """Write ``other``'s rows back into this population at ``indices``."""
        self.truly_vulnerable[indices] = other.truly_vulnerable
        self.stage_label[indices] = other.stage_label
        self.went_through_fixer[indices] = other.went_through_fixer
        self.fixed[indices] = other.fixed
        self.broken[indices] = other.broken


@dataclass(frozen=True)
class TrialOutcome:
    """Counts and headline metrics of one simulated pipeline pass.

    ``real_fix_rate`` is None when prevalence is zero (nothing to fix);
    ``fn_ratio`` is None when the first stage produced no false negatives but
    the second stage did, leaving the growth ratio without a finite value.
    """

    counts_first: ConfusionCounts
    counts_second: ConfusionCounts
    final_prevalence: float
    real_fix_rate: float | None
    fn_ratio: float | None
    recall_used: float
    seed_used: int


@dataclass(frozen=True)
class SimulationReport:
    """Everything one experiment produced, plus the configuration to redo it."""

    domain: DomainSpec
    profile: ClassifierProfile
    fixer: FixerSpec
    pbox: PBoxParams
    trials: int
    master_seed: int
    outcomes_optimistic: tuple[TrialOutcome, ...]
    outcomes_pessimistic: tuple[TrialOutcome, ...]
    intervals: dict
    undefined_real_fix_rate: int
    undefined_fn_ratio: int

    def outcomes(self) -> tuple[TrialOutcome, ...]:
        return self.outcomes_optimistic + self.outcomes_pessimistic


def generate_ground_truth(domain: DomainSpec, seed) -> Items:
    """Independently mark each item vulnerable with probability ``prevalence``.

    ``seed`` may be an int or an existing ``numpy.random.Generator``.
    """
    if domain.n_items < 1:
        raise InvalidParameterError("ground truth needs at least one item")
    rng = np.random.default_rng(seed)
    u = rng.random(domain.n_items)
    return Items.from_flags(u < domain.prevalence)


def classify(items: Items, profile: ClassifierProfile, seed, backend: str | None = None) -> ConfusionCounts:
    """Label every item in place against its current vulnerability flag.

    Draws one uniform per item. Vulnerable items become TP with probability
    ``recall`` else FN; clean items become TN with probability ``specificity``
    else FP. Returns the integer confusion counts.
    """
    rng = np.random.default_rng(seed)
    u = rng.random(len(items))
    labels, tp, fn, tn, fp = _kernels.classify_counts(
        items.truly_vulnerable, u, profile.recall, profile.specificity, backend
    )
    items.stage_label[:] = labels
    return ConfusionCounts(tp, fn, tn, fp)


def apply_fixer(items: Items, fixer: FixerSpec, seed, backend: str | None = None) -> Items:
    """Run the fixer over a population of positive-labeled items, in place.

    Draws one fix uniform and one break uniform per item. A fixed (and not
    broken) item's vulnerability flag is cleared; a broken item's flag is set.
    With ``break_rate = 0`` a clean item can never come out vulnerable.
    """
    labels = items.stage_label
    if not bool(np.all((labels == _kernels.TP) | (labels == _kernels.FP))):
        raise InvalidParameterError("apply_fixer expects only positive-labeled items")
    rng = np.random.default_rng(seed)
    n = len(items)
    u_fix = rng.random(n)
    u_break = rng.random(n)
    fixed, broken, post = _kernels.fixer_flags(
        items.truly_vulnerable, u_fix, u_break, fixer.fix_rate, fixer.break_rate, backend
    )
    items.fixed[:] = fixed
    items.broken[:] = broken
    items.truly_vulnerable[:] = post
    items.went_through_fixer[:] = True
    return items


def run_trial(
    domain: DomainSpec,
    profile: ClassifierProfile,
    fixer: FixerSpec,
    recall: float,
    seed: int,
    backend: str | None = None,
) -> TrialOutcome:
    """One full pipeline pass at a fixed recall.

    ``recall`` overrides ``profile.recall`` (the profile still supplies the
    specificity). All stages share one generator seeded with ``seed``.
    """
    _check_unit(recall, "recall")
    prof = replace(profile, recall=float(recall))
    rng = np.random.default_rng(int(seed))
    items = generate_ground_truth(domain, rng)
    counts_first = classify(items, prof, rng, backend)
    sent = np.flatnonzero(
        (items.stage_label == _kernels.TP) | (items.stage_label == _kernels.FP)
    )
    if sent.size:
        sub = items.take(sent)
        apply_fixer(sub, fixer, rng, backend)
        counts_second = classify(sub, prof, rng, backend)
        items.put(sent, sub)
    else:
        counts_second = ConfusionCounts(0, 0, 0, 0)

    n = domain.n_items
    tp_out = counts_second.tp
    fn_out = counts_first.fn + counts_second.fn
    final_prevalence = (tp_out + fn_out) / n
    if domain.prevalence > 0.0:
        real_fix_rate = 1.0 - final_prevalence / domain.prevalence
    else:
        real_fix_rate = None
    fn1, fn2 = counts_first.fn, counts_second.fn
    if fn1 > 0:
        fn_ratio = fn_out / fn1
    elif fn2 == 0:
        fn_ratio = 1.0  # vacuously no growth
    else:
        fn_ratio = None
    return TrialOutcome(
        counts_first=counts_first,
        counts_second=counts_second,
        final_prevalence=final_prevalence,
        real_fix_rate=real_fix_rate,
        fn_ratio=fn_ratio,
        recall_used=float(recall),
        seed_used=int(seed),
    )


def trial_seed(master_seed: int, stream: str, index: int) -> int:
    """Stable per-trial integer seed.

    Hash of ``(master_seed, stream_code, trial_index)`` via
    ``numpy.random.SeedSequence`` (a documented, platform-stable mix), so a
    trial's randomness depends only on its coordinates, never on execution
    order or on how many other trials run.
    """
    code = _STREAM_CODES[stream]
    ss = np.random.SeedSequence(entropy=(int(master_seed), code, int(index)))
    return int(ss.generate_state(1, np.uint64)[0])


def _aggregate(report_outcomes: dict) -> tuple[dict, int, int]:
    intervals: dict = {}
    all_outcomes = report_outcomes[STREAM_OPTIMISTIC] + report_outcomes[STREAM_PESSIMISTIC]
    for metric in METRICS:
        defined = [v for o in all_outcomes if (v := getattr(o, metric)) is not None]
        extremes = Interval(min(defined), max(defined)) if defined else None
        means = []
        for stream in (STREAM_OPTIMISTIC, STREAM_PESSIMISTIC):
            vals = [v for o in report_outcomes[stream] if (v := getattr(o, metric)) is not None]
            means.append(float(np.mean(vals)) if vals else None)
        if None in means:
            mean_interval = None
        else:
            mean_interval = Interval(min(means), max(means))
        intervals[metric] = {"extremes": extremes, "means": mean_interval}
    undefined_fix = sum(1 for o in all_outcomes if o.real_fix_rate is None)
    undefined_ratio = sum(1 for o in all_outcomes if o.fn_ratio is None)
    return intervals, undefined_fix, undefined_ratio


def run_experiment(
    domain: DomainSpec,
    profile: ClassifierProfile,
    fixer: FixerSpec,
    pbox: PBoxParams,
    trials: int,
    master_seed: int,
    backend: str | None = None,
) -> SimulationReport:
    """Run ``trials`` pipeline passes per recall stream and aggregate intervals.

    Recall streams of length ``trials`` are sampled from the p-box with
    ``master_seed``; each trial then runs under its own derived seed. The
    report carries per-trial outcomes plus, for each metric, the per-trial
    extremes interval and the stream-means interval (mean of each stream's
    per-trial values, oriented lo <= hi). Trials whose metric is undefined are
    excluded from aggregation and counted.
    """
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials!r}")
    streams = sample_recall_streams(pbox, trials, master_seed)
    outcomes: dict[str, tuple[TrialOutcome, ...]] = {}
    for stream, values in (
        (STREAM_OPTIMISTIC, streams.optimistic),
        (STREAM_PESSIMISTIC, streams.pessimistic),
    ):
        outcomes[stream] = tuple(
            run_trial(domain, profile, fixer, float(rec), trial_seed(master_seed, stream, i), backend)
            for i, rec in enumerate(values)
        )
    intervals, undefined_fix, undefined_ratio = _aggregate(outcomes)
    return SimulationReport(
        domain=domain,
        profile=profile,
        fixer=fixer,
        pbox=pbox,
        trials=int(trials),
        master_seed=int(master_seed),
        outcomes_optimistic=outcomes[STREAM_OPTIMISTIC],
        outcomes_pessimistic=outcomes[STREAM_PESSIMISTIC],
        intervals=intervals,
        undefined_real_fix_rate=undefined_fix,
        undefined_fn_ratio=undefined_ratio,
    )
