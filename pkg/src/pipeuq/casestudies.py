"""Binomial confidence intervals for repair tools, and a composed-pipeline
worked example with an uncertainty wrap.

``agresti_coull_interval`` is the primary interval (adjusted center
``(x + z^2/2) / (n + z^2)``); the Wilson score interval is available as a
selectable variant. Both clamp to [0, 1].

``composed_pipeline_case`` chains a detector and a repair model over a fully
vulnerable code corpus with sequential rounding at each stage (counts are
rounded half away from zero before feeding the next stage), then wraps the
end-to-end fix rate in the interval implied by a recall p-box.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from scipy.stats import norm

from .errors import EvidenceFormatError, InvalidParameterError
from .evidence import DEFAULT_RECALL_PBOX
from .core import round_half_away
from .pbox import Interval, PBoxParams, stream_mean_optimistic, stream_mean_pessimistic

__all__ = [
    "ToolRecord",
    "ProportionCI",
    "CaseStudyRow",
    "ComposedPipelineReport",
    "DEFAULT_TOOL_RECORDS",
    "INTERVAL_METHODS",
    "agresti_coull_interval",
    "wilson_interval",
    "rule_based_case_study",
    "composed_pipeline_case",
    "load_tool_records",
]


@dataclass(frozen=True)
class ToolRecord:
    """Patch counts for one repair tool: ``correct`` out of ``generated``."""

    name: str
    correct: int
    generated: int

    def __post_init__(self):
        if self.generated < 1:
            raise InvalidParameterError(f"{self.name}: generated must be >= 1")
        if not 0 <= self.correct <= self.generated:
            raise InvalidParameterError(
                f"{self.name}: need 0 <= correct <= generated, got "
                f"{self.correct}/{self.generated}"
            )


@dataclass(frozen=True)
class ProportionCI:
    """Point estimate with a clamped two-sided confidence interval."""

    point: float
    lo: float
    hi: float
    confidence: float


@dataclass(frozen=True)
class CaseStudyRow:
    name: str
    point: float
    ci: ProportionCI


# Bundled example: correct/generated patch counts reported for six automated
# repair tools evaluated on a common Java defect benchmark.
DEFAULT_TOOL_RECORDS = (
    ToolRecord("ACS", 16, 22),
    ToolRecord("SimFix", 25, 68),
    ToolRecord("FixMiner", 12, 33),
    ToolRecord("Kali-A", 3, 65),
    ToolRecord("DynaMoth", 1, 22),
    ToolRecord("Nopol", 1, 31),
)


def _z_two_sided(confidence: float) -> float:
    if not 0.0 < confidence < 1.0:
        raise InvalidParameterError(f"confidence must lie in (0, 1), got {confidence!r}")
    return float(norm.ppf(0.5 + confidence / 2.0))


def _validate_counts(successes: int, trials: int) -> None:
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials!r}")
    if not 0 <= successes <= trials:
        raise InvalidParameterError(
            f"need 0 <= successes <= trials, got {successes}/{trials}"
        )


def agresti_coull_interval(successes: int, trials: int, confidence: float = 0.95) -> ProportionCI:
    """Adjusted-Wald binomial proportion interval.

    Center ``(x + z^2/2) / (n + z^2)``, half-width
    ``z * sqrt(center * (1 - center) / (n + z^2))``, bounds clamped to [0, 1].
    Behaves well for small samples and extreme proportions.
    """
    _validate_counts(successes, trials)
    z = _z_two_sided(confidence)
    n_adj = trials + z * z
    center = (successes + z * z / 2.0) / n_adj
    half = z * (center * (1.0 - center) / n_adj) ** 0.5
    return ProportionCI(
        point=successes / trials,
        lo=max(0.0, center - half),
        hi=min(1.0, center + half),
        confidence=confidence,
    )


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> ProportionCI:
    """Wilson score interval, offered as an alternative to Agresti-Coull."""
    _validate_counts(successes, trials)
    z = _z_two_sided(confidence)
    p_hat = successes / trials
    denom = 1.0 + z * z / trials
    center = (p_hat + z * z / (2.0 * trials)) / denom
    half = (z / denom) * (p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials * trials)) ** 0.5
    return ProportionCI(
        point=p_hat,
        lo=max(0.0, center - half),
        hi=min(1.0, center + half),
        confidence=confidence,
    )


INTERVAL_METHODS = {
    "agresti-coull": agresti_coull_interval,
    "wilson": wilson_interval,
}


def rule_based_case_study(
    tools=DEFAULT_TOOL_RECORDS,
    confidence: float = 0.95,
    method: str = "agresti-coull",
) -> tuple[CaseStudyRow, ...]:
    """Confidence-interval table for a list of tool records."""
    try:
        interval = INTERVAL_METHODS[method]
    except KeyError:
        raise InvalidParameterError(
            f"method must be one of {sorted(INTERVAL_METHODS)}, got {method!r}"
        ) from None
    return tuple(
        CaseStudyRow(t.name, t.correct / t.generated, interval(t.correct, t.generated, confidence))
        for t in tools
    )


@dataclass(frozen=True)
class ComposedPipelineReport:
    """Sequentially rounded detect/fix chain plus the fix-rate uncertainty wrap."""

    n_items: int
    detector_recall: float
    repair_accuracy: float
    detected: int
    fixed: int
    residual: int
    fix_rate_extremes: Interval
    fix_rate_means: Interval
    notes: tuple[str, ...]


def composed_pipeline_case(
    n_items: int,
    detector_recall: float,
    repair_accuracy: float,
    pbox: PBoxParams = DEFAULT_RECALL_PBOX,
) -> ComposedPipelineReport:
    """Point-estimate pipeline arithmetic with an uncertainty wrap.

    The chain rounds at each stage: ``detected = round(n * recall)``,
    ``fixed = round(detected * accuracy)``, ``residual = detected - fixed``.
    The wrap applies the end-to-end fix-rate identity ``accuracy * recall``
    over the recall p-box, in both aggregation modes: extremes uses the box's
    min/max recall, means uses the analytic mean of each sampling stream.
    """
    if n_items < 1:
        raise InvalidParameterError(f"n_items must be >= 1, got {n_items!r}")
    for name, v in (("detector_recall", detector_recall), ("repair_accuracy", repair_accuracy)):
        if not 0.0 <= v <= 1.0:
            raise InvalidParameterError(f"{name} must lie in [0, 1], got {v!r}")
    detected = round_half_away(n_items * detector_recall)
    fixed = round_half_away(detected * repair_accuracy)
    residual = detected - fixed
    extremes = Interval(repair_accuracy * pbox.minimum, repair_accuracy * pbox.maximum)
    mean_vals = sorted(
        (
            repair_accuracy * stream_mean_pessimistic(pbox),
            repair_accuracy * stream_mean_optimistic(pbox),
        )
    )
    notes = (
        "the upper bound equals repair_accuracy x max recall; end-to-end fix "
        "rates above it are not derivable from this model",
    )
    return ComposedPipelineReport(
        n_items=int(n_items),
        detector_recall=float(detector_recall),
        repair_accuracy=float(repair_accuracy),
        detected=detected,
        fixed=fixed,
        residual=residual,
        fix_rate_extremes=extremes,
        fix_rate_means=Interval(mean_vals[0], mean_vals[1]),
        notes=notes,
    )


_TOOL_HEADER = ["name", "correct", "generated"]


def load_tool_records(source) -> tuple[ToolRecord, ...]:
    """Parse tool records from a CSV (``name,correct,generated`` header,
    ``#`` comments allowed)."""
    own = not hasattr(source, "read")
    fh = open(source, encoding="utf-8", newline="") if own else source
    try:
        records = []
        saw_header = False
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            row = [cell.strip() for cell in next(csv.reader([line]))]
            if not saw_header:
                if row != _TOOL_HEADER:
                    raise EvidenceFormatError(
                        f"expected header {','.join(_TOOL_HEADER)!r}, got {line!r}", lineno
                    )
                saw_header = True
                continue
            if len(row) != 3:
                raise EvidenceFormatError(f"expected 3 columns, got {len(row)}", lineno)
            name, correct_text, generated_text = row
            try:
                correct, generated = int(correct_text), int(generated_text)
            except ValueError as exc:
                raise EvidenceFormatError(f"counts must be integers, got {line!r}", lineno) from exc
            records.append(ToolRecord(name, correct, generated))
        if not saw_header:
            raise EvidenceFormatError(f"missing header {','.join(_TOOL_HEADER)!r}")
        return tuple(records)
    finally:
        if own:
            fh.close()
