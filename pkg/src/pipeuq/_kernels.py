"""Per-item hot loops of the Monte Carlo simulator.

Every kernel exists twice: a numba ``@njit`` fast path and a pure-numpy
fallback. Selection order:

1. explicit ``backend=`` argument ("numba" or "numpy"),
2. the ``PIPEUQ_BACKEND`` environment variable,
3. "numba" when importable, else "numpy".

Both implementations consume the same pre-drawn uniform arrays and compare
against them with identical strict ``<`` thresholds, so for a given seed they
produce bit-identical results. Random numbers are always generated outside the
kernels by ``numpy.random.Generator``, which keeps the draw protocol
backend-independent.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

from .errors import InvalidParameterError

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


ENV_VAR = "PIPEUQ_BACKEND"
BACKENDS = ("numba", "numpy")

# Stage labels; the simulator's StageLabel enum mirrors these values.
UNVISITED = 0
TP = 1
FN = 2
TN = 3
FP = 4


def resolve_backend(override: str | None = None) -> str:
    """Resolve the backend name from the override, the env var, or defaults."""
    name = override or os.environ.get(ENV_VAR) or ("numba" if HAVE_NUMBA else "numpy")
    name = name.strip().lower()
    if name not in BACKENDS:
        raise InvalidParameterError(f"backend must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        warnings.warn("numba is not installed; falling back to the numpy backend")
        return "numpy"
    return name


def _classify_numpy(vulnerable, u, recall, specificity):
    n = vulnerable.shape[0]
    labels = np.empty(n, dtype=np.uint8)
    pos_hit = vulnerable & (u < recall)
    pos_miss = vulnerable & ~pos_hit
    neg_hit = ~vulnerable & (u < specificity)
    neg_miss = ~vulnerable & ~(u < specificity)
    labels[pos_hit] = TP
    labels[pos_miss] = FN
    labels[neg_hit] = TN
    labels[neg_miss] = FP
    return (
        labels,
        int(pos_hit.sum()),
        int(pos_miss.sum()),
        int(neg_hit.sum()),
        int(neg_miss.sum()),
    )


@njit(cache=True)
def _classify_numba(vulnerable, u, recall, specificity):  # pragma: no cover - jitted
    n = vulnerable.shape[0]
    labels = np.empty(n, dtype=np.uint8)
    tp = fn = tn = fp = 0
    for i in range(n):
        if vulnerable[i]:
            if u[i] < recall:
                labels[i] = TP
                tp += 1
            else:
                labels[i] = FN
                fn += 1
        else:
            if u[i] < specificity:
                labels[i] = TN
                tn += 1
            else:
                labels[i] = FP
                fp += 1
    return labels, tp, fn, tn, fp


def _fix_numpy(vulnerable, u_fix, u_break, fix_rate, break_rate):
    fixed = u_fix < fix_rate
    broken = u_break < break_rate
    post = np.where(broken, True, np.where(fixed, False, vulnerable))
    return fixed, broken, post


@njit(cache=True)
def _fix_numba(vulnerable, u_fix, u_break, fix_rate, break_rate):  # pragma: no cover - jitted
    n = vulnerable.shape[0]
    fixed = np.empty(n, dtype=np.bool_)
    broken = np.empty(n, dtype=np.bool_)
    post = np.empty(n, dtype=np.bool_)
    for i in range(n):
        f = u_fix[i] < fix_rate
        b = u_break[i] < break_rate
        fixed[i] = f
        broken[i] = b
        if b:
            post[i] = True
        elif f:
            post[i] = False
        else:
            post[i] = vulnerable[i]
    return fixed, broken, post


def classify_counts(vulnerable, u, recall, specificity, backend: str | None = None):
    """Label each item and tally the confusion counts in one pass.

    Vulnerable items become TP when ``u < recall`` else FN; clean items become
    TN when ``u < specificity`` else FP. Returns ``(labels, tp, fn, tn, fp)``.
    """
    impl = _classify_numba if resolve_backend(backend) == "numba" else _classify_numpy
    labels, tp, fn, tn, fp = impl(vulnerable, u, float(recall), float(specificity))
    return labels, int(tp), int(fn), int(tn), int(fp)


def fixer_flags(vulnerable, u_fix, u_break, fix_rate, break_rate, backend: str | None = None):
    """Per-item fixer outcome.

    An item is fixed when ``u_fix < fix_rate`` and independently broken when
    ``u_break < break_rate``. The post-fixer vulnerability flag is True for
    broken items, False for (unbroken) fixed items, and unchanged otherwise.
    Returns ``(fixed, broken, post_vulnerable)``.
    """
    impl = _fix_numba if resolve_backend(backend) == "numba" else _fix_numpy
    return impl(vulnerable, u_fix, u_break, float(fix_rate), float(break_rate))
