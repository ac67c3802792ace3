"""The numba fast path and the numpy fallback must be interchangeable:
same draws, same comparisons, bit-identical results."""

import numpy as np
import pytest

from pipeuq import ClassifierProfile, DomainSpec, FixerSpec, InvalidParameterError, PBoxParams
from pipeuq import _kernels
from pipeuq.simulator import run_experiment, run_trial

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


class TestResolution:
    def test_explicit_override_wins(self, monkeypatch):
        monkeypatch.setenv(_kernels.ENV_VAR, "numpy")
        assert _kernels.resolve_backend("numpy") == "numpy"

    def test_env_var_selects_fallback(self, monkeypatch):
        monkeypatch.setenv(_kernels.ENV_VAR, "numpy")
        assert _kernels.resolve_backend() == "numpy"

    def test_default_prefers_numba_when_available(self, monkeypatch):
        monkeypatch.delenv(_kernels.ENV_VAR, raising=False)
        expected = "numba" if _kernels.HAVE_NUMBA else "numpy"
        assert _kernels.resolve_backend() == expected

    def test_unknown_backend_rejected(self):
        with pytest.raises(InvalidParameterError):
            _kernels.resolve_backend("fortran")


@needs_numba
class TestKernelEquivalence:
    def test_classify_counts_identical(self):
        rng = np.random.default_rng(0)
        vulnerable = rng.random(5000) < 0.4
        u = rng.random(5000)
        for rec, spec in ((0.0, 0.0), (0.5, 0.25), (1.0, 1.0)):
            got_np = _kernels.classify_counts(vulnerable, u, rec, spec, "numpy")
            got_nb = _kernels.classify_counts(vulnerable, u, rec, spec, "numba")
            assert np.array_equal(got_np[0], got_nb[0])
            assert got_np[1:] == got_nb[1:]

    def test_fixer_flags_identical(self):
        rng = np.random.default_rng(1)
        vulnerable = rng.random(5000) < 0.5
        u_fix, u_break = rng.random(5000), rng.random(5000)
        for f, b in ((0.0, 0.0), (0.5, 0.0), (0.7, 0.3), (1.0, 1.0)):
            got_np = _kernels.fixer_flags(vulnerable, u_fix, u_break, f, b, "numpy")
            got_nb = _kernels.fixer_flags(vulnerable, u_fix, u_break, f, b, "numba")
            for a, c in zip(got_np, got_nb):
                assert np.array_equal(a, c)


@needs_numba
class TestPipelineEquivalence:
    @pytest.mark.parametrize(
        "prevalence, fix_rate, break_rate, recall",
        [(0.5, 0.5, 0.0, 0.74), (1.0, 1.0, 0.0, 1.0), (0.2, 0.7, 0.3, 0.4), (0.0, 0.5, 0.0, 0.9)],
    )
    def test_run_trial_bit_identical(self, prevalence, fix_rate, break_rate, recall):
        domain = DomainSpec(4000, prevalence)
        profile = ClassifierProfile(1.0, specificity=0.1)
        fixer = FixerSpec(fix_rate, break_rate)
        out_np = run_trial(domain, profile, fixer, recall, seed=77, backend="numpy")
        out_nb = run_trial(domain, profile, fixer, recall, seed=77, backend="numba")
        assert out_np == out_nb

    def test_run_experiment_bit_identical(self):
        domain = DomainSpec(1500, 0.5)
        profile = ClassifierProfile(1.0, specificity=0.0)
        box = PBoxParams(0.07, 1.00, 0.74)
        rep_np = run_experiment(domain, profile, FixerSpec(0.7), box, 20, 5, backend="numpy")
        rep_nb = run_experiment(domain, profile, FixerSpec(0.7), box, 20, 5, backend="numba")
        assert rep_np == rep_nb

    def test_env_var_equivalence(self, monkeypatch):
        domain = DomainSpec(1000, 0.3)
        profile = ClassifierProfile(1.0)
        monkeypatch.setenv(_kernels.ENV_VAR, "numpy")
        out_env = run_trial(domain, profile, FixerSpec(0.5), 0.6, seed=3)
        monkeypatch.delenv(_kernels.ENV_VAR)
        out_default = run_trial(domain, profile, FixerSpec(0.5), 0.6, seed=3)
        assert out_env == out_default
