import numpy as np
import pytest

import netcoherence.simulate as simulate
from netcoherence import (
    ChannelData,
    DegenerateInputError,
    ExcessiveExclusionError,
    Hypothesis,
    InvalidInputError,
    SignalModel,
    Topology,
    gc_statistic,
    generate_trial,
    link_value_report,
    pd_at_pfa,
    roc_from_scores,
    run_batch,
)
from support import FOUR_CYCLE, LINEAR3, TRIANGLE_TAIL4


# -- SignalModel -----------------------------------------------------------


def test_signal_model_validation():
    with pytest.raises(InvalidInputError):
        SignalModel(0, 3, (0.0, 0.0, 0.0), 1)
    with pytest.raises(InvalidInputError):
        SignalModel(8, 1, (0.0,), 1)
    with pytest.raises(InvalidInputError):
        SignalModel(8, 3, (0.0, 0.0), 1)  # wrong per-node count
    with pytest.raises(InvalidInputError):
        SignalModel(8, 2, (np.nan, 0.0), 1)
    with pytest.raises(InvalidInputError):
        SignalModel(8, 2, (np.inf, 0.0), 1)
    with pytest.raises(InvalidInputError):
        SignalModel(8, 2, (0.0, 0.0), -1)
    with pytest.raises(InvalidInputError):
        SignalModel(8, 2, (0.0, 0.0), 2**64)


def test_amplitudes_from_snr():
    m = SignalModel(8, 3, (0.0, -6.0, -np.inf), 9)
    assert m.amplitudes[0] == pytest.approx(1.0)
    assert m.amplitudes[1] == pytest.approx(10.0 ** (-6.0 / 20.0))
    assert m.amplitudes[2] == 0.0


def test_equal_snr_builder():
    m = SignalModel.equal_snr(64, 4, -3.0, 7)
    assert m.snr_db == (-3.0, -3.0, -3.0, -3.0)
    assert m.sample_count == 64
    assert m.node_count == 4


# -- trial generation ------------------------------------------------------


def test_generate_trial_is_deterministic():
    m = SignalModel.equal_snr(32, 3, -3.0, 12345)
    a = generate_trial(m, Hypothesis.H1, 7)
    b = generate_trial(m, Hypothesis.H1, 7)
    assert np.array_equal(a.samples, b.samples)


def test_trials_and_hypotheses_use_distinct_streams():
    m = SignalModel.equal_snr(32, 3, -np.inf, 12345)
    h0 = generate_trial(m, Hypothesis.H0, 0)
    h1 = generate_trial(m, Hypothesis.H1, 0)
    nxt = generate_trial(m, Hypothesis.H0, 1)
    assert not np.array_equal(h0.samples, h1.samples)
    assert not np.array_equal(h0.samples, nxt.samples)


def test_different_master_seeds_differ():
    a = generate_trial(SignalModel.equal_snr(16, 2, 0.0, 1), Hypothesis.H0, 0)
    b = generate_trial(SignalModel.equal_snr(16, 2, 0.0, 2), Hypothesis.H0, 0)
    assert not np.array_equal(a.samples, b.samples)


def test_generate_trial_validation():
    m = SignalModel.equal_snr(8, 2, 0.0, 1)
    with pytest.raises(InvalidInputError):
        generate_trial(m, "H0", 0)
    with pytest.raises(InvalidInputError):
        generate_trial(m, Hypothesis.H0, -1)
    with pytest.raises(InvalidInputError):
        generate_trial(m, Hypothesis.H0, 2**63)


def test_noise_has_unit_variance_per_quadrature():
    m = SignalModel.equal_snr(100_000, 2, -np.inf, 99)
    d = generate_trial(m, Hypothesis.H0, 0)
    power = float(np.mean(np.abs(d.samples) ** 2))
    assert power == pytest.approx(2.0, abs=0.04)
    # quadratures balanced
    assert float(np.mean(d.samples.real**2)) == pytest.approx(1.0, abs=0.03)
    assert float(np.mean(d.samples.imag**2)) == pytest.approx(1.0, abs=0.03)


def test_h1_carries_a_shared_signal():
    # at very high SNR every channel is the same signal up to noise
    m = SignalModel.equal_snr(64, 3, 40.0, 4)
    d = generate_trial(m, Hypothesis.H1, 0)
    s = gc_statistic(d, Topology.complete(3))
    assert s.value > 0.99


def test_snr_sets_signal_power():
    # H1 per-sample power is noise power 2 plus unit-power signal times
    # amplitude squared
    snr_db = -3.0
    m = SignalModel.equal_snr(50_000, 2, snr_db, 17)
    d = generate_trial(m, Hypothesis.H1, 0)
    power = float(np.mean(np.abs(d.samples) ** 2))
    expected = 2.0 + 10.0 ** (snr_db / 10.0)
    assert power == pytest.approx(expected, rel=0.03)


# -- run_batch -------------------------------------------------------------


def test_run_batch_single_trial_matches_direct_evaluation():
    m = SignalModel.equal_snr(32, 3, -3.0, 21)
    batch = run_batch(m, LINEAR3, 1)
    direct_h0 = gc_statistic(generate_trial(m, Hypothesis.H0, 0), LINEAR3).value
    direct_h1 = gc_statistic(generate_trial(m, Hypothesis.H1, 0), LINEAR3).value
    assert batch.h0_scores[0] == direct_h0
    assert batch.h1_scores[0] == direct_h1
    assert batch.trials == 1
    assert batch.h0_excluded == 0 and batch.h1_excluded == 0


def test_run_batch_parallel_is_bit_identical():
    m = SignalModel.equal_snr(24, 4, -3.0, 22)
    serial = run_batch(m, FOUR_CYCLE, 40, workers=1)
    threaded = run_batch(m, FOUR_CYCLE, 40, workers=4)
    assert np.array_equal(serial.h0_scores, threaded.h0_scores)
    assert np.array_equal(serial.h1_scores, threaded.h1_scores)


def test_run_batch_diagnostics():
    m = SignalModel.equal_snr(24, 4, -3.0, 23)
    batch = run_batch(m, FOUR_CYCLE, 10)
    assert batch.diagnostics.surrogates_per_trial == 2
    assert batch.diagnostics.max_zero_pattern_residual <= 1e-8
    complete_batch = run_batch(m, Topology.complete(4), 10)
    assert complete_batch.diagnostics.surrogates_per_trial == 0
    assert complete_batch.diagnostics.max_zero_pattern_residual == 0.0


def test_run_batch_validation():
    m = SignalModel.equal_snr(8, 3, 0.0, 1)
    with pytest.raises(InvalidInputError):
        run_batch(m, LINEAR3, 0)
    with pytest.raises(InvalidInputError):
        run_batch(m, FOUR_CYCLE, 4)  # node count mismatch


def _failing_gc(period):
    """Wrapper around the real scorer that fails every ``period``-th call."""
    calls = {"n": 0}
    real = gc_statistic

    def wrapped(d, t, cfg=None):
        calls["n"] += 1
        if calls["n"] % period == 0:
            raise DegenerateInputError("synthetic failure")
        return real(d, t, cfg)

    return wrapped


def test_small_exclusion_rate_is_counted(monkeypatch):
    m = SignalModel.equal_snr(16, 3, 0.0, 31)
    monkeypatch.setattr(simulate, "gc_statistic", _failing_gc(200))
    batch = run_batch(m, LINEAR3, 200)
    assert batch.h0_excluded + batch.h1_excluded == 2
    assert batch.h0_scores.size == 199
    assert batch.h1_scores.size == 199


def test_excessive_exclusion_rate_raises(monkeypatch):
    m = SignalModel.equal_snr(16, 3, 0.0, 32)
    monkeypatch.setattr(simulate, "gc_statistic", _failing_gc(50))
    with pytest.raises(ExcessiveExclusionError) as exc_info:
        run_batch(m, LINEAR3, 200)
    assert exc_info.value.excluded == 8
    assert exc_info.value.requested == 400


# -- ROC construction ------------------------------------------------------


def _batch_from(h0, h1):
    return simulate.TrialBatch(
        h0_scores=np.asarray(h0, dtype=float),
        h1_scores=np.asarray(h1, dtype=float),
        trials=len(h0),
        h0_excluded=0,
        h1_excluded=0,
        diagnostics=simulate.BatchDiagnostics(0, 0.0, 0.0),
    )


def test_roc_hand_worked_example():
    curve = roc_from_scores(_batch_from([0.1, 0.2], [0.15, 0.3]))
    assert np.array_equal(curve.thresholds, [0.0, 0.1, 0.15, 0.2, 0.3, 1.0])
    by_threshold = {t: (pfa, pd) for t, pfa, pd in curve.points()}
    assert by_threshold[0.1] == (0.5, 1.0)
    assert by_threshold[0.2] == (0.0, 0.5)
    assert curve.auc == pytest.approx(0.75, abs=1e-15)


def test_roc_curves_are_monotone():
    rng = np.random.default_rng(60)
    curve = roc_from_scores(_batch_from(rng.uniform(size=200), rng.uniform(size=200)))
    assert np.all(np.diff(curve.pfa) <= 0)
    assert np.all(np.diff(curve.pd) <= 0)
    assert np.all(np.diff(curve.thresholds) > 0)
    assert curve.pfa[0] == 1.0 and curve.pfa[-1] == 0.0


def test_roc_ties_decide_h0():
    # all scores equal: nothing is ever strictly above its own value
    curve = roc_from_scores(_batch_from([0.5, 0.5], [0.5, 0.5]))
    by_threshold = {t: (pfa, pd) for t, pfa, pd in curve.points()}
    assert by_threshold[0.5] == (0.0, 0.0)


def test_roc_perfect_separation():
    curve = roc_from_scores(_batch_from([0.1, 0.2, 0.3], [0.7, 0.8, 0.9]))
    assert curve.auc == pytest.approx(1.0, abs=1e-15)


def test_roc_identical_distributions_near_half():
    rng = np.random.default_rng(61)
    curve = roc_from_scores(_batch_from(rng.uniform(size=2000), rng.uniform(size=2000)))
    assert abs(curve.auc - 0.5) < 0.05


def test_roc_empty_scores_rejected():
    with pytest.raises(InvalidInputError):
        roc_from_scores(_batch_from([], [0.5]))


def test_pd_at_pfa_interpolates_upper_envelope():
    curve = roc_from_scores(_batch_from([0.1, 0.2], [0.15, 0.3]))
    # pfa runs 0 -> 0.5 with pd 0.5 -> 1.0 on the envelope
    assert pd_at_pfa(curve, 0.0) == pytest.approx(0.5)
    assert pd_at_pfa(curve, 0.5) == pytest.approx(1.0)
    assert pd_at_pfa(curve, 0.1) == pytest.approx(0.6)
    assert pd_at_pfa(curve, 1.0) == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        pd_at_pfa(curve, 1.5)


def test_end_to_end_auc_improves_with_snr():
    strong = run_batch(SignalModel.equal_snr(32, 3, 10.0, 70), LINEAR3, 60)
    weak = run_batch(SignalModel.equal_snr(32, 3, -20.0, 70), LINEAR3, 60)
    assert roc_from_scores(strong).auc > 0.95
    assert abs(roc_from_scores(weak).auc - 0.5) < 0.25


# -- relabeling invariance -------------------------------------------------


def test_statistic_invariant_under_joint_relabeling():
    rng = np.random.default_rng(62)
    m = SignalModel.equal_snr(24, 4, -3.0, 55)
    perm = {1: 3, 2: 1, 3: 4, 4: 2}
    t2 = FOUR_CYCLE.apply_permutation(perm)
    for trial in range(10):
        hyp = Hypothesis.H1 if trial % 2 else Hypothesis.H0
        d = generate_trial(m, hyp, trial)
        s1 = gc_statistic(d, FOUR_CYCLE)
        s2 = gc_statistic(d.permuted(perm), t2)
        assert abs(s1.value - s2.value) <= 1e-10


# -- link value ------------------------------------------------------------


def test_link_value_complete_triangle():
    m = SignalModel.equal_snr(24, 3, -3.0, 81)
    rows = link_value_report(m, Topology.complete(3), 30)
    assert [r.edge for r in rows] == [(1, 2), (1, 3), (2, 3)]
    assert all(not r.critical for r in rows)
    assert all(r.pd_gain_at_pfa is not None and r.auc_gain is not None for r in rows)


def test_link_value_star_is_all_critical():
    m = SignalModel.equal_snr(24, 4, -3.0, 82)
    star = Topology(4, {(1, 2), (1, 3), (1, 4)})
    rows = link_value_report(m, star, 30)
    assert all(r.critical for r in rows)
    assert all(r.pd_gain_at_pfa is None and r.auc_gain is None for r in rows)


def test_link_value_mixed_criticality():
    m = SignalModel.equal_snr(24, 4, -3.0, 83)
    rows = link_value_report(m, TRIANGLE_TAIL4, 30)
    critical = {r.edge for r in rows if r.critical}
    assert critical == {(2, 4)}  # the only bridge
    assert len(rows) == 4


def test_link_value_needs_connected_base():
    m = SignalModel.equal_snr(24, 3, -3.0, 84)
    with pytest.raises(InvalidInputError):
        link_value_report(m, Topology(3, {(1, 2)}), 10)
