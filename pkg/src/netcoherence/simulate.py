"""Monte Carlo detection experiments: trial generation, batches, ROC curves.

Reproducibility contract
------------------------
Every trial draws from its own counter-based random stream so that results
do not depend on evaluation order or parallelism. The generator is numpy's
Philox4x64 keyed as::

    key = (master_seed << 64) | (hypothesis_bit << 63) | trial_index

with hypothesis_bit 0 for H0 and 1 for H1. Inside a trial the draw order is
fixed: under H1 the common signal vector is drawn first (real block, then
imaginary block), then the noise matrix (real block, then imaginary block);
under H0 only the noise matrix is drawn. Identical (master_seed, hypothesis,
trial_index) therefore always yields identical samples.

Signal model
------------
H0: ``X_m = n_m``. H1: ``X_m = sigma_m * s + n_m`` with one signal vector
``s`` shared by all channels per trial. All samples are circular complex
Gaussian. The shared signal ``s`` has unit variance per complex sample
(variance 1/2 in each quadrature); the noise has unit variance in each
quadrature (complex power 2). With ``sigma_m = 10**(snr_db_m / 20)`` the
stated per-node SNR is therefore the signal power relative to the power of
one noise quadrature, and an SNR of -inf dB reduces H1 to H0 in
distribution. The detection statistic is scale invariant, so only this
ratio matters.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .coherence import ChannelData, GcStatistic, Hypothesis, gc_statistic
from .errors import (
    ConvergenceError,
    DegenerateInputError,
    ExcessiveExclusionError,
    InfeasiblePartialMatrixError,
    InvalidInputError,
    SingularMatrixError,
    SubmatrixSingularError,
)
from .maxent import CompletionConfig
from .topology import Topology

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

#: Fraction of failed trials tolerated before a batch is abandoned.
MAX_EXCLUSION_RATE = 0.01

#: Per-trial errors that are counted and excluded rather than aborting a batch.
_TRIAL_ERRORS = (
    InfeasiblePartialMatrixError,
    ConvergenceError,
    SingularMatrixError,
    SubmatrixSingularError,
    DegenerateInputError,
)


@dataclass(frozen=True)
class SignalModel:
    """Experiment parameters: N samples, M nodes, per-node SNR, master seed."""

    sample_count: int
    node_count: int
    snr_db: tuple[float, ...]
    master_seed: int

    def __post_init__(self):
        if not isinstance(self.sample_count, int) or self.sample_count < 1:
            raise InvalidInputError(f"sample_count must be an integer >= 1, got {self.sample_count!r}")
        if not isinstance(self.node_count, int) or self.node_count < 2:
            raise InvalidInputError(f"node_count must be an integer >= 2, got {self.node_count!r}")
        snr = tuple(float(s) for s in self.snr_db)
        if len(snr) != self.node_count:
            raise InvalidInputError(
                f"snr_db must have one entry per node ({self.node_count}), got {len(snr)}"
            )
        if any(np.isnan(s) or s == np.inf for s in snr):
            raise InvalidInputError("snr_db entries must not be NaN or +inf")
        object.__setattr__(self, "snr_db", snr)
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            raise InvalidInputError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed!r}")

    @classmethod
    def equal_snr(
        cls, sample_count: int, node_count: int, snr_db: float, master_seed: int
    ) -> "SignalModel":
        return cls(sample_count, node_count, (float(snr_db),) * node_count, master_seed)

    @property
    def amplitudes(self) -> np.ndarray:
        """Per-node signal amplitude sigma_m (0.0 at -inf dB)."""
        return np.power(10.0, np.asarray(self.snr_db) / 20.0)


def _trial_rng(master_seed: int, hypothesis: Hypothesis, trial_index: int) -> np.random.Generator:
    bit = 1 if hypothesis is Hypothesis.H1 else 0
    key = (master_seed << 64) | (bit << 63) | trial_index
    return np.random.Generator(np.random.Philox(key=key))


def _complex_normal(rng: np.random.Generator, shape, quadrature_std: float) -> np.ndarray:
    # Real block drawn before imaginary block (reproducibility contract).
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) * quadrature_std

# Quadrature standard deviations: the shared signal has unit power per
# complex sample, the noise has unit variance in each quadrature.
_SIGNAL_QSTD = np.sqrt(0.5)
_NOISE_QSTD = 1.0


def generate_trial(model: SignalModel, hypothesis: Hypothesis, trial_index: int) -> ChannelData:
    """Channel data for one trial of the given hypothesis (deterministic per index)."""
    if not isinstance(hypothesis, Hypothesis):
        raise InvalidInputError(f"hypothesis must be a Hypothesis member, got {hypothesis!r}")
    if not isinstance(trial_index, int) or not 0 <= trial_index < 2**63:
        raise InvalidInputError(f"trial_index must be an integer in [0, 2^63), got {trial_index!r}")
    rng = _trial_rng(model.master_seed, hypothesis, trial_index)
    shape = (model.node_count, model.sample_count)
    if hypothesis is Hypothesis.H1:
        signal = _complex_normal(rng, model.sample_count, _SIGNAL_QSTD)
        noise = _complex_normal(rng, shape, _NOISE_QSTD)
        samples = model.amplitudes[:, None] * signal[None, :] + noise
    else:
        samples = _complex_normal(rng, shape, _NOISE_QSTD)
    return ChannelData(samples)


@dataclass(frozen=True)
class BatchDiagnostics:
    """Summary of the completion machinery's behaviour across a batch."""

    surrogates_per_trial: int
    max_zero_pattern_residual: float
    mean_refinement_sweeps: float


@dataclass(frozen=True)
class TrialBatch:
    """Scores from ``trials`` trials per hypothesis, in trial-index order.

    Excluded trials (completion failures) are dropped from the score arrays
    but counted; score array lengths are ``trials - excluded``.
    """

    h0_scores: np.ndarray
    h1_scores: np.ndarray
    trials: int
    h0_excluded: int
    h1_excluded: int
    diagnostics: BatchDiagnostics


def _score_one(
    model: SignalModel,
    t: Topology,
    cfg: CompletionConfig,
    hypothesis: Hypothesis,
    trial_index: int,
) -> GcStatistic | None:
    try:
        return gc_statistic(generate_trial(model, hypothesis, trial_index), t, cfg)
    except _TRIAL_ERRORS:
        return None


def run_batch(
    model: SignalModel,
    t: Topology,
    trials: int,
    config: CompletionConfig | None = None,
    workers: int = 1,
) -> TrialBatch:
    """Score ``trials`` trials under each hypothesis.

    ``workers > 1`` evaluates trials in a thread pool; results are keyed by
    trial index, so the output is bit-identical to a serial run.

    Raises
    ------
    ExcessiveExclusionError
        If more than 1% of all trials fail to score.
    """
    if not isinstance(trials, int) or trials < 1:
        raise InvalidInputError(f"trials must be an integer >= 1, got {trials!r}")
    if model.node_count != t.node_count:
        raise InvalidInputError(
            f"model has {model.node_count} nodes but topology has {t.node_count}"
        )
    cfg = config or CompletionConfig()

    def evaluate(hypothesis: Hypothesis) -> list[GcStatistic | None]:
        if workers <= 1:
            return [_score_one(model, t, cfg, hypothesis, i) for i in range(trials)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(
                pool.map(lambda i: _score_one(model, t, cfg, hypothesis, i), range(trials))
            )

    h0_stats = evaluate(Hypothesis.H0)
    h1_stats = evaluate(Hypothesis.H1)

    h0_kept = [s for s in h0_stats if s is not None]
    h1_kept = [s for s in h1_stats if s is not None]
    h0_excluded = trials - len(h0_kept)
    h1_excluded = trials - len(h1_kept)
    excluded = h0_excluded + h1_excluded
    if excluded / (2 * trials) > MAX_EXCLUSION_RATE:
        raise ExcessiveExclusionError(
            f"{excluded} of {2 * trials} trials failed to score "
            f"(rate {excluded / (2 * trials):.2%} exceeds {MAX_EXCLUSION_RATE:.0%})",
            excluded=excluded,
            requested=2 * trials,
        )

    completions = [s.completion for s in h0_kept + h1_kept if s.completion is not None]
    diagnostics = BatchDiagnostics(
        surrogates_per_trial=len(t.missing_pairs()),
        max_zero_pattern_residual=(
            max(c.zero_pattern_residual for c in completions) if completions else 0.0
        ),
        mean_refinement_sweeps=(
            float(np.mean([c.iterations for c in completions])) if completions else 0.0
        ),
    )
    return TrialBatch(
        h0_scores=np.array([s.value for s in h0_kept]),
        h1_scores=np.array([s.value for s in h1_kept]),
        trials=trials,
        h0_excluded=h0_excluded,
        h1_excluded=h1_excluded,
        diagnostics=diagnostics,
    )


@dataclass(frozen=True)
class RocCurve:
    """Empirical ROC: one (pfa, pd) point per threshold, thresholds ascending.

    ``pfa`` and ``pd`` are the fractions of H0 and H1 scores STRICTLY above
    each threshold (ties decide H0), so both are non-increasing along the
    array. ``auc`` is the trapezoidal area under pd as a function of pfa.
    """

    thresholds: np.ndarray
    pfa: np.ndarray
    pd: np.ndarray
    auc: float

    def points(self) -> Iterable[tuple[float, float, float]]:
        return zip(self.thresholds.tolist(), self.pfa.tolist(), self.pd.tolist())


def _exceed_fraction(sorted_scores: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    n = sorted_scores.size
    return (n - np.searchsorted(sorted_scores, thresholds, side="right")) / n


def roc_from_scores(batch: TrialBatch) -> RocCurve:
    """Empirical ROC over the merged unique score values plus {0, 1}."""
    h0 = np.asarray(batch.h0_scores, dtype=float)
    h1 = np.asarray(batch.h1_scores, dtype=float)
    if h0.size == 0 or h1.size == 0:
        raise InvalidInputError("both hypotheses need at least one score")
    thresholds = np.unique(np.concatenate([h0, h1, [0.0, 1.0]]))
    h0s = np.sort(h0)
    h1s = np.sort(h1)
    pfa = _exceed_fraction(h0s, thresholds)
    pd = _exceed_fraction(h1s, thresholds)
    # thresholds ascend, so pfa/pd descend; integrate over ascending pfa.
    auc = float(_trapezoid(pd[::-1], pfa[::-1]))
    return RocCurve(thresholds=thresholds, pfa=pfa, pd=pd, auc=auc)


def pd_at_pfa(curve: RocCurve, pfa_target: float = 0.1) -> float:
    """Detection probability at a false-alarm rate, linearly interpolated.

    Where several ROC points share a pfa (vertical staircase segments), the
    upper envelope is used.
    """
    if not 0.0 <= pfa_target <= 1.0:
        raise InvalidInputError(f"pfa_target must be in [0, 1], got {pfa_target!r}")
    pfa_asc = curve.pfa[::-1]
    pd_asc = curve.pd[::-1]
    unique_pfa, start = np.unique(pfa_asc, return_index=True)
    # Upper envelope: with pd ascending alongside pfa, the max pd for each
    # pfa value is at the END of its run, i.e. just before the next start.
    ends = np.append(start[1:] - 1, pfa_asc.size - 1)
    return float(np.interp(pfa_target, unique_pfa, pd_asc[ends]))


@dataclass(frozen=True)
class LinkValue:
    """Worth of one edge: detection performance lost when it is removed.

    ``critical`` marks bridges whose removal disconnects the network; these
    carry no numeric gains.
    """

    edge: tuple[int, int]
    critical: bool
    pd_gain_at_pfa: float | None
    auc_gain: float | None


def link_value_report(
    model: SignalModel,
    t: Topology,
    trials: int,
    config: CompletionConfig | None = None,
    pfa_target: float = 0.1,
    workers: int = 1,
) -> list[LinkValue]:
    """Value of every edge of ``t``: base performance minus performance without it.

    The value of a link is the performance gained by measuring its inner
    product rather than substituting the maximum-entropy surrogate. One
    row per edge, edges in sorted order; the base batch is computed once.
    """
    if not t.is_connected():
        raise InvalidInputError("link value needs a connected base topology")
    base_curve = roc_from_scores(run_batch(model, t, trials, config, workers))
    base_pd = pd_at_pfa(base_curve, pfa_target)
    rows = []
    for edge in sorted(t.edges):
        reduced = t.without_edge(edge)
        if not reduced.is_connected():
            rows.append(LinkValue(edge=edge, critical=True, pd_gain_at_pfa=None, auc_gain=None))
            continue
        curve = roc_from_scores(run_batch(model, reduced, trials, config, workers))
        rows.append(
            LinkValue(
                edge=edge,
                critical=False,
                pd_gain_at_pfa=base_pd - pd_at_pfa(curve, pfa_target),
                auc_gain=base_curve.auc - curve.auc,
            )
        )
    return rows
