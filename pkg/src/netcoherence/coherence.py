"""The generalized coherence statistic over a sensor network.

Given M channels of N complex samples, each channel is normalized to unit
norm and the statistic is ``1 - det(G)`` where ``G`` is the unit-diagonal
hermitian Gram matrix of the normalized channels. On a completely connected
network every entry of ``G`` is available; otherwise the missing inner
products are replaced by their maximum-entropy surrogates from
:func:`netcoherence.maxent.complete` before the determinant is taken.

The statistic lies in [0, 1]: 0 for mutually orthogonal channels, 1 when the
channels are linearly dependent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import maxent, numerics
from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    InternalConsistencyError,
    InvalidInputError,
    InvalidThresholdError,
)
from .maxent import CompletionConfig, CompletionResult, PartialHermitian
from .numerics import HermitianMatrix
from .topology import Topology

#: Excursions of the statistic beyond [0, 1] larger than this indicate a bug
#: rather than roundoff and are not clamped.
RANGE_SLACK = 1e-12


class Hypothesis(enum.Enum):
    """Detection hypotheses: H0 noise only, H1 common signal present."""

    H0 = "H0"
    H1 = "H1"


@dataclass(frozen=True)
class ChannelData:
    """M channels of N complex samples, as an (M, N) array (one row per node)."""

    samples: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.samples, dtype=np.complex128)
        if a.ndim != 2:
            raise DimensionMismatchError(f"samples must be 2-D (M, N), got shape {a.shape}")
        if a.shape[0] < 2:
            raise DimensionMismatchError("need at least 2 channels")
        if a.shape[1] < 1:
            raise DimensionMismatchError("need at least 1 sample per channel")
        if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
            raise InvalidInputError("channel samples must be finite")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "samples", a)

    @classmethod
    def from_vectors(cls, vectors: Sequence[np.ndarray]) -> "ChannelData":
        vs = [np.asarray(v, dtype=np.complex128) for v in vectors]
        if len(vs) < 2:
            raise DimensionMismatchError("need at least 2 channels")
        lengths = {v.shape for v in vs}
        if any(v.ndim != 1 for v in vs) or len(lengths) != 1:
            raise DimensionMismatchError(
                f"channels must be 1-D vectors of common length, got shapes {sorted(lengths)}"
            )
        return cls(np.stack(vs))

    @property
    def node_count(self) -> int:
        return self.samples.shape[0]

    @property
    def sample_count(self) -> int:
        return self.samples.shape[1]

    def permuted(self, perm) -> "ChannelData":
        """Relabel channels: row for new label ``perm[old]`` is the old row."""
        m = self.node_count
        if not isinstance(perm, dict):
            perm = {k + 1: int(v) for k, v in enumerate(perm)}
        out = np.empty_like(self.samples)
        for old, new in perm.items():
            out[new - 1] = self.samples[old - 1]
        return ChannelData(out)


@dataclass(frozen=True)
class GcStatistic:
    """Computed statistic plus the quantities a caller may want to report.

    ``completion`` is None when the topology was complete and no surrogates
    were needed.
    """

    value: float
    gram_det: float
    surrogates_used: int
    completion: CompletionResult | None = None


def _normalized_rows(d: ChannelData) -> np.ndarray:
    norms = np.linalg.norm(d.samples, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise DegenerateInputError(f"channel {zero[0] + 1} has zero norm")
    return d.samples / norms[:, None]


def _normalized_gram(d: ChannelData) -> np.ndarray:
    """Full Gram matrix of the normalized channels, diagonal pinned to 1.

    Entry (i, j) is ``inner_product(u_i, u_j)``, conjugate-linear in the
    first argument.
    """
    u = _normalized_rows(d)
    g = u.conj() @ u.T
    np.fill_diagonal(g, 1.0)
    return g


def build_partial_gram(d: ChannelData, t: Topology) -> PartialHermitian:
    """Inner products of normalized channels at the edges of ``t``; the rest missing."""
    if t.node_count != d.node_count:
        raise DimensionMismatchError(
            f"topology has {t.node_count} nodes but data has {d.node_count} channels"
        )
    g = _normalized_gram(d)
    return PartialHermitian(
        t.node_count, {(i, j): complex(g[i - 1, j - 1]) for i, j in sorted(t.edges)}
    )


def _clamp_unit_interval(value: float) -> float:
    if value < 0.0:
        if value < -RANGE_SLACK:
            raise InternalConsistencyError(f"statistic {value!r} below 0 beyond roundoff")
        return 0.0
    if value > 1.0:
        if value > 1.0 + RANGE_SLACK:
            raise InternalConsistencyError(f"statistic {value!r} above 1 beyond roundoff")
        return 1.0
    return value


def gc_statistic(
    d: ChannelData, t: Topology, config: CompletionConfig | None = None
) -> GcStatistic:
    """Generalized coherence statistic of ``d`` over the network ``t``.

    On a complete graph this is exactly ``1 - det`` of the full normalized
    Gram matrix. Otherwise the missing Gram entries are filled with their
    maximum-entropy surrogates first; completion errors (infeasible known
    entries, non-convergence) propagate to the caller.
    """
    if t.node_count != d.node_count:
        raise DimensionMismatchError(
            f"topology has {t.node_count} nodes but data has {d.node_count} channels"
        )
    cfg = config or CompletionConfig()
    if t.is_complete():
        gram = HermitianMatrix(_normalized_gram(d))
        gram_det = numerics.det(gram)
        return GcStatistic(
            value=_clamp_unit_interval(1.0 - gram_det),
            gram_det=gram_det,
            surrogates_used=0,
            completion=None,
        )
    partial = build_partial_gram(d, t)
    result = maxent.complete(partial, t, tol=cfg.tol, max_iter=cfg.max_iter)
    gram_det = numerics.det(result.completed)
    return GcStatistic(
        value=_clamp_unit_interval(1.0 - gram_det),
        gram_det=gram_det,
        surrogates_used=len(result.surrogates),
        completion=result,
    )


def gc_threshold_test(s: GcStatistic | float, threshold: float) -> Hypothesis:
    """Decide H1 when the statistic strictly exceeds ``threshold`` (ties go to H0)."""
    value = s.value if isinstance(s, GcStatistic) else float(s)
    thr = float(threshold)
    if not (0.0 <= thr <= 1.0) or not np.isfinite(thr):
        raise InvalidThresholdError(f"threshold must be in [0, 1], got {threshold!r}")
    if not np.isfinite(value):
        raise InvalidInputError(f"statistic value must be finite, got {value!r}")
    return Hypothesis.H1 if value > thr else Hypothesis.H0
