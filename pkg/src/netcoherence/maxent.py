"""Maximum-entropy completion of partially known hermitian Gram matrices.

A network whose graph is not completely connected yields a Gram matrix with
holes: inner products between non-adjacent sensors are never computed. The
completion implemented here fills each hole with the unique value set that
maximizes ``log det`` over all positive definite completions. That maximizer
is characterized by its inverse vanishing at every missing position, i.e. the
filled values carry no information beyond what the known entries force.

Entry pairs are 1-based node pairs throughout, matching :mod:`.topology`.

Algorithm
---------
Phase 1 fills every missing entry once:

* chordal graphs: vertices are processed in reverse perfect-elimination
  order; for vertex ``u`` with later set ``H`` and ``S = N(u) & H``, each
  missing ``(u, w)`` with ``w`` in ``H`` gets ``A(u,S) A(S,S)^-1 A(S,w)``.
  Because eliminating a PEO prefix introduces no fill-in, ``S`` separates
  ``u`` from ``w`` in the marginal over ``H``, so this one pass IS the
  maximum-entropy completion (zero refinement sweeps).
* other graphs: missing pairs are filled in ``missing_pairs`` order, each
  conditioned on the already-determined entries; this is only an initial
  guess.

Phase 2 (non-chordal patterns) runs cyclic sweeps of exact single-entry
updates, each of which maximizes ``log det`` over its entry with all others
held fixed. ``log det`` is concave over the positive definite cone, so the
sweeps increase it monotonically and converge to the unique maximizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import numerics
from .errors import (
    ConvergenceError,
    InfeasiblePartialMatrixError,
    InvalidInputError,
    SingularMatrixError,
    SubmatrixSingularError,
)
from .numerics import HermitianMatrix
from .topology import Topology

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 500

#: Known entries at least this close to unit magnitude make the completion
#: singular to working precision and are rejected as infeasible.
COHERENT_MAGNITUDE_LIMIT = 1.0 - 1e-12

#: Magnitude overshoot tolerated on known entries before rejection (roundoff
#: from inner products of unit vectors); anything in (1, 1 + this] is clamped
#: back to magnitude 1.
MAGNITUDE_SLACK = 1e-8

Pair = tuple[int, int]


@dataclass(frozen=True)
class CompletionConfig:
    """Iteration budget for :func:`complete`."""

    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER


@dataclass(frozen=True)
class PartialHermitian:
    """Unit-diagonal hermitian matrix with entries known only on a pair set.

    ``known`` maps 1-based node pairs to complex values. Pairs given as
    ``(j, i)`` with ``j > i`` are normalized to ``(i, j)`` with the value
    conjugated. Every known value must have magnitude at most 1 (tiny
    roundoff overshoot is clamped); larger magnitudes cannot arise as inner
    products of unit vectors and are rejected.
    """

    order: int
    known: Mapping[Pair, complex] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 2:
            raise InvalidInputError(f"order must be an integer >= 2, got {self.order!r}")
        norm: dict[Pair, complex] = {}
        for pair, value in dict(self.known).items():
            try:
                i, j = pair
            except (TypeError, ValueError):
                raise InvalidInputError(f"pair {pair!r} is not a pair of nodes") from None
            if not (isinstance(i, int) and isinstance(j, int)):
                raise InvalidInputError(f"pair {pair!r} must contain integers")
            if i == j:
                raise InvalidInputError(f"diagonal pair {pair!r} is fixed at 1, not settable")
            if not (1 <= i <= self.order and 1 <= j <= self.order):
                raise InvalidInputError(f"pair {pair!r} out of range 1..{self.order}")
            v = complex(value)
            if not (np.isfinite(v.real) and np.isfinite(v.imag)):
                raise InvalidInputError(f"entry at {pair!r} must be finite")
            key = (i, j) if i < j else (j, i)
            if i > j:
                v = v.conjugate()
            mag = abs(v)
            if mag > 1.0 + MAGNITUDE_SLACK:
                raise InvalidInputError(
                    f"|entry| = {mag:.6g} at {key} exceeds 1; not a unit-vector inner product"
                )
            if mag > 1.0:
                v /= mag
            if key in norm and norm[key] != v:
                raise InvalidInputError(f"conflicting values given for pair {key}")
            norm[key] = v
        object.__setattr__(self, "known", norm)

    def known_pairs(self) -> list[Pair]:
        return sorted(self.known)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense array with zeros at missing entries, plus the known-entry mask.

        The diagonal is 1 and counts as known.
        """
        a = np.eye(self.order, dtype=np.complex128)
        mask = np.eye(self.order, dtype=bool)
        for (i, j), v in self.known.items():
            a[i - 1, j - 1] = v
            a[j - 1, i - 1] = np.conj(v)
            mask[i - 1, j - 1] = mask[j - 1, i - 1] = True
        return a, mask


@dataclass(frozen=True)
class CompletionResult:
    """Output of :func:`complete`.

    ``surrogates`` is keyed by missing pair in ``missing_pairs`` order.
    ``iterations`` counts refinement sweeps (0 when the one-pass fill
    already achieved the optimum, as it does for chordal graphs).
    ``entropy`` is ``log det`` of the completed matrix in nats;
    ``entropy_history`` records it after the initial fill and after each
    sweep, and is non-decreasing.
    """

    completed: HermitianMatrix
    surrogates: dict[Pair, complex]
    iterations: int
    zero_pattern_residual: float
    entropy: float
    entropy_history: tuple[float, ...] = ()


def _conditional_value(a: np.ndarray, i0: int, j0: int, rest: list[int]) -> complex:
    """Value at (i0, j0) making the inverse vanish there, conditioning on ``rest``.

    ``rest`` holds 0-based indices; the entries of ``a`` on
    ``rest x (rest + [i0, j0])`` must all be meaningful.
    """
    if not rest:
        return 0.0 + 0.0j
    b = a[np.ix_(rest, rest)]
    u = a[rest, i0]
    v = a[rest, j0]
    x = np.linalg.solve(b, v)
    return complex(np.vdot(u, x))


def single_entry_update(c: HermitianMatrix | np.ndarray, pair: Pair) -> complex:
    """Optimal value for one entry given every other entry of ``c``.

    Returns the value at the 1-based node pair ``(i, j)`` that zeroes the
    inverse of ``c`` at that position, equivalently the argmax of ``det``
    over that single entry. The principal submatrix of ``c`` on all other
    nodes must be positive definite.
    """
    a = c.array if isinstance(c, HermitianMatrix) else HermitianMatrix(c).array
    m = a.shape[0]
    try:
        i, j = pair
    except (TypeError, ValueError):
        raise InvalidInputError(f"pair {pair!r} is not a pair of nodes") from None
    if not (1 <= i <= m and 1 <= j <= m) or i == j:
        raise InvalidInputError(f"pair {pair!r} invalid for order {m}")
    rest = [k for k in range(m) if k not in (i - 1, j - 1)]
    if rest:
        b = a[np.ix_(rest, rest)]
        if numerics.cholesky(b) is None:
            nodes = tuple(k + 1 for k in rest)
            raise SubmatrixSingularError(
                f"principal submatrix on nodes {nodes} is not positive definite",
                indices=nodes,
            )
    return _conditional_value(a, i - 1, j - 1, rest)


def _chordal_fill(a: np.ndarray, t: Topology, peo: list[int]) -> None:
    """Exact one-pass maximum-entropy fill for a chordal pattern (in place)."""
    m = t.node_count
    for k in range(m - 2, -1, -1):
        u = peo[k]
        higher = peo[k + 1 :]
        nbrs = t.neighbors(u)
        s_idx = [w - 1 for w in higher if w in nbrs]
        u0 = u - 1
        for w in higher:
            if w in nbrs:
                continue
            w0 = w - 1
            value = _conditional_value(a, u0, w0, s_idx)
            a[u0, w0] = value
            a[w0, u0] = np.conj(value)


def _sequential_fill(a: np.ndarray, t: Topology, missing: list[Pair]) -> None:
    """Initial guess for non-chordal patterns (in place).

    Each pair is conditioned on the largest index-greedy set of common
    neighbours whose mutual entries are already determined.
    """
    determined = set(t.edges)
    for i, j in missing:
        cands = [
            k
            for k in range(1, t.node_count + 1)
            if k not in (i, j)
            and _pair(k, i) in determined
            and _pair(k, j) in determined
        ]
        rest: list[int] = []
        for k in cands:
            if all(_pair(k, r + 1) in determined for r in rest):
                rest.append(k - 1)
        value = _conditional_value(a, i - 1, j - 1, rest)
        a[i - 1, j - 1] = value
        a[j - 1, i - 1] = np.conj(value)
        determined.add((i, j))


def _pair(i: int, j: int) -> Pair:
    return (i, j) if i < j else (j, i)


def _residual(a: np.ndarray, missing: list[Pair]) -> float:
    """Max |inverse| over the missing positions (0 when nothing is missing)."""
    if not missing:
        return 0.0
    inv = numerics.inverse(a).array
    return max(abs(inv[i - 1, j - 1]) for i, j in missing)


def complete(
    p: PartialHermitian,
    t: Topology,
    *,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> CompletionResult:
    """Maximum-entropy completion of ``p`` over the pattern of ``t``.

    Parameters
    ----------
    p : PartialHermitian
        Known entries; its pair set must equal ``t``'s edge set.
    t : Topology
        Connectivity pattern. Missing pairs are ``t.missing_pairs()``.
    tol : float
        Convergence tolerance: both the largest entry change in a sweep and
        the recomputed zero-pattern residual must fall below it.
    max_iter : int
        Sweep budget for the refinement phase.

    Raises
    ------
    InfeasiblePartialMatrixError
        Known entries admit no positive definite completion (operational
        test: the initial fill yields a non-PD matrix), or a known entry has
        magnitude within 1e-12 of 1.
    ConvergenceError
        Refinement did not meet ``tol`` within ``max_iter`` sweeps.
    """
    if tol <= 0.0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise InvalidInputError(f"max_iter must be >= 1, got {max_iter}")
    if p.order != t.node_count:
        raise InvalidInputError(f"partial order {p.order} != node count {t.node_count}")
    if set(p.known) != set(t.edges):
        raise InvalidInputError("known pattern of the partial matrix must match the edge set")
    for pair, v in p.known.items():
        if abs(v) >= COHERENT_MAGNITUDE_LIMIT:
            raise InfeasiblePartialMatrixError(
                f"known entry at {pair} has |value| = {abs(v):.12g}; "
                "completion is singular to working precision"
            )

    missing = t.missing_pairs()
    a, _ = p.dense()

    if missing:
        chordal, peo = t.is_chordal()
        try:
            if chordal:
                _chordal_fill(a, t, peo)
            else:
                _sequential_fill(a, t, missing)
        except np.linalg.LinAlgError:
            raise InfeasiblePartialMatrixError(
                "initial fill hit a singular conditioning submatrix; "
                "known entries admit no positive definite completion"
            ) from None

    if numerics.cholesky(a) is None:
        raise InfeasiblePartialMatrixError(
            "no positive definite completion found for the known entries"
        )

    def residual_now() -> float:
        # A completion pinned to the PD boundary cannot be inverted for the
        # residual check; treat that as infeasibility of the known entries.
        try:
            return _residual(a, missing)
        except SingularMatrixError as exc:
            raise InfeasiblePartialMatrixError(
                "completion is singular to working precision"
            ) from exc

    history = [numerics.log_det_pd(a)]
    iterations = 0
    residual = residual_now()
    if residual > tol:
        converged = False
        max_change = residual
        for sweep in range(1, max_iter + 1):
            max_change = 0.0
            for i, j in missing:
                rest = [k for k in range(t.node_count) if k not in (i - 1, j - 1)]
                try:
                    value = _conditional_value(a, i - 1, j - 1, rest)
                except np.linalg.LinAlgError:
                    raise InfeasiblePartialMatrixError(
                        "refinement hit a singular conditioning submatrix"
                    ) from None
                max_change = max(max_change, abs(value - a[i - 1, j - 1]))
                a[i - 1, j - 1] = value
                a[j - 1, i - 1] = np.conj(value)
            history.append(numerics.log_det_pd(a))
            if max_change < tol:
                residual = residual_now()
                if residual <= tol:
                    iterations = sweep
                    converged = True
                    break
        if not converged:
            residual = residual_now()
            raise ConvergenceError(
                f"no convergence after {max_iter} sweeps "
                f"(last change {max_change:.3e}, residual {residual:.3e})",
                last_change=max_change,
                residual=residual,
            )

    completed = HermitianMatrix(a)
    surrogates = {(i, j): complex(a[i - 1, j - 1]) for i, j in missing}
    return CompletionResult(
        completed=completed,
        surrogates=surrogates,
        iterations=iterations,
        zero_pattern_residual=residual,
        entropy=history[-1],
        entropy_history=tuple(history),
    )


def verify_zero_pattern(result: CompletionResult, t: Topology) -> float:
    """Recompute the zero-pattern residual of a completion from scratch.

    Inverts ``result.completed`` independently and returns the maximum
    inverse magnitude over ``t``'s missing pairs (0 for a complete graph).
    """
    return _residual(result.completed.array, t.missing_pairs())
