"""Dense complex linear algebra kernel used by the rest of the package.

Everything here operates on plain ``numpy`` arrays or on :class:`HermitianMatrix`,
a thin wrapper that makes hermitian symmetry a construction-time guarantee.
Matrices in this package are tiny (network sizes of a handful of nodes), so
dense storage and direct factorizations are the right tool.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    InvalidInputError,
    SingularMatrixError,
)

#: Refuse inversion when the smallest Cholesky pivot is below this fraction of
#: the largest one.
PIVOT_RATIO_FLOOR = 1e-12

#: Relative asymmetry tolerated before an array is rejected as non-hermitian.
HERMITIAN_ATOL = 1e-8


class HermitianMatrix:
    """Square complex matrix with ``a[j, i] == conj(a[i, j])`` enforced at construction.

    The upper triangle (and the real part of the diagonal) is authoritative;
    the lower triangle is mirrored from it, so roundoff asymmetry in the input
    cannot survive construction. Input asymmetric beyond ``HERMITIAN_ATOL``
    relative to the largest entry is rejected instead of silently averaged.
    """

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise DimensionMismatchError("matrix order must be at least 1")
        if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
            raise InvalidInputError("matrix entries must be finite")
        scale = max(float(np.abs(a).max()), 1.0)
        if not np.allclose(a, a.conj().T, rtol=0.0, atol=HERMITIAN_ATOL * scale):
            raise InvalidInputError("matrix is not hermitian within tolerance")
        upper = np.triu(a, 1)
        a = upper + upper.conj().T + np.diag(np.diag(a).real)
        a.setflags(write=False)
        self._a = a

    @classmethod
    def identity(cls, order: int) -> "HermitianMatrix":
        return cls(np.eye(int(order), dtype=np.complex128))

    @property
    def order(self) -> int:
        return self._a.shape[0]

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the underlying complex array."""
        return self._a

    def __getitem__(self, idx):
        return self._a[idx]

    def __repr__(self) -> str:
        return f"HermitianMatrix(order={self.order})"


MatrixLike = Union[HermitianMatrix, np.ndarray]


def _as_hermitian_array(h: MatrixLike) -> np.ndarray:
    """Validated dense hermitian array from either wrapper or raw input."""
    if isinstance(h, HermitianMatrix):
        return h.array
    return HermitianMatrix(h).array


def _as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatchError(f"expected a nonempty 1-D vector, got shape {v.shape}")
    if not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
        raise InvalidInputError("vector entries must be finite")
    return v


def inner_product(a, b) -> complex:
    """Complex inner product, conjugate-linear in the first argument."""
    av = _as_vector(a)
    bv = _as_vector(b)
    if av.shape != bv.shape:
        raise DimensionMismatchError(f"length mismatch: {av.size} vs {bv.size}")
    return complex(np.vdot(av, bv))


def normalize(x) -> np.ndarray:
    """Return ``x`` scaled to unit norm.

    Raises
    ------
    DegenerateInputError
        If ``x`` has zero norm.
    """
    v = _as_vector(x)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise DegenerateInputError("cannot normalize a zero vector")
    return v / n


def cholesky(h: MatrixLike) -> np.ndarray | None:
    """Lower Cholesky factor of ``h``, or None when ``h`` is not positive definite.

    Non-positive-definiteness is a signal here, not a failure; callers use it
    as the positive definiteness test.
    """
    a = _as_hermitian_array(h)
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return None


def det(h: MatrixLike) -> float:
    """Determinant of a hermitian matrix (always real).

    Uses the Cholesky factor when positive definite, a pivoted factorization
    otherwise.
    """
    a = _as_hermitian_array(h)
    factor = cholesky(a)
    if factor is not None:
        return float(np.prod(np.diag(factor).real) ** 2)
    return float(np.linalg.det(a).real)


def log_det_pd(h: MatrixLike) -> float:
    """log det of a positive definite hermitian matrix, via the Cholesky factor.

    Raises
    ------
    SingularMatrixError
        If ``h`` is not positive definite.
    """
    a = _as_hermitian_array(h)
    factor = cholesky(a)
    if factor is None:
        raise SingularMatrixError("matrix is not positive definite", det_magnitude=abs(det(a)))
    return float(2.0 * np.sum(np.log(np.diag(factor).real)))


def inverse(h: MatrixLike) -> HermitianMatrix:
    """Inverse of a hermitian matrix.

    Refuses near-singular input: for positive definite matrices when the
    smallest Cholesky pivot falls below ``PIVOT_RATIO_FLOOR`` times the
    largest, and for indefinite matrices on an equivalent condition estimate.
    """
    a = _as_hermitian_array(h)
    factor = cholesky(a)
    if factor is not None:
        pivots = np.diag(factor).real
        if pivots.min() < PIVOT_RATIO_FLOOR * pivots.max():
            raise SingularMatrixError(
                "matrix is singular to working precision "
                f"(pivot ratio {pivots.min() / pivots.max():.3e})",
                det_magnitude=float(np.prod(pivots) ** 2),
            )
        inv = np.linalg.inv(a)
    else:
        d = abs(float(np.linalg.det(a).real))
        if d == 0.0 or not np.isfinite(d) or np.linalg.cond(a) > 1.0 / PIVOT_RATIO_FLOOR:
            raise SingularMatrixError(
                f"matrix is singular or ill-conditioned (|det| = {d:.3e})",
                det_magnitude=d,
            )
        inv = np.linalg.inv(a)
    return HermitianMatrix((inv + inv.conj().T) / 2.0)
