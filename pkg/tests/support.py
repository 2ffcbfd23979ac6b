"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the code paths used by the package:
Gram matrices are assembled entry by entry with np.vdot, and optimal
surrogate entries are found by maximizing the determinant directly with
np.linalg.det, never through Schur complements or matrix inverses.
"""

from __future__ import annotations

import numpy as np

from netcoherence import ChannelData, Topology

# Canonical test networks (1-based node labels).
LINEAR3 = Topology(3, {(1, 3), (2, 3)})
COMPLETE3 = Topology.complete(3)
COMPLETE4 = Topology.complete(4)
NEAR_COMPLETE4 = Topology(4, {(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)})
TRIANGLE_TAIL4 = Topology(4, {(1, 3), (1, 4), (2, 4), (3, 4)})
FOUR_CYCLE = Topology(4, {(1, 3), (1, 4), (2, 3), (2, 4)})


def random_channel_data(rng: np.random.Generator, nodes: int, samples: int) -> ChannelData:
    re = rng.standard_normal((nodes, samples))
    im = rng.standard_normal((nodes, samples))
    return ChannelData(re + 1j * im)


def gram_oracle(d: ChannelData) -> np.ndarray:
    """Unit-diagonal Gram matrix assembled pairwise with np.vdot."""
    rows = [r / np.linalg.norm(r) for r in d.samples]
    m = len(rows)
    g = np.empty((m, m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            g[i, j] = 1.0 if i == j else np.vdot(rows[i], rows[j])
    return g


def partial_entries_oracle(d: ChannelData, t: Topology) -> dict[tuple[int, int], complex]:
    g = gram_oracle(d)
    return {(i, j): complex(g[i - 1, j - 1]) for (i, j) in sorted(t.edges)}


def _det_with_entry(base: np.ndarray, i: int, j: int, z: complex) -> float:
    a = base.copy()
    a[i, j] = z
    a[j, i] = np.conj(z)
    return float(np.linalg.det(a).real)


def best_single_entry(base: np.ndarray, i: int, j: int, h: float = 1e-3):
    """Argmax of det over the (i, j) entry (0-based), via 5 det evaluations.

    det is an isotropic quadratic in (Re z, Im z):
        f(x, y) = A + 2*Re(B)*x - 2*Im(B)*y + D*(x^2 + y^2)
    so five evaluations at z in {0, h, -h, ih, -ih} recover A, B, D exactly
    (up to roundoff) and with them the exact argmax and max. Returns
    (z_opt, det_opt) or (None, -inf) when the quadratic is not concave,
    which means no PD completion exists along this entry.
    """
    d0 = _det_with_entry(base, i, j, 0.0)
    dp = _det_with_entry(base, i, j, h)
    dm = _det_with_entry(base, i, j, -h)
    dip = _det_with_entry(base, i, j, 1j * h)
    dim = _det_with_entry(base, i, j, -1j * h)
    re_b = (dp - dm) / (4.0 * h)
    im_b = (dim - dip) / (4.0 * h)
    dd = (dp + dm - 2.0 * d0) / (2.0 * h * h)
    if dd >= 0.0:
        return None, -np.inf
    x = -re_b / dd
    y = im_b / dd
    best = d0 - (re_b * re_b + im_b * im_b) / dd
    return complex(x, y), best


def _golden_line(objective, x0: np.ndarray, direction: np.ndarray, radius: float, tol: float):
    """Golden-section maximization of objective(x0 + t*direction), t in [-radius, radius].

    Returns the best point actually evaluated (including x0), so an
    objective that is -inf off its feasible set cannot make things worse.
    """
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    best_x, best_f = x0, objective(x0)

    def probe(t: float) -> float:
        nonlocal best_x, best_f
        x = x0 + t * direction
        f = objective(x)
        if f > best_f:
            best_x, best_f = x, f
        return f

    lo, hi = -radius, radius
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc = probe(c)
    fd = probe(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = probe(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = probe(d)
    probe(0.5 * (lo + hi))
    return best_x, best_f


def four_cycle_surrogate_oracle(known: dict[tuple[int, int], complex]):
    """Max-determinant completion of the 4-node cycle pattern by direct search.

    The pattern leaves entries (1,2) and (3,4) free. For any fixed value of
    (1,2) the best (3,4) follows exactly from ``best_single_entry``; the
    outer search over (Re, Im) of the (1,2) entry is a coarse grid scan
    followed by golden-section line searches along axis-aligned and diagonal
    directions. Uses np.linalg.det only. Returns ((z12, z34), det).
    """
    base = np.eye(4, dtype=np.complex128)
    for (i, j), v in known.items():
        base[i - 1, j - 1] = v
        base[j - 1, i - 1] = np.conj(v)

    def inner(z12: complex):
        a = base.copy()
        a[0, 1] = z12
        a[1, 0] = np.conj(z12)
        z34, best = best_single_entry(a, 2, 3)
        if z34 is None or best <= 0.0:
            return None, -np.inf
        # A positive determinant alone does not rule out an indefinite
        # matrix; only PD candidates are admissible completions.
        a[2, 3] = z34
        a[3, 2] = np.conj(z34)
        if np.linalg.eigvalsh(a)[0] <= 0.0:
            return None, -np.inf
        return z34, best

    def objective(xy: np.ndarray) -> float:
        return inner(complex(xy[0], xy[1]))[1]

    grid = np.linspace(-0.999, 0.999, 41)
    best_xy, best_val = None, -np.inf
    for x in grid:
        for y in grid:
            v = objective(np.array([x, y]))
            if v > best_val:
                best_xy, best_val = np.array([x, y]), v
    assert best_xy is not None, "no feasible starting point found"

    directions = [
        np.array([1.0, 0.0]),
        np.array([0.0, 1.0]),
        np.array([1.0, 1.0]) / np.sqrt(2.0),
        np.array([1.0, -1.0]) / np.sqrt(2.0),
    ]
    radius = 0.1
    for _ in range(60):
        for direction in directions:
            best_xy, best_val = _golden_line(objective, best_xy, direction, radius, 1e-10)
        radius = max(radius * 0.5, 1e-8)
    z12 = complex(best_xy[0], best_xy[1])
    z34, val = inner(z12)
    return (z12, z34), val


def ks_two_sample(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample Kolmogorov-Smirnov statistic (max CDF gap on pooled values)."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))
