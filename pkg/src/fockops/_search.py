"""Maximization of log-quantities over the complex plane on a polar grid."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

LogFun = Callable[[np.ndarray], np.ndarray]


def search_radius(logfun: LogFun, bound: Callable[[float], float], seeds: Iterable[complex] = (),
                  start: float = 4.0, max_radius: float = 1e4) -> float:
    """Radius R beyond which ``bound`` (a concave radial majorant of ``logfun``)
    stays below a value ``logfun`` already attains inside the disk."""
    r = np.linspace(0, start, 17)[:, None]
    th = np.linspace(0, 2 * np.pi, 16, endpoint=False)[None, :]
    pts = np.concatenate([(r * np.exp(1j * th)).ravel(), np.asarray(list(seeds), complex)])
    ref = float(np.max(logfun(pts)))
    if not np.isfinite(ref):
        raise ValueError("log-function is -inf on the probe set")
    R = max(start, float(np.max(np.abs(pts))))
    while R < max_radius:
        # concavity: once decreasing and below ref, it stays below
        if bound(R) < ref and bound(R * 1.01) < bound(R):
            return R
        R *= 1.25
    raise ValueError("radial majorant does not decay")


_DIRS = np.exp(2j * np.pi * np.arange(8) / 8)


def _compass_ascent(logfun: LogFun, starts: np.ndarray, step: float, min_step: float = 1e-10,
                    max_steps: int = 4000) -> tuple[np.ndarray, np.ndarray]:
    """Batched 8-direction pattern search: move each point to its best neighbour,
    halve the step where no neighbour improves."""
    z = starts.copy()
    val = logfun(z)
    h = np.full(z.shape, step)
    for _ in range(max_steps):
        active = h > min_step
        if not active.any():
            break
        cand = z[active, None] + h[active, None] * _DIRS[None, :]
        cv = logfun(cand.ravel()).reshape(cand.shape)
        best = np.argmax(cv, axis=1)
        bv = cv[np.arange(len(best)), best]
        better = bv > val[active]
        idx = np.flatnonzero(active)
        z[idx[better]] = cand[better, best[better]]
        val[idx[better]] = bv[better]
        h[idx[~better]] /= 2
    return z, val


def maximize_polar(logfun: LogFun, radius: float, seeds: Iterable[complex] = (),
                   n_r: int = 256, n_theta: int = 128, n_starts: int = 8) -> tuple[float, complex]:
    """Grid maximum of ``logfun`` on the disk |z| <= radius, refined by local
    ascent from the best grid points and from ``seeds``.
    Returns (max log value, argmax)."""
    r = np.linspace(0, radius, n_r)[:, None]
    th = 2 * np.pi * np.arange(n_theta)[None, :] / n_theta
    grid = (r * np.exp(1j * th)).ravel()
    vals = logfun(grid)
    order = np.argsort(vals)[::-1][:n_starts]
    starts = np.concatenate([grid[order], np.asarray(list(seeds), dtype=complex)])
    spacing = max(radius / n_r, radius * np.pi / n_theta)
    z, v = _compass_ascent(logfun, starts, spacing)
    k = int(np.argmax(v))
    return float(v[k]), complex(z[k])
