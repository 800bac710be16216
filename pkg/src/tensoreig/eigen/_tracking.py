"""Batched predictor-corrector path tracking and Newton polishing.

A system is a callable ``system(Z, t) -> (H, Hz, Ht)`` on batches ``Z`` of
shape (B, N) and ``t`` of shape (B,), returning residuals (B, N),
Jacobians (B, N, N) and t-derivatives (B, N).  Paths run from t=0 to t=1.
"""
from __future__ import annotations

import numpy as np


def _solve(A, b):
    try:
        return np.linalg.solve(A, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(b)
        for i in range(A.shape[0]):
            out[i] = np.linalg.lstsq(A[i], b[i], rcond=None)[0]
        return out


def _tangent(system, Z, t):
    _, Hz, Ht = system(Z, t)
    return -_solve(Hz, Ht)


def track(system, Z0: np.ndarray, *, max_steps: int = 4000, min_dt: float = 1e-13,
          max_dt: float = 0.05, diverge: float = 1e8):
    """Track every start point of ``Z0`` to t=1.

    Returns ``(Z, ok)``: endpoints and a mask of paths that reached t=1
    (paths that stall near t=1 are returned with their last point and
    ``ok=False``; callers polish them anyway).
    """
    Z = np.array(Z0, dtype=complex)
    B = Z.shape[0]
    t = np.zeros(B)
    dt = np.full(B, 0.01)
    active = np.ones(B, dtype=bool)
    ok = np.zeros(B, dtype=bool)
    successes = np.zeros(B, dtype=int)
    for _ in range(max_steps):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        z, tt = Z[idx], t[idx]
        h = np.minimum(dt[idx], 1.0 - tt)
        # RK4 predictor
        k1 = _tangent(system, z, tt)
        k2 = _tangent(system, z + 0.5 * h[:, None] * k1, tt + 0.5 * h)
        k3 = _tangent(system, z + 0.5 * h[:, None] * k2, tt + 0.5 * h)
        k4 = _tangent(system, z + h[:, None] * k3, tt + h)
        zp = z + (h[:, None] / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t1 = tt + h
        # Newton corrector
        good = np.ones(idx.size, dtype=bool)
        first = None
        for it in range(3):
            H, Hz, _ = system(zp, t1)
            delta = _solve(Hz, H)
            nrm = np.linalg.norm(delta, axis=1)
            if it == 0:
                first = nrm
            zp = zp - delta
        scale = 1.0 + np.linalg.norm(zp, axis=1)
        good &= np.isfinite(nrm) & (nrm < 1e-8 * scale) & (first < 0.05 * scale)
        bad = ~good
        # accept
        acc = idx[good]
        Z[acc] = zp[good]
        t[acc] = t1[good]
        successes[acc] += 1
        grow = acc[successes[acc] >= 3]
        dt[grow] = np.minimum(dt[grow] * 2.0, max_dt)
        successes[grow] = 0
        # reject
        rej = idx[bad]
        dt[rej] *= 0.5
        successes[rej] = 0
        done = acc[t[acc] >= 1.0]
        ok[done] = True
        active[done] = False
        dead = idx[(dt[idx] < min_dt) | (np.linalg.norm(Z[idx], axis=1) > diverge)]
        active[dead] = False
    return Z, ok


def newton(F, Z: np.ndarray, iters: int = 30, tol: float = 1e-14):
    """Batched Newton on ``F(Z) -> (H, Hz)``; returns (Z, residual norms)."""
    Z = np.array(Z, dtype=complex)
    for _ in range(iters):
        H, Hz = F(Z)
        delta = _solve(Hz, H)
        delta[~np.isfinite(delta)] = 0
        Z = Z - delta
        if np.all(np.linalg.norm(delta, axis=1) <= tol * (1 + np.linalg.norm(Z, axis=1))):
            break
    H, _ = F(Z)
    return Z, np.linalg.norm(H, axis=1)
