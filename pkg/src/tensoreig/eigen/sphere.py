"""Gradient maps on the sphere: stationary indices, Poincare-Hopf, extrema.

For a gradient map ``Q`` the tangential field
``Q*(x) = Q(x) - <Q(x), x>/<x, x> x`` vanishes on the unit sphere exactly at
eigenline representatives.  At such a point ``c`` with ``Q(c) = alpha c`` the
derivative of ``Q*`` on the tangent space has eigenvalues ``beta_k - alpha``,
``beta_k`` being the eigenvalues of ``DQ(c)`` on ``c``'s complement.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..tensor_core import Form, HomogeneousMap, NotAGradient, gradient_diagnostics, gradient_map
from ._tracking import newton
from .lines import EigenLine, NotAnEigenline, line_from_vector


class DegenerateStationaryPoint(ValueError):
    pass


def sphere_field(Q: HomogeneousMap, x) -> np.ndarray:
    """Tangential projection ``Q*(x)``."""
    x = np.asarray(x, dtype=float)
    Qx = Q.values(x[None, :])[0]
    return Qx - (Qx @ x) / (x @ x) * x


def complement_basis(c: np.ndarray) -> np.ndarray:
    """Orthonormal basis (as columns) of the orthogonal complement of ``c``."""
    c = np.asarray(c, dtype=float)
    _, _, vt = np.linalg.svd(c[None, :])
    return vt[1:].T


@dataclass(frozen=True, eq=False)
class SphereIndex:
    point: np.ndarray
    alpha: float
    betas: np.ndarray
    index: int | None
    stationary_type: str

    @property
    def shifted(self) -> np.ndarray:
        return self.betas - self.alpha


def sphere_field_index(Q: HomogeneousMap, c, tol: float = 1e-9, check_gradient: bool = True) -> SphereIndex:
    """Index and type of the stationary point ``c`` of ``Q*`` on the sphere.

    ``stationary_type`` is ``"min"`` when all ``beta_k - alpha > 0``,
    ``"max"`` when all are negative, ``"saddle"`` otherwise and
    ``"degenerate"`` (index ``None``) when one of them vanishes within
    ``tol`` times the size of ``DQ(c)``.
    """
    if not Q.is_real:
        raise NotAGradient("complex map")
    if check_gradient and not gradient_diagnostics(Q).is_gradient:
        raise NotAGradient("DQ(x) is not symmetric")
    c = np.asarray(c, dtype=float)
    c = c / np.linalg.norm(c)
    Qf = Q.to_float()
    Qc = Qf.values(c[None, :])[0]
    alpha = float(Qc @ c)
    scale = max(1.0, Q.coefficient_norm())
    if np.linalg.norm(Qc - alpha * c) > 1e-8 * scale:
        raise NotAnEigenline("point is not stationary for the sphere field")
    DQ = Qf.jacobians(c[None, :])[0]
    DQ = 0.5 * (DQ + DQ.T)
    B = complement_basis(c)
    betas = np.linalg.eigvalsh(B.T @ DQ @ B)
    shifted = betas - alpha
    thr = tol * max(1.0, np.linalg.norm(DQ, 2))
    if np.any(np.abs(shifted) <= thr):
        return SphereIndex(c, alpha, betas, None, "degenerate")
    index = int(np.prod(np.sign(shifted)))
    if np.all(shifted > 0):
        kind = "min"
    elif np.all(shifted < 0):
        kind = "max"
    else:
        kind = "saddle"
    return SphereIndex(c, alpha, betas, index, kind)


@dataclass(frozen=True)
class PoincareHopfCheck:
    index_sum: int
    expected: int
    passed: bool
    points: list  # (point, index) for each antipodal point


def antipodal_index(index: int, n: int, m: int) -> int:
    """Index at ``-c`` given the index at ``c``."""
    if m % 2 == 1 or n % 2 == 1:
        return index
    return -index


def poincare_hopf_check(entries, n: int, m: int) -> PoincareHopfCheck:
    """Sum indices over both antipodal points of every real eigenline.

    ``entries`` holds :class:`SphereIndex` records (or plain indices), one
    per line.  The expected value is the Euler characteristic of
    ``S^{n-1}``.
    """
    total = 0
    points = []
    for e in entries:
        idx = e.index if isinstance(e, SphereIndex) else e
        if idx is None:
            raise DegenerateStationaryPoint("degenerate stationary point present")
        other = antipodal_index(idx, n, m)
        total += idx + other
        if isinstance(e, SphereIndex):
            points.append((e.point, idx))
            points.append((-e.point, other))
        else:
            points.extend([(None, idx), (None, other)])
    expected = 2 if n % 2 else 0
    return PoincareHopfCheck(total, expected, total == expected, points)


@dataclass(frozen=True, eq=False)
class Extremum:
    """Extremal point of a form on the unit sphere."""

    point: np.ndarray
    value: float
    multiplier: float
    line: EigenLine


def _lagrange_system(Q: HomogeneousMap):
    n = Q.n

    def F(Z):
        X, mu = Z[:, :n], Z[:, n]
        B = Z.shape[0]
        H = np.concatenate([Q.values(X) - mu[:, None] * X, 0.5 * (np.sum(X * X, axis=1) - 1.0)[:, None]], axis=1)
        J = np.zeros((B, n + 1, n + 1), dtype=complex)
        J[:, :n, :n] = Q.jacobians(X) - mu[:, None, None] * np.eye(n)
        J[:, :n, n] = -X
        J[:, n, :n] = X
        return H, J

    return F


def extremum_on_sphere(q: Form, mode: str = "min", seed: int = 0, starts: int = 64,
                       iters: int = 300) -> Extremum:
    """Best minimum/maximum of ``q`` on the unit sphere found from ``starts``
    seeded projected-gradient runs, each polished by Lagrange-Newton.

    Values within 1e-12 count as ties, broken by the lexicographically
    smallest point.
    """
    if mode not in ("min", "max"):
        raise ValueError("mode must be 'min' or 'max'")
    if q.field_tag == "float-complex":
        raise TypeError("real forms only")
    Q = gradient_map(q)
    scale = max(Q.coefficient_norm(), 1e-300)
    Qs = Q.to_float().scaled(1.0 / scale)
    qs = q.degree
    sgn = -1.0 if mode == "min" else 1.0
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((starts, q.n))
    X /= np.linalg.norm(X, axis=1)[:, None]
    eta = 0.2 / qs
    for _ in range(iters):
        G = Qs.values(X)
        G = G - np.sum(G * X, axis=1)[:, None] * X
        X = X + sgn * eta * G
        X /= np.linalg.norm(X, axis=1)[:, None]
    mu = np.sum(Qs.values(X) * X, axis=1)
    Z, res = newton(_lagrange_system(Qs), np.concatenate([X, mu[:, None]], axis=1), iters=20)
    P = np.real(Z[:, : q.n])
    nrm = np.linalg.norm(P, axis=1)
    good = (res < 1e-10) & np.isfinite(nrm) & (np.abs(nrm - 1) < 1e-8)
    # a polish that jumped far from its descent point may have left the basin
    good &= np.linalg.norm(P - X, axis=1) < 0.5
    if not np.any(good):
        P, good = X, np.ones(starts, dtype=bool)
    P = P[good] / np.linalg.norm(P[good], axis=1)[:, None]
    vals = q.values(P).real
    best = vals.min() if mode == "min" else vals.max()
    tie = np.abs(vals - best) <= 1e-12 * max(1.0, abs(best))
    order = sorted(np.nonzero(tie)[0], key=lambda i: tuple(np.round(P[i], 12)))
    point = P[order[0]] + 0.0
    multiplier = float(Q.to_float().values(point[None, :])[0] @ point)
    line = line_from_vector(Q, point, field="real", tol=1e-8)
    return Extremum(point, float(np.real(q.values(point[None, :])[0])), multiplier, line)
