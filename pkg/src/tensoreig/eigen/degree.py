"""Brouwer degree of real polynomial maps.

Solutions of ``P(x) = y`` are collected from a total-degree homotopy over
the complex numbers (start system ``x_j^d = 1``) plus seeded real multistart
Newton inside the ball that must contain every real solution; the degree is
the signed count ``sum sgn det DP(z)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..tensor_core import HomogeneousMap, PolynomialMap, as_polynomial_map, realify
from ._tracking import newton, track


class LeadingFormVanishes(ValueError):
    pass


class CriticalTarget(ValueError):
    pass


class DegreeMismatch(RuntimeError):
    pass


def real_rep(A, B) -> np.ndarray:
    """Real ``2n x 2n`` matrix ``[[A, -B], [B, A]]`` of ``A + iB``."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A and B must be square matrices of equal shape")
    return np.block([[A, -B], [B, A]])


def _as_real_map(P) -> PolynomialMap:
    if isinstance(P, HomogeneousMap) and not P.is_real:
        return realify(P)
    P = as_polynomial_map(P)
    if P.field_tag == "float-complex":
        return realify(P)
    return P


def sphere_sample(n: int, count: int = 10_000, seed: int = 0) -> np.ndarray:
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        th = np.linspace(0, 2 * np.pi, count, endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    X = np.random.default_rng(seed).standard_normal((count, n))
    return X / np.linalg.norm(X, axis=1)[:, None]


def leading_growth(P) -> float:
    """``rho = min ||P_m(z)||`` over a sample of the unit sphere."""
    P = _as_real_map(P)
    Pm = P.leading()
    S = sphere_sample(P.n)
    return float(np.min(np.linalg.norm(Pm.values(S), axis=1)))


@dataclass
class DegreeReport:
    degree: int
    samples: int
    solutions_per_sample: list[int]
    radius: float = 0.0
    solutions: list = field(default_factory=list)
    signs: list = field(default_factory=list)


def _solve_real(P: PolynomialMap, y: np.ndarray, rng, restarts: int, radius: float) -> list[np.ndarray]:
    n = P.n
    d = P.degree
    gamma = np.exp(2j * np.pi * rng.random())
    yc = np.asarray(y, dtype=complex)

    def system(Z, t):
        F1 = P.values(Z) - yc
        J1 = P.jacobians(Z)
        F0 = Z**d - 1.0
        J0 = np.zeros_like(J1, dtype=complex)
        idx = np.arange(n)
        J0[:, idx, idx] = d * Z ** (d - 1)
        s = (1.0 - t)[:, None]
        H = gamma * s * F0 + t[:, None] * F1
        Hz = gamma * s[:, :, None] * J0 + t[:, None, None] * J1
        Ht = F1 - gamma * F0
        return H, Hz, Ht

    def target(Z):
        return P.values(Z) - yc, P.jacobians(Z).astype(complex)

    roots = np.exp(2j * np.pi * np.arange(d) / d)
    starts = np.array(np.meshgrid(*([roots] * n), indexing="ij")).reshape(n, -1).T
    Z, _ = track(system, starts)
    Z, res = newton(target, Z)
    cands = [z for z, r in zip(Z, res) if np.all(np.isfinite(z)) and r < 1e-6
             and np.max(np.abs(z.imag)) < 1e-6 * (1 + np.linalg.norm(z))]
    if restarts:
        X = rng.standard_normal((restarts, n))
        X *= (radius * rng.random(restarts) ** (1.0 / n) / np.linalg.norm(X, axis=1))[:, None]
        Z2, res2 = newton(target, X.astype(complex), iters=60)
        cands += [z for z, r in zip(Z2, res2) if np.all(np.isfinite(z)) and r < 1e-6]
    sols: list[np.ndarray] = []
    for z in cands:
        x, r = newton(lambda W: (P.values(W) - y, P.jacobians(W)), np.real(z)[None, :].astype(float), iters=10)
        x = x[0].real
        if r[0] > 1e-8 * (1 + np.linalg.norm(y)):
            continue
        if all(np.linalg.norm(x - s) > 1e-7 * (1 + np.linalg.norm(s)) for s in sols):
            sols.append(x)
    sols.sort(key=lambda s: tuple(np.round(s, 10)))
    return sols


def brouwer_degree(P, y, seed: int = 0, restarts: int | None = None, tol: float = 1e-9) -> DegreeReport:
    """Degree ``d(P, B_r(0), y)`` on a ball containing every real solution.

    Complex maps are replaced by their real representation on ``R^{2n}``.
    """
    P = _as_real_map(P)
    y = np.asarray(y, dtype=float)
    if y.shape != (P.n,):
        raise ValueError(f"target must have length {P.n}")
    m = P.degree
    scale = max(1.0, float(np.sqrt(sum(abs(complex(v)) ** 2 for v in P.coeffs.values()))))
    rho = leading_growth(P)
    if rho <= 1e-8 * scale:
        raise LeadingFormVanishes(f"leading form nearly vanishes on the sphere (rho={rho:.3e})")
    radius = max(1.0, (2 * np.linalg.norm(y) / rho) ** (1.0 / m))
    rng = np.random.default_rng(seed)
    if restarts is None:
        restarts = 4 * m**P.n
    sols = _solve_real(P, y, rng, restarts, radius)
    while any(np.linalg.norm(s) > 0.9 * radius for s in sols):
        radius *= 2
    dets = [float(np.linalg.det(P.jacobians(s[None, :])[0])) for s in sols]
    for s, dval in zip(sols, dets):
        jn = np.linalg.norm(P.jacobians(s[None, :])[0])
        if abs(dval) <= tol * max(1.0, jn) ** P.n:
            raise CriticalTarget("target is (nearly) a critical value")
    signs = [int(np.sign(dv)) for dv in dets]
    return DegreeReport(sum(signs), 1, [len(sols)], radius, sols, signs)


def global_degree(P, samples: int = 3, seed: int = 0, restarts: int | None = None) -> DegreeReport:
    """Degree of the leading form at several random targets; they must agree."""
    P = _as_real_map(P)
    Pm = as_polynomial_map(P.leading())
    rng = np.random.default_rng(seed)
    degrees, counts, radius = [], [], 0.0
    for k in range(samples):
        y = rng.standard_normal(P.n)
        rep = brouwer_degree(Pm, y, seed=seed + 1 + k, restarts=restarts)
        degrees.append(rep.degree)
        counts.append(rep.solutions_per_sample[0])
        radius = max(radius, rep.radius)
    if len(set(degrees)) != 1:
        raise DegreeMismatch(f"degrees disagree across targets: {degrees}")
    return DegreeReport(degrees[0], samples, counts, radius)
