"""Ray solutions and behaviour at infinity for ``x' = P(x)``.

Along an eigenline ``Q(c) = alpha c`` the ansatz ``x(t) = phi(t) c`` reduces
``x' = Q(x)`` to the scalar equation ``phi' = alpha phi^m``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .eigen.lines import EigenLine, NotAnEigenline, find_eigenlines, verify_eigenline
from .eigen.sphere import complement_basis
from .tensor_core import HomogeneousMap, PolynomialMap, as_polynomial_map, evaluate


@dataclass(frozen=True, eq=False)
class RaySolution:
    c: np.ndarray
    alpha: object
    m: int
    y0: object
    blow_up_time: object | None

    def __call__(self, t):
        """``phi(t)``; NaN at and beyond the blow-up time."""
        t = np.asarray(t, dtype=float)
        a, y0, k = float(self.alpha), float(self.y0), self.m - 1
        if a == 0 or y0 == 0:
            return np.full_like(t, y0)
        base = 1.0 - a * k * y0**k * t
        with np.errstate(invalid="ignore", divide="ignore"):
            out = y0 * np.where(base > 0, base, np.nan) ** (-1.0 / k)
        return out

    def derivative(self, t):
        return float(self.alpha) * self(t) ** self.m

    def point(self, t) -> np.ndarray:
        """``x(t) = phi(t) c`` for scalar or array ``t`` (rows per time)."""
        phi = np.atleast_1d(self(t))
        return phi[:, None] * np.asarray(self.c, dtype=float)[None, :]

    @property
    def stationary(self) -> bool:
        return self.alpha == 0 or self.y0 == 0


def _exact_alpha(Q: HomogeneousMap, c) -> Fraction | None:
    if not (Q.exact and all(isinstance(v, Rational) for v in c)):
        return None
    Qc = evaluate(Q, c)
    k = next(i for i, v in enumerate(c) if v != 0)
    alpha = Qc[k] / c[k]
    if any(Qc[i] != alpha * c[i] for i in range(Q.n)):
        raise NotAnEigenline("Q(c) is not a multiple of c")
    return alpha


def ray_solution(Q: HomogeneousMap, line, y0=1) -> RaySolution:
    """Closed-form solution through ``y0 c`` for an eigenline ``R c``.

    ``line`` is an :class:`EigenLine` (its unit representative is used) or
    a vector; for rational ``Q``, ``c`` and ``y0`` the eigenvalue and blow-up
    time are exact.
    """
    if Q.m < 2:
        raise ValueError("degree must be at least 2")
    c = line.rep if isinstance(line, EigenLine) else list(line)
    alpha = _exact_alpha(Q, c)
    if alpha is None:
        c = np.asarray(c, dtype=float)
        check = verify_eigenline(Q, c, tol=1e-9)
        # the eigenvalue belongs to the unit vector; rescale to c itself
        alpha = float(np.real(check.eigenvalue)) * float(np.linalg.norm(c)) ** (Q.m - 1)
        y0 = float(y0)
    else:
        y0 = Fraction(y0) if isinstance(y0, (Rational, str)) else float(y0)
    k = Q.m - 1
    growth = alpha * y0**k
    T = None
    if growth > 0:
        T = 1 / (growth * k)
    c = np.array(c, dtype=object if isinstance(alpha, Fraction) else float)
    return RaySolution(c, alpha, Q.m, y0, T)


def _mp(v):
    if isinstance(v, Rational):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(float(v))


def _mp_field(Q: HomogeneousMap):
    terms = [(j, e, _mp(v)) for (j, e), v in Q.coeffs.items()]

    def f(t, x):
        out = [mpmath.mpf(0)] * Q.n
        for j, e, v in terms:
            for xi, k in zip(x, e):
                if k:
                    v = v * xi**k
            out[j] += v
        return out

    return f


def transverse_digits(Q: HomogeneousMap, ray: RaySolution, fraction: float = 0.9) -> float:
    """Decimal digits by which transverse perturbations of the ray grow
    before ``fraction`` of the blow-up time.

    Near the ray a transverse mode with shifted eigenvalue ``s`` (see
    :func:`infinity_spectrum`) grows like ``(1 - t/T)^(-s / ((m-1) alpha))``.
    """
    if ray.blow_up_time is None:
        return 0.0
    inf = infinity_spectrum(Q, np.asarray(ray.c, dtype=float))
    s = float(np.max(np.real(inf.spectrum[1:]), initial=0.0))
    rate = s / ((Q.m - 1) * inf.alpha)
    return max(0.0, rate * np.log10(1.0 / (1.0 - fraction)))


def numeric_ray(Q, ray: RaySolution, t_end: float, samples: int = 200, rtol: float = 1e-12,
                digits: int | None = None):
    """Integrate ``x' = Q(x)`` from ``y0 c`` with an adaptive solver.

    With ``digits`` the integration runs in that many decimal digits
    (adaptive Taylor series), otherwise in double precision.
    Returns ``(times, states)``.
    """
    times = np.linspace(0.0, t_end, samples)
    if digits is not None:
        with mpmath.workdps(digits):
            x0 = [_mp(ray.y0) * _mp(v) for v in ray.c]
            sol = mpmath.odefun(_mp_field(Q), 0, x0)
            states = np.array([[float(v) for v in sol(mpmath.mpf(float(t)))] for t in times])
        return times, states
    f = as_polynomial_map(Q)
    x0 = float(ray.y0) * np.asarray(ray.c, dtype=float)
    sol = solve_ivp(lambda t, x: f.values(x[None, :])[0], (0.0, t_end), x0, method="DOP853",
                    t_eval=times, rtol=rtol, atol=1e-14)
    if not sol.success:
        raise RuntimeError(sol.message)
    return sol.t, sol.y.T


def ray_deviation(Q, ray: RaySolution, fraction: float = 0.9, horizon: float = 10.0, samples: int = 200):
    """Largest relative error and angular drift of the numeric solution
    against the closed form up to ``fraction`` of the blow-up time.

    Rays that repel nearby solutions amplify rounding errors, so when
    double precision would lose more than six digits the integration is
    carried out in extended precision.
    """
    t_end = fraction * float(ray.blow_up_time) if ray.blow_up_time is not None else horizon
    lost = transverse_digits(Q, ray, fraction)
    digits = None if lost < 6 else int(np.ceil(lost)) + 20
    times, X = numeric_ray(Q, ray, t_end, samples, digits=digits)
    exact = ray.point(times)
    rel = np.linalg.norm(X - exact, axis=1) / np.maximum(np.linalg.norm(exact, axis=1), 1e-300)
    c = np.asarray(ray.c, dtype=float)
    c = c / np.linalg.norm(c)
    nx = np.linalg.norm(X, axis=1)
    sin = np.linalg.norm(X - (X @ c)[:, None] * c[None, :], axis=1) / np.maximum(nx, 1e-300)
    return float(rel.max()), float(sin.max())


@dataclass(frozen=True, eq=False)
class UnboundedCertificate:
    """Outcome of the search for ``P_m(c) = alpha c`` with ``alpha > 0``.

    ``c`` is ``None`` when no certificate was found.  ``all_nilpotent`` is
    only meaningful for even degree.
    """

    c: np.ndarray | None
    alpha: float | None
    all_nilpotent: bool | None
    real_lines: list

    @property
    def found(self) -> bool:
        return self.c is not None


def unbounded_certificate(P, seed: int = 0, tol: float = 1e-9) -> UnboundedCertificate:
    """Look for a real eigenline of the leading part with positive eigenvalue.

    Such a line carries a solution that leaves every bounded set.  For even
    degree ``c -> -c`` flips the sign of the eigenvalue, so any non-nilpotent
    real line qualifies.  Among candidates the largest eigenvalue wins, ties
    going to the lexicographically largest unit representative.
    """
    Pm = as_polynomial_map(P).leading() if not isinstance(P, HomogeneousMap) else P
    if Pm.m < 2:
        raise ValueError("leading degree must be at least 2")
    if not Pm.is_real:
        raise ValueError("real maps only")
    lines = find_eigenlines(Pm, field="real", seed=seed, strict=False)
    scale = max(1.0, Pm.coefficient_norm())
    cands = []
    for line in lines:
        c = np.asarray(line.rep, dtype=float)
        a = float(np.real(line.eigenvalue))
        if Pm.m % 2 == 0 and a < 0:
            c, a = -c, -a
        if a > tol * scale:
            cands.append((round(a, 12), tuple(np.round(c, 12)), c, a))
    nil = all(line.nilpotent for line in lines) if Pm.m % 2 == 0 else None
    if not cands:
        return UnboundedCertificate(None, None, nil, lines)
    best = max(cands, key=lambda k: (k[0], k[1]))
    return UnboundedCertificate(best[2] + 0.0, best[3], nil, lines)


@dataclass(frozen=True, eq=False)
class InfinityPoint:
    direction: np.ndarray
    alpha: float
    betas: np.ndarray
    spectrum: np.ndarray


def infinity_spectrum(P, line) -> InfinityPoint:
    """Linearization at the stationary point at infinity in direction ``c``.

    ``DP_m(c)`` has ``c`` as eigenvector with eigenvalue ``m alpha``; the
    remaining eigenvalues ``beta_k`` are those of the induced map on the
    quotient by ``R c``.  The spectrum is ``{-alpha} U {beta_k - alpha}``.
    """
    Pm = as_polynomial_map(P).leading() if isinstance(P, PolynomialMap) else P
    c = line.rep if isinstance(line, EigenLine) else np.asarray(line, dtype=float)
    c = np.asarray(c, dtype=float)
    c = c / np.linalg.norm(c)
    check = verify_eigenline(Pm, c, tol=1e-9)
    alpha = float(np.real(check.eigenvalue))
    D = Pm.to_float().jacobians(c[None, :])[0]
    B = complement_basis(c)
    betas = np.linalg.eigvals(B.T @ D @ B)
    if np.all(np.abs(betas.imag) < 1e-12):
        betas = np.sort(betas.real)
    spectrum = np.concatenate([[-alpha], betas - alpha])
    return InfinityPoint(c, alpha, betas, spectrum)
