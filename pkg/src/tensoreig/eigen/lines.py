"""Eigenlines of homogeneous maps: normalization, enumeration, verification.

Enumeration works on the system ``Q(x) - lam x = 0, <a, x> = 1`` in the
unknowns ``(x, lam)`` for a random complex chart vector ``a``; every
eigenline (nilpotent or not) is one isolated solution there.  Candidates
come from a coefficient homotopy starting at ``x -> (x_1^m, ..., x_n^m)``,
whose eigenlines are known in closed form and already number
``(m^n - 1)/(m - 1)``, topped up by seeded multistart Newton.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..tensor_core import HomogeneousMap
from ._tracking import newton, track

DEDUP_ANGLE = 1e-8
LOOSE_DEDUP_ANGLE = 1e-5
NILPOTENT_TOL = 1e-9
SIMPLE_TOL = 1e-7
REAL_TOL = 1e-8


class NotAnEigenline(ValueError):
    pass


class NonConvergence(RuntimeError):
    """Raised when the search cannot certify a complete, finite set of lines."""

    def __init__(self, message, search=None):
        super().__init__(message)
        self.search = search


def bezout_count(n: int, m: int) -> int:
    """Number of eigenlines of a degree-``m`` map on ``C^n`` when finite."""
    if n < 1:
        raise ValueError("n must be positive")
    if m < 2:
        raise ValueError("degree must be at least 2")
    return sum(m**k for k in range(n))


def canonical_unit(v) -> tuple[np.ndarray, complex]:
    """Unit vector with first significant coordinate positive real.

    Returns ``(c, s)`` with ``c = s * v``.
    """
    v = np.asarray(v)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("zero vector")
    c = v / nrm
    k = int(np.argmax(np.abs(c) > 1e-9))
    phase = np.conj(c[k]) / abs(c[k])
    s = phase / nrm
    c = c * phase
    if np.iscomplexobj(c) and np.max(np.abs(c.imag)) < 1e-14:
        c = c.real
    # round-off noise would make printed representatives depend on the path taken
    if np.iscomplexobj(c):
        re, im = c.real.copy(), c.imag.copy()
        re[np.abs(re) < 1e-15] = 0.0
        im[np.abs(im) < 1e-15] = 0.0
        c = re + 1j * im
    else:
        c = np.where(np.abs(c) < 1e-15, 0.0, c) + 0.0
    return c, s


@dataclass(frozen=True, eq=False)
class EigenLine:
    """One-dimensional invariant subspace.

    ``rep`` is the canonical unit representative and ``eigenvalue`` the
    ``lam`` with ``Q(rep) = lam rep``.  ``normalized`` is the rescaled
    representative ``w`` with ``Q(w) = lambda_class * w``.
    """

    rep: np.ndarray
    eigenvalue: complex
    lambda_class: int
    normalized: np.ndarray
    simple: bool = True
    residual: float = 0.0

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.rep)

    @property
    def nilpotent(self) -> bool:
        return self.lambda_class == 0

    def angle_to(self, other) -> float:
        return angular_distance(self.rep, other.rep if isinstance(other, EigenLine) else other)

    def __repr__(self):
        rep = np.array2string(np.asarray(self.rep), precision=6, suppress_small=True)
        return f"EigenLine(rep={rep}, class={self.lambda_class}, simple={self.simple})"


def angular_distance(u, v) -> float:
    u = np.asarray(u) / np.linalg.norm(u)
    v = np.asarray(v) / np.linalg.norm(v)
    c = min(1.0, abs(np.vdot(u, v)))
    return float(np.sqrt(max(0.0, 1.0 - c * c)))


def normalize_eigenvalue(v, lam, m: int, field: str = "real", tol: float = NILPOTENT_TOL) -> EigenLine:
    """Rescale ``v`` (with ``Q(v) = lam v``) so the eigenvalue lies in
    {0, 1} (complex field, or real field with even ``m``) or {0, 1, -1}
    (real field, odd ``m``)."""
    v = np.asarray(v)
    if not np.any(v):
        raise ValueError("zero vector")
    if field not in ("real", "complex"):
        raise ValueError(f"unknown field {field!r}")
    if field == "real" and np.iscomplexobj(v) and np.max(np.abs(np.imag(v))) > 0:
        raise ValueError("complex vector for the real field")
    c, s = canonical_unit(v)
    lam_c = complex(lam) * s ** (m - 1)
    if np.isrealobj(c) and abs(lam_c.imag) <= 1e-12 * max(1.0, abs(lam_c)):
        lam_c = lam_c.real
    if abs(lam_c) < tol:
        return EigenLine(c, lam_c, 0, c.copy())
    if field == "complex" or np.iscomplexobj(c):
        alpha = complex(lam_c) ** (-1.0 / (m - 1))
        w = alpha * c
        return EigenLine(c, lam_c, 1, w)
    lam_c = float(np.real(lam_c))
    mag = abs(lam_c) ** (-1.0 / (m - 1))
    if m % 2 == 0:
        return EigenLine(c, lam_c, 1, np.sign(lam_c) * mag * c)
    return EigenLine(c, lam_c, int(np.sign(lam_c)), mag * c)


# -- polynomial system -------------------------------------------------------

def _system(Q: HomogeneousMap, a: np.ndarray, gamma: complex | None = None):
    n, m = Q.n, Q.m

    def system(Z, t):
        X, lam = Z[:, :n], Z[:, n]
        B = Z.shape[0]
        F1 = Q.values(X)
        J1 = Q.jacobians(X)
        if gamma is None:
            F, J = F1, J1
            Ht = None
        else:
            F0 = gamma * X**m
            J0 = np.zeros((B, n, n), dtype=complex)
            idx = np.arange(n)
            J0[:, idx, idx] = gamma * m * X ** (m - 1)
            s = (1.0 - t)[:, None]
            F = s * F0 + t[:, None] * F1
            J = s[:, :, None] * J0 + t[:, None, None] * J1
            Ht = np.concatenate([F1 - F0, np.zeros((B, 1))], axis=1)
        H = np.concatenate([F - lam[:, None] * X, (X @ a - 1.0)[:, None]], axis=1)
        Hz = np.zeros((B, n + 1, n + 1), dtype=complex)
        Hz[:, :n, :n] = J - lam[:, None, None] * np.eye(n)
        Hz[:, :n, n] = -X
        Hz[:, n, :n] = a
        return H, Hz, Ht

    return system


def _start_solutions(n: int, m: int, a: np.ndarray, gamma: complex) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(m - 1) / (m - 1))
    starts = []
    for k in range(1, n + 1):
        for S in itertools.combinations(range(n), k):
            for zeta in itertools.product(roots, repeat=k - 1):
                v = np.zeros(n, dtype=complex)
                v[S[0]] = 1.0
                for j, z in zip(S[1:], zeta):
                    v[j] = z
                s = v @ a
                x = v / s
                lam = gamma / s ** (m - 1)
                starts.append(np.append(x, lam))
    return np.array(starts)


def _bordered_singular_values(Q: HomogeneousMap, c: np.ndarray, lam) -> np.ndarray:
    n = Q.n
    J = np.zeros((n + 1, n + 1), dtype=complex)
    J[:n, :n] = Q.jacobians(c[None, :])[0] - lam * np.eye(n)
    J[:n, n] = -c
    J[n, :n] = np.conj(c)
    return np.linalg.svd(J, compute_uv=False)


def _is_simple(Q, c, lam) -> bool:
    sv = _bordered_singular_values(Q, c, lam)
    return bool(sv[-1] > SIMPLE_TOL * max(1.0, sv[0]))


def _residual(Q, c) -> tuple[complex, float]:
    Qc = Q.values(np.asarray(c)[None, :])[0]
    lam = np.vdot(c, Qc)
    return lam, float(np.linalg.norm(Qc - lam * c))


def polish_real(Qf: HomogeneousMap, c: np.ndarray) -> np.ndarray:
    n = Qf.n
    a = c.copy()

    def F(Z):
        H, Hz, _ = _system(Qf, a)(Z, None)
        return H, Hz

    lam = float(np.real(np.vdot(c, Qf.values(c[None, :])[0])))
    Z, res = newton(F, np.append(c, lam)[None, :].astype(complex), iters=8)
    x = np.real(Z[0, :n])
    return x / np.linalg.norm(x)


@dataclass
class EigenSearch:
    """Outcome of an eigenline search over the complex numbers."""

    Q: HomogeneousMap
    lines: list[EigenLine]
    expected: int
    possibly_infinite: bool = False
    starts_used: int = 0

    @property
    def complete(self) -> bool:
        return (not self.possibly_infinite) and len(self.lines) == self.expected

    @property
    def all_simple(self) -> bool:
        return all(l.simple for l in self.lines)

    def real_lines(self) -> list[EigenLine]:
        return [l for l in self.lines if l.is_real]


def _field_for(Q) -> str:
    return "real" if Q.is_real else "complex"


def _make_line(Q: HomogeneousMap, Qf: HomogeneousMap, x: np.ndarray, real_map: bool) -> EigenLine | None:
    c, _ = canonical_unit(x)
    if real_map and np.iscomplexobj(c) and np.max(np.abs(c.imag)) < REAL_TOL:
        c = polish_real(Qf, c.real)
        c, _ = canonical_unit(c)
    lam, res = _residual(Qf, c)
    if np.isrealobj(c):
        lam = float(np.real(lam))
    field = "real" if (real_map and np.isrealobj(c)) else "complex"
    line = normalize_eigenvalue(c, lam, Q.m, field, tol=NILPOTENT_TOL * max(1.0, Q.coefficient_norm()))
    return EigenLine(line.rep, line.eigenvalue, line.lambda_class, line.normalized,
                     _is_simple(Qf, line.rep, line.eigenvalue), res)


def _sort_key(line: EigenLine):
    r = np.asarray(line.rep)
    return (0 if line.is_real else 1,
            tuple(-round(float(v), 8) for v in np.real(r)),
            tuple(-round(float(v), 8) for v in np.imag(r)))


def _merge(lines: list[EigenLine], new: EigenLine) -> bool:
    for old in lines:
        thr = DEDUP_ANGLE if (old.simple and new.simple) else LOOSE_DEDUP_ANGLE
        if old.angle_to(new) < thr:
            return False
    lines.append(new)
    return True


def search_eigenlines(Q: HomogeneousMap, seed: int = 0, restarts: int | None = None,
                      tol: float | None = None) -> EigenSearch:
    """Enumerate complex eigenlines of ``Q`` (all of them when the set is
    finite and the search succeeds)."""
    n, m = Q.n, Q.m
    expected = bezout_count(n, m)
    if restarts is None:
        restarts = 20 * expected
    scale = Q.coefficient_norm()
    Qf = Q.to_float().scaled(1.0 / scale)
    tol = 1e-10 if tol is None else tol
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    gamma = np.exp(2j * np.pi * rng.random())
    real_map = Q.is_real

    lines: list[EigenLine] = []

    def absorb(Z, res):
        for z, r in zip(Z, res):
            if not np.all(np.isfinite(z)) or r > 1e-6:
                continue
            x = z[:n]
            if np.linalg.norm(x) == 0:
                continue
            line = _make_line(Q, Qf, x, real_map)
            if line.residual <= tol:
                _merge(lines, line)

    target = _system(Qf, a)

    def F(Z):
        H, Hz, _ = target(Z, None)
        return H, Hz

    starts = _start_solutions(n, m, a, gamma)
    Z, _ = track(_system(Qf, a, gamma), starts)
    Z, res = newton(F, Z)
    absorb(Z, res)

    used = 0
    batch = max(expected, 8)
    while used < restarts and (len(lines) < expected or not all(l.simple for l in lines)):
        k = min(batch, restarts - used)
        X = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
        X = X / (X @ a)[:, None]
        lam = np.einsum("ij,ij->i", np.conj(X), Qf.values(X)) / np.einsum("ij,ij->i", np.conj(X), X)
        Z0 = np.concatenate([X, lam[:, None]], axis=1)
        Z1, res = newton(F, Z0, iters=60)
        absorb(Z1, res)
        used += k
        if sum(1 if l.simple else 2 for l in lines) > expected + 2:
            break

    # eigenvalues and residuals refer to the caller's map, not the scaled one
    final = []
    for l in lines:
        lam, res = _residual(Q.to_float(), l.rep)
        if np.isrealobj(l.rep):
            lam = float(np.real(lam))
        nl = normalize_eigenvalue(l.rep, lam, m, "real" if (real_map and l.is_real) else "complex",
                                  tol=NILPOTENT_TOL * max(1.0, scale))
        final.append(EigenLine(nl.rep, nl.eigenvalue, nl.lambda_class, nl.normalized, l.simple, res))
    final.sort(key=_sort_key)
    # a non-simple line carries multiplicity >= 2
    weight = sum(1 if l.simple else 2 for l in final)
    return EigenSearch(Q, final, expected, possibly_infinite=weight > expected, starts_used=len(starts) + used)


def find_eigenlines(Q: HomogeneousMap, field: str = "complex", seed: int = 0,
                    restarts: int | None = None, tol: float | None = None,
                    strict: bool = True) -> list[EigenLine]:
    """Eigenlines of ``Q`` over the requested field, canonically sorted.

    With ``strict`` a :class:`NonConvergence` is raised (carrying the
    partial search) when fewer than ``bezout_count`` distinct complex
    lines were found or the line set looks infinite.
    """
    if Q.m < 2:
        raise ValueError("degree must be at least 2")
    if field not in ("real", "complex"):
        raise ValueError(f"unknown field {field!r}")
    if field == "real" and not Q.is_real:
        raise ValueError("real eigenlines requested for a complex map")
    search = search_eigenlines(Q, seed=seed, restarts=restarts, tol=tol)
    if strict and not search.complete:
        what = "infinitely many" if search.possibly_infinite else f"{len(search.lines)} of {search.expected}"
        raise NonConvergence(f"eigenline search found {what} lines; map possibly degenerate", search)
    return search.real_lines() if field == "real" else list(search.lines)


@dataclass(frozen=True)
class LineCheck:
    residual: float
    simple: bool
    eigenvalue: complex


def verify_eigenline(Q: HomogeneousMap, line, tol: float = 1e-10) -> LineCheck:
    """Recompute the residual and the multiplicity-one flag of a line.

    ``simple`` tests invertibility of the Jacobian of
    ``(x, lam) -> (Q(x) - lam x, <conj(c), x> - 1)`` at the unit
    representative, i.e. of the dehomogenized system in a chart through it.
    """
    rep = line.rep if isinstance(line, EigenLine) else np.asarray(line)
    if not np.any(rep):
        raise ValueError("zero representative")
    c = np.asarray(rep) / np.linalg.norm(rep)
    Qf = Q.to_float()
    lam, res = _residual(Qf, c)
    if res > tol * max(1.0, Q.coefficient_norm()):
        raise NotAnEigenline(f"residual {res:.3e} exceeds tolerance")
    scale = Q.coefficient_norm()
    simple = _is_simple(Qf.scaled(1.0 / scale), c, lam / scale)
    if np.isrealobj(c):
        lam = float(np.real(lam))
    return LineCheck(res, simple, lam)


def line_from_vector(Q: HomogeneousMap, v, field: str | None = None, tol: float = 1e-9) -> EigenLine:
    """Build a verified :class:`EigenLine` from a representative vector."""
    check = verify_eigenline(Q, v, tol=tol)
    c = np.asarray(v) / np.linalg.norm(v)
    field = field or ("real" if (Q.is_real and np.isrealobj(c)) else "complex")
    nl = normalize_eigenvalue(c, check.eigenvalue, Q.m, field, tol=NILPOTENT_TOL * max(1.0, Q.coefficient_norm()))
    return EigenLine(nl.rep, nl.eigenvalue, nl.lambda_class, nl.normalized, check.simple, check.residual)
