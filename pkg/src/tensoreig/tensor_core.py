"""Homogeneous polynomial maps, scalar forms and the gradient correspondence.

A degree-``m`` map ``Q: K^n -> K^n`` is stored as a sparse table of structure
coefficients keyed by ``(j, exponents)`` where ``j`` is the 0-based output
component and ``exponents`` is a tuple of ``n`` nonnegative integers summing
to ``m``.  Scalar forms use the same exponent tuples as keys.

Rational input (``int``/``Fraction``) is kept exact; anything containing a
float is coerced to float, anything containing a complex to complex.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

RATIONAL = "rational-real"
FLOAT = "float-real"
COMPLEX = "float-complex"

Exponents = tuple[int, ...]


class NotAGradient(ValueError):
    """Raised when a map has a non-symmetric derivative."""


def multi_indices(n: int, m: int) -> list[Exponents]:
    """All exponent tuples of length ``n`` summing to ``m``, graded-lex order."""
    if n == 1:
        return [(m,)]
    out = []
    for first in range(m, -1, -1):
        for rest in multi_indices(n - 1, m - first):
            out.append((first,) + rest)
    return out


def coefficient_dimension(n: int, m: int) -> int:
    return n * math.comb(n + m - 1, n - 1)


def _field_of(values: Iterable) -> str:
    tag = RATIONAL
    for v in values:
        if isinstance(v, (bool, np.bool_)):
            raise TypeError("boolean coefficient")
        if isinstance(v, Rational):
            continue
        if isinstance(v, (complex, np.complexfloating)):
            return COMPLEX
        if isinstance(v, (float, np.floating)):
            tag = FLOAT
            continue
        raise TypeError(f"unsupported scalar {v!r}")
    return tag


def _coerce(v, tag: str):
    if tag == RATIONAL:
        return Fraction(v)
    if tag == FLOAT:
        return float(v)
    return complex(v)


def _is_exact_vector(x) -> bool:
    return all(isinstance(v, Rational) for v in x)


def _mono(x, exps) -> object:
    out = 1
    for xi, e in zip(x, exps):
        if e:
            out = out * xi**e
    return out


class _Compiled:
    """Dense numpy evaluator for a table of ``(row, exponents) -> coef``.

    Evaluates batches ``X`` of shape (B, n) to (B, rows) and Jacobians to
    (B, rows, n).
    """

    def __init__(self, n: int, rows: int, table: Mapping[tuple[int, Exponents], object], dtype):
        monos = sorted({e for (_, e) in table}, reverse=True)
        if not monos:
            monos = [(0,) * n]
        index = {e: k for k, e in enumerate(monos)}
        self.n = n
        self.E = np.array(monos, dtype=np.int64).reshape(len(monos), n)
        self.C = np.zeros((rows, len(monos)), dtype=dtype)
        for (j, e), c in table.items():
            self.C[j, index[e]] += c
        self.dE = []
        self.dc = []
        for k in range(n):
            shifted = self.E.copy()
            shifted[:, k] = np.maximum(shifted[:, k] - 1, 0)
            self.dE.append(shifted)
            self.dc.append(self.E[:, k].astype(float))

    def value(self, X: np.ndarray) -> np.ndarray:
        M = np.prod(X[:, None, :] ** self.E[None, :, :], axis=2)
        return M @ self.C.T

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        B = X.shape[0]
        J = np.empty((B, self.C.shape[0], self.n), dtype=np.result_type(X, self.C))
        for k in range(self.n):
            M = np.prod(X[:, None, :] ** self.dE[k][None, :, :], axis=2) * self.dc[k]
            J[:, :, k] = M @ self.C.T
        return J


def _numeric_dtype(tag: str, x_dtype=None):
    if tag == COMPLEX or (x_dtype is not None and np.issubdtype(x_dtype, np.complexfloating)):
        return complex
    return float


@dataclass(frozen=True, eq=False)
class HomogeneousMap:
    """Homogeneous polynomial map of degree ``m`` on ``K^n``.

    ``coeffs`` maps ``(j, exponents)`` to a scalar, ``j`` being 0-based.
    Zero coefficients are dropped on construction.
    """

    n: int
    m: int
    coeffs: Mapping[tuple[int, Exponents], object]
    field_tag: str = field(default="")

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        tag = self.field_tag or _field_of(self.coeffs.values())
        table = {}
        for (j, e), c in self.coeffs.items():
            e = tuple(int(i) for i in e)
            if not 0 <= j < self.n:
                raise ValueError(f"component index {j} out of range for n={self.n}")
            if len(e) != self.n or any(i < 0 for i in e):
                raise ValueError(f"bad exponent tuple {e} for n={self.n}")
            if sum(e) != self.m:
                raise ValueError(f"exponents {e} of component {j} sum to {sum(e)}, expected {self.m}")
            c = _coerce(c, tag)
            if c != 0:
                table[(j, e)] = table.get((j, e), 0) + c
        table = {k: v for k, v in sorted(table.items(), key=lambda kv: (kv[0][0], [-i for i in kv[0][1]])) if v != 0}
        if not table:
            raise ValueError("all structure coefficients vanish")
        object.__setattr__(self, "coeffs", table)
        object.__setattr__(self, "field_tag", tag)

    # construction helpers
    @classmethod
    def from_components(cls, components: Sequence[Mapping[Exponents, object]], m: int | None = None) -> "HomogeneousMap":
        n = len(components)
        table = {(j, tuple(e)): c for j, comp in enumerate(components) for e, c in comp.items()}
        if m is None:
            m = sum(next(iter(table))[1])
        return cls(n, m, table)

    def component(self, j: int) -> dict[Exponents, object]:
        return {e: c for (i, e), c in self.coeffs.items() if i == j}

    @property
    def exact(self) -> bool:
        return self.field_tag == RATIONAL

    @property
    def is_real(self) -> bool:
        return self.field_tag != COMPLEX

    def coefficient_norm(self) -> float:
        return math.sqrt(sum(abs(complex(c)) ** 2 for c in self.coeffs.values()))

    @cached_property
    def _compiled(self) -> _Compiled:
        dtype = complex if self.field_tag == COMPLEX else float
        return _Compiled(self.n, self.n, {k: complex(v) if dtype is complex else float(v) for k, v in self.coeffs.items()}, dtype)

    def __call__(self, x):
        return evaluate(self, x)

    # numeric batch interface used by the solvers
    def values(self, X: np.ndarray) -> np.ndarray:
        return self._compiled.value(np.asarray(X))

    def jacobians(self, X: np.ndarray) -> np.ndarray:
        return self._compiled.jacobian(np.asarray(X))

    def scaled(self, s) -> "HomogeneousMap":
        return HomogeneousMap(self.n, self.m, {k: v * s for k, v in self.coeffs.items()})

    def to_float(self) -> "HomogeneousMap":
        if self.field_tag != RATIONAL:
            return self
        return HomogeneousMap(self.n, self.m, {k: float(v) for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, HomogeneousMap):
            return NotImplemented
        return (self.n, self.m, self.coeffs) == (other.n, other.m, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.m, tuple(self.coeffs.items())))

    def __repr__(self):
        return f"HomogeneousMap(n={self.n}, m={self.m}, field={self.field_tag!r}, terms={len(self.coeffs)})"


@dataclass(frozen=True, eq=False)
class Form:
    """Homogeneous scalar polynomial of degree ``degree`` in ``n`` variables."""

    n: int
    degree: int
    terms: Mapping[Exponents, object]
    field_tag: str = field(default="")

    def __post_init__(self):
        tag = self.field_tag or _field_of(self.terms.values())
        table = {}
        for e, c in self.terms.items():
            e = tuple(int(i) for i in e)
            if len(e) != self.n or any(i < 0 for i in e):
                raise ValueError(f"bad exponent tuple {e} for n={self.n}")
            if sum(e) != self.degree:
                raise ValueError(f"exponents {e} sum to {sum(e)}, expected {self.degree}")
            c = _coerce(c, tag)
            table[e] = table.get(e, 0) + c
        table = {e: c for e, c in sorted(table.items(), key=lambda kv: [-i for i in kv[0]]) if c != 0}
        object.__setattr__(self, "terms", table)
        object.__setattr__(self, "field_tag", tag)

    @property
    def exact(self) -> bool:
        return self.field_tag == RATIONAL

    def coefficient_norm(self) -> float:
        return math.sqrt(sum(abs(complex(c)) ** 2 for c in self.terms.values()))

    @cached_property
    def _compiled(self) -> _Compiled:
        dtype = complex if self.field_tag == COMPLEX else float
        return _Compiled(self.n, 1, {(0, e): dtype(c) for e, c in self.terms.items()}, dtype)

    def __call__(self, x):
        if _is_exact_vector(x) and self.exact:
            return sum((c * _mono(x, e) for e, c in self.terms.items()), Fraction(0))
        return self._compiled.value(np.asarray(x)[None, :])[0, 0]

    def values(self, X: np.ndarray) -> np.ndarray:
        return self._compiled.value(np.asarray(X))[:, 0]

    def __add__(self, other: "Form") -> "Form":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Form(self.n, self.degree, terms)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (self.n, self.degree, self.terms) == (other.n, other.degree, other.terms)

    def __hash__(self):
        return hash((self.n, self.degree, tuple(self.terms.items())))

    def __repr__(self):
        return f"Form(n={self.n}, degree={self.degree}, terms={dict(self.terms)!r})"


@dataclass(frozen=True, eq=False)
class PolynomialMap:
    """Not necessarily homogeneous polynomial map ``R^n -> R^n``.

    Used for degree computations and differential equations; ``leading()``
    returns the top-degree homogeneous part.
    """

    n: int
    coeffs: Mapping[tuple[int, Exponents], object]

    def __post_init__(self):
        tag = _field_of(self.coeffs.values())
        table = {}
        for (j, e), c in self.coeffs.items():
            e = tuple(int(i) for i in e)
            if len(e) != self.n or not 0 <= j < self.n:
                raise ValueError(f"bad entry {(j, e)} for n={self.n}")
            c = _coerce(c, tag)
            table[(j, e)] = table.get((j, e), 0) + c
        table = {k: v for k, v in table.items() if v != 0}
        if not table:
            raise ValueError("zero polynomial map")
        object.__setattr__(self, "coeffs", table)
        object.__setattr__(self, "field_tag", tag)

    @classmethod
    def from_homogeneous(cls, *parts: HomogeneousMap) -> "PolynomialMap":
        table: dict = {}
        for part in parts:
            for k, v in part.coeffs.items():
                table[k] = table.get(k, 0) + v
        return cls(parts[0].n, table)

    @property
    def degree(self) -> int:
        return max(sum(e) for (_, e) in self.coeffs)

    def leading(self) -> HomogeneousMap:
        m = self.degree
        return HomogeneousMap(self.n, m, {k: v for k, v in self.coeffs.items() if sum(k[1]) == m})

    @cached_property
    def _compiled(self) -> _Compiled:
        dtype = complex if self.field_tag == COMPLEX else float
        return _Compiled(self.n, self.n, {k: dtype(v) for k, v in self.coeffs.items()}, dtype)

    def values(self, X):
        return self._compiled.value(np.asarray(X))

    def jacobians(self, X):
        return self._compiled.jacobian(np.asarray(X))

    def __call__(self, x):
        return self.values(np.asarray(x)[None, :])[0]


def as_polynomial_map(P) -> PolynomialMap:
    if isinstance(P, PolynomialMap):
        return P
    if isinstance(P, HomogeneousMap):
        return PolynomialMap(P.n, dict(P.coeffs))
    raise TypeError(f"expected a polynomial map, got {type(P).__name__}")


def _check_length(x, n):
    if len(x) != n:
        raise ValueError(f"dimension mismatch: vector of length {len(x)} for n={n}")


def evaluate(Q: HomogeneousMap, x) -> np.ndarray:
    """Evaluate ``Q`` at ``x``.  Exact (object array of Fractions) when both
    ``Q`` and ``x`` are rational."""
    _check_length(x, Q.n)
    if Q.exact and _is_exact_vector(x):
        out = [Fraction(0)] * Q.n
        for (j, e), c in Q.coeffs.items():
            out[j] += c * _mono(x, e)
        return np.array(out, dtype=object)
    return Q.values(np.asarray(x)[None, :])[0]


def jacobian(Q: HomogeneousMap, x) -> np.ndarray:
    """Derivative ``DQ(x)`` as an ``n x n`` matrix (row = component)."""
    _check_length(x, Q.n)
    if Q.exact and _is_exact_vector(x):
        J = np.array([[Fraction(0)] * Q.n for _ in range(Q.n)], dtype=object)
        for (j, e), c in Q.coeffs.items():
            for k in range(Q.n):
                if e[k]:
                    d = list(e)
                    d[k] -= 1
                    J[j, k] += c * e[k] * _mono(x, d)
        return J
    return Q.jacobians(np.asarray(x)[None, :])[0]


def polarize_apply(Q: HomogeneousMap, *args) -> np.ndarray:
    """Symmetric multilinear form ``T(x1, ..., xm)`` with ``T(x, ..., x) = Q(x)``.

    Uses the polarization identity
    ``m! T(x1..xm) = sum_S (-1)^(m-|S|) Q(sum_{i in S} x_i)``.
    """
    if len(args) == 1 and len(args[0]) == Q.m and np.ndim(args[0][0]) == 1:
        args = tuple(args[0])
    if len(args) != Q.m:
        raise ValueError(f"need {Q.m} arguments, got {len(args)}")
    for a in args:
        _check_length(a, Q.n)
    exact = Q.exact and all(_is_exact_vector(a) for a in args)
    total = None
    for r in range(1, Q.m + 1):
        sign = (-1) ** (Q.m - r)
        for S in itertools.combinations(range(Q.m), r):
            if exact:
                point = [sum((args[i][k] for i in S), Fraction(0)) for k in range(Q.n)]
            else:
                point = sum(np.asarray(args[i]) for i in S)
            val = evaluate(Q, point) * sign
            total = val if total is None else total + val
    if exact:
        return np.array([v / math.factorial(Q.m) for v in total], dtype=object)
    return total / math.factorial(Q.m)


@dataclass(frozen=True)
class SymmetricTensorView:
    """Order-``m`` symmetric tensor backed by a homogeneous map."""

    Q: HomogeneousMap

    @property
    def order(self) -> int:
        return self.Q.m

    def __call__(self, *args):
        return polarize_apply(self.Q, *args)

    def dense(self) -> np.ndarray:
        """Array ``T[j, i1, ..., im]`` of the symmetric tensor (floats)."""
        n, m = self.Q.n, self.Q.m
        T = np.zeros((n,) + (n,) * m, dtype=complex if self.Q.field_tag == COMPLEX else float)
        eye = np.eye(n)
        for idx in itertools.product(range(n), repeat=m):
            T[(slice(None),) + idx] = polarize_apply(self.Q.to_float(), *[eye[i] for i in idx])
        return T


# -- scalar form calculus ---------------------------------------------------

def _poly_diff(terms: Mapping[Exponents, object], k: int) -> dict[Exponents, object]:
    out: dict[Exponents, object] = {}
    for e, c in terms.items():
        if e[k]:
            d = list(e)
            d[k] -= 1
            d = tuple(d)
            out[d] = out.get(d, 0) + c * e[k]
    return {e: c for e, c in out.items() if c != 0}


def gradient_map(q: Form) -> HomogeneousMap:
    """Map ``Q`` of degree ``d-1`` with ``Dq(x)y = d <Q(x), y>``."""
    if q.degree < 2:
        raise ValueError("form degree must be at least 2")
    if q.field_tag == COMPLEX:
        raise TypeError("gradient machinery is real only")
    d = q.degree
    scale = Fraction(1, d) if q.exact else 1.0 / d
    table = {}
    for k in range(q.n):
        for e, c in _poly_diff(q.terms, k).items():
            table[(k, e)] = c * scale
    return HomogeneousMap(q.n, d - 1, table)


def _symbolic_jacobian(Q: HomogeneousMap) -> list[list[dict]]:
    comps = [Q.component(j) for j in range(Q.n)]
    return [[_poly_diff(comps[j], k) for k in range(Q.n)] for j in range(Q.n)]


def _poly_close(a: Mapping, b: Mapping, tol: float) -> bool:
    keys = set(a) | set(b)
    if tol == 0:
        return all(a.get(k, 0) == b.get(k, 0) for k in keys)
    return all(abs(a.get(k, 0) - b.get(k, 0)) <= tol for k in keys)


@dataclass(frozen=True)
class GradientDiagnostics:
    is_gradient: bool
    is_traceless: bool

    @property
    def is_harmonic_gradient(self) -> bool:
        return self.is_gradient and self.is_traceless


def gradient_diagnostics(Q: HomogeneousMap, rtol: float = 1e-12) -> GradientDiagnostics:
    """Decide symmetry and tracelessness of ``DQ(x)`` as polynomial identities.

    Exact comparison for rational maps; for float maps coefficients are
    compared with absolute tolerance ``rtol * coefficient_norm``.
    """
    tol = 0 if Q.exact else rtol * Q.coefficient_norm()
    D = _symbolic_jacobian(Q)
    sym = all(_poly_close(D[j][k], D[k][j], tol) for j in range(Q.n) for k in range(j + 1, Q.n))
    trace: dict = {}
    for j in range(Q.n):
        for e, c in D[j][j].items():
            trace[e] = trace.get(e, 0) + c
    return GradientDiagnostics(sym, _poly_close(trace, {}, tol))


def potential(Q: HomogeneousMap) -> Form:
    """Form ``q(x) = <Q(x), x>`` whose gradient map is ``Q``.

    With ``Dq(x)y = (m+1) <Q(x), y>`` Euler's identity gives
    ``<Q(x), x> = q(x)``, so no further scaling is needed.
    """
    if Q.field_tag == COMPLEX:
        raise TypeError("gradient machinery is real only")
    if not gradient_diagnostics(Q).is_gradient:
        raise NotAGradient("DQ(x) is not symmetric")
    terms: dict[Exponents, object] = {}
    for (j, e), c in Q.coeffs.items():
        up = list(e)
        up[j] += 1
        up = tuple(up)
        terms[up] = terms.get(up, 0) + c
    return Form(Q.n, Q.m + 1, terms)


def laplacian(q: Form) -> dict[Exponents, object]:
    out: dict[Exponents, object] = {}
    for k in range(q.n):
        for e, c in _poly_diff(_poly_diff(q.terms, k), k).items():
            out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c != 0}


def linear_change(Q: HomogeneousMap, B: np.ndarray) -> HomogeneousMap:
    """Map in new coordinates: ``y -> B^T Q(B y)`` for orthogonal ``B``.

    Exact when ``Q`` and ``B`` are rational; otherwise floats.
    """
    n, m = Q.n, Q.m
    exact = Q.exact and all(isinstance(v, Rational) for v in np.asarray(B, dtype=object).ravel())
    Bm = np.asarray(B, dtype=object if exact else float)
    zero = Fraction(0) if exact else 0.0
    table: dict = {}
    # expand each monomial prod_k (sum_l B[k,l] y_l)^{e_k}
    for (j, e), c in Q.coeffs.items():
        poly = {(0,) * n: c if exact else (float(c) if Q.is_real else complex(c))}
        for k in range(n):
            for _ in range(e[k]):
                nxt: dict = {}
                for mono, a in poly.items():
                    for l in range(n):
                        b = Bm[k, l]
                        if b == 0:
                            continue
                        mm = list(mono)
                        mm[l] += 1
                        mm = tuple(mm)
                        nxt[mm] = nxt.get(mm, zero) + a * b
                poly = nxt
        for i in range(n):
            b = Bm[j, i]
            if b == 0:
                continue
            for mono, a in poly.items():
                table[(i, mono)] = table.get((i, mono), zero) + a * b
    if not exact:
        scale = max((abs(v) for v in table.values()), default=0.0)
        table = {k: v for k, v in table.items() if abs(v) > 1e-15 * scale}
    return HomogeneousMap(n, m, table)


def realify(S: HomogeneousMap | PolynomialMap) -> PolynomialMap:
    """Real representation ``P_R(S)`` on ``R^{2n}`` of a complex polynomial map.

    Variables are ``(u, w)`` with ``z = u + i w``; outputs ``(Re S, Im S)``.
    """
    n = S.n
    table: dict = {}
    for (j, e), c in S.coeffs.items():
        c = complex(c)
        # expand prod_k (u_k + i w_k)^{e_k}
        poly = {(0,) * (2 * n): c}
        for k in range(n):
            nxt: dict = {}
            for a in range(e[k] + 1):
                factor = math.comb(e[k], a) * (1j) ** a
                for mono, v in poly.items():
                    mm = list(mono)
                    mm[k] += e[k] - a
                    mm[n + k] += a
                    mm = tuple(mm)
                    nxt[mm] = nxt.get(mm, 0) + v * factor
            poly = nxt
        for mono, v in poly.items():
            table[(j, mono)] = table.get((j, mono), 0.0) + v.real
            table[(n + j, mono)] = table.get((n + j, mono), 0.0) + v.imag
    return PolynomialMap(2 * n, {k: float(v) for k, v in table.items() if abs(v) > 0})
