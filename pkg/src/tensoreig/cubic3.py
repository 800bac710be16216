"""Harmonic cubic forms on R^3.

Every harmonic cubic ``q`` has a gradient map ``Q`` (``q = <Q(x), x>/3``)
which, in an orthonormal basis ``c1, c2, c3`` with ``c1`` a minimum of ``q``
on the sphere and ``c2, c3`` eigenvectors of ``DQ(c1)`` on ``c1``'s
complement, depends on four numbers ``(alpha2, alpha3, beta2, beta3)``::

    Q1 = -(a2 + a3) x1^2 + a2 x2^2 + a3 x3^2
    Q2 = 2 a2 x1 x2 + b2 x2^2 + 2 b3 x2 x3 - b2 x3^2
    Q3 = 2 a3 x1 x3 + b3 x2^2 - 2 b2 x2 x3 - b3 x3^2

Eigenlines other than ``R c1`` are common zeros of the 2x2 minors of
``[Q(x) | x]``.  Away from a few special parameter sets they correspond to
the real roots of a degree six polynomial ``rho(t)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .eigen.lines import EigenLine, NotAnEigenline, _sort_key, angular_distance, line_from_vector, polish_real
from .eigen.sphere import SphereIndex, complement_basis, extremum_on_sphere, poincare_hopf_check, sphere_field_index
from .tensor_core import (Form, HomogeneousMap, evaluate, gradient_diagnostics, gradient_map, jacobian,
                          laplacian, linear_change, multi_indices, polarize_apply)
from .upoly import RootReport, UnivarPoly, real_roots, solve_binary_form

ZERO_TOL = 1e-10
NEAR_TOL = 1e-6
RESIDUAL_TOL = 1e-9


class NotHarmonic(ValueError):
    pass


class NotCubicR3(ValueError):
    pass


class MinimumDegenerate(ValueError):
    pass


class ResidualTooLarge(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class CubicCanonicalForm:
    alpha2: object
    alpha3: object
    beta2: object
    beta3: object
    basis: np.ndarray = field(default_factory=lambda: np.eye(3))
    scale: object = 1
    exact: bool | None = None

    def __post_init__(self):
        vals = self.params
        exact = all(isinstance(v, Rational) for v in vals)
        if self.exact is None:
            object.__setattr__(self, "exact", exact)
        if self.exact:
            object.__setattr__(self, "alpha2", Fraction(self.alpha2))
            object.__setattr__(self, "alpha3", Fraction(self.alpha3))
            object.__setattr__(self, "beta2", Fraction(self.beta2))
            object.__setattr__(self, "beta3", Fraction(self.beta3))
        B = np.asarray(self.basis, dtype=float)
        if B.shape != (3, 3) or not np.allclose(B.T @ B, np.eye(3), atol=1e-12):
            raise ValueError("basis must be an orthonormal 3x3 matrix")
        object.__setattr__(self, "basis", B)

    @property
    def params(self) -> tuple:
        return (self.alpha2, self.alpha3, self.beta2, self.beta3)

    @property
    def alpha1(self):
        return -(self.alpha2 + self.alpha3)

    def is_admissible(self) -> bool:
        """Ordering and minimum conditions on the alphas."""
        a2, a3 = self.alpha2, self.alpha3
        e2, e3 = 3 * a2 + a3, a2 + 3 * a3
        return a2 >= a3 and e2 >= 0 and e3 >= 0 and (e2 > 0 or e3 > 0)

    @classmethod
    def from_map(cls, Q: HomogeneousMap) -> "CubicCanonicalForm":
        """Read the parameters off a map already in canonical coordinates."""
        if Q.n != 3 or Q.m != 2:
            raise NotCubicR3("need a quadratic map on R^3")
        get = lambda j, e: Q.coeffs.get((j, e), 0)
        form = cls(get(0, (0, 2, 0)), get(0, (0, 0, 2)), get(1, (0, 2, 0)), get(2, (0, 2, 0)))
        if build_map(form) != Q:
            raise ValueError("map is not in canonical form")
        return form


def build_map(form: CubicCanonicalForm) -> HomogeneousMap:
    """The canonical quadratic map for the given parameters."""
    a2, a3, b2, b3 = form.params
    return HomogeneousMap(3, 2, {
        (0, (2, 0, 0)): -(a2 + a3), (0, (0, 2, 0)): a2, (0, (0, 0, 2)): a3,
        (1, (1, 1, 0)): 2 * a2, (1, (0, 2, 0)): b2, (1, (0, 1, 1)): 2 * b3, (1, (0, 0, 2)): -b2,
        (2, (1, 0, 1)): 2 * a3, (2, (0, 2, 0)): b3, (2, (0, 1, 1)): -2 * b2, (2, (0, 0, 2)): -b3,
    })


def original_map(form: CubicCanonicalForm) -> HomogeneousMap:
    """Map in the original coordinates, ``x -> B Qc(B^T x) / scale``."""
    Qc = build_map(form)
    if form.exact:
        Bt = np.array([[Fraction(round(v)) for v in row] for row in form.basis.T], dtype=object)
        return linear_change(Qc, Bt).scaled(1 / Fraction(form.scale))
    return linear_change(Qc, form.basis.T).scaled(1.0 / float(form.scale))


def harmonic_projection(p: Form) -> Form:
    """Harmonic part of a cubic on R^3: ``p - |x|^2 lap(p) / 10``."""
    if p.n != 3 or p.degree != 3:
        raise NotCubicR3("need a cubic form on R^3")
    terms = dict(p.terms)
    div = Fraction(1, 10) if p.exact else 0.1
    for e, c in laplacian(p).items():
        for k in range(3):
            mono = tuple(e[i] + 2 * (i == k) for i in range(3))
            terms[mono] = terms.get(mono, 0) - c * div
    return Form(3, 3, terms)


def random_harmonic_cubic(seed: int = 0) -> Form:
    rng = np.random.default_rng(seed)
    p = Form(3, 3, {e: float(rng.standard_normal()) for e in multi_indices(3, 3)})
    return harmonic_projection(p)


def canonicalize(q: Form, seed: int = 0) -> CubicCanonicalForm:
    """Canonical parameters and basis of a harmonic cubic on R^3."""
    if q.n != 3 or q.degree != 3:
        raise NotCubicR3("need a cubic form on R^3")
    Q = gradient_map(q)
    if not gradient_diagnostics(Q).is_traceless:
        raise NotHarmonic("the form has nonzero Laplacian")
    c1 = extremum_on_sphere(q, "min", seed=seed).point
    form = _exact_canonical(Q, c1) if q.exact else None
    if form is None:
        form = _float_canonical(Q.to_float(), c1)
    a2, a3 = form.alpha2, form.alpha3
    if _zero(3 * a2 + a3, form)[0] and _zero(a2 + 3 * a3, form)[0]:
        raise MinimumDegenerate("both tangent eigenvalues vanish at the minimum")
    return form


def _exact_canonical(Q: HomogeneousMap, c1: np.ndarray) -> CubicCanonicalForm | None:
    k = int(np.argmax(np.abs(c1)))
    if abs(abs(c1[k]) - 1) > 1e-9:
        return None
    e1 = [Fraction(0)] * 3
    e1[k] = Fraction(1 if c1[k] > 0 else -1)
    Qe = evaluate(Q, e1)
    if any(Qe[i] != 0 for i in range(3) if i != k):
        return None
    L = jacobian(Q, e1) / 2
    i, j = [r for r in range(3) if r != k]
    if L[i, j] != 0:
        return None
    if L[i, i] < L[j, j]:
        i, j = j, i
    unit = lambda r: [Fraction(int(s == r)) for s in range(3)]
    c2 = unit(i)
    Q22 = polarize_apply(Q, c2, c2)
    a2, a3 = L[i, i], L[j, j]
    b2, b3 = Q22[i], Q22[j]
    scale = Fraction(1)
    if a2 != a3:
        scale = 1 / (2 * (a2 - a3))
    basis = np.zeros((3, 3))
    basis[:, 0] = [float(v) for v in e1]
    basis[i, 1] = 1.0
    basis[j, 2] = 1.0
    return CubicCanonicalForm(a2 * scale, a3 * scale, b2 * scale, b3 * scale, basis, scale, exact=True)


def _orient(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-9))
    return v if v[k] > 0 else -v


def _float_canonical(Qf: HomogeneousMap, c1: np.ndarray) -> CubicCanonicalForm:
    c1 = polish_real(Qf, c1 / np.linalg.norm(c1))
    L = 0.5 * Qf.jacobians(c1[None, :])[0]
    L = 0.5 * (L + L.T)
    B = complement_basis(c1)
    w, V = np.linalg.eigh(B.T @ L @ B)
    a2, a3 = float(w[1]), float(w[0])
    c2, c3 = _orient(B @ V[:, 1]), _orient(B @ V[:, 0])
    Q22 = polarize_apply(Qf, c2, c2)
    b2, b3 = float(Q22 @ c2), float(Q22 @ c3)
    size = max(abs(a2), abs(a3), abs(b2), abs(b3))
    scale = 1.0
    if a2 - a3 > ZERO_TOL * size:
        scale = 1.0 / (2 * (a2 - a3))
    basis = np.stack([c1, c2, c3], axis=1)
    if np.linalg.det(basis) < 0:
        basis[:, 2] *= -1
        b3 = -b3
    return CubicCanonicalForm(a2 * scale, a3 * scale, b2 * scale, b3 * scale, basis, scale, exact=False)


def _zero(x, form: CubicCanonicalForm, tol: float = ZERO_TOL, degree: int = 1) -> tuple[bool, bool]:
    """(is zero, inside the near-degenerate band) for a parameter expression
    homogeneous of ``degree`` in the four parameters."""
    if form.exact:
        return x == 0, False
    size = max(1e-300, *(abs(float(v)) for v in form.params)) ** degree
    r = abs(float(x)) / size
    return r < tol, tol <= r < NEAR_TOL


@dataclass(frozen=True)
class CubicClassification:
    tag: str
    subcase: str | None = None
    expected_lines: int | None = None
    infinite: bool = False
    mirrored: bool = False
    near_degenerate: bool = False


def _effective(form: CubicCanonicalForm, mirrored: bool) -> tuple:
    a2, a3, b2, b3 = form.params
    return (a3, a2, -b3, -b2) if mirrored else (a2, a3, b2, b3)


def classify(form: CubicCanonicalForm, zero_tol: float = ZERO_TOL) -> CubicClassification:
    """Case tag for the eigenline analysis of a canonical form."""
    near = False

    def zero(x, degree=1):
        nonlocal near
        z, band = _zero(x, form, zero_tol, degree)
        near |= band
        return z

    a2, a3, b2, b3 = form.params
    b2z, b3z = zero(b2), zero(b3)
    az = zero(a2 - a3)
    if b2z and b3z:
        if az:
            return CubicClassification("AxialQuadric", infinite=True, near_degenerate=near)
        return CubicClassification("Axial", expected_lines=5, near_degenerate=near)
    if b2z or b3z:
        mirrored = b3z
        e2, e3, _, f3 = _effective(form, mirrored)
        if zero(e2 - e3):
            return CubicClassification("SemiAxial", "EqualAlphas", 7, mirrored=mirrored, near_degenerate=near)
        if zero(3 * e2 + e3):
            if zero(4 * e2 * e2 - f3 * f3, 2):
                return CubicClassification("SemiAxial", "ThreeAlphaQuadric", infinite=True, mirrored=mirrored,
                                           near_degenerate=near)
            return CubicClassification("SemiAxial", "ThreeAlphaDegenerate", 5, mirrored=mirrored,
                                       near_degenerate=near)
        return CubicClassification("SemiAxial", "General", mirrored=mirrored, near_degenerate=near)
    if az:
        return CubicClassification("GenericEqualAlphas", expected_lines=7, near_degenerate=near)
    rho = rho_polynomial(form)
    if form.exact:
        if real_roots(rho).multiple:
            return CubicClassification("Degenerate", near_degenerate=near)
    elif _clustered_roots(rho):
        near = True
    return CubicClassification("Generic", near_degenerate=near)


def _clustered_roots(p: UnivarPoly, tol: float = NEAR_TOL) -> bool:
    """True when a real or nearly real root of ``p`` sits close to another root."""
    z = np.roots(p.to_numpy())
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if min(abs(z[i].imag), abs(z[j].imag)) < tol * (1 + abs(z[i])) and \
                    abs(z[i] - z[j]) < tol * (1 + abs(z[i])):
                return True
    return False


def _poly(coeffs) -> UnivarPoly:
    return UnivarPoly([Fraction(c) for c in coeffs])


def v_polynomial(form: CubicCanonicalForm) -> UnivarPoly:
    """``x1 x2 x3`` on the first minor's zero set, with ``x2 = 1, x3 = t``."""
    _, _, b2, b3 = form.params
    return _poly([b3, -3 * b2, -3 * b3, b2])


def rho_polynomial(form: CubicCanonicalForm) -> UnivarPoly:
    """Degree six polynomial whose real roots ``t = x3/x2`` give the
    eigenlines off ``R c1`` for a generic normalized form.

    Built by substituting ``v(t)`` into the symmetrized minor condition.
    """
    a2, a3, b2, b3 = (Fraction(v) for v in form.params)
    if b2 == 0 or b3 == 0:
        raise ValueError("rho needs beta2 and beta3 nonzero")
    if abs(2 * (a2 - a3) - 1) > Fraction(1, 10**9):
        raise ValueError("form is not normalized to 2(alpha2 - alpha3) = 1")
    if a2 <= Fraction(3, 8):
        raise ValueError("alpha2 must exceed 3/8")
    v = v_polynomial(form)
    w = _poly([b3, -b2, b3, -b2])
    return 4 * (a2 + a3) * v * v + w * v - _poly([0, 0, 2 * a2, 0, 2 * a3])


def rho_table(alpha2, beta2, beta3) -> UnivarPoly:
    """``rho`` from closed-form coefficients, assuming ``alpha3 = alpha2 - 1/2``."""
    a, p, s = Fraction(alpha2), Fraction(beta2), Fraction(beta3)
    return UnivarPoly([
        s * s * (8 * a - 1),
        8 * p * s * (-6 * a + 1),
        72 * a * p * p - 48 * a * s * s - 15 * p * p + 10 * s * s - 2 * a,
        40 * p * s * (4 * a - 1),
        -48 * a * p * p + 72 * a * s * s + 14 * p * p - 21 * s * s - 2 * a + 1,
        16 * p * s * (-3 * a + 1),
        p * p * (8 * a - 3),
    ])


def mu_polynomial(gamma) -> UnivarPoly:
    """Cubic ``-t^3 + 3 gamma t^2 + 3t - gamma`` for equal alphas."""
    g = Fraction(gamma)
    return UnivarPoly([-g, 3, 3 * g, -1])


def _real_binary(a, b, c) -> list[tuple[float, float]]:
    """Real projective roots ``(X, Y)`` of ``a X^2 + b X Y + c Y^2``."""
    roots = solve_binary_form([Fraction(c), Fraction(b), Fraction(a)], complex_roots=False)
    return [r.as_real() for r in roots if r.real]


def _real_quadratic(a, b, c) -> list[float]:
    """Real roots of ``a x^2 + b x + c`` with ``a != 0``."""
    return [X / Y for X, Y in _real_binary(a, b, c) if Y != 0]


def _finish(form: CubicCanonicalForm, vectors, Q: HomogeneousMap | None = None) -> list[EigenLine]:
    """Polish canonical-coordinate vectors, map them back and verify."""
    Qc = build_map(form).to_float()
    Q = Q if Q is not None else original_map(form)
    Qo = Q.to_float()
    scale = max(1.0, Q.coefficient_norm())
    out: list[EigenLine] = []
    for y in vectors:
        y = np.asarray(y, dtype=float)
        y = polish_real(Qc, y / np.linalg.norm(y))
        x = polish_real(Qo, form.basis @ y)
        try:
            line = line_from_vector(Q, x, field="real", tol=RESIDUAL_TOL)
        except NotAnEigenline as exc:
            raise ResidualTooLarge(str(exc)) from exc
        if line.residual > RESIDUAL_TOL * scale:
            raise ResidualTooLarge(f"residual {line.residual:.3e}")
        if all(angular_distance(line.rep, o.rep) > 1e-8 for o in out):
            out.append(line)
    out.sort(key=_sort_key)
    return out


def reconstruct_eigenlines(form: CubicCanonicalForm, roots: RootReport,
                           Q: HomogeneousMap | None = None) -> list[EigenLine]:
    """Eigenlines from the real roots of ``rho``, plus ``R c1``.

    ``Q`` is the map in original coordinates (defaults to the one rebuilt
    from ``form``); returned lines live there.
    """
    v = v_polynomial(form)
    vectors = [np.array([1.0, 0.0, 0.0])]
    for t in roots.refined:
        vectors.append(np.array([float(v(Fraction(t))) / t, 1.0, t]))
    return _finish(form, vectors, Q)


@dataclass
class SpecialCaseSolution:
    lines: list[EigenLine]
    quadric: Form | None = None
    quartic: UnivarPoly | None = None
    quartic_real_roots: int | None = None


def _semi_axial(e2, e3, f3, subcase) -> tuple[list, object, UnivarPoly | None, int | None]:
    """Vectors (effective coordinates) for beta2 = 0, beta3 != 0."""
    vecs = [np.array([X, 0.0, Y]) for X, Y in _real_binary(e2 + 3 * e3, -f3, -e3) if Y != 0]
    quadric = quartic = nreal = None
    if subcase == "EqualAlphas":
        for t in (3**0.5, -(3**0.5)):
            for x1 in _real_quadratic(-(3 * e2 + e3), -2 * f3, 3 * e2 + e3):
                vecs.append(np.array([x1, t, 1.0]))
    elif subcase == "ThreeAlphaDegenerate":
        vecs += [np.array([0.0, 3**0.5, 1.0]), np.array([0.0, -(3**0.5), 1.0])]
    elif subcase == "ThreeAlphaQuadric":
        quadric = {(1, 0, 1): 8 * e2 / f3, (0, 2, 0): -1, (0, 0, 2): 3}
    else:
        d = e2 - e3
        s = _poly([-3, 0, 1])
        quartic = _poly([-(3 * e2 + e3) * f3 * f3]) * s * s + _poly([-4 * d * (f3 * f3 - e2 * d)]) * s \
            + _poly([4 * d * d * (3 * e2 + e3)])
        rep = real_roots(quartic)
        nreal = rep.count
        for t in rep.refined:
            vecs.append(np.array([float(f3) * (t * t - 3) / (2 * float(d)), t, 1.0]))
    return vecs, quadric, quartic, nreal


def solve_special_case(form: CubicCanonicalForm, classification: CubicClassification | None = None,
                       Q: HomogeneousMap | None = None) -> SpecialCaseSolution:
    """Eigenlines for every non-generic tag by direct low-degree reductions.

    Infinite families come back as a quadric (in canonical coordinates)
    together with ``R c1``.
    """
    cls = classification or classify(form)
    a2, a3, b2, b3 = form.params
    c1 = np.array([1.0, 0.0, 0.0])
    vecs = [c1]
    quadric = quartic = nreal = None
    if cls.tag == "Axial":
        vecs += [np.array([0.0, X, Y]) for X, Y in _real_binary(a2, 0, a3)]
        vecs += [np.array([X, 0.0, Y]) for X, Y in _real_binary(a2 + 3 * a3, 0, -a3) if Y != 0]
        vecs += [np.array([X, Y, 0.0]) for X, Y in _real_binary(-(3 * a2 + a3), 0, a2) if Y != 0]
    elif cls.tag == "AxialQuadric":
        quadric = {(2, 0, 0): -4, (0, 2, 0): 1, (0, 0, 2): 1}
    elif cls.tag == "SemiAxial":
        e2, e3, _, f3 = _effective(form, cls.mirrored)
        extra, quadric, quartic, nreal = _semi_axial(e2, e3, f3, cls.subcase)
        if cls.mirrored:
            extra = [v[[0, 2, 1]] for v in extra]
            if quadric:
                quadric = {(e[0], e[2], e[1]): c for e, c in quadric.items()}
        vecs += extra
    elif cls.tag == "GenericEqualAlphas":
        mu = _poly([-b3, 3 * b2, 3 * b3, -b2])
        for t in real_roots(mu).refined:
            lin = float(b3) - float(b2) * t + float(b3) * t**2 - float(b2) * t**3
            const = -2 * (float(a2) * t**2 + float(a3) * t**4)
            for v in _real_quadratic(4 * (float(a2) + float(a3)), lin, const):
                vecs.append(np.array([v / t, 1.0, t]))
    else:
        raise ValueError(f"{cls.tag} is not a special case")
    lines = _finish(form, vecs, Q)
    qform = Form(3, 2, quadric) if quadric else None
    return SpecialCaseSolution(lines, qform, quartic, nreal)


@dataclass(frozen=True, eq=False)
class CriticalPoint:
    point: np.ndarray
    stationary_type: str
    index: int | None
    value: float


@dataclass(eq=False)
class CubicReport:
    form: CubicCanonicalForm
    classification: CubicClassification
    rho: UnivarPoly | None
    roots: RootReport | None
    real_line_count: int | None
    eigenlines: list[EigenLine]
    critical_profile: list[CriticalPoint]
    maxima_count: int
    minima_count: int
    saddle_count: int
    ph_check: object | None
    quadric: Form | None = None
    quartic_real_roots: int | None = None

    @property
    def degenerate(self) -> bool:
        c = self.classification
        return c.infinite or c.tag == "Degenerate" or c.near_degenerate or \
            any(p.index is None for p in self.critical_profile)


def analyze(q, seed: int = 0, tol: float = 1e-9) -> CubicReport:
    """Canonicalize, classify, enumerate real eigenlines and profile the
    stationary points of ``q`` on the sphere."""
    if isinstance(q, CubicCanonicalForm):
        form, Q = q, original_map(q)
    else:
        form = canonicalize(q, seed=seed)
        Q = gradient_map(q)
    cls = classify(form)
    rho = roots = None
    quadric = nquart = None
    if cls.tag in ("Generic", "Degenerate"):
        rho = rho_polynomial(form)
        roots = real_roots(rho)
        lines = reconstruct_eigenlines(form, roots, Q)
    else:
        sol = solve_special_case(form, cls, Q)
        lines, quadric, nquart = sol.lines, sol.quadric, sol.quartic_real_roots
    qf = Q.to_float()
    profile: list[CriticalPoint] = []
    entries: list[SphereIndex] = []
    for line in lines:
        for sign in (1.0, -1.0):
            idx = sphere_field_index(Q, sign * line.rep, tol=tol, check_gradient=False)
            if sign > 0:
                entries.append(idx)
            value = float(qf.values(idx.point[None, :])[0] @ idx.point)
            profile.append(CriticalPoint(idx.point, idx.stationary_type, idx.index, value))
    ph = None
    if not cls.infinite and all(e.index is not None for e in entries):
        ph = poincare_hopf_check(entries, 3, 2)
    count = lambda kind: sum(p.stationary_type == kind for p in profile)
    return CubicReport(form, cls, rho, roots, None if cls.infinite else len(lines), lines, profile,
                       count("max"), count("min"), count("saddle"), ph, quadric, nquart)
