from fractions import Fraction

import numpy as np
import pytest

from tensoreig import cubic3
from tensoreig.cubic3 import (
    CubicCanonicalForm, MinimumDegenerate, NotCubicR3, NotHarmonic, analyze, build_map, canonicalize, classify,
    mu_polynomial, original_map, random_harmonic_cubic, reconstruct_eigenlines, rho_polynomial, rho_table,
    solve_special_case,
)
from tensoreig.eigen import find_eigenlines, verify_eigenline
from tensoreig.tensor_core import Form, HomogeneousMap, gradient_diagnostics, gradient_map, linear_change, potential
from tensoreig.upoly import UnivarPoly, real_roots

from oracles import elimination_rho

F = Fraction


def random_generic(rng):
    a2 = F(3, 8) + F(int(rng.integers(1, 40)), int(rng.integers(1, 20)))
    b2 = F(int(rng.integers(1, 30)), int(rng.integers(1, 9))) * (1 if rng.random() < 0.5 else -1)
    b3 = F(int(rng.integers(1, 30)), int(rng.integers(1, 9))) * (1 if rng.random() < 0.5 else -1)
    return CubicCanonicalForm(a2, a2 - F(1, 2), b2, b3)


def test_build_map_examples():
    Q = build_map(CubicCanonicalForm(1, 1, 0, 0))
    assert Q == HomogeneousMap(3, 2, {(0, (2, 0, 0)): -2, (0, (0, 2, 0)): 1, (0, (0, 0, 2)): 1,
                                      (1, (1, 1, 0)): 2, (2, (1, 0, 1)): 2})
    for params in [(1, F(1, 2), 1, 1), (F(2, 3), -F(1, 5), F(7, 2), -3), (0.3, 0.1, -1.2, 0.4)]:
        d = gradient_diagnostics(build_map(CubicCanonicalForm(*params)))
        assert d.is_gradient and d.is_traceless
    with pytest.raises(ValueError):
        build_map(CubicCanonicalForm(0, 0, 0, 0))


def test_form_validation():
    with pytest.raises(ValueError):
        CubicCanonicalForm(1, 0, 0, 0, basis=np.ones((3, 3)))
    f = CubicCanonicalForm(1, F(1, 2), 0, 0)
    assert f.exact and f.alpha1 == F(-3, 2) and f.is_admissible()
    assert not CubicCanonicalForm(1, -3, 0, 2).is_admissible()


def test_canonicalize_examples(xyz, sphere_sum):
    f = canonicalize(xyz)
    # the minimum sits off the axes, so this runs in floating point
    assert np.isclose(f.alpha2, f.alpha3, rtol=0, atol=1e-12)
    assert classify(f).tag == "GenericEqualAlphas"
    with pytest.raises(NotHarmonic):
        canonicalize(sphere_sum)
    with pytest.raises(NotCubicR3):
        canonicalize(Form(2, 3, {(3, 0): 1}))


def test_canonicalize_round_trip():
    rng = np.random.default_rng(4)
    B, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    src = CubicCanonicalForm(1, F(1, 2), F(1, 5), F(1, 7), basis=B, exact=False)
    f = canonicalize(potential(original_map(src)))
    assert np.allclose([f.alpha2, f.alpha3], [1, 0.5], atol=1e-9)
    # c2, c3 are fixed up to sign by the ordering of the alphas
    assert np.allclose(np.abs([f.beta2, f.beta3]), [0.2, 1 / 7], atol=1e-9)
    assert np.allclose(np.abs(f.basis.T @ B), np.eye(3), atol=1e-7)


def test_canonical_position_needs_global_minimum():
    # for (1, 1/2, 1, 1) the axis c1 is only a local minimum
    src = CubicCanonicalForm(1, F(1, 2), 1, 1)
    q = potential(build_map(src))
    f = canonicalize(q)
    assert q([1, 0, 0]) > q(f.basis[:, 0])
    again = canonicalize(potential(original_map(f)))
    assert np.allclose(np.abs(again.params), np.abs(f.params), atol=1e-8)
    a, b = analyze(src), analyze(q)
    assert (a.real_line_count, a.maxima_count) == (b.real_line_count, b.maxima_count)


def test_canonical_scale():
    q = potential(build_map(CubicCanonicalForm(3, 1, F(1, 2), F(1, 3))))
    f = canonicalize(q)
    assert f.exact and f.scale == F(1, 4)
    assert f.params == (F(3, 4), F(1, 4), F(1, 8), F(1, 12))
    # scaling does not move the line set
    assert len(analyze(q).eigenlines) == len(analyze(f).eigenlines)


def test_classify_examples():
    c = classify(CubicCanonicalForm(1, F(1, 2), 0, 0))
    assert (c.tag, c.expected_lines) == ("Axial", 5)
    c = classify(CubicCanonicalForm(1, 1, 0, 0))
    assert c.tag == "AxialQuadric" and c.infinite
    c = classify(CubicCanonicalForm(1, -3, 0, 2))
    assert (c.tag, c.subcase, c.infinite) == ("SemiAxial", "ThreeAlphaQuadric", True)
    c = classify(CubicCanonicalForm(1, 1, 0, 2))
    assert (c.tag, c.subcase, c.expected_lines) == ("SemiAxial", "EqualAlphas", 7)
    assert classify(CubicCanonicalForm(1, 1, 1, 2)).tag == "GenericEqualAlphas"
    assert classify(CubicCanonicalForm(1, F(1, 2), 1, 1)).tag == "Generic"
    c = classify(CubicCanonicalForm(1, -3, 0, 1))
    assert (c.subcase, c.expected_lines) == ("ThreeAlphaDegenerate", 5)
    c = classify(CubicCanonicalForm(1, 1, 2, 0))
    assert c.mirrored and c.subcase == "EqualAlphas"


def test_classify_float_band():
    c = classify(CubicCanonicalForm(1.0, 0.5, 1e-12, 0.0))
    assert c.tag == "Axial"
    c = classify(CubicCanonicalForm(1.0, 0.5, 1e-8, 0.3))
    assert c.near_degenerate


def test_rho_examples():
    rho = rho_polynomial(CubicCanonicalForm(F(1, 2), 0, 1, 1))
    assert rho.degree == 6
    assert rho.coeffs[6] == 1 and rho.coeffs[0] == 3
    assert rho == rho_table(F(1, 2), 1, 1)


def test_rho_preconditions():
    with pytest.raises(ValueError):
        rho_polynomial(CubicCanonicalForm(1, F(1, 2), 0, 1))
    with pytest.raises(ValueError):
        rho_polynomial(CubicCanonicalForm(1, 0, 1, 1))
    with pytest.raises(ValueError):
        rho_polynomial(CubicCanonicalForm(F(3, 8), -F(1, 8), 1, 1))


def test_rho_matches_elimination():
    rng = np.random.default_rng(0)
    for _ in range(15):
        f = random_generic(rng)
        rho = rho_polynomial(f)
        assert rho == elimination_rho(f) == rho_table(f.alpha2, f.beta2, f.beta3)
        assert rho.degree == 6 and rho.coeffs[0] != 0


def test_mu_three_real_roots():
    for g in [F(1), F(-7, 3), F(0), F(100)]:
        assert real_roots(mu_polynomial(g)).count == 3


@pytest.mark.parametrize("params,nroots", [
    ((F(1311, 500), F(1061, 500), F(-163, 1450), F(41, 4625)), 4),
    ((F(1, 2), 0, 1, 1), 6),
])
def test_reconstruct(params, nroots):
    f = CubicCanonicalForm(*params)
    rep = real_roots(rho_polynomial(f))
    assert rep.count == nroots
    lines = reconstruct_eigenlines(f, rep)
    assert len(lines) == nroots + 1
    Q = build_map(f)
    for line in lines:
        assert verify_eigenline(Q, line, tol=1e-9).residual < 1e-9


def test_reconstruct_without_roots():
    f = CubicCanonicalForm(1, F(1, 2), 1, 1)
    empty = real_roots(UnivarPoly([1, 0, 1]))
    (line,) = reconstruct_eigenlines(f, empty)
    assert np.allclose(line.rep, [1, 0, 0])


def test_rho_has_at_least_four_real_roots():
    # observed over admissible forms: never fewer than 5 real lines
    rng = np.random.default_rng(2)
    for _ in range(100):
        assert real_roots(rho_polynomial(random_generic(rng))).count in (4, 6)


def test_special_cases():
    sol = solve_special_case(CubicCanonicalForm(1, F(1, 2), 0, 0))
    assert len(sol.lines) == 5 and sol.quadric is None
    sol = solve_special_case(CubicCanonicalForm(1, 1, 0, 0))
    assert sol.quadric == Form(3, 2, {(2, 0, 0): -4, (0, 2, 0): 1, (0, 0, 2): 1})
    sol = solve_special_case(CubicCanonicalForm(1, -3, 0, 2))
    assert sol.quadric == Form(3, 2, {(1, 0, 1): 4, (0, 2, 0): -1, (0, 0, 2): 3})
    sol = solve_special_case(CubicCanonicalForm(1, -3, 0, -2))
    assert sol.quadric == Form(3, 2, {(1, 0, 1): -4, (0, 2, 0): -1, (0, 0, 2): 3})
    assert len(solve_special_case(CubicCanonicalForm(1, 1, 0, 2)).lines) == 7
    assert len(solve_special_case(CubicCanonicalForm(1, 1, 3, 0)).lines) == 7
    assert len(solve_special_case(CubicCanonicalForm(1, 1, 1, 2)).lines) == 7
    assert len(solve_special_case(CubicCanonicalForm(1, -3, 0, 1)).lines) == 5
    with pytest.raises(ValueError):
        solve_special_case(CubicCanonicalForm(1, F(1, 2), 1, 1))


def test_quadric_family_is_eigen():
    # points of the quadric family are eigenvectors of the canonical map
    Q = build_map(CubicCanonicalForm(1, 1, 0, 0)).to_float()
    for th in np.linspace(0, 2 * np.pi, 7):
        v = np.array([0.5, np.cos(th), np.sin(th)])
        assert verify_eigenline(Q, v).residual < 1e-12


def test_semi_axial_general_quartic():
    rng = np.random.default_rng(8)
    for _ in range(20):
        a2 = F(int(rng.integers(1, 20)), int(rng.integers(1, 9)))
        a3 = a2 - F(int(rng.integers(1, 20)), int(rng.integers(1, 9)))
        f = CubicCanonicalForm(a2, a3, 0, F(int(rng.integers(1, 9)), int(rng.integers(1, 5))))
        if not f.is_admissible() or classify(f).subcase != "General":
            continue
        sol = solve_special_case(f)
        assert sol.quartic_real_roots >= 2
        expected = len(find_eigenlines(build_map(f).to_float(), field="real", strict=False))
        assert len(sol.lines) == expected


def test_analyze_xyz(xyz):
    r = analyze(xyz)
    assert r.real_line_count == 7
    assert (r.maxima_count, r.minima_count, r.saddle_count) == (4, 4, 6)
    assert r.ph_check.passed and r.ph_check.index_sum == 2
    top = max(p.value for p in r.critical_profile)
    assert np.isclose(top, 1 / (3 * np.sqrt(3)))


def test_analyze_axial():
    f = CubicCanonicalForm(1, F(1, 2), 0, 0)
    r = analyze(potential(build_map(f)))
    assert r.classification.tag == "Axial" and r.real_line_count == 5
    assert r.maxima_count == r.minima_count


def test_analyze_infinite_family():
    r = analyze(potential(build_map(CubicCanonicalForm(1, 1, 0, 0))))
    assert r.real_line_count is None and r.ph_check is None and r.degenerate


def test_basis_freedom_invariance():
    q = potential(build_map(CubicCanonicalForm(1, 1, F(1, 3), 2)))
    base = analyze(q)
    for th in (0.3, 1.1, 2.5):
        R = np.array([[1, 0, 0], [0, np.cos(th), -np.sin(th)], [0, np.sin(th), np.cos(th)]])
        r = analyze(potential(linear_change(gradient_map(q).to_float(), R)))
        assert (r.real_line_count, r.maxima_count) == (base.real_line_count, base.maxima_count)


def test_random_agreement():
    for seed in range(12):
        q = random_harmonic_cubic(seed)
        r = analyze(q, seed=seed)
        Q = gradient_map(q)
        assert r.real_line_count == len(find_eigenlines(Q, field="real", seed=seed))
        assert r.real_line_count in (1, 3, 5, 7)
        assert r.maxima_count == r.minima_count
        assert all(l.residual < 1e-9 for l in r.eigenlines)
        if not r.degenerate:
            assert r.ph_check.passed


def test_minimum_degenerate_guard(monkeypatch):
    # x2^3 - 3 x2 x3^2 is flat along e1; forcing that point as the minimum must be refused
    q = Form(3, 3, {(0, 3, 0): 1, (0, 1, 2): -3})

    class Fake:
        point = np.array([1.0, 0.0, 0.0])

    monkeypatch.setattr(cubic3, "extremum_on_sphere", lambda *a, **k: Fake())
    with pytest.raises(MinimumDegenerate):
        canonicalize(q)
