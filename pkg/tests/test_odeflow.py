from fractions import Fraction

import numpy as np
import pytest

from tensoreig.eigen import NotAnEigenline, find_eigenlines, sphere_field_index
from tensoreig.odeflow import infinity_spectrum, numeric_ray, ray_deviation, ray_solution, unbounded_certificate
from tensoreig.tensor_core import Form, HomogeneousMap, PolynomialMap, gradient_map

from conftest import random_map

F = Fraction
A = 1 / (3 * np.sqrt(3))


def test_ray_examples(squares):
    ray = ray_solution(squares, [1, 0])
    assert ray.alpha == 1 and ray.blow_up_time == 1
    t = np.array([0.0, 0.5, 0.9])
    assert np.allclose(ray(t), 1 / (1 - t))
    cube = HomogeneousMap(2, 3, {(0, (3, 0)): -1, (1, (0, 3)): 1})
    ray = ray_solution(cube, [1, 0])
    assert ray.alpha == -1 and ray.blow_up_time is None
    t = np.linspace(0, 50, 11)
    assert np.allclose(ray(t), (1 + 2 * t) ** -0.5)


def test_stationary_ray(xyz):
    ray = ray_solution(gradient_map(xyz), [0, 1, 0], y0=F(5, 2))
    assert ray.stationary and ray.blow_up_time is None
    assert np.allclose(ray(np.linspace(0, 10, 5)), 2.5)


def test_exact_blow_up(xyz):
    ray = ray_solution(gradient_map(xyz), [1, 1, 1], y0=F(1, 2))
    assert ray.alpha == F(1, 3) and ray.blow_up_time == 6
    assert isinstance(ray.blow_up_time, Fraction)
    assert np.isnan(ray(7.0))


def test_ray_rejects_non_eigenline(squares):
    with pytest.raises(NotAnEigenline):
        ray_solution(squares, [1, 2])
    with pytest.raises(NotAnEigenline):
        ray_solution(squares.to_float(), [1.0, 2.0])


def test_closed_form_residual():
    for alpha, m, y0 in [(1.0, 2, 1.0), (0.7, 3, 1.3), (-2.0, 4, 0.5), (0.25, 5, -1.1)]:
        Q = HomogeneousMap(1, m, {(0, (m,)): alpha})
        ray = ray_solution(Q, [1.0], y0)
        T = ray.blow_up_time
        t = np.linspace(0, 0.9 * T if T else 5.0, 100)
        dphi = ray.derivative(t)
        assert np.allclose(dphi, alpha * ray(t) ** m, rtol=1e-10)
        # derivative of the closed form, computed independently
        k = m - 1
        exact = y0 * alpha * y0**k * (1 - alpha * k * y0**k * t) ** (-1 / k - 1)
        assert np.allclose(dphi, exact, rtol=1e-10)


def test_float_ray_rescales_alpha(xyz):
    Q = gradient_map(xyz).to_float()
    ray = ray_solution(Q, [2.0, 2.0, 2.0])
    assert np.isclose(ray.alpha, 2 / 3)


def test_numeric_cross_check(xyz):
    Q = gradient_map(xyz)
    ray = ray_solution(Q, [1, 1, 1], y0=F(1, 2))
    rel, drift = ray_deviation(Q, ray)
    assert rel < 1e-6 and drift < 1e-6
    times, X = numeric_ray(Q, ray, 1.0, samples=5)
    assert X.shape == (5, 3)


def test_certificate_examples(xyz, squares):
    cert = unbounded_certificate(gradient_map(xyz))
    assert cert.found and np.isclose(cert.alpha, A)
    assert np.allclose(np.abs(cert.c), 1 / np.sqrt(3))
    cert = unbounded_certificate(squares)
    assert cert.found and np.isclose(cert.alpha, 1)
    assert cert.all_nilpotent is False


def test_certificate_all_nilpotent():
    # Q = (x2^2, 0): only real line is e1, nilpotent
    cert = unbounded_certificate(HomogeneousMap(2, 2, {(0, (0, 2)): 1}))
    assert not cert.found and cert.all_nilpotent


def test_certificate_uses_leading_part(squares):
    lower = HomogeneousMap(2, 1, {(0, (1, 0)): -5, (1, (0, 1)): 3})
    P = PolynomialMap.from_homogeneous(squares, lower)
    assert unbounded_certificate(P).found


def test_infinity_examples(xyz, squares):
    ip = infinity_spectrum(gradient_map(xyz), [1.0, 1.0, 1.0])
    assert np.isclose(ip.alpha, A)
    assert np.allclose(sorted(ip.spectrum), [-2 * A, -2 * A, -A])
    ip = infinity_spectrum(squares, [1.0, 0.0])
    assert np.allclose(ip.spectrum, [-1, -1]) and len(ip.spectrum) == 2
    with pytest.raises(NotAnEigenline):
        infinity_spectrum(squares, [1.0, 3.0])


def test_infinity_matches_sphere_index():
    rng = np.random.default_rng(3)
    q = Form(3, 3, {e: float(rng.standard_normal()) for e in [(3, 0, 0), (1, 1, 1), (0, 2, 1), (2, 0, 1), (0, 0, 3)]})
    Q = gradient_map(q)
    for line in find_eigenlines(Q, field="real"):
        ip = infinity_spectrum(Q, line)
        idx = sphere_field_index(Q, line.rep)
        assert np.allclose(ip.spectrum[1:], idx.shifted, atol=1e-9)


def test_random_rays():
    rng = np.random.default_rng(12)
    done = 0
    while done < 5:
        Q = random_map(rng, 3, 2, "float")
        for line in find_eigenlines(Q, field="real"):
            ray = ray_solution(Q, line, y0=float(rng.uniform(0.5, 2)))
            if ray.blow_up_time is None:
                continue
            rel, drift = ray_deviation(Q, ray)
            assert rel < 1e-6 and drift < 1e-6
            done += 1
            break


def test_repelling_ray_uses_extended_precision():
    from tensoreig.odeflow import transverse_digits
    from tensoreig.tensor_core import linear_change

    # along e1 the transverse direction grows like (1 - t/T)^(-29)
    base = HomogeneousMap(2, 2, {(0, (2, 0)): 1, (1, (1, 1)): 30})
    B = [[F(3, 5), F(-4, 5)], [F(4, 5), F(3, 5)]]
    Q = linear_change(base, B)
    ray = ray_solution(Q, [F(3, 5), F(-4, 5)])
    assert ray.blow_up_time == 1
    assert transverse_digits(Q, ray) == pytest.approx(29.0)
    rel, drift = ray_deviation(Q, ray)
    assert rel < 1e-6 and drift < 1e-6
