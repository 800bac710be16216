from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensoreig.tensor_core import (
    Form, HomogeneousMap, NotAGradient, SymmetricTensorView, coefficient_dimension, evaluate,
    gradient_diagnostics, gradient_map, jacobian, linear_change, multi_indices, polarize_apply, potential,
)

from conftest import random_form, random_map

F = Fraction
seeds = st.integers(0, 2**32 - 1)


def test_evaluate_examples(squares, xyz):
    assert list(evaluate(squares, [1, 2])) == [1, 4]
    assert list(evaluate(gradient_map(xyz), [1, 1, 1])) == [F(1, 3)] * 3
    assert not np.any(evaluate(squares, [0, 0]))


def test_evaluate_exact_type(xyz):
    out = evaluate(gradient_map(xyz), [F(1, 2), F(1, 3), 2])
    assert all(isinstance(v, Fraction) for v in out)
    assert out[0] == F(1, 3) * F(1, 3) * 2


def test_evaluate_dimension_mismatch(squares):
    with pytest.raises(ValueError):
        evaluate(squares, [1, 2, 3])


def test_coefficient_dimension():
    assert coefficient_dimension(3, 2) == 18
    assert coefficient_dimension(2, 3) == 8
    assert len(multi_indices(3, 3)) == 10


def test_map_invariants():
    with pytest.raises(ValueError):
        HomogeneousMap(2, 2, {(0, (1, 0)): 1})
    with pytest.raises(ValueError):
        HomogeneousMap(2, 2, {(2, (1, 1)): 1})
    with pytest.raises(ValueError):
        HomogeneousMap(2, 2, {(0, (1, 1)): 0})


def test_polarize_examples(squares, xyz):
    assert list(polarize_apply(squares, [1, 0], [0, 1])) == [0, 0]
    Q = gradient_map(xyz)
    # T(x, x) = Q(x) forces T(e2, e3) = Q1 coefficient / 2
    assert list(polarize_apply(Q, [0, 1, 0], [0, 0, 1])) == [F(1, 6), 0, 0]
    x = [F(2), F(-1), F(3, 2)]
    assert list(polarize_apply(Q, x, x)) == list(evaluate(Q, x))


def test_tensor_view(xyz):
    T = SymmetricTensorView(gradient_map(xyz))
    assert T.order == 2
    D = T.dense()
    assert D.shape == (3, 3, 3)
    assert np.allclose(D, D.transpose(0, 2, 1))
    x = np.array([0.3, -1.2, 0.7])
    assert np.allclose(np.einsum("jab,a,b->j", D, x, x), evaluate(gradient_map(xyz).to_float(), x))


def test_jacobian_examples(squares, xyz):
    assert np.array_equal(jacobian(squares, [1, 2]), np.array([[2, 0], [0, 4]], dtype=object))
    c = np.ones(3) / np.sqrt(3)
    J = jacobian(gradient_map(xyz).to_float(), c)
    assert np.allclose(J, (np.ones((3, 3)) - np.eye(3)) / (3 * np.sqrt(3)))


def test_gradient_map_examples(xyz, sphere_sum):
    Q = gradient_map(Form(2, 3, {(3, 0): 1}))
    assert Q == HomogeneousMap(2, 2, {(0, (2, 0)): 1})
    assert gradient_map(xyz) == HomogeneousMap(3, 2, {(0, (0, 1, 1)): F(1, 3), (1, (1, 0, 1)): F(1, 3),
                                                       (2, (1, 1, 0)): F(1, 3)})
    Q = gradient_map(sphere_sum)
    x = np.array([F(1), F(-2), F(5, 3)])
    s, r2 = sum(x), sum(v * v for v in x)
    assert list(evaluate(Q, x)) == [(2 * s * v + r2) / 3 for v in x]


def test_potential_examples(xyz):
    assert potential(gradient_map(xyz)) == xyz
    q = Form(2, 3, {(3, 0): 1})
    assert potential(gradient_map(q)) == q
    with pytest.raises(NotAGradient):
        potential(HomogeneousMap(2, 2, {(0, (0, 2)): 1, (1, (2, 0)): 1}))


def test_diagnostics_examples(xyz, sphere_sum):
    d = gradient_diagnostics(gradient_map(xyz))
    assert (d.is_gradient, d.is_traceless) == (True, True)
    d = gradient_diagnostics(gradient_map(sphere_sum))
    assert (d.is_gradient, d.is_traceless) == (True, False)
    d = gradient_diagnostics(HomogeneousMap(2, 2, {(0, (0, 2)): 1, (1, (2, 0)): 1}))
    assert (d.is_gradient, d.is_traceless) == (False, True)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 4))
def test_euler_identity_exact(seed, n, m):
    rng = np.random.default_rng(seed)
    Q = random_map(rng, n, m)
    x = [F(int(v), 7) for v in rng.integers(-20, 20, n)]
    assert list(jacobian(Q, x).dot(np.array(x, dtype=object))) == [m * v for v in evaluate(Q, x)]


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_euler_identity_float(seed, n, m):
    rng = np.random.default_rng(seed)
    Q = random_map(rng, n, m, "float")
    x = rng.standard_normal(n)
    lhs, rhs = jacobian(Q, x) @ x, m * evaluate(Q, x)
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * max(1.0, np.linalg.norm(rhs))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 4), st.fractions(-5, 5, max_denominator=9))
def test_homogeneity(seed, n, m, a):
    rng = np.random.default_rng(seed)
    Q = random_map(rng, n, m)
    x = [F(int(v), 3) for v in rng.integers(-9, 9, n)]
    assert list(evaluate(Q, [a * v for v in x])) == [a**m * v for v in evaluate(Q, x)]


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(2, 3))
def test_polarization_symmetry(seed, n, m):
    rng = np.random.default_rng(seed)
    Q = random_map(rng, n, m)
    args = [[F(int(v), 5) for v in rng.integers(-9, 9, n)] for _ in range(m)]
    base = list(polarize_apply(Q, *args))
    perm = rng.permutation(m)
    assert list(polarize_apply(Q, *[args[i] for i in perm])) == base
    # linear in the first slot
    u = [F(int(v), 2) for v in rng.integers(-9, 9, n)]
    lhs = polarize_apply(Q, [a + 3 * b for a, b in zip(args[0], u)], *args[1:])
    rhs = polarize_apply(Q, *args) + 3 * polarize_apply(Q, u, *args[1:])
    assert list(lhs) == list(rhs)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(2, 5))
def test_round_trip_and_gradient_criterion(seed, n, d):
    q = random_form(np.random.default_rng(seed), n, d)
    Q = gradient_map(q)
    assert gradient_diagnostics(Q).is_gradient
    assert potential(Q) == q


def test_generic_map_is_not_gradient():
    Q = random_map(np.random.default_rng(5), 3, 2)
    assert not gradient_diagnostics(Q).is_gradient


def test_linear_change_preserves_values(xyz):
    rng = np.random.default_rng(2)
    B, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    Q = gradient_map(xyz).to_float()
    R = linear_change(Q, B)
    x = rng.standard_normal(3)
    # R(x) = B^{-1} Q(B x)
    assert np.allclose(R(x), B.T @ Q(B @ x))
