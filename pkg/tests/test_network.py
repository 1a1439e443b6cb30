import numpy as np
import pytest

from crudecast.errors import DataError
from crudecast.network import (
    Layout,
    Network,
    flatten,
    forward,
    gradient,
    init_network,
    jacobian,
    network_from_json,
    network_to_json,
    residuals,
    unflatten,
)


def fd_jacobian(net, X, eps=1e-6):
    theta = flatten(net)
    out0 = forward(net, X).ravel()
    J = np.zeros((out0.size, theta.size))
    for p in range(theta.size):
        tp, tm = theta.copy(), theta.copy()
        tp[p] += eps
        tm[p] -= eps
        fp = forward(unflatten(net.layout, tp), X).ravel()
        fm = forward(unflatten(net.layout, tm), X).ravel()
        J[:, p] = (fp - fm) / (2 * eps)
    return J


def random_net(rng, n_in=None, n_hid=None, n_out=None, activation=None):
    lay = Layout(
        n_in or int(rng.integers(1, 8)),
        n_hid or int(rng.integers(1, 8)),
        n_out or int(rng.integers(1, 4)),
        activation or rng.choice(["tanh", "logistic"]),
    )
    net = init_network(lay, int(rng.integers(0, 10_000)))
    # random biases too, so derivatives are exercised off the origin
    theta = flatten(net) + 0.3 * rng.standard_normal(lay.n_params)
    return unflatten(lay, theta)


class TestLayout:
    def test_validation(self):
        with pytest.raises(DataError):
            Layout(0, 3, 1)
        with pytest.raises(DataError):
            Layout(3, 3, 1, hidden_activation="relu")
        with pytest.raises(DataError):
            Layout(3, 3, 1, output_activation="tanh")

    def test_param_count(self):
        lay = Layout(13, 8, 1)
        assert lay.n_params == 13 * 8 + 8 + 8 + 1


class TestInit:
    def test_deterministic(self):
        lay = Layout(5, 4, 2)
        a, b = init_network(lay, 9), init_network(lay, 9)
        np.testing.assert_array_equal(flatten(a), flatten(b))
        c = init_network(lay, 10)
        assert not np.array_equal(flatten(a), flatten(c))

    def test_fan_in_bound(self):
        lay = Layout(4, 6, 2)
        net = init_network(lay, 0)
        assert np.max(np.abs(net.W1)) <= 0.5          # 1/sqrt(4)
        assert np.max(np.abs(net.W2)) <= 1.0 / np.sqrt(6)
        np.testing.assert_array_equal(net.b1, 0.0)
        np.testing.assert_array_equal(net.b2, 0.0)


class TestForward:
    def test_zero_weights_give_bias(self):
        lay = Layout(3, 4, 2)
        net = Network(lay, np.zeros((4, 3)), np.zeros(4), np.zeros((2, 4)), np.array([1.5, -2.0]))
        np.testing.assert_array_equal(forward(net, np.zeros(3)), [1.5, -2.0])

    def test_tanh_zero_input(self):
        lay = Layout(1, 1, 1)
        net = Network(lay, np.array([[1.0]]), np.zeros(1), np.array([[1.0]]), np.zeros(1))
        assert forward(net, np.array([0.0]))[0] == 0.0

    def test_hand_evaluated(self):
        # 2 * tanh(1) + 0.5 with tanh(1) = 0.761594...
        lay = Layout(1, 1, 1)
        net = Network(lay, np.array([[1.0]]), np.zeros(1), np.array([[2.0]]), np.array([0.5]))
        out = forward(net, np.array([1.0]))[0]
        np.testing.assert_allclose(out, 2.0 * np.tanh(1.0) + 0.5, atol=1e-12)
        np.testing.assert_allclose(out, 2.023188, atol=1e-6)

    def test_dimension_mismatch(self):
        net = init_network(Layout(3, 2, 1), 0)
        with pytest.raises(DataError):
            forward(net, np.zeros(4))

    def test_batch_matches_single(self):
        rng = np.random.default_rng(8)
        net = random_net(rng, n_in=4, n_out=2)
        X = rng.standard_normal((6, 4))
        batch = forward(net, X)
        for i in range(6):
            np.testing.assert_allclose(batch[i], forward(net, X[i]), atol=1e-14)


class TestJacobian:
    def test_matches_finite_differences(self):
        rng = np.random.default_rng(123)
        for _ in range(8):
            net = random_net(rng)
            X = rng.standard_normal((int(rng.integers(1, 6)), net.layout.n_inputs))
            J = jacobian(net, X)
            Jfd = fd_jacobian(net, X)
            denom = np.maximum(np.abs(Jfd), 1e-4)
            assert np.max(np.abs(J - Jfd) / denom) < 1e-6

    def test_identity_activation_w2_block(self):
        # with a linear hidden layer the W2 derivatives are the hidden values
        lay = Layout(3, 2, 1, hidden_activation="identity")
        net = init_network(lay, 4)
        X = np.random.default_rng(5).standard_normal((4, 3))
        hidden = X @ net.W1.T + net.b1
        J = jacobian(net, X)
        w2_cols = slice(3 * 2 + 2, 3 * 2 + 2 + 2)
        np.testing.assert_allclose(J[:, w2_cols], hidden, atol=1e-12)

    def test_zero_input_sample(self):
        lay = Layout(3, 4, 1)
        net = init_network(lay, 1)
        J = jacobian(net, np.zeros((1, 3)))
        np.testing.assert_array_equal(J[0, : 3 * 4], 0.0)

    def test_empty_batch(self):
        net = init_network(Layout(2, 2, 1), 0)
        with pytest.raises(DataError):
            jacobian(net, np.zeros((0, 2)))


class TestGradient:
    def test_zero_residuals(self):
        rng = np.random.default_rng(2)
        net = random_net(rng, n_out=1)
        X = rng.standard_normal((5, net.layout.n_inputs))
        y = forward(net, X)
        np.testing.assert_array_equal(gradient(net, X, y), 0.0)

    def test_consistent_with_jacobian(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            net = random_net(rng)
            X = rng.standard_normal((4, net.layout.n_inputs))
            y = rng.standard_normal((4, net.layout.n_outputs))
            g = gradient(net, X, y)
            g_ref = jacobian(net, X).T @ residuals(net, X, y)
            assert np.max(np.abs(g - g_ref)) < 1e-12

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(4)
        net = random_net(rng, n_in=3, n_hid=4, n_out=2)
        X = rng.standard_normal((6, 3))
        y = rng.standard_normal((6, 2))
        theta = flatten(net)
        eps = 1e-6
        g_fd = np.zeros_like(theta)
        for p in range(theta.size):
            tp, tm = theta.copy(), theta.copy()
            tp[p] += eps
            tm[p] -= eps
            lp = 0.5 * np.sum(residuals(unflatten(net.layout, tp), X, y) ** 2)
            lm = 0.5 * np.sum(residuals(unflatten(net.layout, tm), X, y) ** 2)
            g_fd[p] = (lp - lm) / (2 * eps)
        g = gradient(net, X, y)
        denom = np.maximum(np.abs(g_fd), 1e-4)
        assert np.max(np.abs(g - g_fd) / denom) < 1e-6


class TestStructure:
    def test_flatten_roundtrip_exact(self):
        rng = np.random.default_rng(6)
        net = random_net(rng)
        again = unflatten(net.layout, flatten(net))
        for name in ("W1", "b1", "W2", "b2"):
            np.testing.assert_array_equal(getattr(again, name), getattr(net, name))

    def test_unflatten_wrong_size(self):
        with pytest.raises(DataError):
            unflatten(Layout(2, 2, 1), np.zeros(5))

    def test_tanh_odd_symmetry(self):
        lay = Layout(3, 5, 2)
        net = init_network(lay, 11)     # zero biases by construction
        x = np.random.default_rng(12).standard_normal(3)
        np.testing.assert_allclose(forward(net, -x), -forward(net, x), atol=1e-12)

    def test_lipschitz_bound(self):
        rng = np.random.default_rng(13)
        net = random_net(rng, n_out=1, activation="tanh")
        bound = np.linalg.norm(net.W2, 2) * np.linalg.norm(net.W1, 2)  # max |tanh'| = 1
        for _ in range(50):
            a = rng.standard_normal(net.layout.n_inputs)
            b = rng.standard_normal(net.layout.n_inputs)
            lhs = abs(forward(net, a)[0] - forward(net, b)[0])
            assert lhs <= bound * np.linalg.norm(a - b) + 1e-12

    def test_nonfinite_rejected(self):
        lay = Layout(2, 2, 1)
        with pytest.raises(DataError, match="non-finite"):
            Network(lay, np.full((2, 2), np.nan), np.zeros(2), np.zeros((1, 2)), np.zeros(1))


class TestSerialization:
    def test_roundtrip_exact(self):
        rng = np.random.default_rng(14)
        net = random_net(rng)
        again = network_from_json(network_to_json(net))
        assert again.layout == net.layout
        np.testing.assert_array_equal(flatten(again), flatten(net))

    def test_rejects_other_documents(self):
        with pytest.raises(DataError):
            network_from_json('{"format": "something-else"}')
        with pytest.raises(DataError):
            network_from_json("not json")
