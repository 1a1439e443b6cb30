"""Three-layer feedforward network: input -> one hidden layer -> linear output.

forward computes W2 @ act(W1 @ x + b1) + b2. The Jacobian is the analytic
derivative of the model outputs with respect to all parameters under a
fixed flattening order: W1 row-major, b1, W2 row-major, b2. With residual
r = output - target, the gradient of 0.5 * SSE equals J^T r under that
same flattening.

The identity hidden activation exists as a test fixture: it makes the
model a product of linear maps, so damped Gauss-Newton training can be
checked against closed-form least squares.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError

_SERIAL_FORMAT = "crudecast-network"
_SERIAL_VERSION = 1


def _logistic(x):
    return 1.0 / (1.0 + np.exp(-x))


# name -> (activation, derivative as a function of the pre-activation)
ACTIVATIONS = {
    "tanh": (np.tanh, lambda a: 1.0 - np.tanh(a) ** 2),
    "logistic": (_logistic, lambda a: _logistic(a) * (1.0 - _logistic(a))),
    "identity": (lambda a: a, lambda a: np.ones_like(a)),
}


@dataclass(frozen=True)
class Layout:
    n_inputs: int
    n_hidden: int
    n_outputs: int = 1
    hidden_activation: str = "tanh"
    output_activation: str = "linear"

    def __post_init__(self):
        for name, v in (("n_inputs", self.n_inputs), ("n_hidden", self.n_hidden), ("n_outputs", self.n_outputs)):
            if v < 1:
                raise DataError(f"layout {name} must be >= 1, got {v}")
        if self.hidden_activation not in ACTIVATIONS:
            raise DataError(
                f"unknown hidden activation {self.hidden_activation!r}, "
                f"expected one of {sorted(ACTIVATIONS)}"
            )
        if self.output_activation != "linear":
            raise DataError("only linear output activation is supported")

    @property
    def n_params(self) -> int:
        return (self.n_inputs + 1) * self.n_hidden + (self.n_hidden + 1) * self.n_outputs

    def to_dict(self) -> dict:
        return {
            "n_inputs": self.n_inputs,
            "n_hidden": self.n_hidden,
            "n_outputs": self.n_outputs,
            "hidden_activation": self.hidden_activation,
            "output_activation": self.output_activation,
        }


@dataclass(frozen=True)
class Network:
    layout: Layout
    W1: np.ndarray  # (n_hidden, n_inputs)
    b1: np.ndarray  # (n_hidden,)
    W2: np.ndarray  # (n_outputs, n_hidden)
    b2: np.ndarray  # (n_outputs,)

    def __post_init__(self):
        lay = self.layout
        shapes = {
            "W1": (self.W1, (lay.n_hidden, lay.n_inputs)),
            "b1": (self.b1, (lay.n_hidden,)),
            "W2": (self.W2, (lay.n_outputs, lay.n_hidden)),
            "b2": (self.b2, (lay.n_outputs,)),
        }
        for name, (arr, shape) in shapes.items():
            arr = np.asarray(arr, dtype=np.float64)
            if arr.shape != shape:
                raise DataError(f"{name} has shape {arr.shape}, expected {shape}")
            if not np.all(np.isfinite(arr)):
                raise DataError(f"{name} contains non-finite entries")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def init_network(layout: Layout, seed: int) -> Network:
    """Uniform weights in [-1/sqrt(fan_in), +1/sqrt(fan_in)], zero biases."""
    rng = np.random.default_rng(seed)
    s1 = 1.0 / np.sqrt(layout.n_inputs)
    s2 = 1.0 / np.sqrt(layout.n_hidden)
    return Network(
        layout,
        rng.uniform(-s1, s1, size=(layout.n_hidden, layout.n_inputs)),
        np.zeros(layout.n_hidden),
        rng.uniform(-s2, s2, size=(layout.n_outputs, layout.n_hidden)),
        np.zeros(layout.n_outputs),
    )


def _as_batch(x, n_inputs: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != n_inputs:
        raise DataError(f"input shape {np.shape(x)} incompatible with {n_inputs} inputs")
    return arr, single


def forward(net: Network, x) -> np.ndarray:
    """Evaluate the network; accepts one vector or a batch matrix."""
    X, single = _as_batch(x, net.layout.n_inputs)
    act, _ = ACTIVATIONS[net.layout.hidden_activation]
    H = act(X @ net.W1.T + net.b1)
    out = H @ net.W2.T + net.b2
    return out[0] if single else out


def flatten(net: Network) -> np.ndarray:
    return np.concatenate([net.W1.ravel(), net.b1, net.W2.ravel(), net.b2])


def unflatten(layout: Layout, theta: np.ndarray) -> Network:
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (layout.n_params,):
        raise DataError(f"parameter vector has shape {theta.shape}, expected ({layout.n_params},)")
    i, h, o = layout.n_inputs, layout.n_hidden, layout.n_outputs
    pos = 0
    W1 = theta[pos : pos + h * i].reshape(h, i); pos += h * i
    b1 = theta[pos : pos + h]; pos += h
    W2 = theta[pos : pos + o * h].reshape(o, h); pos += o * h
    b2 = theta[pos : pos + o]
    return Network(layout, W1.copy(), b1.copy(), W2.copy(), b2.copy())


def jacobian(net: Network, X) -> np.ndarray:
    """d(output)/d(theta) for every (sample, output) pair.

    Returns shape (n_samples * n_outputs, n_params); row s * n_outputs + o
    holds the derivatives of output o on sample s.
    """
    Xb, _ = _as_batch(X, net.layout.n_inputs)
    if len(Xb) == 0:
        raise DataError("empty batch")
    act, dact = ACTIVATIONS[net.layout.hidden_activation]
    A = Xb @ net.W1.T + net.b1          # (N, H) pre-activations
    H = act(A)
    D = dact(A)                         # (N, H)
    N = len(Xb)
    n_out = net.layout.n_outputs

    # dout_o/dW1[j,i] = W2[o,j] * D[s,j] * X[s,i]
    jW1 = np.einsum("oj,sj,si->soji", net.W2, D, Xb).reshape(N, n_out, -1)
    jb1 = np.einsum("oj,sj->soj", net.W2, D)
    eye = np.eye(n_out)
    jW2 = np.einsum("op,sj->sopj", eye, H).reshape(N, n_out, -1)
    jb2 = np.broadcast_to(eye, (N, n_out, n_out))
    J = np.concatenate([jW1, jb1, jW2, jb2], axis=2)
    return J.reshape(N * n_out, net.layout.n_params)


def residuals(net: Network, X, y) -> np.ndarray:
    """Flattened (output - target), matching the Jacobian's row order."""
    Xb, _ = _as_batch(X, net.layout.n_inputs)
    Y = np.asarray(y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    if Y.shape != (len(Xb), net.layout.n_outputs):
        raise DataError(f"target shape {np.shape(y)} incompatible with {net.layout.n_outputs} outputs")
    return (forward(net, Xb) - Y).ravel()


def gradient(net: Network, X, y) -> np.ndarray:
    """Gradient of 0.5 * SSE; equals jacobian(net, X).T @ residuals(net, X, y)."""
    Xb, _ = _as_batch(X, net.layout.n_inputs)
    Y = np.asarray(y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    act, dact = ACTIVATIONS[net.layout.hidden_activation]
    A = Xb @ net.W1.T + net.b1
    H = act(A)
    E = (H @ net.W2.T + net.b2) - Y     # (N, O)
    dW2 = E.T @ H
    db2 = E.sum(axis=0)
    G = (E @ net.W2) * dact(A)          # (N, H)
    dW1 = G.T @ Xb
    db1 = G.sum(axis=0)
    return np.concatenate([dW1.ravel(), db1, dW2.ravel(), db2])


def network_to_json(net: Network) -> str:
    """Versioned serialization; exact round trip at full precision."""
    doc = {
        "format": _SERIAL_FORMAT,
        "version": _SERIAL_VERSION,
        "layout": net.layout.to_dict(),
        "params": [float(v) for v in flatten(net)],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def network_from_json(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DataError(f"bad network document: {e}") from e
    if doc.get("format") != _SERIAL_FORMAT:
        raise DataError(f"not a network document (format={doc.get('format')!r})")
    if doc.get("version") != _SERIAL_VERSION:
        raise DataError(f"unsupported network document version {doc.get('version')!r}")
    layout = Layout(**doc["layout"])
    return unflatten(layout, np.array(doc["params"], dtype=np.float64))
