"""Feed-forward sigmoid network trained by plain per-sample backpropagation.

Notation follows the classic textbook presentation: ``v``/``v0`` are the
weights and biases into a hidden layer, ``w``/``w0`` the weights and biases
into the output layer.  Every layer is stored the same way, as a weight
matrix of shape ``(units below, units above)`` and a bias vector.

The training loop itself lives in a numba kernel over a flat parameter
vector so that half a million epochs fit in a few seconds.  ``forward`` and
``backprop_deltas`` are the numpy reference versions of the same equations
and are what the tests check against finite differences.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadShape, CorruptModel, NonFiniteLoss, ShapeMismatch, VersionMismatch

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


MODEL_MAGIC = "mutascan-model"
MODEL_VERSION = 1


class Activation(str, enum.Enum):
    LOGISTIC_SIGMOID = "logistic"


def sigmoid(u):
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    pos = u >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-u[pos]))
    e = np.exp(u[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def sigmoid_prime(u):
    s = sigmoid(u)
    return s * (1.0 - s)


@dataclass
class Network:
    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activation: Activation = Activation.LOGISTIC_SIGMOID

    def __post_init__(self):
        self.layer_sizes = tuple(int(s) for s in self.layer_sizes)
        _check_sizes(self.layer_sizes)
        if len(self.weights) != len(self.layer_sizes) - 1 or len(self.biases) != len(self.weights):
            raise BadShape("need one weight matrix and one bias vector per non-input layer")
        for lo, hi, w, b in zip(self.layer_sizes, self.layer_sizes[1:], self.weights, self.biases):
            if w.shape != (lo, hi) or b.shape != (hi,):
                raise BadShape(f"layer {lo}->{hi} has weights {w.shape} and bias {b.shape}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise BadShape("non-finite parameter")

    @property
    def n_inputs(self) -> int:
        return self.layer_sizes[0]

    @property
    def n_outputs(self) -> int:
        return self.layer_sizes[-1]

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def to_vector(self) -> np.ndarray:
        """All parameters layer by layer: weights row-major, then biases."""
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts).astype(np.float64)

    @classmethod
    def from_vector(cls, layer_sizes, vec) -> "Network":
        layer_sizes = tuple(int(s) for s in layer_sizes)
        _check_sizes(layer_sizes)
        vec = np.asarray(vec, dtype=np.float64)
        if vec.size != _param_count(layer_sizes):
            raise BadShape(f"expected {_param_count(layer_sizes)} parameters, got {vec.size}")
        weights, biases = [], []
        pos = 0
        for lo, hi in zip(layer_sizes, layer_sizes[1:]):
            weights.append(vec[pos : pos + lo * hi].reshape(lo, hi).copy())
            pos += lo * hi
            biases.append(vec[pos : pos + hi].copy())
            pos += hi
        return cls(layer_sizes, weights, biases)

    def copy(self) -> "Network":
        return Network.from_vector(self.layer_sizes, self.to_vector())

    def same_parameters(self, other: "Network") -> bool:
        return self.layer_sizes == other.layer_sizes and np.array_equal(
            self.to_vector(), other.to_vector()
        )


def _check_sizes(sizes):
    if len(sizes) < 3:
        raise BadShape(f"need input, at least one hidden and an output layer, got {list(sizes)}")
    if any(s < 1 for s in sizes):
        raise BadShape(f"layer sizes must be positive, got {list(sizes)}")


def _param_count(sizes):
    return sum(lo * hi + hi for lo, hi in zip(sizes, sizes[1:]))


def init_network(layer_sizes, seed: int = 0, init_range: float = 0.5) -> Network:
    """Uniform(-init_range, init_range) parameters from a seeded generator."""
    layer_sizes = tuple(int(s) for s in layer_sizes)
    _check_sizes(layer_sizes)
    if init_range < 0:
        raise BadShape("init_range must be non-negative")
    rng = np.random.default_rng(seed)
    vec = rng.uniform(-init_range, init_range, size=_param_count(layer_sizes))
    if init_range == 0:
        vec = np.zeros_like(vec)
    return Network.from_vector(layer_sizes, vec)


@dataclass
class ForwardPass:
    output: np.ndarray
    activations: list[np.ndarray]  # input first, output last
    net_inputs: list[np.ndarray]  # one per non-input layer


def forward(net: Network, x) -> ForwardPass:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (net.n_inputs,):
        raise ShapeMismatch(f"input has shape {x.shape}, network expects ({net.n_inputs},)")
    if not np.all(np.isfinite(x)):
        raise ShapeMismatch("input contains non-finite values")
    acts = [x]
    nets = []
    for w, b in zip(net.weights, net.biases):
        z_in = b + acts[-1] @ w
        nets.append(z_in)
        acts.append(sigmoid(z_in))
    return ForwardPass(acts[-1], acts, nets)


def predict_batch(net: Network, X) -> np.ndarray:
    a = np.asarray(X, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != net.n_inputs:
        raise ShapeMismatch(f"batch has shape {a.shape}, network expects (*, {net.n_inputs})")
    for w, b in zip(net.weights, net.biases):
        a = sigmoid(b + a @ w)
    return a


@dataclass
class Deltas:
    """Parameter corrections, already scaled by the learning rate."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def to_vector(self) -> np.ndarray:
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts)


def backprop_deltas(net: Network, x, t, learning_rate: float = 0.5) -> Deltas:
    t = np.asarray(t, dtype=np.float64)
    if t.shape != (net.n_outputs,):
        raise ShapeMismatch(f"target has shape {t.shape}, network expects ({net.n_outputs},)")
    fp = forward(net, x)
    y = fp.output
    delta = (t - y) * sigmoid_prime(fp.net_inputs[-1])
    dw = [None] * len(net.weights)
    db = [None] * len(net.weights)
    for layer in range(len(net.weights) - 1, -1, -1):
        below = fp.activations[layer]
        dw[layer] = learning_rate * np.outer(below, delta)
        db[layer] = learning_rate * delta
        if layer > 0:
            # error reaching the layer below, through pre-update weights
            delta_in = net.weights[layer] @ delta
            delta = delta_in * sigmoid_prime(fp.net_inputs[layer - 1])
    return Deltas(dw, db)


def apply_deltas(net: Network, deltas: Deltas) -> Network:
    return Network(
        net.layer_sizes,
        [w + d for w, d in zip(net.weights, deltas.weights)],
        [b + d for b, d in zip(net.biases, deltas.biases)],
        net.activation,
    )


def mse(net: Network, X, T) -> float:
    """Mean over examples of the per-output mean squared error."""
    Y = predict_batch(net, X)
    return float(np.mean((np.asarray(T, dtype=np.float64) - Y) ** 2))


# -- training ---------------------------------------------------------------


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.5
    mse_goal: float = 1e-7
    max_epochs: int = 500_000
    seed: int = 0
    init_range: float = 0.5

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if not (self.mse_goal > 0 and math.isfinite(self.mse_goal)):
            raise ValueError("mse_goal must be a positive finite number")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.init_range < 0:
            raise ValueError("init_range must be non-negative")


@dataclass
class TrainReport:
    epochs_run: int
    final_mse: float
    goal_met: bool
    mse_history: list[float] = field(repr=False)
    layer_sizes: tuple[int, ...] = ()
    learning_rate: float = 0.0
    mse_goal: float = 0.0
    max_epochs: int = 0
    seed: int = 0
    init_range: float = 0.0
    n_examples: int = 0

    def history_csv(self) -> str:
        lines = ["epoch,mse"]
        lines += [f"{i},{v!r}" for i, v in enumerate(self.mse_history, start=1)]
        return "\n".join(lines) + "\n"


@njit(cache=True)
def _sig(u):
    if u >= 0.0:
        return 1.0 / (1.0 + math.exp(-u))
    e = math.exp(u)
    return e / (1.0 + e)


@njit(cache=True)
def _forward_flat(params, sizes, w_off, b_off, a_off, acts):
    # acts[a_off[0]:...] already holds the input
    for layer in range(sizes.shape[0] - 1):
        n_in = sizes[layer]
        n_out = sizes[layer + 1]
        lo = a_off[layer]
        hi = a_off[layer + 1]
        wo = w_off[layer]
        bo = b_off[layer]
        for j in range(n_out):
            s = params[bo + j]
            for i in range(n_in):
                s += acts[lo + i] * params[wo + i * n_out + j]
            acts[hi + j] = _sig(s)


@njit(cache=True)
def _train_kernel(params, sizes, X, T, lr, goal, max_epochs, history):
    n_layers = sizes.shape[0] - 1
    w_off = np.zeros(n_layers, dtype=np.int64)
    b_off = np.zeros(n_layers, dtype=np.int64)
    a_off = np.zeros(n_layers + 1, dtype=np.int64)
    pos = 0
    for layer in range(n_layers):
        w_off[layer] = pos
        pos += sizes[layer] * sizes[layer + 1]
        b_off[layer] = pos
        pos += sizes[layer + 1]
    total = 0
    for layer in range(n_layers + 1):
        a_off[layer] = total
        total += sizes[layer]
    acts = np.zeros(total, dtype=np.float64)
    deltas = np.zeros(total, dtype=np.float64)
    n_ex = X.shape[0]
    m = sizes[n_layers]
    out = a_off[n_layers]

    for epoch in range(max_epochs):
        for e in range(n_ex):
            for i in range(sizes[0]):
                acts[i] = X[e, i]
            _forward_flat(params, sizes, w_off, b_off, a_off, acts)
            for k in range(m):
                y = acts[out + k]
                deltas[out + k] = (T[e, k] - y) * y * (1.0 - y)
            # hidden deltas from the pre-update weights
            for layer in range(n_layers - 1, 0, -1):
                n_here = sizes[layer]
                n_up = sizes[layer + 1]
                wo = w_off[layer]
                here = a_off[layer]
                up = a_off[layer + 1]
                for j in range(n_here):
                    s = 0.0
                    for k in range(n_up):
                        s += deltas[up + k] * params[wo + j * n_up + k]
                    z = acts[here + j]
                    deltas[here + j] = s * z * (1.0 - z)
            for layer in range(n_layers):
                n_in = sizes[layer]
                n_out = sizes[layer + 1]
                wo = w_off[layer]
                bo = b_off[layer]
                lo = a_off[layer]
                up = a_off[layer + 1]
                for i in range(n_in):
                    a = acts[lo + i]
                    for j in range(n_out):
                        params[wo + i * n_out + j] += lr * deltas[up + j] * a
                for j in range(n_out):
                    params[bo + j] += lr * deltas[up + j]

        sq = 0.0
        for e in range(n_ex):
            for i in range(sizes[0]):
                acts[i] = X[e, i]
            _forward_flat(params, sizes, w_off, b_off, a_off, acts)
            for k in range(m):
                d = T[e, k] - acts[out + k]
                sq += d * d
        err = sq / (n_ex * m)
        # saturated units can hide overflowed weights behind a finite loss
        for i in range(params.shape[0]):
            if not math.isfinite(params[i]):
                err = math.nan
                break
        history[epoch] = err
        if not math.isfinite(err):
            return epoch + 1
        if err <= goal:
            return epoch + 1
    return max_epochs


def _as_arrays(net, examples):
    X = np.ascontiguousarray([np.asarray(ex[0], dtype=np.float64) for ex in examples])
    T = np.ascontiguousarray([np.asarray(ex[1], dtype=np.float64) for ex in examples])
    if X.ndim != 2 or X.shape[1] != net.n_inputs:
        raise ShapeMismatch(f"features have shape {X.shape}, network expects (*, {net.n_inputs})")
    if T.ndim != 2 or T.shape[1] != net.n_outputs:
        raise ShapeMismatch(f"targets have shape {T.shape}, network expects (*, {net.n_outputs})")
    if not (np.isfinite(X).all() and np.isfinite(T).all()):
        raise ShapeMismatch("features and targets must be finite")
    return X, T


def train(net: Network, examples, cfg: TrainConfig = TrainConfig()) -> tuple[Network, TrainReport]:
    """Sequential per-example gradient descent until ``cfg.mse_goal`` or ``cfg.max_epochs``.

    ``examples`` is a sequence of ``(features, target)`` pairs, or objects with
    ``features`` and ``target`` attributes; they are visited in the given
    order every epoch.  The input network is left untouched.
    """
    pairs = [
        (ex.features, ex.target) if hasattr(ex, "features") else (ex[0], ex[1])
        for ex in examples
    ]
    if not pairs:
        raise ValueError("no training examples")
    X, T = _as_arrays(net, pairs)
    params = net.to_vector().copy()
    history = np.zeros(cfg.max_epochs, dtype=np.float64)
    epochs = int(
        _train_kernel(
            params,
            np.asarray(net.layer_sizes, dtype=np.int64),
            X,
            T,
            float(cfg.learning_rate),
            float(cfg.mse_goal),
            int(cfg.max_epochs),
            history,
        )
    )
    hist = history[:epochs].tolist()
    final = hist[-1]
    if not math.isfinite(final):
        raise NonFiniteLoss(f"training diverged at epoch {epochs}")
    report = TrainReport(
        epochs_run=epochs,
        final_mse=final,
        goal_met=final <= cfg.mse_goal,
        mse_history=hist,
        layer_sizes=net.layer_sizes,
        learning_rate=cfg.learning_rate,
        mse_goal=cfg.mse_goal,
        max_epochs=cfg.max_epochs,
        seed=cfg.seed,
        init_range=cfg.init_range,
        n_examples=len(pairs),
    )
    return Network.from_vector(net.layer_sizes, params), report


# -- model files ------------------------------------------------------------


def dumps_model(net: Network) -> str:
    lines = [f"{MODEL_MAGIC} {MODEL_VERSION} {net.activation.value}"]
    lines.append(",".join(str(s) for s in net.layer_sizes))
    lines += [format(v, ".17g") for v in net.to_vector()]
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> Network:
    lines = text.splitlines()
    if len(lines) < 2:
        raise CorruptModel("model file is truncated")
    header = lines[0].split()
    if len(header) != 3 or header[0] != MODEL_MAGIC:
        raise CorruptModel(f"not a model file (header {lines[0]!r})")
    if header[1] != str(MODEL_VERSION):
        raise VersionMismatch(f"model version {header[1]!r}, expected {MODEL_VERSION}")
    try:
        activation = Activation(header[2])
        sizes = tuple(int(s) for s in lines[1].split(","))
        values = [float(v) for v in lines[2:] if v.strip()]
    except ValueError as exc:
        raise CorruptModel(str(exc)) from exc
    try:
        _check_sizes(sizes)
    except BadShape as exc:
        raise CorruptModel(str(exc)) from exc
    if len(values) != _param_count(sizes):
        raise CorruptModel(f"expected {_param_count(sizes)} parameters, found {len(values)}")
    try:
        net = Network.from_vector(sizes, values)
    except BadShape as exc:
        raise CorruptModel(str(exc)) from exc
    net.activation = activation
    return net


def save_model(net: Network, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_model(net))


def load_model(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())
