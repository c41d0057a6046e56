"""
Feed-forward networks for the deep learners
A small numpy multilayer perceptron with rectifier hidden layers, a linear
output layer, masked mean-squared-error fitting and the Adam optimizer.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from app.logging.logging_config import get_logger

logger = get_logger(__name__)

RELU = "relu"
LINEAR = "linear"

SeedLike = Union[int, np.random.Generator, np.random.SeedSequence]


@dataclass
class Mlp:
    """Per-layer weights shaped (fan_in, fan_out) and bias vectors"""
    sizes: Tuple[int, ...]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    activations: Tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.sizes) - 1 or len(self.biases) != len(self.weights):
            raise ValueError("layer count does not match sizes")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (self.sizes[i], self.sizes[i + 1]) or b.shape != (self.sizes[i + 1],):
                raise ValueError(f"layer {i} shape does not match sizes {self.sizes}")

    @property
    def input_size(self) -> int:
        return self.sizes[0]

    @property
    def output_size(self) -> int:
        return self.sizes[-1]

    @property
    def parameter_count(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def parameters(self) -> List[np.ndarray]:
        """Weights and biases interleaved layer by layer (W0, b0, W1, b1, ...)."""
        params: List[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            params.extend((w, b))
        return params

    def is_finite(self) -> bool:
        return all(np.isfinite(p).all() for p in self.parameters())


@dataclass
class AdamState:
    """Adam moment estimates, shaped like the network parameters"""
    m: List[np.ndarray]
    v: List[np.ndarray]
    lr: float = 5e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0


def mlp_new(input_size: int, hidden: Sequence[int], output_size: int, seed: SeedLike) -> Mlp:
    """
    Build a network with He-uniform weights and zero biases.

    Args:
        input_size: Number of input features m
        hidden: Hidden layer widths (may be empty for an affine map)
        output_size: Number of outputs
        seed: Integer seed or generator, fully determining the parameters

    Returns:
        Freshly initialized Mlp
    """
    sizes = (int(input_size), *(int(h) for h in hidden), int(output_size))
    if any(size < 1 for size in sizes):
        raise ValueError(f"layer sizes must be at least 1, got {sizes}")

    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    activations = (RELU,) * (len(sizes) - 2) + (LINEAR,)
    return Mlp(sizes=sizes, weights=weights, biases=biases, activations=activations)


def adam_new(net: Mlp, lr: float = 5e-4, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> AdamState:
    if lr <= 0.0:
        raise ValueError(f"learning rate must be positive, got {lr}")
    zeros = [np.zeros_like(p) for p in net.parameters()]
    return AdamState(
        m=zeros,
        v=[np.zeros_like(p) for p in zeros],
        lr=lr,
        beta1=beta1,
        beta2=beta2,
        eps=eps,
    )


def _as_batch(net: Mlp, x: np.ndarray) -> np.ndarray:
    batch = np.atleast_2d(np.asarray(x, dtype=float))
    if batch.ndim != 2 or batch.shape[1] != net.input_size:
        raise ValueError(f"expected input of size {net.input_size}, got shape {np.shape(x)}")
    return batch


def _forward_layers(net: Mlp, batch: np.ndarray) -> List[np.ndarray]:
    # activations[0] is the input, activations[-1] the output
    activations = [batch]
    for w, b, kind in zip(net.weights, net.biases, net.activations):
        z = activations[-1] @ w + b
        activations.append(np.maximum(z, 0.0) if kind == RELU else z)
    return activations


def forward(net: Mlp, x: np.ndarray) -> np.ndarray:
    """Outputs for one input vector (shape (m,)) or a batch (shape (B, m))."""
    single = np.ndim(x) == 1
    out = _forward_layers(net, _as_batch(net, x))[-1]
    return out[0] if single else out


def gradients(
    net: Mlp,
    x: np.ndarray,
    target: np.ndarray,
    mask: Optional[np.ndarray] = None,
) -> Tuple[float, List[np.ndarray]]:
    """
    Masked mean-squared error and its gradient with respect to every parameter.

    The loss is sum(mask * (y - t)^2) / max(sum(mask), 1); masked-out outputs
    contribute nothing to either the loss or the gradient.

    Returns:
        (loss, gradients ordered like Mlp.parameters())
    """
    batch = _as_batch(net, x)
    targets = np.atleast_2d(np.asarray(target, dtype=float))
    if targets.shape != (batch.shape[0], net.output_size):
        raise ValueError(f"expected targets of shape {(batch.shape[0], net.output_size)}, got {targets.shape}")
    weight = np.ones_like(targets) if mask is None else np.broadcast_to(np.asarray(mask, dtype=float), targets.shape)
    count = max(float(weight.sum()), 1.0)

    activations = _forward_layers(net, batch)
    error = (activations[-1] - targets) * weight
    loss = float(np.sum(error * (activations[-1] - targets)) / count)

    grads: List[np.ndarray] = []
    delta = 2.0 * error / count
    for layer in range(len(net.weights) - 1, -1, -1):
        grads.append(delta.sum(axis=0))
        grads.append(activations[layer].T @ delta)
        if layer > 0:
            delta = (delta @ net.weights[layer].T) * (activations[layer] > 0.0)
    grads.reverse()
    return loss, grads


def fit(
    net: Mlp,
    adam: AdamState,
    x: np.ndarray,
    target: np.ndarray,
    mask: Optional[np.ndarray] = None,
) -> float:
    """
    One Adam step on the masked squared error of a sample or a batch.

    Args:
        net: Network updated in place
        adam: Optimizer state updated in place
        x: Input vector or (B, m) batch
        target: Output-sized target vector or (B, width) batch
        mask: Optional per-output flags; only flagged outputs are trained

    Returns:
        Loss before the step
    """
    x = np.asarray(x, dtype=float)
    target = np.asarray(target, dtype=float)
    if not (np.isfinite(x).all() and np.isfinite(target).all()):
        raise ValueError("non-finite input")
    if mask is not None and not np.any(mask):
        return 0.0

    loss, grads = gradients(net, x, target, mask)

    adam.step += 1
    for param, grad, m, v in zip(net.parameters(), grads, adam.m, adam.v):
        m[...] = adam.beta1 * m + (1.0 - adam.beta1) * grad
        v[...] = adam.beta2 * v + (1.0 - adam.beta2) * grad ** 2
        m_hat = m / (1.0 - adam.beta1 ** adam.step)
        v_hat = v / (1.0 - adam.beta2 ** adam.step)
        param -= adam.lr * m_hat / (np.sqrt(v_hat) + adam.eps)

    if not net.is_finite():
        logger.error(f"Non-finite parameters after Adam step {adam.step} (loss {loss})")
        raise FloatingPointError("network parameters became non-finite")
    return loss


def gradient_check(
    net: Mlp,
    x: np.ndarray,
    target: np.ndarray,
    mask: Optional[np.ndarray] = None,
    h: float = 1e-5,
) -> float:
    """
    Largest relative disagreement between backprop and central differences.

    Each parameter entry is perturbed by ±h in place and restored afterwards.
    """
    _, analytic = gradients(net, x, target, mask)
    worst = 0.0
    for param, grad in zip(net.parameters(), analytic):
        flat = param.reshape(-1)
        flat_grad = grad.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + h
            plus, _ = gradients(net, x, target, mask)
            flat[i] = original - h
            minus, _ = gradients(net, x, target, mask)
            flat[i] = original
            numeric = (plus - minus) / (2.0 * h)
            error = abs(flat_grad[i] - numeric) / max(abs(flat_grad[i]) + abs(numeric), 1e-8)
            worst = max(worst, error)
    return worst


def copy_parameters(src: Mlp, dst: Mlp) -> None:
    """Overwrite dst's parameters with src's (bitwise)."""
    if src.sizes != dst.sizes or src.activations != dst.activations:
        raise ValueError("architecture mismatch")
    if src is dst:
        return
    for source, destination in zip(src.parameters(), dst.parameters()):
        np.copyto(destination, source)


def clone(net: Mlp) -> Mlp:
    return Mlp(
        sizes=net.sizes,
        weights=[w.copy() for w in net.weights],
        biases=[b.copy() for b in net.biases],
        activations=net.activations,
    )
