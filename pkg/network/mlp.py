"""
Perceptrón multicapa en numpy: ReLU en las capas ocultas, softmax de 16
clases a la salida, entropía cruzada con decaimiento de pesos opcional,
retropropagación analítica y optimizador Adam.

Convención: W de cada capa tiene forma (salida, entrada) y la capa
calcula g(W·x + b).
"""
from dataclasses import dataclass, field, asdict

import numpy as np
import pandas as pd

from config.config import config
from toric.geometry import LogicalLabel, N_LOGICAL_CLASSES
from toric.noise import make_rng
from utils.exceptions import ArgumentError
from utils.logger import logger
from utils.time_utils import Stopwatch

LOG_FLOOR = 1e-30

# Flujos del generador de entrenamiento
_STREAM_SPLIT = 0
_STREAM_INIT = 1
_STREAM_BATCH = 2


@dataclass
class TrainConfig:
    """Hiperparámetros del entrenamiento"""
    n_iterations: int = config.N_ITERATIONS
    learning_rate: float = config.LEARNING_RATE
    batch_size: int = config.BATCH_SIZE
    weight_decay: float = config.WEIGHT_DECAY
    init_width: float = config.INIT_WIDTH
    seed: int = 0
    validation_fraction: float = config.VALIDATION_FRACTION
    validation_interval: int = config.VALIDATION_INTERVAL
    curve_sample_size: int = config.CURVE_SAMPLE_SIZE

    def __post_init__(self):
        errors = []
        if self.n_iterations < 0:
            errors.append(f"n_iterations={self.n_iterations} negativo")
        if self.learning_rate <= 0:
            errors.append(f"learning_rate={self.learning_rate} debe ser positivo")
        if self.batch_size <= 0:
            errors.append(f"batch_size={self.batch_size} debe ser positivo")
        if self.weight_decay < 0:
            errors.append(f"weight_decay={self.weight_decay} negativo")
        if self.init_width <= 0:
            errors.append(f"init_width={self.init_width} debe ser positivo")
        if not 0.0 <= self.validation_fraction < 1.0:
            errors.append(f"validation_fraction={self.validation_fraction} fuera de [0, 1)")
        if self.validation_interval <= 0:
            errors.append(f"validation_interval={self.validation_interval} debe ser positivo")
        if self.curve_sample_size <= 0:
            errors.append(f"curve_sample_size={self.curve_sample_size} debe ser positivo")
        if errors:
            raise ArgumentError("Configuración de entrenamiento inválida: " + "; ".join(errors))

    def to_dict(self):
        return asdict(self)


class NetworkParams:
    """Pesos y sesgos θ de la red; layer_sizes = [2L², ocultas..., 16]"""

    def __init__(self, layer_sizes, weights, biases):
        self.layer_sizes = [int(size) for size in layer_sizes]
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]
        self._check_shapes()

    def _check_shapes(self):
        if len(self.layer_sizes) < 2 or any(size <= 0 for size in self.layer_sizes):
            raise ArgumentError(f"Tamaños de capa inválidos: {self.layer_sizes}")
        if self.layer_sizes[-1] != N_LOGICAL_CLASSES:
            raise ArgumentError(f"La capa de salida debe tener {N_LOGICAL_CLASSES} neuronas")
        n_layers = len(self.layer_sizes) - 1
        if len(self.weights) != n_layers or len(self.biases) != n_layers:
            raise ArgumentError("Número de matrices de pesos incompatible con layer_sizes")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            expected = (self.layer_sizes[i + 1], self.layer_sizes[i])
            if w.shape != expected or b.shape != (expected[0],):
                raise ArgumentError(
                    f"Capa {i}: W {w.shape} y b {b.shape}, se esperaba {expected} y ({expected[0]},)"
                )

    @classmethod
    def zeros(cls, layer_sizes):
        pairs = list(zip(layer_sizes[:-1], layer_sizes[1:]))
        return cls(layer_sizes,
                   [np.zeros((n_out, n_in)) for n_in, n_out in pairs],
                   [np.zeros(n_out) for _, n_out in pairs])

    @classmethod
    def initialize(cls, layer_sizes, init_width, rng):
        """θ ~ Normal(0, init_width) para pesos y sesgos"""
        pairs = list(zip(layer_sizes[:-1], layer_sizes[1:]))
        weights = [rng.normal(0.0, init_width, (n_out, n_in)) for n_in, n_out in pairs]
        biases = [rng.normal(0.0, init_width, n_out) for _, n_out in pairs]
        return cls(layer_sizes, weights, biases)

    @property
    def input_size(self):
        return self.layer_sizes[0]

    @property
    def n_parameters(self):
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def parameters(self):
        """Lista [W₀, b₀, W₁, b₁, ...] (vistas, no copias)"""
        result = []
        for w, b in zip(self.weights, self.biases):
            result.extend([w, b])
        return result

    def squared_norm(self):
        return float(sum(np.sum(param * param) for param in self.parameters()))

    def copy(self):
        return NetworkParams(self.layer_sizes,
                             [w.copy() for w in self.weights],
                             [b.copy() for b in self.biases])

    def __eq__(self, other):
        if not isinstance(other, NetworkParams):
            return NotImplemented
        return (self.layer_sizes == other.layer_sizes
                and all(np.array_equal(a, b) for a, b in zip(self.parameters(), other.parameters())))

    def __repr__(self):
        return f"NetworkParams(layer_sizes={self.layer_sizes})"


# ==================== PROPAGACIÓN ====================

def relu(x):
    return np.maximum(0.0, x)


def softmax(logits):
    """Softmax por filas, estable ante desplazamientos de los logits"""
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exps = np.exp(shifted)
    return exps / np.sum(exps, axis=-1, keepdims=True)


def _as_batch(net, x):
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    if batch.ndim != 2 or batch.shape[1] != net.input_size:
        raise ArgumentError(f"Entrada de forma {x.shape}; la red espera {net.input_size} componentes")
    return batch, single


def _forward_layers(net, batch):
    """Activaciones de cada capa (entrada incluida) y logits finales"""
    activations = [batch]
    current = batch
    for w, b in zip(net.weights[:-1], net.biases[:-1]):
        current = relu(current @ w.T + b)
        activations.append(current)
    logits = current @ net.weights[-1].T + net.biases[-1]
    return activations, logits


def forward(net, x):
    """Probabilidades de las 16 clases para un vector o un lote de filas"""
    batch, single = _as_batch(net, x)
    _, logits = _forward_layers(net, batch)
    probabilities = softmax(logits)
    return probabilities[0] if single else probabilities


def _check_labels(labels, n):
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if len(labels) != n or n == 0:
        raise ArgumentError(f"Se esperaban {n} etiquetas (lote no vacío), recibidas {len(labels)}")
    if labels.min() < 0 or labels.max() >= N_LOGICAL_CLASSES:
        raise ArgumentError("Etiquetas fuera de [0, 16)")
    return labels


def loss(net, x, labels, weight_decay=0.0):
    """−(1/B)·Σ ln y_label + λ‖θ‖²"""
    batch, _ = _as_batch(net, x)
    labels = _check_labels(labels, len(batch))
    probabilities = forward(net, batch)
    picked = np.maximum(probabilities[np.arange(len(batch)), labels], LOG_FLOOR)
    value = -float(np.mean(np.log(picked)))
    if weight_decay:
        value += weight_decay * net.squared_norm()
    return value


def gradient(net, x, labels, weight_decay=0.0):
    """
    Gradiente analítico de `loss`.

    Returns:
        tuple: (lista de dW, lista de db) con las formas de la red
    """
    batch, _ = _as_batch(net, x)
    labels = _check_labels(labels, len(batch))
    activations, logits = _forward_layers(net, batch)

    delta = softmax(logits)
    delta[np.arange(len(batch)), labels] -= 1.0
    delta /= len(batch)

    grad_w = [None] * len(net.weights)
    grad_b = [None] * len(net.biases)
    for layer in range(len(net.weights) - 1, -1, -1):
        grad_w[layer] = delta.T @ activations[layer]
        grad_b[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ net.weights[layer]) * (activations[layer] > 0)

    if weight_decay:
        grad_w = [g + 2.0 * weight_decay * w for g, w in zip(grad_w, net.weights)]
        grad_b = [g + 2.0 * weight_decay * b for g, b in zip(grad_b, net.biases)]
    return grad_w, grad_b


def predict(net, x):
    """argmax de la salida; en empate gana la etiqueta menor"""
    probabilities = forward(net, x)
    if probabilities.ndim == 1:
        return LogicalLabel(int(np.argmax(probabilities)))
    return np.argmax(probabilities, axis=1)


# ==================== ADAM ====================

@dataclass
class AdamState:
    """Momentos de primer y segundo orden y número de pasos dados"""
    first: list
    second: list
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def for_network(cls, net, **kwargs):
        params = net.parameters()
        return cls([np.zeros_like(p) for p in params], [np.zeros_like(p) for p in params], **kwargs)


def adam_step(net, grads, state, learning_rate):
    """Actualiza net y state en el sitio y devuelve ambos"""
    grad_w, grad_b = grads
    flat_grads = []
    for gw, gb in zip(grad_w, grad_b):
        flat_grads.extend([gw, gb])
    params = net.parameters()
    if len(flat_grads) != len(params):
        raise ArgumentError("El gradiente no coincide con la red")

    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for param, grad, m, v in zip(params, flat_grads, state.first, state.second):
        if grad.shape != param.shape:
            raise ArgumentError(f"Gradiente de forma {grad.shape} para parámetro {param.shape}")
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * grad * grad
        param -= learning_rate * (m / correction1) / (np.sqrt(v / correction2) + state.epsilon)
    return net, state


# ==================== ENTRENAMIENTO ====================

@dataclass
class TrainingCurves:
    """Filas (iteración, pérdida de entrenamiento, pérdida y error de validación)"""
    iterations: list = field(default_factory=list)
    training_loss: list = field(default_factory=list)
    validation_loss: list = field(default_factory=list)
    validation_error: list = field(default_factory=list)

    def append(self, iteration, training_loss, validation_loss, validation_error):
        if self.iterations and iteration <= self.iterations[-1]:
            raise ArgumentError("Las iteraciones de la curva deben ser crecientes")
        self.iterations.append(int(iteration))
        self.training_loss.append(float(training_loss))
        self.validation_loss.append(float(validation_loss))
        self.validation_error.append(float(validation_error))

    def __len__(self):
        return len(self.iterations)

    def to_frame(self):
        return pd.DataFrame({
            "iteration": self.iterations,
            "training_loss": self.training_loss,
            "validation_loss": self.validation_loss,
            "validation_error": self.validation_error,
        })


def classification_error(net, x, labels):
    if len(x) == 0:
        return float("nan")
    return float(np.mean(predict(net, x) != np.asarray(labels)))


def split_validation(n, fraction, rng):
    """Índices (entrenamiento, validación); al menos una muestra de entrenamiento"""
    order = rng.permutation(n)
    n_validation = min(int(round(n * fraction)), n - 1)
    return np.sort(order[n_validation:]), np.sort(order[:n_validation])


def train(inputs, labels, hidden_layers=None, train_config=None):
    """
    Entrena desde cero sobre (inputs, labels).

    Args:
        inputs: matriz (n, 2L²) de bits de síndrome
        labels: n etiquetas en [0, 16)
        hidden_layers: tamaños de las capas ocultas (por defecto config.HIDDEN_LAYERS)
        train_config: TrainConfig

    Returns:
        tuple: (NetworkParams, TrainingCurves)
    """
    cfg = train_config or TrainConfig()
    hidden_layers = list(config.HIDDEN_LAYERS if hidden_layers is None else hidden_layers)
    inputs = np.asarray(inputs)
    if inputs.ndim != 2 or len(inputs) == 0:
        raise ArgumentError("El conjunto de entrenamiento está vacío")
    labels = _check_labels(labels, len(inputs))

    layer_sizes = [inputs.shape[1], *hidden_layers, N_LOGICAL_CLASSES]
    train_idx, val_idx = split_validation(len(inputs), cfg.validation_fraction,
                                          make_rng(cfg.seed, _STREAM_SPLIT))
    net = NetworkParams.initialize(layer_sizes, cfg.init_width, make_rng(cfg.seed, _STREAM_INIT))
    state = AdamState.for_network(net)
    batch_rng = make_rng(cfg.seed, _STREAM_BATCH)

    x_train = inputs[train_idx].astype(np.float64)
    y_train = labels[train_idx]
    x_val = inputs[val_idx[:cfg.curve_sample_size]].astype(np.float64)
    y_val = labels[val_idx[:cfg.curve_sample_size]]
    x_curve = x_train[:cfg.curve_sample_size]
    y_curve = y_train[:cfg.curve_sample_size]

    logger.info(
        f"Entrenando red {layer_sizes}: {len(x_train)} muestras de entrenamiento, "
        f"{len(val_idx)} de validación, {cfg.n_iterations} iteraciones"
    )
    curves = TrainingCurves()
    stopwatch = Stopwatch()

    def record(iteration):
        train_loss = loss(net, x_curve, y_curve, cfg.weight_decay)
        if len(x_val):
            val_loss = loss(net, x_val, y_val, cfg.weight_decay)
            val_error = classification_error(net, x_val, y_val)
        else:
            val_loss = val_error = float("nan")
        curves.append(iteration, train_loss, val_loss, val_error)
        logger.info(
            f"Iteración {iteration}: pérdida {train_loss:.5f}, validación {val_loss:.5f}, "
            f"error {val_error:.4f} ({stopwatch})"
        )

    record(0)
    for iteration in range(1, cfg.n_iterations + 1):
        batch = batch_rng.integers(0, len(x_train), size=cfg.batch_size)
        grads = gradient(net, x_train[batch], y_train[batch], cfg.weight_decay)
        adam_step(net, grads, state, cfg.learning_rate)
        if iteration % cfg.validation_interval == 0:
            record(iteration)

    logger.success(f"Entrenamiento terminado en {stopwatch}")
    return net, curves
