"""A small gated convolutional classifier trained with plain SGD.

Inputs are (rows x cols) matrices, e.g. a K-level landscape stack or a
1 x n raw signal.  Rows are folded into the batch axis, so the three
conv + ReLU + max-pool stages share their kernels across rows and never
mix rows (a permutation of input rows permutes the extracted features the
same way).  After the conv stack an optional gating layer multiplies every
feature of row k by a learnable factor in (0, 1), the logistic of a raw
parameter initialized to 0 (factor 1/2).  Gated features are flattened
row-major (row index major) into a two-layer dense head with a softmax.

Because each gate scales everything the classifier sees from its row, the
trained gate values rank rows by how much the model relies on them; they
are the attribution signal consumed by the level-selection rules.

Training is deliberately plain: cross-entropy, mini-batch SGD without
momentum, a step learning-rate schedule (divide by a fixed factor every
fixed number of epochs) and stratified k-fold cross-validation.  All
randomness derives from the model seed, so runs are reproducible to the
bit on a given machine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

from .data import stratified_folds
from .util import atomic_write_text

_CHECKPOINT_VERSION = 1
_EVAL_CHUNK = 1024


def _sigmoid(x: NDArray[np.float64]) -> NDArray[np.float64]:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _conv1d_forward(
    x: NDArray[np.float64], w: NDArray[np.float64], b: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Stride-1 "same" correlation: (N, Cin, T) x (Cout, Cin, kw) -> (N, Cout, T)."""
    kw = w.shape[2]
    pl = (kw - 1) // 2
    pr = kw - 1 - pl
    xp = np.pad(x, ((0, 0), (0, 0), (pl, pr)))
    win = np.lib.stride_tricks.sliding_window_view(xp, kw, axis=2)
    y = np.tensordot(win, w, axes=([1, 3], [1, 2]))
    return np.ascontiguousarray(y.transpose(0, 2, 1)) + b[None, :, None]


def _conv1d_backward(
    x: NDArray[np.float64], w: NDArray[np.float64], gy: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Gradients of the "same" correlation w.r.t. input, weights and bias."""
    kw = w.shape[2]
    pl = (kw - 1) // 2
    xp = np.pad(x, ((0, 0), (0, 0), (pl, kw - 1 - pl)))
    win = np.lib.stride_tricks.sliding_window_view(xp, kw, axis=2)
    gw = np.tensordot(gy, win, axes=([0, 2], [0, 2]))
    gb = gy.sum(axis=(0, 2))
    gyp = np.pad(gy, ((0, 0), (0, 0), (kw - 1 - pl, pl)))
    gwin = np.lib.stride_tricks.sliding_window_view(gyp, kw, axis=2)
    gx = np.tensordot(gwin, w[:, :, ::-1], axes=([1, 3], [0, 2]))
    return np.ascontiguousarray(gx.transpose(0, 2, 1)), gw, gb


def _maxpool_forward(
    x: NDArray[np.float64], width: int
) -> tuple[NDArray[np.float64], NDArray[np.intp]]:
    """Non-overlapping max pool along time; trailing remainder is dropped."""
    n, c, t = x.shape
    to = t // width
    xw = x[:, :, : to * width].reshape(n, c, to, width)
    idx = xw.argmax(axis=3)
    y = np.take_along_axis(xw, idx[..., None], axis=3)[..., 0]
    return y, idx


def _maxpool_backward(
    gy: NDArray[np.float64], idx: NDArray[np.intp], width: int, t_in: int
) -> NDArray[np.float64]:
    n, c, to = gy.shape
    gxw = np.zeros((n, c, to, width), dtype=gy.dtype)
    np.put_along_axis(gxw, idx[..., None], gy[..., None], axis=3)
    gx = np.zeros((n, c, t_in), dtype=gy.dtype)
    gx[:, :, : to * width] = gxw.reshape(n, c, to * width)
    return gx


@dataclass(frozen=True)
class ModelConfig:
    """Architecture hyperparameters.

    ``input_shape`` is (rows, cols); gating requires rows >= 2.  The time
    axis is pooled three times with floor division, so cols must survive
    three pools with at least one sample.
    """

    input_shape: tuple[int, int]
    num_classes: int
    conv_channels: tuple[int, int, int] = (16, 32, 64)
    kernel_width: int = 3
    pool_width: int = 2
    dense_hidden: int = 64
    use_gating: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_shape", tuple(int(v) for v in self.input_shape))
        object.__setattr__(self, "conv_channels", tuple(int(v) for v in self.conv_channels))
        rows, cols = self.input_shape
        if rows < 1 or cols < 1:
            raise ValueError(f"invalid input shape {self.input_shape}")
        if len(self.conv_channels) != 3 or any(c < 1 for c in self.conv_channels):
            raise ValueError(f"need three positive channel counts, got {self.conv_channels}")
        if self.kernel_width < 1 or self.kernel_width % 2 == 0:
            raise ValueError(f"kernel width must be odd and positive, got {self.kernel_width}")
        if self.pool_width < 1:
            raise ValueError(f"pool width must be positive, got {self.pool_width}")
        if self.num_classes < 2:
            raise ValueError(f"need at least 2 classes, got {self.num_classes}")
        if self.dense_hidden < 1:
            raise ValueError(f"dense hidden size must be positive, got {self.dense_hidden}")
        if self.use_gating and rows < 2:
            raise ValueError("gating needs at least 2 input rows")
        if self.pooled_length < 1:
            raise ValueError(
                f"{cols} columns do not survive three pools of width {self.pool_width}"
            )

    @property
    def pooled_length(self) -> int:
        t = self.input_shape[1]
        for _ in range(3):
            t //= self.pool_width
        return t

    @property
    def flat_features(self) -> int:
        return self.input_shape[0] * self.conv_channels[2] * self.pooled_length

    def to_dict(self) -> dict:
        return {
            "input_shape": list(self.input_shape),
            "num_classes": self.num_classes,
            "conv_channels": list(self.conv_channels),
            "kernel_width": self.kernel_width,
            "pool_width": self.pool_width,
            "dense_hidden": self.dense_hidden,
            "use_gating": self.use_gating,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "ModelConfig":
        return cls(
            input_shape=tuple(payload["input_shape"]),
            num_classes=int(payload["num_classes"]),
            conv_channels=tuple(payload["conv_channels"]),
            kernel_width=int(payload["kernel_width"]),
            pool_width=int(payload["pool_width"]),
            dense_hidden=int(payload["dense_hidden"]),
            use_gating=bool(payload["use_gating"]),
            seed=int(payload["seed"]),
        )


@dataclass(frozen=True)
class TrainConfig:
    """Optimization hyperparameters for plain SGD with a step schedule."""

    epochs: int = 240
    batch_size: int = 64
    learning_rate: float = 0.01
    lr_drop_every: int = 100
    lr_drop_factor: float = 5.0
    folds: int = 5

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be positive, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch size must be positive, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be positive, got {self.learning_rate}")
        if self.lr_drop_every < 1:
            raise ValueError(f"lr_drop_every must be positive, got {self.lr_drop_every}")
        if self.lr_drop_factor < 1:
            raise ValueError(f"lr_drop_factor must be >= 1, got {self.lr_drop_factor}")
        if self.folds < 2:
            raise ValueError(f"need at least 2 folds, got {self.folds}")

    def rate_at(self, epoch: int) -> float:
        return self.learning_rate / self.lr_drop_factor ** (epoch // self.lr_drop_every)

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "lr_drop_every": self.lr_drop_every,
            "lr_drop_factor": self.lr_drop_factor,
            "folds": self.folds,
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "TrainConfig":
        return cls(**{k: payload[k] for k in cls.__dataclass_fields__ if k in payload})


@dataclass(frozen=True, eq=False)
class GatingWeights:
    """Raw gate parameters plus their effective (logistic) values."""

    raw: NDArray[np.float64]

    def __post_init__(self) -> None:
        raw = np.array(self.raw, dtype=np.float64, copy=True)
        if raw.ndim != 1:
            raise ValueError("gate parameters must be 1-D")
        raw.setflags(write=False)
        object.__setattr__(self, "raw", raw)

    @property
    def effective(self) -> NDArray[np.float64]:
        return _sigmoid(self.raw)

    def __len__(self) -> int:
        return int(self.raw.size)


class GatedConvNet:
    """Parameter container; the math lives in module-level functions."""

    def __init__(self, config: ModelConfig, params: dict[str, NDArray[np.float64]]):
        self.config = config
        self.params = params

    def gating(self) -> GatingWeights | None:
        if not self.config.use_gating:
            return None
        return GatingWeights(raw=self.params["gate_raw"])

    def copy(self) -> "GatedConvNet":
        return GatedConvNet(self.config, {k: v.copy() for k, v in self.params.items()})


def init_model(config: ModelConfig, rng: np.random.Generator | None = None) -> GatedConvNet:
    """Fresh parameters: weights uniform in +-1/sqrt(fan_in), biases and
    raw gates zero.  Draw order is fixed (conv1, conv2, conv3, dense1,
    dense2) so a given rng state always yields the same model.
    """
    rng = rng or np.random.default_rng(config.seed)
    c1, c2, c3 = config.conv_channels
    kw = config.kernel_width
    rows, _ = config.input_shape

    def uniform(shape: tuple[int, ...], fan_in: int) -> NDArray[np.float64]:
        limit = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-limit, limit, size=shape)

    params: dict[str, NDArray[np.float64]] = {
        "conv1_w": uniform((c1, 1, kw), 1 * kw),
        "conv1_b": np.zeros(c1),
        "conv2_w": uniform((c2, c1, kw), c1 * kw),
        "conv2_b": np.zeros(c2),
        "conv3_w": uniform((c3, c2, kw), c2 * kw),
        "conv3_b": np.zeros(c3),
        "dense1_w": uniform((config.dense_hidden, config.flat_features), config.flat_features),
        "dense1_b": np.zeros(config.dense_hidden),
        "dense2_w": uniform((config.num_classes, config.dense_hidden), config.dense_hidden),
        "dense2_b": np.zeros(config.num_classes),
    }
    if config.use_gating:
        params["gate_raw"] = np.zeros(rows)
    return GatedConvNet(config, params)


def _check_input(config: ModelConfig, inputs: NDArray[np.float64]) -> NDArray[np.float64]:
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim == 2:
        x = x[None]
    if x.ndim != 3 or x.shape[1:] != config.input_shape:
        raise ValueError(f"expected input shape (N, {config.input_shape[0]}, "
                         f"{config.input_shape[1]}), got {np.asarray(inputs).shape}")
    return x


def _forward_cached(model: GatedConvNet, x: NDArray[np.float64]) -> tuple[NDArray[np.float64], dict]:
    cfg = model.config
    p = model.params
    n, rows, cols = x.shape
    a = x.reshape(n * rows, 1, cols)
    conv_cache = []
    for layer in (1, 2, 3):
        w, b = p[f"conv{layer}_w"], p[f"conv{layer}_b"]
        z = _conv1d_forward(a, w, b)
        r = np.maximum(z, 0.0)
        pooled, idx = _maxpool_forward(r, cfg.pool_width)
        conv_cache.append((a, z, idx, r.shape[2]))
        a = pooled
    feat = a.reshape(n, rows, a.shape[1], a.shape[2])

    if cfg.use_gating:
        gate = _sigmoid(p["gate_raw"])
        gated = feat * gate[None, :, None, None]
    else:
        gate = None
        gated = feat
    flat = gated.reshape(n, -1)

    h_pre = flat @ p["dense1_w"].T + p["dense1_b"]
    h = np.maximum(h_pre, 0.0)
    logits = h @ p["dense2_w"].T + p["dense2_b"]

    zmax = logits.max(axis=1, keepdims=True)
    shifted = logits - zmax
    es = np.exp(shifted)
    ssum = es.sum(axis=1, keepdims=True)
    probs = es / ssum

    cache = {
        "conv": conv_cache,
        "feat": feat,
        "gate": gate,
        "flat": flat,
        "h_pre": h_pre,
        "h": h,
        "shifted": shifted,
        "ssum": ssum,
        "probs": probs,
    }
    return probs, cache


def forward(model: GatedConvNet, inputs) -> NDArray[np.float64]:
    """Class probabilities; accepts one (rows, cols) input or a batch."""
    single = np.asarray(inputs).ndim == 2
    x = _check_input(model.config, inputs)
    probs, _ = _forward_cached(model, x)
    return probs[0] if single else probs


def loss_and_gradients(
    model: GatedConvNet, inputs, labels
) -> tuple[float, dict[str, NDArray[np.float64]]]:
    """Mean cross-entropy over the batch and its gradient for every parameter."""
    cfg = model.config
    p = model.params
    x = _check_input(cfg, inputs)
    y = np.asarray(labels, dtype=np.int64).reshape(-1)
    n = x.shape[0]
    if y.shape != (n,):
        raise ValueError(f"{y.size} labels for {n} inputs")
    if y.size and (y.min() < 0 or y.max() >= cfg.num_classes):
        raise ValueError("label outside 0..num_classes-1")

    probs, cache = _forward_cached(model, x)
    log_probs = cache["shifted"] - np.log(cache["ssum"])
    loss = float(-log_probs[np.arange(n), y].mean())

    grads: dict[str, NDArray[np.float64]] = {}
    dlogits = cache["probs"].copy()
    dlogits[np.arange(n), y] -= 1.0
    dlogits /= n

    grads["dense2_w"] = dlogits.T @ cache["h"]
    grads["dense2_b"] = dlogits.sum(axis=0)
    dh = dlogits @ p["dense2_w"]
    dh_pre = dh * (cache["h_pre"] > 0.0)
    grads["dense1_w"] = dh_pre.T @ cache["flat"]
    grads["dense1_b"] = dh_pre.sum(axis=0)
    dflat = dh_pre @ p["dense1_w"]

    rows, cols = cfg.input_shape
    feat = cache["feat"]
    dgated = dflat.reshape(feat.shape)
    if cfg.use_gating:
        gate = cache["gate"]
        dfeat = dgated * gate[None, :, None, None]
        dgate = (dgated * feat).sum(axis=(0, 2, 3))
        grads["gate_raw"] = dgate * gate * (1.0 - gate)
    else:
        dfeat = dgated

    da = dfeat.reshape(n * rows, feat.shape[2], feat.shape[3])
    for layer in (3, 2, 1):
        a_in, z, idx, r_len = cache["conv"][layer - 1]
        dr = _maxpool_backward(da, idx, cfg.pool_width, r_len)
        dz = dr * (z > 0.0)
        da, gw, gb = _conv1d_backward(a_in, p[f"conv{layer}_w"], dz)
        grads[f"conv{layer}_w"] = gw
        grads[f"conv{layer}_b"] = gb

    return loss, grads


def _fit_sgd(
    model: GatedConvNet,
    x: NDArray[np.float64],
    y: NDArray[np.int64],
    train_config: TrainConfig,
    rng: np.random.Generator,
) -> None:
    n = x.shape[0]
    for epoch in range(train_config.epochs):
        lr = train_config.rate_at(epoch)
        perm = rng.permutation(n)
        for start in range(0, n, train_config.batch_size):
            batch = perm[start : start + train_config.batch_size]
            _, grads = loss_and_gradients(model, x[batch], y[batch])
            for key, grad in grads.items():
                model.params[key] -= lr * grad


@dataclass(frozen=True)
class FitReport:
    """Cross-validation outcome: per-fold accuracy plus gate statistics.

    ``gating_mean``/``gating_std`` are per-row statistics of the effective
    gate values across folds (None when the model has no gating layer);
    ``gating_folds`` keeps the per-fold gate vectors the statistics were
    computed from.  The std uses the population convention (ddof=0).
    """

    fold_accuracies: tuple[float, ...]
    mean_accuracy: float
    std_accuracy: float
    gating_mean: tuple[float, ...] | None = None
    gating_std: tuple[float, ...] | None = None
    gating_folds: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "fold_accuracies", tuple(float(a) for a in self.fold_accuracies))
        accs = np.asarray(self.fold_accuracies)
        if not np.isclose(accs.mean(), self.mean_accuracy, atol=1e-12):
            raise ValueError("mean_accuracy inconsistent with fold accuracies")
        if not np.isclose(accs.std(), self.std_accuracy, atol=1e-12):
            raise ValueError("std_accuracy inconsistent with fold accuracies")
        gating = (self.gating_mean, self.gating_std, self.gating_folds)
        if any(g is None for g in gating) != all(g is None for g in gating):
            raise ValueError("gating fields must be all present or all absent")
        if self.gating_mean is not None:
            object.__setattr__(self, "gating_mean", tuple(float(g) for g in self.gating_mean))
            object.__setattr__(self, "gating_std", tuple(float(g) for g in self.gating_std))
            object.__setattr__(
                self,
                "gating_folds",
                tuple(tuple(float(g) for g in fold) for fold in self.gating_folds),
            )
            folds = np.asarray(self.gating_folds)
            if folds.ndim != 2 or folds.shape[1] != len(self.gating_mean):
                raise ValueError("gating_folds shape disagrees with gating_mean")
            if len(self.gating_mean) != len(self.gating_std):
                raise ValueError("gating statistics disagree on row count")
            if not np.allclose(folds.mean(axis=0), self.gating_mean, atol=1e-12):
                raise ValueError("gating_mean inconsistent with gating_folds")
            if not np.allclose(folds.std(axis=0), self.gating_std, atol=1e-12):
                raise ValueError("gating_std inconsistent with gating_folds")

    @classmethod
    def from_folds(
        cls, accuracies: Sequence[float], gate_values: Sequence[NDArray[np.float64]] | None
    ) -> "FitReport":
        accs = np.asarray(list(accuracies), dtype=np.float64)
        gating_mean = gating_std = gating_folds = None
        if gate_values:
            gates = np.stack(list(gate_values))
            gating_mean = tuple(float(g) for g in gates.mean(axis=0))
            gating_std = tuple(float(g) for g in gates.std(axis=0))
            gating_folds = tuple(tuple(float(g) for g in fold) for fold in gates)
        return cls(
            fold_accuracies=tuple(float(a) for a in accs),
            mean_accuracy=float(accs.mean()),
            std_accuracy=float(accs.std()),
            gating_mean=gating_mean,
            gating_std=gating_std,
            gating_folds=gating_folds,
        )

    def to_dict(self) -> dict:
        return {
            "fold_accuracies": list(self.fold_accuracies),
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "gating_mean": None if self.gating_mean is None else list(self.gating_mean),
            "gating_std": None if self.gating_std is None else list(self.gating_std),
            "gating_folds": None
            if self.gating_folds is None
            else [list(fold) for fold in self.gating_folds],
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "FitReport":
        gm = payload.get("gating_mean")
        gs = payload.get("gating_std")
        gf = payload.get("gating_folds")
        return cls(
            fold_accuracies=tuple(payload["fold_accuracies"]),
            mean_accuracy=float(payload["mean_accuracy"]),
            std_accuracy=float(payload["std_accuracy"]),
            gating_mean=None if gm is None else tuple(gm),
            gating_std=None if gs is None else tuple(gs),
            gating_folds=None if gf is None else tuple(tuple(fold) for fold in gf),
        )


def save_report(path: str | Path, report: FitReport) -> None:
    atomic_write_text(Path(path), json.dumps(report.to_dict(), indent=2) + "\n")


def load_report(path: str | Path) -> FitReport:
    return FitReport.from_dict(json.loads(Path(path).read_text()))


def gating_csv(path: str | Path, report: FitReport) -> None:
    """Per-row gate statistics as CSV (level, mean, std)."""
    if report.gating_mean is None:
        raise ValueError("report has no gating statistics")
    lines = ["level,mean,std"]
    for k, (mean, std) in enumerate(zip(report.gating_mean, report.gating_std), start=1):
        lines.append(f"{k},{mean!r},{std!r}")
    atomic_write_text(Path(path), "\n".join(lines) + "\n")


def train(
    inputs,
    labels,
    model_config: ModelConfig,
    train_config: TrainConfig,
) -> tuple[GatedConvNet, FitReport]:
    """Stratified k-fold cross-validation with a fresh model per fold.

    Returns the model trained on the last fold plus the cross-fold report.
    Fold assignment, per-fold initialization and batch shuffling all
    derive from ``model_config.seed``, so the result is reproducible.
    """
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim == 2:
        x = x[:, None, :]
    y = np.asarray(labels, dtype=np.int64).reshape(-1)
    if x.ndim != 3 or x.shape[0] != y.size:
        raise ValueError(f"inputs {x.shape} do not match {y.size} labels")
    if x.shape[1:] != model_config.input_shape:
        raise ValueError(
            f"inputs {x.shape[1:]} do not match configured shape {model_config.input_shape}"
        )
    if y.size and (y.min() < 0 or y.max() >= model_config.num_classes):
        raise ValueError("label outside 0..num_classes-1")

    assignments = stratified_folds(y, train_config.folds, seed=model_config.seed)
    children = np.random.SeedSequence(model_config.seed).spawn(train_config.folds)

    accuracies: list[float] = []
    gate_values: list[NDArray[np.float64]] = []
    model: GatedConvNet | None = None
    for fold in range(train_config.folds):
        rng = np.random.default_rng(children[fold])
        model = init_model(model_config, rng)
        hold = assignments == fold
        _fit_sgd(model, x[~hold], y[~hold], train_config, rng)
        accuracies.append(evaluate(model, x[hold], y[hold]))
        gating = model.gating()
        if gating is not None:
            gate_values.append(gating.effective)

    report = FitReport.from_folds(accuracies, gate_values if gate_values else None)
    assert model is not None
    return model, report


def evaluate(model: GatedConvNet, inputs, labels) -> float:
    """Accuracy of the argmax prediction (ties to the lowest class index)."""
    x = _check_input(model.config, inputs)
    y = np.asarray(labels, dtype=np.int64).reshape(-1)
    if x.shape[0] == 0:
        raise ValueError("cannot evaluate on an empty set")
    if y.size != x.shape[0]:
        raise ValueError(f"{y.size} labels for {x.shape[0]} inputs")
    hits = 0
    for start in range(0, x.shape[0], _EVAL_CHUNK):
        probs, _ = _forward_cached(model, x[start : start + _EVAL_CHUNK])
        hits += int((probs.argmax(axis=1) == y[start : start + _EVAL_CHUNK]).sum())
    return hits / x.shape[0]


def save_model(path: str | Path, model: GatedConvNet) -> None:
    """Versioned .npz checkpoint: parameters plus the architecture config."""
    arrays = {f"param_{k}": v for k, v in model.params.items()}
    np.savez(
        path,
        format_version=np.int64(_CHECKPOINT_VERSION),
        config=np.str_(json.dumps(model.config.to_dict())),
        **arrays,
    )


def load_model(path: str | Path) -> GatedConvNet:
    with np.load(path, allow_pickle=False) as payload:
        version = int(payload["format_version"])
        if version != _CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        config = ModelConfig.from_dict(json.loads(str(payload["config"])))
        params = {
            key[len("param_") :]: payload[key].copy()
            for key in payload.files
            if key.startswith("param_")
        }
    expected = set(init_model(config).params)
    if set(params) != expected:
        raise ValueError("checkpoint parameters do not match the configuration")
    return GatedConvNet(config, params)
