"""Regression models in log10 space.

Two modes are supported:

- ``power_law``: ordinary least squares on ``log10 y = a + Σ b_i·log10 x_i``.
- ``gaussian_process``: squared-exponential kernel with fixed heuristic
  hyperparameters (length scale per input = standard deviation of the log
  inputs, signal variance = variance of the log outputs, noise variance
  1e-6 of the signal variance, prior mean = mean of the log outputs).

Fitted models are immutable and safe to share between threads.

Example:
    >>> model = fit(db, ["payload_kg", "range_m"], "empty_weight_fraction")
    >>> predict(model, [7500.0, 1.5e6]).mean
    0.58
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from tenacity import Retrying, before_sleep_log, retry_if_exception_type, stop_after_attempt

from ..cache import ModelCache, default_cache
from ..exceptions import RegressionError, SingularSystemError
from .database import HistoricalDatabase, training_arrays

logger = logging.getLogger(__name__)

Mode = Literal["power_law", "gaussian_process"]
MODES: tuple[Mode, ...] = ("power_law", "gaussian_process")

NOISE_RATIO = 1e-6
JITTER_SCHEDULE = (0.0, 1e-10, 1e-9, 1e-8)
"""Diagonal jitter per factorization attempt, relative to the signal variance."""


@dataclass(frozen=True, eq=False)
class RegressionModel:
    """A fitted regression.

    Attributes:
        inputs: Input column names.
        output: Output column name.
        mode: ``power_law`` or ``gaussian_process``.
        n_rows: Training rows used.
        coefficients: Power law ``[a, b_1, ..., b_d]``; empty for a GP.
        train_u: GP training inputs in log10 space, shape (n, d).
        alpha: GP weights ``(K + σ_n² I)⁻¹ (y' - m)``.
        factor: Cholesky factor of the regularized kernel matrix.
        length_scales: GP length scale per input (log10 decades).
        signal_variance: GP σ_f².
        noise_variance: GP σ_n² (including any jitter the factorization needed).
        prior_mean: GP prior mean in log10 space.
    """

    inputs: tuple[str, ...]
    output: str
    mode: Mode
    n_rows: int
    coefficients: np.ndarray
    train_u: np.ndarray
    alpha: np.ndarray
    factor: np.ndarray
    length_scales: np.ndarray
    signal_variance: float = 0.0
    noise_variance: float = 0.0
    prior_mean: float = 0.0

    @property
    def dimension(self) -> int:
        """Number of inputs."""
        return len(self.inputs)

    def describe(self) -> str:
        """One-line human summary."""
        head = f"{self.output} ~ {', '.join(self.inputs)} [{self.mode}, {self.n_rows} rows]"
        if self.mode == "power_law":
            a, *b = self.coefficients
            exponents = ", ".join(f"{value:.4g}" for value in b)
            return f"{head}: log10 y = {a:.4g} + [{exponents}]·log10 x"
        scales = ", ".join(f"{value:.3g}" for value in self.length_scales)
        return f"{head}: ℓ=[{scales}], σ_f²={self.signal_variance:.3g}"


@dataclass(frozen=True, slots=True)
class Prediction:
    """Regression output in linear units; ``std`` is 0 for a power law."""

    mean: float
    std: float


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def _to_log(values: np.ndarray, what: str) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.size == 0 or not np.all(np.isfinite(values)) or np.any(values <= 0):
        msg = f"{what} must be finite and strictly positive for a log-space regression"
        raise RegressionError(msg)
    return np.log10(values)


def _fit_power_law(U: np.ndarray, v: np.ndarray) -> np.ndarray:
    design = np.column_stack([np.ones(len(v)), U])
    coefficients, _, rank, _ = np.linalg.lstsq(design, v, rcond=None)
    if rank < design.shape[1]:
        msg = (
            f"singular system: power-law design matrix has rank {rank} < {design.shape[1]} "
            "(collinear or constant inputs)"
        )
        raise SingularSystemError(msg)
    return np.asarray(coefficients, dtype=float)


def _kernel(A: np.ndarray, B: np.ndarray, scales: np.ndarray, variance: float) -> np.ndarray:
    diff = (A[:, None, :] - B[None, :, :]) / scales
    return np.asarray(variance * np.exp(-0.5 * np.sum(diff * diff, axis=-1)))


def _factorize(matrix: np.ndarray, scale: float) -> tuple[np.ndarray, float]:
    """Cholesky-factorize, adding diagonal jitter on failure."""
    identity = np.eye(len(matrix))
    jitter = 0.0
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(len(JITTER_SCHEDULE)),
            retry=retry_if_exception_type(np.linalg.LinAlgError),
            before_sleep=before_sleep_log(logger, logging.WARNING),
            reraise=True,
        ):
            with attempt:
                jitter = JITTER_SCHEDULE[attempt.retry_state.attempt_number - 1] * scale
                factor, _ = cho_factor(matrix + jitter * identity, lower=True)
    except np.linalg.LinAlgError as e:
        msg = (
            f"singular system: kernel matrix not positive definite with jitter up to "
            f"{JITTER_SCHEDULE[-1] * scale:.1e}"
        )
        raise SingularSystemError(msg) from e
    return factor, jitter


def train(
    X: np.ndarray | Sequence[Sequence[float]],
    y: np.ndarray | Sequence[float],
    mode: Mode = "gaussian_process",
    *,
    inputs: Sequence[str] | None = None,
    output: str = "y",
    length_scales: Sequence[float] | float | None = None,
    signal_variance: float | None = None,
    noise_variance: float | None = None,
    prior_mean: float | None = None,
) -> RegressionModel:
    """Fit a model directly on arrays.

    Args:
        X: Inputs, shape (n, d) or (n,) for one input; strictly positive.
        y: Outputs, shape (n,); strictly positive.
        mode: ``power_law`` or ``gaussian_process``.
        inputs: Input names (default ``x0, x1, ...``).
        output: Output name.
        length_scales: GP length scales override (log10 decades).
        signal_variance: GP σ_f² override.
        noise_variance: GP σ_n² override.
        prior_mean: GP prior mean override (log10 space).

    Returns:
        The fitted model.

    Raises:
        RegressionError: Non-positive data, shape mismatch or bad overrides.
        SingularSystemError: The system cannot be solved.
    """
    if mode not in MODES:
        msg = f"unknown regression mode '{mode}' (expected one of {', '.join(MODES)})"
        raise RegressionError(msg)
    X_arr = np.asarray(X, dtype=float)
    if X_arr.ndim == 1:
        X_arr = X_arr[:, None]
    y_arr = np.asarray(y, dtype=float).ravel()
    if X_arr.ndim != 2 or len(X_arr) != len(y_arr):
        msg = f"inputs of shape {X_arr.shape} do not match {len(y_arr)} outputs"
        raise RegressionError(msg)
    names = tuple(inputs) if inputs is not None else tuple(f"x{i}" for i in range(X_arr.shape[1]))
    if len(names) != X_arr.shape[1]:
        msg = f"{len(names)} input names for {X_arr.shape[1]} input columns"
        raise RegressionError(msg)

    U = _to_log(X_arr, "training inputs")
    v = _to_log(y_arr, "training outputs")
    empty = np.empty(0)

    if mode == "power_law":
        coefficients = _fit_power_law(U, v)
        return RegressionModel(
            names, output, mode, len(v), _frozen(coefficients), empty, empty, empty, empty
        )

    if length_scales is None:
        scales = np.std(U, axis=0)
        scales = np.where(scales > 0, scales, 1.0)
    else:
        scales = np.broadcast_to(np.asarray(length_scales, dtype=float), (U.shape[1],)).copy()
    if np.any(~np.isfinite(scales)) or np.any(scales <= 0):
        msg = f"length scales must be positive, got {scales.tolist()}"
        raise RegressionError(msg)
    if signal_variance is None:
        signal_variance = float(np.var(v))
        if signal_variance <= 0:
            signal_variance = 1.0
    if not signal_variance > 0:
        msg = f"signal variance must be positive, got {signal_variance}"
        raise RegressionError(msg)
    if noise_variance is None:
        noise_variance = NOISE_RATIO * signal_variance
    if not noise_variance >= 0:
        msg = f"noise variance must be >= 0, got {noise_variance}"
        raise RegressionError(msg)
    mean = float(np.mean(v)) if prior_mean is None else float(prior_mean)

    K = _kernel(U, U, scales, signal_variance) + noise_variance * np.eye(len(v))
    factor, jitter = _factorize(K, signal_variance)
    alpha = cho_solve((factor, True), v - mean)
    return RegressionModel(
        inputs=names,
        output=output,
        mode=mode,
        n_rows=len(v),
        coefficients=empty,
        train_u=_frozen(U),
        alpha=_frozen(alpha),
        factor=_frozen(factor),
        length_scales=_frozen(scales),
        signal_variance=signal_variance,
        noise_variance=noise_variance + jitter,
        prior_mean=mean,
    )


def fit(
    db: HistoricalDatabase,
    inputs: Sequence[str],
    output: str,
    mode: Mode = "gaussian_process",
    *,
    table: str | None = None,
    where: Mapping[str, str] | None = None,
    cache: ModelCache | None = default_cache,
    **overrides: Any,  # noqa: ANN401
) -> RegressionModel:
    """Fit a regression on database columns.

    Only rows with every named column present and strictly positive are
    used. Fits are cached per database fingerprint.

    Args:
        db: Loaded database.
        inputs: Input column names.
        output: Output column name.
        mode: ``power_law`` or ``gaussian_process``.
        table: Table name; inferred from the columns when omitted.
        where: Exact-match filter on text columns.
        cache: Model cache; None disables caching.
        **overrides: GP hyperparameter overrides passed to ``train``.

    Raises:
        InsufficientDataError: Fewer than 3 usable rows.
        SingularSystemError: Collinear inputs or a non-factorizable kernel.
        DatabaseError: Unknown table or column.
    """

    def _fit() -> RegressionModel:
        X, y = training_arrays(db, inputs, output, table=table, where=where)
        model = train(X, y, mode, inputs=inputs, output=output, **overrides)
        logger.debug("fitted %s", model.describe())
        return model

    if cache is None:
        return _fit()
    key = (
        db.fingerprint,
        table,
        tuple(inputs),
        output,
        mode,
        tuple(sorted((where or {}).items())),
        tuple(sorted((name, _hashable(value)) for name, value in overrides.items())),
    )
    return cache.get_or_fit(key, _fit)


def _hashable(value: object) -> object:
    if isinstance(value, str | float | int) or value is None:
        return value
    return tuple(np.asarray(value, dtype=float).ravel().tolist())


def predict_log(model: RegressionModel, x: Sequence[float] | np.ndarray) -> tuple[float, float]:
    """Predict in log10 space: ``(mean, std)`` of ``log10 y``.

    Raises:
        RegressionError: Wrong input count or non-positive input.
    """
    x_arr = np.asarray(x, dtype=float).ravel()
    if len(x_arr) != model.dimension:
        msg = f"expected {model.dimension} input(s) {', '.join(model.inputs)}, got {len(x_arr)}"
        raise RegressionError(msg)
    u = _to_log(x_arr, "prediction inputs")

    if model.mode == "power_law":
        return float(model.coefficients[0] + model.coefficients[1:] @ u), 0.0

    k_star = _kernel(u[None, :], model.train_u, model.length_scales, model.signal_variance)[0]
    mean = model.prior_mean + float(k_star @ model.alpha)
    w = cho_solve((model.factor, True), k_star)
    variance = max(model.signal_variance - float(k_star @ w), 0.0)
    return mean, math.sqrt(variance)


def predict(model: RegressionModel, x: Sequence[float] | np.ndarray) -> Prediction:
    """Predict in linear units.

    The GP standard deviation is mapped from log10 space with the
    first-order delta rule ``σ_y = ln(10)·y·σ_log``.

    Raises:
        RegressionError: Wrong input count or non-positive input.

    Example:
        >>> model = train([[1.0], [10.0], [100.0]], [2.0, 20.0, 200.0], "power_law")
        >>> round(predict(model, [1000.0]).mean, 6)
        2000.0
    """
    mean_log, std_log = predict_log(model, x)
    mean = 10.0**mean_log
    return Prediction(mean=mean, std=math.log(10.0) * mean * std_log)
