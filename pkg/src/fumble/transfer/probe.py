"""Regularized multinomial logistic regression on frozen features."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from fumble.data.labels import ClassLabel

N_CLASSES = 3


def _as_label_array(labels) -> np.ndarray:
    out = np.array([lab.value if isinstance(lab, ClassLabel) else int(lab) for lab in labels])
    if out.size and (out.min() < 0 or out.max() >= N_CLASSES):
        raise ValueError(f"labels must be in [0, {N_CLASSES}), got range [{out.min()}, {out.max()}]")
    return out


@dataclass
class ProbeModel:
    weights: np.ndarray  # (3, d)
    bias: np.ndarray     # (3,)
    lam: float
    final_grad_norm: float
    final_loss: float

    def decision(self, features: np.ndarray) -> np.ndarray:
        return features @ self.weights.T + self.bias

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        z = self.decision(features)
        z -= z.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def predict(self, features: np.ndarray) -> np.ndarray:
        return self.decision(features).argmax(axis=1)


def _objective(x, features, onehot, sample_w, lam, d):
    w = x[: N_CLASSES * d].reshape(N_CLASSES, d)
    b = x[N_CLASSES * d :]
    z = features @ w.T + b
    z -= z.max(axis=1, keepdims=True)
    logsumexp = np.log(np.exp(z).sum(axis=1))
    ce = float(np.sum(sample_w * (logsumexp - (z * onehot).sum(axis=1))))
    loss = ce + lam * float(np.sum(w * w))
    probs = np.exp(z - logsumexp[:, None])
    delta = (probs - onehot) * sample_w[:, None]
    grad_w = delta.T @ features + 2.0 * lam * w
    grad_b = delta.sum(axis=0)
    return loss, np.concatenate([grad_w.ravel(), grad_b])


def fit_linear_probe(
    features: np.ndarray,
    labels,
    lam: float = 1e-4,
    balanced: bool = True,
    grad_tol: float = 1e-6,
    init: np.ndarray | None = None,
) -> ProbeModel:
    """Fit a 3-way logistic regression minimizing CE + lam * ||W||^2.

    The encoder producing `features` is untouched; only (W, b) are learned.
    With `balanced` each class contributes equal total weight to the CE (the
    full-batch analog of class-balanced mini-batches); Transitional windows
    are rare, so the unbalanced objective is dominated by the mode. The convex
    objective is solved to gradient norm <= grad_tol.
    """
    features = np.asarray(features, np.float64)
    y = _as_label_array(labels)
    n, d = features.shape
    if n < N_CLASSES:
        raise ValueError(f"need at least {N_CLASSES} samples, got {n}")
    present = np.unique(y)
    if len(present) < N_CLASSES:
        raise ValueError(f"all {N_CLASSES} classes must be present, got {sorted(present)}")

    onehot = np.zeros((n, N_CLASSES))
    onehot[np.arange(n), y] = 1.0
    if balanced:
        counts = onehot.sum(axis=0)
        sample_w = (1.0 / (N_CLASSES * counts))[y]
    else:
        sample_w = np.full(n, 1.0 / n)

    x0 = np.zeros(N_CLASSES * d + N_CLASSES) if init is None else np.asarray(init, np.float64)
    result = None
    for maxiter in (2000, 10000, 50000):
        result = minimize(
            _objective,
            x0,
            args=(features, onehot, sample_w, lam, d),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": maxiter, "gtol": grad_tol * 1e-2, "ftol": 1e-15},
        )
        x0 = result.x
        grad_norm = float(np.linalg.norm(result.jac))
        if grad_norm <= grad_tol:
            break
    else:
        warnings.warn(f"probe solver stopped at gradient norm {grad_norm:.2e} > {grad_tol:.0e}")

    return ProbeModel(
        weights=result.x[: N_CLASSES * d].reshape(N_CLASSES, d),
        bias=result.x[N_CLASSES * d :],
        lam=lam,
        final_grad_norm=float(np.linalg.norm(result.jac)),
        final_loss=float(result.fun),
    )
