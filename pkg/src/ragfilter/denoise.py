"""Variational pre-processor: flattens fine texture before graph extraction.

Minimizes  tv_weight * TV(theta) + surf_weight * S(theta) + lam * ||x - theta||^2
by plain fixed-step gradient descent from theta = x.  TV is the anisotropic
L1 of forward differences per channel; S sums, over 4-adjacent pixel pairs, a
sigmoid of the RGB difference norm rescaled to vanish at zero difference, so a
constant image is a stationary point of the whole objective.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import DenoiseParams
from .validation import check_image


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # z >= 0 throughout this module, so the direct form never overflows
    return 1.0 / (1.0 + np.exp(-z))


def _forward_diffs(theta: np.ndarray):
    dh = theta[:, 1:, :] - theta[:, :-1, :]
    dv = theta[1:, :, :] - theta[:-1, :, :]
    return dh, dv


def tv_loss(theta) -> float:
    """Anisotropic total variation: L1 of forward differences, per channel."""
    theta = np.asarray(theta, dtype=np.float64)
    dh, dv = _forward_diffs(theta)
    return float(np.abs(dh).sum() + np.abs(dv).sum())


def surface_loss(theta, sigmoid_alpha: float = 50.0) -> float:
    """Sum over adjacent pixel pairs of 2 * (sigmoid(alpha * |dRGB|) - 1/2)."""
    theta = np.asarray(theta, dtype=np.float64)
    dh, dv = _forward_diffs(theta)
    nh = np.sqrt((dh ** 2).sum(axis=2))
    nv = np.sqrt((dv ** 2).sum(axis=2))
    total = 0.0
    for n in (nh, nv):
        total += (2.0 * (_sigmoid(sigmoid_alpha * n) - 0.5)).sum()
    return float(total)


def denoise_objective(theta, x, params: DenoiseParams) -> tuple[float, np.ndarray]:
    """Loss and its gradient in one pass.

    At an exactly-zero pairwise difference both the TV term and the surface
    term take subgradient 0, which makes constant images stationary.
    """
    theta = np.asarray(theta, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(theta)
    loss = 0.0

    dh, dv = _forward_diffs(theta)

    if params.tv_weight > 0.0:
        loss += params.tv_weight * (np.abs(dh).sum() + np.abs(dv).sum())
        sh = params.tv_weight * np.sign(dh)
        sv = params.tv_weight * np.sign(dv)
        grad[:, 1:, :] += sh
        grad[:, :-1, :] -= sh
        grad[1:, :, :] += sv
        grad[:-1, :, :] -= sv

    if params.surf_weight > 0.0:
        a = params.sigmoid_alpha
        for d, rows in ((dh, "h"), (dv, "v")):
            n = np.sqrt((d ** 2).sum(axis=2))
            s = _sigmoid(a * n)
            loss += params.surf_weight * (2.0 * (s - 0.5)).sum()
            # d/dn of the pair term, spread along the unit difference vector
            w = params.surf_weight * 2.0 * a * s * (1.0 - s)
            safe = np.where(n > 0.0, n, 1.0)
            vec = (w / safe)[:, :, None] * d
            vec[n == 0.0] = 0.0
            if rows == "h":
                grad[:, 1:, :] += vec
                grad[:, :-1, :] -= vec
            else:
                grad[1:, :, :] += vec
                grad[:-1, :, :] -= vec

    if params.lam > 0.0:
        diff = theta - x
        loss += params.lam * (diff ** 2).sum()
        grad += 2.0 * params.lam * diff

    return float(loss), grad


@dataclass(frozen=True)
class DenoiseResult:
    """Denoised image plus the recorded optimization trace.

    loss_history has max_iters + 1 entries (initial point included); any index
    listed in increased_steps marks a step whose loss rose, a hint that the
    step size should come down.
    """

    image: np.ndarray
    loss_history: np.ndarray
    increased_steps: list[int]


def denoise(x, params: DenoiseParams | None = None) -> DenoiseResult:
    """Gradient-descent smoothing of an image; result clamped to [0, 1]."""
    params = (params or DenoiseParams()).validate()
    x = check_image(x)
    theta = x.copy()
    loss, grad = denoise_objective(theta, x, params)
    history = [loss]
    for _ in range(int(params.max_iters)):
        theta = theta - params.step_size * grad
        loss, grad = denoise_objective(theta, x, params)
        history.append(loss)
    history = np.array(history)
    increased = np.flatnonzero(np.diff(history) > 0.0) + 1
    return DenoiseResult(
        image=np.clip(theta, 0.0, 1.0),
        loss_history=history,
        increased_steps=increased.tolist(),
    )
