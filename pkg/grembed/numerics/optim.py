from typing import Tuple

import numpy as np

from grembed.numerics.types import AdamState


def adam_step(params: np.ndarray, grads: np.ndarray, state: AdamState) -> Tuple[np.ndarray, AdamState]:
    """Applies one bias-corrected Adam update.

    Args:
        params (np.ndarray): Current parameter values.
        grads (np.ndarray): Gradient of the loss with respect to ``params``.
        state (AdamState): Moments and hyperparameters from the previous step.

    Returns:
        Tuple[np.ndarray, AdamState]: The updated parameters (a new array) and the advanced state.

    Raises:
        ValueError: If the shapes of ``params``, ``grads`` and the moment vectors differ.
    """
    if params.shape != grads.shape or state.m.shape != params.shape or state.v.shape != params.shape:
        raise ValueError(
            f"Shape mismatch: params {params.shape}, grads {grads.shape}, moments {state.m.shape}/{state.v.shape}"
        )

    t = state.t + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * grads
    v = state.beta2 * state.v + (1.0 - state.beta2) * grads * grads
    m_hat = m / (1.0 - state.beta1**t)
    v_hat = v / (1.0 - state.beta2**t)

    updated = params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return updated, state.advanced(m, v)
