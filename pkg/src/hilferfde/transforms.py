"""Discrete sine transform pairing physical samples on (0, pi) with
coefficients on the sin(n x) eigenbasis of the Dirichlet Laplacian.

Collocation nodes are x_j = j pi / (M+1), j = 1..M; with the forward
normalization 2/(M+1) the forward and inverse maps are exact inverses of
each other on mode space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SineTransformPlan", "sine_forward", "sine_inverse"]


@dataclass(frozen=True)
class SineTransformPlan:
    n_modes: int

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")

    @property
    def nodes(self) -> np.ndarray:
        m = self.n_modes
        return np.arange(1, m + 1) * np.pi / (m + 1)

    @property
    def matrix(self) -> np.ndarray:
        """S[j, n] = sin((n+1) x_j); symmetric, S @ S = (M+1)/2 * I."""
        m = self.n_modes
        jn = np.arange(1, m + 1)
        return np.sin(np.outer(jn, jn) * np.pi / (m + 1))


def sine_forward(plan: SineTransformPlan, samples: np.ndarray) -> np.ndarray:
    v = np.asarray(samples, dtype=float)
    if v.shape != (plan.n_modes,):
        raise ValueError(f"expected {plan.n_modes} samples, got shape {v.shape}")
    return (2.0 / (plan.n_modes + 1)) * (plan.matrix @ v)


def sine_inverse(plan: SineTransformPlan, coeffs: np.ndarray) -> np.ndarray:
    g = np.asarray(coeffs, dtype=float)
    if g.shape != (plan.n_modes,):
        raise ValueError(f"expected {plan.n_modes} coefficients, got shape {g.shape}")
    return plan.matrix @ g
