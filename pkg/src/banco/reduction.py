"""Black-box composition of the magnitude bettor and the direction learner.

The scalar bettor decides how far to go, the ball-constrained learner decides
which way: the joint prediction is x_t = w_t * y_t.  After observing the
noisy gradient g_hat, the bettor is fed the scalar coin s_t = <g_hat, y_t>
(whose conditional mean is bounded by G and whose noise inherits the
directional MGF parameters), and the direction learner is fed g_hat itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .betting import BettingConfig, BettingState, compute_bet, update
from .direction import DirectionState, direction_predict, direction_update

__all__ = ["BanachLearnerState", "banach_predict", "banach_update"]


@dataclass(frozen=True)
class BanachLearnerState:
    """Paired sub-learner states; both have consumed the same number of rounds."""

    bettor: BettingState
    bettor_config: BettingConfig
    direction: DirectionState
    round: int = 0

    @classmethod
    def fresh(cls, config: BettingConfig, dim: int, norm=None) -> "BanachLearnerState":
        from .direction import EUCLIDEAN

        norm = EUCLIDEAN if norm is None else norm
        return cls(
            bettor=BettingState.fresh(config),
            bettor_config=config,
            direction=DirectionState.fresh(dim, norm),
            round=0,
        )


def banach_predict(state: BanachLearnerState) -> np.ndarray:
    """Joint prediction w_t * y_t; its norm never exceeds |w_t|."""
    w = compute_bet(state.bettor, state.bettor_config)
    y = direction_predict(state.direction)
    return w * y


def banach_update(state: BanachLearnerState, g_hat: np.ndarray) -> BanachLearnerState:
    """Split the observed gradient into scalar feedback for the bettor and the
    raw vector for the direction learner."""
    g_hat = np.asarray(g_hat, dtype=float)
    if not np.all(np.isfinite(g_hat)):
        raise ValueError("gradient must be finite")
    y = direction_predict(state.direction)
    s = float(np.dot(g_hat, y))
    return BanachLearnerState(
        bettor=update(state.bettor, s, state.bettor_config),
        bettor_config=state.bettor_config,
        direction=direction_update(state.direction, g_hat),
        round=state.round + 1,
    )
