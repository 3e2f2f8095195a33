"""Built-in baseline optimizers.

Baselines are strictly black-box: they receive an ``evaluate(x) ->
(f_alpha, f_beta)`` callable, the dimension, a budget, and a seeded
random generator.  They never see reference sets, ideal/nadir points, or
archive state.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from bibench.suite import DOMAIN_LOWER, DOMAIN_UPPER

__all__ = ["DEFAULT_WEIGHTS", "random_search", "scalarized_hill_climber"]

EvaluateFn = Callable[[np.ndarray], tuple[float, float]]

# The registered hill-climber baseline scans eleven scalarization weights.
DEFAULT_WEIGHTS = tuple(k / 10.0 for k in range(11))


def random_search(
    evaluate: EvaluateFn,
    dimension: int,
    budget: int,
    rng: np.random.Generator,
    lower: float = DOMAIN_LOWER,
    upper: float = DOMAIN_UPPER,
) -> None:
    """Uniform random sampling of the search domain."""
    for _ in range(budget):
        evaluate(rng.uniform(lower, upper, dimension))


def scalarized_hill_climber(
    evaluate: EvaluateFn,
    dimension: int,
    budget: int,
    rng: np.random.Generator,
    weights: Sequence[float] = DEFAULT_WEIGHTS,
    lower: float = DOMAIN_LOWER,
    upper: float = DOMAIN_UPPER,
    initial_step: float = 2.0,
) -> None:
    """(1+1) hill climber on ``w * f_alpha + (1 - w) * f_beta``.

    The budget is split evenly over the weight grid; each weight run
    restarts from a fresh uniform point and adapts its step size with a
    1/5-success rule.
    """
    weights = tuple(weights)
    share, leftover = divmod(budget, len(weights))
    for index, w in enumerate(weights):
        steps = share + (1 if index < leftover else 0)
        if steps == 0:
            continue
        x = rng.uniform(lower, upper, dimension)
        f_alpha, f_beta = evaluate(x)
        score = w * f_alpha + (1.0 - w) * f_beta
        sigma = initial_step
        for _ in range(steps - 1):
            candidate = x + sigma * rng.standard_normal(dimension)
            f_alpha, f_beta = evaluate(candidate)
            trial = w * f_alpha + (1.0 - w) * f_beta
            if trial <= score:
                x, score = candidate, trial
                sigma *= 1.5
            else:
                sigma *= 1.5**-0.25
