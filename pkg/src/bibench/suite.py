"""Mini suite of bi-objective test problems.

Three functions, each the pairing of two shifted single-objective
components minimized over the search domain [-5, 5]^n:

* ``f1`` double sphere: ``f_alpha = |x - a|^2``, ``f_beta = |x - b|^2``.
  The Pareto set is the segment [a, b]; with d = |a - b| the front is
  ``t -> (t^2 d^2, (1 - t)^2 d^2)``, which normalizes to the curve
  ``sqrt(u) + sqrt(v) = 1`` with hypervolume exactly 5/6.
* ``f2`` sphere paired with a separable ellipsoid (condition 100).
* ``f3`` separable ellipsoid paired with a rotated ellipsoid.

Pairing two independently shifted components this way is this suite's own
convention; it is not meant to reproduce any external benchmark's
construction.  Each component attains 0 at its own shift, so the ideal is
exactly (0, 0) for every function; only ``f1`` has an analytic nadir
``(d^2, d^2)``.

Instances are generated by a splitmix64 recurrence (increment
0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and
0x94D049BB133111EB) seeded from the problem key, so any
(function, instance, dimension) triple yields identical parameters on
every platform.  The per-instance stream draws, in order: the shift ``a``
(n doubles in [-4, 4]), the shift ``b`` (n doubles), and for ``f3`` the
n - 1 plane-rotation angles.  Doubles take the top 53 bits of each output
word.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from bibench.core import ObjectiveVector

__all__ = [
    "DIMENSIONS",
    "DOMAIN_LOWER",
    "DOMAIN_UPPER",
    "FUNCTION_IDS",
    "INSTANCE_IDS",
    "SplitMix64",
    "SuiteFunction",
    "analytic_front_oracle",
    "enumerate_problems",
    "get_function",
    "mix_seed",
    "problem_id",
]

FUNCTION_IDS = ("f1", "f2", "f3")
DIMENSIONS = (2, 3, 5, 10)
INSTANCE_IDS = tuple(range(1, 11))

DOMAIN_LOWER = -5.0
DOMAIN_UPPER = 5.0
_SHIFT_LOWER = -4.0
_SHIFT_UPPER = 4.0
ELLIPSOID_CONDITION = 100.0

_MASK64 = (1 << 64) - 1
_SPLITMIX_INCREMENT = 0x9E3779B97F4A7C15
_SPLITMIX_MULT_1 = 0xBF58476D1CE4E5B9
_SPLITMIX_MULT_2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit generator behind instance parameters."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _SPLITMIX_INCREMENT) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _SPLITMIX_MULT_1) & _MASK64
        z = ((z ^ (z >> 27)) * _SPLITMIX_MULT_2) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53


def mix_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed by chaining the splitmix mixer."""
    seed = 0
    for p in parts:
        seed = SplitMix64(seed ^ (p & _MASK64)).next_u64()
    return seed


_FUNCTION_INDEX = {fid: k + 1 for k, fid in enumerate(FUNCTION_IDS)}


def _instance_stream(function_id: str, instance_id: int, dimension: int) -> SplitMix64:
    return SplitMix64(mix_seed(_FUNCTION_INDEX[function_id], instance_id, dimension))


def _conditioning(dimension: int) -> np.ndarray:
    if dimension == 1:
        return np.ones(1)
    exponents = np.arange(dimension) / (dimension - 1)
    return ELLIPSOID_CONDITION**exponents


class SuiteFunction:
    """One problem instance: a pair of component objectives sharing a key.

    ``evaluate`` is pure and does not count evaluations; callers own the
    evaluation counter.
    """

    def __init__(self, function_id: str, instance_id: int, dimension: int) -> None:
        if function_id not in _FUNCTION_INDEX:
            raise ValueError(f"unknown function id {function_id!r}, expected one of {FUNCTION_IDS}")
        if instance_id not in INSTANCE_IDS:
            raise ValueError(f"instance must lie in 1..10, got {instance_id}")
        if dimension < 1:
            raise ValueError(f"dimension must be positive, got {dimension}")
        self.function_id = function_id
        self.instance_id = instance_id
        self.dimension = dimension

        stream = _instance_stream(function_id, instance_id, dimension)
        span = _SHIFT_UPPER - _SHIFT_LOWER
        self.optimum_alpha = np.array(
            [_SHIFT_LOWER + span * stream.next_double() for _ in range(dimension)]
        )
        self.optimum_beta = np.array(
            [_SHIFT_LOWER + span * stream.next_double() for _ in range(dimension)]
        )
        self._d2 = float(np.dot(
            self.optimum_alpha - self.optimum_beta, self.optimum_alpha - self.optimum_beta
        ))
        if self._d2 <= 0.0:
            raise ValueError(f"degenerate instance: identical shifts for {self.key}")

        self._weights = _conditioning(dimension)
        if function_id == "f3":
            angles = [math.tau * stream.next_double() for _ in range(dimension - 1)]
            rotation = np.eye(dimension)
            for j, theta in enumerate(angles):
                plane = np.eye(dimension)
                plane[j, j] = plane[j + 1, j + 1] = math.cos(theta)
                plane[j, j + 1] = -math.sin(theta)
                plane[j + 1, j] = math.sin(theta)
                rotation = plane @ rotation
            self._rotation: np.ndarray | None = rotation
        else:
            self._rotation = None

    @property
    def key(self) -> str:
        return problem_id(self.function_id, self.dimension, self.instance_id)

    @property
    def analytic_ideal(self) -> ObjectiveVector:
        """Exact for every suite function: each component attains 0."""
        return ObjectiveVector(0.0, 0.0)

    @property
    def analytic_nadir(self) -> ObjectiveVector | None:
        """Exact only where the Pareto set is known (``f1``)."""
        if self.function_id == "f1":
            return ObjectiveVector(self._d2, self._d2)
        return None

    def evaluate(self, x: Sequence[float]) -> ObjectiveVector:
        arr = np.asarray(x, dtype=float)
        if arr.shape != (self.dimension,):
            raise ValueError(
                f"{self.key} expects a vector of length {self.dimension}, "
                f"got shape {arr.shape}"
            )
        za = arr - self.optimum_alpha
        zb = arr - self.optimum_beta
        if self.function_id == "f1":
            f_alpha = float(za @ za)
            f_beta = float(zb @ zb)
        elif self.function_id == "f2":
            f_alpha = float(za @ za)
            f_beta = float(self._weights @ (zb * zb))
        else:
            f_alpha = float(self._weights @ (za * za))
            rotated = self._rotation @ zb
            f_beta = float(self._weights @ (rotated * rotated))
        return ObjectiveVector(f_alpha, f_beta)


def analytic_front_oracle(fn: SuiteFunction, t: float) -> ObjectiveVector:
    """Closed-form Pareto-front point of ``f1`` at parameter ``t`` in [0, 1].

    The Pareto set is ``a + t (b - a)``, giving objectives
    ``(t^2 d^2, (1 - t)^2 d^2)``.  Raises for functions without an
    analytic front.
    """
    if fn.function_id != "f1":
        raise ValueError(f"{fn.function_id} has no analytic front oracle")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"front parameter must lie in [0, 1], got {t}")
    d2 = fn._d2
    return ObjectiveVector(t * t * d2, (1.0 - t) * (1.0 - t) * d2)


def problem_id(function_id: str, dimension: int, instance_id: int) -> str:
    """Canonical ``<function>:<dimension>:<instance>`` identifier."""
    return f"{function_id}:{dimension}:{instance_id}"


def get_function(function_id: str, instance_id: int, dimension: int) -> SuiteFunction:
    if dimension not in DIMENSIONS:
        raise ValueError(f"dimension must be one of {DIMENSIONS}, got {dimension}")
    return SuiteFunction(function_id, instance_id, dimension)


def enumerate_problems(
    functions: Sequence[str] | None = None,
    dimensions: Sequence[int] | None = None,
    instances: Sequence[int] | None = None,
) -> tuple[tuple[str, int, int], ...]:
    """All (function_id, dimension, instance_id) triples of the mini suite,
    optionally restricted, in deterministic order."""
    functions = tuple(functions) if functions is not None else FUNCTION_IDS
    dimensions = tuple(dimensions) if dimensions is not None else DIMENSIONS
    instances = tuple(instances) if instances is not None else INSTANCE_IDS
    for fid in functions:
        if fid not in _FUNCTION_INDEX:
            raise ValueError(f"unknown function id {fid!r}, expected one of {FUNCTION_IDS}")
    for dim in dimensions:
        if dim not in DIMENSIONS:
            raise ValueError(f"dimension must be one of {DIMENSIONS}, got {dim}")
    for inst in instances:
        if inst not in INSTANCE_IDS:
            raise ValueError(f"instance must lie in 1..10, got {inst}")
    return tuple(
        (fid, dim, inst) for fid in functions for dim in dimensions for inst in instances
    )
