"""Seeded samplers for the model input laws and marked-sequence reversal.

All randomness flows through counter-based Philox streams keyed by
``(master, stream)``; identical keys reproduce identical draws regardless
of execution order, and distinct keys give independent streams, so
replications can be farmed out in any schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Seed",
    "MarkedSequence",
    "RateParams",
    "sample_geometric",
    "sample_geometric0",
    "sample_exponential",
    "sample_input",
    "reverse",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Seed:
    """Philox key: ``master`` names the experiment, ``stream`` the sub-stream."""

    master: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.master & _MASK64, self.stream & _MASK64], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "Seed":
        """Child seed ``index``; children occupy a disjoint block of the stream space."""
        if index < 0:
            raise ValueError("substream index must be >= 0")
        return Seed(self.master, ((self.stream << 32) + index + 1) & _MASK64)


@dataclass(frozen=True)
class MarkedSequence:
    """Finite window of strictly increasing epochs carrying positive marks.

    Epochs are real for the exponential model and integer for the geometric
    one; the window is ``[0, window_end]`` with every epoch inside it.
    """

    epochs: np.ndarray
    marks: np.ndarray
    window_end: float

    def __post_init__(self):
        epochs = np.asarray(self.epochs)
        marks = np.asarray(self.marks)
        object.__setattr__(self, "epochs", epochs)
        object.__setattr__(self, "marks", marks)
        if epochs.ndim != 1 or epochs.shape != marks.shape:
            raise ValueError("epochs and marks must be 1-d and of equal length")
        if epochs.size:
            if np.any(np.diff(epochs) <= 0):
                raise ValueError("epochs must be strictly increasing")
            if np.any(marks <= 0):
                raise ValueError("marks must be positive")
            if epochs[-1] > self.window_end:
                raise ValueError("epochs must not exceed window_end")

    def __len__(self) -> int:
        return int(self.epochs.size)


@dataclass(frozen=True)
class RateParams:
    """Input law of the single-server model.

    ``mm1``: Poisson arrivals of rate ``arrival``, exponential marks of rate
    ``service``.  ``geomgeom1``: geometric gaps with parameter ``arrival``
    (p) and geometric marks with parameter ``service`` (q), both on
    {1, 2, ...}.  Construction enforces the stability condition.
    """

    model: str
    arrival: float
    service: float

    def __post_init__(self):
        if self.model not in ("mm1", "geomgeom1"):
            raise ValueError(f"unknown model {self.model!r}; use 'mm1' or 'geomgeom1'")
        if self.model == "mm1":
            if not 0 < self.arrival < self.service:
                raise ValueError("mm1 requires 0 < arrival rate < service rate")
        else:
            if not 0 < self.arrival < self.service < 1:
                raise ValueError("geomgeom1 requires 0 < p < q < 1")

    @property
    def utilization(self) -> float:
        # traffic intensity; same ratio in both models
        return self.arrival / self.service


def sample_geometric(p: float, n: int, seed: Seed) -> np.ndarray:
    """``n`` i.i.d. draws with P{X=k} = (1-p)^(k-1) p on {1, 2, ...}.

    Inverse CDF on the integer grid; one uniform per draw, no rejection.
    """
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    if n < 0:
        raise ValueError("n must be >= 0")
    u = seed.generator().random(n)
    with np.errstate(divide="ignore"):
        x = np.floor(np.log1p(-u) / np.log1p(-p)) + 1
    return x.astype(np.int64)


def sample_geometric0(q: float, n: int, seed: Seed) -> np.ndarray:
    """``n`` i.i.d. draws with P{X=k} = (1-q) q^k on {0, 1, 2, ...}.

    The zero-inclusive companion of :func:`sample_geometric`; this is the
    entry law of the stochastic tandems.
    """
    if not 0 <= q < 1:
        raise ValueError("q must lie in [0, 1)")
    if n < 0:
        raise ValueError("n must be >= 0")
    if q == 0:
        return np.zeros(n, dtype=np.int64)
    u = seed.generator().random(n)
    return np.floor(np.log1p(-u) / np.log(q)).astype(np.int64)


def sample_exponential(rate: float, n: int, seed: Seed) -> np.ndarray:
    """``n`` i.i.d. Exp(rate) draws (mean 1/rate), by inverse CDF."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    if n < 0:
        raise ValueError("n must be >= 0")
    u = seed.generator().random(n)
    return -np.log1p(-u) / rate


def sample_input(params: RateParams, horizon: int, seed: Seed) -> MarkedSequence:
    """First ``horizon`` customers of the model input.

    Epochs are cumulative sums of i.i.d. gaps, marks ride the epochs;
    the window ends at the last epoch.  Customer-indexed on purpose:
    truncating by time would censor the mark statistics at the boundary.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if params.model == "mm1":
        gaps = sample_exponential(params.arrival, horizon, seed.substream(0))
        marks = sample_exponential(params.service, horizon, seed.substream(1))
    else:
        gaps = sample_geometric(params.arrival, horizon, seed.substream(0))
        marks = sample_geometric(params.service, horizon, seed.substream(1))
    epochs = np.cumsum(gaps)
    return MarkedSequence(epochs, marks, window_end=epochs[-1])


def reverse(ms: MarkedSequence) -> MarkedSequence:
    """Time-reversal about the window ``[0, window_end]``.

    Epoch t maps to window_end - t (order restored by flipping), and mark i
    of the output is the mark that rode epoch n+1-i of the input.
    """
    return MarkedSequence(
        ms.window_end - ms.epochs[::-1],
        ms.marks[::-1].copy(),
        ms.window_end,
    )
