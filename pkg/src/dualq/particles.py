"""Interacting-particle views of the saturated tandems.

Queues in tandem run as a zero-range process: one site per stage, the site
for stage 1 holding the unserved reservoir, and the front particle of each
site carrying a countdown clock drawn from the service matrix.  Stores in
tandem run as the bus-stop process: a bus of size u(n, K+1-j) calls at
site j every slot and carts off as many particles as it can toward the
next site, arriving there the following slot.

Both reduce to 0/1 exclusion configurations through a gap encoding: one
occupied cell per site followed by one empty cell per resident particle,
downstream sites first.  A bus-stop slot then reads as every marker
jumping right by its bus size, clipped so nobody overtakes, processed left
to right.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import tandem

__all__ = [
    "ZeroRangeState",
    "BusStopState",
    "JumpEvent",
    "zero_range_run",
    "bus_stop_run",
    "bus_stop_step",
    "occupancy_history",
    "occupancy_to_csv",
    "to_exclusion",
    "from_exclusion",
    "exclusion_step",
]


@dataclass(frozen=True)
class JumpEvent:
    """Particle ``particle`` left ``site`` at the end of slot ``slot``."""

    particle: int
    site: int
    slot: int


@dataclass
class ZeroRangeState:
    """Sites in stage order; site 1 holds the reservoir of unserved particles.

    ``sites[j]`` lists resident particle ids front-first; the front of a
    nonempty site carries ``clocks[j]`` remaining service and became front
    at time ``front_since[j]``.
    """

    sites: list
    clocks: list
    front_since: list

    @property
    def counts(self) -> list:
        return [len(s) for s in self.sites]


@dataclass
class BusStopState:
    """Per-site particle counts at a slot boundary, arrivals already landed.

    Site 1 is the reservoir, carried as an explicit finite count that is
    large enough never to run dry over the simulated horizon.
    """

    counts: list
    slot: int = 0


def zero_range_run(U) -> list[JumpEvent]:
    """Run the clock dynamics to completion and log every jump.

    Particle n leaves site j exactly at the queue-tandem departure epoch
    D(n, j); the log therefore has one event per (particle, site) pair.
    Zero clocks pass through a site within a single slot.
    """
    U = tandem._as_matrix(U)
    if U.u.dtype.kind != "i":
        raise ValueError("zero-range clocks need integer entries")
    N, K = U.N, U.K
    u = U.u
    state = ZeroRangeState(
        sites=[deque(range(1, N + 1))] + [deque() for _ in range(K - 1)],
        clocks=[int(u[0, 0])] + [None] * (K - 1),
        front_since=[0] + [0] * (K - 1),
    )
    log: list[JumpEvent] = []
    tally = {"exited": 0}

    def cascade(t):
        # expired fronts jump now; zero clocks chain through several sites
        moved = True
        while moved:
            moved = False
            for j in range(K - 1, -1, -1):
                if not state.sites[j] or state.clocks[j] != 0:
                    continue
                p = state.sites[j].popleft()
                log.append(JumpEvent(particle=p, site=j + 1, slot=t))
                moved = True
                if state.sites[j]:
                    nxt = state.sites[j][0]
                    state.clocks[j] = int(u[nxt - 1, j])
                    state.front_since[j] = t
                else:
                    state.clocks[j] = None
                if j + 1 < K:
                    state.sites[j + 1].append(p)
                    if len(state.sites[j + 1]) == 1:
                        state.clocks[j + 1] = int(u[p - 1, j + 1])
                        state.front_since[j + 1] = t
                else:
                    tally["exited"] += 1

    cascade(0)
    t = 0
    horizon_guard = int(u.sum()) + N * K + 2
    while tally["exited"] < N:
        t += 1
        if t > horizon_guard:
            raise RuntimeError("zero-range run failed to drain")
        for j in range(K):
            if state.sites[j] and state.front_since[j] < t:
                state.clocks[j] -= 1
        cascade(t)
    return log


def bus_stop_step(counts, bus_sizes) -> tuple[list, list]:
    """One synchronous slot of the bus-stop dynamics.

    ``counts[j]`` is what is available at site j+1 this slot (last slot's
    arrivals included); every bus loads min(size, available) and its cargo
    joins the next site's availability for the following slot.  Returns
    (new counts, transported amounts).
    """
    counts = list(counts)
    bus_sizes = list(bus_sizes)
    if len(counts) != len(bus_sizes):
        raise ValueError("need one bus size per site")
    moved = [min(b, c) for b, c in zip(bus_sizes, counts)]
    nxt = [c - m for c, m in zip(counts, moved)]
    for j in range(1, len(counts)):
        nxt[j] += moved[j - 1]
    return nxt, moved


def bus_stop_run(U) -> np.ndarray:
    """Transported amounts, one row per slot and one column per site.

    Column j equals the store-tandem departure column r(., j); in
    particular the last column's total is R(N).
    """
    U = tandem._as_matrix(U)
    N, K = U.N, U.K
    reservoir = U.u[:, K - 1].sum() + 1
    state = BusStopState(counts=[reservoir] + [0] * (K - 1))
    out = np.zeros((N, K), dtype=U.u.dtype)
    for n in range(1, N + 1):
        buses = [U.u[n - 1, K - j] for j in range(1, K + 1)]
        state.counts, moved = bus_stop_step(state.counts, buses)
        state.slot = n
        out[n - 1] = moved
    return out


def to_exclusion(state) -> np.ndarray:
    """Gap encoding of per-site counts as a 0/1 configuration.

    Accepts a state object with ``counts`` or a plain sequence.  Sites are
    written downstream-first: one occupied cell per site, then one empty
    cell per resident particle, with the reservoir's (finite, truncated)
    count ending the configuration.
    """
    counts = list(getattr(state, "counts", state))
    if not counts or any(c < 0 or int(c) != c for c in counts):
        raise ValueError("counts must be nonnegative integers")
    cells = []
    for m in reversed(counts):
        cells.append(1)
        cells.extend([0] * int(m))
    return np.array(cells, dtype=np.int8)


def from_exclusion(config) -> list:
    """Inverse of :func:`to_exclusion`: recover the per-site counts."""
    config = np.asarray(config)
    ones = np.flatnonzero(config == 1)
    if ones.size == 0 or ones[0] != 0:
        raise ValueError("configuration must start at a site marker")
    bounds = np.append(ones, config.size)
    gaps = [int(bounds[i + 1] - bounds[i] - 1) for i in range(ones.size)]
    return gaps[::-1]


def occupancy_history(U, model: str = "bus-stop") -> np.ndarray:
    """Slot-indexed site occupancy snapshots, one row per slot boundary.

    Row t holds the per-site particle counts after slot t (row 0 is the
    initial state).  For the bus-stop model the reservoir column carries
    its truncated count; for the zero-range model the counts are
    reconstructed from the jump log, so they match the clock dynamics
    exactly.
    """
    U = tandem._as_matrix(U)
    N, K = U.N, U.K
    if model == "bus-stop":
        reservoir = U.u[:, K - 1].sum() + 1
        counts = [reservoir] + [0] * (K - 1)
        rows = [list(counts)]
        for n in range(1, N + 1):
            buses = [U.u[n - 1, K - j] for j in range(1, K + 1)]
            counts, _ = bus_stop_step(counts, buses)
            rows.append(list(counts))
        return np.array(rows, dtype=np.int64)
    if model == "zero-range":
        log = zero_range_run(U)
        horizon = max((e.slot for e in log), default=0)
        out = np.zeros((horizon + 1, K), dtype=np.int64)
        out[:, 0] = N
        for e in log:
            out[e.slot:, e.site - 1] -= 1
            if e.site < K:
                out[e.slot:, e.site] += 1
        return out
    raise ValueError(f"unknown model {model!r}; use 'bus-stop' or 'zero-range'")


def occupancy_to_csv(U, fh, model: str = "bus-stop") -> None:
    """Write the occupancy snapshots with a slot column for plotting."""
    hist = occupancy_history(U, model=model)
    K = hist.shape[1]
    fh.write(",".join(["slot"] + [f"site_{j}" for j in range(1, K + 1)]) + "\n")
    for t, row in enumerate(hist):
        fh.write(",".join([str(t)] + [str(int(c)) for c in row]) + "\n")


def exclusion_step(config, bus_sizes) -> np.ndarray:
    """One slot of the store exclusion process, natively on the 0/1 cells.

    Markers (read left to right, i.e. downstream store first) jump right by
    their site's bus size, clipped by the gap to the next marker; cells a
    marker walks past turn into holes behind it.  ``bus_sizes`` is given in
    site order (site 1 drives the rightmost marker).  The configuration
    keeps its length; holes opening at the left edge are departed material.
    """
    out = np.asarray(config, dtype=np.int8).copy()
    positions = np.flatnonzero(out == 1)
    if positions.size != len(bus_sizes):
        raise ValueError("need one bus size per marker")
    n_markers = positions.size
    for i in range(n_markers):
        pos = positions[i]
        limit = positions[i + 1] if i + 1 < n_markers else out.size
        gap = limit - pos - 1
        jump = min(int(bus_sizes[n_markers - 1 - i]), int(gap))
        if jump:
            out[pos] = 0
            out[pos + jump] = 1
            positions[i] = pos + jump
    return out
