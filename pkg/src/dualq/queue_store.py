"""Exact pathwise dynamics of the single-server queue / storage model.

One set of recursions serves both readings.  For the queue, ``A`` are
arrival epochs, ``s`` service times, ``D`` departure epochs and ``w``
waiting times.  For the store, ``s`` is the amount supplied, ``A``-gaps
the amounts requested, ``w`` the stock level and ``r`` the amount sold.
``r_n`` doubles as the time customer n spends at the very back of the
queue; ``(D, r)`` is the output marked sequence.

Everything here is deterministic: integer inputs stay in exact integer
arithmetic, real inputs in double precision.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .sampling import MarkedSequence

__all__ = [
    "QueueTrace",
    "PiecewiseLinear",
    "BusyPeriod",
    "ZigzagTrajectory",
    "lindley_forward",
    "transform",
    "trace_from_arrays",
    "queue_length",
    "workload_pair",
    "busy_periods",
    "zigzag",
    "zigzag_from_trace",
    "enumerate_trajectories",
    "backward_check",
    "trace_to_csv",
]


def _common_dtype(*arrays, extra_scalar=0):
    ints = all(np.asarray(a).dtype.kind in "iub" for a in arrays)
    if ints and float(extra_scalar) == int(extra_scalar):
        return np.int64
    return np.float64


@dataclass(frozen=True)
class QueueTrace:
    """Per-customer input and output of one model run.

    ``A, s, D, w`` have length N; ``r`` has length N-1 because r_n needs
    the next arrival.  Gaps ``a`` and ``d`` are the first differences of
    ``A`` and ``D``.
    """

    A: np.ndarray
    s: np.ndarray
    D: np.ndarray
    w: np.ndarray
    r: np.ndarray

    @property
    def a(self) -> np.ndarray:
        return np.diff(self.A)

    @property
    def d(self) -> np.ndarray:
        return np.diff(self.D)

    def __len__(self) -> int:
        return int(self.A.size)


def lindley_forward(w1, a, s) -> np.ndarray:
    """Waiting times by the forward recursion w_{n+1} = (w_n + s_n - a_n)^+.

    ``a`` holds the gaps between consecutive arrivals (length N-1 for N
    customers), ``s`` the marks; only the first len(a) marks are consumed.
    Returns len(a)+1 values starting at ``w1``.
    """
    a = np.asarray(a)
    s = np.asarray(s)
    if s.size < a.size:
        raise ValueError("need at least one mark per gap")
    if w1 < 0 or (a.size and a.min() < 0) or (s.size and s.min() < 0):
        raise ValueError("w1, gaps and marks must be nonnegative")
    dtype = _common_dtype(a, s, extra_scalar=w1)
    w = np.empty(a.size + 1, dtype=dtype)
    w[0] = w1
    for i in range(a.size):
        w[i + 1] = max(w[i] + s[i] - a[i], 0)
    return w


def trace_from_arrays(A, s, w1=0) -> QueueTrace:
    """Build the full trace from raw epoch/mark arrays.

    D is the running max-plus form seeded with D_1 = A_1 + w1 + s_1, which
    is the closed form of the recursion D_{n+1} = max(D_n, A_{n+1}) + s_{n+1}.
    Marks may be zero here (the saturated-tandem sections need that); use
    :func:`transform` when starting from a validated MarkedSequence.
    """
    A = np.asarray(A)
    s = np.asarray(s)
    if A.size == 0:
        raise ValueError("need at least one customer")
    if A.shape != s.shape or A.ndim != 1:
        raise ValueError("A and s must be 1-d of equal length")
    if w1 < 0:
        raise ValueError("w1 must be nonnegative")
    dtype = _common_dtype(A, s, extra_scalar=w1)
    A = A.astype(dtype)
    s = s.astype(dtype)
    S = np.cumsum(s)
    anchors = A - (S - s)          # A_k - sum_{i<k} s_i
    anchors[0] += dtype(w1)
    D = S + np.maximum.accumulate(anchors)
    # w via w_{n+1} = (D_n - A_{n+1})^+ rather than D - s - A: the clamp
    # makes idle arrivals exactly zero, with no float residue
    w = np.empty_like(D)
    w[0] = dtype(w1)
    np.maximum(D[:-1] - A[1:], 0, out=w[1:])
    r = np.minimum(D[:-1], A[1:]) - A[:-1]
    return QueueTrace(A=A, s=s, D=D, w=w, r=r)


def transform(inp: MarkedSequence, w1=0) -> QueueTrace:
    """Map the input marked sequence to the full output trace."""
    if len(inp) == 0:
        raise ValueError("input must be non-empty")
    return trace_from_arrays(inp.epochs, inp.marks, w1=w1)


def queue_length(trace: QueueTrace, t_grid) -> np.ndarray:
    """Q(t) = #{n : A_n <= t < D_n} on each grid point, right-continuous."""
    t = np.asarray(t_grid)
    arrived = np.searchsorted(trace.A, t, side="right")
    departed = np.searchsorted(trace.D, t, side="right")
    return (arrived - departed).astype(np.int64)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Right-continuous piecewise-linear path.

    Knots carry the value at the knot and the left limit there; the path is
    linear between knots (toward the next knot's left limit) and constant
    zero outside the knot range.
    """

    times: np.ndarray
    values: np.ndarray
    left_values: np.ndarray

    def __call__(self, t):
        return self._eval(np.asarray(t, dtype=float), from_left=False)

    def left_limit(self, t):
        return self._eval(np.asarray(t, dtype=float), from_left=True)

    def _eval(self, t, from_left):
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        times, vals, lefts = self.times, self.values, self.left_values
        n = len(times)
        out = np.zeros(tt.shape)
        if n:
            side = "left" if from_left else "right"
            i = np.searchsorted(times, tt, side=side) - 1
            inside = i >= 0
            ic = np.clip(i, 0, n - 1)
            last = ic == n - 1
            nxt = np.minimum(ic + 1, n - 1)
            span = np.where(last, 1.0, times[nxt] - times[ic])
            slope = np.where(last, 0.0, (lefts[nxt] - vals[ic]) / span)
            lin = vals[ic] + slope * (tt - times[ic])
            if from_left:
                # an exact knot hit from the left returns the declared limit
                lin = np.where(inside & ~last & (tt == times[nxt]), lefts[nxt], lin)
                out = np.where(tt == times[0], lefts[0], np.where(inside, lin, 0.0))
            else:
                out = np.where(inside, lin, 0.0)
        return float(out[0]) if scalar else out


def workload_pair(trace: QueueTrace) -> tuple[PiecewiseLinear, PiecewiseLinear]:
    """Workload W and its dual W-bar as exact piecewise-linear paths.

    W(t) = max over customers in system of (D_n - t), the remaining work;
    W-bar(t) = max of (t - A_n), the age of the oldest customer present.
    Customers count on [A_n, D_n) so both paths are right-continuous and
    vanish exactly off busy periods.  The declared left limit of W at A_n
    is w_n.
    """
    if np.any(trace.s <= 0):
        raise ValueError("workload paths need strictly positive marks")
    A, D, w = trace.A, trace.D, trace.w
    periods = busy_periods(trace)

    wt, wv, wl = [], [], []
    bt, bv, bl = [], [], []
    for per in periods:
        first, last = per.customers.start, per.customers.stop - 1
        bt.append(float(A[first]))
        bv.append(0.0)
        bl.append(0.0)
        for n in range(first, last + 1):
            wt.append(float(A[n]))
            wv.append(float(D[n] - A[n]))
            wl.append(float(w[n]))
            if n < last:
                # departure inside the period: dual drops to the next head's age
                bt.append(float(D[n]))
                bv.append(float(D[n] - A[n + 1]))
                bl.append(float(D[n] - A[n]))
        wt.append(float(D[last]))
        wv.append(0.0)
        wl.append(0.0)
        bt.append(float(D[last]))
        bv.append(0.0)
        bl.append(float(D[last] - A[last]))

    W = PiecewiseLinear(np.array(wt), np.array(wv), np.array(wl))
    Wbar = PiecewiseLinear(np.array(bt), np.array(bv), np.array(bl))
    return W, Wbar


@dataclass(frozen=True)
class BusyPeriod:
    """Maximal stretch with work in the system: [start, end) plus the
    contiguous (0-based) customer indices served in it."""

    start: float
    end: float
    customers: range

    @property
    def length(self) -> float:
        return self.end - self.start


def busy_periods(trace: QueueTrace) -> list[BusyPeriod]:
    """Split the trace into busy periods.

    A new period starts whenever a customer arrives strictly after the
    previous departure; an arrival at the exact departure instant keeps the
    server busy and extends the current period.
    """
    A, D = trace.A, trace.D
    out = []
    first = 0
    for n in range(1, len(trace)):
        if A[n] > D[n - 1]:
            out.append(BusyPeriod(float(A[first]), float(D[n - 1]), range(first, n)))
            first = n
    out.append(BusyPeriod(float(A[first]), float(D[-1]), range(first, len(trace))))
    return out


@dataclass(frozen=True)
class ZigzagTrajectory:
    """Alternating run lengths (up, down, ..., up, down) of one excursion.

    Total rise equals total fall and every partial height stays
    nonnegative; touching zero in the interior is allowed.
    """

    run_lengths: tuple

    def __post_init__(self):
        runs = tuple(self.run_lengths)
        object.__setattr__(self, "run_lengths", runs)
        if len(runs) == 0 or len(runs) % 2:
            raise ValueError("need an even, positive number of runs")
        if any(l <= 0 for l in runs):
            raise ValueError("run lengths must be positive")
        h = 0
        for i, l in enumerate(runs):
            h = h + l if i % 2 == 0 else h - l
            if h < 0:
                raise ValueError("trajectory dips below zero")
        if h != 0:
            raise ValueError("total increase must equal total decrease")

    @property
    def total_rise(self):
        return sum(self.run_lengths[::2])

    @property
    def n_peaks(self) -> int:
        return len(self.run_lengths) // 2

    def reversed(self) -> "ZigzagTrajectory":
        return ZigzagTrajectory(self.run_lengths[::-1])


def zigzag(s, a) -> ZigzagTrajectory:
    """Zigzag trajectory of one busy period.

    ``s`` holds the k marks of the period's customers, ``a`` the k-1 gaps
    between them.  Up-runs are the marks; down-runs are the gaps, and the
    final down-run is whatever height is left when the last service ends.
    Raises if the gaps would break the period in two.
    """
    s = list(np.asarray(s).tolist())
    a = list(np.asarray(a).tolist())
    if len(s) == 0 or len(a) != len(s) - 1:
        raise ValueError("need k marks and k-1 internal gaps")
    runs = []
    h = 0
    for i, si in enumerate(s):
        if si <= 0:
            raise ValueError("marks must be positive within a busy period")
        runs.append(si)
        h += si
        if i < len(a):
            if a[i] <= 0:
                raise ValueError("gaps must be positive")
            if a[i] > h:
                raise ValueError("gap exceeds current workload: not a single busy period")
            runs.append(a[i])
            h -= a[i]
    runs.append(h)
    return ZigzagTrajectory(tuple(runs))


def zigzag_from_trace(trace: QueueTrace, period: BusyPeriod) -> ZigzagTrajectory:
    c = period.customers
    return zigzag(trace.s[c.start:c.stop], trace.a[c.start:c.stop - 1])


def enumerate_trajectories(total_rise: int) -> list[ZigzagTrajectory]:
    """All integer trajectories with the given total rise, by direct walk."""
    out = []

    def grow(runs, h, rise_left):
        up = len(runs) % 2 == 0
        if up:
            if rise_left == 0:
                return
            for l in range(1, rise_left + 1):
                grow(runs + [l], h + l, rise_left - l)
        else:
            for l in range(1, h + 1):
                if l == h and rise_left == 0:
                    out.append(ZigzagTrajectory(tuple(runs + [l])))
                elif l < h or rise_left > 0:
                    grow(runs + [l], h - l, rise_left)

    grow([], 0, total_rise)
    return out


@dataclass(frozen=True)
class BackwardCheckReport:
    ok: bool
    max_error: float
    first_violation: tuple | None


def backward_check(trace: QueueTrace, rel_tol: float | None = None) -> BackwardCheckReport:
    """Verify the backward Lindley recursion and the sojourn identity.

    Checks w_n = (w_{n+1} + r_n - d_{n-1})^+ on interior indices and
    v_n = w_n + s_n = w_{n+1} + r_n wherever r is defined.  Exact for
    integer traces; relative 1e-12 by default for real ones.
    """
    if rel_tol is None:
        rel_tol = 0.0 if trace.A.dtype.kind in "iu" else 1e-12
    scale = max(1.0, float(np.abs(trace.D).max()))
    tol = rel_tol * scale
    w, s, r, d = trace.w, trace.s, trace.r, trace.d
    worst = 0.0
    first = None
    for n in range(len(trace) - 1):
        err = abs(float((w[n] + s[n]) - (w[n + 1] + r[n])))
        if err > worst:
            worst = err
        if err > tol and first is None:
            first = ("sojourn", n + 1, err)
    for n in range(1, len(trace) - 1):
        lhs = w[n]
        rhs = max(w[n + 1] + r[n] - d[n - 1], 0)
        err = abs(float(lhs - rhs))
        if err > worst:
            worst = err
        if err > tol and first is None:
            first = ("backward-lindley", n + 1, err)
    return BackwardCheckReport(ok=first is None, max_error=worst, first_violation=first)


def trace_to_csv(trace: QueueTrace, fh) -> None:
    """Write the per-customer table (n, A, s, D, r, w); r is blank on the last row."""
    writer = csv.writer(fh)
    writer.writerow(["n", "A", "s", "D", "r", "w"])
    for n in range(len(trace)):
        r = trace.r[n] if n < len(trace) - 1 else ""
        writer.writerow([n + 1, trace.A[n], trace.s[n], trace.D[n], r, trace.w[n]])
