"""Saturated tandems of K queues and of K stores driven by one matrix.

``u[i, j]`` (1-based in the math, 0-based in the arrays) is the service of
customer i at queue j, and equally the request at time slot i in store
K+1-j: the stages are crossed in opposite orders by the two readings.
Queue 1 starts with infinitely many customers; store 1 with infinite
stock; everything else starts empty.

The two observables are D(N, K), the departure instant of customer N from
the last queue, and R(N), the cumulative amount shipped by the last store
over slots 1..N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ServiceMatrix",
    "TandemTrace",
    "queue_departures",
    "store_flow",
    "tandem_outputs",
    "tandem_trace",
    "queue_departures_batch",
    "store_departures_batch",
    "matrix_to_csv",
    "matrix_from_csv",
]


@dataclass(frozen=True)
class ServiceMatrix:
    """N x K array of nonnegative service requirements / requests.

    Integer entries give exact integer dynamics; real entries (used by the
    exponential ensemble checks) run in double precision.  Zeros are
    allowed everywhere.
    """

    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u)
        if u.ndim != 2 or u.size == 0:
            raise ValueError("u must be a non-empty 2-d array")
        if np.any(u < 0):
            raise ValueError("entries must be nonnegative")
        if u.dtype.kind in "iub":
            u = u.astype(np.int64)
        else:
            u = u.astype(np.float64)
        object.__setattr__(self, "u", u)

    @property
    def N(self) -> int:
        return self.u.shape[0]

    @property
    def K(self) -> int:
        return self.u.shape[1]


def _as_matrix(U) -> ServiceMatrix:
    return U if isinstance(U, ServiceMatrix) else ServiceMatrix(np.asarray(U))


@dataclass(frozen=True)
class TandemTrace:
    """Joint queue/store run of one saturated tandem.

    ``Dmat`` is (N+1) x (K+1) with a zero boundary so that
    D(n, k) = max(D(n-1, k), D(n, k-1)) + u(n, k).  ``rmat[n-1, k-1]`` is
    the amount store k ships during slot n, and ``wmat[n-1, k-1]`` the
    stock of store k at the start of slot n (so w(k, k) = 0: material
    needs k-1 slots to propagate down the line).  Store 1 is the infinite
    reservoir; its tracked stock is recorded as zero.
    """

    Dmat: np.ndarray
    rmat: np.ndarray
    wmat: np.ndarray
    R_seq: np.ndarray
    D_seq: np.ndarray


def queue_departures(U) -> np.ndarray:
    """Departure epochs of the queue tandem, zero-padded boundary included."""
    U = _as_matrix(U)
    u = U.u
    D = np.zeros((U.N + 1, U.K + 1), dtype=u.dtype)
    for n in range(1, U.N + 1):
        for k in range(1, U.K + 1):
            D[n, k] = max(D[n - 1, k], D[n, k - 1]) + u[n - 1, k - 1]
    return D


def store_flow(U) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-slot store departures, stocks, and cumulative output of store K.

    Store j's request at slot n is u(n, K+1-j); what store j ships at slot
    n reaches store j+1 at slot n+1.  Store 1 always meets its request.
    Returns (rmat, wmat, R_seq) with R_seq the running total shipped by
    store K.
    """
    U = _as_matrix(U)
    u = U.u
    N, K = U.N, U.K
    r = np.zeros((N, K), dtype=u.dtype)
    w = np.zeros((N + 1, K), dtype=u.dtype)
    r[:, 0] = u[:, K - 1]
    for k in range(2, K + 1):
        req = u[:, K - k]
        for n in range(1, N + 1):
            inflow = r[n - 2, k - 2] if n >= 2 else 0
            avail = w[n - 1, k - 1] + inflow
            r[n - 1, k - 1] = min(avail, req[n - 1])
            w[n, k - 1] = avail - r[n - 1, k - 1]
    R_seq = np.cumsum(r[:, K - 1])
    return r, w, R_seq


def tandem_trace(U) -> TandemTrace:
    U = _as_matrix(U)
    Dmat = queue_departures(U)
    rmat, wmat, R_seq = store_flow(U)
    return TandemTrace(Dmat=Dmat, rmat=rmat, wmat=wmat, R_seq=R_seq,
                       D_seq=Dmat[1:, U.K])


def tandem_outputs(U, upto_N: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Prefixes (D(1..n, K), R(1..n)) of the two departure sequences."""
    U = _as_matrix(U)
    n = U.N if upto_N is None else upto_N
    if not 1 <= n <= U.N:
        raise ValueError("upto_N must lie in 1..N")
    trace = tandem_trace(U)
    return trace.D_seq[:n].copy(), trace.R_seq[:n].copy()


def queue_departures_batch(u: np.ndarray) -> np.ndarray:
    """D(., ., K-column) recursion vectorised over the leading axis.

    ``u`` has shape (reps, N, K); returns D of shape (reps, N+1, K+1).
    Same arithmetic as :func:`queue_departures`, checked against it in the
    test suite.
    """
    u = np.asarray(u)
    reps, N, K = u.shape
    D = np.zeros((reps, N + 1, K + 1), dtype=u.dtype)
    for n in range(1, N + 1):
        for k in range(1, K + 1):
            D[:, n, k] = np.maximum(D[:, n - 1, k], D[:, n, k - 1]) + u[:, n - 1, k - 1]
    return D


def store_departures_batch(u: np.ndarray) -> np.ndarray:
    """R_seq (cumulative output of store K) vectorised over the leading axis."""
    u = np.asarray(u)
    reps, N, K = u.shape
    r = np.zeros((reps, N, K), dtype=u.dtype)
    w = np.zeros((reps, N + 1, K), dtype=u.dtype)
    r[:, :, 0] = u[:, :, K - 1]
    for k in range(2, K + 1):
        req = u[:, :, K - k]
        for n in range(1, N + 1):
            inflow = r[:, n - 2, k - 2] if n >= 2 else 0
            avail = w[:, n - 1, k - 1] + inflow
            r[:, n - 1, k - 1] = np.minimum(avail, req[:, n - 1])
            w[:, n, k - 1] = avail - r[:, n - 1, k - 1]
    return np.cumsum(r[:, :, K - 1], axis=1)


def matrix_to_csv(U, fh) -> None:
    """One row per customer, one column per queue index."""
    U = _as_matrix(U)
    fmt = "%d" if U.u.dtype.kind == "i" else "%.17g"
    np.savetxt(fh, U.u, delimiter=",", fmt=fmt)


def matrix_from_csv(fh) -> ServiceMatrix:
    u = np.loadtxt(fh, delimiter=",", ndmin=2)
    if np.all(u == np.floor(u)):
        u = u.astype(np.int64)
    return ServiceMatrix(u)
