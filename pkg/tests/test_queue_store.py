import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dualq.queue_store import (
    backward_check,
    busy_periods,
    enumerate_trajectories,
    lindley_forward,
    queue_length,
    trace_from_arrays,
    trace_to_csv,
    transform,
    workload_pair,
    zigzag,
    zigzag_from_trace,
)
from dualq.sampling import MarkedSequence, RateParams, Seed, sample_input


# --- independent oracles -----------------------------------------------------

def departures_brute(A, s, w1=0):
    """Sup form D_n = max(A_1 + w1 + sums, max_k [A_k + sum_{i=k..n} s_i])."""
    N = len(A)
    D = []
    for n in range(N):
        best = A[0] + w1 + sum(s[0:n + 1])
        for k in range(1, n + 1):
            best = max(best, A[k] + sum(s[k:n + 1]))
        D.append(best)
    return D


def waits_brute(a, s):
    """w_1 = 0; w_n = max over k<=n-1 of (sum_{i=k..n-1} (s_i - a_i))^+ ."""
    N = len(a) + 1
    w = [0]
    for n in range(1, N):
        best = 0
        for k in range(n):
            best = max(best, sum(s[i] - a[i] for i in range(k, n)))
        w.append(max(best, 0))
    return w


def random_trace(master, model="geomgeom1", n=30, w1=0):
    params = (RateParams("geomgeom1", 0.3, 0.6) if model == "geomgeom1"
              else RateParams("mm1", 0.4, 0.9))
    return transform(sample_input(params, n, Seed(master)), w1=w1)


# --- lindley -----------------------------------------------------------------

def test_lindley_trivial_drift():
    assert lindley_forward(0, [2, 2], [1, 1]).tolist() == [0, 0, 0]


def test_lindley_hand_example():
    assert lindley_forward(0, [1, 2, 1], [3, 1, 2]).tolist() == [0, 2, 1, 2]


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=25))
def test_lindley_matches_sup_form(pairs):
    a = [p[0] for p in pairs]
    s = [p[1] for p in pairs]
    assert lindley_forward(0, a, s).tolist() == waits_brute(a, s)


def test_lindley_rejects_negative():
    with pytest.raises(ValueError):
        lindley_forward(0, [-1], [1])
    with pytest.raises(ValueError):
        lindley_forward(-1, [1], [1])


# --- transform ---------------------------------------------------------------

def test_transform_single_customer():
    tr = transform(MarkedSequence(np.array([0]), np.array([5]), 0))
    assert tr.D.tolist() == [5]
    assert tr.r.size == 0
    assert tr.w.tolist() == [0]


def test_transform_hand_example():
    tr = trace_from_arrays([0, 3], [5, 1])
    assert tr.D.tolist() == [5, 6]
    assert tr.r.tolist() == [3]
    assert tr.w.tolist() == [0, 2]
    # conservation r_1 + d_1 = a_1 + s_2
    assert tr.r[0] + tr.d[0] == tr.a[0] + tr.s[1]


def test_transform_integer_dtype_is_exact():
    tr = random_trace(5)
    assert tr.D.dtype == np.int64


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 2**32))
def test_transform_matches_brute_force_int(master):
    tr = random_trace(master, n=25)
    assert tr.D.tolist() == departures_brute(tr.A.tolist(), tr.s.tolist())
    assert tr.w.tolist() == waits_brute(tr.a.tolist(), tr.s.tolist())


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 2**32))
def test_transform_matches_brute_force_float(master):
    tr = random_trace(master, model="mm1", n=25)
    scale = float(tr.D.max())
    D = departures_brute(tr.A.tolist(), tr.s.tolist())
    w = waits_brute(tr.a.tolist(), tr.s.tolist())
    assert np.allclose(tr.D, D, rtol=1e-12, atol=1e-12 * scale)
    assert np.allclose(tr.w, w, rtol=1e-12, atol=1e-12 * scale)


@settings(deadline=None, max_examples=30)
@given(st.integers(0, 2**32), st.integers(0, 7))
def test_trace_invariants(master, w1):
    tr = random_trace(master, n=30, w1=w1)
    assert tr.w[0] == w1
    assert np.all(tr.w >= 0)
    assert np.array_equal(tr.D, tr.A + tr.w + tr.s)
    assert np.array_equal(tr.r, np.minimum(tr.D[:-1], tr.A[1:]) - tr.A[:-1])
    assert np.array_equal(tr.r, tr.s[:-1] + tr.w[:-1] - tr.w[1:])
    assert np.array_equal(tr.r + tr.d, tr.a + tr.s[1:])


def test_transform_with_initial_backlog():
    tr = trace_from_arrays([0, 3], [5, 1], w1=4)
    assert tr.D.tolist() == [9, 10]
    assert tr.w.tolist() == [4, 6]


# --- queue length ------------------------------------------------------------

def test_queue_length_examples():
    tr = trace_from_arrays([0, 3], [5, 1])
    assert queue_length(tr, [-1]).tolist() == [0]
    assert queue_length(tr, [4]).tolist() == [2]
    assert queue_length(tr, [5.5]).tolist() == [1]


def test_queue_length_jumps_exactly_at_arrivals_and_departures():
    tr = random_trace(77, model="mm1", n=40)
    eps = 1e-9
    events = np.concatenate([tr.A, tr.D])
    up = down = 0
    for t in events:
        delta = int(queue_length(tr, [t])[0] - queue_length(tr, [t - eps])[0])
        if delta > 0:
            up += delta
        else:
            down -= delta
    assert up == len(tr)
    assert down == len(tr)
    # nothing else jumps: sample midpoints between events
    grid = np.sort(events)
    mids = (grid[:-1] + grid[1:]) / 2
    q_left = queue_length(tr, mids - eps)
    q_right = queue_length(tr, mids)
    assert np.array_equal(q_left, q_right)


# --- workload ----------------------------------------------------------------

def test_workload_hand_example():
    tr = trace_from_arrays([0, 3], [5, 1])
    W, Wbar = workload_pair(tr)
    assert W(0) == 5
    assert W(3) == 3
    assert W.left_limit(3) == 2  # equals w_2
    assert W(6) == 0
    assert Wbar(0) == 0
    # at t=4.5 customer 1 (arrived at 0) is still the oldest in system
    assert Wbar(4.5) == 4.5
    # just after D_1=5 the head is customer 2, aged t - 3
    assert Wbar(5.2) == pytest.approx(2.2)


def test_workload_idle_stretch_vanishes():
    tr = trace_from_arrays([0, 100], [1, 1])
    W, Wbar = workload_pair(tr)
    for t in [2, 50, 99.5]:
        assert W(t) == 0
        assert Wbar(t) == 0


def test_workload_left_limit_is_wait():
    tr = random_trace(9, model="mm1", n=50)
    W, _ = workload_pair(tr)
    for n in range(len(tr)):
        assert W.left_limit(tr.A[n]) == pytest.approx(tr.w[n], rel=1e-12, abs=1e-9)


def test_workload_zero_sets_coincide():
    tr = random_trace(10, model="mm1", n=60)
    W, Wbar = workload_pair(tr)
    grid = np.linspace(-1, float(tr.D[-1]) + 1, 2000)
    wv = W(grid)
    bv = Wbar(grid)
    assert np.array_equal(wv == 0, bv == 0)
    assert np.all(wv >= 0) and np.all(bv >= 0)


def test_workload_against_definition_on_grid():
    tr = random_trace(11, model="mm1", n=40)
    W, Wbar = workload_pair(tr)
    grid = np.linspace(0, float(tr.D[-1]) + 1, 500)
    for t in grid:
        active = (tr.A <= t) & (t < tr.D)
        w_direct = float((tr.D[active] - t).max()) if active.any() else 0.0
        b_direct = float((t - tr.A[active]).max()) if active.any() else 0.0
        assert W(t) == pytest.approx(w_direct, rel=1e-12, abs=1e-9)
        assert Wbar(t) == pytest.approx(b_direct, rel=1e-12, abs=1e-9)


# --- busy periods ------------------------------------------------------------

def test_busy_single_customer():
    tr = trace_from_arrays([2], [3])
    periods = busy_periods(tr)
    assert len(periods) == 1
    assert (periods[0].start, periods[0].end) == (2, 5)
    assert periods[0].customers == range(0, 1)


def test_busy_hand_example():
    tr = trace_from_arrays([0, 3, 100], [5, 1, 2])
    periods = busy_periods(tr)
    assert [(p.start, p.end) for p in periods] == [(0, 6), (100, 102)]
    assert [p.customers for p in periods] == [range(0, 2), range(2, 3)]


def test_busy_idle_partition():
    tr = random_trace(13, n=60)
    periods = busy_periods(tr)
    busy = sum(p.length for p in periods)
    idle = sum(periods[i + 1].start - periods[i].end for i in range(len(periods) - 1))
    assert busy + idle == tr.D[-1] - tr.A[0]
    # arrival at the exact departure instant keeps the period going
    for p in periods[1:]:
        assert p.start > tr.D[p.customers.start - 1]


# --- zigzag ------------------------------------------------------------------

def test_zigzag_one_customer():
    assert zigzag([4], []).run_lengths == (4, 4)


def test_zigzag_hand_example():
    # second customer arrives during the first service
    assert zigzag([3, 2], [1]).run_lengths == (3, 1, 2, 4)


def test_zigzag_balance_property():
    tr = random_trace(17, n=80)
    for p in busy_periods(tr):
        t = zigzag_from_trace(tr, p)
        assert sum(t.run_lengths[::2]) == sum(t.run_lengths[1::2])


def test_zigzag_rejects_broken_period():
    with pytest.raises(ValueError):
        zigzag([1, 1], [5])


def test_zigzag_touching_zero_inside_is_fine():
    # gap equal to the current height: path touches zero and continues
    t = zigzag([2, 3], [2])
    assert t.run_lengths == (2, 2, 3, 3)


def test_enumerate_trajectories_catalan_counts():
    assert [len(enumerate_trajectories(L)) for L in range(1, 5)] == [1, 2, 5, 14]


def test_trajectory_reversal_is_valid():
    for t in enumerate_trajectories(4):
        r = t.reversed()
        assert r.total_rise == t.total_rise
        assert r.n_peaks == t.n_peaks


# --- backward relations ------------------------------------------------------

def test_backward_check_hand_example():
    assert backward_check(trace_from_arrays([0, 3], [5, 1])).ok


def test_backward_check_all_idle():
    tr = trace_from_arrays([0, 100, 200], [1, 1, 1])
    assert np.all(tr.w == 0)
    assert backward_check(tr).ok


@settings(deadline=None, max_examples=50)
@given(st.integers(0, 2**32))
def test_backward_check_random(master):
    assert backward_check(random_trace(master, n=40)).ok
    assert backward_check(random_trace(master, model="mm1", n=40)).ok


# --- csv ---------------------------------------------------------------------

def test_trace_csv():
    tr = trace_from_arrays([0, 3], [5, 1])
    buf = io.StringIO()
    trace_to_csv(tr, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "n,A,s,D,r,w"
    assert lines[1] == "1,0,5,5,3,0"
    assert lines[2] == "2,3,1,6,,2"
