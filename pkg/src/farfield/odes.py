"""Classical 4th-order Runge-Kutta with step doubling and event location.

Deliberately hand-rolled: the 1-D profiles are built by quadrature and then
cross-checked against this integrator, so the two routes must not share code
with any library solver. Step control is the textbook scheme: take one full
step and two half steps, compare, accept when the difference passes the
tolerance, and use the extrapolated (locally 5th-order) value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError

_SAFETY = 0.9
_GROW_MAX = 4.0
_SHRINK_MIN = 0.1


def _rk4_step(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass
class OdeResult:
    t: float                      # time integration actually ended at
    y: np.ndarray                 # state there
    sample_ts: np.ndarray | None = None
    sample_ys: np.ndarray | None = None   # shape (len(sample_ts), dim)
    event_index: int | None = None
    event_t: float | None = None
    event_y: np.ndarray | None = None
    n_steps: int = 0
    rejected: int = 0
    samples_filled: int = field(default=0, repr=False)


def _double_step(rhs, t, y, h):
    """One h-step vs two h/2-steps; returns (y_fine, err_inf)."""
    y_big = _rk4_step(rhs, t, y, h)
    y_half = _rk4_step(rhs, t, y, 0.5 * h)
    y_fine = _rk4_step(rhs, t + 0.5 * h, y_half, 0.5 * h)
    err = np.max(np.abs(y_fine - y_big)) / 15.0
    return y_fine + (y_fine - y_big) / 15.0, err


def _locate_event(rhs, t, y, h, gfun, g0):
    """Bisect the step fraction at which gfun first changes sign."""
    lo, hi = 0.0, h
    y_hi = None
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        y_mid = _rk4_step(rhs, t, y, mid)
        if g0 * gfun(t + mid, y_mid) <= 0.0:
            hi, y_hi = mid, y_mid
        else:
            lo = mid
        if hi - lo < 1e-15 * max(1.0, abs(t) + h):
            break
    if y_hi is None:
        y_hi = _rk4_step(rhs, t, y, hi)
    return t + hi, y_hi


def integrate(rhs, t0, y0, t1, tol=1e-10, h0=None, hmin=1e-13,
              hmax=None, sample_ts=None, events=None, max_steps=2_000_000):
    """Integrate y' = rhs(t, y) from t0 to t1 (t1 > t0).

    sample_ts: increasing times inside [t0, t1]; the stepper lands on each
    exactly, so sampled states carry no interpolation error.
    events: list of scalar functions g(t, y); integration stops at the first
    sign change of any of them, located by bisection inside the step.
    """
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    t = float(t0)
    if t1 <= t0:
        raise NumericError("integrate: need t1 > t0")
    if hmax is None:
        hmax = (t1 - t0) / 16.0
    h = h0 if h0 is not None else min(hmax, (t1 - t0) / 100.0)

    res = OdeResult(t=t, y=y)
    if sample_ts is not None:
        sample_ts = np.asarray(sample_ts, dtype=float)
        res.sample_ts = sample_ts
        res.sample_ys = np.empty((sample_ts.size, y.size))
        while res.samples_filled < sample_ts.size and sample_ts[res.samples_filled] <= t:
            res.sample_ys[res.samples_filled] = y
            res.samples_filled += 1

    g_prev = None
    if events:
        g_prev = [g(t, y) for g in events]

    steps = 0
    while t < t1:
        if steps >= max_steps:
            raise NumericError(f"integrate: step budget exhausted at t={t:.6g}")
        h = min(h, hmax, t1 - t)
        if sample_ts is not None and res.samples_filled < sample_ts.size:
            nxt = sample_ts[res.samples_filled]
            if nxt > t:
                h = min(h, nxt - t)
        h = max(h, hmin)

        y_new, err = _double_step(rhs, t, y, h)
        scale = tol * (1.0 + np.max(np.abs(y)))
        if err > scale and h > hmin:
            res.rejected += 1
            h *= max(_SHRINK_MIN, _SAFETY * (scale / err) ** 0.2)
            continue
        steps += 1

        t_new = t + h
        if events:
            g_new = [g(t_new, y_new) for g in events]
            hit = None
            for k, (a, b) in enumerate(zip(g_prev, g_new)):
                if a != 0.0 and a * b <= 0.0:
                    hit = k
                    break
            if hit is not None:
                te, ye = _locate_event(rhs, t, y, h, events[hit], g_prev[hit])
                if sample_ts is not None:
                    while (res.samples_filled < sample_ts.size
                           and sample_ts[res.samples_filled] <= te):
                        st = sample_ts[res.samples_filled]
                        res.sample_ys[res.samples_filled] = _rk4_step(rhs, t, y, st - t)
                        res.samples_filled += 1
                res.t, res.y = te, ye
                res.event_index, res.event_t, res.event_y = hit, te, ye
                res.n_steps = steps
                return res
            g_prev = g_new

        if sample_ts is not None:
            while (res.samples_filled < sample_ts.size
                   and sample_ts[res.samples_filled] <= t_new + 1e-15 * max(1.0, t_new)):
                st = sample_ts[res.samples_filled]
                if st >= t_new:
                    res.sample_ys[res.samples_filled] = y_new
                else:
                    res.sample_ys[res.samples_filled] = _rk4_step(rhs, t, y, st - t)
                res.samples_filled += 1

        t, y = t_new, y_new
        if err > 0.0:
            h *= min(_GROW_MAX, _SAFETY * (scale / err) ** 0.2)
        else:
            h *= _GROW_MAX

    res.t, res.y, res.n_steps = t, y, steps
    return res
