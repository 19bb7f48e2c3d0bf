"""Reaction-term catalog and structure analysis.

A Nonlinearity bundles a vectorized source term f on the analysis window
[0, s_max] with an exact (or piecewise-exact) antiderivative F when one is
available. On top of that sit the structural operations the rest of the
package consumes: the zero set E of f, the subset of zeros reachable by
monotone 1-D profiles (F strictly below its value at the zero all the way
up), hypothesis checkers for the three structural conditions the far-field
statements assume, and the reflection that turns a decay problem into a
growth problem.

Catalog names accepted by make():
    logistic        s (1 - s)
    abs-sin         |sin s|
    linear-decay    1 - s
    cantor:<k>      distance to the level-k middle-thirds pre-fractal
    table:<path>    CSV with columns s, f(s); linear interpolation
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import optimize
from scipy.integrate import quad

from .errors import InputError, NumericError

TOL_F_DEFAULT = 1e-10    # |f| at or below this counts as zero
TOL_F_STRICT = 1e-12     # strictness margin for the F-increase test
_RATIO_BAND = 1e-6       # one-sided ratio estimates inside this band are inconclusive
_DELTAS = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7)
_WINDOW_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class Nonlinearity:
    kind: str
    s_max: float
    lipschitz_estimate: float
    fn: Callable = field(repr=False)                      # vectorized, unchecked
    antiderivative_fn: Callable | None = field(default=None, repr=False)
    # exact integral of f over [lo, hi]; must stay accurate in RELATIVE terms
    # when the integral is tiny (profiles divide by it arbitrarily close to a
    # zero, where F(hi)-F(lo) would cancel catastrophically)
    gap_fn: Callable | None = field(default=None, repr=False)
    params: tuple = ()

    def __post_init__(self):
        if not (self.s_max > 0 and math.isfinite(self.s_max)):
            raise InputError(f"analysis window must be positive, got s_max={self.s_max}")


def _f1(nl: Nonlinearity, x: float) -> float:
    return float(nl.fn(np.asarray(x, dtype=float)))


def eval_f(nl: Nonlinearity, s):
    """f(s) for scalar or array s; rejects arguments outside [0, s_max]."""
    arr = np.asarray(s, dtype=float)
    if arr.size and (arr.min() < -_WINDOW_SLACK or arr.max() > nl.s_max + _WINDOW_SLACK):
        raise InputError(
            f"{nl.kind}: argument outside analysis window [0, {nl.s_max:g}] "
            f"(got range [{arr.min():g}, {arr.max():g}])")
    out = nl.fn(np.clip(arr, 0.0, nl.s_max))
    return float(out) if np.isscalar(s) or arr.ndim == 0 else out


def eval_capped(nl: Nonlinearity, s):
    """f evaluated with the argument clipped to the analysis window.

    Iterative solvers may step outside [0, s_max] transiently; they use this
    entry point and validate their final answer instead.
    """
    return nl.fn(np.clip(np.asarray(s, dtype=float), 0.0, nl.s_max))


def antiderivative_F(nl: Nonlinearity, z):
    """F(z) = integral of f from 0 to z, exact when the catalog knows how.

    Falls back to adaptive quadrature (absolute tolerance 1e-12) otherwise.
    """
    arr = np.asarray(z, dtype=float)
    if arr.size and (arr.min() < -_WINDOW_SLACK or arr.max() > nl.s_max + _WINDOW_SLACK):
        raise InputError(
            f"{nl.kind}: antiderivative argument outside [0, {nl.s_max:g}]")
    clipped = np.clip(arr, 0.0, nl.s_max)
    if nl.antiderivative_fn is not None:
        out = nl.antiderivative_fn(clipped)
    else:
        flat = np.atleast_1d(clipped)
        vals = np.empty_like(flat)
        for i, zi in enumerate(flat):
            vi, err = quad(lambda x: _f1(nl, x), 0.0, float(zi),
                           epsabs=1e-12, epsrel=1e-12, limit=500)
            if err > 1e-9:
                raise NumericError(
                    f"{nl.kind}: antiderivative quadrature reached only {err:.2e} "
                    f"absolute error at z={zi:g}")
            vals[i] = vi
        out = vals.reshape(clipped.shape)
    return float(out) if np.isscalar(z) or arr.ndim == 0 else out


def integral_between(nl: Nonlinearity, lo: float, hi: float) -> float:
    """Integral of f over [lo, hi] with relative accuracy even when tiny.

    Catalog members carry closed or piecewise-exact forms; anything else falls
    back to adaptive quadrature in relative mode.
    """
    lo, hi = float(lo), float(hi)
    if hi < lo:
        return -integral_between(nl, hi, lo)
    if hi == lo:
        return 0.0
    if nl.gap_fn is not None:
        return float(nl.gap_fn(lo, hi))
    val, _ = quad(lambda x: _f1(nl, x), lo, hi, epsabs=1e-300, epsrel=1e-12, limit=500)
    return float(val)


def _lipschitz_on_grid(fn, s_max: float) -> float:
    xs = np.linspace(0.0, s_max, 10_001)
    fs = fn(xs)
    h = xs[1] - xs[0]
    quot = np.abs(fs[2:] - fs[:-2]) / (2.0 * h)
    return 1.1 * float(quot.max(initial=0.0))


# ---------------------------------------------------------------------------
# piecewise-linear backbone (cantor + table share it)

class _PiecewiseLinear:
    """f linear between knots; antiderivative exact (piecewise quadratic)."""

    def __init__(self, xs, ys):
        self.xs = np.asarray(xs, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        if self.xs.size < 2 or np.any(np.diff(self.xs) <= 0):
            raise InputError("piecewise-linear table needs at least two strictly increasing knots")
        seg = 0.5 * (self.ys[1:] + self.ys[:-1]) * np.diff(self.xs)
        self.cum = np.concatenate(([0.0], np.cumsum(seg)))

    def __call__(self, s):
        return np.interp(s, self.xs, self.ys)

    def gap(self, lo, hi):
        """Exact integral over [lo, hi]; accurate for tiny values because it
        sums small trapezoids instead of differencing the big antiderivative."""
        if hi <= lo:
            return 0.0
        inner = self.xs[(self.xs > lo) & (self.xs < hi)]
        pts = np.concatenate(([lo], inner, [hi]))
        vals = np.interp(pts, self.xs, self.ys)
        return float(np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(pts)))

    def antiderivative(self, z):
        z = np.asarray(z, dtype=float)
        zc = np.clip(z, self.xs[0], self.xs[-1])
        idx = np.clip(np.searchsorted(self.xs, zc, side="right") - 1, 0, self.xs.size - 2)
        x0 = self.xs[idx]
        f0 = self.ys[idx]
        fz = np.interp(zc, self.xs, self.ys)
        return self.cum[idx] + 0.5 * (zc - x0) * (f0 + fz)


def _cantor_intervals(level: int):
    iv = [(Fraction(0), Fraction(1))]
    for _ in range(level):
        nxt = []
        for a, b in iv:
            t = (b - a) / 3
            nxt.append((a, a + t))
            nxt.append((b - t, b))
        iv = nxt
    return iv


def cantor_prefractal(level: int):
    """The 2^level closed intervals of the level-`level` middle-thirds set, as floats."""
    if not (isinstance(level, int) and 1 <= level <= 16):
        raise InputError(f"cantor level must be an integer in [1, 16], got {level!r}")
    return [(float(a), float(b)) for a, b in _cantor_intervals(level)]


# ---------------------------------------------------------------------------
# catalog constructors

def logistic() -> Nonlinearity:
    fn = lambda s: s * (1.0 - s)
    F = lambda z: 0.5 * z * z - z ** 3 / 3.0

    def gap(lo, hi):
        # factored so the (hi - lo) factor carries the smallness
        return (hi - lo) * (0.5 * (hi + lo) - (hi * hi + hi * lo + lo * lo) / 3.0)

    return Nonlinearity("logistic", 2.0, _lipschitz_on_grid(fn, 2.0), fn, F, gap)


def abs_sin() -> Nonlinearity:
    fn = lambda s: np.abs(np.sin(s))

    def F(z):
        k = np.floor(z / math.pi)
        return 2.0 * k + 1.0 - np.cos(z - k * math.pi)

    def _arch(a, b, k):
        # integral of |sin| over [a, b] within arch k: product form, no cancellation
        return 2.0 * math.sin(0.5 * (b - a)) * abs(math.sin(0.5 * (a + b) - k * math.pi))

    def gap(lo, hi):
        klo = math.floor(lo / math.pi)
        khi = math.floor(hi / math.pi)
        if khi * math.pi == hi and khi > 0:   # right endpoint on an arch boundary
            khi -= 1
        if klo == khi:
            return _arch(lo, hi, klo)
        total = _arch(lo, (klo + 1) * math.pi, klo) + _arch(khi * math.pi, hi, khi)
        return total + 2.0 * (khi - klo - 1)

    return Nonlinearity("abs-sin", 10.0, _lipschitz_on_grid(fn, 10.0), fn, F, gap)


def linear_decay() -> Nonlinearity:
    fn = lambda s: 1.0 - s
    F = lambda z: z - 0.5 * z * z
    gap = lambda lo, hi: (hi - lo) * (1.0 - 0.5 * (hi + lo))
    return Nonlinearity("linear-decay", 10.0, _lipschitz_on_grid(fn, 10.0), fn, F, gap)


def cantor(level: int = 6) -> Nonlinearity:
    """Distance to the level-`level` middle-thirds pre-fractal on [0, 1].

    Zero exactly on the 2^level closed intervals; tent-shaped on the removed
    gaps (so the largest value on [0,1] is 1/6, attained midway across the
    first removed third regardless of level).
    """
    iv = _cantor_intervals(level)
    knots = [iv[0][0]]
    vals = [Fraction(0)]
    for k, (a, b) in enumerate(iv):
        if k > 0:
            prev_b = iv[k - 1][1]
            knots.append((prev_b + a) / 2)
            vals.append((a - prev_b) / 2)
        if a != knots[-1]:
            knots.append(a)
            vals.append(Fraction(0))
        knots.append(b)
        vals.append(Fraction(0))
    pl = _PiecewiseLinear([float(x) for x in knots], [float(v) for v in vals])
    return Nonlinearity(f"cantor:{level}", 1.0, _lipschitz_on_grid(pl, 1.0),
                        pl, pl.antiderivative, pl.gap, params=(level,))


def from_table(s_knots, f_knots, kind: str = "table") -> Nonlinearity:
    xs = np.asarray(s_knots, dtype=float)
    ys = np.asarray(f_knots, dtype=float)
    if xs.size != ys.size:
        raise InputError("table: s and f columns have different lengths")
    if xs.size < 2:
        raise InputError("table: need at least two rows")
    if abs(xs[0]) > 1e-12:
        raise InputError(f"table: first sample must sit at s=0, got {xs[0]:g}")
    pl = _PiecewiseLinear(xs, ys)
    s_max = float(xs[-1])
    return Nonlinearity(kind, s_max, _lipschitz_on_grid(pl, s_max),
                        pl, pl.antiderivative, pl.gap)


def table_from_csv(path: str) -> Nonlinearity:
    xs, ys = [], []
    try:
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    xs.append(float(row[0]))
                    ys.append(float(row[1]))
                except (ValueError, IndexError):
                    if not xs:   # tolerate a single header line
                        continue
                    raise InputError(f"table {path}: bad row {row!r}") from None
    except OSError as exc:
        raise InputError(f"table {path}: {exc}") from exc
    return from_table(xs, ys, kind=f"table:{path}")


def make(spec: str, s_max: float | None = None) -> Nonlinearity:
    """Build a catalog nonlinearity from its config-file name.

    A non-None `s_max` narrows or widens the analysis window; the Lipschitz
    estimate is re-derived for the new window.
    """
    if not isinstance(spec, str):
        raise InputError(f"nonlinearity spec must be a string, got {type(spec).__name__}")
    name, _, arg = spec.partition(":")
    name = name.strip()
    if name == "logistic":
        nl = logistic()
    elif name == "abs-sin":
        nl = abs_sin()
    elif name == "linear-decay":
        nl = linear_decay()
    elif name == "cantor":
        if arg.strip():
            try:
                level = int(arg)
            except ValueError:
                raise InputError(f"cantor level must be an integer, got {arg!r}") from None
        else:
            level = 6
        nl = cantor(level)
    elif name == "table":
        if not arg:
            raise InputError("table nonlinearity needs a path: table:<path>")
        nl = table_from_csv(arg)
    else:
        raise InputError(
            f"unknown nonlinearity {spec!r}; catalog: logistic, abs-sin, "
            f"linear-decay, cantor:<level>, table:<path>")
    if s_max is None:
        return nl
    w = float(s_max)
    if not (w > 0 and math.isfinite(w)):
        raise InputError(f"analysis window must be positive, got s_max={s_max}")
    return replace(nl, s_max=w, lipschitz_estimate=_lipschitz_on_grid(nl.fn, w))


# ---------------------------------------------------------------------------
# zero set

@dataclass(frozen=True)
class ZeroSet:
    """Zeros of f on [0, s_max]: isolated points plus flat closed intervals.

    Also used for the profile-reachable subset, which is always a pure point
    set (flat stretches only ever contribute their left endpoints there).
    """
    points: tuple
    intervals: tuple
    s_max: float
    tol_f: float
    borderline: tuple = ()
    notes: tuple = ()

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "intervals", ivs)
        if any(p < -1e-12 or p > self.s_max + 1e-9 for p in pts):
            raise InputError("zero set: point outside [0, s_max]")
        if list(pts) != sorted(pts):
            raise InputError("zero set: points not sorted")
        for a, b in ivs:
            if not (0.0 - 1e-12 <= a < b <= self.s_max + 1e-9):
                raise InputError("zero set: bad interval")
        for p in pts:
            if any(a - 1e-12 <= p <= b + 1e-12 for a, b in ivs):
                raise InputError("zero set: point inside an interval")

    def all_members(self):
        """Points plus interval endpoints, sorted (for reporting)."""
        vals = list(self.points)
        for a, b in self.intervals:
            vals.extend((a, b))
        return sorted(vals)


def _edge_inward(absfn, tol_f: float, outside: float, inside: float) -> float:
    """Edge of a sub-tolerance run, bisected so |f(edge)| <= tol_f holds.

    A root solve on |f| - tol_f can land a half-ulp outside the run, and the
    reported endpoint must stay usable as a profile target downstream.
    """
    for _ in range(64):
        mid = 0.5 * (outside + inside)
        if absfn(mid) <= tol_f:
            inside = mid
        else:
            outside = mid
    return float(inside)


def zero_set(nl: Nonlinearity, s_max: float | None = None, grid_n: int = 4096,
             tol_f: float = TOL_F_DEFAULT) -> ZeroSet:
    """Scan [0, s_max] for zeros of f.

    Grid scan + three refiners: sign changes go to a bracketing root solve,
    kink/tangential minima go to golden-section, and flat sub-tolerance
    stretches become closed intervals whose edges are re-bisected against the
    tolerance so endpoint error is far below the scan spacing.
    """
    if s_max is None:
        s_max = nl.s_max
    if not (0 < s_max <= nl.s_max + 1e-12):
        raise InputError(f"zero_set: s_max must lie in (0, {nl.s_max:g}]")
    if grid_n < 16:
        raise InputError("zero_set: grid_n too small")
    xs = np.linspace(0.0, s_max, grid_n)
    h = xs[1] - xs[0]
    fs = nl.fn(xs)
    absf = np.abs(fs)
    sub = absf <= tol_f

    points, intervals = [], []

    def absfn(x):
        return abs(_f1(nl, x))

    # flat runs and isolated sub-tolerance samples
    i = 0
    while i < grid_n:
        if not sub[i]:
            i += 1
            continue
        j = i
        while j + 1 < grid_n and sub[j + 1]:
            j += 1
        if j == i:
            points.append(float(xs[i]))
        else:
            left = xs[i]
            if i > 0:
                left = _edge_inward(absfn, tol_f, xs[i - 1], xs[i])
            right = xs[j]
            if j + 1 < grid_n:
                right = _edge_inward(absfn, tol_f, xs[j + 1], xs[j])
            intervals.append((float(left), float(right)))
        i = j + 1

    # sign changes between samples
    for i in np.nonzero(fs[:-1] * fs[1:] < 0.0)[0]:
        if sub[i] or sub[i + 1]:
            continue
        r = optimize.brentq(lambda x: _f1(nl, x), xs[i], xs[i + 1],
                            xtol=1e-14, rtol=8.9e-16)
        points.append(float(r))

    # kink or tangential minima of |f| that the grid does not resolve to tol
    interior = np.nonzero((absf[1:-1] < absf[:-2]) & (absf[1:-1] < absf[2:])
                          & ~sub[1:-1])[0] + 1
    for i in interior:
        if absf[i] > 0.5 * h * max(1.0, nl.lipschitz_estimate):
            continue   # cannot dip to zero within one cell
        try:
            res = optimize.minimize_scalar(absfn, bracket=(xs[i - 1], xs[i], xs[i + 1]),
                                           method="golden", options={"xtol": 1e-13})
        except ValueError:
            continue
        if abs(res.fun) <= tol_f:
            points.append(float(res.x))

    # merge: drop points swallowed by intervals, dedupe, sort
    cleaned = []
    for p in sorted(points):
        if any(a - h * 0.5 <= p <= b + h * 0.5 for a, b in intervals):
            continue
        if cleaned and p - cleaned[-1] < 1e-9 * max(1.0, s_max):
            continue
        cleaned.append(min(max(p, 0.0), s_max))
    return ZeroSet(tuple(cleaned), tuple(sorted(intervals)), float(s_max), tol_f)


def _antiderivative_grid(nl: Nonlinearity, zs: np.ndarray) -> np.ndarray:
    """F on a dense increasing grid; exact path when available, else
    cumulative composite Simpson on a refined grid (internal helper)."""
    if nl.antiderivative_fn is not None:
        return np.asarray(nl.antiderivative_fn(zs), dtype=float)
    fine = np.linspace(zs[0], zs[-1], 4 * (zs.size - 1) + 1)
    fv = nl.fn(fine)
    hh = fine[1] - fine[0]
    # Simpson over consecutive pairs of fine cells = one coarse-half segment
    pair = (fv[0:-2:2] + 4.0 * fv[1:-1:2] + fv[2::2]) * (hh / 3.0)
    cum = np.concatenate(([0.0], np.cumsum(pair)))
    return np.interp(zs, fine[::2], cum)


def compute_Zf(nl: Nonlinearity, s_max: float | None = None, grid_n: int = 100_000,
               tol_f: float = TOL_F_DEFAULT, tol_F: float = TOL_F_STRICT) -> ZeroSet:
    """Zeros z0 whose antiderivative strictly dominates everything below.

    Membership test: F(z0) - F(z) > tol_F for every grid point z at or below
    z0 - h_grid. The origin joins whenever f(0) <= tol_f (its condition is
    vacuous); that convention is recorded in the notes. Candidates whose
    margin sits inside [-tol_F, tol_F] are reported separately as borderline
    rather than guessed either way.
    """
    if s_max is None:
        s_max = nl.s_max
    E = zero_set(nl, s_max=s_max, grid_n=max(4096, min(grid_n, 65_536)), tol_f=tol_f)

    candidates = list(E.points)
    for a, b in E.intervals:
        candidates.extend((a, b))
    candidates = sorted(set(candidates))

    zs = np.linspace(0.0, s_max, grid_n)
    h_grid = zs[1] - zs[0]
    Fs = _antiderivative_grid(nl, zs)
    prefix = np.maximum.accumulate(Fs)

    members, borderline, notes = [], [], []
    for z0 in candidates:
        j = int(np.searchsorted(zs, z0 - h_grid, side="right")) - 1
        if j < 0:
            if abs(_f1(nl, z0)) <= tol_f:
                members.append(z0)
                if z0 <= h_grid:
                    notes.append("origin included by convention: f(0)=0 and the "
                                 "strict-increase condition below 0 is vacuous")
            continue
        margin = float(antiderivative_F(nl, z0)) - float(prefix[j])
        if margin > tol_F:
            members.append(z0)
        elif margin >= -tol_F:
            borderline.append(z0)

    return ZeroSet(tuple(members), (), float(s_max), tol_f,
                   borderline=tuple(borderline), notes=tuple(notes))


# ---------------------------------------------------------------------------
# hypothesis checkers

@dataclass(frozen=True)
class HypothesisReport:
    """Verdicts for the three structural conditions.

    Each verdict is True / False / None, with None meaning a one-sided ratio
    estimate landed inside the inconclusive band and we refuse to guess.
    Ratio lists hold (zero, estimated liminf ratio) pairs.
    """
    h1: bool | None
    mu: float | None
    mu_prime: float | None
    origin_ratio: float | None
    h2: bool | None
    h2_ratios: tuple
    h3: bool | None
    h3_ratios: tuple
    notes: tuple = ()


def _verdict_from_ratio(r: float):
    if r > _RATIO_BAND:
        return True
    if r < -_RATIO_BAND:
        return False
    return None


def check_hypotheses(nl: Nonlinearity, s_max: float | None = None,
                     tol_f: float = TOL_F_DEFAULT) -> HypothesisReport:
    """Numerically probe the three structural conditions on [0, s_max].

    One-sided liminf ratios are estimated as the minimum of f(z +- d)/(+-d)
    over d in {1e-3 ... 1e-7}; estimates inside the +-1e-6 band come back as
    inconclusive (None), never as a silent pass.
    """
    if s_max is None:
        s_max = nl.s_max
    notes = []
    xs = np.linspace(0.0, s_max, 8001)
    h = xs[1] - xs[0]
    fs = nl.fn(xs)

    # --- first condition: positive hump then nonpositive tail
    h1: bool | None = True
    mu = mu_prime = None
    pos = fs > tol_f
    if pos[1:].any():
        i_last = int(np.nonzero(pos)[0][-1])
    else:
        i_last = 0
    if i_last >= len(xs) - 1:
        h1 = False
        notes.append("no nonpositive tail inside the window: f > 0 up to s_max")
    else:
        # refine mu where f comes down through zero
        lo, hi = xs[i_last], xs[i_last + 1]
        if _f1(nl, lo) > tol_f and _f1(nl, hi) < -tol_f:
            mu = float(optimize.brentq(lambda x: _f1(nl, x), lo, hi,
                                       xtol=1e-14, rtol=8.9e-16))
        else:
            a, b = lo, hi
            for _ in range(60):
                mid = 0.5 * (a + b)
                if _f1(nl, mid) > tol_f:
                    a = mid
                else:
                    b = mid
            mu = float(b)
        body = fs[1:i_last + 1][xs[1:i_last + 1] < mu - h]
        if body.size and body.min() <= tol_f:
            h1 = False
            notes.append("f touches zero strictly between 0 and mu")
        tail = fs[xs > mu + h]
        if tail.size and tail.max() > tol_f:
            h1 = False
            notes.append("f pops back above zero beyond mu")
    if h1 and mu is not None:
        k = int(np.searchsorted(xs, mu)) - 1
        k = max(k, 1)
        j = k
        while j - 1 >= 0 and fs[j - 1] >= fs[j] - 1e-12:
            j -= 1
        if xs[j] < mu - h:
            mu_prime = float(xs[j])
        else:
            h1 = False
            notes.append("no nonincreasing window immediately left of mu")

    origin_ratio = None
    if h1:
        f0 = float(fs[0])
        if f0 > tol_f:
            origin_ratio = math.inf
        elif f0 >= -tol_f:
            usable = [d for d in _DELTAS if d <= s_max]
            origin_ratio = min(_f1(nl, d) / d for d in usable)
            v = _verdict_from_ratio(origin_ratio)
            if v is False:
                h1 = False
                notes.append("slope ratio at the origin is negative")
            elif v is None:
                h1 = None
                notes.append("slope ratio at the origin is inconclusive")
        else:
            h1 = False
            notes.append("f(0) < 0")

    E = zero_set(nl, s_max=s_max, tol_f=tol_f)

    # --- second condition: f >= 0 and definite right-slope at every zero
    h2: bool | None = True
    h2_ratios = []
    if fs.min() < -tol_f:
        h2 = False
        notes.append(f"f dips below zero near s={xs[int(np.argmin(fs))]:.6g}")
    for z in E.points:
        usable = [d for d in _DELTAS if z + d <= s_max]
        if not usable:
            notes.append(f"zero at the window edge s={z:.6g}: right ratio not estimable")
            continue
        r = min(_f1(nl, z + d) / d for d in usable)
        h2_ratios.append((z, r))
        v = _verdict_from_ratio(r)
        if v is False and h2 is not False:
            h2 = False
        elif v is None and h2 is True:
            h2 = None
            notes.append(f"right ratio at zero s={z:.6g} is inconclusive")
    for a, b in E.intervals:
        h2_ratios.append((a, 0.0))
        if h2 is not False:
            h2 = False
            notes.append(f"flat zero stretch [{a:.6g}, {b:.6g}] kills the right-slope condition")

    # --- third condition: definite left-slope at zeros beyond mu
    h3: bool | None
    h3_ratios = []
    if h1 is not True or mu is None:
        h3 = None
        notes.append("left-slope condition not evaluated: no positive hump structure")
    else:
        h3 = True
        beyond = [z for z in E.points if z > mu + 1e-9]
        for z in beyond:
            usable = [d for d in _DELTAS if z - d >= 0.0]
            r = min(-_f1(nl, z - d) / d for d in usable)
            h3_ratios.append((z, r))
            v = _verdict_from_ratio(r)
            if v is False and h3 is not False:
                h3 = False
            elif v is None and h3 is True:
                h3 = None
                notes.append(f"left ratio at zero s={z:.6g} is inconclusive")
        for a, b in E.intervals:
            if a > mu + 1e-9:
                h3_ratios.append((a, 0.0))
                if h3 is not False:
                    h3 = False
                    notes.append(f"flat zero stretch beyond mu at [{a:.6g}, {b:.6g}]")

    return HypothesisReport(h1, mu, mu_prime, origin_ratio,
                            h2, tuple(h2_ratios), h3, tuple(h3_ratios),
                            notes=tuple(notes))


# ---------------------------------------------------------------------------
# reflection

def reflect(nl: Nonlinearity, M_prime: float, m: float) -> Nonlinearity:
    """Flip f about the level M'+1: g(s) = -f(M'+1-s) while that argument
    stays at or above m, constant -f(m) beyond.

    Used to convert trailing-decay questions into growth questions. Needs the
    source window to reach M'+1.
    """
    if not (0.0 <= m <= M_prime):
        raise InputError(f"reflect: need 0 <= m <= M', got m={m:g}, M'={M_prime:g}")
    c = M_prime + 1.0
    if c > nl.s_max + 1e-12:
        raise InputError(
            f"reflect: source window [0, {nl.s_max:g}] does not cover M'+1 = {c:g}")
    edge = c - m
    f_at_m = _f1(nl, m)
    F_at_c = float(antiderivative_F(nl, c))

    def g(s):
        s = np.asarray(s, dtype=float)
        inner = np.clip(c - s, 0.0, nl.s_max)
        return np.where(s <= edge, -nl.fn(inner), -f_at_m)

    Fsrc = nl.antiderivative_fn

    def G(z):
        z = np.asarray(z, dtype=float)
        zc = np.minimum(z, edge)
        if Fsrc is not None:
            head = Fsrc(np.clip(c - zc, 0.0, nl.s_max)) - F_at_c
        else:
            head = antiderivative_F(nl, np.clip(c - zc, 0.0, nl.s_max)) - F_at_c
        return head + np.where(z > edge, (z - edge) * (-f_at_m), 0.0)

    def gap_g(lo, hi):
        total = 0.0
        b1 = min(hi, edge)
        if b1 > lo:
            total -= integral_between(nl, c - b1, c - lo)
        if hi > edge:
            total += (hi - max(lo, edge)) * (-f_at_m)
        return total

    s_max_g = edge + 1.0
    return Nonlinearity(f"reflect({nl.kind},{M_prime:g},{m:g})", s_max_g,
                        _lipschitz_on_grid(g, s_max_g), g, G, gap_g,
                        params=(M_prime, m))
