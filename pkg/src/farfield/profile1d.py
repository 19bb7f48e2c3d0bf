"""Monotone 1-D limit profiles rising from 0 to a reachable zero of f.

The profile solves V'' + f(V) = 0 with V(0) = 0, V nondecreasing, V -> z,
which pins the launch slope to sqrt(2 F(z)) and gives the first integral
W^2 = 2 (F(z) - F(V)). Construction inverts the quadrature

    xi(V) = integral_0^V  dsigma / sqrt(2 (F(z) - F(sigma)))

on a mesh graded toward V = z (log approach; the endpoint is softened by the
substitution sigma = z - t^2, and the first segment by sigma = u^2 for the
f(0) > 0 case). Every profile is then cross-checked against a completely
separate route: direct RK4 integration of the launch problem. The two must
agree to 1e-6 or construction fails loudly.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.interpolate import CubicHermiteSpline

from . import nonlinearity as nlm
from .errors import ConsistencyError, InfeasibleProfileError, InputError, NumericError
from .nonlinearity import Nonlinearity, integral_between
from .odes import integrate

_CROSSCHECK_TOL = 1e-6
# stop comparing once within this distance of the limit: the launch route's
# error is amplified like exp(xi) there, so the window must end while the
# amplification is still a few orders below the check tolerance
_CROSSCHECK_FLOOR = 1e-3
_MESH_LOW = 384       # uniform-in-V part up to 0.9 z
_MESH_TAIL = 384      # geometric approach of the limit


@dataclass(eq=False)
class Profile1D:
    z: float
    slope0: float
    xi: np.ndarray
    values: np.ndarray
    w: np.ndarray
    crosscheck: float = 0.0      # max |quadrature route - ODE route|
    xi_attained: float = 0.0     # where the mesh reaches z - exit_tol

    def __len__(self):
        return self.xi.size


def shoot_slope(nl: Nonlinearity, z: float, tol_f: float = nlm.TOL_F_DEFAULT) -> float:
    """Launch slope sqrt(2 F(z)) of the profile ending at z."""
    if not (0.0 <= z <= nl.s_max + 1e-12):
        raise InputError(f"shoot_slope: z={z:g} outside [0, {nl.s_max:g}]")
    if z <= 1e-14:
        if abs(nlm._f1(nl, 0.0)) > tol_f:
            raise InfeasibleProfileError("zero profile needs f(0) = 0")
        return 0.0
    if abs(nlm._f1(nl, z)) > tol_f:
        raise InfeasibleProfileError(f"z={z:g} is not a zero of f (f(z)={nlm._f1(nl, z):.3e})")
    Fz = integral_between(nl, 0.0, z)
    if Fz <= 0.0:
        raise InfeasibleProfileError(f"F(z)={Fz:.3e} <= 0 at z={z:g}: no real launch slope")
    return float(np.sqrt(2.0 * Fz))


def integrate_profile_ode(nl: Nonlinearity, z: float, xi_grid, slope_delta: float = 0.0,
                          tol: float = 1e-11, events=None):
    """Direct RK4 route: integrate V'' = -f(V) from (0, slope0 + slope_delta).

    Returns (V samples, W samples, raw ode result). The reaction term is
    evaluated with its argument clipped to the analysis window so overshoot
    experiments remain well defined.
    """
    xi_grid = np.asarray(xi_grid, dtype=float)
    slope0 = shoot_slope(nl, z) + slope_delta

    def rhs(t, y):
        return np.array([y[1], -float(nl.fn(np.clip(y[0], 0.0, nl.s_max)))])

    res = integrate(rhs, 0.0, np.array([0.0, slope0]), float(xi_grid[-1]),
                    tol=tol, sample_ts=xi_grid, events=events)
    filled = res.samples_filled
    return res.sample_ys[:filled, 0], res.sample_ys[:filled, 1], res


def _xi_quadrature_mesh(nl: Nonlinearity, z: float, exit_tol: float):
    """Graded V-mesh and cumulative xi(V) with endpoint-softening substitutions."""
    if 0.1 * z <= exit_tol:
        raise InputError(f"compute_profile: z={z:g} too small for exit_tol={exit_tol:g}")
    v_low = np.linspace(0.0, 0.9 * z, _MESH_LOW + 1)
    t_hi = np.geomspace(np.sqrt(0.1 * z), np.sqrt(exit_tol), _MESH_TAIL + 1)
    v_mesh = np.concatenate((v_low, z - t_hi[1:] ** 2))

    gaps = np.array([integral_between(nl, v, z) for v in v_mesh])
    if np.any(gaps[:-1] <= 0.0):
        bad = v_mesh[:-1][gaps[:-1] <= 0.0][0]
        raise InfeasibleProfileError(
            f"profile to z={z:g} is non-attaining: F(z) - F({bad:g}) <= 0 below z")
    if gaps[-1] <= 0.0:
        raise InfeasibleProfileError(
            f"profile to z={z:g}: first integral vanishes already at z - {exit_tol:g}")
    w_mesh = np.sqrt(2.0 * gaps)

    def integrand(sigma):
        return 1.0 / np.sqrt(2.0 * integral_between(nl, sigma, z))

    xi_nodes = np.empty_like(v_mesh)
    xi_nodes[0] = 0.0
    # Deep in the tail the integrand picks up relative noise eps*z/(z-sigma)
    # from forming z - t^2; a xi error there moves V by only W * dxi, so the
    # budget below weights each segment's quad error by the local slope and
    # the raw roundoff warning is expected rather than alarming.
    err_v = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for k in range(v_mesh.size - 1):
            a, b = v_mesh[k], v_mesh[k + 1]
            if k == 0:
                # sigma = u^2 kills the 1/sqrt(sigma) start when f(0) > 0
                val, err = quad(lambda u: 2.0 * u * integrand(u * u),
                                0.0, np.sqrt(b), epsabs=1e-13, epsrel=1e-11, limit=200)
            elif a >= 0.9 * z - 1e-15:
                # sigma = z - t^2 softens the approach of the limit
                ta, tb = np.sqrt(z - a), np.sqrt(z - b)
                val, err = quad(lambda t: 2.0 * t * integrand(z - t * t),
                                tb, ta, epsabs=1e-13, epsrel=1e-11, limit=200)
            else:
                val, err = quad(integrand, a, b, epsabs=1e-13, epsrel=1e-11, limit=200)
            xi_nodes[k + 1] = xi_nodes[k] + val
            err_v += err * w_mesh[k]
    if err_v > 1e-9:
        raise NumericError(
            f"profile quadrature: slope-weighted error bound {err_v:.2e} too large")
    return v_mesh, w_mesh, xi_nodes


def compute_profile(nl: Nonlinearity, z: float, xi_max: float = 10.0, n: int = 2048,
                    exit_tol: float = 1e-8, tol_f: float = nlm.TOL_F_DEFAULT) -> Profile1D:
    """Build the profile ending at z on a uniform grid of n+1 points.

    Quadrature-and-inversion is the primary route (cubic Hermite inversion
    with the exact first-integral slopes); an independent RK4 launch is run
    on the same grid and the maximum disagreement is stored. Beyond the xi
    where the mesh reaches z - exit_tol the profile is clamped at that value.
    """
    if xi_max <= 0 or n < 8:
        raise InputError("compute_profile: need xi_max > 0 and n >= 8")
    xi = np.linspace(0.0, xi_max, n + 1)

    if z <= 1e-14:
        if abs(nlm._f1(nl, 0.0)) > tol_f:
            raise InfeasibleProfileError("zero profile needs f(0) = 0")
        zeros = np.zeros_like(xi)
        return Profile1D(0.0, 0.0, xi, zeros, zeros.copy(), 0.0, xi_max)

    slope0 = shoot_slope(nl, z, tol_f=tol_f)
    v_mesh, w_mesh, xi_nodes = _xi_quadrature_mesh(nl, z, exit_tol)
    spline = CubicHermiteSpline(xi_nodes, v_mesh, w_mesh)

    values = np.where(xi <= xi_nodes[-1], spline(np.minimum(xi, xi_nodes[-1])), v_mesh[-1])
    values = np.maximum.accumulate(np.clip(values, 0.0, v_mesh[-1]))
    w = np.sqrt(2.0 * np.maximum(
        np.array([integral_between(nl, v, z) for v in values]), 0.0))

    # The launch problem is unstable along the limit (deviations grow like
    # exp(xi) once V hugs z), so the direct route is only compared while the
    # profile is still a fixed distance below its limit.
    n_chk = max(int(np.searchsorted(values, z - _CROSSCHECK_FLOOR, side="right")), 2)
    n_chk = min(n_chk, xi.size)
    v_ode, _, _ = integrate_profile_ode(nl, z, xi[:n_chk], tol=1e-11)
    crosscheck = float(np.max(np.abs(values[:v_ode.size] - v_ode)))
    if crosscheck > _CROSSCHECK_TOL:
        raise ConsistencyError(
            f"profile construction routes disagree by {crosscheck:.3e} at z={z:g} "
            f"(quadrature inversion vs direct launch)")

    return Profile1D(float(z), float(slope0), xi, values, w,
                     crosscheck, float(xi_nodes[-1]))


@dataclass(eq=False)
class ProbeReport:
    """Outcome of launching with a perturbed slope (connectedness probe)."""
    z: float
    delta: float
    sign: int
    event: str            # crossed_limit | stalled_below | returned_to_zero | left_window | none
    xi_event: float | None
    v_event: float | None
    w_event: float | None
    xi: np.ndarray
    v: np.ndarray
    w: np.ndarray


def disconnectedness_probe(nl: Nonlinearity, z: float, delta: float, sign: int,
                           xi_max: float = 40.0, n: int = 1024) -> ProbeReport:
    """Launch with slope sqrt(2F(z)) + sign*delta and watch where it fails.

    A positive kick makes the trajectory cross the limit value and keep
    going; a negative kick makes it stall below and turn around. delta = 0
    reproduces the profile itself (event "none"). This is the numerical
    witness that distinct limit values have separated launch slopes.
    """
    if delta < 0 or sign not in (-1, 0, 1):
        raise InputError("probe: need delta >= 0 and sign in {-1, 0, 1}")
    xi = np.linspace(0.0, xi_max, n + 1)
    kick = sign * delta

    events = [
        lambda t, y: y[0] - z,            # reaches the limit value
        lambda t, y: y[1],                # slope vanishes below the limit
        lambda t, y: y[0],                # falls back to the floor
        lambda t, y: y[0] - nl.s_max,     # leaves the analysis window
    ]
    names = {0: "crossed_limit", 1: "stalled_below", 2: "returned_to_zero", 3: "left_window"}

    v, w, res = integrate_profile_ode(nl, z, xi, slope_delta=kick, tol=1e-11, events=events)
    if res.event_index is None:
        event, xe, ve, we = "none", None, None, None
    else:
        event = names[res.event_index]
        xe, ve, we = float(res.event_t), float(res.event_y[0]), float(res.event_y[1])
    return ProbeReport(float(z), float(delta), int(sign), event, xe, ve, we,
                       xi[:v.size], v, w)


def profile_residual(p: Profile1D, nl: Nonlinearity) -> float:
    """Max |second difference + f(V)| over interior nodes of the profile grid."""
    if p.xi.size < 3:
        raise InputError("profile_residual: need at least 3 nodes")
    h = p.xi[1] - p.xi[0]
    lap = (p.values[:-2] - 2.0 * p.values[1:-1] + p.values[2:]) / (h * h)
    return float(np.max(np.abs(lap + nlm.eval_capped(nl, p.values[1:-1]))))


def save_profile_csv(p: Profile1D, path: str) -> None:
    """Write xi,V,W rows with 17 significant digits (lossless round trip)."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["xi", "V", "W"])
        for x, v, s in zip(p.xi, p.values, p.w):
            wr.writerow([f"{x:.17g}", f"{v:.17g}", f"{s:.17g}"])


def load_profile_csv(path: str):
    """Read back a profile CSV; returns (xi, V, W) arrays."""
    xi, v, w = [], [], []
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd, None)
        if header is None or [c.strip() for c in header[:3]] != ["xi", "V", "W"]:
            raise InputError(f"{path}: expected header xi,V,W")
        for row in rd:
            xi.append(float(row[0]))
            v.append(float(row[1]))
            w.append(float(row[2]))
    return np.asarray(xi), np.asarray(v), np.asarray(w)
