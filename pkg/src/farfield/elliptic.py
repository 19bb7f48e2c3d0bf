"""Finite-difference solvers for Delta u + f(u) = 0 on truncated domains.

Two domain kinds share one 5-point stencil:

  quarter : [0, L1] x [0, L2], trace at x1 = 0, hard floor u = 0 at x2 = 0,
            zero-flux (mirror ghost) at x1 = L1 and x2 = L2;
  half    : [0, L1] x x2-periodic strip, trace at x1 = 0, zero-flux at
            x1 = L1;
  torus   : periodic in both directions, no boundary data at all.

Unknowns are every node except the trace column and (quarter) the floor row.
Three solve strategies are provided and cross-validated in the tests:

  newton   : damped Newton on the sparse system, direct factorization;
  monotone : Picard iteration u_{k+1} = (K - Delta)^{-1} (K u_k + f(u_k))
             with K above the Lipschitz bound, which preserves ordering and
             marches monotonically from a super- or subsolution;
  auto     : explicit parabolic flow to get into the attracting basin, then
             Newton to finish. The flow step selects the state the evolution
             actually reaches, which matters when several plateaus exist.

The reaction term is always evaluated with its argument clipped to the
analysis window; solutions that finish outside the window are flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.sparse import csr_matrix, diags, identity
from scipy.sparse.linalg import bicgstab, splu

from . import nonlinearity as nlm
from .errors import ConsistencyError, InputError, NumericError
from .grids import Field, Grid2D, _check_kind, as_trace
from .nonlinearity import Nonlinearity, eval_capped, integral_between
from .odes import integrate

_DIRECT_MAX = 256 * 256       # unknown count up to which we factorize directly
_NEWTON_MAX_ITER = 60
_FLOW_MAX_STEPS = 200_000
_WINDOW_SLACK = 1e-8


# ---------------------------------------------------------------------------
# stencil application on full arrays (vectorized, used by flow and residuals)

def _extended(u: np.ndarray, kind: str) -> np.ndarray:
    """Pad with mirror ghosts (and, quarter only, a top mirror column)."""
    n1p, m = u.shape
    if kind == "quarter":
        E = np.empty((n1p + 1, m + 1))
        E[:n1p, :m] = u
        E[n1p, :m] = u[n1p - 2, :]          # right ghost: mirror across x1 = L1
        E[:n1p, m] = u[:, m - 2]            # top ghost: mirror across x2 = L2
        E[n1p, m] = u[n1p - 2, m - 2]
        return E
    E = np.empty((n1p + 1, m))
    E[:n1p] = u
    E[n1p] = u[n1p - 2]
    return E


def laplacian_full(u: np.ndarray, grid: Grid2D, kind: str) -> np.ndarray:
    """5-point Laplacian at the unknown nodes (shape (n1, width))."""
    h2 = grid.h * grid.h
    if kind == "torus":
        return (np.roll(u, 1, axis=0) + np.roll(u, -1, axis=0)
                + np.roll(u, 1, axis=1) + np.roll(u, -1, axis=1) - 4.0 * u) / h2
    E = _extended(u, kind)
    n1 = grid.n1
    if kind == "quarter":
        n2 = grid.n2
        return (E[2:n1 + 2, 1:n2 + 1] + E[0:n1, 1:n2 + 1]
                + E[1:n1 + 1, 2:n2 + 2] + E[1:n1 + 1, 0:n2]
                - 4.0 * E[1:n1 + 1, 1:n2 + 1]) / h2
    mid = E[1:-1]
    return (E[2:] + E[:-2] + np.roll(mid, 1, axis=1) + np.roll(mid, -1, axis=1)
            - 4.0 * mid) / h2


def _unknown_block(u: np.ndarray, kind: str) -> np.ndarray:
    if kind == "torus":
        return u
    return u[1:, 1:] if kind == "quarter" else u[1:, :]


def residual_max(nl: Nonlinearity, u: np.ndarray, grid: Grid2D, kind: str) -> float:
    lap = laplacian_full(u, grid, kind)
    return float(np.max(np.abs(lap + eval_capped(nl, _unknown_block(u, kind)))))


# ---------------------------------------------------------------------------
# sparse operator on the unknown vector

def assemble_laplacian(grid: Grid2D, kind: str, trace: np.ndarray | None):
    """Sparse Laplacian L and boundary vector b with Delta u = L u + b.

    Unknown ordering is row-major over (i = 1..n1, j over the x2 nodes that
    are unknowns). Mirror ghosts double the inward coefficient on zero-flux
    edges; Dirichlet data lands in b. The torus wraps both directions and
    has b = 0.
    """
    _check_kind(kind)
    n1, n2, h2 = grid.n1, grid.n2, grid.h * grid.h
    if kind == "torus":
        return _assemble_torus(grid), np.zeros(n1 * n2)
    width = n2 if kind == "quarter" else grid.n2
    nun = n1 * width
    rows, cols, vals = [], [], []
    b = np.zeros(nun)

    def add(k, kk, v):
        rows.append(k)
        cols.append(kk)
        vals.append(v)

    for i in range(1, n1 + 1):
        for jj in range(width):
            k = (i - 1) * width + jj
            add(k, k, -4.0 / h2)
            # west / east in x1
            if i == 1:
                j_node = jj + 1 if kind == "quarter" else jj
                b[k] += trace[j_node] / h2
            else:
                add(k, k - width, 1.0 / h2)
            if i == n1:
                add(k, k - width, 1.0 / h2)     # mirror ghost beyond x1 = L1
            else:
                add(k, k + width, 1.0 / h2)
            # south / north in x2
            if kind == "quarter":
                if jj == 0:
                    pass                        # floor node is 0: no entry, no b
                else:
                    add(k, k - 1, 1.0 / h2)
                if jj == width - 1:
                    add(k, k - 1, 1.0 / h2)     # mirror ghost beyond x2 = L2
                else:
                    add(k, k + 1, 1.0 / h2)
            else:
                add(k, (i - 1) * width + (jj - 1) % width, 1.0 / h2)
                add(k, (i - 1) * width + (jj + 1) % width, 1.0 / h2)

    L = csr_matrix((vals, (rows, cols)), shape=(nun, nun))
    L.sum_duplicates()
    return L, b


def _assemble_torus(grid: Grid2D):
    n1, n2, h2 = grid.n1, grid.n2, grid.h * grid.h
    nun = n1 * n2
    rows, cols, vals = [], [], []
    for i in range(n1):
        for j in range(n2):
            k = i * n2 + j
            rows += [k, k, k, k, k]
            cols += [k, ((i - 1) % n1) * n2 + j, ((i + 1) % n1) * n2 + j,
                     i * n2 + (j - 1) % n2, i * n2 + (j + 1) % n2]
            vals += [-4.0 / h2, 1.0 / h2, 1.0 / h2, 1.0 / h2, 1.0 / h2]
    L = csr_matrix((vals, (rows, cols)), shape=(nun, nun))
    L.sum_duplicates()
    return L


def _vec(u: np.ndarray, kind: str) -> np.ndarray:
    return _unknown_block(u, kind).ravel()


def _unvec(v: np.ndarray, u_template: np.ndarray, kind: str) -> np.ndarray:
    u = u_template.copy()
    blk = _unknown_block(u, kind)
    blk[...] = v.reshape(blk.shape)
    return u


def _fprime_numeric(nl: Nonlinearity, v: np.ndarray, delta: float = 1e-7) -> np.ndarray:
    up = eval_capped(nl, v + delta)
    dn = eval_capped(nl, v - delta)
    return (up - dn) / (2.0 * delta)


def _linear_solve(A, rhs):
    n = A.shape[0]
    if n <= _DIRECT_MAX:
        return splu(A.tocsc()).solve(rhs)
    # mirror ghosts make the stencil nonsymmetric, so no cg here
    x, info = bicgstab(A, rhs, rtol=1e-10, atol=0.0, maxiter=20 * n)
    if info != 0:
        raise NumericError(f"iterative linear solve failed (info={info})")
    return x


# ---------------------------------------------------------------------------
# solvers

def newton_solve(nl: Nonlinearity, grid: Grid2D, kind: str, trace: np.ndarray,
                 u0: np.ndarray, tol: float = 1e-9,
                 max_iter: int = _NEWTON_MAX_ITER) -> Field:
    """Damped Newton iteration from u0 (full array, boundary rows included)."""
    L, b = assemble_laplacian(grid, kind, trace)
    u = u0.copy()
    v = _vec(u, kind)

    def res(vv):
        return L @ vv + b + eval_capped(nl, vv)

    r = res(v)
    rn = float(np.max(np.abs(r)))
    it = 0
    while rn > tol and it < max_iter:
        J = L + diags(_fprime_numeric(nl, v))
        step = _linear_solve(J.tocsc(), -r)
        lam = 1.0
        while lam > 1.0 / 1024.0:
            v_try = v + lam * step
            r_try = res(v_try)
            if np.max(np.abs(r_try)) <= (1.0 - 0.25 * lam) * rn:
                break
            lam *= 0.5
        else:
            v_try = v + lam * step
            r_try = res(v_try)
        v, r = v_try, r_try
        rn = float(np.max(np.abs(r)))
        it += 1
    if rn > tol:
        raise NumericError(f"newton did not reach tol={tol:g}: residual {rn:.3e} "
                           f"after {it} iterations")
    u = _unvec(v, u0, kind)
    return _finish(nl, u, grid, kind, {"method": "newton", "iterations": it})


def monotone_iterate(nl: Nonlinearity, grid: Grid2D, kind: str, trace: np.ndarray,
                     start: np.ndarray, direction: str = "above",
                     sub: np.ndarray | None = None, sup: np.ndarray | None = None,
                     tol: float = 1e-9, max_iter: int = 100_000) -> Field:
    """Order-preserving Picard sweep from a super- or subsolution.

    With K above the Lipschitz bound of f the map
      u -> (K - Delta)^{-1} (K u + f(u))
    is monotone, so iterates from a supersolution decrease toward the maximal
    bracketed state and iterates from a subsolution increase. Monotonicity is
    asserted every step; a violation means `start` was not actually on the
    claimed side.
    """
    if direction not in ("above", "below"):
        raise InputError("direction must be 'above' or 'below'")
    L, b = assemble_laplacian(grid, kind, trace)
    K = 1.1 * max(nl.lipschitz_estimate, 1e-6)
    n = L.shape[0]
    M = (K * identity(n, format="csr") - L).tocsc()
    lu = splu(M)

    v = _vec(start, kind)
    lo = _vec(sub, kind) if sub is not None else None
    hi = _vec(sup, kind) if sup is not None else None
    sign = -1.0 if direction == "above" else 1.0
    for it in range(max_iter):
        v_next = lu.solve(K * v + eval_capped(nl, v) + b)
        drift = sign * (v_next - v)
        if np.min(drift) < -1e-10:
            raise ConsistencyError(
                f"monotone sweep lost ordering at step {it} "
                f"(worst step {np.min(drift):.3e} against direction {direction})")
        if lo is not None and np.min(v_next - lo) < -1e-10:
            raise ConsistencyError("monotone sweep broke through the lower barrier")
        if hi is not None and np.max(v_next - hi) > 1e-10:
            raise ConsistencyError("monotone sweep broke through the upper barrier")
        moved = float(np.max(np.abs(v_next - v)))
        v = v_next
        if moved * K < 0.5 * tol:
            r = float(np.max(np.abs(L @ v + b + eval_capped(nl, v))))
            if r <= tol:
                break
    else:
        raise NumericError(f"monotone sweep did not converge in {max_iter} steps")
    u = _unvec(v, start, kind)
    return _finish(nl, u, grid, kind,
                   {"method": "monotone", "iterations": it + 1, "direction": direction})


def flow_relax(nl: Nonlinearity, u0: np.ndarray, grid: Grid2D, kind: str,
               res_target: float = 1e-3, max_steps: int = _FLOW_MAX_STEPS,
               dt_factor: float = 0.2) -> tuple[np.ndarray, int]:
    """Explicit parabolic flow u_t = Delta u + f(u) until the residual drops.

    Forward Euler with dt = dt_factor * h^2 (stable for the 5-point stencil
    with margin left for the reaction term). Used as the basin selector of
    the auto method, not as a solver in its own right.
    """
    dt = dt_factor * grid.h * grid.h
    if nl.lipschitz_estimate * dt > 0.5:
        dt = 0.5 / nl.lipschitz_estimate
    u = u0.copy()
    for k in range(max_steps):
        rate = laplacian_full(u, grid, kind) + eval_capped(nl, _unknown_block(u, kind))
        rmax = float(np.max(np.abs(rate)))
        if rmax <= res_target:
            return u, k
        blk = _unknown_block(u, kind)
        blk += dt * rate
    return u, max_steps


def _default_start(grid: Grid2D, kind: str, trace: np.ndarray) -> np.ndarray:
    """Trace extended constantly in x1; floor row zeroed on the quarter."""
    n1 = grid.n1
    u = np.tile(trace, (n1 + 1, 1)).astype(float)
    if kind == "quarter":
        u[:, 0] = 0.0
        u[0, :] = trace
    return u


def _apply_boundary(u: np.ndarray, kind: str, trace: np.ndarray | None) -> np.ndarray:
    u = np.asarray(u, dtype=float).copy()
    if kind == "torus":
        return u
    u[0, :] = trace
    if kind == "quarter":
        u[:, 0] = 0.0
        u[0, 0] = 0.0
    return u


def _finish(nl: Nonlinearity, u: np.ndarray, grid: Grid2D, kind: str, meta: dict) -> Field:
    r = residual_max(nl, u, grid, kind)
    out_low = float(np.min(u))
    out_high = float(np.max(u))
    meta = dict(meta)
    meta["out_of_window"] = bool(out_low < -_WINDOW_SLACK
                                 or out_high > nl.s_max + _WINDOW_SLACK)
    meta["min_value"] = out_low
    meta["max_value"] = out_high
    return Field(u, grid, kind, r, meta)


def solve_field(nl: Nonlinearity, grid: Grid2D, kind: str, trace,
                method: str = "auto", u0=None, tol: float = 1e-9,
                flow_target: float = 1e-3) -> Field:
    """Solve Delta u + f(u) = 0 on the requested domain kind.

    u0 may be a scalar (constant start), a full array, or None for the
    trace-extension default. The auto method runs the parabolic flow first
    so the answer is the state the evolution selects, then polishes with
    Newton.
    """
    _check_kind(kind)
    if kind == "torus":
        tr = None
        if u0 is None:
            raise InputError("torus solves need an explicit start state u0")
        shape = (grid.n1, grid.n2)
    else:
        tr = as_trace(trace, grid, kind)
        shape = (grid.n1 + 1, tr.size)
    if u0 is None:
        u = _default_start(grid, kind, tr)
    elif np.isscalar(u0):
        u = _apply_boundary(np.full(shape, float(u0)), kind, tr)
    else:
        u0 = np.asarray(u0, dtype=float)
        if u0.shape != shape:
            raise InputError(f"u0 has shape {u0.shape}, domain wants {shape}")
        u = _apply_boundary(u0, kind, tr)

    if method == "newton":
        f = newton_solve(nl, grid, kind, tr, u, tol=tol)
    elif method == "monotone":
        f = monotone_iterate(nl, grid, kind, tr, u, direction="above", tol=tol)
    elif method == "auto":
        u_flow, steps = flow_relax(nl, u, grid, kind, res_target=flow_target)
        f = newton_solve(nl, grid, kind, tr, u_flow, tol=tol)
        f.meta["flow_steps"] = steps
        f.meta["method"] = "auto"
    else:
        raise InputError(f"unknown method {method!r} (newton | monotone | auto)")
    return f


def solve_quarter(nl: Nonlinearity, grid: Grid2D, trace, **kw) -> Field:
    return solve_field(nl, grid, "quarter", trace, **kw)


def solve_half(nl: Nonlinearity, grid: Grid2D, trace, **kw) -> Field:
    return solve_field(nl, grid, "half", trace, **kw)


# ---------------------------------------------------------------------------
# radial Dirichlet eigenpair (drives the truncation-size heuristics)

@dataclass(eq=False)
class EigenResult:
    N: int
    R: float
    value: float
    r: np.ndarray
    phi: np.ndarray
    iterations: int


def dirichlet_eigenpair(N: int, R: float, n: int = 4096, tol: float = 1e-13,
                        max_iter: int = 400) -> EigenResult:
    """Principal eigenvalue of -Delta on the radius-R ball, radial reduction.

    Solves -(phi'' + (N-1)/r phi') = lambda phi, phi'(0) = 0, phi(R) = 0 on a
    uniform radial mesh by inverse power iteration; at r = 0 the operator
    limit Delta phi(0) = N phi''(0) closes the stencil. The eigenvalue is a
    Rayleigh quotient in the r^(N-1)-weighted inner product that makes the
    radial operator self-adjoint. phi is normalized to phi(0) = 1.
    """
    if N < 1 or R <= 0 or n < 16:
        raise InputError("dirichlet_eigenpair: need N >= 1, R > 0, n >= 16")
    hr = R / n
    h2 = hr * hr
    # banded (ab) layout for solve_banded: unknowns phi_0 .. phi_{n-1}
    diag = np.empty(n)
    upper = np.zeros(n)
    lower = np.zeros(n)
    diag[0] = 2.0 * N / h2
    upper[1] = -2.0 * N / h2
    for i in range(1, n):
        c = (N - 1) / (2.0 * i * h2)         # (N-1)/(2 r_i hr) with r_i = i hr
        diag[i] = 2.0 / h2
        if i + 1 < n:
            upper[i + 1] = -(1.0 / h2 + c)
        lower[i - 1] = -(1.0 / h2 - c)
    ab = np.vstack([upper, diag, lower])

    w = (np.arange(n) * hr) ** (N - 1) if N > 1 else np.ones(n)
    w = w.copy()
    w[0] = w[0] if N == 1 else 0.0

    phi = np.ones(n)
    lam_old = 0.0
    lam = 0.0
    for it in range(max_iter):
        phi_new = solve_banded((1, 1), ab, phi)
        phi_new /= np.max(np.abs(phi_new))
        Aphi = _banded_apply(upper, diag, lower, phi_new)
        num = np.sum(w * phi_new * Aphi)
        den = np.sum(w * phi_new * phi_new)
        lam = num / den
        if it > 0 and abs(lam - lam_old) <= tol * abs(lam):
            phi = phi_new
            break
        lam_old = lam
        phi = phi_new
    r = np.arange(n + 1) * hr
    phi_full = np.empty(n + 1)
    phi_full[:n] = phi / phi[0]
    phi_full[n] = 0.0
    return EigenResult(N, float(R), float(lam), r, phi_full, it + 1)


def _banded_apply(upper, diag, lower, x):
    y = diag * x
    y[:-1] += upper[1:] * x[1:]
    y[1:] += lower[:-1] * x[:-1]
    return y


# ---------------------------------------------------------------------------
# radial cap ("bubble") used as a sliding subsolution

@dataclass(eq=False)
class Bubble:
    z: float
    eps: float
    N: int
    a: float              # center height actually used
    R: float              # radius where the cap hits 0
    r: np.ndarray
    v: np.ndarray
    vp: np.ndarray
    feasible: bool
    bisections: int
    energy: float = math.nan   # cap energy over its own ball (feasible caps)

    @property
    def v0(self) -> float:
        return self.a


def radial_bubble(nl: Nonlinearity, z: float, eps: float, N: int = 2,
                  r_max: float = 200.0, tol: float = 1e-11) -> Bubble:
    """Radially decreasing cap: v'' + (N-1)/r v' + f(v) = 0, v(0) = a, v'(0) = 0.

    Starts at a = z - eps/2 and integrates outward until v crosses 0 (the cap
    radius). If the trajectory lingers too long near the unstable top and
    fails to cross within r_max, the start height is bisected downward inside
    (z - eps, z). The zero extension of the cap is the sliding comparison
    object; it never exceeds its center height a.
    """
    if not (0 < eps <= z):
        raise InputError(f"radial_bubble: need 0 < eps <= z, got eps={eps:g}, z={z:g}")

    def shoot(a: float):
        r0 = 1e-8
        fa = eval_capped(nl, a)
        y0 = np.array([a - fa * r0 * r0 / (2.0 * N), -fa * r0 / N])

        def rhs(r, y):
            return np.array([y[1], -eval_capped(nl, y[0]) - (N - 1) / r * y[1]])

        grid = np.linspace(r0, r_max, 4097)
        res = integrate(rhs, r0, y0, r_max, tol=tol, sample_ts=grid,
                        events=[lambda r, y: y[0]])
        return res, grid

    a = z - 0.5 * eps
    lo = z - eps
    bis = 0
    res, grid = shoot(a)
    while res.event_index is None and bis < 40:
        a = 0.5 * (a + lo)      # move down, away from the slow unstable top
        bis += 1
        res, grid = shoot(a)
    feas = res.event_index is not None
    if feas:
        R = float(res.event_t)
        filled = res.samples_filled
        r = np.concatenate((grid[:filled], [R]))
        v = np.concatenate((res.sample_ys[:filled, 0], [0.0]))
        vp = np.concatenate((res.sample_ys[:filled, 1], [float(res.event_y[1])]))
        v = np.clip(v, 0.0, None)
    else:
        R = np.inf
        filled = res.samples_filled
        r = grid[:filled]
        v = res.sample_ys[:filled, 0]
        vp = res.sample_ys[:filled, 1]
    bub = Bubble(float(z), float(eps), int(N), float(a), R, r, v, vp, feas, bis)
    if feas:
        bub.energy = cap_energy(bub, nl, R)
    return bub


def sphere_area(N: int) -> float:
    from math import gamma, pi
    return 2.0 * pi ** (N / 2.0) / gamma(N / 2.0)


def ball_volume(N: int) -> float:
    from math import gamma, pi
    return pi ** (N / 2.0) / gamma(N / 2.0 + 1.0)


def cap_energy(bub: Bubble, nl: Nonlinearity, r_ball: float) -> float:
    """Energy of the zero-extended cap over the radius-r_ball ball.

    E = int ( |grad v|^2 / 2 + G(v) ) with G(s) = F(z) - F(s), the potential
    gap to the top level. Outside the cap the integrand is the constant
    G(0) = F(z).
    """
    if not bub.feasible:
        raise InputError("cap_energy: cap never closed (not feasible)")
    if r_ball <= 0:
        raise InputError("cap_energy: need r_ball > 0")
    N = bub.N
    rr = bub.r[bub.r <= min(r_ball, bub.R)]
    vv = np.interp(rr, bub.r, bub.v)
    vp = np.interp(rr, bub.r, bub.vp)
    G = np.array([integral_between(nl, s, bub.z) for s in vv])
    dens = (0.5 * vp * vp + G) * rr ** (N - 1)
    E = sphere_area(N) * np.trapezoid(dens, rr)
    if r_ball > bub.R:
        G0 = integral_between(nl, 0.0, bub.z)
        E += G0 * ball_volume(N) * (r_ball ** N - bub.R ** N)
    return float(E)


def bubble_energy(bub: Bubble, nl: Nonlinearity,
                  r_ball: float | None = None) -> tuple[float, float]:
    """Energies over the radius-r_ball ball (default: the cap's own radius)
    of the cap and of the plateau ramp at the same level.

    The pair is the comparison the cap exists for: the cap fills the ball
    near the top level at plateau cost (volume times G near zero), while
    the ramp pays only a surface-shell cost. Returns (cap, ramp).
    """
    r = float(bub.R if r_ball is None else r_ball)
    if r <= 1.0:
        raise InputError("bubble_energy: the ramp comparison needs a ball "
                         "radius above 1")
    return cap_energy(bub, nl, r), ramp_energy(nl, bub.z, r, N=bub.N)


def ramp_energy(nl: Nonlinearity, z: float, r_ball: float, N: int = 2,
                n_shell: int = 2048) -> float:
    """Energy of the ramp: z inside radius r-1, z*(r - |x|) on the unit shell."""
    if r_ball <= 1.0:
        raise InputError("ramp_energy: need r_ball > 1")
    rr = np.linspace(r_ball - 1.0, r_ball, n_shell + 1)
    vv = z * (r_ball - rr)
    G = np.array([integral_between(nl, s, z) for s in vv])
    dens = (0.5 * z * z + G) * rr ** (N - 1)
    return float(sphere_area(N) * np.trapezoid(dens, rr))


def level_energy(nl: Nonlinearity, z: float, level: float, r_ball: float,
                 N: int = 2) -> float:
    """Energy of the constant state `level` over the radius-r_ball ball."""
    G = integral_between(nl, level, z)
    return float(G * ball_volume(N) * r_ball ** N)


# ---------------------------------------------------------------------------
# sliding comparison of a cap under a solved field

@dataclass(eq=False)
class SlideReport:
    centers: np.ndarray       # (k, 2) path of cap centers
    margins: np.ndarray       # min over the cap footprint of u - v at each step
    min_margin: float
    implied_floor: float      # cap center height: u >= this along the path if ok
    ok: bool


def sliding_verify(field: Field, bub: Bubble, start, stop, steps: int = 61) -> SlideReport:
    """Translate the cap from start to stop under the field, tracking margins.

    At each center the cap footprint must lie inside the open domain (away
    from the trace column and the floor). The margin is the minimum of
    u(x) - v(|x - c|) over grid nodes in the footprint; all margins positive
    means the field dominates the sliding cap along the whole path, so the
    field exceeds the cap height at every visited center.
    """
    if not bub.feasible:
        raise InputError("sliding_verify: cap never closed (not feasible)")
    if field.kind != "quarter":
        raise InputError("sliding_verify expects a quarter-domain field")
    g = field.grid
    start = np.asarray(start, dtype=float)
    stop = np.asarray(stop, dtype=float)
    centers = start[None, :] + np.linspace(0.0, 1.0, steps)[:, None] * (stop - start)
    R = bub.R
    for c in centers:
        if not (c[0] - R > 0 and c[0] + R < g.L1 and c[1] - R > 0 and c[1] + R < g.L2):
            raise InputError(
                f"sliding_verify: footprint of radius {R:g} at ({c[0]:g},{c[1]:g}) "
                "leaves the open domain")

    x1 = g.x1
    x2 = g.x2(field.kind)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    margins = np.empty(steps)
    for k, c in enumerate(centers):
        d = np.hypot(X1 - c[0], X2 - c[1])
        mask = d <= R
        vcap = np.interp(d[mask], bub.r, bub.v)
        margins[k] = float(np.min(field.values[mask] - vcap))
    mm = float(np.min(margins))
    return SlideReport(centers, margins, mm, float(bub.a), bool(mm > 0.0))
