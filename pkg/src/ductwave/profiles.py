"""Standing-wave connection profiles of the axial flux.

The connection ODE is u' = F1(eps, u) - F1(eps, u_minus).  For extreme
characteristic families (the common case, including all built-ins) the
orbit is computed by a single shot along the one-dimensional manifold of
the relevant endpoint; the integration direction is always the contracting
one, so no matching iteration is needed.  Middle families use two-sided
shooting with a Newton matching step.  The returned profile carries an
exact trajectory representation (dense ODE output plus linearized tails),
so downstream integrators can evaluate coefficients anywhere at full
accuracy; the uniform grid is a sampled view.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import (ConnectionFailure, DomainResolutionError,
                     HypothesisFailure, InputDomainError)
from .systems import FluxSystem, axial_jacobians, check_hypotheses

FILL_TOL = 1e-12        # endpoint fill threshold, relative to state scale
OFFSET = 1e-6           # manifold offset, relative to |u_plus - u_minus|
MIN_RESOLVED = 8.0      # required eta*X for a resolvable window


@dataclass
class ShockProfile:
    """Discretized connection with an optional exact evaluator."""

    grid: np.ndarray
    values: np.ndarray            # (len(grid), n)
    derivative_values: np.ndarray
    eps: float
    eta: float
    endpoints: tuple
    evaluator: Optional[Callable] = None   # exact x -> state, vectorized
    name: str = ""

    def __post_init__(self):
        self._spline = None

    @property
    def n(self):
        return self.values.shape[1]

    @property
    def half_length(self):
        return float(self.grid[-1])

    def state(self, x):
        """Profile state at arbitrary x in [-X, X] (exact when available,
        cubic interpolation of the grid samples otherwise)."""
        if self.evaluator is not None:
            return self.evaluator(x)
        if self._spline is None:
            self._spline = CubicSpline(self.grid, self.values, axis=0)
        return self._spline(x)


def decay_rate(sys: FluxSystem, eps: float) -> float:
    """Smallest nonzero characteristic-speed magnitude at the endpoints."""
    A_minus, A_plus = axial_jacobians(sys, eps)
    rates = []
    for A in (A_minus, A_plus):
        w = sla.eigvals(A).real
        scale = max(1.0, float(np.max(np.abs(w))))
        rates.extend(abs(a) for a in w if abs(a) > 1e-10 * scale)
    if not rates:
        raise HypothesisFailure("all characteristic speeds vanish")
    return float(min(rates))


def default_half_length(sys: FluxSystem, eps: float) -> float:
    return 20.0 / decay_rate(sys, eps)


def _eig_direction(A, which):
    """Unique real eigendirection of the requested sign class; requires the
    class to be one-dimensional."""
    w, V = sla.eig(A)
    sel = [j for j in range(A.shape[0])
           if (w.real[j] < 0 if which == "stable" else w.real[j] > 0)]
    if len(sel) != 1:
        raise InputDomainError(f"{which} eigenspace is not one-dimensional")
    j = sel[0]
    v = V[:, j].real
    return w.real[j], v / np.linalg.norm(v)


def _shoot_extreme(field, u_anchor, u_far, v_dir, r, backward, span):
    """Single shot from u_anchor + r*sign*v_dir toward u_far, in the
    contracting direction.  Returns (sol, x_reach, start_state) for the
    sign that converges, else None."""
    scale = max(1.0, float(np.max(np.abs(u_far))))
    blow = 10.0 * (np.linalg.norm(u_anchor) + np.linalg.norm(u_far) + 1.0)

    def reach(x, u):
        return float(np.max(np.abs(u - u_far)) - FILL_TOL * scale)
    reach.terminal = True

    def explode(x, u):
        return float(np.linalg.norm(u) - blow)
    explode.terminal = True

    for sign in (1.0, -1.0):
        u0 = u_anchor + sign * r * v_dir
        x_end = -span if backward else span
        sol = solve_ivp(lambda x, u: field(u), (0.0, x_end), u0,
                        method="DOP853", rtol=1e-13, atol=1e-15,
                        dense_output=True, events=[reach, explode])
        if sol.t_events[0].size:
            return sol, float(sol.t_events[0][0]), u0
    return None


def _crossing(dense, lo, hi, comp, mid_val):
    """Root of component comp minus mid_val along the dense trajectory,
    picking the steepest crossing when there are several."""
    xs = np.linspace(lo, hi, 4001)
    g = np.array([dense(x)[comp] - mid_val for x in xs])
    idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
    if idx.size == 0:
        raise ConnectionFailure(
            "phase component never crosses its midpoint; the principal "
            "state component must vary across the shock")
    slopes = np.abs(g[idx + 1] - g[idx])
    i = idx[int(np.argmax(slopes))]
    return brentq(lambda x: dense(x)[comp] - mid_val, xs[i], xs[i + 1],
                  xtol=1e-14)


def solve_profile(sys: FluxSystem, eps: float, X: Optional[float] = None,
                  grid_size: int = 2000, phase_at: float = 0.0) -> ShockProfile:
    """Compute the connection profile on [-X, X].

    The phase condition puts the midpoint crossing of the principal
    component at x = phase_at (default 0).  Raises ConnectionFailure when
    no orbit is found and DomainResolutionError when the window cannot
    resolve the wave.
    """
    eps = sys.require_eps(eps)
    um = np.asarray(sys.u_minus(eps), dtype=float)
    up = np.asarray(sys.u_plus(eps), dtype=float)
    jump = np.linalg.norm(up - um)
    if jump <= 1e-12 * max(1.0, np.linalg.norm(um)):
        raise ConnectionFailure("endpoint states coincide, no orbit")
    rep = check_hypotheses(sys, eps)
    if not (rep.h1_ok and rep.h2_dimension_check):
        raise HypothesisFailure(
            f"structural hypotheses fail at eps={eps}: {rep.notes}")

    eta = decay_rate(sys, eps)
    if X is None:
        X = 20.0 / eta
    if eta * X < MIN_RESOLVED:
        raise DomainResolutionError(
            f"half-length X={X:g} too small for decay rate eta={eta:g}; "
            f"use X >= {MIN_RESOLVED / eta:g} (default {20.0 / eta:g})")

    Fm = np.asarray(sys.f1(eps, um), dtype=float)

    def fld(u):
        return np.asarray(sys.f1(eps, u), dtype=float) - Fm

    c = rep.lax_type_c
    n = sys.n
    A_minus, A_plus = axial_jacobians(sys, eps)
    r = OFFSET * jump
    span = 2.0 * X + 80.0 / eta
    mid = 0.5 * (um + up)

    if c == 1:
        # 1-dimensional stable manifold at u_plus; backward flow contracts
        # onto the orbit and ends attracted to u_minus
        a_tail, v_tail = _eig_direction(A_plus, "stable")
        shot = _shoot_extreme(fld, up, um, v_tail, r, True, span)
        tail_side = +1
        u_tail_end, u_fill_end = up, um
    elif c == n:
        a_tail, v_tail = _eig_direction(A_minus, "unstable")
        shot = _shoot_extreme(fld, um, up, v_tail, r, False, span)
        tail_side = -1
        u_tail_end, u_fill_end = um, up
    else:
        return _solve_profile_middle(sys, eps, rep, X, grid_size, phase_at)

    if shot is None:
        raise ConnectionFailure(
            "shooting never entered the opposite endpoint neighborhood; "
            "no connecting orbit found")
    sol, x_reach, u_start = shot
    w_tail = u_start - u_tail_end            # exact offset r*sign*v_tail
    lo, hi = (x_reach, 0.0) if tail_side > 0 else (0.0, x_reach)

    x_star = _crossing(sol.sol, lo, hi, c - 1, mid[c - 1])

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        shape = x.shape
        t = np.atleast_1d(x) - phase_at + x_star
        out = np.empty((t.size, n))
        if tail_side > 0:
            in_tail = t >= 0.0
            in_fill = t <= x_reach
        else:
            in_tail = t <= 0.0
            in_fill = t >= x_reach
        in_core = ~(in_tail | in_fill)
        if np.any(in_tail):
            # the linearized tail decays toward u_tail_end in both cases
            decay = np.exp(a_tail * t[in_tail])
            out[in_tail] = u_tail_end[None, :] + decay[:, None] * w_tail[None, :]
        if np.any(in_fill):
            out[in_fill] = u_fill_end[None, :]
        if np.any(in_core):
            out[in_core] = sol.sol(t[in_core]).T
        return out.reshape(shape + (n,)) if shape else out[0]

    return _assemble(sys, eps, evaluate, X, grid_size, eta, um, up, jump)


def _assemble(sys, eps, evaluate, X, grid_size, eta, um, up, jump):
    grid = np.linspace(-X, X, grid_size)
    values = evaluate(grid)
    Fm = np.asarray(sys.f1(eps, um), dtype=float)
    deriv = np.array([np.asarray(sys.f1(eps, u), dtype=float) - Fm
                      for u in values])
    err_l = np.max(np.abs(values[0] - um))
    err_r = np.max(np.abs(values[-1] - up))
    if max(err_l, err_r) > np.exp(-eta * X / 2.0) * jump:
        raise DomainResolutionError(
            f"profile does not settle within [-X, X] at X={X:g}; "
            "increase the half-length")
    return ShockProfile(grid=grid, values=values, derivative_values=deriv,
                        eps=eps, eta=eta, endpoints=(um, up),
                        evaluator=evaluate, name=sys.name)


def _solve_profile_middle(sys, eps, rep, X, grid_size, phase_at):
    """Two-sided shooting with Newton matching for middle characteristic
    families (1 < c < n): shoot forward from the unstable manifold of
    u_minus and backward from the stable manifold of u_plus, each arc
    stopping on the section where the principal component crosses its
    midpoint, and solve for the manifold directions that close the gap
    within the section.  Matching on the section removes the translation
    degeneracy and pins the phase at the same time."""
    n, c = sys.n, rep.lax_type_c
    um = np.asarray(sys.u_minus(eps), dtype=float)
    up = np.asarray(sys.u_plus(eps), dtype=float)
    jump = np.linalg.norm(up - um)
    eta = decay_rate(sys, eps)
    Fm = np.asarray(sys.f1(eps, um), dtype=float)
    mid = 0.5 * (um + up)

    def fld(u):
        return np.asarray(sys.f1(eps, u), dtype=float) - Fm

    A_minus, A_plus = axial_jacobians(sys, eps)

    def sign_basis(A, positive):
        w, V = sla.eig(A)
        sel = [j for j in range(n) if (w.real[j] > 0) == positive]
        return sla.orth(np.real(V[:, sel]))

    Bu = sign_basis(A_minus, True)    # n-c+1 columns
    Bs = sign_basis(A_plus, False)    # c columns
    ku, ks = Bu.shape[1], Bs.shape[1]
    r = OFFSET * jump
    span = 2.0 * X + 80.0 / eta
    blow = 10.0 * (np.linalg.norm(um) + np.linalg.norm(up) + 1.0)

    def section(x, u):
        return u[c - 1] - mid[c - 1]
    section.terminal = True

    def explode(x, u):
        return float(np.linalg.norm(u) - blow)
    explode.terminal = True

    # initial directions: project the jump onto each manifold tangent
    d0u = Bu.T @ (up - um)
    d0s = Bs.T @ (um - up)
    d0u /= np.linalg.norm(d0u)
    d0s /= np.linalg.norm(d0s)

    def complement(d):
        # orthonormal complement of d in its coefficient space
        Q, _ = sla.qr(np.column_stack([d, np.eye(len(d))]))
        return Q[:, 1:len(d)]

    Cu = complement(d0u)      # (ku, ku-1)
    Cs = complement(d0s)      # (ks, ks-1)
    keep = [j for j in range(n) if j != c - 1]

    def arcs(theta):
        du = d0u + Cu @ theta[:ku - 1]
        ds = d0s + Cs @ theta[ku - 1:]
        du = du / np.linalg.norm(du)
        ds = ds / np.linalg.norm(ds)
        u0f = um + r * (Bu @ du)
        u0b = up + r * (Bs @ ds)
        solf = solve_ivp(lambda x, u: fld(u), (0.0, span), u0f,
                         method="DOP853", rtol=1e-12, atol=1e-14,
                         dense_output=True, events=[section, explode])
        solb = solve_ivp(lambda x, u: fld(u), (0.0, -span), u0b,
                         method="DOP853", rtol=1e-12, atol=1e-14,
                         dense_output=True, events=[section, explode])
        if not (solf.t_events[0].size and solb.t_events[0].size):
            return None
        return solf, solb, u0f, u0b

    def residual(theta):
        got = arcs(theta)
        if got is None:
            return None
        solf, solb, _, _ = got
        gap = solf.y_events[0][0] - solb.y_events[0][0]
        return gap[keep]

    theta = np.zeros(ku - 1 + ks - 1)
    res = residual(theta)
    if res is None:
        raise ConnectionFailure("initial shooting arcs never reach the "
                                "matching section")
    it = 0
    while np.max(np.abs(res)) > 1e-12:
        it += 1
        if it > 50:
            raise ConnectionFailure(
                "two-sided Newton matching did not converge in 50 iterations")
        J = np.empty((n - 1, theta.size))
        h = 1e-7
        for j in range(theta.size):
            tp = theta.copy()
            tp[j] += h
            rp = residual(tp)
            if rp is None:
                raise ConnectionFailure("matching arcs lost the section")
            J[:, j] = (rp - res) / h
        step = sla.lstsq(J, -res)[0]
        lam = 1.0
        while lam > 1e-4:
            cand = theta + lam * step
            rc = residual(cand)
            if rc is not None and np.linalg.norm(rc) < np.linalg.norm(res):
                theta, res = cand, rc
                break
            lam /= 2.0
        else:
            raise ConnectionFailure("matching step stalled")

    solf, solb, u0f, u0b = arcs(theta)
    Tf = float(solf.t_events[0][0])
    Tb = float(-solb.t_events[0][0])
    L, T = Tf, Tb

    # joint trajectory with the section crossing at coordinate 0:
    # forward arc on [-Tf, 0], backward arc on [0, Tb]
    def raw(t):
        if t <= 0.0:
            return solf.sol(t + Tf)
        return solb.sol(t - Tb)

    x_star = 0.0

    # eigen-projected linearized tails through the launch points; dropping
    # the wrong-sign coefficients (pure rounding residue) keeps the tails
    # decaying at any distance
    def tail_modes(A, w_off, positive):
        w, V = sla.eig(A)
        coef = sla.solve(V, w_off.astype(complex))
        keep = (w.real > 0) == positive
        return w[keep], V[:, keep], coef[keep]

    wl_t, Vl_t, cl_t = tail_modes(A_minus, u0f - um, True)
    wr_t, Vr_t, cr_t = tail_modes(A_plus, u0b - up, False)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        shape = x.shape
        t = np.atleast_1d(x) - phase_at + x_star
        out = np.empty((t.size, n))
        for i, ti in enumerate(t):
            if ti < -L:
                out[i] = um + (Vl_t @ (cl_t * np.exp(wl_t * (ti + L)))).real
            elif ti > T:
                out[i] = up + (Vr_t @ (cr_t * np.exp(wr_t * (ti - T)))).real
            else:
                out[i] = raw(ti)
        return out.reshape(shape + (n,)) if shape else out[0]

    return _assemble(sys, eps, evaluate, X, grid_size, eta, um, up, jump)


def transversality_diagnostic(profile: ShockProfile, sys: FluxSystem) -> float:
    """Smallest singular value of the joined manifold-tangent frame at
    x = 0.  The unstable frame of u_minus and the stable frame of u_plus
    are transported along the profile by the variational flow (with QR
    re-orthonormalization, which preserves spans); together they hold
    n + 1 directions, and a positive smallest singular value of the
    n x (n+1) frame certifies that they span all of R^n, i.e. the
    connection is transversal with the translation direction as the only
    intersection."""
    eps = profile.eps
    # linearize at the profile's own far-field states, so a degenerate
    # (constant) profile is diagnosed as such
    A_minus = np.asarray(sys.df1(eps, profile.endpoints[0]), dtype=float)
    A_plus = np.asarray(sys.df1(eps, profile.endpoints[1]), dtype=float)

    def frame(A, positive):
        w, V = sla.eig(A)
        sel = [j for j in range(sys.n) if (w.real[j] > 0) == positive]
        if not sel:
            return np.zeros((sys.n, 0))
        return sla.orth(np.real(V[:, sel]))

    Bu = frame(A_minus, True)
    Bs = frame(A_plus, False)
    if Bu.shape[1] + Bs.shape[1] != sys.n + 1:
        return 0.0

    X = profile.half_length

    def transport(B, x0, x1):
        V = B.copy()
        legs = 40
        for a, b in zip(np.linspace(x0, x1, legs + 1)[:-1],
                        np.linspace(x0, x1, legs + 1)[1:]):
            sol = solve_ivp(
                lambda x, v: (np.asarray(sys.df1(eps, profile.state(x)))
                              @ v.reshape(sys.n, -1)).ravel(),
                (a, b), V.ravel(), method="DOP853", rtol=1e-10, atol=1e-12)
            V = sol.y[:, -1].reshape(sys.n, -1)
            V, _ = sla.qr(V, mode="economic")
        return V

    Qu = transport(Bu, -X, 0.0)
    Qs = transport(Bs, X, 0.0)
    s = sla.svd(np.hstack([Qu, Qs]), compute_uv=False)
    return float(s[-1])


def save_profile_csv(profile: ShockProfile, path):
    """Write the sampled profile as CSV (x1, u_1..u_n, du_1..du_n)."""
    n = profile.n
    header = ",".join(["x1"] + [f"u_{j + 1}" for j in range(n)]
                      + [f"du_{j + 1}" for j in range(n)])
    data = np.column_stack([profile.grid, profile.values,
                            profile.derivative_values])
    with open(path, "w") as fh:
        fh.write(f"# eps={profile.eps!r} eta={profile.eta!r} "
                 f"name={profile.name}\n")
        fh.write(header + "\n")
        np.savetxt(fh, data, delimiter=",", fmt="%.17g")


def load_profile_csv(path) -> ShockProfile:
    """Read a profile written by save_profile_csv.  The exact evaluator is
    not recoverable from samples; interpolation takes its place."""
    with open(path) as fh:
        meta_line = fh.readline().strip()
    meta = {}
    if meta_line.startswith("#"):
        for tok in meta_line[1:].split():
            if "=" in tok:
                k, v = tok.split("=", 1)
                meta[k] = v
    data = np.loadtxt(path, delimiter=",", skiprows=2)
    ncols = data.shape[1]
    n = (ncols - 1) // 2
    values = data[:, 1:1 + n]
    return ShockProfile(
        grid=data[:, 0], values=values,
        derivative_values=data[:, 1 + n:1 + 2 * n],
        eps=float(meta.get("eps", "0.0")), eta=float(meta.get("eta", "1.0")),
        endpoints=(values[0].copy(), values[-1].copy()),
        evaluator=None, name=meta.get("name", ""))
