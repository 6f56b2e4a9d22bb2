"""Line congruences along spherical curves: closed-form and ODE integration.

A congruence of lines over a curve is generated by a unit-speed spherical
curve alpha together with a support coefficient lambda(t).  Writing the line
direction over the moving frame (alpha, alpha', nu) with nu = alpha x alpha',
the leaf curves are gamma = lambda alpha + A alpha' + B nu where the pair
(A, B) obeys the linear system

    A' = B kappa - lambda,    B' = -A kappa,

kappa the geodesic curvature.  In complex form Z = B + iA the solution is a
rotation times an antiderivative (variation of constants):

    Z(t) = e^{i theta(t)} (Z(0) - i Int_0^t lambda e^{-i theta}),
    theta(t) = Int_0^t kappa.

An independent route integrates the ambient linear equation for the normal
part s = gamma - lambda alpha, valid in any dimension:

    s' = -<s, alpha'> alpha - lambda alpha',

with A = <s, alpha'>.  Both are implemented and cross-checked by tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from .errors import GeometryError
from .numerics import adaptive_simpson, cumulative_quadrature

UNIT_SPEED_TOL = 1e-8
QUAD_TOL = 1e-10
BISECTION_TOL = 1e-10


@dataclass
class SphereCurve:
    """Unit-speed curve on the unit sphere of R^m, with analytic derivatives."""

    alpha: object           # t -> (m,)
    dalpha: object          # t -> (m,)
    ddalpha: object = None  # t -> (m,), finite-differenced when missing
    t0: float = 0.0
    t1: float = 2.0 * np.pi
    m: int = 3

    def __post_init__(self):
        if self.ddalpha is None:
            h = 1e-5

            def dd(t, f=self.dalpha):
                return (np.asarray(f(t + h)) - np.asarray(f(t - h))) / (2 * h)

            self.ddalpha = dd
        for t in np.linspace(self.t0, self.t1, 7):
            a, da = np.asarray(self.alpha(t)), np.asarray(self.dalpha(t))
            if abs(np.linalg.norm(a) - 1.0) > UNIT_SPEED_TOL:
                raise GeometryError(f"curve leaves the unit sphere at t={t:.3f}")
            if abs(np.linalg.norm(da) - 1.0) > UNIT_SPEED_TOL:
                raise GeometryError(f"curve is not unit speed at t={t:.3f}")
            if abs(np.dot(a, da)) > UNIT_SPEED_TOL:
                raise GeometryError(f"velocity is not tangent to the sphere at t={t:.3f}")


def reparametrize_arclength(alpha_raw, dalpha_raw, t0: float, t1: float,
                            samples: int = 400, m: int = 3) -> SphereCurve:
    """Unit-speed version of a regular spherical curve.

    Builds the arclength function by quadrature and inverts it with a
    monotone cubic; derivative callbacks use the chain rule.
    """
    ts = np.linspace(t0, t1, samples)

    def speed(t):
        return float(np.linalg.norm(dalpha_raw(t)))

    s_of_t = np.concatenate([[0.0], np.cumsum([
        adaptive_simpson(speed, a, b, 1e-12) for a, b in zip(ts[:-1], ts[1:])
    ])])
    if np.any(np.diff(s_of_t) <= 0):
        raise GeometryError("curve is not regular: arclength fails to increase")
    t_of_s = PchipInterpolator(s_of_t, ts)

    def alpha(s):
        return np.asarray(alpha_raw(float(t_of_s(s))), dtype=float)

    def dalpha(s):
        t = float(t_of_s(s))
        v = np.asarray(dalpha_raw(t), dtype=float)
        return v / np.linalg.norm(v)

    return SphereCurve(alpha, dalpha, None, 0.0, float(s_of_t[-1]), m)


def frenet_normal(curve: SphereCurve, t: float) -> np.ndarray:
    """Spherical unit normal nu = alpha x alpha' (curves in R^3)."""
    if curve.m != 3:
        raise GeometryError("the spherical Frenet normal needs m = 3")
    return np.cross(curve.alpha(t), curve.dalpha(t))


def geodesic_curvature(curve: SphereCurve, t: float) -> float:
    """kappa = <alpha'', nu>: the component of acceleration along the normal."""
    return float(np.dot(curve.ddalpha(t), frenet_normal(curve, t)))


@dataclass
class CurveCongruenceSolution:
    """Leaf data of a line congruence along a spherical curve."""

    ts: np.ndarray
    A: np.ndarray
    B: np.ndarray
    gamma: np.ndarray            # (N, m)
    theta: np.ndarray = None     # rotation angle (closed-form route only)
    route: str = "closed_form"
    _eval: object = field(default=None, repr=False)

    def eval_AB(self, t: float) -> tuple:
        """(A, B) at an arbitrary parameter value."""
        if self._eval is None:
            raise GeometryError("this solution does not carry a dense evaluator")
        return self._eval(float(t))


def solve_curve_closed_form(curve: SphereCurve, lam, ts, A0: float, B0: float,
                            tol: float = QUAD_TOL) -> CurveCongruenceSolution:
    """Variation-of-constants solution of the support system (m = 3).

    All integrals are adaptive quadratures; no differential equation is
    stepped.  lam must be callable.
    """
    if curve.m != 3:
        raise GeometryError("closed-form route is specific to m = 3")
    ts = np.asarray(ts, dtype=float)

    def kappa(t):
        return geodesic_curvature(curve, t)

    theta = cumulative_quadrature(kappa, ts, tol)

    def theta_at(t: float) -> float:
        i = int(np.searchsorted(ts, t))
        i = min(max(i, 1), len(ts) - 1)
        base = ts[i - 1] if abs(t - ts[i - 1]) <= abs(ts[i] - t) else ts[i]
        base_idx = i - 1 if base == ts[i - 1] else i
        if t == base:
            return float(theta[base_idx])
        return float(theta[base_idx]) + adaptive_simpson(kappa, base, t, tol)

    def c_integrand(t):
        return lam(t) * np.exp(-1j * theta_at(t))

    C = cumulative_quadrature(c_integrand, ts, tol)
    Z0 = B0 + 1j * A0
    Z = np.exp(1j * theta) * (Z0 - 1j * C)
    A, B = Z.imag, Z.real
    gamma = np.empty((len(ts), 3))
    for i, t in enumerate(ts):
        gamma[i] = lam(t) * np.asarray(curve.alpha(t)) + A[i] * np.asarray(
            curve.dalpha(t)
        ) + B[i] * frenet_normal(curve, t)

    def dense(t: float):
        th = theta_at(t)
        i = int(np.clip(np.searchsorted(ts, t), 1, len(ts) - 1))
        base_idx = i - 1 if abs(t - ts[i - 1]) <= abs(ts[i] - t) else i
        Ct = C[base_idx] + (
            adaptive_simpson(c_integrand, ts[base_idx], t, tol) if t != ts[base_idx] else 0.0
        )
        Zt = np.exp(1j * th) * (Z0 - 1j * Ct)
        return float(Zt.imag), float(Zt.real)

    return CurveCongruenceSolution(ts, A, B, gamma, theta, "closed_form", dense)


def solve_curve_ode(curve: SphereCurve, lam, ts, s0: np.ndarray,
                    rtol: float = 1e-12, atol: float = 1e-13) -> CurveCongruenceSolution:
    """Ambient-ODE solution of the support system, any dimension.

    Integrates s' = -<s, alpha'> alpha - lambda alpha' for the normal part of
    the leaf and assembles gamma = lambda alpha + s.  The coefficient A is
    <s, alpha'>; for m = 3, B is the remaining normal coordinate.
    """
    ts = np.asarray(ts, dtype=float)
    s0 = np.asarray(s0, dtype=float)

    def rhs(t, s):
        a = np.asarray(curve.alpha(t))
        da = np.asarray(curve.dalpha(t))
        return -np.dot(s, da) * a - lam(t) * da

    sol = solve_ivp(
        rhs, (ts[0], ts[-1]), s0, t_eval=ts, rtol=rtol, atol=atol,
        method="DOP853", dense_output=True,
    )
    if not sol.success:
        raise GeometryError(f"support ODE failed: {sol.message}")
    svals = sol.y.T
    A = np.array([np.dot(svals[i], curve.dalpha(t)) for i, t in enumerate(ts)])
    if curve.m == 3:
        B = np.array([np.dot(svals[i], frenet_normal(curve, t)) for i, t in enumerate(ts)])
    else:
        B = np.full(len(ts), np.nan)
    gamma = np.stack(
        [lam(t) * np.asarray(curve.alpha(t)) + svals[i] for i, t in enumerate(ts)]
    )

    def dense(t: float):
        s = sol.sol(t)
        a_val = float(np.dot(s, curve.dalpha(t)))
        b_val = float(np.dot(s, frenet_normal(curve, t))) if curve.m == 3 else float("nan")
        return a_val, b_val

    return CurveCongruenceSolution(ts, A, B, gamma, None, "ambient_ode", dense)


def initial_support_vector(curve: SphereCurve, A0: float, B0: float) -> np.ndarray:
    """Normal part at t0 from frame coordinates (m = 3)."""
    t = curve.t0
    return A0 * np.asarray(curve.dalpha(t)) + B0 * frenet_normal(curve, t)


def tangency_residual(curve: SphereCurve, sol: CurveCongruenceSolution, lam) -> float:
    """Max component of s = gamma - lambda alpha along alpha (should vanish)."""
    worst = 0.0
    for i, t in enumerate(sol.ts):
        s = sol.gamma[i] - lam(t) * np.asarray(curve.alpha(t))
        worst = max(worst, abs(float(np.dot(s, curve.alpha(t)))))
    return worst


def singular_parameters(curve: SphereCurve, sol: CurveCongruenceSolution, dlam,
                        refine_tol: float = BISECTION_TOL) -> dict:
    """Parameter values where the leaf fails to immerse: roots of A - lambda'.

    Scans the solution grid for sign changes and refines each by bisection
    using the dense evaluator.  A leaf whose defect vanishes identically
    (max |A - lambda'| below tolerance) is flagged degenerate.
    """
    g_grid = sol.A - np.array([dlam(t) for t in sol.ts])
    scale = float(np.max(np.abs(g_grid))) if len(g_grid) else 0.0
    if scale < 1e-12:
        return {"roots": [], "degenerate": True}

    def g(t):
        return sol.eval_AB(t)[0] - dlam(t)

    roots = []
    for i in range(len(sol.ts) - 1):
        ga, gb = g_grid[i], g_grid[i + 1]
        if ga == 0.0:
            roots.append(float(sol.ts[i]))
            continue
        if ga * gb < 0:
            a, b = float(sol.ts[i]), float(sol.ts[i + 1])
            fa = g(a)
            while b - a > refine_tol:
                mid = 0.5 * (a + b)
                fm = g(mid)
                if fa * fm <= 0:
                    b = mid
                else:
                    a, fa = mid, fm
            roots.append(0.5 * (a + b))
    if g_grid[-1] == 0.0:
        roots.append(float(sol.ts[-1]))
    return {"roots": roots, "degenerate": False}


def equidistance_check(sol1: CurveCongruenceSolution, sol2: CurveCongruenceSolution) -> dict:
    """Constancy of the distance between two leaves of one congruence."""
    d = np.linalg.norm(sol1.gamma - sol2.gamma, axis=1)
    return {
        "mean": float(np.mean(d)),
        "spread": float(np.max(d) - np.min(d)),
        "max": float(np.max(d)),
    }
