"""Congruences valued in hyperquadrics: vectorial planes and parallel families.

A congruence whose affine planes all pass through the origin (vanishing foot)
is the normal-plane field of immersions into a central hyperquadric.  For
codimension-2 fields carrying a pseudo-orthonormal normal pair (e1, e2) with
<e1, e1> = 1 and <e2, e2> = eps, every unit-norm combination

    phi = cos_eps(theta) e1 + sin_eps(theta) e2

(the trigonometric pair for eps = +1, hyperbolic for eps = -1) is a parallel
candidate; it is an integral leaf precisely when d theta matches the
connection form <d e2, e1> scaled by eps, which is solvable iff that form is
closed.  Shifting theta by a constant yields the equidistant family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.optimize import minimize_scalar

from .congruence import Congruence, covariant_derivative, curvature_pairing
from .errors import GeometryError, IntegrabilityError

FOOT_TOL = 1e-9
CLOSEDNESS_GATE = 1e-5
SINGULAR_LEAF_TOL = 1e-6


def pseudo_gram_schmidt(sig, cols: np.ndarray) -> np.ndarray:
    """Orthonormalize columns for the signature metric, demanding positive norms."""
    g = sig.metric_signs()
    cols = np.asarray(cols, dtype=float)
    out = np.zeros_like(cols)
    for j in range(cols.shape[1]):
        u = cols[:, j].copy()
        for i in range(j):
            u -= np.dot(g * u, out[:, i]) * out[:, i]
        norm2 = float(np.dot(g * u, u))
        if norm2 <= 1e-14:
            raise GeometryError("pseudo Gram-Schmidt hit a non-spacelike direction")
        out[:, j] = u / np.sqrt(norm2)
    return out


@dataclass
class HyperquadricReport:
    max_foot: float
    max_beta: float
    quadric_value: float        # <psi, psi> sampled from foot+plane data when available

    @property
    def is_vectorial(self) -> bool:
        return self.max_foot <= FOOT_TOL


def check_hyperquadric(c: Congruence, xs) -> HyperquadricReport:
    """Tests whether all planes pass through the origin (vanishing foot).

    When they do, the foot form vanishes with them, which the report records
    as a max over beta samples.
    """
    vmax = bmax = 0.0
    for x in xs:
        vmax = max(vmax, float(np.linalg.norm(c.foot(x))))
        for j in range(c.domain_dim):
            bmax = max(bmax, float(np.linalg.norm(c.beta(x, c.axis_vector(j)))))
    return HyperquadricReport(vmax, bmax, float("nan"))


@dataclass
class NormalPair:
    """Smooth pseudo-orthonormal pair spanning the codimension-2 normal planes."""

    congruence: Congruence
    seeds: np.ndarray      # (2, m) fixed ambient seeds
    eps: int               # metric square of e2

    def frames(self, x) -> tuple:
        c = self.congruence
        p = c.plane(x)
        g = c.sig.metric_signs()
        a = p.normal(self.seeds[0])
        n1 = float(np.dot(g * a, a))
        if n1 <= 1e-12:
            raise GeometryError("first normal seed degenerates on this chart")
        e1 = a / np.sqrt(n1)
        b = p.normal(self.seeds[1])
        b = b - np.dot(g * b, e1) * e1
        n2 = float(np.dot(g * b, b))
        if abs(n2) <= 1e-12:
            raise GeometryError("second normal seed degenerates on this chart")
        e2 = b / np.sqrt(abs(n2))
        if int(np.sign(n2)) != self.eps:
            raise GeometryError("normal plane signature changed across the chart")
        return e1, e2

    def mu(self, x, X, h: float = None) -> float:
        """Connection form <d_X e2, e1> of the pair."""
        c = self.congruence
        h = h or c.h
        X = np.asarray(X, dtype=float)
        x = np.asarray(x, dtype=float)
        e2p = self.frames(x + h * X)[1]
        e2m = self.frames(x - h * X)[1]
        de2 = (e2p - e2m) / (2.0 * h)
        e1 = self.frames(x)[0]
        g = c.sig.metric_signs()
        return float(np.dot(g * de2, e1))


def build_normal_pair(c: Congruence, seeds: np.ndarray = None) -> NormalPair:
    """Choose seeds giving a smooth pseudo-orthonormal normal pair on the chart.

    Candidate seeds are standard basis vectors (then a few fixed random ones);
    the first pair that stays nondegenerate at the chart corners and center
    wins.  The sign of the second frame's metric square is the family's eps.
    """
    if c.codim != 2:
        raise GeometryError("normal pairs require codimension 2")
    m = c.m
    lo, hi = np.asarray(c.box.lo), np.asarray(c.box.hi)
    probes = [lo, hi, 0.5 * (lo + hi), np.array([lo[0], hi[1]]), np.array([hi[0], lo[1]])] \
        if c.domain_dim == 2 else [lo, hi, 0.5 * (lo + hi)]
    rng = np.random.default_rng(11)
    candidates = [np.eye(m)[i] for i in range(m)] + [rng.standard_normal(m) for _ in range(4)]
    if seeds is not None:
        candidates = [np.asarray(s, dtype=float) for s in seeds] + candidates
    g = c.sig.metric_signs()
    for i, s1 in enumerate(candidates):
        for s2 in candidates[i + 1:]:
            eps_seen = set()
            ok = True
            for x in probes:
                p = c.plane(x)
                a = p.normal(s1)
                n1 = float(np.dot(g * a, a))
                if n1 <= 1e-6:
                    ok = False
                    break
                e1 = a / np.sqrt(n1)
                b = p.normal(s2)
                b = b - np.dot(g * b, e1) * e1
                n2 = float(np.dot(g * b, b))
                if abs(n2) <= 1e-6:
                    ok = False
                    break
                eps_seen.add(int(np.sign(n2)))
            if ok and len(eps_seen) == 1:
                return NormalPair(c, np.stack([s1, s2]), eps_seen.pop())
    raise GeometryError("no admissible seed pair found for the normal planes")


def _eps_trig(eps: int):
    if eps == 1:
        return np.cos, np.sin
    return np.cosh, np.sinh


@dataclass
class ThetaSolution:
    """Integrated rotation angle with its consistency residuals."""

    axes: list
    theta: np.ndarray                  # grid of angles
    closedness_residual: float         # max pointwise curl of the connection form
    path_residual: float               # angle mismatch between two staircase paths
    pair: NormalPair

    def immersion_at(self, x, shift: float = 0.0, theta_value: float = None) -> np.ndarray:
        e1, e2 = self.pair.frames(x)
        ce, se = _eps_trig(self.pair.eps)
        th = (self._theta_interp(x) if theta_value is None else theta_value) + shift
        return ce(th) * e1 + se(th) * e2

    def _theta_interp(self, x):
        # grid lookup; chart operations evaluate on grid nodes
        idx = tuple(int(np.argmin(np.abs(ax - xi))) for ax, xi in zip(self.axes, x))
        for ax, xi, i in zip(self.axes, x, idx):
            if abs(ax[i] - xi) > 1e-9 * max(1.0, abs(xi)):
                raise GeometryError("angle field is only sampled on the solution grid")
        return float(self.theta[idx])


def theta_equation(pair: NormalPair, res: int = 33, strict: bool = True) -> ThetaSolution:
    """Solve d theta = eps * <d e2, e1> over the chart grid.

    Checks the form is closed (pointwise, nested finite differences) and
    refuses to integrate a non-closed form; then integrates along the first
    axis and fans out along the second, verifying path independence by
    integrating in the other order.
    """
    c = pair.congruence
    if c.domain_dim != 2:
        raise GeometryError("angle integration implemented for 2-dimensional charts")
    axes = c.box.axes(res)
    u, v = axes

    def mu_vec(x):
        return np.array([pair.mu(x, c.axis_vector(j)) for j in range(2)])

    # closedness: d mu = du(mu_v) - dv(mu_u), sampled on a coarse subgrid
    worst = 0.0
    hh = 1e-4
    for xu in u[:: max(1, len(u) // 5)]:
        for xv in v[:: max(1, len(v) // 5)]:
            x = np.array([xu, xv])
            d1 = (pair.mu(x + hh * np.array([1, 0]), c.axis_vector(1))
                  - pair.mu(x - hh * np.array([1, 0]), c.axis_vector(1))) / (2 * hh)
            d2 = (pair.mu(x + hh * np.array([0, 1]), c.axis_vector(0))
                  - pair.mu(x - hh * np.array([0, 1]), c.axis_vector(0))) / (2 * hh)
            worst = max(worst, abs(d1 - d2))
    if strict and worst >= CLOSEDNESS_GATE:
        raise IntegrabilityError(
            f"connection form is not closed (residual {worst:.3e}); "
            "no rotation angle exists", {"closedness_residual": worst},
        )

    mu_u = np.zeros((len(u), len(v)))
    mu_v = np.zeros_like(mu_u)
    for i, xu in enumerate(u):
        for j, xv in enumerate(v):
            g = mu_vec(np.array([xu, xv]))
            mu_u[i, j], mu_v[i, j] = g

    eps = float(pair.eps)
    # integrate along axis 0 at v = v[0], then along axis 1 everywhere
    line_u = cumulative_simpson(eps * mu_u[:, 0], x=u, initial=0.0)
    theta_a = line_u[:, None] + cumulative_simpson(eps * mu_v, x=v, axis=1, initial=0.0)
    # the other order
    line_v = cumulative_simpson(eps * mu_v[0, :], x=v, initial=0.0)
    theta_b = line_v[None, :] + cumulative_simpson(eps * mu_u, x=u, axis=0, initial=0.0)
    path_res = float(np.max(np.abs(theta_a - theta_b)))
    return ThetaSolution(axes, theta_a, worst, path_res, pair)


def immersion_normal_residual(sol: ThetaSolution, shift: float = 0.0) -> float:
    """Max norm of the normal component of d phi over the grid (grid FD).

    Vanishes to grid order when theta solves the angle equation; the residual
    scales with the squared grid step.
    """
    pair = sol.pair
    c = pair.congruence
    u, v = sol.axes
    phi = np.zeros((len(u), len(v), c.m))
    for i, xu in enumerate(u):
        for j, xv in enumerate(v):
            x = np.array([xu, xv])
            phi[i, j] = sol.immersion_at(x, shift, theta_value=float(sol.theta[i, j]))
    du = np.gradient(phi, u, axis=0, edge_order=2)
    dv = np.gradient(phi, v, axis=1, edge_order=2)
    worst = 0.0
    g = c.sig.metric_signs()
    for i, xu in enumerate(u):
        for j, xv in enumerate(v):
            x = np.array([xu, xv])
            e1, e2 = pair.frames(x)
            for d in (du[i, j], dv[i, j]):
                n1 = np.dot(g * d, e1)
                n2 = np.dot(g * d, e2) * pair.eps
                worst = max(worst, float(np.hypot(n1, n2)))
    return worst


def parallel_family_rank(sol: ThetaSolution, shift: float) -> float:
    """Smallest singular value of d phi_shift over the grid (immersion margin)."""
    pair = sol.pair
    c = pair.congruence
    u, v = sol.axes
    phi = np.zeros((len(u), len(v), c.m))
    for i, xu in enumerate(u):
        for j, xv in enumerate(v):
            phi[i, j] = sol.immersion_at(
                np.array([xu, xv]), shift, theta_value=float(sol.theta[i, j])
            )
    du = np.gradient(phi, u, axis=0, edge_order=2)
    dv = np.gradient(phi, v, axis=1, edge_order=2)
    smin = np.inf
    for i in range(len(u)):
        for j in range(len(v)):
            sv = np.linalg.svd(np.stack([du[i, j], dv[i, j]], axis=1), compute_uv=False)
            smin = min(smin, float(sv[-1]))
    return smin


def singular_shifts(sol: ThetaSolution, sweep: int = 64, res_tol: float = SINGULAR_LEAF_TOL) -> dict:
    """Shift values whose leaf fails to immerse, over one period of the family.

    Sweeps the immersion margin, refines each local minimum, and counts the
    refined minima that reach (numerical) zero.  For eps = +1 the family is
    periodic with period pi up to sign, so the sweep covers [0, pi).
    """
    eps = sol.pair.eps
    tmax = np.pi if eps == 1 else 2.0
    ts = np.linspace(0.0, tmax, sweep, endpoint=False)
    margins = np.array([parallel_family_rank(sol, t) for t in ts])
    scale = float(np.max(margins))
    found = []
    for i in range(len(ts)):
        prev_m = margins[i - 1] if i > 0 else (margins[-1] if eps == 1 else None)
        next_m = margins[i + 1] if i < len(ts) - 1 else (margins[0] if eps == 1 else None)
        lo = prev_m if prev_m is not None else np.inf
        hi = next_m if next_m is not None else np.inf
        if margins[i] <= lo and margins[i] <= hi and margins[i] < 0.5 * scale:
            a = ts[i] - (tmax / sweep)
            b = ts[i] + (tmax / sweep)
            r = minimize_scalar(lambda t: parallel_family_rank(sol, t), bounds=(a, b),
                                method="bounded", options={"xatol": 1e-8})
            if r.fun < res_tol * max(1.0, scale):
                found.append(float(r.x % tmax))
    dedup = []
    for t in sorted(found):
        if not dedup or abs(t - dedup[-1]) > 1e-4:
            dedup.append(t)
    return {"singular_shifts": dedup, "margin_scale": scale, "sweep": sweep}


# -- rank-1 kernel line and its parallel section ----------------------------------


@dataclass
class RankOneSection:
    """Parallel section spanning a rank-1 curvature kernel, with residuals."""

    axes: list
    sigma: np.ndarray            # (nu, nv, m) kernel-line sections, unnormalized
    s: np.ndarray                # (nu, nv, m) the parallel section e^f sigma
    f: np.ndarray                # integrated log-scale
    proportionality_residual: float   # max |cov sigma - mu sigma| / |sigma|
    mu_closedness: float
    path_residual: float
    quadric_spread: float        # max - min of <s, s> over the grid


def rank1_parallel_section(c: Congruence, res: int = 25, seed_vec: np.ndarray = None) -> RankOneSection:
    """Build the parallel section of a 1-dimensional curvature kernel.

    sigma projects a fixed seed into the kernel line; its bundle derivative
    must be proportional to sigma (residual reported).  The proportionality
    form is integrated to a log-scale f, and s = e^f sigma is the parallel
    section, unique up to one multiplicative constant.
    """
    if c.domain_dim != 2:
        raise GeometryError("kernel-line integration implemented for 2-dimensional charts")
    axes = c.box.axes(res)
    u, v = axes
    m = c.m
    if seed_vec is None:
        seed_vec = c.foot(c.box.center()) + c.plane(c.box.center()).normal_frame()[:, 0]

    def sigma_fn(x):
        ks = curvature_pairing(c, x)
        if ks.kernel_dim != 1:
            raise GeometryError(f"kernel dimension is {ks.kernel_dim}, expected 1")
        val = ks.kernel_projector @ seed_vec
        if np.linalg.norm(val) < 1e-8:
            raise GeometryError("seed vector is orthogonal to the kernel line")
        return val

    def mu_at(x, j):
        sg = sigma_fn(x)
        d = covariant_derivative(c, sigma_fn, x, c.axis_vector(j), "normal")
        return float(np.dot(d, sg) / np.dot(sg, sg)), d, sg

    sigma = np.zeros((len(u), len(v), m))
    mu_u = np.zeros((len(u), len(v)))
    mu_v = np.zeros_like(mu_u)
    prop = 0.0
    for i, xu in enumerate(u):
        for j, xv in enumerate(v):
            x = np.array([xu, xv])
            m0, d0, sg = mu_at(x, 0)
            m1, d1, _ = mu_at(x, 1)
            sigma[i, j] = sg
            mu_u[i, j], mu_v[i, j] = m0, m1
            nrm = np.linalg.norm(sg)
            prop = max(prop, float(np.linalg.norm(d0 - m0 * sg)) / nrm,
                       float(np.linalg.norm(d1 - m1 * sg)) / nrm)

    # closedness of mu, pointwise; the proportionality form carries the noise
    # of the kernel projector, so the outer step is kept coarse
    hh = 3e-3
    closed = 0.0
    for xu in u[:: max(1, len(u) // 4)]:
        for xv in v[:: max(1, len(v) // 4)]:
            x = np.array([xu, xv])
            d1 = (mu_at(x + hh * np.array([1, 0]), 1)[0]
                  - mu_at(x - hh * np.array([1, 0]), 1)[0]) / (2 * hh)
            d2 = (mu_at(x + hh * np.array([0, 1]), 0)[0]
                  - mu_at(x - hh * np.array([0, 1]), 0)[0]) / (2 * hh)
            closed = max(closed, abs(d1 - d2))

    # f with df = -mu, two staircase orders
    line_u = cumulative_simpson(-mu_u[:, 0], x=u, initial=0.0)
    f_a = line_u[:, None] + cumulative_simpson(-mu_v, x=v, axis=1, initial=0.0)
    line_v = cumulative_simpson(-mu_v[0, :], x=v, initial=0.0)
    f_b = line_v[None, :] + cumulative_simpson(-mu_u, x=u, axis=0, initial=0.0)
    path_res = float(np.max(np.abs(f_a - f_b)))

    s = np.exp(f_a)[..., None] * sigma
    g = c.sig.metric_signs()
    quad = np.einsum("ijk,k,ijk->ij", s, g, s)
    return RankOneSection(
        axes, sigma, s, f_a, prop, closed, path_res,
        float(np.max(quad) - np.min(quad)),
    )
