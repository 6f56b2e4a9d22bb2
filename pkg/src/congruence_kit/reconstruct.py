"""Reconstruction of integral submanifolds from an affine-plane congruence.

The submanifolds orthogonal to the planes are exactly the maps foot + s with
s a complement-bundle section solving the first-order system: the bundle
derivative of s equals the foot form.  Writing s as a curvature-pairing
preimage plus a combination of parallel kernel sections turns the system into
quadratures, valid precisely when two compatibility conditions hold:

  * the covariant curl of the foot form has no curvature-kernel component
    (equivalently the scalar coefficients to integrate are closed forms), and
  * the pairing preimage differentiates back onto the non-kernel part of the
    foot form.

Both gates are checked pointwise before any integration, and failing either
refuses with the measured residuals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from .congruence import (
    COMPAT_GATE,
    STABILITY_GATE,
    Congruence,
    curvature_pairing,
    gamma_blocks,
    kernel_stability_residual,
)
from .errors import GeometryError, IntegrabilityError

PREIMAGE_FD_STEP = 1e-3     # step for differentiating the pairing preimage
PREIMAGE_GAMMA_STEP = 1e-3  # curl step for preimages that get differentiated:
                            # a coarser step trades rough noise (which finite
                            # differences amplify) for smooth truncation bias
SINGULAR_MARGIN = 1e-6      # relative immersion-margin floor per node


def _transport(c: Congruence, V: np.ndarray, a: np.ndarray, b: np.ndarray,
               nsub: int = 4) -> np.ndarray:
    """Parallel transport of complement vectors (columns of V) along a segment.

    Integrates v' = -P' v with classical Runge-Kutta; the flow preserves
    normality and fiber inner products exactly, so drift measures step error.
    """
    d = b - a
    seglen = float(np.linalg.norm(d))
    if seglen < 1e-300:
        return V
    delta = min(0.25 / nsub, c.h / seglen)

    def dP(t):
        return (c.projector(a + (t + delta) * d) - c.projector(a + (t - delta) * d)) / (2.0 * delta)

    def rhs(t, v):
        return -dP(t) @ v

    dt = 1.0 / nsub
    t, v = 0.0, V
    for _ in range(nsub):
        k1 = rhs(t, v)
        k2 = rhs(t + dt / 2, v + dt / 2 * k1)
        k3 = rhs(t + dt / 2, v + dt / 2 * k2)
        k4 = rhs(t + dt, v + dt * k3)
        v = v + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    return v


@dataclass
class ParallelFrames:
    """Parallel orthonormal frame of the curvature kernel over a chart grid."""

    axes: list
    frames: np.ndarray            # (nu, nv, m, r)
    orthonormality_drift: float
    staircase_residual: float     # transport order dependence at the far nodes
    kernel_drift: float           # leakage out of the pointwise kernel

    @property
    def rank(self) -> int:
        return self.frames.shape[-1]


def parallel_frames(c: Congruence, res: int = 17, nsub: int = 4) -> ParallelFrames:
    """Transport the base-point kernel basis over the grid along axis lines.

    Fills the grid along axis 0 first and fans out along axis 1; a second
    pass in the other order measures how path-dependent the transport is
    (zero for a flat kernel subbundle, up to integration error).
    """
    if c.domain_dim != 2:
        raise GeometryError("grid transport implemented for 2-dimensional charts")
    axes = c.box.axes(res)
    u, v = axes
    base = np.array([u[0], v[0]])
    V0 = curvature_pairing(c, base).kernel_basis
    r = V0.shape[1]
    out = np.zeros((len(u), len(v), c.m, r))

    def fill(order):
        grid = np.zeros_like(out)
        grid[0, 0] = V0
        if order == 0:
            for i in range(1, len(u)):
                grid[i, 0] = _transport(c, grid[i - 1, 0], np.array([u[i - 1], v[0]]),
                                        np.array([u[i], v[0]]), nsub)
            for i in range(len(u)):
                for j in range(1, len(v)):
                    grid[i, j] = _transport(c, grid[i, j - 1], np.array([u[i], v[j - 1]]),
                                            np.array([u[i], v[j]]), nsub)
        else:
            for j in range(1, len(v)):
                grid[0, j] = _transport(c, grid[0, j - 1], np.array([u[0], v[j - 1]]),
                                        np.array([u[0], v[j]]), nsub)
            for j in range(len(v)):
                for i in range(1, len(u)):
                    grid[i, j] = _transport(c, grid[i - 1, j], np.array([u[i - 1], v[j]]),
                                            np.array([u[i], v[j]]), nsub)
        return grid

    out = fill(0)
    if r:
        other = fill(1)
        stair = float(np.max(np.linalg.norm(out - other, axis=(2, 3))))
    else:
        stair = 0.0
    ortho = drift = 0.0
    step = max(1, res // 4)
    for i in range(0, len(u), step):
        for j in range(0, len(v), step):
            V = out[i, j]
            if not r:
                continue
            ortho = max(ortho, float(np.linalg.norm(V.T @ V - np.eye(r))))
            K = curvature_pairing(c, np.array([u[i], v[j]])).kernel_projector
            drift = max(drift, float(np.linalg.norm(V - K @ V)))
    return ParallelFrames(axes, out, ortho, stair, drift)


def preimage_fn(c: Congruence, h_outer: float = None):
    """Pointwise least-squares preimage of the foot-form curl under the pairing."""

    def fn(x):
        split = curvature_pairing(c, x)
        if split.rank == 0:
            return np.zeros(c.m)
        blocks = gamma_blocks(c, x, h_outer) if h_outer else gamma_blocks(c, x)
        uvec, _ = split.solve(blocks)
        return uvec

    return fn


@dataclass
class SupportSolution:
    """Integrated support section with the residuals that justify it."""

    axes: list
    u: np.ndarray                  # (nu, nv, m) pairing-preimage part
    lambdas: np.ndarray            # (nu, nv, r) integrated coefficients
    s_total: np.ndarray            # (nu, nv, m) support section on the grid
    branch: str                    # 'flat' | 'invertible' | 'mixed'
    rank: int                      # pointwise rank of the curvature pairing
    status: str                    # 'solved' | 'refused'
    stability_residual: float
    curl_kernel_residual: float    # kernel component of the foot-form curl
    preimage_residual: float       # derivative-of-preimage match to the foot form
    image_residual: float          # unreachable part of the curl under the pairing
    path_residual: float           # staircase order dependence of the coefficients

    def gate_report(self) -> dict:
        return {
            "stability_residual": self.stability_residual,
            "curl_kernel_residual": self.curl_kernel_residual,
            "preimage_residual": self.preimage_residual,
            "image_residual": self.image_residual,
        }


def _gate_points(c: Congruence, count: int = 6, seed: int = 3) -> list:
    lo, hi = np.asarray(c.box.lo), np.asarray(c.box.hi)
    pts = [c.box.center(), lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)]
    rng = np.random.default_rng(seed)
    pts += [lo + (0.1 + 0.8 * rng.random(c.domain_dim)) * (hi - lo) for _ in range(count - 3)]
    return pts


def solve_support(c: Congruence, res: int = 17, frames: ParallelFrames = None,
                  strict: bool = True) -> SupportSolution:
    """Solve the support system over a grid, refusing on any failed gate.

    Gate order: kernel stability of the pairing, kernel component of the
    foot-form curl, image membership of the curl, and the derivative match of
    the pairing preimage.  Only then are the kernel coefficients integrated
    (two staircase orders, reporting their disagreement).
    """
    if c.domain_dim != 2:
        raise GeometryError("support integration implemented for 2-dimensional charts")
    pts = _gate_points(c)
    k = c.codim
    ranks = {curvature_pairing(c, x).rank for x in pts}
    if len(ranks) != 1:
        raise GeometryError(f"curvature pairing changes rank across the chart: {sorted(ranks)}")
    rank = ranks.pop()
    branch = "flat" if rank == 0 else ("invertible" if rank == k else "mixed")

    # gate 1: the kernel must be a parallel subbundle (measured, not assumed)
    stab = 0.0
    if 0 < k - rank:
        stab = kernel_stability_residual(c, pts[:4])
        if strict and stab > STABILITY_GATE:
            raise IntegrabilityError(
                f"curvature kernel is not parallel (residual {stab:.3e})",
                {"stability_residual": stab},
            )

    # gates 2 and 3: curl of the foot form splits against the pairing
    curl_kernel = image_res = 0.0
    for x in pts:
        split = curvature_pairing(c, x)
        blocks = gamma_blocks(c, x)
        for g in blocks:
            curl_kernel = max(curl_kernel, float(np.linalg.norm(split.kernel_projector @ g)))
        if rank:
            _, resid = split.solve(blocks)
            image_res = max(image_res, resid)

    # gate 4: the preimage must differentiate onto the non-kernel foot form
    upre = preimage_fn(c)
    upre_smooth = preimage_fn(c, PREIMAGE_GAMMA_STEP)
    pre_res = 0.0
    if rank:
        hu = PREIMAGE_FD_STEP
        for x in pts:
            split = curvature_pairing(c, x)
            p = c.plane(x)
            for j in range(c.domain_dim):
                X = c.axis_vector(j)
                du = p.normal((upre_smooth(x + hu * X) - upre_smooth(x - hu * X)) / (2.0 * hu))
                defect = du - c.beta(x, X)
                defect = defect - split.kernel_projector @ defect
                pre_res = max(pre_res, float(np.linalg.norm(defect)))

    details = {
        "stability_residual": stab,
        "curl_kernel_residual": curl_kernel,
        "image_residual": image_res,
        "preimage_residual": pre_res,
    }
    failed = [name for name, val in details.items()
              if name != "stability_residual" and val > COMPAT_GATE]
    if failed:
        if strict:
            worst = max(details[f] for f in failed)
            raise IntegrabilityError(
                f"compatibility gate failed ({', '.join(failed)}; worst {worst:.3e}); "
                "the congruence admits no integral submanifold on this chart", details,
            )
        return SupportSolution([], np.zeros(0), np.zeros(0), np.zeros(0), branch, rank,
                               "refused", stab, curl_kernel, pre_res, image_res, float("nan"))

    if frames is None:
        frames = parallel_frames(c, res)
    axes = frames.axes
    u_ax, v_ax = axes
    nu, nv = len(u_ax), len(v_ax)
    r = frames.rank

    ugrid = np.zeros((nu, nv, c.m))
    if rank:
        for i in range(nu):
            for j in range(nv):
                ugrid[i, j] = upre(np.array([u_ax[i], v_ax[j]]))

    lambdas = np.zeros((nu, nv, r))
    path_res = 0.0
    if r:
        # coefficient forms b[axis][node, i] = <beta - d(preimage), s_i>
        b = np.zeros((2, nu, nv, r))
        hu = PREIMAGE_FD_STEP
        for i in range(nu):
            for j in range(nv):
                x = np.array([u_ax[i], v_ax[j]])
                p = c.plane(x)
                for ax in range(2):
                    X = c.axis_vector(ax)
                    rhs = c.beta(x, X)
                    if rank:
                        rhs = rhs - p.normal(
                            (upre_smooth(x + hu * X) - upre_smooth(x - hu * X)) / (2.0 * hu))
                    b[ax, i, j] = frames.frames[i, j].T @ rhs

        line_u = cumulative_simpson(b[0, :, 0, :], x=u_ax, axis=0, initial=0.0)
        lam_a = line_u[:, None, :] + cumulative_simpson(b[1], x=v_ax, axis=1, initial=0.0)
        line_v = cumulative_simpson(b[1, 0, :, :], x=v_ax, axis=0, initial=0.0)
        lam_b = line_v[None, :, :] + cumulative_simpson(b[0], x=u_ax, axis=0, initial=0.0)
        path_res = float(np.max(np.abs(lam_a - lam_b)))
        lambdas = lam_a

    s_total = ugrid + np.einsum("ijmr,ijr->ijm", frames.frames, lambdas)
    return SupportSolution(axes, ugrid, lambdas, s_total, branch, rank, "solved",
                           stab, curl_kernel, pre_res, image_res, path_res)


@dataclass
class Reconstruction:
    """Assembled integral submanifold over the chart grid."""

    axes: list
    phi: np.ndarray                # (nu, nv, m)
    support: SupportSolution
    frames: ParallelFrames
    congruence: Congruence
    immersion_margin: float        # min singular value of d phi over interior nodes
    margin_scale: float            # max derivative scale (leaf or foot motion)
    singular_nodes: int
    orientation_flips: int         # sign changes of det(frame^T d phi)


def assemble_immersion(c: Congruence, support: SupportSolution,
                       frames: ParallelFrames, constants: np.ndarray = None) -> Reconstruction:
    """Assemble foot + support (+ constant kernel combination) and grade it.

    The immersion margin and orientation data come from grid derivatives, so
    they are informational at grid-step accuracy; exact statements live in
    the pointwise gate residuals of the support solution.
    """
    if support.status != "solved":
        raise GeometryError("cannot assemble from a refused support solution")
    u_ax, v_ax = support.axes
    nu, nv = len(u_ax), len(v_ax)
    phi = np.zeros((nu, nv, c.m))
    feet = np.zeros((nu, nv, c.m))
    for i in range(nu):
        for j in range(nv):
            feet[i, j] = c.foot(np.array([u_ax[i], v_ax[j]]))
            phi[i, j] = feet[i, j] + support.s_total[i, j]
    if constants is not None and frames.rank:
        phi = phi + np.einsum("ijmr,r->ijm", frames.frames, np.asarray(constants, dtype=float))

    du = np.gradient(phi, u_ax, axis=0, edge_order=2)
    dv = np.gradient(phi, v_ax, axis=1, edge_order=2)
    # the foot motion floors the scale so a leaf collapsing to a point still
    # registers as singular against the congruence's own size
    foot_scale = max(
        float(np.max(np.linalg.norm(np.gradient(feet, u_ax, axis=0, edge_order=2), axis=2))),
        float(np.max(np.linalg.norm(np.gradient(feet, v_ax, axis=1, edge_order=2), axis=2))),
    )
    margin, scale = np.inf, foot_scale
    singular = flips = 0
    prev_sign = 0.0
    for i in range(nu):
        for j in range(nv):
            D = np.stack([du[i, j], dv[i, j]], axis=1)
            sv = np.linalg.svd(D, compute_uv=False)
            margin = min(margin, float(sv[-1]))
            scale = max(scale, float(sv[0]))
            if c.domain_dim == c.nplane:
                x = np.array([u_ax[i], v_ax[j]])
                det = float(np.linalg.det(c.plane(x).frame.T @ D))
                if prev_sign and np.sign(det) != prev_sign:
                    flips += 1
                if det:
                    prev_sign = np.sign(det)
    for i in range(nu):
        for j in range(nv):
            D = np.stack([du[i, j], dv[i, j]], axis=1)
            if np.linalg.svd(D, compute_uv=False)[-1] < SINGULAR_MARGIN * max(scale, 1e-30):
                singular += 1
    return Reconstruction(support.axes, phi, support, frames, c,
                          margin, scale, singular, flips)


def reconstruct(c: Congruence, res: int = 17, strict: bool = True,
                constants: np.ndarray = None) -> Reconstruction:
    """One-call pipeline: frames, gated support solve, assembly."""
    frames = parallel_frames(c, res)
    support = solve_support(c, res, frames, strict=strict)
    return assemble_immersion(c, support, frames, constants)


def fit_constants(recon: Reconstruction, reference) -> tuple:
    """Best constant kernel combination matching a reference immersion.

    The general solution is unique up to constant coefficients on the
    parallel kernel frame; this resolves them against reference chart values
    and reports the post-fit max pointwise deviation.
    """
    u_ax, v_ax = recon.axes
    r = recon.frames.rank
    rows, rhs = [], []
    for i in range(len(u_ax)):
        for j in range(len(v_ax)):
            target = np.asarray(reference(np.array([u_ax[i], v_ax[j]])), dtype=float)
            rows.append(recon.frames.frames[i, j])
            rhs.append(target - recon.phi[i, j])
    if r == 0:
        dev = float(np.max(np.linalg.norm(np.asarray(rhs), axis=1)))
        return np.zeros(0), dev
    A = np.concatenate(rows, axis=0)
    bvec = np.concatenate(rhs)
    coeff, *_ = np.linalg.lstsq(A, bvec, rcond=None)
    fitted = recon.phi + np.einsum("ijmr,r->ijm", recon.frames.frames, coeff)
    target_grid = np.zeros_like(fitted)
    for i in range(len(u_ax)):
        for j in range(len(v_ax)):
            target_grid[i, j] = reference(np.array([u_ax[i], v_ax[j]]))
    dev = float(np.max(np.linalg.norm(fitted - target_grid, axis=2)))
    return coeff, dev


def verify_gauss_map(recon: Reconstruction) -> dict:
    """Incidence and tangency residuals of the assembled map.

    Incidence (the map lies on its planes) is pointwise exact; tangency (the
    derivative lies in the planes) uses grid derivatives and scales with the
    squared grid step.
    """
    c = recon.congruence
    u_ax, v_ax = recon.axes
    incidence = 0.0
    for i in range(len(u_ax)):
        for j in range(len(v_ax)):
            x = np.array([u_ax[i], v_ax[j]])
            incidence = max(incidence, float(np.linalg.norm(
                c.plane(x).tangential(recon.phi[i, j]) - c.foot(x))))
    du = np.gradient(recon.phi, u_ax, axis=0, edge_order=2)
    dv = np.gradient(recon.phi, v_ax, axis=1, edge_order=2)
    tangency = 0.0
    for i in range(len(u_ax)):
        for j in range(len(v_ax)):
            x = np.array([u_ax[i], v_ax[j]])
            p = c.plane(x)
            tangency = max(tangency, float(np.linalg.norm(p.normal(du[i, j]))),
                           float(np.linalg.norm(p.normal(dv[i, j]))))
    hg = max(u_ax[1] - u_ax[0], v_ax[1] - v_ax[0])
    return {"incidence": incidence, "tangency": tangency, "grid_step": hg}


def foliation_check(recon: Reconstruction, shifts: np.ndarray = None, seed: int = 7) -> dict:
    """Distance statistics between leaves at different kernel constants.

    Parallel shifts produce equidistant leaves: for each pair the pointwise
    distance should be constant over the chart.
    """
    r = recon.frames.rank
    if r == 0:
        return {"pairs": 0, "max_spread": 0.0, "min_distance": float("nan")}
    if shifts is None:
        rng = np.random.default_rng(seed)
        shifts = np.vstack([np.zeros(r), 0.3 * rng.standard_normal((2, r))])
    leaves = [recon.phi + np.einsum("ijmr,r->ijm", recon.frames.frames, sh) for sh in shifts]
    max_spread, min_dist = 0.0, np.inf
    pairs = 0
    for a in range(len(leaves)):
        for b in range(a + 1, len(leaves)):
            d = np.linalg.norm(leaves[a] - leaves[b], axis=2)
            max_spread = max(max_spread, float(np.max(d) - np.min(d)))
            min_dist = min(min_dist, float(np.min(d)))
            pairs += 1
    return {"pairs": pairs, "max_spread": max_spread, "min_distance": min_dist}


def regularize_search(recon: Reconstruction, seed: int = 0, directions: int = 32) -> dict:
    """Search constant kernel shifts for a leaf with no singular nodes.

    Tries the kernel axes and a fixed batch of random directions, each over
    dyadic magnitudes, keeping the shift maximizing the worst immersion
    margin.  Best effort: reports the outcome either way.
    """
    r = recon.frames.rank
    degenerate = recon.singular_nodes > 0 or recon.orientation_flips > 0
    if r == 0 or not degenerate:
        return {"needed": degenerate, "shift": np.zeros(r),
                "margin": recon.immersion_margin}
    rng = np.random.default_rng(seed)
    cands = [np.eye(r)[i] for i in range(r)]
    cands += list(rng.standard_normal((directions, r)))
    u_ax, v_ax = recon.axes

    def margin_of(shift):
        phi = recon.phi + np.einsum("ijmr,r->ijm", recon.frames.frames, shift)
        du = np.gradient(phi, u_ax, axis=0, edge_order=2)
        dv = np.gradient(phi, v_ax, axis=1, edge_order=2)
        worst = np.inf
        for i in range(len(u_ax)):
            for j in range(len(v_ax)):
                sv = np.linalg.svd(np.stack([du[i, j], dv[i, j]], axis=1), compute_uv=False)
                worst = min(worst, float(sv[-1]))
        return worst

    best_shift, best_margin = np.zeros(r), recon.immersion_margin
    for nu_dir in cands:
        nu_dir = nu_dir / np.linalg.norm(nu_dir)
        for jpow in range(-3, 4):
            for sign in (1.0, -1.0):
                t = sign * 2.0**jpow
                mg = margin_of(t * nu_dir)
                if mg > best_margin:
                    best_shift, best_margin = t * nu_dir, mg
    return {"needed": True, "shift": best_shift, "margin": best_margin}
