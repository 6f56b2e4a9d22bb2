"""Plane congruences: smooth families of affine planes over a chart.

A congruence assigns to every chart point an affine plane, stored as the pair
(orthogonal n-plane, foot vector).  All derivatives are central finite
differences of gauge-free quantities: the tangential projector field and the
foot field.  That makes every operation independent of how the frames are
chosen at neighbouring points.

The domain dimension may differ from the plane dimension n (a parametrized
family of planes); operations tied to an underlying immersed chart require
them to match and say so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import GeometryError
from .grassmann import (
    AffinePlane,
    GrassTangent,
    OrientedPlane,
    curvature_operator,
    normal_curvature_adjoint,
)

DEFAULT_FD_STEP = 1e-5
CURVATURE_FD_STEP = 1e-3
NESTED_FD_STEP = 1e-4
KERNEL_SVD_RTOL = 1e-7
STABILITY_GATE = 1e-4
COMPAT_GATE = 1e-5
HOLONOMY_GATE = 1e-4


@dataclass(frozen=True)
class Box:
    """Axis-aligned chart domain."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.lo) != len(self.hi) or any(a >= b for a, b in zip(self.lo, self.hi)):
            raise GeometryError("box bounds are inconsistent")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def axes(self, res) -> list:
        """Uniform grid axes; res is an int or a per-axis tuple of node counts."""
        if isinstance(res, int):
            res = (res,) * self.dim
        return [np.linspace(a, b, r) for a, b, r in zip(self.lo, self.hi, res)]

    def center(self) -> np.ndarray:
        return 0.5 * (np.asarray(self.lo) + np.asarray(self.hi))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        return lo + (hi - lo) * rng.random((count, self.dim))


class Congruence:
    """Affine-plane field x -> (n-plane, foot) over a box chart."""

    def __init__(self, box: Box, plane_fn, h: float = DEFAULT_FD_STEP, name: str = "",
                 dprojector_fn=None, dfoot_fn=None):
        self.box = box
        self._plane_fn = plane_fn
        self.h = h
        self.name = name
        # optional analytic derivative callbacks (x, X) -> value; used whenever
        # the caller does not force a specific finite-difference step
        self._dprojector_fn = dprojector_fn
        self._dfoot_fn = dfoot_fn
        probe = plane_fn(box.center())
        self.m = probe.plane.m
        self.nplane = probe.plane.n
        self.codim = probe.plane.codim
        self.sig = probe.plane.sig

    @property
    def domain_dim(self) -> int:
        return self.box.dim

    # -- pointwise data ------------------------------------------------------

    def at(self, x) -> AffinePlane:
        return self._plane_fn(np.asarray(x, dtype=float))

    def plane(self, x) -> OrientedPlane:
        return self.at(x).plane

    def foot(self, x) -> np.ndarray:
        return self.at(x).foot

    def projector(self, x) -> np.ndarray:
        return self.plane(x).projector()

    # -- first derivatives (projector-based, frame-gauge free) -----------------

    def dprojector(self, x, X, h: float = None) -> np.ndarray:
        if self._dprojector_fn is not None and h is None:
            return np.asarray(self._dprojector_fn(np.asarray(x, dtype=float),
                                                  np.asarray(X, dtype=float)))
        h = h or self.h
        X = np.asarray(X, dtype=float)
        return (self.projector(x + h * X) - self.projector(x - h * X)) / (2.0 * h)

    def dplane(self, x, X, h: float = None) -> GrassTangent:
        """Plane-field derivative along X as a tangent at the current plane."""
        p = self.plane(x)
        dP = self.dprojector(x, X, h)
        q = np.eye(self.m) - p.projector()
        return GrassTangent(p, q @ dP @ p.frame)

    def dfoot(self, x, X, h: float = None) -> np.ndarray:
        if self._dfoot_fn is not None and h is None:
            return np.asarray(self._dfoot_fn(np.asarray(x, dtype=float),
                                             np.asarray(X, dtype=float)))
        h = h or self.h
        X = np.asarray(X, dtype=float)
        return (self.foot(x + h * X) - self.foot(x - h * X)) / (2.0 * h)

    def beta(self, x, X, h: float = None) -> np.ndarray:
        """Normal-valued 1-form: minus the normal component of the foot derivative."""
        return -self.plane(x).normal(self.dfoot(x, X, h))

    def axis_vector(self, j: int) -> np.ndarray:
        e = np.zeros(self.domain_dim)
        e[j] = 1.0
        return e


# -- covariant calculus ---------------------------------------------------------


def covariant_derivative(c: Congruence, section, x, X, which: str = "normal",
                         h: float = None) -> np.ndarray:
    """Bundle derivative of a vector-valued section along X at x.

    which = 'normal' projects onto the plane's orthogonal complement (sections
    of the affine-plane direction bundle), 'tangent' onto the plane itself.
    """
    h = h or c.h
    X = np.asarray(X, dtype=float)
    x = np.asarray(x, dtype=float)
    raw = (np.asarray(section(x + h * X)) - np.asarray(section(x - h * X))) / (2.0 * h)
    p = c.plane(x)
    if which == "normal":
        return p.normal(raw)
    if which == "tangent":
        return p.tangential(raw)
    raise GeometryError(f"unknown bundle selector {which!r}")


def normal_curvature(c: Congruence, x, X, Y) -> np.ndarray:
    """Normal-bundle curvature operator R(X, Y) as an ambient matrix.

    Pullback of the plane-manifold curvature along the plane field; acts on
    the orthogonal complement of the plane at x and kills the plane.
    """
    t1 = c.dplane(x, X)
    t2 = c.dplane(x, Y)
    return normal_curvature_adjoint(t1, t2)


def full_curvature(c: Congruence, x, X, Y) -> np.ndarray:
    """Curvature operator on both bundles (plane and complement blocks)."""
    t1 = c.dplane(x, X)
    t2 = c.dplane(x, Y)
    return curvature_operator(t1, t2)


def fd_normal_curvature(c: Congruence, x, X, Y, xi, h: float = CURVATURE_FD_STEP,
                        extrapolate: bool = True) -> np.ndarray:
    """R(X, Y) applied to a normal vector, by commuting covariant derivatives.

    Extends xi to the section y -> normal-projection of xi and differentiates
    twice with central differences; with extrapolate=True a second pass at
    half step removes the leading error term.
    """
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)

    def section(y):
        return c.plane(y).normal(xi)

    def commutator(step):
        def covY(y):
            return covariant_derivative(c, section, y, Y, "normal", step)

        def covX(y):
            return covariant_derivative(c, section, y, X, "normal", step)

        return (
            covariant_derivative(c, covY, x, X, "normal", step)
            - covariant_derivative(c, covX, x, Y, "normal", step)
        )

    if not extrapolate:
        return commutator(h)
    coarse = commutator(h)
    fine = commutator(h / 2.0)
    return (4.0 * fine - coarse) / 3.0


def holonomy_normal_curvature(c: Congruence, x, X, Y, xi,
                              h: float = CURVATURE_FD_STEP, nsub: int = 8,
                              extrapolate: bool = True) -> np.ndarray:
    """R(X, Y) xi from parallel transport around the small coordinate square.

    Transports xi around x -> x+hX -> x+hX+hY -> x+hY -> x with the
    transport equation s' = -P' s (P the tangential projector along the path)
    and divides the defect by the enclosed area.
    """
    x = np.asarray(x, dtype=float)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)

    def transport_segment(s, a, b, steps):
        # straight segment, unit parameter; transport solves v' = -P'(t) v
        d = b - a
        seglen = float(np.linalg.norm(d))
        if seglen < 1e-300:
            return s
        delta = min(0.25 / steps, c.h / seglen)

        def dP(t):
            return (c.projector(a + (t + delta) * d) - c.projector(a + (t - delta) * d)) / (2.0 * delta)

        def rhs(t, v):
            return -dP(t) @ v

        dt = 1.0 / steps
        t = 0.0
        v = s
        for _ in range(steps):
            k1 = rhs(t, v)
            k2 = rhs(t + dt / 2, v + dt / 2 * k1)
            k3 = rhs(t + dt / 2, v + dt / 2 * k2)
            k4 = rhs(t + dt, v + dt * k3)
            v = v + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += dt
        return v

    def loop_defect(step):
        corners = [x, x + step * X, x + step * (X + Y), x + step * Y, x]
        v = c.plane(x).normal(np.asarray(xi, dtype=float))
        start = v.copy()
        for a, b in zip(corners[:-1], corners[1:]):
            v = transport_segment(v, a, b, nsub)
        return (start - v) / (step * step)

    if not extrapolate:
        return loop_defect(h)
    # the defect carries both odd and even corrections; two elimination
    # stages over step halving remove the first two of them
    d1, d2, d3 = loop_defect(h), loop_defect(h / 2.0), loop_defect(h / 4.0)
    e1 = 2.0 * d2 - d1
    e2 = 2.0 * d3 - d2
    return (4.0 * e2 - e1) / 3.0


# -- curvature-to-section pairing and its kernel ---------------------------------


@dataclass
class KernelSplitting:
    """Pointwise splitting of the plane-complement fiber by the curvature pairing."""

    x: np.ndarray
    normal_frame: np.ndarray        # (m, k) orthonormal basis of the fiber
    matrix: np.ndarray              # stacked curvature blocks, shape (pairs*k, k)
    singular_values: np.ndarray
    rank: int                       # rank of the pairing; kernel has dim k - rank
    kernel_basis: np.ndarray        # (m, k - rank), ambient, orthonormal
    kernel_projector: np.ndarray    # (m, m)

    @property
    def kernel_dim(self) -> int:
        return self.kernel_basis.shape[1]

    def solve(self, gamma_blocks) -> tuple:
        """Least-squares preimage of stacked fiber vectors under the pairing.

        gamma_blocks: sequence over index pairs (i<j) of ambient fiber vectors.
        Returns (u, residual): u ambient with pairing(u) closest to gamma, and
        the relative defect of the match.
        """
        rhs = np.concatenate([self.normal_frame.T @ np.asarray(g) for g in gamma_blocks])
        if self.matrix.size == 0:
            return np.zeros(self.normal_frame.shape[0]), float(np.linalg.norm(rhs))
        coeff, *_ = np.linalg.lstsq(self.matrix, rhs, rcond=KERNEL_SVD_RTOL)
        res = float(np.linalg.norm(self.matrix @ coeff - rhs))
        scale = max(1.0, float(np.linalg.norm(rhs)))
        return self.normal_frame @ coeff, res / scale


def curvature_pairing(c: Congruence, x) -> KernelSplitting:
    """Map sending a fiber vector to all its curvature images R(e_i, e_j) xi.

    The kernel consists of directions invisible to the normal curvature; its
    orthogonal complement is where curvature data can be inverted.
    """
    x = np.asarray(x, dtype=float)
    p = c.plane(x)
    N = p.normal_frame()
    k = c.codim
    pairs = list(combinations(range(c.domain_dim), 2))
    blocks = []
    for i, j in pairs:
        R = normal_curvature(c, x, c.axis_vector(i), c.axis_vector(j))
        blocks.append(N.T @ R @ N)
    mat = np.vstack(blocks) if blocks else np.zeros((0, k))
    if mat.size:
        sv = np.linalg.svd(mat, compute_uv=False)
    else:
        sv = np.zeros(0)
    smax = sv[0] if sv.size else 0.0
    if smax <= 1e-13:
        rank = 0
    else:
        rank = int(np.sum(sv > KERNEL_SVD_RTOL * smax))
    if rank == 0:
        kb = N
    elif rank == k:
        kb = np.zeros((c.m, 0))
    else:
        _, _, vt = np.linalg.svd(mat)
        kb = N @ vt[rank:].T
    return KernelSplitting(
        x=x,
        normal_frame=N,
        matrix=mat,
        singular_values=sv,
        rank=rank,
        kernel_basis=kb,
        kernel_projector=kb @ kb.T,
    )


def kernel_projector_fn(c: Congruence):
    """Pointwise kernel projector field of the curvature pairing."""

    def fn(x):
        return curvature_pairing(c, x).kernel_projector

    return fn


def kernel_stability_residual(c: Congruence, xs, seeds=None, h: float = None) -> float:
    """How far the curvature-pairing kernel drifts under the bundle derivative.

    Builds test sections by projecting fixed seed vectors into the kernel and
    measures the component of their covariant derivative that leaves it,
    relative to the section size.  Zero (up to FD error) means the kernel is
    a parallel subbundle.
    """
    if seeds is None:
        rng = np.random.default_rng(0)
        seeds = rng.standard_normal((3, c.m))
    proj = kernel_projector_fn(c)
    worst = 0.0
    for x in xs:
        x = np.asarray(x, dtype=float)
        K = proj(x)
        for w in seeds:
            def section(y, w=w):
                return proj(y) @ w

            sx = K @ w
            norm = np.linalg.norm(sx)
            if norm < 1e-8:
                continue
            for j in range(c.domain_dim):
                d = covariant_derivative(c, section, x, c.axis_vector(j), "normal", h)
                leak = d - K @ d
                worst = max(worst, float(np.linalg.norm(leak) / norm))
    return worst


# -- curl of the foot form and integrability reports -----------------------------


def gamma_form(c: Congruence, x, i: int, j: int, h_outer: float = NESTED_FD_STEP) -> np.ndarray:
    """Covariant exterior derivative of the foot 1-form on the (i, j) axes."""
    x = np.asarray(x, dtype=float)

    def beta_j(y):
        return c.beta(y, c.axis_vector(j))

    def beta_i(y):
        return c.beta(y, c.axis_vector(i))

    dij = covariant_derivative(c, beta_j, x, c.axis_vector(i), "normal", h_outer)
    dji = covariant_derivative(c, beta_i, x, c.axis_vector(j), "normal", h_outer)
    return dij - dji


def gamma_blocks(c: Congruence, x, h_outer: float = NESTED_FD_STEP) -> list:
    return [gamma_form(c, x, i, j, h_outer) for i, j in combinations(range(c.domain_dim), 2)]


@dataclass
class SymmetryReport:
    """Outcome of the pointwise symmetric-solution test for the plane field."""

    x: np.ndarray
    status: str                 # 'invertible' | 'degenerate_only' | 'none'
    nullspace_dim: int
    witness: np.ndarray | None  # (n, n) in the plane frame when status == 'invertible'
    singular_values: np.ndarray


def check_symmetry(c: Congruence, x, samples: int = 16, seed: int = 0) -> SymmetryReport:
    """Looks for an invertible frame map making the plane derivatives symmetric.

    Solves the homogeneous system d(i)(Phi e_j) = d(j)(Phi e_i) over n x n
    matrices Phi expressed in the plane frame.  'invertible' reports a found
    witness, 'degenerate_only' a nontrivial solution space whose sampled
    elements are all singular, 'none' a trivial solution space.
    """
    x = np.asarray(x, dtype=float)
    d = c.domain_dim
    n = c.nplane
    if d != n:
        raise GeometryError("symmetry test needs the chart dimension to match the plane dimension")
    tangents = [c.dplane(x, c.axis_vector(i)) for i in range(d)]
    pairs = list(combinations(range(d), 2))
    if not pairs:
        w = np.eye(n)
        return SymmetryReport(x, "invertible", n * n, w, np.zeros(0))
    # Homogeneous system A vec(Phi) = 0, vec stacking columns of Phi:
    # the (i, j) equation reads U_i Phi[:, j] - U_j Phi[:, i] = 0.
    A = np.zeros((len(pairs) * c.m, n * n))
    for r, (i, j) in enumerate(pairs):
        Ui, Uj = tangents[i].mat, tangents[j].mat
        A[r * c.m : (r + 1) * c.m, j * n : (j + 1) * n] += Ui
        A[r * c.m : (r + 1) * c.m, i * n : (i + 1) * n] -= Uj
    sv = np.linalg.svd(A, compute_uv=False)
    smax = sv[0] if sv.size else 0.0
    tol = max(KERNEL_SVD_RTOL * smax, 1e-12)
    rank = int(np.sum(sv > tol))
    null_dim = n * n - rank
    if null_dim == 0:
        return SymmetryReport(x, "none", 0, None, sv)
    _, _, vt = np.linalg.svd(A)
    basis = vt[rank:]
    rng = np.random.default_rng(seed)
    best = None
    best_det = 0.0
    for _ in range(samples):
        coeff = rng.standard_normal(null_dim)
        phi = (basis.T @ coeff).reshape(n, n, order="F")
        det = abs(np.linalg.det(phi))
        scale = np.linalg.norm(phi, "fro") ** n or 1.0
        if det / scale > 1e-8 and det > best_det:
            best, best_det = phi, det
    if best is not None:
        return SymmetryReport(x, "invertible", null_dim, best, sv)
    return SymmetryReport(x, "degenerate_only", null_dim, None, sv)


@dataclass
class LagrangianReport:
    """Curl residuals of the foot form, split against the curvature kernel."""

    kernel_residual: float        # max |kernel component of the curl|
    image_residual: float         # max |curl - pairing(best preimage)|
    preimage_residual: float      # derivative-of-preimage match to the foot form
    total_curl: float             # max |curl|
    normal_flatness: float        # max curvature block magnitude (flat bundle: 0)
    points: int

    @property
    def integrable(self) -> bool:
        return (self.kernel_residual <= COMPAT_GATE
                and self.image_residual <= COMPAT_GATE
                and self.preimage_residual <= COMPAT_GATE)


def check_lagrangian(c: Congruence, xs) -> LagrangianReport:
    """Evaluates the obstruction to writing the foot form as a derivative.

    The curl of the foot form must carry no component in the curvature
    kernel, its complement part must be reachable by the curvature pairing,
    and the pairing preimage must differentiate back onto the non-kernel part
    of the foot form; all defects are maxima over the sample points.  Pure
    measurement: nothing is integrated.
    """
    kmax = imax = pmax = tmax = cscale = 0.0
    # the curl used under an outer derivative is evaluated at a coarser step:
    # its error is then a smooth bias rather than amplified rough noise
    smooth_step = 10.0 * NESTED_FD_STEP
    hu = 1e-3

    def preimage(y):
        s = curvature_pairing(c, y)
        uvec, _ = s.solve(gamma_blocks(c, y, smooth_step))
        return uvec

    count = 0
    for x in xs:
        count += 1
        split = curvature_pairing(c, x)
        blocks = gamma_blocks(c, x)
        if not blocks:
            continue
        for g in blocks:
            tmax = max(tmax, float(np.linalg.norm(g)))
            kmax = max(kmax, float(np.linalg.norm(split.kernel_projector @ g)))
        _, res = split.solve(blocks)
        imax = max(imax, res)
        if split.singular_values.size:
            cscale = max(cscale, float(split.singular_values[0]))
        if split.rank:
            p = c.plane(x)
            for j in range(c.domain_dim):
                X = c.axis_vector(j)
                du = p.normal((preimage(x + hu * X) - preimage(x - hu * X)) / (2.0 * hu))
                defect = du - c.beta(x, X)
                defect = defect - split.kernel_projector @ defect
                pmax = max(pmax, float(np.linalg.norm(defect)))
    return LagrangianReport(kmax, imax, pmax, tmax, cscale, count)


# -- shape-type operators and induced metric -------------------------------------


def shape_operator(c: Congruence, x, xi, X) -> np.ndarray:
    """Plane-valued shape map of the congruence: adjoint of the plane derivative."""
    return c.dplane(x, X).adjoint_apply(np.asarray(xi, dtype=float))


def second_fundamental(c: Congruence, x, X, section, h: float = None) -> np.ndarray:
    """Normal component of the derivative of a plane-valued section along X."""
    return covariant_derivative(c, section, x, X, "normal", h)


@dataclass
class MetricData:
    """Induced first fundamental form of a leaf candidate at one point."""

    frame_images: np.ndarray   # (m, d) columns span the leaf tangent directions
    gram: np.ndarray           # (d, d)
    det: float
    signed_area: float         # det of the frame-coordinate matrix (d == n only)


def metric_at(c: Congruence, x, lam, strict: bool = False) -> MetricData:
    """First fundamental form of the leaf through foot + lam at chart point x.

    lam is a vector in the plane complement (the offset of the leaf inside
    the affine planes).  Columns of frame_images are tangential derivatives
    of the foot minus the shape image of lam.
    """
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=float)
    p = c.plane(x)
    d = c.domain_dim
    cols = np.empty((c.m, d))
    for j in range(d):
        X = c.axis_vector(j)
        cols[:, j] = p.tangential(c.dfoot(x, X)) - shape_operator(c, x, lam, X)
    gram = cols.T @ cols
    det = float(np.linalg.det(gram))
    signed = float(np.linalg.det(p.frame.T @ cols)) if d == c.nplane else float("nan")
    if strict and det <= 1e-18:
        raise GeometryError("degenerate induced metric: leaf is not an immersion here")
    return MetricData(cols, gram, det, signed)
