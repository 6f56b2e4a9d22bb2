"""Oriented planes in R^m, their tangent data, and curvature operators.

An oriented n-plane is stored as an orthonormal frame (m, n) together with its
unit decomposable n-vector (the wedge of the frame columns).  Points of the
affine-plane bundle pair such an n-plane with a foot vector inside it; the
affine plane itself is the orthogonal complement through the foot.

Tangent vectors to the plane manifold appear in two interchangeable forms:
as a linear map from the plane into its orthogonal complement (matrix whose
j-th column is the image of frame column j), and as an n-vector obtained by
replacing one frame factor at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Multivector, Signature, epsilon_n, frame_blade, hodge, interior
from .errors import GeometryError

ORTHONORMAL_TOL = 1e-10
PLUCKER_TOL = 1e-9
TANGENT_ROUNDTRIP_TOL = 1e-8
ALPHA_AGREEMENT_TOL = 1e-8


@dataclass
class OrientedPlane:
    """Oriented n-plane through the origin of (R^m, signature).

    The frame columns are orthonormal for the signature metric with unit
    positive norms, so planes are spacelike when the metric is indefinite.
    """

    frame: np.ndarray
    sig: Signature
    _blade: Multivector = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.frame = np.asarray(self.frame, dtype=float)
        m, n = self.frame.shape
        if m != self.sig.m or not 1 <= n <= m:
            raise GeometryError(f"frame shape {self.frame.shape} invalid for m={self.sig.m}")
        g = self.sig.metric_signs()
        gram = self.frame.T @ (g[:, None] * self.frame)
        if np.max(np.abs(gram - np.eye(n))) > ORTHONORMAL_TOL:
            raise GeometryError("frame columns are not orthonormal for the metric")

    @staticmethod
    def from_span(sig: Signature, vectors: np.ndarray) -> "OrientedPlane":
        """Orthonormalize a spanning set, keeping its orientation (Euclidean)."""
        if not sig.is_euclidean:
            raise GeometryError("from_span orthonormalizes with the Euclidean metric only")
        vectors = np.asarray(vectors, dtype=float)
        q, r = np.linalg.qr(vectors)
        d = np.diag(r)
        if np.min(np.abs(d)) < 1e-12 * max(1.0, np.max(np.abs(d))):
            raise GeometryError("spanning set is numerically degenerate")
        q = q * np.sign(d)[None, :]
        return OrientedPlane(q, sig)

    @property
    def n(self) -> int:
        return self.frame.shape[1]

    @property
    def m(self) -> int:
        return self.frame.shape[0]

    @property
    def codim(self) -> int:
        return self.m - self.n

    @property
    def blade(self) -> Multivector:
        if self._blade is None:
            self._blade = frame_blade(self.sig, self.frame)
        return self._blade

    def tangential(self, w: np.ndarray) -> np.ndarray:
        """Component of w inside the plane (metric projection)."""
        g = self.sig.metric_signs()
        return self.frame @ (self.frame.T @ (g * np.asarray(w, dtype=float)))

    def normal(self, w: np.ndarray) -> np.ndarray:
        return np.asarray(w, dtype=float) - self.tangential(w)

    def projector(self) -> np.ndarray:
        """Matrix of the tangential projection."""
        g = self.sig.metric_signs()
        return self.frame @ (self.frame.T * g[None, :])

    def contains(self, w: np.ndarray, tol: float = PLUCKER_TOL) -> bool:
        return float(np.linalg.norm(self.normal(w))) <= tol * max(1.0, float(np.linalg.norm(w)))

    def normal_frame(self) -> np.ndarray:
        """Orthonormal basis (m, m-n) of the orthogonal complement (Euclidean)."""
        if not self.sig.is_euclidean:
            raise GeometryError("normal_frame assumes a Euclidean metric")
        u, s, _ = np.linalg.svd(np.eye(self.m) - self.frame @ self.frame.T)
        return u[:, : self.codim]


@dataclass
class AffinePlane:
    """Affine (m-n)-plane written as foot + (n-plane)^perp, with foot in the n-plane."""

    plane: OrientedPlane
    foot: np.ndarray

    def __post_init__(self):
        self.foot = np.asarray(self.foot, dtype=float)
        if self.foot.shape != (self.plane.m,):
            raise GeometryError("foot vector has the wrong dimension")
        res = np.linalg.norm(self.plane.normal(self.foot))
        if res > PLUCKER_TOL * max(1.0, np.linalg.norm(self.foot)):
            raise GeometryError(f"foot is not tangential (residual {res:.2e})")

    def incidence_residual(self, point: np.ndarray) -> float:
        """Distance from the affine plane: |tangential(point) - foot|."""
        return float(np.linalg.norm(self.plane.tangential(point) - self.foot))

    def contains_point(self, point: np.ndarray, tol: float = PLUCKER_TOL) -> bool:
        return self.incidence_residual(point) <= tol * max(1.0, float(np.linalg.norm(point)))


@dataclass
class GrassTangent:
    """Tangent vector at an oriented plane, as the map plane -> plane^perp."""

    plane: OrientedPlane
    mat: np.ndarray

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=float)
        if self.mat.shape != self.plane.frame.shape:
            raise GeometryError("tangent matrix shape must match the frame")
        g = self.plane.sig.metric_signs()
        res = np.max(np.abs(self.plane.frame.T @ (g[:, None] * self.mat)))
        if res > 1e-8 * max(1.0, float(np.max(np.abs(self.mat)))):
            raise GeometryError(f"tangent columns are not normal to the plane ({res:.2e})")

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Image of a plane vector under the tangent map."""
        g = self.plane.sig.metric_signs()
        return self.mat @ (self.plane.frame.T @ (g * np.asarray(v, dtype=float)))

    def adjoint_apply(self, xi: np.ndarray) -> np.ndarray:
        """Image of a normal vector under the metric adjoint map plane^perp -> plane."""
        g = self.plane.sig.metric_signs()
        return self.plane.frame @ (self.mat.T @ (g * np.asarray(xi, dtype=float)))


def linmap_to_eta(t: GrassTangent) -> Multivector:
    """n-vector form of a tangent: replace each frame factor by its image in turn."""
    p = t.plane
    out = Multivector.zero(p.sig)
    for j in range(p.n):
        cols = p.frame.copy()
        cols[:, j] = t.mat[:, j]
        out = out + frame_blade(p.sig, cols)
    return out


def eta_to_linmap(plane: OrientedPlane, eta: Multivector,
                  tol: float = TANGENT_ROUNDTRIP_TOL) -> GrassTangent:
    """Linear-map form of a tangent n-vector: v maps to -contract(eta ^ v).

    Raises when eta is not tangent at the plane (the n-vector has components
    that the map form cannot represent, detected by a round-trip residual).
    """
    if not plane.sig.is_euclidean:
        raise GeometryError("tangent conversion implemented for Euclidean metrics only")
    cols = np.empty_like(plane.frame)
    for j in range(plane.n):
        fj = Multivector.from_vector(plane.sig, plane.frame[:, j])
        cols[:, j] = -interior(plane.blade, eta.wedge(fj)).vector_part()
    t = GrassTangent(plane, cols)
    back = linmap_to_eta(t)
    res = (back - eta).norm()
    if res > tol * max(1.0, eta.norm()):
        raise GeometryError(f"n-vector is not tangent at the plane (residual {res:.2e})")
    return t


# -- tautological 1-form -------------------------------------------------------


def alpha_via_contraction(ap: AffinePlane, eta: Multivector) -> np.ndarray:
    """Tautological form from the plane-motion part: -contract(eta ^ foot)."""
    v_mv = Multivector.from_vector(ap.plane.sig, ap.foot)
    return -interior(ap.plane.blade, eta.wedge(v_mv)).vector_part()


def alpha_via_projection(ap: AffinePlane, w: np.ndarray) -> np.ndarray:
    """Tautological form from the foot-motion part: normal component of w."""
    return ap.plane.normal(w)


def alpha(ap: AffinePlane, eta: Multivector, w: np.ndarray,
          tol: float = ALPHA_AGREEMENT_TOL) -> np.ndarray:
    """Tautological form on a tangent (eta, w) of the affine-plane bundle.

    Evaluates both equivalent expressions and insists they agree; they differ
    exactly when (eta, w) fails the tangency constraint of the bundle.
    """
    a1 = alpha_via_contraction(ap, eta)
    a2 = alpha_via_projection(ap, w)
    scale = max(1.0, float(np.linalg.norm(a1)), float(np.linalg.norm(a2)))
    if np.linalg.norm(a1 - a2) > tol * scale:
        raise GeometryError("tautological-form expressions disagree; data is not tangent")
    return a2


# -- curvature of the tautological bundles --------------------------------------


def curvature_bivector(t1: GrassTangent, t2: GrassTangent) -> Multivector:
    """Curvature 2-vector eps_n [eta_1, eta_2] of two tangents at one plane."""
    n = t1.plane.n
    e1 = linmap_to_eta(t1)
    e2 = linmap_to_eta(t2)
    return e1.bracket(e2).scale(epsilon_n(n))


def bivector_action(biv: Multivector) -> np.ndarray:
    """Matrix of xi -> [xi, biv] acting on vectors."""
    m = biv.sig.m
    out = np.empty((m, m))
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        col = Multivector.from_vector(biv.sig, e).bracket(biv)
        out[:, i] = col.vector_part()
    return out


def curvature_operator(t1: GrassTangent, t2: GrassTangent) -> np.ndarray:
    """Ambient matrix of the curvature operator of the tautological bundles.

    Preserves the plane and its complement; the restriction to the plane is
    the tangent-bundle curvature, the restriction to the complement the
    normal-bundle curvature.
    """
    return bivector_action(curvature_bivector(t1, t2))


def normal_curvature_adjoint(t1: GrassTangent, t2: GrassTangent) -> np.ndarray:
    """Normal-bundle curvature via adjoints: u1 u2^* - u2 u1^* on plane^perp."""
    if t1.plane is not t2.plane and not np.allclose(t1.plane.frame, t2.plane.frame):
        raise GeometryError("tangents must share a base plane")
    return t1.mat @ t2.mat.T - t2.mat @ t1.mat.T


def shape_operator_at_plane(t: GrassTangent, xi: np.ndarray) -> np.ndarray:
    """Shape-type map of a normal vector along a plane tangent: the adjoint image."""
    return t.adjoint_apply(xi)


# -- samplers (used by tests, demos, and randomized scenarios) ------------------


def random_plane(rng: np.random.Generator, m: int, n: int) -> OrientedPlane:
    sig = Signature(m)
    return OrientedPlane.from_span(sig, rng.standard_normal((m, n)))


def random_tangent(rng: np.random.Generator, plane: OrientedPlane) -> GrassTangent:
    raw = rng.standard_normal(plane.frame.shape)
    proj = plane.projector()
    return GrassTangent(plane, raw - proj @ raw)


def plane_hodge_dual(plane: OrientedPlane) -> Multivector:
    """Hodge dual of the plane's blade (Euclidean)."""
    return hodge(plane.blade)
