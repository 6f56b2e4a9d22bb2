"""Curvature forms of plane congruences in R^4 and closed-surface integrals.

For a field of oriented 2-planes in R^4 the curvature 2-vector splits along
the tautological bundles; pairing it with the plane blade gives the tangent
form, with the blade's Hodge dual the normal form.  Both integrate to 2 pi
times the Euler number of the corresponding bundle over a closed surface.

The 2-forms factor through the two unit 2-sphere components of the plane
field under the self-dual / anti-self-dual splitting of 2-vectors; mapping
degrees of those components give the Euler numbers.  The basis chosen below
orients each 3-dimensional eigenspace so that the commutator bracket acts as
the right-handed cross product (times sqrt(2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .algebra import Multivector, Signature, hodge
from .congruence import Congruence, metric_at
from .errors import GeometryError
from .grassmann import OrientedPlane, curvature_bivector
from .numerics import tmap

PAIR_ORDER = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]

_S = 1.0 / np.sqrt(2.0)
# rows: oriented orthonormal bases of the +1 and -1 eigenspaces of the Hodge star,
# as coefficient vectors over e_12, e_13, e_14, e_23, e_24, e_34
SELF_DUAL_BASIS = np.array(
    [
        [_S, 0, 0, 0, 0, _S],    # e12 + e34
        [0, _S, 0, 0, -_S, 0],   # e13 - e24
        [0, 0, _S, _S, 0, 0],    # e14 + e23
    ]
)
ANTI_SELF_DUAL_BASIS = np.array(
    [
        [_S, 0, 0, 0, 0, -_S],   # e12 - e34
        [0, _S, 0, 0, _S, 0],    # e13 + e24
        [0, 0, -_S, _S, 0, 0],   # e23 - e14
    ]
)
SPHERE_RADIUS = _S  # both factor spheres have radius sqrt(2)/2


def two_vector_components(mv: Multivector) -> np.ndarray:
    """Coefficients of a 2-vector in R^4 over the pair basis."""
    if mv.sig.m != 4:
        raise GeometryError("component extraction expects a 2-vector in R^4")
    out = np.empty(6)
    for idx, (i, j) in enumerate(PAIR_ORDER):
        out[idx] = mv.coeffs[(1 << (i - 1)) | (1 << (j - 1))]
    return out


def two_vector_from_components(comps) -> Multivector:
    sig = Signature(4)
    mv = Multivector.zero(sig)
    for idx, (i, j) in enumerate(PAIR_ORDER):
        mv.coeffs[(1 << (i - 1)) | (1 << (j - 1))] = comps[idx]
    return mv


@dataclass
class SelfDualSplit:
    """Components of a 2-vector in the two Hodge eigenspaces."""

    g1: np.ndarray           # coordinates in the self-dual basis
    g2: np.ndarray           # coordinates in the anti-self-dual basis
    decomposability_residual: float   # | |g1| - |g2| |, zero iff decomposable

    @property
    def norms(self):
        return float(np.linalg.norm(self.g1)), float(np.linalg.norm(self.g2))


def selfdual_split(blade) -> SelfDualSplit:
    """Split a 2-vector (Multivector or 6-component array) into sphere factors."""
    comps = blade if isinstance(blade, np.ndarray) else two_vector_components(blade)
    g1 = SELF_DUAL_BASIS @ comps
    g2 = ANTI_SELF_DUAL_BASIS @ comps
    return SelfDualSplit(g1, g2, abs(np.linalg.norm(g1) - np.linalg.norm(g2)))


def recompose(g1, g2) -> np.ndarray:
    """2-vector components from sphere-factor coordinates."""
    return SELF_DUAL_BASIS.T @ np.asarray(g1) + ANTI_SELF_DUAL_BASIS.T @ np.asarray(g2)


def plane_from_bivector(comps, tol: float = 1e-8) -> OrientedPlane:
    """Oriented 2-plane whose blade is the given unit decomposable 2-vector.

    Factorizes through the skew matrix of the 2-vector: its negative square
    is the tangential projector.  The returned frame is one valid choice;
    every derived quantity downstream is frame-gauge free.
    """
    comps = np.asarray(comps, dtype=float)
    if abs(np.linalg.norm(comps) - 1.0) > tol:
        raise GeometryError("2-vector is not unit")
    split = selfdual_split(comps)
    if split.decomposability_residual > tol:
        raise GeometryError("2-vector is not decomposable")
    W = np.zeros((4, 4))
    for idx, (i, j) in enumerate(PAIR_ORDER):
        W[i - 1, j - 1] = comps[idx]
        W[j - 1, i - 1] = -comps[idx]
    proj = -W @ W
    vals, vecs = np.linalg.eigh(proj)
    frame = vecs[:, -2:]
    plane = OrientedPlane(frame, Signature(4))
    if np.dot(two_vector_components(plane.blade), comps) < 0:
        frame = frame[:, ::-1].copy()
        plane = OrientedPlane(frame, Signature(4))
    return plane


# -- curvature 2-forms ------------------------------------------------------------


def curvature_two_vector(c: Congruence, x) -> Multivector:
    """Curvature 2-vector of the plane field on the chart axes (2D charts)."""
    if c.domain_dim != 2:
        raise GeometryError("curvature 2-form needs a 2-dimensional chart")
    t1 = c.dplane(x, c.axis_vector(0))
    t2 = c.dplane(x, c.axis_vector(1))
    return curvature_bivector(t1, t2)


def omega_forms(c: Congruence, x) -> tuple:
    """Tangent and normal curvature 2-forms evaluated on the chart axes.

    Pairs the curvature 2-vector with the plane blade and its Hodge dual.
    For plane fields in R^3 (line congruences) the normal form is identically
    zero and is returned as such.
    """
    if c.nplane != 2:
        raise GeometryError("curvature forms implemented for 2-plane fields")
    R = curvature_two_vector(c, x)
    p = c.plane(x)
    omega_t = R.inner(p.blade)
    if c.m == 4:
        omega_n = R.inner(hodge(p.blade))
    elif c.codim == 1:
        omega_n = 0.0
    else:
        raise GeometryError("normal form defined for codimension 2 in R^4 or lines in R^3")
    return float(omega_t), float(omega_n)


def pointwise_curvatures(c: Congruence, x, lam) -> tuple:
    """Gauss and normal curvature of the leaf through foot + lam at x.

    Divides the curvature forms by the signed area element of the leaf
    metric; raises when the leaf degenerates there.
    """
    omega_t, omega_n = omega_forms(c, x)
    md = metric_at(c, x, lam, strict=True)
    dA = md.signed_area
    if abs(dA) < 1e-14:
        raise GeometryError("vanishing area element")
    return omega_t / dA, omega_n / dA, dA


# -- closed surfaces and integrals -------------------------------------------------


@dataclass
class SurfaceChart:
    """One chart of a closed surface: a congruence plus an optional mask of
    isolated coordinate singularities where all integrands vanish by limit."""

    congruence: Congruence
    singular_mask: object = None   # callable x -> bool


@dataclass
class ClosedSurfaceCongruence:
    """Plane congruence over a closed oriented surface, given by charts.

    overlap_pairs lists ((chart_a, x_a), (chart_b, x_b)) samples mapping to
    the same surface point, used to certify the charts glue consistently.
    """

    charts: list
    overlap_pairs: list
    name: str = ""

    def overlap_residual(self) -> float:
        worst = 0.0
        for (ia, xa), (ib, xb) in self.overlap_pairs:
            ca = self.charts[ia].congruence
            cb = self.charts[ib].congruence
            ba = two_vector_components(ca.plane(xa).blade)
            bb = two_vector_components(cb.plane(xb).blade)
            worst = max(worst, float(np.linalg.norm(ba - bb)))
            worst = max(worst, float(np.linalg.norm(ca.foot(xa) - cb.foot(xb))))
        return worst


def _sphere_map(c: Congruence):
    """Pointwise sphere-factor coordinates of the plane field."""

    def fn(x):
        split = selfdual_split(two_vector_components(c.plane(x).blade))
        return split.g1, split.g2

    return fn


def degree_integrands(c: Congruence, x, h: float = None) -> tuple:
    """Pullback area-form densities of the two sphere factors at x.

    Each equals <unit radial, du g x dv g> for the factor map g; dividing the
    chart integral by the factor sphere's total area gives the mapping degree.
    """
    h = h or c.h
    gm = _sphere_map(c)
    g1, g2 = gm(x)
    e0, e1 = c.axis_vector(0), c.axis_vector(1)
    g1u, g2u = gm(x + h * e0)
    g1mu, g2mu = gm(x - h * e0)
    g1v, g2v = gm(x + h * e1)
    g1mv, g2mv = gm(x - h * e1)
    d1u, d1v = (g1u - g1mu) / (2 * h), (g1v - g1mv) / (2 * h)
    d2u, d2v = (g2u - g2mu) / (2 * h), (g2v - g2mv) / (2 * h)
    r = SPHERE_RADIUS
    w1 = float(np.dot(g1 / r, np.cross(d1u, d1v)))
    w2 = float(np.dot(g2 / r, np.cross(d2u, d2v)))
    return w1, w2


@dataclass
class GaussBonnetReport:
    """Integrated curvature forms, factor degrees, and consistency residuals."""

    total_tangent: float          # integral of the tangent form
    total_normal: float           # integral of the normal form
    euler_tangent: float          # tangent integral / 2 pi
    euler_normal: float           # normal integral / 2 pi
    degree_1: float               # mapping degree of the self-dual factor
    degree_2: float               # mapping degree of the anti-self-dual factor
    identity_residual_t: float    # max | omega_T - (w1 + w2) | over nodes
    identity_residual_n: float    # max | omega_N - (w1 - w2) | over nodes
    overlap_residual: float
    refinement_delta: float       # change of euler numbers under half resolution
    resolution: int

    def summary_lines(self):
        return [
            ("euler_tangent", self.euler_tangent),
            ("euler_normal", self.euler_normal),
            ("degree_1", self.degree_1),
            ("degree_2", self.degree_2),
            ("identity_residual_t", self.identity_residual_t),
            ("identity_residual_n", self.identity_residual_n),
            ("overlap_residual", self.overlap_residual),
            ("refinement_delta", self.refinement_delta),
        ]


def _chart_fields(chart: SurfaceChart, res: int):
    c = chart.congruence
    axes = c.box.axes(res + 1)
    u, v = axes
    wt = np.zeros((len(u), len(v)))
    wn = np.zeros_like(wt)
    d1 = np.zeros_like(wt)
    d2 = np.zeros_like(wt)
    idt = 0.0
    idn = 0.0

    def row(iu):
        rt = np.zeros(len(v))
        rn = np.zeros(len(v))
        r1 = np.zeros(len(v))
        r2 = np.zeros(len(v))
        best_t = best_n = 0.0
        for iv in range(len(v)):
            x = np.array([u[iu], v[iv]])
            if chart.singular_mask is not None and chart.singular_mask(x):
                continue
            ot, on = omega_forms(c, x)
            w1, w2 = degree_integrands(c, x)
            rt[iv], rn[iv] = ot, on
            r1[iv], r2[iv] = w1, w2
            best_t = max(best_t, abs(ot - (w1 + w2)))
            best_n = max(best_n, abs(on - (w1 - w2)))
        return rt, rn, r1, r2, best_t, best_n

    rows = tmap(row, range(len(u)))
    for iu, (rt, rn, r1, r2, bt, bn) in enumerate(rows):
        wt[iu], wn[iu], d1[iu], d2[iu] = rt, rn, r1, r2
        idt = max(idt, bt)
        idn = max(idn, bn)

    def integ(f):
        return float(simpson(simpson(f, x=v, axis=1), x=u))

    return integ(wt), integ(wn), integ(d1), integ(d2), idt, idn


def gauss_bonnet(closed: ClosedSurfaceCongruence, res: int = 128,
                 check_refinement: bool = True) -> GaussBonnetReport:
    """Integrate the curvature forms and factor degrees over a closed surface."""

    def totals(r):
        tt = tn = t1 = t2 = 0.0
        it = inn = 0.0
        for chart in closed.charts:
            a, b, w1, w2, idt, idn = _chart_fields(chart, r)
            tt += a
            tn += b
            t1 += w1
            t2 += w2
            it = max(it, idt)
            inn = max(inn, idn)
        return tt, tn, t1, t2, it, inn

    tt, tn, t1, t2, idt, idn = totals(res)
    two_pi = 2.0 * np.pi
    sphere_area = 4.0 * np.pi * SPHERE_RADIUS**2
    if check_refinement:
        tt2, tn2, *_ = totals(res // 2)
        delta = max(abs(tt - tt2), abs(tn - tn2)) / two_pi
    else:
        delta = float("nan")
    return GaussBonnetReport(
        total_tangent=tt,
        total_normal=tn,
        euler_tangent=tt / two_pi,
        euler_normal=tn / two_pi,
        degree_1=t1 / sphere_area,
        degree_2=t2 / sphere_area,
        identity_residual_t=idt,
        identity_residual_n=idn,
        overlap_residual=closed.overlap_residual(),
        refinement_delta=delta,
        resolution=res,
    )
