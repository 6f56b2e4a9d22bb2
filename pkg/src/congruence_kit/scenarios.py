"""Named example congruences, curves, and closed surfaces.

Every scenario is an exactly-known geometric family with analytic formulas,
so tests and command-line runs can compare numerics against closed-form
expectations.  Scenarios accept a small parameter dict (seeds, amplitudes,
geometric constants) with defaults chosen to keep every run deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .algebra import Signature
from .congruence import Box, Congruence
from .curvature4 import (
    ClosedSurfaceCongruence,
    SurfaceChart,
    plane_from_bivector,
    recompose,
)
from .curves import SphereCurve
from .errors import ConfigError, GeometryError
from .grassmann import AffinePlane, OrientedPlane


def positive_qr_frame(cols: np.ndarray) -> np.ndarray:
    """Orthonormal frame from independent columns, orientation preserved.

    QR with the diagonal of R forced positive; smooth in the columns wherever
    they stay independent.
    """
    q, r = np.linalg.qr(np.asarray(cols, dtype=float))
    d = np.sign(np.diag(r))
    if np.any(d == 0) or np.min(np.abs(np.diag(r))) < 1e-12:
        raise GeometryError("degenerate column set, no oriented frame")
    return q * d


def congruence_from_immersion(psi, dpsi, box: Box, h: float = 1e-5,
                              name: str = "", sig: Signature = None) -> Congruence:
    """Tangent-plane congruence of a parametrized submanifold.

    The plane at x is the oriented tangent plane of the immersion, the foot
    its tangential position component; the affine planes of the family are
    the normal planes through the immersed points.
    """

    def plane_fn(x):
        x = np.asarray(x, dtype=float)
        frame = positive_qr_frame(dpsi(x))
        s = sig or Signature(frame.shape[0])
        plane = OrientedPlane(frame, s)
        return AffinePlane(plane, plane.tangential(psi(x)))

    return Congruence(box, plane_fn, h=h, name=name)


# -- immersion formulas -------------------------------------------------------------

SPHERE_CENTER = np.array([0.3, -0.2, 0.5, 0.4])


def _sphere_north(x):
    th, ph = x
    return SPHERE_CENTER + np.array(
        [np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th), 0.0]
    )


def _sphere_north_d(x):
    th, ph = x
    return np.array([
        [np.cos(th) * np.cos(ph), -np.sin(th) * np.sin(ph)],
        [np.cos(th) * np.sin(ph), np.sin(th) * np.cos(ph)],
        [-np.sin(th), 0.0],
        [0.0, 0.0],
    ])


def _sphere_south(x):
    # the same sphere seen from the opposite pole, orientation preserved
    th, ph = x
    return SPHERE_CENTER + np.array(
        [np.sin(th) * np.cos(ph), -np.sin(th) * np.sin(ph), -np.cos(th), 0.0]
    )


def _sphere_south_d(x):
    th, ph = x
    return np.array([
        [np.cos(th) * np.cos(ph), -np.sin(th) * np.sin(ph)],
        [-np.cos(th) * np.sin(ph), -np.sin(th) * np.cos(ph)],
        [np.sin(th), 0.0],
        [0.0, 0.0],
    ])


def _clifford(x):
    u, v = x
    return np.array([np.cos(u), np.sin(u), np.cos(v), np.sin(v)]) / np.sqrt(2.0)


def _clifford_d(x):
    u, v = x
    return np.array([
        [-np.sin(u), 0.0],
        [np.cos(u), 0.0],
        [0.0, -np.sin(v)],
        [0.0, np.cos(v)],
    ]) / np.sqrt(2.0)


TORUS_CENTER = np.array([0.1, 0.25, -0.3, 0.2])
TORUS_R, TORUS_RHO = 2.0, 0.75


def _torus(x):
    u, v = x
    w = TORUS_R + TORUS_RHO * np.cos(v)
    return TORUS_CENTER + np.array(
        [w * np.cos(u), w * np.sin(u), TORUS_RHO * np.sin(v), 0.0]
    )


def _torus_d(x):
    u, v = x
    w = TORUS_R + TORUS_RHO * np.cos(v)
    return np.array([
        [-w * np.sin(u), -TORUS_RHO * np.sin(v) * np.cos(u)],
        [w * np.cos(u), -TORUS_RHO * np.sin(v) * np.sin(u)],
        [0.0, TORUS_RHO * np.cos(v)],
        [0.0, 0.0],
    ])


def _s3_hypersurface(rho0: float):
    def psi(x):
        u, v = x
        n = np.array([np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u)])
        return np.concatenate([np.sin(rho0) * n, [np.cos(rho0)]])

    def dpsi(x):
        u, v = x
        dn_u = np.array([np.cos(u) * np.cos(v), np.cos(u) * np.sin(v), -np.sin(u)])
        dn_v = np.array([-np.sin(u) * np.sin(v), np.sin(u) * np.cos(v), 0.0])
        out = np.zeros((4, 2))
        out[:3, 0] = np.sin(rho0) * dn_u
        out[:3, 1] = np.sin(rho0) * dn_v
        return out

    return psi, dpsi


def _h3_hypersurface(rho0: float):
    # geodesic sphere in the hyperboloid <x, x> = -1 of a (1, 3) signature space
    def psi(x):
        u, v = x
        n = np.array([np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u)])
        return np.concatenate([[np.cosh(rho0)], np.sinh(rho0) * n])

    def dpsi(x):
        u, v = x
        dn_u = np.array([np.cos(u) * np.cos(v), np.cos(u) * np.sin(v), -np.sin(u)])
        dn_v = np.array([-np.sin(u) * np.sin(v), np.sin(u) * np.cos(v), 0.0])
        out = np.zeros((4, 2))
        out[1:, 0] = np.sinh(rho0) * dn_u
        out[1:, 1] = np.sinh(rho0) * dn_v
        return out

    return psi, dpsi


_VERONESE_SCALE = np.sqrt(3.0)


def _veronese_point(q):
    x, y, z = q
    s3 = _VERONESE_SCALE
    return np.array([
        x * y / s3,
        x * z / s3,
        y * z / s3,
        (x * x - y * y) / (2.0 * s3),
        (x * x + y * y - 2.0 * z * z) / 6.0,
    ])


def _veronese(x):
    u, v = x
    q = _VERONESE_SCALE * np.array(
        [np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u)]
    )
    return _veronese_point(q)


def _veronese_d(x):
    u, v = x
    s3 = _VERONESE_SCALE
    q = s3 * np.array([np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u)])
    dq_u = s3 * np.array([np.cos(u) * np.cos(v), np.cos(u) * np.sin(v), -np.sin(u)])
    dq_v = s3 * np.array([-np.sin(u) * np.sin(v), np.sin(u) * np.cos(v), 0.0])
    x0, y0, z0 = q

    def dpoint(d):
        dx, dy, dz = d
        return np.array([
            (dx * y0 + x0 * dy) / s3,
            (dx * z0 + x0 * dz) / s3,
            (dy * z0 + y0 * dz) / s3,
            (x0 * dx - y0 * dy) / s3,
            (x0 * dx + y0 * dy - 2.0 * z0 * dz) / 3.0,
        ])

    return np.stack([dpoint(dq_u), dpoint(dq_v)], axis=1)


def _graph_r3(x):
    u, v = x
    return np.array([u, v, 0.35 * u * u + 0.2 * v * v + 0.1 * u * v])


def _graph_r3_d(x):
    u, v = x
    return np.array([[1.0, 0.0], [0.0, 1.0], [0.7 * u + 0.1 * v, 0.4 * v + 0.1 * u]])


def _holomorphic_graph(scale: float):
    def psi(x):
        u, v = x
        return np.array([u, v, scale * (u * u - v * v) / 2.0, scale * u * v])

    def dpsi(x):
        u, v = x
        return np.array([
            [1.0, 0.0],
            [0.0, 1.0],
            [scale * u, -scale * v],
            [scale * v, scale * u],
        ])

    return psi, dpsi


# -- vectorial plane families (curvature cross-checks) -------------------------------


def rotating_plane_family(seed: int = 5) -> Congruence:
    """Generic 2-plane field in R^4 driven by commuting-free rotations."""
    rng = np.random.default_rng(seed)

    def skew():
        a = rng.standard_normal((4, 4))
        return 0.5 * (a - a.T)

    A, B, C = skew(), skew(), skew()
    sig = Signature(4)

    def plane_fn(x):
        u, v = x
        rot = expm(u * A + v * B + u * v * C)
        plane = OrientedPlane(rot[:, :2], sig)
        return AffinePlane(plane, np.zeros(4))

    return Congruence(Box((-0.5, -0.5), (0.5, 0.5)), plane_fn, name="rotating-plane-g24")


def line_family_r3() -> Congruence:
    """Sweeping line directions in R^3 (one-dimensional planes, 2-parameter family)."""
    sig = Signature(3)

    def plane_fn(x):
        s, t = x
        d = np.array([np.cos(s) * np.cos(t), np.sin(s) * np.cos(t), np.sin(t)])
        plane = OrientedPlane(d[:, None], sig)
        return AffinePlane(plane, np.zeros(3))

    return Congruence(Box((-0.6, -0.6), (0.6, 0.6)), plane_fn, name="line-family-g13")


# -- perturbed closed plane field ----------------------------------------------------


def _fourier_field(rng: np.random.default_rng, terms: int = 3):
    """Random 2 pi-periodic trigonometric R^3 field with O(1) coefficients."""
    ks = rng.integers(1, 3, size=(terms, 2))
    amps = rng.standard_normal((terms, 3, 2)) / terms

    def fn(x):
        u, v = x
        out = np.zeros(3)
        for (ku, kv), a in zip(ks, amps):
            out += a[:, 0] * np.cos(ku * u + kv * v) + a[:, 1] * np.sin(ku * u - kv * v)
        return out

    return fn


def perturbed_torus_congruence(seed: int = 0, amplitude: float = 0.05) -> Congruence:
    """Closed plane field built by perturbing both sphere factors of the
    diagonal torus field, plus a perturbed foot.

    Any pair of sphere-valued maps recombines into a unit decomposable
    2-vector field, so the perturbed field is again a plane congruence; it is
    generically non-integrable, which makes it the negative control.
    """
    rng = np.random.default_rng(seed)
    f1 = _fourier_field(rng)
    f2 = _fourier_field(rng)
    f3 = _fourier_field(rng)
    r = 1.0 / np.sqrt(2.0)
    sig4 = Signature(4)

    def plane_fn(x):
        u, v = x
        g1 = np.array([0.0, -np.cos(u + v), -np.sin(u + v)]) * r
        g2 = np.array([0.0, np.cos(u - v), np.sin(u - v)]) * r
        g1 = g1 + amplitude * f1(x)
        g2 = g2 + amplitude * f2(x)
        g1 = r * g1 / np.linalg.norm(g1)
        g2 = r * g2 / np.linalg.norm(g2)
        plane = plane_from_bivector(recompose(g1, g2), tol=1e-6)
        raw_foot = amplitude * np.concatenate([f3(x), [0.0]])
        return AffinePlane(plane, plane.tangential(raw_foot))

    _ = sig4
    return Congruence(
        Box((0.0, 0.0), (2.0 * np.pi, 2.0 * np.pi)), plane_fn,
        name=f"random-fourier(seed={seed}, amplitude={amplitude})",
    )


# -- closed atlases -------------------------------------------------------------------


def sphere_atlas() -> ClosedSurfaceCongruence:
    """Round 2-sphere in R^4 as two polar caps, outward oriented."""
    half = np.pi / 2.0
    north = congruence_from_immersion(
        _sphere_north, _sphere_north_d, Box((0.0, 0.0), (half, 2.0 * np.pi)),
        name="sphere-north",
    )
    south = congruence_from_immersion(
        _sphere_south, _sphere_south_d, Box((0.0, 0.0), (half, 2.0 * np.pi)),
        name="sphere-south",
    )

    def pole_mask(x):
        return abs(x[0]) < 1e-12

    pairs = []
    for ph in np.linspace(0.25, 5.9, 5):
        pairs.append(((0, np.array([half, ph])), (1, np.array([half, (-ph) % (2 * np.pi)]))))
    return ClosedSurfaceCongruence(
        [SurfaceChart(north, pole_mask), SurfaceChart(south, pole_mask)],
        pairs, name="sphere-gauss",
    )


def _single_periodic_atlas(c: Congruence, name: str) -> ClosedSurfaceCongruence:
    two_pi = 2.0 * np.pi
    pairs = []
    for t in np.linspace(0.3, 5.7, 4):
        pairs.append(((0, np.array([0.0, t])), (0, np.array([two_pi, t]))))
        pairs.append(((0, np.array([t, 0.0])), (0, np.array([t, two_pi]))))
    return ClosedSurfaceCongruence([SurfaceChart(c)], pairs, name=name)


def clifford_atlas() -> ClosedSurfaceCongruence:
    c = congruence_from_immersion(
        _clifford, _clifford_d, Box((0.0, 0.0), (2.0 * np.pi, 2.0 * np.pi)),
        name="clifford-torus",
    )
    return _single_periodic_atlas(c, "clifford-torus")


def torus_atlas() -> ClosedSurfaceCongruence:
    c = congruence_from_immersion(
        _torus, _torus_d, Box((0.0, 0.0), (2.0 * np.pi, 2.0 * np.pi)), name="torus-r4",
    )
    return _single_periodic_atlas(c, "torus-r4")


def perturbed_atlas(seed: int = 0, amplitude: float = 0.05) -> ClosedSurfaceCongruence:
    c = perturbed_torus_congruence(seed, amplitude)
    return _single_periodic_atlas(c, c.name)


# -- curves ---------------------------------------------------------------------------


def great_circle_curve():
    alpha = lambda t: np.array([np.cos(t), np.sin(t), 0.0])
    dalpha = lambda t: np.array([-np.sin(t), np.cos(t), 0.0])
    ddalpha = lambda t: -np.array([np.cos(t), np.sin(t), 0.0])
    return SphereCurve(alpha, dalpha, ddalpha)


def latitude_curve(colatitude: float = np.pi / 4.0):
    a = np.sin(colatitude)
    c0 = np.cos(colatitude)
    alpha = lambda t: np.array([a * np.cos(t / a), a * np.sin(t / a), c0])
    dalpha = lambda t: np.array([-np.sin(t / a), np.cos(t / a), 0.0])
    ddalpha = lambda t: np.array([-np.cos(t / a) / a, -np.sin(t / a) / a, 0.0])
    return SphereCurve(alpha, dalpha, ddalpha, t1=2.0 * np.pi * a)


# -- catalog --------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    key: str
    kind: str                      # "congruence" | "curve" | "closed"
    summary: str
    build: object                  # callable(params: dict) -> dict of objects
    commands: tuple = ()
    defaults: dict = field(default_factory=dict)


def _build_sphere_gauss(params):
    box = Box((0.4, 0.3), (1.2, 1.1))
    c = congruence_from_immersion(
        _sphere_north, _sphere_north_d, box, name="sphere-gauss",
    )
    return {"congruence": c, "closed": sphere_atlas(), "immersion": _sphere_north}


def _build_clifford(params):
    box = Box((0.2, 0.1), (1.4, 1.3))
    c = congruence_from_immersion(_clifford, _clifford_d, box, name="clifford-torus")
    return {"congruence": c, "closed": clifford_atlas(), "immersion": _clifford}


def _build_torus(params):
    box = Box((0.3, 0.4), (1.5, 1.6))
    c = congruence_from_immersion(_torus, _torus_d, box, name="torus-r4")
    return {"congruence": c, "closed": torus_atlas(), "immersion": _torus}


def _build_great_circle(params):
    lam_amp = float(params.get("lambda_amplitude", 0.0))
    curve = great_circle_curve()
    lam = lambda t: lam_amp * np.sin(t)
    dlam = lambda t: lam_amp * np.cos(t)
    return {"curve": curve, "lam": lam, "dlam": dlam,
            "A0": float(params.get("A0", 0.4)), "B0": float(params.get("B0", 0.2))}


def _build_latitude(params):
    colat = float(params.get("colatitude", np.pi / 4.0))
    lam_amp = float(params.get("lambda_amplitude", 0.3))
    curve = latitude_curve(colat)
    lam = lambda t: lam_amp * np.sin(t)
    dlam = lambda t: lam_amp * np.cos(t)
    return {"curve": curve, "lam": lam, "dlam": dlam,
            "A0": float(params.get("A0", 0.25)), "B0": float(params.get("B0", -0.15)),
            "colatitude": colat}


def _build_s3(params):
    rho0 = float(params.get("radius", 0.8))
    psi, dpsi = _s3_hypersurface(rho0)
    box = Box((0.5, 0.2), (1.3, 1.0))
    c = congruence_from_immersion(psi, dpsi, box, name="s3-hypersurface")
    return {"congruence": c, "immersion": psi, "radius": rho0, "eps": 1}


def _build_h3(params):
    rho0 = float(params.get("radius", 0.8))
    psi, dpsi = _h3_hypersurface(rho0)
    box = Box((0.5, 0.2), (1.3, 1.0))
    c = congruence_from_immersion(psi, dpsi, box, name="h3-hypersurface",
                                  sig=Signature(4, 1))
    return {"congruence": c, "immersion": psi, "radius": rho0, "eps": -1}


def _build_veronese(params):
    box = Box((0.6, 0.3), (1.2, 0.9))
    c = congruence_from_immersion(_veronese, _veronese_d, box, name="rank1-k3")
    return {"congruence": c, "immersion": _veronese}


def _build_random_fourier(params):
    seed = int(params.get("seed", 0))
    amplitude = float(params.get("amplitude", 0.05))
    c = perturbed_torus_congruence(seed, amplitude)
    return {"congruence": c, "closed": perturbed_atlas(seed, amplitude),
            "seed": seed, "amplitude": amplitude}


def _build_lines_r3(params):
    box = Box((-0.8, -0.8), (0.8, 0.8))
    c = congruence_from_immersion(_graph_r3, _graph_r3_d, box, name="line-congruence-r3")
    return {"congruence": c, "immersion": _graph_r3}


def _build_holomorphic(params):
    scale = float(params.get("scale", 0.7))
    psi, dpsi = _holomorphic_graph(scale)
    box = Box((-0.7, -0.7), (0.7, 0.7))
    c = congruence_from_immersion(psi, dpsi, box, name="holomorphic-graph")
    return {"congruence": c, "immersion": psi}


CATALOG = {
    "sphere-gauss": Scenario(
        "sphere-gauss", "closed",
        "tangent planes of a translated round 2-sphere in R^4",
        _build_sphere_gauss, ("check", "reconstruct", "gaussbonnet"),
    ),
    "clifford-torus": Scenario(
        "clifford-torus", "closed",
        "tangent planes of the square torus in R^4",
        _build_clifford, ("check", "reconstruct", "gaussbonnet"),
    ),
    "torus-r4": Scenario(
        "torus-r4", "closed",
        "tangent planes of a translated torus of revolution in R^4",
        _build_torus, ("check", "reconstruct", "gaussbonnet"),
    ),
    "great-circle-curve": Scenario(
        "great-circle-curve", "curve",
        "support lines along a great circle",
        _build_great_circle, ("curves",),
        {"lambda_amplitude": 0.0, "A0": 0.4, "B0": 0.2},
    ),
    "latitude-curve": Scenario(
        "latitude-curve", "curve",
        "support lines along a latitude circle",
        _build_latitude, ("curves",),
        {"colatitude": np.pi / 4.0, "lambda_amplitude": 0.3, "A0": 0.25, "B0": -0.15},
    ),
    "s3-hypersurface": Scenario(
        "s3-hypersurface", "congruence",
        "normal planes of a geodesic sphere inside the unit 3-sphere",
        _build_s3, ("check", "spaceform"), {"radius": 0.8},
    ),
    "h3-hypersurface": Scenario(
        "h3-hypersurface", "congruence",
        "normal planes of a geodesic sphere inside hyperbolic 3-space",
        _build_h3, ("check", "spaceform"), {"radius": 0.8},
    ),
    "rank1-k3": Scenario(
        "rank1-k3", "congruence",
        "normal planes of the Veronese surface in the 4-sphere",
        _build_veronese, ("check", "spaceform"),
    ),
    "random-fourier": Scenario(
        "random-fourier", "closed",
        "perturbed torus plane field, generically non-integrable",
        _build_random_fourier, ("check", "reconstruct", "gaussbonnet"),
        {"seed": 0, "amplitude": 0.05},
    ),
    "line-congruence-r3": Scenario(
        "line-congruence-r3", "congruence",
        "normal lines of a quadratic graph surface in R^3",
        _build_lines_r3, ("check", "reconstruct"),
    ),
    "holomorphic-graph": Scenario(
        "holomorphic-graph", "congruence",
        "tangent planes of a complex-quadratic graph in R^4",
        _build_holomorphic, ("check", "reconstruct"), {"scale": 0.7},
    ),
}


def build_scenario(key: str, params: dict = None) -> dict:
    if key not in CATALOG:
        known = ", ".join(sorted(CATALOG))
        raise ConfigError(f"unknown scenario {key!r}; known scenarios: {known}")
    sc = CATALOG[key]
    merged = dict(sc.defaults)
    merged.update(params or {})
    out = sc.build(merged)
    out["scenario"] = sc
    out["params"] = merged
    return out
