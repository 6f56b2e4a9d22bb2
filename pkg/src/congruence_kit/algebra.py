"""Dense exterior/Clifford algebra kernel over R^m with pseudo-Euclidean metrics.

A multivector is stored as a flat array of 2^m coefficients indexed by bitmask:
bit i set means basis vector e_{i+1} is a factor of the blade.  The metric
carries signature (p, m-p), the first p basis directions having square -1:

    <e_i, e_i> = -1  for i <= p,    +1 otherwise.

The Clifford product follows the convention

    u.v + v.u = -2 <u, v>,

so a Euclidean unit vector squares to -1 and the volume element of a Euclidean
n-plane squares to (-1)^(n(n+1)/2) = -epsilon_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GeometryError


def epsilon_n(n: int) -> int:
    """Sign (-1)^(n(n+1)/2 + 1) attached to an oriented n-plane's volume element."""
    return (-1) ** (n * (n + 1) // 2 + 1)


@dataclass(frozen=True)
class Signature:
    """Metric signature (p, m-p) on R^m: the first p directions square to -1."""

    m: int
    p: int = 0

    def __post_init__(self):
        if not (0 <= self.p <= self.m):
            raise GeometryError(f"invalid signature ({self.p}, {self.m - self.p})")

    @property
    def is_euclidean(self) -> bool:
        return self.p == 0

    def metric_signs(self) -> np.ndarray:
        """Diagonal of the metric: -1 repeated p times, then +1."""
        g = np.ones(self.m)
        g[: self.p] = -1.0
        return g

    def dot(self, a: np.ndarray, b: np.ndarray) -> float:
        """Pseudo-Euclidean inner product of two coordinate vectors."""
        return float(np.dot(a * self.metric_signs(), b))


@lru_cache(maxsize=None)
def _tables(m: int, p: int):
    """Sign/index tables for products on the 2^m blade basis.

    geo[A, B]   sign of e_A . e_B (Clifford), result landing on index A^B
    wedge[A, B] sign of e_A ^ e_B, zero when the blades share a factor
    """
    size = 1 << m
    masks = np.arange(size, dtype=np.int64)
    A = masks[:, None]
    B = masks[None, :]

    # Parity of transpositions needed to merge e_A in front of e_B.
    swaps = np.zeros((size, size), dtype=np.int64)
    a = A >> 1
    while a.any():
        swaps += np.bitwise_count(a & B)
        a >>= 1
    reorder = np.where(swaps % 2 == 0, 1.0, -1.0)

    # Each shared factor contributes its Clifford square e_i^2 = -g_i.
    g = np.ones(m)
    g[:p] = -1.0
    sq = -g
    common_sign = np.ones((size, size))
    for i in range(m):
        bit = 1 << i
        both = ((A & bit) != 0) & ((B & bit) != 0)
        common_sign = np.where(both, common_sign * sq[i], common_sign)

    geo = reorder * common_sign
    wedge = np.where((A & B) == 0, reorder, 0.0)
    xor_flat = (A ^ B).ravel()

    grades = np.bitwise_count(masks).astype(np.int64)
    blade_metric = np.ones(size)
    for i in range(p):
        bit = 1 << i
        blade_metric = np.where((masks & bit) != 0, -blade_metric, blade_metric)

    return geo, wedge, xor_flat, grades, blade_metric


@dataclass
class Multivector:
    """Element of the Clifford algebra of (R^m, signature), dense coefficients."""

    coeffs: np.ndarray
    sig: Signature

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (1 << self.sig.m,):
            raise GeometryError(
                f"coefficient array has shape {self.coeffs.shape}, "
                f"expected ({1 << self.sig.m},)"
            )

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(sig: Signature) -> "Multivector":
        return Multivector(np.zeros(1 << sig.m), sig)

    @staticmethod
    def scalar(sig: Signature, value: float) -> "Multivector":
        c = np.zeros(1 << sig.m)
        c[0] = value
        return Multivector(c, sig)

    @staticmethod
    def from_vector(sig: Signature, v: np.ndarray) -> "Multivector":
        v = np.asarray(v, dtype=float)
        if v.shape != (sig.m,):
            raise GeometryError(f"vector has shape {v.shape}, expected ({sig.m},)")
        c = np.zeros(1 << sig.m)
        for i in range(sig.m):
            c[1 << i] = v[i]
        return Multivector(c, sig)

    @staticmethod
    def basis_blade(sig: Signature, indices) -> "Multivector":
        """Wedge of basis vectors e_{i_1} ^ ... ^ e_{i_r}, 1-based indices."""
        out = Multivector.scalar(sig, 1.0)
        for i in indices:
            if not 1 <= i <= sig.m:
                raise GeometryError(f"basis index {i} out of range 1..{sig.m}")
            e = np.zeros(sig.m)
            e[i - 1] = 1.0
            out = out.wedge(Multivector.from_vector(sig, e))
        return out

    # -- linear structure ---------------------------------------------------

    def _check(self, other: "Multivector"):
        if other.sig != self.sig:
            raise GeometryError("signature mismatch")

    def __add__(self, other):
        self._check(other)
        return Multivector(self.coeffs + other.coeffs, self.sig)

    def __sub__(self, other):
        self._check(other)
        return Multivector(self.coeffs - other.coeffs, self.sig)

    def __neg__(self):
        return Multivector(-self.coeffs, self.sig)

    def __rmul__(self, scalar):
        return Multivector(float(scalar) * self.coeffs, self.sig)

    def scale(self, scalar) -> "Multivector":
        return Multivector(float(scalar) * self.coeffs, self.sig)

    # -- products -----------------------------------------------------------

    def geometric(self, other: "Multivector") -> "Multivector":
        """Clifford product, with u.v + v.u = -2<u, v> on vectors."""
        self._check(other)
        geo, _, xor_flat, _, _ = _tables(self.sig.m, self.sig.p)
        prod = np.outer(self.coeffs, other.coeffs) * geo
        out = np.bincount(xor_flat, weights=prod.ravel(), minlength=self.coeffs.size)
        return Multivector(out, self.sig)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return self.geometric(other)
        return Multivector(self.coeffs * float(other), self.sig)

    def wedge(self, other: "Multivector") -> "Multivector":
        self._check(other)
        _, wtab, xor_flat, _, _ = _tables(self.sig.m, self.sig.p)
        prod = np.outer(self.coeffs, other.coeffs) * wtab
        out = np.bincount(xor_flat, weights=prod.ravel(), minlength=self.coeffs.size)
        return Multivector(out, self.sig)

    def __xor__(self, other):
        return self.wedge(other)

    def bracket(self, other: "Multivector") -> "Multivector":
        """Commutator bracket (a.b - b.a)/2."""
        return (self.geometric(other) - other.geometric(self)).scale(0.5)

    # -- grading and metric ---------------------------------------------------

    def grade(self, k: int) -> "Multivector":
        _, _, _, grades, _ = _tables(self.sig.m, self.sig.p)
        out = np.where(grades == k, self.coeffs, 0.0)
        return Multivector(out, self.sig)

    def grades(self, tol: float = 0.0):
        """Sorted list of grades with a coefficient exceeding tol in magnitude."""
        _, _, _, grades, _ = _tables(self.sig.m, self.sig.p)
        present = np.unique(grades[np.abs(self.coeffs) > tol])
        return [int(k) for k in present]

    def reverse(self) -> "Multivector":
        _, _, _, grades, _ = _tables(self.sig.m, self.sig.p)
        signs = np.where((grades * (grades - 1) // 2) % 2 == 0, 1.0, -1.0)
        return Multivector(signs * self.coeffs, self.sig)

    def inner(self, other: "Multivector") -> float:
        """Metric pairing with blades orthogonal: <e_A, e_A> = prod of factor signs."""
        self._check(other)
        _, _, _, _, blade_metric = _tables(self.sig.m, self.sig.p)
        return float(np.dot(self.coeffs * blade_metric, other.coeffs))

    def norm(self) -> float:
        """Euclidean norm of the coefficient expansion."""
        return float(np.linalg.norm(self.coeffs))

    def normalized(self) -> "Multivector":
        n = self.norm()
        if n < 1e-300:
            raise GeometryError("cannot normalize a zero multivector")
        return Multivector(self.coeffs / n, self.sig)

    def vector_part(self) -> np.ndarray:
        """Coefficients on the grade-1 blades, as a coordinate vector."""
        m = self.sig.m
        return np.array([self.coeffs[1 << i] for i in range(m)])

    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def allclose(self, other: "Multivector", tol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= tol))


def interior(pblade: Multivector, w: Multivector) -> Multivector:
    """Contraction of an (n+1)-vector w by a unit n-blade, yielding a vector.

    In an orthonormal basis adapted to the blade (pblade = e_1 ^ ... ^ e_n)
    the contraction sends e_1 ^ ... ^ e_n ^ e_j to e_j and kills every
    (n+1)-blade that does not contain all of e_1 .. e_n.  Computed here via
    the Clifford product: the grade-1 part of pblade . w times the sign that
    undoes the square of the blade's volume element.
    """
    if not pblade.sig.is_euclidean:
        raise GeometryError("interior contraction implemented for Euclidean metrics only")
    gr = pblade.grades()
    if len(gr) != 1:
        raise GeometryError("contraction requires a homogeneous blade")
    n = gr[0]
    res = pblade.geometric(w)
    return res.grade(1).scale((-1) ** (n * (n + 1) // 2))


def hodge(w: Multivector) -> Multivector:
    """Hodge dual in a Euclidean oriented R^m: e_A ^ hodge(e_A) = e_1...e_m."""
    if not w.sig.is_euclidean:
        raise GeometryError("hodge dual implemented for Euclidean metrics only")
    m = w.sig.m
    _, wtab, _, _, _ = _tables(m, 0)
    size = 1 << m
    full = size - 1
    out = np.zeros(size)
    nz = np.nonzero(w.coeffs)[0]
    for A in nz:
        comp = full ^ A
        out[comp] += wtab[A, comp] * w.coeffs[A]
    return Multivector(out, w.sig)


def frame_blade(sig: Signature, frame: np.ndarray) -> Multivector:
    """Wedge of the columns of an (m, n) matrix, in column order."""
    frame = np.asarray(frame, dtype=float)
    if frame.ndim != 2 or frame.shape[0] != sig.m:
        raise GeometryError(f"frame has shape {frame.shape}, expected ({sig.m}, n)")
    out = Multivector.scalar(sig, 1.0)
    for j in range(frame.shape[1]):
        out = out.wedge(Multivector.from_vector(sig, frame[:, j]))
    return out
