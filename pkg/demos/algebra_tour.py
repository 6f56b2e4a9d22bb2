"""Tour of the Clifford kernel: products, brackets, duality.

Run as a script; prints each identity next to its measured defect.
"""

import numpy as np

from congruence_kit.algebra import Multivector, Signature, epsilon_n, frame_blade, hodge, interior

rng = np.random.default_rng(0)

print("== anticommutation: u v + v u = -2 <u,v> ==")
for m, p in ((3, 0), (4, 0), (5, 1), (4, 1)):
    sig = Signature(m, p=p)
    u, v = rng.standard_normal(m), rng.standard_normal(m)
    mu, mv = Multivector.from_vector(sig, u), Multivector.from_vector(sig, v)
    lhs = mu * mv + mv * mu
    rhs = Multivector.scalar(sig, -2.0 * sig.dot(u, v))
    print(f"  signature ({m - p},{p}): defect {np.max(np.abs(lhs.coeffs - rhs.coeffs)):.2e}")

print("== volume element squares: (e_1...e_n)^2 = -eps_n ==")
for n in range(1, 7):
    sig = Signature(n)
    vol = Multivector.basis_blade(sig, range(1, n + 1))
    sq = (vol * vol).scalar_part()
    print(f"  n={n}: square {sq:+.1f}, table sign {-epsilon_n(n):+d}")

print("== bracket rotates a plane's factors ==")
sig = Signature(4)
e1 = Multivector.basis_blade(sig, [1])
e2 = Multivector.basis_blade(sig, [2])
plane = Multivector.basis_blade(sig, [1, 2])
print("  [e1, e1^e2] = -e2:", e1.bracket(plane).allclose(-e2))
print("  [e2, e1^e2] = +e1:", e2.bracket(plane).allclose(e1))

print("== interior product strips a leading plane factor ==")
e3 = Multivector.basis_blade(sig, [3])
full = Multivector.basis_blade(sig, [1, 2, 3])
missing = Multivector.basis_blade(sig, [1, 3, 4])
print("  i_{e1^e2}(e1^e2^e3) = e3:", interior(plane, full).allclose(e3))
print("  i_{e1^e2}(e1^e3^e4) = 0: ", interior(plane, missing).norm() == 0.0)

print("== hodge duality on 2-forms in R^4 squares to the identity ==")
b = Multivector.basis_blade(sig, [1, 2]) + Multivector.basis_blade(sig, [2, 3]).scale(0.5)
print("  ** b == b:", hodge(hodge(b)).allclose(b))

print("== blade of a random orthonormal frame is unit ==")
q, _ = np.linalg.qr(rng.standard_normal((5, 3)))
blade = frame_blade(Signature(5), q)
print(f"  |e_F| = {blade.norm():.12f}")
