"""Algebra kernel tests against an independent blade-arithmetic oracle."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congruence_kit.algebra import (
    Multivector,
    Signature,
    epsilon_n,
    frame_blade,
    hodge,
    interior,
)
from congruence_kit.errors import GeometryError

TOL = 1e-12


# -- oracle: blade products by explicit transposition counting ---------------


def _oracle_blade_geo(a: tuple, b: tuple, squares: dict) -> tuple:
    """Multiply basis blades given as increasing index tuples.

    Returns (sign, blade).  Works by concatenating the factor sequences and
    bubble-sorting, flipping the sign per transposition and contracting equal
    neighbours with their Clifford square.
    """
    seq = list(a) + list(b)
    sign = 1.0
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(seq) - 1:
            if seq[i] == seq[i + 1]:
                sign *= squares[seq[i]]
                del seq[i : i + 2]
                changed = True
            elif seq[i] > seq[i + 1]:
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                sign = -sign
                changed = True
            else:
                i += 1
    return sign, tuple(seq)


def _oracle_geo(ca: dict, cb: dict, squares: dict) -> dict:
    out: dict = {}
    for ba, va in ca.items():
        for bb, vb in cb.items():
            s, blade = _oracle_blade_geo(ba, bb, squares)
            out[blade] = out.get(blade, 0.0) + s * va * vb
    return out


def _oracle_wedge(ca: dict, cb: dict) -> dict:
    out: dict = {}
    for ba, va in ca.items():
        for bb, vb in cb.items():
            if set(ba) & set(bb):
                continue
            s, blade = _oracle_blade_geo(ba, bb, {})
            out[blade] = out.get(blade, 0.0) + s * va * vb
    return out


def _to_dict(mv: Multivector) -> dict:
    out = {}
    for mask in range(mv.coeffs.size):
        if mv.coeffs[mask] != 0.0:
            blade = tuple(i + 1 for i in range(mv.sig.m) if mask & (1 << i))
            out[blade] = mv.coeffs[mask]
    return out


def _dicts_close(a: dict, b: dict, tol=TOL) -> bool:
    keys = set(a) | set(b)
    return all(abs(a.get(k, 0.0) - b.get(k, 0.0)) <= tol for k in keys)


def _random_mv(rng, sig: Signature) -> Multivector:
    return Multivector(rng.standard_normal(1 << sig.m), sig)


# -- frozen hand-checked cases ------------------------------------------------


def test_vector_squares_to_minus_norm():
    sig = Signature(3)
    e1 = Multivector.basis_blade(sig, [1])
    assert (e1 * e1).allclose(Multivector.scalar(sig, -1.0))


def test_pseudo_vector_square():
    # first direction carries metric sign -1, so its Clifford square is +1
    sig = Signature(4, p=1)
    e1 = Multivector.basis_blade(sig, [1])
    e2 = Multivector.basis_blade(sig, [2])
    assert (e1 * e1).allclose(Multivector.scalar(sig, 1.0))
    assert (e2 * e2).allclose(Multivector.scalar(sig, -1.0))


def test_volume_element_squares():
    # (e_1 ... e_n)^2 = -epsilon_n in the Euclidean algebra
    for n in range(1, 7):
        sig = Signature(n)
        vol = Multivector.basis_blade(sig, range(1, n + 1))
        sq = vol * vol
        assert sq.allclose(Multivector.scalar(sig, -float(epsilon_n(n))))


def test_epsilon_table():
    assert [epsilon_n(n) for n in range(1, 7)] == [1, 1, -1, -1, 1, 1]


def test_bracket_rotates_plane_factors():
    # [. , e1^e2] sends e1 to -e2 and e2 to e1
    sig = Signature(4)
    e1 = Multivector.basis_blade(sig, [1])
    e2 = Multivector.basis_blade(sig, [2])
    p = Multivector.basis_blade(sig, [1, 2])
    assert e1.bracket(p).allclose(-e2)
    assert e2.bracket(p).allclose(e1)


def test_interior_prefix_rule():
    sig = Signature(4)
    p = Multivector.basis_blade(sig, [1, 2])
    e3 = Multivector.basis_blade(sig, [3])
    w_full = Multivector.basis_blade(sig, [1, 2, 3])
    w_miss = Multivector.basis_blade(sig, [1, 3, 4])
    assert interior(p, w_full).allclose(e3)
    assert interior(p, w_miss).allclose(Multivector.zero(sig))
    # cyclic reordering of the factors keeps the sign
    perm = Multivector.basis_blade(sig, [3]).wedge(p)
    assert interior(p, perm).allclose(e3)


def test_hodge_frozen_table_r4():
    sig = Signature(4)

    def blade(ix):
        return Multivector.basis_blade(sig, ix)

    assert hodge(blade([1, 2])).allclose(blade([3, 4]))
    assert hodge(blade([1, 3])).allclose(-blade([2, 4]))
    assert hodge(blade([1, 4])).allclose(blade([2, 3]))
    assert hodge(blade([2, 3])).allclose(blade([1, 4]))
    assert hodge(blade([2, 4])).allclose(-blade([1, 3]))
    assert hodge(blade([3, 4])).allclose(blade([1, 2]))


def test_hodge_double_is_identity_on_two_forms_r4():
    rng = np.random.default_rng(7)
    sig = Signature(4)
    w = _random_mv(rng, sig).grade(2)
    assert hodge(hodge(w)).allclose(w, tol=1e-13)


def test_hodge_rejects_pseudo_metric():
    sig = Signature(4, p=1)
    w = Multivector.basis_blade(sig, [1, 2])
    with pytest.raises(GeometryError):
        hodge(w)


# -- oracle comparisons --------------------------------------------------------


def test_geometric_product_matches_oracle():
    rng = np.random.default_rng(0)
    for m in range(1, 6):
        for p in (0, 1, m):
            sig = Signature(m, p=p)
            squares = {i + 1: (1.0 if i < p else -1.0) for i in range(m)}
            for _ in range(20):
                a, b = _random_mv(rng, sig), _random_mv(rng, sig)
                got = _to_dict(a * b)
                want = _oracle_geo(_to_dict(a), _to_dict(b), squares)
                assert _dicts_close(got, want, tol=1e-11)


def test_wedge_matches_oracle():
    rng = np.random.default_rng(1)
    for m in range(1, 6):
        sig = Signature(m)
        for _ in range(20):
            a, b = _random_mv(rng, sig), _random_mv(rng, sig)
            got = _to_dict(a ^ b)
            want = _oracle_wedge(_to_dict(a), _to_dict(b))
            assert _dicts_close(got, want, tol=1e-11)


# -- identity battery -----------------------------------------------------------


def test_anticommutation_identity_all_signatures():
    rng = np.random.default_rng(2)
    for m in range(1, 7):
        for p in range(0, m + 1):
            sig = Signature(m, p=p)
            for _ in range(10):
                u, v = rng.standard_normal(m), rng.standard_normal(m)
                mu = Multivector.from_vector(sig, u)
                mv = Multivector.from_vector(sig, v)
                anti = mu * mv + mv * mu
                want = Multivector.scalar(sig, -2.0 * sig.dot(u, v))
                assert anti.allclose(want, tol=1e-12)


def test_associativity_random():
    rng = np.random.default_rng(3)
    for m in (2, 4, 6):
        sig = Signature(m, p=m // 2)
        for _ in range(10):
            a, b, c = (_random_mv(rng, sig) for _ in range(3))
            left = (a * b) * c
            right = a * (b * c)
            assert np.allclose(left.coeffs, right.coeffs, atol=1e-9 * max(1, a.norm() * b.norm() * c.norm()))


def test_wedge_on_vectors_antisymmetric_and_nilpotent():
    rng = np.random.default_rng(4)
    sig = Signature(5)
    u = Multivector.from_vector(sig, rng.standard_normal(5))
    v = Multivector.from_vector(sig, rng.standard_normal(5))
    assert (u ^ v).allclose(-(v ^ u), tol=1e-12)
    assert (u ^ u).allclose(Multivector.zero(sig), tol=1e-12)


def test_reverse_antiautomorphism():
    rng = np.random.default_rng(5)
    sig = Signature(4, p=1)
    a, b = _random_mv(rng, sig), _random_mv(rng, sig)
    assert (a * b).reverse().allclose(b.reverse() * a.reverse(), tol=1e-10)


def test_bracket_of_two_vectors_is_wedge():
    rng = np.random.default_rng(6)
    for p in (0, 1):
        sig = Signature(4, p=p)
        u = Multivector.from_vector(sig, rng.standard_normal(4))
        v = Multivector.from_vector(sig, rng.standard_normal(4))
        assert u.bracket(v).allclose(u ^ v, tol=1e-12)


def test_bracket_preserves_bivectors():
    rng = np.random.default_rng(8)
    sig = Signature(5)
    a = _random_mv(rng, sig).grade(2)
    b = _random_mv(rng, sig).grade(2)
    br = a.bracket(b)
    off = br - br.grade(2)
    assert off.norm() <= 1e-10


def test_interior_adjoint_to_wedge():
    # <i_p(w), x> = <w, p ^ x> over random Euclidean data
    rng = np.random.default_rng(9)
    for m, n in ((3, 1), (4, 2), (5, 2), (6, 3)):
        sig = Signature(m)
        for _ in range(10):
            q, _ = np.linalg.qr(rng.standard_normal((m, n)))
            p = frame_blade(sig, q)
            w = _random_mv(rng, sig).grade(n + 1)
            x = rng.standard_normal(m)
            mx = Multivector.from_vector(sig, x)
            lhs = np.dot(interior(p, w).vector_part(), x)
            rhs = w.inner(p ^ mx)
            assert abs(lhs - rhs) <= 1e-10


def test_interior_rejects_pseudo_metric():
    sig = Signature(3, p=1)
    p = Multivector.basis_blade(sig, [2, 3])
    w = Multivector.basis_blade(sig, [1, 2, 3])
    with pytest.raises(GeometryError):
        interior(p, w)


def test_frame_blade_unit_norm_for_orthonormal_frames():
    rng = np.random.default_rng(10)
    for m, n in ((4, 2), (5, 3), (6, 2)):
        sig = Signature(m)
        q, _ = np.linalg.qr(rng.standard_normal((m, n)))
        b = frame_blade(sig, q)
        assert abs(b.norm() - 1.0) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=0, max_value=10_000),
)
def test_grade_projections_partition(m, seed):
    rng = np.random.default_rng(seed)
    sig = Signature(m)
    a = _random_mv(rng, sig)
    total = Multivector.zero(sig)
    for k in range(m + 1):
        total = total + a.grade(k)
    assert total.allclose(a, tol=0.0)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=2, max_value=5),
    st.integers(min_value=0, max_value=10_000),
)
def test_products_bilinear(m, seed):
    rng = np.random.default_rng(seed)
    sig = Signature(m, p=1)
    a, b, c = (_random_mv(rng, sig) for _ in range(3))
    t = float(rng.standard_normal())
    lhs = a * (b + c.scale(t))
    rhs = a * b + (a * c).scale(t)
    assert lhs.allclose(rhs, tol=1e-10)
    lhs = a ^ (b + c.scale(t))
    rhs = (a ^ b) + (a ^ c).scale(t)
    assert lhs.allclose(rhs, tol=1e-10)
