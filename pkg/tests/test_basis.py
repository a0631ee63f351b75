import math

import numpy as np
import pytest

from hybridisc import (
    Disc,
    DomainViolation,
    Expansion,
    InvalidInput,
    SchemeKind,
    basis_row,
    dipole_quadrature,
    evaluate,
    far_field_dipole,
    load_expansion,
    pair_map,
    save_expansion,
    two_disc_config,
)
from hybridisc.basis import basis_matrix, geometry_digest, n_basis


def z_expansion(discs, N, coeffs=None, U0=1.0 + 0j, constant=0j):
    discs = tuple(discs)
    if coeffs is None:
        coeffs = tuple(np.zeros(N, dtype=complex) for _ in discs)
    return Expansion(
        scheme=SchemeKind.Z, U0=U0, constant=constant, N=N,
        discs=discs, pairs=(), disc_coeffs=tuple(coeffs),
    )


def hybrid_expansion(d, s, N, rng=None, U0=1.0 + 0j):
    discs = (Disc(-d + 0j, s), Disc(d + 0j, s))
    pm = pair_map(*discs)
    if rng is None:
        dc = tuple(np.zeros(N, dtype=complex) for _ in discs)
        pc = ((np.zeros(N, dtype=complex), np.zeros(N, dtype=complex)),)
    else:
        def arr():
            return rng.normal(size=N) + 1j * rng.normal(size=N)
        dc = (arr(), arr())
        pc = ((arr(), arr()),)
    return Expansion(
        scheme=SchemeKind.HYBRID, U0=U0, constant=0j, N=N,
        discs=discs, pairs=(pm,), disc_coeffs=dc, pair_coeffs=pc,
    )


def test_basis_row_laurent_by_direct_substitution():
    e = z_expansion((Disc(1.0 + 0j, 0.5), Disc(-1.0 + 0j, 0.5)), N=1)
    row = basis_row(e, 3.0 + 0j)
    assert np.allclose(row, [1.0, 0.5 / 2.0, 0.5 / 4.0], rtol=0, atol=1e-15)


def test_basis_row_rejects_interior_points():
    e = z_expansion((Disc(0j, 1.0),), N=2)
    with pytest.raises(DomainViolation):
        basis_row(e, 0.5 + 0j)


def test_hybrid_pair_entries_have_unit_modulus_on_boundary():
    e = hybrid_expansion(1.0, 0.99, N=6)
    z = 1.0 + 0.99 * np.exp(0.7j)  # on |z - d| = s
    row = basis_row(e, complex(z))
    pos = row[1 + 2 * 6: 1 + 3 * 6]  # the zeta^k block
    assert np.max(np.abs(np.abs(pos) - 1.0)) < 1e-12


def test_basis_entries_bounded_towards_infinity():
    e = hybrid_expansion(1.0, 0.99, N=8)
    mags = []
    for R in (10.0, 100.0, 1000.0):
        row = basis_row(e, R * np.exp(0.4j))
        mags.append(np.abs(row))
    # every family is O(1) or decaying along |z| = 10, 100, 1000
    assert np.all(mags[2] <= mags[0] + 1e-9)
    assert np.all(np.isfinite(mags[2]))


def test_evaluate_zero_coefficients_is_far_field_plus_constant():
    e = z_expansion((Disc(0j, 0.5),), N=3, U0=2.0 - 1.0j, constant=0.25 + 0.5j)
    z = 1.7 + 2.2j
    assert abs(evaluate(e, z) - (e.U0 * z + e.constant)) < 1e-15


def test_single_cylinder_classical_flow():
    # w = U0 z + conj(U0) s^2 / z has Im w = 0 on |z| = s
    s, U0 = 0.8, np.exp(0.3j)
    coeffs = np.zeros(4, dtype=complex)
    coeffs[0] = np.conj(U0) * s
    e = z_expansion((Disc(0j, s),), N=4, coeffs=(coeffs,), U0=U0)
    th = 2 * math.pi * np.arange(128) / 128
    w = evaluate(e, s * np.exp(1j * th))
    assert np.max(np.abs(w.imag)) < 1e-14


def test_evaluate_is_linear_in_coefficients():
    rng = np.random.default_rng(5)
    e1 = hybrid_expansion(1.0, 0.9, N=5, rng=rng)
    e2 = hybrid_expansion(1.0, 0.9, N=5, rng=rng)
    esum = Expansion(
        scheme=SchemeKind.HYBRID, U0=e1.U0, constant=0j, N=5,
        discs=e1.discs, pairs=e1.pairs,
        disc_coeffs=tuple(a + b for a, b in zip(e1.disc_coeffs, e2.disc_coeffs)),
        pair_coeffs=tuple(
            (p1 + p2, n1 + n2)
            for (p1, n1), (p2, n2) in zip(e1.pair_coeffs, e2.pair_coeffs)
        ),
    )
    z = np.array([2.5 + 1j, -3.0 + 0.2j, 0.0 + 2.0j])
    lhs = evaluate(esum, z) - esum.U0 * z
    rhs = (evaluate(e1, z) - e1.U0 * z) + (evaluate(e2, z) - e2.U0 * z)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_expansion_validates_family_shapes():
    discs = (Disc(0j, 0.5),)
    with pytest.raises(InvalidInput):
        Expansion(scheme=SchemeKind.Z, U0=1.0, constant=0j, N=3,
                  discs=discs, pairs=(), disc_coeffs=(np.zeros(2, dtype=complex),))
    with pytest.raises(InvalidInput):
        Expansion(scheme=SchemeKind.ZETA, U0=1.0, constant=0j, N=3,
                  discs=discs, pairs=(), disc_coeffs=(np.zeros(3, dtype=complex),))


def test_far_field_dipole_single_cylinder():
    s, U0 = 0.8, np.exp(0.3j)
    coeffs = np.zeros(4, dtype=complex)
    coeffs[0] = np.conj(U0) * s
    e = z_expansion((Disc(0j, s),), N=4, coeffs=(coeffs,), U0=U0)
    assert abs(far_field_dipole(e) - np.conj(U0) * s**2) < 1e-15
    assert far_field_dipole(hybrid_expansion(1.0, 0.9, N=4)) == 0


def test_dipole_quadrature_single_cylinder_exact_residue():
    s, U0 = 0.8, np.exp(0.3j)
    coeffs = np.zeros(4, dtype=complex)
    coeffs[0] = np.conj(U0) * s
    e = z_expansion((Disc(0j, s),), N=4, coeffs=(coeffs,), U0=U0)
    assert abs(dipole_quadrature(e, R=10.0, n=256) - np.conj(U0) * s**2) < 1e-12


def test_dipole_quadrature_converged_in_n():
    rng = np.random.default_rng(9)
    e = hybrid_expansion(1.0, 0.9, N=6, rng=rng)
    d1 = dipole_quadrature(e, n=256)
    d2 = dipole_quadrature(e, n=512)
    assert abs(d1 - d2) < 1e-13


def test_dipole_quadrature_rejects_small_contour():
    e = hybrid_expansion(1.0, 0.9, N=3)
    with pytest.raises(DomainViolation):
        dipole_quadrature(e, R=2.0)


def test_dipole_closed_form_matches_quadrature_on_random_sets():
    # acceptance oracle for the analytic expansion of the pair variable
    rng = np.random.default_rng(1234)
    worst = 0.0
    for _ in range(50):
        e = hybrid_expansion(1.0, 0.9, N=8, rng=rng, U0=complex(rng.normal(), rng.normal()))
        worst = max(worst, abs(far_field_dipole(e) - dipole_quadrature(e)))
    assert worst < 1e-10


def test_rotated_pair_dipole_against_quadrature():
    # pair family on a rotated, offset geometry exercises the frame factor
    rng = np.random.default_rng(77)
    discs = (Disc(1 + 1j, 0.9), Disc(3 + 3j, 0.9))
    pm = pair_map(*discs)
    def arr():
        return rng.normal(size=6) + 1j * rng.normal(size=6)
    e = Expansion(
        scheme=SchemeKind.HYBRID, U0=0.7 - 0.2j, constant=0j, N=6,
        discs=discs, pairs=(pm,),
        disc_coeffs=(arr(), arr()), pair_coeffs=((arr(), arr()),),
    )
    assert abs(far_field_dipole(e) - dipole_quadrature(e, R=40.0, n=512)) < 1e-10


def test_serialization_round_trip(tmp_path):
    rng = np.random.default_rng(21)
    e = hybrid_expansion(1.0, 0.99, N=5, rng=rng, U0=np.exp(1j * math.pi / 4))
    path = tmp_path / "coeffs.txt"
    save_expansion(e, path)
    back = load_expansion(path, e.discs, e.pairs)
    assert back.scheme == e.scheme
    assert back.N == e.N
    assert abs(back.U0 - e.U0) < 1e-16
    for a, b in zip(back.disc_coeffs, e.disc_coeffs):
        assert np.max(np.abs(a - b)) < 1e-16
    for (p1, n1), (p2, n2) in zip(back.pair_coeffs, e.pair_coeffs):
        assert np.max(np.abs(p1 - p2)) < 1e-16
        assert np.max(np.abs(n1 - n2)) < 1e-16
    z = 2.0 + 1.5j
    assert abs(evaluate(back, z) - evaluate(e, z)) < 1e-14


def test_serialization_rejects_wrong_geometry(tmp_path):
    e = hybrid_expansion(1.0, 0.99, N=4)
    path = tmp_path / "coeffs.txt"
    save_expansion(e, path)
    other = hybrid_expansion(1.0, 0.9, N=4)
    with pytest.raises(InvalidInput):
        load_expansion(path, other.discs, other.pairs)
    assert geometry_digest(e.discs, e.pairs) != geometry_digest(other.discs, other.pairs)


def test_basis_matrix_column_count():
    e = hybrid_expansion(1.0, 0.9, N=7)
    B = basis_matrix(e.scheme, e.discs, e.pairs, e.N, np.array([3.0 + 0j]))
    assert B.shape == (1, n_basis(SchemeKind.HYBRID, 2, 1, 7))
    assert B.shape[1] == 1 + 2 * 7 + 2 * 7
