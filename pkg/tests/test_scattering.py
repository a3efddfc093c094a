import numpy as np
import pytest
from oracles import jost, lebesgue_ab, single_atom_ab
from specs import alpha_with_gap, make, random_specs, single_atom

from indstring.model import StringSpec, Tail
from indstring.scattering import (LOW_CONFIDENCE_RADIUS, PoleError, branch_k, jost_at_zero,
                                  log_abs_a, scattering_ab, spectral_density, weyl_m, zhukovsky,
                                  zhukovsky_inverse)
from indstring.spectral import gap_eigenvalues

LEB = StringSpec.pure(Tail.LEBESGUE)
ALP = StringSpec.pure(Tail.ALPHA)
UPPER = np.array([0.3 + 0.1j, -1.7 + 2j, 4 + 0.5j, 1j, -0.2 + 10j])

# 1 / (pi |1 - i + i e^{2i}|^2): single atom m = 2 at x0 = 1, lambda = 1
RHO_ATOM_AT_ONE = 0.15807224154397101


def test_branch_k_values():
    assert branch_k(0) == 1j
    assert branch_k(-2.0) == pytest.approx(-np.sqrt(3))
    assert branch_k(2.0) == pytest.approx(np.sqrt(3))
    assert branch_k(1j) == pytest.approx(1j * np.sqrt(2))


def test_branch_k_upper_imaginary_and_symmetry():
    rng = np.random.default_rng(0)
    z = rng.normal(0, 3, 200) + 1j * rng.normal(0, 3, 200)
    z = np.concatenate([z, rng.uniform(-0.999, 0.999, 50)])
    k = branch_k(z)
    assert np.all(k.imag > 0)
    np.testing.assert_allclose(branch_k(np.conj(z)), -np.conj(k), atol=1e-15)
    np.testing.assert_allclose(k * k, z * z - 1, atol=1e-12)


def test_branch_k_real_limit_from_above():
    for lam in (-3.0, -1.5, 1.2, 5.0):
        assert branch_k(lam) == pytest.approx(branch_k(lam + 1e-12j), abs=1e-9)


def test_zhukovsky_pair():
    assert zhukovsky(0) == 1j
    assert zhukovsky_inverse(1j) == 0
    assert abs(zhukovsky(0.5)) == pytest.approx(1.0, abs=1e-15)
    t = 2j
    assert branch_k(zhukovsky_inverse(t)) == pytest.approx((t - 1 / t) / 2)
    z = np.array([0.3 + 0.4j, -2 - 1j, 0.9])
    assert np.all(zhukovsky(z).imag > 0)
    np.testing.assert_allclose(zhukovsky_inverse(zhukovsky(z)), z, atol=1e-14)


def test_jost_pure_lebesgue():
    f0, f0p = jost_at_zero(LEB, UPPER)
    np.testing.assert_allclose(f0, 1)
    np.testing.assert_allclose(f0p, 1j * UPPER)


def test_weyl_pure_models():
    np.testing.assert_allclose(weyl_m(LEB, UPPER), 1j, atol=1e-15)
    ref = (1j * np.sqrt(UPPER ** 2 - 1 + 0j) * np.where(
        np.imag(np.sqrt(UPPER ** 2 - 1 + 0j)) > 0, 1, -1) + 1) / UPPER
    np.testing.assert_allclose(weyl_m(ALP, UPPER), ref, rtol=1e-13)


def test_alpha_excludes_branch_points():
    for z in (1.0, -1.0):
        with pytest.raises(ValueError):
            scattering_ab(ALP, z)
        with pytest.raises(ValueError):
            jost_at_zero(ALP, z)


def test_low_confidence_flag():
    sv = scattering_ab(alpha_with_gap(), np.array([1 + 1e-7, 1.5, -1 - 5e-7]))
    assert sv.low_confidence.tolist() == [True, False, True]
    assert LOW_CONFIDENCE_RADIUS == 1e-6
    assert not scattering_ab(single_atom(), 1.0).low_confidence


def test_single_atom_closed_form():
    spec = single_atom(1.0, 2.0)
    z = np.concatenate([UPPER, np.linspace(-5, 5, 41)])
    sv = scattering_ab(spec, z)
    a, b = single_atom_ab(z, 1.0, 2.0)
    np.testing.assert_allclose(sv.a, a, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(sv.b, b, rtol=1e-12, atol=1e-12)
    assert scattering_ab(spec, 1.0).a == pytest.approx(1 - 1j, abs=1e-14)


def test_single_atom_density():
    assert spectral_density(single_atom(1.0, 2.0), 1.0).density == pytest.approx(
        RHO_ATOM_AT_ONE, rel=1e-13)


def test_empty_perturbation():
    for spec in (LEB, ALP, make(2.0, [(0, 0.0)], [(0, 1.0)])):
        z = np.array([0.0, 3.0, 0.5 + 0.5j]) if spec.tail is Tail.LEBESGUE else UPPER
        sv = scattering_ab(spec, z)
        np.testing.assert_allclose(sv.a, 1, atol=1e-14)
        np.testing.assert_allclose(sv.b, 0, atol=1e-14)


def test_a_at_zero_is_one():
    for spec in random_specs(30, 5) + random_specs(31, 5, Tail.ALPHA):
        assert scattering_ab(spec, 0.0).a == pytest.approx(1, abs=1e-14)


@pytest.mark.parametrize("tail", [Tail.LEBESGUE, Tail.ALPHA])
def test_jost_matches_integrator(tail):
    for spec in random_specs(32, 4, tail):
        for z in (0.7 + 0.3j, -1.5 + 1j, 0.2 - 0.6j if tail is Tail.ALPHA else 2.5 + 0.01j):
            got = np.array(jost_at_zero(spec, z))
            ref = np.array(jost(spec, z))
            assert np.max(np.abs(got - ref)) < 1e-9 * np.max(np.abs(ref))


def test_lebesgue_ab_matches_integrator():
    for spec in random_specs(33, 4):
        for z in (0.7 + 0.3j, -2.0 + 0.2j):
            sv = scattering_ab(spec, z)
            a, b = lebesgue_ab(spec, z)
            assert abs(sv.a - a) < 1e-9 * abs(a) and abs(sv.b - b) < 1e-9 * abs(a)


@pytest.mark.parametrize("tail", [Tail.LEBESGUE, Tail.ALPHA])
def test_unitarity(tail):
    lam = np.linspace(-8, 8, 400)
    if tail is Tail.ALPHA:
        lam = lam[np.abs(lam) > 1.001]
    for spec in random_specs(34, 6, tail):
        sv = scattering_ab(spec, lam)
        assert np.max(np.abs(np.abs(sv.a) ** 2 - np.abs(sv.b) ** 2 - 1)) < 1e-10


def test_symmetry_alpha_conjugate():
    for spec in random_specs(35, 4, Tail.ALPHA):
        z = np.concatenate([UPPER, [0.4, -0.3]])
        s1, s2 = scattering_ab(spec, z), scattering_ab(spec, np.conj(z))
        np.testing.assert_allclose(s2.a, np.conj(s1.a), rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(s2.b, np.conj(s1.b), rtol=1e-12, atol=1e-14)


def test_symmetry_lebesgue_reflection_without_w():
    # with w = 0 the equation depends on z^2 only, so a(-z*) = a(z)*
    for spec in random_specs(36, 4):
        spec = make(spec.R, [(0, 0.0)], list(zip(spec.rho.breakpoints, spec.rho.values)),
                    list(zip(spec.atoms.positions, spec.atoms.masses)))
        s1, s2 = scattering_ab(spec, UPPER), scattering_ab(spec, -np.conj(UPPER))
        np.testing.assert_allclose(s2.a, np.conj(s1.a), rtol=1e-12)
        np.testing.assert_allclose(s2.b, np.conj(s1.b), rtol=1e-12, atol=1e-14)


def test_lebesgue_no_conjugation_symmetry_with_w():
    # a nonzero w breaks z -> -z*: a(i) is not real
    spec = make(1.0, [(0, 0.5), (0.3, -1.0), (0.6, 0.0)], [(0, 1.0)])
    assert abs(scattering_ab(spec, 1j).a.imag) > 1e-2


def test_mobius_consistency():
    for spec in random_specs(37, 5):
        sv = scattering_ab(spec, UPPER)
        np.testing.assert_allclose(weyl_m(spec, UPPER), 1j * (sv.a - sv.b) / (sv.a + sv.b),
                                   rtol=1e-10)
    for spec in random_specs(38, 5, Tail.ALPHA):
        sv = scattering_ab(spec, UPPER)
        ref = 1 / UPPER + 1j * sv.k / UPPER * (sv.a - sv.b) / (sv.a + sv.b)
        np.testing.assert_allclose(weyl_m(spec, UPPER), ref, rtol=1e-10)


def test_weyl_herglotz_and_lower_half_plane():
    for spec in random_specs(39, 5) + random_specs(40, 5, Tail.ALPHA):
        m = weyl_m(spec, UPPER)
        assert np.all(m.imag > 0)
        np.testing.assert_allclose(weyl_m(spec, np.conj(UPPER)), np.conj(m), rtol=1e-12)


def test_weyl_pole_at_eigenvalue():
    spec = alpha_with_gap()
    en, ep = gap_eigenvalues(spec)
    for lam in en + ep:
        with pytest.raises(PoleError):
            weyl_m(spec, lam)
    with pytest.raises(ValueError):
        weyl_m(spec, 0.0)


def test_a_no_zeros_on_grids():
    for spec in random_specs(41, 5):
        lam = np.linspace(-6, 6, 301)
        assert np.all(np.abs(scattering_ab(spec, lam).a) >= 1 - 1e-12)
        zz = (np.linspace(-4, 4, 21)[:, None] + 1j * np.linspace(0.05, 4, 15)[None, :]).ravel()
        assert np.all(np.abs(scattering_ab(spec, zz).a) > 0)


def test_density_models():
    lam = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(spectral_density(LEB, lam).density, 1 / np.pi, rtol=1e-15)
    assert spectral_density(ALP, 2.0).density == pytest.approx(np.sqrt(3) / (2 * np.pi))
    assert spectral_density(ALP, -2.0).density == pytest.approx(np.sqrt(3) / (2 * np.pi))
    with pytest.raises(ValueError):
        spectral_density(ALP, 0.5)


def test_density_positive():
    for spec in random_specs(42, 5):
        assert np.all(spectral_density(spec, np.linspace(-6, 6, 121)).density > 0)
    grid = np.concatenate([np.linspace(-6, -1.01, 60), np.linspace(1.01, 6, 60)])
    for spec in random_specs(43, 5, Tail.ALPHA):
        assert np.all(spectral_density(spec, grid).density > 0)


def test_density_is_boundary_value_of_m():
    # Im m(lambda + i0) / pi for the Lebesgue class
    for spec in random_specs(44, 3):
        lam = np.array([-2.3, 0.4, 1.7])
        got = spectral_density(spec, lam).density
        assert np.allclose(weyl_m(spec, lam + 1e-9j).imag / np.pi, got, rtol=1e-6)


def test_log_abs_a_large_imaginary():
    spec = make(1.0, [(0, 0.0)], [(0, 2.0)])
    y = np.array([1e2, 1e3, 1e4])
    val = log_abs_a(spec, 1j * y)
    assert np.all(np.isfinite(val))
    np.testing.assert_allclose(val / y, 1.0, atol=1e-2)
    assert log_abs_a(spec, 2j) == pytest.approx(np.log(abs(scattering_ab(spec, 2j).a)))
