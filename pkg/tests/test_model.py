import math

import numpy as np
import pytest
from oracles import jost_tail, quad_pieces, riemann_functionals
from oracles import weyl_m as oracle_m
from specs import make, random_specs, single_atom, step_w

from indstring.model import (AtomicMeasure, MobiusNormalization, PiecewiseConstantFn, SpecError,
                             StringSpec, Tail, coefficient_functionals, denormalize, normalize,
                             validate)
from indstring.scattering import weyl_m

# int_0^1 |1 - 1/(1+2x)|^2 (1+2x) dx = log(3)/2
ALPHA_RHO_ONE = 0.5493061443340549


def test_piecewise_right_open():
    fn = PiecewiseConstantFn((0.0, 1.0, 2.0), (3.0, 4.0, 0.0))
    assert fn(np.array([0.0, 0.999, 1.0, 1.5, 2.0])).tolist() == [3, 3, 4, 4, 0]
    assert fn(-0.1) == 0.0
    assert fn.left_limit(1.0) == 3.0
    assert fn.left_limit(0.0) == 0.0


def test_validate_empty_perturbation():
    spec = make(1.0, [(0, 0.0)], [(0, 1.0)])
    assert validate(spec) is spec
    assert validate(StringSpec.pure(Tail.ALPHA)).is_pure


@pytest.mark.parametrize("spec,msg", [
    (make(1.0, [(0, 0.0)], [(0, 1.0)], [(1.0, 1.0)]), "atom at or beyond R"),
    (make(1.0, [(0, 0.5)], [(0, 1.0)]), "w must vanish near R"),
    (make(1.0, [(0, 0.0)], [(0, 1.0), (0.5, 0.0)]), "rho must be positive near R"),
    (make(1.0, [(0, 0.0)], [(0, 1.0)], [(0.5, -1.0)]), "positive"),
    (make(1.0, [(0, 1.0), (0.5, 0.3), (0.2, 0.0)], [(0, 1.0)]), "strictly increasing"),
    (make(1.0, [(0.1, 0.0)], [(0, 1.0)]), "first breakpoint"),
    (make(1.0, [(0, 0.0)], [(0, -1.0), (0.5, 1.0)]), "non-negative"),
    (make(1.0, [(0, 0.0)], [(0, 1.0)], [(0.6, 1.0), (0.3, 1.0)]), "strictly increasing"),
])
def test_validate_reports_violation(spec, msg):
    with pytest.raises(SpecError, match=msg):
        validate(spec)


def test_validate_idempotent():
    for spec in random_specs(3, 10):
        assert validate(validate(spec)) == spec


def test_functionals_single_atom():
    fn = coefficient_functionals(single_atom(1.0, 2.0))
    assert (fn.w_sq, fn.rho_dev_sq, fn.singular_mass, fn.w_int) == (0, 0, 2, 0)
    assert fn.w_sq_weighted == 0
    assert fn.singular_weighted == 6.0
    assert fn.lebesgue_sum == 2.0


def test_functionals_constant_step():
    fn = coefficient_functionals(step_w(h=1.7, ell=0.6, R=2.0))
    assert fn.w_sq == pytest.approx(1.7 ** 2 * 0.6, rel=1e-15)
    assert fn.w_int == pytest.approx(1.7 * 0.6, rel=1e-15)


def test_functionals_alpha_rho_one_against_quadrature():
    spec = make(1.0, [(0, 0.0)], [(0, 1.0)], tail=Tail.ALPHA)
    got = coefficient_functionals(spec).rho_alpha_dev_sq_weighted
    ref = quad_pieces(lambda x: (1 - 1 / (1 + 2 * x)) ** 2 * (1 + 2 * x), [0.0, 1.0])
    assert ref == pytest.approx(ALPHA_RHO_ONE, rel=1e-13)
    assert got == pytest.approx(ALPHA_RHO_ONE, rel=1e-13)


@pytest.mark.parametrize("tail", [Tail.LEBESGUE, Tail.ALPHA])
def test_functionals_match_riemann_sums(tail):
    for spec in random_specs(5, 6, tail):
        got = coefficient_functionals(spec)
        ref = riemann_functionals(spec, n=400_000)
        for key, val in ref.items():
            # a midpoint sum of a step function errs by O(h) per breakpoint
            assert getattr(got, key) == pytest.approx(val, rel=1e-4, abs=1e-4), key


def test_functionals_match_quadrature():
    for spec in random_specs(6, 4, Tail.ALPHA):
        edges = sorted(set(spec.w.breakpoints) | set(spec.rho.breakpoints) | {spec.R})
        got = coefficient_functionals(spec)
        w, rho = spec.w, spec.rho
        for key, integrand in [
            ("beta", lambda x: rho(x) - 1 / (1 + 2 * x)),
            ("w_sq_weighted", lambda x: w(x) ** 2 * (1 + 2 * x)),
            ("rho_alpha_dev_sq_weighted", lambda x: (rho(x) - 1 / (1 + 2 * x)) ** 2 * (1 + 2 * x)),
        ]:
            assert getattr(got, key) == pytest.approx(quad_pieces(integrand, edges),
                                                      rel=1e-10, abs=1e-12), key


def test_functionals_nonnegative_and_finite():
    for spec in random_specs(7, 20) + random_specs(8, 20, Tail.ALPHA):
        fn = coefficient_functionals(spec)
        assert all(math.isfinite(v) for v in fn.as_tuple())
        assert min(fn.w_sq, fn.rho_dev_sq, fn.w_sq_weighted, fn.rho_alpha_dev_sq_weighted) >= 0


def test_normalize_identity():
    spec = random_specs(9, 1)[0]
    out, norm = normalize(spec, 0.0, 1.0, 1.0)
    assert out == spec
    assert norm == MobiusNormalization(0.0, 1.0, 1.0)


def test_normalize_atom_scaling():
    spec = make(2.0, [(0, 0.0)], [(0, 1.0)], [(0.5, 1.5)], Tail.ALPHA)
    out, _ = normalize(spec, 0.0, 1.0, 2.0)
    assert out.atoms == AtomicMeasure((1.0,), (3.0,))
    assert out.R == 4.0


def test_normalize_lebesgue_forces_alpha_one():
    spec = make(1.0, [(0, 0.0)], [(0, 1.0)])
    _, norm = normalize(spec, 0.0, 2.0, 5.0)
    assert norm.alpha == 1.0


def test_normalize_rejects_bad_parameters():
    spec = make(1.0, [(0, 0.0)], [(0, 1.0)])
    with pytest.raises(SpecError):
        normalize(spec, 0.0, 0.0, 1.0)
    with pytest.raises(SpecError):
        normalize(spec, 0.0, 1.0, -1.0)


def _general(c, eta, alpha, tail):
    """Un-normalized string whose data approach ``w = c`` and the scaled tail near R."""
    R = 2.0
    rho_end = eta if tail is Tail.LEBESGUE else eta / (1 + 2 * alpha * 1.6)
    return make(R, [(0, c + 0.7), (0.5, c - 0.4), (1.2, c)],
                [(0, 0.8 * eta), (0.9, 1.3 * eta), (1.6, rho_end)], [(0.3, 0.4)], tail)


@pytest.mark.parametrize("tail,alpha", [(Tail.LEBESGUE, 1.0), (Tail.ALPHA, 0.5), (Tail.ALPHA, 2.0)])
def test_mobius_recovery_against_direct_integration(tail, alpha):
    c, eta = 0.3, 1.7
    general = _general(c, eta, alpha, tail)
    spec, norm = normalize(general, c, eta, alpha)
    for z in (0.4 + 1.1j, -1.3 + 0.5j, 2.0 + 3.0j):
        direct = oracle_m(general, z, c=c, eta=eta, alpha=alpha)
        got = norm.recover_m(lambda zz: weyl_m(spec, zz), z)
        assert abs(got - direct) < 1e-9 * max(1.0, abs(direct))


def test_mobius_tail_oracle_pure():
    # the general oracle reduces to e^{izR}, (iz) e^{izR} for the normalized Lebesgue tail
    f, f1 = jost_tail(0.3 + 1j, Tail.LEBESGUE, 2.0)
    assert f1 / f == pytest.approx(1j * (0.3 + 1j))


def test_normalize_round_trip():
    for spec in random_specs(10, 5) + random_specs(11, 5, Tail.ALPHA):
        c, eta = 0.4, 1.3
        alpha = 0.7 if spec.tail is Tail.ALPHA else 1.0
        general = denormalize(spec, MobiusNormalization(c, eta, alpha))
        back, _ = normalize(general, c, eta, alpha)
        a = coefficient_functionals(spec).as_tuple()
        b = coefficient_functionals(back).as_tuple()
        np.testing.assert_allclose(b, a, rtol=1e-12, atol=1e-12)
