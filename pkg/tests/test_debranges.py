import math
import random

import mpmath
import pytest

from morsespec.debranges import (
    a_function,
    ab_zero_interlacing,
    b_function,
    comparison_table,
    debranges_m,
    debranges_m_forms,
    exp_scaled,
    hermite_biehler_check,
    structure_e0,
    structure_e0_sharp,
    structure_sample,
)
from morsespec.errors import DomainError, HBViolation, PoleError
from morsespec.scaled import DEFAULT_PRECISION
from morsespec.spectrum import MorseProblem, dirichlet_zero_scan
from morsespec.special import whittaker_w

# -B/A at u = 0, z = 2 + 0.5i from mpmath.whitw at 40 digits
FROZEN_DEBRANGES_M = -0.00968764157135841558 - 0.408965834108218506j


def test_exp_scaled_beyond_double_range():
    v = exp_scaled(5000.0)
    assert v.log10_abs() == pytest.approx(5000 / math.log(10), rel=1e-14)
    assert float(exp_scaled(1.5)) == pytest.approx(math.exp(1.5), rel=1e-14)


def test_e0_at_zero_is_real():
    for u in (0.0, 1.0):
        e = structure_e0(u, 0.0)
        assert complex(e).imag == 0.0
        x = math.exp(u)
        expected = complex(whittaker_w(0.5, 0.0, x)) * math.exp((x - u) / 2)
        assert complex(e) == pytest.approx(expected, rel=1e-13)


def test_a_and_b_real_on_real_axis():
    rng = random.Random(1)
    for _ in range(40):
        t = rng.uniform(-20, 20)
        s = structure_sample(0.5, t)
        scale = abs(s.E_value)
        assert abs(s.A_value.imag) <= 1e-10 * scale
        assert abs(s.B_value.imag) <= 1e-10 * scale
        assert a_function(0.5, t).is_real_certified and b_function(0.5, t).is_real_certified


def test_decomposition_matches_explicit_a_and_b():
    # A derived from (E + E#)/2 carries the prefactor exp(+(x - u)/2)
    for u, z in ((0.0, 1.3 + 0.4j), (1.0, -2.0 + 3.0j), (0.5, 4.1)):
        s = structure_sample(u, z)
        assert s.A_value == pytest.approx(complex(a_function(u, z)), rel=1e-12)
        assert s.B_value == pytest.approx(complex(b_function(u, z)), rel=1e-12)
        assert s.E_value == pytest.approx(s.A_value - 1j * s.B_value, rel=1e-12)
        x = math.exp(u)
        flipped = complex(whittaker_w(0.5, 1j * z, x)) * math.exp(-(x - u) / 2)
        assert abs(flipped - s.A_value) > 0.1 * abs(s.A_value)


def test_sharp_involution_and_symmetry():
    rng = random.Random(2)
    for _ in range(10):
        z = complex(rng.uniform(-10, 10), rng.uniform(-5, 5))
        e = complex(structure_e0(0.3, z))
        sharp = complex(structure_e0_sharp(0.3, z))
        assert sharp == pytest.approx(complex(structure_e0(0.3, z.conjugate())).conjugate(), rel=1e-15)
        # applying # twice: conj of E#(conj z) is E(z)
        twice = complex(structure_e0_sharp(0.3, z.conjugate())).conjugate()
        assert twice == pytest.approx(e, rel=1e-12)


def test_large_u_prefactors_are_scaled():
    # at u = 5 the prefactor exp((x - u)/2) is about 1e30 and W about 1e-33;
    # the connection formula needs ~70 extra digits there
    cfg = DEFAULT_PRECISION.with_digits(110)
    e = structure_e0(5.0, 3 + 1j, cfg)
    ctx = mpmath.MPContext()
    ctx.dps = 40
    x = ctx.exp(5)
    z = ctx.mpc(3, 1)
    val = ctx.exp((x - 5) / 2) * ctx.whitw(0.5, 1j * z, x) - 1j * z * ctx.exp(-(x + 5) / 2) * ctx.whitw(-0.5, 1j * z, x)
    assert e.log10_abs() == pytest.approx(float(ctx.log10(abs(val))), abs=1e-10)


def test_hermite_biehler():
    rep = hermite_biehler_check(0.0, 100, seed=3)
    assert not rep.violations and rep.min_margin > 0
    assert all(abs(z) <= 30 and 0.05 <= z.imag <= 10 for z in rep.points)
    assert rep.min_margin <= rep.median_margin <= rep.max_margin
    with pytest.raises(DomainError):
        hermite_biehler_check(0.0, 10)


def test_hb_equality_on_real_axis():
    for t in (0.0, 2.5, -7.0):
        assert structure_e0(0.0, t).log10_abs() == structure_e0(0.0, complex(t, -0.0)).log10_abs()


def test_hb_violation_raised(monkeypatch):
    import morsespec.debranges as db

    monkeypatch.setattr(db, "structure_e0", lambda u, z, cfg=None: db.exp_scaled(-complex(z).imag))
    with pytest.raises(HBViolation) as info:
        db.hermite_biehler_check(0.0, 100)
    assert info.value.witness.imag > 0


def test_interlacing_and_dirichlet_correspondence():
    rep = ab_zero_interlacing(0.0, 15.0)
    assert rep.interlaced and rep.b_zeros[0] == 0.0
    assert not rep.double_zeros
    kinds = [k for k, _ in rep.merged()]
    assert kinds[0] == "B" and all(a != b for a, b in zip(kinds, kinds[1:]))
    dirichlet = dirichlet_zero_scan(MorseProblem(-0.5, 0.0), 15.0)
    assert len(dirichlet) == len(rep.a_zeros)
    for a, z in zip(rep.a_zeros, dirichlet):
        assert a * a == pytest.approx(z.energy, rel=1e-5)


def test_b_vanishes_at_origin():
    assert b_function(0.7, 0.0).is_zero


def test_debranges_m_frozen_and_forms_agree():
    assert debranges_m(0.0, 2 + 0.5j) == pytest.approx(FROZEN_DEBRANGES_M, rel=1e-13)
    rng = random.Random(4)
    for _ in range(15):
        z = complex(rng.uniform(-10, 10), rng.choice([-1, 1]) * rng.uniform(0.1, 5))
        u = rng.choice([0.0, 1.0])
        first, second = debranges_m_forms(u, z)
        assert abs(first - second) <= 1e-8 * abs(first)
        assert first == pytest.approx(debranges_m(u, z), rel=1e-12)
    with pytest.raises(DomainError):
        debranges_m_forms(0.0, 0.0)


def test_b_over_a_maps_upper_half_plane_to_itself():
    # -B/A has negative imaginary part on the upper half-plane, so B/A is the Herglotz function
    rng = random.Random(5)
    for _ in range(30):
        z = complex(rng.uniform(-15, 15), rng.uniform(0.05, 8))
        assert debranges_m(0.0, z).imag < 0


def test_pole_at_a_zero():
    a0 = ab_zero_interlacing(0.0, 3.0).a_zeros[0]
    with pytest.raises(PoleError):
        debranges_m(0.0, a0)


def test_comparison_table():
    rows = comparison_table(0.0, [1 + 1j, 2 + 0.5j])
    assert [set(r) for r in rows] == [{"z", "debranges_m", "m_principal"}] * 2
    assert rows[1]["debranges_m"] == pytest.approx(FROZEN_DEBRANGES_M, rel=1e-13)
