import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from morsespec.errors import CorrespondenceViolation, DomainError, PoleError
from morsespec.mfunction import (
    asymptotic_gaps,
    herglotz_check,
    m_alpha,
    m_from_eigenfunction,
    m_of_energy,
    m_principal,
    pole_zero_correspondence,
    principal_root,
    riccati_residual,
)
from morsespec.spectrum import MorseProblem

# -W(1-k, iz, x0)/W(-k, iz, x0) + x0/2 + k - 1/2 from mpmath.whitw at k=0.5, u0=0.2, E=1+2i
FROZEN_M = -1.10391814207579061 + 0.716641511513496285j
DIRICHLET_K0_U0 = [4.41523104427973743, 11.6412665434516626, 20.6810022014929191,
                   31.2675064850931907, 43.244850204059735]
NEUMANN_K0_U0 = [1.59422023170748222, 7.76431208322850544, 15.9495779684822784,
                 25.7890706927359903, 37.0877254422988413]


def test_principal_root_branch():
    assert principal_root(4) == 2
    assert principal_root(-4) == pytest.approx(2j)
    for E in (1 + 1j, -3 - 0.5j, -2 + 1e-9j, 5 - 2j):
        z = principal_root(E)
        assert z.imag >= 0 and z * z == pytest.approx(E)


def test_frozen_value():
    assert m_of_energy(0.5, 0.2, 1 + 2j) == pytest.approx(FROZEN_M, rel=1e-13)


@pytest.mark.parametrize("k,u0,E", [(0, 0, 1 + 2j), (0.7, -0.3, -3 + 0.5j), (-1.5, 0.8, 12 + 0.3j),
                                    (0.2, 0.1, -2.0)])
def test_closed_form_is_log_derivative(k, u0, E):
    m = m_of_energy(k, u0, E)
    assert abs(m - m_from_eigenfunction(k, u0, E)) <= 1e-8 * abs(m)


def test_real_for_negative_energy():
    m = m_of_energy(0, 0, -0.7)
    assert isinstance(m, complex) and m.imag == 0.0


def test_pole_error_at_dirichlet_eigenvalue():
    with pytest.raises(PoleError):
        m_of_energy(0, 0, DIRICHLET_K0_U0[0])


def test_alpha_family():
    z = principal_root(2 + 3j)
    m0 = m_principal(0.4, 0.1, z)
    assert m_alpha(0.4, 0.1, z, 0.0) == pytest.approx(m0, rel=1e-15)
    assert m_alpha(0.4, 0.1, z, math.pi / 2) == pytest.approx(-1 / m0, rel=1e-14)
    a = 0.9
    ma = m_alpha(0.4, 0.1, z, a)
    # rotating back by -a recovers m0
    back = (math.cos(-a) * ma - math.sin(-a)) / (math.sin(-a) * ma + math.cos(-a))
    assert abs(back - m0) <= 1e-12 * abs(m0)
    with pytest.raises(PoleError):
        m_alpha(0, 0, math.sqrt(NEUMANN_K0_U0[0]), math.pi / 2)


def test_riccati_residual_and_order():
    r = [riccati_residual(0.5, 0.2, 1 + 2j, h) for h in (1e-3, 5e-4, 2.5e-4)]
    assert r[0] <= 1e-5 * (1 + abs(1 + 2j))
    assert 3.5 < r[0] / r[1] < 4.5 and 3.5 < r[1] / r[2] < 4.5
    assert riccati_residual(0.5, 0.2, 1 - 2j, 1e-3) == pytest.approx(r[0], rel=1e-6)
    with pytest.raises(DomainError):
        riccati_residual(0, 0, 1j, 1e-2)


@settings(max_examples=20, deadline=None, derandomize=True)
@given(st.floats(-2, 2), st.floats(-1, 1), st.floats(-30, 30), st.floats(0.5, 30))
def test_riccati_random(k, u0, er, ei):
    E = complex(er, ei)
    assert riccati_residual(k, u0, E, 1e-4) <= 1e-5 * (1 + abs(E))


@settings(max_examples=30, deadline=None, derandomize=True)
@given(st.floats(-2, 2), st.floats(-1, 1), st.floats(-50, 50), st.floats(0.1, 50))
def test_conjugation(k, u0, er, ei):
    E = complex(er, ei)
    up = m_of_energy(k, u0, E)
    down = m_of_energy(k, u0, E.conjugate())
    assert abs(down - up.conjugate()) <= 1e-10 * abs(up)
    assert up.imag > 0


@pytest.mark.parametrize("k,u0", [(0, 0), (1, 0), (-1, 0.5), (-0.5, -1)])
def test_herglotz(k, u0):
    rep = herglotz_check(k, u0, 25, seed=5)
    assert rep.ok and len(rep.samples) == 25
    assert all(abs(s.E) <= 100 and s.E.imag >= 0.1 for s in rep.samples)


def test_large_z_asymptotics():
    for k, u0 in ((0, 0), (-1, 1), (2, 0)):
        gaps = asymptotic_gaps(k, u0)
        assert all(math.isfinite(g) for g in gaps)
        assert gaps[1] >= gaps[2]
        assert gaps[2] < 0.1


def test_increasing_between_poles():
    for a, b in zip(DIRICHLET_K0_U0, DIRICHLET_K0_U0[1:3]):
        es = np.linspace(a, b, 22)[1:-1]
        vals = [m_of_energy(0, 0, e).real for e in es]
        assert all(x < y for x, y in zip(vals, vals[1:]))


def test_pole_zero_correspondence():
    rep = pole_zero_correspondence(MorseProblem(0, 0), 5)
    assert rep.pole_matches == 5 and rep.zero_matches == 5 and rep.interlaced
    assert np.allclose(rep.poles[:5], DIRICHLET_K0_U0, rtol=1e-6)
    assert np.allclose(rep.zeros[:5], NEUMANN_K0_U0, rtol=1e-6)
    for p, q in zip(rep.poles, rep.poles[1:]):
        assert sum(1 for z in rep.zeros if p < z < q) == 1


def test_correspondence_negative_k():
    rep = pole_zero_correspondence(MorseProblem(-1.5, 0.0), 3)
    assert rep.ok


def test_correspondence_violation(monkeypatch):
    import morsespec.mfunction as mf

    real = mf.eigenvalues_general_alpha

    def shifted(prob, n, **kw):
        ev = real(prob, n, **kw)
        return [e + 0.01 for e in ev] if prob.alpha == 0 else ev

    monkeypatch.setattr(mf, "eigenvalues_general_alpha", shifted)
    with pytest.raises(CorrespondenceViolation) as info:
        mf.pole_zero_correspondence(MorseProblem(0, 0), 2)
    assert info.value.witness == pytest.approx(DIRICHLET_K0_U0[0] + 0.01, rel=1e-8)
