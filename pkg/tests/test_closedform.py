import cmath

import pytest

from bstspan.closedform import (
    DomainError,
    F_numeric,
    GfPoint,
    PoleError,
    omega,
    phi,
    phi_tilde,
    series_F,
    series_phi,
)
from bstspan.exactdist import build_tables, vslice_table


def test_omega():
    assert omega(0.7, 1.0) == pytest.approx(1.0)
    assert omega(0.0, 0.5) == 0
    assert omega(1.0, 2.0) == pytest.approx(17 ** 0.5)


@pytest.mark.parametrize("u,v", [(0.5, 1.2), (0.25, 0.9), (1.0, 1.1)])
def test_initial_values(u, v):
    pt = GfPoint(0.0, u, v)
    assert phi(pt) == pytest.approx(1.0, abs=1e-15)
    assert F_numeric(pt) == pytest.approx(1.0, abs=1e-12)
    assert series_phi(pt, 10, vslice_table("X", 10, v)) == 1
    assert series_F(pt, 10, vslice_table("Y", 10, v)) == 1


def test_total_probability_slice():
    assert phi(GfPoint(0.3, 0.5, 1.0)) == pytest.approx(1 / 0.55, rel=1e-12)
    assert F_numeric(GfPoint(0.25, 0.5, 1.0)) == pytest.approx(1 / 0.625, rel=1e-10)


def test_frozen_values():
    pt = GfPoint(0.3, 0.5, 1.2)
    assert phi(pt) == pytest.approx(1.9725042995696913, rel=1e-12)
    assert F_numeric(pt) == pytest.approx(1.93719070636521, rel=1e-9)


def test_series_geometric_at_v_one():
    z, u, N = 0.2, 0.5, 30
    pt = GfPoint(z, u, 1.0)
    partial = sum((z * (1 + u)) ** n for n in range(N + 1))
    assert series_phi(pt, N, vslice_table("X", N, 1.0)) == pytest.approx(partial, rel=1e-13)


@pytest.mark.parametrize("z,u,v", [(0.3, 0.5, 1.2), (0.1, 0.25, 0.9), (0.2, 0.5, 1.1)])
def test_closed_forms_match_series(z, u, v):
    pt = GfPoint(z, u, v)
    N = 200
    assert abs(phi(pt) - series_phi(pt, N, vslice_table("X", N, v))) <= 1e-9 * abs(phi(pt))
    assert abs(F_numeric(pt) - series_F(pt, N, vslice_table("Y", N, v))) <= 1e-6 * abs(F_numeric(pt))


def test_exact_table_series_agrees_with_vslice():
    pt = GfPoint(0.1, 0.25, 1.1)
    xt, yt = build_tables(25, 25)
    assert series_phi(pt, 25, xt) == pytest.approx(series_phi(pt, 25, vslice_table("X", 25, 1.1)), rel=1e-13)
    assert series_F(pt, 25, yt) == pytest.approx(series_F(pt, 25, vslice_table("Y", 25, 1.1)), rel=1e-13)


def _central_phi_tilde(pt, h=1e-5):
    def at(z):
        return phi(GfPoint(z, pt.u, pt.v))

    d = (at(pt.z + h) - at(pt.z - h)) / (2 * h)
    return (d - 2 * pt.v / (1 - pt.z) * at(pt.z)) * (1 - pt.z) ** 2


@pytest.mark.parametrize("z,u,v", [(0.2, 1.0, 1.1), (0.0, 0.5, 1.2), (0.15, 0.5, 1.0)])
def test_phi_tilde_matches_finite_difference(z, u, v):
    pt = GfPoint(z, u, v)
    assert phi_tilde(pt) == pytest.approx(_central_phi_tilde(pt), rel=1e-6)


def test_phi_tilde_frozen():
    assert phi_tilde(GfPoint(0.2, 1.0, 1.1)) == pytest.approx(1.0948917960975866, rel=1e-12)


def test_complex_arguments_use_principal_branch():
    pt = GfPoint(0.1, 0.5, cmath.exp(0.3j))
    vs = vslice_table("X", 120, pt.v)
    assert phi(pt) == pytest.approx(series_phi(pt, 120, vs), rel=1e-9)


def test_domain_errors():
    with pytest.raises(DomainError):
        phi(GfPoint(1.0, 0.5, 1.2))
    with pytest.raises((PoleError, DomainError)):
        phi(GfPoint(1 / 1.5, 0.5, 1.0))
    with pytest.raises(ValueError):
        series_phi(GfPoint(0.1, 0.5, 1.2), 20, vslice_table("X", 20, 1.1))
