"""
Tests de ramas locales: series truncadas, tangencia, valoraciones,
cartas de F₂ y curva dual.
"""

from fractions import Fraction

import pytest

from dopkit.algdop import Cometric
from dopkit.branches import (
    INCONCLUSIVE, INF, BranchGerm, TruncatedSeries, WProjParam,
    chart_transform, check_tangency, check_valuation_balance, dual_param,
    implicit_check, newton_consistency, on_curve, valuation,
)
from dopkit.catalog import instantiate
from dopkit.errors import ChartError, PreconditionError
from dopkit.poly import RatPoly2

X = RatPoly2.x()
Y = RatPoly2.y()


@pytest.fixture
def cuspide():
    """Rama (t², t³) de y² = x³"""
    return BranchGerm.parse("t^2", "t^3")


@pytest.fixture
def metrica_cuspide():
    """g_(α,β,μ) con (α, β, μ) = (−18, −3/2, 1/2)"""
    return instantiate("P55.i").metric


# ========================================
# TESTS SERIES
# ========================================

def test_serie_producto_y_orden():
    """Test producto de series con precisión"""
    s = TruncatedSeries({1: 1, 2: 3}, precision=5)
    square = s * s
    assert square.coefficient(2) == 1
    assert square.coefficient(3) == 6
    assert square.order() == 2


def test_serie_inversa():
    """Test (1 − t)⁻¹ = 1 + t + t² + ..."""
    s = TruncatedSeries({0: 1, 1: -1}, precision=8)
    inv = s.inverse()
    for k in range(8):
        assert inv.coefficient(k) == 1


def test_serie_nula_truncada_es_inconclusa():
    """Test serie sin términos conocidos hasta la precisión"""
    assert TruncatedSeries({}, precision=4).order() == INCONCLUSIVE
    assert TruncatedSeries({}, None).order() == INF


def test_germen_constante_rechazado():
    """Test ambas coordenadas constantes"""
    with pytest.raises(PreconditionError):
        BranchGerm.parse("1", "2")


# ========================================
# TESTS TANGENCIA Y VALORACIONES
# ========================================

def test_tangencia_en_cuspide(cuspide, metrica_cuspide):
    """Test g de la cúspide es tangente a su rama"""
    assert check_tangency(cuspide, metrica_cuspide) is True


def test_valoraciones_en_cuspide(cuspide, metrica_cuspide):
    """Test v(a) − v(b) = v(b) − v(c) = ord ξ̇ − ord η̇ = −1"""
    assert valuation(cuspide, metrica_cuspide.a) == 2
    assert valuation(cuspide, metrica_cuspide.b) == 3
    assert check_valuation_balance(cuspide, metrica_cuspide) is True


def test_tangencia_falla_con_identidad(cuspide):
    """Test la identidad no es tangente a la cúspide"""
    g = Cometric.diag(RatPoly2.one(), RatPoly2.one())
    assert check_tangency(cuspide, g) is False
    # b ≡ 0 da valoración infinita
    assert check_valuation_balance(cuspide, g) == INCONCLUSIVE


def test_valoraciones_requieren_no_constantes(metrica_cuspide):
    """Test ξ constante"""
    germ = BranchGerm.parse("1", "t")
    with pytest.raises(PreconditionError):
        check_valuation_balance(germ, metrica_cuspide)


def test_valoracion_de_gamma_es_infinita(cuspide):
    """Test Γ se anula sobre su rama"""
    assert valuation(cuspide, RatPoly2.parse("y^2 - x^3")) == INF


def test_consistencia_con_poligono_de_newton(cuspide):
    """Test ord γ = (2, 3) es normal del polígono de y² − x³"""
    assert newton_consistency(cuspide, RatPoly2.parse("y^2 - x^3")) is True


def test_germen_desde_json():
    """Test germen con texto y orden de truncamiento"""
    germ = BranchGerm.from_json({"xi": "t^2", "eta": "t^3", "trunc_order": 16})
    assert germ.trunc_order == 16
    assert germ.xi.coefficient(2) == 1


# ========================================
# TESTS CARTAS
# ========================================

def test_carta_ida_y_vuelta():
    """Test (x, y) -> (1/x, y/x²) y regreso"""
    u, v = chart_transform((2, 3), 0, 1)
    assert (u, v) == (Fraction(1, 2), Fraction(3, 4))
    assert chart_transform((u, v), 1, 0) == (Fraction(2), Fraction(3))


def test_carta_lugar_excluido():
    """Test x = 0 no está en la carta 1"""
    with pytest.raises(ChartError):
        chart_transform((0, 1), 0, 1)


# ========================================
# TESTS CURVA DUAL
# ========================================

def test_parametrizacion_sobre_curva():
    """Test [t : t² : 1] está sobre y = x²"""
    phi = WProjParam("t", "t^2", "1")
    assert on_curve(phi, Y - X * X)
    assert not on_curve(phi, Y - X)


def test_dual_de_la_parabola():
    """Test dual de [t : t² : 1]"""
    phi = WProjParam("t", "t^2", "1")
    assert dual_param(phi) == (X * 2, RatPoly2.const(-1), -(X * X))


def test_parametrizacion_con_raiz_comun():
    """Test X, Y, Z con factor común"""
    with pytest.raises(PreconditionError):
        WProjParam("t", "t^2", "t")


def test_comprobacion_implicita():
    """Test (t : t² : 1) anula YZ − X² en los puntos de muestra"""
    triple = WProjParam("t", "t^2", "1").components()
    assert implicit_check(triple, lambda a, b, c: b * c - a * a)
    assert not implicit_check(triple, lambda a, b, c: a * c - b)
