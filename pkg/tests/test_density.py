"""
Tests de densidades: derivas compatibles, familias de densidades,
integración de derivas y tablas de integrabilidad.
"""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from dopkit.algdop import BoundarySpec, Cometric
from dopkit.density import (
    DensitySpec, check_q_degree_bound, density_family, drift_from_density,
    equivalent_families, integrability_constraints, integrate_drift, solve_drift,
)
from dopkit.errors import InvalidParameterError, UnknownEntryError, UnsupportedCaseError
from dopkit.poly import RatPoly2, Weights

X = RatPoly2.x()
Y = RatPoly2.y()
ONE = RatPoly2.one()


@pytest.fixture
def cuadrado():
    """g = diag(1 − x², 1 − y²)"""
    return Cometric.diag(ONE - X * X, ONE - Y * Y)


# ========================================
# TESTS FAMILIAS DE DENSIDADES
# ========================================

def test_familia_cuadrado_factores_lineales(cuadrado):
    """Test un exponente libre por factor lineal y Q = 0"""
    factors = (ONE - X, ONE + X, ONE - Y, ONE + Y)
    family = density_family(cuadrado, BoundarySpec(factors), Weights(1, 1))

    assert len(family.parameters) == 4
    assert family.q_parts == ()
    assert {str(e) for e in family.exponents} == {"t0", "t1", "t2", "t3"}


def test_familia_plana_gaussiana():
    """Test g = I, Γ = 1: Q recorre los polinomios de grado ≤ 2"""
    g = Cometric.diag(ONE, ONE)
    family = density_family(g, BoundarySpec(()), Weights(1, 1))

    assert len(family.parameters) == 5
    for _, q in family.q_parts:
        assert q.total_degree <= 2


def test_familia_det_con_factor_multiple():
    """Test det g = x² no está codificado"""
    g = Cometric.diag(X * X, ONE)
    with pytest.raises(UnsupportedCaseError):
        density_family(g, BoundarySpec((X,)), Weights(1, 1))


def test_familia_equivalente_a_si_misma(cuadrado):
    """Test equivalencia afín reflexiva"""
    family = density_family(cuadrado, BoundarySpec((ONE - X * X, ONE - Y * Y)), Weights(1, 1))
    assert equivalent_families(family, family)


def test_familias_con_factores_distintos_no_equivalentes():
    """Test factores distintos no son la misma familia"""
    a = DensitySpec((ONE - X * X,), (Fraction(1, 2),))
    b = DensitySpec((ONE - Y * Y,), (Fraction(1, 2),))
    assert not equivalent_families(a, b)


# ========================================
# TESTS DERIVAS
# ========================================

def test_derivas_compatibles_cuadrado(cuadrado):
    """Test derivas lineales cerradas: L¹ en x, L² en y"""
    family = solve_drift(cuadrado, Weights(1, 1))
    assert len(family.basis) == 4


def test_deriva_ida_y_vuelta(cuadrado):
    """Test ρ -> L -> ρ recupera los exponentes (1/2, 3)"""
    density = DensitySpec((ONE - X * X, ONE - Y * Y), (Fraction(1, 2), Fraction(3)))
    pair = drift_from_density(cuadrado, density)

    assert pair.L1 == -X
    assert pair.L2 == Y * -6

    recovered = integrate_drift(cuadrado, pair, BoundarySpec((ONE - X * X, ONE - Y * Y)))
    assert recovered.exponent_values() == (Fraction(1, 2), Fraction(3))
    assert recovered.factors == (ONE - X * X, ONE - Y * Y)
    assert recovered.q_parts == ()


# ========================================
# TESTS DENSITY SPEC
# ========================================

def test_densidad_simbolica_instanciada():
    """Test sustitución de parámetros en los exponentes"""
    t0 = sympy.Symbol("t0")
    spec = DensitySpec((ONE - X * X,), (t0,), (), (t0,))
    assert not spec.is_numeric

    numeric = spec.instantiate({"t0": Fraction(3, 2)})
    assert numeric.is_numeric
    assert numeric.exponent_values() == (Fraction(3, 2),)


def test_densidad_evaluada_en_nodos():
    """Test ρ = (1 − x²) en x = 1/2"""
    spec = DensitySpec((ONE - X * X,), (Fraction(1),))
    values = spec.evaluate_array(np.array([0.5]), np.array([0.0]))
    assert values[0] == pytest.approx(0.75)


def test_cota_de_grado_de_Q():
    """Test w_j·deg_{x_j}(QΔ) ≤ 2w1 + 2w2"""
    delta = (ONE - X * X) * (ONE - Y * Y)
    assert check_q_degree_bound(delta, X, Weights(1, 1))
    assert not check_q_degree_bound(delta, X ** 3, Weights(1, 1))


# ========================================
# TESTS INTEGRABILIDAD
# ========================================

def test_integrabilidad_b2():
    """Test p > 0, q > 1/6, p + q > 2/3"""
    ok = integrability_constraints("B2", {"p": Fraction(1, 2), "q": Fraction(1, 2)})
    assert ok["satisfied"] is True
    assert len(ok["constraints"]) == 3

    bad = integrability_constraints("B2", {"p": Fraction(1, 2), "q": Fraction(1, 10)})
    assert bad["satisfied"] is False


def test_integrabilidad_b1():
    """Test p > 3/10"""
    assert integrability_constraints("B1", {"p": Fraction(1, 4)})["satisfied"] is False
    assert integrability_constraints("B1", {"p": 1})["satisfied"] is True


def test_integrabilidad_b4_paridad():
    """Test tablas distintas según la paridad de m, n"""
    even = integrability_constraints("B4", {"m": 2, "n": 2})
    odd = integrability_constraints("B4", {"m": 1, "n": 1})

    assert even["satisfied"] and odd["satisfied"]
    assert len(even["constraints"]) == 3
    assert len(odd["constraints"]) == 1


def test_integrabilidad_sin_tabla():
    """Test entrada sin tabla de integrabilidad"""
    with pytest.raises(UnknownEntryError):
        integrability_constraints("P53", {})


def test_integrabilidad_falta_parametro():
    """Test falta m en B4"""
    with pytest.raises(InvalidParameterError) as excinfo:
        integrability_constraints("B4", {"n": 2})
    assert excinfo.value.predicate == "m"
