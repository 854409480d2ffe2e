"""
Tests de las condiciones algebraicas (A1)-(A3), del resolvedor lineal de
cométricas y de los cambios de variables admisibles.
"""

from fractions import Fraction

import pytest

from dopkit import algdop
from dopkit.algdop import (
    AdmissibleChange, BoundarySpec, Cometric, Shear, Translation,
    apply_change, check_A1, check_A2_A3, is_w_admissible, jacobian_determinant,
    maximal_boundary, metric_proportional, minimal_infinite_weight, solve_metric,
    transform_boundary, transform_polynomial, verify, weight_monotonicity,
)
from dopkit.catalog import GAMMA_B1, METRIC_B1, b3_reduction
from dopkit.errors import DegenerateMetricError, DopkitError, PreconditionError
from dopkit.poly import RatPoly2, Weights

X = RatPoly2.x()
Y = RatPoly2.y()
ONE = RatPoly2.one()


@pytest.fixture
def cuadrado():
    """g = diag(1 − x², 1 − y²) con Γ = (1 − x²)(1 − y²)"""
    g = Cometric.diag(ONE - X * X, ONE - Y * Y)
    gamma = BoundarySpec((ONE - X * X, ONE - Y * Y))
    return g, gamma


# ========================================
# TESTS VERIFY
# ========================================

def test_verify_cuadrado(cuadrado):
    """Test el cuadrado de Jacobi cumple (A1)-(A3) con w = (1, 1)"""
    g, gamma = cuadrado
    report = verify(g, gamma, Weights(1, 1))

    assert report["passed"] is True
    assert report["reason"] is None
    assert report["certificate"]["S1_text"] == "-2*x"
    assert report["certificate"]["S2_text"] == "-2*y"


def test_verify_cubica_pesos_1_2():
    """Test la cúbica irreducible con su métrica en w = (1, 2)"""
    report = verify(METRIC_B1, BoundarySpec((GAMMA_B1,)), Weights(1, 2))

    assert report["a1"] and report["a2"] and report["a3"]
    assert report["passed"] is True


def test_verify_gamma_no_divide_det():
    """Test Γ = 1 − x² − y² no divide a det de la identidad"""
    g = Cometric.diag(ONE, ONE)
    report = verify(g, BoundarySpec((ONE - X * X - Y * Y,)), Weights(1, 1))

    assert report["passed"] is False
    assert report["a2"] is False
    assert report["reason"] == "Γ no divide a det g"


def test_verify_metrica_degenerada():
    """Test det g ≡ 0 se informa sin lanzar"""
    g = Cometric(X * X, X * Y, Y * Y)
    report = verify(g, BoundarySpec((X,)), Weights(1, 1))

    assert report["passed"] is False
    assert report["reason"] == "det g ≡ 0"
    with pytest.raises(DegenerateMetricError):
        check_A2_A3(g, BoundarySpec((X,)), Weights(1, 1))


def test_cofactores_inconsistentes(cuadrado, monkeypatch):
    """Test cofactores que no reproducen g·∇Γ lanzan DopkitError"""
    g, gamma = cuadrado
    monkeypatch.setattr(algdop, "cofactors", lambda metric, product: (RatPoly2.zero(), RatPoly2.zero()))

    with pytest.raises(DopkitError, match="Cofactores inconsistentes"):
        check_A2_A3(g, gamma, Weights(1, 1))


def test_verify_grado_excesivo():
    """Test (A1) y (A3) fallan con un factor de grado 4 en x"""
    g = Cometric.diag(ONE - X ** 4, ONE - Y * Y)
    report = verify(g, BoundarySpec((ONE - X ** 4, ONE - Y * Y)), Weights(1, 1))

    assert report["a1"] is False
    assert report["a2"] is True
    assert report["a3"] is False
    assert report["reason"] == "deg_w S^i > w_i"
    assert report["passed"] is False


def test_check_A1_cajas():
    """Test cajas de grado (A1)"""
    assert check_A1(Cometric.diag(X, Y), Weights(1, 2))
    assert not check_A1(Cometric.diag(X ** 3, Y), Weights(1, 2))


# ========================================
# TESTS BOUNDARY SPEC
# ========================================

def test_boundary_factores_no_coprimos():
    """Test factores con factor común"""
    with pytest.raises(PreconditionError):
        BoundarySpec((X * Y, X + X * Y))


def test_boundary_factor_constante():
    """Test factor constante"""
    with pytest.raises(PreconditionError):
        BoundarySpec((RatPoly2.const(3),))


def test_boundary_vacio_es_plano():
    """Test lista vacía: Γ = 1"""
    assert BoundarySpec(()).product == ONE


def test_boundary_desde_json():
    """Test acepta dict con 'factors' o lista de textos"""
    from_dict = BoundarySpec.from_json({"factors": ["1 - x^2", "1 - y^2"]})
    from_list = BoundarySpec.from_json(["1 - x^2", "1 - y^2"])
    assert from_dict == from_list


# ========================================
# TESTS SOLVE METRIC
# ========================================

def test_solve_metric_semiplano():
    """Test Γ = x con w = (1, 1): a y b múltiplos de x, c libre"""
    solutions = solve_metric(BoundarySpec((X,)), Weights(1, 1))
    assert len(solutions) == 12


def test_solve_metric_soluciones_cumplen_cofactores(cuadrado):
    """Test cada elemento de la base cumple g·∇Γ = S·Γ"""
    _, gamma = cuadrado
    product = gamma.product
    gx, gy = product.partial_x(), product.partial_y()
    solutions = solve_metric(gamma, Weights(1, 1))

    assert solutions
    for sol in solutions:
        g = sol.metric
        assert g.a * gx + g.b * gy == sol.S1 * product
        assert g.b * gx + g.c * gy == sol.S2 * product


def test_metricas_proporcionales(cuadrado):
    """Test detección de múltiplo escalar"""
    g, _ = cuadrado
    assert metric_proportional(g.scale(3), g) == 3
    assert metric_proportional(Cometric.diag(ONE, ONE), g) is None


# ========================================
# TESTS FRONTERA MAXIMAL
# ========================================

def test_frontera_maximal_cuadrado(cuadrado):
    """Test todos los factores lineales de Δ cumplen (A3)"""
    g, _ = cuadrado
    factors = [ONE - X, ONE + X, ONE - Y, ONE + Y]
    boundary = maximal_boundary(g, factors)
    assert len(boundary) == 4


def test_frontera_maximal_factorizacion_incorrecta(cuadrado):
    """Test factorización que no reproduce Δ"""
    g, _ = cuadrado
    with pytest.raises(PreconditionError):
        maximal_boundary(g, [ONE - X])


# ========================================
# TESTS CAMBIOS ADMISIBLES
# ========================================

def test_traslacion_conserva_solucion(cuadrado):
    """Test (g, Γ) trasladado sigue cumpliendo (A1)-(A3)"""
    g, gamma = cuadrado
    change = Translation(Fraction(1))
    moved = apply_change(g, change)
    moved_gamma = transform_boundary(gamma, change)

    assert moved.a == X * 2 - X * X
    assert verify(moved, moved_gamma, Weights(1, 1))["passed"] is True


def test_cambio_general_conserva_solucion():
    """Test (x, y) -> (2x + 1, 3y + x²) sobre la cúbica de pesos (1, 2)"""
    change = AdmissibleChange(Fraction(2), Fraction(1), Fraction(3), X * X)
    moved = apply_change(METRIC_B1, change)
    moved_gamma = transform_boundary(BoundarySpec((GAMMA_B1,)), change)

    assert verify(moved, moved_gamma, Weights(1, 2))["passed"] is True


def test_jacobiano_constante():
    """Test det J = αγ"""
    assert jacobian_determinant(AdmissibleChange(Fraction(2), Fraction(0), Fraction(3), X)) == 6


def test_cizalla_admisible_segun_pesos():
    """Test (x, y + x²) es admisible en (1, 2) pero no en (1, 1)"""
    shear = Shear(X * X)
    assert is_w_admissible(shear, Weights(1, 2))
    assert not is_w_admissible(shear, Weights(1, 1))


def test_peso_infinito_minimo():
    """Test menor W ≥ 3 con (A1)"""
    g = Cometric.diag(ONE, Y ** 3)
    assert minimal_infinite_weight(g) is None
    assert minimal_infinite_weight(Cometric.diag(ONE, Y)) == 3


def test_monotonia_de_pesos(cuadrado):
    """Test el cuadrado sigue siendo solución en (1, 2); B1 no cabe en (1, 1)"""
    g, gamma = cuadrado
    assert weight_monotonicity(g, gamma, Weights(1, 1), Weights(1, 2)) is True
    assert weight_monotonicity(METRIC_B1, BoundarySpec((GAMMA_B1,)), Weights(1, 2), Weights(1, 1)) is None


def test_transformar_polinomio():
    """Test Γ ∘ Φ⁻¹ para x -> x + 1"""
    assert transform_polynomial(ONE - X * X, Translation(Fraction(1))) == X * 2 - X * X


def test_reduccion_b3_al_problema_11():
    """Test (x, y) -> (x, x² − y − 1) lleva g(−4, 0) a −g(4, 1)"""
    reduction = b3_reduction(-4, 0)
    g1 = Y - X * X + 1
    g = Cometric(g1, RatPoly2.zero(), g1 * Y * -4)
    moved = apply_change(g, reduction["change"])

    assert reduction["kind"] == "change"
    assert reduction["target"] == {"alpha": 4, "beta": 1, "sign": -1}
    assert moved == Cometric.parse("-y", "-2*x*y", "-4*y^2 - 4*y")
    assert b3_reduction(-1, 0)["reducible"] is False
