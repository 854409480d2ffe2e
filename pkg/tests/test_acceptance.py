"""
Tests de aceptación: identidades exactas de las soluciones acotadas,
recuperación de densidades, tablas de integrabilidad, curvatura,
realización, condiciones de rama y espectro.
"""

from fractions import Fraction

import pytest

from dopkit.algdop import BoundarySpec, metric_proportional, solve_metric
from dopkit.branches import BranchGerm, WProjParam, check_tangency, on_curve
from dopkit.catalog import (
    B1_PARAMETRIZATION, GAMMA_B1, GAMMA_B2_CUBIC, GAMMA_B2_LINE, METRIC_B1, METRIC_B2,
    closed_form_curvature, curvature, instantiate, realization_check, singular_points,
)
from dopkit.density import density_family, integrability_constraints
from dopkit.poly import RatPoly2, Weights
from dopkit.spectral import spectral_report

X = RatPoly2.x()
Y = RatPoly2.y()


# ========================================
# TESTS IDENTIDADES EXACTAS
# ========================================

def test_unicidad_de_la_metrica_b1():
    """Test la única solución para Γ_B1 en w = (1, 2) es g_B1 salvo escalar"""
    solutions = solve_metric(BoundarySpec((GAMMA_B1,)), Weights(1, 2))

    assert len(solutions) == 1
    assert metric_proportional(solutions[0].metric, METRIC_B1) is not None


def test_determinantes():
    """Test 25·Γ_B1 + det g_B1 = 0 y det g_B2 = 36·Γ1Γ2"""
    assert METRIC_B1.det + GAMMA_B1 * 25 == RatPoly2.zero()
    assert METRIC_B2.det == GAMMA_B2_LINE * GAMMA_B2_CUBIC * 36
    assert instantiate("P55.i").metric.det * 4 == METRIC_B2.det


def test_parametrizacion_racional_b1():
    """Test [32(t+1) : 256(5t+3)(t+3) : (t+3)³] anula la homogeneización de Γ_B1"""
    assert on_curve(WProjParam(*B1_PARAMETRIZATION), GAMMA_B1)


def test_puntos_singulares_b2():
    """Test Γ1Γ2 y sus parciales se anulan en los tres puntos"""
    gamma = GAMMA_B2_LINE * GAMMA_B2_CUBIC
    points = {(pt.x, pt.y) for pt in singular_points("B2")}

    assert points == {(Fraction(1, 9), Fraction(-1, 27)), (Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))}
    for x, y in points:
        for poly in (gamma, gamma.partial_x(), gamma.partial_y()):
            assert poly.evaluate(x, y) == 0


# ========================================
# TESTS RECUPERACIÓN DE DENSIDADES
# ========================================

def test_densidad_b3_beta_cero():
    """Test familia de dos exponentes con Q = 0"""
    bundle = instantiate("B3", {"alpha": -1, "beta": 0})
    family = density_family(bundle.metric, bundle.boundary, bundle.weights, allow_multiple=True)

    assert len(family.parameters) == 2
    assert family.q_parts == ()
    assert family.q_polynomial().is_zero
    assert [f.monic() for f in family.factors] == [Y.monic(), (Y - X * X + 1).monic()]


def test_densidad_u1():
    """Test un exponente para x − y² y Q lineal en x"""
    bundle = instantiate("U1", {"n": 1})
    family = density_family(bundle.metric, bundle.boundary, bundle.weights)

    assert len(family.parameters) == 2
    assert len(family.q_parts) == 1
    _, q = family.q_parts[0]
    assert q.deg_x == 1
    assert q.deg_y == 0


# ========================================
# TESTS INTEGRABILIDAD
# ========================================

@pytest.mark.parametrize("entry_id, params, expected", [
    ("B1", {"p": Fraction(3, 10)}, False),
    ("B1", {"p": Fraction(1, 2)}, True),
    ("B2", {"p": Fraction(1, 2), "q": Fraction(1, 2)}, True),
    ("B2", {"p": Fraction(1, 2), "q": Fraction(1, 6)}, False),
    ("B4", {"m": 2, "n": 2, "p": 0}, False),
    ("B4", {"m": 2, "n": 2, "p": Fraction(1, 10)}, True),
])
def test_tablas_de_integrabilidad(entry_id, params, expected):
    """Test desigualdades estrictas en los bordes de las tablas"""
    assert integrability_constraints(entry_id, params)["satisfied"] is expected


# ========================================
# TESTS CURVATURA Y REALIZACIÓN
# ========================================

@pytest.mark.parametrize("point", [
    (Fraction(1, 2), 0),
    (Fraction(1, 4), 0),
    (Fraction(1, 2), Fraction(1, 4)),
    (Fraction(3, 4), Fraction(1, 8)),
    (Fraction(1, 10), Fraction(-1, 2)),
])
def test_curvatura_constante_b5(point):
    """Test K = 1/2 en puntos interiores de B5 con n = 2"""
    assert curvature("B5", {"n": 2, "c02": -1}, point) == Fraction(1, 2)


def test_curvatura_no_constante_b4():
    """Test B4 con (m, n) = (1, 2) tiene curvatura variable"""
    params = {"m": 1, "n": 2, "c02": -1}
    k0 = curvature("B4", params, (0, 0))
    k1 = curvature("B4", params, (Fraction(1, 2), 0))
    assert abs(float(k0) - float(k1)) >= 1e-3


@pytest.mark.parametrize("point", [(Fraction(1, 3), Fraction(1, 10)), (Fraction(-1, 2), Fraction(1, 20))])
def test_curvatura_b4_forma_cerrada_m2_n2(point):
    """Test B4 con m = n = 2, c02 = −4: K = 2 exacto y coincide con la forma cerrada"""
    params = {"m": 2, "n": 2, "c02": -4}
    value = curvature("B4", params, point)

    assert value == 2
    assert value == closed_form_curvature("B4", params, point)


@pytest.mark.parametrize("m, n", [(1, 1), (1, 2), (2, 3)])
def test_realizacion_mil_puntos(m, n):
    """Test imágenes en Ω̄ y al menos una sobre el borde"""
    result = realization_check(m, n, count=1000, seed=0)

    assert result["passed"] is True
    assert result["min_boundary_value"] >= -1e-12
    assert result["min_abs_boundary_value"] <= 1e-6


# ========================================
# TESTS CONDICIONES DE RAMA
# ========================================

@pytest.mark.parametrize("n", [1, 2, 3])
def test_rama_de_p43ii(n):
    """Test (t², tⁿ) es tangente para Γ = xⁿ − y²"""
    g = instantiate("P43.ii", {"n": n}).metric
    germ = BranchGerm.parse("t^2", f"t^{n}", trunc_order=64)
    assert check_tangency(germ, g) is True


@pytest.mark.parametrize("params", [
    {"alpha": 1, "beta": 0, "mu": 1},
    {"alpha": 2, "beta": Fraction(1, 2), "mu": 0},
])
def test_rama_parabolica_de_p55ii(params):
    """Test y = x² es tangente para Γ = y(y − x²)"""
    g = instantiate("P55.ii", params).metric
    germ = BranchGerm.parse("t", "t^2", trunc_order=64)
    assert check_tangency(germ, g) is True


# ========================================
# TESTS ESPECTRALES
# ========================================

def test_espectro_b3_beta_cero():
    """Test B3 con α = −1, β = 0 en grado 6: simétrico, Gram ortonormal y autovalores ≤ 0"""
    result, _, _ = spectral_report(instantiate("B3", {"alpha": -1, "beta": 0}), 6, order=48)

    assert result["passed"] is True
    assert result["symmetry_defect"] <= 1e-8
    assert result["gram_residual"] <= 1e-8
    assert result["max_imag"] <= 1e-9
    for block in result["eigenvalues"]:
        assert max(block["eigenvalues"]) <= 1e-8


def test_espectro_b1():
    """Test B1 con p = 1 en grado 6 y orden 64"""
    result, _, _ = spectral_report(instantiate("B1"), 6, order=64)

    assert result["passed"] is True
    assert result["symmetry_defect"] <= 1e-8
