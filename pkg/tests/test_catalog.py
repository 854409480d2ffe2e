"""
Tests del catálogo: esquema de parámetros, instanciación verificada,
puntos singulares, curvatura y realización desde S³.
"""

import json
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from dopkit.catalog import (
    Bundle, closed_form_curvature, curvature, get_entry, instantiate,
    list_entries, parse_assignments, realization_check, realization_map,
    resolve_params, singular_points,
)
from dopkit.errors import InvalidParameterError, PreconditionError, UnknownEntryError
from dopkit.poly import Weights

MANIFEST = Path(__file__).resolve().parent.parent / "data" / "acceptance_grid.json"


def _manifest_items():
    with open(MANIFEST, encoding="utf-8") as handle:
        return json.load(handle)["items"]


# ========================================
# TESTS ESQUEMA
# ========================================

def test_listado_de_entradas():
    """Test el listado incluye las familias principales"""
    ids = [e["id"] for e in list_entries()]
    for expected in ("P43.i", "P53", "B1", "B2", "B4", "B5", "U1", "RECT", "DIM1.jacobi"):
        assert expected in ids


def test_entrada_desconocida():
    """Test id inexistente"""
    with pytest.raises(UnknownEntryError):
        get_entry("Z99")


def test_parse_assignments():
    """Test 'm=1,n=2,c02=-1/2' con racionales exactos"""
    values = parse_assignments("m=1, n=2,c02=-1/2")
    assert values == {"m": 1, "n": 2, "c02": Fraction(-1, 2)}
    assert parse_assignments("") == {}


def test_parse_assignments_mal_formado():
    """Test trozo sin '='"""
    with pytest.raises(InvalidParameterError) as excinfo:
        parse_assignments("m=1,n")
    assert excinfo.value.predicate == "schema"


def test_predicado_violado_b3():
    """Test α ≥ 0 en B3 nombra el predicado"""
    with pytest.raises(InvalidParameterError) as excinfo:
        resolve_params(get_entry("B3"), {"alpha": 1})
    assert excinfo.value.predicate == "α < 0"


def test_minimo_de_entero():
    """Test m = 0 en B4"""
    with pytest.raises(InvalidParameterError) as excinfo:
        resolve_params(get_entry("B4"), {"m": 0})
    assert excinfo.value.predicate == "m ≥ 1"


def test_parametro_desconocido():
    """Test nombre fuera del esquema"""
    with pytest.raises(InvalidParameterError) as excinfo:
        resolve_params(get_entry("RECT"), {"zeta": 1})
    assert excinfo.value.predicate == "schema"


def test_q_toma_el_valor_de_p():
    """Test q sin valor usa p"""
    values = resolve_params(get_entry("B4"), {"p": Fraction(3, 2)})
    assert values["q"] == Fraction(3, 2)


# ========================================
# TESTS INSTANCIACIÓN
# ========================================

def test_instanciar_b1():
    """Test B1 en pesos (1, 2) con certificado"""
    bundle = instantiate("B1")
    data = bundle.to_json()

    assert bundle.weights == Weights(1, 2)
    assert data["certificate"] is not None
    assert data["metadata"]["classification"] == "DOP"


def test_instanciar_rectangulo():
    """Test RECT: pesos (1, 1) y det factorizado en cuatro rectas"""
    bundle = instantiate("RECT")
    assert bundle.weights == Weights(1, 1)
    assert len(bundle.det_factors) == 4
    assert bundle.domain.contains(0, 0)
    assert not bundle.domain.contains(2, 0)


def test_instanciar_b4_peso_infinito():
    """Test B4 con m = n = 2 usa (1, W) con W ≥ 3"""
    bundle = instantiate("B4", {"m": 2, "n": 2})
    assert bundle.weights.w1 == 1
    assert bundle.weights.w2 >= 3


def test_densidad_simbolica_b4():
    """Test p y q quedan como símbolos independientes"""
    bundle = instantiate("B4", {"m": 2, "n": 2}, symbolic_density=True)
    assert bundle.density.free_symbols == {sympy.Symbol("p"), sympy.Symbol("q")}


def test_b3_metadatos_de_reduccion():
    """Test α = 4β − 4 se reduce por cambio y β = 0 marca factor múltiple"""
    reducible = instantiate("B3", {"alpha": -4, "beta": 0}).metadata
    default = instantiate("B3").metadata

    assert reducible["reduction_unit_weights"]["kind"] == "change"
    assert reducible["reduction_unit_weights"]["change"] == "(x, y) -> (x, x^2 - y - 1)"
    assert reducible["multiple_factor"] is True
    assert default["reduction_unit_weights"]["reducible"] is False


def test_fila_de_grupo_de_reflexion():
    """Test B1 registra los ángulos 2, 3, 5"""
    data = get_entry("B1").to_json()
    assert data["reflection"]["angles"] == "2,3,5"
    assert get_entry("P53").to_json()["reflection"] is None


def test_bundle_json_ida_y_vuelta():
    """Test Bundle.from_json(to_json) reproduce el Bundle"""
    for entry_id in ("RECT", "B1"):
        bundle = instantiate(entry_id)
        assert Bundle.from_json(bundle.to_json()) == bundle


@pytest.mark.parametrize("item", _manifest_items(), ids=lambda it: it["entry"])
def test_rejilla_de_aceptacion(item):
    """Test cada elemento de la rejilla se instancia con (A1)-(A3)"""
    bundle = instantiate(item["entry"], item.get("params"))
    assert bundle.certificate is not None
    assert bundle.certificate.degree_ok


# ========================================
# TESTS PUNTOS SINGULARES
# ========================================

def test_puntos_singulares_b2():
    """Test tipos A1, A2, A5 sobre la frontera de B2"""
    labels = {pt.label for pt in singular_points("B2")}
    assert labels == {"A1", "A2", "A5"}


def test_puntos_singulares_no_disponibles():
    """Test entrada sin datos de puntos singulares"""
    with pytest.raises(PreconditionError):
        singular_points("P44.i")


def test_rectangulo_sin_puntos_singulares():
    """Test lista vacía para productos 1D"""
    assert singular_points("RECT") == []


# ========================================
# TESTS CURVATURA
# ========================================

def test_curvatura_b5_coincide_con_forma_cerrada():
    """Test B5 con n = 2, c02 = −1 en (1/2, 0)"""
    params = {"n": 2, "c02": -1}
    value = curvature("B5", params, (Fraction(1, 2), 0))
    assert value == Fraction(1, 2)
    assert value == closed_form_curvature("B5", params, (Fraction(1, 2), 0))


def test_curvatura_disco_esferico_convenciones():
    """Test B4 con m = n = 1: K = 2 con ½Δ_g y K = 1 con g⁻¹"""
    params = {"m": 1, "n": 1, "c02": -1}
    assert curvature("B4", params, (0, 0), "half_laplacian") == 2
    assert curvature("B4", params, (0, 0), "cometric_inverse") == 1


def test_curvatura_convencion_desconocida():
    """Test convención no soportada"""
    with pytest.raises(PreconditionError):
        curvature("B4", {"m": 1, "n": 1}, (0, 0), "ricci")


def test_curvatura_fuera_del_dominio():
    """Test punto fuera de Ω"""
    with pytest.raises(PreconditionError):
        curvature("B4", {"m": 1, "n": 1}, (5, 0))


# ========================================
# TESTS REALIZACIÓN
# ========================================

def test_mapa_de_realizacion_polo():
    """Test (z1, z2) = (1, 0) va a X = 1"""
    image = realization_map(1, 2, 1 + 0j, 0j)
    assert image["X"] == pytest.approx(1.0)
    assert image["x"] == pytest.approx(1.0)
    assert image["boundary_value"] == pytest.approx(0.0)


def test_mapa_fuera_de_la_esfera():
    """Test punto con |z|² ≠ 1"""
    with pytest.raises(PreconditionError):
        realization_map(1, 1, 1 + 0j, 1 + 0j)


def test_realizacion_halton():
    """Test la muestra cae en Ω̄ y toca la frontera"""
    result = realization_check(1, 2, count=200, seed=0)
    assert result["passed"] is True
    assert result["min_boundary_value"] >= -1e-12
