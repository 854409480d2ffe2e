"""
Tests del pipeline de lotes sobre LangGraph.
Clasificación de errores, circuit breaker y orden de resultados.
"""

from graph import pipeline_graph
from graph.pipeline_graph import (
    build_pipeline_graph, detect_error_type, load_manifest, params_to_text,
    run_batch, run_item, should_open_circuit,
)


# ========================================
# TESTS HELPERS
# ========================================

def test_detect_error_type():
    """Test clasificación de salidas de tools"""
    assert detect_error_type({"error": "x", "error_type": "validation"}) == "validation"
    assert detect_error_type({"error": "x"}) == "tool_failure"
    assert detect_error_type({"passed": False}) == "tool_failure"
    assert detect_error_type({"satisfied": False}) == "tool_failure"
    assert detect_error_type({"passed": True}) == "success"
    assert detect_error_type("texto") == "tool_failure"


def test_circuit_breaker_por_fallos():
    """Test umbral de fallos de cálculo"""
    assert should_open_circuit({"tool_failure": 2}, 2, max_failures=2, max_validation=5)
    assert not should_open_circuit({"tool_failure": 1}, 1, max_failures=2, max_validation=5)


def test_circuit_breaker_por_validacion():
    """Test umbral de errores de validación"""
    assert should_open_circuit({"validation": 3}, 3, max_failures=5, max_validation=3)


def test_circuit_breaker_total():
    """Test límite total de errores"""
    assert should_open_circuit({"tool_failure": 1, "validation": 2}, 5, max_failures=2, max_validation=3) is True
    assert should_open_circuit({}, 4, max_failures=2, max_validation=2) is True


def test_params_to_text():
    """Test dict de parámetros a texto de asignaciones"""
    assert params_to_text({"m": 1, "p": "1/2"}) == "m=1,p=1/2"
    assert params_to_text(None) is None
    assert params_to_text("n=2") == "n=2"


# ========================================
# TESTS GRAFO
# ========================================

def test_elemento_correcto_recorre_etapas():
    """Test RECT pasa instanciar, verificar y densidad"""
    graph = build_pipeline_graph()
    outcome = run_item(graph, {"entry": "RECT"})

    assert outcome["status"] == "success"
    assert set(outcome["stages"]) == {"instantiate", "verify", "density"}


def test_elemento_con_etapa_espectral():
    """Test RECT con espectral de grado 2"""
    graph = build_pipeline_graph()
    outcome = run_item(graph, {"entry": "RECT", "spectral": True, "degree": 2, "order": 8})

    assert outcome["passed"] is True
    assert outcome["stages"]["spectral"]["passed"] is True


def test_elemento_no_integrable():
    """Test B1 con p = 1/4 falla en la etapa de densidad"""
    graph = build_pipeline_graph()
    outcome = run_item(graph, {"entry": "B1", "params": {"p": "1/4"}})

    assert outcome["status"] == "tool_failure"
    assert outcome["stages"]["density"]["satisfied"] is False


def test_entrada_sin_tabla_omite_densidad():
    """Test P53 sin tabla de integrabilidad"""
    graph = build_pipeline_graph()
    outcome = run_item(graph, {"entry": "P53"})

    assert outcome["passed"] is True
    assert outcome["stages"]["density"] == {"skipped": True}


# ========================================
# TESTS LOTES
# ========================================

def test_lote_pequeno():
    """Test un elemento válido y uno desconocido"""
    manifest = {"items": [{"entry": "RECT"}, {"entry": "Z99"}]}
    summary = run_batch(manifest)

    assert summary["count"] == 2
    assert summary["passed_count"] == 1
    assert summary["error_types"] == {"validation": 1}
    assert summary["circuit_open"] is False
    assert [r["entry"] for r in summary["items"]] == ["RECT", "Z99"]


def test_lote_con_circuit_breaker(monkeypatch):
    """Test tras el primer fallo se omiten las tandas siguientes"""
    monkeypatch.setattr(pipeline_graph, "should_open_circuit", lambda types, count: count >= 1)
    manifest = {"items": [{"entry": "Z99"}, {"entry": "RECT"}, {"entry": "RECT"}]}
    summary = run_batch(manifest)

    assert summary["circuit_open"] is True
    assert [r["status"] for r in summary["items"]] == ["validation", "skipped", "skipped"]
    assert summary["passed"] is False


def test_lote_con_hilos_conserva_orden():
    """Test tandas de dos elementos en orden del manifiesto"""
    manifest = {"items": [{"entry": "Z99"}, {"entry": "RECT"}, {"entry": "P53"}]}
    summary = run_batch(manifest, threads=2)

    assert [r["entry"] for r in summary["items"]] == ["Z99", "RECT", "P53"]
    assert summary["passed_count"] == 2


def test_manifiesto_por_defecto():
    """Test la rejilla incluida tiene valores por defecto y elementos"""
    manifest = load_manifest()
    assert manifest["defaults"]["degree"] == 6
    assert len(manifest["items"]) > 50
