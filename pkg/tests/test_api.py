"""
Tests de la API FastAPI con TestClient.
Errores de validación -> 400, fallos de cálculo -> 422.
"""

import pytest
from fastapi.testclient import TestClient

from api import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


# ========================================
# TESTS SALUD
# ========================================

def test_health(client):
    """Test endpoint de salud"""
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "online"


def test_help(client):
    """Test guía de uso"""
    response = client.get("/help")
    assert response.status_code == 200
    assert "catalog" in response.json()["guide"]


# ========================================
# TESTS CATÁLOGO
# ========================================

def test_catalogo(client):
    """Test listado de entradas"""
    response = client.get("/catalog")
    assert response.status_code == 200
    assert any(e["id"] == "B1" for e in response.json()["entries"])


def test_catalogo_entrada(client):
    """Test descripción de B1"""
    response = client.get("/catalog/B1")
    assert response.status_code == 200
    assert response.json()["classification"] == "DOP"


def test_catalogo_entrada_desconocida(client):
    """Test 400 para id inexistente"""
    response = client.get("/catalog/Z99/instantiate")
    assert response.status_code == 400
    assert response.json()["detail"]["error_type"] == "validation"


def test_catalogo_instanciar(client):
    """Test bundle certificado de B4"""
    response = client.get("/catalog/B4/instantiate", params={"params": "m=1,n=1"})
    assert response.status_code == 200
    assert response.json()["passed"] is True


def test_integrabilidad(client):
    """Test B2 con p = q = 1/2"""
    response = client.get("/integrability/B2", params={"params": "p=1/2,q=1/2"})
    assert response.status_code == 200
    assert response.json()["satisfied"] is True


def test_curvatura(client):
    """Test K = 2 en el centro del disco esférico"""
    response = client.get("/curvature/B4", params={"x": "0", "y": "0", "params": "m=1,n=1"})
    assert response.status_code == 200
    assert response.json()["curvature"] == "2"


def test_realizacion(client):
    """Test muestra corta de Halton"""
    response = client.get("/realization", params={"m": 1, "n": 2, "count": 50})
    assert response.status_code == 200
    assert response.json()["passed"] is True


# ========================================
# TESTS ALGDOP
# ========================================

def test_verify(client):
    """Test el cuadrado cumple (A1)-(A3)"""
    response = client.post("/verify", json={
        "a": "1 - x^2", "b": "0", "c": "1 - y^2",
        "boundary": ["1 - x^2", "1 - y^2"], "weights": "1,1",
    })
    assert response.status_code == 200
    assert response.json()["passed"] is True


def test_verify_texto_invalido(client):
    """Test 400 con la posición del error"""
    response = client.post("/verify", json={
        "a": "x/y", "b": "0", "c": "1", "boundary": ["x"], "weights": "1,1",
    })
    assert response.status_code == 400
    assert response.json()["detail"]["position"] == 1


def test_verify_cuerpo_incompleto(client):
    """Test 422 de FastAPI sin campos requeridos"""
    response = client.post("/verify", json={"a": "1"})
    assert response.status_code == 422


def test_density_caso_no_codificado(client):
    """Test 422 para det g con factores múltiples"""
    response = client.post("/density", json={
        "a": "x^2", "b": "0", "c": "1", "boundary": ["x"], "weights": "1,1",
    })
    assert response.status_code == 422


# ========================================
# TESTS PIPELINE
# ========================================

def test_pipeline_manifiesto_propio(client):
    """Test lote pequeño enviado en el cuerpo"""
    response = client.post("/pipeline", json={"manifest": {"items": [{"entry": "RECT"}, {"entry": "P53"}]}})
    data = response.json()

    assert response.status_code == 200
    assert data["count"] == 2
    assert data["passed"] is True
