"""
Tests de la línea de comandos: JSON en stdout, resumen en stderr y
códigos de salida 0 (correcto), 1 (fallo matemático), 2 (error de uso).
"""

import json

import pytest

import cli


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def cuadrado(tmp_path):
    """Archivos de g = diag(1 − x², 1 − y²) y Γ = (1 − x²)(1 − y²)"""
    metric = _write(tmp_path, "g.json", {"a": "1 - x^2", "b": "0", "c": "1 - y^2"})
    boundary = _write(tmp_path, "gamma.json", {"factors": ["1 - x^2", "1 - y^2"]})
    return metric, boundary


# ========================================
# TESTS VERIFY
# ========================================

def test_verify_correcto(cuadrado, capsys):
    """Test exit 0 y JSON con passed"""
    metric, boundary = cuadrado
    code = cli.main(["verify", "--metric", metric, "--boundary", boundary, "--weights", "1,1"])
    report = json.loads(capsys.readouterr().out)

    assert code == cli.EXIT_OK
    assert report["passed"] is True


def test_verify_fallo_matematico(tmp_path, capsys):
    """Test exit 1 cuando Γ no divide a det g"""
    metric = _write(tmp_path, "g.json", {"a": "1", "b": "0", "c": "1"})
    boundary = _write(tmp_path, "gamma.json", ["1 - x^2 - y^2"])
    code = cli.main(["verify", "--metric", metric, "--boundary", boundary, "--weights", "1,1"])

    assert code == cli.EXIT_FAILED
    assert json.loads(capsys.readouterr().out)["reason"] == "Γ no divide a det g"


def test_verify_sin_metrica(cuadrado):
    """Test falta --metric"""
    _, boundary = cuadrado
    assert cli.main(["verify", "--boundary", boundary]) == cli.EXIT_USAGE


def test_verify_archivo_inexistente(tmp_path):
    """Test ruta que no existe"""
    missing = str(tmp_path / "no.json")
    assert cli.main(["verify", "--metric", missing, "--boundary", missing]) == cli.EXIT_USAGE


def test_salida_a_archivo(cuadrado, tmp_path):
    """Test -o escribe el JSON en disco"""
    metric, boundary = cuadrado
    out = tmp_path / "report.json"
    code = cli.main(["verify", "--metric", metric, "--boundary", boundary, "--weights", "1,1", "-o", str(out)])

    assert code == cli.EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["passed"] is True


def test_config_json(cuadrado, tmp_path):
    """Test --config con las mismas claves que los flags"""
    metric, boundary = cuadrado
    config = _write(tmp_path, "run.json", {"metric": metric, "boundary": boundary, "weights": "1,1"})
    assert cli.main(["verify", "--config", config]) == cli.EXIT_OK


def test_config_con_clave_desconocida(tmp_path):
    """Test claves fuera del esquema"""
    config = _write(tmp_path, "run.json", {"zeta": 1})
    assert cli.main(["verify", "--config", config]) == cli.EXIT_USAGE


def test_subcomando_desconocido():
    """Test argparse rechaza el subcomando"""
    assert cli.main(["frobnicate"]) == cli.EXIT_USAGE


# ========================================
# TESTS SOLVE-METRIC / DENSITY / BRANCH-CHECK
# ========================================

def test_solve_metric(tmp_path, capsys):
    """Test dimensión 12 para Γ = x en w = (1, 1)"""
    boundary = _write(tmp_path, "gamma.json", ["x"])
    code = cli.main(["solve-metric", "--boundary", boundary, "--weights", "1,1"])

    assert code == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["dimension"] == 12


def test_density(tmp_path, capsys):
    """Test familia del cuadrado con factores lineales"""
    metric = _write(tmp_path, "g.json", {"a": "1 - x^2", "b": "0", "c": "1 - y^2"})
    boundary = _write(tmp_path, "gamma.json", ["1 - x", "1 + x", "1 - y", "1 + y"])
    code = cli.main(["density", "--metric", metric, "--boundary", boundary, "--weights", "1,1"])

    assert code == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["dimension"] == 4


def test_branch_check_no_tangente(tmp_path, capsys):
    """Test la identidad falla la tangencia: exit 1"""
    metric = _write(tmp_path, "g.json", {"a": "1", "b": "0", "c": "1"})
    germ = _write(tmp_path, "germ.json", {"xi": "t^2", "eta": "t^3"})
    code = cli.main(["branch-check", "--metric", metric, "--germ", germ, "--trunc-order", "16"])
    result = json.loads(capsys.readouterr().out)

    assert code == cli.EXIT_FAILED
    assert result["tangency"] is False
    assert result["valuation_balance"] == "inconclusive"


# ========================================
# TESTS CATALOG
# ========================================

def test_catalog_list(capsys):
    """Test listado en JSON"""
    assert cli.main(["catalog", "list"]) == cli.EXIT_OK
    ids = [e["id"] for e in json.loads(capsys.readouterr().out)["entries"]]
    assert "B1" in ids


def test_catalog_show(capsys):
    """Test descripción de B4"""
    assert cli.main(["catalog", "show", "B4"]) == cli.EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["classification"] == "DOP"


def test_catalog_instantiate(capsys):
    """Test bundle certificado de B2"""
    assert cli.main(["catalog", "instantiate", "B2", "--params", "p=1/2,q=1/2"]) == cli.EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["weights"] == [1, 2]
    assert data["certificate"] is not None


def test_catalog_predicado_violado(capsys):
    """Test α ≥ 0 en B3: exit 2 y resumen en stderr"""
    code = cli.main(["catalog", "instantiate", "B3", "--params", "alpha=1"])
    captured = capsys.readouterr()

    assert code == cli.EXIT_USAGE
    assert captured.out == ""
    assert "α < 0" in captured.err


def test_catalog_parametros_mal_formados():
    """Test asignación sin '='"""
    assert cli.main(["catalog", "instantiate", "B4", "--params", "m1"]) == cli.EXIT_USAGE


def test_catalog_entrada_desconocida():
    """Test id inexistente"""
    assert cli.main(["catalog", "show", "Z99"]) == cli.EXIT_USAGE


# ========================================
# TESTS CURVATURA / INTEGRABILIDAD / REALIZACIÓN
# ========================================

def test_curvature_b5(capsys):
    """Test K = 1/2 en (1/2, 0)"""
    code = cli.main(["curvature", "B5", "--params", "n=2,c02=-1", "--point", "1/2,0"])
    data = json.loads(capsys.readouterr().out)

    assert code == cli.EXIT_OK
    assert data["curvature"] == "1/2"
    assert data["closed_form"] == "1/2"


def test_curvature_punto_mal_formado():
    """Test punto con tres coordenadas"""
    assert cli.main(["curvature", "B5", "--point", "1,2,3"]) == cli.EXIT_USAGE


def test_integrability(capsys):
    """Test B1 con p = 1/4 no es integrable: exit 1"""
    code = cli.main(["integrability", "B1", "--params", "p=1/4"])
    assert code == cli.EXIT_FAILED
    assert json.loads(capsys.readouterr().out)["satisfied"] is False


def test_realization(capsys):
    """Test muestra de Halton de (m, n) = (1, 2)"""
    code = cli.main(["realization", "--m", "1", "--n", "2", "--count", "100"])
    assert code == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["passed"] is True


# ========================================
# TESTS SPECTRAL
# ========================================

def test_spectral_rectangulo_con_csv(tmp_path, capsys):
    """Test RECT en grado 2 con CSV de nodos y autovalores"""
    nodes = tmp_path / "nodes.csv"
    eigen = tmp_path / "eigen.csv"
    code = cli.main([
        "spectral", "--entry", "RECT", "--degree", "2", "--order", "9",
        "--nodes-csv", str(nodes), "--eigen-csv", str(eigen),
    ])
    result = json.loads(capsys.readouterr().out)

    assert code == cli.EXIT_OK
    assert result["passed"] is True
    assert result["self_convergence"]["orders"] == [6, 9]
    assert nodes.read_text(encoding="utf-8").splitlines()[0] == "x,y,weight"
    assert eigen.read_text(encoding="utf-8").startswith("index,degree,eigenvalue")


def test_spectral_desde_bundle(tmp_path, capsys):
    """Test catalog instantiate | spectral --bundle"""
    out = tmp_path / "bundle.json"
    assert cli.main(["catalog", "instantiate", "RECT", "-o", str(out)]) == cli.EXIT_OK
    code = cli.main(["spectral", "--bundle", str(out), "--degree", "1", "--order", "6"])

    assert code == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["entry"] == "RECT"


def test_spectral_sin_objetivo():
    """Test sin --bundle ni --entry"""
    assert cli.main(["spectral"]) == cli.EXIT_USAGE
