# api.py
"""
dopkit API
- Las mismas operaciones que la CLI, vía las tools de LangChain
- /pipeline ejecuta el manifiesto con el grafo LangGraph
"""

import uvicorn
from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware

from config import API_HOST, API_PORT
from graph.pipeline_graph import load_manifest, run_batch
from tools.dop_tools import (
    _analisis_espectral,
    _calcular_curvatura,
    _calcular_densidad,
    _instanciar_entrada,
    _listar_catalogo,
    _mapa_realizacion,
    _mostrar_entrada,
    _resolver_metrica,
    _restricciones_integrabilidad,
    _verificar_metrica,
    _verificar_rama,
)
from tools.help_tools import GUIA_DE_USO
from tools.schemas import (
    DensidadInput,
    EspectralInput,
    PipelineInput,
    RamaInput,
    ResolverMetricaInput,
    VerificarMetricaInput,
)

# Importar logger
try:
    from utils.logger import get_logger
    logger = get_logger('api')
except ImportError:
    import logging
    logger = logging.getLogger('api')

VERSION = "1.0.0"

# Inicializar FastAPI
app = FastAPI(
    title="dopkit",
    version=VERSION,
    description="Herramientas exactas y numéricas para polinomios ortogonales de difusión en 2D"
)

# CORS para permitir requests del frontend
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],  # En producción, especificar dominios
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _responder(result: dict) -> dict:
    """Errores de tool -> HTTP: validation 400, tool_failure 422."""
    if isinstance(result, dict) and "error" in result:
        status = 400 if result.get("error_type") == "validation" else 422
        raise HTTPException(status_code=status, detail=result)
    return result


# --- ENDPOINT DE SALUD ---
@app.get("/")
@app.get("/health")
def health_check():
    return {"status": "online", "service": "dopkit", "version": VERSION}


@app.get("/help")
def help_endpoint():
    return {"guide": GUIA_DE_USO}


# --- ALGDOP ---
@app.post("/verify")
def verify_endpoint(body: VerificarMetricaInput):
    return _responder(_verificar_metrica.invoke(body.model_dump()))


@app.post("/solve-metric")
def solve_metric_endpoint(body: ResolverMetricaInput):
    return _responder(_resolver_metrica.invoke(body.model_dump()))


@app.post("/density")
def density_endpoint(body: DensidadInput):
    return _responder(_calcular_densidad.invoke(body.model_dump()))


@app.post("/branch-check")
def branch_endpoint(body: RamaInput):
    return _responder(_verificar_rama.invoke(body.model_dump()))


# --- CATÁLOGO ---
@app.get("/catalog")
def catalog_list():
    return _responder(_listar_catalogo.invoke({}))


@app.get("/catalog/{entry_id}")
def catalog_show(entry_id: str):
    return _responder(_mostrar_entrada.invoke({"entry_id": entry_id}))


@app.get("/catalog/{entry_id}/instantiate")
def catalog_instantiate(
    entry_id: str,
    params: str = Query(None, description="Asignaciones 'm=1,n=2'"),
    symbolic_density: bool = Query(False, description="Exponentes simbólicos"),
):
    return _responder(_instanciar_entrada.invoke(
        {"entry_id": entry_id, "params": params, "symbolic_density": symbolic_density}))


@app.get("/integrability/{entry_id}")
def integrability_endpoint(entry_id: str, params: str = Query(None, description="Asignaciones 'p=1/2'")):
    return _responder(_restricciones_integrabilidad.invoke({"entry_id": entry_id, "params": params}))


@app.get("/curvature/{entry_id}")
def curvature_endpoint(
    entry_id: str,
    x: str = Query(..., description="Abscisa racional"),
    y: str = Query(..., description="Ordenada racional"),
    params: str = Query(None, description="Asignaciones 'n=2,c02=-1'"),
    convention: str = Query("half_laplacian", description="half_laplacian | cometric_inverse"),
):
    return _responder(_calcular_curvatura.invoke(
        {"entry_id": entry_id, "x": x, "y": y, "params": params, "convention": convention}))


@app.get("/realization")
def realization_endpoint(
    m: int = Query(..., ge=1),
    n: int = Query(..., ge=1),
    count: int = Query(1000, ge=1, le=100000),
    seed: int = Query(0, ge=0),
):
    return _responder(_mapa_realizacion.invoke({"m": m, "n": n, "count": count, "seed": seed}))


# --- ESPECTRAL ---
@app.post("/spectral")
def spectral_endpoint(body: EspectralInput):
    return _responder(_analisis_espectral.invoke(body.model_dump()))


# --- PIPELINE ---
@app.post("/pipeline")
def pipeline_endpoint(body: PipelineInput):
    try:
        manifest = body.manifest if body.manifest is not None else load_manifest()
        return run_batch(manifest, threads=body.threads, spectral=body.spectral)
    except (OSError, ValueError, KeyError) as e:
        logger.error(f"❌ Error en pipeline: {type(e).__name__} - {e}")
        raise HTTPException(status_code=400, detail=str(e))


# Configuración para ejecución local
if __name__ == "__main__":
    uvicorn.run(app, host=API_HOST, port=API_PORT)
