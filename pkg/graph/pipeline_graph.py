# graph/pipeline_graph.py
"""
Grafo del pipeline de lotes.
Cada elemento del manifiesto recorre Instanciar -> Verificar -> Densidad -> Espectral;
un fallo corta el recorrido del elemento y el circuit breaker corta el lote.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Annotated, Optional, TypedDict

from langgraph.graph import END, StateGraph

from config import CIRCUIT_BREAKER_MAX_FAILURES, CIRCUIT_BREAKER_MAX_VALIDATION, MANIFEST_PATH
from dopkit.density import has_constraint_table
from dopkit.poly import RatPoly2
from tools.dop_tools import (
    _analisis_espectral,
    _instanciar_entrada,
    _restricciones_integrabilidad,
    _verificar_metrica,
)

# Importar logger
try:
    from utils.logger import get_logger, log_system_event
    logger = get_logger('graph')
except ImportError:
    import logging
    logger = logging.getLogger('graph')

    def log_system_event(event_type, details, logger_name='system'):
        logger.info(f"[{event_type.upper()}] {details}")


# ========================================
# ESTADO DEL GRAFO
# ========================================

def _merge(left: dict, right: dict) -> dict:
    return {**(left or {}), **(right or {})}


class PipelineState(TypedDict, total=False):
    """Estado de un elemento del manifiesto."""
    item: dict
    bundle: Optional[dict]
    stages: Annotated[dict, _merge]
    next_node: str
    status: str
    error_types: dict


# ========================================
# HELPERS: DETECCIÓN DE ERRORES
# ========================================

def detect_error_type(result: dict) -> str:
    """
    Clasifica la salida de una tool.
    'validation' para entradas inválidas, 'tool_failure' para fallos de cálculo
    o informes con passed/satisfied en False.
    """
    if not isinstance(result, dict):
        return 'tool_failure'
    if 'error' in result:
        return result.get('error_type', 'tool_failure')
    if result.get('passed') is False or result.get('satisfied') is False:
        return 'tool_failure'
    return 'success'


def should_open_circuit(error_types: dict, error_count: int,
                        max_failures: int = CIRCUIT_BREAKER_MAX_FAILURES,
                        max_validation: int = CIRCUIT_BREAKER_MAX_VALIDATION) -> bool:
    """Determina si el circuit breaker debe activarse."""
    if error_types.get('tool_failure', 0) >= max_failures:
        logger.warning("🚨 Circuit breaker: Múltiples fallos de cálculo")
        return True

    if error_types.get('validation', 0) >= max_validation:
        logger.warning("🚨 Circuit breaker: Múltiples errores de validación")
        return True

    if error_count >= max_failures + max_validation:
        logger.warning("🚨 Circuit breaker: Límite total de errores alcanzado")
        return True

    return False


def params_to_text(params) -> Optional[str]:
    """{'m': 1, 'p': '1/2'} -> 'm=1,p=1/2' (orden del manifiesto)."""
    if not params:
        return None
    if isinstance(params, str):
        return params
    return ",".join(f"{k}={v}" for k, v in params.items())


def _step(state: PipelineState, name: str, result: dict, next_node: str, **extra) -> dict:
    kind = detect_error_type(result)
    update = {"stages": {name: result}, **extra}
    if kind == 'success':
        update["next_node"] = next_node
        return update
    logger.warning(f"⚠️ {state['item'].get('entry')} falla en {name}: {kind}")
    update.update({"next_node": "FINISH", "status": kind, "error_types": {kind: 1}})
    return update


# ========================================
# NODOS
# ========================================

def instantiate_node(state: PipelineState) -> dict:
    item = state["item"]
    result = _instanciar_entrada.invoke({
        "entry_id": item["entry"],
        "params": params_to_text(item.get("params")),
    })
    bundle = None if "error" in result else result
    summary = result if bundle is None else {
        "passed": result["passed"],
        "weights": result["weights"],
        "params": result["params"],
    }
    return _step(state, "instantiate", summary, "Verificar", bundle=bundle)


def verify_node(state: PipelineState) -> dict:
    bundle = state["bundle"]
    metric = bundle["metric"]
    result = _verificar_metrica.invoke({
        "a": RatPoly2.from_json(metric["a"]).to_text(),
        "b": RatPoly2.from_json(metric["b"]).to_text(),
        "c": RatPoly2.from_json(metric["c"]).to_text(),
        "boundary": [RatPoly2.from_json(f).to_text() for f in bundle["boundary"]["factors"]],
        "weights": ",".join(str(w) for w in bundle["weights"]),
    })
    return _step(state, "verify", result, "Densidad")


def density_node(state: PipelineState) -> dict:
    item = state["item"]
    following = "Espectral" if item.get("spectral") else "FINISH"
    if not has_constraint_table(item["entry"]):
        return {"stages": {"density": {"skipped": True}}, "next_node": following}
    result = _restricciones_integrabilidad.invoke({
        "entry_id": item["entry"],
        "params": params_to_text(item.get("params")),
    })
    return _step(state, "density", result, following)


def spectral_node(state: PipelineState) -> dict:
    item = state["item"]
    result = _analisis_espectral.invoke({
        "bundle": state["bundle"],
        "degree": int(item.get("degree", 6)),
        "order": int(item.get("order", 48)),
    })
    return _step(state, "spectral", result, "FINISH")


def build_pipeline_graph():
    """Construye el grafo de un elemento del manifiesto."""
    logger.info("🏗️ Construyendo grafo del pipeline...")
    workflow = StateGraph(PipelineState)

    nodes = {
        "Instanciar": instantiate_node,
        "Verificar": verify_node,
        "Densidad": density_node,
        "Espectral": spectral_node,
    }
    for name, node in nodes.items():
        workflow.add_node(name, node)

    workflow.set_entry_point("Instanciar")

    def conditional_router(state):
        dest = state.get("next_node")
        return dest if dest in nodes else "FINISH"

    for name in nodes:
        conditional_map = {other: other for other in nodes if other != name}
        conditional_map["FINISH"] = END
        workflow.add_conditional_edges(name, conditional_router, conditional_map)

    return workflow.compile()


# ========================================
# LOTES
# ========================================

def load_manifest(path=None) -> dict:
    """Lee el manifiesto JSON ({"defaults": {...}, "items": [...]})."""
    source = Path(path) if path else MANIFEST_PATH
    with open(source, encoding="utf-8") as handle:
        return json.load(handle)


def run_item(graph, item: dict) -> dict:
    final = graph.invoke({"item": item, "stages": {}, "status": "success", "error_types": {}})
    status = final.get("status", "success")
    return {
        "entry": item["entry"],
        "params": item.get("params") or {},
        "status": status,
        "passed": status == "success",
        "stages": final.get("stages", {}),
    }


def run_batch(manifest: dict, threads: int = 1, spectral: Optional[bool] = None) -> dict:
    """
    Ejecuta el manifiesto por tandas de `threads` elementos.
    El orden de los resultados es el del manifiesto; el circuit breaker se
    evalúa al cerrar cada tanda, también en ese orden.
    """
    defaults = manifest.get("defaults", {})
    items = []
    for raw in manifest.get("items", []):
        item = {**defaults, **raw}
        if spectral is not None:
            item["spectral"] = spectral
        items.append(item)

    graph = build_pipeline_graph()
    results: list[dict] = []
    error_types: dict = {}
    error_count = 0
    circuit_open = False
    size = max(1, threads)
    logger.info(f"🔧 Lote de {len(items)} elementos con {size} hilos")

    with ThreadPoolExecutor(max_workers=size) as pool:
        for start in range(0, len(items), size):
            chunk = items[start:start + size]
            if circuit_open:
                results.extend({"entry": it["entry"], "params": it.get("params") or {},
                                "status": "skipped", "passed": False, "stages": {}} for it in chunk)
                continue
            for outcome in pool.map(lambda it: run_item(graph, it), chunk):
                results.append(outcome)
                if outcome["status"] != "success":
                    error_count += 1
                    error_types[outcome["status"]] = error_types.get(outcome["status"], 0) + 1
                log_system_event("batch_item", {"entry": outcome["entry"], "status": outcome["status"]},
                                 logger_name='graph')
            if should_open_circuit(error_types, error_count):
                logger.error("⛔ Circuit breaker ACTIVADO - se omiten los elementos restantes")
                circuit_open = True

    passed = sum(1 for r in results if r["passed"])
    summary = {
        "count": len(results),
        "passed_count": passed,
        "failed_count": len(results) - passed,
        "error_types": error_types,
        "circuit_open": circuit_open,
        "passed": passed == len(results),
        "items": results,
    }
    logger.info(f"✅ Lote terminado: {passed}/{len(results)}")
    return summary
