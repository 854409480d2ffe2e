# tools/dop_tools.py
"""
Herramientas del toolkit como tools de LangChain.
Cada tool envuelve una operación del kernel, registra inicio y fin, y nunca
lanza: los fallos vuelven como {"error": ..., "error_type": ...}.
"""

from fractions import Fraction
from typing import List, Optional

from langchain_core.tools import tool

from dopkit.algdop import BoundarySpec, Cometric, solve_metric, verify
from dopkit.branches import BranchGerm, check_tangency, check_valuation_balance, newton_consistency
from dopkit.catalog import (
    Bundle,
    closed_form_curvature,
    curvature,
    get_entry,
    instantiate,
    list_entries,
    parse_assignments,
    realization_check,
)
from dopkit.density import density_family, integrability_constraints
from dopkit.errors import DopkitError, InvalidParameterError, PolyParseError, PreconditionError
from dopkit.poly import RatPoly2, Weights, divides, format_fraction, to_fraction
from dopkit.spectral import spectral_report

# Importar schemas
from .schemas import (
    CurvaturaInput, DensidadInput, EntradaInput, EspectralInput, InstanciarInput,
    IntegrabilidadInput, RamaInput, RealizacionInput, ResolverMetricaInput, VerificarMetricaInput,
)

# Importar logger
try:
    from utils.logger import get_logger, log_system_event
    logger = get_logger('tools')
except ImportError:
    import logging
    logger = logging.getLogger('tools')

    def log_system_event(event_type, details, logger_name='system'):
        logger.info(f"[{event_type.upper()}] {details}")


# ========================================
# AUXILIARES
# ========================================

def _fallo(operacion: str, e: Exception) -> dict:
    """Traduce una excepción al dict de error de las tools."""
    if isinstance(e, DopkitError):
        error_type = e.error_type
    elif isinstance(e, (ValueError, TypeError, ZeroDivisionError)):
        # Entradas mal formadas que no pasan por el kernel (pesos, racionales)
        error_type = "validation"
    else:
        error_type = "tool_failure"
    logger.error(f"❌ Error en {operacion}: {type(e).__name__} - {e}")
    log_system_event("error", {"tool": operacion, "error_type": error_type}, logger_name='tools')
    result = {"error": f"{type(e).__name__}: {e}", "error_type": error_type}
    if isinstance(e, InvalidParameterError) and e.predicate:
        result["predicate"] = e.predicate
    if isinstance(e, PolyParseError):
        result["position"] = e.position
    return result


def _boundary(factors: List[str]) -> BoundarySpec:
    return BoundarySpec(tuple(RatPoly2.parse(f) for f in factors))


def _texto(value) -> Optional[str]:
    if value is None:
        return None
    if isinstance(value, Fraction):
        return format_fraction(value)
    return str(value)


# ========================================
# ALGDOP
# ========================================

@tool("verificar_metrica", args_schema=VerificarMetricaInput)
def _verificar_metrica(a: str, b: str, c: str, boundary: List[str], weights: str = "1,2") -> dict:
    """Comprueba (A1)-(A3) para (g, Γ, w) y devuelve el certificado de cofactores."""
    logger.info(f"🔧 Verificando métrica: Γ con {len(boundary)} factores, w={weights}")
    try:
        report = verify(Cometric.parse(a, b, c), _boundary(boundary), Weights.parse(weights))
        logger.info(f"✅ Verificación: passed={report['passed']}")
        return report
    except Exception as e:
        return _fallo("verificar_metrica", e)


@tool("resolver_metrica", args_schema=ResolverMetricaInput)
def _resolver_metrica(boundary: List[str], weights: str = "1,2", only_nondegenerate: bool = False) -> dict:
    """Base exacta de cométricas g con Γ | (g·∇Γ) dentro de las cajas de grado (A1)."""
    logger.info(f"🔧 Resolviendo métricas para Γ con {len(boundary)} factores, w={weights}")
    try:
        gamma = _boundary(boundary)
        solutions = solve_metric(gamma, Weights.parse(weights))
        items = []
        for sol in solutions:
            data = sol.to_json()
            delta = sol.metric.det
            data["a2"] = bool(not delta.is_zero and divides(gamma.product, delta) is not None)
            items.append(data)
        if only_nondegenerate:
            items = [item for item in items if item["a2"]]
        logger.info(f"✅ Espacio de soluciones de dimensión {len(solutions)}")
        return {"dimension": len(solutions), "solutions": items}
    except Exception as e:
        return _fallo("resolver_metrica", e)


# ========================================
# DENSIDAD
# ========================================

@tool("calcular_densidad", args_schema=DensidadInput)
def _calcular_densidad(
    a: str,
    b: str,
    c: str,
    boundary: List[str],
    weights: str = "1,2",
    extra_factors: Optional[List[str]] = None,
    allow_multiple: bool = False,
    at: Optional[str] = None,
) -> dict:
    """Familia de densidades ρ = ∏Γ_k^{p_k−1}·exp(Q) compatibles con g."""
    logger.info(f"🔧 Calculando familia de densidades, w={weights}")
    try:
        family = density_family(
            Cometric.parse(a, b, c),
            _boundary(boundary),
            Weights.parse(weights),
            extra_factors=tuple(RatPoly2.parse(f) for f in extra_factors or ()),
            allow_multiple=allow_multiple,
        )
        result = {"family": family.to_json(), "dimension": len(family.parameters)}
        if at:
            result["instance"] = family.instantiate(parse_assignments(at)).to_json()
        logger.info(f"✅ Familia con {len(family.parameters)} parámetros")
        return result
    except Exception as e:
        return _fallo("calcular_densidad", e)


@tool("restricciones_integrabilidad", args_schema=IntegrabilidadInput)
def _restricciones_integrabilidad(entry_id: str, params: Optional[str] = None) -> dict:
    """Desigualdades de integrabilidad de ρ para una entrada del catálogo."""
    logger.info(f"🔧 Integrabilidad de {entry_id} en {params}")
    try:
        report = integrability_constraints(entry_id, parse_assignments(params))
        logger.info(f"✅ Integrabilidad {entry_id}: satisfied={report['satisfied']}")
        return report
    except Exception as e:
        return _fallo("restricciones_integrabilidad", e)


# ========================================
# RAMAS
# ========================================

@tool("verificar_rama", args_schema=RamaInput)
def _verificar_rama(
    a: str, b: str, c: str, xi: str, eta: str, trunc_order: int = 64, gamma: Optional[str] = None,
) -> dict:
    """Condición de tangencia y de valoraciones de g sobre la rama (ξ(t), η(t))."""
    logger.info(f"🔧 Verificando rama ({xi}, {eta}) con N={trunc_order}")
    try:
        g = Cometric.parse(a, b, c)
        germ = BranchGerm.parse(xi, eta, trunc_order)
        tangency = check_tangency(germ, g)
        try:
            valuations = check_valuation_balance(germ, g)
        except PreconditionError as e:
            logger.warning(f"⚠️ Valoraciones no aplicables: {e}")
            valuations = None
        result = {
            "germ": germ.to_json(),
            "tangency": tangency,
            "valuation_balance": valuations,
            "newton": newton_consistency(germ, RatPoly2.parse(gamma)) if gamma else None,
            "passed": tangency is True,
        }
        logger.info(f"✅ Rama: tangencia={tangency}, valoraciones={valuations}")
        return result
    except Exception as e:
        return _fallo("verificar_rama", e)


# ========================================
# CATÁLOGO
# ========================================

@tool("listar_catalogo")
def _listar_catalogo() -> dict:
    """Lista las entradas del catálogo de soluciones."""
    logger.info("🔧 Listando catálogo")
    try:
        entries = list_entries()
        logger.info(f"✅ {len(entries)} entradas")
        return {"entries": entries}
    except Exception as e:
        return _fallo("listar_catalogo", e)


@tool("mostrar_entrada", args_schema=EntradaInput)
def _mostrar_entrada(entry_id: str) -> dict:
    """Describe una entrada: parámetros, predicados, clasificación y tabla de reflexión."""
    logger.info(f"🔧 Mostrando entrada {entry_id}")
    try:
        return get_entry(entry_id).to_json()
    except Exception as e:
        return _fallo("mostrar_entrada", e)


@tool("instanciar_entrada", args_schema=InstanciarInput)
def _instanciar_entrada(entry_id: str, params: Optional[str] = None, symbolic_density: bool = False) -> dict:
    """Construye y certifica el bundle (w, g, Γ, Ω, ρ) de una entrada del catálogo."""
    logger.info(f"🔧 Instanciando {entry_id} con {params}")
    try:
        bundle = instantiate(entry_id, parse_assignments(params), symbolic_density=symbolic_density)
        data = bundle.to_json()
        data["passed"] = data["certificate"] is not None
        logger.info(f"✅ Bundle {entry_id} certificado")
        return data
    except Exception as e:
        return _fallo("instanciar_entrada", e)


@tool("calcular_curvatura", args_schema=CurvaturaInput)
def _calcular_curvatura(
    entry_id: str, x: str, y: str, params: Optional[str] = None, convention: str = "half_laplacian",
) -> dict:
    """Curvatura de Gauss exacta de la métrica de una entrada en un punto racional de Ω."""
    logger.info(f"🔧 Curvatura de {entry_id} en ({x}, {y}), convención {convention}")
    try:
        values = parse_assignments(params)
        point = (to_fraction(x), to_fraction(y))
        value = curvature(entry_id, values, point, convention)
        closed = None
        if convention == "half_laplacian" and entry_id in ("B4", "B5"):
            try:
                closed = closed_form_curvature(entry_id, values, point)
            except PreconditionError:
                closed = None
        logger.info(f"✅ K = {value}")
        return {
            "entry": entry_id,
            "point": [_texto(point[0]), _texto(point[1])],
            "convention": convention,
            "curvature": _texto(value),
            "closed_form": _texto(closed),
        }
    except Exception as e:
        return _fallo("calcular_curvatura", e)


@tool("mapa_realizacion", args_schema=RealizacionInput)
def _mapa_realizacion(m: int, n: int, count: int = 1000, seed: int = 0) -> dict:
    """Imagen de puntos de Halton de S³ por el mapa de realización de B4."""
    logger.info(f"🔧 Realización (m, n) = ({m}, {n}), {count} puntos")
    try:
        return realization_check(m, n, count, seed)
    except Exception as e:
        return _fallo("mapa_realizacion", e)


# ========================================
# ESPECTRAL
# ========================================

@tool("analisis_espectral", args_schema=EspectralInput)
def _analisis_espectral(
    entry_id: Optional[str] = None,
    params: Optional[str] = None,
    bundle: Optional[dict] = None,
    degree: int = 6,
    order: int = 48,
    threads: int = 1,
    symmetry_tol: float = 1e-8,
    gram_tol: float = 1e-8,
    imag_tol: float = 1e-9,
) -> dict:
    """Invariancia de la filtración, simetría de L, residuo de Gram y autovalores."""
    logger.info(f"🔧 Análisis espectral: {entry_id or 'bundle'}, grado {degree}, orden {order}")
    try:
        if bundle is not None:
            target = Bundle.from_json(bundle)
        elif entry_id:
            target = instantiate(entry_id, parse_assignments(params))
        else:
            raise InvalidParameterError("Se requiere entry_id o bundle", predicate="schema")
        result, _, _ = spectral_report(target, degree, order, threads,
                                       symmetry_tol=symmetry_tol, gram_tol=gram_tol, imag_tol=imag_tol)
        logger.info(f"✅ Espectral {target.entry_id}: passed={result['passed']}")
        return result
    except Exception as e:
        return _fallo("analisis_espectral", e)


# ========================================
# LISTA EXPORTABLE
# ========================================

dop_tool_list = [
    # AlgDOP
    _verificar_metrica,
    _resolver_metrica,
    # Densidad
    _calcular_densidad,
    _restricciones_integrabilidad,
    # Ramas
    _verificar_rama,
    # Catálogo
    _listar_catalogo,
    _mostrar_entrada,
    _instanciar_entrada,
    _calcular_curvatura,
    _mapa_realizacion,
    # Espectral
    _analisis_espectral,
]

logger.info(f"✅ Módulo dop_tools cargado ({len(dop_tool_list)} herramientas)")
