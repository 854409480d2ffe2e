# tools/schemas.py
"""
Schemas pydantic de las herramientas y de la configuración de ejecución.
Polinomios y racionales viajan como texto ("x^2 - y", "3/10") para no perder exactitud.
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config import (
    DEGREE, GRAM_TOL, IMAG_TOL, QUAD_ORDER, SEED, SELF_CONVERGENCE_TOL, SYMMETRY_TOL, THREADS, TRUNC_ORDER,
)
from dopkit.catalog import parse_assignments
from dopkit.poly import Weights

# ========================================
# BLOQUES COMUNES
# ========================================


class MetricaInput(BaseModel):
    """Cométrica g = [[a, b], [b, c]] como texto polinomial en x, y."""
    a: str = Field(description="Entrada g^11 (ej. 'y + 8*x - 9*x^2')")
    b: str = Field(description="Entrada g^12 = g^21")
    c: str = Field(description="Entrada g^22")


# ========================================
# SCHEMAS POR HERRAMIENTA
# ========================================

class VerificarMetricaInput(MetricaInput):
    """Schema para verificar (A1)-(A3) de un par (g, Γ)."""
    boundary: List[str] = Field(description="Factores de Γ (lista vacía = Ω es todo el plano)")
    weights: str = Field(default="1,2", description="Pesos 'w1,w2' (racionales positivos)")


class ResolverMetricaInput(BaseModel):
    """Schema para resolver el sistema lineal de cométricas dada Γ."""
    boundary: List[str] = Field(description="Factores de Γ")
    weights: str = Field(default="1,2", description="Pesos 'w1,w2'")
    only_nondegenerate: bool = Field(default=False, description="Informar qué elementos de la base tienen Γ | det g")


class DensidadInput(MetricaInput):
    """Schema para obtener la familia de densidades compatibles con g."""
    boundary: List[str] = Field(description="Factores de Γ")
    weights: str = Field(default="1,2", description="Pesos 'w1,w2'")
    extra_factors: List[str] = Field(default_factory=list, description="Factores adicionales de det g")
    allow_multiple: bool = Field(default=False, description="Aceptar det g con factores múltiples (casos codificados)")
    at: Optional[str] = Field(default=None, description="Valores de parámetros 't0=1,t1=0'")


class RamaInput(MetricaInput):
    """Schema para comprobar las condiciones de tangencia en una rama."""
    xi: str = Field(description="ξ(t) como polinomio en t (ej. 't^2')")
    eta: str = Field(description="η(t) como polinomio en t (ej. 't^3')")
    trunc_order: int = Field(default=64, description="Orden de truncamiento de las series", gt=0)
    gamma: Optional[str] = Field(default=None, description="Γ opcional para contrastar la rama con el polígono de Newton")


class EntradaInput(BaseModel):
    """Schema para consultar una entrada del catálogo."""
    entry_id: str = Field(description="Identificador (ej. 'B1', 'P43.i', 'DIM1.jacobi')")


class ParametrosInput(EntradaInput):
    """Entrada del catálogo con asignaciones de parámetros."""
    params: Optional[str] = Field(default=None, description="Asignaciones 'm=1,n=2,c02=-1'")


class InstanciarInput(ParametrosInput):
    """Schema para instanciar una entrada del catálogo."""
    symbolic_density: bool = Field(default=False, description="Dejar exponentes en símbolos p, q, ...")


class IntegrabilidadInput(ParametrosInput):
    """Schema para evaluar las desigualdades de integrabilidad de ρ."""


class EspectralInput(BaseModel):
    """Schema para el test espectral de escritorio (entrada del catálogo o bundle JSON)."""
    entry_id: Optional[str] = Field(default=None, description="Identificador de catálogo; se ignora si hay bundle")
    params: Optional[str] = Field(default=None, description="Asignaciones 'p=1,q=1'")
    bundle: Optional[dict] = Field(default=None, description="Bundle ya instanciado (JSON de instanciar_entrada)")
    degree: int = Field(default=6, description="Grado ponderado máximo", ge=0, le=20)
    order: int = Field(default=48, description="Orden de Gauss–Legendre", ge=1, le=256)
    threads: int = Field(default=1, description="Hilos para la cuadratura", ge=1)
    symmetry_tol: float = Field(default=1e-8, description="Umbral del defecto de simetría", gt=0)
    gram_tol: float = Field(default=1e-8, description="Umbral del residuo de Gram", gt=0)
    imag_tol: float = Field(default=1e-9, description="Umbral de parte imaginaria", gt=0)


class CurvaturaInput(ParametrosInput):
    """Schema para la curvatura de Gauss en un punto racional."""
    x: str = Field(description="Abscisa racional (ej. '1/2')")
    y: str = Field(description="Ordenada racional (ej. '0')")
    convention: Literal["half_laplacian", "cometric_inverse"] = Field(
        default="half_laplacian", description="Métrica ½g⁻¹ (L = ½Δ) o g⁻¹")


class RealizacionInput(BaseModel):
    """Schema para comprobar el mapa S³ → Ω sobre puntos de Halton."""
    m: int = Field(description="Exponente m ≥ 1", ge=1)
    n: int = Field(description="Exponente n ≥ 1", ge=1)
    count: int = Field(default=1000, description="Número de puntos", gt=0)
    seed: int = Field(default=0, description="Desplazamiento de la secuencia", ge=0)


# ========================================
# CONFIGURACIÓN DE EJECUCIÓN
# ========================================

class RunConfig(BaseModel):
    """Configuración validada de una ejecución de la CLI; rechaza claves desconocidas."""

    model_config = ConfigDict(extra="forbid")

    command: Optional[str] = None
    metric: Optional[str] = None
    boundary: Optional[str] = None
    bundle: Optional[str] = None
    germ: Optional[str] = None
    manifest: Optional[str] = None
    entry: Optional[str] = None
    weights: Optional[str] = None
    params: Optional[str] = None
    at: Optional[str] = None
    point: Optional[str] = None
    output: Optional[str] = None
    nodes_csv: Optional[str] = None
    eigen_csv: Optional[str] = None
    convention: Literal["half_laplacian", "cometric_inverse"] = "half_laplacian"
    degree: int = Field(default=DEGREE, ge=0, le=20)
    order: int = Field(default=QUAD_ORDER, ge=1, le=256)
    symmetry_tol: float = Field(default=SYMMETRY_TOL, gt=0)
    self_convergence_tol: float = Field(default=SELF_CONVERGENCE_TOL, gt=0)
    gram_tol: float = Field(default=GRAM_TOL, gt=0)
    imag_tol: float = Field(default=IMAG_TOL, gt=0)
    trunc_order: int = Field(default=TRUNC_ORDER, gt=0)
    threads: int = Field(default=THREADS, ge=1)
    seed: int = Field(default=SEED, ge=0)
    allow_multiple: bool = False
    symbolic: bool = False
    action: Optional[Literal["list", "show", "instantiate"]] = None
    extra: List[str] = Field(default_factory=list)
    gamma: Optional[str] = None
    m: Optional[int] = Field(default=None, ge=1)
    n: Optional[int] = Field(default=None, ge=1)
    count: int = Field(default=1000, gt=0)
    spectral: Optional[bool] = None
    verbose: bool = False

    @field_validator("weights")
    @classmethod
    def _check_weights(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            Weights.parse(value)
        return value

    @field_validator("params", "at")
    @classmethod
    def _check_assignments(cls, value: Optional[str]) -> Optional[str]:
        parse_assignments(value)
        return value


class PipelineInput(BaseModel):
    """Petición del pipeline de lotes (manifiesto en línea o el de config)."""
    manifest: Optional[dict] = Field(default=None, description="Manifiesto {'defaults': {...}, 'items': [...]}")
    threads: int = Field(default=1, description="Hilos del ThreadPoolExecutor", ge=1, le=32)
    spectral: Optional[bool] = Field(default=None, description="Forzar (o suprimir) la etapa espectral")
