# config.py
"""
Configuración del toolkit.
Todo se lee del entorno (o de .env en local); los valores por defecto son
los umbrales de aceptación.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Cargar .env en local
load_dotenv()

BASE_DIR = Path(__file__).resolve().parent


# ========================================
# VARIABLES DE ENTORNO
# ========================================

def get_env_var(name: str, required: bool = True, default: str = None) -> str:
    """Obtiene variables de entorno de forma segura."""
    value = os.getenv(name, default)
    if not value and required:
        raise ValueError(f"❌ Error Config: Variable {name} no encontrada.")
    return value


def _float(name: str, default: float) -> float:
    raw = get_env_var(name, required=False)
    return float(raw) if raw else default


def _int(name: str, default: int) -> int:
    raw = get_env_var(name, required=False)
    return int(raw) if raw else default


# ========================================
# TOLERANCIAS NUMÉRICAS
# ========================================

SYMMETRY_TOL = _float("DOPKIT_SYMMETRY_TOL", 1e-8)
SELF_CONVERGENCE_TOL = _float("DOPKIT_SELF_CONVERGENCE_TOL", 1e-10)
GRAM_TOL = _float("DOPKIT_GRAM_TOL", 1e-8)
IMAG_TOL = _float("DOPKIT_IMAG_TOL", 1e-9)

# ========================================
# PARÁMETROS DE CÁLCULO
# ========================================

TRUNC_ORDER = _int("DOPKIT_TRUNC_ORDER", 64)
QUAD_ORDER = _int("DOPKIT_QUAD_ORDER", 48)
DEGREE = _int("DOPKIT_DEGREE", 6)
SEED = _int("DOPKIT_SEED", 0)
THREADS = _int("DOPKIT_THREADS", 1)
MANIFEST_PATH = Path(get_env_var("DOPKIT_MANIFEST", required=False) or BASE_DIR / "data" / "acceptance_grid.json")

# ========================================
# PIPELINE (CIRCUIT BREAKER)
# ========================================

CIRCUIT_BREAKER_MAX_FAILURES = _int("DOPKIT_MAX_FAILURES", 5)
CIRCUIT_BREAKER_MAX_VALIDATION = _int("DOPKIT_MAX_VALIDATION_ERRORS", 10)

# ========================================
# API
# ========================================

API_HOST = get_env_var("API_HOST", required=False, default="0.0.0.0")
API_PORT = _int("PORT", 8080)
