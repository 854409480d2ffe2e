# dopkit/errors.py
"""
Jerarquía de errores del kernel.

Todas heredan de ValueError: las herramientas las capturan y las traducen a
{"error": ..., "error_type": "validation" | "tool_failure"}.
"""

from typing import Optional


class DopkitError(ValueError):
    """Error base del kernel."""

    # Clasificación usada por tools y por el grafo de lotes
    error_type = "tool_failure"


class PolyParseError(DopkitError):
    """Texto polinomial mal formado; conserva la posición del fallo."""

    error_type = "validation"

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        pointer = ""
        if text:
            pointer = f"\n  {text}\n  {' ' * position}^"
        super().__init__(f"{message} (posición {position}){pointer}")


class DegenerateMetricError(DopkitError):
    """det g es idénticamente cero."""


class NonIntegrableError(DopkitError):
    """La deriva no se integra con los factores suministrados."""


class InvalidParameterError(DopkitError):
    """Parámetros que violan un predicado de la entrada del catálogo."""

    error_type = "validation"

    def __init__(self, message: str, predicate: Optional[str] = None):
        self.predicate = predicate
        super().__init__(message)


class UnknownEntryError(DopkitError):
    error_type = "validation"


class ChartError(DopkitError):
    """Punto sobre el lugar excluido de una carta."""


class UnsupportedCaseError(DopkitError):
    """Caso con factores múltiples de det g no codificado."""


class PreconditionError(DopkitError):
    """Precondición de una operación no satisfecha."""


class QuadratureError(DopkitError):
    """No se puede construir la regla de cuadratura pedida."""


class SingularGramError(DopkitError):
    """Matriz de Gram numéricamente singular."""

    def __init__(self, message: str, condition: float):
        self.condition = condition
        super().__init__(f"{message} (cond ≈ {condition:.3e})")
