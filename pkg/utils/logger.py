# utils/logger.py
"""
Sistema de logging del toolkit.

Los logs van siempre a stderr (stdout queda libre para el JSON de la CLI).
Si DOPKIT_LOG_DIR está definido se escribe además un archivo diario.
"""

import logging
import os
import sys
from datetime import datetime
from pathlib import Path

# ========================================
# CONFIGURACIÓN DE LOGS
# ========================================

LOG_FORMAT = '%(asctime)s | %(name)s | %(levelname)s | %(funcName)s:%(lineno)d | %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def _log_dir():
    raw = os.getenv("DOPKIT_LOG_DIR")
    if not raw:
        return None
    path = Path(raw)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except (PermissionError, OSError):
        return None
    return path


def _default_level() -> int:
    name = os.getenv("LOG_LEVEL", "WARNING").upper()
    return getattr(logging, name, logging.WARNING)


# ========================================
# FUNCIÓN PRINCIPAL
# ========================================

def get_logger(name: str, level: int = None) -> logging.Logger:
    """
    Obtiene un logger configurado.

    Args:
        name: Nombre del logger (ej: 'poly', 'catalog', 'cli')
        level: Nivel de logging (default: LOG_LEVEL o WARNING)

    Returns:
        Logger configurado
    """
    logger = logging.getLogger(name)

    # Evitar duplicar handlers si ya existe
    if logger.handlers:
        return logger

    level = _default_level() if level is None else level
    logger.setLevel(level)
    formatter = logging.Formatter(LOG_FORMAT, DATE_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_dir = _log_dir()
    if log_dir is not None:
        try:
            log_filename = log_dir / f"{name}_{datetime.now().strftime('%Y%m%d')}.log"
            file_handler = logging.FileHandler(log_filename, encoding='utf-8')
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except OSError as e:
            logger.warning(f"No se pudo crear file handler: {e}")

    logger.propagate = False
    return logger


def set_level(level: int) -> None:
    """Cambia el nivel de todos los loggers ya creados (p. ej. --verbose en la CLI)."""
    for name in list(logging.Logger.manager.loggerDict):
        candidate = logging.getLogger(name)
        if candidate.handlers:
            candidate.setLevel(level)
            for handler in candidate.handlers:
                handler.setLevel(level)


# ========================================
# FUNCIÓN AUXILIAR PARA EVENTOS
# ========================================

_ERROR_EVENTS = ("error", "exception")
_DEGRADED_STATUSES = ("validation", "tool_failure", "skipped")


def log_system_event(event_type: str, details: dict, logger_name: str = "system") -> None:
    """
    Evento de una línea: `[TIPO] clave=valor | ...`.
    'error' va a ERROR; un `status` de fallo (validation, tool_failure, skipped)
    va a WARNING; el resto a INFO.
    """
    logger = get_logger(logger_name)
    fields = " | ".join(f"{key}={value}" for key, value in details.items())
    line = f"[{event_type.upper()}] {fields}"

    if event_type.lower() in _ERROR_EVENTS:
        logger.error(line)
    elif event_type.lower() == "warning" or details.get("status") in _DEGRADED_STATUSES:
        logger.warning(line)
    else:
        logger.info(line)
