# cli.py
"""
Línea de comandos de dopkit.

    python cli.py verify --metric g.json --boundary gamma.json --weights 1,2
    python cli.py catalog instantiate B3 --params alpha=-1,beta=0 | python cli.py spectral --bundle -

El JSON del resultado va a stdout (o a --output); el resumen legible y los logs
a stderr. Códigos de salida: 0 correcto, 1 fallo matemático, 2 error de uso.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Optional

import numpy as np
from pydantic import ValidationError

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
from dopkit.errors import DopkitError, InvalidParameterError, PreconditionError
from dopkit.poly import RatPoly2, Weights, divides, format_fraction, to_fraction
from dopkit.spectral import self_convergence, spectral_report, write_eigen_csv, write_nodes_csv
from tools.schemas import RunConfig
from utils.logger import get_logger, log_system_event, set_level

logger = get_logger('cli')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# ========================================
# ENTRADA / SALIDA JSON
# ========================================

def _json_default(value):
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def dumps(data: Any) -> str:
    """JSON determinista: claves ordenadas, sangría fija."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False, default=_json_default)


def load_json(path: str) -> Any:
    """Lee JSON de un archivo; '-' es stdin."""
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def emit(data: Any, output: Optional[str]) -> None:
    text = dumps(data) + "\n"
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _summary(text: str) -> None:
    print(text, file=sys.stderr)


def _require(value, flag: str):
    if value is None:
        raise InvalidParameterError(f"Falta {flag}", predicate="schema")
    return value


def _metric(config: RunConfig) -> Cometric:
    return Cometric.from_json(load_json(_require(config.metric, "--metric")))


def _boundary(config: RunConfig) -> BoundarySpec:
    return BoundarySpec.from_json(load_json(_require(config.boundary, "--boundary")))


def _weights(config: RunConfig) -> Weights:
    return Weights.parse(config.weights or "1,2")


def _point(text: str) -> tuple[Fraction, Fraction]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise InvalidParameterError(f"Punto mal formado: '{text}' (se espera 'x,y')", predicate="schema")
    try:
        return to_fraction(parts[0]), to_fraction(parts[1])
    except (ValueError, ZeroDivisionError):
        raise InvalidParameterError(f"Punto no racional: '{text}'", predicate="schema") from None


# ========================================
# COMANDOS
# ========================================

def cmd_verify(config: RunConfig) -> int:
    report = verify(_metric(config), _boundary(config), _weights(config))
    emit(report, config.output)
    _summary(f"verify: passed={report['passed']} reason={report['reason']}")
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_solve_metric(config: RunConfig) -> int:
    gamma = _boundary(config)
    solutions = solve_metric(gamma, _weights(config))
    items = []
    for sol in solutions:
        data = sol.to_json()
        delta = sol.metric.det
        data["a2"] = bool(not delta.is_zero and divides(gamma.product, delta) is not None)
        items.append(data)
    emit({"dimension": len(solutions), "solutions": items}, config.output)
    _summary(f"solve-metric: dimensión {len(solutions)}")
    return EXIT_OK


def cmd_density(config: RunConfig) -> int:
    family = density_family(
        _metric(config),
        _boundary(config),
        _weights(config),
        extra_factors=tuple(RatPoly2.parse(f) for f in config.extra),
        allow_multiple=config.allow_multiple,
    )
    result = {"family": family.to_json(), "dimension": len(family.parameters)}
    if config.at:
        result["instance"] = family.instantiate(parse_assignments(config.at)).to_json()
    emit(result, config.output)
    _summary(f"density: {len(family.parameters)} parámetros libres")
    return EXIT_OK


def cmd_branch_check(config: RunConfig) -> int:
    data = load_json(_require(config.germ, "--germ"))
    data.setdefault("trunc_order", config.trunc_order)
    germ = BranchGerm.from_json(data)
    g = _metric(config)
    tangency = check_tangency(germ, g)
    try:
        valuations = check_valuation_balance(germ, g)
    except PreconditionError as e:
        logger.warning(f"⚠️ {e}")
        valuations = None
    result = {
        "germ": germ.to_json(),
        "tangency": tangency,
        "valuation_balance": valuations,
        "newton": newton_consistency(germ, RatPoly2.parse(config.gamma)) if config.gamma else None,
        "passed": tangency is True,
    }
    emit(result, config.output)
    _summary(f"branch-check: tangencia={tangency} valoraciones={valuations}")
    return EXIT_OK if result["passed"] else EXIT_FAILED


def cmd_catalog(config: RunConfig) -> int:
    action = config.action or "list"
    if action == "list":
        emit({"entries": list_entries()}, config.output)
        return EXIT_OK
    entry_id = _require(config.entry, "el identificador de la entrada")
    if action == "show":
        emit(get_entry(entry_id).to_json(), config.output)
        return EXIT_OK
    bundle = instantiate(entry_id, parse_assignments(config.params), symbolic_density=config.symbolic)
    emit(bundle.to_json(), config.output)
    _summary(f"catalog instantiate {entry_id}: w = {bundle.weights}, certificado exacto")
    return EXIT_OK


def _spectral_bundle(config: RunConfig) -> Bundle:
    if config.bundle is not None:
        return Bundle.from_json(load_json(config.bundle))
    entry_id = _require(config.entry, "--bundle o --entry")
    return instantiate(entry_id, parse_assignments(config.params))


def cmd_spectral(config: RunConfig) -> int:
    bundle = _spectral_bundle(config)
    result, rule, eig = spectral_report(
        bundle, config.degree, config.order, config.threads,
        symmetry_tol=config.symmetry_tol, gram_tol=config.gram_tol, imag_tol=config.imag_tol,
    )
    if rule is not None:
        low = max(1, (2 * config.order) // 3)
        change = self_convergence(bundle.domain, bundle.density, low, config.order, truncate=True)
        result["self_convergence"] = {"orders": [low, config.order], "relative_change": change,
                                      "ok": change <= config.self_convergence_tol}
        if config.nodes_csv:
            with open(config.nodes_csv, "w", encoding="utf-8", newline="") as handle:
                write_nodes_csv(rule, handle)
        if config.eigen_csv:
            with open(config.eigen_csv, "w", encoding="utf-8", newline="") as handle:
                write_eigen_csv(eig, handle)
    emit(result, config.output)
    _summary(f"spectral {bundle.entry_id}: invariancia={result['invariance']} passed={result['passed']}")
    return EXIT_OK if result["passed"] else EXIT_FAILED


def cmd_curvature(config: RunConfig) -> int:
    entry_id = _require(config.entry, "el identificador de la entrada")
    point = _point(_require(config.point, "--point"))
    values = parse_assignments(config.params)
    value = curvature(entry_id, values, point, config.convention)
    closed = None
    if config.convention == "half_laplacian" and entry_id in ("B4", "B5"):
        try:
            closed = closed_form_curvature(entry_id, values, point)
        except PreconditionError:
            closed = None
    emit({"entry": entry_id, "point": [format_fraction(v) for v in point], "convention": config.convention,
          "curvature": value, "closed_form": closed}, config.output)
    _summary(f"curvature {entry_id} en {point[0]},{point[1]}: K = {value}")
    return EXIT_OK


def cmd_integrability(config: RunConfig) -> int:
    entry_id = _require(config.entry, "el identificador de la entrada")
    report = integrability_constraints(entry_id, parse_assignments(config.params))
    emit(report, config.output)
    _summary(f"integrability {entry_id}: satisfied={report['satisfied']}")
    return EXIT_OK if report["satisfied"] else EXIT_FAILED


def cmd_realization(config: RunConfig) -> int:
    report = realization_check(_require(config.m, "--m"), _require(config.n, "--n"), config.count, config.seed)
    emit(report, config.output)
    _summary(f"realization ({config.m}, {config.n}): passed={report['passed']}")
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_batch(config: RunConfig) -> int:
    # Importación diferida: el grafo arrastra langgraph
    from graph.pipeline_graph import load_manifest, run_batch

    summary = run_batch(load_manifest(config.manifest), threads=config.threads, spectral=config.spectral)
    emit(summary, config.output)
    _summary(f"batch: {summary['passed_count']}/{summary['count']} correctos, circuit_open={summary['circuit_open']}")
    return EXIT_OK if summary["passed"] else EXIT_FAILED


COMMANDS = {
    "verify": cmd_verify,
    "solve-metric": cmd_solve_metric,
    "density": cmd_density,
    "branch-check": cmd_branch_check,
    "catalog": cmd_catalog,
    "spectral": cmd_spectral,
    "curvature": cmd_curvature,
    "integrability": cmd_integrability,
    "realization": cmd_realization,
    "batch": cmd_batch,
}


# ========================================
# PARSER
# ========================================

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # default=None en todo: solo los flags explícitos pisan al --config
    common.add_argument("--config", default=None, help="Documento JSON con las mismas claves que los flags")
    common.add_argument("--weights", default=None, help="Pesos W1,W2 (racionales positivos)")
    common.add_argument("-o", "--output", default=None, help="Archivo de salida ('-' = stdout)")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--symmetry-tol", dest="symmetry_tol", type=float, default=None)
    common.add_argument("--self-convergence-tol", dest="self_convergence_tol", type=float, default=None)
    common.add_argument("--gram-tol", dest="gram_tol", type=float, default=None)
    common.add_argument("--imag-tol", dest="imag_tol", type=float, default=None)
    common.add_argument("-v", "--verbose", action="store_true", default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    # Los flags comunes van tras el subcomando
    parser = argparse.ArgumentParser(prog="dopkit", description="Polinomios ortogonales de difusión en 2D")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="Comprueba (A1)-(A3)")
    p.add_argument("--metric", default=None)
    p.add_argument("--boundary", default=None)

    p = sub.add_parser("solve-metric", parents=[common], help="Resuelve g dada Γ")
    p.add_argument("--boundary", default=None)

    p = sub.add_parser("density", parents=[common], help="Familia de densidades compatibles")
    p.add_argument("--metric", default=None)
    p.add_argument("--boundary", default=None)
    p.add_argument("--extra", action="append", default=None, help="Factor adicional de det g (repetible)")
    p.add_argument("--allow-multiple", dest="allow_multiple", action="store_true", default=None)
    p.add_argument("--at", default=None, help="Valores de parámetros t0=..,t1=..")

    p = sub.add_parser("branch-check", parents=[common], help="Condiciones sobre una rama local")
    p.add_argument("--metric", default=None)
    p.add_argument("--germ", default=None)
    p.add_argument("--gamma", default=None, help="Γ para contrastar con el polígono de Newton")
    p.add_argument("--trunc-order", dest="trunc_order", type=int, default=None)

    p = sub.add_parser("catalog", parents=[common], help="Catálogo de soluciones")
    p.add_argument("action", choices=["list", "show", "instantiate"])
    p.add_argument("entry", nargs="?", default=None)
    p.add_argument("--params", default=None)
    p.add_argument("--symbolic", action="store_true", default=None)

    p = sub.add_parser("spectral", parents=[common], help="Test espectral de escritorio")
    p.add_argument("--bundle", default=None, help="Bundle JSON ('-' = stdin)")
    p.add_argument("--entry", default=None)
    p.add_argument("--params", default=None)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--nodes-csv", dest="nodes_csv", default=None)
    p.add_argument("--eigen-csv", dest="eigen_csv", default=None)

    p = sub.add_parser("curvature", parents=[common], help="Curvatura de Gauss en un punto")
    p.add_argument("entry")
    p.add_argument("--params", default=None)
    p.add_argument("--point", default=None, help="x,y racionales")
    p.add_argument("--convention", choices=["half_laplacian", "cometric_inverse"], default=None)

    p = sub.add_parser("integrability", parents=[common], help="Desigualdades de integrabilidad de ρ")
    p.add_argument("entry")
    p.add_argument("--params", default=None)

    p = sub.add_parser("realization", parents=[common], help="Mapa S³ → Ω de B4")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--count", type=int, default=None)

    p = sub.add_parser("batch", parents=[common], help="Pipeline LangGraph sobre el manifiesto")
    p.add_argument("--manifest", default=None)
    p.add_argument("--spectral", action="store_true", default=None)

    return parser


def build_config(namespace: argparse.Namespace) -> RunConfig:
    """Mezcla el --config (si existe) bajo los flags explícitos y valida."""
    flags = {k: v for k, v in vars(namespace).items() if v is not None and k != "config"}
    merged: dict = {}
    if namespace.config:
        loaded = load_json(namespace.config)
        if not isinstance(loaded, dict):
            raise InvalidParameterError("El --config debe ser un objeto JSON", predicate="schema")
        merged.update(loaded)
    merged.update(flags)
    return RunConfig(**merged)


# ========================================
# ENTRADA PRINCIPAL
# ========================================

def run(config: RunConfig) -> int:
    """Despacha el comando y traduce errores a códigos de salida."""
    handler = COMMANDS.get(config.command or "")
    if handler is None:
        _summary(f"Comando desconocido: {config.command}")
        return EXIT_USAGE
    try:
        return handler(config)
    except DopkitError as e:
        code = EXIT_USAGE if e.error_type == "validation" else EXIT_FAILED
        logger.error(f"❌ {config.command}: {type(e).__name__} - {e}")
        _summary(f"error: {e}")
        log_system_event("error", {"command": config.command, "error": type(e).__name__}, logger_name='cli')
        return code
    except (ValueError, TypeError, KeyError, OSError) as e:
        # JSON mal formado, archivos ausentes, pesos inválidos
        logger.error(f"❌ {config.command}: {type(e).__name__} - {e}")
        _summary(f"error: {type(e).__name__}: {e}")
        return EXIT_USAGE


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    if namespace.verbose:
        set_level(logging.INFO)
    try:
        config = build_config(namespace)
    except (ValidationError, DopkitError, ValueError, OSError) as e:
        _summary(f"error de configuración: {e}")
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
