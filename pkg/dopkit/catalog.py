# dopkit/catalog.py
"""
Catálogo de familias clasificadas (g, Γ, Ω, ρ) en pesos (1, 2) y (1, ∞).

Cada entrada declara su esquema de parámetros, los predicados de validez y un
constructor. instantiate() devuelve un Bundle verificado exactamente con
(A1)-(A3) y con la factorización de det g comprobada por multiplicación.
También viven aquí la curvatura (fórmula de Brioschi) y el mapa de
realización S³ → Ω.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

import numpy as np
import sympy
from scipy.stats import qmc

from .algdop import (
    AdmissibleChange, BoundarySpec, CofactorCertificate, Cometric,
    check_A1, check_A2_A3, minimal_infinite_weight,
)
from .density import DensitySpec
from .errors import InvalidParameterError, PreconditionError, UnknownEntryError
from .poly import RatPoly2, Weights, format_fraction, to_fraction

# Importar logger
try:
    from utils.logger import get_logger
    logger = get_logger('catalog')
except ImportError:
    import logging
    logger = logging.getLogger('catalog')


X = RatPoly2.x()
Y = RatPoly2.y()
ONE = RatPoly2.one()

SPHERE_TOL = 1e-12

CATALOG_NOTES = (
    "Las soluciones (1,2) con Ω no acotado se reducen a problemas (1,1) o (1,∞) "
    "por un cambio admisible; no forman familias nuevas.",
)


# ========================================
# TIPOS
# ========================================

@dataclass(frozen=True)
class ParamSpec:
    """Parámetro de una entrada: exacto, con valor por defecto opcional."""

    name: str
    kind: str = "rational"          # "int" | "rational"
    default: Optional[object] = None
    minimum: Optional[int] = None
    choices: Optional[tuple] = None
    default_from: Optional[str] = None
    role: str = "metric"            # "metric" | "density"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "default": None if self.default is None else str(self.default),
            "minimum": self.minimum,
            "choices": list(self.choices) if self.choices else None,
            "default_from": self.default_from,
            "role": self.role,
        }


@dataclass(frozen=True)
class DomainSpec:
    """
    Ω = {signo·Γ_k > 0 para cada (k, signo)} ∩ {signo·h > 0 para cada corte h}.

    box contiene Ω si bounded; en otro caso es la caja de truncamiento.
    x_breaks son las abscisas donde cambia la topología de las secciones.
    """

    factors: tuple[RatPoly2, ...]
    signs: tuple[tuple[int, int], ...]
    box: tuple[Fraction, Fraction, Fraction, Fraction]
    bounded: bool = True
    cuts: tuple[tuple[RatPoly2, int], ...] = ()
    x_breaks: tuple[Fraction, ...] = ()
    graded: bool = False

    def __post_init__(self):
        object.__setattr__(self, "box", tuple(to_fraction(v) for v in self.box))
        breaks = tuple(to_fraction(v) for v in self.x_breaks) or (self.box[0], self.box[1])
        object.__setattr__(self, "x_breaks", breaks)

    def conditions(self) -> list[tuple[RatPoly2, int]]:
        return [(self.factors[k], s) for k, s in self.signs] + list(self.cuts)

    def contains(self, x, y) -> bool:
        x, y = to_fraction(x), to_fraction(y)
        return all(s * poly.evaluate(x, y) > 0 for poly, s in self.conditions())

    def to_json(self) -> dict:
        return {
            "factors": [f.to_json() for f in self.factors],
            "signs": [list(s) for s in self.signs],
            "cuts": [[p.to_json(), s] for p, s in self.cuts],
            "box": [format_fraction(v) for v in self.box],
            "bounded": self.bounded,
            "x_breaks": [format_fraction(v) for v in self.x_breaks],
            "graded": self.graded,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DomainSpec":
        return cls(
            factors=tuple(RatPoly2.from_json(f) for f in data["factors"]),
            signs=tuple((int(k), int(s)) for k, s in data["signs"]),
            box=tuple(to_fraction(v) for v in data["box"]),
            bounded=bool(data.get("bounded", True)),
            cuts=tuple((RatPoly2.from_json(p), int(s)) for p, s in data.get("cuts", [])),
            x_breaks=tuple(to_fraction(v) for v in data.get("x_breaks", [])),
            graded=bool(data.get("graded", False)),
        )


@dataclass(frozen=True)
class SingularPoint:
    x: Fraction
    y: Fraction
    label: str

    def to_json(self) -> dict:
        return {"point": [format_fraction(self.x), format_fraction(self.y)], "type": self.label}


@dataclass
class _Parts:
    """Salida de un constructor de entrada antes de la verificación."""

    metric: Cometric
    boundary: tuple[RatPoly2, ...]
    weights: Optional[Weights] = None
    domain: Optional[DomainSpec] = None
    density: Optional[DensitySpec] = None
    det_constant: Fraction = Fraction(1)
    det_factors: Optional[list[tuple[RatPoly2, int]]] = None
    singular: Optional[list[SingularPoint]] = None
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    title: str
    citation: str
    params: tuple[ParamSpec, ...]
    predicates: tuple[tuple[str, Callable[[Mapping], bool]], ...]
    builder: Callable[[Mapping, Mapping], _Parts]
    kind: str = "algebraic"         # "algebraic" | "bounded" | "unbounded"
    reflection: Optional[dict] = None

    @property
    def classification(self) -> Optional[str]:
        if self.kind == "bounded":
            return "DOP"
        if self.kind == "unbounded":
            return "SDOP"
        return None

    def summary(self) -> dict:
        return {"id": self.id, "title": self.title, "kind": self.kind,
                "params": [p.name for p in self.params]}

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "citation": self.citation,
            "kind": self.kind,
            "classification": self.classification,
            "params": [p.to_json() for p in self.params],
            "predicates": [label for label, _ in self.predicates],
            "reflection": self.reflection,
        }


@dataclass(frozen=True)
class Bundle:
    """Solución completa: pesos, g, Γ, Ω, ρ y datos de factorización de Δ."""

    entry_id: str
    params: dict
    weights: Weights
    metric: Cometric
    boundary: BoundarySpec
    domain: Optional[DomainSpec]
    density: Optional[DensitySpec]
    det_constant: Fraction
    det_factors: tuple[tuple[RatPoly2, int], ...]
    citations: tuple[str, ...] = ()
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def certificate(self) -> Optional[CofactorCertificate]:
        return check_A2_A3(self.metric, self.boundary, self.weights)

    def to_json(self) -> dict:
        cert = self.certificate
        return {
            "entry": self.entry_id,
            "params": {k: format_fraction(to_fraction(v)) for k, v in sorted(self.params.items())},
            "weights": list(self.weights.as_tuple()),
            "metric": self.metric.to_json(),
            "boundary": self.boundary.to_json(),
            "domain": self.domain.to_json() if self.domain else None,
            "density": self.density.to_json() if self.density else None,
            "det_factorization": {
                "constant": format_fraction(self.det_constant),
                "factors": [[f.to_json(), m] for f, m in self.det_factors],
            },
            "certificate": cert.to_json() if cert else None,
            "citations": list(self.citations),
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Bundle":
        det = data.get("det_factorization") or {}
        return cls(
            entry_id=data.get("entry", "custom"),
            params={k: to_fraction(v) for k, v in data.get("params", {}).items()},
            weights=Weights(*data["weights"]),
            metric=Cometric.from_json(data["metric"]),
            boundary=BoundarySpec.from_json(data["boundary"]),
            domain=DomainSpec.from_json(data["domain"]) if data.get("domain") else None,
            density=DensitySpec.from_json(data["density"]) if data.get("density") else None,
            det_constant=to_fraction(det.get("constant", 1)),
            det_factors=tuple((RatPoly2.from_json(f), int(m)) for f, m in det.get("factors", [])),
            citations=tuple(data.get("citations", [])),
            metadata=dict(data.get("metadata") or {}),
        )


# ========================================
# CONSTRUCTORES AUXILIARES
# ========================================

def _q(value) -> sympy.Expr:
    if isinstance(value, sympy.Basic):
        return value
    f = to_fraction(value)
    return sympy.Rational(f.numerator, f.denominator)


def _density(factors: Sequence[RatPoly2], exponents: Sequence, q_parts: Sequence = ()) -> DensitySpec:
    exps = tuple(sympy.expand(_q(e)) for e in exponents)
    parts = tuple((sympy.expand(_q(c)), p) for c, p in q_parts)
    symbols = set()
    for e in exps:
        symbols |= e.free_symbols
    for c, _ in parts:
        symbols |= c.free_symbols
    return DensitySpec(tuple(factors), exps, parts, tuple(sorted(symbols, key=lambda s: s.name)))


def _cusp_metric(alpha: Fraction, beta: Fraction, mu: Fraction) -> Cometric:
    gamma = Y * Y - X ** 3
    lin = X * beta + mu
    return Cometric(Y * 4 + lin * X * 4,
                    X * X * 6 + lin * Y * 6,
                    X * Y * 9 + gamma * alpha + lin * X * X * 9)


def _parabola_metric(alpha: Fraction, beta: Fraction) -> Cometric:
    g1 = Y - X * X + 1
    return Cometric(g1 + (X * X - 1) * beta, X * Y * (2 * beta), g1 * Y * alpha + X * X * Y * (4 * beta))


def _p55ii(alpha: Fraction, beta: Fraction, mu: Fraction) -> Cometric:
    lin = X * beta + mu
    return Cometric(Y - X * X + lin * X, lin * Y * 2, (Y - X * X) * Y * alpha + lin * X * Y * 4)


GAMMA_B1 = RatPoly2.parse("y^3 - 20*x*y^2 + 16*y^2 + 45*x^3*y - 40*x^2*y - 27*x^5 + 25*x^4")
METRIC_B1 = Cometric.parse("y + 8*x - 9*x^2", "5*(4*y - 3*x*y - x^2)", "-25*(y^2 - 4*x*y + 3*x^3)")
METRIC_B2 = Cometric.parse("4*(2*y - 3*x^2 + x)", "6*(y - 3*x*y + 2*x^2)", "9*(x^2 + x^3 + 2*x*y - 4*y^2)")
GAMMA_B2_LINE = RatPoly2.parse("8*y - 3*x^2 - 6*x + 1")
GAMMA_B2_CUBIC = RatPoly2.parse("x^3 - y^2")

# Parametrización racional de Γ_B1 = 0 (cúspide en t = 0, nodo en t = −5 ± 2√5)
B1_PARAMETRIZATION = ("32*(t + 1)", "256*(5*t + 3)*(t + 3)", "(t + 3)^3")


def _p43i_metric(m: int, n: int, c02: Fraction) -> tuple[Cometric, RatPoly2, RatPoly2]:
    lin = ONE * (n - m) - X * (n + m)
    gamma = (ONE - X) ** m * (ONE + X) ** n - Y * Y
    base = (ONE - X) ** (m - 1) * (ONE + X) ** (n - 1)
    g = Cometric(ONE - X * X, lin * Y / 2, lin * lin * base / 4 - gamma * c02)
    gamma0 = lin * lin / 4 - (ONE - X * X) * c02
    return g, gamma, gamma0


def _p43ii_metric(n: int, c02: Fraction) -> tuple[Cometric, RatPoly2]:
    gamma = X ** n - Y * Y
    return Cometric(X, Y * Fraction(n, 2), X ** (n - 1) * Fraction(n * n, 4) - gamma * c02), gamma


def _p43iii_metric(n: int, x0: int, c02: Fraction) -> tuple[Cometric, RatPoly2, RatPoly2]:
    gamma2 = (ONE * x0 - X) ** n - Y * Y
    first = X * (ONE * x0 - X) ** (n - 1) * Fraction(n * n, 4) if n > 0 else RatPoly2.zero()
    g = Cometric(X * (ONE * x0 - X), X * Y * Fraction(-n, 2), first - gamma2 * c02)
    gamma0 = X * Fraction(n * n, 4) - (ONE * x0 - X) * c02
    return g, gamma2, gamma0


def _half_power_split(base: RatPoly2) -> tuple[RatPoly2, RatPoly2]:
    return base + Y, base - Y


def _y_bound(m: int, n: int) -> Fraction:
    # |y| ≤ 2^{(m+n)/2} sobre x ∈ [−1, 1]
    return Fraction(2) ** math.ceil((m + n) / 2)


def _verify_singular(gamma: RatPoly2, points: Sequence[SingularPoint]) -> list[SingularPoint]:
    gx, gy = gamma.partial_x(), gamma.partial_y()
    for pt in points:
        for poly in (gamma, gx, gy):
            if poly.evaluate(pt.x, pt.y) != 0:
                raise PreconditionError(f"({pt.x}, {pt.y}) no es un punto singular de Γ")
    return list(points)


def _sp(x, y, label: str) -> SingularPoint:
    return SingularPoint(to_fraction(x), to_fraction(y), label)


# ========================================
# CONSTRUCTORES POR ENTRADA
# ========================================

def _build_p43i(P, D) -> _Parts:
    m, n, c02 = int(P["m"]), int(P["n"]), P["c02"]
    g, gamma, gamma0 = _p43i_metric(m, n, c02)
    return _Parts(g, (gamma,), det_factors=[(gamma0, 1), (gamma, 1)])


def _build_p43ii(P, D) -> _Parts:
    n, c02 = int(P["n"]), P["c02"]
    g, gamma = _p43ii_metric(n, c02)
    gamma0 = ONE * Fraction(n * n, 4) - X * c02
    return _Parts(g, (gamma,), det_factors=[(gamma0, 1), (gamma, 1)])


def _build_p43iii(P, D) -> _Parts:
    n, k, x0, c02 = int(P["n"]), int(P["k"]), int(P["x0"]), P["c02"]
    g, gamma2, gamma0 = _p43iii_metric(n, x0, c02)
    boundary = ((X,) if k else ()) + (gamma2,)
    return _Parts(g, boundary, det_factors=[(X, 1), (gamma2, 1), (gamma0, 1)])


def _build_p43iv(P, D) -> _Parts:
    k, c02 = int(P["k"]), P["c02"]
    g = Cometric.diag(X ** k, (ONE - Y * Y) * (-c02))
    boundary = ((X,) if k else ()) + (ONE - Y * Y,)
    return _Parts(g, boundary)


def _build_p43v(P, D) -> _Parts:
    c02 = P["c02"]
    g = Cometric.diag(ONE - X * X, (ONE - Y * Y) * (-c02))
    return _Parts(g, (ONE - X * X, ONE - Y * Y),
                  det_constant=-c02, det_factors=[(ONE - X * X, 1), (ONE - Y * Y, 1)])


def _build_p44i(P, D) -> _Parts:
    n, k, c0 = int(P["n"]), int(P["k"]), P["c0"]
    gamma1 = X ** n * Y - 1
    g = Cometric(X * X, X * Y * (-n), Y * Y * (n * n) - gamma1 * c0)
    boundary = ((X,) if k else ()) + (gamma1,)
    return _Parts(g, boundary, det_constant=-c0, det_factors=[(X, 2), (gamma1, 1)])


def _build_p44ii(P, D) -> _Parts:
    b11, c0 = P["b11"], P["c0"]
    gamma = X * Y - 1
    g = Cometric(X * X, gamma * b11 - 1, Y * Y - gamma * c0)
    return _Parts(g, (gamma,))


def _c1(P) -> RatPoly2:
    return ONE * P["c10"] + X * P["c11"] + X * X * P["c12"]


def _build_p44iii(P, D) -> _Parts:
    a0 = ONE * P["a00"] + X * P["a10"] + X * X * P["a20"]
    b1 = ONE * P["b10"] + X * P["b11"]
    g = Cometric(a0, b1 * Y, Y * Y * P["c02"] + _c1(P) * Y)
    return _Parts(g, (Y,))


def _build_p44iv(P, D) -> _Parts:
    g = Cometric(X * P["a10"] + X * X * P["a20"], X * Y * P["b11"], Y * Y * P["c02"] + _c1(P) * Y)
    return _Parts(g, (X, Y))


def _build_p44v(P, D) -> _Parts:
    g = Cometric.diag(ONE - X * X, Y * Y * P["c02"] + _c1(P) * Y)
    return _Parts(g, (ONE - X * X, Y))


def _build_p44vi(P, D) -> _Parts:
    line = ONE - X * Y
    g = Cometric(RatPoly2.zero(), line, line * P["c0"])
    return _Parts(g, (line,), det_constant=Fraction(-1), det_factors=[(line, 2)])


def _b1_singular() -> list[SingularPoint]:
    return _verify_singular(GAMMA_B1, [
        _sp(Fraction(32, 27), Fraction(256, 81), "A2"),
        _sp(0, 0, "A4"),
        _sp(1, 1, "A1"),
    ])


def _build_p53(P, D) -> _Parts:
    return _Parts(METRIC_B1, (GAMMA_B1,), weights=Weights(1, 2),
                  det_constant=Fraction(-25), det_factors=[(GAMMA_B1, 1)], singular=_b1_singular())


def _build_p55i(P, D) -> _Parts:
    return _Parts(_cusp_metric(P["alpha"], P["beta"], P["mu"]), (Y * Y - X ** 3,), weights=Weights(1, 2))


def _build_p55ii(P, D) -> _Parts:
    return _Parts(_p55ii(P["alpha"], P["beta"], P["mu"]), (Y, Y - X * X), weights=Weights(1, 2))


def _b3_gamma0(alpha: Fraction, beta: Fraction) -> RatPoly2:
    return Y * alpha + X * X * ((4 * beta - alpha) * (1 - beta)) + alpha * (1 - beta)


def _build_p55iii(P, D) -> _Parts:
    alpha, beta = P["alpha"], P["beta"]
    g1 = Y - X * X + 1
    return _Parts(_parabola_metric(alpha, beta), (Y, g1), weights=Weights(1, 2),
                  det_factors=[(Y, 1), (_b3_gamma0(alpha, beta), 1), (g1, 1)])


def _b2_singular() -> list[SingularPoint]:
    return _verify_singular(GAMMA_B2_LINE * GAMMA_B2_CUBIC, [
        _sp(Fraction(1, 9), Fraction(-1, 27), "A1"),
        _sp(0, 0, "A2"),
        _sp(1, 1, "A5"),
    ])


def _build_p57(P, D) -> _Parts:
    return _Parts(METRIC_B2, (GAMMA_B2_LINE, GAMMA_B2_CUBIC), weights=Weights(1, 2),
                  det_constant=Fraction(36), det_factors=[(GAMMA_B2_LINE, 1), (GAMMA_B2_CUBIC, 1)],
                  singular=_b2_singular())


def _build_b1(P, D) -> _Parts:
    parts = _build_p53(P, D)
    parts.domain = DomainSpec(
        factors=(GAMMA_B1,), signs=((0, -1),),
        box=(0, Fraction(32, 27), 0, Fraction(256, 81)),
        cuts=((Y - X * X, 1),),
        x_breaks=(0, 1, Fraction(32, 27)), graded=True,
    )
    parts.density = _density((-GAMMA_B1,), (D["p"] - 1,))
    parts.metadata["alternative_coordinates"] = (
        "La forma original de esta solución usa coordenadas con √5; "
        "se transforma en la métrica de P53 salvo un factor constante y no se representa sobre ℚ."
    )
    parts.metadata["parametrization"] = list(B1_PARAMETRIZATION)
    return parts


def _build_b2(P, D) -> _Parts:
    parts = _build_p57(P, D)
    parts.domain = DomainSpec(
        factors=(GAMMA_B2_LINE, GAMMA_B2_CUBIC), signs=((0, 1), (1, 1)),
        box=(0, 1, Fraction(-1, 27), 1),
        x_breaks=(0, Fraction(1, 9), 1), graded=True,
    )
    parts.density = _density((GAMMA_B2_LINE, GAMMA_B2_CUBIC), (D["p"] - 1, D["q"] - 1))
    return parts


def b3_reduction(alpha, beta) -> dict:
    """Reducción de g_(α,β) al problema (1,1): α = 4β (ya lo es) o α = 4β − 4."""
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    if alpha == 4 * beta:
        return {"reducible": True, "kind": "already", "change": None}
    if alpha == 4 * beta - 4:
        change = AdmissibleChange(Fraction(1), Fraction(0), Fraction(-1), X * X - 1)
        return {"reducible": True, "kind": "change", "change": change,
                "target": {"alpha": 4 - 4 * beta, "beta": 1 - beta, "sign": -1}}
    return {"reducible": False, "kind": None, "change": None}


def multiple_factor_case(g: Cometric, gamma: BoundarySpec) -> bool:
    """
    True si (g, Γ) es g_(α,β) de P55.iii con Γ = y(y − x² + 1) y β ∈ {0, 1}:
    los únicos casos con det g no libre de cuadrados que se resuelven.
    """
    g1 = Y - X * X + 1
    if gamma.product.monic() != (Y * g1).monic():
        return False
    scale = g.a.coefficient(0, 1)
    if scale == 0:
        return False
    normalized = g.scale(1 / scale)
    beta = normalized.a.coefficient(2, 0) + 1
    alpha = normalized.c.coefficient(0, 2)
    if normalized != _parabola_metric(alpha, beta):
        return False
    return beta in (0, 1)


def _build_b3(P, D) -> _Parts:
    alpha, beta = P["alpha"], P["beta"]
    parts = _build_p55iii(P, D)
    g1 = Y - X * X + 1
    if beta == 0:
        parts.det_constant, parts.det_factors = alpha, [(Y, 1), (g1, 2)]
    elif beta == 1:
        parts.det_constant, parts.det_factors = alpha, [(Y, 2), (g1, 1)]
    parts.domain = DomainSpec(
        factors=(Y, g1), signs=((0, -1), (1, 1)),
        box=(-1, 1, -1, 0), x_breaks=(-1, 1), graded=True,
    )
    parts.density = _density((-Y, g1), (D["p"] - 1, D["q"] - 1))
    parts.singular = _verify_singular(Y * g1, [_sp(-1, 0, "A1"), _sp(1, 0, "A1")])
    reduction = b3_reduction(alpha, beta)
    parts.metadata["reduction_unit_weights"] = {
        "reducible": reduction["reducible"],
        "kind": reduction["kind"],
        "change": "(x, y) -> (x, x^2 - y - 1)" if reduction["kind"] == "change" else None,
    }
    parts.metadata["multiple_factor"] = beta in (0, 1)
    return parts


def _split_or_whole(base: RatPoly2, n_even: bool, whole: RatPoly2) -> tuple[RatPoly2, ...]:
    return _half_power_split(base) if n_even else (whole,)


def _build_b4(P, D) -> _Parts:
    m, n, c02 = int(P["m"]), int(P["n"]), P["c02"]
    g, gamma, gamma0 = _p43i_metric(m, n, c02)
    even = m % 2 == 0 and n % 2 == 0
    if even:
        half = (ONE - X) ** (m // 2) * (ONE + X) ** (n // 2)
        factors = _half_power_split(half)
        density = _density(factors, (D["p"] - 1, D["q"] - 1))
    else:
        factors = (gamma,)
        density = _density(factors, (D["p"] - 1,))
    bound = _y_bound(m, n)
    domain = DomainSpec(
        factors=factors, signs=tuple((k, 1) for k in range(len(factors))),
        box=(-1, 1, -bound, bound), cuts=((ONE - X * X, 1),),
        x_breaks=(-1, 1), graded=True,
    )
    singular = []
    if m >= 2:
        singular.append(_sp(1, 0, f"A{m - 1}"))
    if n >= 2:
        singular.append(_sp(-1, 0, f"A{n - 1}"))
    return _Parts(
        g, factors, domain=domain, density=density,
        det_factors=[(gamma0, 1)] + [(f, 1) for f in factors],
        singular=_verify_singular(gamma, singular),
        metadata={
            "realization_change": {"kind": "admissible", "alpha": "1/2", "beta": "1/2", "gamma": "1", "p": []},
            "realization_note": "X = (x + 1)/2 lleva Γ a 2^{m+n}(1 − X)^m X^n − y²; "
                                "la imagen de S³ usa además y = 2^{(m+n)/2}·Y.",
        },
    )


def _build_b5(P, D) -> _Parts:
    n, c02 = int(P["n"]), P["c02"]
    g, gamma2, gamma0 = _p43iii_metric(n, 1, c02)
    even = n % 2 == 0
    if even:
        split = _half_power_split((ONE - X) ** (n // 2))
        factors = (X,) + split
        density = _density(factors, (D["r"] - 1, D["p"] - 1, D["q"] - 1))
    else:
        factors = (X, gamma2)
        density = _density(factors, (D["r"] - 1, D["p"] - 1))
    domain = DomainSpec(
        factors=factors, signs=tuple((k, 1) for k in range(len(factors))),
        box=(0, 1, -1, 1), cuts=((ONE - X, 1),),
        x_breaks=(0, 1), graded=True,
    )
    singular = [_sp(0, 1, "A1"), _sp(0, -1, "A1")]
    if n >= 2:
        singular.append(_sp(1, 0, f"A{n - 1}"))
    return _Parts(
        g, factors, domain=domain, density=density,
        det_factors=[(gamma0, 1)] + [(f, 1) for f in factors],
        singular=_verify_singular(X * gamma2, singular),
    )


def _build_u1(P, D) -> _Parts:
    n, c02 = int(P["n"]), P["c02"]
    g, gamma = _p43ii_metric(n, c02)
    gamma0 = ONE * Fraction(n * n, 4) - X * c02
    even = n % 2 == 0
    if even:
        factors = _half_power_split(X ** (n // 2))
        exps = (D["p"] - 1, D["q"] - 1)
    else:
        factors = (gamma,)
        exps = (D["p"] - 1,)
    density = _density(factors, exps, ((-D["lam"], X),))
    lam = P.get("lam_value", Fraction(1))
    reach = Fraction(36) / lam if lam > 0 else Fraction(36)
    y_reach = (math.ceil(reach) + 1) ** math.ceil(n / 2)
    domain = DomainSpec(
        factors=factors, signs=tuple((k, 1) for k in range(len(factors))),
        box=(0, reach, -y_reach, y_reach), bounded=False,
        cuts=((X, 1),), x_breaks=(0, 1, reach) if reach > 1 else (0, reach), graded=True,
    )
    singular = [_sp(0, 0, f"A{n - 1}")] if n >= 2 else []
    return _Parts(
        g, factors, domain=domain, density=density,
        det_factors=[(gamma0, 1)] + [(f, 1) for f in factors],
        singular=_verify_singular(gamma, singular),
    )


_AXIS_NAMES = {0: "hermite", 1: "laguerre", 2: "jacobi"}


def _axis(kind: int, var: RatPoly2, D: Mapping, suffix: str, P: Mapping) -> tuple:
    """(g_k, factores, exponentes, partes de Q, intervalo, cortes) para un eje."""
    if kind == 0:
        lam = P.get(f"lam{suffix}_value", Fraction(1))
        half = Fraction(8) * max(1, math.ceil(1 / lam))
        return ONE, (), (), ((-D[f"lam{suffix}"] / 2, var * var),), (-half, half), ()
    if kind == 1:
        lam = P.get(f"lam{suffix}_value", Fraction(1))
        reach = Fraction(48) / lam
        return var, (var,), (D[f"p{suffix}"] - 1,), ((-D[f"lam{suffix}"], var),), (0, reach), ((var, 1),)
    return (ONE - var * var, (ONE - var, ONE + var), (D[f"p{suffix}"] - 1, D[f"q{suffix}"] - 1),
            (), (-1, 1), ())


def _product_bundle(kind_x: int, kind_y: int, alpha: Fraction, beta: Fraction, P, D) -> _Parts:
    gx, fx, ex, qx, ix, cx = _axis(kind_x, X, D, "1", P)
    gy, fy, ey, qy, iy, cy = _axis(kind_y, Y, D, "2", P)
    g = Cometric.diag(gx * alpha, gy * beta)
    factors = fx + fy
    signs = tuple((k, 1) for k in range(len(factors)))
    bounded = kind_x == 2 and kind_y == 2
    breaks = (ix[0], 0, ix[1]) if kind_x == 0 else (ix[0], ix[1])
    domain = DomainSpec(factors=factors, signs=signs, box=(ix[0], ix[1], iy[0], iy[1]),
                        bounded=bounded, cuts=(), x_breaks=breaks, graded=kind_x != 0)
    density = _density(factors, ex + ey, qx + qy)
    det_factors = [(f, 1) for f in factors]
    return _Parts(g, factors, domain=domain, density=density,
                  det_constant=alpha * beta, det_factors=det_factors or [(ONE, 1)], singular=[])


def _build_u2(P, D) -> _Parts:
    kx, ky = int(P["x_kind"]), int(P["y_kind"])
    parts = _product_bundle(kx, ky, P["alpha"], P["beta"], P, D)
    # Jacobi en un eje: det g = αβ(1 − x²)·g2; la factorización ya es la de los ejes
    delta = parts.metric.det
    if delta.deg_x > 2 or delta.deg_y > 2:
        raise PreconditionError("Un producto de soluciones 1D no puede tener deg Δ > 2 por variable")
    parts.metadata["axes"] = [_AXIS_NAMES[kx], _AXIS_NAMES[ky]]
    parts.metadata["strip"] = 0 in (kx, ky)
    return parts


def _build_rect(P, D) -> _Parts:
    return _product_bundle(2, 2, P["alpha"], P["beta"], P, D)


def _build_dim1_hermite(P, D) -> _Parts:
    D = dict(D, lam1=sympy.Integer(1), lam2=sympy.Integer(1))
    return _product_bundle(0, 0, Fraction(1), Fraction(1), P, D)


def _build_dim1_laguerre(P, D) -> _Parts:
    D = dict(D, p1=D["p"], p2=D["p"], lam1=sympy.Integer(1), lam2=sympy.Integer(1))
    return _product_bundle(1, 1, Fraction(1), Fraction(1), P, D)


def _build_dim1_jacobi(P, D) -> _Parts:
    D = dict(D, p1=D["p"], q1=D["q"], p2=D["p"], q2=D["q"])
    return _product_bundle(2, 2, Fraction(1), Fraction(1), P, D)


# ========================================
# REGISTRO
# ========================================

def _R(name, default=None, **kw) -> ParamSpec:
    return ParamSpec(name, "rational", default, **kw)


def _I(name, default=None, minimum=None, choices=None) -> ParamSpec:
    return ParamSpec(name, "int", default, minimum=minimum, choices=choices)


def _D(name, default=1, **kw) -> ParamSpec:
    return ParamSpec(name, "rational", default, role="density", **kw)


def _nonzero(*names):
    return lambda P: any(P[n] != 0 for n in names)


ENTRIES: dict[str, CatalogEntry] = {}


def _register(entry: CatalogEntry) -> None:
    ENTRIES[entry.id] = entry


_register(CatalogEntry(
    "P43.i", "Γ = (1−x)^m(1+x)^n − y²", "pesos (1, k): Γ cuadrática en y",
    (_I("m", 1, minimum=1), _I("n", 1, minimum=1), _R("c02", -1)),
    (), _build_p43i))
_register(CatalogEntry(
    "P43.ii", "Γ = x^n − y²", "pesos (1, k): Γ cuadrática en y",
    (_I("n", 1, minimum=1), _R("c02", -1)),
    (), _build_p43ii))
_register(CatalogEntry(
    "P43.iii", "Γ = x^k((x0 − x)^n − y²)", "pesos (1, k): Γ cuadrática en y",
    (_I("n", 1, minimum=0), _I("k", 1, choices=(0, 1)), _I("x0", 1, choices=(0, 1)), _R("c02", -1)),
    (("(n,c02)≠(0,0)", lambda P: (P["n"], P["c02"]) != (0, 0)),
     ("c02≠−n²/4 si x0=0", lambda P: P["x0"] != 0 or P["c02"] != -Fraction(int(P["n"]) ** 2, 4))),
    _build_p43iii))
_register(CatalogEntry(
    "P43.iv", "Γ = x^k(1 − y²)", "pesos (1, k): Γ cuadrática en y",
    (_I("k", 1, choices=(0, 1)), _R("c02", -1)),
    (("c02≠0", _nonzero("c02")),), _build_p43iv))
_register(CatalogEntry(
    "P43.v", "Γ = (1 − x²)(1 − y²)", "pesos (1, k): Γ cuadrática en y",
    (_R("c02", -1),),
    (("c02≠0", _nonzero("c02")),), _build_p43v))
_register(CatalogEntry(
    "P44.i", "(x², −nxy, n²y² − c0Γ1; x^kΓ1), Γ1 = x^n y − 1", "pesos (1, k): Γ lineal en y",
    (_I("n", 1, minimum=1), _I("k", 1, choices=(0, 1)), _R("c0", 1)),
    (("c0≠0", _nonzero("c0")),), _build_p44i))
_register(CatalogEntry(
    "P44.ii", "(x², b11Γ − 1, y² − c0Γ; Γ), Γ = xy − 1", "pesos (1, k): Γ lineal en y",
    (_R("b11", 0), _R("c0", 1)),
    (("(b11,c0)≠(−1,0)", lambda P: (P["b11"], P["c0"]) != (-1, 0)),), _build_p44ii))
_register(CatalogEntry(
    "P44.iii", "(a0, b1y, c02y² + c1y; y)", "pesos (1, k): Γ lineal en y",
    (_R("a00", 1), _R("a10", 0), _R("a20", 0), _R("b10", 0), _R("b11", 0),
     _R("c02", 0), _R("c10", 0), _R("c11", 0), _R("c12", 1)),
    (), _build_p44iii))
_register(CatalogEntry(
    "P44.iv", "(a10x + a20x², b11xy, c02y² + c1y; xy)", "pesos (1, k): Γ lineal en y",
    (_R("a10", 1), _R("a20", 0), _R("b11", 0), _R("c02", 0), _R("c10", 1), _R("c11", 0), _R("c12", 0)),
    (), _build_p44iv))
_register(CatalogEntry(
    "P44.v", "(1 − x², 0, c02y² + c1y; (1 − x²)y)", "pesos (1, k): Γ lineal en y",
    (_R("c02", 0), _R("c10", 1), _R("c11", 0), _R("c12", 0)),
    (), _build_p44v))
_register(CatalogEntry(
    "P44.vi", "(0, 1 − xy, (1 − xy)c0; 1 − xy)", "pesos (1, k): Γ lineal en y",
    (_R("c0", 1),), (), _build_p44vi))
_register(CatalogEntry(
    "P53", "Γ irreducible de grado 3 en y, g cúbica única", "pesos (1, 2): Γ cúbica irreducible",
    (), (), _build_p53))
_register(CatalogEntry(
    "P55.i", "Γ = y² − x³, g = g_(α,β,μ)", "pesos (1, 2): Γ con rama cuspidal o parabólica",
    (_R("alpha", -18), _R("beta", Fraction(-3, 2)), _R("mu", Fraction(1, 2))),
    (), _build_p55i))
_register(CatalogEntry(
    "P55.ii", "Γ = y(y − x²), g = g_(α,β,μ)", "pesos (1, 2): Γ con rama cuspidal o parabólica",
    (_R("alpha", 1), _R("beta", 0), _R("mu", 1, choices=(0, 1))),
    (("(α,β−β²,μ)≠(0,0,0)", lambda P: (P["alpha"], P["beta"] - P["beta"] ** 2, P["mu"]) != (0, 0, 0)),),
    _build_p55ii))
_register(CatalogEntry(
    "P55.iii", "Γ = y(y − x² + 1), g = g_(α,β)", "pesos (1, 2): Γ con rama cuspidal o parabólica",
    (_R("alpha", -1), _R("beta", 0)),
    (("(α,β−β²)≠(0,0)", lambda P: (P["alpha"], P["beta"] - P["beta"] ** 2) != (0, 0)),),
    _build_p55iii))
_register(CatalogEntry(
    "P57", "Γ = Γ1Γ2 reducible, g = 2·g_(α,β,μ) en (−18, −3/2, 1/2)", "pesos (1, 2): Γ reducible con cúspide",
    (), (), _build_p57))
_register(CatalogEntry(
    "B1", "Cociente dodecaédrico", "dominio acotado, pesos (1, 2)",
    (_D("p", 1),), (), _build_b1, kind="bounded",
    reflection={"space": "S2", "angles": "2,3,5", "boundary": "Dodecahedral quotient", "w": 2}))
_register(CatalogEntry(
    "B2", "Cúbica cuspidal con parábola cúbicamente tangente", "dominio acotado, pesos (1, 2)",
    (_D("p", 1), _D("q", 1)), (), _build_b2, kind="bounded",
    reflection={"space": "R2", "angles": "2,3,6",
                "boundary": "Cubic y^2=x^3 with a cubically tangent parabola", "w": 2}))
_register(CatalogEntry(
    "B3", "Biángulo parabólico", "dominio acotado, pesos (1, 2)",
    (_R("alpha", -1), _R("beta", 0), _D("p", 1), _D("q", 1)),
    (("α < 0", lambda P: P["alpha"] < 0), ("β ≤ 0", lambda P: P["beta"] <= 0)),
    _build_b3, kind="bounded"))
_register(CatalogEntry(
    "B4", "Dominio acotado de P43.i", "dominio acotado, pesos (1, n)",
    (_I("m", 1, minimum=1), _I("n", 1, minimum=1), _R("c02", -1),
     _D("p", 1), _D("q", None, default_from="p")),
    (("c02 < 0", lambda P: P["c02"] < 0),), _build_b4, kind="bounded",
    reflection={"space": "S2", "angles": "n,n", "boundary": "y^2=(1-x^2)^n (m = n)", "w": "n"}))
_register(CatalogEntry(
    "B5", "Dominio acotado de P43.iii, k = x0 = 1", "dominio acotado, pesos (1, n)",
    (_I("n", 1, minimum=1), _R("c02", -1), _D("p", 1), _D("q", None, default_from="p"), _D("r", 1)),
    (("c02 ≤ 0", lambda P: P["c02"] <= 0),), _build_b5, kind="bounded",
    reflection={"space": "S2", "angles": "2,2,n", "boundary": "(y^2-x^n)(x-1)=0", "w": "n"}))
_register(CatalogEntry(
    "U1", "Dominio no acotado de P43.ii", "dominio no acotado",
    (_I("n", 1, minimum=1), _R("c02", -1), _D("p", 1), _D("q", None, default_from="p"), _D("lam", 1)),
    (("c02 ≤ 0", lambda P: P["c02"] <= 0),), _build_u1, kind="unbounded"))
_register(CatalogEntry(
    "U2", "Producto de soluciones 1D", "dominio no acotado, producto de soluciones 1D",
    (_I("x_kind", 0, choices=(0, 1, 2)), _I("y_kind", 0, choices=(0, 1, 2)),
     _R("alpha", 1), _R("beta", 1),
     _D("p1", 1), _D("q1", 1), _D("lam1", 1), _D("p2", 1), _D("q2", 1), _D("lam2", 1)),
    (("α > 0", lambda P: P["alpha"] > 0), ("β > 0", lambda P: P["beta"] > 0)),
    _build_u2, kind="unbounded"))
_register(CatalogEntry(
    "RECT", "Rectángulo, g = diag(α(1 − x²), β(1 − y²))", "producto de soluciones 1D",
    (_R("alpha", 1), _R("beta", 1), _D("p1", 1), _D("q1", 1), _D("p2", 1), _D("q2", 1)),
    (("α > 0", lambda P: P["alpha"] > 0), ("β > 0", lambda P: P["beta"] > 0)),
    _build_rect, kind="bounded",
    reflection={"space": "R2", "angles": "2,2,2,2", "boundary": "Rectangle", "w": 1}))
_register(CatalogEntry(
    "DIM1.hermite", "Hermite × Hermite", "familias clásicas 1D",
    (), (), _build_dim1_hermite, kind="unbounded"))
_register(CatalogEntry(
    "DIM1.laguerre", "Laguerre × Laguerre", "familias clásicas 1D",
    (_D("p", 1),), (), _build_dim1_laguerre, kind="unbounded"))
_register(CatalogEntry(
    "DIM1.jacobi", "Jacobi × Jacobi", "familias clásicas 1D",
    (_D("p", 1), _D("q", 1)), (), _build_dim1_jacobi, kind="bounded"))

# Pesos fijos; el resto usa el menor W ≥ 3 con (A1) para (1, W)
_FIXED_WEIGHTS = {
    "P53": Weights(1, 2), "P55.i": Weights(1, 2), "P55.ii": Weights(1, 2), "P55.iii": Weights(1, 2),
    "P57": Weights(1, 2), "B1": Weights(1, 2), "B2": Weights(1, 2), "B3": Weights(1, 2),
    "RECT": Weights(1, 1), "DIM1.hermite": Weights(1, 1), "DIM1.laguerre": Weights(1, 1),
    "DIM1.jacobi": Weights(1, 1),
}


# ========================================
# OPERACIONES
# ========================================

def get_entry(entry_id: str) -> CatalogEntry:
    if entry_id not in ENTRIES:
        raise UnknownEntryError(f"Entrada de catálogo desconocida: '{entry_id}'")
    return ENTRIES[entry_id]


def list_entries() -> list[dict]:
    return [entry.summary() for entry in ENTRIES.values()]


def parse_assignments(text: Optional[str]) -> dict[str, Fraction]:
    """'m=1,n=2,c02=-1' -> {'m': 1, 'n': 2, 'c02': -1} con racionales exactos."""
    out: dict[str, Fraction] = {}
    if not text:
        return out
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise InvalidParameterError(f"Asignación mal formada: '{chunk}' (se espera nombre=valor)",
                                        predicate="schema")
        name, value = (s.strip() for s in chunk.split("=", 1))
        try:
            out[name] = to_fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InvalidParameterError(f"Valor no racional para '{name}': '{value}'",
                                        predicate="schema") from None
    return out


def resolve_params(entry: CatalogEntry, given: Optional[Mapping] = None) -> dict[str, Fraction]:
    """Aplica valores por defecto, tipos y predicados; nombra el predicado violado."""
    given = dict(given or {})
    names = {p.name for p in entry.params}
    unknown = sorted(set(given) - names)
    if unknown:
        raise InvalidParameterError(f"Parámetros desconocidos para {entry.id}: {unknown}", predicate="schema")
    values: dict[str, Fraction] = {}
    for spec in entry.params:
        raw = given.get(spec.name)
        if raw is None and spec.default_from:
            raw = given.get(spec.default_from, values.get(spec.default_from))
        if raw is None:
            raw = spec.default
        if raw is None:
            raise InvalidParameterError(f"Falta el parámetro '{spec.name}'", predicate=spec.name)
        value = to_fraction(raw)
        if spec.kind == "int":
            if value.denominator != 1:
                raise InvalidParameterError(f"'{spec.name}' debe ser entero", predicate=f"{spec.name} ∈ ℤ")
            if spec.minimum is not None and value < spec.minimum:
                label = f"{spec.name} ≥ {spec.minimum}"
                raise InvalidParameterError(f"Predicado violado: {label}", predicate=label)
        if spec.choices is not None and value not in spec.choices:
            label = f"{spec.name} ∈ {{{', '.join(str(c) for c in spec.choices)}}}"
            raise InvalidParameterError(f"Predicado violado: {label}", predicate=label)
        values[spec.name] = value
    for label, predicate in entry.predicates:
        if not predicate(values):
            raise InvalidParameterError(f"Predicado violado: {label}", predicate=label)
    return values


def _density_values(entry: CatalogEntry, values: Mapping, symbolic: bool) -> dict:
    out = {}
    for spec in entry.params:
        if spec.role != "density":
            continue
        if symbolic:
            # cada parámetro con su propio símbolo; q = p solo al resolver valores numéricos
            out[spec.name] = sympy.Symbol(spec.name)
        else:
            out[spec.name] = _q(values[spec.name])
    return out


def _check_det(parts: _Parts, delta: RatPoly2) -> None:
    if parts.det_factors is None:
        parts.det_factors = [(delta, 1)]
        parts.det_constant = Fraction(1)
        return
    product = RatPoly2.const(parts.det_constant)
    for f, mult in parts.det_factors:
        product = product * f ** mult
    if product != delta:
        raise PreconditionError("La factorización registrada de det g no coincide")


def instantiate(entry_id: str, params: Optional[Mapping] = None, symbolic_density: bool = False) -> Bundle:
    """
    Construye y verifica el Bundle de una entrada.
    Con symbolic_density=True los exponentes quedan en los símbolos p, q, r, lam, ...
    """
    entry = get_entry(entry_id)
    values = resolve_params(entry, params)
    logger.info(f"🔧 Instanciando {entry_id} con {({k: format_fraction(v) for k, v in values.items()})}")
    P = dict(values)
    for name in ("lam", "lam1", "lam2"):
        if name in values:
            P[f"{name}_value"] = values[name]
    parts = entry.builder(P, _density_values(entry, values, symbolic_density))

    g = parts.metric
    delta = g.det
    if delta.is_zero:
        raise InvalidParameterError(f"det g ≡ 0 para {entry_id}", predicate="det g ≠ 0")
    weights = parts.weights or _FIXED_WEIGHTS.get(entry_id) or _infinite_weight(g)
    if not check_A1(g, weights):
        raise PreconditionError(f"{entry_id}: (A1) falla para w = {weights}")
    boundary = BoundarySpec(parts.boundary)
    cert = check_A2_A3(g, boundary, weights)
    if cert is None or not cert.degree_ok:
        raise PreconditionError(f"{entry_id}: (A2)/(A3) falla para w = {weights}")
    _check_det(parts, delta)

    metadata = dict(parts.metadata)
    if parts.singular is not None:
        metadata["singular_points"] = [pt.to_json() for pt in parts.singular]
    if entry.reflection:
        metadata["reflection"] = entry.reflection
    if entry.classification:
        metadata["classification"] = entry.classification
    bundle = Bundle(
        entry_id=entry_id,
        params=values,
        weights=weights,
        metric=g,
        boundary=boundary,
        domain=parts.domain,
        density=parts.density,
        det_constant=parts.det_constant,
        det_factors=tuple(parts.det_factors),
        citations=(entry.citation,),
        metadata=metadata,
    )
    logger.info(f"✅ {entry_id}: w = {weights}, S1 = {cert.S1}, S2 = {cert.S2}")
    return bundle


def _infinite_weight(g: Cometric) -> Weights:
    big = minimal_infinite_weight(g)
    if big is None:
        raise PreconditionError("No existe W con (A1) para w = (1, W)")
    return Weights(1, big)


def singular_points(entry_id: str, params: Optional[Mapping] = None) -> list[SingularPoint]:
    entry = get_entry(entry_id)
    values = resolve_params(entry, params)
    P = dict(values)
    for name in ("lam", "lam1", "lam2"):
        if name in values:
            P[f"{name}_value"] = values[name]
    parts = entry.builder(P, _density_values(entry, values, symbolic=True))
    if parts.singular is None:
        raise PreconditionError(f"La entrada {entry_id} no tiene datos de puntos singulares")
    return parts.singular


# ========================================
# CURVATURA
# ========================================

CONVENTIONS = ("half_laplacian", "cometric_inverse")


def _brioschi(E, F, G, x, y):
    """Curvatura de Gauss de E du² + 2F du dv + G dv² (fórmula de Brioschi)."""
    Eu, Ev = sympy.diff(E, x), sympy.diff(E, y)
    Fu, Fv = sympy.diff(F, x), sympy.diff(F, y)
    Gu, Gv = sympy.diff(G, x), sympy.diff(G, y)
    Evv, Guu, Fuv = sympy.diff(Ev, y), sympy.diff(Gu, x), sympy.diff(Fu, y)
    half = sympy.Rational(1, 2)
    m1 = sympy.Matrix([
        [-half * Evv + Fuv - half * Guu, half * Eu, Fu - half * Ev],
        [Fv - half * Gu, E, F],
        [half * Gv, F, G],
    ])
    m2 = sympy.Matrix([
        [0, half * Ev, half * Gu],
        [half * Ev, E, F],
        [half * Gu, F, G],
    ])
    return m1, m2, E * G - F * F


def metric_curvature(g: Cometric, point, convention: str = "half_laplacian", exact: bool = True):
    """
    K de la métrica riemanniana g⁻¹ (o ½g⁻¹ si L = ½Δ_g) en un punto racional.
    Derivadas simbólicas exactas, evaluación exacta.
    """
    if convention not in CONVENTIONS:
        raise PreconditionError(f"Convención desconocida '{convention}'; use {CONVENTIONS}")
    px, py = (to_fraction(v) for v in point)
    if g.det.evaluate(px, py) == 0:
        raise PreconditionError(f"det g = 0 en ({px}, {py})")
    x, y = sympy.symbols("x y")
    a, b, c = (p.to_sympy(x, y) for p in (g.a, g.b, g.c))
    delta = a * c - b * b
    scale = sympy.Rational(1, 2) if convention == "half_laplacian" else sympy.Integer(1)
    E, F, G = scale * c / delta, -scale * b / delta, scale * a / delta
    m1, m2, disc = _brioschi(E, F, G, x, y)
    subs = {x: sympy.Rational(px.numerator, px.denominator), y: sympy.Rational(py.numerator, py.denominator)}
    num = m1.subs(subs).det() - m2.subs(subs).det()
    den = disc.subs(subs) ** 2
    value = sympy.simplify(num / den)
    if exact:
        if not value.is_Rational:
            raise PreconditionError(f"Curvatura no racional: {value}")
        return Fraction(int(value.p), int(value.q))
    return float(value)


def curvature(entry_id: str, params: Optional[Mapping], point, convention: str = "half_laplacian",
              exact: bool = True):
    bundle = instantiate(entry_id, params)
    if bundle.domain is not None and not bundle.domain.contains(*point):
        raise PreconditionError(f"El punto {tuple(str(to_fraction(v)) for v in point)} no está en Ω")
    return metric_curvature(bundle.metric, point, convention, exact)


def closed_form_curvature(entry_id: str, params: Optional[Mapping], point) -> Fraction:
    """−λn²(2(n²+α)x^k + α)/((n²+α)x^k − α)², (k, λ, α) = (2, 2, c02) en B4 (m = n), (1, ½, 4c02) en B5."""
    values = resolve_params(get_entry(entry_id), params)
    n = int(values["n"])
    if entry_id == "B4":
        if int(values["m"]) != n:
            raise PreconditionError("La forma cerrada de B4 requiere m = n")
        k, lam, alpha = 2, Fraction(2), values["c02"]
    elif entry_id == "B5":
        k, lam, alpha = 1, Fraction(1, 2), 4 * values["c02"]
    else:
        raise PreconditionError(f"Sin forma cerrada de curvatura para {entry_id}")
    xk = to_fraction(point[0]) ** k
    n2 = n * n
    den = ((n2 + alpha) * xk - alpha) ** 2
    if den == 0:
        raise PreconditionError("Denominador nulo en la forma cerrada")
    return -lam * n2 * (2 * (n2 + alpha) * xk + alpha) / den


# ========================================
# REALIZACIÓN DESDE S³
# ========================================

def realization_map(m: int, n: int, z1: complex, z2: complex) -> dict:
    """(z1, z2) ∈ S³ ↦ (X, Y) = (|z1|², Re(z1ⁿ·conj(z2)^m)) ↦ (x, y) = (2X − 1, 2^{(m+n)/2}Y)."""
    norm = abs(z1) ** 2 + abs(z2) ** 2
    if abs(norm - 1.0) > SPHERE_TOL:
        raise PreconditionError(f"El punto no está en S³: |z|² = {norm!r}")
    big_x = abs(z1) ** 2
    big_y = (z1 ** n * np.conj(z2) ** m).real
    boundary = (1 - big_x) ** m * big_x ** n - big_y ** 2
    if boundary < -SPHERE_TOL:
        raise PreconditionError(f"Imagen fuera del dominio: (1−X)^m X^n − Y² = {boundary!r}")
    return {
        "X": float(big_x), "Y": float(big_y),
        "x": float(2 * big_x - 1), "y": float(2 ** ((m + n) / 2) * big_y),
        "boundary_value": float(boundary),
    }


def sample_sphere(count: int, seed: int = 0) -> np.ndarray:
    """Puntos casi aleatorios de S³ ⊂ ℂ² (secuencia de Halton sin aleatorizar)."""
    sampler = qmc.Halton(d=3, scramble=False)
    if seed:
        sampler.fast_forward(seed)
    u, v, w = sampler.random(count).T
    z1 = np.sqrt(u) * np.exp(2j * np.pi * v)
    z2 = np.sqrt(1 - u) * np.exp(2j * np.pi * w)
    return np.stack([z1, z2], axis=1)


def realization_check(m: int, n: int, count: int = 1000, seed: int = 0, near: float = 1e-6) -> dict:
    """Comprueba (1−X)^m Xⁿ − Y² ≥ −1e−12 sobre la muestra y que algún punto toca el borde."""
    points = sample_sphere(count, seed)
    values = np.array([realization_map(m, n, z1, z2)["boundary_value"] for z1, z2 in points])
    result = {
        "m": m, "n": n, "count": int(count), "seed": int(seed),
        "min_boundary_value": float(values.min()),
        "min_abs_boundary_value": float(np.abs(values).min()),
    }
    result["passed"] = bool(result["min_boundary_value"] >= -SPHERE_TOL and result["min_abs_boundary_value"] <= near)
    logger.info(f"{'✅' if result['passed'] else '❌'} Realización (m, n) = ({m}, {n}): {result}")
    return result
