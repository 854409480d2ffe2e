# dopkit/branches.py
"""
Ramas locales de la curva Γ = 0.

Una rama γ = (ξ(t), η(t)) se da como par de series de Laurent truncadas con
coeficientes racionales. Aquí viven la valoración v_γ, las condiciones de
tangencia y de valoraciones, las transiciones de cartas de la superficie F₂ y la
parametrización de la curva dual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Optional, Sequence, Union

from .algdop import Cometric
from .errors import ChartError, PreconditionError
from .poly import (
    RatPoly2, Weights, exact_div, format_fraction, gcd, newton_polygon, to_fraction, weighted_degree,
)

# Importar logger
try:
    from utils.logger import get_logger
    logger = get_logger('branches')
except ImportError:
    import logging
    logger = logging.getLogger('branches')


INF = float("inf")
INCONCLUSIVE = "inconclusive"
DEFAULT_TRUNC_ORDER = 64

Valuation = Union[int, float, str]


def _min_opt(*values: Optional[int]) -> Optional[int]:
    known = [v for v in values if v is not None]
    return min(known) if known else None


# ========================================
# SERIES TRUNCADAS
# ========================================

class TruncatedSeries:
    """
    Serie de Laurent Σ c_e t^e conocida exactamente para e ≤ precision.
    precision = None significa serie exacta (polinomio de Laurent).
    """

    __slots__ = ("_coeffs", "precision")

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None, precision: Optional[int] = None):
        clean: dict[int, Fraction] = {}
        for exp, c in (coeffs or {}).items():
            value = to_fraction(c)
            if value != 0 and (precision is None or exp <= precision):
                clean[int(exp)] = value
        self._coeffs = clean
        self.precision = precision

    @classmethod
    def const(cls, value, precision: Optional[int] = None) -> "TruncatedSeries":
        return cls({0: value}, precision)

    @classmethod
    def monomial(cls, exp: int, coeff=1, precision: Optional[int] = None) -> "TruncatedSeries":
        return cls({exp: coeff}, precision)

    @classmethod
    def from_poly_t(cls, p: RatPoly2, precision: Optional[int] = None) -> "TruncatedSeries":
        """Polinomio univariado (en la variable x, leída como t)."""
        if p.deg_y > 0:
            raise PreconditionError("Se esperaba un polinomio en una sola variable")
        return cls({i: c for (i, _), c in p.items()}, precision)

    @classmethod
    def from_json(cls, data, precision: Optional[int] = None) -> "TruncatedSeries":
        if isinstance(data, dict):
            precision = data.get("precision", precision)
            data = data["terms"]
        return cls({int(e): to_fraction(c) for e, c in data}, precision)

    def to_json(self) -> dict:
        return {"terms": [[e, format_fraction(c)] for e, c in sorted(self._coeffs.items())],
                "precision": self.precision}

    @property
    def coeffs(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._coeffs)

    def coefficient(self, exp: int) -> Fraction:
        return self._coeffs.get(exp, Fraction(0))

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def lower_bound(self) -> float:
        """Cota inferior del orden: exponente mínimo conocido, o precision + 1."""
        if self._coeffs:
            return min(self._coeffs)
        if self.precision is None:
            return INF
        return self.precision + 1

    def order(self) -> Valuation:
        """ord_t; INF para la serie exacta nula, INCONCLUSIVE si todo lo conocido es cero."""
        if self._coeffs:
            return min(self._coeffs)
        return INF if self.precision is None else INCONCLUSIVE

    def is_constant(self) -> bool:
        return set(self._coeffs) <= {0}

    # --- Aritmética ---

    @staticmethod
    def _coerce(other) -> Optional["TruncatedSeries"]:
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TruncatedSeries.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prec = _min_opt(self.precision, o.precision)
        out = dict(self._coeffs)
        for e, c in o._coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return TruncatedSeries(out, prec)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries({e: -c for e, c in self._coeffs.items()}, self.precision)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            f = Fraction(other)
            return TruncatedSeries({e: c * f for e, c in self._coeffs.items()}, self.precision)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if (not self._coeffs and self.is_exact) or (not other._coeffs and other.is_exact):
            return TruncatedSeries({}, None)
        bounds = []
        if self.precision is not None:
            bounds.append(self.precision + other.lower_bound())
        if other.precision is not None:
            bounds.append(other.precision + self.lower_bound())
        prec = int(min(bounds)) if bounds and min(bounds) != INF else None
        out: dict[int, Fraction] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                if prec is not None and e > prec:
                    continue
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return TruncatedSeries(out, prec)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = TruncatedSeries.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def derivative(self) -> "TruncatedSeries":
        prec = None if self.precision is None else self.precision - 1
        return TruncatedSeries({e - 1: e * c for e, c in self._coeffs.items() if e != 0}, prec)

    def inverse(self, cap: int = DEFAULT_TRUNC_ORDER) -> "TruncatedSeries":
        """1/s; para series exactas se trunca a precisión relativa cap."""
        if not self._coeffs:
            raise ChartError("No se puede invertir una serie nula")
        v = min(self._coeffs)
        lead = self._coeffs[v]
        rel = cap if self.precision is None else self.precision - v
        # s = lead·t^v·(1 + u), u con exponentes positivos
        u = TruncatedSeries({e - v: c / lead for e, c in self._coeffs.items() if e != v}, rel)
        term = TruncatedSeries.const(1, rel)
        total = TruncatedSeries.const(1, rel)
        for _ in range(rel + 1):
            term = term * (-u)
            if not term._coeffs:
                break
            total = total + term
        shifted = {e - v: c / lead for e, c in total._coeffs.items()}
        return TruncatedSeries(shifted, rel - v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ChartError("División por cero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._coeffs == o._coeffs and self.precision == o.precision

    def __hash__(self) -> int:
        return hash((frozenset(self._coeffs.items()), self.precision))

    def __repr__(self) -> str:
        body = " + ".join(f"{format_fraction(c)}*t^{e}" for e, c in sorted(self._coeffs.items())) or "0"
        tail = "" if self.precision is None else f" + O(t^{self.precision + 1})"
        return f"TruncatedSeries({body}{tail})"


# ========================================
# GERMEN DE RAMA Y VALORACIÓN
# ========================================

@dataclass(frozen=True)
class BranchGerm:
    """γ = (ξ, η), exacto hasta t^trunc_order inclusive."""

    xi: TruncatedSeries
    eta: TruncatedSeries
    trunc_order: int = DEFAULT_TRUNC_ORDER

    def __post_init__(self):
        if self.xi.is_constant() and self.eta.is_constant():
            raise PreconditionError("Al menos una coordenada de la rama debe ser no constante")
        for name, s in (("ξ", self.xi), ("η", self.eta)):
            if s.coeffs and not -self.trunc_order <= min(s.coeffs) <= self.trunc_order:
                raise PreconditionError(f"Exponente inicial de {name} fuera de [−N, N]")
        # Series exactas heredan la ventana del germen
        if self.xi.precision is None:
            object.__setattr__(self, "xi", TruncatedSeries(self.xi.coeffs, self.trunc_order))
        if self.eta.precision is None:
            object.__setattr__(self, "eta", TruncatedSeries(self.eta.coeffs, self.trunc_order))

    @classmethod
    def from_polys(cls, xi: RatPoly2, eta: RatPoly2, trunc_order: int = DEFAULT_TRUNC_ORDER) -> "BranchGerm":
        return cls(TruncatedSeries.from_poly_t(xi), TruncatedSeries.from_poly_t(eta), trunc_order)

    @classmethod
    def parse(cls, xi: str, eta: str, trunc_order: int = DEFAULT_TRUNC_ORDER) -> "BranchGerm":
        """Texto polinomial en t, p.ej. BranchGerm.parse("t^2", "t^3")."""
        return cls.from_polys(_parse_t(xi), _parse_t(eta), trunc_order)

    @classmethod
    def from_json(cls, data: dict) -> "BranchGerm":
        n = int(data.get("trunc_order", DEFAULT_TRUNC_ORDER))

        def series(value):
            if isinstance(value, str):
                return TruncatedSeries.from_poly_t(_parse_t(value))
            return TruncatedSeries.from_json(value)

        return cls(series(data["xi"]), series(data["eta"]), n)

    def to_json(self) -> dict:
        return {"xi": self.xi.to_json(), "eta": self.eta.to_json(), "trunc_order": self.trunc_order}

    def compose(self, p: RatPoly2) -> TruncatedSeries:
        return p.compose(self.xi, self.eta, zero=TruncatedSeries({}, None))

    def cancellation_depth(self, p: RatPoly2) -> int:
        """Pérdida máxima de precisión al componer p con γ."""
        worst = max(0, -_low_int(self.xi), -_low_int(self.eta))
        return max(p.total_degree, 0) * worst


def _low_int(s: TruncatedSeries) -> int:
    return min(s.coeffs) if s.coeffs else 0


def _parse_t(text: str) -> RatPoly2:
    p = RatPoly2.parse(text.replace("t", "x"))
    if p.deg_y > 0:
        raise PreconditionError("Las series de una rama dependen solo de t")
    return p


def _series_valuation(s: TruncatedSeries, germ: BranchGerm, depth: int) -> Valuation:
    if s.coeffs:
        return min(s.coeffs)
    if s.precision is None or s.precision >= germ.trunc_order - depth:
        return INF
    return INCONCLUSIVE


def valuation(germ: BranchGerm, p: RatPoly2) -> Valuation:
    """v_γ(p) = ord_t p(ξ(t), η(t)); INF certificado o INCONCLUSIVE."""
    if p.is_zero:
        return INF
    composed = germ.compose(p)
    return _series_valuation(composed, germ, germ.cancellation_depth(p))


def _identity_status(series: TruncatedSeries, germ: BranchGerm, depth: int) -> Union[bool, str]:
    v = _series_valuation(series, germ, depth)
    if v == INCONCLUSIVE:
        return INCONCLUSIVE
    return v == INF


def check_tangency(germ: BranchGerm, g: Cometric) -> Union[bool, str]:
    """b(γ)ξ̇ = a(γ)η̇ y c(γ)ξ̇ = b(γ)η̇ sobre la ventana de truncamiento."""
    a, b, c = (germ.compose(p) for p in (g.a, g.b, g.c))
    dxi, deta = germ.xi.derivative(), germ.eta.derivative()
    depth = max(germ.cancellation_depth(p) for p in (g.a, g.b, g.c)) + 1
    first = _identity_status(b * dxi - a * deta, germ, depth)
    second = _identity_status(c * dxi - b * deta, germ, depth)
    if first is False or second is False:
        return False
    if first == INCONCLUSIVE or second == INCONCLUSIVE:
        return INCONCLUSIVE
    return True


def check_valuation_balance(germ: BranchGerm, g: Cometric) -> Union[bool, str]:
    """v(a) − v(b) = v(b) − v(c) = ord ξ̇ − ord η̇ (ξ, η no constantes)."""
    if germ.xi.is_constant() or germ.eta.is_constant():
        raise PreconditionError("La condición de valoraciones requiere ξ y η no constantes")
    va, vb, vc = (valuation(germ, p) for p in (g.a, g.b, g.c))
    if any(v in (INF, INCONCLUSIVE) for v in (va, vb, vc)):
        return INCONCLUSIVE
    target = germ.xi.derivative().order() - germ.eta.derivative().order()
    return va - vb == vb - vc == target


def newton_consistency(germ: BranchGerm, gamma: RatPoly2) -> Optional[bool]:
    """
    Si ord_t γ es la normal interior de una arista del polígono de Newton de Γ,
    v_γ(Γ) = ∞ debe coincidir con la anulación real de Γ en γ.
    Devuelve None cuando ord_t γ no es normal de ninguna arista.
    """
    ox, oy = germ.xi.order(), germ.eta.order()
    if not isinstance(ox, int) or not isinstance(oy, int):
        return None
    normals = newton_polygon(gamma).inward_normals()
    if not any(nx * oy == ny * ox and nx * ox + ny * oy > 0 for nx, ny in normals):
        return None
    v = valuation(germ, gamma)
    if v == INCONCLUSIVE:
        return None
    composed = germ.compose(gamma)
    return (v == INF) == (not composed.coeffs)


# ========================================
# CARTAS DE F₂
# ========================================
# Transiciones desde la carta principal:
#   1: (1/x, y/x²)   2: (x, 1/y)   3: (1/x, x²/y)

def _to_main(u, v, chart: int):
    if chart == 0:
        return u, v
    if chart == 1:
        x = _inv(u)
        return x, v * x * x
    if chart == 2:
        return u, _inv(v)
    if chart == 3:
        x = _inv(u)
        return x, _inv(u * u * v)
    raise ChartError(f"Carta desconocida: {chart}")


def _from_main(x, y, chart: int):
    if chart == 0:
        return x, y
    if chart == 1:
        ix = _inv(x)
        return ix, y * ix * ix
    if chart == 2:
        return x, _inv(y)
    if chart == 3:
        return _inv(x), x * x * _inv(y)
    raise ChartError(f"Carta desconocida: {chart}")


def _inv(value):
    if isinstance(value, TruncatedSeries):
        return value.inverse()
    value = to_fraction(value)
    if value == 0:
        raise ChartError("El punto está sobre el lugar excluido de la carta")
    return 1 / value


def chart_transform(point, from_chart: int, to_chart: int):
    """Transición exacta entre cartas 0..3 para puntos racionales o series."""
    u, v = point
    if not isinstance(u, TruncatedSeries):
        u, v = to_fraction(u), to_fraction(v)
    x, y = _to_main(u, v, from_chart)
    return _from_main(x, y, to_chart)


# ========================================
# PARAMETRIZACIONES PROYECTIVAS
# ========================================

@dataclass(frozen=True)
class WProjParam:
    """[X(t) : Y(t) : Z(t)] con (X, Y, Z) ~ (λX, λ²Y, λZ)."""

    X: RatPoly2
    Y: RatPoly2
    Z: RatPoly2
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for name in ("X", "Y", "Z"):
            value = getattr(self, name)
            if isinstance(value, str):
                object.__setattr__(self, name, _parse_t(value))
            elif getattr(self, name).deg_y > 0:
                raise PreconditionError(f"{name}(t) debe ser univariado")
        if not self.validate:
            return
        parts = (self.X, self.Y, self.Z)
        if all(p.is_constant for p in parts):
            raise PreconditionError("Parametrización constante")
        common = gcd(gcd(self.X, self.Y), self.Z)
        if not common.is_constant:
            raise PreconditionError(f"X, Y, Z tienen una raíz común: {common}")

    def components(self) -> tuple[RatPoly2, RatPoly2, RatPoly2]:
        return self.X, self.Y, self.Z

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_text().replace("x", "t") for k in ("X", "Y", "Z")}

    @classmethod
    def from_json(cls, data: dict) -> "WProjParam":
        return cls(_parse_t(data["X"]), _parse_t(data["Y"]), _parse_t(data["Z"]))


def _dt(p: RatPoly2) -> RatPoly2:
    return p.partial_x()


def dual_param(phi: WProjParam) -> tuple[RatPoly2, RatPoly2, RatPoly2]:
    """(η̇ζ − ζ̇η : ζ̇ξ − ξ̇ζ : ξ̇η − η̇ξ) sin contenido polinomial común."""
    xi, eta, zeta = phi.components()
    dxi, deta, dzeta = _dt(xi), _dt(eta), _dt(zeta)
    triple = (deta * zeta - dzeta * eta,
              dzeta * xi - dxi * zeta,
              dxi * eta - deta * xi)
    nonzero = [p for p in triple if not p.is_zero]
    if not nonzero:
        raise PreconditionError("La dual es idénticamente nula (entrada degenerada)")
    common = nonzero[0]
    for p in nonzero[1:]:
        common = gcd(common, p)
    if not common.is_constant:
        triple = tuple(p if p.is_zero else exact_div(p, common) for p in triple)
    content = Fraction(0)
    for p in triple:
        if not p.is_zero:
            content = _fraction_gcd(content, p.content())
    if content not in (0, 1):
        triple = tuple(p / content for p in triple)
    logger.debug(f"dual_param: {[str(p) for p in triple]}")
    return triple


def _fraction_gcd(a: Fraction, b: Fraction) -> Fraction:
    if a == 0:
        return b
    return Fraction(math.gcd(a.numerator * b.denominator, b.numerator * a.denominator),
                    a.denominator * b.denominator)


def on_curve(phi: WProjParam, gamma: RatPoly2) -> bool:
    """Γ(X/Z, Y/Z²)·Z^D ≡ 0 en t, con D = deg_(1,2) Γ."""
    X_, Y_, Z_ = phi.components()
    if Z_.is_zero:
        raise PreconditionError("Z(t) es idénticamente cero")
    if gamma.is_zero:
        return True
    big_d = int(weighted_degree(gamma, Weights(1, 2)))
    total = RatPoly2.zero()
    for (i, j), c in gamma.items():
        total = total + (X_ ** i) * (Y_ ** j) * (Z_ ** (big_d - i - 2 * j)) * c
    return total.is_zero


def implicit_check(triple: Sequence[RatPoly2], form, samples: Sequence = (0, 1, 2, 3, -1)) -> bool:
    """Evalúa la forma homogénea F(X, Y, Z) en puntos t de muestra."""
    for t in samples:
        values = [p.evaluate(t, 0) for p in triple]
        if form(*values) != 0:
            return False
    return True
