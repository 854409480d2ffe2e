# dopkit/algdop.py
"""
Condiciones algebraicas (A1)-(A3) para pares (g, Γ) con pesos w = (w1, w2):

  (A1) deg_w g^{ij} ≤ w_i + w_j
  (A2) Δ = det g ≢ 0 y Γ (libre de cuadrados) divide a Δ
  (A3) Σ_j g^{ij} ∂_j Γ = S^i · Γ con deg_w S^i ≤ w_i

Incluye el resolvedor lineal de cométricas para Γ dado, la frontera maximal
y los cambios de variables admisibles (x, y) -> (αx+β, γy+p(x)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

from .errors import DegenerateMetricError, DopkitError, PreconditionError
from .poly import (
    RatPoly2, Weights, divides, gcd, is_squarefree,
    monomials_up_to, solve_linear_combination, to_fraction, weighted_degree,
)

# Importar logger
try:
    from utils.logger import get_logger
    logger = get_logger('algdop')
except ImportError:
    import logging
    logger = logging.getLogger('algdop')


# ========================================
# TIPOS
# ========================================

@dataclass(frozen=True)
class Cometric:
    """Matriz simétrica g = [[a, b], [b, c]] de polinomios."""

    a: RatPoly2
    b: RatPoly2
    c: RatPoly2

    @classmethod
    def diag(cls, a: RatPoly2, c: RatPoly2) -> "Cometric":
        return cls(a, RatPoly2.zero(), c)

    @classmethod
    def parse(cls, a: str, b: str, c: str) -> "Cometric":
        return cls(RatPoly2.parse(a), RatPoly2.parse(b), RatPoly2.parse(c))

    @cached_property
    def det(self) -> RatPoly2:
        return self.a * self.c - self.b * self.b

    def entry(self, i: int, j: int) -> RatPoly2:
        if i == 0 and j == 0:
            return self.a
        if i == 1 and j == 1:
            return self.c
        return self.b

    def rows(self) -> tuple[tuple[RatPoly2, RatPoly2], tuple[RatPoly2, RatPoly2]]:
        return ((self.a, self.b), (self.b, self.c))

    def adjugate(self) -> "Cometric":
        """ĝ con g^{-1} = ĝ / Δ."""
        return Cometric(self.c, -self.b, self.a)

    def scale(self, factor) -> "Cometric":
        f = to_fraction(factor)
        return Cometric(self.a * f, self.b * f, self.c * f)

    def __add__(self, other: "Cometric") -> "Cometric":
        return Cometric(self.a + other.a, self.b + other.b, self.c + other.c)

    def __neg__(self) -> "Cometric":
        return self.scale(-1)

    def evaluate(self, x, y) -> tuple[tuple, tuple]:
        a, b, c = (p.evaluate(x, y) for p in (self.a, self.b, self.c))
        return ((a, b), (b, c))

    def is_positive_definite_at(self, x, y) -> bool:
        """Criterio de Sylvester (exacto en puntos racionales)."""
        (a, b), (_, c) = self.evaluate(x, y)
        return a > 0 and a * c - b * b > 0

    def weighted_degrees(self, w: Weights) -> tuple:
        return tuple(weighted_degree(p, w) for p in (self.a, self.b, self.c))

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json(), "c": self.c.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "Cometric":
        return cls(*(_poly_from_any(data[k]) for k in ("a", "b", "c")))

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.b}, {self.c}]]"


def _poly_from_any(value) -> RatPoly2:
    if isinstance(value, RatPoly2):
        return value
    if isinstance(value, str):
        return RatPoly2.parse(value)
    return RatPoly2.from_json(value)


@dataclass(frozen=True)
class BoundarySpec:
    """
    Γ = ∏ factores. Lista vacía significa Γ = 1 (Ω = ℝ²).
    Los factores se toman tal como vienen: el módulo nunca factoriza.
    """

    factors: tuple[RatPoly2, ...] = ()
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.validate:
            return
        for k, f in enumerate(self.factors):
            if f.is_constant:
                raise PreconditionError(f"El factor {k} de Γ es constante: {f}")
        for i in range(len(self.factors)):
            for j in range(i + 1, len(self.factors)):
                if not gcd(self.factors[i], self.factors[j]).is_constant:
                    raise PreconditionError(f"Los factores {i} y {j} de Γ no son coprimos")
        if self.factors and not is_squarefree(self.product):
            raise PreconditionError("Γ no es libre de cuadrados")

    @cached_property
    def product(self) -> RatPoly2:
        result = RatPoly2.one()
        for f in self.factors:
            result = result * f
        return result

    def __len__(self) -> int:
        return len(self.factors)

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, data) -> "BoundarySpec":
        items = data["factors"] if isinstance(data, dict) else data
        return cls(tuple(_poly_from_any(f) for f in items))


@dataclass(frozen=True)
class CofactorCertificate:
    """Cocientes S1, S2 de a∂xΓ + b∂yΓ = S1·Γ y b∂xΓ + c∂yΓ = S2·Γ."""

    S1: RatPoly2
    S2: RatPoly2
    weights: Optional[Weights] = None
    degree_ok: Optional[bool] = None

    @property
    def L1(self) -> RatPoly2:
        return self.S1

    @property
    def L2(self) -> RatPoly2:
        return self.S2

    def to_json(self) -> dict:
        return {
            "S1": self.S1.to_json(),
            "S2": self.S2.to_json(),
            "S1_text": self.S1.to_text(),
            "S2_text": self.S2.to_text(),
            "weights": list(self.weights.as_tuple()) if self.weights else None,
            "degree_ok": self.degree_ok,
        }


# ========================================
# (A1) - (A3)
# ========================================

def check_A1(g: Cometric, w: Weights) -> bool:
    return (weighted_degree(g.a, w) <= 2 * w.w1
            and weighted_degree(g.b, w) <= w.w1 + w.w2
            and weighted_degree(g.c, w) <= 2 * w.w2)


def cofactors(g: Cometric, gamma: RatPoly2) -> Optional[tuple[RatPoly2, RatPoly2]]:
    """(S1, S2) si Γ divide ambas filas de g·∇Γ; None si no."""
    gx, gy = gamma.partial_x(), gamma.partial_y()
    row1 = g.a * gx + g.b * gy
    row2 = g.b * gx + g.c * gy
    s1 = divides(gamma, row1)
    if s1 is None:
        return None
    s2 = divides(gamma, row2)
    if s2 is None:
        return None
    return s1, s2


def check_A2_A3(g: Cometric, gamma: BoundarySpec, w: Optional[Weights] = None) -> Optional[CofactorCertificate]:
    """
    Certificado de cofactores si Δ ≢ 0, Γ | Δ y Γ divide las dos filas de g·∇Γ.
    Lanza DegenerateMetricError cuando Δ ≡ 0 (distinto de "Γ no divide a Δ").
    """
    delta = g.det
    if delta.is_zero:
        raise DegenerateMetricError("det g es idénticamente cero")
    product = gamma.product
    if divides(product, delta) is None:
        logger.debug(f"Γ no divide a Δ: Γ={product}")
        return None
    found = cofactors(g, product)
    if found is None:
        return None
    s1, s2 = found
    # Verificación por multiplicación
    gx, gy = product.partial_x(), product.partial_y()
    if g.a * gx + g.b * gy != s1 * product or g.b * gx + g.c * gy != s2 * product:
        raise DopkitError(f"Cofactores inconsistentes: S1={s1}, S2={s2} no reproducen gradΓ")
    degree_ok = None
    if w is not None:
        degree_ok = weighted_degree(s1, w) <= w.w1 and weighted_degree(s2, w) <= w.w2
    return CofactorCertificate(s1, s2, w, degree_ok)


def verify(g: Cometric, gamma: BoundarySpec, w: Weights) -> dict:
    """Informe completo {a1, a2, a3, reason, certificate, passed}."""
    report = {
        "weights": list(w.as_tuple()),
        "a1": check_A1(g, w),
        "a2": False,
        "a3": False,
        "reason": None,
        "certificate": None,
        "det": g.det.to_text(),
    }
    delta = g.det
    if delta.is_zero:
        report["reason"] = "det g ≡ 0"
    elif divides(gamma.product, delta) is None:
        report["reason"] = "Γ no divide a det g"
    else:
        report["a2"] = True
        cert = check_A2_A3(g, gamma, w)
        if cert is None:
            report["reason"] = "Γ no divide Σ_j g^{ij} ∂_j Γ"
        else:
            report["a3"] = bool(cert.degree_ok)
            report["certificate"] = cert.to_json()
            if not cert.degree_ok:
                report["reason"] = "deg_w S^i > w_i"
    if not report["a1"] and report["reason"] is None:
        report["reason"] = "deg_w g^{ij} > w_i + w_j"
    report["passed"] = bool(report["a1"] and report["a2"] and report["a3"])
    return report


# ========================================
# RESOLVEDOR LINEAL DE COMÉTRICAS
# ========================================

@dataclass(frozen=True)
class MetricSolution:
    """Elemento de base (a, b, c, S1, S2) de las soluciones de la ecuación de cofactores."""

    metric: Cometric
    S1: RatPoly2
    S2: RatPoly2

    def to_json(self) -> dict:
        data = self.metric.to_json()
        data.update({"S1": self.S1.to_json(), "S2": self.S2.to_json(),
                     "text": {"a": str(self.metric.a), "b": str(self.metric.b), "c": str(self.metric.c)}})
        return data


def _box(bound: int, w: Weights) -> list[tuple[int, int]]:
    return monomials_up_to(bound, w)


def solve_metric(gamma: BoundarySpec, w: Weights) -> list[MetricSolution]:
    """
    Base exacta de {(a, b, c, S1, S2)} que cumplen la ecuación de cofactores dentro de las cajas (A1).
    (A2) no se impone: es no lineal; se filtra después.
    Orden de columnas fijo: a, b, c, S1, S2, cada bloque en orden (deg_w, i).
    """
    product = gamma.product
    gx, gy = product.partial_x(), product.partial_y()
    zero = RatPoly2.zero()
    box_a = _box(2 * w.w1, w)
    box_b = _box(w.w1 + w.w2, w)
    box_c = _box(2 * w.w2, w)
    box_s1 = _box(w.w1, w)
    box_s2 = _box(w.w2, w)

    columns: list[tuple[RatPoly2, RatPoly2]] = []
    for i, j in box_a:
        columns.append((gx.shift(i, j), zero))
    for i, j in box_b:
        columns.append((gy.shift(i, j), gx.shift(i, j)))
    for i, j in box_c:
        columns.append((zero, gy.shift(i, j)))
    for i, j in box_s1:
        columns.append((-product.shift(i, j), zero))
    for i, j in box_s2:
        columns.append((zero, -product.shift(i, j)))

    logger.info(f"🔧 solve_metric: {len(columns)} incógnitas, w={w}")
    basis = solve_linear_combination(columns)

    solutions = []
    for vec in basis:
        pos = 0
        parts = []
        for box in (box_a, box_b, box_c, box_s1, box_s2):
            terms = {mono: vec[pos + k] for k, mono in enumerate(box)}
            parts.append(RatPoly2(terms))
            pos += len(box)
        a, b, c, s1, s2 = parts
        solutions.append(MetricSolution(Cometric(a, b, c), s1, s2))
    logger.info(f"✅ solve_metric: dimensión {len(solutions)}")
    return solutions


def proportional(p: RatPoly2, q: RatPoly2) -> Optional[Fraction]:
    """λ con p = λ·q, o None."""
    if q.is_zero:
        return Fraction(1) if p.is_zero else None
    if p.is_zero:
        return Fraction(0)
    lam = p.leading_coefficient() / q.leading_coefficient()
    return lam if p == q * lam else None


def metric_proportional(g1: Cometric, g2: Cometric) -> Optional[Fraction]:
    for p, q in zip((g1.a, g1.b, g1.c), (g2.a, g2.b, g2.c)):
        if not q.is_zero:
            lam = proportional(p, q)
            if lam is None:
                return None
            break
    else:
        return Fraction(1) if g1 == g2 else None
    return lam if g1 == g2.scale(lam) else None


# ========================================
# FRONTERA MAXIMAL
# ========================================

def maximal_boundary(g: Cometric, delta_factors: Sequence[RatPoly2]) -> BoundarySpec:
    """
    Producto de los factores distintos de Δ que cumplen (A3) por separado.
    La factorización suministrada debe reproducir Δ salvo constante racional.
    """
    delta = g.det
    if delta.is_zero:
        raise DegenerateMetricError("det g es idénticamente cero")
    product = RatPoly2.one()
    for f in delta_factors:
        product = product * f
    if proportional(delta, product) is None:
        raise PreconditionError("La factorización suministrada no reproduce det g")

    distinct: list[RatPoly2] = []
    seen = set()
    for f in delta_factors:
        if f.is_constant:
            continue
        key = f.monic()
        if key in seen:
            continue
        seen.add(key)
        distinct.append(f)

    kept = [f for f in distinct if cofactors(g, f) is not None]
    logger.info(f"✅ Frontera maximal: {len(kept)} de {len(distinct)} factores")
    return BoundarySpec(tuple(kept))


# ========================================
# CAMBIOS DE VARIABLES ADMISIBLES
# ========================================

@dataclass(frozen=True)
class Translation:
    """T: (x, y) -> (x + β, y)."""

    beta: Fraction

    def maps(self):
        X, Y = RatPoly2.x(), RatPoly2.y()
        b = to_fraction(self.beta)
        return (X + b, Y), (X - b, Y)


@dataclass(frozen=True)
class Scaling:
    """H: (x, y) -> (αx, γy)."""

    alpha: Fraction
    gamma: Fraction

    def maps(self):
        a, c = to_fraction(self.alpha), to_fraction(self.gamma)
        if a == 0 or c == 0:
            raise PreconditionError("Escalado degenerado: α·γ = 0")
        X, Y = RatPoly2.x(), RatPoly2.y()
        return (X * a, Y * c), (X / a, Y / c)


@dataclass(frozen=True)
class Shear:
    """S: (x, y) -> (x, y + p(x))."""

    p: RatPoly2

    def maps(self):
        if self.p.deg_y > 0:
            raise PreconditionError("S(p) requiere p univariado en x")
        X, Y = RatPoly2.x(), RatPoly2.y()
        return (X, Y + self.p), (X, Y - self.p)


@dataclass(frozen=True)
class AdmissibleChange:
    """(x, y) -> (αx + β, γy + p(x)), compuesto como S ∘ T ∘ H."""

    alpha: Fraction = Fraction(1)
    beta: Fraction = Fraction(0)
    gamma: Fraction = Fraction(1)
    p: RatPoly2 = field(default_factory=RatPoly2.zero)

    def decompose(self) -> list:
        a, b = to_fraction(self.alpha), to_fraction(self.beta)
        if a == 0 or to_fraction(self.gamma) == 0:
            raise PreconditionError("Cambio degenerado: α·γ = 0")
        X, Y = RatPoly2.x(), RatPoly2.y()
        # q(u) = p((u − β)/α)
        q = self.p.substitute((X - b) / a, Y)
        return [Scaling(a, self.gamma), Translation(b), Shear(q)]

    def maps(self):
        a, b, c = to_fraction(self.alpha), to_fraction(self.beta), to_fraction(self.gamma)
        if a == 0 or c == 0:
            raise PreconditionError("Cambio degenerado: α·γ = 0")
        X, Y = RatPoly2.x(), RatPoly2.y()
        forward = (X * a + b, Y * c + self.p)
        x_back = (X - b) / a
        inverse = (x_back, (Y - self.p.substitute(x_back, Y)) / c)
        return forward, inverse


Change = Union[Translation, Scaling, Shear, AdmissibleChange]


def _pushforward(g: Cometric, forward, inverse) -> Cometric:
    """(J g Jᵀ) ∘ Φ⁻¹ con J la jacobiana de Φ."""
    jac = [[forward[k].partial_x(), forward[k].partial_y()] for k in range(2)]
    m = g.rows()

    def entry(k: int, l: int) -> RatPoly2:
        total = RatPoly2.zero()
        for i in range(2):
            for j in range(2):
                if jac[k][i].is_zero or jac[l][j].is_zero or m[i][j].is_zero:
                    continue
                total = total + jac[k][i] * m[i][j] * jac[l][j]
        return total.substitute(*inverse)

    return Cometric(entry(0, 0), entry(0, 1), entry(1, 1))


def apply_change(g: Cometric, change: Change) -> Cometric:
    if isinstance(change, AdmissibleChange):
        for step in change.decompose():
            g = apply_change(g, step)
        return g
    forward, inverse = change.maps()
    return _pushforward(g, forward, inverse)


def transform_polynomial(p: RatPoly2, change: Change) -> RatPoly2:
    """Γ ∘ Φ⁻¹."""
    _, inverse = change.maps()
    return p.substitute(*inverse)


def transform_boundary(gamma: BoundarySpec, change: Change) -> BoundarySpec:
    return BoundarySpec(tuple(transform_polynomial(f, change) for f in gamma.factors))


def jacobian_determinant(change: Change) -> Fraction:
    forward, _ = change.maps()
    det = forward[0].partial_x() * forward[1].partial_y() - forward[0].partial_y() * forward[1].partial_x()
    if not det.is_constant:
        raise PreconditionError("El jacobiano de un cambio admisible debe ser constante")
    return det.constant_value()


def is_w_admissible(change: Change, w: Weights) -> bool:
    """αγ ≠ 0 y deg_w de cada componente igual a w_i."""
    try:
        forward, _ = change.maps()
    except PreconditionError:
        return False
    if jacobian_determinant(change) == 0:
        return False
    return weighted_degree(forward[0], w) == w.w1 and weighted_degree(forward[1], w) == w.w2


def change_from_json(data: dict) -> Change:
    kind = data.get("kind")
    if kind == "T":
        return Translation(to_fraction(data["beta"]))
    if kind == "H":
        return Scaling(to_fraction(data["alpha"]), to_fraction(data["gamma"]))
    if kind == "S":
        return Shear(_poly_from_any(data["p"]))
    if kind == "admissible":
        return AdmissibleChange(to_fraction(data.get("alpha", 1)), to_fraction(data.get("beta", 0)),
                                to_fraction(data.get("gamma", 1)), _poly_from_any(data.get("p", "0")))
    raise ValueError(f"Cambio de variables desconocido: {kind!r}")


# ========================================
# PESOS
# ========================================

def minimal_infinite_weight(g: Cometric, limit: int = 256) -> Optional[int]:
    """Menor entero W ≥ 3 con (A1) para w = (1, W); None si no existe hasta limit."""
    for big in range(3, limit + 1):
        if check_A1(g, Weights(1, big)):
            return big
    return None


def weight_monotonicity(g: Cometric, gamma: BoundarySpec, w: Weights, w_prime: Weights) -> Optional[bool]:
    """
    Si (g, Γ) resuelve el problema para w y g cumple las cajas de w', entonces
    también lo resuelve para w'. Devuelve None si la hipótesis no se cumple.
    """
    cert = check_A2_A3(g, gamma, w)
    if cert is None or not cert.degree_ok or not check_A1(g, w) or not check_A1(g, w_prime):
        return None
    cert_prime = check_A2_A3(g, gamma, w_prime)
    return bool(cert_prime and cert_prime.degree_ok)


