# dopkit/density.py
"""
Densidades ρ = ∏ Γ_k^{p_k} · exp(Q) compatibles con una cométrica g.

Flujo:
  1. solve_drift: derivas (L1, L2) en las cajas deg_w que cumplen la
     condición de compatibilidad ∂_y(Σ g_{i1}L^i) = ∂_x(Σ g_{i2}L^i).
  2. integrate_drift: h = log ρ por extracción de residuos contra la lista
     de factores suministrada (nunca se factoriza).
  3. density_family: familia completa de exponentes y Q (parámetros t0, t1, ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np
import sympy

from .algdop import BoundarySpec, Cometric, cofactors
from .errors import (
    DegenerateMetricError, InvalidParameterError, NonIntegrableError,
    PreconditionError, UnknownEntryError, UnsupportedCaseError,
)
from .poly import (
    RatPoly2, Weights, divides, format_fraction, is_squarefree,
    monomials_up_to, solve_linear_combination, to_fraction,
)

# Importar logger
try:
    from utils.logger import get_logger
    logger = get_logger('density')
except ImportError:
    import logging
    logger = logging.getLogger('density')


def _to_sympy(value) -> sympy.Expr:
    if isinstance(value, sympy.Basic):
        return value
    f = to_fraction(value)
    return sympy.Rational(f.numerator, f.denominator)


def _to_fraction(expr: sympy.Expr) -> Fraction:
    expr = sympy.sympify(expr)
    if not expr.is_Rational:
        raise PreconditionError(f"Se esperaba un racional y se obtuvo {expr}")
    return Fraction(int(expr.p), int(expr.q))


# ========================================
# TIPOS
# ========================================

@dataclass(frozen=True)
class DriftPair:
    """Parte de primer orden L^i = b^i − Σ_j ∂_j g^{ij}."""

    L1: RatPoly2
    L2: RatPoly2

    def to_json(self) -> dict:
        return {"L1": self.L1.to_json(), "L2": self.L2.to_json(),
                "text": {"L1": self.L1.to_text(), "L2": self.L2.to_text()}}

    @classmethod
    def from_json(cls, data: dict) -> "DriftPair":
        def poly(value):
            return RatPoly2.parse(value) if isinstance(value, str) else RatPoly2.from_json(value)
        return cls(poly(data["L1"]), poly(data["L2"]))


@dataclass(frozen=True)
class DriftFamily:
    """Base exacta de derivas; la deriva general es Σ t_k · basis[k]."""

    basis: tuple[DriftPair, ...]
    weights: Weights

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(f"t{k}" for k in range(len(self.basis)))

    def at(self, values: Sequence) -> DriftPair:
        if len(values) != len(self.basis):
            raise InvalidParameterError(f"Se esperaban {len(self.basis)} parámetros")
        l1, l2 = RatPoly2.zero(), RatPoly2.zero()
        for v, d in zip(values, self.basis):
            f = to_fraction(v)
            l1 = l1 + d.L1 * f
            l2 = l2 + d.L2 * f
        return DriftPair(l1, l2)

    def to_json(self) -> dict:
        return {"weights": list(self.weights.as_tuple()),
                "parameters": list(self.parameters),
                "basis": [d.to_json() for d in self.basis]}


@dataclass(frozen=True)
class DensitySpec:
    """
    ρ = ∏ factors[k]^{exponents[k]} · exp(Q) con Q = Σ coef · poly sobre q_parts.
    Exponentes y coeficientes de Q son expresiones sympy (racionales o afines
    en los parámetros). ρ se guarda sin normalizar.
    """

    factors: tuple[RatPoly2, ...]
    exponents: tuple[sympy.Expr, ...]
    q_parts: tuple[tuple[sympy.Expr, RatPoly2], ...] = ()
    parameters: tuple[sympy.Symbol, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "exponents", tuple(_to_sympy(e) for e in self.exponents))
        object.__setattr__(self, "q_parts", tuple((_to_sympy(c), p) for c, p in self.q_parts))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if len(self.factors) != len(self.exponents):
            raise PreconditionError("Cada factor necesita un exponente")

    @property
    def free_symbols(self) -> set:
        out = set()
        for e in self.exponents:
            out |= e.free_symbols
        for c, _ in self.q_parts:
            out |= c.free_symbols
        return out

    @property
    def is_numeric(self) -> bool:
        return not self.free_symbols

    def instantiate(self, values: Mapping[str, object]) -> "DensitySpec":
        subs = {}
        for sym in self.free_symbols:
            if sym.name in values:
                subs[sym] = _to_sympy(values[sym.name])
        exps = tuple(sympy.expand(e.subs(subs)) for e in self.exponents)
        parts = tuple((sympy.expand(c.subs(subs)), p) for c, p in self.q_parts)
        remaining = tuple(s for s in self.parameters if s not in subs)
        return DensitySpec(self.factors, exps, parts, remaining)

    def exponent_values(self) -> tuple[Fraction, ...]:
        if not self.is_numeric:
            raise PreconditionError(f"Densidad simbólica; faltan valores para {sorted(str(s) for s in self.free_symbols)}")
        return tuple(_to_fraction(e) for e in self.exponents)

    def q_polynomial(self) -> RatPoly2:
        if not self.is_numeric:
            raise PreconditionError("Q tiene coeficientes simbólicos")
        total = RatPoly2.zero()
        for c, p in self.q_parts:
            total = total + p * _to_fraction(c)
        return total

    def to_sympy(self, x_sym=None, y_sym=None) -> sympy.Expr:
        x_sym = x_sym or sympy.Symbol("x")
        y_sym = y_sym or sympy.Symbol("y")
        expr = sympy.Integer(1)
        for f, e in zip(self.factors, self.exponents):
            expr = expr * f.to_sympy(x_sym, y_sym) ** e
        q = sum((c * p.to_sympy(x_sym, y_sym) for c, p in self.q_parts), sympy.Integer(0))
        if q != 0:
            expr = expr * sympy.exp(q)
        return expr

    def evaluate_array(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """ρ en float sobre nodos; los factores se toman en valor absoluto."""
        exps = self.exponent_values()
        out = np.ones(np.broadcast(np.asarray(xs), np.asarray(ys)).shape)
        for f, e in zip(self.factors, exps):
            if e != 0:
                out = out * np.abs(f.evaluate_array(xs, ys)) ** float(e)
        q = self.q_polynomial()
        if not q.is_zero:
            out = out * np.exp(q.evaluate_array(xs, ys))
        return out

    def to_json(self) -> dict:
        return {
            "factors": [f.to_json() for f in self.factors],
            "factors_text": [f.to_text() for f in self.factors],
            "exponents": [str(e) for e in self.exponents],
            "Q": [[str(c), p.to_json()] for c, p in self.q_parts],
            "parameters": [s.name for s in self.parameters],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DensitySpec":
        names = list(data.get("parameters", []))
        symbols = {n: sympy.Symbol(n) for n in names}

        def expr(text):
            return sympy.sympify(text, locals=symbols)

        factors = tuple(RatPoly2.parse(f) if isinstance(f, str) else RatPoly2.from_json(f)
                        for f in data["factors"])
        exps = tuple(expr(e) for e in data["exponents"])
        parts = tuple((expr(c), RatPoly2.parse(p) if isinstance(p, str) else RatPoly2.from_json(p))
                      for c, p in data.get("Q", []))
        return cls(factors, exps, parts, tuple(symbols[n] for n in names))


# ========================================
# DERIVAS
# ========================================

def _gradient_parts(g: Cometric, l1: RatPoly2, l2: RatPoly2) -> tuple[RatPoly2, RatPoly2]:
    """(U, V) con ∂h = (U, V)/Δ, usando la adjunta de g."""
    u = g.c * l1 - g.b * l2
    v = g.a * l2 - g.b * l1
    return u, v


def compatibility_residual(g: Cometric, pair: DriftPair) -> RatPoly2:
    """Δ(U_y − V_x) − (U Δ_y − V Δ_x); cero si la deriva es integrable."""
    delta = g.det
    u, v = _gradient_parts(g, pair.L1, pair.L2)
    return delta * (u.partial_y() - v.partial_x()) - (u * delta.partial_y() - v * delta.partial_x())


def solve_drift(g: Cometric, w: Weights) -> DriftFamily:
    """Base exacta de derivas (deg_w L^i ≤ w_i) que cumplen la compatibilidad."""
    if g.det.is_zero:
        raise DegenerateMetricError("det g es idénticamente cero")
    box1 = monomials_up_to(w.w1, w)
    box2 = monomials_up_to(w.w2, w)
    zero = RatPoly2.zero()
    columns = []
    for i, j in box1:
        columns.append((compatibility_residual(g, DriftPair(RatPoly2.monomial(i, j), zero)),))
    for i, j in box2:
        columns.append((compatibility_residual(g, DriftPair(zero, RatPoly2.monomial(i, j))),))
    logger.info(f"🔧 solve_drift: {len(columns)} incógnitas, w={w}")
    basis = []
    for vec in solve_linear_combination(columns):
        l1 = RatPoly2({m: vec[k] for k, m in enumerate(box1)})
        l2 = RatPoly2({m: vec[len(box1) + k] for k, m in enumerate(box2)})
        basis.append(DriftPair(l1, l2))
    logger.info(f"✅ solve_drift: dimensión {len(basis)}")
    return DriftFamily(tuple(basis), w)


# ========================================
# INTEGRACIÓN
# ========================================

def q_box(delta: RatPoly2, w: Weights) -> list[tuple[int, int]]:
    """Monomios no constantes de Q permitidos por w_j·deg_{x_j}(QΔ) ≤ 2w1 + 2w2."""
    total = 2 * (w.w1 + w.w2)
    max_i = total // w.w1 - max(delta.deg_x, 0)
    max_j = total // w.w2 - max(delta.deg_y, 0)
    return [(i, j) for j in range(max_j + 1) for i in range(max_i + 1) if (i, j) != (0, 0)]


def _all_factors(gamma: BoundarySpec, extra: Sequence[RatPoly2]) -> list[RatPoly2]:
    return list(gamma.factors) + [f for f in extra if not f.is_constant]


def _drift_q_box(u: RatPoly2, v: RatPoly2) -> list[tuple[int, int]]:
    # Q_x·Δ se cancela contra U hasta grado deg U, luego deg Q ≤ deg U + 1
    max_i = max(u.deg_x, v.deg_x, 0) + 1
    max_j = max(u.deg_y, v.deg_y, 0) + 1
    return [(i, j) for j in range(max_j + 1) for i in range(max_i + 1) if (i, j) != (0, 0)]


def integrate_drift(g: Cometric, pair: DriftPair, gamma: BoundarySpec,
                    extra_factors: Sequence[RatPoly2] = ()) -> DensitySpec:
    """
    Descompone ∂h = Σ p_k ∂Γ_k/Γ_k + ∂Q con los factores dados.
    Lanza NonIntegrableError si queda una parte racional no logarítmica.
    """
    delta = g.det
    if delta.is_zero:
        raise DegenerateMetricError("det g es idénticamente cero")
    if not compatibility_residual(g, pair).is_zero:
        raise NonIntegrableError("La deriva no cumple la condición de compatibilidad")
    factors = _all_factors(gamma, extra_factors)
    cofs = []
    for f in factors:
        quotient = divides(f, delta)
        if quotient is None:
            raise PreconditionError(f"El factor {f} no divide a det g")
        cofs.append(quotient)
    u, v = _gradient_parts(g, pair.L1, pair.L2)
    box = _drift_q_box(u, v)

    columns = []
    for f, quotient in zip(factors, cofs):
        columns.append((f.partial_x() * quotient, f.partial_y() * quotient))
    for i, j in box:
        m = RatPoly2.monomial(i, j)
        columns.append((m.partial_x() * delta, m.partial_y() * delta))
    columns.append((-u, -v))

    solutions = [vec for vec in solve_linear_combination(columns) if vec[-1] != 0]
    if not solutions:
        raise NonIntegrableError("Residuos incompatibles: los factores suministrados no bastan")
    vec = solutions[0]
    scale = Fraction(vec[-1])
    exps = [Fraction(vec[k]) / scale for k in range(len(factors))]
    q = RatPoly2({m: Fraction(vec[len(factors) + k]) / scale for k, m in enumerate(box)})
    logger.info(f"✅ integrate_drift: exponentes {[format_fraction(e) for e in exps]}, Q = {q}")
    parts = ((sympy.Integer(1), q),) if not q.is_zero else ()
    return DensitySpec(tuple(factors), tuple(exps), parts)


def drift_from_density(g: Cometric, density: DensitySpec) -> DriftPair:
    """L^i = Σ_k p_k S^i_(k) + Σ_j g^{ij} ∂_j Q (requiere (A3) por factor)."""
    exps = density.exponent_values()
    q = density.q_polynomial()
    l1 = g.a * q.partial_x() + g.b * q.partial_y()
    l2 = g.b * q.partial_x() + g.c * q.partial_y()
    for f, e in zip(density.factors, exps):
        if e == 0:
            continue
        found = cofactors(g, f)
        if found is None:
            raise PreconditionError(f"El factor {f} no cumple (A3) para g")
        l1 = l1 + found[0] * e
        l2 = l2 + found[1] * e
    return DriftPair(l1, l2)


def _above(p: RatPoly2, bound: int, w: Weights) -> RatPoly2:
    return RatPoly2({m: c for m, c in p.items() if m[0] * w.w1 + m[1] * w.w2 > bound})


def density_family(g: Cometric, gamma: BoundarySpec, w: Weights,
                   extra_factors: Sequence[RatPoly2] = (), allow_multiple: bool = False) -> DensitySpec:
    """
    Familia de densidades ∏Γ_k^{t·v_k}·exp(Q) cuyas derivas respetan deg_w L^i ≤ w_i.
    Si Δ tiene factores múltiples solo se aceptan los casos codificados (allow_multiple).
    """
    delta = g.det
    if delta.is_zero:
        raise DegenerateMetricError("det g es idénticamente cero")
    if not is_squarefree(delta) and not allow_multiple:
        raise UnsupportedCaseError("det g tiene factores múltiples; caso no codificado")
    factors = _all_factors(gamma, extra_factors)
    box = q_box(delta, w)

    columns = []
    for f in factors:
        found = cofactors(g, f)
        if found is None:
            raise PreconditionError(f"El factor {f} no cumple (A3) para g")
        columns.append((_above(found[0], w.w1, w), _above(found[1], w.w2, w)))
    for i, j in box:
        m = RatPoly2.monomial(i, j)
        l1 = g.a * m.partial_x() + g.b * m.partial_y()
        l2 = g.b * m.partial_x() + g.c * m.partial_y()
        columns.append((_above(l1, w.w1, w), _above(l2, w.w2, w)))

    basis = solve_linear_combination(columns) if columns else []
    params = tuple(sympy.Symbol(f"t{k}") for k in range(len(basis)))
    exps = []
    for k in range(len(factors)):
        exps.append(sum((sym * vec[k] for sym, vec in zip(params, basis)), sympy.Integer(0)))
    parts = []
    for sym, vec in zip(params, basis):
        q = RatPoly2({m: vec[len(factors) + k] for k, m in enumerate(box)})
        if not q.is_zero:
            parts.append((sym, q))
    logger.info(f"✅ density_family: {len(params)} parámetros libres")
    return DensitySpec(tuple(factors), tuple(exps), tuple(parts), params)


def _affine_data(spec: DensitySpec, monomials: list) -> tuple[sympy.Matrix, sympy.Matrix]:
    rows = list(spec.exponents)
    for m in monomials:
        rows.append(sum((c * p.coefficient(*m) for c, p in spec.q_parts), sympy.Integer(0)))
    symbols = sorted(spec.free_symbols, key=lambda s: s.name)
    offset = sympy.Matrix([sympy.expand(r).subs({s: 0 for s in symbols}) for r in rows])
    if symbols:
        jac = sympy.Matrix([[sympy.diff(r, s) for s in symbols] for r in rows])
    else:
        jac = sympy.zeros(len(rows), 0)
    return offset, jac


def equivalent_families(a: DensitySpec, b: DensitySpec) -> bool:
    """
    Misma familia afín de (exponentes, Q) con factores emparejados salvo
    constante. Los factores se comparan en el orden dado.
    """
    if len(a.factors) != len(b.factors):
        return False
    for fa, fb in zip(a.factors, b.factors):
        if fa.monic() != fb.monic():
            return False
    monomials = sorted({m for _, p in a.q_parts + b.q_parts for m in p.support()})
    off_a, jac_a = _affine_data(a, monomials)
    off_b, jac_b = _affine_data(b, monomials)
    span = jac_a.row_join(jac_b)
    rank_a, rank_b, rank_ab = jac_a.rank(), jac_b.rank(), span.rank()
    if not rank_a == rank_b == rank_ab:
        return False
    return span.row_join(off_a - off_b).rank() == rank_ab


# ========================================
# COTAS
# ========================================

def check_q_degree_bound(delta: RatPoly2, q: RatPoly2, w: Weights) -> bool:
    """w_j · deg_{x_j}(QΔ) ≤ 2w1 + 2w2 para j = 1, 2."""
    product = q * delta
    if product.is_zero:
        return True
    bound = 2 * (w.w1 + w.w2)
    return w.w1 * product.deg_x <= bound and w.w2 * product.deg_y <= bound


def _param(params: Mapping, name: str, default=None) -> Fraction:
    if name in params and params[name] is not None:
        return to_fraction(params[name])
    if default is None:
        raise InvalidParameterError(f"Falta el parámetro '{name}'", predicate=name)
    return to_fraction(default)


def _gt(label: str, lhs: Fraction, rhs: Fraction) -> tuple[str, bool]:
    return label, lhs > rhs


def _b4_constraints(params: Mapping) -> list[tuple[str, bool]]:
    m, n = int(_param(params, "m")), int(_param(params, "n"))
    p = _param(params, "p", 1)
    if m % 2 or n % 2:
        bound = max(Fraction(1, 2) - Fraction(1, n), Fraction(1, 2) - Fraction(1, m))
        return [_gt(f"p > max(1/2 − 1/n, 1/2 − 1/m) = {format_fraction(bound)}", p, bound)]
    q = _param(params, "q", p)
    bound = max(1 - Fraction(2, n), 1 - Fraction(2, m))
    return [_gt("p > 0", p, 0), _gt("q > 0", q, 0),
            _gt(f"p + q > max(1 − 2/n, 1 − 2/m) = {format_fraction(bound)}", p + q, bound)]


def _b5_constraints(params: Mapping) -> list[tuple[str, bool]]:
    n = int(_param(params, "n"))
    p, r = _param(params, "p", 1), _param(params, "r", 1)
    if n % 2:
        bound = max(Fraction(0), Fraction(1, 2) - Fraction(1, n))
        return [_gt("r > 0", r, 0), _gt(f"p > max(0, 1/2 − 1/n) = {format_fraction(bound)}", p, bound)]
    q = _param(params, "q", p)
    bound = 1 - Fraction(2, n)
    return [_gt("p > 0", p, 0), _gt("q > 0", q, 0), _gt("r > 0", r, 0),
            _gt(f"p + q > 1 − 2/n = {format_fraction(bound)}", p + q, bound)]


def _u1_constraints(params: Mapping) -> list[tuple[str, bool]]:
    n = int(_param(params, "n"))
    p, lam = _param(params, "p", 1), _param(params, "lam", 1)
    out = [_gt("λ > 0", lam, 0)]
    if n % 2:
        bound = max(Fraction(0), Fraction(1, 2) - Fraction(1, n))
        return out + [_gt(f"p > max(0, 1/2 − 1/n) = {format_fraction(bound)}", p, bound)]
    q = _param(params, "q", p)
    bound = 1 - Fraction(2, n)
    return out + [_gt("p > 0", p, 0), _gt("q > 0", q, 0),
                  _gt(f"p + q > 1 − 2/n = {format_fraction(bound)}", p + q, bound)]


def _axis_constraints(kind: int, suffix: str, params: Mapping) -> list[tuple[str, bool]]:
    if kind == 0:
        return [_gt(f"lam{suffix} > 0", _param(params, f"lam{suffix}", 1), 0)]
    if kind == 1:
        return [_gt(f"p{suffix} > 0", _param(params, f"p{suffix}", 1), 0),
                _gt(f"lam{suffix} > 0", _param(params, f"lam{suffix}", 1), 0)]
    return [_gt(f"p{suffix} > 0", _param(params, f"p{suffix}", 1), 0),
            _gt(f"q{suffix} > 0", _param(params, f"q{suffix}", 1), 0)]


_CONSTRAINTS = {
    "B1": lambda P: [_gt("p > 3/10", _param(P, "p", 1), Fraction(3, 10))],
    "B2": lambda P: [_gt("p > 0", _param(P, "p", 1), 0),
                     _gt("q > 1/6", _param(P, "q", 1), Fraction(1, 6)),
                     _gt("p + q > 2/3", _param(P, "p", 1) + _param(P, "q", 1), Fraction(2, 3))],
    "B3": lambda P: [_gt("p > 0", _param(P, "p", 1), 0), _gt("q > 0", _param(P, "q", 1), 0)],
    "B4": _b4_constraints,
    "B5": _b5_constraints,
    "U1": _u1_constraints,
    "U2": lambda P: (_axis_constraints(int(_param(P, "x_kind", 0)), "1", P)
                     + _axis_constraints(int(_param(P, "y_kind", 0)), "2", P)),
    "RECT": lambda P: _axis_constraints(2, "1", P) + _axis_constraints(2, "2", P),
    "DIM1.hermite": lambda P: [],
    "DIM1.laguerre": lambda P: [_gt("p > 0", _param(P, "p", 1), 0)],
    "DIM1.jacobi": lambda P: [_gt("p > 0", _param(P, "p", 1), 0), _gt("q > 0", _param(P, "q", 1), 0)],
}


def integrability_constraints(entry_id: str, params: Optional[Mapping] = None) -> dict:
    """Desigualdades estrictas de integrabilidad de la entrada, evaluadas en params."""
    if entry_id not in _CONSTRAINTS:
        raise UnknownEntryError(f"La entrada '{entry_id}' no tiene tabla de integrabilidad")
    rows = _CONSTRAINTS[entry_id](params or {})
    return {
        "entry": entry_id,
        "constraints": [{"predicate": label, "holds": bool(ok)} for label, ok in rows],
        "satisfied": all(ok for _, ok in rows),
    }


def has_constraint_table(entry_id: str) -> bool:
    return entry_id in _CONSTRAINTS
