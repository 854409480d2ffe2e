# dopkit/spectral.py
"""
Verificación numérica de la definición de DOP sobre un Bundle.

La parte exacta (operador L, invariancia de la filtración, matriz por bloques)
trabaja con racionales. Solo los productos internos usan floats: cuadratura
iterada de Gauss–Legendre sobre Ω.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Optional, Sequence

import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as npoly

from .algdop import Cometric
from .catalog import Bundle, DomainSpec
from .density import DensitySpec, drift_from_density
from .errors import PreconditionError, QuadratureError, SingularGramError
from .poly import Monomial, RatPoly2, Weights, format_fraction, monomials_up_to, weighted_degree

# Importar logger
try:
    from utils.logger import get_logger
    logger = get_logger('spectral')
except ImportError:
    import logging
    logger = logging.getLogger('spectral')


DEFAULT_ORDER = 48
DEFAULT_GRAM_TOL = 1e-10
DEFAULT_IMAG_TOL = 1e-9


# ========================================
# BASE DE LA FILTRACIÓN
# ========================================

@dataclass(frozen=True)
class FiltrationBasis:
    """Monomios con deg_w ≤ n ordenados por (deg_w, exponente de x)."""

    weights: Weights
    cutoff: int
    monomials: tuple[Monomial, ...]

    @classmethod
    def build(cls, weights: Weights, cutoff: int) -> "FiltrationBasis":
        return cls(weights, cutoff, tuple(monomials_up_to(cutoff, weights)))

    def __len__(self) -> int:
        return len(self.monomials)

    def degree(self, k: int) -> int:
        i, j = self.monomials[k]
        return self.weights.w1 * i + self.weights.w2 * j

    def index(self) -> dict[Monomial, int]:
        return {m: k for k, m in enumerate(self.monomials)}

    def blocks(self) -> list[tuple[int, list[int]]]:
        out: dict[int, list[int]] = {}
        for k in range(len(self)):
            out.setdefault(self.degree(k), []).append(k)
        return sorted(out.items())

    def polynomial(self, k: int) -> RatPoly2:
        return RatPoly2.monomial(*self.monomials[k])

    def evaluate(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Matriz (nodos × monomios) de valores."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        return np.stack([xs ** i * ys ** j for i, j in self.monomials], axis=1)

    def to_json(self) -> list[list[int]]:
        return [list(m) for m in self.monomials]


# ========================================
# OPERADOR L
# ========================================

@dataclass(frozen=True)
class Operator:
    """L = a∂xx + 2b∂xy + c∂yy + b1∂x + b2∂y con coeficientes exactos."""

    metric: Cometric
    b1: RatPoly2
    b2: RatPoly2

    @classmethod
    def from_density(cls, g: Cometric, density: Optional[DensitySpec]) -> "Operator":
        d1 = g.a.partial_x() + g.b.partial_y()
        d2 = g.b.partial_x() + g.c.partial_y()
        if density is not None:
            drift = drift_from_density(g, density)
            d1, d2 = d1 + drift.L1, d2 + drift.L2
        return cls(g, d1, d2)

    def __call__(self, f: RatPoly2) -> RatPoly2:
        g = self.metric
        fx, fy = f.partial_x(), f.partial_y()
        return (g.a * fx.partial_x() + g.b * fx.partial_y() * 2 + g.c * fy.partial_y()
                + self.b1 * fx + self.b2 * fy)


def apply_L(g: Cometric, density: Optional[DensitySpec], f: RatPoly2) -> RatPoly2:
    """L(f) = (1/ρ) Σ ∂_i(g^{ij} ρ ∂_j f), exacto."""
    return Operator.from_density(g, density)(f)


def _operator(bundle: Bundle) -> Operator:
    if bundle.density is None:
        raise PreconditionError(f"El bundle {bundle.entry_id} no tiene densidad")
    return Operator.from_density(bundle.metric, bundle.density)


@dataclass
class FiltrationReport:
    ok: bool
    basis: FiltrationBasis
    matrix: list[list[Fraction]]
    witness: Optional[Monomial] = None
    witness_image: Optional[RatPoly2] = None

    def to_json(self) -> dict:
        return {
            "invariance": self.ok,
            "basis": self.basis.to_json(),
            "matrix": [[format_fraction(v) for v in row] for row in self.matrix],
            "witness": list(self.witness) if self.witness else None,
            "witness_image": self.witness_image.to_text() if self.witness_image is not None else None,
        }


def filtration_invariance(bundle: Bundle, n: int) -> FiltrationReport:
    """
    Comprueba deg_w L(m) ≤ deg_w m para cada monomio de la base.
    La fila k de la matriz son las coordenadas de L(m_k): triangular inferior por bloques.
    """
    op = _operator(bundle)
    basis = FiltrationBasis.build(bundle.weights, n)
    position = basis.index()
    matrix: list[list[Fraction]] = []
    for k, mono in enumerate(basis.monomials):
        image = op(basis.polynomial(k))
        if weighted_degree(image, bundle.weights) > basis.degree(k):
            logger.warning(f"⚠️ L(x^{mono[0]}y^{mono[1]}) sube de grado: {image}")
            return FiltrationReport(False, basis, matrix, mono, image)
        row = [Fraction(0)] * len(basis)
        for term, coeff in image.items():
            row[position[term]] = coeff
        matrix.append(row)
    return FiltrationReport(True, basis, matrix)


# ========================================
# CUADRATURA
# ========================================

@dataclass
class QuadratureRule:
    """Nodos (x, y, peso) con pesos que incluyen ρ."""

    nodes: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def xs(self) -> np.ndarray:
        return self.nodes[:, 0]

    @property
    def ys(self) -> np.ndarray:
        return self.nodes[:, 1]

    @property
    def weights(self) -> np.ndarray:
        return self.nodes[:, 2]

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, values: np.ndarray) -> float:
        return float(np.sum(self.weights * values))

    def inner(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Matriz de productos internos entre columnas."""
        return left.T @ (self.weights[:, None] * right)


def _gauss(order: int, graded: bool) -> tuple[np.ndarray, np.ndarray]:
    """Nodos y pesos en [0, 1]; graded usa s(t) = 3t² − 2t³ para agrupar en los extremos."""
    t, w = legendre.leggauss(order)
    t = (t + 1) / 2
    w = w / 2
    if graded:
        return 3 * t ** 2 - 2 * t ** 3, w * 6 * t * (1 - t)
    return t, w


class _YSlicer:
    """Cortes verticales de Ω: raíces en y de cada condición a x fijo."""

    def __init__(self, domain: DomainSpec):
        self.domain = domain
        self.conditions = domain.conditions()
        self.y_lo, self.y_hi = float(domain.box[2]), float(domain.box[3])
        # coefs[k][d] = coeficientes en x del coeficiente de y^d
        self.coefs = []
        for poly, _ in self.conditions:
            per_y = []
            for d in range(max(poly.deg_y, 0) + 1):
                cx = poly.coeff_y(d)
                per_y.append(np.array([float(cx.coefficient(i, 0)) for i in range(max(cx.deg_x, 0) + 1)]))
            self.coefs.append(per_y)

    def _value(self, k: int, x: float, y: float) -> float:
        return float(sum(npoly.polyval(x, c) * y ** d for d, c in enumerate(self.coefs[k])))

    def _inside(self, x: float, y: float) -> bool:
        return all(s * self._value(k, x, y) > 0 for k, (_, s) in enumerate(self.conditions))

    def _refine(self, k: int, x: float, root: float) -> float:
        span = 1e-8 * max(1.0, abs(root))
        lo, hi = root - span, root + span
        f_lo, f_hi = self._value(k, x, lo), self._value(k, x, hi)
        if f_lo == 0 or f_hi == 0 or (f_lo > 0) == (f_hi > 0):
            return root
        for _ in range(60):
            mid = (lo + hi) / 2
            f_mid = self._value(k, x, mid)
            if (f_mid > 0) == (f_lo > 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        return (lo + hi) / 2

    def intervals(self, x: float) -> list[tuple[float, float]]:
        cuts = [self.y_lo, self.y_hi]
        for k, per_y in enumerate(self.coefs):
            if len(per_y) < 2:
                continue
            coeffs = [npoly.polyval(x, c) for c in per_y]
            while len(coeffs) > 1 and coeffs[-1] == 0:
                coeffs.pop()
            if len(coeffs) < 2:
                continue
            for root in np.roots(coeffs[::-1]):
                if abs(root.imag) <= 1e-9 * max(1.0, abs(root.real)):
                    r = self._refine(k, x, float(root.real))
                    if self.y_lo < r < self.y_hi:
                        cuts.append(r)
        cuts = np.unique(np.array(cuts))
        return [(lo, hi) for lo, hi in zip(cuts[:-1], cuts[1:])
                if hi > lo and self._inside(x, (lo + hi) / 2)]


def _edge_density_ratio(domain: DomainSpec, density: DensitySpec, nodes: np.ndarray, samples: int = 65) -> float:
    """max ρ sobre los lados de la caja que caen dentro de Ω, relativo a max ρ en los nodos."""
    x0, x1, y0, y1 = (float(v) for v in domain.box)
    s = np.linspace(0.0, 1.0, samples)
    xs = np.concatenate([x0 + (x1 - x0) * s, x0 + (x1 - x0) * s, np.full(samples, x0), np.full(samples, x1)])
    ys = np.concatenate([np.full(samples, y0), np.full(samples, y1), y0 + (y1 - y0) * s, y0 + (y1 - y0) * s])
    inside = np.array([domain.contains(x, y) for x, y in zip(xs, ys)])
    if not inside.any():
        return 0.0
    peak = float(np.max(density.evaluate_array(nodes[:, 0], nodes[:, 1])))
    edge = float(np.max(density.evaluate_array(xs[inside], ys[inside])))
    return edge / peak if peak > 0 else float("inf")


def build_quadrature(domain: DomainSpec, density: DensitySpec, order: int = DEFAULT_ORDER,
                     truncate: bool = False, threads: int = 1, exact_membership: bool = True) -> QuadratureRule:
    """
    Gauss–Legendre iterado: nodos exteriores en x por tramos entre x_breaks,
    intervalos interiores en y acotados por las raíces de las condiciones de Ω.
    """
    if not domain.bounded and not truncate:
        raise PreconditionError("Ω no acotado: use truncate=True para la caja de truncamiento")
    exps = density.exponent_values()
    if any(e < 0 for e in exps):
        raise PreconditionError(f"Exponentes {[format_fraction(e) for e in exps]}: p_k < 1 no admite cuadratura")
    if order < 1:
        raise PreconditionError("El orden de cuadratura debe ser ≥ 1")

    slicer = _YSlicer(domain)
    t, tw = _gauss(order, domain.graded)
    breaks = [float(b) for b in domain.x_breaks]
    outer = []
    for x0, x1 in zip(breaks[:-1], breaks[1:]):
        outer.extend(zip(x0 + (x1 - x0) * t, (x1 - x0) * tw))

    def column(item):
        x, wx = item
        pieces = []
        for y0, y1 in slicer.intervals(x):
            ys = y0 + (y1 - y0) * t
            pieces.append(np.column_stack([np.full_like(ys, x), ys, wx * (y1 - y0) * tw]))
        return np.vstack(pieces) if pieces else np.empty((0, 3))

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        columns = list(pool.map(column, outer))
    nodes = np.vstack(columns) if columns else np.empty((0, 3))

    dropped = 0
    if exact_membership and len(nodes):
        keep = np.array([domain.contains(float(x), float(y)) for x, y in nodes[:, :2]])
        dropped = int((~keep).sum())
        nodes = nodes[keep]
        if dropped:
            logger.warning(f"⚠️ {dropped} nodos fuera de Ω descartados")
    if not len(nodes):
        raise QuadratureError("La cuadratura no produjo nodos dentro de Ω")

    nodes[:, 2] = nodes[:, 2] * density.evaluate_array(nodes[:, 0], nodes[:, 1])
    meta = {
        "order": order,
        "outer_nodes": len(outer),
        "slices": len(breaks) - 1,
        "nodes": int(len(nodes)),
        "dropped": dropped,
        "graded": domain.graded,
        "truncated": not domain.bounded,
        "box": [format_fraction(v) for v in domain.box],
    }
    rule = QuadratureRule(nodes, meta)
    rule.meta["mass"] = rule.total_mass
    if not domain.bounded:
        rule.meta["tail_bound"] = _edge_density_ratio(domain, density, nodes)
        rule.meta["tail_note"] = "Ω no acotado: integrales sobre la caja de truncamiento, cola no certificada"
        logger.warning(f"⚠️ Caja de truncamiento {rule.meta['box']}, "
                       f"ρ en el borde / ρ máx = {rule.meta['tail_bound']:.3g}")
    logger.info(f"✅ Cuadratura: {rule.meta['nodes']} nodos, masa {rule.total_mass:.12g}")
    return rule


def self_convergence(domain: DomainSpec, density: DensitySpec, low: int, high: int,
                     truncate: bool = False) -> float:
    """Cambio relativo de ∫1 dμ entre dos órdenes."""
    a = build_quadrature(domain, density, low, truncate).total_mass
    b = build_quadrature(domain, density, high, truncate).total_mass
    return abs(b - a) / max(abs(b), 1e-300)


def bundle_quadrature(bundle: Bundle, order: int = DEFAULT_ORDER, threads: int = 1) -> QuadratureRule:
    if bundle.domain is None or bundle.density is None:
        raise PreconditionError(f"El bundle {bundle.entry_id} no tiene dominio o densidad")
    return build_quadrature(bundle.domain, bundle.density, order, truncate=True, threads=threads)


# ========================================
# GRAM–SCHMIDT Y SIMETRÍA
# ========================================

@dataclass
class GramResult:
    basis: FiltrationBasis
    coefficients: np.ndarray        # columna k = coordenadas del k-ésimo ortonormal
    residual: float

    def to_json(self) -> dict:
        return {"basis": self.basis.to_json(), "coefficients": self.coefficients.tolist(),
                "gram_residual": self.residual}


def gram_schmidt(bundle: Bundle, n: int, rule: QuadratureRule,
                 tol: float = DEFAULT_GRAM_TOL) -> GramResult:
    """Gram–Schmidt modificado con una pasada de reortogonalización."""
    basis = FiltrationBasis.build(bundle.weights, n)
    values = basis.evaluate(rule.xs, rule.ys)
    size = len(basis)
    coeffs = np.zeros((size, size))
    ortho = np.zeros_like(values)
    w = rule.weights
    for k in range(size):
        v = values[:, k].copy()
        c = np.zeros(size)
        c[k] = 1.0
        start = np.sqrt(np.sum(w * v * v))
        for _ in range(2):
            for j in range(k):
                r = np.sum(w * ortho[:, j] * v)
                v -= r * ortho[:, j]
                c -= r * coeffs[:, j]
        norm = np.sqrt(np.sum(w * v * v))
        if not np.isfinite(norm) or norm <= tol * max(start, 1.0):
            gram = rule.inner(values[:, :k + 1], values[:, :k + 1])
            cond = float(np.linalg.cond(gram))
            raise SingularGramError(f"Matriz de Gram singular en el monomio {basis.monomials[k]}", cond)
        ortho[:, k] = v / norm
        coeffs[:, k] = c / norm
    gramian = rule.inner(ortho, ortho)
    residual = float(np.max(np.abs(gramian - np.eye(size))))
    logger.info(f"✅ Gram–Schmidt: {size} polinomios, residuo {residual:.3e}")
    return GramResult(basis, coeffs, residual)


def _operator_values(bundle: Bundle, basis: FiltrationBasis, rule: QuadratureRule) -> np.ndarray:
    op = _operator(bundle)
    return np.stack([op(basis.polynomial(k)).evaluate_array(rule.xs, rule.ys) for k in range(len(basis))], axis=1)


def symmetry_defect(bundle: Bundle, n: int, rule: QuadratureRule) -> float:
    """max |⟨f1, L f2⟩ − ⟨f2, L f1⟩| / max(1, |⟨f1, L f2⟩|) sobre la base."""
    basis = FiltrationBasis.build(bundle.weights, n)
    values = basis.evaluate(rule.xs, rule.ys)
    images = _operator_values(bundle, basis, rule)
    pairing = rule.inner(values, images)
    scale = np.maximum(1.0, np.abs(pairing))
    return float(np.max(np.abs(pairing - pairing.T) / scale))


# ========================================
# ESTRUCTURA ESPECTRAL
# ========================================

@dataclass
class EigenReport:
    basis: FiltrationBasis
    eigenvalues: list[float]
    degrees: list[int]
    vectors: np.ndarray             # columna k = coordenadas del k-ésimo autopolinomio
    max_imag: float
    defective: list[int] = field(default_factory=list)

    def blocks(self) -> list[dict]:
        out: dict[int, list[float]] = {}
        for d, lam in zip(self.degrees, self.eigenvalues):
            out.setdefault(d, []).append(lam)
        return [{"degree": d, "eigenvalues": vals} for d, vals in sorted(out.items())]

    def to_json(self) -> dict:
        return {
            "blocks": self.blocks(),
            "eigenvalues": self.eigenvalues,
            "max_imag": self.max_imag,
            "defective_blocks": self.defective,
            "basis": self.basis.to_json(),
            "eigenvectors": self.vectors.tolist(),
        }


def _orthonormalize_group(vectors: np.ndarray, values: np.ndarray, rule: QuadratureRule) -> np.ndarray:
    evaluated = values @ vectors
    gram = rule.inner(evaluated, evaluated)
    chol = np.linalg.cholesky(gram)
    return vectors @ np.linalg.inv(chol).T


def eigenstructure(bundle: Bundle, n: int, rule: Optional[QuadratureRule] = None,
                   imag_tol: float = DEFAULT_IMAG_TOL) -> EigenReport:
    """
    Autovalores de los bloques diagonales de la matriz exacta de L y
    autopolinomios por sustitución hacia atrás en los grados inferiores.
    """
    report = filtration_invariance(bundle, n)
    if not report.ok:
        raise PreconditionError(f"L no preserva la filtración: testigo {report.witness}")
    basis = report.basis
    # B actúa sobre vectores de coeficientes: L(Σ c_k m_k) = Σ (Bc)_i m_i
    B = np.array([[float(v) for v in row] for row in report.matrix]).T
    size = len(basis)
    eigenvalues: list[float] = []
    degrees: list[int] = []
    columns: list[np.ndarray] = []
    defective: list[int] = []
    max_imag = 0.0
    low: list[int] = []
    for degree, idx in basis.blocks():
        vals, vecs = np.linalg.eig(B[np.ix_(idx, idx)])
        max_imag = max(max_imag, float(np.max(np.abs(vals.imag))) if len(vals) else 0.0)
        if np.linalg.matrix_rank(vecs) < len(idx):
            defective.append(degree)
        order = np.argsort(-vals.real, kind="stable")
        for k in order:
            lam = float(vals[k].real)
            top = vecs[:, k].real
            full = np.zeros(size)
            full[idx] = top
            if low:
                lhs = B[np.ix_(low, low)] - lam * np.eye(len(low))
                rhs = -B[np.ix_(low, idx)] @ top
                sol, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
                if np.max(np.abs(lhs @ sol - rhs), initial=0.0) > 1e-8 * max(1.0, np.max(np.abs(rhs), initial=0.0)):
                    if degree not in defective:
                        defective.append(degree)
                full[low] = sol
            eigenvalues.append(lam)
            degrees.append(degree)
            columns.append(full)
        low = low + idx
    vectors = np.stack(columns, axis=1) if columns else np.zeros((0, 0))

    if rule is not None and len(columns):
        values = basis.evaluate(rule.xs, rule.ys)
        lams = np.array(eigenvalues)
        done = np.zeros(len(lams), dtype=bool)
        for k in range(len(lams)):
            if done[k]:
                continue
            group = np.where(np.abs(lams - lams[k]) <= 1e-8 * max(1.0, abs(lams[k])))[0]
            done[group] = True
            try:
                vectors[:, group] = _orthonormalize_group(vectors[:, group], values, rule)
            except np.linalg.LinAlgError:
                logger.warning(f"⚠️ Autoespacio λ = {lams[k]:.6g} no ortonormalizable con la cuadratura")

    if max_imag > imag_tol:
        logger.warning(f"⚠️ Parte imaginaria máxima {max_imag:.3e} > {imag_tol:.1e}")
    if defective:
        logger.warning(f"⚠️ Bloques defectuosos (revisar): {defective}")
    return EigenReport(basis, eigenvalues, degrees, vectors, max_imag, defective)


# ========================================
# INFORME Y CSV
# ========================================

def spectral_report(bundle: Bundle, degree: int, order: int = DEFAULT_ORDER, threads: int = 1,
                    symmetry_tol: float = 1e-8, gram_tol: float = 1e-8,
                    imag_tol: float = DEFAULT_IMAG_TOL) -> tuple:
    """
    (informe, cuadratura, autoestructura); las dos últimas son None si falla la invariancia.
    "passed" exige invariancia, defecto de simetría y residuo de Gram bajo umbral y
    autovalores reales no positivos.
    """
    invariance = filtration_invariance(bundle, degree)
    result = {
        "entry": bundle.entry_id,
        "degree": degree,
        "order": order,
        "invariance": invariance.ok,
        "witness": list(invariance.witness) if invariance.witness else None,
        "passed": False,
    }
    if not invariance.ok:
        return result, None, None
    rule = bundle_quadrature(bundle, order, threads)
    eig = eigenstructure(bundle, degree, rule)
    result.update({
        "symmetry_defect": symmetry_defect(bundle, degree, rule),
        "gram_residual": gram_schmidt(bundle, degree, rule).residual,
        "eigenvalues": eig.blocks(),
        "max_imag": eig.max_imag,
        "defective_blocks": eig.defective,
        "quadrature": rule.meta,
    })
    scale = max([1.0] + [abs(v) for v in eig.eigenvalues])
    result["passed"] = bool(
        result["symmetry_defect"] <= symmetry_tol
        and result["gram_residual"] <= gram_tol
        and eig.max_imag <= imag_tol
        and max(eig.eigenvalues) <= imag_tol * scale
    )
    return result, rule, eig


def write_nodes_csv(rule: QuadratureRule, stream: IO[str]) -> None:
    writer = csv.writer(stream)
    writer.writerow(["x", "y", "weight"])
    for x, y, w in rule.nodes:
        writer.writerow([repr(float(x)), repr(float(y)), repr(float(w))])


def write_eigen_csv(report: EigenReport, stream: IO[str]) -> None:
    writer = csv.writer(stream)
    writer.writerow(["index", "degree", "eigenvalue"] + [f"x^{i}y^{j}" for i, j in report.basis.monomials])
    for k, (lam, d) in enumerate(zip(report.eigenvalues, report.degrees)):
        writer.writerow([k, d, repr(lam)] + [repr(float(v)) for v in report.vectors[:, k]])
