# dopkit/poly.py
"""
Aritmética exacta de polinomios en dos variables con coeficientes racionales.

Base de todos los demás módulos: RatPoly2 (mapa disperso (i, j) -> Fraction),
pesos normalizados, polígono de Newton, divisibilidad exacta, mcd por
subresultantes y núcleo exacto por eliminación de Bareiss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import PolyParseError

Monomial = tuple[int, int]
Rational = Union[int, Fraction]
NEG_INF = float("-inf")


def to_fraction(value) -> Fraction:
    """Convierte int, Fraction o texto ("3/4", "-2", "0.5") a Fraction exacta."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool no es un coeficiente válido")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # Exacto: el float se interpreta como el racional que representa
        return Fraction(value)
    raise TypeError(f"No se puede convertir {type(value).__name__} a racional")


def format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _grlex_key(mono: Monomial) -> tuple[int, int]:
    # Orden graduado lexicográfico con x > y
    return (mono[0] + mono[1], mono[0])


# ========================================
# PESOS
# ========================================

@dataclass(frozen=True)
class Weights:
    """Par de pesos enteros positivos coprimos (w1, w2)."""

    w1: int
    w2: int

    def __post_init__(self):
        if self.w1 <= 0 or self.w2 <= 0:
            raise ValueError(f"Los pesos deben ser positivos: ({self.w1}, {self.w2})")
        if math.gcd(self.w1, self.w2) != 1:
            raise ValueError("Use Weights.from_rationals para normalizar pesos no coprimos")

    @classmethod
    def from_rationals(cls, first, second) -> "Weights":
        a, b = to_fraction(first), to_fraction(second)
        if a <= 0 or b <= 0:
            raise ValueError(f"Los pesos deben ser racionales positivos: ({a}, {b})")
        scale = math.lcm(a.denominator, b.denominator)
        ia, ib = int(a * scale), int(b * scale)
        g = math.gcd(ia, ib)
        return cls(ia // g, ib // g)

    @classmethod
    def parse(cls, text: str) -> "Weights":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 2:
            raise ValueError(f"Pesos mal formados: '{text}' (se espera 'W1,W2')")
        return cls.from_rationals(parts[0], parts[1])

    def as_tuple(self) -> tuple[int, int]:
        return (self.w1, self.w2)

    def __getitem__(self, index: int) -> int:
        return (self.w1, self.w2)[index]

    def __str__(self) -> str:
        return f"{self.w1},{self.w2}"


# ========================================
# POLINOMIO DISPERSO
# ========================================

class RatPoly2:
    """
    Polinomio disperso en x, y con coeficientes Fraction.

    Inmutable y canónico: nunca se guarda un coeficiente nulo, por lo que la
    igualdad es igualdad de mapas de términos.
    """

    def __init__(self, terms: Optional[Mapping[Monomial, Rational]] = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"Exponente negativo en el monomio {(i, j)}")
                value = to_fraction(c)
                if value:
                    clean[(int(i), int(j))] = value
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> "RatPoly2":
        obj = cls.__new__(cls)
        obj._terms = {m: c for m, c in terms.items() if c}
        return obj

    # --- Constructores ---

    @classmethod
    def zero(cls) -> "RatPoly2":
        return cls._raw({})

    @classmethod
    def const(cls, value: Rational) -> "RatPoly2":
        return cls._raw({(0, 0): to_fraction(value)})

    @classmethod
    def one(cls) -> "RatPoly2":
        return cls.const(1)

    @classmethod
    def monomial(cls, i: int, j: int, coeff: Rational = 1) -> "RatPoly2":
        return cls({(i, j): coeff})

    @classmethod
    def x(cls) -> "RatPoly2":
        return cls.monomial(1, 0)

    @classmethod
    def y(cls) -> "RatPoly2":
        return cls.monomial(0, 1)

    @classmethod
    def univariate_x(cls, coeffs: Sequence[Rational]) -> "RatPoly2":
        """Polinomio en x a partir de coeficientes en orden ascendente."""
        return cls({(i, 0): c for i, c in enumerate(coeffs)})

    @classmethod
    def parse(cls, text: str) -> "RatPoly2":
        return _Parser(text).parse()

    @classmethod
    def from_json(cls, data: Iterable) -> "RatPoly2":
        terms: dict[Monomial, Fraction] = {}
        for item in data:
            if len(item) != 3:
                raise ValueError(f"Término JSON mal formado: {item!r}")
            i, j, c = item
            key = (int(i), int(j))
            terms[key] = terms.get(key, Fraction(0)) + to_fraction(c)
        return cls(terms)

    # --- Acceso ---

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((0, 0), Fraction(0))

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def support(self) -> list[Monomial]:
        return sorted(self._terms, key=_grlex_key, reverse=True)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        for mono in self.support():
            yield mono, self._terms[mono]

    def __len__(self) -> int:
        return len(self._terms)

    # --- Grados ---

    @cached_property
    def deg_x(self) -> int:
        return max((i for i, _ in self._terms), default=-1)

    @cached_property
    def deg_y(self) -> int:
        return max((j for _, j in self._terms), default=-1)

    @cached_property
    def total_degree(self) -> int:
        return max((i + j for i, j in self._terms), default=-1)

    def weighted_degree(self, w: Weights) -> Union[int, float]:
        return weighted_degree(self, w)

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("El polinomio cero no tiene término principal")
        return max(self._terms, key=_grlex_key)

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.leading_monomial()]

    def coeff_y(self, k: int) -> "RatPoly2":
        """Coeficiente de y^k como polinomio en x."""
        return RatPoly2._raw({(i, 0): c for (i, j), c in self._terms.items() if j == k})

    def coeff_x(self, k: int) -> "RatPoly2":
        """Coeficiente de x^k como polinomio en y."""
        return RatPoly2._raw({(0, j): c for (i, j), c in self._terms.items() if i == k})

    # --- Aritmética ---

    @staticmethod
    def _coerce(other) -> Optional["RatPoly2"]:
        if isinstance(other, RatPoly2):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatPoly2.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return RatPoly2._raw(terms)

    __radd__ = __add__

    def __neg__(self) -> "RatPoly2":
        return RatPoly2._raw({m: -c for m, c in self._terms.items()})

    def __pos__(self) -> "RatPoly2":
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            factor = to_fraction(other)
            return RatPoly2._raw({m: c * factor for m, c in self._terms.items()})
        if not isinstance(other, RatPoly2):
            return NotImplemented
        terms: dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return RatPoly2._raw(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """División solo por escalares racionales no nulos."""
        if isinstance(other, RatPoly2):
            if not other.is_constant or other.is_zero:
                raise ZeroDivisionError("Solo se divide por constantes; use divides()")
            other = other.constant_value()
        factor = to_fraction(other)
        if factor == 0:
            raise ZeroDivisionError("División por cero")
        return RatPoly2._raw({m: c / factor for m, c in self._terms.items()})

    def __pow__(self, exponent: int) -> "RatPoly2":
        if not isinstance(exponent, int) or isinstance(exponent, bool):
            raise TypeError("El exponente debe ser entero")
        if exponent < 0:
            raise ValueError("Exponente negativo no permitido en pow")
        result = RatPoly2.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def shift(self, di: int, dj: int) -> "RatPoly2":
        """Multiplica por x^di y^dj."""
        return RatPoly2._raw({(i + di, j + dj): c for (i, j), c in self._terms.items()})

    def partial_x(self) -> "RatPoly2":
        return RatPoly2._raw({(i - 1, j): c * i for (i, j), c in self._terms.items() if i})

    def partial_y(self) -> "RatPoly2":
        return RatPoly2._raw({(i, j - 1): c * j for (i, j), c in self._terms.items() if j})

    def diff(self, var: int) -> "RatPoly2":
        return self.partial_x() if var == 0 else self.partial_y()

    # --- Evaluación y composición ---

    def compose(self, x_value, y_value, zero=0):
        """
        Sustituye x, y por elementos de cualquier anillo que soporte +, * y
        multiplicación por Fraction (Fraction, float, RatPoly2, series, sympy).
        """
        if not self._terms:
            return zero
        x_pows = _powers(x_value, self.deg_x)
        y_pows = _powers(y_value, self.deg_y)
        total = zero
        for (i, j), c in self.items():
            term = c
            if i:
                term = term * x_pows[i]
            if j:
                term = term * y_pows[j]
            total = total + term
        return total

    def evaluate(self, x_value, y_value):
        """Evaluación exacta en racionales; con floats devuelve float."""
        if isinstance(x_value, float) or isinstance(y_value, float):
            return float(self.compose(float(x_value), float(y_value), zero=0.0))
        return self.compose(to_fraction(x_value), to_fraction(y_value), zero=Fraction(0))

    def evaluate_array(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Evaluación vectorizada en float64 (ruta rápida de cuadratura)."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        out = np.zeros(np.broadcast(xs, ys).shape)
        for (i, j), c in self._terms.items():
            out = out + float(c) * xs ** i * ys ** j
        return out

    def substitute(self, x_poly: "RatPoly2", y_poly: "RatPoly2") -> "RatPoly2":
        return self.compose(x_poly, y_poly, zero=RatPoly2.zero())

    # --- Normalización ---

    def content(self) -> Fraction:
        """mcd de numeradores sobre mcm de denominadores (positivo)."""
        if not self._terms:
            return Fraction(0)
        nums = reduce(math.gcd, (c.numerator for c in self._terms.values()))
        dens = reduce(math.lcm, (c.denominator for c in self._terms.values()))
        return Fraction(abs(nums), dens)

    def monic(self) -> "RatPoly2":
        """Coeficiente principal (orden graduado lex.) igual a 1."""
        if not self._terms:
            return self
        return self / self.leading_coefficient()

    def integer_primitive(self) -> "RatPoly2":
        """Coeficientes enteros coprimos con coeficiente principal positivo."""
        if not self._terms:
            return self
        scaled = self / self.content()
        return -scaled if scaled.leading_coefficient() < 0 else scaled

    # --- Igualdad / hashing ---

    def __eq__(self, other) -> bool:
        other_poly = self._coerce(other)
        if other_poly is None:
            return NotImplemented
        return self._terms == other_poly._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # --- Serialización ---

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for idx, ((i, j), c) in enumerate(self.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            factors = []
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("y" if j == 1 else f"y^{j}")
            if not factors:
                body = format_fraction(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_fraction(mag)] + factors)
            if idx == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def to_json(self) -> list[list]:
        return [[i, j, format_fraction(c)] for (i, j), c in self.items()]

    def to_sympy(self, x_sym, y_sym):
        import sympy
        return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * x_sym ** i * y_sym ** j
                           for (i, j), c in self._terms.items()])

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RatPoly2('{self.to_text()}')"


def _powers(value, degree: int) -> list:
    pows = [None] * (max(degree, 0) + 1)
    if degree >= 1:
        pows[1] = value
        for k in range(2, degree + 1):
            pows[k] = pows[k - 1] * value
    return pows


X = RatPoly2.x()
Y = RatPoly2.y()


# ========================================
# PARSER DE TEXTO
# ========================================

class _Parser:
    """
    Descenso recursivo para  + - * / ^ ( )  con variables x, y.
    La división solo se admite entre constantes.
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> RatPoly2:
        self._skip()
        if self.pos >= len(self.text):
            raise PolyParseError("Texto polinomial vacío", self.pos, self.text)
        result = self._expr()
        self._skip()
        if self.pos != len(self.text):
            raise PolyParseError(f"Carácter inesperado '{self.text[self.pos]}'", self.pos, self.text)
        return result

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self) -> RatPoly2:
        result = self._term()
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self._term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _term(self) -> RatPoly2:
        result = self._unary()
        while True:
            ch = self._peek()
            if ch == "*" and not self.text.startswith("**", self.pos):
                self.pos += 1
                result = result * self._unary()
            elif ch == "/":
                start = self.pos
                self.pos += 1
                divisor = self._unary()
                if not divisor.is_constant:
                    raise PolyParseError("Solo se puede dividir por constantes", start, self.text)
                if divisor.is_zero:
                    raise PolyParseError("División por cero", start, self.text)
                result = result / divisor
            else:
                return result

    def _unary(self) -> RatPoly2:
        ch = self._peek()
        if ch == "-":
            self.pos += 1
            return -self._unary()
        if ch == "+":
            self.pos += 1
            return self._unary()
        return self._power()

    def _power(self) -> RatPoly2:
        base = self._atom()
        self._skip()
        if self.text.startswith("**", self.pos):
            self.pos += 2
        elif self._peek() == "^":
            self.pos += 1
        else:
            return base
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise PolyParseError("Se esperaba un exponente entero no negativo", start, self.text)
        return base ** int(self.text[start:self.pos])

    def _atom(self) -> RatPoly2:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            inner = self._expr()
            if self._peek() != ")":
                raise PolyParseError("Falta ')'", self.pos, self.text)
            self.pos += 1
            return inner
        if ch == "x":
            self.pos += 1
            return RatPoly2.x()
        if ch == "y":
            self.pos += 1
            return RatPoly2.y()
        if ch.isdigit() or ch == ".":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
                self.pos += 1
            literal = self.text[start:self.pos]
            try:
                return RatPoly2.const(Fraction(literal))
            except ValueError:
                raise PolyParseError(f"Número inválido '{literal}'", start, self.text) from None
        if not ch:
            raise PolyParseError("Fin de texto inesperado", self.pos, self.text)
        raise PolyParseError(f"Símbolo inesperado '{ch}'", self.pos, self.text)


# ========================================
# GRADO PONDERADO Y POLÍGONO DE NEWTON
# ========================================

def weighted_degree(p: RatPoly2, w: Weights) -> Union[int, float]:
    """max(w1·i + w2·j) sobre el soporte; −∞ para el polinomio cero."""
    if p.is_zero:
        return NEG_INF
    return max(w.w1 * i + w.w2 * j for i, j in p.terms)


def monomials_up_to(bound: int, w: Weights) -> list[Monomial]:
    """Monomios con grado ponderado ≤ bound, en orden (deg_w, i) ascendente."""
    if bound < 0:
        return []
    monos = [(i, j) for i in range(bound // w.w1 + 1) for j in range((bound - w.w1 * i) // w.w2 + 1)]
    return sorted(monos, key=lambda m: (w.w1 * m[0] + w.w2 * m[1], m[0]))


@dataclass(frozen=True)
class NewtonPolygon:
    """Envolvente convexa del soporte, vértices en sentido antihorario."""

    vertices: tuple[Monomial, ...]

    def edges(self) -> list[tuple[Monomial, Monomial]]:
        if len(self.vertices) < 2:
            return []
        if len(self.vertices) == 2:
            return [(self.vertices[0], self.vertices[1])]
        n = len(self.vertices)
        return [(self.vertices[k], self.vertices[(k + 1) % n]) for k in range(n)]

    def inward_normals(self) -> list[tuple[int, int]]:
        """Normal interior primitiva de cada arista (para un segmento, ambas)."""
        normals = []
        for (x0, y0), (x1, y1) in self.edges():
            dx, dy = x1 - x0, y1 - y0
            g = math.gcd(dx, dy) or 1
            # En sentido antihorario el interior queda a la izquierda
            normals.append((-dy // g, dx // g))
        if len(self.vertices) == 2:
            normals.append((-normals[0][0], -normals[0][1]))
        return normals

    def contains(self, point: Monomial) -> bool:
        if len(self.vertices) == 1:
            return point == self.vertices[0]
        if len(self.vertices) == 2:
            (x0, y0), (x1, y1) = self.vertices
            cross = (x1 - x0) * (point[1] - y0) - (y1 - y0) * (point[0] - x0)
            return cross == 0 and min(x0, x1) <= point[0] <= max(x0, x1) and min(y0, y1) <= point[1] <= max(y0, y1)
        return all(_cross(a, b, point) >= 0 for a, b in self.edges())


def _cross(o: Monomial, a: Monomial, b: Monomial) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Monomial]) -> tuple[Monomial, ...]:
    """Cadena monótona; elimina puntos colineales."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)
    lower: list[Monomial] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Monomial] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return tuple(hull)


def newton_polygon(p: RatPoly2) -> NewtonPolygon:
    if p.is_zero:
        raise ValueError("El polígono de Newton del polinomio cero no está definido")
    return NewtonPolygon(convex_hull(p.terms))


# ========================================
# DIVISIBILIDAD EXACTA
# ========================================

def divides(d: RatPoly2, p: RatPoly2) -> Optional[RatPoly2]:
    """
    Cociente q con q·d = p, o None.

    Las incógnitas de q viven en la caja de exponentes N(p) ⊖ N(d); el sistema
    lineal es triangular respecto del orden graduado lex. y se resuelve barriendo
    el término principal. El resultado se verifica multiplicando.
    """
    if d.is_zero:
        raise ZeroDivisionError("divides: divisor cero")
    if p.is_zero:
        return RatPoly2.zero()
    if d.is_constant:
        return p / d.constant_value()

    d_i = [i for i, _ in d.terms]
    d_j = [j for _, j in d.terms]
    p_i = [i for i, _ in p.terms]
    p_j = [j for _, j in p.terms]
    box_i = (min(p_i) - min(d_i), max(p_i) - max(d_i))
    box_j = (min(p_j) - min(d_j), max(p_j) - max(d_j))
    if box_i[0] > box_i[1] or box_j[0] > box_j[1] or box_i[1] < 0 or box_j[1] < 0:
        return None

    lead = d.leading_monomial()
    lead_c = d.terms[lead]
    d_terms = list(d.terms.items())
    remainder = dict(p.terms)
    quotient: dict[Monomial, Fraction] = {}
    while remainder:
        mono = max(remainder, key=_grlex_key)
        e = (mono[0] - lead[0], mono[1] - lead[1])
        if not (box_i[0] <= e[0] <= box_i[1] and box_j[0] <= e[1] <= box_j[1]) or e[0] < 0 or e[1] < 0:
            return None
        coeff = remainder[mono] / lead_c
        quotient[e] = coeff
        for (i, j), c in d_terms:
            key = (i + e[0], j + e[1])
            value = remainder.get(key, Fraction(0)) - coeff * c
            if value:
                remainder[key] = value
            else:
                remainder.pop(key, None)
    q = RatPoly2._raw(quotient)
    if q * d != p:
        return None
    return q


def exact_div(p: RatPoly2, d: RatPoly2) -> RatPoly2:
    q = divides(d, p)
    if q is None:
        raise ArithmeticError(f"{d} no divide a {p}")
    return q


# ========================================
# MCD (PRS DE SUBRESULTANTES)
# ========================================

def _gcd_x(a: RatPoly2, b: RatPoly2) -> RatPoly2:
    """mcd mónico de polinomios en x (Euclides sobre ℚ)."""
    while not b.is_zero:
        a, b = b, _rem_x(a, b)
    return a.monic() if not a.is_zero else a


def _rem_x(a: RatPoly2, b: RatPoly2) -> RatPoly2:
    db = b.deg_x
    lc = b.coefficient(db, 0)
    r = a
    while not r.is_zero and r.deg_x >= db:
        dr = r.deg_x
        r = r - b.shift(dr - db, 0) * (r.coefficient(dr, 0) / lc)
    return r


def _content_y(p: RatPoly2) -> RatPoly2:
    """mcd (en ℚ[x]) de los coeficientes de p vistos en ℚ[x][y]."""
    result = RatPoly2.zero()
    for k in range(p.deg_y, -1, -1):
        ck = p.coeff_y(k)
        if not ck.is_zero:
            result = _gcd_x(result, ck) if not result.is_zero else ck.monic()
            if result.is_constant:
                break
    return result


def _div_by_x_poly(p: RatPoly2, c: RatPoly2) -> RatPoly2:
    if c.is_constant:
        return p / c.constant_value()
    total = RatPoly2.zero()
    for k in range(p.deg_y + 1):
        ck = p.coeff_y(k)
        if not ck.is_zero:
            total = total + exact_div(ck, c).shift(0, k)
    return total


def _prem_y(a: RatPoly2, b: RatPoly2) -> RatPoly2:
    """Pseudo-resto lc_y(b)^(δ+1)·a mod b en ℚ[x][y]."""
    db = b.deg_y
    lc = b.coeff_y(db)
    r = a
    e = a.deg_y - db + 1
    while not r.is_zero and r.deg_y >= db:
        dr = r.deg_y
        r = lc * r - r.coeff_y(dr) * b.shift(0, dr - db)
        e -= 1
    return (lc ** e) * r if e > 0 else r


def gcd(p: RatPoly2, q: RatPoly2) -> RatPoly2:
    """
    mcd normalizado (coeficiente principal 1 en orden graduado lex.).

    PRS de subresultantes en y sobre ℚ[x] combinado con mcd de contenidos.
    """
    if p.is_zero:
        return q.monic()
    if q.is_zero:
        return p.monic()
    cont_p, cont_q = _content_y(p), _content_y(q)
    cont = _gcd_x(cont_p, cont_q)
    a = _div_by_x_poly(p, cont_p)
    b = _div_by_x_poly(q, cont_q)
    if a.deg_y < b.deg_y:
        a, b = b, a
    if b.deg_y <= 0:
        # b es constante en y tras quitar el contenido
        return cont.monic()

    g = RatPoly2.one()
    h = RatPoly2.one()
    while True:
        delta = a.deg_y - b.deg_y
        r = _prem_y(a, b)
        if r.is_zero:
            break
        if r.deg_y == 0:
            return cont.monic()
        divisor = g * h ** delta
        a, b = b, _div_by_x_poly(r, divisor)
        g = a.coeff_y(a.deg_y)
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exact_div(g ** delta, h ** (delta - 1))
    primitive = _div_by_x_poly(b, _content_y(b))
    return (cont * primitive).monic()


def is_squarefree(p: RatPoly2) -> bool:
    if p.is_zero:
        raise ValueError("is_squarefree: polinomio cero")
    return gcd(gcd(p, p.partial_x()), p.partial_y()).is_constant


# ========================================
# NÚCLEO EXACTO (BAREISS)
# ========================================

def _integer_rows(rows: Sequence[Sequence[Rational]]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [to_fraction(v) for v in row]
        scale = reduce(math.lcm, (f.denominator for f in fr), 1)
        out.append([int(f * scale) for f in fr])
    return out


def _bareiss_echelon(matrix: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Forma escalonada libre de fracciones; pivotes por orden fijo de columnas."""
    m = [row[:] for row in matrix if any(row)]
    pivots: list[int] = []
    prev = 1
    r = 0
    for col in range(ncols):
        if r >= len(m):
            break
        pivot_row = next((k for k in range(r, len(m)) if m[k][col] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        piv = m[r][col]
        for k in range(r + 1, len(m)):
            row_k = m[k]
            factor = row_k[col]
            row_r = m[r]
            for c in range(col, ncols):
                # La división es exacta por el teorema de Sylvester
                row_k[c] = (piv * row_k[c] - factor * row_r[c]) // prev
        prev = piv
        pivots.append(col)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Rational]]) -> int:
    if not rows:
        return 0
    ncols = len(rows[0])
    _, pivots = _bareiss_echelon(_integer_rows(rows), ncols)
    return len(pivots)


def nullspace(rows: Sequence[Sequence[Rational]], ncols: Optional[int] = None) -> list[list[int]]:
    """
    Base exacta del núcleo: vectores enteros primitivos, primera entrada no
    nula positiva, uno por columna libre en orden creciente.
    """
    if ncols is None:
        if not rows:
            raise ValueError("nullspace: se necesita ncols para una matriz vacía")
        ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("nullspace: la matriz no es rectangular")
    echelon, pivots = _bareiss_echelon(_integer_rows(rows), ncols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis: list[list[int]] = []
    for free in free_cols:
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            row = echelon[r]
            acc = sum((row[c] * vec[c] for c in range(pc + 1, ncols) if row[c] and vec[c]), Fraction(0))
            vec[pc] = -acc / row[pc]
        basis.append(_primitive_vector(vec))
    return basis


def _primitive_vector(vec: Sequence[Fraction]) -> list[int]:
    scale = reduce(math.lcm, (v.denominator for v in vec), 1)
    ints = [int(v * scale) for v in vec]
    g = reduce(math.gcd, ints, 0) or 1
    ints = [v // g for v in ints]
    first = next((v for v in ints if v), 0)
    if first < 0:
        ints = [-v for v in ints]
    return ints


def linear_relations(columns: Sequence[Sequence[RatPoly2]]) -> list[list[Fraction]]:
    """
    Filas del sistema Σ_k t_k·columns[k][e] = 0 (e = índice de ecuación
    polinomial), una fila por (ecuación, monomio).
    """
    keys: dict[tuple[int, Monomial], int] = {}
    entries: list[tuple[int, int, Fraction]] = []
    for k, col in enumerate(columns):
        for e, poly in enumerate(col):
            for mono, c in poly.terms.items():
                idx = keys.setdefault((e, mono), len(keys))
                entries.append((idx, k, c))
    rows = [[Fraction(0)] * len(columns) for _ in range(len(keys))]
    for idx, k, c in entries:
        rows[idx][k] += c
    return rows


def solve_linear_combination(columns: Sequence[Sequence[RatPoly2]]) -> list[list[int]]:
    """Núcleo de la relación lineal entre columnas polinomiales."""
    rows = linear_relations(columns)
    return nullspace(rows, ncols=len(columns)) if rows else [
        [1 if c == k else 0 for c in range(len(columns))] for k in range(len(columns))
    ]
