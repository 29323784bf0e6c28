"""
Curvas planas como gráficas (x, f(x)).

La familia de cuádricas racionales se maneja como cónicas generales
A u² + B uv + C v² + D u + E v + F = 0 con coeficientes racionales
exactos, obtenidas tirando hacia atrás la cónica base (circunferencia,
parábola o hipérbola) por la inversa de la aplicación afín.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from mpmath import iv

from .config_manager import config_manager
from .errors import DomainError
from .interval import Enclosure, evaluate, iv_rational, precision

logger = logging.getLogger(__name__)

DEFAULT_EPS = Fraction(1, 10)
BASES = ('circle', 'parabola', 'hyperbola')

# Formas cuadráticas homogéneas [x, y, 1] de las cónicas base
_BASE_MATRICES = {
    'circle': ((1, 0, 0), (0, 1, 0), (0, 0, -1)),
    'parabola': ((-1, 0, 0), (0, 0, Fraction(1, 2)), (0, Fraction(1, 2), 0)),
    'hyperbola': ((1, 0, 0), (0, -1, 0), (0, 0, -1)),
}


def _fraccion(x):
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def _sqrt_exacta(x: Fraction) -> Optional[Fraction]:
    """Raíz cuadrada racional exacta de x ≥ 0, o None si es irracional."""
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class Interval:
    """Intervalo de extremos racionales con indicadores de apertura."""

    lo: Fraction
    hi: Fraction
    open_lo: bool = True
    open_hi: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'lo', _fraccion(self.lo))
        object.__setattr__(self, 'hi', _fraccion(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"intervalo inválido: {self.lo} > {self.hi}")

    @property
    def is_empty(self):
        return self.lo == self.hi

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2

    def contains(self, x):
        x = _fraccion(x)
        sobre_lo = x > self.lo if self.open_lo else x >= self.lo
        bajo_hi = x < self.hi if self.open_hi else x <= self.hi
        return sobre_lo and bajo_hi

    def contains_interval(self, other):
        return self.lo <= other.lo and other.hi <= self.hi

    def numerator_range(self, q):
        """Enteros p con p/q en el intervalo, como (primero, último)."""
        a, b = self.lo * q, self.hi * q
        primero = math.floor(a) + 1 if self.open_lo else math.ceil(a)
        ultimo = math.ceil(b) - 1 if self.open_hi else math.floor(b)
        return primero, ultimo

    def subdivide(self, k):
        """Divide en k subintervalos abiertos de igual longitud."""
        if k < 1:
            raise DomainError("k debe ser ≥ 1")
        paso = self.length / k
        return [Interval(self.lo + i * paso, self.lo + (i + 1) * paso) for i in range(k)]

    def to_text(self):
        izq = '(' if self.open_lo else '['
        der = ')' if self.open_hi else ']'
        return f"{izq}{self.lo},{self.hi}{der}"

    def to_dict(self):
        return {'lo': str(self.lo), 'hi': str(self.hi),
                'open_lo': self.open_lo, 'open_hi': self.open_hi}


@dataclass(frozen=True)
class RationalAffineMap:
    """P ↦ M·P + b con M invertible y entradas racionales."""

    M: Tuple[Fraction, Fraction, Fraction, Fraction]
    b: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))

    def __post_init__(self):
        M = tuple(_fraccion(x) for x in self.M)
        b = tuple(_fraccion(x) for x in self.b)
        if len(M) != 4 or len(b) != 2:
            raise DomainError("M necesita 4 entradas y b necesita 2")
        object.__setattr__(self, 'M', M)
        object.__setattr__(self, 'b', b)
        if self.det == 0:
            raise DomainError("la aplicación afín no es invertible (det(M) = 0)")

    @classmethod
    def identity(cls):
        return cls((1, 0, 0, 1))

    @property
    def det(self):
        m11, m12, m21, m22 = self.M
        return m11 * m22 - m12 * m21

    def apply(self, x, y):
        m11, m12, m21, m22 = self.M
        x, y = _fraccion(x), _fraccion(y)
        return m11 * x + m12 * y + self.b[0], m21 * x + m22 * y + self.b[1]

    def inverse(self):
        m11, m12, m21, m22 = self.M
        d = self.det
        n11, n12, n21, n22 = m22 / d, -m12 / d, -m21 / d, m11 / d
        c1 = -(n11 * self.b[0] + n12 * self.b[1])
        c2 = -(n21 * self.b[0] + n22 * self.b[1])
        return RationalAffineMap((n11, n12, n21, n22), (c1, c2))

    @property
    def is_identity(self):
        return self.M == (1, 0, 0, 1) and self.b == (0, 0)

    def to_text(self):
        return f"M={','.join(str(x) for x in self.M)}; t={','.join(str(x) for x in self.b)}"


class PlanarCurve:
    """Gráfica (x, f(x)) sobre un intervalo I₀ con f″ de signo constante."""

    name = 'curve'

    def __init__(self, interval: Interval):
        self.interval = interval
        self.curvature_bounds = (0.0, math.inf)
        self._x_critico = None

    # --- evaluación vectorial en coma flotante ---
    def f_array(self, x):
        raise NotImplementedError

    def fprime_array(self, x):
        raise NotImplementedError

    def fsecond_array(self, x):
        raise NotImplementedError

    def f(self, x):
        return float(self.f_array(np.array([float(x)]))[0])

    # --- evaluación certificada ---
    def exact_f(self, x: Fraction) -> Optional[Fraction]:
        return None

    def _iv_f(self, x: Fraction):
        raise NotImplementedError

    def enclose_f(self, x, bits=128) -> Enclosure:
        """Encierro de f(x) en un racional x."""
        x = _fraccion(x)
        exacto = self.exact_f(x)
        if exacto is not None:
            return Enclosure.exact(exacto)
        return evaluate(lambda: self._iv_f(x), bits)

    # --- geometría auxiliar ---
    def _localizar_critico(self):
        lo, hi = float(self.interval.lo), float(self.interval.hi)
        dlo, dhi = self.fprime_array(np.array([lo, hi]))
        if dlo * dhi >= 0:
            return None
        for _ in range(80):
            medio = 0.5 * (lo + hi)
            dm = self.fprime_array(np.array([medio]))[0]
            if (dm < 0) == (dlo < 0):
                lo, dlo = medio, dm
            else:
                hi = medio
        return 0.5 * (lo + hi)

    @property
    def convex(self):
        return self.fsecond_array(np.array([float(self.interval.midpoint)]))[0] > 0

    def f_range(self, lo, hi):
        """Mínimo y máximo de f en las ventanas [lo, hi] (arrays)."""
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        fl, fh = self.f_array(lo), self.f_array(hi)
        fmin, fmax = np.minimum(fl, fh), np.maximum(fl, fh)
        if self._x_critico is not None:
            dentro = (lo < self._x_critico) & (self._x_critico < hi)
            if dentro.any():
                fc = self.f(self._x_critico)
                if self.convex:
                    fmin = np.where(dentro, fc, fmin)
                else:
                    fmax = np.where(dentro, fc, fmax)
        return fmin, fmax

    def min_abs_fprime(self, lo, hi):
        """min |f′| en las ventanas [lo, hi] (f′ es monótona)."""
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        d = np.minimum(np.abs(self.fprime_array(lo)), np.abs(self.fprime_array(hi)))
        if self._x_critico is not None:
            d = np.where((lo < self._x_critico) & (self._x_critico < hi), 0.0, d)
        return d

    def lipschitz(self):
        """√(1 + sup|f′|²) sobre I₀."""
        extremos = np.array([float(self.interval.lo), float(self.interval.hi)])
        return math.sqrt(1.0 + float(np.max(np.abs(self.fprime_array(extremos)))) ** 2)

    def check_curvature(self, samples=1000):
        """Comprueba c₁ < |f″| < c₂ en una malla equiespaciada interior."""
        c1, c2 = self.curvature_bounds
        lo, hi = float(self.interval.lo), float(self.interval.hi)
        x = lo + (hi - lo) * (np.arange(samples) + 0.5) / samples
        d2 = np.abs(self.fsecond_array(x))
        return bool(np.all((c1 < d2) & (d2 < c2)))

    def to_text(self):
        return self.name

    def to_dict(self):
        return {
            'curve': self.to_text(),
            'interval': self.interval.to_dict(),
            'curvature_bounds': list(self.curvature_bounds)
        }


class QuadricCurve(PlanarCurve):
    """Imagen racional afín de una cónica base, como gráfica sobre un intervalo."""

    def __init__(self, base, affine_map: RationalAffineMap, interval: Interval, branch=1, text=None):
        super().__init__(interval)
        if base not in BASES:
            raise DomainError(f"cónica base desconocida: {base}")
        if branch not in (1, -1):
            raise DomainError("la rama debe ser +1 o −1")
        self.base = base
        self.map = affine_map
        self.branch = branch
        self.name = text or base
        self.coefficients = self._pullback()
        A, B, C, D, E, F = self.coefficients
        # branch = +1 es la rama superior: signo efectivo de la raíz según C
        self._signo = branch if C >= 0 else -branch
        self.det = self._determinante()
        if self.det == 0:
            raise DomainError("cónica degenerada")
        # v satisface C v² + (B u + E) v + (A u² + D u + F) = 0
        self._disc = (B * B - 4 * A * C, 2 * B * E - 4 * C * D, E * E - 4 * C * F)
        self._comprobar_grafica()
        self.curvature_bounds = self._cotas_curvatura()
        self._x_critico = self._localizar_critico()

    def _pullback(self):
        S = [[Fraction(x) for x in fila] for fila in _BASE_MATRICES[self.base]]
        inv = self.map.inverse()
        n11, n12, n21, n22 = inv.M
        c1, c2 = inv.b
        T = [[n11, n12, c1], [n21, n22, c2], [Fraction(0), Fraction(0), Fraction(1)]]
        ST = [[sum(S[i][k] * T[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
        R = [[sum(T[k][i] * ST[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
        self._matrix = R
        return (R[0][0], 2 * R[0][1], R[1][1], 2 * R[0][2], 2 * R[1][2], R[2][2])

    def _determinante(self):
        R = self._matrix
        return (R[0][0] * (R[1][1] * R[2][2] - R[1][2] * R[2][1])
                - R[0][1] * (R[1][0] * R[2][2] - R[1][2] * R[2][0])
                + R[0][2] * (R[1][0] * R[2][1] - R[1][1] * R[2][0]))

    # --- polinomios exactos en u ---
    def _b(self, u):
        _, B, _, _, E, _ = self.coefficients
        return B * u + E

    def _c(self, u):
        A, _, _, D, _, F = self.coefficients
        return A * u * u + D * u + F

    def disc(self, u):
        a2, a1, a0 = self._disc
        return a2 * u * u + a1 * u + a0

    def _extremos_disc(self, lo, hi):
        """Mínimo y máximo exactos del discriminante sobre [lo, hi]."""
        a2, a1, _ = self._disc
        candidatos = [self.disc(lo), self.disc(hi)]
        if a2 != 0:
            vertice = -a1 / (2 * a2)
            if lo < vertice < hi:
                candidatos.append(self.disc(vertice))
        return min(candidatos), max(candidatos)

    def _comprobar_grafica(self):
        lo, hi = self.interval.lo, self.interval.hi
        C = self.coefficients[2]
        if C == 0:
            # v = −c(u)/b(u): b no se anula en [lo, hi]
            if self._b(lo) * self._b(hi) <= 0:
                raise DomainError(
                    f"tangente vertical o polo dentro de [{lo}, {hi}]: la cónica no es gráfica")
            return
        if self._extremos_disc(lo, hi)[0] > 0:
            return
        # localiza el subintervalo culpable
        partes = [(lo, hi)]
        for _ in range(6):
            nuevas = []
            for a, b in partes:
                m = (a + b) / 2
                nuevas.extend([(a, m), (m, b)])
            partes = nuevas
        for a, b in partes:
            if self._extremos_disc(a, b)[0] <= 0:
                raise DomainError(
                    f"tangente vertical o sin puntos reales en [{a}, {b}]: la cónica no es gráfica en {self.interval.to_text()}")
        raise DomainError(f"la cónica no es gráfica en {self.interval.to_text()}")

    def _cotas_curvatura(self):
        """|f″| = 8|det|/|G_v|³ con G_v = ±√disc (o b(u) si C = 0)."""
        lo, hi = self.interval.lo, self.interval.hi
        C = self.coefficients[2]
        k = 8 * abs(self.det)
        if C == 0:
            valores = [abs(self._b(lo)), abs(self._b(hi))]
            gmin, gmax = Fraction(min(valores)), Fraction(max(valores))
            inf_f2 = k / gmax ** 3
            sup_f2 = k / gmin ** 3
            inferior, superior = float(inf_f2 * Fraction(19, 20)), float(sup_f2 * Fraction(21, 20))
            return inferior, superior
        dmin, dmax = self._extremos_disc(lo, hi)
        with precision(128):
            inf_f2 = iv_rational(k) / iv.sqrt(iv_rational(dmax)) ** 3
            sup_f2 = iv_rational(k) / iv.sqrt(iv_rational(dmin)) ** 3
            inferior = Enclosure.from_iv(inf_f2).lo * Fraction(19, 20)
            superior = Enclosure.from_iv(sup_f2).hi * Fraction(21, 20)
        return float(inferior), float(superior)

    # --- evaluación ---
    def _coefs_float(self):
        return tuple(float(c) for c in self.coefficients)

    def f_array(self, x):
        x = np.asarray(x, dtype=np.float64)
        A, B, C, D, E, F = self._coefs_float()
        b = B * x + E
        c = A * x * x + D * x + F
        if C == 0:
            return -c / b
        raiz = self._signo * np.sqrt(np.maximum(b * b - 4 * C * c, 0.0))
        # fórmula estable frente a cancelación
        mismo_signo = (-b) * raiz >= 0
        with np.errstate(divide='ignore', invalid='ignore'):
            directa = (-b + raiz) / (2 * C)
            alternativa = 2 * c / (-b - raiz)
        return np.where(mismo_signo, directa, alternativa)

    def _gv(self, x, v):
        _, B, C, _, E, _ = self._coefs_float()
        return B * x + 2 * C * v + E

    def fprime_array(self, x):
        x = np.asarray(x, dtype=np.float64)
        A, B, _, D, _, _ = self._coefs_float()
        v = self.f_array(x)
        return -(2 * A * x + B * v + D) / self._gv(x, v)

    def fsecond_array(self, x):
        x = np.asarray(x, dtype=np.float64)
        v = self.f_array(x)
        return 8 * float(self.det) / self._gv(x, v) ** 3

    def exact_f(self, x):
        x = _fraccion(x)
        C = self.coefficients[2]
        if C == 0:
            return -self._c(x) / self._b(x)
        raiz = _sqrt_exacta(self.disc(x))
        if raiz is None:
            return None
        return (-self._b(x) + self._signo * raiz) / (2 * C)

    def _iv_f(self, x):
        C = self.coefficients[2]
        raiz = iv.sqrt(iv_rational(self.disc(x)))
        return (iv_rational(-self._b(x)) + self._signo * raiz) / iv_rational(2 * C)

    def to_dict(self):
        data = super().to_dict()
        data.update({
            'base': self.base,
            'map': self.map.to_text(),
            'branch': self.branch,
            'coefficients': [str(c) for c in self.coefficients]
        })
        return data


class ExpCurve(PlanarCurve):
    """Curva de prueba incorporada f(x) = eˣ."""

    name = 'graph(exp)'

    def __init__(self, interval: Interval):
        super().__init__(interval)
        with precision(128):
            lo = iv.exp(iv_rational(interval.lo))
            hi = iv.exp(iv_rational(interval.hi))
            inferior = Enclosure.from_iv(lo).lo * Fraction(19, 20)
            superior = Enclosure.from_iv(hi).hi * Fraction(21, 20)
        self.curvature_bounds = (float(inferior), float(superior))

    def f_array(self, x):
        return np.exp(np.asarray(x, dtype=np.float64))

    fprime_array = f_array
    fsecond_array = f_array

    def exact_f(self, x):
        return Fraction(1) if _fraccion(x) == 0 else None

    def _iv_f(self, x):
        return iv.exp(iv_rational(x))


def default_interval(base, eps=DEFAULT_EPS):
    eps = _fraccion(eps)
    if base == 'circle':
        return Interval(eps, 1 - eps)
    if base == 'hyperbola':
        return Interval(Fraction(5, 4), Fraction(2))
    return Interval(Fraction(0), Fraction(1))


def make_quadric(base, affine_map: RationalAffineMap = None, interval: Interval = None,
                 branch=1, text=None) -> QuadricCurve:
    """Construye la imagen afín de una cónica base como gráfica sobre I.

    Args:
        base: 'circle', 'parabola' o 'hyperbola'
        affine_map: Aplicación afín racional (identidad por defecto)
        interval: Carta en x (por defecto la de la cónica base)
        branch: Rama superior (+1) o inferior (−1) en la dirección v

    Returns:
        QuadricCurve: Curva con evaluadores exactos/certificados
    """
    affine_map = affine_map or RationalAffineMap.identity()
    interval = interval or default_interval(base)
    curva = QuadricCurve(base, affine_map, interval, branch, text)
    logger.debug(f"Curva {curva.name} sobre {interval.to_text()}, cotas {curva.curvature_bounds}")
    return curva


def distance_to_curve(curve: PlanarCurve, point, max_bits=None) -> Enclosure:
    """Encierro de |f(p₁/q) − p₂/q| de anchura ≤ 2⁻⁶⁴.

    La precisión parte de `start_prec` y se duplica hasta `max_prec_curve`
    (o max_bits).

    Args:
        curve: Curva plana
        point: RationalPoint (o tupla (p1, p2, q))

    Returns:
        Enclosure: Exacto cuando f(p₁/q) es racional
    """
    p1, p2, q = _componentes(point)
    x = Fraction(p1, q)
    if not curve.interval.contains(x):
        raise DomainError(f"p₁/q = {x} fuera de {curve.interval.to_text()}")
    y = Fraction(p2, q)
    bits = int(config_manager.get('start_prec'))
    max_bits = int(config_manager.get('max_prec_curve') if max_bits is None else max_bits)
    while True:
        d = abs(curve.enclose_f(x, bits) - y)
        if d.width <= Fraction(1, 2 ** 64) or bits >= max_bits:
            return d
        bits = min(2 * bits, max_bits)


def _componentes(point):
    if hasattr(point, 'p1'):
        return point.p1, point.p2, point.q
    p1, p2, q = point
    return p1, p2, q


def circle_distance_constant(eps=DEFAULT_EPS):
    """K con |q − √(p₁²+p₂²)| ≤ q·d·K en el arco ε, para d = |f(p₁/q) − p₂/q| ≤ 1."""
    eps = _fraccion(eps)
    with precision(128):
        k = 2 * iv.sqrt(iv_rational(1 - eps * eps)) + 1
        return float(Enclosure.from_iv(k).hi)


# ---------------------------------------------------------------------------
# Gramática de texto
# ---------------------------------------------------------------------------

_RE_CIRCLE = re.compile(r'^circle(?:\[eps=([^\]]+)\])?$')
_RE_QUADRIC = re.compile(r'^quadric\(\s*(\w+)\s*;\s*M\s*=\s*([^;]+);\s*t\s*=\s*([^;)]+)(?:;\s*branch\s*=\s*([+-]?1))?\s*\)$')
_RE_INTERVALO = re.compile(r'^([\(\[])\s*([^,]+?)\s*,\s*([^\]\)]+?)\s*([\)\]])$')


def parse_interval(texto: str) -> Interval:
    """Interpreta '(0,1)', '[1/10, 9/10]' o '(0.1,0.9)'."""
    m = _RE_INTERVALO.match(texto.strip())
    if not m:
        raise DomainError(f"intervalo no válido: {texto!r}")
    try:
        lo, hi = _fraccion(Fraction(m.group(2))), _fraccion(Fraction(m.group(3)))
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"extremos no válidos en {texto!r}")
    return Interval(lo, hi, m.group(1) == '(', m.group(4) == ')')


def parse_curve(texto: str, interval: Interval = None) -> PlanarCurve:
    """Interpreta `parabola`, `circle[eps=1/10]`, `hyperbola`, `graph(exp)` o
    `quadric(base; M=a,b,c,d; t=e,f)`.
    """
    texto = texto.strip()
    if texto == 'parabola':
        return make_quadric('parabola', interval=interval, text=texto)
    if texto == 'hyperbola':
        return make_quadric('hyperbola', interval=interval, text=texto)
    m = _RE_CIRCLE.match(texto)
    if m:
        eps = Fraction(m.group(1)) if m.group(1) else DEFAULT_EPS
        if not 0 < eps < Fraction(1, 2):
            raise DomainError("eps debe estar en (0, 1/2)")
        return make_quadric('circle', interval=interval or default_interval('circle', eps), text=texto)
    if texto in ('graph', 'graph(exp)'):
        return ExpCurve(interval or Interval(0, 1))
    m = _RE_QUADRIC.match(texto)
    if m:
        try:
            M = tuple(Fraction(x.strip()) for x in m.group(2).split(','))
            t = tuple(Fraction(x.strip()) for x in m.group(3).split(','))
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"coeficientes no válidos en {texto!r}")
        rama = int(m.group(4)) if m.group(4) else 1
        mapa = RationalAffineMap(M, t)
        base = m.group(1)
        if interval is None:
            # carta por defecto: imagen de la carta base bajo la aplicación
            base_iv = default_interval(base)
            xs = [mapa.apply(base_iv.lo, 0)[0], mapa.apply(base_iv.hi, 0)[0]]
            interval = Interval(min(xs), max(xs))
        return make_quadric(base, mapa, interval, rama, text=texto)
    raise DomainError(f"curva desconocida: {texto!r}")
