"""
Funciones de aproximación ψ.

Formas soportadas: PowerLog (c·h^(−a)·(ln h)^(−b)), Table (valores tabulados
con continuación constante), Min, Max y ScaledBySqrtPartialSum
(base(h)/√(Σ base·pair)). Todas son inmutables y su evaluación es pura.

También contiene el clasificador de series Σ ψ₁⋯ψ_n (log h)^w, el orden
λ(ψ), los combinadores usados en las reducciones de las demostraciones y la
gramática de texto de la CLI.
"""
import logging
import math
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from mpmath import iv
from sympy import integer_nthroot

from .errors import DomainError
from .interval import Enclosure, evaluate, iv_rational

logger = logging.getLogger(__name__)

MENSAJE_DECRECIENTE = "viola el invariante decreciente"

# Bloques diádicos para la prueba de Cauchy numérica
T_MAX_NUMERICO = 24
_CHUNK = 1 << 20


def _fraccion(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def _check_h(fn, h):
    if h < fn.h0:
        raise DomainError(f"h={h} fuera del dominio (h ≥ {fn.h0})")


@dataclass(frozen=True)
class Order:
    """Orden λ(ψ): valor (o None si no se estabiliza) y si es exacto."""

    value: Optional[object]
    exact: bool

    def to_dict(self):
        valor = None if self.value is None else (
            str(self.value) if isinstance(self.value, Fraction) else float(self.value))
        return {'value': valor, 'exact': self.exact}


@dataclass(frozen=True)
class DyadicProfile:
    """Comportamiento a lo largo de h = 2^t: exp(log_scale)·2^(−alpha·t)·t^(−beta)."""

    alpha: Fraction
    beta: Fraction
    log_scale: float


class ApproxFn:
    """Interfaz común de las funciones de aproximación.

    Cada forma define su inicio de dominio h0 ≥ 2 como campo o propiedad.
    """

    def eval(self, h):
        raise NotImplementedError

    def eval_array(self, h):
        raise NotImplementedError

    def log_eval(self, h):
        return math.log(self.eval(h))

    def _iv(self, h):
        raise NotImplementedError

    def enclose(self, h, bits=64):
        """Encierro certificado de ψ(h) a la precisión dada."""
        _check_h(self, h)
        return evaluate(lambda: self._iv(h), bits)

    def order(self):
        return _numeric_order(self)

    def dyadic_profile(self):
        return None

    def to_text(self):
        raise NotImplementedError

    def to_dict(self):
        return {'expr': self.to_text(), 'h0': self.h0}

    def __call__(self, h):
        return self.eval(h)

    def __str__(self):
        return self.to_text()


def _fmt(x):
    return str(Fraction(x))


@dataclass(frozen=True)
class PowerLog(ApproxFn):
    """c · h^(−a) · (ln h)^(−b)."""

    c: Fraction
    a: Fraction
    b: Fraction = Fraction(0)
    h0: int = None

    def __post_init__(self):
        c, a, b = _fraccion(self.c), _fraccion(self.a), _fraccion(self.b)
        object.__setattr__(self, 'c', c)
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        if c <= 0:
            raise DomainError(f"la escala c={c} debe ser positiva")
        if a < 0 or (a == 0 and b < 0):
            raise DomainError(f"h^{_fmt(-a)}*logh^{_fmt(-b)} {MENSAJE_DECRECIENTE}")
        minimo = self.minimal_h0(a, b)
        if self.h0 is None:
            object.__setattr__(self, 'h0', minimo)
        elif int(self.h0) < minimo:
            raise DomainError(
                f"h0={self.h0} {MENSAJE_DECRECIENTE}: la forma decrece a partir de h={minimo}")
        else:
            object.__setattr__(self, 'h0', int(self.h0))

    @staticmethod
    def minimal_h0(a, b):
        if b >= 0:
            return 2
        # log ψ decrece si a·ln h + b ≥ 0
        return max(2, math.ceil(math.exp(float(-b / a))))

    def eval(self, h):
        _check_h(self, h)
        valor = float(self.c) * float(h) ** (-float(self.a))
        if self.b:
            valor *= math.log(h) ** (-float(self.b))
        return valor

    def eval_array(self, h):
        h = np.asarray(h, dtype=np.float64)
        if h.size and h.min() < self.h0:
            raise DomainError(f"argumentos fuera del dominio (h ≥ {self.h0})")
        valores = float(self.c) * h ** (-float(self.a))
        if self.b:
            valores = valores * np.log(h) ** (-float(self.b))
        return valores

    def log_eval(self, h):
        _check_h(self, h)
        valor = math.log(self.c) - float(self.a) * math.log(h)
        if self.b:
            valor -= float(self.b) * math.log(math.log(h))
        return valor

    def exact_value(self, h):
        """Valor racional exacto cuando existe (b = 0 y h^a racional), o None."""
        if self.b:
            return None
        if self.a == 0:
            return self.c
        p, q = self.a.numerator, self.a.denominator
        raiz, exacta = integer_nthroot(int(h), q)
        if not exacta:
            return None
        return self.c / Fraction(int(raiz)) ** p

    def enclose(self, h, bits=64):
        _check_h(self, h)
        exacto = self.exact_value(h)
        if exacto is not None:
            return Enclosure.exact(exacto)
        return evaluate(lambda: self._iv(h), bits)

    def _iv(self, h):
        x = iv_rational(self.c)
        if self.a:
            x = x * iv.exp(-iv_rational(self.a) * iv.log(iv.mpf(int(h))))
        if self.b:
            x = x * iv.exp(-iv_rational(self.b) * iv.log(iv.log(iv.mpf(int(h)))))
        return x

    def order(self):
        return Order(self.a, True)

    def dyadic_profile(self):
        log_scale = math.log(self.c) - float(self.b) * math.log(math.log(2.0))
        return DyadicProfile(self.a, self.b, log_scale)

    def scaled(self, k):
        """Misma forma multiplicada por la constante k > 0."""
        return PowerLog(self.c * _fraccion(k), self.a, self.b, self.h0)

    def to_text(self):
        return f"{_fmt(self.c)}*h^{_fmt(-self.a)}*logh^{_fmt(-self.b)}"


@dataclass(frozen=True)
class Table(ApproxFn):
    """Valores tabulados desde h0, constantes después del último."""

    h0: int
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        valores = tuple(_fraccion(v) for v in self.values)
        object.__setattr__(self, 'values', valores)
        object.__setattr__(self, 'h0', int(self.h0))
        if self.h0 < 2:
            raise DomainError("h0 debe ser ≥ 2")
        if not valores:
            raise DomainError("la tabla está vacía")
        if any(v <= 0 for v in valores):
            raise DomainError("los valores de la tabla deben ser positivos")
        if any(b > a for a, b in zip(valores, valores[1:])):
            raise DomainError(f"tabla {MENSAJE_DECRECIENTE}")
        object.__setattr__(self, '_floats', np.array([float(v) for v in valores]))

    @property
    def last_h(self):
        return self.h0 + len(self.values) - 1

    def exact_value(self, h):
        _check_h(self, h)
        return self.values[min(int(h) - self.h0, len(self.values) - 1)]

    def eval(self, h):
        return float(self.exact_value(h))

    def eval_array(self, h):
        h = np.asarray(h, dtype=np.int64)
        if h.size and h.min() < self.h0:
            raise DomainError(f"argumentos fuera del dominio (h ≥ {self.h0})")
        idx = np.minimum(h - self.h0, len(self.values) - 1)
        return self._floats[idx]

    def enclose(self, h, bits=64):
        return Enclosure.exact(self.exact_value(h))

    def _iv(self, h):
        return iv_rational(self.exact_value(h))

    def order(self):
        return _table_order(self)

    def to_text(self):
        return f"table({self.h0}; {', '.join(_fmt(v) for v in self.values)})"


@dataclass(frozen=True)
class Min(ApproxFn):
    left: ApproxFn
    right: ApproxFn

    @property
    def h0(self):
        return max(self.left.h0, self.right.h0)

    def eval(self, h):
        _check_h(self, h)
        return min(self.left.eval(h), self.right.eval(h))

    def eval_array(self, h):
        return np.minimum(self.left.eval_array(h), self.right.eval_array(h))

    def log_eval(self, h):
        return min(self.left.log_eval(h), self.right.log_eval(h))

    def _iv(self, h):
        x, y = self.left._iv(h), self.right._iv(h)
        lo = x if x.a <= y.a else y
        hi = x if x.b <= y.b else y
        return iv.mpf([lo, hi])

    def enclose(self, h, bits=64):
        _check_h(self, h)
        x, y = self.left.enclose(h, bits), self.right.enclose(h, bits)
        return Enclosure(min(x.lo, y.lo), min(x.hi, y.hi))

    def order(self):
        izq, der = self.left.order(), self.right.order()
        if izq.exact and der.exact:
            return Order(max(izq.value, der.value), True)
        return _numeric_order(self)

    def to_text(self):
        return f"min({self.left.to_text()}, {self.right.to_text()})"


@dataclass(frozen=True)
class Max(ApproxFn):
    left: ApproxFn
    right: ApproxFn

    @property
    def h0(self):
        return max(self.left.h0, self.right.h0)

    def eval(self, h):
        _check_h(self, h)
        return max(self.left.eval(h), self.right.eval(h))

    def eval_array(self, h):
        return np.maximum(self.left.eval_array(h), self.right.eval_array(h))

    def log_eval(self, h):
        return max(self.left.log_eval(h), self.right.log_eval(h))

    def _iv(self, h):
        x, y = self.left._iv(h), self.right._iv(h)
        lo = y if x.a <= y.a else x
        hi = y if x.b <= y.b else x
        return iv.mpf([lo, hi])

    def enclose(self, h, bits=64):
        _check_h(self, h)
        x, y = self.left.enclose(h, bits), self.right.enclose(h, bits)
        return Enclosure(max(x.lo, y.lo), max(x.hi, y.hi))

    def order(self):
        izq, der = self.left.order(), self.right.order()
        if izq.exact and der.exact:
            return Order(min(izq.value, der.value), True)
        return _numeric_order(self)

    def to_text(self):
        return f"max({self.left.to_text()}, {self.right.to_text()})"


class _PartialSums:
    """Sumas acumuladas Σ_{t=h0}^{h} base(t)·pair(t), recalculadas desde cero al crecer."""

    def __init__(self):
        self.lock = threading.Lock()
        self.sums = np.zeros(0)

    def upto(self, fn, h):
        with self.lock:
            necesario = int(h) - fn.h0 + 1
            if necesario > len(self.sums):
                tam = max(1024, 1 << (necesario - 1).bit_length())
                t = np.arange(fn.h0, fn.h0 + tam)
                self.sums = np.cumsum(fn.base.eval_array(t) * fn.pair.eval_array(t))
            return self.sums


@dataclass(frozen=True)
class ScaledBySqrtPartialSum(ApproxFn):
    """base(h) / √v(h) con v(h) = Σ_{t=h0}^{h} base(t)·pair(t)."""

    base: ApproxFn
    pair: ApproxFn
    _cache: _PartialSums = field(default_factory=_PartialSums, compare=False, repr=False)

    @property
    def h0(self):
        return max(self.base.h0, self.pair.h0)

    def partial_sum(self, h):
        _check_h(self, h)
        return float(self._cache.upto(self, h)[int(h) - self.h0])

    def eval(self, h):
        return self.base.eval(h) / math.sqrt(self.partial_sum(h))

    def eval_array(self, h):
        h = np.asarray(h, dtype=np.int64)
        if not h.size:
            return np.zeros(0)
        if h.min() < self.h0:
            raise DomainError(f"argumentos fuera del dominio (h ≥ {self.h0})")
        sumas = self._cache.upto(self, int(h.max()))
        return self.base.eval_array(h) / np.sqrt(sumas[h - self.h0])

    def _iv(self, h):
        total = iv.mpf(0)
        for t in range(self.h0, int(h) + 1):
            total += self.base._iv(t) * self.pair._iv(t)
        return self.base._iv(h) / iv.sqrt(total)

    def to_text(self):
        return f"sqrtsum({self.base.to_text()}, {self.pair.to_text()})"


# ---------------------------------------------------------------------------
# Orden λ(ψ)
# ---------------------------------------------------------------------------

def order(f: ApproxFn) -> Order:
    """Orden de 1/ψ: límite de −log ψ(h)/log h."""
    return f.order()


def _pendientes(fn, k_final):
    pendientes = []
    for k in range(k_final - 2, k_final + 1):
        pendientes.append((fn.log_eval(2 ** (k - 1)) - fn.log_eval(2 ** k)) / math.log(2))
    return pendientes


def _estabilizado(pendientes):
    if max(pendientes) - min(pendientes) <= 1e-2:
        return Order(pendientes[-1], False)
    return Order(None, False)


def _table_order(tabla: Table) -> Order:
    k_final = int(math.floor(math.log2(tabla.last_h)))
    if 2 ** (k_final - 3) < tabla.h0:
        return Order(None, False)
    return _estabilizado(_pendientes(tabla, k_final))


def _numeric_order(fn, k_final=20) -> Order:
    if 2 ** (k_final - 3) < fn.h0:
        return Order(None, False)
    return _estabilizado(_pendientes(fn, k_final))


def sandwich_threshold(f: PowerLog, eps) -> int:
    """Umbral H con h^(−a−ε) ≤ ψ(h) ≤ h^(−a+ε) para todo h ≥ H.

    Args:
        f: Función en forma PowerLog
        eps: ε > 0

    Returns:
        int: Umbral H
    """
    if not isinstance(f, PowerLog):
        raise DomainError("el umbral del sándwich sólo está definido para PowerLog")
    eps = float(eps)
    if eps <= 0:
        raise DomainError("ε debe ser positivo")
    log_c, b = abs(math.log(f.c)), abs(float(f.b))
    # g(L) = ε·L − |log c| − |b|·log L es creciente para L > |b|/ε
    L = max(1.0, math.log(max(f.h0, 3)), b / eps)
    while eps * L - log_c - b * math.log(L) < 0:
        L *= 1.25
    return max(f.h0, int(math.ceil(math.exp(L))))


# ---------------------------------------------------------------------------
# Clasificación de series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesVerdict:
    """Veredicto sobre Σ término(h)."""

    kind: str
    partial_sums: Tuple[Tuple[int, float], ...]
    method: str
    notes: Tuple[str, ...] = ()

    def to_dict(self):
        return {
            'kind': self.kind,
            'method': self.method,
            'partial_sums': [[h, s] for h, s in self.partial_sums],
            'notes': list(self.notes)
        }


def _terminos(factores, log_weight, h):
    valores = np.ones(len(h))
    for f in factores:
        valores = valores * f.eval_array(h)
    if log_weight:
        valores = valores * np.log(h.astype(np.float64)) ** log_weight
    return valores


def _block_sums(factores, log_weight, h_inicio, t_max):
    """Sumas por bloques (2^t, 2^(t+1)] y sumas parciales en H = 2^(t+1)."""
    t_inicio = max(0, int(math.ceil(math.log2(h_inicio))))
    acumulado = 0.0
    if 2 ** t_inicio >= h_inicio:
        acumulado = float(_terminos(factores, log_weight, np.arange(h_inicio, 2 ** t_inicio + 1)).sum())
    bloques, parciales = [], []
    for t in range(t_inicio, t_max):
        suma = 0.0
        lo, hi = 2 ** t + 1, 2 ** (t + 1)
        for inicio in range(lo, hi + 1, _CHUNK):
            h = np.arange(inicio, min(inicio + _CHUNK, hi + 1))
            suma += float(_terminos(factores, log_weight, h).sum())
        bloques.append((t, suma))
        acumulado += suma
        parciales.append((hi, acumulado))
    return bloques, parciales


def _verdict_numerico(bloques):
    sumas = [s for _, s in bloques[-3:]]
    if len(sumas) < 3 or sumas[0] <= 0 or sumas[1] <= 0:
        return 'undetermined'
    r1, r2 = sumas[1] / sumas[0], sumas[2] / sumas[1]
    if r1 <= 0.75 and r2 <= 0.75:
        return 'converges'
    if r1 >= 1 and r2 >= 1:
        return 'diverges'
    return 'undetermined'


def classify_series(factores: Sequence[ApproxFn], log_weight=0, mode='auto',
                    t_max=T_MAX_NUMERICO) -> SeriesVerdict:
    """Clasifica Σ_h ∏ factores(h) · (log h)^log_weight.

    Args:
        factores: Funciones cuyo producto forma el término
        log_weight: Potencia entera no negativa de log h
        mode: 'auto', 'closed-form' o 'numeric-trend'
        t_max: Último bloque diádico de la prueba numérica

    Returns:
        SeriesVerdict: Veredicto con sumas parciales diádicas
    """
    factores = list(factores)
    if not factores:
        raise DomainError("se necesita al menos un factor")
    if log_weight < 0 or int(log_weight) != log_weight:
        raise DomainError("log_weight debe ser un entero no negativo")
    h_inicio = max(f.h0 for f in factores)
    notas = []
    cerrada = all(isinstance(f, PowerLog) for f in factores)
    if mode == 'closed-form' and not cerrada:
        notas.append("forma no PowerLog: se usa la tendencia numérica")
        logger.info("Clasificación en forma cerrada no disponible, se usa tendencia numérica")

    if cerrada and mode != 'numeric-trend':
        A = sum((f.a for f in factores), Fraction(0))
        B = sum((f.b for f in factores), Fraction(0)) - log_weight
        converge = A > 1 or (A == 1 and B > 1)
        _, parciales = _block_sums(factores, log_weight, h_inicio, min(t_max, 20))
        return SeriesVerdict('converges' if converge else 'diverges', tuple(parciales),
                             'closed-form', tuple(notas))

    bloques, parciales = _block_sums(factores, log_weight, h_inicio, t_max)
    return SeriesVerdict(_verdict_numerico(bloques), tuple(parciales), 'numeric-trend', tuple(notas))


def classify_product_series(f: ApproxFn, g: ApproxFn, log_weight=0, mode='auto',
                            t_max=T_MAX_NUMERICO) -> SeriesVerdict:
    """Clasifica Σ f(h)·g(h)·(log h)^log_weight."""
    return classify_series([f, g], log_weight, mode, t_max)


def khintchine_classify(psis: Sequence[ApproxFn], **kwargs) -> SeriesVerdict:
    """Condición de Khintchine: Σ ψ₁(h)⋯ψ_n(h)."""
    return classify_series(psis, 0, **kwargs)


def gallagher_classify(psi: ApproxFn, n: int, **kwargs) -> SeriesVerdict:
    """Condición de Gallagher: Σ ψ(h)^n (log h)^(n−1)."""
    if n < 1:
        raise DomainError("n debe ser ≥ 1")
    return classify_series([psi] * n, n - 1, **kwargs)


# ---------------------------------------------------------------------------
# Combinadores de las reducciones
# ---------------------------------------------------------------------------

def auxiliary_min(psi1: ApproxFn, psi2: ApproxFn) -> ApproxFn:
    """ψ₁* = min(ψ₁, ψ₂)."""
    return Min(psi1, psi2)


def rescale_by_partial_sum(psi1: ApproxFn, psi2: ApproxFn):
    """Par reescalado ψᵢ/√v con v(h) = Σ_{t≤h} ψ₁(t)ψ₂(t)."""
    return ScaledBySqrtPartialSum(psi1, psi2), ScaledBySqrtPartialSum(psi2, psi1)


def schmidt_floor(psi: ApproxFn) -> ApproxFn:
    """max(ψ, h^(−2/3))."""
    return Max(psi, PowerLog(1, Fraction(2, 3), 0))


def corridor_floor(psi: ApproxFn) -> ApproxFn:
    """max(ψ, h⁻¹(log h)⁻³), cota inferior del corredor multiplicativo."""
    return Max(psi, PowerLog(1, 1, 3))


def split_max_min(psi: ApproxFn, phi: ApproxFn):
    """(max(ψ, φ), min(ψ, φ))."""
    return Max(psi, phi), Min(psi, phi)


@dataclass(frozen=True)
class DyadicPartialSum:
    """u(t) = Σ_{s=s0}^{t} 2^s ψ₁(2^s) ψ₂(2^s)."""

    psi1: ApproxFn
    psi2: ApproxFn

    @property
    def s0(self):
        return max(0, int(math.ceil(math.log2(max(self.psi1.h0, self.psi2.h0)))))

    def __call__(self, t):
        total = 0.0
        for s in range(self.s0, int(t) + 1):
            h = 2 ** s
            total += h * self.psi1.eval(h) * self.psi2.eval(h)
        return total


def dyadic_partial_sum(psi1: ApproxFn, psi2: ApproxFn) -> DyadicPartialSum:
    return DyadicPartialSum(psi1, psi2)


def evaluate_fn(f: ApproxFn, h):
    """ψ(h) según la forma."""
    return f.eval(h)


# ---------------------------------------------------------------------------
# Gramática de texto
# ---------------------------------------------------------------------------

class ParseError(DomainError):
    """Error de sintaxis con la columna (base 1) donde se detectó."""

    def __init__(self, columna, mensaje):
        super().__init__(f"columna {columna}: {mensaje}")
        self.columna = columna
        self.mensaje = mensaje


_NUMERO = re.compile(r'[+-]?\d+(?:\.\d+)?(?:/\d+)?')


class _Parser:
    def __init__(self, texto):
        self.texto = texto
        self.pos = 0

    def error(self, mensaje, pos=None):
        raise ParseError((self.pos if pos is None else pos) + 1, mensaje)

    def espacios(self):
        while self.pos < len(self.texto) and self.texto[self.pos].isspace():
            self.pos += 1

    def mira(self, literal):
        self.espacios()
        return self.texto.startswith(literal, self.pos)

    def consume(self, literal):
        if not self.mira(literal):
            self.error(f"se esperaba '{literal}'")
        self.pos += len(literal)

    def numero(self):
        self.espacios()
        m = _NUMERO.match(self.texto, self.pos)
        if not m:
            self.error("se esperaba un número")
        self.pos = m.end()
        texto = m.group(0)
        if '.' in texto and '/' in texto:
            self.error("número mixto no válido", m.start())
        return Fraction(texto)

    def expresion(self):
        inicio = self.pos
        if self.mira('min('):
            return self._binaria('min(', Min)
        if self.mira('max('):
            return self._binaria('max(', Max)
        if self.mira('sqrtsum('):
            return self._binaria('sqrtsum(', ScaledBySqrtPartialSum)
        if self.mira('table('):
            return self._tabla()
        c, a, b = Fraction(1), Fraction(0), Fraction(0)
        visto = False
        while True:
            self.espacios()
            if self.texto.startswith('logh', self.pos):
                self.pos += 4
                b -= self._exponente()
            elif self.texto.startswith('h', self.pos):
                self.pos += 1
                a -= self._exponente()
            elif _NUMERO.match(self.texto, self.pos):
                c *= self.numero()
            else:
                self.error("se esperaba un factor (número, h^e o logh^e)")
            visto = True
            if not self.mira('*'):
                break
            self.consume('*')
        if not visto:
            self.error("expresión vacía", inicio)
        try:
            return PowerLog(c, a, b)
        except DomainError as e:
            raise ParseError(inicio + 1, str(e))

    def _exponente(self):
        if self.mira('^'):
            self.consume('^')
            return self.numero()
        return Fraction(1)

    def _binaria(self, cabeza, clase):
        inicio = self.pos
        self.consume(cabeza)
        izq = self.expresion()
        self.consume(',')
        der = self.expresion()
        self.consume(')')
        try:
            return clase(izq, der)
        except DomainError as e:
            raise ParseError(inicio + 1, str(e))

    def _tabla(self):
        inicio = self.pos
        self.consume('table(')
        h0 = self.numero()
        self.consume(';')
        valores = [self.numero()]
        while self.mira(','):
            self.consume(',')
            valores.append(self.numero())
        self.consume(')')
        if h0.denominator != 1:
            self.error("h0 debe ser entero", inicio)
        try:
            return Table(int(h0), tuple(valores))
        except DomainError as e:
            raise ParseError(inicio + 1, str(e))


def parse_approxfn(texto: str) -> ApproxFn:
    """Interpreta una expresión como `1/2*h^-1/2*logh^0` o `min(h^-1, h^-2)`.

    Args:
        texto: Expresión de la gramática

    Returns:
        ApproxFn: Función construida (valida el invariante decreciente)
    """
    parser = _Parser(texto)
    fn = parser.expresion()
    parser.espacios()
    if parser.pos != len(texto):
        parser.error("texto sobrante")
    return fn


def parse_many(textos: List[str]) -> List[ApproxFn]:
    return [parse_approxfn(t) for t in textos]
