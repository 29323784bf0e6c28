"""
Encierros certificados con extremos racionales exactos.

Las comparaciones de las definiciones son estrictas; un valor irracional
se representa por un encierro [lo, hi] calculado con mpmath.iv (redondeo
hacia fuera) y se refina duplicando la precisión hasta decidir.
"""
import logging
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from mpmath import iv
from mpmath.libmp import finf, fnan, fninf, to_rational

from .config_manager import config_manager
from .errors import AmbiguityError, DomainError

logger = logging.getLogger(__name__)

# iv.prec es global al proceso
_prec_lock = threading.RLock()


@contextmanager
def precision(bits):
    """Fija la precisión de mpmath.iv mientras dura el bloque.

    Args:
        bits: Precisión binaria de trabajo
    """
    with _prec_lock:
        anterior = iv.prec
        iv.prec = int(bits)
        try:
            yield
        finally:
            iv.prec = anterior


def _raw_a_fraccion(raw):
    if raw in (finf, fninf, fnan):
        raise DomainError("el encierro tiene un extremo no finito")
    p, q = to_rational(raw)
    return Fraction(p, q)


def iv_rational(x):
    """Convierte un racional exacto en un intervalo de mpmath.iv."""
    x = Fraction(x)
    if x.denominator == 1:
        return iv.mpf(x.numerator)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


@dataclass(frozen=True)
class Enclosure:
    """Intervalo cerrado [lo, hi] con extremos racionales."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise DomainError(f"encierro vacío: [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x):
        x = Fraction(x)
        return cls(x, x)

    @classmethod
    def from_iv(cls, value):
        """Construye el encierro a partir de un ivmpf de mpmath."""
        if not isinstance(value, iv.mpf):
            value = iv.mpf(value)
        a, b = value._mpi_
        return cls(_raw_a_fraccion(a), _raw_a_fraccion(b))

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def is_exact(self):
        return self.lo == self.hi

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.midpoint)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return Enclosure(-self.hi, -self.lo)
        return Enclosure(Fraction(0), max(-self.lo, self.hi))

    def __sub__(self, other):
        other = as_enclosure(other)
        return Enclosure(self.lo - other.hi, self.hi - other.lo)

    def __add__(self, other):
        other = as_enclosure(other)
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other):
        other = as_enclosure(other)
        productos = (self.lo * other.lo, self.lo * other.hi,
                     self.hi * other.lo, self.hi * other.hi)
        return Enclosure(min(productos), max(productos))

    def scale(self, k):
        k = Fraction(k)
        if k >= 0:
            return Enclosure(self.lo * k, self.hi * k)
        return Enclosure(self.hi * k, self.lo * k)

    def less_than(self, other) -> Optional[bool]:
        """Comparación estricta de tres valores: True, False o None si no se decide."""
        other = as_enclosure(other)
        if self.hi < other.lo:
            return True
        if self.lo >= other.hi:
            return False
        return None

    def to_dict(self):
        return {'lo': str(self.lo), 'hi': str(self.hi)}


def as_enclosure(x):
    if isinstance(x, Enclosure):
        return x
    return Enclosure.exact(Fraction(x))


def evaluate(fn: Callable[[], object], bits) -> Enclosure:
    """Evalúa una expresión de mpmath.iv a la precisión pedida.

    Args:
        fn: Función sin argumentos que devuelve un ivmpf
        bits: Precisión binaria

    Returns:
        Enclosure: Encierro certificado del valor
    """
    with precision(bits):
        return Enclosure.from_iv(fn())


def nearest_integer_distance(x: Enclosure):
    """Encierro de ‖x‖ y el entero más cercano al punto medio.

    Returns:
        tuple: (Enclosure de la distancia, entero p)
    """
    p = math.floor(x.midpoint + Fraction(1, 2))
    d = x - p
    mitad = Fraction(1, 2)
    if d.lo >= -mitad and d.hi <= mitad:
        return abs(d), p
    # el encierro cruza un semientero
    extremos = [abs(Enclosure.exact(v - round(v))).lo for v in (x.lo, x.hi)]
    return Enclosure(min(extremos), mitad), p


def decide_less(lhs: Callable[[int], Enclosure], rhs: Callable[[int], Enclosure],
                start_bits=None, max_bits=None, contexto=""):
    """Decide lhs < rhs refinando la precisión hasta max_bits.

    Args:
        lhs, rhs: Funciones bits -> Enclosure
        start_bits: Precisión inicial (por defecto `start_prec`)
        max_bits: Precisión máxima antes de declarar ambigüedad
            (por defecto `max_prec_limsup`)
        contexto: Descripción para el mensaje de error

    Returns:
        bool: Resultado certificado de la comparación estricta
    """
    bits = int(config_manager.get('start_prec') if start_bits is None else start_bits)
    max_bits = int(config_manager.get('max_prec_limsup') if max_bits is None else max_bits)
    while True:
        resultado = lhs(bits).less_than(rhs(bits))
        if resultado is not None:
            return resultado
        if bits >= max_bits:
            break
        bits = min(2 * bits, int(max_bits))
    logger.warning(f"Comparación ambigua tras {max_bits} bits: {contexto}")
    raise AmbiguityError(f"comparación en la frontera sin decidir ({max_bits} bits): {contexto}",
                         items=[contexto])
