"""
Oráculos truncados de pertenencia a los conjuntos limsup.

S_n(ψ₁,…,ψ_n): ‖q·yᵢ‖ < ψᵢ(q) para todo i.
S*_n(ψ):       ∏ ‖q·yᵢ‖ < ψ(q).
L*_n(ψ):       ‖a₁y₁ + … + a_ny_n‖ < ψ(Π₊(a)), Π₊(a) = ∏ max(1, |aᵢ|).

"Infinitas soluciones" se sustituye por recuentos por bloque diádico
q ∈ (2ᵗ⁻¹, 2ᵗ]. Las comparaciones se hacen en coma flotante con un margen y
las dudosas se certifican con encierros de precisión creciente.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import iv

from .approxfn import ApproxFn, PowerLog
from .block_processor import map_blocks
from .config_manager import config_manager
from .curve import parse_curve
from .errors import DiofantoError, DomainError
from .interval import Enclosure, decide_less, evaluate, nearest_integer_distance

logger = logging.getLogger(__name__)

KINDS = ('simultaneous', 'multiplicative', 'dual')
EXPONENT_KINDS = ('simultaneous-diagonal', 'multiplicative', 'dual')
_EPS_MAQ = 2.0 ** -52
_LOTE_PUNTOS = 10


@dataclass(frozen=True)
class Coordinate:
    """Coordenada real: racional exacta o encierro certificado bajo demanda."""

    text: str
    exact: Optional[Fraction] = None
    encierro: Optional[Callable[[int], Enclosure]] = field(default=None, compare=False, repr=False)
    value: float = field(default=None, compare=False)

    def __post_init__(self):
        if self.exact is None and self.encierro is None:
            raise DomainError(f"coordenada sin valor: {self.text}")
        if self.value is None:
            valor = self.exact if self.exact is not None else self.encierro(128).midpoint
            object.__setattr__(self, 'value', float(valor))

    @classmethod
    def rational(cls, x):
        x = Fraction(x)
        return cls(str(x), exact=x)

    def enclose(self, bits=64) -> Enclosure:
        if self.exact is not None:
            return Enclosure.exact(self.exact)
        return self.encierro(bits)

    def distances(self, q):
        """‖q·y‖ en coma flotante, máscara de ceros exactos y cota del error absoluto."""
        q = np.asarray(q, dtype=np.int64)
        if self.exact is not None:
            a, b = self.exact.numerator, self.exact.denominator
            if b < 2 ** 31 and int(q.max(initial=0)) * abs(a) < 2 ** 62:
                r = (q * a) % b
                d = np.minimum(r, b - r) / b
                return d, r == 0, np.full(len(q), _EPS_MAQ)
            ceros = (q % b == 0) if b < 2 ** 62 else np.zeros(len(q), dtype=bool)
        else:
            ceros = np.zeros(len(q), dtype=bool)
        qy = q * self.value
        d = np.abs(qy - np.rint(qy))
        d[ceros] = 0.0
        return d, ceros, 8 * _EPS_MAQ * (1.0 + np.abs(qy))

    def distance_enclosure(self, q, bits):
        return nearest_integer_distance(self.enclose(bits).scale(q))[0]

    def nearest(self, q):
        return nearest_integer_distance(self.enclose(128).scale(q))[1]


@dataclass(frozen=True)
class TargetPoint:
    """Punto y = (y₁, …, y_n) de ℝⁿ."""

    coordinates: Tuple[Coordinate, ...]
    text: str = ''

    @property
    def n(self):
        return len(self.coordinates)

    @property
    def is_rational(self):
        return all(c.exact is not None for c in self.coordinates)

    @property
    def values(self):
        return tuple(c.value for c in self.coordinates)

    def to_text(self):
        return self.text or ','.join(c.text for c in self.coordinates)

    def to_dict(self):
        return {'point': self.to_text(), 'values': list(self.values), 'n': self.n}


def target_point(*coords):
    """Punto racional a partir de valores racionales o decimales exactos."""
    return TargetPoint(tuple(Coordinate.rational(Fraction(c)) for c in coords))


def _irracional(texto, fn):
    return Coordinate(texto, encierro=lambda bits: evaluate(fn, bits))


SIMBOLOS = {
    'sqrt2m1': lambda: _irracional('sqrt2m1', lambda: iv.sqrt(2) - 1),
    'sqrt2': lambda: _irracional('sqrt2', lambda: iv.sqrt(2)),
    'sqrt3m1': lambda: _irracional('sqrt3m1', lambda: iv.sqrt(3) - 1),
}

_RE_CURVA = re.compile(r'^(parabola|circle|hyperbola)\(x=([^)]+)\)$')
_RE_LIOUVILLE = re.compile(r'^liouville\(base=(\d+),terms=(\d+)\)$')


def liouville_number(base, terms):
    """Σ_{k=1}^{terms} base^(−k!) (racional con denominador base^(terms!))."""
    if base < 2 or terms < 1:
        raise DomainError("liouville necesita base ≥ 2 y terms ≥ 1")
    return sum((Fraction(1, base ** math.factorial(k)) for k in range(1, terms + 1)), Fraction(0))


def _partir(texto):
    partes, nivel, actual = [], 0, ''
    for ch in texto:
        if ch == ',' and nivel == 0:
            partes.append(actual)
            actual = ''
            continue
        nivel += (ch == '(') - (ch == ')')
        actual += ch
    partes.append(actual)
    return [p.strip() for p in partes]


def parse_point(texto: str) -> TargetPoint:
    """Interpreta `p/q,p/q`, `sqrt2m1`, `sqrt2`, `sqrt3m1`, `parabola(x=p/q)`,
    `circle(x=p/q)` o `liouville(base=b,terms=k)`, separados por comas.
    """
    texto = texto.replace(' ', '')
    coords = []
    for parte in _partir(texto):
        if not parte:
            raise DomainError(f"coordenada vacía en {texto!r}")
        if parte in SIMBOLOS:
            coords.append(SIMBOLOS[parte]())
            continue
        m = _RE_CURVA.match(parte)
        if m:
            coords.extend(_punto_en_curva(m.group(1), m.group(2)))
            continue
        m = _RE_LIOUVILLE.match(parte)
        if m:
            valor = liouville_number(int(m.group(1)), int(m.group(2)))
            coords.append(Coordinate(parte, exact=valor))
            continue
        try:
            coords.append(Coordinate.rational(Fraction(parte)))
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"coordenada no válida: {parte!r}")
    return TargetPoint(tuple(coords), texto)


def _punto_en_curva(nombre, x_texto):
    try:
        x = Fraction(x_texto)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"abscisa no válida: {x_texto!r}")
    curva = parse_curve(nombre)
    if not curva.interval.contains(x):
        raise DomainError(f"x={x} fuera de {curva.interval.to_text()}")
    exacto = curva.exact_f(x)
    texto_y = f"{nombre}(x={x}).y"
    if exacto is not None:
        y = Coordinate(texto_y, exact=exacto)
    else:
        y = Coordinate(texto_y, encierro=lambda bits: curva.enclose_f(x, bits))
    return [Coordinate.rational(x), y]


def random_points(count, seed, n=2):
    """Puntos uniformes en [0,1]ⁿ (generador con semilla), con coordenadas racionales exactas."""
    rng = np.random.default_rng(seed)
    datos = rng.random((count, n))
    return [target_point(*(Fraction(float(v)) for v in fila)) for fila in datos]


# ---------------------------------------------------------------------------
# Registro de pertenencia
# ---------------------------------------------------------------------------

def dyadic_block(q):
    """Bloque t con q ∈ (2ᵗ⁻¹, 2ᵗ]."""
    return (int(q) - 1).bit_length()


@dataclass
class MembershipRecord:
    """Soluciones de un oráculo truncado, agrupadas por bloque diádico."""

    point: TargetPoint
    Q: int
    kind: str
    solutions: List[Tuple[int, Tuple[int, ...]]]
    block_counts: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.block_counts:
            conteo = {}
            for q, _ in self.solutions:
                t = dyadic_block(q)
                conteo[t] = conteo.get(t, 0) + 1
            self.block_counts = dict(sorted(conteo.items()))

    @property
    def denominators(self):
        return [q for q, _ in self.solutions]

    def to_dict(self):
        return {
            'point': self.point.to_text(),
            'Q': self.Q,
            'kind': self.kind,
            'solutions': [{'q': q, 'p': list(p)} for q, p in self.solutions],
            'block_counts': {str(t): c for t, c in self.block_counts.items()}
        }


def _comparar(d, thr, margen, certificar):
    """d < thr elemento a elemento; las comparaciones dentro del margen se certifican."""
    resultado = d < thr - margen
    for k in np.nonzero(np.abs(d - thr) <= margen)[0]:
        resultado[k] = certificar(int(k))
    return resultado


def _reverificar(record, comprobar, max_bits):
    """Comprueba cada solución a precisión doble de la usada en la búsqueda."""
    for q, p in record.solutions:
        if not comprobar(q, p, 2 * int(config_manager.get('start_prec')), max_bits):
            raise DiofantoError(f"la solución q={q}, p={p} no supera la reverificación")


def _validar_dimension(y, psis):
    if len(psis) != y.n:
        raise DomainError(f"se esperaban {y.n} funciones y hay {len(psis)}")


def _sim_cumple(y, psis, q, bits, max_bits):
    return all(
        decide_less(lambda b, c=c: c.distance_enclosure(q, b), lambda b, f=f: f.enclose(q, b),
                    start_bits=bits, max_bits=max_bits, contexto=f"‖{q}·{c.text}‖ < ψ({q})")
        for c, f in zip(y.coordinates, psis))


def simultaneous_solutions(y: TargetPoint, psis: Sequence[ApproxFn], Q, max_bits=None,
                           verify=True) -> MembershipRecord:
    """Todos los q ≤ Q con ‖q·yᵢ‖ < ψᵢ(q) para cada i.

    Args:
        y: Punto objetivo
        psis: Una función por coordenada
        Q: Truncamiento
        max_bits: Precisión máxima de las comparaciones certificadas
            (por defecto `max_prec_limsup`)

    Returns:
        MembershipRecord: Soluciones con sus vectores p
    """
    psis = list(psis)
    _validar_dimension(y, psis)
    h0 = max(f.h0 for f in psis)
    if Q < h0:
        raise DomainError(f"Q={Q} menor que h0={h0}")
    q = np.arange(h0, Q + 1, dtype=np.int64)
    activos = np.ones(len(q), dtype=bool)
    for c, f in zip(y.coordinates, psis):
        d, _, err = c.distances(q)
        thr = f.eval_array(q)
        activos &= _comparar(
            d, thr, err + 1e-10 * thr,
            lambda k, c=c, f=f: decide_less(
                lambda b: c.distance_enclosure(int(q[k]), b), lambda b: f.enclose(int(q[k]), b),
                max_bits=max_bits, contexto=f"‖{int(q[k])}·{c.text}‖ < ψ({int(q[k])})"))
    soluciones = [(int(s), tuple(c.nearest(int(s)) for c in y.coordinates)) for s in q[activos]]
    record = MembershipRecord(y, Q, 'simultaneous', soluciones)
    if verify:
        _reverificar(record, lambda s, p, bits, mb: _sim_cumple(y, psis, s, bits, mb), max_bits)
    return record


def _producto_encierro(y, q, bits):
    total = Enclosure.exact(1)
    for c in y.coordinates:
        total = total * c.distance_enclosure(q, bits)
    return total


def _producto_float(y, q):
    """∏‖q·yᵢ‖ con su cota de error y la máscara de ceros exactos."""
    producto = np.ones(len(q))
    error = np.zeros(len(q))
    ceros = np.zeros(len(q), dtype=bool)
    for c in y.coordinates:
        d, z, e = c.distances(q)
        error = error * (d + e) + producto * e
        producto = producto * d
        ceros |= z
    producto[ceros] = 0.0
    error[ceros] = 0.0
    return producto, error, ceros


def multiplicative_solutions(y: TargetPoint, psi: ApproxFn, Q, max_bits=None,
                             verify=True) -> MembershipRecord:
    """Todos los q ≤ Q con ∏ ‖q·yᵢ‖ < ψ(q)."""
    if Q < psi.h0:
        raise DomainError(f"Q={Q} menor que h0={psi.h0}")
    q = np.arange(psi.h0, Q + 1, dtype=np.int64)
    producto, error, ceros = _producto_float(y, q)
    thr = psi.eval_array(q)

    def certificar(k):
        s = int(q[k])
        return decide_less(lambda b: _producto_encierro(y, s, b), lambda b: psi.enclose(s, b),
                           max_bits=max_bits, contexto=f"∏‖{s}·y‖ < ψ({s})")

    activos = _comparar(producto, thr, error + 1e-10 * thr, certificar)
    activos |= ceros
    soluciones = [(int(s), tuple(c.nearest(int(s)) for c in y.coordinates)) for s in q[activos]]
    record = MembershipRecord(y, Q, 'multiplicative', soluciones)
    if verify:
        _reverificar(record, lambda s, p, bits, mb: decide_less(
            lambda b: _producto_encierro(y, s, b), lambda b: psi.enclose(s, b),
            start_bits=bits, max_bits=mb, contexto=f"q={s}"), max_bits)
    return record


def pi_plus(a):
    """Π₊(a) = ∏ max(1, |aᵢ|)."""
    producto = 1
    for x in a:
        producto *= max(1, abs(int(x)))
    return producto


def _vectores_duales(n, A):
    """Todos los a ∈ ℤⁿ \\ {0} con Π₊(a) ≤ A, como arreglo (k, n)."""
    filas = [np.zeros((1, 0), dtype=np.int64)]
    cotas = [np.ones(1, dtype=np.int64)]
    for _ in range(n):
        nuevas, nuevas_cotas = [], []
        for prefijo, usado in zip(filas, cotas):
            for fila, u in zip(prefijo, usado):
                limite = A // int(u)
                valores = np.arange(-limite, limite + 1, dtype=np.int64)
                bloque = np.hstack([np.repeat(fila[None, :], len(valores), axis=0), valores[:, None]])
                nuevas.append(bloque)
                nuevas_cotas.append(int(u) * np.maximum(1, np.abs(valores)))
        filas, cotas = nuevas, nuevas_cotas
    vectores = np.vstack(filas)
    no_nulos = np.any(vectores != 0, axis=1)
    return vectores[no_nulos]


def _dual_encierro(y, a, bits):
    total = Enclosure.exact(0)
    for c, ai in zip(y.coordinates, a):
        total = total + c.enclose(bits).scale(int(ai))
    return nearest_integer_distance(total)[0]


def dual_solutions(y: TargetPoint, psi: ApproxFn, A, max_bits=None, verify=True) -> MembershipRecord:
    """Todos los a ≠ 0 con Π₊(a) ≤ A y ‖a·y‖ < ψ(Π₊(a)).

    Las soluciones se guardan como (Π₊(a), a).
    """
    if A < 1:
        raise DomainError("A debe ser ≥ 1")
    a = _vectores_duales(y.n, int(A))
    pesos = np.prod(np.maximum(1, np.abs(a)), axis=1)
    a, pesos = a[pesos >= psi.h0], pesos[pesos >= psi.h0]
    valores = np.array(y.values)
    L = a @ valores
    d = np.abs(L - np.rint(L))
    error = 8 * _EPS_MAQ * (1.0 + np.abs(a) @ (1.0 + np.abs(valores)))
    thr = psi.eval_array(pesos)

    def certificar(k):
        vec, peso = a[k], int(pesos[k])
        return decide_less(lambda b: _dual_encierro(y, vec, b), lambda b: psi.enclose(peso, b),
                           max_bits=max_bits, contexto=f"a={tuple(int(x) for x in vec)}")

    activos = _comparar(d, thr, error + 1e-10 * thr, certificar)
    sel_a, sel_p = a[activos], pesos[activos]
    soluciones = sorted((int(p), tuple(int(x) for x in v)) for p, v in zip(sel_p, sel_a))
    record = MembershipRecord(y, int(A), 'dual', soluciones)
    if verify:
        _reverificar(record, lambda p, v, bits, mb: decide_less(
            lambda b: _dual_encierro(y, v, b), lambda b: psi.enclose(p, b),
            start_bits=bits, max_bits=mb, contexto=f"a={v}"), max_bits)
    return record


# ---------------------------------------------------------------------------
# Inclusiones
# ---------------------------------------------------------------------------

def _hipotesis_producto(psi, psis, Q):
    """ψ ≥ ψ₁⋯ψ_n: exacta para PowerLog con b = 0, numérica en otro caso."""
    if all(isinstance(f, PowerLog) and f.b == 0 for f in [psi] + list(psis)):
        c = math.prod((f.c for f in psis), start=Fraction(1))
        a = sum((f.a for f in psis), Fraction(0))
        return psi.c >= c and psi.a <= a
    h0 = max(f.h0 for f in [psi] + list(psis))
    q = np.arange(h0, Q + 1)
    producto = np.ones(len(q))
    for f in psis:
        producto = producto * f.eval_array(q)
    return bool(np.all(psi.eval_array(q) >= producto * (1 - 1e-12)))


def _inclusion_parametros(kind_pair, parametros):
    if kind_pair == 'sim-mult':
        psis = list(parametros['psis'])
        return psis, parametros['psi']
    if kind_pair == 'sim-mult-exponents':
        v1, v2, v = (Fraction(str(parametros[k])) for k in ('v1', 'v2', 'v'))
        return [PowerLog(1, v1), PowerLog(1, v2)], PowerLog(1, v)
    raise DomainError(f"par de conjuntos desconocido: {kind_pair}")


def inclusion_check(kind_pair, parameters, sample_count, Q, seed=0):
    """Comprueba que cada solución truncada de S_n(ψ₁,…,ψ_n) lo es de S*_n(ψ).

    Args:
        kind_pair: 'sim-mult' (funciones ψᵢ y ψ) o 'sim-mult-exponents' (v₁, v₂, v)
        parameters: Diccionario con 'psis'/'psi' o 'v1'/'v2'/'v'
        sample_count: Número de puntos aleatorios en [0,1]²
        Q: Truncamiento
        seed: Semilla

    Returns:
        dict: Informe con violaciones y estado
    """
    psis, psi = _inclusion_parametros(kind_pair, parameters)
    hipotesis = _hipotesis_producto(psi, psis, Q)
    puntos = random_points(sample_count, seed, n=len(psis))

    def revisar(lote):
        inicio, fin = lote
        violaciones, total = [], 0
        for indice in range(inicio, fin):
            y = puntos[indice]
            izquierda = simultaneous_solutions(y, psis, Q, verify=False)
            derecha = set(multiplicative_solutions(y, psi, Q, verify=False).denominators)
            total += len(izquierda.solutions)
            violaciones.extend((indice, q) for q in izquierda.denominators if q not in derecha)
        return violaciones, total

    lotes = [(i, min(i + _LOTE_PUNTOS, sample_count)) for i in range(0, sample_count, _LOTE_PUNTOS)]
    violaciones, total = [], 0
    for v, t in map_blocks(revisar, lotes):
        violaciones.extend(v)
        total += t

    if violaciones and hipotesis:
        estado = 'failure'
        logger.error(f"Inclusión violada con la hipótesis cumplida: {violaciones[:5]}")
    elif violaciones:
        estado = 'hypothesis unmet'
        logger.warning(f"Hipótesis ψ ≥ ψ₁⋯ψ_n no cumplida: {len(violaciones)} violaciones")
    else:
        estado = 'ok'
    return {
        'kind_pair': kind_pair,
        'Q': Q,
        'samples': sample_count,
        'seed': seed,
        'hypothesis_met': hipotesis,
        'left_solutions': total,
        'violations': [{'point': i, 'q': q} for i, q in violaciones],
        'status': estado
    }


# ---------------------------------------------------------------------------
# Exponentes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentEstimate:
    """Exponente empírico: pendiente sobre los récords por bloque y récord bruto."""

    value: float
    raw_record: float
    kind: str
    Q: int
    zero_count: int
    blocks: Tuple[Tuple[int, int, float], ...] = ()

    def to_dict(self):
        return {
            'value': self.value,
            'raw_record': self.raw_record,
            'kind': self.kind,
            'Q': self.Q,
            'zero_count': self.zero_count,
            'blocks': [{'t': t, 'q': q, 'min': m} for t, q, m in self.blocks]
        }


def _cantidades(y, kind, Q):
    """Pares (peso, cantidad) sobre los que se estima el exponente."""
    if kind == 'simultaneous-diagonal':
        q = np.arange(1, Q + 1, dtype=np.int64)
        maximo = np.zeros(len(q))
        ceros = np.ones(len(q), dtype=bool)
        for c in y.coordinates:
            d, z, _ = c.distances(q)
            maximo = np.maximum(maximo, d)
            ceros &= z
        maximo[ceros] = 0.0
        return q, maximo
    if kind == 'multiplicative':
        q = np.arange(1, Q + 1, dtype=np.int64)
        producto, _, _ = _producto_float(y, q)
        return q, producto
    if kind == 'dual':
        a = _vectores_duales(y.n, int(Q))
        pesos = np.prod(np.maximum(1, np.abs(a)), axis=1)
        L = a @ np.array(y.values)
        return pesos, np.abs(L - np.rint(L))
    raise DomainError(f"tipo de exponente desconocido: {kind}")


def exponent_estimate(y: TargetPoint, kind, Q) -> ExponentEstimate:
    """Exponente empírico de aproximación de y hasta Q.

    Para cada bloque diádico se toma el mínimo de la cantidad (‖q·y‖,
    ∏‖q·yᵢ‖ o ‖a·y‖) y el exponente es la pendiente por mínimos cuadrados de
    −log(mínimo) frente a log q sobre la mitad superior de los bloques. Es
    una estimación inferior del exponente verdadero.

    Returns:
        ExponentEstimate: Con +∞ para puntos racionales o si la cantidad se
        anula en todos los denominadores. En otro caso los ceros se excluyen
        y se cuentan en zero_count.
    """
    if Q < 2 ** 6:
        raise DomainError("Q debe ser ≥ 2⁶")
    pesos, valores = _cantidades(y, kind, Q)
    ceros = valores == 0
    n_ceros = int(np.count_nonzero(ceros))
    if n_ceros and (y.is_rational or n_ceros == len(valores)):
        logger.info(f"Cantidad nula en {n_ceros} denominadores: exponente infinito")
        return ExponentEstimate(math.inf, math.inf, kind, Q, n_ceros)
    pesos, valores = pesos[~ceros], valores[~ceros]
    if n_ceros:
        logger.info(f"Se excluyen {n_ceros} denominadores con cantidad nula")
    validos = pesos > 1
    bruto = float(np.max(-np.log(valores[validos]) / np.log(pesos[validos]))) if validos.any() else 0.0

    T = int(math.floor(math.log2(Q)))
    bloques = []
    for t in range(T // 2, T + 1):
        en_bloque = (pesos > 2 ** (t - 1)) & (pesos <= 2 ** t)
        if not en_bloque.any():
            continue
        k = np.argmin(np.where(en_bloque, valores, np.inf))
        bloques.append((t, int(pesos[k]), float(valores[k])))
    if len(bloques) < 2:
        raise DomainError("no hay bloques suficientes para la regresión")
    x = np.log([q for _, q, _ in bloques])
    yv = -np.log([m for _, _, m in bloques])
    pendiente = float(np.polyfit(x, yv, 1)[0])
    return ExponentEstimate(pendiente, bruto, kind, Q, n_ceros, tuple(bloques))


def dirichlet_floor_check(points: Sequence[TargetPoint], v1, v2, t_max):
    """Para cada Q = 2ᵗ, t ≤ t_max, busca q ≤ Q con ‖q·yᵢ‖ < Q^(−vᵢ).

    Con v₁ + v₂ ≤ 1 el teorema de Minkowski garantiza la existencia.

    Returns:
        dict: Fallos (punto, t) y número de comprobaciones
    """
    v1, v2 = Fraction(str(v1)), Fraction(str(v2))
    if v1 + v2 > 1:
        logger.warning(f"v₁ + v₂ = {v1 + v2} > 1: la cota de Minkowski no se aplica")
    q = np.arange(1, 2 ** t_max + 1, dtype=np.int64)
    fallos = []
    for indice, y in enumerate(points):
        d1, _, _ = y.coordinates[0].distances(q)
        d2, _, _ = y.coordinates[1].distances(q)
        for t in range(0, t_max + 1):
            Q = 2 ** t
            u1, u2 = float(Q) ** -float(v1), float(Q) ** -float(v2)
            margen = 1e-12
            ok = (d1[:Q] < u1 - margen) & (d2[:Q] < u2 - margen)
            if not ok.any():
                # comprobación certificada de los candidatos en el borde
                candidatos = np.nonzero((d1[:Q] < u1 + margen) & (d2[:Q] < u2 + margen))[0]
                if not any(_dirichlet_certificado(y, int(q[k]), Q, v1, v2) for k in candidatos):
                    fallos.append((indice, t))
    if fallos:
        logger.warning(f"Suelo de Dirichlet no alcanzado en {len(fallos)} casos")
    return {
        'v1': float(v1),
        'v2': float(v2),
        't_max': t_max,
        'checks': len(points) * (t_max + 1),
        'failures': [{'point': i, 't': t} for i, t in fallos]
    }


def _dirichlet_certificado(y, q, Q, v1, v2):
    cotas = (PowerLog(1, v1), PowerLog(1, v2))
    return all(
        decide_less(lambda b, c=c: c.distance_enclosure(q, b), lambda b, f=f: f.enclose(Q, b))
        for c, f in zip(y.coordinates, cotas))


def split_coverage_check(v, eps, points: Sequence[TargetPoint], Q):
    """Cada solución truncada de S*₂(v) es solución de algún miembro de la familia
    S₂(v−ε, 0), S₂(0, v−ε), S₂(v₁(t), v₂(t)).

    Returns:
        dict: Soluciones revisadas y las no cubiertas
    """
    from .dimension import mult_exponent_split

    familia = mult_exponent_split(v, eps)
    pares = [(familia.v_minus_eps, Fraction(0)), (Fraction(0), familia.v_minus_eps)]
    pares += [(a, b) for _, a, b in familia.pairs]
    psi = PowerLog(1, Fraction(str(v)))
    revisadas, sin_cubrir = 0, []
    for indice, y in enumerate(points):
        soluciones = np.array(multiplicative_solutions(y, psi, Q, verify=False).denominators, dtype=np.int64)
        if not len(soluciones):
            continue
        d1, _, _ = y.coordinates[0].distances(soluciones)
        d2, _, _ = y.coordinates[1].distances(soluciones)
        qs = soluciones.astype(np.float64)
        cubierta = np.zeros(len(soluciones), dtype=bool)
        for a, b in pares:
            cubierta |= (d1 < qs ** -float(a)) & (d2 < qs ** -float(b))
        revisadas += len(soluciones)
        sin_cubrir.extend((indice, int(s)) for s in soluciones[~cubierta])
    return {
        'v': float(v),
        'eps': float(eps),
        'Q': Q,
        'family_size': len(pares),
        'checked': revisadas,
        'uncovered': [{'point': i, 'q': s} for i, s in sin_cubrir]
    }
