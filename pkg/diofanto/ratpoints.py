"""
Puntos racionales cerca de una curva.

Incluye la función de conteo N_f(Q, ψ, I₀), la vía rápida de sumas de dos
cuadrados para la circunferencia unidad (r(n), recuentos de Gauss y sumas
sobre coronas |q − √n| < Ψ) y los oráculos de fuerza bruta con los que se
concilian.
"""
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Tuple

import numpy as np
from mpmath import iv
from sympy import isprime, pollard_rho

from .approxfn import ApproxFn, PowerLog
from .block_processor import bloques_de_rango, map_blocks
from .config_manager import config_manager
from .curve import Interval, PlanarCurve
from .errors import DomainError, HypothesisError
from .interval import Enclosure, decide_less, evaluate

logger = logging.getLogger(__name__)

TAM_BLOQUE_Q = 128
TRIAL_LIMIT = 10 ** 6
# Tamaño máximo de la tabla r(n) antes de pasar al recuento de Gauss
TABLA_MAXIMA = 1 << 24
EXPONENTE_CIRCULO = 260


def _fraccion(x):
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True, order=True)
class RationalPoint:
    """p/q = (p₁/q, p₂/q) en forma canónica: gcd(p₁, p₂, q) = 1, q ≥ 1."""

    q: int
    p1: int
    p2: int

    def __post_init__(self):
        if self.q < 1:
            raise DomainError("q debe ser ≥ 1")
        if math.gcd(math.gcd(self.p1, self.p2), self.q) != 1:
            raise DomainError(f"({self.p1}, {self.p2})/{self.q} no es canónico")

    @classmethod
    def canonical(cls, p1, p2, q):
        """Reduce (p₁, p₂)/q a su representación canónica."""
        if q == 0:
            raise DomainError("denominador nulo")
        if q < 0:
            p1, p2, q = -p1, -p2, -q
        g = math.gcd(math.gcd(p1, p2), q)
        return cls(q // g, p1 // g, p2 // g)

    @property
    def x(self):
        return Fraction(self.p1, self.q)

    @property
    def y(self):
        return Fraction(self.p2, self.q)

    def to_dict(self):
        return {'p1': self.p1, 'p2': self.p2, 'q': self.q}


@dataclass
class CountReport:
    """Resultado de un recuento N_f(Q, ψ, I)."""

    Q: int
    threshold: float
    count: int
    method: str
    mode: str = 'canonical'
    points: Optional[Tuple[RationalPoint, ...]] = None
    wall_time: float = 0.0

    def to_dict(self):
        data = {
            'Q': self.Q,
            'threshold': self.threshold,
            'count': self.count,
            'method': self.method,
            'mode': self.mode,
            'wall_time': self.wall_time
        }
        if self.points is not None:
            data['points'] = [p.to_dict() for p in self.points]
        return data


# ---------------------------------------------------------------------------
# Umbrales
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Umbral:
    """Umbral de distancia θ(q): |f(p₁/q) − p₂/q| < θ(q).

    Args:
        valores: Arreglo de q -> θ(q) en coma flotante
        exacto: (q, bits) -> Enclosure de θ(q)
        texto: Descripción para los informes
    """

    valores: Callable
    exacto: Callable
    texto: str = ''

    @classmethod
    def frozen(cls, psi: ApproxFn, Q):
        """θ = ψ(Q)/Q para todo q ≤ Q."""
        valor = psi.eval(Q) / Q
        return cls(lambda q: np.full(len(q), valor),
                   lambda q, bits: psi.enclose(Q, bits).scale(Fraction(1, Q)),
                   f"psi(Q)/Q={valor!r}")

    @classmethod
    def per_q(cls, psi: ApproxFn):
        """θ(q) = ψ(q)/q."""
        return cls(lambda q: psi.eval_array(q) / q,
                   lambda q, bits: psi.enclose(int(q), bits).scale(Fraction(1, int(q))),
                   'psi(q)/q')

    @classmethod
    def power(cls, c, v):
        """θ(q) = c·q^(−1−v)."""
        c, v = _fraccion(c), _fraccion(v)
        potencia = PowerLog(c, 1 + v, 0)
        return cls(lambda q: potencia.eval_array(q),
                   lambda q, bits: potencia.enclose(int(q), bits),
                   f"{c}*q^-{1 + v}")


# ---------------------------------------------------------------------------
# Enumeración por denominador
# ---------------------------------------------------------------------------

def _certificar(curve, umbral, q, p1, p2, max_bits):
    x = Fraction(int(p1), int(q))

    def distancia(bits):
        return abs(curve.enclose_f(x, bits).scale(q) - int(p2))

    def radio(bits):
        return umbral.exacto(q, bits).scale(q)

    return decide_less(distancia, radio, max_bits=max_bits,
                       contexto=f"({p1}, {p2})/{q}")


def _enumerar_bloque(curve, interval, umbral, q_lo, q_hi, canonical, max_bits):
    """Todas las (q, p₁, p₂) con q_lo ≤ q ≤ q_hi que pasan el test de distancia."""
    qs, p1s, p2s = [], [], []
    for q in range(q_lo, q_hi + 1):
        primero, ultimo = interval.numerator_range(q)
        if ultimo < primero:
            continue
        p1 = np.arange(primero, ultimo + 1, dtype=np.int64)
        y = curve.f_array(p1 / q) * q
        r = float(umbral.valores(np.array([q]))[0]) * q
        margen = 1e-9 * (1.0 + np.abs(y))
        base = np.floor(y - r - margen).astype(np.int64)
        for j in range(int(math.ceil(2 * r + 2e-9 * (1 + float(np.max(np.abs(y)))))) + 2):
            p2 = base + j
            d = np.abs(y - p2)
            dentro = d < r - margen
            dudoso = np.abs(d - r) <= margen
            if dudoso.any():
                for k in np.nonzero(dudoso)[0]:
                    dentro[k] = _certificar(curve, umbral, q, p1[k], p2[k], max_bits)
            if not dentro.any():
                continue
            a, b = p1[dentro], p2[dentro]
            if canonical:
                reducidos = np.gcd(np.gcd(a, b), q) == 1
                a, b = a[reducidos], b[reducidos]
            qs.append(np.full(len(a), q, dtype=np.int64))
            p1s.append(a)
            p2s.append(b)
    if not qs:
        vacio = np.zeros(0, dtype=np.int64)
        return vacio, vacio, vacio
    return np.concatenate(qs), np.concatenate(p1s), np.concatenate(p2s)


def _validar_intervalo(curve, interval):
    interval = interval or curve.interval
    if not curve.interval.contains_interval(interval):
        raise DomainError(f"el intervalo {interval.to_text()} no está contenido en I₀ = {curve.interval.to_text()}")
    return interval


def enumerate_points(curve: PlanarCurve, umbral: Umbral, q_max, interval: Interval = None,
                     canonical=True, q_min=1, max_bits=None):
    """Puntos (q, p₁, p₂) con q_min ≤ q ≤ q_max y |f(p₁/q) − p₂/q| < θ(q).

    Los casos dudosos se certifican hasta `max_prec_curve` bits (o max_bits).

    Returns:
        tuple: Tres arreglos numpy ordenados por q
    """
    max_bits = int(config_manager.get('max_prec_curve') if max_bits is None else max_bits)
    interval = _validar_intervalo(curve, interval)
    if q_max < q_min:
        vacio = np.zeros(0, dtype=np.int64)
        return vacio, vacio, vacio
    partes = map_blocks(
        lambda rango: _enumerar_bloque(curve, interval, umbral, rango[0], rango[1], canonical, max_bits),
        bloques_de_rango(q_min, q_max, TAM_BLOQUE_Q))
    return tuple(np.concatenate([p[i] for p in partes]) for i in range(3))


def enumerate_near_curve(curve: PlanarCurve, psi: ApproxFn, q_max, interval: Interval = None,
                         threshold='per-q', canonical=True):
    """Enumeración con umbral ψ(q)/q (o congelado en ψ(q_max)/q_max).

    Returns:
        tuple: Arreglos (q, p₁, p₂)
    """
    if threshold == 'per-q':
        return enumerate_points(curve, Umbral.per_q(psi), q_max, interval, canonical, q_min=psi.h0)
    return enumerate_points(curve, Umbral.frozen(psi, q_max), q_max, interval, canonical)


def count_near_curve(curve: PlanarCurve, psi: ApproxFn, Q, interval: Interval = None,
                     mode='canonical', threshold='frozen', emit_points=None) -> CountReport:
    """Cuenta los racionales p/q con q ≤ Q, p₁/q ∈ I y |f(p₁/q) − p₂/q| < ψ(Q)/Q.

    Args:
        curve: Curva plana
        psi: Función de aproximación
        Q: Truncamiento
        interval: Subintervalo de I₀ (por defecto I₀)
        mode: 'canonical' (cada punto una vez) o 'multiplicity' (todos los pares (q, p₁))
        threshold: 'frozen' (ψ(Q)/Q) o 'per-q' (ψ(q)/q)
        emit_points: Conserva los puntos si el recuento no supera este tope
            (acotado por `point_cap`)

    Returns:
        CountReport: Recuento exacto
    """
    if mode not in ('canonical', 'multiplicity'):
        raise DomainError(f"modo desconocido: {mode}")
    if Q < psi.h0:
        raise DomainError(f"Q={Q} menor que h0={psi.h0}")
    if emit_points is not None:
        tope = int(config_manager.get('point_cap'))
        if emit_points > tope:
            logger.warning(f"emit_points={emit_points} supera point_cap={tope}: se usa {tope}")
            emit_points = tope
    inicio = time.perf_counter()
    qs, p1s, p2s = enumerate_near_curve(curve, psi, Q, interval, threshold, mode == 'canonical')
    total = int(len(qs))
    puntos = None
    if emit_points is not None and total <= emit_points:
        puntos = tuple(RationalPoint.canonical(int(a), int(b), int(q)) for q, a, b in zip(qs, p1s, p2s))
    umbral = psi.eval(Q) / Q if threshold == 'frozen' else float('nan')
    report = CountReport(Q, umbral, total, 'brute', mode, puntos, time.perf_counter() - inicio)
    logger.debug(f"N_f(Q={Q}) = {total} ({mode}, {threshold})")
    return report


def check_growth_condition(psi: ApproxFn, t_lo, t_hi):
    """ψ(t) → 0 y 1/(tψ(t)) → 0, exacto para PowerLog y numérico en los extremos del rango."""
    if isinstance(psi, PowerLog):
        decrece = psi.a > 0 or psi.b > 0
        tpsi_crece = psi.a < 1 or (psi.a == 1 and psi.b < 0)
        ok = decrece and tpsi_crece
    else:
        h_lo, h_hi = max(2 ** t_lo, psi.h0), 2 ** t_hi
        ok = psi.eval(h_hi) < psi.eval(h_lo) and h_hi * psi.eval(h_hi) > h_lo * psi.eval(h_lo)
    if not ok:
        raise HypothesisError(
            f"{psi.to_text()} no cumple ψ(t) → 0 y 1/(tψ(t)) → 0 en 2^{t_lo}..2^{t_hi}")


def huxley_ratio_scan(curve: PlanarCurve, psi: ApproxFn, t_range, interval: Interval = None):
    """Recuentos N_f(2ᵗ) y cocientes N/(ψ(2ᵗ)·2²ᵗ) por nivel diádico.

    Returns:
        list: Diccionarios {'t', 'N', 'ratio'}
    """
    t_range = list(t_range)
    check_growth_condition(psi, t_range[0], t_range[-1])
    filas = []
    for t in t_range:
        Q = 2 ** t
        n = count_near_curve(curve, psi, Q, interval).count
        filas.append({'t': t, 'N': n, 'ratio': n / (psi.eval(Q) * Q * Q)})
        logger.info(f"Nivel t={t}: N={n}, cociente={filas[-1]['ratio']:.4f}")
    return filas


def scaling_slope(filas):
    """Pendiente por mínimos cuadrados de log₂ N frente a t."""
    t = np.array([f['t'] for f in filas], dtype=np.float64)
    n = np.array([f['N'] for f in filas], dtype=np.float64)
    if np.any(n <= 0):
        raise DomainError("recuentos nulos: no se puede ajustar la pendiente")
    return float(np.polyfit(t, np.log2(n), 1)[0])


@dataclass(frozen=True)
class CountBand:
    """Banda [A·ψ(Q)Q², B·ψ(Q)Q²] ajustada a partir de un barrido."""

    A: float
    B: float

    def bounds(self, Q, psi_Q):
        escala = psi_Q * Q * Q
        return self.A * escala, self.B * escala

    def contains(self, N, Q, psi_Q):
        lo, hi = self.bounds(Q, psi_Q)
        return lo <= N <= hi

    def to_dict(self):
        return {'A': self.A, 'B': self.B}


def fit_count_band(counts, slack=2.0) -> CountBand:
    """Banda de N/(ψ(Q)Q²) a partir de tuplas (Q, N, ψ(Q)), ensanchada por slack."""
    cocientes = [n / (psi_q * Q * Q) for Q, n, psi_q in counts]
    if not cocientes:
        raise DomainError("se necesita al menos un recuento")
    return CountBand(min(cocientes) / slack, max(cocientes) * slack)


# ---------------------------------------------------------------------------
# Sumas de dos cuadrados
# ---------------------------------------------------------------------------

def factorise(n):
    """Factoriza n: división por tentativa hasta 10⁶ y después Pollard rho.

    Returns:
        dict: primo -> exponente
    """
    if n < 1:
        raise DomainError("n debe ser ≥ 1")
    factores = {}
    for p in (2, 3):
        while n % p == 0:
            factores[p] = factores.get(p, 0) + 1
            n //= p
    p = 5
    while p <= TRIAL_LIMIT and p * p <= n:
        for d in (p, p + 2):
            while n % d == 0:
                factores[d] = factores.get(d, 0) + 1
                n //= d
        p += 6
    pendientes = [n] if n > 1 else []
    while pendientes:
        m = pendientes.pop()
        if m == 1:
            continue
        if isprime(m):
            factores[m] = factores.get(m, 0) + 1
            continue
        divisor = pollard_rho(m)
        semilla = 1
        while divisor is None:
            semilla += 1
            divisor = pollard_rho(m, s=semilla + 1, a=semilla)
        pendientes.extend([divisor, m // divisor])
    return dict(sorted(factores.items()))


def r_two_squares(n, method='formula'):
    """r(n): pares ordenados con signo (a, b) ∈ ℤ² con a² + b² = n.

    Args:
        n: Entero ≥ 1
        method: 'formula' (carácter de divisores) o 'enumeration' (red)
    """
    n = int(n)
    if n < 1:
        raise DomainError("n debe ser ≥ 1")
    if method == 'enumeration':
        s = math.isqrt(n)
        total = 0
        for a in range(-s, s + 1):
            resto = n - a * a
            b = math.isqrt(resto)
            if b * b == resto:
                total += 1 if b == 0 else 2
        return total
    if method != 'formula':
        raise DomainError(f"método desconocido: {method}")
    producto = 1
    for p, e in factorise(n).items():
        if p % 4 == 1:
            producto *= e + 1
        elif p % 4 == 3 and e % 2:
            return 0
    return 4 * producto


def r_two_squares_table(N):
    """Tabla r(0..N) por enumeración de la red: fila a fila sobre a ≥ 0, b ≥ 0 con pesos de signo."""
    N = int(N)
    tabla = np.zeros(N + 1, dtype=np.int64)
    for a in range(math.isqrt(N) + 1):
        b = np.arange(math.isqrt(N - a * a) + 1, dtype=np.int64)
        peso = (2 if a else 1) * np.where(b > 0, 2, 1)
        # índices distintos dentro de cada fila
        tabla[a * a + b * b] += peso
    return tabla


def _smallest_prime_factor(N):
    spf = np.arange(N + 1, dtype=np.int64)
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == p:
            bloque = spf[p * p::p]
            libres = bloque == np.arange(p * p, N + 1, p)
            bloque[libres] = p
    return spf


def r_formula_table(N):
    """Tabla r(0..N) por la fórmula multiplicativa sobre la criba de menor factor primo."""
    N = int(N)
    spf = _smallest_prime_factor(max(N, 1))
    resto = np.arange(N + 1, dtype=np.int64)
    resto[0] = 1
    g = np.ones(N + 1, dtype=np.int64)
    activos = np.nonzero(resto > 1)[0]
    while len(activos):
        r = resto[activos]
        p = spf[r]
        e = np.zeros(len(activos), dtype=np.int64)
        while True:
            divide = r % p == 0
            if not divide.any():
                break
            r = np.where(divide, r // p, r)
            e += divide
        local = np.where(p % 4 == 1, e + 1, np.where(p % 4 == 3, (e % 2 == 0).astype(np.int64), 1))
        g[activos] *= local
        resto[activos] = r
        activos = activos[r > 1]
    tabla = 4 * g
    tabla[0] = 1
    return tabla


def _isqrt_array(v):
    """⌊√v⌋ exacto para enteros no negativos (int64)."""
    v = np.asarray(v, dtype=np.int64)
    s = np.floor(np.sqrt(v.astype(np.float64))).astype(np.int64)
    s = np.where(s * s > v, s - 1, s)
    s = np.where((s + 1) * (s + 1) <= v, s + 1, s)
    return s


def gauss_circle_count(M):
    """#{(a, b) ∈ ℤ²: a² + b² ≤ M}."""
    M = math.floor(M)
    if M < 0:
        return 0
    s = math.isqrt(M)
    a = np.arange(-s, s + 1, dtype=np.int64)
    return int(np.sum(2 * _isqrt_array(M - a * a) + 1))


def annulus_bounds(q, Psi):
    """Enteros n con (q − Ψ)² < n < (q + Ψ)², como (n_lo, n_hi)."""
    Psi = _fraccion(Psi)
    bajo, alto = (q - Psi) ** 2, (q + Psi) ** 2
    n_lo = math.floor(bajo) + 1
    n_hi = math.ceil(alto) - 1
    return max(n_lo, 1), n_hi


def _validar_psi(Psi):
    Psi = _fraccion(Psi)
    if not 0 < Psi < 1:
        raise DomainError(f"Ψ={Psi} fuera de (0, 1)")
    return Psi


def annulus_r_sum(q_lo, q_hi, Psi, tabla=None):
    """Σ_{q_lo < q ≤ q_hi} Σ_{|q − √n| < Ψ} r(n), exacto.

    Usa la tabla acumulada de r(n) cuando cabe en memoria y el recuento de
    Gauss en caso contrario.
    """
    Psi = _validar_psi(Psi)
    if q_hi <= q_lo:
        return 0
    rangos = [annulus_bounds(q, Psi) for q in range(q_lo + 1, q_hi + 1)]
    n_max = max(hi for _, hi in rangos)
    if tabla is not None and len(tabla) > n_max:
        acumulada = np.cumsum(tabla)
    elif n_max <= TABLA_MAXIMA:
        acumulada = np.cumsum(r_two_squares_table(n_max))
    else:
        total = 0
        for lo, hi in rangos:
            if hi >= lo:
                total += gauss_circle_count(hi) - gauss_circle_count(lo - 1)
        return total
    total = 0
    for lo, hi in rangos:
        if hi >= lo:
            total += int(acumulada[hi] - acumulada[lo - 1])
    return total


def count_circle_annulus(Q, Psi):
    """Σ_{Q<q≤2Q} Σ_{n: |q−√n|<Ψ} r(n) con 0 < Ψ < 1.

    Args:
        Q: Entero > 1
        Psi: Anchura de la corona (racional o decimal)

    Returns:
        int: Suma exacta
    """
    if Q <= 1:
        raise DomainError("Q debe ser > 1")
    return annulus_r_sum(Q, 2 * Q, Psi)


def count_circle_annulus_report(Q, Psi) -> CountReport:
    inicio = time.perf_counter()
    total = count_circle_annulus(Q, Psi)
    return CountReport(Q, float(_fraccion(Psi)), total, 'circle-r(n)', 'multiplicity',
                       wall_time=time.perf_counter() - inicio)


def _puntos_red(R):
    """Todos los (p₁, p₂) ∈ ℤ² con p₁² + p₂² ≤ R², ordenados por n."""
    a = np.arange(-R, R + 1, dtype=np.int64)
    p1, p2 = np.meshgrid(a, a, indexing='ij')
    p1, p2 = p1.ravel(), p2.ravel()
    n = p1 * p1 + p2 * p2
    dentro = n <= R * R
    p1, p2, n = p1[dentro], p2[dentro], n[dentro]
    orden = np.argsort(n, kind='stable')
    return p1[orden], p2[orden], n[orden]


def _corona_certificada(q, n, Psi):
    """|q − √n| < Ψ con encierros certificados de √n."""
    def distancia(bits):
        return abs(evaluate(lambda: iv.sqrt(n), bits) - Enclosure.exact(q))

    return decide_less(distancia, lambda bits: Enclosure.exact(Psi), contexto=f"|{q} − √{n}| < {Psi}")


def _en_corona(q, n, Psi):
    """|q − √n| < Ψ en coma flotante con margen; los casos del borde se certifican."""
    psi_f = float(Psi)
    d = np.abs(q - np.sqrt(n.astype(np.float64)))
    dentro = d < psi_f - 1e-9
    dudoso = np.abs(d - psi_f) <= 1e-9
    for k in np.nonzero(dudoso)[0]:
        dentro[k] = _corona_certificada(int(q), int(n[k]), Psi)
    return dentro


def lattice_annulus_count(Q, Psi):
    """Oráculo de fuerza bruta: pares (q, (p₁, p₂)) con Q < q ≤ 2Q y |q − √(p₁²+p₂²)| < Ψ."""
    Psi = _validar_psi(Psi)
    _, _, n = _puntos_red(2 * Q + 1)
    total = 0
    for q in range(Q + 1, 2 * Q + 1):
        # candidatos por raíz entera, después test directo de la corona
        lo = np.searchsorted(n, (q - 1) ** 2, side='left')
        hi = np.searchsorted(n, (q + 1) ** 2, side='right')
        total += int(np.count_nonzero(_en_corona(q, n[lo:hi], Psi)))
    return total


def circle_arc_annulus_points(Q, Psi, interval: Interval):
    """Ternas (q, p₁, p₂) del arco obtenidas desde la pertenencia a la corona.

    Recorre las representaciones de cada n de la corona de q y conserva las
    que tienen p₁/q ∈ I y p₂ > 0.
    """
    Psi = _validar_psi(Psi)
    p1, p2, n = _puntos_red(2 * Q + 1)
    ternas = set()
    for q in range(Q + 1, 2 * Q + 1):
        n_lo, n_hi = annulus_bounds(q, Psi)
        lo = np.searchsorted(n, n_lo, side='left')
        hi = np.searchsorted(n, n_hi, side='right')
        a, b = p1[lo:hi], p2[lo:hi]
        for x, y in zip(a[b > 0].tolist(), b[b > 0].tolist()):
            if interval.contains(Fraction(x, q)):
                ternas.add((q, x, y))
    return ternas


def circle_arc_direct_points(Q, Psi, interval: Interval):
    """Ternas (q, p₁, p₂) del arco por recorrido directo de (q, p₁) y los p₂ vecinos de q·√(1 − (p₁/q)²)."""
    Psi = _validar_psi(Psi)
    ternas = set()
    for q in range(Q + 1, 2 * Q + 1):
        primero, ultimo = interval.numerator_range(q)
        if ultimo < primero:
            continue
        a = np.arange(primero, ultimo + 1, dtype=np.int64)
        y = np.sqrt(np.maximum(q * q - a * a, 0).astype(np.float64))
        # |Δp₂| ≤ (2q+1)·Ψ/p₂ + 1
        ancho = int(np.ceil(np.max((2 * q + 1) * float(Psi) / np.maximum(y, 1.0)))) + 2
        base = np.floor(y).astype(np.int64) - ancho
        for j in range(2 * ancho + 2):
            b = base + j
            valido = b > 0
            if not valido.any():
                continue
            dentro = np.zeros(len(a), dtype=bool)
            dentro[valido] = _en_corona(q, a[valido] ** 2 + b[valido] ** 2, Psi)
            for x, yy in zip(a[dentro].tolist(), b[dentro].tolist()):
                ternas.add((q, x, yy))
    return ternas


def reconcile_arc(Q, Psi, interval: Interval):
    """Compara las dos vías del arco; devuelve las discrepancias.

    La vía de la corona parte de los rangos enteros de n de annulus_bounds y
    de las representaciones n = p₁² + p₂²; la vía directa recorre (q, p₁, p₂)
    y decide |q − √(p₁² + p₂²)| < Ψ con √ en coma flotante y encierros
    certificados en el borde.
    """
    via_corona = circle_arc_annulus_points(Q, Psi, interval)
    via_directa = circle_arc_direct_points(Q, Psi, interval)
    faltan = sorted(via_corona - via_directa)
    sobran = sorted(via_directa - via_corona)
    if faltan or sobran:
        logger.warning(f"Discrepancia en el arco Q={Q}, Ψ={Psi}: {len(faltan)} + {len(sobran)}")
    return {
        'Q': Q,
        'Psi': float(_fraccion(Psi)),
        'count': len(via_corona),
        'direct_count': len(via_directa),
        'only_annulus': faltan,
        'only_direct': sobran
    }


def sharpened_circle_check(Q, psi: ApproxFn):
    """Régimen de la cota afinada para la circunferencia con Ψ = ψ(Q).

    La cota exige Q⁻¹(log Q)^260 ≤ Ψ < 1; se informa el cociente
    N/(ψ(Q)Q²) junto con la aplicabilidad.
    """
    Psi = psi.eval(Q)
    log_minimo = -math.log(Q) + EXPONENTE_CIRCULO * math.log(math.log(Q))
    aplicable = math.log(Psi) >= log_minimo and Psi < 1
    N = count_circle_annulus(Q, Fraction(Psi)) if Psi < 1 else None
    if not aplicable:
        logger.info(f"Cota afinada no aplicable en Q={Q}: Ψ={Psi:.3g} por debajo de Q⁻¹(log Q)^{EXPONENTE_CIRCULO}")
    return {
        'Q': Q,
        'Psi': Psi,
        'N': N,
        'ratio': None if N is None else N / (Psi * Q * Q),
        'applicable': aplicable
    }
