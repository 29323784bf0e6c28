"""
Ubicuidad local de los puntos racionales cerca de una curva.

Construye el sistema (ℛ₁, β) de abscisas resonantes p₁/q con peso q, mide
las fracciones de cobertura de las bolas B(p₁/q, ρ(2ᵗ)) en subintervalos
diádicos y calcula las predicciones de los lemas de transferencia para
pares (ρ, Ψ).
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .approxfn import ApproxFn, DyadicPartialSum, DyadicProfile, PowerLog, SeriesVerdict, _verdict_numerico
from .block_processor import map_blocks
from .config_manager import config_manager
from .curve import Interval, PlanarCurve
from .errors import DomainError, HypothesisError
from .interval import Enclosure, decide_less
from .ratpoints import check_growth_condition, enumerate_near_curve

logger = logging.getLogger(__name__)

T_PREDICCION = 64


@dataclass(frozen=True)
class UFunction:
    """Función u creciente y no acotada: 'log' (log(2+log₂h)), 'pow' (h^ε) o suma diádica."""

    kind: str = 'log'
    eps: Fraction = Fraction(0)
    partial_sum: Optional[DyadicPartialSum] = None

    def __post_init__(self):
        if self.kind not in ('log', 'pow', 'dyadic-sum'):
            raise DomainError(f"u desconocida: {self.kind}")
        if self.kind == 'pow':
            object.__setattr__(self, 'eps', Fraction(self.eps))
            if self.eps <= 0:
                raise DomainError("u = h^ε necesita ε > 0")

    def of_h(self, h):
        t = math.log2(h)
        if self.kind == 'log':
            return math.log(2 + t)
        if self.kind == 'pow':
            return float(h) ** float(self.eps)
        return self.partial_sum(int(round(t)))

    def to_text(self):
        if self.kind == 'pow':
            return f"pow:{self.eps}"
        return self.kind


def parse_u(texto) -> UFunction:
    """'log' o 'pow:eps'."""
    if isinstance(texto, UFunction):
        return texto
    texto = str(texto).strip()
    if texto == 'log':
        return UFunction('log')
    if texto.startswith('pow:'):
        try:
            return UFunction('pow', Fraction(texto[4:].strip()))
        except ValueError:
            raise DomainError(f"exponente inválido en u: {texto}")
    raise DomainError(f"u desconocida: {texto} (use log o pow:eps)")


class DyadicFunction:
    """Función h ↦ valor con perfil diádico opcional (para ρ y Ψ no PowerLog)."""

    def __init__(self, fn: Callable, profile: Optional[DyadicProfile] = None, text=''):
        self._fn = fn
        self._profile = profile
        self._text = text

    def eval(self, h):
        return self._fn(h)

    def __call__(self, h):
        return self._fn(h)

    def dyadic_profile(self):
        return self._profile

    def to_text(self):
        return self._text


class Rho(DyadicFunction):
    """ρ(h) = escala · u(h) / (h² ψ(h))."""

    def __init__(self, psi: ApproxFn, u: UFunction, scale=1):
        self.psi = psi
        self.u = u
        self.scale = float(scale)
        if self.scale < 0:
            raise DomainError("la escala de ρ no puede ser negativa")
        perfil = None
        base = psi.dyadic_profile()
        if u.kind == 'pow' and base is not None and self.scale > 0:
            perfil = DyadicProfile(2 - base.alpha - u.eps, -base.beta,
                                   math.log(self.scale) - base.log_scale)
        super().__init__(self._valor, perfil, f"{self.scale!r}*u(h)/(h^2*psi(h)), u={u.to_text()}")

    def _valor(self, h):
        return self.scale * self.u.of_h(h) / (float(h) ** 2 * self.psi.eval(h))

    def scaled(self, k):
        return Rho(self.psi, self.u, self.scale * float(k))


def lower_bound_rho_psi(v1, v2, eps):
    """ρ y Ψ de la configuración ψ = ½h^(−v₂), u = h^ε, Ψ = h^(−1−v₁)."""
    v1, v2, eps = Fraction(v1), Fraction(v2), Fraction(eps)
    if not 0 < v2 < 1:
        raise DomainError(f"v₂={v2} debe estar en (0, 1)")
    rho = Rho(PowerLog(Fraction(1, 2), v2), UFunction('pow', eps))
    return rho, PowerLog(1, 1 + v1)


def step4_configuration(psi1: ApproxFn, psi2: ApproxFn):
    """Ψ(h) = ψ₁(h)/h y ρ(h) = u(log₂h)/(h²ψ₂(h)) con u la suma diádica de 2ˢψ₁ψ₂."""
    u = UFunction('dyadic-sum', partial_sum=DyadicPartialSum(psi1, psi2))
    Psi = DyadicFunction(lambda h: psi1.eval(h) / h, None, f"({psi1.to_text()})/h")
    return Rho(psi2, u), Psi


# ---------------------------------------------------------------------------
# Sistema ubicuo
# ---------------------------------------------------------------------------

@dataclass
class UbiquitySystem:
    """Abscisas resonantes p₁/q de los racionales Φ-cercanos, Φ(q) = ψ(q)/q, con pesos β = q."""

    curve: PlanarCurve
    psi: ApproxFn
    rho: Rho
    interval: Interval
    t_max: int
    q: np.ndarray
    p1: np.ndarray
    p2: np.ndarray

    @property
    def resonant_x(self):
        return self.p1 / self.q

    @property
    def weights(self):
        return self.q

    def __len__(self):
        return int(len(self.q))

    def J(self, t):
        """Máscara de los α con β_α ≤ 2ᵗ."""
        return self.q <= 2 ** t

    def Phi(self, q):
        return self.psi.eval(q) / q

    def with_scale(self, k):
        """El mismo sistema con ρ multiplicado por k."""
        return UbiquitySystem(self.curve, self.psi, self.rho.scaled(k), self.interval,
                              self.t_max, self.q, self.p1, self.p2)

    def reverify(self, limit=None, max_bits=None):
        """Recomprueba |f(p₁/q) − p₂/q| < ψ(q)/q con aritmética certificada
        hasta `max_prec_curve` bits (o max_bits).

        Returns:
            list: Índices de los puntos que no pasan (vacía si todo es correcto)
        """
        max_bits = int(config_manager.get('max_prec_curve') if max_bits is None else max_bits)
        fallos = []
        n = len(self) if limit is None else min(limit, len(self))
        for i in range(n):
            q, a, b = int(self.q[i]), int(self.p1[i]), int(self.p2[i])
            x = Fraction(a, q)

            def distancia(bits, x=x, q=q, b=b):
                return abs(self.curve.enclose_f(x, bits) - Enclosure.exact(Fraction(b, q)))

            def radio(bits, q=q):
                return self.psi.enclose(q, bits).scale(Fraction(1, q))

            if not decide_less(distancia, radio, max_bits=max_bits, contexto=f"({a}, {b})/{q}"):
                fallos.append(i)
        return fallos

    def to_dict(self):
        return {
            'curve': self.curve.to_text(),
            'psi': self.psi.to_text(),
            'rho': self.rho.to_text(),
            'interval': self.interval.to_dict(),
            't_max': self.t_max,
            'size': len(self)
        }


def build_system(curve: PlanarCurve, psi: ApproxFn, u='log', t_max=10, interval: Interval = None,
                 scale=1) -> UbiquitySystem:
    """Enumera los racionales Φ-cercanos con q ≤ 2^t_max (umbral por q).

    Args:
        curve: Curva
        psi: ψ con ψ(t) → 0 y 1/(tψ(t)) → 0
        u: 'log', 'pow:eps' o UFunction
        t_max: Último nivel diádico
        interval: Subintervalo de I₀ (por defecto I₀)
        scale: Factor de ρ

    Returns:
        UbiquitySystem: Sistema con sus abscisas resonantes
    """
    u = parse_u(u)
    check_growth_condition(psi, max(1, t_max // 2), t_max)
    interval = interval or curve.interval
    if interval.is_empty:
        vacio = np.zeros(0, dtype=np.int64)
        logger.info("Intervalo vacío: sistema vacío")
        return UbiquitySystem(curve, psi, Rho(psi, u, scale), interval, t_max, vacio, vacio, vacio)
    q, p1, p2 = enumerate_near_curve(curve, psi, 2 ** t_max, interval, threshold='per-q')
    logger.info(f"Sistema ubicuo en {curve.to_text()}: {len(q)} puntos con q ≤ 2^{t_max}")
    return UbiquitySystem(curve, psi, Rho(psi, u, scale), interval, t_max, q, p1, p2)


# ---------------------------------------------------------------------------
# Fracciones de cobertura
# ---------------------------------------------------------------------------

def union_measure(centros, radio, lo, hi):
    """|⋃ (c − r, c + r) ∩ (lo, hi)| por ordenación de extremos."""
    if radio <= 0 or hi <= lo or not len(centros):
        return 0.0
    c = np.sort(np.asarray(centros, dtype=np.float64))
    a = np.clip(c - radio, lo, hi)
    b = np.clip(c + radio, lo, hi)
    previo = np.concatenate(([lo], np.maximum.accumulate(b)[:-1]))
    return float(np.sum(np.maximum(0.0, b - np.maximum(a, previo))))


@dataclass
class UbiquityReport:
    """Fracciones de cobertura por (t, subintervalo) y κ̂."""

    rows: list
    kappa_hat: float
    worst: Optional[dict]
    system: dict = field(default_factory=dict)

    def fractions(self, t):
        return [r['fraction'] for r in self.rows if r['t'] == t]

    def to_dict(self):
        return {
            'rows': self.rows,
            'kappa_hat': self.kappa_hat,
            'worst': self.worst,
            'system': self.system
        }

    def csv_rows(self):
        return [[r['t'], r['interval'], r['fraction']] for r in self.rows]


def covering_fractions(sys: UbiquitySystem, t_range, subintervals=4) -> UbiquityReport:
    """Fracción de cada subintervalo cubierta por las bolas B(p₁/q, ρ(2ᵗ)), q ≤ 2ᵗ.

    Args:
        sys: Sistema ubicuo
        t_range: Niveles diádicos (≤ sys.t_max)
        subintervals: Número k de subintervalos de I₀

    Returns:
        UbiquityReport: Filas (t, subintervalo, fracción), κ̂ y el peor caso
    """
    t_range = list(t_range)
    if t_range and max(t_range) > sys.t_max:
        raise DomainError(f"t={max(t_range)} supera el t_max={sys.t_max} del sistema")
    partes = [] if sys.interval.is_empty else sys.interval.subdivide(int(subintervals))
    x = sys.resonant_x

    def medir(par):
        t, sub = par
        radio = sys.rho.eval(2 ** t)
        lo, hi = float(sub.lo), float(sub.hi)
        centros = x[sys.J(t) & (x > lo - radio) & (x < hi + radio)]
        return {'t': t, 'interval': sub.to_text(), 'fraction': union_measure(centros, radio, lo, hi) / (hi - lo)}

    filas = map_blocks(medir, [(t, sub) for t in t_range for sub in partes])
    peor = min(filas, key=lambda r: r['fraction']) if filas else None
    kappa = peor['fraction'] if peor else 0.0
    logger.info(f"κ̂ = {kappa:.4f} en t={t_range[0] if t_range else '-'}..{t_range[-1] if t_range else '-'}")
    return UbiquityReport(filas, kappa, peor, sys.to_dict())


# ---------------------------------------------------------------------------
# Predicciones de los lemas de transferencia
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Prediction:
    """Valor predicho de la dimensión; exact=False para estimaciones numéricas."""

    value: object
    exact: bool
    notes: tuple = ()

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        return {'value': str(self.value) if self.exact else float(self.value),
                'exact': self.exact, 'notes': list(self.notes)}


def _perfil(fn):
    return fn.dyadic_profile() if hasattr(fn, 'dyadic_profile') else None


def check_regularity(Psi, t_lo, t_hi):
    """Ψ(2^(t+1)) ≤ ½Ψ(2ᵗ) en el rango; HypothesisError con el primer t que falla."""
    for t in range(t_lo, t_hi):
        if Psi.eval(2 ** (t + 1)) > 0.5 * Psi.eval(2 ** t) * (1 + 1e-12):
            raise HypothesisError(f"Ψ no es regular: Ψ(2^{t + 1}) > ½Ψ(2^{t}) en t={t}")


def predict_lemma1(rho, Psi, t_max=T_PREDICCION, t_min=1) -> SeriesVerdict:
    """Clasifica Σ_t Ψ(2ᵗ)/ρ(2ᵗ); si diverge, Λ tiene medida completa.

    Args:
        rho: Función ρ (ApproxFn, Rho o DyadicFunction)
        Psi: Función Ψ
        t_max: Último nivel del rango
        t_min: Primer nivel del rango

    Returns:
        SeriesVerdict: Con sumas parciales por nivel
    """
    check_regularity(Psi, t_min, t_max)
    terminos = [(t, Psi.eval(2 ** t) / rho.eval(2 ** t)) for t in range(t_min, t_max + 1)]
    acumulado, parciales = 0.0, []
    for t, valor in terminos:
        acumulado += valor
        parciales.append((t, acumulado))

    p_rho, p_psi = _perfil(rho), _perfil(Psi)
    if p_rho is not None and p_psi is not None:
        alpha = p_psi.alpha - p_rho.alpha
        beta = p_psi.beta - p_rho.beta
        diverge = alpha < 0 or (alpha == 0 and beta <= 1)
        metodo = 'closed-form'
    else:
        # bloques (2^k, 2^(k+1)] en t
        bloques, k = [], 0
        while 2 ** k < t_max:
            suma = sum(v for t, v in terminos if 2 ** k < t <= 2 ** (k + 1))
            bloques.append((k, suma))
            k += 1
        veredicto = _verdict_numerico(bloques)
        diverge = veredicto == 'diverges'
        metodo = 'numeric-trend'
        if veredicto == 'undetermined':
            return SeriesVerdict('undetermined', tuple(parciales), metodo, ())
    notas = ("full measure predicted for the limsup set",) if diverge else ()
    return SeriesVerdict('diverges' if diverge else 'converges', tuple(parciales), metodo, notas)


def predict_lemma2(rho, Psi) -> Prediction:
    """min{1, |limsup log ρ(2ᵗ)/log Ψ(2ᵗ)|}: cota inferior de la dimensión.

    Exacta (racional) cuando ambas funciones tienen perfil potencia-logaritmo
    a lo largo de t; en otro caso se estima numéricamente y se marca como
    aproximada.
    """
    p_rho, p_psi = _perfil(rho), _perfil(Psi)
    if p_rho is not None and p_psi is not None:
        if p_psi.alpha == 0:
            raise DomainError("Ψ sin decaimiento potencial: el cociente no está definido")
        valor = min(Fraction(1), abs(Fraction(p_rho.alpha) / Fraction(p_psi.alpha)))
        return Prediction(valor, True)
    cocientes = []
    for t in range(T_PREDICCION // 2, T_PREDICCION + 1):
        h = 2 ** t
        lr, lp = math.log(rho.eval(h)), math.log(Psi.eval(h))
        if lp != 0:
            cocientes.append(abs(lr / lp))
    if not cocientes:
        raise DomainError("no se pudo estimar el cociente de logaritmos")
    return Prediction(min(1.0, max(cocientes)), False, ("numeric limsup estimate",))
