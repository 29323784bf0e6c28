"""
Dimensión de Hausdorff: fórmulas cerradas y estimadores empíricos.

Los estimadores trabajan sobre las celdas
σ(p/q) = {|x − p₁/q| < q^(−1−v₁), |y − p₂/q| < q^(−1−v₂)} que cortan la curva.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .block_processor import bloques_de_rango, map_blocks
from .curve import Interval, PlanarCurve
from .errors import DomainError

logger = logging.getLogger(__name__)

FORMULAS = ('t4', 't6', 't6-order', 'rynne', 'bd', 't5', 't7')
MIN_ESCALAS = 5
R2_MINIMO = 0.9
TAM_BLOQUE_Q = 256


def _fraccion(x):
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass
class DimensionEstimate:
    """Valor de dimensión (fórmula o estimación) con diagnósticos."""

    method: str
    value: float
    parameters: dict
    predicted: Optional[float] = None
    diagnostics: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    low_confidence: bool = False

    def to_dict(self):
        return {
            'method': self.method,
            'value': self.value,
            'parameters': self.parameters,
            'predicted': self.predicted,
            'diagnostics': self.diagnostics,
            'notes': list(self.notes),
            'low_confidence': self.low_confidence
        }


# ---------------------------------------------------------------------------
# Fórmulas
# ---------------------------------------------------------------------------

def theorem4_hypotheses(v1, v2):
    v1, v2 = _fraccion(v1), _fraccion(v2)
    return 0 < min(v1, v2) < 1 and v1 + v2 >= 1


def dim_theorem4(v1, v2):
    """(2 − min(v₁, v₂)) / (1 + max(v₁, v₂)) para 𝒞_f ∩ S₂(v₁, v₂)."""
    v1, v2 = _fraccion(v1), _fraccion(v2)
    if v1 <= 0 or v2 <= 0:
        raise DomainError("los exponentes deben ser positivos")
    if not theorem4_hypotheses(v1, v2):
        logger.warning(f"(v₁, v₂) = ({v1}, {v2}) fuera de las hipótesis: 0 < min < 1 y v₁ + v₂ ≥ 1")
    return (2 - min(v1, v2)) / (1 + max(v1, v2))


def dim_theorem6(v):
    """2 / (1 + v) para 𝒞_f ∩ S*₂(v), v ≥ 1."""
    v = _fraccion(v)
    if v < 1:
        raise DomainError(f"v={v} < 1: S*₂(v) es todo el plano")
    return Fraction(2) / (1 + v)


def dim_theorem6_order(lam):
    """2 / (1 + λ) para el orden λ(ψ) > 1 (acepta también una ApproxFn)."""
    if hasattr(lam, 'order'):
        orden = lam.order()
        if orden.value is None:
            raise DomainError("el orden de ψ no está definido")
        lam = orden.value
    lam = _fraccion(lam)
    if lam <= 1:
        raise DomainError(f"el orden λ={lam} debe ser > 1")
    return Fraction(2) / (1 + lam)


def dim_rynne(v: Sequence):
    """min_k (n + 1 + Σ_{i≥k} (v_k − v_i)) / (1 + v_k) con v₁ ≥ … ≥ v_n."""
    valores = [_fraccion(x) for x in v]
    if not valores or any(x <= 0 for x in valores):
        raise DomainError("se necesita un vector de exponentes positivos")
    if valores != sorted(valores, reverse=True):
        logger.info("Exponentes reordenados de forma decreciente")
        valores = sorted(valores, reverse=True)
    if sum(valores) < 1:
        raise DomainError("la fórmula necesita Σ vᵢ ≥ 1")
    n = len(valores)
    return min(
        (n + 1 + sum(valores[k] - valores[i] for i in range(k, n))) / (1 + valores[k])
        for k in range(n))


def dim_bovey_dodson(n, v):
    """n − 1 + 2/(v + 1), v ≥ 1."""
    v = _fraccion(v)
    if int(n) < 1:
        raise DomainError("n debe ser ≥ 1")
    if v < 1:
        raise DomainError(f"v={v} < 1")
    return int(n) - 1 + Fraction(2) / (v + 1)


def dim_theorem5_lower(dim_M, v, dual=False):
    """Cota inferior dim M − 1 + 2/(1 + v) (también para la forma dual)."""
    v = _fraccion(v)
    if v < 1:
        raise DomainError(f"v={v} < 1")
    if int(dim_M) < 1:
        raise DomainError("dim M debe ser ≥ 1")
    return int(dim_M) - 1 + Fraction(2) / (1 + v)


def dim_theorem7_lower(dim_M, v):
    """Cota inferior para el conjunto dual L*_n(v)."""
    return dim_theorem5_lower(dim_M, v, dual=True)


def dim_formula(which, *args) -> DimensionEstimate:
    """Evalúa una de las fórmulas y devuelve un DimensionEstimate con notas."""
    notas = []
    if which == 't4':
        valor = dim_theorem4(*args)
        if not theorem4_hypotheses(*args):
            notas.append("outside stated hypotheses")
    elif which == 't6':
        valor = dim_theorem6(*args)
    elif which == 't6-order':
        valor = dim_theorem6_order(*args)
    elif which == 'rynne':
        vector = [_fraccion(x) for x in (args[0] if len(args) == 1 else args)]
        if vector != sorted(vector, reverse=True):
            notas.append("exponents sorted decreasingly")
        valor = dim_rynne(vector)
    elif which == 'bd':
        valor = dim_bovey_dodson(*args)
    elif which == 't5':
        valor = dim_theorem5_lower(*args)
    elif which == 't7':
        valor = dim_theorem7_lower(*args)
    else:
        raise DomainError(f"fórmula desconocida: {which} (disponibles: {', '.join(FORMULAS)})")
    return DimensionEstimate('formula', float(valor), {'which': which, 'args': [str(a) for a in args]},
                             predicted=float(valor), diagnostics={'exact': str(valor)}, notes=notas)


# ---------------------------------------------------------------------------
# Descomposición del exponente multiplicativo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitFamily:
    """Familia S₂(v₁(t), v₂(t)), |t| ≤ t₀, más los conjuntos frontera."""

    v: Fraction
    eps: Fraction
    t0: int
    pairs: Tuple[Tuple[int, Fraction, Fraction], ...]
    bounds: Tuple[Fraction, ...]
    max_bound: Fraction
    target: Fraction

    @property
    def v_minus_eps(self):
        return self.v - self.eps

    @property
    def boundary(self):
        return ((self.v_minus_eps, Fraction(0)), (Fraction(0), self.v_minus_eps))

    @property
    def sums_ok(self):
        return all(a + b == self.v_minus_eps for _, a, b in self.pairs)

    @property
    def bound_ok(self):
        return self.max_bound <= self.target

    def to_dict(self):
        return {
            'v': str(self.v),
            'eps': str(self.eps),
            't0': self.t0,
            'pairs': [{'t': t, 'v1': str(a), 'v2': str(b)} for t, a, b in self.pairs],
            'boundary': [[str(a), str(b)] for a, b in self.boundary],
            'max_bound': str(self.max_bound),
            'target': str(self.target),
            'sums_ok': self.sums_ok,
            'bound_ok': self.bound_ok
        }


def _cota_familia(a, b):
    return (2 - min(a, b)) / (1 + max(a, b))


def mult_exponent_split(v, eps) -> SplitFamily:
    """Familia finita de pares (v₁(t), v₂(t)) con v₁ + v₂ = v − ε que cubre S*₂(v).

    v₁(t) = v/2 − (2t+1)ε/2 para −t₀ ≤ t ≤ t₀, con t₀ el único entero en
    [v/(2ε) − 3/2, v/(2ε) − 1/2).

    Args:
        v: Exponente multiplicativo > 1
        eps: 0 < ε < min(1/(1+v), 1/5) con v − ε > 1

    Returns:
        SplitFamily: Pares, cotas y comprobaciones
    """
    v, eps = _fraccion(v), _fraccion(eps)
    if not (0 < eps < min(1 / (1 + v), Fraction(1, 5)) and v - eps > 1):
        raise DomainError(
            f"ε={eps} fuera de la ventana 0 < ε < min(1/(1+v), 1/5) con v − ε > 1 (v={v})")
    t0 = math.ceil(v / (2 * eps) - Fraction(3, 2))
    pares = []
    for t in range(-t0, t0 + 1):
        v1 = v / 2 - (2 * t + 1) * eps / 2
        pares.append((t, v1, v - eps - v1))
    cotas = [_cota_familia(a, b) for _, a, b in pares]
    cotas += [_cota_familia(v - eps, Fraction(0))] * 2
    familia = SplitFamily(v, eps, t0, tuple(pares), tuple(cotas), max(cotas), 2 / (1 + v - eps))
    if not (familia.sums_ok and familia.bound_ok):
        logger.error(f"Familia inconsistente para v={v}, ε={eps}")
    return familia


# ---------------------------------------------------------------------------
# Celdas sobre la curva
# ---------------------------------------------------------------------------

def _celdas_bloque(curve, interval, v1, v2, q_lo, q_hi, multiplicativo):
    """Celdas (q, p₁, p₂) que cortan la curva con su proyección en x y su diámetro."""
    lo, hi = float(interval.lo), float(interval.hi)
    lipschitz_global = curve.lipschitz()
    salida = {k: [] for k in ('q', 'x_lo', 'x_hi', 'diam')}
    for q in range(q_lo, q_hi + 1):
        d1 = float(q) ** (-1 - v1)
        d2 = float(q) ** (-1 - v2)
        p1 = np.arange(math.floor((lo - d1) * q) + 1, math.ceil((hi + d1) * q), dtype=np.int64)
        if not len(p1):
            continue
        xc = p1 / q
        w_lo, w_hi = np.maximum(xc - d1, lo), np.minimum(xc + d1, hi)
        validos = w_lo < w_hi
        p1, xc, w_lo, w_hi = p1[validos], xc[validos], w_lo[validos], w_hi[validos]
        if multiplicativo:
            # p₂ más cercano y modelo tangente de la celda hiperbólica
            x_ref = np.clip(xc, lo, hi)
            fx = curve.f_array(x_ref)
            p2 = np.rint(fx * q)
            d = np.abs(fx - p2 / q)
            pend = np.maximum(np.abs(curve.fprime_array(x_ref)), 1e-12)
            c = float(q) ** (-2 - v1)
            w = (-d + np.sqrt(d * d + 4 * pend * c)) / (2 * pend)
            a, b = np.maximum(x_ref - w, lo), np.minimum(x_ref + w, hi)
            reps = np.ones(len(a), dtype=np.int64)
            diam = (b - a) * lipschitz_global
        else:
            fmin, fmax = curve.f_range(w_lo, w_hi)
            p2_lo = np.floor(q * (fmin - d2)).astype(np.int64) + 1
            p2_hi = np.ceil(q * (fmax + d2)).astype(np.int64) - 1
            reps = np.maximum(p2_hi - p2_lo + 1, 0)
            if not reps.any():
                continue
            indices = np.repeat(np.arange(len(p1)), reps)
            desplaz = np.arange(len(indices)) - np.repeat(np.cumsum(reps) - reps, reps)
            p2 = (p2_lo[indices] + desplaz).astype(np.float64)
            x0 = xc[indices]
            fx = curve.f_array(np.clip(x0, lo, hi))
            pend = curve.fprime_array(np.clip(x0, lo, hi))
            # modelo tangente: |f(x₀) + f′·u − p₂/q| < δ₂
            with np.errstate(divide='ignore', invalid='ignore'):
                u1 = (p2 / q - d2 - fx) / pend
                u2 = (p2 / q + d2 - fx) / pend
            plano = np.abs(pend) < 1e-12
            u_lo = np.where(plano, -d1, np.minimum(u1, u2))
            u_hi = np.where(plano, d1, np.maximum(u1, u2))
            a = np.maximum(np.maximum(x0 + u_lo, w_lo[indices]), lo)
            b = np.minimum(np.minimum(x0 + u_hi, w_hi[indices]), hi)
            a, b = np.minimum(a, b), np.maximum(a, b)
            ancho = np.minimum(2 * d1, 2 * d2 / np.maximum(curve.min_abs_fprime(w_lo, w_hi), 1e-300))
            sup = np.maximum(np.abs(curve.fprime_array(w_lo)), np.abs(curve.fprime_array(w_hi)))
            diam = (ancho * np.sqrt(1 + sup * sup))[indices]
            reps = np.ones(len(a), dtype=np.int64)
        salida['q'].append(np.full(len(a), q, dtype=np.int64))
        salida['x_lo'].append(a)
        salida['x_hi'].append(b)
        salida['diam'].append(diam)
    return {k: (np.concatenate(v) if v else np.zeros(0)) for k, v in salida.items()}


def enumerate_cells(curve: PlanarCurve, v1, v2, q_lo, q_hi, interval: Interval = None, multiplicative=False):
    """Celdas con q_lo ≤ q ≤ q_hi, en paralelo por bloques de q.

    Returns:
        dict: Arreglos 'q', 'x_lo', 'x_hi', 'diam'
    """
    interval = interval or curve.interval
    if q_hi < q_lo or interval.is_empty:
        return {k: np.zeros(0) for k in ('q', 'x_lo', 'x_hi', 'diam')}
    v1, v2 = float(v1), float(v2)
    partes = map_blocks(
        lambda r: _celdas_bloque(curve, interval, v1, v2, r[0], r[1], multiplicative),
        bloques_de_rango(q_lo, q_hi, TAM_BLOQUE_Q))
    return {k: np.concatenate([p[k] for p in partes]) for k in ('q', 'x_lo', 'x_hi', 'diam')}


def _sumas_bloque(t_celda, log_diam, bloques, s):
    """log₂ B_t(s) = log₂ Σ_{celdas del bloque t} diam^s."""
    valores = []
    for t in bloques:
        sel = log_diam[t_celda == t]
        m = np.max(s * sel)
        valores.append((m + math.log(np.sum(np.exp(s * sel - m)))) / math.log(2))
    return np.array(valores)


def cover_sum_exponent(curve: PlanarCurve, v1, v2, Q, tol=0.01, interval: Interval = None) -> DimensionEstimate:
    """Exponente crítico de las sumas de recubrimiento por bloques diádicos.

    B_t(s) = Σ_{2^(t−1) < q ≤ 2ᵗ} diam(𝒞 ∩ σ(p/q))^s; la estimación es el s
    en que la pendiente de log₂ B_t(s) frente a t se anula, por bisección.

    Args:
        curve: Curva no degenerada
        v1, v2: Exponentes con v₁ ≥ v₂
        Q: Truncamiento (≥ 2⁸)
        tol: Anchura máxima del corchete

    Returns:
        DimensionEstimate: Con predicted = dim_theorem4(v₁, v₂)
    """
    v1, v2 = _fraccion(v1), _fraccion(v2)
    if v1 < v2:
        raise DomainError("se necesita v₁ ≥ v₂")
    if Q < 2 ** 8:
        raise DomainError("Q debe ser ≥ 2⁸")
    celdas = enumerate_cells(curve, v1, v2, 1, Q, interval)
    if not len(celdas['q']):
        raise DomainError("no hay celdas: pruebe con un Q mayor")
    t_celda = np.array([(int(q) - 1).bit_length() for q in celdas['q']])
    log_diam = np.log(np.maximum(celdas['diam'], 1e-300))
    T = int(math.floor(math.log2(Q)))
    bloques = [t for t in range(T // 2, T + 1) if np.any(t_celda == t)]
    if len(bloques) < 3:
        raise DomainError("bloques diádicos insuficientes: pruebe con un Q mayor")
    t_arr = np.array(bloques, dtype=np.float64)

    def pendiente(s):
        return float(np.polyfit(t_arr, _sumas_bloque(t_celda, log_diam, bloques, s), 1)[0])

    lo, hi = 0.0, 2.0
    notas = []
    if pendiente(lo) <= 0:
        hi = lo
        notas.append("slope non-positive at s=0")
    elif pendiente(hi) >= 0:
        lo = hi
        notas.append("slope non-negative at s=2")
    while hi - lo > tol:
        medio = 0.5 * (lo + hi)
        if pendiente(medio) > 0:
            lo = medio
        else:
            hi = medio
    estimacion = 0.5 * (lo + hi)
    prediccion = float(dim_theorem4(v1, v2))
    logger.info(f"Exponente de recubrimiento ({v1}, {v2}) en Q={Q}: {estimacion:.4f} (predicho {prediccion:.4f})")
    return DimensionEstimate(
        'cover-sum-exponent', estimacion,
        {'curve': curve.to_text(), 'v1': str(v1), 'v2': str(v2), 'Q': Q, 'tol': tol},
        predicted=prediccion,
        diagnostics={
            'bracket': [lo, hi],
            'bracket_width': hi - lo,
            'cells': int(len(celdas['q'])),
            'blocks': bloques,
            'slope_at_lo': pendiente(lo),
            'slope_at_hi': pendiente(hi)
        },
        notes=notas)


def cover_sum_slope(curve: PlanarCurve, v1, v2, Q, s, interval: Interval = None):
    """Pendiente de log₂ B_t(s) frente a t (la cantidad que biseca cover_sum_exponent)."""
    celdas = enumerate_cells(curve, _fraccion(v1), _fraccion(v2), 1, Q, interval)
    t_celda = np.array([(int(q) - 1).bit_length() for q in celdas['q']])
    log_diam = np.log(np.maximum(celdas['diam'], 1e-300))
    T = int(math.floor(math.log2(Q)))
    bloques = [t for t in range(T // 2, T + 1) if np.any(t_celda == t)]
    return float(np.polyfit(np.array(bloques, dtype=np.float64),
                            _sumas_bloque(t_celda, log_diam, bloques, s), 1)[0])


def _cajas_ocupadas(x_lo, x_hi, delta):
    """Número de cajas [kδ, (k+1)δ) que cortan la unión de intervalos."""
    k_lo = np.floor(np.asarray(x_lo, dtype=np.float64) / delta).astype(np.int64)
    k_hi = np.floor(np.asarray(x_hi, dtype=np.float64) / delta).astype(np.int64)
    if not len(k_lo):
        return 0
    # fusión de los tramos [k_lo, k_hi] ordenados por su inicio
    orden = np.argsort(k_lo, kind='stable')
    lo = k_lo[orden]
    fin = np.maximum.accumulate(np.maximum(k_hi[orden], lo))
    nuevo = np.ones(len(lo), dtype=bool)
    nuevo[1:] = lo[1:] > fin[:-1]
    ultimos = np.append(np.nonzero(nuevo)[0][1:] - 1, len(lo) - 1)
    return int((fin[ultimos] - lo[nuevo] + 1).sum())


def box_count_dimension(curve: PlanarCurve, kind, Q, scales, params, interval: Interval = None) -> DimensionEstimate:
    """Dimensión de conteo de cajas de la proyección en x del conjunto truncado.

    A cada escala δ se le asocia el bloque diádico de q en que el tamaño de
    celda q^(−1−v₁) (o q^(−1−v) para el caso multiplicativo) alcanza δ.

    Args:
        curve: Curva
        kind: 'sim' (params = (v1, v2)) o 'mult' (params = (v,))
        Q: Truncamiento
        scales: Escalas δ diádicas (al menos 5 que abarquen 3 octavas)
        params: Exponentes

    Returns:
        DimensionEstimate: Pendiente de log N(δ) frente a log(1/δ) con R²
    """
    escalas = sorted(float(d) for d in scales)
    if len(escalas) < MIN_ESCALAS or math.log2(escalas[-1] / escalas[0]) < 3:
        raise DomainError("se necesitan ≥ 5 escalas que abarquen ≥ 3 octavas")
    if kind == 'sim':
        v1, v2 = (float(_fraccion(p)) for p in params)
        prediccion = float(dim_theorem4(*params))
        multiplicativo = False
    elif kind == 'mult':
        v1 = v2 = float(_fraccion(params[0]))
        prediccion = float(dim_theorem6(params[0]))
        multiplicativo = True
    else:
        raise DomainError(f"tipo desconocido: {kind}")

    T = int(math.floor(math.log2(Q)))
    filas, notas = [], []
    for delta in escalas:
        t = int(round(math.log2(1 / delta) / (1 + v1)))
        if t < 1 or t > T:
            notas.append(f"scale {delta!r} skipped: matched level t={t} outside 1..{T}")
            continue
        celdas = enumerate_cells(curve, v1, v2, 2 ** (t - 1) + 1, 2 ** t, interval, multiplicativo)
        if not len(celdas['q']):
            continue
        filas.append((delta, t, _cajas_ocupadas(celdas['x_lo'], celdas['x_hi'], delta)))
    if not filas:
        raise DomainError("truncamiento vacío: no hay celdas a ninguna escala")
    if len(filas) < MIN_ESCALAS:
        raise DomainError(f"sólo {len(filas)} escalas utilizables con Q={Q}")

    x = np.log([1 / d for d, _, _ in filas])
    y = np.log([n for _, _, n in filas])
    pendiente, ordenada = np.polyfit(x, y, 1)
    residuo = y - (pendiente * x + ordenada)
    total = np.sum((y - y.mean()) ** 2)
    r2 = float(1 - np.sum(residuo ** 2) / total) if total > 0 else 1.0
    baja = r2 < R2_MINIMO
    if baja:
        logger.warning(f"Ajuste de conteo de cajas poco fiable: R² = {r2:.3f}")
    return DimensionEstimate(
        'box-count', float(pendiente),
        {'curve': curve.to_text(), 'kind': kind, 'params': [str(p) for p in params], 'Q': Q},
        predicted=prediccion,
        diagnostics={'r2': r2, 'scales': [{'delta': d, 't': t, 'boxes': n} for d, t, n in filas]},
        notes=notas,
        low_confidence=baja)


def lower_bound_configuration(v1, v2, eps):
    """Configuración de ubicuidad de la cota inferior: ψ = ½h^(−v₂), u = h^ε.

    Returns:
        dict: ρ y Ψ (como PowerLog), la predicción del lema de transferencia
        y dim_theorem4(v₁, v₂)
    """
    from .ubiquity import lower_bound_rho_psi, predict_lemma2

    v1, v2, eps = _fraccion(v1), _fraccion(v2), _fraccion(eps)
    rho, Psi = lower_bound_rho_psi(v1, v2, eps)
    return {
        'rho': rho,
        'Psi': Psi,
        'prediction': predict_lemma2(rho, Psi),
        'expected': min(Fraction(1), (2 - v2 - eps) / (1 + v1)),
        'theorem4': dim_theorem4(v1, v2) if v1 >= v2 else None
    }
