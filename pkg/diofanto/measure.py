"""
Experimentos de medida sobre la curva.

- dichotomy_experiment: Monte Carlo sobre x ∈ I₀ con la actividad por bloque
  diádico de soluciones nuevas y una pista de veredicto (nunca un teorema).
- simultaneous_cover_tail / multiplicative_cover_tail: sumas de las medidas
  de los recubrimientos usados en las pruebas de convergencia, con los
  recuentos reales de puntos racionales.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
import numpy as np
from mpmath import iv

from .approxfn import ApproxFn, PowerLog, classify_series
from .block_processor import map_blocks
from .config_manager import config_manager
from .curve import DEFAULT_EPS, Interval, PlanarCurve, QuadricCurve, make_quadric
from .errors import DomainError, HypothesisError
from .interval import Enclosure, precision
from .ratpoints import Umbral, annulus_r_sum, enumerate_points

logger = logging.getLogger(__name__)

MIN_MUESTRAS = 100
UMBRALES_ACUMULADOS = (1, 3, 10)
TAM_LOTE_MUESTRAS = 50


# ---------------------------------------------------------------------------
# Dicotomía cero-completo
# ---------------------------------------------------------------------------

@dataclass
class DichotomyReport:
    """Actividad por bloque diádico y fracciones acumuladas de las muestras."""

    curve: str
    psis: list
    kind: str
    samples: int
    seed: int
    Q_max: int
    activity: list
    cumulative: dict
    verdict: str
    notes: list = field(default_factory=list)

    def activity_of(self, t):
        for fila in self.activity:
            if fila['t'] == t:
                return fila['activity']
        raise KeyError(t)

    def to_dict(self):
        return {
            'curve': self.curve,
            'psis': self.psis,
            'kind': self.kind,
            'samples': self.samples,
            'seed': self.seed,
            'Q_max': self.Q_max,
            'activity': self.activity,
            'cumulative': {str(k): v for k, v in self.cumulative.items()},
            'verdict': self.verdict,
            'notes': list(self.notes)
        }

    def csv_rows(self):
        return [[f['t'], f['activity']] for f in self.activity]


def verdict_hint(actividades, full=None, zero=None, window=None):
    """'full-like', 'zero-like' o 'inconclusive' según los últimos bloques."""
    full = config_manager.get('verdict_full') if full is None else full
    zero = config_manager.get('verdict_zero') if zero is None else zero
    window = int(config_manager.get('verdict_window') if window is None else window)
    ultimos = list(actividades)[-window:]
    if len(ultimos) < window:
        return 'inconclusive'
    if all(a >= full for a in ultimos):
        return 'full-like'
    if all(b < a for a, b in zip(ultimos, ultimos[1:])) and ultimos[-1] < zero:
        return 'zero-like'
    return 'inconclusive'


def _distancia_entero(v):
    return np.abs(v - np.rint(v))


def _lote_dicotomia(curve, kind, umbrales, q, bloques_q, seed, indices):
    """Soluciones por bloque para las muestras del lote (una RNG por muestra)."""
    lo, hi = float(curve.interval.lo), float(curve.interval.hi)
    T = len(bloques_q)
    activos = np.zeros((len(indices), T), dtype=bool)
    totales = np.zeros(len(indices), dtype=np.int64)
    for fila, indice in enumerate(indices):
        rng = np.random.default_rng([seed, indice])
        x = lo + (hi - lo) * rng.random()
        y = float(curve.f_array(np.array([x]))[0])
        dx, dy = _distancia_entero(q * x), _distancia_entero(q * y)
        if kind == 'sim':
            ok = (dx < umbrales[0]) & (dy < umbrales[1])
        else:
            ok = dx * dy < umbrales[0]
        totales[fila] = int(np.count_nonzero(ok))
        for k, (a, b) in enumerate(bloques_q):
            activos[fila, k] = bool(ok[a:b].any())
    return activos, totales


def dichotomy_experiment(curve: PlanarCurve, psis, kind='sim', samples=500, Q_max=2 ** 12, seed=42) -> DichotomyReport:
    """Experimento Monte Carlo de la ley cero-completo sobre la curva.

    Cada muestra x se toma uniforme en I₀ con su propio generador
    default_rng([seed, índice]); el punto es (x, fl(f(x))).

    Args:
        curve: Curva no degenerada
        psis: [ψ₁, ψ₂] para 'sim' o [ψ] (o ψ) para 'mult'
        kind: 'sim' o 'mult'
        samples: Número de muestras (≥ 100)
        Q_max: Truncamiento
        seed: Semilla

    Returns:
        DichotomyReport: Actividad por bloque, fracciones acumuladas y pista
    """
    if isinstance(psis, ApproxFn):
        psis = [psis]
    psis = list(psis)
    if samples < MIN_MUESTRAS:
        raise DomainError(f"se necesitan al menos {MIN_MUESTRAS} muestras")
    if kind == 'sim' and len(psis) != 2:
        raise DomainError("el caso simultáneo necesita dos funciones")
    if kind == 'mult' and len(psis) != 1:
        raise DomainError("el caso multiplicativo necesita una función")
    if kind not in ('sim', 'mult'):
        raise DomainError(f"tipo desconocido: {kind}")
    if curve.interval.is_empty:
        raise DomainError("el intervalo de la curva es vacío")

    q0 = max(f.h0 for f in psis)
    q = np.arange(q0, Q_max + 1, dtype=np.float64)
    umbrales = [f.eval_array(q) for f in psis]
    T = int(math.floor(math.log2(Q_max)))
    bloques_q = []
    for t in range(1, T + 1):
        a = max(2 ** (t - 1) + 1, q0) - q0
        b = 2 ** t - q0 + 1
        bloques_q.append((a, max(a, b)))

    lotes = [list(range(i, min(i + TAM_LOTE_MUESTRAS, samples))) for i in range(0, samples, TAM_LOTE_MUESTRAS)]
    partes = map_blocks(lambda ind: _lote_dicotomia(curve, kind, umbrales, q, bloques_q, seed, ind), lotes)
    activos = np.concatenate([p[0] for p in partes])
    totales = np.concatenate([p[1] for p in partes])

    actividad = [{'t': t, 'activity': float(activos[:, t - 1].mean())} for t in range(1, T + 1)]
    acumulado = {m: float(np.mean(totales >= m)) for m in UMBRALES_ACUMULADOS}
    veredicto = verdict_hint([f['activity'] for f in actividad])
    notas = ["verdict is a heuristic hint, not a theorem verdict"]
    logger.info(f"Dicotomía {kind} en {curve.to_text()}: {veredicto} (semilla {seed}, {samples} muestras)")
    return DichotomyReport(curve.to_text(), [f.to_text() for f in psis], kind, samples, seed, Q_max,
                           actividad, acumulado, veredicto, notas)


# ---------------------------------------------------------------------------
# Colas de recubrimiento
# ---------------------------------------------------------------------------

@dataclass
class CoverTailReport:
    """Términos por bloque de la medida del recubrimiento y sus colas."""

    kind: str
    terms: dict
    tails: dict
    components: dict = field(default_factory=dict)
    excluded: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)

    @property
    def tails_non_increasing(self):
        valores = [self.tails[n] for n in sorted(self.tails)]
        return all(b <= a for a, b in zip(valores, valores[1:]))

    def to_dict(self):
        return {
            'kind': self.kind,
            'terms': {str(t): v for t, v in self.terms.items()},
            'tails': {str(n): v for n, v in self.tails.items()},
            'components': {k: {str(t): v for t, v in c.items()} for k, c in self.components.items()},
            'excluded': self.excluded,
            'notes': list(self.notes),
            'parameters': self.parameters
        }

    def csv_rows(self):
        filas = []
        for t in sorted(self.terms):
            extra = [self.components[k].get(t, 0.0) for k in sorted(self.components)]
            filas.append([t, self.terms[t], self.tails[t]] + extra)
        return filas


def _colas(terminos):
    """Σ_{t ≥ n} término(t) para cada n del rango, de la cola hacia atrás."""
    colas, acumulado = {}, 0.0
    for t in sorted(terminos, reverse=True):
        acumulado += terminos[t]
        colas[t] = acumulado
    return dict(sorted(colas.items()))


def simultaneous_cover_tail(curve: PlanarCurve, psi: ApproxFn, phi: ApproxFn, n_range,
                            interval: Interval = None) -> CoverTailReport:
    """Cola del recubrimiento por celdas {‖qx‖ < φ(q), ‖q f(x)‖ < ψ(q)}.

    Para cada bloque t (q ∈ (2^(t−1), 2ᵗ]) el término es N(t) por la medida
    máxima de celda 2φ(q)/q, donde N(t) cuenta las ternas (q, p₁, p₂) con
    |f(p₁/q) − p₂/q| < (ψ(q) + L·φ(q))/q, L = sup|f′|.

    Args:
        curve: Cuádrica racional
        psi: Función de la coordenada y
        phi: Función de la coordenada x, con ψ ≥ φ
        n_range: Bloques diádicos
        interval: Subintervalo de I₀ (por defecto I₀)

    Returns:
        CoverTailReport: Términos, colas y recuentos N(t)
    """
    n_range = list(n_range)
    if not isinstance(curve, QuadricCurve):
        raise DomainError("la cola simultánea se define para cuádricas racionales")
    t_lo, t_hi = n_range[0], n_range[-1]
    q_lo = max(2 ** (t_lo - 1) + 1, psi.h0, phi.h0)
    q = np.arange(q_lo, 2 ** t_hi + 1, dtype=np.float64)
    if np.any(psi.eval_array(q) < phi.eval_array(q)):
        raise HypothesisError("se necesita ψ(q) ≥ φ(q) para todo q del rango (normalización ψ ≥ φ)")

    terminos, recuentos = {}, {}
    interval = interval or curve.interval
    if interval.is_empty:
        terminos = {t: 0.0 for t in n_range}
        recuentos = {t: 0 for t in n_range}
    else:
        L = curve.lipschitz()
        pendiente = math.sqrt(max(L * L - 1.0, 0.0))
        pendiente_q = Fraction(pendiente).limit_denominator(10 ** 6) + Fraction(1, 10 ** 6)
        umbral = Umbral(
            lambda qs: (psi.eval_array(qs) + pendiente * phi.eval_array(qs)) / qs,
            lambda qq, bits: (psi.enclose(int(qq), bits) + phi.enclose(int(qq), bits).scale(pendiente_q))
            .scale(Fraction(1, int(qq))),
            'psi(q)/q + L*phi(q)/q')
        for t in n_range:
            a = max(2 ** (t - 1) + 1, psi.h0, phi.h0)
            qs, _, _ = enumerate_points(curve, umbral, 2 ** t, interval, canonical=False, q_min=a)
            recuentos[t] = int(len(qs))
            terminos[t] = recuentos[t] * 2 * phi.eval(a) / a
    logger.info(f"Cola simultánea en {curve.to_text()}: {len(n_range)} bloques")
    return CoverTailReport('simultaneous', terminos, _colas(terminos), {'count': dict(recuentos)},
                           parameters={'curve': curve.to_text(), 'psi': psi.to_text(),
                                       'phi': phi.to_text(), 'n_range': [t_lo, t_hi]})


def classify_case(t, m, psi: ApproxFn):
    """'a' si 2^(−|m|) ≥ t√ψ(2ᵗ), 'b' en otro caso (cada par en un solo caso)."""
    return 'a' if 2.0 ** (-abs(m)) >= t * math.sqrt(psi.eval(2 ** t)) else 'b'


def case_b_strip_measure(t, psi: ApproxFn):
    """Medida de una banda S′(q, p): 2tψ(2ᵗ)/2ᵗ."""
    return 2 * t * psi.eval(2 ** t) / 2 ** t


def m_max_case_a(t, psi: ApproxFn):
    """Mayor |m| del caso (a), o −1 si el rango es vacío."""
    umbral = t * math.sqrt(psi.eval(2 ** t))
    if umbral > 1:
        return -1
    return int(math.floor(-math.log2(umbral)))


def check_corridor(psi: ApproxFn, t_range):
    """Niveles t donde falla q⁻¹(log q)⁻³ < ψ(q) < q⁻¹(log q)⁻¹ en q = 2ᵗ."""
    fallos = []
    for t in t_range:
        q = 2 ** t
        log_q = math.log(q)
        if not (1 / (q * log_q ** 3) < psi.eval(q) < 1 / (q * log_q)):
            fallos.append(t)
    return fallos


def certify_annulus_constant(eps=DEFAULT_EPS, c=None, t_min=1):
    """Certifica con aritmética de intervalos que la constante de la corona es < c.

    Si (x, y) está en la circunferencia y |x − p₁/q|, |y − p₂/q| < 2^|m|√(2ψ)/2ᵗ
    con 2ᵗ ≤ q < 2^(t+1), entonces |q − √(p₁²+p₂²)| ≤ q·|(x,y) − p/q|
    < (q/2ᵗ)·√2·√2·2^|m|√ψ ≤ (4 − 2^(1−t))·2^|m|√ψ.

    La primera desigualdad es la triangular ||w| − 1| ≤ |w − z| para z en la
    circunferencia, así que la cota sólo depende de t_min y no del arco: ε se
    valida como carta (0 < ε < 1/2) y se anota en el informe.

    Returns:
        dict: Cota certificada (encierro), c, si la cota queda por debajo y el
        arco al que se aplica
    """
    c = Fraction(config_manager.get('annulus_c') if c is None else c)
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise DomainError(f"ε={eps} fuera de (0, 1/2)")
    with precision(128):
        cota = iv.sqrt(iv.mpf(2)) * iv.sqrt(iv.mpf(2)) * (2 - iv.mpf(2) ** (-int(t_min)))
        encierro = Enclosure.from_iv(cota)
    certificado = encierro.less_than(Enclosure.exact(c))
    return {
        'eps': str(eps),
        'c': str(c),
        'bound': encierro.to_dict(),
        'certified': bool(certificado),
        't_min': int(t_min),
        'arc': f"({eps}, {1 - eps})"
    }


def _bandas_por_bloque(curve, t):
    """Número de bandas S′(q, p) en x y en y con 2ᵗ ≤ q < 2^(t+1)."""
    q = np.arange(2 ** t, 2 ** (t + 1), dtype=np.float64)
    lo, hi = float(curve.interval.lo), float(curve.interval.hi)
    ylo, yhi = curve.f_range(np.array([lo]), np.array([hi]))
    total = 0
    for a, b in ((lo, hi), (float(ylo[0]), float(yhi[0]))):
        total += int(np.sum(np.maximum(np.ceil(b * q) - np.floor(a * q) - 1, 0)))
    return total


def multiplicative_cover_tail(psi: ApproxFn, n_range, eps=DEFAULT_EPS, c=None) -> CoverTailReport:
    """Cola del recubrimiento por celdas hiperbólicas S(q, p₁, p₂, m) sobre el arco de la circunferencia.

    Los bloques son 2ᵗ ≤ q < 2^(t+1). Caso (a): N(t, m) se cuenta en la
    corona con Ψ = c·2^|m|√ψ(2ᵗ) y se multiplica por 2^(−|m|)√ψ(2ᵗ)/2ᵗ; los
    pares con Ψ ≥ 1 se excluyen. Caso (b): número de bandas S′(q, p) del
    bloque por su medida 2tψ(2ᵗ)/2ᵗ.

    Args:
        psi: Función en el corredor q⁻¹(log q)⁻³ < ψ < q⁻¹(log q)⁻¹
        n_range: Bloques diádicos
        eps: Arco (ε, 1 − ε)
        c: Constante de la corona (por defecto la configurada)

    Returns:
        CoverTailReport: Con componentes 'case_a' y 'case_b'
    """
    n_range = list(n_range)
    c = float(config_manager.get('annulus_c') if c is None else c)
    curve = make_quadric('circle', interval=Interval(Fraction(eps), 1 - Fraction(eps)))
    notas, excluidos = [], []

    fuera = check_corridor(psi, n_range)
    if fuera:
        mensaje = f"ψ fuera del corredor q⁻¹(log q)⁻³ < ψ < q⁻¹(log q)⁻¹ en t={fuera}"
        logger.warning(mensaje)
        notas.append(mensaje)

    def bloque(t):
        raiz = math.sqrt(psi.eval(2 ** t))
        m_max = m_max_case_a(t, psi)
        parte_a, filas_m, fuera_m = 0.0, [], []
        for m in range(0, m_max + 1):
            Psi = c * 2 ** m * raiz
            if Psi >= 1:
                fuera_m.append({'t': t, 'm': m, 'Psi': Psi})
                continue
            N = annulus_r_sum(2 ** t - 1, 2 ** (t + 1) - 1, Psi)
            multiplicidad = 1 if m == 0 else 2
            parte_a += multiplicidad * N * 2.0 ** (-m) * raiz / 2 ** t
            filas_m.append({'m': m, 'N': N, 'Psi': Psi})
        parte_b = _bandas_por_bloque(curve, t) * case_b_strip_measure(t, psi)
        return t, parte_a, parte_b, filas_m, fuera_m

    caso_a, caso_b, terminos, detalle = {}, {}, {}, {}
    for t, a, b, filas_m, fuera_m in map_blocks(bloque, n_range):
        caso_a[t], caso_b[t] = a, b
        terminos[t] = a + b
        detalle[t] = filas_m
        for e in fuera_m:
            logger.warning(f"Par (t={e['t']}, m=±{e['m']}) excluido: Ψ={e['Psi']:.4g} ≥ 1")
            excluidos.append(e)
    return CoverTailReport('multiplicative', terminos, _colas(terminos),
                           {'case_a': caso_a, 'case_b': caso_b}, excluidos, notas,
                           {'psi': psi.to_text(), 'eps': str(Fraction(eps)), 'c': c,
                            'n_range': [n_range[0], n_range[-1]], 'annulus_counts': detalle})


def kleinbock_margulis_regime(v):
    """Predicción de medida para S*₂(v) sobre una curva no degenerada.

    Para v > 1 la serie Σ h^(−v) log h converge y el conjunto tiene medida
    nula; para v ≤ 1 el conjunto es todo el plano.
    """
    v = Fraction(v)
    if v <= 0:
        raise DomainError("v debe ser positivo")
    if v <= 1:
        return {'v': str(v), 'prediction': 'full', 'verdict': None,
                'notes': ["S*_2(v) is the whole plane for v <= 1"]}
    veredicto = classify_series([PowerLog(1, v)], log_weight=1, mode="closed-form")
    return {'v': str(v), 'prediction': 'zero' if veredicto.kind == 'converges' else 'undecided',
            'verdict': veredicto.to_dict(), 'notes': []}


def check_cover_consistency(cover: CoverTailReport, dichotomy: DichotomyReport, interval_length, slack=0.5):
    """Término del recubrimiento ≥ actividad × |I₀| × slack en los bloques comunes.

    Returns:
        list: Bloques t donde no se cumple
    """
    fallos = []
    for t, termino in cover.terms.items():
        try:
            actividad = dichotomy.activity_of(t)
        except KeyError:
            continue
        if termino < actividad * float(interval_length) * slack:
            fallos.append(t)
    return fallos
