"""
Presets de experimentos reproducibles.

Cada preset de presets.json nombra una operación, sus parámetros completos,
los tamaños reducidos de --quick, la semilla y el valor esperado. Las
salidas se escriben en <output_dir>/<preset>-s<semilla>[-quick]/ junto con
un manifiesto con los digests SHA-256 de cada archivo.
"""
import json
import logging
import os
import tempfile
import time
from fractions import Fraction

import numpy as np

from .approxfn import PowerLog, parse_approxfn, parse_many
from .config_manager import config_manager
from .curve import parse_curve, parse_interval
from .dimension import (box_count_dimension, cover_sum_exponent, dim_formula, dim_theorem7_lower,
                        lower_bound_configuration, mult_exponent_split)
from .errors import DomainError, PresetError, StorageError
from .limsup import dual_solutions, exponent_estimate, parse_point
from .measure import (certify_annulus_constant, check_cover_consistency, dichotomy_experiment,
                      kleinbock_margulis_regime, multiplicative_cover_tail, simultaneous_cover_tail)
from .models import RunManifest, escribir_csv, escribir_json
from .ratpoints import (count_circle_annulus, fit_count_band, huxley_ratio_scan, lattice_annulus_count,
                        r_formula_table, r_two_squares_table, reconcile_arc, scaling_slope)
from .ubiquity import build_system, covering_fractions, predict_lemma1

logger = logging.getLogger(__name__)

PRESETS_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'presets.json')


def load_presets(ruta=None):
    """Carga el archivo de presets.

    Returns:
        dict: {'version': int, 'presets': {nombre: definición}}
    """
    ruta = ruta or PRESETS_FILE
    try:
        with open(ruta, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise StorageError(f"no se pudo leer {ruta}: {e}")
    except json.JSONDecodeError as e:
        raise PresetError(f"presets mal formados en {ruta}: {e}")
    for nombre, preset in data.get('presets', {}).items():
        faltan = [k for k in ('op', 'params', 'seed') if k not in preset]
        if faltan:
            raise PresetError(f"el preset {nombre} no define: {', '.join(faltan)}")
        if preset['op'] not in RUNNERS:
            raise PresetError(f"el preset {nombre} usa una operación desconocida: {preset['op']}")
    return data


def list_presets():
    """Nombre, operación y descripción de cada preset."""
    data = load_presets()
    return [
        {'name': nombre, 'op': p['op'], 'description': p.get('description', ''), 'seed': p['seed']}
        for nombre, p in sorted(data['presets'].items())
    ]


def get_preset(name, data=None):
    data = data or load_presets()
    if name not in data['presets']:
        disponibles = ', '.join(sorted(data['presets']))
        raise PresetError(f"preset desconocido: {name}. Disponibles: {disponibles}")
    return data['presets'][name]


def effective_parameters(preset, quick=False):
    """Parámetros del preset con los tamaños reducidos aplicados si quick."""
    params = dict(preset['params'])
    if quick:
        params.update(preset.get('quick', {}))
    return params


def preset_directory(name, seed, quick=False, output_dir=None):
    base = output_dir or config_manager.get('output_dir')
    return os.path.join(base, f"{name}-s{seed}{'-quick' if quick else ''}")


def _rango(par):
    return range(int(par[0]), int(par[1]) + 1)


def _json(directorio, nombre, obj):
    ruta = os.path.join(directorio, nombre)
    escribir_json(ruta, obj)
    return ruta


def _csv(directorio, nombre, header, rows):
    ruta = os.path.join(directorio, nombre)
    escribir_csv(ruta, header, rows)
    return ruta


# ---------------------------------------------------------------------------
# Operaciones de los presets: (parámetros, semilla, directorio) -> (archivos, resumen)
# ---------------------------------------------------------------------------

def _run_dichotomy(params, seed, directorio):
    curve = parse_curve(params['curve'])
    report = dichotomy_experiment(curve, parse_many(params['psis']), params['kind'],
                                  int(params['samples']), int(params['Q_max']), seed)
    archivos = [
        _json(directorio, 'dichotomy.json', report),
        _csv(directorio, 'dichotomy.csv', ['t', 'activity'], report.csv_rows())
    ]
    return archivos, {'verdict': report.verdict, 'cumulative': report.cumulative}, report


def _check_verdict(resumen, expected):
    return resumen['verdict'] == expected['verdict']


def _run_dichotomy_cover(params, seed, directorio):
    archivos, resumen, dicotomia = _run_dichotomy(params, seed, directorio)
    curve = parse_curve(params['curve'])
    psi_x, psi_y = parse_many(params['psis'])
    cover = simultaneous_cover_tail(curve, psi_y, psi_x, _rango(params['n_range']))
    fallos = check_cover_consistency(cover, dicotomia, curve.interval.length)
    archivos.append(_json(directorio, 'cover_tail.json', cover))
    archivos.append(_csv(directorio, 'cover_tail.csv', ['t', 'term', 'tail', 'count'], cover.csv_rows()))
    resumen.update({
        'tails_non_increasing': cover.tails_non_increasing,
        'consistency_failures': fallos
    })
    return archivos, resumen, None


def _check_verdict_cover(resumen, expected):
    return _check_verdict(resumen, expected) and resumen['tails_non_increasing'] and not resumen['consistency_failures']


def _run_mult_tail(params, seed, directorio):
    eps = Fraction(params['eps'])
    cover = multiplicative_cover_tail(parse_approxfn(params['psi']), _rango(params['n_range']), eps)
    certificado = certify_annulus_constant(eps)
    archivos = [
        _json(directorio, 'mult_tail.json', {
            'cover': cover,
            'annulus_certificate': certificado,
            'regime_v2': kleinbock_margulis_regime(2)
        }),
        _csv(directorio, 'mult_tail.csv', ['t', 'term', 'tail', 'case_a', 'case_b'], cover.csv_rows())
    ]
    resumen = {
        'tails_non_increasing': cover.tails_non_increasing,
        'annulus_constant_certified': certificado['certified'],
        'excluded_pairs': len(cover.excluded),
        'notes': list(cover.notes)
    }
    return archivos, resumen, None


def _check_mult_tail(resumen, expected):
    return resumen['tails_non_increasing'] == expected['tails_non_increasing'] and resumen['annulus_constant_certified']


def _run_cover_sum(params, seed, directorio):
    curve = parse_curve(params['curve'])
    estimaciones, filas, desvios = [], [], []
    for (v1, v2), tolerancia in zip(params['pairs'], params['tolerances']):
        est = cover_sum_exponent(curve, Fraction(v1), Fraction(v2), int(params['Q']), float(params['tol']))
        estimaciones.append(est)
        desvio = abs(est.value - est.predicted)
        desvios.append({'v1': v1, 'v2': v2, 'value': est.value, 'predicted': est.predicted,
                        'deviation': desvio, 'within_tolerance': desvio <= float(tolerancia)})
        filas.append([float(Fraction(v1)), float(Fraction(v2)), est.value, est.predicted,
                      est.diagnostics['bracket_width']])
    archivos = [
        _json(directorio, 'cover_sum.json', estimaciones),
        _csv(directorio, 'cover_sum.csv', ['v1', 'v2', 'value', 'predicted', 'bracket_width'], filas)
    ]
    return archivos, {'estimates': desvios}, None


def _check_cover_sum(resumen, expected):
    return all(e['within_tolerance'] for e in resumen['estimates'])


def _run_mult_dimension(params, seed, directorio):
    formulas = [dim_formula('t6', Fraction(v)) for v in params['vs']]
    familia = mult_exponent_split(*(Fraction(x) for x in params['split']))
    curve = parse_curve(params['curve'])
    escalas = [2.0 ** -int(e) for e in params['scale_exponents']]
    try:
        caja = box_count_dimension(curve, 'mult', int(params['Q']), escalas, (Fraction(params['box_v']),))
        caja_resumen = {'value': caja.value, 'predicted': caja.predicted, 'low_confidence': caja.low_confidence}
    except DomainError as e:
        logger.warning(f"Conteo de cajas no disponible: {e}")
        caja = {'error': str(e)}
        caja_resumen = dict(caja)
    archivos = [
        _json(directorio, 'mult_dimension.json', {'formulas': formulas, 'split': familia, 'box_count': caja}),
        _csv(directorio, 'mult_dimension.csv', ['v', 'dimension'],
             [[float(Fraction(v)), f.value] for v, f in zip(params['vs'], formulas)])
    ]
    resumen = {
        'formulas': [f.diagnostics['exact'] for f in formulas],
        'split_sums_ok': familia.sums_ok,
        'split_bound_ok': familia.bound_ok,
        'box_count': caja_resumen
    }
    return archivos, resumen, None


def _check_mult_dimension(resumen, expected):
    return resumen['formulas'] == expected['values'] and resumen['split_sums_ok'] and resumen['split_bound_ok']


def _run_huxley(params, seed, directorio):
    curve = parse_curve(params['curve'])
    interval = parse_interval(params['interval']) if params.get('interval') else None
    filas, resultados = [], []
    for tau in params['taus']:
        tau_q = Fraction(tau)
        psi = PowerLog(1, tau_q)
        escaneo = huxley_ratio_scan(curve, psi, _rango(params['t_range']), interval)
        pendiente = scaling_slope(escaneo)
        banda = fit_count_band([(2 ** f['t'], f['N'], psi.eval(2 ** f['t'])) for f in escaneo])
        esperada = float(2 - tau_q)
        resultados.append({
            'tau': tau,
            'slope': pendiente,
            'expected': esperada,
            'within_slack': abs(pendiente - esperada) <= float(params['slack']),
            'band': banda,
            'scan': escaneo
        })
        filas.extend([float(tau_q), f['t'], f['N'], f['ratio']] for f in escaneo)
    archivos = [
        _json(directorio, 'huxley.json', resultados),
        _csv(directorio, 'huxley.csv', ['tau', 't', 'N', 'ratio'], filas)
    ]
    resumen = {'slopes': [{k: r[k] for k in ('tau', 'slope', 'expected', 'within_slack')} for r in resultados]}
    return archivos, resumen, None


def _check_huxley(resumen, expected):
    return all(r['within_slack'] for r in resumen['slopes'])


def _run_circle(params, seed, directorio):
    filas, diferencias = [], 0
    for Q in params['Qs']:
        for Psi in params['Psis']:
            corona = count_circle_annulus(int(Q), Fraction(Psi))
            red = lattice_annulus_count(int(Q), Fraction(Psi))
            diferencias += corona != red
            filas.append([int(Q), float(Fraction(Psi)), corona, red, int(corona == red)])
    N = int(params['r_max'])
    por_formula, por_red = r_formula_table(N), r_two_squares_table(N)
    # r(0) = 1 en ambas tablas
    distintos = np.nonzero(por_formula[1:] != por_red[1:])[0] + 1
    intervalo = parse_interval(params['arc_interval'])
    arcos = [reconcile_arc(int(params['arc_Q']), Fraction(Psi), intervalo) for Psi in params['Psis']]
    discrepancias_arco = sum(len(a['only_annulus']) + len(a['only_direct']) for a in arcos)
    archivos = [
        _csv(directorio, 'circle_annulus.csv', ['Q', 'Psi', 'annulus', 'lattice', 'equal'], filas),
        _json(directorio, 'circle.json', {
            'annulus_mismatches': int(diferencias),
            'r_max': N,
            'r_mismatches': [int(n) for n in distintos[:20]],
            'r_mismatch_count': int(len(distintos)),
            'arcs': arcos
        })
    ]
    resumen = {'mismatches': int(diferencias) + int(len(distintos)) + discrepancias_arco}
    return archivos, resumen, None


def _check_circle(resumen, expected):
    return resumen['mismatches'] == expected['mismatches']


def _run_ubiquity(params, seed, directorio):
    curve = parse_curve(params['curve'])
    rango = _rango(params['t_range'])
    sistema = build_system(curve, parse_approxfn(params['psi']), params['u'], t_max=rango[-1])
    report = covering_fractions(sistema, rango, int(params['subintervals']))
    cota = lower_bound_configuration(*(Fraction(x) for x in params['lower_bound']))
    lema1 = predict_lemma1(cota['rho'], cota['Psi'])
    archivos = [
        _json(directorio, 'ubiquity.json', {
            'report': report,
            'lower_bound': {
                'rho': cota['rho'].to_text(),
                'Psi': cota['Psi'].to_text(),
                'prediction': cota['prediction'],
                'expected': cota['expected'],
                'theorem4': cota['theorem4'],
                'series': lema1.kind
            }
        }),
        _csv(directorio, 'ubiquity.csv', ['t', 'interval', 'fraction'], report.csv_rows())
    ]
    resumen = {
        'kappa_hat': report.kappa_hat,
        'worst': report.worst,
        'lower_bound_prediction': cota['prediction'].to_dict(),
        'lower_bound_expected': str(cota['expected'])
    }
    return archivos, resumen, None


def _check_ubiquity(resumen, expected):
    return resumen['kappa_hat'] >= float(expected['kappa_min'])


def _run_dual(params, seed, directorio):
    psi = parse_approxfn(params['psi'])
    registros, filas = [], []
    for indice, texto in enumerate(params['points']):
        y = parse_point(texto)
        record = dual_solutions(y, psi, int(params['A']))
        exponente = exponent_estimate(y, 'dual', int(params['Q']))
        registros.append({'record': record, 'exponent': exponente})
        filas.append([indice, len(record.solutions), exponente.value, exponente.raw_record])
    cota = dim_theorem7_lower(1, Fraction(params['v']))
    archivos = [
        _json(directorio, 'dual.json', {'points': registros, 'theorem7_lower': cota}),
        _csv(directorio, 'dual.csv', ['point', 'solutions', 'exponent', 'raw_record'], filas)
    ]
    return archivos, {'theorem7_lower': str(cota), 'solutions': [f[1] for f in filas]}, None


def _check_dual(resumen, expected):
    return resumen['theorem7_lower'] == expected['theorem7_lower']


RUNNERS = {
    'dichotomy': (_run_dichotomy, _check_verdict),
    'dichotomy-cover': (_run_dichotomy_cover, _check_verdict_cover),
    'mult-cover-tail': (_run_mult_tail, _check_mult_tail),
    'cover-sum': (_run_cover_sum, _check_cover_sum),
    'mult-dimension': (_run_mult_dimension, _check_mult_dimension),
    'huxley-scan': (_run_huxley, _check_huxley),
    'circle-oracles': (_run_circle, _check_circle),
    'ubiquity': (_run_ubiquity, _check_ubiquity),
    'dual-demo': (_run_dual, _check_dual)
}


# ---------------------------------------------------------------------------
# Ejecución y verificación
# ---------------------------------------------------------------------------

def run_preset(name, seed=None, quick=False, output_dir=None, parameters=None) -> RunManifest:
    """Ejecuta un preset y escribe sus salidas y el manifiesto.

    Args:
        name: Nombre del preset
        seed: Semilla (por defecto la del preset)
        quick: Usa los tamaños reducidos
        output_dir: Directorio base (por defecto el configurado)
        parameters: Parámetros explícitos (los de un manifiesto a reproducir)

    Returns:
        RunManifest: Manifiesto guardado en el directorio del preset

    Raises:
        PresetError: Si el preset no existe
    """
    data = load_presets()
    preset = get_preset(name, data)
    seed = int(preset['seed'] if seed is None else seed)
    params = dict(parameters) if parameters is not None else effective_parameters(preset, quick)
    directorio = preset_directory(name, seed, quick, output_dir)
    try:
        os.makedirs(directorio, exist_ok=True)
    except OSError as e:
        raise StorageError(f"no se pudo crear {directorio}: {e}")

    logger.info(f"Ejecutando preset {name} (semilla {seed}{', quick' if quick else ''}) en {directorio}")
    inicio = time.perf_counter()
    ejecutar, comprobar = RUNNERS[preset['op']]
    archivos, resumen, _ = ejecutar(params, seed, directorio)
    expected = preset.get('expected')
    resumen = dict(resumen, preset=name, expected=expected)
    if expected:
        resumen['matches_expected'] = bool(comprobar(resumen, expected))
        if not resumen['matches_expected']:
            logger.warning(f"El preset {name} no coincide con el valor esperado")
    archivos.append(_json(directorio, 'summary.json', resumen))

    manifest = RunManifest(name, params, seed, quick, wall_time=time.perf_counter() - inicio,
                           preset_version=data.get('version', 1))
    for ruta in archivos:
        manifest.registrar(ruta)
    manifest.guardar(directorio)
    logger.info(f"Preset {name} completado en {manifest.wall_time:.1f} s")
    return manifest


def verify_manifest(path):
    """Re-ejecuta un manifiesto en un directorio temporal y compara los digests.

    Returns:
        dict: {'success': bool, 'preset': ..., 'mismatches': [...], 'missing': [...]}
    """
    original = RunManifest.cargar(path)
    version = load_presets().get('version', 1)
    notas = []
    if original.preset_version != version:
        mensaje = f"versión de presets distinta: manifiesto {original.preset_version}, actual {version}"
        logger.warning(mensaje)
        notas.append(mensaje)
    with tempfile.TemporaryDirectory() as tmp:
        nuevo = run_preset(original.preset, original.seed, original.quick, tmp, original.parameters)
    distintos = sorted(k for k in original.outputs if k in nuevo.outputs and original.outputs[k] != nuevo.outputs[k])
    faltan = sorted(set(original.outputs) ^ set(nuevo.outputs))
    exito = not distintos and not faltan
    if exito:
        logger.info(f"Manifiesto {original.preset} reproducido byte a byte")
    else:
        logger.error(f"Manifiesto {original.preset} no reproducido: {distintos + faltan}")
    return {
        'success': exito,
        'preset': original.preset,
        'seed': original.seed,
        'mismatches': distintos,
        'missing': faltan,
        'notes': notas
    }
