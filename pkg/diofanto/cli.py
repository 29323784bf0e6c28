"""
Línea de órdenes del laboratorio.

Cada subcomando imprime un registro JSON en la salida estándar (o lo escribe
con --json) y, cuando produce series, un CSV con --csv. Los errores del
laboratorio se escriben en stderr y terminan con su código de salida.
"""
import functools
import logging
import math
import sys
from fractions import Fraction

import click

from . import create_lab
from .errors import DiofantoError, DomainError
from .models import __version__, csv_text, dumps, escribir_csv, escribir_json

logger = logging.getLogger(__name__)


def _comando(func):
    """Convierte DiofantoError en mensaje por stderr y código de salida."""
    @functools.wraps(func)
    def envoltura(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DiofantoError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(e.exit_code)
    return envoltura


def _emitir(obj, json_path=None):
    if json_path:
        escribir_json(json_path, obj)
        click.echo(f"Escrito {json_path}")
    else:
        click.echo(dumps(obj), nl=False)


def _emitir_csv(csv_path, header, rows):
    if csv_path:
        escribir_csv(csv_path, header, rows)
        click.echo(f"Escrito {csv_path}", err=True)


def _fraccion(texto):
    try:
        return Fraction(texto)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"se esperaba un racional: {texto}")


def _lista(texto):
    return [_fraccion(p) for p in texto.split(',') if p.strip()]


def _curva(texto, intervalo=None):
    from .curve import parse_curve, parse_interval
    return parse_curve(texto, parse_interval(intervalo) if intervalo else None)


def _psi(texto):
    from .approxfn import parse_approxfn
    return parse_approxfn(texto)


@click.group()
@click.version_option(__version__, prog_name='diofanto')
@click.option('--threads', type=int, default=None, help='Hilos del pool (por defecto los núcleos disponibles)')
@click.option('--log-level', default=None, help='Nivel de logging (DEBUG, INFO, WARNING, ...)')
@click.option('--out', 'output_dir', default=None, help='Directorio base de resultados')
@click.pass_context
def cli(ctx, threads, log_level, output_dir):
    """Laboratorio de aproximación diofántica métrica sobre curvas planas."""
    ctx.ensure_object(dict)
    ctx.obj['config'] = create_lab(threads, log_level, output_dir)


# ---------------------------------------------------------------------------
# ratpoints
# ---------------------------------------------------------------------------

@cli.command('count-points')
@click.option('--curve', required=True)
@click.option('--psi', required=True)
@click.option('--Q', 'Q', type=int, required=True)
@click.option('--interval', default=None)
@click.option('--mode', type=click.Choice(['canonical', 'multiplicity']), default='canonical')
@click.option('--threshold', type=click.Choice(['frozen', 'per-q']), default='frozen')
@click.option('--emit-points', type=int, default=None)
@click.option('--json', 'json_path', default=None)
@_comando
def count_points(curve, psi, Q, interval, mode, threshold, emit_points, json_path):
    """Cuenta N_f(Q, ψ, I)."""
    from .curve import parse_interval
    from .ratpoints import count_near_curve

    report = count_near_curve(_curva(curve), _psi(psi), Q, parse_interval(interval) if interval else None,
                              mode, threshold, emit_points)
    _emitir(report, json_path)


@cli.command('r2')
@click.option('--n', 'n', type=int, default=None, help='Calcula r(n)')
@click.option('--method', type=click.Choice(['formula', 'enumeration']), default='formula')
@click.option('--check', 'check', type=int, default=None, help='Compara ambas tablas hasta N')
@_comando
def r2(n, method, check):
    """Representaciones como suma de dos cuadrados."""
    from .ratpoints import factorise, r_formula_table, r_two_squares, r_two_squares_table

    if n is None and check is None:
        raise DomainError("indique --n o --check")
    salida = {}
    if n is not None:
        salida.update({'n': n, 'r': r_two_squares(n, method), 'method': method,
                       'factors': {str(p): e for p, e in factorise(n).items()}})
    if check is not None:
        distintos = (r_formula_table(check) != r_two_squares_table(check)).nonzero()[0]
        salida['check'] = {'N': check, 'mismatches': [int(k) for k in distintos[:20]],
                           'mismatch_count': int(len(distintos))}
    _emitir(salida)


@cli.command('annulus')
@click.option('--Q', 'Q', type=int, required=True)
@click.option('--Psi', 'Psi', required=True)
@click.option('--lattice/--no-lattice', default=False, help='Compara con el oráculo de la red')
@click.option('--sharpened', 'sharpened', default=None, help='ψ para la comprobación de la cota afinada')
@_comando
def annulus(Q, Psi, lattice, sharpened):
    """Σ r(n) sobre las coronas de q ∈ (Q, 2Q]."""
    from .ratpoints import count_circle_annulus, lattice_annulus_count, sharpened_circle_check

    Psi = _fraccion(Psi)
    salida = {'Q': Q, 'Psi': Psi, 'count': count_circle_annulus(Q, Psi)}
    if lattice:
        salida['lattice'] = lattice_annulus_count(Q, Psi)
        salida['equal'] = salida['lattice'] == salida['count']
    if sharpened:
        salida['sharpened'] = sharpened_circle_check(Q, _psi(sharpened))
    _emitir(salida)


@cli.command('huxley-scan')
@click.option('--curve', required=True)
@click.option('--psi', required=True)
@click.option('--tmin', type=int, default=8)
@click.option('--tmax', type=int, default=12)
@click.option('--interval', default=None)
@click.option('--csv', 'csv_path', default=None)
@_comando
def huxley_scan(curve, psi, tmin, tmax, interval, csv_path):
    """Recuentos N_f(2ᵗ) y pendiente de log₂ N frente a t."""
    from .curve import parse_interval
    from .ratpoints import huxley_ratio_scan, scaling_slope

    filas = huxley_ratio_scan(_curva(curve), _psi(psi), range(tmin, tmax + 1),
                              parse_interval(interval) if interval else None)
    _emitir_csv(csv_path, ['t', 'N', 'ratio'], [[f['t'], f['N'], f['ratio']] for f in filas])
    _emitir({'rows': filas, 'slope': scaling_slope(filas)})


# ---------------------------------------------------------------------------
# limsup
# ---------------------------------------------------------------------------

@cli.command('membership')
@click.option('--point', required=True)
@click.option('--kind', type=click.Choice(['sim', 'mult', 'dual']), required=True)
@click.option('--psi', multiple=True, required=True, help='Una por coordenada en el caso sim')
@click.option('--Q', 'Q', type=int, required=True, help='Truncamiento (A en el caso dual)')
@click.option('--json', 'json_path', default=None)
@_comando
def membership(point, kind, psi, Q, json_path):
    """Soluciones truncadas de S_n, S*_n o L*_n."""
    from .approxfn import parse_many
    from .limsup import dual_solutions, multiplicative_solutions, parse_point, simultaneous_solutions

    y = parse_point(point)
    funciones = parse_many(list(psi))
    if kind == 'sim':
        if len(funciones) == 1:
            funciones = funciones * y.n
        record = simultaneous_solutions(y, funciones, Q)
    elif kind == 'mult':
        record = multiplicative_solutions(y, funciones[0], Q)
    else:
        record = dual_solutions(y, funciones[0], Q)
    _emitir(record, json_path)


@cli.command('inclusion')
@click.option('--pair', 'kind_pair', type=click.Choice(['sim-mult', 'sim-mult-exponents']), required=True)
@click.option('--psi', multiple=True, help='ψ₁, ψ₂ del conjunto simultáneo')
@click.option('--psi-mult', default=None, help='ψ del conjunto multiplicativo')
@click.option('--v1', default=None)
@click.option('--v2', default=None)
@click.option('--v', default=None)
@click.option('--samples', type=int, default=100)
@click.option('--Q', 'Q', type=int, default=256)
@click.option('--seed', type=int, default=0)
@_comando
def inclusion(kind_pair, psi, psi_mult, v1, v2, v, samples, Q, seed):
    """Comprueba S₂(ψ₁, ψ₂) ⊆ S*₂(ψ) sobre puntos aleatorios."""
    from .approxfn import parse_many
    from .limsup import inclusion_check

    if kind_pair == 'sim-mult':
        if len(psi) != 2 or not psi_mult:
            raise DomainError("sim-mult necesita dos --psi y --psi-mult")
        parametros = {'psis': parse_many(list(psi)), 'psi': _psi(psi_mult)}
    else:
        if None in (v1, v2, v):
            raise DomainError("sim-mult-exponents necesita --v1, --v2 y --v")
        parametros = {'v1': v1, 'v2': v2, 'v': v}
    resultado = inclusion_check(kind_pair, parametros, samples, Q, seed)
    _emitir(resultado)
    if resultado['status'] == 'failure':
        sys.exit(1)


@cli.command('exponent')
@click.option('--point', required=True)
@click.option('--kind', type=click.Choice(['simultaneous-diagonal', 'multiplicative', 'dual']), required=True)
@click.option('--Q', 'Q', type=int, required=True)
@_comando
def exponent(point, kind, Q):
    """Exponente empírico de aproximación (con el récord bruto)."""
    from .limsup import exponent_estimate, parse_point

    _emitir(exponent_estimate(parse_point(point), kind, Q))


# ---------------------------------------------------------------------------
# measure
# ---------------------------------------------------------------------------

@cli.command('dichotomy')
@click.option('--curve', required=True)
@click.option('--kind', type=click.Choice(['sim', 'mult']), default='sim')
@click.option('--psi', required=True, help='ψ de la coordenada y (o ψ multiplicativa)')
@click.option('--phi', default=None, help='ψ de la coordenada x (por defecto igual a --psi)')
@click.option('--samples', type=int, default=500)
@click.option('--Qmax', 'Q_max', type=int, default=2 ** 12)
@click.option('--seed', type=int, default=42)
@click.option('--csv', 'csv_path', default=None)
@click.option('--json', 'json_path', default=None)
@_comando
def dichotomy(curve, kind, psi, phi, samples, Q_max, seed, csv_path, json_path):
    """Experimento Monte Carlo de la ley cero-completo."""
    from .measure import dichotomy_experiment

    psi_y = _psi(psi)
    psis = [_psi(phi) if phi else psi_y, psi_y] if kind == 'sim' else [psi_y]
    report = dichotomy_experiment(_curva(curve), psis, kind, samples, Q_max, seed)
    _emitir_csv(csv_path, ['t', 'activity'], report.csv_rows())
    _emitir(report, json_path)


@cli.command('cover-tail')
@click.option('--kind', type=click.Choice(['sim', 'mult']), required=True)
@click.option('--curve', default='circle')
@click.option('--psi', required=True)
@click.option('--phi', default=None)
@click.option('--tmin', type=int, default=4)
@click.option('--tmax', type=int, default=12)
@click.option('--eps', default='1/10', help='Arco (ε, 1 − ε) del caso multiplicativo')
@click.option('--c', 'c', default=None, help='Constante de la corona')
@click.option('--csv', 'csv_path', default=None)
@_comando
def cover_tail(kind, curve, psi, phi, tmin, tmax, eps, c, csv_path):
    """Términos por bloque y colas de los recubrimientos."""
    from .measure import certify_annulus_constant, multiplicative_cover_tail, simultaneous_cover_tail

    rango = range(tmin, tmax + 1)
    if kind == 'sim':
        psi_y = _psi(psi)
        report = simultaneous_cover_tail(_curva(curve), psi_y, _psi(phi) if phi else psi_y, rango)
        header = ['t', 'term', 'tail', 'count']
        salida = report
    else:
        constante = _fraccion(c) if c else None
        report = multiplicative_cover_tail(_psi(psi), rango, _fraccion(eps), constante)
        header = ['t', 'term', 'tail', 'case_a', 'case_b']
        salida = {'cover': report, 'annulus_certificate': certify_annulus_constant(_fraccion(eps), constante)}
    _emitir_csv(csv_path, header, report.csv_rows())
    _emitir(salida)


# ---------------------------------------------------------------------------
# dimension
# ---------------------------------------------------------------------------

@cli.command('dim-formula')
@click.option('--which', type=click.Choice(['t4', 't6', 't6-order', 'rynne', 'bd', 't5', 't7']), required=True)
@click.option('--args', 'argumentos', required=True, help='Argumentos separados por comas, p. ej. 3,1/2')
@_comando
def dim_formula_cmd(which, argumentos):
    """Fórmulas cerradas de dimensión."""
    from .dimension import dim_formula

    valores = _lista(argumentos)
    if which == 'rynne':
        _emitir(dim_formula(which, valores))
    else:
        _emitir(dim_formula(which, *valores))


@cli.command('dim-estimate')
@click.option('--method', type=click.Choice(['cover', 'box']), required=True)
@click.option('--curve', default='parabola')
@click.option('--kind', type=click.Choice(['sim', 'mult']), default='sim')
@click.option('--v1', default='1')
@click.option('--v2', default='1')
@click.option('--v', default=None, help='Exponente multiplicativo (box, kind=mult)')
@click.option('--Q', 'Q', type=int, default=2 ** 12)
@click.option('--tol', type=float, default=0.01)
@click.option('--scale-exp', 'scale_exp', multiple=True, type=int, help='Escalas δ = 2^(−e)')
@_comando
def dim_estimate(method, curve, kind, v1, v2, v, Q, tol, scale_exp):
    """Estimación numérica de dimensión (sumas de recubrimiento o cajas)."""
    from .dimension import box_count_dimension, cover_sum_exponent

    c = _curva(curve)
    if method == 'cover':
        _emitir(cover_sum_exponent(c, _fraccion(v1), _fraccion(v2), Q, tol))
        return
    params = (_fraccion(v),) if kind == 'mult' else (_fraccion(v1), _fraccion(v2))
    if kind == 'mult' and v is None:
        raise DomainError("kind=mult necesita --v")
    exponentes = list(scale_exp)
    if not exponentes:
        # una escala por nivel diádico t = 3..log₂ Q
        exponentes = [round(t * (1 + float(params[0]))) for t in range(3, int(math.log2(Q)) + 1)]
    _emitir(box_count_dimension(c, kind, Q, [2.0 ** -e for e in exponentes], params))


@cli.command('split')
@click.option('--v', required=True)
@click.option('--eps', required=True)
@click.option('--points', 'num_points', type=int, default=0, help='Puntos aleatorios para la comprobación empírica')
@click.option('--Q', 'Q', type=int, default=256)
@click.option('--seed', type=int, default=0)
@_comando
def split(v, eps, num_points, Q, seed):
    """Descomposición de S*₂(v) en conjuntos simultáneos."""
    from .dimension import mult_exponent_split
    from .limsup import random_points, split_coverage_check

    salida = {'family': mult_exponent_split(_fraccion(v), _fraccion(eps))}
    if num_points:
        salida['coverage'] = split_coverage_check(_fraccion(v), _fraccion(eps),
                                                  random_points(num_points, seed), Q)
    _emitir(salida)


# ---------------------------------------------------------------------------
# ubiquity
# ---------------------------------------------------------------------------

@cli.command('ubiquity')
@click.option('--curve', default='parabola')
@click.option('--psi', required=True)
@click.option('--u', 'u', default='log', help='log o pow:eps')
@click.option('--tmin', type=int, default=10)
@click.option('--tmax', type=int, default=14)
@click.option('--subintervals', type=int, default=4)
@click.option('--interval', default=None)
@click.option('--csv', 'csv_path', default=None)
@_comando
def ubiquity(curve, psi, u, tmin, tmax, subintervals, interval, csv_path):
    """Fracciones de cobertura del sistema de abscisas resonantes."""
    from .curve import parse_interval
    from .ubiquity import build_system, covering_fractions

    sistema = build_system(_curva(curve), _psi(psi), u, tmax, parse_interval(interval) if interval else None)
    report = covering_fractions(sistema, range(tmin, tmax + 1), subintervals)
    _emitir_csv(csv_path, ['t', 'interval', 'fraction'], report.csv_rows())
    _emitir(report)


# ---------------------------------------------------------------------------
# approxfn
# ---------------------------------------------------------------------------

@cli.command('series')
@click.option('--psi', multiple=True, required=True, help='Factores del término')
@click.option('--log-weight', type=int, default=0)
@click.option('--mode', type=click.Choice(['auto', 'closed-form', 'numeric-trend']), default='auto')
@click.option('--law', type=click.Choice(['plain', 'khintchine', 'gallagher']), default='plain')
@click.option('--n', 'n', type=int, default=2, help='Dimensión para gallagher')
@_comando
def series(psi, log_weight, mode, law, n):
    """Convergencia de Σ ∏ψᵢ(h)·(log h)^w."""
    from .approxfn import classify_series, gallagher_classify, khintchine_classify, parse_many

    funciones = parse_many(list(psi))
    if law == 'khintchine':
        veredicto = khintchine_classify(funciones, mode=mode)
    elif law == 'gallagher':
        veredicto = gallagher_classify(funciones[0], n, mode=mode)
    else:
        veredicto = classify_series(funciones, log_weight, mode)
    _emitir(veredicto)


# ---------------------------------------------------------------------------
# Configuración y presets
# ---------------------------------------------------------------------------

@cli.command('validate-config')
@click.argument('path')
@click.option('--require', multiple=True, help='Claves obligatorias (por defecto curve)')
@_comando
def validate_config_cmd(path, require):
    """Valida un archivo de experimento `clave = valor`."""
    from .config_manager import validate_config
    from .errors import ConfigError

    try:
        valores = validate_config(path, tuple(require) or ('curve',))
    except ConfigError as e:
        for linea, columna, mensaje in e.errores:
            click.echo(f"{path}:{linea}:{columna}: {mensaje}", err=True)
        sys.exit(e.exit_code)
    _emitir({'success': True, 'config': {k: (v.to_text() if hasattr(v, 'to_text') else v)
                                         for k, v in valores.items()}})


@cli.group()
def preset():
    """Experimentos predefinidos y reproducibles."""


@preset.command('list')
@_comando
def preset_list():
    from .presets import list_presets

    filas = list_presets()
    for p in filas:
        click.echo(f"{p['name']:<20} {p['op']:<16} {p['description']}")


@preset.command('run')
@click.argument('name')
@click.option('--seed', type=int, default=None)
@click.option('--quick', is_flag=True, default=False, help='Tamaños reducidos')
@_comando
def preset_run(name, seed, quick):
    """Ejecuta un preset y escribe sus salidas y el manifiesto."""
    from .presets import preset_directory, run_preset

    manifest = run_preset(name, seed, quick)
    directorio = preset_directory(name, manifest.seed, quick)
    click.echo(f"Preset {name} escrito en {directorio}")
    click.echo(csv_text(['file', 'sha256'], sorted(manifest.outputs.items())), nl=False)


@preset.command('verify')
@click.argument('manifest_path')
@_comando
def preset_verify(manifest_path):
    """Re-ejecuta un manifiesto y compara los digests."""
    from .presets import verify_manifest

    resultado = verify_manifest(manifest_path)
    _emitir(resultado)
    if not resultado['success']:
        sys.exit(1)


def main():
    cli(obj={})


if __name__ == '__main__':
    main()
