import json
import os
from fractions import Fraction

import pytest
from click.testing import CliRunner

from diofanto.approxfn import PowerLog
from diofanto.cli import cli
from diofanto.curve import parse_curve
from diofanto.models import __version__
from diofanto.ratpoints import count_near_curve


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def _json(resultado):
    assert resultado.exit_code == 0, resultado.stderr
    return json.loads(resultado.stdout)


def test_version(runner):
    resultado = runner.invoke(cli, ['--version'])
    assert __version__ in resultado.stdout


def test_r2(runner):
    salida = _json(runner.invoke(cli, ['r2', '--n', '25']))
    assert salida['r'] == 12
    assert salida['factors'] == {'5': 2}
    salida = _json(runner.invoke(cli, ['r2', '--check', '1000']))
    assert salida['check']['mismatch_count'] == 0


def test_r2_sin_argumentos(runner):
    resultado = runner.invoke(cli, ['r2'])
    assert resultado.exit_code == 2
    assert 'indique --n o --check' in resultado.stderr


def test_corona(runner):
    salida = _json(runner.invoke(cli, ['annulus', '--Q', '32', '--Psi', '1/10', '--lattice']))
    assert salida['equal'] is True
    assert salida['Psi'] == '1/10'


def test_corona_fuera_de_dominio(runner):
    resultado = runner.invoke(cli, ['annulus', '--Q', '32', '--Psi', 'uno'])
    assert resultado.exit_code == 2
    assert 'Error: se esperaba un racional' in resultado.stderr


def test_formula_de_dimension(runner):
    salida = _json(runner.invoke(cli, ['dim-formula', '--which', 't4', '--args', '3,1/2']))
    assert salida['value'] == pytest.approx(0.375)
    salida = _json(runner.invoke(cli, ['dim-formula', '--which', 'rynne', '--args', '1,1']))
    assert salida['value'] == pytest.approx(1.5)


def test_series(runner):
    assert _json(runner.invoke(cli, ['series', '--psi', 'h^-2']))['kind'] == 'converges'
    salida = _json(runner.invoke(cli, ['series', '--psi', 'h^-1/2', '--psi', 'h^-1/2']))
    assert salida['kind'] == 'diverges'


def test_count_points_coincide_con_la_api(runner, tmp_path):
    ruta = tmp_path / 'recuento.json'
    resultado = runner.invoke(cli, ['count-points', '--curve', 'parabola', '--psi', 'h^-1/2',
                                    '--Q', '64', '--json', str(ruta)])
    assert resultado.exit_code == 0, resultado.stderr
    with open(ruta, encoding='utf-8') as f:
        salida = json.load(f)
    esperado = count_near_curve(parse_curve('parabola'), PowerLog(1, Fraction(1, 2)), 64)
    assert salida['count'] == esperado.count


def test_validate_config_con_errores(runner, tmp_path):
    ruta = tmp_path / 'exp.cfg'
    ruta.write_text('curve = parabola\npsi = h^+2\n', encoding='utf-8')
    resultado = runner.invoke(cli, ['validate-config', str(ruta)])
    assert resultado.exit_code == 2
    assert f"{ruta}:2:7: " in resultado.stderr
    assert 'viola el invariante decreciente' in resultado.stderr


def test_validate_config_valido(runner, tmp_path):
    ruta = tmp_path / 'exp.cfg'
    ruta.write_text('curve = parabola\nQ = 128\n', encoding='utf-8')
    salida = _json(runner.invoke(cli, ['validate-config', str(ruta)]))
    assert salida['success'] is True
    assert salida['config']['Q'] == 128


def test_preset_desconocido(runner):
    resultado = runner.invoke(cli, ['preset', 'run', 'thm9'])
    assert resultado.exit_code == 2
    assert 'preset desconocido: thm9' in resultado.stderr


def test_preset_list(runner):
    resultado = runner.invoke(cli, ['preset', 'list'])
    assert resultado.exit_code == 0
    assert len(resultado.stdout.strip().splitlines()) == 9
    assert resultado.stdout.startswith('circle-rN')


def test_preset_run_y_verify(runner, tmp_path):
    resultado = runner.invoke(cli, ['--out', str(tmp_path), '--threads', '2',
                                    'preset', 'run', 'dual-oracle-demo', '--quick'])
    assert resultado.exit_code == 0, resultado.stderr
    directorio = tmp_path / 'dual-oracle-demo-s0-quick'
    assert f"Preset dual-oracle-demo escrito en {directorio}" in resultado.stdout
    assert 'file,sha256' in resultado.stdout

    salida = _json(runner.invoke(cli, ['preset', 'verify', str(directorio / 'manifest.json')]))
    assert salida['success'] is True


def test_preset_verify_sin_manifiesto(runner, tmp_path):
    resultado = runner.invoke(cli, ['preset', 'verify', os.path.join(str(tmp_path), 'nada')])
    assert resultado.exit_code == 4
