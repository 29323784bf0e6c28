import json
import os
from fractions import Fraction

import pytest

from diofanto.config_manager import (DEFAULTS, ConfigManager, config_manager,
                                     parse_experiment_config, validate_config)
from diofanto.errors import ConfigError, DomainError, StorageError

EXPERIMENTO = """
# dicotomía en la parábola
curve = parabola
psi = h^-1/2   # ψ de la coordenada y
Q = 256
v1 = 1/2
kind = sim
"""


def test_singleton():
    assert ConfigManager() is config_manager


def test_valores_por_defecto():
    assert config_manager.get('annulus_c') == 4
    assert config_manager.get('verdict_window') == DEFAULTS['verdict_window']
    assert config_manager.get('no_existe', 'x') == 'x'


def test_set_persiste_en_json(tmp_path):
    assert config_manager.set('point_cap', 50)
    with open(tmp_path / 'config.json', encoding='utf-8') as f:
        assert json.load(f)['point_cap'] == 50
    assert not os.path.exists(tmp_path / 'config.json.tmp')
    config_manager.reload()
    assert config_manager.get('point_cap') == 50


def test_set_sin_persistir(tmp_path):
    config_manager.set('point_cap', 7, persist=False)
    assert config_manager.get('point_cap') == 7
    assert not os.path.exists(tmp_path / 'config.json')


def test_clave_desconocida():
    with pytest.raises(DomainError):
        config_manager.set('color', 'rojo')


def test_variables_de_entorno(monkeypatch, tmp_path):
    monkeypatch.setenv('DIOFANTO_THREADS', '3')
    monkeypatch.setenv('DIOFANTO_OUTPUT_DIR', str(tmp_path / 'otro'))
    config_manager.reload()
    assert config_manager.get('threads') == 3
    assert config_manager.get('output_dir') == str(tmp_path / 'otro')
    monkeypatch.setenv('DIOFANTO_THREADS', 'muchos')
    config_manager.reload()
    assert config_manager.get('threads') == DEFAULTS['threads']


def test_configuracion_corrupta_usa_valores_por_defecto(tmp_path):
    (tmp_path / 'config.json').write_text('{ no es json', encoding='utf-8')
    config_manager.reload()
    assert config_manager.as_dict()['point_cap'] == DEFAULTS['point_cap']


def test_experimento_valido():
    valores = parse_experiment_config(EXPERIMENTO)
    assert valores['Q'] == 256
    assert valores['v1'] == Fraction(1, 2)
    assert valores['kind'] == 'sim'
    assert valores['psi'].eval(4) == pytest.approx(0.5)
    assert valores['curve'].exact_f(Fraction(1, 3)) == Fraction(1, 9)


def test_experimento_con_psi_creciente_da_columna():
    with pytest.raises(ConfigError) as info:
        parse_experiment_config('curve = parabola\npsi = h^+2\n')
    [(linea, columna, mensaje)] = info.value.errores
    assert (linea, columna) == (2, 7)
    assert 'viola el invariante decreciente' in mensaje
    assert 'línea 2, columna 7' in str(info.value)


def test_experimento_acumula_errores():
    with pytest.raises(ConfigError) as info:
        parse_experiment_config('color = rojo\nQ = abc\nsin igual\n')
    errores = info.value.errores
    assert (1, 1, 'clave desconocida: color') in errores
    assert (2, 5, 'se esperaba un entero: abc') in errores
    assert (3, 1, "se esperaba 'clave = valor'") in errores
    assert (0, 0, 'falta la clave obligatoria: curve') in errores
    assert info.value.exit_code == 2


def test_experimento_clave_repetida():
    with pytest.raises(ConfigError) as info:
        parse_experiment_config('curve = parabola\ncurve = circle\n')
    assert info.value.errores == [(2, 1, 'clave repetida: curve')]


def test_validate_config(tmp_path):
    ruta = tmp_path / 'exp.cfg'
    ruta.write_text(EXPERIMENTO, encoding='utf-8')
    assert validate_config(str(ruta), required=('curve', 'Q'))['Q'] == 256
    with pytest.raises(ConfigError, match='falta la clave obligatoria: seed'):
        validate_config(str(ruta), required=('seed',))
    with pytest.raises(StorageError):
        validate_config(str(tmp_path / 'no-existe.cfg'))
