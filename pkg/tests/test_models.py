import json
import math
import os
from fractions import Fraction

import numpy as np
import pytest

from diofanto.errors import StorageError
from diofanto.models import (RunManifest, csv_text, dumps, escribir_csv, escribir_json, formatear,
                             sha256_archivo)


def test_formatear():
    assert formatear(0.1) == '0.10000000000000001'
    assert formatear(3) == '3'
    assert formatear(np.int64(7)) == '7'
    assert formatear(math.inf) == 'inf'
    assert formatear(-math.inf) == '-inf'
    assert formatear(True) == 'true'


def test_dumps_ordena_claves_y_es_determinista():
    obj = {'b': [1, 0.5], 'a': Fraction(1, 3), 'c': {'z': None, 'y': math.inf}}
    texto = dumps(obj)
    assert texto == (
        '{\n'
        '  "a": "1/3",\n'
        '  "b": [\n'
        '    1,\n'
        '    0.5\n'
        '  ],\n'
        '  "c": {\n'
        '    "y": "inf",\n'
        '    "z": null\n'
        '  }\n'
        '}\n'
    )
    assert dumps(dict(reversed(list(obj.items())))) == texto


def test_dumps_usa_to_dict():
    class Registro:
        def to_dict(self):
            return {'valor': 2}

    assert dumps([Registro()]) == '[\n  {\n    "valor": 2\n  }\n]\n'
    with pytest.raises(StorageError):
        dumps(object())


def test_dumps_mantiene_17_cifras():
    texto = dumps({'x': 0.1, 'v': np.float64(1 / 3), 'n': np.int64(3), 'ok': np.bool_(True)})
    assert texto == (
        '{\n'
        '  "n": 3,\n'
        '  "ok": true,\n'
        '  "v": 0.33333333333333331,\n'
        '  "x": 0.10000000000000001\n'
        '}\n'
    )
    assert json.loads(texto)['x'] == 0.1
    assert dumps({'vacío': [], 'd': {}}) == '{\n  "d": {},\n  "vacío": []\n}\n'
    with pytest.raises(StorageError):
        dumps(['\ue000'])


def test_csv_text():
    assert csv_text(['t', 'x', 'etiqueta'], [[1, 0.25, 'a,b']]) == 't,x,etiqueta\n1,0.25,"a,b"\n'


def test_escritura_atomica(tmp_path):
    ruta = tmp_path / 'sub' / 'datos.json'
    escribir_json(str(ruta), {'x': 1})
    assert ruta.read_text(encoding='utf-8') == '{\n  "x": 1\n}\n'
    assert not os.path.exists(f"{ruta}.tmp")
    escribir_csv(str(tmp_path / 'datos.csv'), ['a'], [[1], [2]])
    assert (tmp_path / 'datos.csv').read_bytes() == b'a\n1\n2\n'


def test_sha256(tmp_path):
    ruta = tmp_path / 'vacio.txt'
    ruta.write_bytes(b'')
    assert sha256_archivo(str(ruta)) == 'e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855'
    with pytest.raises(StorageError):
        sha256_archivo(str(tmp_path / 'no-existe'))


def test_manifiesto_guardar_y_cargar(tmp_path):
    salida = tmp_path / 'tabla.csv'
    escribir_csv(str(salida), ['q'], [[1]])
    manifest = RunManifest('circle-rN', {'Qs': [32]}, 0, quick=True, wall_time=1.5)
    manifest.registrar(str(salida))
    ruta = manifest.guardar(str(tmp_path))
    assert os.path.basename(ruta) == RunManifest.NOMBRE_ARCHIVO

    cargado = RunManifest.cargar(str(tmp_path))
    assert cargado.to_dict() == manifest.to_dict()
    assert cargado.outputs == {'tabla.csv': sha256_archivo(str(salida))}


def test_manifiesto_ilegible(tmp_path):
    with pytest.raises(StorageError):
        RunManifest.cargar(str(tmp_path / 'manifest.json'))
    (tmp_path / 'roto.json').write_text('{"seed": 1}', encoding='utf-8')
    with pytest.raises(StorageError):
        RunManifest.cargar(str(tmp_path / 'roto.json'))
