import json
import os

import pytest

from diofanto.errors import PresetError, StorageError
from diofanto.models import RunManifest
from diofanto.presets import (RUNNERS, effective_parameters, get_preset, list_presets,
                              load_presets, preset_directory, run_preset, verify_manifest)

NOMBRES = ['circle-rN', 'dual-oracle-demo', 'huxley-scan', 'thm1-divergence', 'thm2-dichotomy',
           'thm3-mult-tail', 'thm4-dim', 'thm6-dim', 'ubiquity-parabola']


def _resumen(directorio):
    with open(os.path.join(directorio, 'summary.json'), encoding='utf-8') as f:
        return json.load(f)


def test_lista_de_presets():
    presets = list_presets()
    assert [p['name'] for p in presets] == NOMBRES
    assert all(p['op'] in RUNNERS for p in presets)


def test_preset_desconocido():
    with pytest.raises(PresetError, match='Disponibles: circle-rN'):
        get_preset('thm9')
    with pytest.raises(PresetError):
        run_preset('thm9')


def test_presets_mal_definidos(tmp_path):
    ruta = tmp_path / 'presets.json'
    ruta.write_text('{"presets": {"x": {"op": "magia", "params": {}, "seed": 0}}}', encoding='utf-8')
    with pytest.raises(PresetError, match='operación desconocida'):
        load_presets(str(ruta))
    ruta.write_text('{"presets": {"x": {"op": "dual-demo"}}}', encoding='utf-8')
    with pytest.raises(PresetError, match='params, seed'):
        load_presets(str(ruta))
    with pytest.raises(StorageError):
        load_presets(str(tmp_path / 'no-existe.json'))


def test_parametros_reducidos():
    preset = get_preset('circle-rN')
    assert effective_parameters(preset)['Qs'] == [32, 64, 128, 256]
    reducidos = effective_parameters(preset, quick=True)
    assert reducidos['Qs'] == [32, 64]
    assert reducidos['Psis'] == ['1/10', '3/10']


def test_directorio_del_preset(tmp_path):
    assert preset_directory('thm4-dim', 3, output_dir=str(tmp_path)) == str(tmp_path / 'thm4-dim-s3')
    assert preset_directory('thm4-dim', 3, True, str(tmp_path)).endswith('thm4-dim-s3-quick')


def test_preset_dual_rapido(tmp_path):
    manifest = run_preset('dual-oracle-demo', quick=True, output_dir=str(tmp_path))
    directorio = tmp_path / 'dual-oracle-demo-s0-quick'
    assert sorted(manifest.outputs) == ['dual.csv', 'dual.json', 'summary.json']
    assert os.path.exists(directorio / RunManifest.NOMBRE_ARCHIVO)
    resumen = _resumen(directorio)
    assert resumen['matches_expected'] is True
    assert resumen['theorem7_lower'] == '2/3'
    assert manifest.parameters['A'] == 16


def test_preset_en_el_directorio_configurado(tmp_path):
    manifest = run_preset('dual-oracle-demo', seed=5, quick=True)
    assert manifest.seed == 5
    assert os.path.isdir(tmp_path / 'resultados' / 'dual-oracle-demo-s5-quick')


def test_preset_circulo_sin_discrepancias(tmp_path):
    run_preset('circle-rN', quick=True, output_dir=str(tmp_path))
    resumen = _resumen(tmp_path / 'circle-rN-s0-quick')
    assert resumen['mismatches'] == 0
    assert resumen['matches_expected'] is True


def test_verificar_manifiesto(tmp_path):
    run_preset('dual-oracle-demo', quick=True, output_dir=str(tmp_path))
    directorio = str(tmp_path / 'dual-oracle-demo-s0-quick')
    resultado = verify_manifest(directorio)
    assert resultado['success'] is True
    assert resultado['mismatches'] == [] and resultado['missing'] == []


def test_verificar_manifiesto_alterado(tmp_path):
    run_preset('dual-oracle-demo', quick=True, output_dir=str(tmp_path))
    directorio = str(tmp_path / 'dual-oracle-demo-s0-quick')
    manifest = RunManifest.cargar(directorio)
    manifest.outputs['dual.csv'] = '0' * 64
    manifest.outputs['extra.csv'] = '0' * 64
    manifest.guardar(directorio)
    resultado = verify_manifest(directorio)
    assert resultado['success'] is False
    assert resultado['mismatches'] == ['dual.csv']
    assert resultado['missing'] == ['extra.csv']


def test_preset_no_depende_de_los_hilos(tmp_path, pool):
    con_hilos = run_preset('circle-rN', quick=True, output_dir=str(tmp_path / 'a'))
    pool.stop_workers()
    sin_hilos = run_preset('circle-rN', quick=True, output_dir=str(tmp_path / 'b'))
    assert con_hilos.outputs == sin_hilos.outputs


@pytest.mark.slow
@pytest.mark.parametrize('nombre', NOMBRES)
def test_todos_los_presets_rapidos(tmp_path, nombre):
    manifest = run_preset(nombre, quick=True, output_dir=str(tmp_path))
    assert 'summary.json' in manifest.outputs
    assert verify_manifest(preset_directory(nombre, manifest.seed, True, str(tmp_path)))['success']
