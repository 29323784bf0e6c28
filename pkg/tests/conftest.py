import os
import tempfile

import pytest

# La configuración global se crea al importar el paquete: que no lea ~/.diofanto_config.json
_CONFIG_TMP = tempfile.mkdtemp(prefix='diofanto-test-')
os.environ['DIOFANTO_CONFIG'] = os.path.join(_CONFIG_TMP, 'config.json')
os.environ.pop('DIOFANTO_OUTPUT_DIR', None)
os.environ.pop('DIOFANTO_THREADS', None)

from diofanto.block_processor import block_processor  # noqa: E402
from diofanto.config_manager import config_manager  # noqa: E402
from diofanto.curve import parse_curve  # noqa: E402


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='ejecuta las comprobaciones a escala de aceptación')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow') or os.environ.get('DIOFANTO_SLOW') == '1':
        return
    saltar = pytest.mark.skip(reason='necesita --runslow o DIOFANTO_SLOW=1')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(saltar)


@pytest.fixture(autouse=True)
def configuracion_limpia(tmp_path, monkeypatch):
    """Cada prueba parte de los valores por defecto y escribe en tmp_path."""
    monkeypatch.setenv('DIOFANTO_CONFIG', str(tmp_path / 'config.json'))
    config_manager.reload()
    config_manager.set('output_dir', str(tmp_path / 'resultados'), persist=False)
    yield
    block_processor.stop_workers()
    config_manager.reload()


@pytest.fixture
def parabola():
    return parse_curve('parabola')


@pytest.fixture
def circle():
    return parse_curve('circle')


@pytest.fixture
def pool():
    """Pool de 4 hilos activo durante la prueba."""
    block_processor.start_workers(4)
    yield block_processor
    block_processor.stop_workers()
