"""
diofanto: laboratorio de aproximación diofántica métrica sobre curvas planas.
"""
import atexit
import logging
import os

from .models import __version__

logger = logging.getLogger(__name__)

_logging_configurado = False


def configurar_logging(nivel='INFO'):
    """Configura el logging raíz una sola vez (CLI y create_lab)."""
    global _logging_configurado
    nivel_num = getattr(logging, str(nivel).upper(), logging.INFO)
    if _logging_configurado:
        logging.getLogger().setLevel(nivel_num)
        return
    logging.basicConfig(level=nivel_num, format='%(asctime)s - %(levelname)s - %(message)s')
    _logging_configurado = True


def create_lab(threads=None, log_level=None, output_dir=None):
    """
    Factory que prepara el laboratorio: configuración, logging, directorio de
    resultados y pool de workers.

    Args:
        threads: Número de hilos (por defecto el configurado)
        log_level: Nivel de logging (por defecto el configurado)
        output_dir: Directorio base de resultados (por defecto el configurado)

    Returns:
        ConfigManager: La configuración efectiva
    """
    from .block_processor import block_processor
    from .config_manager import config_manager

    configurar_logging(log_level or config_manager.get('log_level'))

    if output_dir:
        config_manager.set('output_dir', output_dir, persist=False)
    if threads:
        config_manager.set('threads', max(1, int(threads)), persist=False)
    os.makedirs(config_manager.get('output_dir'), exist_ok=True)

    block_processor.start_workers(config_manager.get('threads'))
    atexit.register(block_processor.stop_workers)

    logger.debug(f"Laboratorio diofanto {__version__} listo ({config_manager.get('threads')} hilos)")
    return config_manager
