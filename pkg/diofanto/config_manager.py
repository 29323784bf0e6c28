import json
import logging
import os
from fractions import Fraction
from pathlib import Path
from threading import Lock

from dotenv import load_dotenv

from .errors import ConfigError, DiofantoError, DomainError

logger = logging.getLogger(__name__)

DEFAULTS = {
    'output_dir': 'resultados',
    'threads': os.cpu_count() or 1,
    'point_cap': 1000,
    'start_prec': 64,
    'max_prec_curve': 128,
    'max_prec_limsup': 1024,
    'verdict_full': 0.5,
    'verdict_zero': 0.2,
    'verdict_window': 4,
    'annulus_c': 4,
    'log_level': 'INFO'
}


class ConfigManager:
    _instance = None
    _lock = Lock()
    _config_file = os.path.join(Path.home(), '.diofanto_config.json')

    def __new__(cls):
        with cls._lock:
            if cls._instance is None:
                cls._instance = super(ConfigManager, cls).__new__(cls)
                cls._instance._load_config()
        return cls._instance

    @property
    def config_file(self):
        return os.environ.get('DIOFANTO_CONFIG', self._config_file)

    def _load_config(self):
        """Carga la configuración desde el archivo JSON y aplica las variables de entorno"""
        load_dotenv()
        self.config = dict(DEFAULTS)
        ruta = self.config_file
        if os.path.exists(ruta):
            try:
                with open(ruta, 'r', encoding='utf-8') as f:
                    guardada = json.load(f)
                self.config.update({k: v for k, v in guardada.items() if k in DEFAULTS})
            except (json.JSONDecodeError, IOError) as e:
                logger.warning(f"Configuración corrupta en {ruta}, se usan los valores por defecto: {e}")
        if os.environ.get('DIOFANTO_OUTPUT_DIR'):
            self.config['output_dir'] = os.environ['DIOFANTO_OUTPUT_DIR']
        if os.environ.get('DIOFANTO_THREADS'):
            try:
                self.config['threads'] = max(1, int(os.environ['DIOFANTO_THREADS']))
            except ValueError:
                logger.warning(f"DIOFANTO_THREADS no es un entero: {os.environ['DIOFANTO_THREADS']}")

    def _save_config(self):
        """Guarda la configuración en el archivo JSON"""
        ruta = self.config_file
        tmp = f"{ruta}.tmp"
        with open(tmp, 'w', encoding='utf-8') as f:
            json.dump(self.config, f, indent=2, sort_keys=True)
        os.replace(tmp, ruta)

    def reload(self):
        self._load_config()

    def get(self, key, default=None):
        return self.config.get(key, DEFAULTS.get(key, default))

    def set(self, key, value, persist=True):
        """Establece un valor conocido y opcionalmente lo guarda"""
        if key not in DEFAULTS:
            raise DomainError(f"clave de configuración desconocida: {key}")
        self.config[key] = value
        if persist:
            try:
                self._save_config()
            except OSError as e:
                logger.error(f"No se pudo guardar la configuración: {e}")
                return False
        return True

    def as_dict(self):
        return dict(self.config)


# ---------------------------------------------------------------------------
# Archivos de experimento "clave = valor"
# ---------------------------------------------------------------------------

def _entero(texto):
    try:
        return int(texto)
    except ValueError:
        raise DomainError(f"se esperaba un entero: {texto}")


def _racional(texto):
    try:
        return Fraction(texto)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"se esperaba un racional: {texto}")


def _opcion(*opciones):
    def interpretar(texto):
        if texto not in opciones:
            raise DomainError(f"valor '{texto}' no válido (opciones: {', '.join(opciones)})")
        return texto
    return interpretar


def _interpretes():
    from .approxfn import parse_approxfn
    from .curve import parse_curve, parse_interval
    from .limsup import parse_point
    from .ubiquity import parse_u

    return {
        'curve': parse_curve,
        'interval': parse_interval,
        'point': parse_point,
        'psi': parse_approxfn,
        'phi': parse_approxfn,
        'psi1': parse_approxfn,
        'psi2': parse_approxfn,
        'kind': _opcion('sim', 'mult', 'dual'),
        'u': parse_u,
        'Q': _entero,
        'Qmax': _entero,
        'A': _entero,
        'samples': _entero,
        'seed': _entero,
        't_min': _entero,
        't_max': _entero,
        'subintervals': _entero,
        'v': _racional,
        'v1': _racional,
        'v2': _racional,
        'eps': _racional,
        'tol': _racional,
        'Psi': _racional
    }


def parse_experiment_config(texto, required=('curve',)):
    """Interpreta un archivo de experimento de líneas `clave = valor`.

    Los errores se acumulan y se lanzan juntos; nunca se devuelve una
    configuración parcial.

    Args:
        texto: Contenido del archivo
        required: Claves obligatorias

    Returns:
        dict: Clave -> valor interpretado

    Raises:
        ConfigError: Con la lista de (línea, columna, mensaje)
    """
    from .approxfn import ParseError

    interpretes = _interpretes()
    valores, errores = {}, []
    for numero, linea in enumerate(texto.splitlines(), start=1):
        contenido = linea.split('#', 1)[0]
        if not contenido.strip():
            continue
        if '=' not in contenido:
            errores.append((numero, 1, "se esperaba 'clave = valor'"))
            continue
        clave, valor = contenido.split('=', 1)
        clave = clave.strip()
        columna = contenido.index('=') + 2 + (len(valor) - len(valor.lstrip()))
        valor = valor.strip()
        if clave not in interpretes:
            errores.append((numero, len(contenido) - len(contenido.lstrip()) + 1, f"clave desconocida: {clave}"))
            continue
        if clave in valores:
            errores.append((numero, 1, f"clave repetida: {clave}"))
            continue
        try:
            valores[clave] = interpretes[clave](valor)
        except ParseError as e:
            errores.append((numero, columna + e.columna - 1, e.mensaje))
        except DiofantoError as e:
            errores.append((numero, columna, str(e)))
    for clave in required:
        if clave not in valores and not any(f"clave: {clave}" in m for _, _, m in errores):
            errores.append((0, 0, f"falta la clave obligatoria: {clave}"))
    if errores:
        raise ConfigError(errores)
    return valores


def validate_config(path, required=('curve',)):
    """Lee y valida un archivo de experimento.

    Returns:
        dict: Configuración interpretada
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            texto = f.read()
    except OSError as e:
        from .errors import StorageError
        raise StorageError(f"no se pudo leer {path}: {e}")
    return parse_experiment_config(texto, required)


# Instancia global para ser importada
config_manager = ConfigManager()
