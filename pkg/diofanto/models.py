import csv
import hashlib
import io
import json
import math
import os
import re
from datetime import datetime
from fractions import Fraction

import numpy as np

from .errors import StorageError

__version__ = '1.0.0'


def formatear(x):
    """Número con 17 cifras significativas; infinitos como 'inf'/'-inf'."""
    if isinstance(x, (bool, np.bool_)):
        return 'true' if x else 'false'
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return 'nan'
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return format(x, '.17g')


# marca de los reales finitos ya formateados, que json.dumps escribiría como cadena
_MARCA = '\ue000'
_RE_MARCA = re.compile('"' + _MARCA + '([^"]*)"')


def _cadena(texto):
    if _MARCA in texto:
        raise StorageError(f"carácter reservado U+E000 en {texto!r}")
    return texto


def _nativo(obj):
    """Convierte obj a tipos de json; los reales finitos quedan marcados con su texto '.17g'."""
    if obj is None:
        return None
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        texto = formatear(obj)
        return texto if texto in ('inf', '-inf', 'nan') else _MARCA + texto
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, str):
        return _cadena(obj)
    if hasattr(obj, 'to_dict'):
        return _nativo(obj.to_dict())
    if isinstance(obj, dict):
        return {_cadena(str(k)): _nativo(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_nativo(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return _nativo(sorted(obj))
    raise StorageError(f"tipo no serializable: {type(obj).__name__}")


def dumps(obj):
    """JSON con claves ordenadas, sangría 2 y números en formato '.17g'."""
    texto = json.dumps(_nativo(obj), indent=2, sort_keys=True, ensure_ascii=False)
    return _RE_MARCA.sub(r'\1', texto) + '\n'


def csv_text(header, rows):
    """CSV con cabecera, separador coma y fin de línea LF."""
    salida = io.StringIO()
    escritor = csv.writer(salida, lineterminator='\n')
    escritor.writerow(header)
    for fila in rows:
        escritor.writerow([v if isinstance(v, str) else formatear(v) for v in fila])
    return salida.getvalue()


def _escribir_atomico(ruta, texto):
    """Escribe en ruta.tmp y reemplaza el archivo de forma atómica."""
    temp_file = f"{ruta}.tmp"
    try:
        os.makedirs(os.path.dirname(os.path.abspath(ruta)), exist_ok=True)
        with open(temp_file, 'w', encoding='utf-8', newline='\n') as f:
            f.write(texto)
        os.replace(temp_file, ruta)
    except OSError as e:
        if os.path.exists(temp_file):
            try:
                os.remove(temp_file)
            except OSError:
                pass
        raise StorageError(f"no se pudo escribir {ruta}: {e}")


def escribir_json(ruta, obj):
    _escribir_atomico(ruta, dumps(obj))


def escribir_csv(ruta, header, rows):
    _escribir_atomico(ruta, csv_text(header, rows))


def sha256_archivo(ruta):
    h = hashlib.sha256()
    try:
        with open(ruta, 'rb') as f:
            for bloque in iter(lambda: f.read(1 << 16), b''):
                h.update(bloque)
    except OSError as e:
        raise StorageError(f"no se pudo leer {ruta}: {e}")
    return h.hexdigest()


class RunManifest:
    """Registro reproducible de una ejecución de preset."""

    NOMBRE_ARCHIVO = 'manifest.json'

    def __init__(self, preset, parameters, seed, quick=False, outputs=None, wall_time=0.0,
                 version=__version__, preset_version=1, fecha=None):
        self.version = version
        self.preset = preset
        self.preset_version = preset_version
        self.parameters = parameters
        self.seed = seed
        self.quick = quick
        self.outputs = outputs if outputs is not None else {}
        self.wall_time = wall_time
        self.fecha = fecha or datetime.now().isoformat()

    def registrar(self, ruta):
        """Añade el digest SHA-256 de un archivo de salida."""
        self.outputs[os.path.basename(ruta)] = sha256_archivo(ruta)

    def to_dict(self):
        """Convierte el manifiesto a un diccionario."""
        return {
            'version': self.version,
            'preset': self.preset,
            'preset_version': self.preset_version,
            'parameters': self.parameters,
            'seed': self.seed,
            'quick': self.quick,
            'outputs': self.outputs,
            'wall_time': self.wall_time,
            'fecha': self.fecha
        }

    @classmethod
    def from_dict(cls, data):
        """Crea un manifiesto a partir de un diccionario."""
        return cls(
            preset=data['preset'],
            parameters=data.get('parameters', {}),
            seed=data.get('seed', 0),
            quick=data.get('quick', False),
            outputs=data.get('outputs', {}),
            wall_time=data.get('wall_time', 0.0),
            version=data.get('version', __version__),
            preset_version=data.get('preset_version', 1),
            fecha=data.get('fecha')
        )

    def guardar(self, directorio):
        ruta = os.path.join(directorio, self.NOMBRE_ARCHIVO)
        escribir_json(ruta, self.to_dict())
        return ruta

    @classmethod
    def cargar(cls, ruta):
        """Carga un manifiesto desde un archivo o un directorio de resultados."""
        if os.path.isdir(ruta):
            ruta = os.path.join(ruta, cls.NOMBRE_ARCHIVO)
        try:
            with open(ruta, 'r', encoding='utf-8') as f:
                return cls.from_dict(json.load(f))
        except (OSError, json.JSONDecodeError, KeyError) as e:
            raise StorageError(f"manifiesto ilegible {ruta}: {e}")
