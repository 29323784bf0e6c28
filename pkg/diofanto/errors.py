"""
Excepciones del laboratorio.

Cada excepción lleva el código de salida que la CLI devuelve al sistema:
0 éxito, 2 precondición o hipótesis no cumplida, 3 ambigüedad de frontera
sin resolver, 4 error de entrada/salida.
"""


class DiofantoError(Exception):
    """Error base del laboratorio."""

    exit_code = 1

    def to_dict(self):
        """Convierte el error a un diccionario serializable."""
        return {
            'success': False,
            'error': str(self),
            'tipo': type(self).__name__,
            'exit_code': self.exit_code
        }


class DomainError(DiofantoError, ValueError):
    """Argumento fuera del dominio de la operación."""

    exit_code = 2


class HypothesisError(DiofantoError):
    """Las hipótesis del resultado que se quiere comprobar no se cumplen."""

    exit_code = 2


class AmbiguityError(DiofantoError):
    """Una comparación certificada no se pudo decidir tras refinar.

    Args:
        mensaje: Descripción del problema
        items: Puntos o valores que quedaron ambiguos
    """

    exit_code = 3

    def __init__(self, mensaje, items=None):
        super().__init__(mensaje)
        self.items = list(items or [])

    def to_dict(self):
        data = super().to_dict()
        data['items'] = [str(item) for item in self.items]
        return data


class ConfigError(DiofantoError):
    """Errores de un archivo de configuración, con línea y columna.

    Args:
        errores: Lista de tuplas (linea, columna, mensaje)
    """

    exit_code = 2

    def __init__(self, errores):
        self.errores = list(errores)
        lineas = [f"línea {lin}, columna {col}: {msg}" for lin, col, msg in self.errores]
        super().__init__("\n".join(lineas) or "configuración inválida")

    def to_dict(self):
        data = super().to_dict()
        data['errores'] = [
            {'linea': lin, 'columna': col, 'mensaje': msg} for lin, col, msg in self.errores
        ]
        return data


class PresetError(DiofantoError):
    """Preset desconocido o mal definido."""

    exit_code = 2


class StorageError(DiofantoError):
    """Fallo al leer o escribir resultados."""

    exit_code = 4
