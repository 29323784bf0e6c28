#!/usr/bin/env python3
"""
Script para re-ejecutar los manifiestos de resultados y comprobar que las
salidas se reproducen byte a byte.

Uso:
    python3 verificar_manifiestos.py [directorio_de_resultados]
"""
import glob
import os
import sys

from diofanto import create_lab
from diofanto.errors import DiofantoError
from diofanto.models import RunManifest
from diofanto.presets import verify_manifest


def main(argv):
    config = create_lab()
    base = argv[1] if len(argv) > 1 else config.get('output_dir')
    manifiestos = sorted(glob.glob(os.path.join(base, '*', RunManifest.NOMBRE_ARCHIVO)))
    if not manifiestos:
        print(f"No hay manifiestos en {base}")
        return 0

    fallos = 0
    for ruta in manifiestos:
        try:
            resultado = verify_manifest(ruta)
        except DiofantoError as e:
            print(f"Error al verificar {ruta}: {e}")
            fallos += 1
            continue
        if resultado['success']:
            print(f"OK      {resultado['preset']} (semilla {resultado['seed']})")
        else:
            fallos += 1
            print(f"DISTINTO {resultado['preset']}: {', '.join(resultado['mismatches'] + resultado['missing'])}")
    print(f"{len(manifiestos) - fallos}/{len(manifiestos)} manifiestos reproducidos")
    return 1 if fallos else 0


if __name__ == '__main__':
    sys.exit(main(sys.argv))
