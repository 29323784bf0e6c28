#!/usr/bin/env python3
"""
Script de instalación del laboratorio diofanto

Prepara el entorno virtual, instala las dependencias y crea el directorio
de resultados.
"""

import os
import platform
import subprocess
import sys
import venv


def run_command(cmd, cwd=None):
    """
    Ejecuta un comando en la terminal.

    Args:
        cmd: Puede ser un string con el comando o una lista de argumentos
        cwd: Directorio de trabajo
    """
    if isinstance(cmd, str):
        cmd = cmd.split()

    try:
        print(f"Ejecutando: {' '.join(cmd)}")
        result = subprocess.run(
            cmd,
            check=True,
            cwd=cwd,
            text=True,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE
        )
        if result.stdout:
            print(result.stdout)
        return result.stdout
    except subprocess.CalledProcessError as e:
        print(f"Error al ejecutar el comando: {' '.join(cmd)}")
        if e.stdout:
            print(f"Salida:\n{e.stdout}")
        if e.stderr:
            print(f"Error:\n{e.stderr}")
        return None


def setup_python_environment(venv_dir="venv"):
    """Configura el entorno virtual de Python"""
    print("\n=== Configurando entorno virtual de Python ===")

    if not os.path.exists(venv_dir):
        print(f"Creando entorno virtual en {venv_dir}")
        venv.create(venv_dir, with_pip=True)

    if platform.system() == "Windows":
        pip_path = os.path.join(venv_dir, "Scripts", "pip")
    else:
        pip_path = os.path.join(venv_dir, "bin", "pip")

    print("Instalando dependencias de Python...")
    if run_command(f"{pip_path} install --upgrade pip") is None:
        return False
    if run_command(f"{pip_path} install -r requirements.txt") is None:
        return False
    return run_command(f"{pip_path} install -e .") is not None


def setup_directories():
    """Crea el directorio de resultados"""
    print("\n=== Creando estructura de directorios ===")
    directorio = os.environ.get('DIOFANTO_OUTPUT_DIR', 'resultados')
    try:
        os.makedirs(directorio, exist_ok=True)
        print(f"Directorio creado: {directorio}")
    except OSError as e:
        print(f"Advertencia: No se pudo crear el directorio {directorio}: {e}")


def set_permissions():
    """Marca como ejecutables los scripts auxiliares"""
    for f in ["verificar_manifiestos.py", "verificar_manifiestos.sh"]:
        if os.path.exists(f):
            os.chmod(f, 0o755)


def main():
    """Función principal"""
    print("=== Instalación de diofanto ===")
    os.chdir(os.path.dirname(os.path.abspath(__file__)))

    if sys.version_info < (3, 8):
        print("Se necesita Python 3.8 o superior")
        sys.exit(1)

    if not setup_python_environment():
        print("La instalación de dependencias falló")
        sys.exit(1)
    setup_directories()
    set_permissions()

    print("\n=== Instalación completada ===")
    print("Active el entorno con: source venv/bin/activate")
    print("Pruebe con: diofanto preset list")


if __name__ == '__main__':
    main()
