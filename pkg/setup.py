from setuptools import find_packages, setup


def leer_requisitos(ruta='requirements.txt'):
    """Requisitos de ejecución (sin la sección de desarrollo)."""
    requisitos = []
    with open(ruta, encoding='utf-8') as f:
        for linea in f:
            linea = linea.strip()
            if linea.startswith('# Para desarrollo'):
                break
            if linea and not linea.startswith('#'):
                requisitos.append(linea)
    return requisitos


setup(
    name='diofanto',
    version='1.0.0',
    description='Laboratorio de aproximación diofántica métrica sobre curvas planas',
    packages=find_packages(exclude=('tests',)),
    package_data={'diofanto': ['presets.json']},
    python_requires='>=3.8',
    install_requires=leer_requisitos(),
    entry_points={
        'console_scripts': [
            'diofanto=diofanto.cli:main',
        ],
    },
)
