import threading

import pytest

from diofanto.block_processor import bloques_de_rango, ejecutar_bloque, map_blocks
from diofanto.errors import DiofantoError, DomainError


def _suma(bloque):
    inicio, fin = bloque
    return sum(range(inicio, fin + 1))


def _falla_en_tres(bloque):
    if bloque == 3:
        raise DomainError("bloque tres")
    return bloque


def test_bloques_de_rango():
    assert bloques_de_rango(1, 10, 4) == [(1, 4), (5, 8), (9, 10)]
    assert bloques_de_rango(5, 5, 100) == [(5, 5)]
    assert bloques_de_rango(3, 2, 4) == []


def test_ejecutar_bloque():
    assert ejecutar_bloque(lambda b: b * 2, 21) == {'success': True, 'result': 42}
    resultado = ejecutar_bloque(_falla_en_tres, 3)
    assert resultado['success'] is False
    assert resultado['error'] == 'bloque tres'
    assert isinstance(resultado['exception'], DomainError)


def test_map_blocks_sin_workers_es_secuencial():
    bloques = bloques_de_rango(1, 100, 7)
    assert sum(map_blocks(_suma, bloques)) == 5050


def test_map_blocks_conserva_el_orden(pool):
    bloques = list(range(40))
    assert map_blocks(lambda b: b * b, bloques) == [b * b for b in bloques]
    assert pool.get_worker_count() == 4


def test_map_blocks_usa_los_workers(pool):
    nombres = map_blocks(lambda _: threading.current_thread().name, range(8))
    assert all(n.startswith('BlockWorker') for n in nombres)


def test_map_blocks_propaga_el_primer_error(pool):
    with pytest.raises(DomainError, match='bloque tres'):
        map_blocks(_falla_en_tres, range(6))


def test_map_blocks_envuelve_excepciones_ajenas(pool):
    def rompe(bloque):
        raise KeyError(bloque)

    with pytest.raises(DiofantoError, match='el bloque 0 falló'):
        map_blocks(rompe, range(3))


def test_tareas_sueltas(pool):
    ids = [pool.submit_task(ejecutar_bloque, _suma, b) for b in [(1, 3), (4, 6)]]
    assert all(pool.get_task_status(t) is not None for t in ids)
    resultados = pool.wait_tasks(ids)
    assert [r['result'] for r in resultados] == [6, 15]
    assert pool.get_task_status(ids[0]) is None


def test_start_workers_dos_veces_no_duplica(pool):
    pool.start_workers(2)
    assert pool.get_worker_count() == 4
    pool.stop_workers()
    assert pool.get_worker_count() == 0
