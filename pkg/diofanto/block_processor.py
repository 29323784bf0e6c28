import logging
import threading
import time
from datetime import datetime
from queue import Empty, Queue
from threading import Condition, Lock, Thread

from .errors import DiofantoError

logger = logging.getLogger(__name__)

PREFIJO_WORKER = 'BlockWorker'


def ejecutar_bloque(func, bloque):
    """Ejecuta func(bloque) y devuelve el resultado en el formato de tarea.

    Args:
        func: Función a aplicar al bloque
        bloque: Argumento del bloque (rango de q, lote de puntos, ...)

    Returns:
        dict: {'success': True, 'result': ...} o {'success': False, 'error': ..., 'exception': ...}
    """
    try:
        return {'success': True, 'result': func(bloque)}
    except DiofantoError as e:
        return {'success': False, 'error': str(e), 'exception': e}


class BlockProcessor:
    """Pool de hilos que procesa bloques independientes (rangos de q, lotes de muestras).

    Los resultados se combinan siempre en el orden de los bloques, de modo que
    la salida no depende del número de hilos.
    """

    _instance = None
    _lock = Lock()

    def __new__(cls):
        with cls._lock:
            if cls._instance is None:
                cls._instance = super(BlockProcessor, cls).__new__(cls)
                cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if getattr(self, '_initialized', False):
            return

        self._initialized = True
        self.task_queue = Queue()
        self.active_tasks = {}
        self.completed_tasks = {}
        self.queued_tasks = {}
        self._stop_event = False
        self.workers = []
        self.worker_count = 0
        self.task_count = 0
        self.lock = Lock()
        self._terminada = Condition(self.lock)

    def start_workers(self, num_workers=None):
        """Inicia los workers del pool.

        Args:
            num_workers: Número de hilos. Si es None se usa 1.
        """
        with self.lock:
            if self.workers:
                logger.warning("Los workers ya están en ejecución")
                return

            if num_workers is None:
                num_workers = 1

            self._stop_event = False
            self.workers = []

            for _ in range(int(num_workers)):
                self.worker_count += 1
                worker = Thread(
                    target=self._worker_loop,
                    daemon=True,
                    name=f'{PREFIJO_WORKER}-{self.worker_count}'
                )
                worker.start()
                self.workers.append(worker)

            logger.info(f"Iniciados {num_workers} workers de bloques")

    def _worker_loop(self):
        """Bucle principal del worker que procesa tareas de la cola."""
        while not self._stop_event:
            try:
                try:
                    task = self.task_queue.get(timeout=1)
                except Empty:
                    continue

                if task is None:
                    break

                task_id, task_func, args, kwargs = task

                with self.lock:
                    task_info = self.queued_tasks.pop(task_id, {})
                    task_info.update({'start_time': datetime.now(), 'status': 'processing'})
                    self.active_tasks[task_id] = task_info

                try:
                    result = task_func(*args, **kwargs)
                    estado = 'completed' if result.get('success') else 'failed'
                    if estado == 'failed':
                        logger.error(f"La tarea {task_id} falló: {result.get('error', 'error desconocido')}")
                except Exception as e:
                    mensaje = f"Excepción inesperada en la tarea {task_id}: {str(e)}"
                    logger.error(mensaje, exc_info=True)
                    result = {'success': False, 'error': mensaje, 'exception': e}
                    estado = 'failed'
                finally:
                    self.task_queue.task_done()

                with self.lock:
                    info = self.active_tasks.pop(task_id, task_info)
                    info.update({
                        'end_time': datetime.now(),
                        'status': estado,
                        'result': result
                    })
                    if estado == 'failed':
                        info['error'] = result.get('error')
                    self.completed_tasks[task_id] = info
                    self._terminada.notify_all()

            except Exception as e:
                if not self._stop_event:
                    logger.error(f"Error inesperado en el bucle del worker: {str(e)}", exc_info=True)
                    time.sleep(1)

    def submit_task(self, task_func, *args, **kwargs):
        """Envía una tarea a la cola.

        Args:
            task_func: Función que devuelve un diccionario {'success': ...}
            *args, **kwargs: Argumentos para la función

        Returns:
            str: ID de la tarea
        """
        with self.lock:
            self.task_count += 1
            task_id = f"task_{self.task_count}"
            self.queued_tasks[task_id] = {'submit_time': datetime.now()}
        self.task_queue.put((task_id, task_func, args, kwargs))
        return task_id

    def get_task_status(self, task_id):
        """Obtiene el estado de una tarea, o None si no existe."""
        with self.lock:
            if task_id in self.active_tasks:
                return {'status': 'processing', **self.active_tasks[task_id]}
            elif task_id in self.completed_tasks:
                return self.completed_tasks[task_id]
            elif task_id in self.queued_tasks:
                return {'status': 'queued', **self.queued_tasks[task_id]}
        return None

    def wait_tasks(self, task_ids):
        """Espera a que terminen las tareas y las retira del registro.

        Returns:
            list: Resultados en el orden de task_ids
        """
        with self.lock:
            while not all(t in self.completed_tasks for t in task_ids):
                self._terminada.wait(timeout=1)
            return [self.completed_tasks.pop(t)['result'] for t in task_ids]

    def stop_workers(self):
        """Detiene todos los workers y limpia recursos."""
        with self.lock:
            if not self.workers:
                return

            logger.info("Deteniendo workers de bloques...")
            self._stop_event = True
            workers = list(self.workers)
            for _ in workers:
                self.task_queue.put(None)

        for worker in workers:
            if worker.is_alive():
                worker.join(timeout=5)
                if worker.is_alive():
                    logger.warning(f"Worker {worker.name} no se detuvo correctamente")

        with self.lock:
            self.workers = []
            self.active_tasks.clear()
        logger.info("Todos los workers han sido detenidos")

    def get_worker_count(self):
        """Obtiene el número de workers activos."""
        with self.lock:
            return len([w for w in self.workers if w.is_alive()])

    def map_blocks(self, func, bloques):
        """Aplica func a cada bloque y devuelve los resultados en el orden de los bloques.

        Sin workers activos, con un único bloque o si se llama desde un worker,
        se ejecuta en el hilo actual.

        Args:
            func: Función bloque -> resultado
            bloques: Secuencia de bloques

        Returns:
            list: Resultados por bloque

        Raises:
            DiofantoError: El primer fallo en orden de bloques
        """
        bloques = list(bloques)
        en_worker = threading.current_thread().name.startswith(PREFIJO_WORKER)
        if len(bloques) <= 1 or en_worker or self.get_worker_count() == 0:
            resultados = [ejecutar_bloque(func, b) for b in bloques]
        else:
            ids = [self.submit_task(ejecutar_bloque, func, b) for b in bloques]
            resultados = self.wait_tasks(ids)

        salida = []
        for indice, resultado in enumerate(resultados):
            if not resultado.get('success'):
                excepcion = resultado.get('exception')
                if isinstance(excepcion, DiofantoError):
                    raise excepcion
                raise DiofantoError(f"el bloque {indice} falló: {resultado.get('error')}")
            salida.append(resultado['result'])
        return salida


def bloques_de_rango(inicio, fin, tam):
    """Parte [inicio, fin] en rangos consecutivos de tamaño tam (fijo, independiente de los hilos)."""
    return [(a, min(a + tam - 1, fin)) for a in range(inicio, fin + 1, tam)]


def map_blocks(func, bloques):
    """Atajo sobre el pool global."""
    return block_processor.map_blocks(func, bloques)


# Instancia global del pool
block_processor = BlockProcessor()
