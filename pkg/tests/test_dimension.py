from fractions import Fraction

import numpy as np
import pytest

from diofanto.approxfn import PowerLog
from diofanto.dimension import (_cajas_ocupadas, box_count_dimension, cover_sum_exponent,
                                dim_bovey_dodson, dim_formula, dim_rynne, dim_theorem4,
                                dim_theorem5_lower, dim_theorem6, dim_theorem6_order,
                                dim_theorem7_lower, enumerate_cells, lower_bound_configuration,
                                mult_exponent_split)
from diofanto.errors import DomainError


def test_formula_de_pares():
    assert dim_theorem4(1, 1) == Fraction(1, 2)
    assert dim_theorem4(3, Fraction(1, 2)) == Fraction(3, 8)
    assert dim_theorem4(Fraction(1, 2), Fraction(3, 4)) == dim_theorem4(Fraction(3, 4), Fraction(1, 2))
    with pytest.raises(DomainError):
        dim_theorem4(0, 1)


def test_formula_fuera_de_hipotesis_anota():
    estimacion = dim_formula('t4', Fraction(1, 4), Fraction(1, 4))
    assert "outside stated hypotheses" in estimacion.notes
    assert estimacion.diagnostics['exact'] == str(Fraction(7, 4) / Fraction(5, 4))
    assert estimacion.predicted == estimacion.value


def test_formulas_multiplicativas():
    assert dim_theorem6(2) == Fraction(2, 3)
    assert dim_theorem6_order(PowerLog(1, 2)) == Fraction(2, 3)
    with pytest.raises(DomainError):
        dim_theorem6(Fraction(1, 2))
    with pytest.raises(DomainError):
        dim_theorem6_order(1)


@pytest.mark.parametrize('v', [1, Fraction(3, 2), 2, 5])
def test_identidades_entre_formulas(v):
    assert dim_bovey_dodson(1, v) == dim_theorem6(v)
    assert dim_theorem5_lower(1, v) == dim_theorem6(v)
    assert dim_theorem7_lower(2, v) == 1 + dim_theorem6(v)


@pytest.mark.parametrize('n,v', [(2, 1), (3, Fraction(1, 2)), (4, 2)])
def test_rynne_con_exponentes_iguales(n, v):
    assert dim_rynne([v] * n) == Fraction(n + 1) / (1 + v)


def test_rynne_reordena():
    assert dim_rynne([Fraction(1, 2), 3]) == dim_rynne([3, Fraction(1, 2)])
    assert "exponents sorted decreasingly" in dim_formula('rynne', [Fraction(1, 2), 3]).notes
    with pytest.raises(DomainError):
        dim_rynne([Fraction(1, 4), Fraction(1, 4)])


def test_formula_desconocida():
    with pytest.raises(DomainError, match='fórmula desconocida'):
        dim_formula('t9', 1)


def test_invariantes_de_la_descomposicion_aleatoria():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        v = Fraction(int(rng.integers(110, 500)), 100)
        cota = min(1 / (1 + v), Fraction(1, 5), v - 1)
        eps = cota * Fraction(int(rng.integers(1, 99)), 100)
        familia = mult_exponent_split(v, eps)
        assert familia.sums_ok
        assert familia.bound_ok
        assert v / (2 * eps) - Fraction(3, 2) <= familia.t0 < v / (2 * eps) - Fraction(1, 2)
        assert len(familia.pairs) == 2 * familia.t0 + 1


def test_descomposicion_fuera_de_la_ventana():
    with pytest.raises(DomainError):
        mult_exponent_split(2, Fraction(1, 2))
    with pytest.raises(DomainError):
        mult_exponent_split(Fraction(11, 10), Fraction(1, 5))


def test_celdas_cortan_la_curva(parabola):
    celdas = enumerate_cells(parabola, 1, 1, 1, 64)
    assert len(celdas['q'])
    assert np.all(celdas['x_lo'] <= celdas['x_hi'])
    assert np.all((celdas['x_lo'] >= 0) & (celdas['x_hi'] <= 1))
    assert np.all(celdas['diam'] > 0)


def test_exponente_de_recubrimiento_estructura(parabola):
    estimacion = cover_sum_exponent(parabola, 1, 1, 1024, tol=0.05)
    assert estimacion.predicted == 0.5
    assert 0.0 <= estimacion.value <= 2.0
    assert estimacion.diagnostics['bracket_width'] <= 0.05
    with pytest.raises(DomainError):
        cover_sum_exponent(parabola, 1, 1, 128)
    with pytest.raises(DomainError):
        cover_sum_exponent(parabola, Fraction(1, 2), 1, 1024)


@pytest.mark.slow
@pytest.mark.parametrize('v1,v2,tolerancia', [(1, 1, 0.07), (3, Fraction(1, 2), 0.10)])
def test_exponente_de_recubrimiento_a_escala(parabola, v1, v2, tolerancia):
    estimacion = cover_sum_exponent(parabola, v1, v2, 4096, tol=0.01)
    assert estimacion.value == pytest.approx(float(dim_theorem4(v1, v2)), abs=tolerancia)


def test_conteo_de_cajas(parabola):
    escalas = [2.0 ** -k for k in range(9, 31, 3)]
    estimacion = box_count_dimension(parabola, 'mult', 1024, escalas, (2,))
    assert estimacion.predicted == pytest.approx(2 / 3)
    assert 0 <= estimacion.diagnostics['r2'] <= 1
    assert len(estimacion.diagnostics['scales']) >= 5
    with pytest.raises(DomainError):
        box_count_dimension(parabola, 'mult', 1024, escalas[:3], (2,))


def test_cajas_ocupadas_por_fusion():
    rng = np.random.default_rng(7)
    x_lo = rng.uniform(0, 1, 300)
    x_hi = x_lo + rng.uniform(0, 0.05, 300)
    delta = 2.0 ** -8
    cajas = set()
    for a, b in zip(x_lo, x_hi):
        cajas.update(range(int(np.floor(a / delta)), int(np.floor(b / delta)) + 1))
    assert _cajas_ocupadas(x_lo, x_hi, delta) == len(cajas)
    assert _cajas_ocupadas(np.array([0.1, 0.1]), np.array([0.2, 0.15]), 0.5) == 1
    assert _cajas_ocupadas(np.zeros(0), np.zeros(0), 0.5) == 0


def test_cajas_a_escala_fina_no_se_materializan():
    # un único intervalo ancho frente a δ = 2^-40
    assert _cajas_ocupadas(np.array([0.0]), np.array([0.5]), 2.0 ** -40) == 2 ** 39 + 1


def test_configuracion_de_cota_inferior():
    configuracion = lower_bound_configuration(3, Fraction(1, 2), Fraction(1, 10))
    assert configuracion['expected'] == Fraction(7, 20)
    assert configuracion['prediction'].exact
    assert configuracion['prediction'].value == Fraction(7, 20)
    assert configuracion['theorem4'] == Fraction(3, 8)
