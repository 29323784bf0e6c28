import math
from fractions import Fraction

import pytest

from diofanto.approxfn import PowerLog
from diofanto.errors import DomainError
from diofanto.limsup import (dirichlet_floor_check, dual_solutions, dyadic_block,
                             exponent_estimate, inclusion_check, liouville_number,
                             multiplicative_solutions, parse_point, pi_plus, random_points,
                             simultaneous_solutions, split_coverage_check, target_point)


def _dist(x):
    """‖x‖ exacto para un racional."""
    return abs(x - math.floor(x + Fraction(1, 2)))


def test_parse_point():
    y = parse_point('1/3,1/7')
    assert y.n == 2 and y.is_rational
    y = parse_point('parabola(x=1/3)')
    assert y.coordinates[1].exact == Fraction(1, 9)
    y = parse_point('sqrt2m1, sqrt3m1')
    assert not y.is_rational
    assert y.values == pytest.approx((math.sqrt(2) - 1, math.sqrt(3) - 1))
    assert parse_point('liouville(base=10,terms=3)').coordinates[0].exact == liouville_number(10, 3)
    with pytest.raises(DomainError):
        parse_point('1/3,,1/7')
    with pytest.raises(DomainError):
        parse_point('circle(x=0)')


def test_bloque_diadico():
    assert [dyadic_block(q) for q in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_soluciones_simultaneas_racionales():
    y = target_point(Fraction(1, 3), Fraction(1, 7))
    psi = PowerLog(1, Fraction(1, 2))
    record = simultaneous_solutions(y, [psi, psi], 100)
    # d < q^(-1/2)  ⇔  d² < 1/q
    esperados = [q for q in range(2, 101)
                 if _dist(Fraction(q, 3)) ** 2 < Fraction(1, q) and _dist(Fraction(q, 7)) ** 2 < Fraction(1, q)]
    assert record.denominators == esperados
    assert 9 in record.denominators
    assert dict(record.solutions)[21] == (7, 3)
    assert sum(record.block_counts.values()) == len(esperados)


def test_soluciones_simultaneas_dimension_incorrecta():
    with pytest.raises(DomainError):
        simultaneous_solutions(target_point(Fraction(1, 3), Fraction(1, 7)), [PowerLog(1, 1)], 10)


def test_soluciones_multiplicativas_racionales():
    y = target_point(Fraction(2, 5), Fraction(1, 4))
    record = multiplicative_solutions(y, PowerLog(1, 1), 200)
    esperados = [q for q in range(2, 201)
                 if _dist(Fraction(2 * q, 5)) * _dist(Fraction(q, 4)) < Fraction(1, q)]
    assert record.denominators == esperados


def test_soluciones_irracionales_reverificadas():
    y = parse_point('sqrt2m1,sqrt3m1')
    psi = PowerLog(1, Fraction(1, 2))
    record = simultaneous_solutions(y, [psi, psi], 2000)
    assert 2 in record.denominators
    for q, p in record.solutions:
        assert abs(q * y.values[0] - p[0]) < q ** -0.5
        assert abs(q * y.values[1] - p[1]) < q ** -0.5


def test_soluciones_duales():
    y = target_point(Fraction(1, 3), Fraction(1, 7))
    record = dual_solutions(y, PowerLog(1, 1), 16)
    esperados = []
    for a1 in range(-16, 17):
        for a2 in range(-16, 17):
            peso = pi_plus((a1, a2))
            if (a1, a2) == (0, 0) or peso > 16:
                continue
            if _dist(Fraction(a1, 3) + Fraction(a2, 7)) < Fraction(1, peso):
                esperados.append((peso, (a1, a2)))
    assert record.solutions == sorted(esperados)
    assert (3, (3, 0)) in record.solutions


def test_inclusion_con_hipotesis_sin_violaciones():
    informe = inclusion_check('sim-mult-exponents', {'v1': '1/2', 'v2': '1/2', 'v': 1},
                              sample_count=20, Q=256, seed=3)
    assert informe['hypothesis_met'] is True
    assert informe['violations'] == []
    assert informe['status'] == 'ok'
    assert informe['left_solutions'] >= 20


def test_inclusion_sin_hipotesis():
    psis = [PowerLog(1, Fraction(1, 4)), PowerLog(1, Fraction(1, 4))]
    informe = inclusion_check('sim-mult', {'psis': psis, 'psi': PowerLog(1, 2)},
                              sample_count=20, Q=256, seed=3)
    assert informe['hypothesis_met'] is False
    assert informe['status'] == 'hypothesis unmet'


def test_inclusion_no_depende_de_los_hilos(pool):
    parametros = {'v1': '1/2', 'v2': '1/2', 'v': 1}
    con_hilos = inclusion_check('sim-mult-exponents', parametros, 30, 128, seed=5)
    pool.stop_workers()
    assert inclusion_check('sim-mult-exponents', parametros, 30, 128, seed=5) == con_hilos


def test_exponente_de_un_punto_racional_es_infinito():
    y = target_point(Fraction(1, 3), Fraction(1, 7))
    assert exponent_estimate(y, 'simultaneous-diagonal', 256).value == math.inf
    assert exponent_estimate(y, 'dual', 64).value == math.inf
    with pytest.raises(DomainError):
        exponent_estimate(y, 'multiplicative', 32)


def test_exponente_multiplicativo_excluye_los_ceros():
    estimacion = exponent_estimate(parse_point('1/2,sqrt2'), 'multiplicative', 1024)
    assert math.isfinite(estimacion.value)
    assert estimacion.zero_count == 512
    assert all(q % 2 == 1 for _, q, _ in estimacion.blocks)


def test_exponente_simultaneo_generico():
    estimacion = exponent_estimate(parse_point('sqrt2m1,sqrt3m1'), 'simultaneous-diagonal', 2 ** 14)
    assert abs(estimacion.value - 0.5) < 0.25
    assert len(estimacion.blocks) >= 2


def test_suelo_de_dirichlet():
    informe = dirichlet_floor_check(random_points(20, seed=1), Fraction(1, 2), Fraction(1, 3), 10)
    assert informe['failures'] == []
    assert informe['checks'] == 20 * 11


def test_cobertura_de_la_descomposicion():
    informe = split_coverage_check(2, Fraction(1, 10), random_points(10, seed=2), 512)
    assert informe['checked'] > 0
    assert informe['uncovered'] == []
