import math
from fractions import Fraction

import pytest

from diofanto import ratpoints
from diofanto.approxfn import PowerLog
from diofanto.config_manager import config_manager
from diofanto.curve import Interval
from diofanto.errors import DomainError, HypothesisError
from diofanto.ratpoints import (RationalPoint, check_growth_condition, count_circle_annulus,
                                count_near_curve, factorise, fit_count_band, huxley_ratio_scan,
                                lattice_annulus_count, r_formula_table, r_two_squares,
                                r_two_squares_table, reconcile_arc, scaling_slope,
                                sharpened_circle_check)


def _recuento_parabola(Q, umbral, canonico):
    """Referencia exacta con Fraction para y = x² en (0, 1)."""
    total = 0
    for q in range(1, Q + 1):
        for p1 in range(1, q):
            centro = Fraction(p1 * p1, q)
            for p2 in range(math.floor(centro) - 1, math.floor(centro) + 3):
                if abs(Fraction(p1 * p1, q * q) - Fraction(p2, q)) < umbral:
                    if not canonico or math.gcd(math.gcd(p1, p2), q) == 1:
                        total += 1
    return total


def test_punto_canonico():
    p = RationalPoint.canonical(2, 4, 6)
    assert (p.q, p.p1, p.p2) == (3, 1, 2)
    assert p.x == Fraction(1, 3)
    with pytest.raises(DomainError):
        RationalPoint(2, 2, 2)


def test_recuento_coincide_con_la_referencia(parabola):
    psi = PowerLog(1, Fraction(1, 2))
    umbral = Fraction(1, 8 * 64)
    canon = count_near_curve(parabola, psi, 64)
    multi = count_near_curve(parabola, psi, 64, mode='multiplicity')
    assert canon.count == _recuento_parabola(64, umbral, True)
    assert multi.count == _recuento_parabola(64, umbral, False)
    assert multi.count >= canon.count


def test_recuento_no_depende_de_los_hilos(parabola, pool):
    psi = PowerLog(1, Fraction(1, 2))
    config_manager.set('point_cap', 10 ** 6, persist=False)
    con_hilos = count_near_curve(parabola, psi, 512, emit_points=10 ** 6)
    pool.stop_workers()
    sin_hilos = count_near_curve(parabola, psi, 512, emit_points=10 ** 6)
    assert con_hilos.count == sin_hilos.count
    assert con_hilos.points == sin_hilos.points


def test_tope_de_puntos_configurado(parabola):
    # con ψ(32)/32 = 1/1024 sólo cuentan los puntos racionales (a/b, a²/b²) con b² ≤ 32
    psi = PowerLog(1, 1)
    assert len(count_near_curve(parabola, psi, 32, emit_points=100).points) == 9
    config_manager.set('point_cap', 5, persist=False)
    informe = count_near_curve(parabola, psi, 32, emit_points=100)
    assert informe.count == 9
    assert informe.points is None


def test_puntos_emitidos_en_el_intervalo(parabola):
    informe = count_near_curve(parabola, PowerLog(1, 1), 32, interval=Interval(0, Fraction(1, 2)),
                               emit_points=100)
    assert informe.points is not None
    assert all(0 < p.x < Fraction(1, 2) for p in informe.points)
    assert len(informe.points) == informe.count


def test_intervalo_fuera_de_la_carta(circle):
    with pytest.raises(DomainError, match='no está contenido'):
        count_near_curve(circle, PowerLog(1, 1), 16, interval=Interval(0, 1))


def test_condicion_de_crecimiento():
    check_growth_condition(PowerLog(1, Fraction(1, 2)), 4, 10)
    with pytest.raises(HypothesisError):
        check_growth_condition(PowerLog(1, 1), 4, 10)


def test_barrido_y_banda(parabola):
    psi = PowerLog(1, Fraction(1, 2))
    filas = huxley_ratio_scan(parabola, psi, range(5, 9))
    assert [f['t'] for f in filas] == [5, 6, 7, 8]
    banda = fit_count_band([(2 ** f['t'], f['N'], psi.eval(2 ** f['t'])) for f in filas])
    assert all(banda.contains(f['N'], 2 ** f['t'], psi.eval(2 ** f['t'])) for f in filas)


@pytest.mark.slow
@pytest.mark.parametrize('tau', [Fraction(3, 10), Fraction(1, 2), Fraction(7, 10)])
def test_pendiente_de_escala(parabola, tau):
    filas = huxley_ratio_scan(parabola, PowerLog(1, tau), range(8, 13))
    assert scaling_slope(filas) == pytest.approx(2 - float(tau), abs=0.3)


def test_factorizacion():
    assert factorise(600851475143) == {71: 1, 839: 1, 1471: 1, 6857: 1}
    assert factorise(1000003 * 1000033) == {1000003: 1, 1000033: 1}
    assert factorise(2 ** 10 * 3 ** 2) == {2: 10, 3: 2}


def test_r_de_n():
    assert [r_two_squares(n) for n in (1, 2, 3, 5, 25, 325)] == [4, 4, 0, 8, 12, 24]
    for n in range(1, 300):
        assert r_two_squares(n) == r_two_squares(n, method='enumeration')
    with pytest.raises(DomainError):
        r_two_squares(0)


def test_tablas_de_r_coinciden():
    formula = r_formula_table(10 ** 4)
    red = r_two_squares_table(10 ** 4)
    assert len(formula) == len(red) == 10 ** 4 + 1
    assert formula[0] == red[0] == 1
    assert (formula == red).all()


@pytest.mark.slow
def test_tablas_de_r_a_escala():
    assert (r_formula_table(10 ** 6) == r_two_squares_table(10 ** 6)).all()


@pytest.mark.parametrize('Q', [32, 64])
@pytest.mark.parametrize('Psi', [Fraction(1, 10), Fraction(3, 10)])
def test_corona_coincide_con_la_red(Q, Psi):
    assert count_circle_annulus(Q, Psi) == lattice_annulus_count(Q, Psi)


@pytest.mark.slow
@pytest.mark.parametrize('Q', [128, 256])
@pytest.mark.parametrize('Psi', [Fraction(1, 10), Fraction(3, 10)])
def test_corona_coincide_con_la_red_a_escala(Q, Psi):
    assert count_circle_annulus(Q, Psi) == lattice_annulus_count(Q, Psi)


def test_corona_rechaza_psi_fuera_de_rango():
    with pytest.raises(DomainError):
        count_circle_annulus(32, 1)
    with pytest.raises(DomainError):
        count_circle_annulus(1, Fraction(1, 10))


def test_arco_concilia_las_dos_vias():
    resultado = reconcile_arc(32, Fraction(1, 10), Interval(Fraction(1, 10), Fraction(9, 10)))
    assert resultado['only_annulus'] == [] and resultado['only_direct'] == []
    assert resultado['count'] > 0
    assert resultado['direct_count'] == resultado['count']


def test_arco_detecta_discrepancias(monkeypatch):
    arco = Interval(Fraction(1, 10), Fraction(9, 10))
    correcto = reconcile_arc(32, Fraction(1, 10), arco)
    # rangos de n vacíos: sólo la vía de la corona depende de ellos
    monkeypatch.setattr(ratpoints, 'annulus_bounds', lambda q, Psi: (1, 0))
    roto = reconcile_arc(32, Fraction(1, 10), arco)
    assert roto['count'] == 0
    assert roto['direct_count'] == correcto['count']
    assert len(roto['only_direct']) == correcto['count']


def test_corona_certificada_en_el_borde():
    # √10 − 3 = 0.16227766016837...
    assert ratpoints._corona_certificada(3, 10, Fraction(16227767, 10 ** 8)) is True
    assert ratpoints._corona_certificada(3, 10, Fraction(16227766, 10 ** 8)) is False
    assert ratpoints._corona_certificada(4, 16, Fraction(1, 10)) is True


def test_cota_afinada_fuera_de_regimen():
    informe = sharpened_circle_check(64, PowerLog(1, Fraction(1, 2)))
    assert informe['applicable'] is False
    assert informe['N'] == count_circle_annulus(64, Fraction(1, 8))
