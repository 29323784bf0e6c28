from fractions import Fraction

import pytest

from diofanto.approxfn import PowerLog
from diofanto.errors import DomainError, HypothesisError
from diofanto.ubiquity import (Rho, UFunction, build_system, check_regularity, covering_fractions,
                               parse_u, predict_lemma1, predict_lemma2, step4_configuration,
                               union_measure)

MEDIA_RAIZ = PowerLog(Fraction(1, 2), Fraction(1, 2))


def test_parse_u():
    assert parse_u('log') == UFunction('log')
    assert parse_u('pow:1/10').eps == Fraction(1, 10)
    with pytest.raises(DomainError):
        parse_u('exp')
    with pytest.raises(DomainError):
        parse_u('pow:0')


def test_medida_de_la_union():
    assert union_measure([0.2, 0.25, 0.8], 0.1, 0.0, 1.0) == pytest.approx(0.45)
    assert union_measure([0.0], 0.1, 0.0, 1.0) == pytest.approx(0.1)
    assert union_measure([], 0.1, 0.0, 1.0) == 0.0


def test_rho_con_perfil_potencia():
    rho = Rho(MEDIA_RAIZ, UFunction('pow', Fraction(1, 10)))
    perfil = rho.dyadic_profile()
    assert perfil.alpha == 2 - Fraction(1, 2) - Fraction(1, 10)
    assert rho.eval(2 ** 10) == pytest.approx(2 ** 1.0 * 2 ** (-14.0))
    assert Rho(MEDIA_RAIZ, UFunction('log')).dyadic_profile() is None


def test_sistema_y_cobertura(parabola):
    sistema = build_system(parabola, MEDIA_RAIZ, 'log', t_max=10)
    assert len(sistema) > 0
    assert sistema.reverify(limit=50) == []
    assert (sistema.q <= 2 ** 10).all()
    informe = covering_fractions(sistema, range(8, 11), subintervals=4)
    assert len(informe.rows) == 12
    assert len(informe.fractions(9)) == 4
    assert informe.kappa_hat >= 0.5
    assert informe.worst['fraction'] == informe.kappa_hat


def test_cobertura_crece_con_la_escala(parabola):
    sistema = build_system(parabola, MEDIA_RAIZ, 'log', t_max=8)
    base = covering_fractions(sistema, [8]).kappa_hat
    assert covering_fractions(sistema.with_scale(4), [8]).kappa_hat >= base
    assert covering_fractions(sistema.with_scale(0), [8]).kappa_hat == 0.0
    with pytest.raises(DomainError):
        covering_fractions(sistema, [9])


def test_sistema_exige_condicion_de_crecimiento(parabola):
    with pytest.raises(HypothesisError):
        build_system(parabola, PowerLog(1, 1), t_max=8)


def test_regularidad():
    check_regularity(PowerLog(1, Fraction(7, 5)), 1, 20)
    with pytest.raises(HypothesisError):
        check_regularity(PowerLog(1, Fraction(1, 2)), 1, 20)


def test_prediccion_cerrada_en_la_frontera():
    rho = Rho(PowerLog(1, Fraction(1, 2)), UFunction('pow', Fraction(1, 10)))
    Psi = PowerLog(1, Fraction(7, 5))
    veredicto = predict_lemma1(rho, Psi)
    assert veredicto.method == 'closed-form'
    assert veredicto.kind == 'diverges'
    assert predict_lemma2(rho, Psi).value == 1
    assert predict_lemma1(rho, PowerLog(1, 2)).kind == 'converges'
    assert predict_lemma2(rho, PowerLog(1, 2)).value == Fraction(7, 10)


def test_prediccion_numerica_con_suma_diadica():
    rho, Psi = step4_configuration(PowerLog(1, Fraction(1, 2)), PowerLog(1, Fraction(1, 2)))
    veredicto = predict_lemma1(rho, Psi)
    assert veredicto.method == 'numeric-trend'
    assert veredicto.kind == 'diverges'
    prediccion = predict_lemma2(rho, Psi)
    assert not prediccion.exact
    assert 0 < float(prediccion) <= 1
