import math
from fractions import Fraction

import pytest

from diofanto.approxfn import PowerLog
from diofanto.curve import parse_curve
from diofanto.errors import DomainError, HypothesisError
from diofanto.measure import (CoverTailReport, DichotomyReport, case_b_strip_measure,
                              certify_annulus_constant, check_corridor, check_cover_consistency,
                              classify_case, dichotomy_experiment, kleinbock_margulis_regime,
                              m_max_case_a, multiplicative_cover_tail, simultaneous_cover_tail,
                              verdict_hint)

RAIZ = PowerLog(1, Fraction(1, 2))
INVERSA = PowerLog(1, 1)


def test_pista_de_veredicto():
    assert verdict_hint([0.9, 0.8, 0.7, 0.6]) == 'full-like'
    assert verdict_hint([0.5, 0.4, 0.3, 0.1]) == 'zero-like'
    assert verdict_hint([0.1, 0.3, 0.2, 0.1]) == 'inconclusive'
    assert verdict_hint([0.9, 0.9]) == 'inconclusive'
    assert verdict_hint([0.5, 0.4, 0.3, 0.1], zero=0.05) == 'inconclusive'


def test_dicotomia_valida_argumentos(parabola):
    with pytest.raises(DomainError):
        dichotomy_experiment(parabola, [RAIZ, RAIZ], samples=50)
    with pytest.raises(DomainError):
        dichotomy_experiment(parabola, [RAIZ], kind='sim', samples=100)
    with pytest.raises(DomainError):
        dichotomy_experiment(parabola, [RAIZ, RAIZ], kind='dual', samples=100)


def test_direccion_de_la_dicotomia(parabola):
    divergente = dichotomy_experiment(parabola, [RAIZ, RAIZ], samples=100, Q_max=1024, seed=42)
    convergente = dichotomy_experiment(parabola, [INVERSA, INVERSA], samples=100, Q_max=1024, seed=42)
    assert divergente.verdict == 'full-like'
    assert convergente.verdict != 'full-like'
    assert convergente.activity_of(10) < divergente.activity_of(10)
    assert [f['t'] for f in divergente.activity] == list(range(1, 11))
    assert divergente.cumulative[1] >= divergente.cumulative[3] >= divergente.cumulative[10]


def test_dicotomia_multiplicativa(parabola):
    informe = dichotomy_experiment(parabola, PowerLog(1, Fraction(3, 2)), kind='mult',
                                   samples=100, Q_max=512)
    assert informe.kind == 'mult'
    assert informe.psis == ['1*h^-3/2*logh^0']


def test_dicotomia_no_depende_de_los_hilos(parabola, pool):
    con_hilos = dichotomy_experiment(parabola, [RAIZ, RAIZ], samples=150, Q_max=512, seed=7)
    pool.stop_workers()
    sin_hilos = dichotomy_experiment(parabola, [RAIZ, RAIZ], samples=150, Q_max=512, seed=7)
    assert con_hilos.to_dict() == sin_hilos.to_dict()


def test_cola_simultanea(circle):
    psi = PowerLog(1, Fraction(3, 5))
    informe = simultaneous_cover_tail(circle, psi, psi, range(4, 9))
    assert sorted(informe.terms) == [4, 5, 6, 7, 8]
    assert informe.tails_non_increasing
    assert informe.tails[4] == pytest.approx(sum(informe.terms.values()))
    assert all(n >= 0 for n in informe.components['count'].values())
    assert len(informe.csv_rows()) == 5


def test_cola_simultanea_exige_psi_mayor_que_phi(parabola):
    with pytest.raises(HypothesisError):
        simultaneous_cover_tail(parabola, INVERSA, RAIZ, range(3, 6))
    with pytest.raises(DomainError):
        simultaneous_cover_tail(parse_curve('graph(exp)'), RAIZ, RAIZ, range(3, 6))


def test_casos_del_recubrimiento_multiplicativo():
    psi = PowerLog(1, 1, 2)
    m = m_max_case_a(10, psi)
    assert m == math.floor(-math.log2(10 * math.sqrt(psi.eval(1024))))
    assert classify_case(10, m, psi) == 'a'
    assert classify_case(10, -m, psi) == 'a'
    assert classify_case(10, m + 1, psi) == 'b'
    assert case_b_strip_measure(10, psi) == pytest.approx(20 * psi.eval(1024) / 1024)


def test_corredor():
    assert check_corridor(PowerLog(1, 1, 2), range(4, 12)) == []
    assert check_corridor(INVERSA, [8]) == [8]


def test_constante_de_la_corona():
    assert certify_annulus_constant(Fraction(1, 10), 4)['certified'] is True
    assert certify_annulus_constant(Fraction(1, 10), 3, t_min=1)['certified'] is False
    with pytest.raises(DomainError):
        certify_annulus_constant(Fraction(1, 2), 4)


def test_certificado_de_corona_no_depende_del_arco():
    estrecho = certify_annulus_constant(Fraction(1, 10), 4, t_min=3)
    ancho = certify_annulus_constant(Fraction(1, 100), 4, t_min=3)
    assert estrecho['bound'] == ancho['bound']
    assert (estrecho['arc'], ancho['arc']) == ('(1/10, 9/10)', '(1/100, 99/100)')
    assert estrecho['t_min'] == 3
    # (4 − 2^(1−t)) crece con t_min: 3 en t_min = 1 y 15/4 en t_min = 3
    primero = certify_annulus_constant(Fraction(1, 10), 4, t_min=1)
    assert Fraction(primero['bound']['hi']) < Fraction(estrecho['bound']['lo'])


def test_cola_multiplicativa():
    informe = multiplicative_cover_tail(PowerLog(1, 1, 2), range(8, 11))
    assert informe.tails_non_increasing
    assert set(informe.components) == {'case_a', 'case_b'}
    for t in informe.terms:
        assert informe.terms[t] == pytest.approx(
            informe.components['case_a'][t] + informe.components['case_b'][t])
    assert informe.notes == []


def test_cola_multiplicativa_fuera_del_corredor_anota():
    informe = multiplicative_cover_tail(INVERSA, range(6, 8))
    assert informe.notes and 'corredor' in informe.notes[0]


def test_regimen_kleinbock_margulis():
    assert kleinbock_margulis_regime(1)['prediction'] == 'full'
    assert kleinbock_margulis_regime(Fraction(3, 2))['prediction'] == 'zero'
    with pytest.raises(DomainError):
        kleinbock_margulis_regime(0)


def test_consistencia_recubrimiento_dicotomia():
    cola = CoverTailReport('simultaneous', {3: 0.5, 4: 0.01}, {3: 0.51, 4: 0.01})
    dicotomia = DichotomyReport('parabola', [], 'sim', 100, 42, 16,
                                [{'t': 3, 'activity': 0.4}, {'t': 4, 'activity': 0.4}],
                                {}, 'inconclusive')
    assert check_cover_consistency(cola, dicotomia, 1) == [4]
