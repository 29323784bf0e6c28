import math
from fractions import Fraction

import numpy as np
import pytest

from diofanto.config_manager import config_manager
from diofanto.curve import (ExpCurve, Interval, RationalAffineMap, circle_distance_constant,
                            default_interval, distance_to_curve, make_quadric, parse_curve,
                            parse_interval)
from diofanto.errors import DomainError


def test_intervalo_abierto_y_cerrado():
    abierto = parse_interval('(0,1)')
    cerrado = parse_interval('[1/10, 9/10]')
    assert not abierto.contains(0) and abierto.contains(Fraction(1, 2))
    assert cerrado.contains(Fraction(1, 10)) and cerrado.contains(Fraction(9, 10))
    assert cerrado.to_text() == '[1/10,9/10]'
    assert abierto.numerator_range(4) == (1, 3)
    assert cerrado.numerator_range(10) == (1, 9)
    with pytest.raises(DomainError):
        parse_interval('(1,0)')


def test_subdivision():
    partes = Interval(0, 1).subdivide(4)
    assert [p.lo for p in partes] == [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert partes[0].to_text() == '(0,1/4)'


def test_parabola_exacta(parabola):
    assert parabola.exact_f(Fraction(1, 3)) == Fraction(1, 9)
    assert parabola.f(0.5) == pytest.approx(0.25)
    c1, c2 = parabola.curvature_bounds
    assert c1 < 2 < c2
    assert parabola.check_curvature()


def test_circulo_y_rama(circle):
    assert circle.interval == default_interval('circle')
    assert circle.exact_f(Fraction(3, 5)) == Fraction(4, 5)
    assert circle.exact_f(Fraction(1, 2)) is None
    e = circle.enclose_f(Fraction(1, 2), 128)
    assert float(e.lo) <= np.sqrt(0.75) <= float(e.hi)
    abajo = make_quadric('circle', branch=-1)
    assert abajo.exact_f(Fraction(3, 5)) == Fraction(-4, 5)
    assert circle.check_curvature()


def test_hiperbola_por_defecto():
    h = parse_curve('hyperbola')
    assert h.interval == Interval(Fraction(5, 4), 2)
    assert h.exact_f(Fraction(5, 4)) == Fraction(3, 4)
    assert h.f_array(np.array([1.25, 2.0])) == pytest.approx([0.75, math.sqrt(3)])
    abajo = make_quadric('hyperbola', branch=-1)
    assert abajo.exact_f(Fraction(5, 4)) == Fraction(-3, 4)
    assert abajo.f_array(np.array([1.25]))[0] == pytest.approx(-0.75)


def test_imagen_afin_de_la_parabola():
    # (x, y) ↦ (x, 2y + 1): la imagen es y = 2x² + 1
    curva = parse_curve('quadric(parabola; M=1,0,0,2; t=0,1)')
    assert curva.exact_f(Fraction(1, 2)) == Fraction(3, 2)
    assert curva.fprime_array(np.array([0.25]))[0] == pytest.approx(1.0)


def test_aplicacion_afin_singular():
    with pytest.raises(DomainError, match='no es invertible'):
        RationalAffineMap((1, 2, 2, 4))


def test_circulo_con_tangente_vertical_no_es_grafica():
    with pytest.raises(DomainError, match='no es gráfica'):
        make_quadric('circle', interval=Interval(0, 1, open_hi=False))


def test_curva_exponencial():
    curva = parse_curve('graph(exp)')
    assert isinstance(curva, ExpCurve)
    assert curva.exact_f(0) == 1
    assert curva.check_curvature()


def test_curva_desconocida():
    with pytest.raises(DomainError, match='curva desconocida'):
        parse_curve('espiral')
    with pytest.raises(DomainError):
        parse_curve('circle[eps=1/2]')


def test_distancia_a_la_curva(parabola):
    assert distance_to_curve(parabola, (1, 1, 3)) == distance_to_curve(parabola, (1, 1, 3))
    d = distance_to_curve(parabola, (1, 1, 3))
    assert d.is_exact and d.lo == Fraction(2, 9)
    d = distance_to_curve(parse_curve('circle'), (1, 1, 2))
    assert d.width <= Fraction(1, 2 ** 64)
    assert float(d.lo) == pytest.approx(abs(np.sqrt(0.75) - 0.5))
    with pytest.raises(DomainError):
        distance_to_curve(parabola, (3, 0, 2))


def test_distancia_respeta_la_precision_configurada(circle):
    config_manager.set('start_prec', 32, persist=False)
    config_manager.set('max_prec_curve', 32, persist=False)
    d = distance_to_curve(circle, (1, 1, 2))
    assert Fraction(1, 2 ** 64) < d.width <= Fraction(1, 2 ** 20)
    assert distance_to_curve(circle, (1, 1, 2), max_bits=256).width <= Fraction(1, 2 ** 64)


def test_constante_del_circulo():
    assert circle_distance_constant(Fraction(1, 10)) == pytest.approx(2 * np.sqrt(0.99) + 1)
