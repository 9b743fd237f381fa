import random
from fractions import Fraction

import pytest

from pcqe.numbers import GaussianRational
from pcqe.parser import parse_term
from pcqe.poly import Poly
from pcqe.terms import (
    ContextError, Conj, Const, I, ImPart, Mul, cart_to_cnf,
    cart_to_term, cnf_to_cart, cnf_to_term, eval_term, is_real_term, term_equiv,
    to_cartesian_nf, to_conjugate_nf)

from randomgen import VARS, assignment, gaussian, rewrite, term

G = GaussianRational
HALF = Fraction(1, 2)
t = parse_term


def re(z):
    return Poly.var(f'{z}__re')


def im(z):
    return Poly.var(f'{z}__im')


def const(q):
    return Poly.const(Fraction(q))


# -- oracle: evaluate polynomials directly from their coefficient tables ------

def eval_cnf_coeffs(nf, sigma):
    """Evaluate a conjugate NF from its exponent vectors, independent of the term printer."""
    n = len(nf.ctx)
    values = [G(sigma[z]) for z in nf.ctx] + [G(sigma[z]).conjugate() for z in nf.ctx]
    total = G(0)
    for vec, c in nf.coeffs.items():
        m = G(1)
        for v, e in zip(values, vec):
            m = m * v ** e
        total = total + c * m
    assert len(vec if nf.coeffs else [0] * 2 * n) == 2 * n
    return total


def eval_cart_polys(nf, sigma):
    values = {}
    for z in nf.ctx:
        values[f'{z}__re'] = G(sigma[z]).re
        values[f'{z}__im'] = G(sigma[z]).im

    def ev(p):
        total = Fraction(0)
        for mono, c in p.terms.items():
            m = Fraction(c)
            for g, e in mono:
                m *= values[g] ** e
            total += m
        return total
    return G(ev(nf.p1), ev(nf.p2))


# -- conjugate normal form ---------------------------------------------------

def test_cnf_of_normal_form_is_itself():
    nf = to_conjugate_nf(t('z^2 + I'))
    assert nf.coeffs == {(2, 0): G(1), (0, 0): G(0, 1)}
    assert str(nf) == 'z^2 + I'


def test_cnf_of_real_part():
    nf = to_conjugate_nf(t('Re(z)'))
    assert nf.coeffs == {(1, 0): G(HALF), (0, 1): G(HALF)}


def test_cnf_conjugate_of_product_with_unit():
    # frozen from the point-evaluation oracle below
    nf = to_conjugate_nf(t('conj(conj(z)*I)'))
    assert nf.coeffs == {(1, 0): G(0, -1)}
    rng = random.Random(1)
    lhs, rhs = t('conj(conj(z)*I)'), t('-I*z')
    for _ in range(100):
        sigma = {'z': gaussian(rng)}
        assert eval_term(lhs, sigma) == eval_term(rhs, sigma)


def test_cnf_unknown_variable():
    with pytest.raises(ContextError):
        to_conjugate_nf(t('z + w'), ['z'])


def test_cnf_coefficients_iterate_in_deglex_order():
    nf = to_conjugate_nf(t('1 + conj(z) + z*w + w^3 + z'), ['z', 'w'])
    degrees = [sum(v) for v in nf.coeffs]
    assert degrees == sorted(degrees, reverse=True)


# -- Cartesian normal form ---------------------------------------------------

def test_cartesian_of_square_plus_unit():
    nf = to_cartesian_nf(t('z^2 + I'))
    assert nf.p1 == re('z') ** 2 - im('z') ** 2
    assert nf.p2 == const(2) * re('z') * im('z') + const(1)


def test_cartesian_of_norm():
    nf = to_cartesian_nf(t('z*conj(z)'))
    assert nf.p1 == re('z') ** 2 + im('z') ** 2
    assert nf.p2.is_zero()


def test_cartesian_of_constant():
    nf = to_cartesian_nf(t('2*I + 1'))
    assert (nf.p1, nf.p2) == (const(1), const(2))


def test_cnf_cart_conversions():
    cnf = to_conjugate_nf(t('z*conj(z)'))
    cart = cnf_to_cart(cnf)
    assert (cart.p1, cart.p2) == (re('z') ** 2 + im('z') ** 2, Poly.zero())
    zero = to_conjugate_nf(Const(Fraction(0)), ['z'])
    assert cnf_to_cart(zero).p1.is_zero() and cnf_to_cart(zero).p2.is_zero()
    assert cart_to_cnf(cnf_to_cart(zero)) == zero
    back = cart_to_cnf(to_cartesian_nf(t('Re(z)')))
    assert back.coeffs == {(1, 0): G(HALF), (0, 1): G(HALF)}


def test_cnf_cart_round_trip_random():
    rng = random.Random(7)
    for _ in range(300):
        cnf = to_conjugate_nf(term(rng), VARS)
        assert cart_to_cnf(cnf_to_cart(cnf)) == cnf
        assert cnf_to_cart(cnf) == to_cartesian_nf(cnf_to_term(cnf.poly, cnf.ctx), VARS)


# -- real terms, evaluation, equivalence ---------------------------------------

def test_is_real_term_examples():
    assert is_real_term(t('z*conj(z)'))
    assert not is_real_term(I)
    assert is_real_term(t('Im(z)*Re(z)'))


def test_eval_examples():
    assert eval_term(t('z*conj(z)'), {'z': G(3, 4)}) == 25
    assert eval_term(t('I*I'), {}) == -1
    with pytest.raises(ContextError):
        eval_term(t('z'), {})


def test_eval_recombines_components():
    rng = random.Random(3)
    expr = t('Re(z) + I*Im(z)')
    for _ in range(20):
        c = gaussian(rng)
        assert eval_term(expr, {'z': c}) == G(c.re, c.im)


def test_term_equiv_examples():
    assert term_equiv(t('Re(z)'), t('1/2*(z + conj(z))'))
    assert not term_equiv(t('z'), t('conj(z)'))
    assert term_equiv(t('z^2 + I'), t('Re(z)^2 - Im(z)^2 + I*(2*Re(z)*Im(z) + 1)'))


# -- properties over random terms ----------------------------------------------

def test_nf_uniqueness_under_rewrites():
    rng = random.Random(2024)
    for _ in range(1000):
        a = term(rng)
        b = rewrite(a, rng, steps=rng.randint(1, 4))
        assert to_conjugate_nf(a, VARS) == to_conjugate_nf(b, VARS)
        assert to_cartesian_nf(a, VARS) == to_cartesian_nf(b, VARS)


def test_nf_soundness():
    rng = random.Random(99)
    for _ in range(1000):
        a = term(rng)
        cnf = to_conjugate_nf(a, VARS)
        cart = to_cartesian_nf(a, VARS)
        cnf_term = cnf_to_term(cnf.poly, cnf.ctx)
        cart_term = cart_to_term(cart.p1, cart.p2, cart.ctx)
        for _ in range(20):
            sigma = assignment(rng)
            v = eval_term(a, sigma)
            assert eval_cnf_coeffs(cnf, sigma) == v
            assert eval_cart_polys(cart, sigma) == v
            assert eval_term(cnf_term, sigma) == v
            assert eval_term(cart_term, sigma) == v


def test_real_term_consistency():
    rng = random.Random(5)
    zero = Const(Fraction(0))
    seen_real = 0
    for _ in range(500):
        a = term(rng)
        if rng.random() < 0.3:
            a = Mul(a, Conj(a))
        real = is_real_term(a)
        seen_real += real
        assert real == term_equiv(ImPart(a), zero)
        if real:
            for _ in range(20):
                assert eval_term(a, assignment(rng)).im == 0
    assert seen_real > 50


def test_extension_independence():
    rng = random.Random(11)
    for _ in range(300):
        a, b = term(rng, names=('z', 'w')), term(rng, names=('z', 'w'))
        small = to_conjugate_nf(a, ['z', 'w']) == to_conjugate_nf(b, ['z', 'w'])
        big = to_conjugate_nf(a, ['z', 'w', 'u', 'v']) == to_conjugate_nf(b, ['z', 'w', 'u', 'v'])
        permuted = to_cartesian_nf(a, ['u', 'w', 'v', 'z']) == to_cartesian_nf(b, ['u', 'w', 'v', 'z'])
        assert small == big == permuted == term_equiv(a, b)


def test_conjugation_is_an_involution():
    rng = random.Random(13)
    for _ in range(300):
        p = to_conjugate_nf(term(rng), VARS)
        q = to_conjugate_nf(term(rng), VARS)
        assert p.conjugate().conjugate() == p
        assert (p * q).conjugate() == p.conjugate() * q.conjugate()
        assert p.conjugate() == to_conjugate_nf(Conj(cnf_to_term(p.poly, p.ctx)), VARS)
