import random
from fractions import Fraction

from pcqe.formulas import And, Or, RealAtom, RelOp, eval_real, to_real_formula
from pcqe.parser import parse
from pcqe.poly import Poly
from pcqe.printer import print_formula
from pcqe.realqe.polish import polish
from pcqe.realqe.simplify import factor, simplify_real

NAMES = ('a', 'b', 'c')


def real(text):
    return to_real_formula(parse(text))


def simp(text, *assume):
    return print_formula(simplify_real(real(text), [real(a) for a in assume]))


def test_examples():
    assert simp('x > 0 and T') == 'x > 0'
    assert simp('g^2 - 1 >= 0', 'g > 0') == 'g^2 - 1 >= 0'
    assert simp('x*y > 0', 'x > 0', 'y > 0') == 'T'


def test_ground_atoms_and_absorption():
    assert simp('1 < 2 and x == 0') == 'x == 0'
    assert simp('2 < 1 or F') == 'F'
    assert simp('x == 0 or T') == 'T'
    assert simp('x == 0 and x == 0 and (y < 1 and y < 1)') == 'x == 0 and y - 1 < 0'


def test_contradictions_and_tautologies():
    assert simp('x > 0 and x < 0') == 'F'
    assert simp('x >= 0 or x < 0') == 'T'
    assert simp('x >= 0 and x <= 0') == 'x == 0'


def test_equation_substitution_from_assumptions():
    assert simp('x*y + y == 3', 'x == 2') == 'y - 1 == 0'


def test_even_powers_keep_their_multiplicity():
    # (c-1)^2 >= 0 is a tautology, not c - 1 >= 0
    assert simp('c^2 - 2*c + 1 >= 0') == 'T'
    assert simp('c - 1 != 0 and (c^2 - 2*c + 1 >= 0 and (9*c - 5)^2 > 0)') == 'c - 1 != 0 and 9*c - 5 != 0'


def test_sum_of_squares_equation_splits():
    assert simp('x^2 + y^2 == 0') == 'x == 0 and y == 0'


def test_factorization_is_exact():
    p = real('(x - 1)^3*(2*x + y)^2*(x^2 + 1) == 0').poly
    c, factors = factor(p)
    prod = Poly.const(c)
    for f, m in factors:
        prod = prod * f ** m
    assert prod == p
    assert sorted(m for _, m in factors) == [1, 2, 3]


# -- random semantic preservation --------------------------------------------------

def random_factor(rng):
    p = Poly.const(Fraction(rng.randint(-2, 2)))
    for v in rng.sample(NAMES, rng.randint(1, 2)):
        p = p + Poly.var(v).scale(Fraction(rng.choice([-2, -1, 1, 2])))
    return p


def random_atom(rng):
    p = Poly.const(Fraction(rng.choice([-2, -1, 1, 2, 3])))
    for _ in range(rng.randint(1, 3)):
        p = p * random_factor(rng) ** rng.randint(1, 2)
    if rng.random() < 0.3:
        p = p + random_factor(rng)
    return RealAtom(p, rng.choice(list(RelOp)))


def random_formula(rng, depth=3):
    if depth == 0 or rng.random() < 0.3:
        return random_atom(rng)
    cls = And if rng.random() < 0.5 else Or
    return cls(tuple(random_formula(rng, depth - 1) for _ in range(rng.randint(2, 3))))


def random_assumptions(rng):
    out = []
    for v in rng.sample(NAMES, rng.randint(0, 2)):
        kind = rng.randrange(4)
        if kind == 0:
            out.append(RealAtom(Poly.var(v), RelOp.GT))
        elif kind == 1:
            out.append(RealAtom(Poly.var(v), RelOp.GE))
        elif kind == 2:
            out.append(RealAtom(Poly.var(v) - Poly.const(Fraction(rng.randint(-2, 2))), RelOp.EQ))
        else:
            out.append(RealAtom(Poly.var(v), RelOp.NE))
    return out


def points(rng, assumptions, n):
    found = 0
    while found < n:
        env = {v: Fraction(rng.randint(-4, 4), rng.randint(1, 2)) for v in NAMES}
        if all(eval_real(a, env) for a in assumptions):
            found += 1
            yield env


def test_simplify_preserves_truth_under_assumptions():
    rng = random.Random(314)
    for _ in range(500):
        f = random_formula(rng)
        assume = random_assumptions(rng)
        g = simplify_real(f, assume)
        for env in points(rng, assume, 20):
            assert eval_real(f, env) == eval_real(g, env), (print_formula(f), print_formula(g), env)


def test_polish_preserves_truth_under_assumptions():
    rng = random.Random(271)
    for _ in range(200):
        f = random_formula(rng)
        assume = random_assumptions(rng)
        g = polish(simplify_real(f, assume), assume)
        for env in points(rng, assume, 20):
            assert eval_real(f, env) == eval_real(g, env), (print_formula(f), print_formula(g), env)
