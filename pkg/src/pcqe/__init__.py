"""Quantifier elimination over the complex numbers with ``I``, ``Re``, ``Im``
and conjugation, by reduction to real quantifier elimination."""
from .numbers import GaussianRational, Rational
from .terms import (
    ContextError, Term, Const, ImagUnit, Var, Add, Neg, Mul, Pow, RePart, ImPart,
    Conj, I, PolyCNF, PolyCart, to_conjugate_nf, to_cartesian_nf, cnf_to_cart,
    cart_to_cnf, is_real_term, eval_term, term_equiv)
from .formulas import (
    RelOp, Formula, Top, Bot, TOP, BOT, Atom, RealAtom, Not, And, Or, Implies,
    Iff, Exists, Forall, RealnessError, eval_qf, eval_real, free_vars,
    prenexify, sample_quantified, to_real_nf)
from .parser import ParseError, parse, parse_term
from .printer import print_formula, print_term, canonical_atom
