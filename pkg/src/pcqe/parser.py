"""Recursive-descent parser for the formula and term syntax.

Precedence from loosest to tightest: ``<->``, ``->``, ``or``, ``and``,
``not``, comparisons, ``+``/``-``, unary ``-``, ``*``, ``^``.  Quantifier
bodies extend as far to the right as possible.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .formulas import (
    And, Atom, BOT, Exists, Forall, Formula, Iff, Implies, Not, Or, RelOp, TOP)
from .terms import (
    Add, Conj, Const, I, ImPart, Mul, Neg, Pow, RePart, Term, Var,
    IM_SUFFIX, RE_SUFFIX)


class ParseError(SyntaxError):
    """Syntax error carrying the character offset ``pos`` into the input."""

    def __init__(self, msg: str, text: str, pos: int):
        line = text.count('\n', 0, pos) + 1
        col = pos - (text.rfind('\n', 0, pos) + 1) + 1
        super().__init__(f'{msg} at line {line}, column {col}')
        self.pos = pos
        self.lineno = line
        self.offset = col
        start = text.rfind('\n', 0, pos) + 1
        end = text.find('\n', pos)
        self.text = text[start:] if end < 0 else text[start:end]

    def __str__(self) -> str:
        return self.msg


_TOKEN = re.compile(r'''
    (?P<ws>\s+)
  | (?P<op><->|->|==|!=|<=|>=|<|>|\+|-|\*|\^|/|\(|\)|\.)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
''', re.VERBOSE)

KEYWORDS = {'and', 'or', 'not', 'forall', 'exists', 'T', 'F', 'I', 'Re', 'Im', 'conj'}

_RELS = {'==': RelOp.EQ, '!=': RelOp.NE, '<=': RelOp.LE, '<': RelOp.LT,
         '>=': RelOp.GE, '>': RelOp.GT}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f'unexpected character {text[pos]!r}', text, pos)
        kind = m.lastgroup
        if kind != 'ws':
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(('eof', '', len(text)))
    return out


class _Parser:
    def __init__(self, text: str, allow_reserved: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved

    # -- token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, value: str) -> bool:
        kind, text, _ = self.tok
        return text == value and kind in ('op', 'ident')

    def accept(self, value: str) -> bool:
        if self.peek(value):
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            self.error(f'expected {value!r}')

    def error(self, msg: str):
        kind, text, pos = self.tok
        found = 'end of input' if kind == 'eof' else repr(text)
        raise ParseError(f'{msg}, found {found}', self.text, pos)

    def ident(self) -> str:
        kind, text, pos = self.tok
        if kind != 'ident' or text in KEYWORDS:
            self.error('expected a variable name')
        if not self.allow_reserved and (text.endswith(RE_SUFFIX) or text.endswith(IM_SUFFIX)):
            raise ParseError(f'variable name {text!r} uses a reserved suffix', self.text, pos)
        self.i += 1
        return text

    # -- formulas
    def formula(self) -> Formula:
        left = self.implication()
        if self.accept('<->'):
            return Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept('->'):
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.accept('or'):
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.negation()]
        while self.accept('and'):
            args.append(self.negation())
        return args[0] if len(args) == 1 else And(tuple(args))

    def negation(self) -> Formula:
        if self.accept('not'):
            return Not(self.negation())
        for word, cls in (('exists', Exists), ('forall', Forall)):
            if self.accept(word):
                v = self.ident()
                self.expect('.')
                return cls(v, self.formula())
        return self.basic()

    def basic(self) -> Formula:
        if self.accept('T'):
            return TOP
        if self.accept('F'):
            return BOT
        start = self.i
        try:
            return self.comparison()
        except ParseError as term_error:
            if not self.toks[start][1] == '(':
                raise
            self.i = start + 1
            try:
                inner = self.formula()
                self.expect(')')
            except ParseError:
                raise term_error from None
            return inner

    def comparison(self) -> Formula:
        lhs = self.term()
        kind, text, _ = self.tok
        if kind != 'op' or text not in _RELS:
            self.error('expected a comparison operator')
        self.i += 1
        return Atom(lhs, self.term(), _RELS[text])

    # -- terms
    def term(self) -> Term:
        t = self.unary()
        while True:
            if self.accept('+'):
                t = Add(t, self.unary())
            elif self.accept('-'):
                t = Add(t, Neg(self.unary()))
            else:
                return t

    def unary(self) -> Term:
        if self.accept('-'):
            return Neg(self.unary())
        return self.product()

    def product(self) -> Term:
        t = self.power()
        while self.accept('*'):
            t = Mul(t, self.power())
        return t

    def power(self) -> Term:
        base = self.primary()
        if self.accept('^'):
            kind, text, _ = self.tok
            if kind != 'num':
                self.error('expected a natural number exponent')
            self.i += 1
            return Pow(base, int(text))
        return base

    def primary(self) -> Term:
        kind, text, _ = self.tok
        if kind == 'num':
            self.i += 1
            value = Fraction(int(text))
            if self.peek('/') and self.toks[self.i + 1][0] == 'num':
                self.i += 1
                den = int(self.tok[1])
                if den == 0:
                    self.error('zero denominator')
                self.i += 1
                value = Fraction(int(text), den)
            return Const(value)
        if self.accept('I'):
            return I
        for word, cls in (('Re', RePart), ('Im', ImPart), ('conj', Conj)):
            if self.accept(word):
                self.expect('(')
                arg = self.term()
                self.expect(')')
                return cls(arg)
        if self.accept('('):
            t = self.term()
            self.expect(')')
            return t
        if kind == 'ident' and text not in KEYWORDS:
            return Var(self.ident())
        self.error('expected a term')


def parse(text: str, allow_reserved: bool = False) -> Formula:
    """Parse a formula.  Names ending in ``__re``/``__im`` are rejected
    unless ``allow_reserved`` is set."""
    p = _Parser(text, allow_reserved)
    if p.tok[0] == 'eof':
        raise ParseError('empty input', text, 0)
    f = p.formula()
    if p.tok[0] != 'eof':
        p.error('unexpected trailing input')
    return f


def parse_term(text: str, allow_reserved: bool = False) -> Term:
    p = _Parser(text, allow_reserved)
    t = p.term()
    if p.tok[0] != 'eof':
        p.error('unexpected trailing input')
    return t
