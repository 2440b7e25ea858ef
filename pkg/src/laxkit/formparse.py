"""Text syntax for formulas.

    formula := disj (("(+)" | "(-)") NUMBER)*
    disj    := conj ("\\/" conj)*
    conj    := atom ("/\\" atom)*
    atom    := NUMBER | NAME | NAME "(" formula ("," formula)* ")"
             | NAME "(" ")" | "(" formula ")"

NUMBER is 'p/q' or an exact decimal; both parse to the same rational, and
the original spelling is kept on the node so printing a parsed formula
reproduces the input up to whitespace.  NAME is an identifier (dots,
dashes and digits allowed after the first letter); '<>' and '[]' are
accepted as aliases for the sup/inf modalities.  The structural modality
has no text form and lives in JSON only.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import LaxkitError, format_unit, parse_unit
from .logic import And, Const, Formula, MinusC, Modal, MossDelta, MossNabla, Neg, Or, PlusC

TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<plusc>\(\+\))
  | (?P<minusc>\(-\))
  | (?P<number>\d+(\.\d+)?(/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.\-]*|<>|\[\])
  | (?P<and>/\\)
  | (?P<or>\\/)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
""",
    re.VERBOSE,
)


class FormulaSyntaxError(LaxkitError):
    def __init__(self, message: str, position: int):
        super().__init__(f"at position {position}: {message}")
        self.position = position


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {kind}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        out = self.disj()
        while self.peek()[0] in ("plusc", "minusc"):
            kind, _, _ = self.take(self.peek()[0])
            _, text, pos = self.take("number")
            value = self._unit(text, pos)
            if kind == "plusc":
                out = PlusC(out, value, text)
            else:
                out = MinusC(out, value, text)
        return out

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek()[0] == "or":
            self.take("or")
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.atom()
        while self.peek()[0] == "and":
            self.take("and")
            out = And(out, self.atom())
        return out

    def atom(self) -> Formula:
        kind, text, pos = self.peek()
        if kind == "number":
            self.take("number")
            return Const(self._unit(text, pos), text)
        if kind == "name":
            self.take("name")
            args = []
            if self.peek()[0] == "lpar":
                self.take("lpar")
                if self.peek()[0] != "rpar":
                    args.append(self.formula())
                    while self.peek()[0] == "comma":
                        self.take("comma")
                        args.append(self.formula())
                self.take("rpar")
            return Modal(text, tuple(args))
        if kind == "lpar":
            self.take("lpar")
            out = self.formula()
            self.take("rpar")
            return out
        raise FormulaSyntaxError(f"expected a formula, found {text!r}", pos)

    @staticmethod
    def _unit(text: str, pos: int) -> Fraction:
        try:
            return parse_unit(text)
        except LaxkitError as exc:
            raise FormulaSyntaxError(str(exc), pos) from None


def parse_formula(text: str) -> Formula:
    parser = _Parser(_tokenize(text))
    out = parser.formula()
    parser.take("end")
    return out


def _const_text(value: Fraction, lexeme: str | None) -> str:
    return lexeme if lexeme is not None else format_unit(value)


_SHIFT, _OR, _AND, _ATOM = range(4)


def print_formula(formula: Formula) -> str:
    """Render to the text syntax.

    Compound operands of the constant shifts are parenthesized, lattice
    connectives carry minimal parentheses.  Reparsing always gives back an
    equal formula, and parsing canonically parenthesized text then
    printing reproduces it up to whitespace (redundant parentheses are the
    one thing the syntax does not remember).  Structural-modality and
    negation nodes have no text form (raises); serialize those to JSON.
    """
    return _print(formula, _SHIFT)


def _level(formula: Formula) -> int:
    if isinstance(formula, (MinusC, PlusC)):
        return _SHIFT
    if isinstance(formula, Or):
        return _OR
    if isinstance(formula, And):
        return _AND
    return _ATOM


def _print(formula: Formula, floor: int) -> str:
    if isinstance(formula, Const):
        return _const_text(formula.value, formula.lexeme)
    if isinstance(formula, (MinusC, PlusC)):
        op = "(+)" if isinstance(formula, PlusC) else "(-)"
        sub = _print(formula.sub, _ATOM if _level(formula.sub) != _ATOM else _SHIFT)
        text = f"{sub} {op} {_const_text(formula.value, formula.lexeme)}"
    elif isinstance(formula, Or):
        text = f"{_print(formula.left, _OR)} \\/ {_print(formula.right, _AND)}"
    elif isinstance(formula, And):
        text = f"{_print(formula.left, _AND)} /\\ {_print(formula.right, _ATOM)}"
    elif isinstance(formula, Modal):
        if not formula.args:
            return formula.name
        return (formula.name + "("
                + ", ".join(_print(a, _SHIFT) for a in formula.args) + ")")
    elif isinstance(formula, (MossDelta, MossNabla, Neg)):
        raise LaxkitError(
            f"{type(formula).__name__} has no text form; use the JSON encoding"
        )
    else:
        raise LaxkitError(f"not a formula: {formula!r}")
    if _level(formula) < floor:
        return f"({text})"
    return text
