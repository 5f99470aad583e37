"""Concrete syntax for formulas: tokenizer and recursive-descent parser.

The grammar accepts both ASCII and symbol spellings of every operator
(``~``/``¬``, ``[]``/``□``, ``<>``/``◇``, ``&``/``∧``, ``|``/``∨``, ``=>``/``⊃``/``→``,
``|>``/``⥽``, ``<=>``/``↔``, ``forall``/``∀``, ``exists``/``∃``) and they can be mixed
freely in one input.  Binding, tightest first:

    unary  ~ [] <>        (nest without parentheses)
    &
    |                     (left-associative)
    => and |>             (right-associative, same level; mixing the two
                           without parentheses is an error)
    <=>                   (right-associative)

Quantifier bodies extend maximally to the right.  A bare lowercase
identifier is a PropAtom, a bare uppercase identifier is a SchemeVar, and
``ident(term, ...)`` is a PredAtom whatever the case of its name.  An
identifier in term position is a BoundVar when an enclosing quantifier binds
that name and a RigidConst otherwise.

Errors are reported as ParseError carrying a SourceSpan whose start/end are
UTF-8 byte offsets into the input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (
    And, Box, BoundVar, Dia, Eq, Exists, Forall, Formula, Iff, Imp, Not, Or,
    PredAtom, PropAtom, RigidConst, SchemeVar, StrictImp, Term,
)

__all__ = ["SourceSpan", "ParseError", "parse"]


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range [start, end) into the UTF-8 encoded input."""

    start: int
    end: int


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"at {span.start}..{span.end}: {message}")
        self.message = message
        self.span = span


# ---------------------------------------------------------------------------
# Tokenizer

_KEYWORDS = {"forall": "FORALL", "exists": "EXISTS"}

_MULTI = (("<=>", "IFF"), ("=>", "IMP"), ("|>", "STRICT"), ("<>", "DIA"),
          ("[]", "BOX"))

_SINGLE = {
    "~": "NOT", "&": "AND", "|": "OR", "(": "LP", ")": "RP",
    ".": "DOT", ",": "COMMA", "=": "EQ",
    "¬": "NOT", "∧": "AND", "∨": "OR", "⊃": "IMP",
    "→": "IMP", "↔": "IFF", "□": "BOX", "◇": "DIA",
    "⥽": "STRICT", "∀": "FORALL", "∃": "EXISTS",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i = 0          # character index
    b = 0          # byte offset of character i
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            b += len(ch.encode("utf-8"))
            continue
        if ch.isalpha() and ch.isascii():
            j = i + 1
            while j < n and (text[j].isascii()
                             and (text[j].isalnum() or text[j] == "_")):
                j += 1
            word = text[i:j]
            span = SourceSpan(b, b + len(word))
            toks.append(_Token(_KEYWORDS.get(word, "IDENT"), word, span))
            i, b = j, b + len(word)
            continue
        matched = False
        for op, kind in _MULTI:
            if text.startswith(op, i):
                toks.append(_Token(kind, op, SourceSpan(b, b + len(op))))
                i += len(op)
                b += len(op)
                matched = True
                break
        if matched:
            continue
        kind = _SINGLE.get(ch)
        nbytes = len(ch.encode("utf-8"))
        if kind is None:
            raise ParseError(f"unknown token {ch!r}", SourceSpan(b, b + nbytes))
        toks.append(_Token(kind, ch, SourceSpan(b, b + nbytes)))
        i += 1
        b += nbytes
    toks.append(_Token("EOF", "", SourceSpan(b, b)))
    return toks


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, toks: list[_Token]):
        self.toks = toks
        self.pos = 0
        self.bound: list[str] = []

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str) -> _Token:
        t = self.peek()
        if t.kind != kind:
            found = "end of input" if t.kind == "EOF" else repr(t.text)
            raise ParseError(f"expected {what}, found {found}", t.span)
        return self.next()

    # formula := iff
    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        lhs = self.imp()
        if self.peek().kind == "IFF":
            self.next()
            return Iff(lhs, self.iff())
        return lhs

    def imp(self) -> Formula:
        operands = [self.disj()]
        ops: list[_Token] = []
        while self.peek().kind in ("IMP", "STRICT"):
            ops.append(self.next())
            operands.append(self.disj())
        if not ops:
            return operands[0]
        for t in ops[1:]:
            if t.kind != ops[0].kind:
                raise ParseError(
                    "mixed '=>' and '|>' need parentheses", t.span)
        node = Imp if ops[0].kind == "IMP" else StrictImp
        out = operands[-1]
        for lhs in reversed(operands[:-1]):
            out = node(lhs, out)
        return out

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek().kind == "OR":
            self.next()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.peek().kind == "AND":
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        k = self.peek().kind
        if k in ("NOT", "BOX", "DIA"):
            self.next()
            body = self.unary()
            return {"NOT": Not, "BOX": Box, "DIA": Dia}[k](body)
        if k in ("FORALL", "EXISTS"):
            return self.quantifier()
        return self.atom()

    def quantifier(self) -> Formula:
        kw = self.next()
        var = self.expect("IDENT", "a variable name").text
        self.expect("DOT", "'.' after the bound variable")
        self.bound.append(var)
        try:
            body = self.formula()
        finally:
            self.bound.pop()
        return (Forall if kw.kind == "FORALL" else Exists)(var, body)

    def atom(self) -> Formula:
        t = self.peek()
        if t.kind == "LP":
            self.next()
            inner = self.formula()
            self.expect("RP", "')'")
            return inner
        if t.kind != "IDENT":
            found = "end of input" if t.kind == "EOF" else repr(t.text)
            raise ParseError(f"expected a formula, found {found}", t.span)
        self.next()
        if self.peek().kind == "LP":
            self.next()
            args = [self.term()]
            while self.peek().kind == "COMMA":
                self.next()
                args.append(self.term())
            self.expect("RP", "')' closing the argument list")
            return PredAtom(t.text, tuple(args))
        if self.peek().kind == "EQ":
            self.next()
            return Eq(self.make_term(t.text), self.term())
        if t.text[0].isupper():
            return SchemeVar(t.text)
        return PropAtom(t.text)

    def term(self) -> Term:
        t = self.expect("IDENT", "a term")
        return self.make_term(t.text)

    def make_term(self, name: str) -> Term:
        if name in self.bound:
            return BoundVar(name)
        return RigidConst(name)


def parse(text: str) -> Formula:
    """Parse concrete syntax into a Formula; raises ParseError on bad input."""
    p = _Parser(_tokenize(text))
    f = p.formula()
    t = p.peek()
    if t.kind != "EOF":
        raise ParseError(f"unexpected {t.text!r} after a complete formula",
                         t.span)
    return f
