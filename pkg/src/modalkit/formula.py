"""Deep-embedded syntax for propositional and first-order modal formulas.

Formulas are immutable dataclass trees with structural equality.  Diamond,
disjunction, biconditional and strict implication are primitive nodes, not
abbreviations, so a parsed formula prints back exactly as written.

Atom naming follows the case convention used throughout the package: a bare
lowercase identifier is a fixed propositional atom (``PropAtom``), a bare
uppercase identifier is a schematic metavariable (``SchemeVar``) that
enumeration ops instantiate with arbitrary sets of worlds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def _check_ident(name: str, what: str) -> None:
    if not isinstance(name, str) or not _IDENT_RE.match(name):
        raise ValueError(f"{what} must be an identifier, got {name!r}")


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class BoundVar:
    """A variable occurrence; bound by a quantifier or supplied via an Env."""

    name: str

    def __post_init__(self) -> None:
        _check_ident(self.name, "variable name")


@dataclass(frozen=True)
class RigidConst:
    """A constant naming the same domain element in every world."""

    name: str

    def __post_init__(self) -> None:
        _check_ident(self.name, "constant name")


Term = BoundVar | RigidConst


# ---------------------------------------------------------------------------
# Formulas

@dataclass(frozen=True)
class PropAtom:
    name: str

    def __post_init__(self) -> None:
        _check_ident(self.name, "atom name")
        if not self.name[0].islower():
            raise ValueError(
                f"propositional atom name must start lowercase: {self.name!r}")


@dataclass(frozen=True)
class SchemeVar:
    name: str

    def __post_init__(self) -> None:
        _check_ident(self.name, "scheme variable name")
        if not self.name[0].isupper():
            raise ValueError(
                f"scheme variable name must start uppercase: {self.name!r}")


@dataclass(frozen=True)
class PredAtom:
    """First-order atom; rigid or flexible is decided by the model."""

    name: str
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        _check_ident(self.name, "predicate name")
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("predicate atoms take at least one argument")
        for a in self.args:
            if not isinstance(a, (BoundVar, RigidConst)):
                raise ValueError(f"predicate argument must be a Term: {a!r}")


@dataclass(frozen=True)
class Eq:
    """Built-in rigid equality between terms."""

    lhs: Term
    rhs: Term

    def __post_init__(self) -> None:
        for a in (self.lhs, self.rhs):
            if not isinstance(a, (BoundVar, RigidConst)):
                raise ValueError(f"equality applies to Terms: {a!r}")


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or:
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Imp:
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff:
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Box:
    body: Formula


@dataclass(frozen=True)
class Dia:
    body: Formula


@dataclass(frozen=True)
class StrictImp:
    """Strict implication: no accessible world satisfies lhs without rhs."""

    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula

    def __post_init__(self) -> None:
        _check_ident(self.var, "bound variable name")


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula

    def __post_init__(self) -> None:
        _check_ident(self.var, "bound variable name")


Formula = (
    PropAtom | SchemeVar | PredAtom | Eq | Not | And | Or | Imp | Iff
    | Box | Dia | StrictImp | Forall | Exists
)

_BINARY = (And, Or, Imp, Iff, StrictImp)
_UNARY = (Not, Box, Dia)
_QUANT = (Forall, Exists)


def children(f: Formula) -> tuple[Formula, ...]:
    """Immediate subformulas of f (terms are not formulas)."""
    if isinstance(f, _BINARY):
        return (f.lhs, f.rhs)
    if isinstance(f, _UNARY):
        return (f.body,)
    if isinstance(f, _QUANT):
        return (f.body,)
    return ()


# ---------------------------------------------------------------------------
# Structural queries

def prop_atoms(f: Formula) -> list[str]:
    """Sorted names of the PropAtoms occurring in f."""
    out: set[str] = set()
    _collect(f, PropAtom, out)
    return sorted(out)


def scheme_vars(f: Formula) -> list[str]:
    """Sorted names of the SchemeVars occurring in f."""
    out: set[str] = set()
    _collect(f, SchemeVar, out)
    return sorted(out)


def _collect(f: Formula, node_type: type, out: set[str]) -> None:
    if isinstance(f, node_type):
        out.add(f.name)
    for c in children(f):
        _collect(c, node_type, out)


def pred_symbols(f: Formula) -> dict[str, int]:
    """Predicate names used in f mapped to their arity.

    Raises ValueError if one name is used at two different arities.
    """
    out: dict[str, int] = {}

    def go(g: Formula) -> None:
        if isinstance(g, PredAtom):
            seen = out.setdefault(g.name, len(g.args))
            if seen != len(g.args):
                raise ValueError(
                    f"predicate {g.name!r} used at arities {seen} and {len(g.args)}")
        for c in children(g):
            go(c)

    go(f)
    return dict(sorted(out.items()))


def const_names(f: Formula) -> list[str]:
    """Sorted names of RigidConst occurrences in f."""
    out: set[str] = set()

    def go(g: Formula) -> None:
        if isinstance(g, PredAtom):
            for a in g.args:
                if isinstance(a, RigidConst):
                    out.add(a.name)
        elif isinstance(g, Eq):
            for a in (g.lhs, g.rhs):
                if isinstance(a, RigidConst):
                    out.add(a.name)
        for c in children(g):
            go(c)

    go(f)
    return sorted(out)


def free_vars(f: Formula) -> list[str]:
    """Sorted names of BoundVar occurrences not captured by a quantifier."""
    out: set[str] = set()

    def go(g: Formula, bound: frozenset[str]) -> None:
        if isinstance(g, PredAtom):
            for a in g.args:
                if isinstance(a, BoundVar) and a.name not in bound:
                    out.add(a.name)
        elif isinstance(g, Eq):
            for a in (g.lhs, g.rhs):
                if isinstance(a, BoundVar) and a.name not in bound:
                    out.add(a.name)
        elif isinstance(g, _QUANT):
            go(g.body, bound | {g.var})
        else:
            for c in children(g):
                go(c, bound)

    go(f, frozenset())
    return sorted(out)


def is_propositional(f: Formula) -> bool:
    """True when f contains no first-order construct (PredAtom/Eq/quantifier)."""
    if isinstance(f, (PredAtom, Eq) + _QUANT):
        return False
    return all(is_propositional(c) for c in children(f))


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def bind_free(f: Formula, names: set[str] | frozenset[str]) -> Formula:
    """Turn free RigidConst occurrences with the given names into BoundVars.

    The concrete syntax cannot distinguish a free variable from a constant, so
    the parser reads unbound term identifiers as constants; callers that want
    to evaluate an open formula under an environment (e.g. the CLI's --env)
    re-bind the environment's names with this helper.  Occurrences shadowed by
    a quantifier of the same name are left alone.
    """

    def fix(t: Term, bound: frozenset[str]) -> Term:
        if isinstance(t, RigidConst) and t.name in names and t.name not in bound:
            return BoundVar(t.name)
        return t

    def go(g: Formula, bound: frozenset[str]) -> Formula:
        if isinstance(g, PredAtom):
            return PredAtom(g.name, tuple(fix(a, bound) for a in g.args))
        if isinstance(g, Eq):
            return Eq(fix(g.lhs, bound), fix(g.rhs, bound))
        if isinstance(g, Forall):
            return Forall(g.var, go(g.body, bound | {g.var}))
        if isinstance(g, Exists):
            return Exists(g.var, go(g.body, bound | {g.var}))
        if isinstance(g, _UNARY):
            return type(g)(go(g.body, bound))
        if isinstance(g, _BINARY):
            return type(g)(go(g.lhs, bound), go(g.rhs, bound))
        return g

    return go(f, frozenset())


# ---------------------------------------------------------------------------
# Rendering

FORMATS = ("ascii", "unicode", "latex")

# Operator spellings per format.  The unicode column deliberately keeps the
# implication family in ASCII ("=>", "<=>", "|>") while the other connectives
# get symbols; both spellings are accepted back by the parser.
_TABLES = {
    "ascii": {
        "not": "~", "and": "&", "or": "|", "imp": "=>", "iff": "<=>",
        "box": "[]", "dia": "<>", "strict": "|>",
        "forall": "forall ", "exists": "exists ",
    },
    "unicode": {
        "not": "¬", "and": "∧", "or": "∨", "imp": "=>",
        "iff": "<=>", "box": "□", "dia": "◇", "strict": "|>",
        "forall": "∀", "exists": "∃",
    },
    "latex": {
        "not": r"\neg", "and": r"\wedge", "or": r"\vee", "imp": r"\supset",
        "iff": r"\leftrightarrow", "box": r"\Box", "dia": r"\Diamond",
        "strict": r"\strictif", "forall": "\\forall ", "exists": "\\exists ",
    },
}

# Precedence levels used for minimal parenthesisation.  Quantifiers are not
# on the numeric ladder: their body extends maximally to the right, so a
# quantified operand needs parentheses exactly when output follows it.
_ATOM, _UN, _AND, _OR, _IMP, _IFF = 5, 4, 3, 2, 1, 0
_QPREC = -1


def _prec(f: Formula) -> int:
    if isinstance(f, (PropAtom, SchemeVar, PredAtom, Eq)):
        return _ATOM
    if isinstance(f, _UNARY):
        return _UN
    if isinstance(f, And):
        return _AND
    if isinstance(f, Or):
        return _OR
    if isinstance(f, (Imp, StrictImp)):
        return _IMP
    if isinstance(f, Iff):
        return _IFF
    return _QPREC


def render(f: Formula, fmt: str = "unicode") -> str:
    """Concrete syntax for f with minimal parentheses.

    ascii and unicode output parse back to a structurally equal formula;
    latex output is for typesetting only.
    """
    if fmt not in _TABLES:
        raise ValueError(f"unknown render format {fmt!r}; pick one of {FORMATS}")
    return _render(f, _TABLES[fmt], fmt == "latex", True)


def _ident(name: str, latex: bool) -> str:
    return name.replace("_", r"\_") if latex else name


def _render(f: Formula, t: dict[str, str], lx: bool, tail: bool) -> str:
    if isinstance(f, (PropAtom, SchemeVar)):
        return _ident(f.name, lx)
    if isinstance(f, PredAtom):
        args = ", ".join(_ident(a.name, lx) for a in f.args)
        return f"{_ident(f.name, lx)}({args})"
    if isinstance(f, Eq):
        return f"{_ident(f.lhs.name, lx)} = {_ident(f.rhs.name, lx)}"
    if isinstance(f, _UNARY):
        op = t[{Not: "not", Box: "box", Dia: "dia"}[type(f)]]
        body = _sub(f.body, t, lx, tail, _UN)
        if lx:
            sep = " "
        else:
            sep = " " if isinstance(f.body, _QUANT) and not body.startswith("(") else ""
        return op + sep + body
    if isinstance(f, And):
        return (_sub(f.lhs, t, lx, False, _AND) + f" {t['and']} "
                + _sub(f.rhs, t, lx, tail, _AND + 1))
    if isinstance(f, Or):
        return (_sub(f.lhs, t, lx, False, _OR) + f" {t['or']} "
                + _sub(f.rhs, t, lx, tail, _OR + 1))
    if isinstance(f, (Imp, StrictImp)):
        op = t["imp"] if isinstance(f, Imp) else t["strict"]
        # => and |> share a level and may not be mixed without parentheses,
        # so the right operand is bare only for the same connective.
        return (_sub(f.lhs, t, lx, False, _IMP + 1) + f" {op} "
                + _sub(f.rhs, t, lx, tail, _IMP + 1, same_ok=type(f)))
    if isinstance(f, Iff):
        return (_sub(f.lhs, t, lx, False, _IFF + 1) + f" {t['iff']} "
                + _sub(f.rhs, t, lx, tail, _IFF + 1, same_ok=Iff))
    if isinstance(f, _QUANT):
        kw = t["forall"] if isinstance(f, Forall) else t["exists"]
        return f"{kw}{_ident(f.var, lx)}. {_render(f.body, t, lx, True)}"
    raise TypeError(f"not a Formula: {f!r}")


def _sub(f: Formula, t: dict[str, str], lx: bool, tail: bool, min_prec: int,
         same_ok: type | None = None) -> str:
    p = _prec(f)
    if p == _QPREC:
        parens = not tail
    elif p < min_prec:
        parens = same_ok is None or type(f) is not same_ok
    else:
        parens = False
    if parens:
        return "(" + _render(f, t, lx, True) + ")"
    return _render(f, t, lx, tail)
