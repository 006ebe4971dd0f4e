"""Propositional formulas: AST, parsing, printing, evaluation and world labeling."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import TypeVar

import pyparsing as pp

from errors import FormulaSyntaxError, LabelError, UndeclaredAtomError

pp.ParserElement.enable_packrat()

LABEL_SEPARATOR = "@"
ATOM_PATTERN = r"[a-zA-Z_][a-zA-Z0-9_]*"

R = TypeVar("R")


# ----------------------------
# AST
# ----------------------------
class Formula:
    """
    Base class; concrete nodes are the frozen dataclasses below.

    The hash is computed once at construction from the children's hashes and
    equality walks both trees with an explicit stack, so formulas of any depth
    can be compared and stored in sets.
    """

    __slots__ = ()

    def __post_init__(self) -> None:
        key = self.name if isinstance(self, Atom) else tuple(hash(c) for c in children(self))
        object.__setattr__(self, "_hash", hash((type(self).__name__, key)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if type(a) is not type(b) or hash(a) != hash(b):
                return False
            if isinstance(a, Atom):
                if a.name != b.name:
                    return False
                continue
            stack.extend(zip(children(a), children(b)))
        return True

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=False, repr=False)
class Top(Formula):
    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True, eq=False, repr=False)
class Bot(Formula):
    def __repr__(self) -> str:
        return "Bot()"


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Implies(Formula):
    left: Formula
    right: Formula


def children(f: Formula) -> tuple[Formula, ...]:
    match f:
        case Not(arg):
            return (arg,)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return (l, r)
    return ()


TOP = Top()
BOT = Bot()


def fold(f: Formula, combine: Callable[[Formula, list], R]) -> R:
    """Post-order fold with an explicit stack: combine(node, results of its children)."""
    results: list = []
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        kids = children(node)
        if kids and not expanded:
            stack.append((node, True))
            stack.extend((k, False) for k in reversed(kids))
            continue
        args = results[len(results) - len(kids):] if kids else []
        if kids:
            del results[len(results) - len(kids):]
        results.append(combine(node, args))
    return results[0]


def _balanced(parts: Iterable[Formula], ctor, empty: Formula) -> Formula:
    level = list(parts)
    if not level:
        return empty
    # pairwise reduction keeps the depth logarithmic; an odd tail is carried up unchanged
    while len(level) > 1:
        nxt = [ctor(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Balanced conjunction; the empty conjunction is T."""
    return _balanced(parts, And, TOP)


def disjoin(parts: Iterable[Formula]) -> Formula:
    """Balanced disjunction; the empty disjunction is F."""
    return _balanced(parts, Or, BOT)


def atoms(f: Formula) -> frozenset[str]:
    found: set[str] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            found.add(node.name)
        else:
            stack.extend(children(node))
    return frozenset(found)


def size(f: Formula) -> int:
    """Number of symbols (atoms, constants and connectives)."""
    count = 0
    stack = [f]
    while stack:
        count += 1
        stack.extend(children(stack.pop()))
    return count


# ----------------------------
# Valuations
# ----------------------------
class Valuation(Mapping[str, bool]):
    """Immutable atom -> bool map, total on its declared universe."""

    __slots__ = ("_values", "_hash")

    def __init__(self, values: Mapping[str, bool] | Iterable[tuple[str, bool]] = ()):
        self._values = {str(k): bool(v) for k, v in dict(values).items()}
        self._hash: int | None = None

    def __getitem__(self, atom: str) -> bool:
        try:
            return self._values[atom]
        except KeyError:
            raise UndeclaredAtomError(atom) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._values.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Valuation):
            return self._values == other._values
        if isinstance(other, Mapping):
            return self._values == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self._values.items()))
        return f"Valuation({{{body}}})"

    def sort_key(self) -> tuple:
        return tuple(sorted(self._values.items()))

    def to_dict(self) -> dict[str, bool]:
        return dict(sorted(self._values.items()))


def lift(v: Valuation, l: int) -> Valuation:
    """Rename every atom x of v to its labeled copy x@l."""
    return Valuation({labeled_name(x, l): b for x, b in v.items()})


def evaluate(f: Formula, v: Mapping[str, bool]) -> bool:
    def step(node: Formula, args: list[bool]) -> bool:
        match node:
            case Top():
                return True
            case Bot():
                return False
            case Atom(name):
                if isinstance(v, Valuation):
                    return v[name]
                if name not in v:
                    raise UndeclaredAtomError(name)
                return bool(v[name])
            case Not():
                return not args[0]
            case And():
                return args[0] and args[1]
            case Or():
                return args[0] or args[1]
            case Implies():
                return (not args[0]) or args[1]
        raise TypeError(f"not a formula: {type(node).__name__}")

    return fold(f, step)


# ----------------------------
# World labels
# ----------------------------
def labeled_name(name: str, l: int) -> str:
    return f"{name}{LABEL_SEPARATOR}{l}"


def split_label(name: str) -> tuple[str, int] | None:
    """'x@3' -> ('x', 3); None for unlabeled names."""
    base, sep, index = name.rpartition(LABEL_SEPARATOR)
    if not sep or not index.isdigit():
        return None
    return base, int(index)


def label(f: Formula, l: int) -> Formula:
    """Replace every atom x by x@l."""
    if l < 0:
        raise LabelError(f"world index must be >= 0, got {l}")
    return _label(f, l)


def _label(f: Formula, l: int) -> Formula:
    def step(node: Formula, args: list[Formula]) -> Formula:
        match node:
            case Atom(name):
                if LABEL_SEPARATOR in name:
                    raise LabelError(f"atom '{name}' is already labeled")
                return Atom(labeled_name(name, l))
            case Not():
                return Not(args[0])
            case And() | Or() | Implies():
                return type(node)(args[0], args[1])
        return node

    return fold(f, step)


# ----------------------------
# Printing
# ----------------------------
_PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_NOT, _PREC_ATOM = 1, 2, 3, 4, 5


def precedence(f: Formula) -> int:
    match f:
        case Implies():
            return _PREC_IMPLIES
        case Or():
            return _PREC_OR
        case And():
            return _PREC_AND
        case Not():
            return _PREC_NOT
    return _PREC_ATOM


def _paren(text: str, parens: bool) -> str:
    return f"({text})" if parens else text


def to_text(f: Formula) -> str:
    """Print with minimal parentheses; & and | associate left, -> right."""

    def step(node: Formula, args: list[str]) -> str:
        match node:
            case Top():
                return "T"
            case Bot():
                return "F"
            case Atom(name):
                return name
            case Not(arg):
                return "!" + _paren(args[0], precedence(arg) < _PREC_NOT)
            case And(l, r):
                return f"{_paren(args[0], precedence(l) < _PREC_AND)} & {_paren(args[1], precedence(r) <= _PREC_AND)}"
            case Or(l, r):
                return f"{_paren(args[0], precedence(l) < _PREC_OR)} | {_paren(args[1], precedence(r) <= _PREC_OR)}"
            case Implies(l, r):
                return f"{_paren(args[0], precedence(l) <= _PREC_IMPLIES)} -> {_paren(args[1], precedence(r) < _PREC_IMPLIES)}"
        raise TypeError(f"not a formula: {type(node).__name__}")

    return fold(f, step)


# ----------------------------
# Parsing
# ----------------------------
def _fold_not(tokens: pp.ParseResults) -> Formula:
    group = tokens[0]
    result = group[-1]
    for _ in range(len(group) - 1):
        result = Not(result)
    return result


def _fold_left(ctor):
    def action(tokens: pp.ParseResults) -> Formula:
        operands = tokens[0][0::2]
        result = operands[0]
        for operand in operands[1:]:
            result = ctor(result, operand)
        return result

    return action


def _fold_implies(tokens: pp.ParseResults) -> Formula:
    operands = tokens[0][0::2]
    result = operands[-1]
    for operand in reversed(operands[:-1]):
        result = Implies(operand, result)
    return result


@lru_cache(maxsize=1)
def build_parser() -> pp.ParserElement:
    top = pp.Keyword("T").set_parse_action(lambda: TOP)
    bot = pp.Keyword("F").set_parse_action(lambda: BOT)
    atom = pp.Regex(ATOM_PATTERN).set_parse_action(lambda t: Atom(t[0]))
    operand = top | bot | atom
    return pp.infix_notation(
        operand,
        [
            (pp.Literal("!"), 1, pp.OpAssoc.RIGHT, _fold_not),
            (pp.Literal("&"), 2, pp.OpAssoc.LEFT, _fold_left(And)),
            (pp.Literal("|"), 2, pp.OpAssoc.LEFT, _fold_left(Or)),
            (pp.Literal("->"), 2, pp.OpAssoc.RIGHT, _fold_implies),
        ],
    )


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def parse(text: str) -> Formula:
    """Parse the ASCII grammar: T, F, !, &, |, -> over atoms."""
    sep = text.find(LABEL_SEPARATOR)
    if sep >= 0:
        raise FormulaSyntaxError(
            f"reserved label separator '{LABEL_SEPARATOR}' in atom name", _byte_offset(text, sep)
        )
    if not text.strip():
        raise FormulaSyntaxError("empty formula", 0)
    try:
        result = build_parser().parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise FormulaSyntaxError(f"syntax error: {e.msg}", _byte_offset(text, e.loc)) from None
    return result[0]

