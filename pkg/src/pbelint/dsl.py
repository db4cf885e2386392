"""String-transformation DSL: AST, evaluation semantics, parser, printer.

Grammar (surface syntax as printed/parsed):

    expr     := Concat(expr, expr[, expr[, expr]]) | atom
    atom     := ConstStr('text')
              | Split(sep: C, index: N)
              | SubStr(y1: pos, y2: pos, case_type: None|Upper|Lower)
    pos      := CPos(K) | RelPos('atom', '+0'|'-0', N)

Position semantics: CPos(k) is k for k>0, len+k for k<0, and len (end of
string) for k=0. RelPos finds the N-th non-overlapping regex match scanning
left to right; '-0' takes the match start, '+0' the match end. Evaluation
errors are ordinary exceptions; the synthesizer treats any of them as "this
program is inconsistent".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

# Closed regex vocabulary for RelPos; bounds the synthesis space.
REGEX_ATOMS = (
    "[0-9]+",
    "[a-z]+",
    "[A-Z]+",
    "[A-Za-z]+",
    "[A-Za-z0-9]+",
    "[ ]+",
    "[_]+",
    "[-]+",
    "[.]+",
    "[A-Z]+[_]",
    "[a-z]+[ ]+",
)

LEFT = "left"
RIGHT = "right"
CASE_TYPES = ("none", "upper", "lower")

_CASE_SURFACE = {"none": "None", "upper": "Upper", "lower": "Lower"}
_CASE_FROM_SURFACE = {v: k for k, v in _CASE_SURFACE.items()}
_SIDE_SURFACE = {LEFT: "-0", RIGHT: "+0"}
_SIDE_FROM_SURFACE = {v: k for k, v in _SIDE_SURFACE.items()}


class EvalError(ValueError):
    """Base class for evaluation failures (position, slice, split errors)."""


class PositionError(EvalError):
    pass


class EmptySliceError(EvalError):
    pass


class SplitIndexError(EvalError):
    pass


class DslSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"syntax error at position {pos}: {message}")


@dataclass(frozen=True)
class CPos:
    k: int


@dataclass(frozen=True)
class RelPos:
    regex: str
    side: str
    occurrence: int

    def __post_init__(self):
        if self.regex not in REGEX_ATOMS:
            raise ValueError(f"regex {self.regex!r} not in the closed vocabulary")
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"side must be left or right, got {self.side!r}")
        if self.occurrence < 0:
            raise ValueError("occurrence must be >= 0")


Position = Union[CPos, RelPos]


@dataclass(frozen=True)
class ConstStr:
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("ConstStr text must be non-empty")


@dataclass(frozen=True)
class SubStr:
    start: Position
    end: Position
    case: str = "none"

    def __post_init__(self):
        if self.case not in CASE_TYPES:
            raise ValueError(f"case must be one of {CASE_TYPES}, got {self.case!r}")


@dataclass(frozen=True)
class Split:
    sep: str
    index: int

    def __post_init__(self):
        if len(self.sep) != 1:
            raise ValueError("Split separator must be a single character")
        if self.index < 0:
            raise ValueError("Split index must be >= 0")


@dataclass(frozen=True)
class Concat:
    parts: tuple["Expr", ...]

    def __post_init__(self):
        if not 2 <= len(self.parts) <= 4:
            raise ValueError("Concat takes between 2 and 4 parts")
        if any(isinstance(p, Concat) for p in self.parts):
            raise ValueError("Concat parts must not be nested Concats")


Expr = Union[ConstStr, SubStr, Split, Concat]


def node_count(expr: Expr | Position) -> int:
    """AST size: one per expression node plus one per position node."""
    if isinstance(expr, (CPos, RelPos, ConstStr, Split)):
        return 1
    if isinstance(expr, SubStr):
        return 1 + node_count(expr.start) + node_count(expr.end)
    if isinstance(expr, Concat):
        return 1 + sum(node_count(p) for p in expr.parts)
    raise TypeError(f"not an AST node: {expr!r}")


@dataclass(frozen=True)
class Program:
    root: Expr

    @property
    def size(self) -> int:
        return node_count(self.root)


@lru_cache(maxsize=None)
def _compiled(atom: str) -> "re.Pattern[str]":
    return re.compile(atom)


def resolve_position(position: Position, text: str) -> int:
    """Resolve a position to an index in [0, len(text)], or raise PositionError."""
    if not text:
        raise PositionError("cannot resolve a position in an empty string")
    if isinstance(position, CPos):
        if position.k == 0:
            return len(text)
        index = position.k if position.k > 0 else len(text) + position.k
        if not 0 <= index <= len(text):
            raise PositionError(
                f"CPos({position.k}) resolves outside [0, {len(text)}]"
            )
        return index
    matches = list(_compiled(position.regex).finditer(text))
    if position.occurrence >= len(matches):
        raise PositionError(
            f"regex {position.regex!r} has {len(matches)} matches, "
            f"occurrence {position.occurrence} requested"
        )
    match = matches[position.occurrence]
    return match.start() if position.side == LEFT else match.end()


def _apply_case(text: str, case: str) -> str:
    if case == "upper":
        return text.upper()
    if case == "lower":
        return text.lower()
    return text


def evaluate(program: Program | Expr, input_text: str) -> str:
    """Evaluate a program on one input; raises an EvalError subclass on failure."""
    expr = program.root if isinstance(program, Program) else program
    if isinstance(expr, ConstStr):
        return expr.text
    if isinstance(expr, SubStr):
        start = resolve_position(expr.start, input_text)
        end = resolve_position(expr.end, input_text)
        if start >= end:
            raise EmptySliceError(f"start {start} is not before end {end}")
        return _apply_case(input_text[start:end], expr.case)
    if isinstance(expr, Split):
        fields = input_text.split(expr.sep)
        if expr.index >= len(fields):
            raise SplitIndexError(
                f"split on {expr.sep!r} yields {len(fields)} fields, "
                f"index {expr.index} requested"
            )
        return fields[expr.index]
    if isinstance(expr, Concat):
        return "".join(evaluate(part, input_text) for part in expr.parts)
    raise TypeError(f"not an expression: {expr!r}")


# --- printer ---------------------------------------------------------------


def _quote(text: str) -> str:
    return "'" + text.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_position(position: Position) -> str:
    if isinstance(position, CPos):
        return f"CPos({position.k})"
    return (
        f"RelPos({_quote(position.regex)}, "
        f"'{_SIDE_SURFACE[position.side]}', {position.occurrence})"
    )


def format_expr(expr: Expr) -> str:
    if isinstance(expr, ConstStr):
        return f"ConstStr({_quote(expr.text)})"
    if isinstance(expr, SubStr):
        return (
            f"SubStr(y1: {format_position(expr.start)}, "
            f"y2: {format_position(expr.end)}, "
            f"case_type: {_CASE_SURFACE[expr.case]})"
        )
    if isinstance(expr, Split):
        return f"Split(sep: {expr.sep}, index: {expr.index})"
    if isinstance(expr, Concat):
        return "Concat(" + ", ".join(format_expr(p) for p in expr.parts) + ")"
    raise TypeError(f"not an expression: {expr!r}")


def format_program(program: Program) -> str:
    return format_expr(program.root)


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise DslSyntaxError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] == " ":
            self.pos += 1

    def peek_word(self) -> str:
        self.skip_ws()
        end = self.pos
        while end < len(self.text) and (
            self.text[end].isalnum() or self.text[end] == "_"
        ):
            end += 1
        return self.text[self.pos : end]

    def expect(self, literal: str):
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def take_char(self) -> str:
        if self.pos >= len(self.text):
            self.error("unexpected end of input")
        ch = self.text[self.pos]
        self.pos += 1
        return ch

    def parse_int(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            self.error("expected an integer")
        return int(self.text[start : self.pos])

    def parse_quoted(self) -> str:
        self.skip_ws()
        self.expect("'")
        chars = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated quoted string")
            ch = self.take_char()
            if ch == "\\":
                chars.append(self.take_char())
            elif ch == "'":
                return "".join(chars)
            else:
                chars.append(ch)

    def parse_position(self) -> Position:
        word = self.peek_word()
        if word == "CPos":
            self.expect("CPos")
            self.expect("(")
            k = self.parse_int()
            self.expect(")")
            return CPos(k)
        if word == "RelPos":
            self.expect("RelPos")
            self.expect("(")
            regex = self.parse_quoted()
            if regex not in REGEX_ATOMS:
                self.error(f"regex {regex!r} not in the closed vocabulary")
            self.expect(",")
            side_text = self.parse_quoted()
            if side_text not in _SIDE_FROM_SURFACE:
                self.error(f"side must be '+0' or '-0', got {side_text!r}")
            self.expect(",")
            occurrence = self.parse_int()
            if occurrence < 0:
                self.error("occurrence must be >= 0")
            self.expect(")")
            return RelPos(regex, _SIDE_FROM_SURFACE[side_text], occurrence)
        self.error("expected CPos or RelPos")

    def parse_atom(self) -> Expr:
        word = self.peek_word()
        if word == "ConstStr":
            self.expect("ConstStr")
            self.expect("(")
            text = self.parse_quoted()
            if not text:
                self.error("ConstStr text must be non-empty")
            self.expect(")")
            return ConstStr(text)
        if word == "Split":
            self.expect("Split")
            self.expect("(")
            self.expect("sep:")
            # The separator is the single character right after "sep: "; it may
            # itself be a space, so consume exactly one format space by hand.
            if self.pos < len(self.text) and self.text[self.pos] == " ":
                self.pos += 1
            sep = self.take_char()
            self.expect(",")
            self.expect("index:")
            index = self.parse_int()
            if index < 0:
                self.error("index must be >= 0")
            self.expect(")")
            return Split(sep, index)
        if word == "SubStr":
            self.expect("SubStr")
            self.expect("(")
            self.expect("y1:")
            start = self.parse_position()
            self.expect(",")
            self.expect("y2:")
            end = self.parse_position()
            self.expect(",")
            self.expect("case_type:")
            case_word = self.peek_word()
            if case_word not in _CASE_FROM_SURFACE:
                self.error(f"case_type must be None, Upper or Lower, got {case_word!r}")
            self.expect(case_word)
            self.expect(")")
            return SubStr(start, end, _CASE_FROM_SURFACE[case_word])
        self.error("expected ConstStr, Split or SubStr")

    def parse_expr(self) -> Expr:
        word = self.peek_word()
        if word == "Concat":
            self.expect("Concat")
            self.expect("(")
            parts = [self.parse_atom()]
            while True:
                self.skip_ws()
                if self.pos < len(self.text) and self.text[self.pos] == ",":
                    self.pos += 1
                    parts.append(self.parse_atom())
                else:
                    break
            self.expect(")")
            if not 2 <= len(parts) <= 4:
                self.error("Concat takes between 2 and 4 parts")
            return Concat(tuple(parts))
        return self.parse_atom()


def parse_program(text: str) -> Program:
    """Parse the surface syntax; round-trips with format_program."""
    parser = _Parser(text)
    expr = parser.parse_expr()
    parser.skip_ws()
    if parser.pos != len(parser.text):
        parser.error("trailing input after program")
    return Program(expr)
