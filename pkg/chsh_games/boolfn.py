"""Boolean functions over at most four variables, stored as truth tables.

Bit convention (fixed project-wide): for an assignment (v_1, ..., v_n) the
index is the binary number v_1 v_2 ... v_n, i.e. variable 1 is the most
significant bit, and bit ``index`` of ``TruthTable.bits`` holds the value.

Expressions use ``!`` (NOT), ``*`` (AND), ``^`` (XOR) and ``+`` (OR), in that
order of decreasing precedence, with parentheses and the constants 0 / 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .errors import ArityError, ExpressionSyntaxError, UnknownVariableError

MAX_ARITY = 4
QUESTION_VARS: Tuple[str, ...] = ("x", "y", "z", "w")
ANSWER_VARS: Tuple[str, ...] = ("a", "b", "c", "d")


def _check_arity(arity: int) -> None:
    if not 1 <= arity <= MAX_ARITY:
        raise ArityError(f"arity must be in [1, {MAX_ARITY}], got {arity}")


@dataclass(frozen=True, order=True)
class TruthTable:
    arity: int
    bits: int

    def __post_init__(self):
        _check_arity(self.arity)
        if not 0 <= self.bits < (1 << self.size):
            raise ArityError(
                f"bits {self.bits:#x} do not fit a {self.size}-entry truth table"
            )

    @property
    def size(self) -> int:
        return 1 << self.arity

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def value_at(self, index: int) -> int:
        return (self.bits >> index) & 1

    def ones(self) -> List[int]:
        return [k for k in range(self.size) if self.value_at(k)]

    def __str__(self) -> str:
        return format_expr(self)


def assignment_index(assignment: Sequence[int]) -> int:
    index = 0
    for bit in assignment:
        index = (index << 1) | (1 if bit else 0)
    return index


def index_bits(index: int, arity: int) -> Tuple[int, ...]:
    return tuple((index >> (arity - 1 - i)) & 1 for i in range(arity))


def evaluate(tt: TruthTable, assignment: Sequence[int]) -> int:
    if len(assignment) != tt.arity:
        raise ArityError(
            f"assignment of length {len(assignment)} for a function of arity {tt.arity}"
        )
    return tt.value_at(assignment_index(assignment))


def _var_mask(arity: int, var: int) -> int:
    if not 0 <= var < arity:
        raise ArityError(f"variable index {var} out of range for arity {arity}")
    return 1 << (arity - 1 - var)


def is_essential(tt: TruthTable, var: int) -> bool:
    """True iff flipping variable ``var`` changes the value somewhere."""
    flip = _var_mask(tt.arity, var)
    return any(tt.value_at(k) != tt.value_at(k ^ flip) for k in range(tt.size))


def all_essential(tt: TruthTable) -> bool:
    return all(is_essential(tt, var) for var in range(tt.arity))


@lru_cache(maxsize=None)
def _essential_bits(n: int) -> Tuple[int, ...]:
    return tuple(
        bits for bits in range(1 << (1 << n)) if all_essential(TruthTable(n, bits))
    )


def enumerate_essential(n: int) -> List[TruthTable]:
    """All functions of arity ``n`` depending on every variable, ascending bits."""
    _check_arity(n)
    return [TruthTable(n, bits) for bits in _essential_bits(n)]


def negate(tt: TruthTable) -> TruthTable:
    return TruthTable(tt.arity, tt.bits ^ tt.full_mask)


def negate_variable(tt: TruthTable, var: int) -> TruthTable:
    """Substitute x_var -> NOT x_var."""
    flip = _var_mask(tt.arity, var)
    bits = 0
    for k in range(tt.size):
        if tt.value_at(k ^ flip):
            bits |= 1 << k
    return TruthTable(tt.arity, bits)


def variable(arity: int, var: int) -> TruthTable:
    """Projection onto variable ``var``."""
    mask = _var_mask(arity, var)
    bits = 0
    for k in range(1 << arity):
        if k & mask:
            bits |= 1 << k
    return TruthTable(arity, bits)


def parity(arity: int) -> TruthTable:
    bits = 0
    for k in range(1 << arity):
        if bin(k).count("1") % 2:
            bits |= 1 << k
    return TruthTable(arity, bits)


def constant(arity: int, value: int) -> TruthTable:
    _check_arity(arity)
    return TruthTable(arity, ((1 << (1 << arity)) - 1) if value else 0)


# ──────────────────────────────────────────────────────────────────────────────
# Expression parser / printer
# ──────────────────────────────────────────────────────────────────────────────

_TOKEN_RE = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([01])|([+^*!()]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens: List[Tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("ident", m.group(1), start))
        elif m.group(2):
            tokens.append(("const", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over expr := term ("+" term)* and friends."""

    def __init__(self, text: str, variables: Sequence[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = list(variables)
        self.arity = len(self.variables)
        self.full = (1 << (1 << self.arity)) - 1

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.pos]

    def accept(self, op: str) -> bool:
        kind, value, _ = self.peek()
        if kind == "op" and value == op:
            self.pos += 1
            return True
        return False

    def parse(self) -> int:
        bits = self.expr()
        kind, value, position = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected token {value!r}", position)
        return bits

    def expr(self) -> int:
        bits = self.term()
        while self.accept("+"):
            bits |= self.term()
        return bits

    def term(self) -> int:
        bits = self.xfact()
        while self.accept("^"):
            bits ^= self.xfact()
        return bits

    def xfact(self) -> int:
        bits = self.factor()
        while self.accept("*"):
            bits &= self.factor()
        return bits

    def factor(self) -> int:
        if self.accept("!"):
            return self.factor() ^ self.full
        if self.accept("("):
            bits = self.expr()
            if not self.accept(")"):
                _, value, position = self.peek()
                raise ExpressionSyntaxError(
                    f"expected ')' but found {value or 'end of input'!r}", position
                )
            return bits
        kind, value, position = self.peek()
        if kind == "const":
            self.pos += 1
            return self.full if value == "1" else 0
        if kind == "ident":
            if value not in self.variables:
                raise UnknownVariableError(
                    f"unknown variable {value!r} at position {position}; "
                    f"declared: {', '.join(self.variables)}"
                )
            self.pos += 1
            return variable(self.arity, self.variables.index(value)).bits
        raise ExpressionSyntaxError(
            f"expected a variable, constant, '!' or '(' but found "
            f"{value or 'end of input'!r}",
            position,
        )


def infer_variables(text: str, arity: Optional[int]) -> Tuple[str, ...]:
    idents = [value for kind, value, _ in _tokenize(text) if kind == "ident"]
    alphabet = QUESTION_VARS
    if idents and idents[0] in ANSWER_VARS:
        alphabet = ANSWER_VARS
    if arity is None:
        used = [alphabet.index(name) for name in idents if name in alphabet]
        arity = max(used) + 1 if used else 1
    _check_arity(arity)
    return alphabet[:arity]


def parse_expr(
    text: str,
    arity: Optional[int] = None,
    variables: Optional[Sequence[str]] = None,
) -> TruthTable:
    """Build the truth table of ``text``.

    Variables default to ``x, y, z, w`` (or ``a, b, c, d`` when the first
    identifier is an answer variable); the arity defaults to the highest
    variable used.

    Raises:
        ExpressionSyntaxError: malformed text, with the offending position.
        UnknownVariableError: identifier outside the declared variables.
    """
    if variables is None:
        variables = infer_variables(text, arity)
    elif arity is not None and arity != len(variables):
        raise ArityError(f"arity {arity} does not match {len(variables)} variables")
    _check_arity(len(variables))
    bits = _Parser(text, variables).parse()
    return TruthTable(len(variables), bits)


def format_expr(tt: TruthTable, variables: Optional[Sequence[str]] = None) -> str:
    """Canonical sum of minterms, e.g. ``x*y*z + !x*!y*!z``."""
    names = list(variables or QUESTION_VARS[: tt.arity])
    if tt.bits == 0:
        return "0"
    if tt.bits == tt.full_mask:
        return "1"
    minterms = []
    for k in tt.ones():
        literals = [
            name if bit else "!" + name
            for name, bit in zip(names, index_bits(k, tt.arity))
        ]
        minterms.append("*".join(literals))
    return " + ".join(minterms)
