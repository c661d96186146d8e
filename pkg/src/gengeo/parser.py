"""Expression language for forms, sections and constant matrices.

Precedence, loosest first: ``+ -``, then ``^`` (wedge), then ``*``
(product), then unary minus.  See docs/grammar.md for the EBNF.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .exterior import MAX_DIM, Multivector, blade_indices, exp_even, popcount
from .poly import Poly, PolyForm, PolySection
from .scalar import I, ONE, ZERO, Scalar

__all__ = [
    "ParseError",
    "Node",
    "parse",
    "parse_expr",
    "evaluate",
    "parse_matrix",
    "to_text",
    "max_index",
    "as_constant",
]


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"syntax error at column {column}: {message}")
        self.column = column
        self.reason = message


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^/(),;]))")


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    column: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = mt.lastgroup
        start = mt.start(kind)
        out.append(Token(kind, mt.group(kind), start + 1))
        pos = mt.end()
    out.append(Token("end", "", len(text) + 1))
    return out


@dataclass(frozen=True)
class Node:
    op: str  # num, i, x, dx, e, exp, neg, add, sub, wedge, mul
    args: Tuple = ()
    value: object = None
    column: int = 0


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            raise ParseError(f"expected {text!r}, found {self._found()}", self.tok.column)
        return self.advance()

    def _found(self) -> str:
        return "end of input" if self.tok.kind == "end" else repr(self.tok.text)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"expected '+', '-', '^', '*' or end of input, found {self._found()}", self.tok.column)
        return node

    def expr(self) -> Node:
        node = self.wedge()
        while self.tok.text in ("+", "-"):
            t = self.advance()
            rhs = self.wedge()
            node = Node("add" if t.text == "+" else "sub", (node, rhs), column=t.column)
        return node

    def wedge(self) -> Node:
        node = self.product()
        while self.tok.text == "^":
            t = self.advance()
            node = Node("wedge", (node, self.product()), column=t.column)
        return node

    def product(self) -> Node:
        node = self.unary()
        while self.tok.text == "*":
            t = self.advance()
            node = Node("mul", (node, self.unary()), column=t.column)
        return node

    def unary(self) -> Node:
        if self.tok.text == "-":
            t = self.advance()
            return Node("neg", (self.unary(),), column=t.column)
        return self.atom()

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            value = Fraction(int(t.text))
            if self.tok.text == "/":
                self.advance()
                d = self.tok
                if d.kind != "num":
                    raise ParseError(f"expected a denominator, found {self._found()}", d.column)
                self.advance()
                if int(d.text) == 0:
                    raise ParseError("zero denominator", d.column)
                value = value / int(d.text)
            return Node("num", value=value, column=t.column)
        if t.kind == "name":
            self.advance()
            if t.text == "i":
                return Node("i", column=t.column)
            if t.text == "exp":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Node("exp", (inner,), column=t.column)
            mt = re.fullmatch(r"(dx|x|e)(\d+)", t.text)
            if mt and int(mt.group(2)) >= 1:
                return Node(mt.group(1), value=int(mt.group(2)), column=t.column)
            raise ParseError(f"unknown name {t.text!r}", t.column)
        if t.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"expected a number, i, xN, dxN, eN, exp( or '(', found {self._found()}", t.column)


def parse(text: str) -> Node:
    return _Parser(text).parse()


def max_index(node: Node) -> int:
    here = node.value if node.op in ("x", "dx", "e") else 0
    return max([here] + [max_index(a) for a in node.args])


# -- evaluation -----------------------------------------------------------

@dataclass
class _Val:
    form: PolyForm
    vec: Optional[Tuple[Poly, ...]] = None  # tangent part, if any

    def is_function(self) -> bool:
        return self.vec is None and self.form.grades() in ((), (0,))


def _err(node: Node, msg: str) -> ParseError:
    return ParseError(msg, node.column)


def _eval(node: Node, n: int) -> _Val:
    op = node.op
    if op == "num":
        return _Val(PolyForm(n, {0: Poly.const(n, node.value)}))
    if op == "i":
        return _Val(PolyForm(n, {0: Poly.const(n, I)}))
    if op in ("x", "dx", "e"):
        k = node.value
        if k > n:
            raise _err(node, f"index {k} exceeds dimension {n}")
        if op == "x":
            return _Val(PolyForm(n, {0: Poly.var(n, k)}))
        if op == "dx":
            return _Val(PolyForm(n, {1 << (k - 1): 1}))
        vec = tuple(Poly.const(n, 1 if j == k - 1 else 0) for j in range(n))
        return _Val(PolyForm(n), vec)
    if op == "neg":
        v = _eval(node.args[0], n)
        return _Val(-v.form, None if v.vec is None else tuple(-c for c in v.vec))
    if op in ("add", "sub"):
        a, b = (_eval(x, n) for x in node.args)
        if op == "sub":
            b = _Val(-b.form, None if b.vec is None else tuple(-c for c in b.vec))
        if a.vec is None and b.vec is None:
            vec = None
        else:
            za = a.vec or tuple(Poly(n) for _ in range(n))
            zb = b.vec or tuple(Poly(n) for _ in range(n))
            vec = tuple(x + y for x, y in zip(za, zb))
        return _Val(a.form + b.form, vec)
    if op in ("mul", "wedge"):
        a, b = (_eval(x, n) for x in node.args)
        if a.vec is not None or b.vec is not None:
            f, v = (a, b) if b.vec is not None else (b, a)
            if not f.is_function() or (a.vec is not None and b.vec is not None):
                raise _err(node, "tangent vectors can only be multiplied by functions")
            c = f.form.coeff(0)
            return _Val(v.form * c, tuple(x * c for x in v.vec))
        return _Val(a.form.wedge(b.form))
    if op == "exp":
        v = _eval(node.args[0], n)
        if v.vec is not None:
            raise _err(node, "exp of a tangent vector")
        mv = as_constant(v.form)
        if mv is None:
            raise _err(node, "exp needs constant coefficients")
        if mv.scalar_part():
            raise _err(node, "exp argument must have no degree-0 part")
        if not mv:
            return _Val(PolyForm(n, {0: 1}))
        try:
            return _Val(PolyForm.from_multivector(exp_even(mv)))
        except ValueError as exc:
            raise _err(node, str(exc)) from None
    raise _err(node, f"unknown node {op}")  # pragma: no cover


def as_constant(f: PolyForm) -> Optional[Multivector]:
    terms = {}
    for b, c in f.items():
        if not c.is_const():
            return None
        terms[b] = c.const_value()
    return Multivector(f.dim, terms)


def evaluate(node: Node, dim: Optional[int] = None) -> Union[Multivector, PolyForm, PolySection]:
    """Constant forms come back as Multivector, others as PolyForm, sections as PolySection."""
    n = dim if dim is not None else max(max_index(node), 1)
    if not 1 <= n <= MAX_DIM:
        raise ParseError(f"dimension {n} out of range 1..{MAX_DIM}", 1)
    if dim is not None and max_index(node) > dim:
        _eval(node, n)  # raises with the offending position
    v = _eval(node, n)
    if v.vec is not None:
        if v.form.grades() not in ((), (1,)):
            raise ParseError("a section needs a 1-form cotangent part", node.column)
        return PolySection.from_form(list(v.vec), v.form)
    mv = as_constant(v.form)
    return mv if mv is not None else v.form


def parse_expr(text: str, dim: Optional[int] = None):
    return evaluate(parse(text), dim)


def parse_matrix(text: str, dim: Optional[int] = None) -> Tuple[Tuple[Scalar, ...], ...]:
    """Rows separated by ';', entries by ','; entries are constant scalar expressions."""
    rows = []
    offset = 0
    for row_text in text.split(";"):
        row = []
        col_offset = offset
        for entry in row_text.split(","):
            try:
                v = parse_expr(entry, 1)
            except ParseError as exc:
                raise ParseError(exc.reason, col_offset + exc.column) from None
            if not isinstance(v, Multivector) or v.grades() not in ((), (0,)):
                raise ParseError("matrix entries must be constant scalars", col_offset + 1)
            row.append(v.scalar_part())
            col_offset += len(entry) + 1
        rows.append(tuple(row))
        offset += len(row_text) + 1
    if len({len(r) for r in rows}) != 1:
        raise ParseError("rows of different lengths", 1)
    if dim is not None and len(rows) != dim:
        raise ParseError(f"expected a {dim}x{dim} matrix", 1)
    return tuple(rows)


# -- printing -------------------------------------------------------------

def _coeff_text(c) -> str:
    s = str(c)
    if re.fullmatch(r"-?\d+(/\d+)?", s) or re.fullmatch(r"x\d+(\*x\d+)*", s):
        return s
    return f"({s})"


def _term(c, name: str) -> str:
    if isinstance(c, Poly) and c.is_const():
        c = c.const_value()
    if not name:
        return _coeff_text(c)
    if c == ONE:
        return name
    if c == -ONE:
        return f"-{name}"
    return f"{_coeff_text(c)}*{name}"


def to_text(value) -> str:
    """Canonical text that parses back to an equal value."""
    if isinstance(value, Scalar):
        return str(value)
    if isinstance(value, PolySection):
        parts = [_term(c, f"e{k + 1}") for k, c in enumerate(value.tangent) if not c.is_zero()]
        parts += [_term(c, f"dx{k + 1}") for k, c in enumerate(value.cotangent) if not c.is_zero()]
        return _join(parts)
    if isinstance(value, (Multivector, PolyForm)):
        parts = []
        for b in sorted(dict(value.items()), key=lambda b: (popcount(b), blade_indices(b))):
            name = "^".join(f"dx{k + 1}" for k in blade_indices(b))
            parts.append(_term(value.coeff(b), name))
        return _join(parts)
    raise TypeError(f"cannot print {type(value).__name__}")


def _join(parts: List[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out
