"""Expression grammar, parser and printers for algebra and tensor elements.

Grammar (whitespace-insensitive)::

    expr    := ['-'] term (('+' | '-') term)*
    term    := factor ( ('*' | '(*)' | '⊗')? factor )*      # juxtaposition multiplies
    factor  := '-' factor | scalar | generator | letter
             | 'd' '(' expr ')' | '(' expr ')'
    scalar  := rational | 'q' | '[' int ']_q'
    generator := 'x' digits            # x1 .. xn
    letter  := 'dx' digits | 'd2x' digits

``d(...)`` applies the differential during evaluation and only accepts a
grade-0 argument; higher forms are entered through letters.  ``d3x1`` and
beyond are rejected outright: d^3 x^i = 0.

The printers emit exactly this grammar, so every printed element parses
back to an equal value.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .scalar import Scalar, ONE, format_scalar, q_integer
from .freealg import AlgebraElement
from .tensoralg import TensorElement, tensor_mul
from .calculus import Calculus


class ParseError(ValueError):
    """Syntax or evaluation error, annotated with a character position."""

    def __init__(self, message: str, position: int, source: str = ""):
        self.position = position
        self.source = source
        super().__init__(f"{message} (at position {position})")


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<tensor>\(\*\)|⊗)
  | (?P<qint>\[\s*\d+\s*\]_q)
  | (?P<number>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>[+\-*()])
""", re.VERBOSE)

_LETTER_NAME_RE = re.compile(r"^d(\d*)x(\d+)$")


def _tokenize(src: str):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        if not m.group("ws"):
            kind = m.lastgroup
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    """Recursive-descent evaluator producing canonical elements directly."""

    def __init__(self, src: str, n: int, calc: Calculus | None):
        self.src = src
        self.n = n
        self.calc = calc  # None = algebra-only mode (no letters, no d)
        self.tokens = _tokenize(src)
        self.idx = 0

    # -- token plumbing ------------------------------------------------------

    def peek(self):
        return self.tokens[self.idx]

    def advance(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.peek()
        if kind == "op" and value == op:
            return self.advance()
        raise ParseError(f"expected {op!r}", pos, self.src)

    def fail(self, message):
        _, _, pos = self.peek()
        raise ParseError(message, pos, self.src)

    # -- value helpers ---------------------------------------------------------

    def _of_scalar(self, s: Scalar) -> TensorElement:
        return TensorElement.of_algebra(AlgebraElement.scalar(self.n, s))

    def _mul(self, a: TensorElement, b: TensorElement) -> TensorElement:
        if self.calc is None:
            # algebra-only mode keeps everything in grade 0
            ua = a.terms.get((), AlgebraElement.zero(self.n))
            ub = b.terms.get((), AlgebraElement.zero(self.n))
            return TensorElement.of_algebra(ua * ub)
        return tensor_mul(self.calc.bmap, a, b)

    # -- grammar ---------------------------------------------------------------

    def parse(self) -> TensorElement:
        value = self.expr()
        kind, tok_value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {tok_value!r}", pos, self.src)
        return value

    def expr(self) -> TensorElement:
        kind, value, _ = self.peek()
        negate = False
        if kind == "op" and value == "-":
            self.advance()
            negate = True
        out = self.term()
        if negate:
            out = -out
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                out = out + rhs if value == "+" else out - rhs
            else:
                return out

    _FACTOR_STARTS = {"qint", "number", "name", "tensor"}

    def _starts_factor(self):
        kind, value, _ = self.peek()
        if kind in ("qint", "number", "name"):
            return True
        return kind == "op" and value in ("(", "-")

    def term(self) -> TensorElement:
        out = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "tensor" or (kind == "op" and value == "*"):
                self.advance()
                out = self._mul(out, self.factor())
            elif self._starts_factor() and not (self.peek()[1] == "-"):
                # juxtaposition; a '-' always binds as subtraction instead
                out = self._mul(out, self.factor())
            else:
                return out

    def factor(self) -> TensorElement:
        kind, value, pos = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return -self.factor()
        if kind == "op" and value == "(":
            self.advance()
            out = self.expr()
            self.expect_op(")")
            return out
        if kind == "qint":
            self.advance()
            n = int(re.search(r"\d+", value).group())
            return self._of_scalar(q_integer(n))
        if kind == "number":
            self.advance()
            return self._of_scalar(Scalar(Fraction(value)))
        if kind == "name":
            return self.name_factor()
        raise ParseError(f"expected a value, found {value!r}" if value
                         else "unexpected end of input", pos, self.src)

    def name_factor(self) -> TensorElement:
        kind, value, pos = self.advance()
        if value == "q":
            return self._of_scalar(Scalar(0, 1))
        if value == "d":
            if self.calc is None:
                raise ParseError("differential not allowed here", pos, self.src)
            self.expect_op("(")
            inner = self.expr()
            self.expect_op(")")
            if any(dword for dword in inner.terms):
                raise ParseError(
                    "d(...) takes a grade-0 argument; enter forms with letters",
                    pos, self.src)
            from .differential import d as apply_d
            return apply_d(self.calc, inner)
        if value.startswith("x") and value[1:].isdigit():
            index = int(value[1:])
            if not 1 <= index <= self.n:
                raise ParseError(f"unknown generator {value!r} (n = {self.n})",
                                 pos, self.src)
            return TensorElement.of_algebra(AlgebraElement.generator(self.n, index))
        m = _LETTER_NAME_RE.match(value)
        if m:
            if self.calc is None:
                raise ParseError("letters not allowed here", pos, self.src)
            grade = int(m.group(1) or "1")
            index = int(m.group(2))
            if grade == 0 or grade > 2:
                raise ParseError(
                    f"no grade-{grade} letters: d^3 x^i = 0", pos, self.src)
            if not 1 <= index <= self.n:
                raise ParseError(f"unknown generator index in {value!r} (n = {self.n})",
                                 pos, self.src)
            return TensorElement.of_letter(self.n, grade, index)
        raise ParseError(f"unknown name {value!r}", pos, self.src)


def parse_expression(src: str, calc: Calculus) -> TensorElement:
    """Parse a tensor-algebra expression against a calculus context."""
    return _Parser(src, calc.n, calc).parse()


def parse_algebra(src: str, n: int) -> AlgebraElement:
    """Parse a plain algebra expression (scalars, generators, + - *)."""
    value = _Parser(src, n, None).parse()
    return value.terms.get((), AlgebraElement.zero(n))


# -- text printers -----------------------------------------------------------


def _split_sign(s: Scalar):
    if s.a < 0 or (s.a == 0 and s.b < 0):
        return "-", -s
    return "+", s


def _scalar_factor_text(s: Scalar) -> str:
    text = format_scalar(s)
    return f"({text})" if (" " in text) else text


def _algebra_term_text(word, coeff: Scalar):
    sign, mag = _split_sign(coeff)
    pieces = []
    if mag != ONE or not word:
        pieces.append(_scalar_factor_text(mag))
    pieces.extend(f"x{i}" for i in word)
    return sign, "*".join(pieces)


def _join_signed(parts) -> str:
    out = []
    for sign, text in parts:
        if not out:
            out.append(text if sign == "+" else f"-{text}")
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


def format_algebra(u: AlgebraElement) -> str:
    if u.is_zero:
        return "0"
    return _join_signed(_algebra_term_text(w, c) for w, c in u.sorted_terms())


def _letter_text(grade: int, index: int) -> str:
    return f"dx{index}" if grade == 1 else f"d2x{index}"


def format_tensor(e: TensorElement) -> str:
    if e.is_zero:
        return "0"
    parts = []
    for dword, coeff in e.sorted_terms():
        if not dword:
            parts.extend(_algebra_term_text(w, c) for w, c in coeff.sorted_terms())
            continue
        head = " (*) ".join(_letter_text(a, i) for a, i in dword)
        if len(coeff.terms) == 1:
            ((word, s),) = coeff.terms.items()
            sign, mag = _split_sign(s)
            tail = []
            if mag != ONE:
                tail.append(_scalar_factor_text(mag))
            tail.extend(f"x{i}" for i in word)
            text = head if not tail else head + " * " + "*".join(tail)
            parts.append((sign, text))
        else:
            parts.append(("+", f"{head} * ({format_algebra(coeff)})"))
    return _join_signed(parts)


# -- LaTeX printers ----------------------------------------------------------


def _scalar_latex(s: Scalar) -> str:
    def rat(r):
        return str(r) if r.denominator == 1 else \
            rf"\frac{{{r.numerator}}}{{{r.denominator}}}"

    if not s:
        return "0"
    parts = []
    if s.a:
        parts.append(rat(s.a))
    if s.b:
        if s.b == 1:
            text = "q"
        elif s.b == -1:
            text = "-q"
        else:
            text = rat(s.b) + "q"
        parts.append(("+ " + text if not text.startswith("-") else "- " + text[1:])
                     if parts else text)
    return " ".join(parts)


def format_algebra_latex(u: AlgebraElement) -> str:
    if u.is_zero:
        return "0"
    chunks = []
    for word, coeff in u.sorted_terms():
        word_tex = "".join(rf"x^{{{i}}}" for i in word)
        scalar_tex = _scalar_latex(coeff)
        if " " in scalar_tex:
            scalar_tex = rf"\left({scalar_tex}\right)"
        if word and coeff == ONE:
            chunks.append(word_tex)
        else:
            chunks.append(scalar_tex + (r"\," + word_tex if word else ""))
    return " + ".join(chunks)


def format_tensor_latex(e: TensorElement) -> str:
    if e.is_zero:
        return "0"
    chunks = []
    for dword, coeff in e.sorted_terms():
        letters = r"\otimes ".join(
            rf"dx^{{{i}}}" if a == 1 else rf"d^{{2}}x^{{{i}}}" for a, i in dword)
        coeff_tex = format_algebra_latex(coeff)
        if not dword:
            chunks.append(coeff_tex)
        elif coeff == AlgebraElement.one(e.n):
            chunks.append(letters)
        elif len(coeff.terms) > 1 or " + " in coeff_tex:
            chunks.append(letters + r"\,\left(" + coeff_tex + r"\right)")
        else:
            chunks.append(letters + r"\," + coeff_tex)
    return " + ".join(chunks)


# -- structured (JSON-ready) serialization ------------------------------------


def scalar_to_obj(s: Scalar):
    return {"a": str(s.a), "b": str(s.b)}


def algebra_to_obj(u: AlgebraElement):
    return [{"word": list(w), "scalar": scalar_to_obj(c)}
            for w, c in u.sorted_terms()]


def tensor_to_obj(e: TensorElement):
    return [{"letters": [[a, i] for a, i in dword],
             "coefficient": algebra_to_obj(coeff)}
            for dword, coeff in e.sorted_terms()]
