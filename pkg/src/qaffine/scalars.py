"""Exact scalars: the field Q(v) of rational functions in one variable.

A value is kept in the canonical shape ``v**shift * num(v) / den(v)`` where
``num`` and ``den`` are integer polynomials with nonzero constant terms, all
divisibility by ``v`` is absorbed into ``shift``, ``gcd(num, den) == 1``
(including the integer contents), and ``den`` has a positive leading
coefficient.  Two values are equal exactly when their canonical shapes are
equal, which makes hashing and memoisation sound.

Quantum integers and factorials live here as well:

>>> qint(3)
RationalFunction('v^2 + 1 + v^-2')
>>> qfact(3)
RationalFunction('v^3 + 2*v + 2*v^-1 + v^-3')
>>> (V - V**-1) * (V + V**-1)
RationalFunction('v^2 - v^-2')
"""

from __future__ import annotations

import os
from fractions import Fraction

if os.environ.get("QAFFINE_PURE"):
    from . import _polycore as _ops
else:
    try:
        from . import _polycore_cy as _ops  # type: ignore[attr-defined]
    except ImportError:
        from . import _polycore as _ops

padd = _ops.padd
pneg = _ops.pneg
pmul = _ops.pmul
pgcd = _ops.pgcd
pdivexact = _ops.pdivexact


def backend_name() -> str:
    """Which polynomial kernel is active: 'compiled' or 'pure'."""
    return "compiled" if _ops.__name__.endswith("_cy") else "pure"


class ParseError(ValueError):
    """Syntax error while parsing; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class RationalFunction:
    """An element of Q(v) in canonical reduced form.  Immutable."""

    __slots__ = ("shift", "num", "den", "_hash")

    def __init__(self, shift: int, num: tuple, den: tuple):
        # Raw constructor: callers must supply canonical data (use make()).
        self.shift = shift
        self.num = num
        self.den = den
        self._hash = None

    # -- construction ------------------------------------------------

    @staticmethod
    def make(shift: int, num, den=(1,)) -> "RationalFunction":
        """Canonicalize arbitrary (shift, num, den) data."""
        num = list(num)
        den = list(den)
        _ops.ptrim(num)
        _ops.ptrim(den)
        if not den:
            raise ZeroDivisionError("division by zero in Q(v)")
        if not num:
            return ZERO
        z = 0
        while num[z] == 0:
            z += 1
        if z:
            num = num[z:]
            shift += z
        if den[0] == 0:
            raise ValueError("denominator divisible by v; fold into shift")
        if den != [1] and den != [-1]:
            g = pgcd(num, den)
            if g != [1]:
                num = pdivexact(num, g)
                den = pdivexact(den, g)
        if den[-1] < 0:
            num = pneg(num)
            den = pneg(den)
        return RationalFunction(shift, tuple(num), tuple(den))

    @staticmethod
    def from_int(n: int) -> "RationalFunction":
        if n == 0:
            return ZERO
        return RationalFunction(0, (n,), (1,))

    @staticmethod
    def monomial(coef: int, power: int) -> "RationalFunction":
        if coef == 0:
            return ZERO
        return RationalFunction(power, (coef,), (1,))

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == (1,) and other.den == (1,):
            s = min(self.shift, other.shift)
            a = [0] * (self.shift - s) + list(self.num)
            b = [0] * (other.shift - s) + list(other.num)
            return RationalFunction.make(s, padd(a, b))
        s = min(self.shift, other.shift)
        a = [0] * (self.shift - s) + list(self.num)
        b = [0] * (other.shift - s) + list(other.num)
        n = padd(pmul(a, list(other.den)), pmul(b, list(self.den)))
        return RationalFunction.make(s, n, pmul(list(self.den), list(other.den)))

    __radd__ = __add__

    def __neg__(self):
        if not self.num:
            return self
        return RationalFunction(self.shift, tuple(-x for x in self.num), self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        if self.den == (1,) and other.den == (1,):
            if len(self.num) == 1:
                c = self.num[0]
                return RationalFunction.make(
                    self.shift + other.shift, [c * x for x in other.num])
            if len(other.num) == 1:
                c = other.num[0]
                return RationalFunction.make(
                    self.shift + other.shift, [c * x for x in self.num])
            return RationalFunction.make(
                self.shift + other.shift, pmul(list(self.num), list(other.num)))
        return RationalFunction.make(
            self.shift + other.shift,
            pmul(list(self.num), list(other.num)),
            pmul(list(self.den), list(other.den)))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("division by zero in Q(v)")
        return RationalFunction.make(-self.shift, self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def bar(self) -> "RationalFunction":
        """The involution v -> v**-1."""
        num = list(reversed(self.num))
        den = list(reversed(self.den))
        # reversing re-anchors degree 0 at the old leading term
        s = -(self.shift + len(self.num) - 1) + (len(self.den) - 1)
        return RationalFunction.make(s, num, den)

    # -- comparison / hashing ------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (self.num == other.num and self.den == other.den
                and (self.shift == other.shift or not self.num))

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.shift, self.num, self.den))
        return h

    # -- evaluation -----------------------------------------------------

    def evaluate(self, v0) -> Fraction:
        """Exact value at v = v0 (a nonzero Fraction or int)."""
        v0 = Fraction(v0)
        if v0 == 0:
            raise ValueError("evaluation point must be nonzero")
        den = _horner(self.den, v0)
        if den == 0:
            raise ZeroDivisionError(f"pole at v = {v0}")
        return v0 ** self.shift * _horner(self.num, v0) / den

    # -- rendering --------------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"RationalFunction('{format_scalar(self)}')"


def _coerce(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, int):
        return RationalFunction.from_int(x)
    return NotImplemented


def _horner(coeffs: tuple, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


ZERO = RationalFunction(0, (), (1,))
ONE = RationalFunction(0, (1,), (1,))
V = RationalFunction(1, (1,), (1,))

_vpow_cache: dict = {}


def vpow(k: int) -> RationalFunction:
    """The monomial v**k (cached)."""
    r = _vpow_cache.get(k)
    if r is None:
        r = _vpow_cache[k] = RationalFunction(k, (1,), (1,))
    return r


def qint(a: int) -> RationalFunction:
    """The quantum integer [a] = (v^a - v^-a) / (v - v^-1), for a >= 0."""
    if a < 0:
        raise ValueError("quantum integer defined for nonnegative a only")
    if a == 0:
        return ZERO
    return RationalFunction(-(a - 1), tuple(1 - i % 2 for i in range(2 * a - 1)), (1,))


_qfact_cache = [ONE]


def qfact(a: int) -> RationalFunction:
    """The quantum factorial [a]! = [a][a-1]...[1], with [0]! = 1."""
    if a < 0:
        raise ValueError("quantum factorial defined for nonnegative a only")
    while len(_qfact_cache) <= a:
        b = len(_qfact_cache)
        _qfact_cache.append(_qfact_cache[b - 1] * qint(b))
    return _qfact_cache[a]


def evaluate_at(x: RationalFunction, v0) -> Fraction:
    return x.evaluate(v0)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def _vpow_text(k: int) -> str:
    return "v" if k == 1 else f"v^{k}"


def _laurent_text(shift: int, coeffs: tuple) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        k = shift + i
        mag = abs(c)
        if k == 0:
            body = str(mag)
        elif mag == 1:
            body = _vpow_text(k)
        else:
            body = f"{mag}*{_vpow_text(k)}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def format_scalar(x: RationalFunction) -> str:
    """Canonical text form, e.g. ``v^3 + 2*v + 2*v^-1 + v^-3`` or ``v / (v^2 + 1)``."""
    if not x.num:
        return "0"
    num_txt = _laurent_text(x.shift, x.num)
    if x.den == (1,):
        return num_txt
    if _term_count(x.num) > 1:
        num_txt = f"({num_txt})"
    den_txt = _laurent_text(0, x.den)
    if _term_count(x.den) > 1:
        den_txt = f"({den_txt})"
    return f"{num_txt} / {den_txt}"


def _term_count(coeffs: tuple) -> int:
    return sum(1 for c in coeffs if c)


def is_atom_text(txt: str) -> bool:
    """True when the rendering needs no parentheses as an expression coefficient."""
    body = txt[1:] if txt.startswith("-") else txt
    if body.isdigit():
        return True
    if body == "v":
        return True
    if body.startswith("v^"):
        rest = body[2:]
        return rest.lstrip("-").isdigit()
    return False


# ---------------------------------------------------------------------------
# tokenizer and scalar parser (shared with the expression grammar)
# ---------------------------------------------------------------------------

_PUNCT = {"+": "PLUS", "-": "MINUS", "*": "STAR", "/": "SLASH",
          "^": "CARET", "(": "LPAR", ")": "RPAR", ",": "COMMA",
          "[": "LBRACK", "]": "RBRACK"}


def tokenize(text: str, gens: bool = False) -> list:
    """Tokens are (kind, value, pos).  With gens=True, E/F/K symbols and 'u'
    (tensor basis) are recognized as GEN/U tokens."""
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("INT", int(text[i:j]), i))
            i = j
            continue
        if ch == "v" and not (i + 1 < n and text[i + 1].isalnum()):
            out.append(("VAR", "v", i))
            i += 1
            continue
        if gens and ch in "EFK":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError(f"generator '{ch}' needs an index", i)
            out.append(("GEN", (ch, int(text[i + 1:j])), i))
            i = j
            continue
        if gens and ch == "u" and i + 1 < n and text[i + 1] == "[":
            out.append(("U", "u", i))
            i += 1
            continue
        kind = _PUNCT.get(ch)
        if kind is None:
            raise ParseError(f"unexpected character {ch!r}", i)
        out.append((kind, ch, i))
        i += 1
    out.append(("END", None, n))
    return out


class TokenStream:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.i = 0

    def peek(self, ahead: int = 0):
        j = min(self.i + ahead, len(self.tokens) - 1)
        return self.tokens[j]

    def next(self):
        tok = self.tokens[self.i]
        if tok[0] != "END":
            self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok


def parse_scalar_stream(ts: TokenStream) -> RationalFunction:
    """Parse a scalar (sum/product/power) expression from a token stream."""
    value = _scalar_term(ts)
    while ts.peek()[0] in ("PLUS", "MINUS"):
        op = ts.next()[0]
        rhs = _scalar_term(ts)
        value = value + rhs if op == "PLUS" else value - rhs
    return value


def _scalar_term(ts: TokenStream) -> RationalFunction:
    value = _scalar_factor(ts)
    while ts.peek()[0] in ("STAR", "SLASH"):
        op = ts.next()[0]
        rhs = _scalar_factor(ts)
        value = value * rhs if op == "STAR" else value / rhs
    return value


def _scalar_factor(ts: TokenStream) -> RationalFunction:
    if ts.peek()[0] == "MINUS":
        ts.next()
        return -_scalar_factor(ts)
    value = _scalar_atom(ts)
    if ts.peek()[0] == "CARET":
        ts.next()
        value = value ** _signed_int(ts)
    return value


def _scalar_atom(ts: TokenStream) -> RationalFunction:
    kind, val, pos = ts.next()
    if kind == "INT":
        return RationalFunction.from_int(val)
    if kind == "VAR":
        return V
    if kind == "LPAR":
        value = parse_scalar_stream(ts)
        ts.expect("RPAR")
        return value
    raise ParseError(f"expected a scalar, found {val!r}", pos)


def _signed_int(ts: TokenStream) -> int:
    sign = 1
    if ts.peek()[0] == "MINUS":
        ts.next()
        sign = -1
    tok = ts.expect("INT")
    return sign * tok[1]


def parse_scalar(text: str) -> RationalFunction:
    ts = TokenStream(tokenize(text))
    value = parse_scalar_stream(ts)
    tok = ts.peek()
    if tok[0] != "END":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return value
