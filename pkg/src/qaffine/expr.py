"""Formal Q(v)-linear combinations of words in Chevalley symbols.

Words are tuples of symbols ``(kind, index, exp)`` over a residue alphabet
``Z/mZ``; kinds are E, F, K with ``exp`` only meaningful (and possibly -1)
for K.  No quotient relations are imposed here: the layer is the free
algebra, and multiplication is word concatenation extended bilinearly.
Canonical form stores no zero coefficients and orders terms by word length,
then lexicographically; equality and hashing are structural.
"""

from __future__ import annotations

from .scalars import (
    ONE, ParseError, RationalFunction, TokenStream, format_scalar, is_atom_text,
    parse_scalar_stream, qfact, tokenize,
)

E_KIND, F_KIND, K_KIND = 0, 1, 2
_KIND_LETTER = "EFK"
_KIND_CODE = {"E": E_KIND, "F": F_KIND, "K": K_KIND}


def esym(i: int) -> tuple:
    return (E_KIND, i, 1)


def fsym(i: int) -> tuple:
    return (F_KIND, i, 1)


def ksym(i: int, exp: int = 1) -> tuple:
    if exp not in (1, -1):
        raise ValueError("K exponent must be +1 or -1")
    return (K_KIND, i, exp)


def symbol_text(sym: tuple) -> str:
    kind, index, exp = sym
    txt = f"{_KIND_LETTER[kind]}{index}"
    if exp == -1:
        txt += "^-1"
    return txt


def cartan_entry(m: int, i: int, j: int) -> int:
    """Affine type A Cartan pairing on Z/mZ: 2[i=j] - [i=j+1] - [i=j-1].

    For m = 2 both neighbor terms fire on the off-diagonal, giving -2.
    """
    i %= m
    j %= m
    return (2 * (i == j)) - (i == (j + 1) % m) - (i == (j - 1) % m)


def _word_key(word: tuple):
    return (len(word), word)


class Expression:
    """A linear combination of words over the alphabet of size m.  Immutable."""

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, m: int, terms: dict, normalized: bool = False):
        if not normalized:
            terms = {w: c for w, c in terms.items() if not c.is_zero()}
        self.m = m
        self.terms = terms
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(m: int) -> "Expression":
        return Expression(m, {}, normalized=True)

    @staticmethod
    def unit(m: int) -> "Expression":
        return Expression(m, {(): ONE}, normalized=True)

    @staticmethod
    def scalar(m: int, c) -> "Expression":
        if isinstance(c, int):
            c = RationalFunction.from_int(c)
        return Expression(m, {(): c})

    @staticmethod
    def generator(m: int, sym: tuple) -> "Expression":
        if not 0 <= sym[1] < m:
            raise ValueError(f"index {sym[1]} out of range for alphabet of size {m}")
        return Expression(m, {(sym,): ONE}, normalized=True)

    @staticmethod
    def word(m: int, syms, coeff=ONE) -> "Expression":
        syms = tuple(syms)
        for s in syms:
            if not 0 <= s[1] < m:
                raise ValueError(f"index {s[1]} out of range for alphabet of size {m}")
        if isinstance(coeff, int):
            coeff = RationalFunction.from_int(coeff)
        return Expression(m, {syms: coeff})

    # -- structure ----------------------------------------------------

    def items(self):
        return sorted(self.terms.items(), key=lambda t: _word_key(t[0]))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def word_length_bound(self) -> int:
        """Longest word occurring, 0 for scalars and the zero expression."""
        return max((len(w) for w in self.terms), default=0)

    def coefficient(self, word: tuple) -> RationalFunction:
        from .scalars import ZERO
        return self.terms.get(tuple(word), ZERO)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Expression"):
        if self.m != other.m:
            raise ValueError(f"alphabet mismatch: {self.m} vs {other.m}")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            acc = out.get(w)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(w, None)
            else:
                out[w] = acc
        return Expression(self.m, out, normalized=True)

    def __neg__(self):
        return Expression(self.m, {w: -c for w, c in self.terms.items()},
                          normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (RationalFunction, int)):
            return self.scale(other)
        if not isinstance(other, Expression):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                acc = out.get(w)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = acc
        return Expression(self.m, out, normalized=True)

    def __rmul__(self, other):
        if isinstance(other, (RationalFunction, int)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Expression":
        if isinstance(c, int):
            c = RationalFunction.from_int(c)
        if c.is_zero():
            return Expression.zero(self.m)
        return Expression(self.m, {w: x * c for w, x in self.terms.items()},
                          normalized=True)

    def __pow__(self, p: int) -> "Expression":
        if p < 0:
            raise ValueError("negative powers are not defined in the free algebra")
        result = Expression.unit(self.m)
        for _ in range(p):
            result = result * self
        return result

    def _coerce(self, other):
        if isinstance(other, Expression):
            return other
        if isinstance(other, (RationalFunction, int)):
            return Expression.scalar(self.m, other)
        return NotImplemented

    # -- comparison / hashing -------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.m == other.m and self.terms == other.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.m, tuple(self.items())))
        return h

    def __str__(self):
        return format_expression(self)

    def __repr__(self):
        return f"Expression({self.m}, '{format_expression(self)}')"


def divided_power(x: Expression, p: int) -> Expression:
    """x^(p) = x^p / [p]!; p = 0 gives the unit."""
    if p < 0:
        raise ValueError("divided power needs p >= 0")
    return (x ** p).scale(qfact(p).inverse())


def substitute_generators(x: Expression, target_m: int, images: dict) -> Expression:
    """Extend a generator assignment to an algebra map on expressions.

    ``images`` maps symbols over the source alphabet to expressions over the
    target alphabet; every symbol occurring in ``x`` (including K-inverses)
    must have an image.
    """
    out = Expression.zero(target_m)
    cache: dict = {}
    for word, coeff in x.terms.items():
        acc = cache.get(word)
        if acc is None:
            acc = Expression.unit(target_m)
            for sym in word:
                img = images.get(sym)
                if img is None:
                    raise KeyError(f"no image provided for symbol {symbol_text(sym)}")
                acc = acc * img
            cache[word] = acc
        out = out + acc.scale(coeff)
    return out


def random_expression(rng, m: int, max_terms: int = 4, max_len: int = 4) -> Expression:
    """A random normalized expression; drives the parser round-trip suite."""
    terms: dict = {}
    for _ in range(rng.randrange(max_terms + 1)):
        word = []
        for _ in range(rng.randrange(max_len + 1)):
            kind = rng.randrange(3)
            index = rng.randrange(m)
            exp = rng.choice((1, -1)) if kind == K_KIND else 1
            word.append((kind, index, exp))
        coeff = _random_scalar(rng)
        if not coeff.is_zero():
            terms[tuple(word)] = coeff
    return Expression(m, terms)


def _random_scalar(rng) -> RationalFunction:
    num = [rng.randint(-6, 6) for _ in range(rng.randint(1, 4))]
    shift = rng.randint(-3, 3)
    if rng.random() < 0.3:
        den = [rng.randint(-4, 4) for _ in range(rng.randint(1, 3))]
        den[0] = den[0] or 1
        return RationalFunction.make(shift, num, den)
    return RationalFunction.make(shift, num)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def format_expression(x: Expression) -> str:
    """Canonical text; ``parse_expression(format_expression(x), x.m) == x``."""
    if not x.terms:
        return "0"
    parts = []
    for word, coeff in x.items():
        txt = format_scalar(coeff)
        negative = txt.startswith("-")
        if negative:
            txt = format_scalar(-coeff)
        if word:
            body = "*".join(symbol_text(s) for s in word)
            if txt == "1":
                pass
            elif is_atom_text(txt):
                body = f"{txt}*{body}"
            else:
                body = f"({txt})*{body}"
        else:
            body = txt if is_atom_text(txt) else f"({txt})"
        if not parts:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append((" - " if negative else " + ") + body)
    return "".join(parts)


def parse_expression(text: str, m: int) -> Expression:
    """Parse the expression grammar over the alphabet of size m.

    Terms are ``[coeff '*'] factor ('*' factor)*`` or a bare scalar; factors
    are generators ``E0 | F3 | K2 | K2^-1`` with an optional divided power
    ``^(p)``, which is expanded eagerly.
    """
    ts = TokenStream(tokenize(text, gens=True))
    value = _parse_expr(ts, m)
    tok = ts.peek()
    if tok[0] != "END":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return value


def _parse_expr(ts: TokenStream, m: int) -> Expression:
    negate = False
    if ts.peek()[0] == "MINUS":
        ts.next()
        negate = True
    value = _parse_term(ts, m)
    if negate:
        value = -value
    while ts.peek()[0] in ("PLUS", "MINUS"):
        op = ts.next()[0]
        rhs = _parse_term(ts, m)
        value = value + rhs if op == "PLUS" else value - rhs
    return value


def _parse_term(ts: TokenStream, m: int) -> Expression:
    coeff = None
    if ts.peek()[0] in ("INT", "VAR", "LPAR"):
        coeff = _parse_coeff(ts)
        if ts.peek()[0] == "STAR":
            ts.next()
        else:
            return Expression.scalar(m, coeff)
    value = _parse_factor(ts, m)
    while ts.peek()[0] == "STAR":
        ts.next()
        value = value * _parse_factor(ts, m)
    if coeff is not None:
        value = value.scale(coeff)
    return value


def _parse_coeff(ts: TokenStream) -> RationalFunction:
    # A coefficient literal: integers, v-powers, quotients, or any scalar
    # expression inside parentheses.
    kind = ts.peek()[0]
    if kind == "LPAR":
        ts.next()
        value = parse_scalar_stream(ts)
        ts.expect("RPAR")
    else:
        value = _parse_coeff_atom(ts)
    while ts.peek()[0] == "SLASH":
        ts.next()
        if ts.peek()[0] == "LPAR":
            ts.next()
            rhs = parse_scalar_stream(ts)
            ts.expect("RPAR")
        else:
            rhs = _parse_coeff_atom(ts)
        value = value / rhs
    return value


def _parse_coeff_atom(ts: TokenStream) -> RationalFunction:
    kind, val, pos = ts.next()
    if kind == "INT":
        value = RationalFunction.from_int(val)
    elif kind == "VAR":
        from .scalars import V
        value = V
    else:
        raise ParseError(f"expected a coefficient, found {val!r}", pos)
    if ts.peek()[0] == "CARET" and ts.peek(1)[0] in ("INT", "MINUS"):
        ts.next()
        sign = 1
        if ts.peek()[0] == "MINUS":
            ts.next()
            sign = -1
        value = value ** (sign * ts.expect("INT")[1])
    return value


def _parse_factor(ts: TokenStream, m: int) -> Expression:
    kind, val, pos = ts.next()
    if kind != "GEN":
        raise ParseError(f"expected a generator, found {val!r}", pos)
    letter, index = val
    if index >= m:
        raise ParseError(
            f"index {index} out of range for alphabet of size {m}", pos)
    sym = (_KIND_CODE[letter], index, 1)
    if letter == "K" and ts.peek()[0] == "CARET" and ts.peek(1)[0] == "MINUS":
        ts.next()
        ts.next()
        tok = ts.expect("INT")
        if tok[1] != 1:
            raise ParseError("only K^-1 is a generator; use ^(p) for powers", tok[2])
        sym = (K_KIND, index, -1)
    value = Expression.generator(m, sym)
    if ts.peek()[0] == "CARET" and ts.peek(1)[0] == "LPAR":
        ts.next()
        ts.next()
        p = ts.expect("INT")[1]
        ts.expect("RPAR")
        value = divided_power(value, p)
    return value
