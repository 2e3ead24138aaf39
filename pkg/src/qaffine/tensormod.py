"""The level-zero row module and its tensor powers, truncated to a window.

Basis vectors of the rank-m module are indexed by integers; the d-fold
tensor power has basis keyed by integer d-tuples.  Generators act through
the iterated coproduct:

    E_i  ->  sum_j  K_i x ... x K_i x E_i(slot j) x 1 x ... x 1
    F_i  ->  sum_j  1 x ... x 1 x F_i(slot j) x K_i^-1 x ... x K_i^-1
    K_i  ->  K_i x ... x K_i

with the slot actions E_i u_k = [k = i+1 mod m] u_{k-1},
F_i u_k = [k = i mod m] u_{k+1}, and K_i u_k = v^([k=i]-[k=i+1]) u_k.

Truncation contract: a word of length L moves each index by at most L, so
acting on keys whose margin to the window ends is at least L is exact.
Operator equality is decided on every safe basis key of the window.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .expr import E_KIND, F_KIND, K_KIND, Expression, cartan_entry
from .report import Check, checked
from .scalars import (
    ONE, ParseError, RationalFunction, TokenStream, V, ZERO, format_scalar,
    is_atom_text, tokenize, vpow,
)

INV_VMV = (V - V ** -1).inverse()


class WindowError(ValueError):
    """The window cannot absorb the required margin."""


@dataclass(frozen=True)
class ModuleContext:
    m: int
    d: int
    window: tuple = (-8, 8)

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("alphabet size must be at least 2")
        if self.d < 1:
            raise ValueError("tensor exponent must be at least 1")
        if self.window[0] >= self.window[1]:
            raise ValueError("window must satisfy lo < hi")

    def margin(self, key: tuple) -> int:
        lo, hi = self.window
        return min(min(k - lo, hi - k) for k in key)

    def safe_keys(self, length_bound: int):
        """All basis keys whose margin covers the given word length."""
        lo, hi = self.window
        lo += length_bound
        hi -= length_bound
        if lo > hi:
            raise WindowError(
                f"window {self.window} has no keys with margin {length_bound}")
        return itertools.product(range(lo, hi + 1), repeat=self.d)


class TensorVector:
    """Finitely supported exact vector in the truncated tensor power."""

    __slots__ = ("ctx", "entries")

    def __init__(self, ctx: ModuleContext, entries: dict, normalized: bool = False):
        if not normalized:
            lo, hi = ctx.window
            for key in entries:
                if len(key) != ctx.d:
                    raise ValueError(f"key {key} does not have {ctx.d} components")
                if not all(lo <= k <= hi for k in key):
                    raise WindowError(f"key {key} outside window {ctx.window}")
            entries = {k: c for k, c in entries.items() if not c.is_zero()}
        self.ctx = ctx
        self.entries = entries

    @staticmethod
    def zero(ctx: ModuleContext) -> "TensorVector":
        return TensorVector(ctx, {}, normalized=True)

    @staticmethod
    def basis(ctx: ModuleContext, key) -> "TensorVector":
        return TensorVector(ctx, {tuple(key): ONE})

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "TensorVector") -> "TensorVector":
        if self.ctx != other.ctx:
            raise ValueError("context mismatch")
        out = dict(self.entries)
        for k, c in other.entries.items():
            acc = out.get(k)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(k, None)
            else:
                out[k] = acc
        return TensorVector(self.ctx, out, normalized=True)

    def __sub__(self, other: "TensorVector") -> "TensorVector":
        return self + other.scale(RationalFunction.from_int(-1))

    def scale(self, c) -> "TensorVector":
        if isinstance(c, int):
            c = RationalFunction.from_int(c)
        if c.is_zero():
            return TensorVector.zero(self.ctx)
        return TensorVector(self.ctx, {k: x * c for k, x in self.entries.items()},
                            normalized=True)

    def __eq__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        return self.ctx == other.ctx and self.entries == other.entries

    def __hash__(self):
        return hash((self.ctx, tuple(sorted(self.entries.items()))))

    def __str__(self):
        return format_vector(self)

    def __repr__(self):
        return f"TensorVector({self.ctx.m}, {self.ctx.d}, '{format_vector(self)}')"


def _k_exponent(m: int, i: int, k: int) -> int:
    r = k % m
    return (1 if r == i else 0) - (1 if r == (i + 1) % m else 0)


def _act_symbol_raw(ctx: ModuleContext, sym: tuple, entries: dict) -> dict:
    """One letter on a dict of entries; caller guarantees margins."""
    m, d = ctx.m, ctx.d
    kind, i, exp = sym
    out: dict = {}
    if kind == K_KIND:
        for key, c in entries.items():
            w = exp * sum(_k_exponent(m, i, k) for k in key)
            _accumulate(out, key, c if w == 0 else c * vpow(w))
        return out
    if kind == E_KIND:
        hit = (i + 1) % m
        for key, c in entries.items():
            w = 0
            for t in range(d):
                kt = key[t]
                if kt % m == hit:
                    new = key[:t] + (kt - 1,) + key[t + 1:]
                    _accumulate(out, new, c if w == 0 else c * vpow(w))
                w += _k_exponent(m, i, kt)
        return out
    hit = i % m
    for key, c in entries.items():
        w = -sum(_k_exponent(m, i, k) for k in key)
        for t in range(d):
            kt = key[t]
            w += _k_exponent(m, i, kt)
            if kt % m == hit:
                new = key[:t] + (kt + 1,) + key[t + 1:]
                _accumulate(out, new, c if w == 0 else c * vpow(w))
    return out


def _accumulate(out: dict, key: tuple, c: RationalFunction) -> None:
    acc = out.get(key)
    acc = c if acc is None else acc + c
    if acc.is_zero():
        out.pop(key, None)
    else:
        out[key] = acc


def act_generator(ctx: ModuleContext, sym: tuple, key) -> TensorVector:
    """A single Chevalley letter on a basis key (margin at least 1 required)."""
    key = tuple(key)
    if ctx.margin(key) < 1:
        raise WindowError(f"key {key} has margin < 1 in window {ctx.window}")
    return TensorVector(ctx, _act_symbol_raw(ctx, sym, {key: ONE}), normalized=True)


def act_expression(ctx: ModuleContext, x: Expression, vec: TensorVector) -> TensorVector:
    """Exact action of an expression; requires margin >= word length bound."""
    if x.m != ctx.m:
        raise ValueError(f"expression alphabet {x.m} does not match module rank {ctx.m}")
    bound = x.word_length_bound()
    for key in vec.entries:
        if ctx.margin(key) < bound:
            raise WindowError(
                f"key {key} has margin {ctx.margin(key)} < required {bound}")
    total: dict = {}
    for word, coeff in x.terms.items():
        cur = vec.entries
        for sym in reversed(word):
            cur = _act_symbol_raw(ctx, sym, cur)
            if not cur:
                break
        for key, c in cur.items():
            _accumulate(total, key, c * coeff)
    return TensorVector(ctx, total, normalized=True)


def operators_equal_on_window(ctx: ModuleContext, a: Expression, b: Expression):
    """Compare two operators on every safe basis key.

    Returns (True, None) or (False, witness) with the first differing key and
    both images.
    """
    bound = max(a.word_length_bound(), b.word_length_bound())
    for key in ctx.safe_keys(bound):
        u = TensorVector.basis(ctx, key)
        va = act_expression(ctx, a, u)
        vb = act_expression(ctx, b, u)
        if va != vb:
            return False, {
                "key": list(key),
                "lhs": format_vector(va),
                "rhs": format_vector(vb),
            }
    return True, None


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def weight_of_key(ctx: ModuleContext, key) -> tuple:
    """Content of a key by residue class, with representatives 1..m.

    The i-th part counts components congruent to i; the last part counts
    components congruent to 0.
    """
    parts = [0] * ctx.m
    for k in key:
        r = k % ctx.m
        parts[r - 1 if r else ctx.m - 1] += 1
    return tuple(parts)


def project_weight(ctx: ModuleContext, lam, vec: TensorVector) -> TensorVector:
    lam = tuple(lam)
    if sum(lam) != ctx.d:
        raise ValueError(f"composition {lam} does not sum to d = {ctx.d}")
    kept = {k: c for k, c in vec.entries.items() if weight_of_key(ctx, k) == lam}
    return TensorVector(ctx, kept, normalized=True)


# ---------------------------------------------------------------------------
# defining-relation suite
# ---------------------------------------------------------------------------

def relation_suite(ctx: ModuleContext, n: int, realization: dict) -> list:
    """Check the five defining-relation families for a realization.

    ``realization`` maps abstract symbols over Z/nZ (E_i, F_i, K_i^{+-1}) to
    expressions acting on the context's module.  Both the identity
    realization (m = n) and rank-raising images (m = n+1) are accepted.
    """
    from .expr import esym, fsym, ksym

    e = {i: realization[esym(i)] for i in range(n)}
    f = {i: realization[fsym(i)] for i in range(n)}
    k = {i: realization[ksym(i, 1)] for i in range(n)}
    kinv = {i: realization[ksym(i, -1)] for i in range(n)}
    unit = Expression.unit(ctx.m)
    zero = Expression.zero(ctx.m)
    checks = []

    def check(tag, lhs, rhs, **params):
        equal, witness = operators_equal_on_window(ctx, lhs, rhs)
        checks.append(checked(tag, equal, witness=repr(witness), **params))

    for i in range(n):
        check("R1-inverse", k[i] * kinv[i], unit, i=i)
        check("R1-inverse", kinv[i] * k[i], unit, i=i)
        for j in range(i + 1, n):
            check("R1-commute", k[i] * k[j], k[j] * k[i], i=i, j=j)
    for i in range(n):
        for j in range(n):
            c = cartan_entry(n, i, j)
            check("R2-E", k[i] * e[j], (e[j] * k[i]).scale(vpow(c)), i=i, j=j)
            check("R2-F", k[i] * f[j], (f[j] * k[i]).scale(vpow(-c)), i=i, j=j)
    for i in range(n):
        for j in range(n):
            lhs = e[i] * f[j] - f[j] * e[i]
            rhs = (k[i] - kinv[i]).scale(INV_VMV) if i == j else zero
            check("R3", lhs, rhs, i=i, j=j)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            check("R4", serre_element(e[i], e[j], cartan_entry(n, i, j)), zero, i=i, j=j)
            check("R5", serre_element(f[i], f[j], cartan_entry(n, i, j)), zero, i=i, j=j)
    return checks


def serre_element(xi: Expression, xj: Expression, cij: int) -> Expression:
    """sum_p (-1)^p xi^(p) xj xi^(1-cij-p), the quantum Serre combination."""
    from .expr import divided_power

    top = 1 - cij
    acc = Expression.zero(xi.m)
    for p in range(top + 1):
        term = divided_power(xi, p) * xj * divided_power(xi, top - p)
        acc = acc + (term if p % 2 == 0 else -term)
    return acc


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def format_vector(vec: TensorVector) -> str:
    if not vec.entries:
        return "0"
    parts = []
    for key in sorted(vec.entries):
        coeff = vec.entries[key]
        txt = format_scalar(coeff)
        negative = txt.startswith("-")
        if negative:
            txt = format_scalar(-coeff)
        body = "u[" + ",".join(str(k) for k in key) + "]"
        if txt != "1":
            body = (txt if is_atom_text(txt) else f"({txt})") + "*" + body
        if not parts:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append((" - " if negative else " + ") + body)
    return "".join(parts)


def parse_vector(text: str, ctx: ModuleContext) -> TensorVector:
    """Parse the ``coeff * u[k1,...,kd]`` sum grammar."""
    ts = TokenStream(tokenize(text, gens=True))
    entries: dict = {}
    sign = 1
    if ts.peek()[0] == "MINUS":
        ts.next()
        sign = -1
    while True:
        coeff, key = _parse_vector_term(ts, ctx)
        if sign < 0:
            coeff = -coeff
        _accumulate(entries, key, coeff)
        kind = ts.peek()[0]
        if kind == "END":
            break
        if kind == "PLUS":
            sign = 1
        elif kind == "MINUS":
            sign = -1
        else:
            tok = ts.peek()
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])
        ts.next()
    return TensorVector(ctx, entries)


def _parse_vector_term(ts: TokenStream, ctx: ModuleContext):
    from .expr import _parse_coeff

    coeff = ONE
    if ts.peek()[0] in ("INT", "VAR", "LPAR"):
        coeff = _parse_coeff(ts)
        ts.expect("STAR")
    ts.expect("U")
    ts.expect("LBRACK")
    key = [_parse_signed(ts)]
    while ts.peek()[0] == "COMMA":
        ts.next()
        key.append(_parse_signed(ts))
    ts.expect("RBRACK")
    if len(key) != ctx.d:
        raise ParseError(f"key has {len(key)} components, expected {ctx.d}",
                         ts.peek()[2])
    return coeff, tuple(key)


def _parse_signed(ts: TokenStream) -> int:
    sign = 1
    if ts.peek()[0] == "MINUS":
        ts.next()
        sign = -1
    return sign * ts.expect("INT")[1]
