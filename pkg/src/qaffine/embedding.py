"""The rank-raising embedding: generator images, module embedding, and the
operator-level verification suites.

A triple (n, r, sign) selects where the extra node is inserted and which of
the two quantizations is taken.  Images of the rank-n Chevalley generators
live one rank up: away from the doubled node they are single letters, at the
node they are two-letter commutator-type words, and the K-image at the node
is the product of the two straddling K's.

The module embedding sends the k-th basis line of the rank-n row module to
the basis line whose index skips one residue class mod n+1.  The index map
is pinned down by the intertwining property itself; see ``sigma_index``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .expr import (
    E_KIND, F_KIND, K_KIND, Expression, divided_power, esym, fsym, ksym,
)
from .report import checked
from .scalars import ONE, RationalFunction, V, vpow
from .tensormod import (
    ModuleContext, TensorVector, WindowError, act_expression, format_vector,
    operators_equal_on_window, relation_suite, weight_of_key,
)


@dataclass(frozen=True)
class EmbeddingSpec:
    """Parameters (n, r, eps): rank, insertion slot, quantization sign."""

    n: int
    r: int
    eps: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("rank n must be at least 2")
        if not 0 <= self.r <= self.n - 1:
            raise ValueError(f"r must lie in [0, {self.n - 1}]")
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")


def image_generator(spec: EmbeddingSpec, sym: tuple,
                    mutate: str | None = None) -> Expression:
    """Image of one abstract rank-n Chevalley symbol, one rank up.

    ``mutate='sign-eps'`` deliberately corrupts one coefficient of the
    doubled-node E-image: the leading word picks up a spurious v^eps, so the
    relative twist between its two words degenerates (after normalization the
    image is an untwisted commutator).  The verification suites must catch
    this.  Note that flipping the exponent sign alone would produce the other
    valid quantization and is undetectable by construction.
    """
    n, r, eps = spec.n, spec.r, spec.eps
    m = n + 1
    kind, i, exp = sym
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for rank {n}")
    if kind == E_KIND:
        if i < r:
            return Expression.generator(m, esym(i))
        if i > r:
            return Expression.generator(m, esym(i + 1))
        a = Expression.generator(m, esym(r))
        b = Expression.generator(m, esym(r + 1))
        lead = (a * b).scale(vpow(eps)) if mutate == "sign-eps" else a * b
        return lead - (b * a).scale(vpow(eps))
    if kind == F_KIND:
        if i < r:
            return Expression.generator(m, fsym(i))
        if i > r:
            return Expression.generator(m, fsym(i + 1))
        a = Expression.generator(m, fsym(r))
        b = Expression.generator(m, fsym(r + 1))
        return b * a - (a * b).scale(vpow(-eps))
    if i < r:
        return Expression.generator(m, ksym(i, exp))
    if i > r:
        return Expression.generator(m, ksym(i + 1, exp))
    if exp == 1:
        return Expression.word(m, (ksym(r, 1), ksym(r + 1, 1)))
    return Expression.word(m, (ksym(r + 1, -1), ksym(r, -1)))


def realization(spec: EmbeddingSpec, mutate: str | None = None) -> dict:
    """The full generator assignment, keyed by abstract rank-n symbols."""
    out = {}
    for i in range(spec.n):
        out[esym(i)] = image_generator(spec, esym(i), mutate=mutate)
        out[fsym(i)] = image_generator(spec, fsym(i), mutate=mutate)
        out[ksym(i, 1)] = image_generator(spec, ksym(i, 1))
        out[ksym(i, -1)] = image_generator(spec, ksym(i, -1))
    return out


def identity_realization(n: int) -> dict:
    out = {}
    for i in range(n):
        for sym in (esym(i), fsym(i), ksym(i, 1), ksym(i, -1)):
            out[sym] = Expression.generator(n, sym)
    return out


def image_divided_power(spec: EmbeddingSpec, side: str, p: int) -> Expression:
    """Closed form for the p-th divided power of the doubled-node image.

    E side: sum_j (-1)^j v^(eps j) E_{r+1}^(j) E_r^(p) E_{r+1}^(p-j);
    F side: sum_j (-1)^j v^(-eps j) F_r^(j) F_{r+1}^(p) F_r^(p-j).
    """
    if p < 0:
        raise ValueError("divided power needs p >= 0")
    n, r, eps = spec.n, spec.r, spec.eps
    m = n + 1
    if side == "E":
        outer = Expression.generator(m, esym(r + 1))
        inner = divided_power(Expression.generator(m, esym(r)), p)
        step = eps
    elif side == "F":
        outer = Expression.generator(m, fsym(r))
        inner = divided_power(Expression.generator(m, fsym(r + 1)), p)
        step = -eps
    else:
        raise ValueError("side must be 'E' or 'F'")
    acc = Expression.zero(m)
    for j in range(p + 1):
        term = divided_power(outer, j) * inner * divided_power(outer, p - j)
        term = term.scale(vpow(step * j))
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


# ---------------------------------------------------------------------------
# the module embedding
# ---------------------------------------------------------------------------

def sigma_index(spec: EmbeddingSpec, k: int) -> int:
    """Index map of the basis embedding, avoiding residue r+1 mod n+1.

    Write k = q n + s with s in {1, ..., n}; the image is q (n+1) + s when
    s <= r and q (n+1) + s + 1 otherwise.  This is the unique strictly
    increasing choice compatible with all generator actions; a literal
    floor/ceiling split on the residue of k fails that requirement for
    r >= 1 (see the falsification test).
    """
    n, r = spec.n, spec.r
    s = (k - 1) % n + 1
    q = (k - s) // n
    return q * (n + 1) + s + (0 if s <= r else 1)


def sigma_inverse(spec: EmbeddingSpec, kk: int) -> int | None:
    """Preimage under sigma_index, or None for the skipped residue class."""
    n, r = spec.n, spec.r
    t = (kk - 1) % (n + 1) + 1
    q = (kk - t) // (n + 1)
    if t == r + 1:
        return None
    s = t if t <= r else t - 1
    return q * n + s


def embed_vector(spec: EmbeddingSpec, vec: TensorVector,
                 target: ModuleContext) -> TensorVector:
    """Apply sigma_index to every key component; coefficients unchanged."""
    if target.m != spec.n + 1 or target.d != vec.ctx.d:
        raise ValueError("target context must have rank n+1 and matching d")
    entries = {}
    for key, c in vec.entries.items():
        entries[tuple(sigma_index(spec, k) for k in key)] = c
    return TensorVector(target, entries)


def _supported_off_residue(vec: TensorVector, m: int, avoid: int) -> bool:
    return all(k % m != avoid for key in vec.entries for k in key)


def coproduct_tails(spec: EmbeddingSpec, side: str) -> list:
    """The two extra pure-tensor operators in the coproduct of the
    doubled-node image (they vanish on embedded vectors)."""
    n, r, eps = spec.n, spec.r, spec.eps
    m = n + 1
    gen = Expression.generator
    if side == "E":
        return [
            ((V ** -1 - vpow(eps)),
             gen(m, esym(r + 1)) * gen(m, ksym(r)), gen(m, esym(r))),
            ((V - vpow(eps)),
             gen(m, ksym(r + 1)) * gen(m, esym(r)), gen(m, esym(r + 1))),
        ]
    return [
        ((V - vpow(-eps)),
         gen(m, fsym(r)), gen(m, ksym(r, -1)) * gen(m, fsym(r + 1))),
        ((V ** -1 - vpow(-eps)),
         gen(m, fsym(r + 1)), gen(m, fsym(r)) * gen(m, ksym(r + 1, -1))),
    ]


def apply_pure_tensors(ctx2: ModuleContext, ops: list, key: tuple) -> TensorVector:
    """Act a sum of coeff * (A x B) operators on a basis key of a 2-fold context."""
    ctx1 = ModuleContext(ctx2.m, 1, ctx2.window)
    total: dict = {}
    for coeff, a, b in ops:
        va = act_expression(ctx1, a, TensorVector.basis(ctx1, (key[0],)))
        vb = act_expression(ctx1, b, TensorVector.basis(ctx1, (key[1],)))
        for (x,), cx in va.entries.items():
            for (y,), cy in vb.entries.items():
                c = coeff * cx * cy
                k2 = (x, y)
                acc = total.get(k2)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    total.pop(k2, None)
                else:
                    total[k2] = acc
    return TensorVector(ctx2, total, normalized=True)


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def _target_window(spec: EmbeddingSpec, window: tuple, pad: int) -> tuple:
    return (sigma_index(spec, window[0]) - pad, sigma_index(spec, window[1]) + pad)


def verify_intertwining(spec: EmbeddingSpec, d: int, window: tuple = (-8, 8),
                        mutate: str | None = None) -> list:
    """embed(X . u) = image(X) . embed(u) on every safe basis key, for every
    abstract generator; plus stability of the embedded subspace and the
    vanishing of the coproduct tail terms on it."""
    n, r = spec.n, spec.r
    m = n + 1
    src = ModuleContext(n, d, window)
    tgt = ModuleContext(m, d, _target_window(spec, window, 3))
    images = realization(spec, mutate=mutate)
    checks = []
    symbols = [s for i in range(n)
               for s in (esym(i), fsym(i), ksym(i, 1), ksym(i, -1))]
    for sym in symbols:
        img = images[sym]
        good, witness = True, None
        for key in src.safe_keys(1):
            lhs = embed_vector(spec, act_expression(
                src, Expression.generator(n, sym), TensorVector.basis(src, key)), tgt)
            rhs = act_expression(tgt, img, embed_vector(
                spec, TensorVector.basis(src, key), tgt))
            if lhs != rhs:
                good, witness = False, (
                    f"key {list(key)}: embedded action {format_vector(lhs)}"
                    f" vs image action {format_vector(rhs)}")
                break
        checks.append(checked("intertwine", good, witness=witness,
                              symbol=_sym_name(sym), d=d))
    avoid = (r + 1) % m
    lo, hi = tgt.window
    w_keys = [key for key in tgt.safe_keys(2)
              if all(k % m != avoid for k in key)]
    for sym in symbols:
        img = images[sym]
        good, witness = True, None
        for key in w_keys:
            out = act_expression(tgt, img, TensorVector.basis(tgt, key))
            if not _supported_off_residue(out, m, avoid):
                good, witness = False, f"key {list(key)} leaves the embedded subspace"
                break
        checks.append(checked("w-stability", good, witness=witness,
                              symbol=_sym_name(sym), d=d))
    if d == 2:
        for side in ("E", "F"):
            tails = coproduct_tails(spec, side)
            good, witness = True, None
            for key in w_keys:
                out = apply_pure_tensors(tgt, tails, key)
                if not out.is_zero():
                    good, witness = False, (
                        f"tail terms act by {format_vector(out)} on {list(key)}")
                    break
            checks.append(checked("coproduct-tails-vanish", good,
                                  witness=witness, side=side, d=d))
    return checks


def _sym_name(sym: tuple) -> str:
    from .expr import symbol_text
    return symbol_text(sym)


def verify_coproduct_identity(spec: EmbeddingSpec, window: tuple = (-8, 8)) -> list:
    """The two-factor action of the doubled-node image equals its four-term
    coproduct expansion, exactly, on every safe basis pair."""
    m = spec.n + 1
    ctx2 = ModuleContext(m, 2, window)
    images = realization(spec)
    kr = images[ksym(spec.r, 1)]
    krinv = images[ksym(spec.r, -1)]
    unit = Expression.unit(m)
    checks = []
    for side in ("E", "F"):
        word = images[esym(spec.r)] if side == "E" else images[fsym(spec.r)]
        if side == "E":
            head = [(ONE, word, unit), (ONE, kr, word)]
        else:
            head = [(ONE, word, krinv), (ONE, unit, word)]
        ops = head + coproduct_tails(spec, side)
        good, witness = True, None
        for key in ctx2.safe_keys(2):
            lhs = act_expression(ctx2, word, TensorVector.basis(ctx2, key))
            rhs = apply_pure_tensors(ctx2, ops, key)
            if lhs != rhs:
                good, witness = False, (
                    f"key {list(key)}: {format_vector(lhs)} vs {format_vector(rhs)}")
                break
        checks.append(checked("coproduct-identity", good, witness=witness,
                              side=side, n=spec.n, r=spec.r, eps=spec.eps))
    return checks


# ---------------------------------------------------------------------------
# the level-1 variant
# ---------------------------------------------------------------------------

def gl_image_l(spec: EmbeddingSpec, i: int) -> Expression:
    """The i-th diagonal image for the level-1 variant, 1 <= i <= n:
    K_i ... K_r below the slot and inverse K's above it."""
    n, r = spec.n, spec.r
    if not 1 <= i <= n:
        raise ValueError(f"l-index {i} out of range 1..{n}")
    m = n + 1
    if i <= r:
        return Expression.word(m, tuple(ksym(t, 1) for t in range(i, r + 1)))
    return Expression.word(m, tuple(ksym(t, -1) for t in range(r + 1, i + 1)))


def _invert_k_word(x: Expression) -> Expression:
    ((word, coeff),) = x.terms.items()
    assert coeff == 1 and all(s[0] == K_KIND for s in word)
    return Expression.word(x.m, tuple(ksym(s[1], -s[2]) for s in reversed(word)))


def verify_gl_suite(spec: EmbeddingSpec, d: int, window: tuple = (-8, 8)) -> list:
    """Operator-level checks for the level-1 variant: the diagonal relation
    families, the K-image factorization through the l's, and triviality of
    the full central K-product."""
    from .tensormod import INV_VMV

    n, r = spec.n, spec.r
    m = n + 1
    ctx = ModuleContext(m, d, window)
    images = realization(spec)
    e = {i: images[esym(i)] for i in range(n)}
    f = {i: images[fsym(i)] for i in range(n)}
    k = {i: images[ksym(i, 1)] for i in range(n)}
    ell = {i: gl_image_l(spec, i) for i in range(1, n + 1)}
    ell_inv = {i: _invert_k_word(x) for i, x in ell.items()}
    unit = Expression.unit(m)
    zero = Expression.zero(m)
    checks = []

    def check(tag, lhs, rhs, **params):
        equal, witness = operators_equal_on_window(ctx, lhs, rhs)
        checks.append(checked(tag, equal, witness=repr(witness), **params))

    for i in range(1, n + 1):
        check("gl-L-inverse", ell[i] * ell_inv[i], unit, i=i)
        for j in range(i + 1, n + 1):
            check("gl-L-commute", ell[i] * ell[j], ell[j] * ell[i], i=i, j=j)
    for i in range(1, n + 1):
        for j in range(n):
            w = (1 if i % n == j % n else 0) - (1 if (i - 1) % n == j % n else 0)
            check("gl-L-E", ell[i] * e[j], (e[j] * ell[i]).scale(vpow(w)), i=i, j=j)
            check("gl-L-F", ell[i] * f[j], (f[j] * ell[i]).scale(vpow(-w)), i=i, j=j)
    for i in range(n):
        for j in range(n):
            lhs = e[i] * f[j] - f[j] * e[i]
            if i == j:
                ii = i if i else n
                nxt = ii + 1 if ii < n else 1
                rhs = (ell[ii] * ell_inv[nxt] - ell_inv[ii] * ell[nxt]).scale(INV_VMV)
            else:
                rhs = zero
            check("gl-commutator", lhs, rhs, i=i, j=j)
    for i in range(n):
        ii = i if i else n
        nxt = ii + 1 if ii < n else 1
        check("gl-k-factorization", k[i], ell[ii] * ell_inv[nxt], i=i)
    central = Expression.word(m, tuple(ksym(t, 1) for t in range(m)))
    check("gl-central-product", central, unit)
    return checks


# ---------------------------------------------------------------------------
# the classical specialization oracle
# ---------------------------------------------------------------------------

def classical_embed(block: list, r: int, variant: str = "sl") -> list:
    """Insert a zero row and column after position r of an exact matrix; the
    'gl' variant puts -trace on the new diagonal entry."""
    n = len(block)
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in [0, {n}]")
    if variant not in ("sl", "gl"):
        raise ValueError("variant must be 'sl' or 'gl'")
    out = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(n):
            out[i + (i >= r)][j + (j >= r)] = Fraction(block[i][j])
    if variant == "gl":
        out[r][r] = -sum((Fraction(block[i][i]) for i in range(n)), Fraction(0))
    return out


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)]


def _mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _bracket(a, b):
    return _mat_sub(_mat_mul(a, b), _mat_mul(b, a))


def verify_classical_bracket(n: int, r: int, variant: str, trials: int,
                             seed: int = 0) -> list:
    """Bracket preservation on random exact integer matrices."""
    rng = random.Random(seed ^ (n * 1009 + r * 101 + (variant == "gl")))
    good, witness = True, None
    for t in range(trials):
        a = [[Fraction(rng.randint(-9, 9)) for _ in range(n)] for _ in range(n)]
        b = [[Fraction(rng.randint(-9, 9)) for _ in range(n)] for _ in range(n)]
        lhs = classical_embed(_bracket(a, b), r, variant)
        rhs = _bracket(classical_embed(a, r, variant), classical_embed(b, r, variant))
        if lhs != rhs:
            good, witness = False, f"trial {t}: bracket images differ"
            break
    return [checked("classical-bracket", good, witness=witness,
                    n=n, r=r, variant=variant, trials=trials)]
