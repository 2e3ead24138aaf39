"""Root-datum and weight combinatorics, and the idempotent-transport check.

Coweights are integer n-tuples summing to zero; weight classes are integer
n-tuples modulo the all-ones vector, stored by the canonical representative
whose entry sum lies in [0, n-1].  Inserting a zero entry after slot r and
contracting back (subtract the straddled entry, then delete it) form the
morphism that intertwines the rank-raising embedding with the weight
combinatorics of the tensor modules.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .embedding import EmbeddingSpec, embed_vector, realization, sigma_inverse
from .expr import Expression, esym, fsym
from .report import checked
from .tensormod import (
    ModuleContext, TensorVector, act_expression, format_vector, weight_of_key,
)


@dataclass(frozen=True)
class CoweightY:
    """A coweight: integer entries summing to zero."""

    entries: tuple

    def __post_init__(self):
        if sum(self.entries) != 0:
            raise ValueError(f"coweight entries must sum to zero: {self.entries}")


def alpha_covector(n: int, i: int) -> CoweightY:
    """Simple coroot at residue i: +1 in slot i, -1 in slot i+1 (slots 1..n)."""
    entries = [0] * n
    entries[(i - 1) % n] += 1
    entries[i % n] -= 1
    return CoweightY(tuple(entries))


@dataclass(frozen=True)
class CosetX:
    """A weight class mod the all-ones vector, by canonical representative."""

    rep: tuple

    @staticmethod
    def of(entries) -> "CosetX":
        entries = tuple(entries)
        n = len(entries)
        k = sum(entries) // n  # floor division keeps the sum in [0, n-1]
        return CosetX(tuple(a - k for a in entries))

    def shifted(self, t: int) -> tuple:
        return tuple(a + t for a in self.rep)


def alpha_class(n: int, i: int) -> CosetX:
    return CosetX.of(alpha_covector(n, i).entries)


def pairing(b: CoweightY, x: CosetX) -> int:
    """Sum of products; well defined on classes because coweights sum to zero."""
    return sum(bi * ai for bi, ai in zip(b.entries, x.rep))


def y_insert(entries, r: int) -> tuple:
    """Insert a zero after slot r (0 <= r <= n-1); preserves the entry sum."""
    entries = tuple(entries)
    if not 0 <= r <= len(entries) - 1:
        raise ValueError(f"r must lie in [0, {len(entries) - 1}]")
    return entries[:r] + (0,) + entries[r:]


def x_contract(x: CosetX, r: int) -> CosetX:
    """Subtract the entry in slot r+1 from the rest and delete that slot."""
    rep = x.rep
    if not 0 <= r <= len(rep) - 2:
        raise ValueError(f"r must lie in [0, {len(rep) - 2}]")
    pivot = rep[r]
    rest = rep[:r] + rep[r + 1:]
    return CosetX.of(tuple(a - pivot for a in rest))


def f_d(x: CosetX, d: int, r: int) -> CosetX:
    """Insert through the representative of x summing to d (must exist)."""
    n = len(x.rep)
    s = sum(x.rep)
    if (d - s) % n:
        raise ValueError(
            f"class {x.rep} is disjoint from the degree-{d} compositions")
    t = (d - s) // n
    return CosetX.of(y_insert(x.shifted(t), r))


def compositions(n: int, d: int):
    """All n-part compositions of d, lexicographically."""
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in compositions(n - 1, d - first):
            yield (first,) + rest


def pairing_adjointness_check(n: int, r: int) -> list:
    """<insert(b), x> upstairs equals <b, contract(x)> downstairs, on bases."""
    checks = []
    for i in range(n):
        b = alpha_covector(n, i)
        bf = CoweightY(y_insert(b.entries, r))
        for j in range(n + 1):
            unit = CosetX.of(tuple(1 if t == j else 0 for t in range(n + 1)))
            lhs = pairing(bf, unit)
            rhs = pairing(b, x_contract(unit, r))
            checks.append(checked(
                "pairing-adjoint", lhs == rhs, witness=f"{lhs} != {rhs}",
                n=n, r=r, i=i, basis=j))
    return checks


def roundtrip_checks(n: int, r: int, dmax: int = 4) -> list:
    """contract(insert_d(x)) = x wherever defined, and shift invariance of
    the contraction."""
    checks = []
    reps = itertools.product(range(-2, 3), repeat=n)
    for rep in reps:
        x = CosetX.of(rep)
        for d in range(dmax + 1):
            if (d - sum(x.rep)) % n:
                continue
            back = x_contract(f_d(x, d, r), r)
            checks.append(checked(
                "g-after-f", back == x, witness=f"{back.rep} != {x.rep}",
                n=n, r=r, d=d, rep=list(rep)))
    for rep in itertools.product(range(-2, 3), repeat=n + 1):
        a = CosetX.of(rep)
        b = CosetX.of(tuple(t + 3 for t in rep))
        same = x_contract(a, r) == x_contract(b, r)
        checks.append(checked("g-shift-invariant", same,
                              witness=f"{rep} vs shifted", n=n, r=r))
    return checks


# ---------------------------------------------------------------------------
# compatibility of the embedding with weight idempotents
# ---------------------------------------------------------------------------

def verify_schur_compatibility(spec: EmbeddingSpec, d: int,
                               window: tuple = (-8, 8)) -> list:
    """For every degree-d weight and every E/F generator, acting after the
    transported idempotent upstairs agrees with transporting the downstairs
    action; the needed support facts are checked along the way.

    Keys whose weight is not an inserted weight lie outside every transported
    idempotent, so both operators vanish there by definition and only keys
    with an empty inserted slot need work.
    """
    from .embedding import sigma_index
    from .expr import symbol_text

    n, r = spec.n, spec.r
    m = n + 1
    src = ModuleContext(n, d, window)
    lo, hi = window
    # safe target keys (margin 2) then have preimages with margin >= 1
    tgt = ModuleContext(m, d, (sigma_index(spec, lo), sigma_index(spec, hi)))
    images = realization(spec)
    avoid = (r + 1) % m

    checks = []
    safe = list(tgt.safe_keys(2))
    wt = {key: weight_of_key(tgt, key) for key in safe}
    pre = {key: tuple(sigma_inverse(spec, k) for k in key) for key in safe}

    # weight transport: embedding a key inserts a zero into its weight
    good, witness = True, None
    for key in safe:
        p = pre[key]
        if any(t is None for t in p):
            continue
        if wt[key] != y_insert(weight_of_key(src, p), r):
            good, witness = False, f"key {list(key)} transports weight incorrectly"
            break
    checks.append(checked("idempotent-transport", good, witness=witness,
                          n=n, r=r, d=d))

    # support: inserted-weight keys avoid the skipped residue entirely
    good, witness = True, None
    for key in safe:
        if wt[key][r] == 0 and any(k % m == avoid for k in key):
            good, witness = False, f"key {list(key)} has the skipped residue"
            break
    checks.append(checked("weight-support", good, witness=witness,
                          n=n, r=r, d=d))

    results: dict = {}
    for i in range(n):
        for sym in (esym(i), fsym(i)):
            img = images[sym]
            for key in safe:
                lam_up = wt[key]
                if lam_up[r] != 0:
                    continue
                lam = lam_up[:r] + lam_up[r + 1:]
                slot = (lam, symbol_text(sym))
                if results.get(slot, (True, None))[0] is False:
                    continue
                p = pre[key]
                if any(t is None for t in p):
                    results[slot] = (False, f"key {list(key)} misses the embedded image")
                    continue
                lhs = act_expression(tgt, img, TensorVector.basis(tgt, key))
                down = act_expression(src, Expression.generator(n, sym),
                                      TensorVector.basis(src, p))
                rhs = embed_vector(spec, down, tgt)
                if lhs != rhs:
                    results[slot] = (False, (
                        f"key {list(key)}: {format_vector(lhs)}"
                        f" vs transported {format_vector(rhs)}"))
                else:
                    results.setdefault(slot, (True, None))
    for lam in compositions(n, d):
        for i in range(n):
            for sym in (esym(i), fsym(i)):
                good, witness = results.get((lam, symbol_text(sym)), (True, None))
                checks.append(checked(
                    "schur-square", good, witness=witness,
                    lam=list(lam), symbol=symbol_text(sym), n=n, r=r, d=d))
    return checks
