"""The positive half as a free graded algebra with twisted derivations.

Expressions here use E-letters only.  For each residue k there is a
v-twisted derivation acting on words by deleting one E_k letter at a time,
weighted by v to the Cartan pairing of k with the degree of the suffix:

    r_k(1) = 0,   r_k(E_j) = [j = k],   r_k(xy) = v^(k.|y|) r_k(x) y + x r_k(y).

Membership in the quantum Serre ideal is decided recursively: a homogeneous
element of positive degree is zero in the quotient exactly when all its
derivations are, and a scalar is zero exactly when it vanishes.  Each r_k
lowers total degree by one, so the recursion terminates; results are
memoised on scale-normalized canonical forms.
"""

from __future__ import annotations

from .expr import E_KIND, Expression, cartan_entry, divided_power, esym
from .report import checked
from .scalars import V, vpow
from .tensormod import serre_element

VMV = V - V ** -1


def multidegree(word: tuple, m: int) -> tuple:
    deg = [0] * m
    for kind, idx, _ in word:
        if kind != E_KIND:
            raise ValueError("positive-half elements may contain only E letters")
        deg[idx] += 1
    return tuple(deg)


def homogeneous_components(x: Expression) -> dict:
    comps: dict = {}
    for word, coeff in x.terms.items():
        deg = multidegree(word, x.m)
        comps.setdefault(deg, {})[word] = coeff
    return {deg: Expression(x.m, terms, normalized=True)
            for deg, terms in comps.items()}


def pairing_exponent(k: int, deg) -> int:
    """Cartan pairing of the residue k with a multidegree vector."""
    m = len(deg)
    return sum(cartan_entry(m, k, j) * deg[j] for j in range(m) if deg[j])


def twisted_derivation(k: int, x: Expression) -> Expression:
    out: dict = {}
    m = x.m
    row = [cartan_entry(m, k, j) for j in range(m)]
    for word, coeff in x.terms.items():
        suffix = 0
        for t in range(len(word) - 1, -1, -1):
            kind, idx, _ = word[t]
            if kind != E_KIND:
                raise ValueError("positive-half elements may contain only E letters")
            if idx == k:
                new = word[:t] + word[t + 1:]
                c = coeff if suffix == 0 else coeff * vpow(suffix)
                acc = out.get(new)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    out.pop(new, None)
                else:
                    out[new] = acc
            suffix += row[idx]
    return Expression(m, out, normalized=True)


class QuotientTester:
    """Decides whether a positive-half element maps to zero in the quotient.

    The memo table is keyed on scale-normalized homogeneous components and
    holds at most ``memo_limit`` entries (further results are still computed,
    just not cached), so memory stays bounded while results are unchanged.
    """

    def __init__(self, m: int, memo_limit: int = 500_000):
        self.m = m
        self.memo_limit = memo_limit
        self._memo: dict = {}

    def is_zero(self, x: Expression) -> bool:
        if x.m != self.m:
            raise ValueError("alphabet mismatch with tester")
        return all(self._component_zero(comp, deg)
                   for deg, comp in homogeneous_components(x).items())

    def _component_zero(self, comp: Expression, deg: tuple) -> bool:
        if comp.is_zero():
            return True
        if sum(deg) == 0:
            return False
        lead = comp.items()[0][1]
        scaled = comp if lead == 1 else comp.scale(lead.inverse())
        hit = self._memo.get(scaled)
        if hit is not None:
            return hit
        result = True
        for k in range(self.m):
            if deg[k] == 0:
                continue
            derived = twisted_derivation(k, scaled)
            lower = tuple(d - (j == k) for j, d in enumerate(deg))
            if not self._component_zero(derived, lower):
                result = False
                break
        if len(self._memo) < self.memo_limit:
            self._memo[scaled] = result
        return result


_default_testers: dict = {}


def is_zero_in_quotient(x: Expression, tester: QuotientTester | None = None) -> bool:
    """Whether x lies in the quantum Serre ideal of the free E-algebra."""
    if tester is None:
        tester = _default_testers.get(x.m)
        if tester is None:
            tester = _default_testers[x.m] = QuotientTester(x.m)
    return tester.is_zero(x)


# ---------------------------------------------------------------------------
# the twisted-derivation reduction formulas (rank-3 alphabet, eps = -1)
# ---------------------------------------------------------------------------

def mixed_generator(m: int, i: int, j: int, eps: int) -> Expression:
    """E_i E_j - v^eps E_j E_i, the two-letter image of a doubled node."""
    ei = Expression.generator(m, esym(i))
    ej = Expression.generator(m, esym(j))
    return ei * ej - (ej * ei).scale(vpow(eps))


def _sandwich_sum(m, i, j, p, drop, vstep) -> Expression:
    """sum_a (-1)^a v^(vstep*a) E_j^(a) E_i^(p) E_j^(p-drop-a)."""
    ei = Expression.generator(m, esym(i))
    ej = Expression.generator(m, esym(j))
    mid = divided_power(ei, p)
    acc = Expression.zero(m)
    for a in range(p - drop + 1):
        term = divided_power(ej, a) * mid * divided_power(ej, p - drop - a)
        term = term.scale(vpow(vstep * a))
        acc = acc + (term if a % 2 == 0 else -term)
    return acc


def derivation_reduction_cases(i: int, j: int, pmax: int):
    """LHS/RHS pairs of the five reduction identities for r_k on powers of the
    mixed generator, at eps = -1 in the rank-3 alphabet.

    Yields (tag, p, lhs, rhs) where the identity asserts lhs = rhs in the
    quotient.
    """
    m = 3
    ell = next(t for t in range(3) if t not in (i, j))
    e = mixed_generator(m, i, j, -1)
    zero = Expression.zero(m)
    for p in range(pmax + 1):
        ep = divided_power(e, p)
        yield ("deriv-1", p, twisted_derivation(ell, ep), zero)
        yield ("deriv-2", p, twisted_derivation(i, ep), zero)
        rj = twisted_derivation(j, ep)
        rhs3 = _sandwich_sum(m, i, j, p, 1, -2).scale(VMV * vpow(p - 2)) if p >= 1 else zero
        yield ("deriv-3", p, rj, rhs3)
        rhs4 = divided_power(e, p - 1).scale(VMV * vpow(p - 2)) if p >= 1 else zero
        yield ("deriv-4", p, twisted_derivation(i, rj), rhs4)
        rhs5 = (_sandwich_sum(m, i, j, p, 2, -3)
                .scale(VMV * (V ** 2 - V ** -2) * vpow(2 * (p - 3)))
                if p >= 2 else zero)
        yield ("deriv-5", p, twisted_derivation(j, rj), rhs5)


def verify_lemma_formulas(pmax: int, tester: QuotientTester | None = None) -> list:
    """Check the five reduction identities for all p <= pmax, at every
    rotation (i, i+1) of the rank-3 alphabet."""
    if pmax < 1:
        raise ValueError("pmax must be at least 1")
    checks = []
    for i in range(3):
        j = (i + 1) % 3
        for tag, p, lhs, rhs in derivation_reduction_cases(i, j, pmax):
            good = is_zero_in_quotient(lhs - rhs, tester)
            checks.append(checked(tag, good, witness=f"difference {lhs - rhs}",
                                  p=p, i=i, j=j))
    return checks


# ---------------------------------------------------------------------------
# quantum Serre checks for rank-raising images
# ---------------------------------------------------------------------------

def verify_serre_for_images(n: int, r: int, eps: int,
                            mutate: str | None = None,
                            tester: QuotientTester | None = None,
                            pmax_dp: int = 3) -> list:
    """All ordered-pair Serre combinations of the E-images, decided in the
    quotient of the free algebra one rank up; plus the divided-power
    expansion of the doubled-node image, and the degree-5 ladder identity
    used by the rank-2 argument."""
    from .embedding import EmbeddingSpec, image_divided_power, image_generator

    spec = EmbeddingSpec(n, r, eps)
    m = n + 1
    e = {i: image_generator(spec, esym(i), mutate=mutate) for i in range(n)}
    checks = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            cij = cartan_entry(n, i, j)
            element = serre_element(e[i], e[j], cij)
            good = is_zero_in_quotient(element, tester)
            checks.append(checked(
                "serre-image", good, witness="nonzero in quotient",
                i=i, j=j, n=n, r=r, eps=eps,
                degree=max((len(w) for w in element.terms), default=0)))
    for p in range(pmax_dp + 1):
        diff = divided_power(e[r], p) - image_divided_power(spec, "E", p)
        good = is_zero_in_quotient(diff, tester)
        checks.append(checked("divided-power-image", good,
                              witness="expansion mismatch in quotient",
                              p=p, n=n, r=r, eps=eps))
    if n == 2:
        i, j, ell = r % 3, (r + 1) % 3, (r - 1) % 3
        ei = Expression.generator(m, esym(i))
        ej = Expression.generator(m, esym(j))
        el = Expression.generator(m, esym(ell))
        acc = Expression.zero(m)
        for p in range(4):
            term = divided_power(el, 3 - p) * ei * ej * divided_power(el, p)
            acc = acc + (term if p % 2 == 0 else -term)
        good = is_zero_in_quotient(acc, tester)
        checks.append(checked("serre-degree-5", good,
                              witness="ladder identity fails in quotient",
                              n=n, r=r, eps=eps))
    return checks
