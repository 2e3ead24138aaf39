"""Dense integer polynomial kernel (pure Python backend).

Polynomials in one variable over Z are dense coefficient lists indexed by
degree, with no trailing zeros; the zero polynomial is the empty list.
These functions are the hot inner loop of all exact arithmetic in the
package.  A Cython twin (:mod:`qaffine._polycore_cy`) implements the same
surface and is preferred at import time when available.
"""

from math import gcd


def ptrim(c: list) -> list:
    """Strip trailing zero coefficients in place and return the list."""
    while c and c[-1] == 0:
        c.pop()
    return c


def padd(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return ptrim(out)


def pneg(a: list) -> list:
    return [-x for x in a]


def psub(a: list, b: list) -> list:
    out = list(a) + [0] * (len(b) - len(a))
    for i, x in enumerate(b):
        out[i] -= x
    return ptrim(out)


def pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return ptrim(out)


def pmul_int(a: list, n: int) -> list:
    if n == 0:
        return []
    return [x * n for x in a]


def pcontent(a: list) -> int:
    """gcd of the coefficients (0 for the zero polynomial)."""
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


def pdivexact(a: list, b: list) -> list:
    """Exact quotient a // b in Z[v]; raises ValueError if b does not divide a."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    if len(a) < len(b):
        raise ValueError("inexact polynomial division")
    q = [0] * (len(a) - len(b) + 1)
    r = list(a)
    lb = b[-1]
    for i in range(len(q) - 1, -1, -1):
        num = r[len(b) - 1 + i]
        if num % lb:
            raise ValueError("inexact polynomial division")
        c = num // lb
        q[i] = c
        if c:
            for j, y in enumerate(b):
                r[i + j] -= c * y
    if any(r):
        raise ValueError("inexact polynomial division")
    return ptrim(q)


def _pprem(a: list, b: list) -> list:
    """Pseudo-remainder of a by b (both nonzero, deg a >= deg b allowed to fail)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        top = r[-1]
        k = len(r) - 1 - db
        r = [lb * x for x in r]
        for j in range(db + 1):
            r[k + j] -= top * b[j]
        ptrim(r)
    return r


def pgcd(a: list, b: list) -> list:
    """gcd in Z[v] including integer content, leading coefficient positive.

    Uses the primitive polynomial remainder sequence, which keeps the
    intermediate coefficients from exploding.
    """
    if not a and not b:
        return []
    if not a:
        g = list(b)
    elif not b:
        g = list(a)
    else:
        ca, cb = pcontent(a), pcontent(b)
        pa = [x // ca for x in a]
        pb = [x // cb for x in b]
        if len(pa) < len(pb):
            pa, pb = pb, pa
        while pb:
            r = _pprem(pa, pb)
            cr = pcontent(r)
            pa, pb = pb, ([x // cr for x in r] if cr else [])
        g = pmul_int(pa, gcd(ca, cb))
    if g and g[-1] < 0:
        g = pneg(g)
    return g
