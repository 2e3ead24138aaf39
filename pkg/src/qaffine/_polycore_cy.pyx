# cython: language_level=3, boundscheck=False, wraparound=False
"""Dense integer polynomial kernel (compiled twin of _polycore).

Same contract as qaffine._polycore; coefficients stay arbitrary-precision
Python ints, the compiled win is loop and indexing overhead.
"""

from math import gcd


def ptrim(list c):
    while c and c[-1] == 0:
        c.pop()
    return c


def padd(list a, list b):
    cdef Py_ssize_t i, na = len(a), nb = len(b)
    if na < nb:
        a, b = b, a
        na, nb = nb, na
    cdef list out = list(a)
    for i in range(nb):
        out[i] = out[i] + b[i]
    while out and out[-1] == 0:
        out.pop()
    return out


def pneg(list a):
    return [-x for x in a]


def psub(list a, list b):
    cdef Py_ssize_t i, na = len(a), nb = len(b)
    cdef list out = list(a)
    if nb > na:
        out.extend([0] * (nb - na))
    for i in range(nb):
        out[i] = out[i] - b[i]
    while out and out[-1] == 0:
        out.pop()
    return out


def pmul(list a, list b):
    cdef Py_ssize_t i, j, na = len(a), nb = len(b)
    if na == 0 or nb == 0:
        return []
    cdef list out = [0] * (na + nb - 1)
    cdef object x
    for i in range(na):
        x = a[i]
        if x:
            for j in range(nb):
                out[i + j] = out[i + j] + x * b[j]
    while out and out[-1] == 0:
        out.pop()
    return out


def pmul_int(list a, n):
    if n == 0:
        return []
    return [x * n for x in a]


def pcontent(list a):
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


def pdivexact(list a, list b):
    cdef Py_ssize_t i, j, nq
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    if len(a) < len(b):
        raise ValueError("inexact polynomial division")
    nq = len(a) - len(b) + 1
    cdef list q = [0] * nq
    cdef list r = list(a)
    lb = b[-1]
    for i in range(nq - 1, -1, -1):
        num = r[len(b) - 1 + i]
        if num % lb:
            raise ValueError("inexact polynomial division")
        c = num // lb
        q[i] = c
        if c:
            for j in range(len(b)):
                r[i + j] = r[i + j] - c * b[j]
    if any(r):
        raise ValueError("inexact polynomial division")
    while q and q[-1] == 0:
        q.pop()
    return q


def _pprem(list a, list b):
    cdef Py_ssize_t j, k, db = len(b) - 1
    cdef list r = list(a)
    lb = b[-1]
    while r and len(r) - 1 >= db:
        top = r[-1]
        k = len(r) - 1 - db
        r = [lb * x for x in r]
        for j in range(db + 1):
            r[k + j] = r[k + j] - top * b[j]
        while r and r[-1] == 0:
            r.pop()
    return r


def pgcd(list a, list b):
    cdef list pa, pb, r, g
    if not a and not b:
        return []
    if not a:
        g = list(b)
    elif not b:
        g = list(a)
    else:
        ca = pcontent(a)
        cb = pcontent(b)
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
        g = [-x for x in g]
    return g
