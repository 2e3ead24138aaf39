"""Tensor module actions: slot rules, coproduct, weights, operator equality."""

import itertools
import random

import pytest

from qaffine.expr import (
    E_KIND, F_KIND, K_KIND, Expression, esym, fsym, ksym, parse_expression,
)
from qaffine.scalars import ONE, V, ZERO, vpow
from qaffine.tensormod import (
    INV_VMV, ModuleContext, TensorVector, WindowError, act_expression,
    act_generator, format_vector, operators_equal_on_window, parse_vector,
    project_weight, relation_suite, weight_of_key,
)


def vec(ctx, *pairs):
    out = {}
    for coeff, key in pairs:
        out[tuple(key)] = coeff if not isinstance(coeff, int) else ONE * coeff
    return TensorVector(ctx, out)


def test_slot_rules_rank_two():
    ctx = ModuleContext(2, 1)
    assert act_generator(ctx, esym(0), (1,)) == vec(ctx, (1, (0,)))
    assert act_generator(ctx, esym(0), (2,)) == TensorVector.zero(ctx)
    assert act_generator(ctx, fsym(0), (2,)) == vec(ctx, (1, (3,)))
    assert act_generator(ctx, ksym(1), (1,)) == vec(ctx, (V, (1,)))
    assert act_generator(ctx, ksym(1, -1), (1,)) == vec(ctx, (V ** -1, (1,)))


def test_coproduct_action_two_factors():
    # E_0 on u_1 x u_1: slot one directly, slot two weighted by K_0 u_1 = v^-1 u_1
    ctx = ModuleContext(2, 2)
    out = act_generator(ctx, esym(0), (1, 1))
    assert out == vec(ctx, (1, (0, 1)), (V ** -1, (1, 0)))


def test_identity_and_scalar_action():
    ctx = ModuleContext(2, 1)
    u5 = TensorVector.basis(ctx, (5,))
    assert act_expression(ctx, Expression.unit(2), u5) == u5
    two = Expression.scalar(2, V + V ** -1)
    assert act_expression(ctx, two, u5) == u5.scale(V + V ** -1)


def test_commutator_agrees_with_k_side():
    # Both sides of the E/F commutator relation, evaluated independently.
    ctx = ModuleContext(2, 1)
    e0, f0 = Expression.generator(2, esym(0)), Expression.generator(2, fsym(0))
    k0, k0i = Expression.generator(2, ksym(0)), Expression.generator(2, ksym(0, -1))
    lhs = e0 * f0 - f0 * e0
    rhs = (k0 - k0i).scale(INV_VMV)
    u0 = TensorVector.basis(ctx, (0,))
    left = act_expression(ctx, lhs, u0)
    right = act_expression(ctx, rhs, u0)
    assert left == right
    # brute force both give +1 * u_0 here: E_0 F_0 u_0 = u_0, F_0 E_0 u_0 = 0
    assert left == u0
    equal, _ = operators_equal_on_window(ctx, lhs, rhs)
    assert equal


def test_operators_equal_trivially_and_with_witness():
    ctx = ModuleContext(2, 1)
    a = parse_expression("E0*F1 - v*K0", 2)
    equal, witness = operators_equal_on_window(ctx, a, a)
    assert equal and witness is None
    b = parse_expression("E0*F1 - v^2*K0", 2)
    equal, witness = operators_equal_on_window(ctx, a, b)
    assert not equal and "key" in witness


def test_window_errors():
    ctx = ModuleContext(2, 1, window=(-2, 2))
    long_word = parse_expression("E0*E1*E0*E1*E0*E1", 2)
    u0 = TensorVector.basis(ctx, (0,))
    with pytest.raises(WindowError):
        act_expression(ctx, long_word, u0)
    with pytest.raises(WindowError):
        operators_equal_on_window(ctx, long_word, long_word)
    with pytest.raises(WindowError):
        TensorVector.basis(ctx, (5,))


def test_weight_of_key():
    assert weight_of_key(ModuleContext(2, 2), (0, 1)) == (1, 1)
    assert weight_of_key(ModuleContext(3, 3), (1, 1, 4)) == (3, 0, 0)
    assert weight_of_key(ModuleContext(2, 1), (2,)) == (0, 1)


def test_project_weight():
    ctx = ModuleContext(2, 2)
    w = vec(ctx, (1, (1, 1)), (1, (0, 1)))
    picked = project_weight(ctx, (2, 0), w)
    assert picked == vec(ctx, (1, (1, 1)))
    assert project_weight(ctx, (2, 0), picked) == picked
    # weight projections partition the vector
    lo, hi = ctx.window
    total = TensorVector.zero(ctx)
    lams = set(weight_of_key(ctx, key)
               for key in itertools.product(range(lo, hi + 1), repeat=2))
    for lam in lams:
        total = total + project_weight(ctx, lam, w)
    assert total == w


def _slot_action(m, sym, k):
    kind, i, exp = sym
    if kind == E_KIND:
        return [(ONE, k - 1)] if k % m == (i + 1) % m else []
    if kind == F_KIND:
        return [(ONE, k + 1)] if k % m == i % m else []
    w = (1 if k % m == i % m else 0) - (1 if k % m == (i + 1) % m else 0)
    return [(vpow(exp * w), k)]


def _act_recursive(m, sym, key, left):
    """Independent oracle: iterate the coproduct one split at a time."""
    if len(key) == 1:
        return {(k,): c for c, k in _slot_action(m, sym, key[0])}
    head, tail = ((key[:1], key[1:]) if left else (key[:-1], key[-1:]))
    kind, i, exp = sym
    if kind == E_KIND:
        pairs = [(sym, None), ((K_KIND, i, 1), sym)]
    elif kind == F_KIND:
        pairs = [(sym, (K_KIND, i, -1)), (None, sym)]
    else:
        pairs = [(sym, sym)]
    out = {}
    for xs, ys in pairs:
        ha = {head: ONE} if xs is None else _act_recursive(m, xs, head, left)
        ta = {tail: ONE} if ys is None else _act_recursive(m, ys, tail, left)
        for hk, hc in ha.items():
            for tk, tc in ta.items():
                key2 = hk + tk
                c = hc * tc
                prev = out.get(key2)
                out[key2] = c if prev is None else prev + c
    return {k: c for k, c in out.items() if not c.is_zero()}


def test_coassociativity_of_iterated_coproduct():
    rng = random.Random(7)
    for m in (2, 3):
        for d in (2, 3, 4):
            ctx = ModuleContext(m, d, window=(-12, 12))
            for _ in range(12):
                key = tuple(rng.randint(-6, 6) for _ in range(d))
                for sym in (esym(rng.randrange(m)), fsym(rng.randrange(m)),
                            ksym(rng.randrange(m), rng.choice((1, -1)))):
                    closed = act_generator(ctx, sym, key).entries
                    assert _act_recursive(m, sym, key, left=True) == closed
                    assert _act_recursive(m, sym, key, left=False) == closed


def test_shift_equivariance():
    rng = random.Random(11)
    for m in (2, 3):
        ctx = ModuleContext(m, 2, window=(-16, 16))
        for _ in range(20):
            key = tuple(rng.randint(-5, 5) for _ in range(2))
            shifted = tuple(k + m for k in key)
            for sym in (esym(rng.randrange(m)), fsym(rng.randrange(m))):
                a = act_generator(ctx, sym, key).entries
                b = act_generator(ctx, sym, shifted).entries
                assert b == {tuple(k + m for k in kk): c for kk, c in a.items()}


def test_k_eigenvalue_matches_weight():
    rng = random.Random(13)
    for m in (2, 3, 4):
        ctx = ModuleContext(m, 3, window=(-10, 10))
        for _ in range(15):
            key = tuple(rng.randint(-5, 5) for _ in range(3))
            lam = weight_of_key(ctx, key)
            for i in range(m):
                rep = i if i else m
                rep_next = (i + 1) if (i + 1) % m else m
                expo = lam[rep - 1] - lam[rep_next - 1]
                out = act_generator(ctx, ksym(i), key)
                assert out == TensorVector.basis(ctx, key).scale(vpow(expo))


def test_generator_weight_pattern():
    ctx = ModuleContext(3, 2, window=(-10, 10))
    key = (1, 2)
    lam = weight_of_key(ctx, key)
    out = act_generator(ctx, esym(1), key)
    for newkey in out.entries:
        new_lam = weight_of_key(ctx, newkey)
        delta = tuple(a - b for a, b in zip(new_lam, lam))
        # E_1 moves content from residue 2 to residue 1
        assert delta == (1, -1, 0)


def test_relation_suite_identity_realization_smoke():
    n = 2
    realization = {}
    for i in range(n):
        realization[esym(i)] = Expression.generator(n, esym(i))
        realization[fsym(i)] = Expression.generator(n, fsym(i))
        realization[ksym(i, 1)] = Expression.generator(n, ksym(i, 1))
        realization[ksym(i, -1)] = Expression.generator(n, ksym(i, -1))
    checks = relation_suite(ModuleContext(n, 1), n, realization)
    assert checks and all(c.passed for c in checks)


def test_relation_suite_detects_corruption():
    n = 2
    realization = {}
    for i in range(n):
        realization[esym(i)] = Expression.generator(n, esym(i))
        realization[fsym(i)] = Expression.generator(n, fsym(i))
        realization[ksym(i, 1)] = Expression.generator(n, ksym(i, 1))
        realization[ksym(i, -1)] = Expression.generator(n, ksym(i, -1))
    realization[esym(0)] = realization[esym(0)].scale(V)  # break R3 at i=j=0
    checks = relation_suite(ModuleContext(n, 1), n, realization)
    bad = [c for c in checks if not c.passed]
    assert any(c.tag == "R3" and c.params == {"i": 0, "j": 0} for c in bad)


def test_vector_text_round_trip():
    ctx = ModuleContext(2, 2)
    w = vec(ctx, (V + V ** -1, (0, 1)), (-1, (1, 1)), (ONE / (V - V ** -1), (2, -3)))
    assert parse_vector(format_vector(w), ctx) == w
    assert format_vector(TensorVector.zero(ctx)) == "0"
    assert parse_vector("u[0,1] - u[0,1]", ctx) == TensorVector.zero(ctx)
