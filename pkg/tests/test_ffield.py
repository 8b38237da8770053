import itertools
import random

import pytest
from hypothesis import given, strategies as st

from dtl.ffield import (
    Embedding,
    FieldError,
    distinct_root_count,
    extension,
    field_from_json,
    frobenius_iter,
    lex_least_irreducible,
    make_field,
    poly,
    prime_power,
    roots_by_scan,
    roots_in,
    splitting_degree,
)

FIELDS = [(2, 1), (2, 3), (2, 6), (3, 2), (3, 6), (5, 3)]


def trial_division_irreducible(p, coeffs):
    """Irreducible iff no monic factor of degree <= n/2 divides it (plain long division)."""
    n = len(coeffs) - 1

    def rem(a, b):
        a = list(a)
        while len(a) >= len(b):
            c = a[-1]
            if c:
                s = len(a) - len(b)
                for i, x in enumerate(b):
                    a[s + i] = (a[s + i] - c * x) % p
            a.pop()
        return a

    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(rem(coeffs, list(low) + [1])):
                return False
    return True


def test_prime_power():
    assert prime_power(2) == (2, 1)
    assert prime_power(9) == (3, 2)
    assert prime_power(8) == (2, 3)
    for bad in (1, 6, 12, 0):
        with pytest.raises(FieldError):
            prime_power(bad)


def test_make_field_validation():
    with pytest.raises(FieldError):
        make_field(4, 2)
    with pytest.raises(FieldError):
        make_field(2, 3, [1, 0, 1, 1, 1])
    with pytest.raises(FieldError):
        make_field(2, 2, [1, 0, 1])  # x^2+1 = (x+1)^2
    F8 = make_field(2, 3, [1, 1, 0, 1])
    assert F8.order == 8
    assert make_field(2, 1).order == 2


def test_lex_least_3_6_against_trial_division():
    mod = lex_least_irreducible(3, 6)
    assert trial_division_irreducible(3, mod)
    code = sum(c * 3**i for i, c in enumerate(mod[:-1]))
    for smaller in range(code):
        cand = [(smaller // 3**i) % 3 for i in range(6)] + [1]
        assert not trial_division_irreducible(3, cand)
    assert make_field(3, 6).order == 729


@pytest.mark.parametrize("p,n", FIELDS)
def test_field_axioms(p, n):
    F = make_field(p, n)
    rng = random.Random(p * 100 + n)
    for _ in range(10_000):
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        assert (a * b) * c == a * (b * c)
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        if a != 0:
            assert a * a.inverse() == 1


@pytest.mark.parametrize("p,n", [(2, 3), (2, 6), (3, 2), (2, 12)])
def test_frobenius_iter_matches_pow(p, n):
    F = make_field(p, n)
    elems = list(F.elements()) if F.order <= 64 else [F.random(random.Random(k)) for k in range(300)]
    for x in elems:
        for k in range(7):
            assert frobenius_iter(x, p, k) == x ** (p**k)
    assert frobenius_iter(F.gen(), p, n) == F.gen()
    with pytest.raises(FieldError):
        frobenius_iter(F.gen(), 3 if p == 2 else 2, 1, p=p)


def test_frobenius_examples():
    F8 = make_field(2, 3, [1, 1, 0, 1])
    x = F8.gen()
    assert frobenius_iter(F8.one(), 2, 5) == 1
    assert frobenius_iter(x, 2, 3) == x
    F64 = make_field(2, 6)
    y = F64.gen()
    assert frobenius_iter(y, 2, 2) == y * y * y * y


@pytest.mark.parametrize("src,dst", [((2, 3), (2, 6)), ((2, 2), (2, 6)), ((3, 2), (3, 6)), ((2, 6), (2, 12))])
def test_embedding_homomorphism(src, dst):
    S, T = make_field(*src), make_field(*dst)
    e = Embedding(S, T)
    assert e(S.zero()) == 0 and e(S.one()) == 1
    if S.order <= 64:
        pairs = itertools.product(S.elements(), repeat=2)
    else:
        rng = random.Random(7)
        pairs = ((S.random(rng), S.random(rng)) for _ in range(10_000))
    images = set()
    for a, b in pairs:
        assert e(a + b) == e(a) + e(b)
        assert e(a * b) == e(a) * e(b)
    for a in itertools.islice(S.elements(), 64):
        images.add(T.key(e(a)))
    assert len(images) == min(S.order, 64)


def test_embedding_composition_and_rejection():
    F4, F16, F256 = make_field(2, 2), make_field(2, 4), make_field(2, 8)
    a, b = Embedding(F4, F16), Embedding(F16, F256)
    ab = a.compose(b)
    for x in F4.elements():
        assert ab(x) == b(a(x))
    with pytest.raises(FieldError):
        Embedding(make_field(2, 3), F16)


def test_roots_in_examples():
    F2, F4 = make_field(2, 1), make_field(2, 2)
    f = poly(F2, [1, 1, 1])
    assert roots_in(f, Embedding(F2, F2)) == []
    r4 = roots_in(f, Embedding(F2, F4))
    assert len(r4) == 2 and all(x != 0 and x != 1 for x in r4)
    for q in (2, 3, 4, 5, 7, 8, 9):
        p, m = prime_power(q)
        Fq = make_field(p, m)
        unit = poly(Fq, [-1] + [0] * (q - 2) + [1])
        assert len(roots_in(unit, Embedding(Fq, Fq))) == q - 1
    with pytest.raises(FieldError):
        roots_in(poly(F2, [0]), Embedding(F2, F2))


def test_roots_in_cube_roots_scan_oracle():
    F8 = make_field(2, 3)
    for u in F8.nonzero():
        f = poly(F8, [-u, 0, 0, 1])
        assert roots_in(f, Embedding(F8, F8)) == F8.sort(roots_by_scan(f, F8))
        assert len(roots_in(f, Embedding(F8, F8))) == 1  # 3 does not divide 7


@given(st.lists(st.integers(0, 63), min_size=2, max_size=6), st.sampled_from([(2, 6), (3, 4)]))
def test_roots_in_property(codes, pn):
    F = make_field(*pn)
    f = F.poly_ring()([F.from_key(c % F.order) for c in codes])
    if f.is_zero():
        return
    roots = roots_in(f, Embedding(F, F))
    assert len(roots) <= f.degree()
    assert all(f(r) == 0 for r in roots)
    assert {F.key(r) for r in roots} == {F.key(r) for r in roots_by_scan(f, F)}


def test_roots_in_extension_and_multiplicities():
    F2, F16 = make_field(2, 1), make_field(2, 4)
    f = poly(F2, [1, 1, 0, 0, 1]) * poly(F2, [1, 1])  # (x^4+x+1)(x+1)
    f = f * poly(F2, [1, 1])
    e = Embedding(F2, F16)
    assert len(roots_in(f, e)) == 5
    mult = dict((F16.key(r), m) for r, m in roots_in(f, e, multiplicities=True))
    assert mult[1] == 2
    assert splitting_degree(f) == 4
    assert distinct_root_count(f) == 5


def test_extension_and_json_roundtrip():
    F8 = make_field(2, 3)
    emb = extension(F8, 4)
    assert emb.target.n == 12
    data = F8.to_json()
    assert data == {"p": 2, "n": 3, "modulus": list(F8.modulus)}
    assert field_from_json(data) == F8
    x = F8.gen() + 1
    assert F8.elem_from_json(F8.elem_to_json(x)) == x
    with pytest.raises(FieldError):
        F8.elem_from_json([1, 0])


def test_key_order_is_total_and_bijective():
    F = make_field(3, 2)
    keys = [F.key(x) for x in F.elements()]
    assert keys == list(range(9))
    assert all(F.key(F.from_key(k)) == k for k in range(9))
