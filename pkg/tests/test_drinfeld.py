import itertools
import random

import pytest

from dtl.drinfeld import (
    DrinfeldError,
    DrinfeldModule,
    are_isomorphic,
    base_field,
    j_invariant,
    make_module,
    normalized_module,
    phi_of,
    torsion_size_by_gcd,
    torsion_structure,
    tpoly,
)
from dtl.ffield import AmbientTooSmall, extension, make_field
from dtl.skew import SkewPoly, ambient_degree, kernel_by_scan

F8 = make_field(2, 3)
F27 = make_field(3, 3)


def all_tpolys(q, maxdeg):
    Fq = base_field(q)
    elems = list(Fq.elements())
    for d in range(maxdeg + 1):
        for cs in itertools.product(elems, repeat=d + 1):
            P = tpoly(q, list(cs))
            if not P.is_zero():
                yield P


def test_make_module_flags():
    ss = make_module(F8, -1, 0, 0)
    assert ss.normalized and ss.supersingular and ss.weakly_supersingular
    assert ss.phi_T == SkewPoly(F8, 2, [1, 0, 0, -1])
    ws = make_module(F8, -1, F8.gen(), 0)
    assert ws.weakly_supersingular and not ws.supersingular
    plain = make_module(F8, F8.gen(), 1, 1)
    assert not (plain.normalized or plain.weakly_supersingular or plain.supersingular)
    with pytest.raises(DrinfeldError):
        make_module(F8, 0, 1, 1)


def test_json_round_trip():
    m = make_module(F27, 2, F27.gen(), 0)
    assert DrinfeldModule.from_json(m.to_json()) == m


@pytest.mark.parametrize("q,F", [(2, F8), (3, F27)])
def test_homomorphism_law_exhaustive(q, F):
    rng = random.Random(q)
    m = make_module(F, F.random_nonzero(rng), F.random(rng), F.random(rng), q=q)
    polys = list(all_tpolys(q, 2))
    images = {tuple(P.coeffs()): phi_of(m, P) for P in polys}
    for P in polys:
        img = images[tuple(P.coeffs())]
        assert img.degree == 3 * P.degree()
        assert img[0] == m.base_embedding(P(base_field(q).one()))
    sample = polys if q == 2 else polys[:: max(1, len(polys) // 60)]
    for P, Q in itertools.product(sample, repeat=2):
        assert phi_of(m, P * Q) == phi_of(m, P) * phi_of(m, Q)
        if not (P + Q).is_zero():
            assert phi_of(m, P + Q) == phi_of(m, P) + phi_of(m, Q)


def test_constant_term_law():
    rng = random.Random(3)
    for q, F in ((2, F8), (3, F27)):
        m = make_module(F, F.random_nonzero(rng), F.random(rng), F.random(rng), q=q)
        Fq = base_field(q)
        for _ in range(200):
            P = tpoly(q, [Fq.random(rng) for _ in range(rng.randrange(1, 5))] + [Fq.one()])
            assert phi_of(m, P)[0] == m.base_embedding(P(Fq.one()))


def test_phi_examples():
    m = make_module(F8, F8.gen(), F8.gen() + 1, 1)
    T = tpoly(2, [0, 1])
    assert phi_of(m, T) == m.phi_T
    assert phi_of(m, T * T) == m.phi_T * m.phi_T
    assert phi_of(m, T * T)[0] == 1
    tm1 = phi_of(m, tpoly(2, [1, 1]))
    assert tm1 == SkewPoly(F8, 2, [0, m.h, m.g, m.delta])
    with pytest.raises(DrinfeldError):
        phi_of(m, tpoly(2, [0]))


def test_j_invariant():
    assert j_invariant(normalized_module(F8, 2, F8.zero())) == 0
    assert j_invariant(normalized_module(F8, 2, F8.one())) == 1
    with pytest.raises(DrinfeldError):
        j_invariant(make_module(F8, 1, 1, 1))
    rng = random.Random(9)
    q = 2
    for _ in range(20):
        d, g, c = F8.random_nonzero(rng), F8.random(rng), F8.random_nonzero(rng)
        a = make_module(F8, d, g, 0)
        b = make_module(F8, c ** (q**3 - 1) * d, c ** (q * q - 1) * g, 0)
        assert j_invariant(a) == j_invariant(b)


def test_isomorphism_same_module():
    m = normalized_module(F8, 2, F8.gen())
    iso, c = are_isomorphic(m, m)
    assert iso and c == 1


@pytest.mark.parametrize("q,F", [(2, F8), (3, F27)])
def test_isomorphism_by_roots_of_unity(q, F):
    g1 = F.gen() + 1
    phi = normalized_module(F, q, g1)
    zetas = [z for z in F.nonzero() if z ** (q * q + q + 1) == 1]
    assert len(zetas) == q * q + q + 1
    for z in zetas:
        psi = normalized_module(F, q, z * g1)
        res = are_isomorphic(phi, psi)
        assert res.isomorphic
        c = SkewPoly.const(res.embedding.target, q, res.witness)
        assert c * phi.phi_T.embed(res.embedding) == psi.phi_T.embed(res.embedding) * c


def test_isomorphism_witness_in_extension():
    rng = random.Random(4)
    q = 2
    found = 0
    for _ in range(30):
        d1, d2 = F8.random_nonzero(rng), F8.random_nonzero(rng)
        g = F8.random_nonzero(rng)
        a, b = make_module(F8, d1, g, 0), make_module(F8, d2, g, 0)
        res = are_isomorphic(a, b)
        assert res.isomorphic == (j_invariant(a) == j_invariant(b))
        if res.isomorphic:
            found += 1
            emb, c = res.embedding, res.witness
            assert c ** (q**3 - 1) == emb(d1 / d2)
            cs = SkewPoly.const(emb.target, q, c)
            assert cs * a.phi_T.embed(emb) == b.phi_T.embed(emb) * cs
    assert found > 0


def test_non_isomorphic():
    a = normalized_module(F8, 2, F8.zero())
    b = normalized_module(F8, 2, F8.one())
    assert not are_isomorphic(a, b).isomorphic
    with pytest.raises(DrinfeldError):
        are_isomorphic(make_module(F8, 1, 1, 1), a)


def test_torsion_examples():
    ss = normalized_module(F8, 2, F8.zero())
    t = torsion_structure(ss, tpoly(2, [1, 1]))
    assert t.size == 1 and t.rank_free == 0
    ws = normalized_module(F8, 2, F8.one())
    t = torsion_structure(ws, tpoly(2, [1, 1]))
    assert t.size == 2 and t.rank_free == 1
    m = make_module(F8, 1, 1, 1)
    t = torsion_structure(m, tpoly(2, [0, 1]), with_points=True)
    assert t.size == 8 and t.rank_free == 3
    assert t.size == torsion_size_by_gcd(m, tpoly(2, [0, 1]))


def test_torsion_coprime_is_free_rank3():
    rng = random.Random(11)
    m = make_module(F8, F8.random_nonzero(rng), F8.random(rng), F8.random(rng))
    for P in (tpoly(2, [0, 1]), tpoly(2, [0, 0, 1]), tpoly(2, [1, 1, 1])):
        t = torsion_structure(m, P)
        assert t.rank_free == 3
        assert t.size == 2 ** (3 * P.degree())


def test_torsion_cardinality_by_scan():
    # q = 2, deg P <= 2, scanned in the computed splitting field when small enough
    rng = random.Random(8)
    checked = 0
    for P in all_tpolys(2, 2):
        if P.degree() < 1:
            continue
        for _ in range(3):
            m = make_module(F8, F8.random_nonzero(rng), F8.random(rng), F8.random(rng))
            phiP = phi_of(m, P)
            need = ambient_degree(phiP)
            if need * 3 > 12:
                continue
            emb = extension(F8, need)
            scan = kernel_by_scan(phiP, emb.target, emb)
            assert len(scan) == torsion_size_by_gcd(m, P)
            assert torsion_structure(m, P, emb).size == len(scan)
            checked += 1
    assert checked >= 10


def test_torsion_ambient_too_small():
    m = make_module(F8, 1, 1, 1)
    with pytest.raises(AmbientTooSmall) as err:
        torsion_structure(m, tpoly(2, [0, 1]), extension(F8, 1))
    assert err.value.required_degree == 4
