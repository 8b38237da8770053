"""Rank-3 Drinfeld modules over F_q[T] in characteristic T - 1.

``phi_T = delta*tau^3 + g*tau^2 + h*tau + 1``; the structure map sends a
polynomial P(T) to P(1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import modstruct
from .ffield import (
    Embedding,
    FieldError,
    FieldSpec,
    extension,
    field_from_json,
    make_field,
    prime_power,
    splitting_degree,
)
from .skew import SkewPoly, ambient_degree, kernel, kernel_basis, right_gcd


class DrinfeldError(ValueError):
    pass


def base_field(q: int) -> FieldSpec:
    """GF(q) with the default modulus."""
    p, a = prime_power(q)
    return make_field(p, a)


def tpoly(q: int, coeffs: Sequence):
    """Polynomial in T over GF(q), coefficients low degree first (ints or GF(q) elements)."""
    Fq = base_field(q)
    return Fq.poly_ring()([Fq(c) if isinstance(c, int) else c for c in coeffs])


@dataclass(frozen=True)
class DrinfeldModule:
    field: FieldSpec
    q: int
    delta: object
    g: object
    h: object
    base: FieldSpec = field(init=False, compare=False, repr=False)
    base_embedding: Embedding = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        p, a = prime_power(self.q)
        if p != self.field.p or self.field.n % a:
            raise FieldError(f"GF({self.q}) is not a subfield of the coefficient field")
        if self.delta == 0:
            raise DrinfeldError("delta must be nonzero (rank 3)")
        Fq = base_field(self.q)
        object.__setattr__(self, "base", Fq)
        object.__setattr__(self, "base_embedding", Embedding(Fq, self.field))

    @property
    def normalized(self) -> bool:
        return self.delta == -self.field.one()

    @property
    def weakly_supersingular(self) -> bool:
        return self.h == 0

    @property
    def supersingular(self) -> bool:
        return self.g == 0 and self.h == 0

    @property
    def phi_T(self) -> SkewPoly:
        L = self.field
        return SkewPoly(L, self.q, [L.one(), self.h, self.g, self.delta])

    def to_json(self) -> dict:
        L = self.field
        return {
            "field": L.to_json(),
            "q": self.q,
            "delta": L.elem_to_json(self.delta),
            "g": L.elem_to_json(self.g),
            "h": L.elem_to_json(self.h),
        }

    @classmethod
    def from_json(cls, data: dict) -> "DrinfeldModule":
        L = field_from_json(data["field"])
        return cls(
            L,
            int(data["q"]),
            L.elem_from_json(data["delta"]),
            L.elem_from_json(data["g"]),
            L.elem_from_json(data["h"]),
        )


def make_module(field: FieldSpec, delta, g, h, q: int | None = None) -> DrinfeldModule:
    """Validated module; ``q`` defaults to the cube root of |field| when that is integral."""
    if q is None:
        if field.n % 3:
            raise DrinfeldError("pass q explicitly when the field is not GF(q^3)")
        q = field.p ** (field.n // 3)
    conv = lambda x: field(x) if isinstance(x, int) else x
    return DrinfeldModule(field, q, conv(delta), conv(g), conv(h))


def normalized_module(field: FieldSpec, q: int, g) -> DrinfeldModule:
    """``-tau^3 + g*tau^2 + 1``."""
    return DrinfeldModule(field, q, -field.one(), g, field.zero())


def phi_of(module: DrinfeldModule, P) -> SkewPoly:
    """Image of P(T) in L{tau} (Horner in phi_T)."""
    if P.is_zero():
        raise DrinfeldError("phi_of the zero polynomial")
    L, q = module.field, module.q
    phiT = module.phi_T
    acc = SkewPoly(L, q, [])
    for c in reversed(P.coeffs()):
        acc = acc * phiT + SkewPoly.const(L, q, module.base_embedding(c))
    return acc


def j_invariant(module: DrinfeldModule):
    """``g^(q^2+q+1) / delta^(q+1)``, defined for weakly supersingular modules."""
    if not module.weakly_supersingular:
        raise DrinfeldError("J-invariant is only defined when h = 0")
    q = module.q
    return module.g ** (q * q + q + 1) / module.delta ** (q + 1)


@dataclass
class IsomorphismResult:
    isomorphic: bool
    witness: object = None
    embedding: Embedding | None = None

    def __iter__(self):
        yield self.isomorphic
        yield self.witness


def are_isomorphic(phi: DrinfeldModule, psi: DrinfeldModule) -> IsomorphismResult:
    """Decide isomorphism by J-invariants and build an explicit witness.

    The witness c lives in ``result.embedding.target`` and satisfies
    ``c * phi_T == psi_T * c`` there.
    """
    if phi.field != psi.field or phi.q != psi.q:
        raise FieldError("modules over different rings")
    if not (phi.weakly_supersingular and psi.weakly_supersingular):
        raise DrinfeldError("isomorphism test needs weakly supersingular modules")
    if j_invariant(phi) != j_invariant(psi):
        return IsomorphismResult(False)
    L, q = phi.field, phi.q
    R = L.poly_ring()
    ratio_delta = phi.delta / psi.delta
    # c^(q^3-1) = delta1/delta2
    root_poly = R([-ratio_delta] + [L.zero()] * (q**3 - 2) + [L.one()])
    m = splitting_degree(root_poly)
    emb = extension(L, m)
    big = emb.target
    candidates = [r for r, _ in big.poly_ring()([emb(c) for c in root_poly.coeffs()]).roots()]
    if psi.g != 0:
        want = emb(phi.g / psi.g)
        candidates = [c for c in candidates if c ** (q * q - 1) == want]
    if not candidates:  # pragma: no cover - excluded by equal J-invariants
        raise DrinfeldError("no isomorphism witness found despite equal J-invariants")
    c = min(candidates, key=big.key)
    cs = SkewPoly.const(big, q, c)
    if cs * phi.phi_T.embed(emb) != psi.phi_T.embed(emb) * cs:  # pragma: no cover
        raise DrinfeldError("witness failed the intertwining check")
    return IsomorphismResult(True, c, emb)


@dataclass
class TorsionStructure:
    modulus: object  # P(T) over GF(q)
    elementary_divisors: list  # TPolys pi^e, sorted
    exponents: dict  # irreducible factor (as coefficient tuple) -> block exponents
    size: int
    points: list | None = None
    embedding: Embedding | None = None

    @property
    def rank_free(self) -> int | None:
        """Rank when the module is free over F_q[T]/(P), else ``None``."""
        _, factors = self.modulus.factor()
        ranks = set()
        for pi, e in factors:
            exps = self.exponents.get(_fkey(pi), [])
            if any(x != int(e) for x in exps):
                return None
            ranks.add(len(exps))
        if len(ranks) != 1:
            return None
        return ranks.pop()

    def to_json(self) -> dict:
        return {
            "modulus": _tpoly_json(self.modulus),
            "elementary_divisors": [_tpoly_json(d) for d in self.elementary_divisors],
            "size": self.size,
        }


def _fkey(pi) -> tuple:
    return tuple(tuple(int(x) for x in c.to_list()) for c in pi.coeffs())


def _tpoly_json(P) -> list:
    return [[int(x) for x in c.to_list()] for c in P.coeffs()]


def torsion_points_basis(module: DrinfeldModule, P, emb: Embedding | None = None):
    phiP = phi_of(module, P)
    if emb is None:
        emb = extension(module.field, ambient_degree(phiP))
    return kernel_basis(phiP, emb), emb


def torsion_structure(
    module: DrinfeldModule, P, emb: Embedding | None = None, with_points: bool = False
) -> TorsionStructure:
    """phi[P] inside ``emb.target`` (a splitting field by default) as an F_q[T]-module."""
    phiP = phi_of(module, P)
    if emb is None:
        emb = extension(module.field, ambient_degree(phiP))
    pts = kernel(phiP, emb, strict=True)

    big = emb.target
    q = module.q
    fp = kernel_basis(phiP, emb)
    basis = modstruct.fq_basis(big, q, fp)
    act = module.phi_T.embed(emb)
    mat = modstruct.action_matrix(big, q, basis, act) if basis else []
    to_big = module.base_embedding.compose(emb)
    _, factors = P.factor()
    exps = {}
    divisors = []
    for pi, _ in factors:
        part = modstruct.primary_exponents(
            mat, [to_big(c) for c in pi.coeffs()], int(pi.degree()), big.one(), big.zero()
        )
        exps[_fkey(pi)] = part.exponents
        divisors.extend(pi**e for e in part.exponents)
    divisors.sort(key=lambda d: (int(d.degree()), _fkey(d)))
    total = 1
    for d in divisors:
        total *= q ** int(d.degree())
    if total != len(pts):
        raise DrinfeldError(f"module structure accounts for {total} of {len(pts)} points")
    return TorsionStructure(P, divisors, exps, len(pts), pts if with_points else None, emb)


def torsion_size_by_gcd(module: DrinfeldModule, P) -> int:
    """q^(separable tau-degree of phi_P), the predicted size of phi[P]."""
    return module.q ** phi_of(module, P).separable_part().degree


def common_kernel_size(f: SkewPoly, g: SkewPoly) -> int:
    """|ker f ∩ ker g| over the closure for separable f, via the right gcd."""
    return f.q ** right_gcd(f, g).degree
