"""Monic T-isogenies ``tau - u`` between normalized weakly supersingular modules.

A step ``tau - u`` runs from ``-tau^3 + g1*tau^2 + 1`` to ``-tau^3 + g2*tau^2 + 1``
where g1 and g2 are determined by u.  Chains of steps are classified pair by
pair (does the composite of two steps kill the T-torsion of rank 2, or is it
a T^2-isogeny of rank 1?) and triple by triple.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Sequence

from . import modstruct
from .drinfeld import normalized_module
from .ffield import AmbientTooSmall, Embedding, FieldSpec, distinct_root_count, extension, field_from_json, splitting_degree
from .skew import SkewPoly, ambient_degree, compose, kernel, kernel_basis, right_divmod, right_gcd

log = logging.getLogger(__name__)


class Branch(str, enum.Enum):
    RANK2 = "RANK2"  # lambda2*lambda1 is a T-isogeny of rank 2
    T2RANK1 = "T2RANK1"  # lambda2*lambda1 is a T^2-isogeny of rank 1
    RANK3 = "RANK3"  # lambda3*lambda2*lambda1 = -phi_T
    NOT_T = "NOT_T"  # lambda3*lambda2*lambda1 is not a T-isogeny


class IsogenyError(ValueError):
    pass


class NotComposable(IsogenyError):
    pass


class DegenerateLocus(IsogenyError):
    """Both branch factors vanish; the pair is logged rather than classified."""


class HypothesisError(IsogenyError):
    pass


def _nz(u):
    if u == 0:
        raise IsogenyError("u must be nonzero")


def g_from_u(u, q: int):
    """Source coefficient ``(u^(q^2+q+1) - 1) / u^(q+1)``."""
    _nz(u)
    return (u ** (q * q + q + 1) - 1) / u ** (q + 1)


def pushforward_g(u, q: int):
    """Target coefficient ``(u^(q^2+q+1) - 1) / u^(q^2+q)``."""
    _nz(u)
    return (u ** (q * q + q + 1) - 1) / u ** (q * q + q)


def lam(field: FieldSpec, q: int, u) -> SkewPoly:
    return SkewPoly(field, q, [-u, field.one()])


def phi_T(field: FieldSpec, q: int, g) -> SkewPoly:
    return normalized_module(field, q, g).phi_T


def mu_cofactor(field: FieldSpec, q: int, u) -> SkewPoly:
    """mu with ``phi_T == mu * (tau - u)`` for the source module of ``tau - u``."""
    _nz(u)
    return SkewPoly(field, q, [-u.inverse(), -(u ** (q + 1)).inverse(), -field.one()])


def eta(field: FieldSpec, q: int, u_next, u) -> SkewPoly:
    """``-(tau - 1/(u_next*u))``."""
    return -SkewPoly(field, q, [-(u_next * u).inverse(), field.one()])


def factor1(u1, u2, q: int):
    return u1 ** (q + 1) * u2 ** (q + 1) + u2 + u1**q


def factor2(u1, u2, q: int):
    return u2 * factor1(u1, u2, q) ** (q - 1) - u1 ** (q * q)


def factor_rank3(u1, u2, u3, q: int):
    # u2*u3 - 1/u1, cleared by u1
    return u1 * u2 * u3 - 1


def factor_not_t(u1, u2, u3, q: int):
    return u2 * u3 * (u2 * u3 - u1.inverse()) ** (q - 1) - u1 * u2**q


def composable(u1, u2, q: int) -> bool:
    return pushforward_g(u1, q) == g_from_u(u2, q)


def classify_pair(u1, u2, q: int) -> Branch:
    _nz(u1)
    _nz(u2)
    if not composable(u1, u2, q):
        raise NotComposable("target of tau - u1 differs from source of tau - u2")
    a = factor1(u1, u2, q) == 0
    b = factor2(u1, u2, q) == 0
    if a and b:
        raise DegenerateLocus("both pair factors vanish")
    if a:
        return Branch.RANK2
    if b:
        return Branch.T2RANK1
    raise NotComposable("neither pair factor vanishes")


def classify_triple(u1, u2, u3, q: int) -> Branch:
    if classify_pair(u1, u2, q) != Branch.RANK2 or classify_pair(u2, u3, q) != Branch.RANK2:
        raise HypothesisError("classify_triple needs two RANK2 pairs")
    a = factor_rank3(u1, u2, u3, q) == 0
    b = factor_not_t(u1, u2, u3, q) == 0
    if a and b:
        raise DegenerateLocus("both triple factors vanish")
    if a:
        return Branch.RANK3
    if b:
        return Branch.NOT_T
    raise IsogenyError("neither triple factor vanishes")


@dataclass(frozen=True)
class TIsogenyStep:
    field: FieldSpec
    q: int
    u: object

    @property
    def source_g(self):
        return g_from_u(self.u, self.q)

    @property
    def target_g(self):
        return pushforward_g(self.u, self.q)

    @property
    def poly(self) -> SkewPoly:
        return lam(self.field, self.q, self.u)

    @property
    def source(self) -> SkewPoly:
        return phi_T(self.field, self.q, self.source_g)

    @property
    def target(self) -> SkewPoly:
        return phi_T(self.field, self.q, self.target_g)

    def verify(self) -> bool:
        """``lambda * phi_T == psi_T * lambda`` and the mu factorizations, exactly."""
        lm, mu = self.poly, mu_cofactor(self.field, self.q, self.u)
        return (
            lm * self.source == self.target * lm
            and mu * lm == self.source
            and lm * mu == self.target
        )


@dataclass(frozen=True)
class IsogenyChain:
    field: FieldSpec
    q: int
    us: tuple
    pair_labels: tuple = field(init=False)
    triple_labels: tuple = field(init=False)

    def __post_init__(self):
        for u in self.us:
            _nz(u)
        pairs = tuple(
            classify_pair(a, b, self.q) for a, b in zip(self.us, self.us[1:])
        )
        triples = []
        for i in range(len(self.us) - 2):
            if pairs[i] == Branch.RANK2 and pairs[i + 1] == Branch.RANK2:
                triples.append(classify_triple(*self.us[i : i + 3], self.q))
            else:
                triples.append(None)
        object.__setattr__(self, "pair_labels", pairs)
        object.__setattr__(self, "triple_labels", tuple(triples))

    @property
    def steps(self) -> list[TIsogenyStep]:
        return [TIsogenyStep(self.field, self.q, u) for u in self.us]

    def __len__(self) -> int:
        return len(self.us)

    def composite(self) -> SkewPoly:
        """``lambda_n * ... * lambda_1``."""
        return compose([lam(self.field, self.q, u) for u in reversed(self.us)])

    def source_phi(self) -> SkewPoly:
        return phi_T(self.field, self.q, g_from_u(self.us[0], self.q))

    def to_json(self) -> dict:
        L = self.field
        return {
            "q": self.q,
            "field": L.to_json(),
            "u": [L.elem_to_json(u) for u in self.us],
            "pair_labels": [b.value for b in self.pair_labels],
            "triple_labels": [b.value if b else None for b in self.triple_labels],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IsogenyChain":
        L = field_from_json(data["field"])
        return cls(L, int(data["q"]), tuple(L.elem_from_json(u) for u in data["u"]))


def branch_polynomial(chain: IsogenyChain, branch: Branch):
    """Univariate polynomial whose roots are the candidate next coordinates."""
    L, q = chain.field, chain.q
    R = L.poly_ring()
    X = R.gen()
    a = chain.us[-1]
    f1 = a ** (q + 1) * X ** (q + 1) + X + a**q
    if branch == Branch.RANK2:
        return f1
    if branch == Branch.T2RANK1:
        return X * f1 ** (q - 1) - a ** (q * q)
    if len(chain) < 2:
        raise HypothesisError("triple branches need a chain of length >= 2")
    b = chain.us[-2]
    if branch == Branch.RANK3:
        return b * a * X - 1
    if branch == Branch.NOT_T:
        return a * X * (a * X - b.inverse()) ** (q - 1) - b * a**q
    raise ValueError(branch)


def extend_chain(chain: IsogenyChain, branch: Branch, strict: bool = False) -> list[IsogenyChain]:
    """All one-step extensions inside ``chain.field`` whose new pair/triple is ``branch``.

    Degenerate candidates are logged and skipped.  With ``strict`` a branch
    polynomial that does not split in the field raises AmbientTooSmall.
    """
    branch = Branch(branch)
    f = branch_polynomial(chain, branch)
    roots = [r for r, _ in f.roots()]
    if strict and len(roots) < distinct_root_count(f):
        raise AmbientTooSmall("branch polynomial does not split", splitting_degree(f))
    out = []
    for r in chain.field.sort(roots):
        if r == 0:
            continue
        try:
            ext = IsogenyChain(chain.field, chain.q, chain.us + (r,))
        except DegenerateLocus as exc:
            log.info("degenerate extension skipped: %s", exc)
            continue
        if branch in (Branch.RANK2, Branch.T2RANK1):
            ok = ext.pair_labels[-1] == branch
        else:
            ok = ext.pair_labels[-1] == Branch.RANK2 and ext.triple_labels[-1] == branch
        if ok:
            out.append(ext)
    return out


def theorem_chains(field: FieldSpec, q: int, seed, steps: int) -> list[IsogenyChain]:
    """Every chain of ``steps`` coordinates in ``field`` starting at ``seed`` whose
    pairs are all RANK2 and whose triples are all NOT_T."""
    frontier = [IsogenyChain(field, q, (seed,))]
    for i in range(1, steps):
        branch = Branch.RANK2 if i == 1 else Branch.NOT_T
        frontier = [c for ch in frontier for c in extend_chain(ch, branch)]
    return frontier


def satisfies_theorem_hypotheses(chain: IsogenyChain) -> bool:
    return all(b == Branch.RANK2 for b in chain.pair_labels) and all(
        b == Branch.NOT_T for b in chain.triple_labels
    )


@dataclass
class KernelReport:
    k: int
    kernel_size: int
    divisors: list[int]
    gcd_divisors: list[int]
    mT_kernel_enum: int
    mT_kernel_gcd: int
    proof_identity: bool
    ambient_degree: int
    q: int

    @property
    def chain_length(self) -> int:
        return 2 * self.k

    @property
    def is_Tk_rank2(self) -> bool:
        return self.divisors == [self.k, self.k]

    @property
    def verified(self) -> bool:
        return (
            self.kernel_size == self.q ** (2 * self.k)
            and self.is_Tk_rank2
            and self.gcd_divisors == self.divisors
            and self.mT_kernel_enum == self.q**2 == self.mT_kernel_gcd
            and self.proof_identity
        )

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "kernel_size": self.kernel_size,
            "divisors": self.divisors,
            "gcd_divisors": self.gcd_divisors,
            "mT_kernel": {"enumeration": self.mT_kernel_enum, "right_gcd": self.mT_kernel_gcd},
            "proof_identity": self.proof_identity,
            "ambient_degree": self.ambient_degree,
            "verified": self.verified,
        }


def proof_factorization(chain: IsogenyChain) -> SkewPoly:
    """``eta_1 * eta_3 * ... * eta_(2k-1) * lambda_2k * ... * lambda_1``."""
    L, q, us = chain.field, chain.q, chain.us
    etas = [eta(L, q, us[i + 1], us[i]) for i in range(0, len(us), 2)]
    return compose(etas + [chain.composite()])


def kernel_module_structure(chain: IsogenyChain, emb: Embedding | None = None) -> KernelReport:
    """Structure of ker(lambda_2k * ... * lambda_1) under the T-action of the source module."""
    n = len(chain)
    if n == 0 or n % 2:
        raise HypothesisError("chain length must be even and positive")
    if not satisfies_theorem_hypotheses(chain):
        raise HypothesisError("every pair must be RANK2 and every triple NOT_T")
    k = n // 2
    q = chain.q
    comp = chain.composite()
    phi1 = chain.source_phi()
    if emb is None:
        emb = extension(chain.field, ambient_degree(comp))
    big = emb.target
    pts = kernel(comp, emb, strict=True)

    # route 1: explicit points and the matrix of the T-action
    basis = modstruct.fq_basis(big, q, kernel_basis(comp, emb))
    act = phi1.embed(emb)
    mat = modstruct.action_matrix(big, q, basis, act)
    part = modstruct.primary_exponents(mat, [big.zero(), big.one()], 1, big.one(), big.zero())
    mT_enum = sum(1 for x in pts if act(x) == 0)

    # route 2: right gcds with phi_(T^j), no roots needed
    dims = []
    phij = phi1
    for _ in range(k):
        dims.append(right_gcd(comp, phij).degree)
        phij = phij * phi1
    gcd_parts = modstruct.partition_from_kernel_dims(dims)
    mT_gcd = q ** right_gcd(comp, phi1).degree

    power = phi1
    for _ in range(k - 1):
        power = power * phi1
    ok = proof_factorization(chain) == power
    return KernelReport(
        k, len(pts), part.exponents, gcd_parts, mT_enum, mT_gcd, ok, big.n // chain.field.n, q
    )


def rank3_composite_check(chain: IsogenyChain) -> bool:
    """For a RANK3 triple the composite equals ``-phi_T`` of the source module."""
    if len(chain) != 3 or chain.triple_labels[0] != Branch.RANK3:
        raise HypothesisError("need a single RANK3 triple")
    return chain.composite() == -chain.source_phi()


def rank2_right_factor(u1, u2, field: FieldSpec, q: int) -> bool:
    """Whether ``tau - u2`` right-divides mu of ``tau - u1``."""
    return right_divmod(mu_cofactor(field, q, u1), lam(field, q, u2))[1].is_zero()


@dataclass
class PairFiber:
    u1: object
    factor1_roots: int  # distinct roots over the algebraic closure
    factor2_roots: int
    composable_roots: int
    shared_roots: int
    labels: dict  # Branch value -> number of composable u2 inside the field
    degenerate: bool

    @property
    def dichotomy_holds(self) -> bool:
        return (
            not self.degenerate
            and self.factor1_roots + self.factor2_roots == self.composable_roots
            and self.shared_roots == 0
        )


def pair_fiber(field: FieldSpec, q: int, u1) -> PairFiber:
    """All u2 with ``tau - u2`` composable after ``tau - u1``, split by branch."""
    _nz(u1)
    R = field.poly_ring()
    X = R.gen()
    c = pushforward_g(u1, q)
    comp = X ** (q * q + q + 1) - c * X ** (q + 1) - 1
    f1 = u1 ** (q + 1) * X ** (q + 1) + X + u1**q
    f2 = X * f1 ** (q - 1) - u1 ** (q * q)
    shared = f1.gcd(f2)
    labels = {b.value: 0 for b in (Branch.RANK2, Branch.T2RANK1)}
    degenerate = shared.degree() > 0
    for r, _ in comp.roots():
        try:
            labels[classify_pair(u1, r, q).value] += 1
        except DegenerateLocus:
            degenerate = True
    return PairFiber(
        u1,
        distinct_root_count(f1),
        distinct_root_count(f2),
        distinct_root_count(comp),
        int(shared.degree()),
        labels,
        degenerate,
    )
