"""Exact arithmetic in finite fields GF(p^n) with explicit moduli.

Elements are ``flint.fq_default`` values; a :class:`FieldSpec` pins the
prime, the degree and the defining polynomial so that two fields compare
equal only when their representations agree.  Moving an element between
fields always goes through an :class:`Embedding`.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import flint

DEFAULT_AMBIENT_CAP = 512


class FieldError(ValueError):
    pass


class AmbientTooSmall(FieldError):
    """Raised when a computation needs a larger extension than was supplied.

    ``required_degree`` is the extension degree (over the coefficient field)
    that would suffice.
    """

    def __init__(self, message: str, required_degree: int | None = None):
        super().__init__(message)
        self.required_degree = required_degree


def ambient_cap() -> int:
    """Largest extension degree over a base field the library will build."""
    return int(os.environ.get("DTL_AMBIENT_CAP", DEFAULT_AMBIENT_CAP))


def is_prime(p: int) -> bool:
    return p >= 2 and bool(flint.fmpz(p).is_prime())


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``; raise ``FieldError`` otherwise."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            r = q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1 or not is_prime(p):
                raise FieldError(f"{q} is not a prime power")
            return p, m
    raise FieldError(f"{q} is not a prime power")  # pragma: no cover


def _is_irreducible(p: int, coeffs: Sequence[int]) -> bool:
    return bool(flint.fmpz_mod_poly_ctx(p)(list(coeffs)).is_irreducible())


@functools.lru_cache(maxsize=None)
def lex_least_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lex-least monic irreducible of degree ``n`` over GF(p).

    Candidates are ordered by the integer ``sum(c_i * p**i)`` of their
    non-leading coefficients, i.e. lexicographically from the x^(n-1)
    coefficient down to the constant term.
    """
    for code in range(p**n):
        low = [(code // p**i) % p for i in range(n)]
        cand = tuple(low + [1])
        if _is_irreducible(p, cand):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {n} over GF({p})")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^n) given by a monic irreducible ``modulus`` (low degree first)."""

    p: int
    n: int
    modulus: tuple[int, ...]
    ctx: object = field(default=None, compare=False, hash=False, repr=False)

    @property
    def order(self) -> int:
        return self.p**self.n

    def __call__(self, value) -> "flint.fq_default":
        if isinstance(value, int):
            return self.ctx(value % self.p)
        return self.ctx(list(value))

    def zero(self):
        return self.ctx.zero()

    def one(self):
        return self.ctx.one()

    def gen(self):
        return self.ctx.gen()

    def coeffs(self, x) -> list[int]:
        return [int(c) for c in x.to_list()]

    def key(self, x) -> int:
        """Canonical integer code of ``x``; the library's total order on elements."""
        return sum(c * self.p**i for i, c in enumerate(self.coeffs(x)))

    def from_key(self, code: int):
        return self.ctx([(code // self.p**i) % self.p for i in range(self.n)])

    def elements(self) -> Iterator:
        for code in range(self.order):
            yield self.from_key(code)

    def nonzero(self) -> Iterator:
        for code in range(1, self.order):
            yield self.from_key(code)

    def contains_subfield(self, m: int) -> bool:
        return self.n % m == 0

    def in_subfield(self, x, size: int) -> bool:
        """True when ``x`` lies in the subfield with ``size`` elements."""
        return x**size == x

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    def elem_to_json(self, x) -> list[int]:
        return self.coeffs(x)

    def elem_from_json(self, data: Sequence[int]):
        if len(data) != self.n:
            raise FieldError(f"expected {self.n} coefficients, got {len(data)}")
        return self.ctx([int(c) % self.p for c in data])

    def sort(self, xs: Iterable) -> list:
        return sorted(xs, key=self.key)

    def random(self, rng):
        """Uniform element drawn from ``rng`` (a ``random.Random``)."""
        return self.from_key(rng.randrange(self.order))

    def random_nonzero(self, rng):
        return self.from_key(rng.randrange(1, self.order))

    def poly_ring(self):
        return _poly_ctx(self)

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, n={self.n}, modulus={list(self.modulus)})"


@functools.lru_cache(maxsize=None)
def _make_field(p: int, n: int, modulus: tuple[int, ...]) -> FieldSpec:
    mod = flint.fmpz_mod_poly_ctx(p)(list(modulus))
    ctx = flint.fq_default_ctx(modulus=mod)
    return FieldSpec(p, n, modulus, ctx)


@functools.lru_cache(maxsize=None)
def _poly_ctx(spec: FieldSpec):
    return flint.fq_default_poly_ctx(spec.ctx)


def make_field(p: int, n: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Validated GF(p^n).  Without ``modulus`` the lex-least irreducible is used."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if n < 1:
        raise FieldError("degree must be positive")
    if modulus is None:
        mod = lex_least_irreducible(p, n)
    else:
        mod = tuple(int(c) % p for c in modulus)
        while len(mod) > 1 and mod[-1] == 0:
            mod = mod[:-1]
        if len(mod) != n + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {n}")
        if not _is_irreducible(p, mod):
            raise FieldError("modulus is reducible")
    return _make_field(p, n, mod)


def field_from_json(data: dict) -> FieldSpec:
    return make_field(int(data["p"]), int(data["n"]), data.get("modulus"))


def frobenius_iter(x, q: int, k: int, p: int | None = None):
    """``x ** (q ** k)`` via repeated p-power maps.

    ``p`` is the field characteristic; when omitted it is taken to be the
    prime of ``q`` (the caller must ensure they agree).
    """
    if k < 0:
        raise FieldError("k must be non-negative")
    pq, m = prime_power(q)
    if p is not None and pq != p:
        raise FieldError(f"q={q} is not a power of the characteristic {p}")
    if m * k == 0:
        return x
    return x.frobenius(m * k)


@functools.lru_cache(maxsize=None)
def _default_image(source: FieldSpec, target: FieldSpec):
    R = target.poly_ring()
    roots = [r for r, _ in R(_embed_prime_coeffs(source.modulus, target)).roots()]
    if not roots:
        raise FieldError("source modulus has no root in target")
    return min(roots, key=target.key)


def _embed_prime_coeffs(coeffs: Sequence[int], target: FieldSpec) -> list:
    return [target(c) for c in coeffs]


class Embedding:
    """Injective GF(p)-algebra map ``source -> target``.

    Fixed by the image of the source generator; by default the least root
    (in the target's canonical order) of the source modulus.
    """

    def __init__(self, source: FieldSpec, target: FieldSpec, image_of_generator=None):
        if source.p != target.p:
            raise FieldError("fields of different characteristic")
        if target.n % source.n:
            raise FieldError(f"GF(p^{source.n}) does not embed in GF(p^{target.n})")
        self.source = source
        self.target = target
        if image_of_generator is None:
            image_of_generator = (
                target.gen() if source == target else _default_image(source, target)
            )
        R = target.poly_ring()
        if R(_embed_prime_coeffs(source.modulus, target))(image_of_generator) != 0:
            raise FieldError("generator image is not a root of the source modulus")
        self.image_of_generator = image_of_generator
        self._basis = [target.one()]
        for _ in range(source.n - 1):
            self._basis.append(self._basis[-1] * image_of_generator)

    def __call__(self, x):
        if self.source == self.target and self.image_of_generator == self.target.gen():
            return x
        acc = self.target.zero()
        for c, b in zip(self.source.coeffs(x), self._basis):
            if c:
                acc += c * b
        return acc

    def compose(self, other: "Embedding") -> "Embedding":
        """``other ∘ self`` : source -> other.target."""
        if other.source != self.target:
            raise FieldError("embeddings do not compose")
        return Embedding(self.source, other.target, other(self.image_of_generator))

    def __repr__(self) -> str:
        return f"Embedding(GF({self.source.p}^{self.source.n}) -> GF({self.target.p}^{self.target.n}))"


def identity(spec: FieldSpec) -> Embedding:
    return Embedding(spec, spec)


@functools.lru_cache(maxsize=None)
def extension(spec: FieldSpec, m: int) -> Embedding:
    """Embedding of ``spec`` into its degree-``m`` extension (default modulus)."""
    if m < 1:
        raise FieldError("extension degree must be positive")
    if m > ambient_cap():
        raise AmbientTooSmall(
            f"extension degree {m} exceeds cap {ambient_cap()} (set DTL_AMBIENT_CAP)", m
        )
    if m == 1:
        return identity(spec)
    return Embedding(spec, make_field(spec.p, spec.n * m))


def poly(spec: FieldSpec, coeffs: Sequence):
    """Univariate polynomial over ``spec`` from elements or ints (low degree first)."""
    return spec.poly_ring()([spec(c) if isinstance(c, int) else c for c in coeffs])


def map_poly(f, emb: Embedding):
    return emb.target.poly_ring()([emb(c) for c in f.coeffs()])


def roots_in(f, emb: Embedding, multiplicities: bool = False):
    """Roots of the univariate ``f`` (over ``emb.source``) lying in ``emb.target``.

    Returns a sorted list of distinct roots, or ``(root, multiplicity)``
    pairs when ``multiplicities`` is set.
    """
    if f.is_zero():
        raise FieldError("zero polynomial has every element as a root")
    g = map_poly(f, emb)
    found = g.roots()
    found.sort(key=lambda rm: emb.target.key(rm[0]))
    if multiplicities:
        return [(r, int(m)) for r, m in found]
    return [r for r, _ in found]


def roots_by_scan(f, spec: FieldSpec) -> list:
    """Exhaustive root search; the independent oracle for :func:`roots_in`."""
    return [x for x in spec.elements() if f(x) == 0]


def splitting_degree(f) -> int:
    """Degree of the splitting field of ``f`` over its coefficient field."""
    if f.is_zero():
        raise FieldError("zero polynomial")
    if f.degree() <= 0:
        return 1
    _, factors = f.factor()
    return functools.reduce(math.lcm, (int(g.degree()) for g, _ in factors), 1)


def distinct_root_count(f) -> int:
    """Number of distinct roots of ``f`` in an algebraic closure."""
    if f.is_zero():
        raise FieldError("zero polynomial")
    if f.degree() <= 0:
        return 0
    _, factors = f.factor()
    return sum(int(g.degree()) for g, _ in factors)
