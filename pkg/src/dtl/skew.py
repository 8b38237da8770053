"""The twisted polynomial ring L{tau} with ``tau * r = r**q * tau``.

A :class:`SkewPoly` is an immutable value.  Multiplication is composition of
the associated q-linear maps, so ``(f * g)(x) == f(g(x))``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import flint

from .ffield import (
    AmbientTooSmall,
    Embedding,
    FieldError,
    FieldSpec,
    ambient_cap,
    extension,
    field_from_json,
    identity,
    prime_power,
)


class SkewPoly:
    __slots__ = ("field", "q", "coeffs", "_qexp")

    def __init__(self, field: FieldSpec, q: int, coeffs: Iterable = ()):
        p, m = prime_power(q)
        if p != field.p or field.n % m:
            raise FieldError(f"GF({q}) is not a subfield of GF({field.p}^{field.n})")
        cs = [field(c) if isinstance(c, int) else c for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.q = q
        self.coeffs = tuple(cs)
        self._qexp = m

    # construction helpers

    @classmethod
    def tau(cls, field: FieldSpec, q: int, power: int = 1) -> "SkewPoly":
        return cls(field, q, [0] * power + [1])

    @classmethod
    def const(cls, field: FieldSpec, q: int, c) -> "SkewPoly":
        return cls(field, q, [c])

    def _like(self, coeffs) -> "SkewPoly":
        return SkewPoly(self.field, self.q, coeffs)

    def _frob(self, x, i: int):
        return x.frobenius(self._qexp * i) if i else x

    def _check(self, other: "SkewPoly"):
        if not isinstance(other, SkewPoly):
            raise TypeError("expected SkewPoly")
        if other.field != self.field or other.q != self.q:
            raise FieldError("skew polynomials over different rings")

    # basic accessors

    @property
    def degree(self) -> int:
        """tau-degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def monic(self) -> "SkewPoly":
        if self.is_zero():
            raise FieldError("zero polynomial has no monic associate")
        inv = self.leading.inverse()
        # left scalar multiplication keeps the kernel
        return self._like([inv * c for c in self.coeffs])

    def is_separable(self) -> bool:
        return not self.is_zero() and self.coeffs[0] != 0

    def inseparability(self) -> int:
        """Index of the lowest nonzero coefficient (log_q of the inseparable degree)."""
        if self.is_zero():
            raise FieldError("zero polynomial")
        return next(i for i, c in enumerate(self.coeffs) if c != 0)

    def separable_part(self) -> "SkewPoly":
        """``s`` with ``self == s * tau**inseparability()``."""
        s = self.inseparability()
        return self._like(self._frob(c, 0) for c in self.coeffs[s:])

    # ring operations

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self.field == other.field and self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.q, tuple(self.field.key(c) for c in self.coeffs)))

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return self._like(self[i] + other[i] for i in range(n))

    def __neg__(self) -> "SkewPoly":
        return self._like(-c for c in self.coeffs)

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def __mul__(self, other: "SkewPoly") -> "SkewPoly":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return self._like(())
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * self._frob(b, i)
        return self._like(out)

    def scale(self, c) -> "SkewPoly":
        """Left multiplication by the constant ``c``."""
        return self._like(c * x for x in self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero():
            return "SkewPoly(0)"
        terms = [f"({c})*tau^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return "SkewPoly(" + " + ".join(reversed(terms)) + ")"

    # evaluation

    def __call__(self, x):
        """Evaluate the linearized polynomial sum c_i x^(q^i) at ``x`` in the same field."""
        acc = 0 * x
        y = x
        for i, c in enumerate(self.coeffs):
            if i:
                y = y.frobenius(self._qexp)
            if c != 0:
                acc += c * y
        return acc

    def embed(self, emb: Embedding) -> "SkewPoly":
        if emb.source != self.field:
            raise FieldError("embedding source differs from coefficient field")
        return SkewPoly(emb.target, self.q, [emb(c) for c in self.coeffs])

    def linearized(self):
        """The linearized polynomial sum c_i X^(q^i) as a univariate polynomial."""
        R = self.field.poly_ring()
        if self.is_zero():
            return R([])
        dense = [self.field.zero()] * (self.q**self.degree + 1)
        for i, c in enumerate(self.coeffs):
            dense[self.q**i] = c
        return R(dense)

    # serialization

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "field": self.field.to_json(),
            "coeffs": [self.field.elem_to_json(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SkewPoly":
        spec = field_from_json(data["field"])
        return cls(spec, int(data["q"]), [spec.elem_from_json(c) for c in data["coeffs"]])


def skew_mul(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    return f * g


def right_divmod(f: SkewPoly, g: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """``(quo, rem)`` with ``f == quo * g + rem`` and ``rem.degree < g.degree``."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("right division by the zero skew polynomial")
    d = g.degree
    lead_inv = {}
    rem = list(f.coeffs)
    quo = [f.field.zero()] * max(len(rem) - d, 0)
    for m in range(len(rem) - 1, d - 1, -1):
        a = rem[m]
        if a == 0:
            continue
        shift = m - d
        if shift not in lead_inv:
            lead_inv[shift] = g._frob(g.leading, shift).inverse()
        c = a * lead_inv[shift]
        quo[shift] = c
        # subtract c * tau^shift * g
        for j, b in enumerate(g.coeffs):
            if b != 0:
                rem[shift + j] -= c * g._frob(b, shift)
    return f._like(quo), f._like(rem[:d])


def right_gcd(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    """Monic greatest common right divisor."""
    f._check(g)
    if f.is_zero() and g.is_zero():
        raise FieldError("right_gcd of two zero polynomials")
    a, b = f, g
    while not b.is_zero():
        a, b = b, right_divmod(a, b)[1]
    return a.monic()


def right_divides(g: SkewPoly, f: SkewPoly) -> bool:
    return right_divmod(f, g)[1].is_zero()


def compose(factors: Sequence[SkewPoly]) -> SkewPoly:
    """``factors[0] * factors[1] * ...`` (leftmost applied last)."""
    out = factors[0]
    for h in factors[1:]:
        out = out * h
    return out


def _subfield_exponent(f: SkewPoly) -> int:
    # |L| = q**e
    _, m = prime_power(f.q)
    return f.field.n // m


def ambient_degree(f: SkewPoly, cap: int | None = None) -> int:
    """Least m such that every root of ``f`` lies in the degree-m extension of its field.

    For separable ``s`` the kernel lies in GF(|L|^m) exactly when ``s``
    right-divides ``tau^(e*m) - 1`` with |L| = q^e; remainders of tau^j are
    propagated one step at a time.
    """
    if f.is_zero():
        raise FieldError("zero polynomial")
    s = f.separable_part()
    if s.degree == 0:
        return 1
    cap = ambient_cap() if cap is None else cap
    e = _subfield_exponent(f)
    one = SkewPoly.const(f.field, f.q, 1)
    tau = SkewPoly.tau(f.field, f.q)
    r = one
    j = 0
    while True:
        j += 1
        r = right_divmod(tau * r, s)[1]
        if j % e == 0:
            if r == one:
                return j // e
            if j // e >= cap:
                raise AmbientTooSmall(f"kernel needs an extension beyond degree {cap}", None)


def splitting_embedding(f: SkewPoly) -> Embedding:
    return extension(f.field, ambient_degree(f))


def _fp_matrix(f: SkewPoly, spec: FieldSpec):
    n = spec.n
    rows = []
    basis = spec.one()
    z = spec.gen()
    for _ in range(n):
        rows.append(spec.coeffs(f(basis)))
        basis = basis * z
    # column j = image of basis j
    return flint.nmod_mat(n, n, [rows[j][i] for i in range(n) for j in range(n)], spec.p)


def kernel_basis(f: SkewPoly, emb: Embedding | None = None) -> list:
    """GF(p)-basis of the roots of ``f`` lying in ``emb.target``.

    The q-linear map x -> f(x) is GF(p)-linear, so its kernel is the
    nullspace of an n-by-n matrix over GF(p).
    """
    if f.is_zero():
        raise FieldError("kernel of the zero polynomial is everything")
    if emb is None:
        emb = identity(f.field)
    g = f.embed(emb)
    spec = emb.target
    null, dim = _fp_matrix(g, spec).nullspace()
    basis = []
    for k in range(dim):
        vec = [int(null[i, k]) for i in range(spec.n)]
        basis.append(spec(vec))
    return basis


def kernel(f: SkewPoly, emb: Embedding | None = None, strict: bool = False) -> list:
    """All roots of the linearized form of ``f`` in ``emb.target``, sorted.

    With ``strict`` the ambient must contain the whole kernel of the
    separable part; otherwise :class:`AmbientTooSmall` is raised carrying
    the required extension degree over ``f.field``.
    """
    if emb is None:
        emb = identity(f.field)
    basis = kernel_basis(f, emb)
    spec = emb.target
    if strict:
        expected = f.q ** f.separable_part().degree
        if spec.p ** len(basis) < expected:
            need = ambient_degree(f)
            raise AmbientTooSmall(
                f"ambient GF({spec.p}^{spec.n}) holds {spec.p ** len(basis)} of "
                f"{expected} kernel points; extension degree {need} needed",
                need,
            )
    return spec.sort(span(basis, spec))


def span(basis: Sequence, spec: FieldSpec) -> list:
    """Every GF(p)-combination of ``basis``."""
    pts = [spec.zero()]
    for b in basis:
        pts = [x + c * b for c in range(spec.p) for x in pts]
    return pts


def kernel_by_scan(f: SkewPoly, spec: FieldSpec, emb: Embedding | None = None) -> list:
    """Exhaustive-evaluation oracle for :func:`kernel`."""
    g = f.embed(emb) if emb is not None else f
    return [x for x in spec.elements() if g(x) == 0]
