"""Sparse multivariate (Laurent) polynomials over GF(p).

Exponent vectors may be negative so that denominators which are monomials
can be carried along and cleared explicitly.  Large products go through
Kronecker substitution into a univariate ``nmod_poly``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import flint

KRONECKER_THRESHOLD = 2000  # |f|*|g| above which products use Kronecker substitution


class MultiPoly:
    __slots__ = ("p", "vars", "terms")

    def __init__(self, p: int, vars: Sequence[str], terms: Mapping[tuple, int] | None = None):
        self.p = p
        self.vars = tuple(vars)
        clean = {}
        if terms:
            for e, c in terms.items():
                c %= p
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    # constructors

    @classmethod
    def var(cls, p: int, vars: Sequence[str], name: str) -> "MultiPoly":
        e = [0] * len(vars)
        e[list(vars).index(name)] = 1
        return cls(p, vars, {tuple(e): 1})

    @classmethod
    def const(cls, p: int, vars: Sequence[str], c: int) -> "MultiPoly":
        return cls(p, vars, {(0,) * len(vars): c})

    @classmethod
    def gens(cls, p: int, vars: Sequence[str]) -> list["MultiPoly"]:
        return [cls.var(p, vars, v) for v in vars]

    def _new(self, terms) -> "MultiPoly":
        out = MultiPoly.__new__(MultiPoly)
        out.p, out.vars, out.terms = self.p, self.vars, terms
        return out

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.p != self.p or other.vars != self.vars:
                raise ValueError("incompatible polynomial rings")
            return other
        if isinstance(other, int):
            return MultiPoly.const(self.p, self.vars, other)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        p = self.p
        for e, c in other.terms.items():
            v = (t.get(e, 0) + c) % p
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return self._new({e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self._new({})
        if len(self.terms) * len(other.terms) > KRONECKER_THRESHOLD:
            return self._mul_kronecker(other)
        p = self.p
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = (t.get(e, 0) + c1 * c2) % p
        return self._new({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def _mul_kronecker(self, other: "MultiPoly") -> "MultiPoly":
        nv = len(self.vars)
        lo1 = [min(e[i] for e in self.terms) for i in range(nv)]
        lo2 = [min(e[i] for e in other.terms) for i in range(nv)]
        hi1 = [max(e[i] for e in self.terms) - lo1[i] for i in range(nv)]
        hi2 = [max(e[i] for e in other.terms) - lo2[i] for i in range(nv)]
        bounds = [hi1[i] + hi2[i] + 1 for i in range(nv)]
        strides = []
        s = 1
        for b in bounds:
            strides.append(s)
            s *= b

        def pack(poly, lo, hi):
            dense = [0] * (sum(h * st for h, st in zip(hi, strides)) + 1)
            for e, c in poly.terms.items():
                dense[sum((e[i] - lo[i]) * strides[i] for i in range(nv))] = c
            return flint.nmod_poly(dense, self.p)

        prod = pack(self, lo1, hi1) * pack(other, lo2, hi2)
        base = [lo1[i] + lo2[i] for i in range(nv)]
        out = {}
        for idx, c in enumerate(prod.coeffs()):
            c = int(c)
            if c:
                e = []
                r = idx
                for i in range(nv - 1, -1, -1):
                    e.append(r // strides[i] + base[i])
                    r %= strides[i]
                out[tuple(reversed(e))] = c
        return self._new(out)

    def frobenius(self, k: int = 1) -> "MultiPoly":
        """``self ** (p**k)``: exponents scale, GF(p) coefficients are fixed."""
        m = self.p**k
        return self._new({tuple(a * m for a in e): c for e, c in self.terms.items()})

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have negative powers")
            (e, c), = self.terms.items()
            inv = pow(c, -1, self.p)
            return self._new({tuple(a * n for a in e): pow(inv, -n, self.p)})
        result = MultiPoly.const(self.p, self.vars, 1)
        base = self
        k = 0
        while n:
            digit = n % self.p
            if digit:
                chunk = MultiPoly.const(self.p, self.vars, 1)
                for _ in range(digit):
                    chunk = chunk * base
                result = result * chunk.frobenius(k)
            n //= self.p
            k += 1
        return result

    def __truediv__(self, other):
        """Division by a monomial (Laurent) or by a nonzero constant."""
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) != 1:
            raise ValueError("can only divide by a monomial; use divmod_var")
        return self * other ** -1

    # comparison and inspection

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.vars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        """Terms in graded lex order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def leading_term(self) -> tuple[tuple, int]:
        return self.sorted_terms()[0]

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def min_exponents(self) -> tuple:
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(e[i] for e in self.terms) for i in range(len(self.vars)))

    def is_polynomial(self) -> bool:
        return all(a >= 0 for a in self.min_exponents())

    def monomial(self, exps: Sequence[int], c: int = 1) -> "MultiPoly":
        return self._new({tuple(exps): c % self.p} if c % self.p else {})

    def clearing_monomial(self) -> "MultiPoly":
        """Least monomial M with ``M * self`` a genuine polynomial."""
        return self.monomial([max(0, -a) for a in self.min_exponents()])

    def coefficients_in(self, var: str) -> dict[int, "MultiPoly"]:
        """``{d: c_d}`` with ``self == sum c_d * var^d`` and ``c_d`` free of ``var``."""
        i = self.vars.index(var)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            d = e[i]
            e2 = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(d, {})[e2] = c
        return {d: self._new(t) for d, t in out.items()}

    def subs(self, mapping: Mapping[str, "MultiPoly | int"]) -> "MultiPoly":
        """Substitute polynomials (in the same ring) for variables."""
        idx = {self.vars.index(v): val for v, val in mapping.items()}
        one = MultiPoly.const(self.p, self.vars, 1)
        out = self._new({})
        cache: dict = {}
        for e, c in self.terms.items():
            term = self.monomial(
                [0 if i in idx else a for i, a in enumerate(e)], c
            )
            for i, val in idx.items():
                a = e[i]
                if a:
                    key = (i, a)
                    if key not in cache:
                        v = val if isinstance(val, MultiPoly) else one * val
                        cache[key] = v**a
                    term = term * cache[key]
            out = out + term
        return out

    def __call__(self, *values):
        """Evaluate at field elements (or ints), one per variable."""
        if len(values) != len(self.vars):
            raise ValueError("wrong number of values")
        acc = 0
        for e, c in self.terms.items():
            t = c
            for x, a in zip(values, e):
                if a:
                    t = t * x**a
            acc = acc + t
        return acc

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms()[:8]:
            mono = "*".join(
                v if a == 1 else f"{v}^{a}" for v, a in zip(self.vars, e) if a
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        more = " + ..." if len(self.terms) > 8 else ""
        return " + ".join(parts) + more

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "vars": list(self.vars),
            "terms": [[list(e), c] for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MultiPoly":
        return cls(data["p"], data["vars"], {tuple(e): c for e, c in data["terms"]})


def to_univariate(f: MultiPoly, var: str, spec, values: Mapping[str, object]):
    """Specialize every variable except ``var`` to field elements; return a flint polynomial."""
    coeffs = f.coefficients_in(var)
    if min(coeffs) < 0:
        raise ValueError("negative powers of the free variable")
    args = [spec.one() if v == var else values[v] for v in f.vars]
    dense = [spec.zero()] * (max(coeffs) + 1)
    for d, c in coeffs.items():
        dense[d] = spec.zero() + c(*args)
    return spec.poly_ring()(dense)


class DivisionResult:
    __slots__ = ("quotient", "remainder", "multiplier")

    def __init__(self, quotient, remainder, multiplier):
        self.quotient = quotient
        self.remainder = remainder
        self.multiplier = multiplier

    def __iter__(self):
        yield self.quotient
        yield self.remainder
        yield self.multiplier


def divmod_var(f: MultiPoly, g: MultiPoly, var: str) -> DivisionResult:
    """Division of ``f`` by ``g`` viewed as polynomials in ``var``.

    Returns ``(Q, R, M)`` with ``M*f == Q*g + R``, ``deg_var R < deg_var g``
    and every part a genuine polynomial whenever ``f`` and ``g`` are.  When
    the leading coefficient of ``g`` is a monomial the division runs in the
    Laurent ring and M is the monomial clearing Q and R; otherwise classical
    pseudo-division is used and M is a power of the leading coefficient.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    gc = g.coefficients_in(var)
    dg = max(gc)
    lc = gc[dg]
    x = MultiPoly.var(f.p, f.vars, var)
    one = MultiPoly.const(f.p, f.vars, 1)
    if len(lc) == 1:
        lc_inv = lc**-1
        Q = f._new({})
        R = f
        while not R.is_zero() and R.degree(var) >= dg:
            d = R.degree(var)
            top = R.coefficients_in(var)[d]
            t = top * lc_inv * x ** (d - dg)
            Q = Q + t
            R = R - t * g
        mq = Q.clearing_monomial()
        mr = R.clearing_monomial()
        M = _lcm_monomial(mq, mr)
        return DivisionResult(M * Q, M * R, M)
    M = one
    Q = f._new({})
    R = f
    while not R.is_zero() and R.degree(var) >= dg:
        d = R.degree(var)
        top = R.coefficients_in(var)[d]
        R = lc * R - top * x ** (d - dg) * g
        Q = lc * Q + top * x ** (d - dg)
        M = M * lc
    return DivisionResult(Q, R, M)


def _lcm_monomial(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    (ea, _), = a.terms.items()
    (eb, _), = b.terms.items()
    return a.monomial([max(x, y) for x, y in zip(ea, eb)])


class Frac:
    """Rational function ``num/den`` with MultiPoly parts; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.const(num.p, num.vars, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    def _c(self, o) -> "Frac":
        if isinstance(o, Frac):
            return o
        if isinstance(o, int):
            return Frac(MultiPoly.const(self.num.p, self.num.vars, o))
        if isinstance(o, MultiPoly):
            return Frac(o)
        return NotImplemented

    def __add__(self, o):
        o = self._c(o)
        return Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Frac(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._c(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._c(o)
        return Frac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Frac":
        return Frac(self.den, self.num)

    def __truediv__(self, o):
        return self * self._c(o).inverse()

    def __rtruediv__(self, o):
        return self._c(o) * self.inverse()

    def __pow__(self, n: int) -> "Frac":
        if n < 0:
            return self.inverse() ** (-n)
        return Frac(self.num**n, self.den**n)

    def cleared_difference(self, other: "Frac") -> MultiPoly:
        """``self.num*other.den - other.num*self.den``; zero iff the fractions agree."""
        return self.num * other.den - other.num * self.den

    def __eq__(self, other):
        other = self._c(other)
        return self.cleared_difference(other).is_zero()

    __hash__ = None
