"""Finite F_q[T]-modules given as F_q-linear operators on subspaces of a field.

A torsion module sits inside some GF(p^N) as a GF(p)-subspace; T acts
through a q-linear map.  Here we pick an F_q-basis, write the action as a
matrix with entries in F_q (embedded in the big field) and read off the
elementary divisors from kernel dimensions of powers of each irreducible
factor, which is the Jordan/Frobenius structure theorem made concrete.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import flint

from .ffield import FieldSpec, prime_power
from .skew import SkewPoly, kernel_basis


def _fp_vec(spec: FieldSpec, x) -> list[int]:
    return spec.coeffs(x)


def fp_rank(spec: FieldSpec, elems: Sequence) -> int:
    if not elems:
        return 0
    rows = [_fp_vec(spec, x) for x in elems]
    return flint.nmod_mat(len(rows), spec.n, [c for r in rows for c in r], spec.p).rank()


def subfield_basis(spec: FieldSpec, q: int) -> list:
    """GF(p)-basis of the copy of GF(q) inside ``spec``."""
    _, a = prime_power(q)
    fix = SkewPoly.tau(spec, spec.p, a) - SkewPoly.const(spec, spec.p, 1)
    return kernel_basis(fix)


def fq_basis(spec: FieldSpec, q: int, fp_basis: Sequence) -> list:
    """Greedy F_q-basis of the F_q-span of ``fp_basis``."""
    w = subfield_basis(spec, q)
    chosen: list = []
    gens: list = []
    for b in fp_basis:
        trial = gens + [wa * b for wa in w]
        if fp_rank(spec, trial) > len(gens):
            chosen.append(b)
            gens = trial
    return chosen


class FqCoordinates:
    """Coordinates over F_q with respect to a fixed F_q-basis inside ``spec``."""

    def __init__(self, spec: FieldSpec, q: int, basis: Sequence):
        self.spec = spec
        self.q = q
        self.basis = list(basis)
        self.w = subfield_basis(spec, q)
        cols = [wa * b for b in self.basis for wa in self.w]
        self._ncols = len(cols)
        self._cols = [_fp_vec(spec, c) for c in cols]

    def __call__(self, y) -> list:
        spec = self.spec
        n, c = spec.n, self._ncols
        target = _fp_vec(spec, y)
        entries = []
        for i in range(n):
            entries.extend(self._cols[j][i] for j in range(c))
            entries.append(target[i])
        rref, rank = flint.nmod_mat(n, c + 1, entries, spec.p).rref()
        sol = [0] * c
        for r in range(rank):
            lead = next(j for j in range(c + 1) if int(rref[r, j]) != 0)
            if lead == c:
                raise ValueError("vector is outside the span")
            sol[lead] = int(rref[r, c])
        e = len(self.w)
        return [
            sum((sol[i * e + a] * self.w[a] for a in range(e)), spec.zero())
            for i in range(len(self.basis))
        ]


def action_matrix(spec: FieldSpec, q: int, basis: Sequence, act: Callable) -> list[list]:
    """Matrix (columns = images of basis vectors) of ``act`` in F_q-coordinates."""
    coords = FqCoordinates(spec, q, basis)
    cols = [coords(act(b)) for b in basis]
    r = len(basis)
    return [[cols[j][i] for j in range(r)] for i in range(r)]


# small dense linear algebra over the elements of a field


def mat_mul(a: list[list], b: list[list], zero) -> list[list]:
    n, m, k = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(m)), zero) for j in range(k)] for i in range(n)]


def rank(mat: list[list]) -> int:
    rows = [list(r) for r in mat]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = rows[rk][col].inverse()
        rows[rk] = [x * inv for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        rk += 1
    return rk


def poly_of_matrix(coeffs: Sequence, mat: list[list], one, zero) -> list[list]:
    """Evaluate the polynomial with (embedded) coefficients ``coeffs`` at ``mat``."""
    n = len(mat)
    ident = [[one if i == j else zero for j in range(n)] for i in range(n)]
    acc = [[zero] * n for _ in range(n)]
    for c in reversed(list(coeffs)):
        acc = mat_mul(acc, mat, zero)
        for i in range(n):
            acc[i][i] += c
    return acc if n else ident


def partition_from_kernel_dims(dims: Sequence[int]) -> list[int]:
    """Block sizes from ``dims[j] = dim ker N^(j+1)`` of a nilpotent-like operator.

    The number of blocks of size >= j is dims[j-1] - dims[j-2].
    """
    full = [0] + list(dims)
    at_least = [full[j] - full[j - 1] for j in range(1, len(full))]
    sizes = []
    for j, cnt in enumerate(at_least, start=1):
        nxt = at_least[j] if j < len(at_least) else 0
        sizes.extend([j] * (cnt - nxt))
    return sorted(sizes, reverse=True)


@dataclass
class PrimaryPart:
    degree: int  # degree of the irreducible factor
    exponents: list[int]  # block exponents, descending


def primary_exponents(mat: list[list], factor_coeffs: Sequence, degree: int, one, zero) -> PrimaryPart:
    """Exponents e of the cyclic summands F_q[T]/(pi^e) for one irreducible pi."""
    n = len(mat)
    if n == 0:
        return PrimaryPart(degree, [])
    pm = poly_of_matrix(factor_coeffs, mat, one, zero)
    dims = []
    power = pm
    while True:
        d = (n - rank(power)) // degree
        if dims and d == dims[-1]:
            break
        dims.append(d)
        if d * degree == n:
            break
        power = mat_mul(power, pm, zero)
    return PrimaryPart(degree, partition_from_kernel_dims(dims))
