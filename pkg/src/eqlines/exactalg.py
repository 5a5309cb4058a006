"""Exact arithmetic in conjugation rings and exact dense linear algebra.

A conjugation ring here is L = K(i) with i^2 = -1 and involution
a + bi -> a - bi.  Three instances are supported:

  * ``finite(p)``: F_{p^2} for a prime p with p = 3 (mod 4), so that t^2+1
    is irreducible over F_p; components are canonical residues in [0, p).
  * ``gaussian``: the Gaussian integers Z[i], components are Python ints
    (arbitrary precision, no overflow).
  * ``gaussian_fraction``: the Gaussian rationals Q(i), components are
    ``fractions.Fraction``.

The matrix layer provides conjugate transposes, products, the sesquilinear
Gram matrix (x, y) = x* y, and exact rank.  Over the Gaussian integers rank
is taken over the fraction field.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import sympy


class RingError(ValueError):
    """Invalid ring specification or unsupported ring operation."""


FINITE = "finite"
GAUSSIAN = "gaussian"
GAUSSIAN_FRACTION = "gaussian_fraction"


@dataclass(frozen=True)
class RingSpec:
    """Descriptor for a supported conjugation ring."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == FINITE:
            p = self.p
            if p is None or p < 2 or not sympy.isprime(p):
                raise RingError(f"{p!r} is not prime")
            if p == 2:
                raise RingError("characteristic 2 is not supported")
            if p % 4 == 1:
                raise RingError(f"t^2+1 splits mod {p}; need p = 3 (mod 4)")
        elif self.kind in (GAUSSIAN, GAUSSIAN_FRACTION):
            if self.p is not None:
                raise RingError("p applies only to finite rings")
        else:
            raise RingError(f"unknown ring kind {self.kind!r}")

    def __str__(self):
        if self.kind == FINITE:
            return f"gf:{self.p}"
        return "gauss" if self.kind == GAUSSIAN else "gaussq"

    @staticmethod
    def parse(text: str) -> "RingSpec":
        text = text.strip()
        if text.startswith("gf:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise RingError(f"bad ring spec {text!r}")
            return RingSpec(FINITE, p)
        if text == "gauss":
            return RingSpec(GAUSSIAN)
        if text == "gaussq":
            return RingSpec(GAUSSIAN_FRACTION)
        raise RingError(f"bad ring spec {text!r}")


class RingElement:
    """Element re + im*i of a conjugation ring.  Immutable."""

    __slots__ = ("re", "im", "ring")

    def __init__(self, re, im, ring: "Ring"):
        self.re = re
        self.im = im
        self.ring = ring

    def _check(self, other):
        if not isinstance(other, RingElement) or other.ring.spec != self.ring.spec:
            raise RingError("ring mismatch")

    def __add__(self, other):
        self._check(other)
        return self.ring.el(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        self._check(other)
        return self.ring.el(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return self.ring.el(-self.re, -self.im)

    def __mul__(self, other):
        self._check(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return self.ring.el(a * c - b * d, a * d + b * c)

    def conj(self):
        return self.ring.el(self.re, -self.im)

    def norm(self):
        """conj(x) * x, an element of the base ring K (returned as a scalar)."""
        n = self.re * self.re + self.im * self.im
        if self.ring.spec.kind == FINITE:
            n %= self.ring.spec.p
        return n

    def inv(self):
        ring = self.ring
        if self.is_zero():
            raise RingError("inverse of zero")
        kind = ring.spec.kind
        if kind == FINITE:
            p = ring.spec.p
            ninv = pow(self.norm(), p - 2, p)
            return ring.el(self.re * ninv, -self.im * ninv)
        if kind == GAUSSIAN:
            if self.norm() != 1:
                raise RingError("non-unit has no inverse in the Gaussian integers")
            return ring.el(self.re, -self.im)
        n = self.norm()
        return ring.el(Fraction(self.re, 1) / n, -Fraction(self.im, 1) / n)

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __eq__(self, other):
        return (
            isinstance(other, RingElement)
            and self.ring.spec == other.ring.spec
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self):
        return hash((self.re, self.im, self.ring.spec))

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}+{self.im}i"


class Ring:
    """Handle for a conjugation ring: constants, coercion, characteristic."""

    def __init__(self, spec: RingSpec):
        if not isinstance(spec, RingSpec):
            spec = RingSpec.parse(spec)
        self.spec = spec
        self.char = spec.p if spec.kind == FINITE else 0
        self.zero = self.el(0, 0)
        self.one = self.el(1, 0)
        self.i = self.el(0, 1)

    def _base(self, v):
        kind = self.spec.kind
        if kind == FINITE:
            return int(v) % self.spec.p
        if kind == GAUSSIAN:
            iv = int(v)
            if iv != v:
                raise RingError(f"{v!r} is not a Gaussian integer component")
            return iv
        return Fraction(v)

    def el(self, re, im=0) -> RingElement:
        return RingElement(self._base(re), self._base(im), self)

    def is_field(self) -> bool:
        return self.spec.kind in (FINITE, GAUSSIAN_FRACTION)

    def i_power(self, t: int) -> RingElement:
        return (self.one, self.i, -self.one, -self.i)[t % 4]

    def __eq__(self, other):
        return isinstance(other, Ring) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"Ring({self.spec})"


def ring_make(spec: RingSpec | str) -> Ring:
    return Ring(spec)


def _fraction_ring() -> Ring:
    return Ring(RingSpec(GAUSSIAN_FRACTION))


class ExactMatrix:
    """Dense matrix over one conjugation ring."""

    __slots__ = ("rows", "cols", "entries", "ring")

    def __init__(self, entries: Sequence[Sequence[RingElement]], ring: Ring):
        entries = tuple(tuple(row) for row in entries)
        if not entries or not entries[0]:
            raise RingError("matrix dimensions must be positive")
        cols = len(entries[0])
        for row in entries:
            if len(row) != cols:
                raise RingError("ragged rows")
            for x in row:
                if not isinstance(x, RingElement) or x.ring.spec != ring.spec:
                    raise RingError("ring mismatch in matrix entries")
        self.entries = entries
        self.rows = len(entries)
        self.cols = cols
        self.ring = ring

    @classmethod
    def from_scalars(cls, rows, ring: Ring) -> "ExactMatrix":
        """Build from scalars or (re, im) pairs."""
        out = []
        for row in rows:
            r = []
            for v in row:
                if isinstance(v, RingElement):
                    r.append(v)
                elif isinstance(v, tuple):
                    r.append(ring.el(*v))
                else:
                    r.append(ring.el(v))
            out.append(r)
        return cls(out, ring)

    @classmethod
    def identity(cls, n: int, ring: Ring) -> "ExactMatrix":
        return cls(
            [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)],
            ring,
        )

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.ring.spec == other.ring.spec
            and self.entries == other.entries
        )

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def conj_transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            [[self.entries[i][j].conj() for i in range(self.rows)] for j in range(self.cols)],
            self.ring,
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring.spec != other.ring.spec or self.cols != other.rows:
            raise RingError("matrix product shape/ring mismatch")
        z = self.ring.zero
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return ExactMatrix(out, self.ring)

    def component_arrays(self):
        """(re, im) integer component arrays; Fractions are rejected."""
        if self.ring.spec.kind == GAUSSIAN_FRACTION:
            raise RingError("no integer component arrays for the fraction ring")
        re = np.array([[int(x.re) for x in row] for row in self.entries], dtype=object)
        im = np.array([[int(x.im) for x in row] for row in self.entries], dtype=object)
        return re, im


def mat_gram(V: ExactMatrix) -> ExactMatrix:
    """Gram matrix G[a][b] = (col_a, col_b) = (col_a)* col_b."""
    ring = V.ring
    if ring.spec.kind == FINITE:
        p = ring.spec.p
        # int64 is safe when the accumulated products cannot overflow
        bound = 2 * V.rows * (p - 1) ** 2
        dtype = np.int64 if bound < 2**62 else object
        re = np.array([[x.re for x in row] for row in V.entries], dtype=dtype)
        im = np.array([[x.im for x in row] for row in V.entries], dtype=dtype)
        gre = (re.T @ re + im.T @ im) % p
        gim = (re.T @ im - im.T @ re) % p
        return ExactMatrix(
            [
                [RingElement(int(gre[a, b]), int(gim[a, b]), ring) for b in range(V.cols)]
                for a in range(V.cols)
            ],
            ring,
        )
    return V.conj_transpose() @ V


def _rank_field(rows: list[list[RingElement]], ring: Ring) -> int:
    """Row echelon rank over a field, in place on a copied grid."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    col = 0
    while rank < m and col < n:
        piv = None
        for r in range(rank, m):
            if not rows[r][col].is_zero():
                piv = r
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inv()
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(m):
            if r != rank and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def mat_rank(V: ExactMatrix) -> int:
    """Exact rank; over the Gaussian integers, rank over the fraction field."""
    ring = V.ring
    if ring.spec.kind == GAUSSIAN:
        fr = _fraction_ring()
        rows = [[fr.el(x.re, x.im) for x in row] for row in V.entries]
        return _rank_field(rows, fr)
    if not ring.is_field():
        raise RingError("rank requires a field or the Gaussian integers")
    rows = [list(row) for row in V.entries]
    return _rank_field(rows, ring)


def _exact_div_gaussian(num: RingElement, den: RingElement) -> RingElement:
    """Exact division in Z[i]; raises if the quotient is not integral."""
    ring = num.ring
    q = num * den.conj()
    n = den.norm()
    if n == 0 or q.re % n or q.im % n:
        raise RingError("non-exact Gaussian division")
    return ring.el(q.re // n, q.im // n)


def rank_fraction_free(V: ExactMatrix) -> int:
    """Rank of a Gaussian-integer matrix by integer-preserving (Bareiss)
    elimination; used as an independent cross-check of :func:`mat_rank`."""
    ring = V.ring
    if ring.spec.kind != GAUSSIAN:
        raise RingError("fraction-free rank is defined for Gaussian integers")
    rows = [list(row) for row in V.entries]
    m = len(rows)
    n = len(rows[0])
    rank = 0
    col = 0
    prev = ring.one
    while rank < m and col < n:
        piv = None
        for r in range(rank, m):
            if not rows[r][col].is_zero():
                piv = r
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pivot = rows[rank][col]
        for r in range(rank + 1, m):
            fr = rows[r][col]
            rows[r] = [
                _exact_div_gaussian(pivot * a - fr * b, prev)
                for a, b in zip(rows[r], rows[rank])
            ]
        prev = pivot
        rank += 1
        col += 1
    return rank
