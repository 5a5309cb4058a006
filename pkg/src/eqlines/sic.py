"""Construction of d^2-vector equiangular systems from (modular) Hadamard
matrices, verification of the defining axioms, the closed-form Gram matrix,
the induced order-d^2 sign matrix, and derived invariants.

The construction: given a sign matrix H of order d that is (modular)
Hadamard for the ring characteristic, with column h_j, the vectors are

    x_{ij} = h_j o (1 + z e_i),   z = -2(1 + i),

indexed row-major by (i, j) in [d] x [d].  Off-diagonal inner products all
lie in {+-4, +-4i}; we track them as exponents t with (x_u, x_v) = 4 i^t.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy

from .exactalg import (
    GAUSSIAN,
    GAUSSIAN_FRACTION,
    FINITE,
    ExactMatrix,
    Ring,
    RingElement,
    RingError,
    RingSpec,
    mat_gram,
    mat_rank,
)
from .hadamard import (
    DEFAULT_ORDER_CAP,
    HadamardError,
    OrderCapError,
    SignMatrix,
    check_modular_hadamard,
    kron_product,
    parse_sign_matrix,
    paley,
    render_sign_matrix,
    sylvester,
)

# canonical integer values of the three defining constants
A_INT, B_INT, C_INT = 12, 16, 96


class SicError(ValueError):
    pass


# phase exponent of the closed-form Gram entry, selected by the sign pair
# (H_ij*H_il, H_kj*H_kl); indexed by ((1-s)//2) so row/col 0 means +1
_PHI_EXP = np.array([[2, 1], [3, 0]], dtype=np.int8)


def gram_phase_matrix(h: SignMatrix) -> np.ndarray:
    """Exponent matrix T over X x X (row-major X = [d]^2) with
    (x_u, x_v) = 4 i^T[u, v] for u != v; diagonal entries are 0 and unused."""
    a = h.array.astype(np.int8)
    d = h.d
    # ss[i, j, l] = H_ij * H_il; t[i,j,k,l] = phi(H_ij H_il, H_kj H_kl)
    ss = a[:, :, None] * a[:, None, :]
    idx1 = (1 - ss) // 2  # 0 for +1, 1 for -1
    t = np.empty((d, d, d, d), dtype=np.int8)
    for i in range(d):
        for k in range(d):
            # rows j, cols l
            t[i, :, k, :] = _PHI_EXP[idx1[i], idx1[k]]
    ii = np.arange(d)
    delta = (ii[:, None] == ii[None, :]).astype(np.int8)
    t += 2 * delta[:, None, :, None]  # delta_ik
    t += 2 * delta[None, :, None, :]  # delta_jl
    t %= 4
    return t.reshape(d * d, d * d)


def gram_phase_exponents(s: "SicSystem") -> np.ndarray:
    """Phase table read off the vectors themselves: T[u, v] in Z/4 with
    (x_u, x_v) = 4 i^T[u, v] for u != v.  Independent of the closed form
    (no reference to the source sign matrix); raises SicError if some
    off-diagonal inner product is not 4 times a power of i."""
    ring = s.ring
    n = s.d * s.d
    re = np.array([[int(x.re) for x in vec] for vec in s.vectors], dtype=np.int64)
    im = np.array([[int(x.im) for x in vec] for vec in s.vectors], dtype=np.int64)
    gre = re @ re.T + im @ im.T
    gim = re @ im.T - im @ re.T
    if ring.char:
        gre %= ring.char
        gim %= ring.char
    t = np.full((n, n), -1, dtype=np.int8)
    for k in range(4):
        val = ring.el(4) * ring.i_power(k)
        t[(gre == int(val.re)) & (gim == int(val.im))] = k
    off = ~np.eye(n, dtype=bool)
    if (t[off] < 0).any():
        u, v = np.argwhere((t < 0) & off)[0]
        raise SicError(f"inner product at ({u}, {v}) is not 4 i^k")
    np.fill_diagonal(t, 0)
    return t


@dataclass
class SicSystem:
    d: int
    ring: Ring
    vectors: tuple[tuple[RingElement, ...], ...]  # row-major over (i, j)
    source: SignMatrix
    z: RingElement

    def index(self, i: int, j: int) -> int:
        return i * self.d + j

    def vector(self, i: int, j: int):
        return self.vectors[self.index(i, j)]

    @cached_property
    def gram_phases(self) -> np.ndarray:
        return gram_phase_matrix(self.source)

    @cached_property
    def observed_phases(self) -> np.ndarray:
        """Phase table recomputed from the vectors, not from the source
        matrix; see gram_phase_exponents."""
        return gram_phase_exponents(self)

    def matrix(self) -> ExactMatrix:
        """d x d^2 matrix whose columns are the vectors, in index order."""
        cols = self.vectors
        return ExactMatrix(
            [[cols[u][t] for u in range(self.d * self.d)] for t in range(self.d)],
            self.ring,
        )

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "ring": str(self.ring.spec),
            "source": render_sign_matrix(self.source),
            "vectors": [[[int(x.re), int(x.im)] for x in v] for v in self.vectors],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "SicSystem":
        ring = Ring(RingSpec.parse(data["ring"]))
        source = parse_sign_matrix(data["source"])
        vectors = tuple(
            tuple(ring.el(re, im) for re, im in vec) for vec in data["vectors"]
        )
        z = ring.el(-2, -2)
        return SicSystem(data["d"], ring, vectors, source, z)


def construct_sic(h: SignMatrix, ring: Ring | RingSpec | str) -> SicSystem:
    """Build the d^2 vectors x_{ij} = h_j o (1 + z e_i) with provenance."""
    if not isinstance(ring, Ring):
        ring = Ring(ring)
    d = h.d
    if ring.char:
        if (d - 8) % ring.char != 0:
            raise SicError(f"{d} != 8 (mod {ring.char})")
    else:
        # char 0 makes the congruence d = 8 literal
        if d != 8:
            raise SicError(f"over characteristic 0 the construction needs d = 8, got {d}")
    cert = check_modular_hadamard(h, ring.char)
    if not cert.valid:
        raise SicError(
            f"matrix is not Hadamard mod {ring.char}: witness {cert.failure_witness}"
        )
    z = ring.el(-2, -2)
    one = ring.one
    hel = [[ring.el(v) for v in row] for row in h.entries]
    vectors = []
    for i in range(d):
        zi = one + z  # multiplier on coordinate i
        for j in range(d):
            vec = [hel[t][j] if t != i else hel[i][j] * zi for t in range(d)]
            vectors.append(tuple(vec))
    return SicSystem(d, ring, tuple(vectors), h, z)


@dataclass
class SicVerdict:
    passed: bool
    a: RingElement
    b: RingElement
    c: RingElement
    a_int: int = A_INT
    b_int: int = B_INT
    c_int: int = C_INT
    failed_axiom: str | None = None
    witness: tuple | None = None


def _inner(ring: Ring, x, y) -> RingElement:
    acc = ring.zero
    for a, b in zip(x, y):
        acc = acc + a.conj() * b
    return acc


def verify_sic(system, ring: Ring | None = None, d: int | None = None) -> SicVerdict:
    """Check the four defining axioms on a SicSystem or a raw vector tuple."""
    if isinstance(system, SicSystem):
        vectors, ring, d = system.vectors, system.ring, system.d
    else:
        vectors = tuple(tuple(v) for v in system)
        if ring is None:
            ring = vectors[0][0].ring
        if d is None:
            d = len(vectors[0])
    n = len(vectors)
    a_el, b_el, c_el = ring.el(A_INT), ring.el(B_INT), ring.el(C_INT)
    if (a_el * a_el) == b_el:
        raise SicError("degenerate constants: a^2 = b in this ring")
    mat = ExactMatrix([[vectors[u][t] for u in range(n)] for t in range(d)], ring)
    if ring.spec.kind == FINITE:
        p = ring.spec.p
        re = np.array([[x.re for x in row] for row in mat.entries], dtype=np.int64)
        im = np.array([[x.im for x in row] for row in mat.entries], dtype=np.int64)
        gre = (re.T @ re + im.T @ im) % p
        gim = (re.T @ im - im.T @ re) % p
        bad = np.flatnonzero((np.diag(gre) != A_INT % p) | (np.diag(gim) != 0))
        if len(bad):
            return SicVerdict(False, a_el, b_el, c_el, failed_axiom="a", witness=(int(bad[0]),))
        xre = (gre * gre.T - gim * gim.T) % p
        xim = (gre * gim.T + gim * gre.T) % p
        off = ~np.eye(n, dtype=bool)
        bad2 = np.argwhere(off & ((xre != B_INT % p) | (xim != 0)))
        if len(bad2):
            u, v = (int(w) for w in bad2[0])
            return SicVerdict(False, a_el, b_el, c_el, failed_axiom="b", witness=(u, v))
        sre = (re @ re.T + im @ im.T) % p
        sim = (im @ re.T - re @ im.T) % p
        want = (C_INT % p) * np.eye(d, dtype=np.int64)
        bad3 = np.argwhere(((sre - want) % p != 0) | (sim % p != 0))
        if len(bad3):
            s, t = (int(w) for w in bad3[0])
            return SicVerdict(False, a_el, b_el, c_el, failed_axiom="c", witness=(s, t))
    else:
        gram = [[_inner(ring, vectors[u], vectors[v]) for v in range(n)] for u in range(n)]
        for u in range(n):
            if gram[u][u] != a_el:
                return SicVerdict(False, a_el, b_el, c_el, failed_axiom="a", witness=(u,))
        for u in range(n):
            for v in range(n):
                if u != v and gram[u][v] * gram[v][u] != b_el:
                    return SicVerdict(
                        False, a_el, b_el, c_el, failed_axiom="b", witness=(u, v)
                    )
        for s in range(d):
            for t in range(d):
                acc = ring.zero
                for u in range(n):
                    acc = acc + vectors[u][s] * vectors[u][t].conj()
                want = c_el if s == t else ring.zero
                if acc != want:
                    return SicVerdict(
                        False, a_el, b_el, c_el, failed_axiom="c", witness=(s, t)
                    )
    if mat_rank(mat) != d:
        return SicVerdict(False, a_el, b_el, c_el, failed_axiom="d", witness=())
    return SicVerdict(True, a_el, b_el, c_el)


def gram_closed_form(h: SignMatrix, ring: Ring, ij, kl) -> RingElement:
    """Closed-form inner product (x_ij, x_kl) for (i, j) != (k, l)."""
    if not isinstance(ring, Ring):
        ring = Ring(ring)
    i, j = ij
    k, l = kl
    if (i, j) == (k, l):
        raise SicError("diagonal pair requested")
    a = h.entries
    s1 = a[i][j] * a[i][l]
    s2 = a[k][j] * a[k][l]
    t = int(_PHI_EXP[(1 - s1) // 2, (1 - s2) // 2])
    t += 2 * (i == k) + 2 * (j == l)
    return ring.el(4) * ring.i_power(t)


def build_tilde(h: SignMatrix, cap: int = DEFAULT_ORDER_CAP) -> SignMatrix:
    """Order-d^2 sign matrix M[(i,j),(k,l)] = H_kj * H_il, row-major indices."""
    d = h.d
    if d * d > cap:
        raise OrderCapError(f"order {d * d} exceeds cap {cap}")
    a = h.array.astype(np.int8)
    t = np.einsum("kj,il->ijkl", a, a)
    return SignMatrix.from_array(t.reshape(d * d, d * d))


def tensor_gram_check(s: SicSystem) -> bool:
    """Verify H_ij H_kl (x_ij, x_kl)^2 = 16 Ht + 128 I in the ring, where Ht
    is the induced order-d^2 sign matrix.  Uses (x(x)x, y(x)y) = (x,y)^2, so
    no explicit tensors are formed."""
    d = s.d
    hv = s.source.array.reshape(d * d).astype(np.int64)  # H_ij over row-major u
    t = s.observed_phases
    ht = build_tilde(s.source, cap=max(DEFAULT_ORDER_CAP, d * d)).array.astype(np.int64)
    # squared inner products: diagonal 144, off-diagonal 16 * (-1)^t
    sq = 16 * np.where(t % 2 == 0, 1, -1).astype(np.int64)
    np.fill_diagonal(sq, A_INT * A_INT)
    lhs = hv[:, None] * hv[None, :] * sq
    rhs = 16 * ht + 128 * np.eye(d * d, dtype=np.int64)
    diff = lhs - rhs
    if s.ring.char:
        diff = diff % s.ring.char
    return not diff.any()


def triple_product(s: SicSystem, u, v, w) -> RingElement:
    """(x_u, x_v)(x_v, x_w)(x_w, x_u) for distinct index pairs u, v, w."""
    iu = s.index(*u) if isinstance(u, tuple) else u
    iv = s.index(*v) if isinstance(v, tuple) else v
    iw = s.index(*w) if isinstance(w, tuple) else w
    if len({iu, iv, iw}) != 3:
        raise SicError("triple product needs three distinct indices")
    t = s.gram_phases
    e = int(t[iu, iv]) + int(t[iv, iw]) + int(t[iw, iu])
    return s.ring.el(64) * s.ring.i_power(e)


def applicable_primes(d: int, bound: int = 1000) -> tuple[list[int], bool]:
    """Primes p = 3 (mod 4) with p | (d - 8), up to bound.  For d = 8 every
    such prime divides 0: returns them all up to bound with all_flag set."""
    if d < 1 or bound < 3:
        raise SicError("need d >= 1 and bound >= 3")
    all_flag = d == 8
    primes = [
        p
        for p in sympy.primerange(3, bound + 1)
        if p % 4 == 3 and (all_flag or (d - 8) % p == 0)
    ]
    return primes, all_flag


def constructible_orders(n_max: int, cap: int = DEFAULT_ORDER_CAP) -> dict[int, str]:
    """Orders <= n_max of honest Hadamard matrices the toolkit can synthesize
    from sylvester / paley(prime q) / kron, with a replayable recipe each.
    First recipe found in canonical enumeration order wins."""
    cap = min(cap, n_max)
    best: dict[int, str] = {}
    k = 0
    while 2**k <= n_max:
        best.setdefault(2**k, f"sylvester:{k}")
        k += 1
    for q in sympy.primerange(3, n_max):
        if q % 4 == 3 and q + 1 <= n_max:
            best.setdefault(q + 1, f"paley1:{q}")
    for q in sympy.primerange(3, n_max):
        if q % 4 == 1 and 2 * (q + 1) <= n_max:
            best.setdefault(2 * (q + 1), f"paley2:{q}")
    changed = True
    while changed:
        changed = False
        orders = sorted(best)
        for a in orders:
            for b in orders:
                ab = a * b
                if 1 < a and 1 < b and ab <= n_max and ab not in best:
                    best[ab] = f"kron:{best[a]},{best[b]}"
                    changed = True
    return best


def scan_dimensions(p: int, n_max: int, cap: int = DEFAULT_ORDER_CAP) -> list[tuple[int, str]]:
    """All d <= n_max with d = 8 (mod p) for which an honest Hadamard matrix
    can be synthesized; each entry carries a replayable recipe."""
    if p % 4 != 3 or not sympy.isprime(p):
        raise SicError(f"need a prime p = 3 (mod 4), got {p}")
    if n_max > cap:
        raise OrderCapError(f"scan bound {n_max} exceeds cap {cap}")
    orders = constructible_orders(n_max, cap)
    out = []
    for d in sorted(orders):
        if (d - 8) % p == 0:
            out.append((d, orders[d]))
    return out
