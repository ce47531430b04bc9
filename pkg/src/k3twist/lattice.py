"""Integral lattices: invariants, sublattices, isometry and representation search.

A lattice is stored by its Gram matrix. Sublattices are stored as rows of
ambient coordinates and always carry an HNF-canonical basis, so Gram
matrices computed from them are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt
from typing import Optional

from . import exactlin as xl
from .errors import DegenerateBasis, InputError, PreconditionError


@dataclass(frozen=True)
class IntLattice:
    gram: tuple
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        g = xl.freeze(self.gram)
        if not xl.is_symmetric(g):
            raise InputError("Gram matrix must be square and symmetric")
        if not xl.is_integral(g):
            raise InputError("Gram matrix must be integral")
        object.__setattr__(self, "gram", xl.as_int_matrix(g))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def norm(self, v):
        return xl.bilinear(self.gram, v, v)

    def product(self, u, v):
        return xl.bilinear(self.gram, u, v)

    @cached_property
    def invariants(self) -> "LatticeInvariants":
        return invariants(self)


@dataclass(frozen=True)
class Sublattice:
    """Span of ``basis`` rows inside ``ambient``. The basis is HNF-normalized."""

    ambient: IntLattice
    basis: tuple

    def __post_init__(self):
        b = xl.freeze(self.basis)
        if b and len(b[0]) != self.ambient.rank:
            raise InputError("basis rows must have ambient rank length")
        if not xl.is_integral(b):
            raise InputError("sublattice basis must be integral")
        canon = xl.hnf_basis(b) if b else ()
        if len(canon) != len(b):
            raise DegenerateBasis("degenerate basis: rows are linearly dependent")
        object.__setattr__(self, "basis", canon)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def gram(self):
        if not self.basis:
            return ()
        return xl.gram_of_rows(self.basis, self.ambient.gram)

    def lattice(self, label=None) -> IntLattice:
        return IntLattice(self.gram, label)

    def contains(self, v) -> bool:
        if not any(v):
            return True
        if not self.basis:
            return False
        c = xl.rational_row_coordinates((v,), self.basis)
        return c is not None and xl.is_integral(c)

    def same_as(self, other: "Sublattice") -> bool:
        return self.basis == other.basis


@dataclass(frozen=True)
class LatticeInvariants:
    rank: int
    signature: tuple
    det: int
    even: bool
    invariant_factors: tuple
    ell: int
    abs_disc: int

    def as_dict(self):
        return {
            "rank": self.rank,
            "signature": list(self.signature),
            "det": self.det,
            "even": self.even,
            "invariant_factors": list(self.invariant_factors),
            "ell": self.ell,
            "abs_disc": self.abs_disc,
        }


def invariants(l: IntLattice) -> LatticeInvariants:
    """Rank, signature, determinant, parity and discriminant group data.

    The discriminant group is ``Z^rank / gram Z^rank``; its invariant factors
    are the Smith factors of the Gram matrix different from one.
    """
    if l.rank == 0:
        return LatticeInvariants(0, (0, 0), 1, True, (), 0, 1)
    pos, neg, zero = xl.signature_of_symmetric(l.gram)
    d = xl.det(l.gram)
    factors, _, _ = xl.snf(l.gram)
    nontrivial = tuple(f for f in factors if f != 1)
    if zero:
        # degenerate: the cokernel has free part; record the torsion only
        abs_disc = 0
    else:
        abs_disc = 1
        for f in factors:
            abs_disc *= f
    return LatticeInvariants(l.rank, (pos, neg), int(d), l.is_even, nontrivial,
                             len(nontrivial), abs_disc)


def sublattice_gram(s: Sublattice, label=None) -> IntLattice:
    return s.lattice(label)


def orthogonal_complement(s: Sublattice) -> Sublattice:
    """Saturated ``{x : <x, b> = 0 for every basis row b}``."""
    amb = s.ambient
    if not s.basis:
        return Sublattice(amb, xl.identity(amb.rank))
    constraints = xl.matmul(s.basis, amb.gram)
    return Sublattice(amb, xl.integer_kernel(constraints))


def saturation(s: Sublattice) -> Sublattice:
    """Rational span of ``s`` intersected with the ambient lattice."""
    if not s.basis:
        return s
    k = xl.integer_kernel(s.basis)
    if not k:
        return Sublattice(s.ambient, xl.identity(s.ambient.rank))
    return Sublattice(s.ambient, xl.integer_kernel(k))


def index_in(sub: Sublattice, sup: Sublattice) -> int:
    """Index of ``sub`` inside ``sup`` (both of equal rank, ``sub`` contained)."""
    if sub.rank != sup.rank:
        raise InputError("index needs sublattices of equal rank")
    if sub.rank == 0:
        return 1
    c = xl.rational_row_coordinates(sub.basis, sup.basis)
    if c is None or not xl.is_integral(c):
        raise InputError("first lattice is not contained in the second")
    return abs(int(xl.det(c)))


def index(s: Sublattice) -> int:
    """Index of ``s`` in its saturation."""
    return index_in(s, saturation(s))


def is_saturated(s: Sublattice) -> bool:
    return index(s) == 1


def direct_sum(*lattices: IntLattice, label=None) -> IntLattice:
    return IntLattice(xl.block_diag(*(l.gram for l in lattices)), label)


def rescale(l: IntLattice, n: int, label=None) -> IntLattice:
    return IntLattice(xl.scale_matrix(l.gram, n), label)


# ---------------------------------------------------------------------------
# bounded searches
# ---------------------------------------------------------------------------

def _search_key(v):
    # small vectors first; among equals, positive coordinates before negative
    return (sum(abs(x) for x in v), tuple(-x for x in v))


@lru_cache(maxsize=32)
def box_vectors(rank: int, bound: int, nonzero: bool = True) -> tuple:
    """All integer vectors with coordinates in ``[-bound, bound]``, in search order.

    The order is by L1 norm, then lexicographic on negated coordinates, so
    ``(1, 0)`` precedes ``(0, 1)`` precedes ``(0, -1)``. Every bounded search
    in this package enumerates in this order and reports the first hit.
    """
    vecs = itertools.product(range(-bound, bound + 1), repeat=rank)
    if nonzero:
        vecs = (v for v in vecs if any(v))
    return tuple(sorted(vecs, key=_search_key))


def represented_values(l: IntLattice, coeff_bound: int) -> dict:
    """Map each value ``v^T G v`` over the box to the first vector realizing it."""
    out = {}
    for v in box_vectors(l.rank, coeff_bound):
        n = l.norm(v)
        if n not in out:
            out[n] = v
    return out


def represents_bounded(l: IntLattice, n: int, coeff_bound: int = 50):
    """First nonzero vector in the box with norm ``n``; ``None`` if there is none
    within the bound (which proves nothing about larger vectors)."""
    for v in box_vectors(l.rank, coeff_bound):
        if l.norm(v) == n:
            return v
    return None


def isometry_search(l1: IntLattice, l2: IntLattice, coeff_bound: int = 25):
    """Backtracking search for ``P`` with ``P G2 P^T = G1``, ``P`` unimodular.

    Row ``i`` of ``P`` is the image of the ``i``-th basis vector of ``l1``
    written in the basis of ``l2``. Returns ``None`` when nothing is found
    within the coefficient box; that is not a proof of non-isometry.
    """
    if l1.rank != l2.rank:
        raise InputError("rank mismatch")
    n = l1.rank
    if n == 0:
        return ()
    g1 = l1.gram
    if l1.invariants.det != l2.invariants.det or l1.invariants.signature != l2.invariants.signature:
        return None
    by_norm = {}
    for v in box_vectors(n, coeff_bound):
        by_norm.setdefault(l2.norm(v), []).append(v)
    candidates = [by_norm.get(g1[i][i], []) for i in range(n)]
    rows = []

    def extend(i):
        if i == n:
            return True
        for v in candidates[i]:
            if all(l2.product(v, rows[j]) == g1[i][j] for j in range(i)):
                rows.append(v)
                if extend(i + 1):
                    return True
                rows.pop()
        return False

    if not extend(0):
        return None
    p = tuple(rows)
    if xl.gram_of_rows(p, l2.gram) != g1 or abs(xl.det(p)) != 1:
        raise AssertionError("isometry witness failed verification")
    return p


# ---------------------------------------------------------------------------
# exact representation for forms with an isotropic basis vector
# ---------------------------------------------------------------------------

def divisors(n: int) -> list:
    """Positive divisors of ``|n|`` in increasing order (n != 0)."""
    from sympy import divisors as _divisors

    return [int(d) for d in _divisors(abs(n))]


def represents_zero_diag_binary_exact(m: int, c: int, n: int):
    """Decide whether ``[[0, -m], [-m, 2c]]`` represents ``n`` by a nonzero vector.

    ``Q(a, b) = 2b(cb - ma)``, so a solution with ``b = d`` exists exactly when
    ``d`` divides ``n/2`` and ``m`` divides ``cd - n/(2d)``. Returns the
    witness ``(a, b)`` with the smallest ``|b|`` (positive first), or ``None``
    when the value is provably not represented.
    """
    if m <= 0:
        raise InputError("m must be positive")
    if n % 2:
        raise InputError("form is even: odd values are never represented")
    half = n // 2
    if half == 0:
        return (1, 0)
    for d in divisors(half):
        for b in (d, -d):
            t = c * b - half // b
            if t % m == 0:
                return (t // m, b)
    return None


def represents_rank3_sweep(m: int, c: int, diag: int, n: int, z_max: int):
    """Search ``2y(cy - mx) + 2*diag*z^2 = n`` slice by slice in ``z``.

    Each slice ``|z| <= z_max`` is decided exactly with the binary divisor
    method. A ``None`` result means no solution with ``|z| <= z_max``; the
    slices beyond the sweep are not examined.
    """
    if n % 2:
        raise InputError("form is even: odd values are never represented")
    for z in sorted(range(-z_max, z_max + 1), key=lambda z: (abs(z), -z)):
        rest = n - 2 * diag * z * z
        if rest == 0:
            if z != 0:
                return (0, 0, z)
            return (1, 0, 0)
        w = represents_zero_diag_binary_exact(m, c, rest)
        if w is not None:
            return (w[0], w[1], z)
    return None


def zero_diag_normal_form(l: IntLattice):
    """Rewrite a binary lattice with an isotropic vector as ``[[0, -m], [-m, q]]``.

    Returns ``(m, q, P)`` with ``P G P^T`` equal to that form, or ``None`` if
    the lattice is not binary, is degenerate, or has no isotropic vector
    (``-det`` is not a perfect square).
    """
    if l.rank != 2:
        return None
    (a, b), (_, d) = l.gram
    disc = b * b - a * d
    if disc <= 0 or isqrt(disc) ** 2 != disc:
        return None
    root = isqrt(disc)
    if a == 0:
        v = (1, 0)
    else:
        v = xl.primitive((-b + root, a))
    # complete the primitive v to a unimodular basis
    x, y = v
    g, s, t = _ext_gcd(x, y)
    w = (-t, s)
    p = (v, w)
    gram = xl.gram_of_rows(p, l.gram)
    if gram[0][1] > 0:
        w = (t, -s)
        p = (v, w)
        gram = xl.gram_of_rows(p, l.gram)
    m = -gram[0][1]
    # reduce q modulo 2m by w -> w + k v
    q = gram[1][1]
    k = q // (2 * m)
    if k:
        w = (w[0] + k * v[0], w[1] + k * v[1])
        p = (v, w)
        gram = xl.gram_of_rows(p, l.gram)
    return m, gram[1][1], p


def _ext_gcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, s, t = _ext_gcd(b, a % b)
    return g, t, s - (a // b) * t


def representation_certificate(l: IntLattice, n: int):
    """Exact answer to "does ``l`` represent ``n``?" for binary even lattices
    with an isotropic vector. Returns ``(True, vector)``, ``(False, None)``,
    or ``None`` when the lattice is outside the decidable class."""
    nf = zero_diag_normal_form(l)
    if nf is None or not l.is_even or n % 2:
        return None
    m, q, p = nf
    w = represents_zero_diag_binary_exact(m, q // 2, n)
    if w is None:
        return (False, None)
    vec = xl.vecmat(w, p)
    assert l.norm(vec) == n
    return (True, vec)


# ---------------------------------------------------------------------------
# primitive embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NikulinReport:
    holds: bool
    positive_ok: bool
    negative_ok: bool
    length_ok: bool
    ell: int
    length_bound: int
    signature: tuple
    ambient_signature: tuple

    def as_dict(self):
        return {
            "holds": self.holds,
            "positive_ok": self.positive_ok,
            "negative_ok": self.negative_ok,
            "length_ok": self.length_ok,
            "ell": self.ell,
            "length_bound": self.length_bound,
            "signature": list(self.signature),
            "ambient_signature": list(self.ambient_signature),
        }


def nikulin_check(t: IntLattice, ambient_rank: int, ambient_sig: tuple) -> NikulinReport:
    """Sufficient condition for a unique primitive embedding of the even
    lattice ``t`` into an even unimodular lattice of the given rank and
    signature: ``t_+ < s_+``, ``t_- < s_-`` and ``ell(t) <= rank - rk(t) - 2``.
    """
    if not t.is_even:
        raise PreconditionError("the criterion applies to even lattices only")
    inv = t.invariants
    tp, tn = inv.signature
    sp, sn = ambient_sig
    bound = ambient_rank - t.rank - 2
    pos_ok, neg_ok, len_ok = tp < sp, tn < sn, inv.ell <= bound
    return NikulinReport(pos_ok and neg_ok and len_ok, pos_ok, neg_ok, len_ok,
                         inv.ell, bound, (tp, tn), tuple(ambient_sig))
