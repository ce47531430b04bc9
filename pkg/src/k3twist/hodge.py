"""Lattice model of (twisted) K3 Hodge structures.

A surface is given by its transcendental lattice ``T`` inside the K3 lattice,
optionally together with an explicit rational period ``x1 + i x2``. A B-field
is a rational class; everything twisted is computed from ``T`` and ``B`` by
exact linear algebra over the Mukai lattice.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from . import exactlin as xl
from .errors import BudgetExceeded, InputError, InvalidPeriod, PreconditionError
from .lattice import (IntLattice, LatticeInvariants, Sublattice, index_in, isometry_search,
                      is_saturated, orthogonal_complement, representation_certificate,
                      saturation)
from .mukai import (K3, K3_RANK, MUKAI, Isometry, MukaiVector, as_rational, exp_b,
                    k3_dot, random_lattice_word)


@dataclass(frozen=True)
class Period:
    """Real and imaginary parts ``x1, x2`` of a period, in K3 coordinates."""

    x1: tuple
    x2: tuple

    def __post_init__(self):
        x1, x2 = as_rational(self.x1), as_rational(self.x2)
        if len(x1) != K3_RANK or len(x2) != K3_RANK:
            raise InvalidPeriod("period vectors must have 22 coordinates")
        n1, n2, m = k3_dot(x1, x1), k3_dot(x2, x2), k3_dot(x1, x2)
        if n1 <= 0:
            raise InvalidPeriod(f"x1^2 must be positive, got {n1}")
        if n1 != n2:
            raise InvalidPeriod(f"x1^2 = {n1} differs from x2^2 = {n2}")
        if m != 0:
            raise InvalidPeriod(f"x1.x2 must vanish, got {m}")
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)

    @property
    def norm(self) -> Fraction:
        return k3_dot(self.x1, self.x1)


@dataclass(frozen=True)
class SurfaceDatum:
    T: Sublattice
    period: Optional[Period] = None

    def __post_init__(self):
        if self.T.ambient != K3:
            raise InputError("transcendental lattice must live in the K3 lattice")
        if not is_saturated(self.T):
            raise InputError("transcendental lattice is not saturated; pass its saturation")

    @cached_property
    def pic(self) -> Sublattice:
        return orthogonal_complement(self.T)

    def require_period(self) -> Period:
        if self.period is None:
            raise PreconditionError("operation needs a surface with an explicit period")
        return self.period


@dataclass(frozen=True)
class BField:
    b: tuple

    def __post_init__(self):
        b = as_rational(self.b)
        if len(b) != K3_RANK:
            raise InputError("B-field must have 22 coordinates")
        object.__setattr__(self, "b", b)

    @property
    def lam(self) -> int:
        return xl.common_denominator(self.b)

    @classmethod
    def zero(cls) -> "BField":
        return cls((0,) * K3_RANK)

    def __add__(self, other):
        other_b = other.b if isinstance(other, BField) else as_rational(other)
        return BField(tuple(x + y for x, y in zip(self.b, other_b)))

    def scaled(self, k) -> "BField":
        return BField(tuple(k * x for x in self.b))


@dataclass(frozen=True)
class BrauerClass:
    values: tuple
    order: int

    def as_strings(self):
        return [str(v) for v in self.values]


@dataclass(frozen=True)
class EquivalenceFingerprint:
    """Isometry invariants that any Hodge equivalence must preserve.

    ``pic`` and ``represents_two`` are ``None`` when the twisted lattice is
    not available (abstract enumeration without an embedding).
    """

    order: int
    kernel: LatticeInvariants
    pic: Optional[LatticeInvariants]
    transcendental_rank: int
    represents_two: Optional[str] = None


# ---------------------------------------------------------------------------
# surfaces
# ---------------------------------------------------------------------------

def surface_from_period(p: Period) -> SurfaceDatum:
    rows = (xl.clear_denominators(p.x1), xl.clear_denominators(p.x2))
    t = saturation(Sublattice(K3, rows))
    if t.rank != 2 or not xl.positive_definite(t.gram):
        raise InvalidPeriod("period plane does not span a positive definite rank-2 lattice")
    return SurfaceDatum(t, p)


def surface_from_transcendental(tbasis) -> SurfaceDatum:
    return SurfaceDatum(Sublattice(K3, tbasis))


def surface_from_picard(pic_basis) -> SurfaceDatum:
    """Surface whose Picard lattice is the saturation of ``pic_basis``."""
    return SurfaceDatum(orthogonal_complement(Sublattice(K3, pic_basis)))


def is_algebraic(s: SurfaceDatum) -> bool:
    if s.pic.rank == 0:
        return False
    return xl.signature_of_symmetric(s.pic.gram)[0] >= 1


def kahler_candidate(s: SurfaceDatum) -> tuple:
    """A rational class of positive square orthogonal to the period."""
    p = s.require_period()
    t = p.norm
    for name in ("g", "f", "e"):
        v = [0] * K3_RANK
        k = "efg".index(name) * 2
        v[k] = v[k + 1] = 1
        w = tuple(Fraction(a) - (k3_dot(v, p.x1) * x + k3_dot(v, p.x2) * y) / t
                  for a, x, y in zip(v, p.x1, p.x2))
        if k3_dot(w, w) > 0:
            return w
    d, q = xl.diagonalize_symmetric(s.pic.gram)
    for dk, row in zip(d, q):
        if dk > 0:
            return tuple(xl.vecmat(row, s.pic.basis))
    raise PreconditionError("Picard lattice has no positive class")  # pragma: no cover


# ---------------------------------------------------------------------------
# twisted lattices
# ---------------------------------------------------------------------------

def _b(b) -> tuple:
    return b.b if isinstance(b, BField) else as_rational(b)


def twisted_picard(s: SurfaceDatum, b) -> Sublattice:
    """Integral Mukai classes ``beta`` with ``exp(-B) beta`` orthogonal to ``T``."""
    bb = _b(b)
    rows = []
    for t in s.T.basis:
        gt = xl.matvec(K3.gram, t)
        # <exp(-B)(r, c, s), t> = c.t - r (B.t)
        rows.append((-k3_dot(bb, t),) + tuple(gt) + (0,))
    return Sublattice(MUKAI, xl.integer_kernel(rows) if rows else xl.identity(MUKAI.rank))


def twisted_transcendental(s: SurfaceDatum, b) -> Sublattice:
    return orthogonal_complement(twisted_picard(s, b))


def in_twisted_pp(s: SurfaceDatum, b, v: MukaiVector) -> bool:
    """Whether ``v`` is of type (p,p) for the B-twisted structure of ``s``."""
    w = exp_b(tuple(-x for x in _b(b)), v)
    return all(k3_dot(w.c, t) == 0 for t in s.T.basis)


def is_twisted_algebraic(s: SurfaceDatum, b) -> bool:
    pic = twisted_picard(s, b)
    return xl.signature_of_symmetric(pic.gram)[0] >= 2


def untwisted_index(s: SurfaceDatum, b) -> int:
    """Index of ``Pic(X) + Z(lam u2 + lam B) + Z u1`` in the twisted Picard lattice."""
    bf = b if isinstance(b, BField) else BField(b)
    lam = bf.lam
    rows = [(0,) + tuple(p) + (0,) for p in s.pic.basis]
    rows.append((lam,) + tuple(int(lam * x) for x in bf.b) + (0,))
    rows.append((0,) * 23 + (1,))
    return index_in(Sublattice(MUKAI, rows), twisted_picard(s, bf))


# ---------------------------------------------------------------------------
# Brauer classes
# ---------------------------------------------------------------------------

def _frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def brauer_class(s: SurfaceDatum, b) -> BrauerClass:
    vals = tuple(_frac_part(k3_dot(_b(b), t)) for t in s.T.basis)
    return BrauerClass(vals, xl.common_denominator(vals))


def _kernel_coords(values) -> tuple:
    """Coordinates ``a`` with ``sum a_i values_i`` integral (a basis, as rows)."""
    k = xl.common_denominator(values)
    m = len(values)
    if k == 1:
        return xl.identity(m)
    row = [int(v * k) for v in values] + [k]
    ker = xl.integer_kernel((row,))
    return xl.hnf_basis([r[:m] for r in ker])


def brauer_kernel(s: SurfaceDatum, b) -> Sublattice:
    """``T(X, alpha) = {t in T : B.t integral}``; of index ``order`` in ``T``."""
    alpha = brauer_class(s, b)
    coords = _kernel_coords(alpha.values)
    return Sublattice(K3, xl.matmul(coords, s.T.basis))


@dataclass(frozen=True)
class BridgeReport:
    passed: bool
    checks: dict
    images: tuple = field(repr=False, default=())


def verify_exp_bridge(s: SurfaceDatum, b) -> BridgeReport:
    """Check that ``exp(-B)`` maps ``T(X,B)`` onto ``T(X,alpha)`` in degree 2."""
    bb = _b(b)
    minus = tuple(-x for x in bb)
    ttw = twisted_transcendental(s, bb)
    images = [exp_b(minus, MukaiVector.from_coords(row)) for row in ttw.basis]
    checks = {
        "rank_matches": ttw.rank == s.T.rank,
        "degree0_vanishes": all(v.r == 0 for v in images),
        "degree4_vanishes": all(v.s == 0 for v in images),
        "integral": all(v.is_integral for v in images),
    }
    if all(checks.values()):
        degree2 = tuple(tuple(int(x) for x in v.c) for v in images)
        image = Sublattice(K3, degree2)
        checks["equals_kernel"] = image.same_as(brauer_kernel(s, bb))
        checks["form_preserved"] = xl.gram_of_rows(degree2, K3.gram) == ttw.gram
    else:
        checks["equals_kernel"] = checks["form_preserved"] = False
    return BridgeReport(all(checks.values()), checks, tuple(images))


@dataclass(frozen=True)
class OrderDiscReport:
    order: int
    disc: int
    kernel_disc: int
    kernel_index: int
    index_formula_holds: bool
    displayed_variant_holds: bool

    def as_dict(self):
        return dict(self.__dict__)


def order_disc_report(s: SurfaceDatum, b) -> OrderDiscReport:
    """Compare ``|disc T(X,alpha)|`` with ``order^2 |disc T|`` (the index formula).

    The reversed relation ``order^2 |disc T(X,alpha)| = |disc T|`` is
    evaluated as well and recorded; it only holds for trivial classes.
    """
    k = brauer_class(s, b).order
    ker = brauer_kernel(s, b)
    d = s.T.lattice().invariants.abs_disc
    da = ker.lattice().invariants.abs_disc
    return OrderDiscReport(k, d, da, index_in(ker, s.T), da == k * k * d, k * k * da == d)


@dataclass(frozen=True)
class EnumerationReport:
    classes: tuple
    buckets: tuple

    def as_dict(self):
        return {
            "count": len(self.classes),
            "classes": [{"values": c.as_strings(), "order": c.order} for c, _ in self.classes],
            "buckets": [list(bk) for bk in self.buckets],
        }


def _kernel_lattice(t: IntLattice, values) -> IntLattice:
    coords = _kernel_coords(values)
    return IntLattice(xl.gram_of_rows(coords, t.gram))


def enumerate_brauer(t: IntLattice, k: int, surjective_only: bool = False,
                     budget: int = 10 ** 6, search_bound: int = 6) -> EnumerationReport:
    """All homomorphisms ``t -> Z/k`` with the fingerprint of their kernels.

    Classes are bucketed by kernel invariants; for rank at most 3 the buckets
    are refined by a bounded isometry search, otherwise invariants alone
    decide (so a bucket may merge non-isometric kernels).
    """
    if k < 1:
        raise InputError("k must be positive")
    required = k ** t.rank
    if required > budget:
        raise BudgetExceeded(f"{required} classes exceed the budget {budget}", required)
    classes = []
    for tup in itertools.product(range(k), repeat=t.rank):
        vals = tuple(Fraction(a, k) for a in tup)
        order = xl.common_denominator(vals)
        if surjective_only and order != k:
            continue
        ker = _kernel_lattice(t, vals)
        fp = EquivalenceFingerprint(order, ker.invariants, None, t.rank)
        classes.append((BrauerClass(vals, order), fp, ker))
    buckets = []  # list of (fingerprint, representative kernel, members)
    for idx, (_, fp, ker) in enumerate(classes):
        for bucket in buckets:
            if bucket[0] != fp:
                continue
            if t.rank <= 3 and isometry_search(ker, bucket[1], search_bound) is None:
                continue
            bucket[2].append(idx)
            break
        else:
            buckets.append((fp, ker, [idx]))
    return EnumerationReport(tuple((c, fp) for c, fp, _ in classes),
                             tuple(tuple(bk[2]) for bk in buckets))


# ---------------------------------------------------------------------------
# Hodge isometries and fingerprints
# ---------------------------------------------------------------------------

def _twisted_period_parts(s: SurfaceDatum, b) -> tuple:
    p = s.require_period()
    bb = _b(b)
    return tuple(exp_b(bb, MukaiVector.degree2(x)).coords() for x in (p.x1, p.x2))


def is_hodge_isometry(g: Isometry, src: tuple, dst: tuple) -> Optional[tuple]:
    """Witness ``(a, b)`` with ``g(X1) = a Y1 - b Y2`` and ``g(X2) = b Y1 + a Y2``.

    ``X`` and ``Y`` are the B-twisted periods of the source and target
    ``(surface, B-field)`` pairs. Returns ``None`` when ``g`` does not carry
    the source period line to the target one.
    """
    if not isinstance(g, Isometry) or g.domain != "mukai":
        raise InputError("expected a certified isometry of the Mukai lattice")
    x1, x2 = _twisted_period_parts(*src)
    y1, y2 = _twisted_period_parts(*dst)
    gx1, gx2 = g.apply(x1), g.apply(x2)
    cols = xl.transpose((y1, tuple(-v for v in y2)))
    sol = xl.solve_rational(cols, gx1)
    if sol is None:
        return None
    a, bcoef = sol
    if any(u != bcoef * p + a * q for u, p, q in zip(gx2, y1, y2)):
        return None
    assert (a, bcoef) != (0, 0), "degenerate Hodge witness"
    return (a, bcoef)


def _represents_two(pic: Sublattice) -> Optional[str]:
    if pic.rank != 2:
        return None
    cert = representation_certificate(pic.lattice(), 2)
    if cert is None:
        return "undecided"
    return "yes" if cert[0] else "no"


def fingerprint(s: SurfaceDatum, b) -> EquivalenceFingerprint:
    pic = twisted_picard(s, b)
    return EquivalenceFingerprint(
        order=brauer_class(s, b).order,
        kernel=brauer_kernel(s, b).lattice().invariants,
        pic=pic.lattice().invariants,
        transcendental_rank=MUKAI.rank - pic.rank,
        represents_two=_represents_two(pic),
    )


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

def random_rational_class(rng: random.Random, max_den: int = 7, support: int = 4) -> tuple:
    den = rng.randint(1, max_den)
    v = [Fraction(0)] * K3_RANK
    for k in rng.sample(range(K3_RANK), rng.randint(1, support)):
        v[k] = Fraction(rng.randint(-den, den), den)
    return tuple(v)


def random_surface(rng: random.Random) -> SurfaceDatum:
    """Random nondegenerate saturated ``T``: either spanned by a few transformed
    hyperbolic-block vectors or the complement of a few such vectors."""
    while True:
        h = random_lattice_word(rng, rng.randint(0, 4))
        names = rng.sample(range(6), rng.randint(1, 3))
        vecs = []
        for i in names:
            v = [0] * K3_RANK
            v[i] = 1
            if rng.random() < 0.5 and (i ^ 1) not in names:
                v[i ^ 1] = rng.randint(1, 3)
            vecs.append(h.apply(tuple(v)))
        sub = saturation(Sublattice(K3, vecs))
        t = sub if rng.random() < 0.5 else orthogonal_complement(sub)
        if xl.det(t.gram) != 0:
            return SurfaceDatum(t)
