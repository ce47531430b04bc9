"""Executable versions of the explicit constructions: the gap isometry,
twisted period matching, the partner-counting family and the order-five
counterexample."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional

from . import exactlin as xl
from .errors import InputError, PreconditionError, SearchExhausted
from .hodge import (BField, Period, SurfaceDatum, brauer_class, brauer_kernel, fingerprint,
                    is_hodge_isometry, is_twisted_algebraic, surface_from_period,
                    surface_from_transcendental, twisted_picard, twisted_transcendental)
from .lattice import (IntLattice, Sublattice, index, index_in, isometry_search,
                      nikulin_check, orthogonal_complement, representation_certificate,
                      represents_rank3_sweep, represents_zero_diag_binary_exact)
from .mukai import (K3, K3_GRAM, K3_GRAM_INV, K3_RANK, MUKAI, Isometry, MukaiVector,
                    as_rational, exp_b, generator_exp, generator_i, k3_dot, k3_vector,
                    random_lattice_word)


# ---------------------------------------------------------------------------
# the gap isometry
# ---------------------------------------------------------------------------

def gap_isometry(b0, b1) -> Isometry:
    """``exp(B1) o i o exp(B0)`` for integral ``B0, B1`` spanning a positive plane."""
    gram = xl.gram_of_rows((tuple(b0), tuple(b1)), K3_GRAM)
    if not xl.positive_definite(gram):
        raise InputError(f"B0, B1 must span a positive plane; Gram is {gram}")
    return generator_exp(b1) @ generator_i() @ generator_exp(b0)


GAP_PAIRS = (
    (k3_vector(e1=1, e2=1), k3_vector(f1=1, f2=1)),
    (k3_vector(f1=1, f2=2), k3_vector(g1=1, g2=1)),
    (k3_vector(e1=1, e2=1), k3_vector(e1=1, e2=1, g1=1, g2=1)),
)


def random_period(rng: random.Random, mix: int = 3) -> Period:
    """Pseudo-random rational period.

    Two vectors of equal positive norm in distinct hyperbolic blocks are moved
    by a random isometry of the K3 lattice and rescaled by a rational factor.
    """
    a, b = rng.sample((0, 1, 2), 2)
    p, q = rng.randint(1, 9), rng.randint(1, 9)
    n = p * q
    divs = [d for d in range(1, n + 1) if n % d == 0]
    p2 = rng.choice(divs)
    q2 = n // p2
    v1, v2 = [0] * K3_RANK, [0] * K3_RANK
    v1[2 * a], v1[2 * a + 1] = p, q
    v2[2 * b], v2[2 * b + 1] = p2, q2
    h = random_lattice_word(rng, mix)
    scale = Fraction(rng.randint(1, 5), rng.randint(1, 5))
    return Period(tuple(scale * x for x in h.apply(tuple(v1))),
                  tuple(scale * x for x in h.apply(tuple(v2))))


@dataclass(frozen=True)
class GapReport:
    trials: int
    passes: int
    expansion_matches: int
    failures: tuple = ()

    @property
    def passed(self) -> bool:
        return self.passes == self.trials and self.expansion_matches == self.trials

    def as_dict(self):
        return {"trials": self.trials, "passes": self.passes,
                "expansion_matches": self.expansion_matches,
                "failures": [list(map(str, f)) for f in self.failures]}


def gap_expansion(b0, b1, x) -> tuple:
    """Closed form of the gap isometry on ``(0, x, 0)``: degree 0, 2, 4 parts."""
    bx = k3_dot(b0, x)
    b1sq = k3_dot(b1, b1)
    deg2 = tuple(xi - bx * yi for xi, yi in zip(x, b1))
    deg4 = k3_dot(tuple(u - Fraction(b1sq, 2) * v for u, v in zip(b1, b0)), x)
    return -bx, deg2, deg4


def check_gap_on_period(g: Isometry, period: Period, b0=None, b1=None) -> tuple:
    """Return ``(leaves_gap, matches_expansion)`` for one period."""
    images = [g.apply(MukaiVector.degree2(x)) for x in (period.x1, period.x2)]
    leaves = any(v.r != 0 or v.s != 0 for v in images)
    if b0 is None:
        return leaves, True
    ok = all((v.r, v.c, v.s) == gap_expansion(b0, b1, x)
             for v, x in zip(images, (period.x1, period.x2)))
    return leaves, ok


def verify_gap(g: Isometry, trials: int, seed: int, b0=None, b1=None) -> GapReport:
    rng = random.Random(seed)
    passes = matches = 0
    failures = []
    for _ in range(trials):
        p = random_period(rng)
        leaves, ok = check_gap_on_period(g, p, b0, b1)
        passes += leaves
        matches += ok
        if not (leaves and ok):
            failures.append((p.x1, p.x2))
    return GapReport(trials, passes, matches, tuple(failures))


# ---------------------------------------------------------------------------
# twisted period matching
# ---------------------------------------------------------------------------

def extract_functionals(g: Isometry) -> tuple:
    """``(B1, B2)`` with ``g(0,x,0)`` having ``u1``-part ``B1.x`` and ``u2``-part ``B2.x``."""
    if g.domain != "mukai":
        raise InputError("expected an isometry of the Mukai lattice")
    row4 = g.matrix[23][1:23]
    row0 = g.matrix[0][1:23]
    return xl.matvec(K3_GRAM_INV, row4), xl.matvec(K3_GRAM_INV, row0)


@dataclass(frozen=True)
class MatchResult:
    x: Period
    y: Period
    B: tuple
    B1: tuple
    B2: tuple
    certificate: tuple = field(default=())

    @property
    def certified(self) -> bool:
        return bool(self.certificate) and all(self.certificate)


def _project_off(v, basis):
    """Remove the components of ``v`` along an orthogonal basis of nonzero norms."""
    out = tuple(Fraction(x) for x in v)
    for w in basis:
        c = Fraction(k3_dot(out, w), k3_dot(w, w))
        out = tuple(a - c * b for a, b in zip(out, w))
    return out


_PLANE_CANDIDATES = (
    k3_vector(f1=1, f2=1), k3_vector(g1=1, g2=1), k3_vector(e1=1, e2=1),
    k3_vector(f1=1, f2=2), k3_vector(g1=1, g2=2), k3_vector(e1=1, e2=2),
)


def _positive_in(constraints) -> tuple:
    """A positive rational vector orthogonal to every vector in ``constraints``."""
    rows = [xl.matvec(K3_GRAM, c) for c in constraints]
    basis = xl.integer_kernel(rows) if rows else xl.identity(K3_RANK)
    gram = xl.gram_of_rows(basis, K3_GRAM)
    d, q = xl.diagonalize_symmetric(gram)
    for dk, row in zip(d, q):
        if dk > 0:
            return tuple(xl.clear_denominators(xl.vecmat(row, basis)))
    raise AssertionError("no positive direction in a complement of signature (>=2, *)")


def _isotropic_partner_plane(b2, x1):
    """Second period vector ``x2`` with ``x2^2 = x1^2`` and ``x2`` orthogonal to ``x1, b2``.

    Inside ``W = <b2, x1>^perp`` take an isotropic ``z`` from a totally
    isotropic coordinate triple and any ``y`` with ``z.y = m != 0``; then
    ``((t - y^2) / 2m) z + y`` has square ``t``.
    """
    t = k3_dot(x1, x1)
    cons = [xl.matvec(K3_GRAM, c) for c in (b2, x1) if any(c)]
    w_basis = xl.integer_kernel(cons)
    for picks in ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0),
                  (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)):
        idx = [2 * blk + o for blk, o in enumerate(picks)]
        # z = sum c_k basis_idx_k with z in W
        m = [[row[i] for i in idx] for row in cons]
        ker = xl.integer_kernel(m)
        for kv in ker:
            z = [0] * K3_RANK
            for c, i in zip(kv, idx):
                z[i] = c
            for y in w_basis:
                mz = k3_dot(z, y)
                if mz:
                    f = (t - k3_dot(y, y)) / (2 * Fraction(mz))
                    return tuple(f * a + b for a, b in zip(z, y))
    raise AssertionError("no isotropic vector found in the complement")  # pragma: no cover


def _choose_period(b2) -> Period:
    """Deterministic rational period inside ``b2^perp``.

    Hyperbolic candidates are projected into ``b2^perp`` and orthogonalized;
    when the two norms differ by a rational square the second is rescaled,
    otherwise the second vector is built from an isotropic direction.
    """
    b2 = tuple(b2)
    constraints = [b2] if any(b2) else []
    chosen = []
    proj_basis = [b2] if k3_dot(b2, b2) != 0 else []
    for cand in _PLANE_CANDIDATES:
        if proj_basis or not any(b2) or k3_dot(cand, b2) == 0:
            v = _project_off(cand, proj_basis + chosen)
        else:
            continue
        if k3_dot(v, v) > 0 and all(k3_dot(v, c) == 0 for c in constraints + chosen):
            chosen.append(v)
            if len(chosen) == 2:
                break
    if not chosen:
        chosen = [_positive_in(constraints)]
    x1 = chosen[0]
    t = k3_dot(x1, x1)
    if len(chosen) == 2:
        ratio = Fraction(t) / k3_dot(chosen[1], chosen[1])
        rn, rd = ratio.numerator, ratio.denominator
        if isqrt(rn) ** 2 == rn and isqrt(rd) ** 2 == rd:
            s = Fraction(isqrt(rn), isqrt(rd))
            return Period(x1, tuple(s * a for a in chosen[1]))
    return Period(x1, _isotropic_partner_plane(b2, x1))


def _certify(g: Isometry, x: Period, y: Period, b) -> tuple:
    return tuple(g.apply(MukaiVector.degree2(xi)) == exp_b(b, MukaiVector.degree2(yi))
                 for xi, yi in zip((x.x1, x.x2), (y.x1, y.x2)))


def match_twist(g: Isometry) -> MatchResult:
    """Find a period ``x`` and a B-field ``B`` such that ``g`` carries the
    untwisted structure of ``x`` to the ``B``-twisted structure of ``y``."""
    b1, b2 = extract_functionals(g)
    x = _choose_period(b2)
    imgs = [g.apply(MukaiVector.degree2(xi)) for xi in (x.x1, x.x2)]
    assert all(v.r == 0 for v in imgs), "period not in the kernel of the u2-functional"
    ys = [v.c for v in imgs]
    y = Period(*ys)
    t = y.norm
    # B = B1 + sum_i ((c_i - B1.y_i) / y_i^2) y_i with c_i = B1.x_i
    b = list(as_rational(b1))
    for xi, yi in zip((x.x1, x.x2), ys):
        coef = (k3_dot(b1, xi) - k3_dot(b1, yi)) / t
        b = [u + coef * v for u, v in zip(b, yi)]
    b = tuple(b)
    cert = _certify(g, x, y, b)
    if not all(cert):
        raise AssertionError("match certificate failed")
    return MatchResult(x, y, b, tuple(b1), tuple(b2), cert)


def _norm_two_vectors(bound: int):
    """Integral vectors of square 2 supported on the three hyperbolic blocks."""
    out = []
    rng = range(-bound, bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    rest = 1 - a * b - c * d
                    for e in rng:
                        if e == 0:
                            if rest == 0:
                                out.extend((a, b, c, d, 0, f) for f in rng)
                            continue
                        if rest % e == 0 and abs(rest // e) <= bound:
                            out.append((a, b, c, d, e, rest // e))
    out.sort(key=lambda v: (sum(map(abs, v)), tuple(-u for u in v)))
    return out


_NORM_TWO_CACHE: dict = {}


def match_twist_integral(g: Isometry, bound: int = 6) -> MatchResult:
    """Integral variant: ``x_i`` of square 2 and an integral B-field."""
    b1, b2 = extract_functionals(g)
    if bound not in _NORM_TWO_CACHE:
        _NORM_TWO_CACHE[bound] = _norm_two_vectors(bound)
    pad = (0,) * (K3_RANK - 6)
    gb1, gb2 = (xl.matvec(K3_GRAM, b)[:6] for b in (b1, b2))
    short = [v for v in _NORM_TWO_CACHE[bound] if not sum(x * y for x, y in zip(v, gb2))]
    preferred = [v + pad for v in short if not sum(x * y for x, y in zip(v, gb1))]
    cands = [v + pad for v in short]
    pair = None
    for pool in (preferred, cands):
        for i, v in enumerate(pool[:400]):
            w = next((u for u in pool[i + 1:] if k3_dot(u, v) == 0), None)
            if w is not None:
                pair = (v, w)
                break
        if pair:
            break
    if pair is None:
        raise SearchExhausted(f"search bound exhausted (bound {bound}); not a disproof")
    x = Period(*pair)
    imgs = [g.apply(MukaiVector.degree2(xi)) for xi in pair]
    ys = [tuple(int(c) for c in v.c) for v in imgs]
    y = Period(*ys)
    # B = B1 + D with D.y_i = B1.x_i - B1.y_i, D integral
    rows = [xl.matvec(K3_GRAM, yi) for yi in ys]
    rhs = [k3_dot(b1, xi) - k3_dot(b1, yi) for xi, yi in zip(pair, ys)]
    dsol = xl.solve_integer(rows, rhs)
    if dsol is None:
        raise PreconditionError("integral solve failed: the span of y1, y2 is not primitive")
    b = tuple(u + v for u, v in zip(b1, dsol))
    cert = _certify(g, x, y, b)
    if not all(cert):
        raise AssertionError("integral match certificate failed")
    return MatchResult(x, y, b, tuple(b1), tuple(b2), cert)


def hodge_check(g: Isometry, m: MatchResult):
    """Confirm the match with the generic Hodge isometry test."""
    src = (surface_from_period(m.x), BField.zero())
    dst = (surface_from_period(m.y), BField(m.B))
    return is_hodge_isometry(g, src, dst)


# ---------------------------------------------------------------------------
# Fourier-Mukai partner counting family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartnerFamilyReport:
    n: int
    primes: tuple
    t: IntLattice
    partners: tuple
    entries: tuple

    @property
    def passed(self) -> bool:
        discs = [e["disc"] for e in self.entries]
        return len(set(discs)) == len(discs) and all(
            e["form_preserving"] and e["index_ok"] and e["cokernel_ok"] and e["disc_ok"]
            and e["consistency_ok"] and e["nikulin"]["holds"] for e in self.entries)

    def as_dict(self):
        return {"n": self.n, "primes": list(self.primes), "T": [list(r) for r in self.t.gram],
                "disc_T": self.t.invariants.abs_disc, "entries": list(self.entries),
                "pairwise_distinct": len({e["disc"] for e in self.entries}) == self.n}


def fm_partner_family(n: int) -> PartnerFamilyReport:
    from sympy import prime

    if not 1 <= n <= 10:
        raise InputError("N must be between 1 and 10")
    primes = tuple(int(prime(i)) for i in range(1, n + 1))
    big = 1
    for p in primes:
        big *= p
    t = IntLattice(((4 * big * big, 0), (0, 4 * big * big)), "T")
    partners, entries = [], []
    for p in primes:
        ti = IntLattice(((4 * p * p, 0), (0, 4 * p * p)), f"T_{p}")
        f = big // p
        emb = ((f, 0), (0, f))
        factors, _, _ = xl.snf(emb)
        idx = index(Sublattice(ti, emb))
        disc = ti.invariants.abs_disc
        partners.append(ti)
        entries.append({
            "p": p,
            "embedding": [list(r) for r in emb],
            "form_preserving": xl.gram_of_rows(emb, ti.gram) == t.gram,
            "index": idx,
            "index_ok": idx == f * f,
            "cokernel_factors": list(factors),
            "cokernel_ok": tuple(factors) == (f, f),
            "disc": disc,
            "disc_ok": disc == 16 * p ** 4,
            "consistency_ok": t.invariants.abs_disc == idx * idx * disc,
            "nikulin": nikulin_check(ti, 22, (3, 19)).as_dict(),
        })
    return PartnerFamilyReport(n, primes, t, tuple(partners), tuple(entries))


# ---------------------------------------------------------------------------
# the order-five counterexample
# ---------------------------------------------------------------------------

COUNTER_B = tuple(Fraction(x, 5) for x in k3_vector(e1=1, e2=1))
COUNTER_H = k3_vector(f1=1, f2=20)
PIC_B_GRAM = ((0, -5), (-5, 2))
PIC_2B_GRAM = ((0, -5), (-5, 8))


def _mukai(r, c, s):
    return (r,) + tuple(c) + (s,)


@dataclass
class CounterReport:
    assertions: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)

    def check(self, name, ok, witness=None):
        self.assertions[name] = {"pass": bool(ok), "witness": witness}

    @property
    def passed(self) -> bool:
        return all(a["pass"] for a in self.assertions.values())

    def failures(self):
        return [k for k, a in self.assertions.items() if not a["pass"]]


def example_counter_report(z_max: int = 10 ** 4) -> CounterReport:
    rep = CounterReport()
    e12 = k3_vector(e1=1, e2=1)
    u1 = _mukai(0, (0,) * K3_RANK, 1)
    s = surface_from_transcendental(xl.identity(K3_RANK))
    b = BField(COUNTER_B)
    b2 = b.scaled(2)

    order = brauer_class(s, b).order
    rep.check("brauer_order_5", order == 5, order)
    rep.check("not_twisted_algebraic", not is_twisted_algebraic(s, b))

    for name, bf, target, w in (("B", b, PIC_B_GRAM, _mukai(5, e12, 0)),
                                ("2B", b2, PIC_2B_GRAM, _mukai(5, tuple(2 * x for x in e12), 0))):
        pic = twisted_picard(s, bf)
        explicit = Sublattice(MUKAI, (u1, w))
        gram = xl.gram_of_rows((u1, w), MUKAI.gram)
        rep.check(f"pic_{name}_explicit_basis", explicit.same_as(pic) and gram == target,
                  [list(u1), list(w)])
        p = isometry_search(pic.lattice(), IntLattice(target), 25)
        rep.check(f"pic_{name}_isometric_to_{target}", p is not None,
                  [list(r) for r in p] if p else None)
        ttw = twisted_transcendental(s, bf)
        rep.check(f"transcendental_{name}_rank_22_disc_25",
                  ttw.rank == 22 and ttw.lattice().invariants.abs_disc == 25)
        rep.results[f"pic_{name}_basis"] = [list(r) for r in pic.basis]
        rep.results[f"pic_{name}_gram"] = [list(r) for r in pic.gram]

    k1, k2 = brauer_kernel(s, b), brauer_kernel(s, b2)
    rep.check("kernels_index_5", index_in(k1, s.T) == 5 and index_in(k2, s.T) == 5)
    rep.check("kernels_identical_hence_isometric", k1.same_as(k2))
    rep.check("kernel_invariants_equal", k1.lattice().invariants == k2.lattice().invariants)

    fb, f2b = fingerprint(s, b), fingerprint(s, b2)
    rep.check("fingerprints_differ_only_by_representation",
              fb.order == f2b.order and fb.kernel == f2b.kernel and fb.pic == f2b.pic
              and fb.represents_two == "yes" and f2b.represents_two == "no")

    w1 = represents_zero_diag_binary_exact(5, 1, 2)
    rep.check("two_represented_by_first_form", w1 == (0, 1), w1)
    w2 = represents_zero_diag_binary_exact(5, 4, 2)
    rep.check("two_proven_absent_for_second_form", w2 is None)
    cert = representation_certificate(twisted_picard(s, b2).lattice(), 2)
    rep.check("certificate_on_pic_2B", cert == (False, None))

    # algebraic variant: add h of square 40 to the Picard lattice
    h = COUNTER_H
    sh = SurfaceDatum(orthogonal_complement(Sublattice(K3, (h,))))
    rep.check("h_square_40", k3_dot(h, h) == 40 and k3_dot(h, COUNTER_B) == 0)
    for name, bf, target, w in (("B", b, PIC_B_GRAM, _mukai(5, e12, 0)),
                                ("2B", b2, PIC_2B_GRAM, _mukai(5, tuple(2 * x for x in e12), 0))):
        pic = twisted_picard(sh, bf)
        rows = (u1, w, _mukai(0, h, 0))
        expected = xl.block_diag(target, ((40,),))
        rep.check(f"variant_pic_{name}", Sublattice(MUKAI, rows).same_as(pic)
                  and xl.gram_of_rows(rows, MUKAI.gram) == expected)
        rep.check(f"variant_twisted_algebraic_{name}", is_twisted_algebraic(sh, bf))
    sweep = represents_rank3_sweep(5, 4, 20, 2, z_max)
    rep.check("variant_sweep_absent", sweep is None, {"z_max": z_max})
    sweep_first = represents_rank3_sweep(5, 1, 20, 2, 10)
    rep.check("variant_sweep_first_form_witness", sweep_first == (0, 1, 0), sweep_first)
    return rep
