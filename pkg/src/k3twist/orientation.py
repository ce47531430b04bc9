"""Orientation of the four positive directions and tests for isometries.

The frame of a (possibly twisted) surface is the ``exp(B)`` transport of
``Re sigma, Im sigma, 1 - omega^2/2, omega``. An isometry preserves the
orientation when the projected frame map has positive determinant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import exactlin as xl
from .errors import InputError, PreconditionError
from .hodge import BField, SurfaceDatum
from .mukai import MUKAI_GRAM, Isometry, MukaiVector, as_rational, exp_b, k3_dot


@dataclass(frozen=True)
class OrientedFrame:
    vectors: tuple
    surface: SurfaceDatum
    bfield: BField
    omega: tuple

    @property
    def gram(self):
        return xl.gram_of_rows(self.vectors, MUKAI_GRAM)


def _bfield(b) -> BField:
    if b is None:
        return BField.zero()
    return b if isinstance(b, BField) else BField(b)


def oriented_frame(s: SurfaceDatum, b, omega) -> OrientedFrame:
    p = s.require_period()
    bf = _bfield(b)
    w = as_rational(omega)
    if k3_dot(w, p.x1) or k3_dot(w, p.x2):
        raise InputError("omega must be orthogonal to the period")
    w2 = k3_dot(w, w)
    if w2 <= 0:
        raise InputError(f"omega must have positive square, got {w2}")
    base = [MukaiVector.degree2(p.x1), MukaiVector.degree2(p.x2),
            MukaiVector(1, (0,) * len(w), -w2 / 2), MukaiVector.degree2(w)]
    vecs = tuple(exp_b(bf.b, v).coords() for v in base)
    frame = OrientedFrame(vecs, s, bf, w)
    assert xl.positive_definite(frame.gram), "frame is not positive definite"
    return frame


def projection_matrix(g: Isometry, src: OrientedFrame, dst: OrientedFrame):
    """Matrix of (projection onto the target frame) composed with ``g`` on the
    source frame, in frame coordinates."""
    images = [g.apply(v) for v in src.vectors]
    pairings = [[xl.bilinear(MUKAI_GRAM, d, im) for im in images] for d in dst.vectors]
    return xl.matmul(xl.inverse(dst.gram), pairings)


def is_orientation_preserving(g: Isometry, src: OrientedFrame, dst: OrientedFrame) -> bool:
    d = xl.det(projection_matrix(g, src, dst))
    # a kernel vector would be positive yet lie in a negative definite complement
    assert d != 0, "projection of a positive four-space degenerated"
    return d > 0


# ---------------------------------------------------------------------------
# the criterion through the degree-zero data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriterionData:
    r: Fraction
    chi: Fraction
    chi_h: Fraction
    lam: tuple

    def as_dict(self):
        return {"r": self.r, "chi": self.chi, "chi_H": self.chi_h, "lambda": list(self.lam)}


def _effective(g: Isometry, b_src=None, b_dst=None):
    """``v -> exp(-B_dst) g exp(B_src) v``, which is untwisted on both sides."""
    bs = _bfield(b_src).b
    bd = tuple(-x for x in _bfield(b_dst).b)

    def apply(v: MukaiVector) -> MukaiVector:
        return exp_b(bd, g.apply(exp_b(bs, v)))

    return apply


def criterion_data(g: Isometry, omega, b_src=None, b_dst=None) -> CriterionData:
    phi = _effective(g, b_src, b_dst)
    w = as_rational(omega)
    w2 = k3_dot(w, w)
    zero = (0,) * len(w)
    r = phi(MukaiVector(0, zero, 1)).r
    chi = phi(MukaiVector(1, zero, 1)).r
    chi_h = phi(MukaiVector(0, w, -w2 / 2)).r
    lam = (chi - r * (w2 / 2 + 1), chi_h + r * w2 / 2)
    return CriterionData(r, chi, chi_h, lam)


def basic_classes(data: CriterionData, omega) -> tuple:
    """Mukai vectors of the two basic classes built from ``r``, ``chi`` and ``chi_H``."""
    w = as_rational(omega)
    w2 = k3_dot(w, w)
    r = data.r
    v0 = MukaiVector(-r, (0,) * len(w), -r + data.chi)
    v1 = MukaiVector(0, tuple(-r * x for x in w), r * w2 / 2 + data.chi_h)
    return v0, v1


def class_a(g: Isometry, omega, b_src=None, b_dst=None) -> tuple:
    """The class ``a`` in ``g(exp(i omega)) = lambda exp(b + i a)``, via the basic classes."""
    data = criterion_data(g, omega, b_src, b_dst)
    if data.r == 0:
        raise PreconditionError("criterion requires nonzero rank r")
    norm = data.lam[0] ** 2 + data.lam[1] ** 2
    if norm == 0:
        raise PreconditionError("lambda vanishes; the criterion is not applicable")
    w = as_rational(omega)
    w2 = k3_dot(w, w)
    v0, v1 = basic_classes(data, omega)
    combo = v0 * (data.chi_h / data.r + w2 / 2) + v1 * ((w2 / 2 + 1) - data.chi / data.r)
    image = _effective(g, b_src, b_dst)(combo)
    return tuple(x / norm for x in image.c)


def class_a_direct(g: Isometry, omega, b_src=None, b_dst=None) -> tuple:
    """Same class read off the image of ``exp(i omega)`` directly.

    ``lambda`` is the degree-0 part and ``b + i a`` the degree-2 part divided
    by it; the degree-4 part is checked against ``lambda (b + i a)^2 / 2``.
    """
    phi = _effective(g, b_src, b_dst)
    w = as_rational(omega)
    w2 = k3_dot(w, w)
    re = phi(MukaiVector(1, (0,) * len(w), -w2 / 2))
    im = phi(MukaiVector.degree2(w))
    lr, li = re.r, im.r
    norm = lr * lr + li * li
    if norm == 0:
        raise PreconditionError("lambda vanishes; the image has no degree-0 part")
    # (X + iY) / (lr + i li) = ((X lr + Y li) + i (Y lr - X li)) / |lambda|^2
    b = tuple((x * lr + y * li) / norm for x, y in zip(re.c, im.c))
    a = tuple((y * lr - x * li) / norm for x, y in zip(re.c, im.c))
    # degree 4: lambda * ((b^2 - a^2)/2 + i a.b)
    q_re = (k3_dot(b, b) - k3_dot(a, a)) / 2
    q_im = k3_dot(a, b)
    assert re.s == lr * q_re - li * q_im and im.s == lr * q_im + li * q_re, \
        "image of exp(i omega) is not of the form lambda exp(b + i a)"
    return a


def positive_cone_check(a, s: SurfaceDatum, reference) -> bool:
    """Whether ``a`` lies in the component of the positive cone containing ``reference``."""
    p = s.require_period()
    a = as_rational(a)
    ref = as_rational(reference)
    for name, v in (("a", a), ("reference", ref)):
        if k3_dot(v, p.x1) or k3_dot(v, p.x2):
            raise InputError(f"{name} is not of type (1,1): not orthogonal to the period")
    if k3_dot(ref, ref) <= 0:
        raise InputError("reference class must have positive square")
    return k3_dot(a, a) > 0 and k3_dot(a, ref) > 0


def criterion_orientation(g: Isometry, src: OrientedFrame, dst: OrientedFrame) -> bool:
    a = class_a(g, src.omega, src.bfield, dst.bfield)
    return positive_cone_check(a, dst.surface, dst.omega)


@dataclass(frozen=True)
class OrientationVerdict:
    direct: bool
    criterion: Optional[bool]
    data: Optional[CriterionData]

    @property
    def agree(self) -> Optional[bool]:
        return None if self.criterion is None else self.criterion == self.direct


def orientation_verdict(g: Isometry, src: OrientedFrame, dst: OrientedFrame,
                        criterion: bool = True) -> OrientationVerdict:
    direct = is_orientation_preserving(g, src, dst)
    if not criterion:
        return OrientationVerdict(direct, None, None)
    data = criterion_data(g, src.omega, src.bfield, dst.bfield)
    return OrientationVerdict(direct, criterion_orientation(g, src, dst), data)
