"""The K3 lattice, the Mukai lattice and the isometries acting on them.

Coordinate conventions (fixed; golden outputs depend on them):

* K3 lattice, 22 coordinates: ``U1 = (e1, e2)``, ``U2 = (f1, f2)``,
  ``U3 = (g1, g2)``, then two copies of the negative E8 lattice with simple
  roots ``a1..a8`` and ``b1..b8``.
* Mukai lattice, 24 coordinates: index 0 is ``u2`` (degree 0), indices
  1..22 are the K3 coordinates (degree 2) and index 23 is ``u1`` (degree 4),
  with ``<u2, u1> = -1``.

Isometry matrices act on column vectors: ``g(v) = M v``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from . import exactlin as xl
from .errors import InputError, NotAnIsometry
from .lattice import IntLattice, direct_sum, rescale

K3_RANK = 22
MUKAI_RANK = 24

# E8 Dynkin diagram: chain a1-...-a7 with a8 attached to a5
_E8_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]


def _e8_gram():
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 2
    for i, j in _E8_EDGES:
        g[i][j] = g[j][i] = -1
    return xl.freeze(g)


U = IntLattice(((0, 1), (1, 0)), "U")
E8 = IntLattice(_e8_gram(), "E8")
MINUS_E8 = rescale(E8, -1, label="-E8")
K3 = direct_sum(U, U, U, MINUS_E8, MINUS_E8, label="K3")
K3_GRAM = K3.gram
K3_GRAM_INV = xl.as_int_matrix(xl.inverse(K3_GRAM))


def _mukai_gram():
    g = [[0] * MUKAI_RANK for _ in range(MUKAI_RANK)]
    g[0][23] = g[23][0] = -1
    for i in range(K3_RANK):
        for j in range(K3_RANK):
            g[i + 1][j + 1] = K3_GRAM[i][j]
    return xl.freeze(g)


MUKAI = IntLattice(_mukai_gram(), "Mukai")
MUKAI_GRAM = MUKAI.gram
MUKAI_GRAM_INV = xl.as_int_matrix(xl.inverse(MUKAI_GRAM))

BASIS_NAMES = (["e1", "e2", "f1", "f2", "g1", "g2"]
               + [f"a{k}" for k in range(1, 9)] + [f"b{k}" for k in range(1, 9)])
_NAME_INDEX = {name: k for k, name in enumerate(BASIS_NAMES)}

_K3_ENTRIES = [(i, j, K3_GRAM[i][j]) for i in range(K3_RANK) for j in range(K3_RANK)
               if K3_GRAM[i][j]]


def k3_dot(x, y):
    """Intersection form on K3 coordinates."""
    return sum(v * x[i] * y[j] for i, j, v in _K3_ENTRIES if x[i] and y[j])


def k3_vector(**coeffs) -> tuple:
    """Build a K3 coordinate vector from basis names, e.g. ``k3_vector(e1=1, e2=1)``."""
    v = [0] * K3_RANK
    for name, value in coeffs.items():
        if name not in _NAME_INDEX:
            raise InputError(f"unknown basis vector {name!r}")
        v[_NAME_INDEX[name]] = value
    return tuple(v)


def basis_vector(name: str) -> tuple:
    return k3_vector(**{name: 1})


def as_rational(v) -> tuple:
    return tuple(Fraction(x) for x in v)


# ---------------------------------------------------------------------------
# Mukai vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MukaiVector:
    """Class ``(r, c, s)`` in degrees 0, 2, 4; all entries rational."""

    r: Fraction
    c: tuple
    s: Fraction

    def __post_init__(self):
        if len(self.c) != K3_RANK:
            raise InputError("degree-2 part must have 22 coordinates")
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "c", as_rational(self.c))
        object.__setattr__(self, "s", Fraction(self.s))

    @classmethod
    def from_coords(cls, coords) -> "MukaiVector":
        if len(coords) != MUKAI_RANK:
            raise InputError("Mukai coordinates must have length 24")
        return cls(coords[0], tuple(coords[1:23]), coords[23])

    @classmethod
    def degree2(cls, c) -> "MukaiVector":
        return cls(0, tuple(c), 0)

    def coords(self) -> tuple:
        return (self.r,) + self.c + (self.s,)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.coords())

    def __add__(self, other):
        return MukaiVector(self.r + other.r, tuple(a + b for a, b in zip(self.c, other.c)),
                           self.s + other.s)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return MukaiVector(-self.r, tuple(-a for a in self.c), -self.s)

    def __mul__(self, k):
        k = Fraction(k)
        return MukaiVector(k * self.r, tuple(k * a for a in self.c), k * self.s)

    __rmul__ = __mul__


ZERO_C = (0,) * K3_RANK


def pairing(v: MukaiVector, w: MukaiVector) -> Fraction:
    """Mukai pairing ``c.c' - r s' - s r'``."""
    return k3_dot(v.c, w.c) - v.r * w.s - v.s * w.r


def cup(v: MukaiVector, w: MukaiVector) -> MukaiVector:
    """Cup product in the even cohomology of a surface."""
    return MukaiVector(v.r * w.r,
                       tuple(v.r * b + w.r * a for a, b in zip(v.c, w.c)),
                       v.r * w.s + v.s * w.r + k3_dot(v.c, w.c))


def cup_power(v: MukaiVector, k: int) -> MukaiVector:
    out = MukaiVector(1, ZERO_C, 0)
    for _ in range(k):
        out = cup(out, v)
    return out


def exp_class(b) -> MukaiVector:
    """``1 + B + B^2/2``."""
    return MukaiVector(1, tuple(b), Fraction(k3_dot(b, b)) / 2)


def exp_b(b, v: MukaiVector) -> MukaiVector:
    """Multiplication by ``exp(B)``: ``(r, c + rB, s + B.c + r B^2/2)``."""
    b = as_rational(b)
    return MukaiVector(v.r, tuple(x + v.r * y for x, y in zip(v.c, b)),
                       v.s + k3_dot(b, v.c) + v.r * k3_dot(b, b) / 2)


def dual(v: MukaiVector) -> MukaiVector:
    return MukaiVector(v.r, tuple(-x for x in v.c), v.s)


def euler_pairing(v: MukaiVector, w: MukaiVector) -> Fraction:
    """Euler characteristic ``-<v^dual, w>``.

    With the pairing above this gives ``chi(O, O) = 2`` on a K3 surface.
    """
    return -pairing(dual(v), w)


def twisted_character(b, untwisted: MukaiVector) -> MukaiVector:
    """Twisted Chern character shadow: the untwisted class moved by ``exp(B)``."""
    return exp_b(b, untwisted)


def standard_vectors(omega, line_class=None) -> dict:
    """Mukai vectors of the structure sheaf, a point, a curve with class
    ``omega`` and (optionally) a line bundle with first Chern class ``line_class``."""
    omega = as_rational(omega)
    w2 = k3_dot(omega, omega)
    out = {
        "O": MukaiVector(1, ZERO_C, 1),
        "k(x)": MukaiVector(0, ZERO_C, 1),
        "O_H": MukaiVector(0, omega, -w2 / 2),
    }
    if line_class is not None:
        lc = as_rational(line_class)
        out["L"] = MukaiVector(1, lc, k3_dot(lc, lc) / 2 + 1)
    return out


# ---------------------------------------------------------------------------
# certified isometries
# ---------------------------------------------------------------------------

_DOMAINS = {"mukai": MUKAI_GRAM, "k3": K3_GRAM}
_DOMAIN_INV = {"mukai": MUKAI_GRAM_INV, "k3": K3_GRAM_INV}


def _check_preserves(m, gram):
    lhs = xl.matmul(xl.matmul(xl.transpose(m), gram), m)
    if lhs != gram:
        for i, (ra, rb) in enumerate(zip(lhs, gram)):
            for j, (a, b) in enumerate(zip(ra, rb)):
                if a != b:
                    raise NotAnIsometry(
                        f"Gram entry ({i}, {j}) not preserved: got {a}, expected {b}", (i, j))


@dataclass(frozen=True)
class Isometry:
    """Integer matrix preserving the Gram form of its domain.

    Build these with :func:`isometry_from_matrix` or the generator helpers;
    ``word`` records how the isometry was assembled and is ignored by ``==``.
    """

    matrix: tuple
    domain: str = "mukai"
    word: tuple = field(default=(), compare=False)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if self.domain != other.domain:
            raise InputError("cannot compose isometries of different lattices")
        return isometry_from_matrix(xl.matmul(self.matrix, other.matrix), self.domain,
                                    self.word + other.word)

    def inverse(self) -> "Isometry":
        gi = _DOMAIN_INV[self.domain]
        m = xl.matmul(xl.matmul(gi, xl.transpose(self.matrix)), _DOMAINS[self.domain])
        return isometry_from_matrix(m, self.domain, tuple(f"inv({w})" for w in reversed(self.word)))

    def apply(self, v):
        if isinstance(v, MukaiVector):
            if self.domain != "mukai":
                raise InputError("K3-lattice isometry applied to a Mukai vector")
            return MukaiVector.from_coords(xl.matvec(self.matrix, v.coords()))
        return xl.matvec(self.matrix, v)

    __call__ = apply

    @property
    def rank(self) -> int:
        return len(self.matrix)


def isometry_from_matrix(m, domain: str = "mukai", word=()) -> Isometry:
    if domain not in _DOMAINS:
        raise InputError(f"unknown domain {domain!r}")
    gram = _DOMAINS[domain]
    m = xl.freeze(m)
    if xl.shape(m) != (len(gram), len(gram)):
        raise InputError(f"{domain} isometries are {len(gram)}x{len(gram)} matrices")
    if not xl.is_integral(m):
        raise NotAnIsometry("isometry matrix must be integral")
    m = xl.as_int_matrix(m)
    _check_preserves(m, gram)
    return Isometry(m, domain, tuple(word))


def identity_isometry(domain="mukai") -> Isometry:
    return Isometry(xl.identity(len(_DOMAINS[domain])), domain, ())


def _mukai_matrix_from(entries) -> list:
    m = [[0] * MUKAI_RANK for _ in range(MUKAI_RANK)]
    for i in range(MUKAI_RANK):
        m[i][i] = 1
    for (i, j), x in entries.items():
        m[i][j] = x
    return m


def generator_i() -> Isometry:
    """``u2 -> -u1``, ``u1 -> -u2``, identity in degree 2."""
    m = _mukai_matrix_from({(0, 0): 0, (23, 23): 0, (23, 0): -1, (0, 23): -1})
    return isometry_from_matrix(m, word=("i",))


def generator_j() -> Isometry:
    """Minus the identity on the degree 0 and 4 parts."""
    m = _mukai_matrix_from({(0, 0): -1, (23, 23): -1})
    return isometry_from_matrix(m, word=("j",))


def minus_id() -> Isometry:
    return isometry_from_matrix(xl.scale_matrix(xl.identity(MUKAI_RANK), -1), word=("-id",))


def exp_matrix(b) -> tuple:
    """Matrix of ``exp(B)`` on Mukai coordinates (rational if ``B`` is)."""
    b = tuple(b)
    gb = xl.matvec(K3_GRAM, b)
    m = _mukai_matrix_from({})
    for k in range(K3_RANK):
        m[k + 1][0] = b[k]
        m[23][k + 1] = gb[k]
    m[23][0] = Fraction(k3_dot(b, b), 2)
    if all(isinstance(x, int) for x in b):
        m[23][0] = int(m[23][0])
    return xl.freeze(m)


def _vector_label(b) -> str:
    terms = []
    for name, x in zip(BASIS_NAMES, b):
        if x:
            terms.append(name if x == 1 else f"-{name}" if x == -1 else f"{x}{name}")
    return "+".join(terms).replace("+-", "-") or "0"


def generator_exp(b) -> Isometry:
    """``exp(B)`` for an integral class ``B``."""
    if not all(Fraction(x).denominator == 1 for x in b):
        raise InputError("exp generator needs an integral B")
    b = tuple(int(x) for x in b)
    return isometry_from_matrix(exp_matrix(b), word=(f"exp({_vector_label(b)})",))


def embed_lambda_isometry(h: Isometry) -> Isometry:
    """Extend an isometry of the K3 lattice by the identity on ``u2, u1``."""
    if h.domain != "k3":
        raise InputError("expected an isometry of the K3 lattice")
    m = _mukai_matrix_from({})
    for i in range(K3_RANK):
        for j in range(K3_RANK):
            m[i + 1][j + 1] = h.matrix[i][j]
    return isometry_from_matrix(m, word=h.word)


# ---------------------------------------------------------------------------
# generators of O(K3) and random words
# ---------------------------------------------------------------------------

def reflection(v) -> Isometry:
    """Reflection of the K3 lattice in a vector of norm +2 or -2."""
    v = tuple(int(x) for x in v)
    n = k3_dot(v, v)
    if n not in (2, -2):
        raise InputError("reflections are defined here for vectors of norm +-2")
    gv = xl.matvec(K3_GRAM, v)
    # s(x) = x - 2 (x.v)/(v.v) v
    f = -1 if n == 2 else 1
    m = [[int(i == j) + f * v[i] * gv[j] for j in range(K3_RANK)] for i in range(K3_RANK)]
    tag = "r" if n == -2 else "s"
    return isometry_from_matrix(m, "k3", (f"{tag}({_vector_label(v)})",))


def _permutation(perm, signs=None, label="") -> Isometry:
    m = [[0] * K3_RANK for _ in range(K3_RANK)]
    for src, dst in enumerate(perm):
        m[dst][src] = signs[src] if signs else 1
    return isometry_from_matrix(m, "k3", (label,) if label else ())


def hyperbolic_swap(block: int) -> Isometry:
    """Exchange the two isotropic generators of ``U_block`` (block in 1..3)."""
    perm = list(range(K3_RANK))
    a = 2 * (block - 1)
    perm[a], perm[a + 1] = a + 1, a
    return _permutation(perm, label=f"swap(U{block})")


def hyperbolic_negation(block: int) -> Isometry:
    signs = [1] * K3_RANK
    a = 2 * (block - 1)
    signs[a] = signs[a + 1] = -1
    return _permutation(list(range(K3_RANK)), signs, label=f"neg(U{block})")


def block_exchange(b1: int, b2: int) -> Isometry:
    perm = list(range(K3_RANK))
    a, b = 2 * (b1 - 1), 2 * (b2 - 1)
    perm[a], perm[b] = b, a
    perm[a + 1], perm[b + 1] = b + 1, a + 1
    return _permutation(perm, label=f"exchange(U{b1},U{b2})")


def _random_small_vector(rng: random.Random, norm: int, support=3, tries=2000):
    for _ in range(tries):
        idx = rng.sample(range(K3_RANK), rng.randint(1, support))
        v = [0] * K3_RANK
        for k in idx:
            v[k] = rng.choice((-1, 1, 2, -2)) if rng.random() < 0.2 else rng.choice((-1, 1))
        if k3_dot(v, v) == norm:
            return tuple(v)
    raise RuntimeError("no vector of the requested norm found")  # pragma: no cover


def random_lattice_letter(rng: random.Random, reversing=True) -> Isometry:
    """One random generator of O(K3): root reflections, hyperbolic swaps,
    block exchanges and (if ``reversing``) orientation reversing moves."""
    kinds = ["root", "root", "swap", "exchange"]
    if reversing:
        kinds += ["plus2", "neg"]
    kind = rng.choice(kinds)
    if kind == "root":
        return reflection(_random_small_vector(rng, -2))
    if kind == "plus2":
        return reflection(_random_small_vector(rng, 2))
    if kind == "swap":
        return hyperbolic_swap(rng.randint(1, 3))
    if kind == "neg":
        return hyperbolic_negation(rng.randint(1, 3))
    b1, b2 = rng.sample((1, 2, 3), 2)
    return block_exchange(b1, b2)


def random_lattice_word(seed_or_rng, length: int, reversing=True) -> Isometry:
    """Random word in generators of O(K3), deterministic in the seed."""
    rng = seed_or_rng if isinstance(seed_or_rng, random.Random) else random.Random(seed_or_rng)
    g = identity_isometry("k3")
    for _ in range(length):
        g = random_lattice_letter(rng, reversing) @ g
    return g


def random_integral_class(rng: random.Random, support=4, bound=2) -> tuple:
    v = [0] * K3_RANK
    for k in rng.sample(range(K3_RANK), rng.randint(1, support)):
        v[k] = rng.randint(-bound, bound)
    return tuple(v)


def random_word(seed, length: int) -> Isometry:
    """Random word in exp(B), i, j and embedded O(K3) generators.

    Deterministic in ``seed``; the result is a certified isometry of the
    Mukai lattice whose ``word`` lists the letters, last applied first.
    """
    rng = random.Random(seed)
    g = identity_isometry()
    for _ in range(length):
        kind = rng.choice(("exp", "exp", "i", "j", "lattice"))
        if kind == "exp":
            if rng.random() < 0.5:
                b = basis_vector(rng.choice(BASIS_NAMES))
            else:
                b = random_integral_class(rng)
            letter = generator_exp(b)
        elif kind == "i":
            letter = generator_i()
        elif kind == "j":
            letter = generator_j()
        else:
            letter = embed_lambda_isometry(random_lattice_letter(rng))
        g = letter @ g
    return g


def degree_parts(coords) -> tuple:
    """Split Mukai coordinates into ``(degree 0, degree 2, degree 4)``."""
    return coords[0], tuple(coords[1:23]), coords[23]
