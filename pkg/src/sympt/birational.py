"""Exact birational self-maps of the plane in two variables.

Maps are pairs of rational functions with integer-coefficient Laurent
polynomials for numerator and denominator; nothing is ever reduced to lowest
terms, so equality tests cross-multiply.  Symbolic composition substitutes
one map into another and is capped at short words; long words are compared
pointwise modulo large primes with a Schwartz-Zippel error bound.

The symplectic structure is the log form dx∧dy/(xy): a map (f1, f2) preserves
it exactly when x·y·det J(f1,f2) = f1·f2.  Tropicalization reads off leading
exponents along x = t^a, y = t^b as t -> 0+, where the smallest exponent
dominates, and returns the exact piecewise-linear shadow.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

import sympy

from .plcore import PLAut, from_function, primitive

# primes just above 2^61, 2^61 + 10^6, 2^62, 2^63
PRIMES = (
    2305843009213693967,
    2305843009214693957,
    4611686018427388039,
    9223372036854775837,
)

Monomial = tuple[int, int]


class LaurentPoly:
    """Integer-coefficient Laurent polynomial in x, y (sparse dict)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, int] | None = None):
        clean = {m: c for m, c in (terms or {}).items() if c}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("LaurentPoly is immutable")

    @staticmethod
    def const(c: int) -> "LaurentPoly":
        return LaurentPoly({(0, 0): c})

    @staticmethod
    def monomial(i: int, j: int, c: int = 1) -> "LaurentPoly":
        return LaurentPoly({(i, j): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[Monomial, int] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, 0) + c1 * c2
        return LaurentPoly(out)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = LaurentPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, i: int, j: int) -> "LaurentPoly":
        """Multiply by the monomial x^i y^j."""
        return LaurentPoly({(a + i, b + j): c for (a, b), c in self.terms.items()})

    def dx(self) -> "LaurentPoly":
        return LaurentPoly({(i - 1, j): c * i
                            for (i, j), c in self.terms.items() if i})

    def dy(self) -> "LaurentPoly":
        return LaurentPoly({(i, j - 1): c * j
                            for (i, j), c in self.terms.items() if j})

    def eval_mod(self, x: int, y: int, p: int) -> int:
        acc = 0
        for (i, j), c in self.terms.items():
            xi = pow(x, i, p) if i >= 0 else pow(pow(x, -1, p), -i, p)
            yj = pow(y, j, p) if j >= 0 else pow(pow(y, -1, p), -j, p)
            acc = (acc + c * xi * yj) % p
        return acc

    def eval_exact(self, x: Fraction, y: Fraction) -> Fraction:
        acc = Fraction(0)
        for (i, j), c in self.terms.items():
            acc += c * x ** i * y ** j
        return acc

    def support(self) -> list[Monomial]:
        return sorted(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (i, j), c in sorted(self.terms.items()):
            s = "" if c == 1 and (i or j) else str(c)
            if i:
                s += "x" if i == 1 else "x^%d" % i
            if j:
                s += "y" if j == 1 else "y^%d" % j
            bits.append(s or str(c))
        return " + ".join(bits)


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
X = LaurentPoly.monomial(1, 0)
Y = LaurentPoly.monomial(0, 1)


class RationalFn:
    """Quotient of Laurent polynomials, never reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = ONE):
        if not den:
            raise ZeroDivisionError("zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RationalFn is immutable")

    def __eq__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __add__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __sub__(self, other: "RationalFn") -> "RationalFn":
        return self + RationalFn(-other.num, other.den)

    def __mul__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.num, self.den * other.den)

    def reciprocal(self) -> "RationalFn":
        if not self.num:
            raise ZeroDivisionError("reciprocal of zero")
        return RationalFn(self.den, self.num)

    def __repr__(self):
        if self.den == ONE:
            return repr(self.num)
        return "(%r)/(%r)" % (self.num, self.den)


_SYMS = sympy.symbols("x y")


def _to_sympy(poly: LaurentPoly, shift: Monomial) -> sympy.Poly:
    x, y = _SYMS
    expr = sympy.Integer(0)
    for (i, j), c in poly.terms.items():
        expr += sympy.Integer(c) * x ** (i - shift[0]) * y ** (j - shift[1])
    return sympy.Poly(expr, x, y, domain="ZZ")


def _from_sympy(poly: sympy.Poly) -> LaurentPoly:
    return LaurentPoly({(int(i), int(j)): int(c)
                        for (i, j), c in poly.terms()})


def reduce_fraction(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Cancel the polynomial gcd and monomial content of num/den.

    Composition never reduces on its own; without this the unreduced
    representations grow exponentially with word length.
    """
    if not num:
        return ZERO, ONE
    shift_n = (min(i for i, _ in num.terms), min(j for _, j in num.terms))
    shift_d = (min(i for i, _ in den.terms), min(j for _, j in den.terms))
    pn = _to_sympy(num, shift_n)
    pd = _to_sympy(den, shift_d)
    g = sympy.gcd(pn, pd)
    if not g.is_one:
        pn = sympy.Poly(sympy.div(pn, g, *_SYMS)[0], *_SYMS, domain="ZZ")
        pd = sympy.Poly(sympy.div(pd, g, *_SYMS)[0], *_SYMS, domain="ZZ")
    num = _from_sympy(pn)
    den = _from_sympy(pd)
    # park the net monomial x^i y^j on the numerator
    num = num.shift(shift_n[0] - shift_d[0], shift_n[1] - shift_d[1])
    if len(den.terms) == 1:
        ((di, dj), dc) = next(iter(den.terms.items()))
        if dc in (1, -1):
            return num.shift(-di, -dj) if dc == 1 else (-num).shift(-di, -dj), ONE
    return num, den


def _subs_poly(poly: LaurentPoly, g1: RationalFn, g2: RationalFn) -> RationalFn:
    """poly(g1, g2) over the common denominator (n1 d1)^A (n2 d2)^B."""
    if not poly.terms:
        return RationalFn(ZERO)
    A = max(abs(i) for i, _ in poly.terms)
    B = max(abs(j) for _, j in poly.terms)
    num = ZERO
    for (i, j), c in poly.terms.items():
        term = LaurentPoly.const(c)
        term = term * g1.num ** (A + i) * g1.den ** (A - i)
        term = term * g2.num ** (B + j) * g2.den ** (B - j)
        num = num + term
    den = (g1.num * g1.den) ** A * (g2.num * g2.den) ** B
    return RationalFn(num, den)


class BirMap:
    """Birational map (x, y) -> (f1, f2)."""

    __slots__ = ("f1", "f2")

    def __init__(self, f1: RationalFn, f2: RationalFn):
        if not f1.num or not f2.num:
            raise ValueError("component of a birational map cannot be zero")
        object.__setattr__(self, "f1", f1)
        object.__setattr__(self, "f2", f2)

    def __setattr__(self, *a):
        raise AttributeError("BirMap is immutable")

    def __eq__(self, other):
        if not isinstance(other, BirMap):
            return NotImplemented
        return self.f1 == other.f1 and self.f2 == other.f2

    def __mul__(self, other: "BirMap") -> "BirMap":
        return compose_bir(self, other)

    def apply_mod(self, point: tuple[int, int], p: int) -> tuple[int, int]:
        """Image of a point over F_p; ZeroDivisionError on the exceptional locus."""
        x, y = point
        out = []
        for f in (self.f1, self.f2):
            d = f.den.eval_mod(x, y, p)
            if d == 0:
                raise ZeroDivisionError("point on the pole locus")
            out.append(f.num.eval_mod(x, y, p) * pow(d, -1, p) % p)
        if out[0] == 0 or out[1] == 0:
            raise ZeroDivisionError("image on a coordinate axis")
        return (out[0], out[1])

    def apply_exact(self, point) -> tuple[Fraction, Fraction]:
        x, y = Fraction(point[0]), Fraction(point[1])
        out = []
        for f in (self.f1, self.f2):
            d = f.den.eval_exact(x, y)
            if d == 0:
                raise ZeroDivisionError("point on the pole locus")
            out.append(f.num.eval_exact(x, y) / d)
        if out[0] == 0 or out[1] == 0:
            raise ZeroDivisionError("image on a coordinate axis")
        return (out[0], out[1])

    def size(self) -> int:
        return sum(len(f.num.terms) + len(f.den.terms)
                   for f in (self.f1, self.f2))

    def __repr__(self):
        return "BirMap(%r, %r)" % (self.f1, self.f2)

    def to_json(self) -> dict:
        def poly(pl: LaurentPoly) -> list:
            return [[i, j, c] for (i, j), c in sorted(pl.terms.items())]

        return {"f1": {"num": poly(self.f1.num), "den": poly(self.f1.den)},
                "f2": {"num": poly(self.f2.num), "den": poly(self.f2.den)}}

    @staticmethod
    def from_json(data: dict) -> "BirMap":
        def poly(terms) -> LaurentPoly:
            return LaurentPoly({(int(i), int(j)): int(c) for i, j, c in terms})

        return BirMap(
            RationalFn(poly(data["f1"]["num"]), poly(data["f1"]["den"])),
            RationalFn(poly(data["f2"]["num"]), poly(data["f2"]["den"])))


def identity_bir() -> BirMap:
    return BirMap(RationalFn(X), RationalFn(Y))


def monomial_bir(a: int, b: int, c: int, d: int) -> BirMap:
    """(x, y) -> (x^a y^b, x^c y^d); unimodular exponent matrix required."""
    if abs(a * d - b * c) != 1:
        raise ValueError("exponent matrix must have determinant +-1")
    return BirMap(RationalFn(LaurentPoly.monomial(a, b)),
                  RationalFn(LaurentPoly.monomial(c, d)))


def scaling_bir(lam1: Fraction, lam2: Fraction) -> BirMap:
    """(x, y) -> (lam1 x, lam2 y) with nonzero rational constants."""
    lam1, lam2 = Fraction(lam1), Fraction(lam2)
    if lam1 == 0 or lam2 == 0:
        raise ValueError("scaling constants must be nonzero")
    return BirMap(
        RationalFn(X * LaurentPoly.const(lam1.numerator),
                   LaurentPoly.const(lam1.denominator)),
        RationalFn(Y * LaurentPoly.const(lam2.numerator),
                   LaurentPoly.const(lam2.denominator)),
    )


def generator_bir(name: str) -> BirMap:
    """P: (x,y) -> (y, (1+y)/x); other letters are monomial matrix maps."""
    if name == "P":
        return BirMap(RationalFn(Y), RationalFn(ONE + Y, X))
    if name == "L":  # P^-1
        return BirMap(RationalFn(ONE + X, Y), RationalFn(X))
    if name == "C":
        return monomial_bir(-1, 1, -1, 0)
    if name == "I":
        return monomial_bir(0, -1, 1, 0)
    if name == "U":
        return monomial_bir(1, 1, 0, 1)
    if name == "mu":  # I∘P: (x, y) -> (x/(1+y), y)
        return BirMap(RationalFn(X, ONE + Y), RationalFn(Y))
    raise ValueError("unknown generator %r" % name)


def generator_bir_inverse(name: str) -> BirMap:
    """Exact inverse of a named generator."""
    if name == "P":
        return generator_bir("L")
    if name == "L":
        return generator_bir("P")
    if name in ("C", "I", "U"):
        from .plcore import GEN_MATS, mat_inv
        return monomial_bir(*mat_inv(GEN_MATS[name]))
    if name == "mu":
        return BirMap(RationalFn(X * (ONE + Y)), RationalFn(Y))
    raise ValueError("unknown generator %r" % name)


def compose_bir(f: BirMap, g: BirMap) -> BirMap:
    """f after g, by substitution; the result is reduced to lowest terms."""
    parts = []
    for comp in (f.f1, f.f2):
        n = _subs_poly(comp.num, g.f1, g.f2)
        d = _subs_poly(comp.den, g.f1, g.f2)
        parts.append(RationalFn(*reduce_fraction(n.num * d.den, n.den * d.num)))
    return BirMap(parts[0], parts[1])


def is_symplectic(f: BirMap) -> bool:
    """Does f preserve dx∧dy/(xy)?  Exact: checks x y det J = f1 f2."""
    f1, f2 = f.f1, f.f2
    d1, d2 = f1.den, f2.den

    def partial(num, den, ddx):
        if ddx:
            n, d = num.dx() * den - num * den.dx(), den * den
        else:
            n, d = num.dy() * den - num * den.dy(), den * den
        if not n:
            return RationalFn(ZERO)
        return RationalFn(*reduce_fraction(n, d))

    f1x = partial(f1.num, d1, True)
    f1y = partial(f1.num, d1, False)
    f2x = partial(f2.num, d2, True)
    f2y = partial(f2.num, d2, False)
    det = f1x * f2y - f1y * f2x
    lhs = RationalFn(X * Y) * det
    return lhs == f1 * f2


# ---------------------------------------------------------------------------
# randomized word equality

def _word_atoms():
    return {s: generator_bir(s) for s in ("P", "C", "I")}


def _apply_word_mod(word, point, p):
    """Apply a core word to a point mod p, rightmost factor first."""
    atoms = _word_atoms()
    atoms["L"] = generator_bir("L")
    inv_mono = {
        "C": monomial_bir(0, -1, 1, -1),   # C^-1
        "I": monomial_bir(0, 1, -1, 0),    # I^-1
    }
    x = point
    for sym, exp in reversed(word):
        if exp >= 0:
            g, k = atoms[sym], exp
        elif sym == "P":
            g, k = atoms["L"], -exp
        else:
            g, k = inv_mono[sym], -exp
        for _ in range(k):
            x = g.apply_mod(x, p)
    return x


def word_equals_identity(word, primes=None, trials: int = 20,
                         seed: int = 0) -> dict:
    """Probabilistic identity test for a word over {P, C, I}.

    Samples points over each prime field and compares the word's action with
    the identity.  Returns the verdict with the evidence needed to replay it:
    primes, per-prime sample counts, and the Schwartz-Zippel bound on the
    probability that a nonidentity word passed every sample.
    """
    primes = tuple(primes or PRIMES[:2])
    for p in primes:
        if p <= 2 ** 61:
            raise ValueError("prime %d is not above 2^61" % p)
    length = sum(abs(e) for _, e in word)
    rng = random.Random(seed)
    samples = 0
    mismatch = None
    for p in primes:
        done = 0
        attempts = 0
        while done < trials:
            attempts += 1
            if attempts > 100 * trials:
                raise RuntimeError("could not sample off the pole locus")
            point = (rng.randrange(2, p - 1), rng.randrange(2, p - 1))
            try:
                image = _apply_word_mod(word, point, p)
            except ZeroDivisionError:
                continue
            done += 1
            samples += 1
            if image != point and mismatch is None:
                mismatch = {"prime": p, "point": list(point),
                            "image": list(image)}
    # deg(components) <= 2^(length+1); each sample misleads with
    # probability <= deg/(p-1) <= 2^(length+1-61)
    exponent_per_sample = 61 - (length + 1)
    if exponent_per_sample <= 0:
        raise ValueError("word too long for a meaningful bound at 2^61 primes")
    evidence = {
        "primes": list(primes),
        "trials_per_prime": trials,
        "samples": samples,
        "word_length": length,
        "error_bound": "2^-%d" % (exponent_per_sample * samples),
    }
    if mismatch:
        evidence["mismatch"] = mismatch
    return {"equal": mismatch is None, "evidence": evidence}


def word_equals(word_a, word_b, primes=None, trials: int = 20,
                seed: int = 0) -> dict:
    """Randomized equality of two core words: tests a b^-1 = identity."""
    inv_b = tuple((s, -e) for s, e in reversed(tuple(word_b)))
    return word_equals_identity(tuple(word_a) + inv_b, primes, trials, seed)


# ---------------------------------------------------------------------------
# orbits and probes

def orbit_exact(f: BirMap, start, steps: int) -> list:
    """Exact rational orbit start, f(start), ..., f^steps(start)."""
    pts = [(Fraction(start[0]), Fraction(start[1]))]
    for _ in range(steps):
        pts.append(f.apply_exact(pts[-1]))
    return pts


def kernel_probe(word, npoints: int = 100, primes=None, seed: int = 0) -> dict:
    """Evaluate a word at many points over several primes.

    Reports whether the word acted as the identity on every sampled point;
    the verdict is experimental data about the candidate kernel element,
    never an assertion about the group.
    """
    primes = tuple(primes or PRIMES[:3])
    per = -(-npoints // len(primes))  # ceil
    rng = random.Random(seed)
    agree = 0
    disagree = 0
    first = None
    for p in primes:
        done = 0
        attempts = 0
        while done < per and attempts < 100 * per:
            attempts += 1
            point = (rng.randrange(2, p - 1), rng.randrange(2, p - 1))
            try:
                image = _apply_word_mod(word, point, p)
            except ZeroDivisionError:
                continue
            done += 1
            if image == point:
                agree += 1
            else:
                disagree += 1
                if first is None:
                    first = {"prime": p, "point": list(point),
                             "image": list(image)}
    verdict = "identity" if disagree == 0 else "nonidentity"
    if agree and disagree:
        verdict = "inconsistent"
    out = {
        "verdict": verdict,
        "points_identity": agree,
        "points_moved": disagree,
        "primes": list(primes),
    }
    if first:
        out["witness"] = first
    return out


# ---------------------------------------------------------------------------
# tropicalization

def _edge_normals(poly: LaurentPoly):
    """Directions along which two support monomials tie for the minimum."""
    rays = set()
    pts = poly.support()
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            di = pts[b][0] - pts[a][0]
            dj = pts[b][1] - pts[a][1]
            if di == 0 and dj == 0:
                continue
            g = gcd(di, dj)
            rays.add((dj // g, -di // g))
            rays.add((-dj // g, di // g))
    return rays


def _trop_exponent(poly: LaurentPoly, v) -> int:
    # as t -> 0+, the monomial with the smallest exponent dominates
    return min(i * v[0] + j * v[1] for i, j in poly.terms)


def tropicalize(f: BirMap) -> PLAut:
    """Exact piecewise-linear shadow of f along x = t^a, y = t^b, t -> 0+.

    Raises ValueError if the shadow is not an integral piecewise-linear
    automorphism (non-unimodular piece or hidden breakpoint).
    """
    polys = (f.f1.num, f.f1.den, f.f2.num, f.f2.den)

    def shadow(v):
        return (_trop_exponent(polys[0], v) - _trop_exponent(polys[1], v),
                _trop_exponent(polys[2], v) - _trop_exponent(polys[3], v))

    hints = set()
    for poly in polys:
        hints |= _edge_normals(poly)
    return from_function(shadow, [primitive(r) for r in hints])
