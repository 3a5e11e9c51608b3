"""Piecewise-linear automorphisms of Z^2, exact and canonical.

An element is a cyclic fan of primitive breakpoint rays (counterclockwise)
with one SL(2,Z) matrix per cone; a globally linear element stores a single
matrix and no rays.  All arithmetic is integer arithmetic.  Canonical form
merges adjacent cones carrying the same matrix and rotates the ray list to
start at the lexicographically smallest ray, so equality and hashing are
plain tuple comparisons.

Vectors are (a, b) tuples, matrices are row-major 4-tuples
(m11, m12, m21, m22).  The wedge product is normalized so that
wedge((1,0), (0,1)) == 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

Vec = tuple[int, int]
Mat = tuple[int, int, int, int]

MAT_ID: Mat = (1, 0, 0, 1)


def wedge(u: Vec, v: Vec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def primitive(v: Vec) -> Vec:
    """Primitive vector on the ray through v.  v must be nonzero."""
    a, b = v
    if a == 0 and b == 0:
        raise ValueError("zero vector has no direction")
    g = gcd(a, b)
    return (a // g, b // g)


def vec_add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def vec_neg(v: Vec) -> Vec:
    return (-v[0], -v[1])


def mat_apply(m: Mat, v: Vec) -> Vec:
    return (m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1])


def mat_mul(a: Mat, b: Mat) -> Mat:
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def mat_det(m: Mat) -> int:
    return m[0] * m[3] - m[1] * m[2]


def mat_inv(m: Mat) -> Mat:
    d = mat_det(m)
    if d == 1:
        return (m[3], -m[1], -m[2], m[0])
    if d == -1:
        return (-m[3], m[1], m[2], -m[0])
    raise ValueError("matrix is not unimodular: det=%d" % d)


# Named generators.  C and I generate SL(2,Z) inside the group; U is the
# standard unipotent; P is the tropical Lyness map and mu the x-shear that
# equals I*P.
GEN_MATS: dict[str, Mat] = {
    "C": (-1, 1, -1, 0),
    "I": (0, -1, 1, 0),
    "U": (1, 1, 0, 1),
}


# ---------------------------------------------------------------------------
# cyclic order of directions

def _quadrant(v: Vec) -> int:
    x, y = v
    if x > 0 and y >= 0:
        return 0
    if x <= 0 and y > 0:
        return 1
    if x < 0 and y <= 0:
        return 2
    return 3


def _dir_less(u: Vec, v: Vec) -> bool:
    """Strict counterclockwise order of directions, anchored at (1,0)."""
    qu, qv = _quadrant(u), _quadrant(v)
    if qu != qv:
        return qu < qv
    return wedge(u, v) > 0


def _sort_ccw(rays):
    # insertion sort with the exact comparator; ray lists are short
    out = []
    for r in set(rays):
        i = 0
        while i < len(out) and _dir_less(out[i], r):
            i += 1
        out.insert(i, r)
    return out


def _in_sector(a: Vec, b: Vec, v: Vec) -> bool:
    """Is direction v in the half-open sector [a, b), counterclockwise?

    Handles straight and reflex sectors; v need not be primitive.
    """
    if primitive(v) == a:
        return True
    if _dir_less(a, b):
        return not _dir_less(v, a) and _dir_less(v, b)
    return not _dir_less(v, a) or _dir_less(v, b)


# ---------------------------------------------------------------------------
# fans

@dataclass(frozen=True)
class Fan:
    """Complete cyclic fan of primitive rays, counterclockwise.

    Consecutive rays must span a positively oriented cone (wedge >= 1) and
    the list must turn exactly once around the origin.
    """

    rays: tuple[Vec, ...]

    def __post_init__(self):
        rays = self.rays
        if len(rays) < 3:
            raise ValueError("a fan needs at least 3 rays")
        wraps = 0
        for i, r in enumerate(rays):
            if primitive(r) != r:
                raise ValueError("ray %r is not primitive" % (r,))
            s = rays[(i + 1) % len(rays)]
            if wedge(r, s) < 1:
                raise ValueError("rays %r, %r do not span a positive cone" % (r, s))
            if not _dir_less(r, s):
                wraps += 1
        if wraps != 1:
            raise ValueError("rays do not wind once counterclockwise")

    def subdivide(self, i: int) -> "Fan":
        """Insert the mediant of rays i and i+1 (blow-up of the chain)."""
        rays = list(self.rays)
        a = rays[i % len(rays)]
        b = rays[(i + 1) % len(rays)]
        m = vec_add(a, b)
        if primitive(m) != m:
            raise ValueError("mediant %r is not primitive" % (m,))
        rays.insert(i % len(rays) + 1, m)
        return Fan(tuple(rays))


def chain_fan() -> Fan:
    """Initial coordinate-triangle fan; mediants of it give all blow-ups."""
    return Fan(((1, 0), (0, 1), (-1, -1)))


# ---------------------------------------------------------------------------
# piecewise-linear automorphisms

class PLAut:
    """Orientation-preserving piecewise-linear automorphism of Z^2.

    rays and mats have equal length n >= 2 and mats[i] acts on the cone
    from rays[i] counterclockwise to rays[i+1]; a linear element has
    rays == () and a single matrix.  Instances are immutable and always
    canonical.
    """

    __slots__ = ("rays", "mats")

    def __init__(self, rays, mats):
        rays = tuple(rays)
        mats = tuple(mats)
        rays, mats = _canonicalize(rays, mats)
        _validate(rays, mats)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "mats", mats)

    def __setattr__(self, *a):
        raise AttributeError("PLAut is immutable")

    @property
    def is_linear(self) -> bool:
        return not self.rays

    def matrix(self) -> Mat:
        if not self.is_linear:
            raise ValueError("element is not globally linear")
        return self.mats[0]

    def matrix_at(self, v: Vec) -> Mat:
        """Matrix of the cone containing v (nonzero)."""
        if v == (0, 0):
            raise ValueError("the origin lies in every cone")
        if self.is_linear:
            return self.mats[0]
        n = len(self.rays)
        for i in range(n):
            if _in_sector(self.rays[i], self.rays[(i + 1) % n], v):
                return self.mats[i]
        raise AssertionError("no cone contains %r" % (v,))

    def __call__(self, v: Vec) -> Vec:
        if v == (0, 0):
            return (0, 0)
        return mat_apply(self.matrix_at(v), v)

    def apply(self, v: Vec) -> Vec:
        return self(v)

    def __mul__(self, other: "PLAut") -> "PLAut":
        return compose_pl(self, other)

    def __invert__(self) -> "PLAut":
        return inverse_pl(self)

    def __pow__(self, k: int) -> "PLAut":
        if k < 0:
            return inverse_pl(self) ** (-k)
        out = identity_pl()
        for _ in range(k):
            out = compose_pl(out, self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PLAut):
            return NotImplemented
        return self.rays == other.rays and self.mats == other.mats

    def __hash__(self):
        return hash((self.rays, self.mats))

    def is_identity(self) -> bool:
        return self.is_linear and self.mats[0] == MAT_ID

    def breakpoints(self) -> tuple[Vec, ...]:
        return self.rays

    def __repr__(self):
        if self.is_linear:
            return "PLAut(linear=%r)" % (self.mats[0],)
        return "PLAut(%s)" % ", ".join(
            "%r:%r" % (r, m) for r, m in zip(self.rays, self.mats)
        )

    def to_json(self) -> dict:
        # external form lists rays in the clockwise (hour-hand) direction
        if self.is_linear:
            return {"orientation": "clockwise", "linear": _mat_rows(self.mats[0])}
        pairs = list(zip(self.rays, self.mats))
        pairs = [pairs[0]] + pairs[:0:-1]
        return {
            "orientation": "clockwise",
            "pieces": [
                {"ray": list(r), "matrix": _mat_rows(m)} for r, m in pairs
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "PLAut":
        if data.get("orientation", "clockwise") != "clockwise":
            raise ValueError("unknown orientation %r" % data.get("orientation"))
        if "linear" in data:
            return PLAut((), (_mat_flat(data["linear"]),))
        pairs = [
            (tuple(p["ray"]), _mat_flat(p["matrix"])) for p in data["pieces"]
        ]
        pairs = [pairs[0]] + pairs[:0:-1]
        return PLAut(tuple(r for r, _ in pairs), tuple(m for _, m in pairs))


def _mat_rows(m: Mat):
    return [[m[0], m[1]], [m[2], m[3]]]


def _mat_flat(rows) -> Mat:
    return (rows[0][0], rows[0][1], rows[1][0], rows[1][1])


def _canonicalize(rays, mats):
    if not rays:
        if len(mats) != 1:
            raise ValueError("linear element must carry exactly one matrix")
        return (), mats
    if len(rays) != len(mats):
        raise ValueError("rays and mats must have equal length")
    n = len(rays)
    keep_r, keep_m = [], []
    for i in range(n):
        if mats[i] != mats[i - 1]:
            keep_r.append(rays[i])
            keep_m.append(mats[i])
    if not keep_r:
        return (), (mats[0],)
    k = keep_r.index(min(keep_r))
    return tuple(keep_r[k:] + keep_r[:k]), tuple(keep_m[k:] + keep_m[:k])


def _validate(rays, mats):
    for m in mats:
        if mat_det(m) != 1:
            raise ValueError("piece matrix %r has det %d, not 1" % (m, mat_det(m)))
    if not rays:
        return
    n = len(rays)
    if n == 1:
        raise AssertionError("one breakpoint cannot survive canonicalization")
    wraps = 0
    for i in range(n):
        r, s = rays[i], rays[(i + 1) % n]
        if primitive(r) != r:
            raise ValueError("ray %r is not primitive" % (r,))
        if r == s:
            raise ValueError("repeated ray %r" % (r,))
        if not _dir_less(r, s):
            wraps += 1
        # adjacent pieces must agree on the shared ray s
        if mat_apply(mats[i], s) != mat_apply(mats[(i + 1) % n], s):
            raise ValueError("pieces disagree on shared ray %r" % (s,))
    if wraps != 1:
        raise ValueError("breakpoint rays do not wind once counterclockwise")
    # the image rays must again wind once, which makes the map bijective
    images = [mat_apply(m, r) for r, m in zip(rays, mats)]
    wraps = 0
    for i in range(n):
        if not _dir_less(images[i], images[(i + 1) % n]):
            wraps += 1
    if wraps != 1:
        raise ValueError("image rays do not wind once; map is not bijective")


def identity_pl() -> PLAut:
    return PLAut((), (MAT_ID,))


def linear_pl(m: Mat) -> PLAut:
    return PLAut((), (tuple(m),))


def generator_pl(name: str) -> PLAut:
    """Named generators: P, L = P^-1, mu = I*P, and the matrices C, I, U."""
    if name in GEN_MATS:
        return linear_pl(GEN_MATS[name])
    if name == "P":
        # (a,b) -> (b, min(0,b) - a): one matrix above the x-axis, one below
        return PLAut(((1, 0), (-1, 0)), ((0, 1, -1, 0), (0, 1, -1, 1)))
    if name == "L":
        return inverse_pl(generator_pl("P"))
    if name == "mu":
        # (a,b) -> (a - min(0,b), b)
        return PLAut(((1, 0), (-1, 0)), (MAT_ID, (1, -1, 0, 1)))
    raise ValueError("unknown generator %r" % name)


_AXES: tuple[Vec, ...] = ((1, 0), (0, 1), (-1, 0), (0, -1))


def from_function(fn, hint_rays) -> PLAut:
    """Build the PLAut equal to fn, given rays subordinating its linearity.

    fn maps Z^2 -> Z^2 and must be linear on every cone of the fan spanned
    by hint_rays plus the coordinate axes.  Every cone's matrix is solved
    from the two spanning rays and checked on the mediant, so a hidden
    breakpoint or a non-unimodular piece raises ValueError.
    """
    rays = _sort_ccw([primitive(r) for r in hint_rays] + list(_AXES))
    mats = []
    n = len(rays)
    for i in range(n):
        a, b = rays[i], rays[(i + 1) % n]
        wa, wb = fn(a), fn(b)
        d = wedge(a, b)
        if d <= 0:
            raise AssertionError("candidate rays out of order")
        num = (
            wa[0] * b[1] - wb[0] * a[1],
            -wa[0] * b[0] + wb[0] * a[0],
            wa[1] * b[1] - wb[1] * a[1],
            -wa[1] * b[0] + wb[1] * a[0],
        )
        if any(x % d for x in num):
            raise ValueError("map is not integrally linear on cone %r,%r" % (a, b))
        m: Mat = tuple(x // d for x in num)  # type: ignore[assignment]
        if mat_det(m) != 1:
            raise ValueError(
                "piece on cone %r,%r has det %d, not 1" % (a, b, mat_det(m))
            )
        mid = vec_add(a, b)
        if fn(mid) != mat_apply(m, mid):
            raise ValueError("hidden breakpoint inside cone %r,%r" % (a, b))
        mats.append(m)
    return PLAut(tuple(rays), tuple(mats))


def compose_pl(f: PLAut, g: PLAut) -> PLAut:
    """f after g; the word "FG" acts as compose_pl(F, G)."""
    if f.is_linear and g.is_linear:
        return linear_pl(mat_mul(f.mats[0], g.mats[0]))
    ginv = inverse_pl(g)
    hints = list(g.rays) + [ginv(r) for r in f.rays]
    return from_function(lambda v: f(g(v)), hints)


def inverse_pl(f: PLAut) -> PLAut:
    if f.is_linear:
        return linear_pl(mat_inv(f.mats[0]))
    rays = tuple(mat_apply(m, r) for r, m in zip(f.rays, f.mats))
    mats = tuple(mat_inv(m) for m in f.mats)
    return PLAut(rays, mats)


def order_pl(f: PLAut, bound: int = 64):
    """Order of f if at most bound, else None."""
    g = f
    for n in range(1, bound + 1):
        if g.is_identity():
            return n
        g = compose_pl(g, f)
    return None
