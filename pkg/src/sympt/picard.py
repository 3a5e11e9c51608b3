"""Linear representation of the group on a Picard-type lattice.

The lattice is spanned by several families of symbols:

* ``plpart(F)``: an integer piecewise-linear function on the plane, taken
  modulo globally linear functions.  Every F carries an integer index of
  non-linearity d(F, a) at each primitive ray a, and indexes define a
  pairing with finitely supported functions on rays.
* ``delta(s, k)``: an infinite tower of classes over each primitive ray s,
  with a self-product of -1 and orthogonal to everything else.  The group
  acts on plpart + delta by the five L-rules, with correction terms mixing
  the two families.
* ``b(a)`` and ``e(a, k)``: the index encoding of plpart classes and the
  differences of consecutive tower levels; mutation acts by eight rules.
* ``p(w)``: a change of basis indexed by all nonzero lattice vectors,
  with p of a multiple kv expanding into e-levels and b.
* the W[q] model: e symbols with Z[q] coefficients, carrying the canonical
  mutation action, a wedge form, and the invariant subspace V (vectors
  whose Z[q]-weighted index sum vanishes).

Coefficients are polynomials in q; the commutative picture is q = 1.

Sign convention: the mutation rule on e_(x,y) with y < 0 carries the
coefficient -q*y.  That sign is forced by exactness: it is the unique
choice under which V is invariant and the wedge form is preserved
exactly in Z[q], and at q = 1 it coincides with the p-basis action.
The b/e rule list attaches its correction term on the opposite wedge
sector; cross_basis_report surfaces that mismatch with witnesses
instead of patching either side.
"""

import random
from functools import cmp_to_key
from math import gcd

from .plcore import (
    GEN_MATS,
    Fan,
    Mat,
    PLAut,
    Vec,
    generator_pl,
    linear_pl,
    mat_apply,
    mat_inv,
    primitive,
    vec_add,
    wedge,
)
from .plcore import _dir_less, _in_sector

_CCW_KEY = cmp_to_key(
    lambda u, w: 0 if u == w else (-1 if _dir_less(u, w) else 1))

__all__ = [
    "QPoly",
    "BreakFn",
    "PicVec",
    "ample_A",
    "zero_breakfn",
    "compose_breakfn",
    "index",
    "pairing",
    "is_ample",
    "is_effective",
    "b_vec",
    "e_vec",
    "delta_vec",
    "p_vec",
    "chain_vec",
    "plpart_vec",
    "delta_L_action",
    "pic_product",
    "f_prime",
    "be_encode",
    "sigma_v",
    "mu_be_action",
    "p_basis",
    "p_expand",
    "mu_p_action",
    "gamma_action",
    "mu_Wq_action",
    "mu_Wq_inverse",
    "v_membership",
    "wedge_form",
    "random_v_vector",
    "word_operator",
    "word_acts_as_identity",
    "cross_basis_report",
    "cluster_mutation",
]


# ---------------------------------------------------------------------------
# polynomials in q

class QPoly:
    """Polynomial in q with integer coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = tuple(int(c) for c in coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("QPoly is immutable")

    @staticmethod
    def const(n) -> "QPoly":
        return QPoly((int(n),))

    @staticmethod
    def lift(x) -> "QPoly":
        if isinstance(x, QPoly):
            return x
        return QPoly.const(x)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = QPoly.const(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, (int, QPoly)):
            return NotImplemented
        other = QPoly.lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return QPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, (int, QPoly)):
            return NotImplemented
        return self + (-QPoly.lift(other))

    def __rsub__(self, other):
        if not isinstance(other, (int, QPoly)):
            return NotImplemented
        return QPoly.lift(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, (int, QPoly)):
            return NotImplemented
        other = QPoly.lift(other)
        if not self or not other:
            return QPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def at_one(self) -> int:
        return sum(self.coeffs)

    def constant_value(self) -> int:
        """Integer value of a constant polynomial; error otherwise."""
        if len(self.coeffs) > 1:
            raise ValueError("coefficient %r is not constant in q" % (self,))
        return self.coeffs[0] if self.coeffs else 0

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("%d*q" % c if c not in (1, -1) else ("q" if c == 1 else "-q"))
            else:
                parts.append("%d*q^%d" % (c, i) if c not in (1, -1)
                             else ("q^%d" % i if c == 1 else "-q^%d" % i))
        return " + ".join(parts).replace("+ -", "- ")


Q_ZERO = QPoly()
Q_ONE = QPoly((1,))
Q_Q = QPoly((0, 1))


# ---------------------------------------------------------------------------
# piecewise-linear functions modulo linear functions

_AXES = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _content_and_primitive(v: Vec):
    k = gcd(v[0], v[1])
    return k, (v[0] // k, v[1] // k)


def _egcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _next_boundary_ray(u: Vec, w: Vec, d: int) -> Vec:
    """Primitive m strictly inside cone(u, w) with u ^ m = 1 and m ^ w
    as small as possible; splitting at it drops the wedge below d."""
    g, s, t = _egcd(u[0], u[1])
    m0 = (-t, s)
    r = wedge(m0, w) % d
    if r == 0:
        raise AssertionError("no transverse ray inside cone %r %r" % (u, w))
    shift = (r - wedge(m0, w)) // d
    return (m0[0] + shift * u[0], m0[1] + shift * u[1])


class BreakFn:
    """Integer PL function on the plane, canonical modulo linear functions.

    Built from a fan and one integer value per fan ray; internally refined
    to a unimodular fan (mediant values interpolate linearly and must stay
    integral).  The stored values are normalized to vanish at (1,0) and
    (0,1).  Equality and hashing use the multiset of nonzero indexes, which
    determines the function up to a linear summand.
    """

    __slots__ = ("fan", "values", "_rays", "_vals", "_key")

    def __init__(self, rays, values):
        rays = [tuple(r) for r in rays]
        values = [int(x) for x in values]
        if len(rays) != len(values):
            raise ValueError("need one value per ray")
        pairs = sorted(zip(rays, values), key=lambda p: _CCW_KEY(p[0]))
        rays = [r for r, _ in pairs]
        vals = [x for _, x in pairs]
        fan = Fan(tuple(rays))
        # refine to a unimodular fan; linear interpolation must be integral
        i = 0
        while i < len(rays):
            u, fu = rays[i], vals[i]
            w, fw = rays[(i + 1) % len(rays)], vals[(i + 1) % len(rays)]
            d = wedge(u, w)
            if d == 1:
                i += 1
                continue
            m = _next_boundary_ray(u, w, d)
            # m = (r*u + w)/d with r = m ^ w, so interpolation forces
            num = fu * wedge(m, w) + fw
            if num % d:
                raise ValueError(
                    "function is not integer-valued at %s" % (m,))
            rays.insert(i + 1, m)
            vals.insert(i + 1, num // d)
            i += 1
        # normalize away the linear part
        a = self._raw_eval(rays, vals, (1, 0))
        b = self._raw_eval(rays, vals, (0, 1))
        vals = [x - a * r[0] - b * r[1] for x, r in zip(vals, rays)]
        key = []
        n = len(rays)
        for j in range(n):
            d = self._index_at(rays, vals, j)
            if d:
                key.append((rays[j], d))
        object.__setattr__(self, "fan", fan)
        object.__setattr__(
            self, "values",
            tuple(self._raw_eval(rays, vals, r) for r in fan.rays))
        object.__setattr__(self, "_rays", tuple(rays))
        object.__setattr__(self, "_vals", tuple(vals))
        object.__setattr__(self, "_key", frozenset(key))

    def __setattr__(self, *a):
        raise AttributeError("BreakFn is immutable")

    @staticmethod
    def _raw_eval(rays, vals, v):
        if v == (0, 0):
            return 0
        k, p = _content_and_primitive(v)
        n = len(rays)
        for i in range(n):
            u, w = rays[i], rays[(i + 1) % n]
            if _in_sector(u, w, p):
                return k * (wedge(p, w) * vals[i]
                            + wedge(u, p) * vals[(i + 1) % n])
        raise AssertionError("no cone contains %r" % (v,))

    @staticmethod
    def _index_at(rays, vals, j):
        n = len(rays)
        a = rays[j]
        u, w = rays[(j - 1) % n], rays[(j + 1) % n]
        s = vec_add(u, w)
        k = s[0] // a[0] if a[0] else s[1] // a[1]
        return vals[(j - 1) % n] + vals[(j + 1) % n] - k * vals[j]

    def __call__(self, v) -> int:
        return self._raw_eval(self._rays, self._vals, tuple(v))

    @property
    def break_rays(self):
        """Rays with nonzero index, counterclockwise."""
        return tuple(r for r in self._rays
                     if any(r == a for a, _ in self._key))

    def indexes(self) -> dict:
        return {a: d for a, d in self._key}

    def is_linear(self) -> bool:
        return not self._key

    def __eq__(self, other):
        if not isinstance(other, BreakFn):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __add__(self, other):
        if not isinstance(other, BreakFn):
            return NotImplemented
        rays = sorted(set(self._rays) | set(other._rays))
        return BreakFn(rays, [self(r) + other(r) for r in rays])

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        c = int(c)
        return BreakFn(self._rays, [c * x for x in self._vals])

    def __repr__(self):
        if self.is_linear():
            return "BreakFn(0)"
        return "BreakFn(%s)" % ", ".join(
            "%r:%d" % (r, d) for r, d in sorted(self._key))

    def to_json(self):
        return {"rays": [list(r) for r in self._rays],
                "values": list(self._vals)}

    @staticmethod
    def from_json(data) -> "BreakFn":
        return BreakFn([tuple(r) for r in data["rays"]], data["values"])


def zero_breakfn() -> BreakFn:
    return BreakFn(_AXES, (0, 0, 0, 0))


def ample_A() -> BreakFn:
    """The function max(0, -y); not linear only at (1,0) and (-1,0)."""
    return BreakFn(_AXES, (0, 0, 0, 1))


def compose_breakfn(F: BreakFn, g: PLAut) -> BreakFn:
    """The function v -> F(g(v))."""
    ginv = ~g
    rays = set(g.rays) | set(_AXES)
    rays.update(ginv(r) for r in F.break_rays)
    rays = sorted(rays)
    return BreakFn(rays, [F(g(r)) for r in rays])


def index(F: BreakFn, a: Vec, shift: int = 0) -> int:
    """Index of non-linearity d(F, a) at a primitive ray.

    With u, w adjacent to a and u ^ a = a ^ w = 1, the index is
    F(u) + F(w) - k F(a) where u + w = k a.  The optional shift replaces
    u, w by u + shift*a, w + shift*a; the result does not depend on it.
    """
    a = tuple(a)
    if primitive(a) != a:
        raise ValueError("index is defined at primitive rays only")
    rays = F._rays
    n = len(rays)
    if a not in rays:
        if shift == 0:
            return 0
        # manufacture unimodular companions around a linear point
        u, w = _unimodular_companions(F, a)
    else:
        j = rays.index(a)
        u, w = rays[(j - 1) % n], rays[(j + 1) % n]
    u = (u[0] + shift * a[0], u[1] + shift * a[1])
    w = (w[0] + shift * a[0], w[1] + shift * a[1])
    s = vec_add(u, w)
    k = s[0] // a[0] if a[0] else s[1] // a[1]
    return F(u) + F(w) - k * F(a)


def _unimodular_companions(F: BreakFn, a: Vec):
    """Neighbors u, w with u ^ a = a ^ w = 1 inside the cone holding a.

    Found by mediant descent from the cone corners: a strictly interior
    primitive direction is eventually the mediant of the walk, and its
    two parents stay inside the cone, where F is linear.
    """
    rays = F._rays
    n = len(rays)
    for i in range(n):
        u, w = rays[i], rays[(i + 1) % n]
        if _in_sector(u, w, a):
            while True:
                m = vec_add(u, w)
                if m == a:
                    return u, w
                if _in_sector(u, m, a):
                    w = m
                else:
                    u = m
    raise AssertionError("no cone contains %r" % (a,))


def pairing(F: BreakFn, G: dict) -> int:
    """Sum of d(F, a) G(a) over the support of G."""
    total = 0
    for a, c in G.items():
        total += index(F, tuple(a)) * int(c)
    return total


def is_ample(F: BreakFn) -> bool:
    return all(d >= 0 for _, d in F._key)


def is_effective(G: dict) -> bool:
    return all(int(c) >= 0 for c in G.values())


# ---------------------------------------------------------------------------
# sparse vectors over the symbol families

_FAMILIES = ("b", "e", "delta", "p", "chain", "plpart")


def _check_primitive(a):
    a = tuple(a)
    if a == (0, 0) or primitive(a) != a:
        raise ValueError("ray index must be primitive, got %r" % (a,))
    return a


class PicVec:
    """Finite Z[q]-combination of symbols; plpart terms are merged."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        if isinstance(terms, dict):
            terms = terms.items()
        merged = {}
        plsum = None
        for key, coeff in terms:
            coeff = QPoly.lift(coeff)
            if not coeff:
                continue
            fam = key[0]
            if fam == "plpart":
                F = key[1]
                if not isinstance(F, BreakFn):
                    raise ValueError("plpart key must hold a BreakFn")
                c = coeff.constant_value()
                if c == 0:
                    continue
                scaled = c * F
                plsum = scaled if plsum is None else plsum + scaled
                continue
            key = self._check_key(fam, key)
            if key in merged:
                merged[key] = merged[key] + coeff
            else:
                merged[key] = coeff
        if plsum is not None and not plsum.is_linear():
            merged[("plpart", plsum)] = Q_ONE
        object.__setattr__(
            self, "terms", {k: c for k, c in merged.items() if c})

    @staticmethod
    def _check_key(fam, key):
        if fam == "b":
            return ("b", _check_primitive(key[1]))
        if fam == "chain":
            return ("chain", _check_primitive(key[1]))
        if fam in ("e", "delta"):
            a, k = _check_primitive(key[1]), int(key[2])
            if k < 1:
                raise ValueError("level must be >= 1, got %d" % k)
            return (fam, a, k)
        if fam == "p":
            w = tuple(key[1])
            if w == (0, 0):
                raise ValueError("p key cannot be the origin")
            return ("p", w)
        raise ValueError("unknown symbol family %r" % (fam,))

    def __setattr__(self, *a):
        raise AttributeError("PicVec is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key) -> QPoly:
        return self.terms.get(key, Q_ZERO)

    def __eq__(self, other):
        if not isinstance(other, PicVec):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        if not isinstance(other, PicVec):
            return NotImplemented
        return PicVec(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, c):
        c = QPoly.lift(c)
        return PicVec([(k, c * v) for k, v in self.terms.items()])

    def at_one(self) -> "PicVec":
        """Specialize all coefficients at q = 1."""
        return PicVec([(k, QPoly.const(v.at_one()))
                       for k, v in self.terms.items()])

    def __repr__(self):
        if not self.terms:
            return "PicVec(0)"
        bits = []
        for key in sorted(self.terms, key=repr):
            bits.append("(%s)*%s" % (self.terms[key], _key_repr(key)))
        return "PicVec(%s)" % " + ".join(bits)

    def to_json(self):
        out = []
        for key in sorted(self.terms, key=repr):
            coeff = list(self.terms[key].coeffs)
            fam = key[0]
            if fam == "plpart":
                out.append({"family": "plpart", "fn": key[1].to_json(),
                            "coef": coeff})
            elif fam in ("e", "delta"):
                out.append({"family": fam, "arg": list(key[1]),
                            "level": key[2], "coef": coeff})
            else:
                out.append({"family": fam, "arg": list(key[1]),
                            "coef": coeff})
        return {"terms": out}

    @staticmethod
    def from_json(data) -> "PicVec":
        terms = []
        for t in data["terms"]:
            fam = t["family"]
            coeff = QPoly(t["coef"])
            if fam == "plpart":
                terms.append((("plpart", BreakFn.from_json(t["fn"])), coeff))
            elif fam in ("e", "delta"):
                terms.append(((fam, tuple(t["arg"]), t["level"]), coeff))
            else:
                terms.append(((fam, tuple(t["arg"])), coeff))
        return PicVec(terms)


def _key_repr(key):
    if key[0] == "plpart":
        return "plpart[%r]" % (key[1],)
    if key[0] in ("e", "delta"):
        return "%s%r^%d" % (key[0], key[1], key[2])
    return "%s%r" % (key[0], key[1])


ZERO_VEC = PicVec()


def b_vec(a) -> PicVec:
    return PicVec([(("b", tuple(a)), Q_ONE)])


def e_vec(w, level=None) -> PicVec:
    """e symbol; e_w for a lattice vector w is e at primitive(w) with the
    content as level, and e at the origin is zero."""
    w = tuple(w)
    if level is not None:
        return PicVec([(("e", w, int(level)), Q_ONE)])
    if w == (0, 0):
        return ZERO_VEC
    k, a = _content_and_primitive(w)
    if k < 0:
        k, a = -k, (-a[0], -a[1])
    return PicVec([(("e", a, k), Q_ONE)])


def delta_vec(a, k=1) -> PicVec:
    return PicVec([(("delta", tuple(a), int(k)), Q_ONE)])


def p_vec(w) -> PicVec:
    w = tuple(w)
    if w == (0, 0):
        return ZERO_VEC
    return PicVec([(("p", w), Q_ONE)])


def chain_vec(a) -> PicVec:
    return PicVec([(("chain", tuple(a)), Q_ONE)])


def plpart_vec(F: BreakFn) -> PicVec:
    return PicVec([(("plpart", F), Q_ONE)])


def _e_key_vector(key) -> Vec:
    _, a, k = key
    return (k * a[0], k * a[1])


# ---------------------------------------------------------------------------
# the L-action on delta towers and PL parts

def delta_L_action(x: PicVec) -> PicVec:
    """One application of L to a vector over delta and plpart symbols."""
    L = generator_pl("L")
    Linv = generator_pl("P")
    out = ZERO_VEC
    for key, c in x.terms.items():
        fam = key[0]
        if fam == "delta":
            _, s, k = key
            if s == (0, -1):
                img = delta_vec((1, 0), k + 1)
            elif s == (0, 1):
                if k >= 2:
                    img = delta_vec((-1, 0), k - 1)
                else:
                    img = -delta_vec((1, 0), 1) + plpart_vec(ample_A())
            else:
                img = delta_vec(L(s), k)
        elif fam == "plpart":
            F = key[1]
            comp = compose_breakfn(F, Linv)
            img = (plpart_vec(comp)
                   - F((0, -1)) * delta_vec((1, 0), 1)
                   + F((0, 1)) * (-delta_vec((1, 0), 1)
                                  + plpart_vec(ample_A())))
        else:
            raise ValueError(
                "L-action is defined on delta and plpart terms, got %r"
                % (fam,))
        out = out + c * img
    return out


def pic_product(x: PicVec, y: PicVec):
    """Intersection product where the lattice defines one.

    delta terms square to -1 levelwise and are orthogonal to everything
    else; plpart pairs with chain through the index pairing.  Pairs with
    no defined product (plpart with plpart, chain with chain, or any b, e,
    p term) raise an error.
    """
    total = Q_ZERO
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            f1, f2 = k1[0], k2[0]
            if f1 in ("b", "e", "p") or f2 in ("b", "e", "p"):
                raise ValueError("product undefined for this pair")
            if f1 == "delta" or f2 == "delta":
                if k1 == k2:
                    total = total - c1 * c2
                continue
            if f1 == "plpart" and f2 == "chain":
                total = total + c1 * c2 * index(k1[1], k2[1])
            elif f1 == "chain" and f2 == "plpart":
                total = total + c1 * c2 * index(k2[1], k1[1])
            else:
                raise ValueError("product undefined for this pair")
    return total.constant_value() if len(total.coeffs) <= 1 else total


def f_prime(F: BreakFn) -> PicVec:
    """plpart(F) minus the level-one deltas weighted by the indexes."""
    out = plpart_vec(F)
    for a, d in F.indexes().items():
        out = out - d * delta_vec(a, 1)
    return out


def be_encode(F: BreakFn) -> PicVec:
    """Index encoding in B; lands in the kernel of b_a -> a."""
    out = ZERO_VEC
    sx = sy = 0
    for a, d in F.indexes().items():
        out = out + d * b_vec(a)
        sx += d * a[0]
        sy += d * a[1]
    if (sx, sy) != (0, 0):
        raise AssertionError("index checksum %r is nonzero" % ((sx, sy),))
    return out


# ---------------------------------------------------------------------------
# mutation actions

def sigma_v(w: Vec, v: Vec) -> Vec:
    """Mutation on lattice indices: w - min(v^w, 0)v off the v-line,
    w - v on it.  Returns (0,0) exactly for w = v; callers treat the
    origin symbol as zero."""
    v = _check_primitive(v)
    w = tuple(w)
    if w == (0, 0):
        raise ValueError("sigma is defined on nonzero vectors")
    if wedge(w, v) != 0:
        m = wedge(v, w)
        if m < 0:
            return (w[0] - m * v[0], w[1] - m * v[1])
        return w
    return (w[0] - v[0], w[1] - v[1])


def mu_be_action(x: PicVec, v: Vec) -> PicVec:
    """Mutation at v on b/e terms, by the eight listed rules."""
    v = _check_primitive(v)
    nv = (-v[0], -v[1])
    out = ZERO_VEC
    for key, c in x.terms.items():
        fam = key[0]
        if fam == "b":
            w = key[1]
            if w == v:
                img = -b_vec(nv)
            elif w == nv:
                img = e_vec(nv, 1) + b_vec(nv)
            elif wedge(w, v) > 0:
                img = b_vec(sigma_v(w, v))
            else:
                img = b_vec(sigma_v(w, v)) + wedge(v, w) * b_vec(nv)
        elif fam == "e":
            _, a, k = key
            if a == v:
                img = (b_vec(v) + b_vec(nv)) if k == 1 else e_vec(v, k - 1)
            elif a == nv:
                img = e_vec(nv, k + 1)
            else:
                img = e_vec(sigma_v(a, v), k)
        else:
            raise ValueError(
                "mutation on b/e vectors only, got %r" % (fam,))
        out = out + c * img
    return out


def p_basis(k: int, v: Vec) -> PicVec:
    """p at kv: e levels 1..k-1 with weights k-1..1, plus k b_v."""
    k = int(k)
    if k < 1:
        raise ValueError("level must be >= 1")
    v = _check_primitive(v)
    out = k * b_vec(v)
    for j in range(1, k):
        out = out + (k - j) * e_vec(v, j)
    return out


def p_expand(w: Vec) -> PicVec:
    """b/e expansion of the p symbol at any nonzero lattice vector."""
    w = tuple(w)
    if w == (0, 0):
        return ZERO_VEC
    k, a = _content_and_primitive(w)
    if k < 0:
        k, a = -k, (-a[0], -a[1])
    return p_basis(k, a)


def mu_p_action(w: Vec, v: Vec) -> PicVec:
    """Mutation at v of the p symbol at w, in p symbols."""
    v = _check_primitive(v)
    w = tuple(w)
    if w == (0, 0):
        raise ValueError("p symbol needs a nonzero vector")
    s = wedge(w, v)
    coeff = s if s > 0 else (0 if s < 0 else -1)
    out = p_vec(sigma_v(w, v))
    if coeff:
        out = out + coeff * p_vec((-v[0], -v[1]))
    return out


# ---------------------------------------------------------------------------
# the W[q] model

def gamma_action(x: PicVec, m: Mat) -> PicVec:
    """Natural index action of a lattice automorphism on symbol families."""
    out = []
    for key, c in x.terms.items():
        fam = key[0]
        if fam in ("b", "chain"):
            out.append(((fam, mat_apply(m, key[1])), c))
        elif fam in ("e", "delta"):
            out.append(((fam, mat_apply(m, key[1]), key[2]), c))
        elif fam == "p":
            out.append((("p", mat_apply(m, key[1])), c))
        else:
            F = key[1]
            out.append((("plpart",
                         compose_breakfn(F, linear_pl(mat_inv(m)))), c))
    return PicVec(out)


def mu_Wq_action(x: PicVec) -> PicVec:
    """Canonical mutation on W[q] vectors (e symbols, Z[q] coefficients).

    For w = (x, y): y > 0 keeps the index and adds (1-q) y e_(-1,0);
    y < 0 sends it to (x-y, y) and adds -q y e_(-1,0); y = 0 shifts to
    (x-1, 0) minus e_(-1,0), with e at the origin equal to zero.
    """
    one_minus_q = Q_ONE - Q_Q
    out = ZERO_VEC
    for key, c in x.terms.items():
        if key[0] != "e":
            raise ValueError("W[q] action needs e terms, got %r" % (key[0],))
        wx, wy = _e_key_vector(key)
        if wy > 0:
            img = e_vec((wx, wy)) + (one_minus_q * wy) * e_vec((-1, 0))
        elif wy < 0:
            img = e_vec((wx - wy, wy)) - (Q_Q * wy) * e_vec((-1, 0))
        else:
            img = e_vec((wx - 1, 0)) - e_vec((-1, 0))
        out = out + c * img
    return out


def mu_Wq_inverse(x: PicVec) -> PicVec:
    one_minus_q = Q_ONE - Q_Q
    out = ZERO_VEC
    for key, c in x.terms.items():
        if key[0] != "e":
            raise ValueError("W[q] action needs e terms, got %r" % (key[0],))
        wx, wy = _e_key_vector(key)
        if wy > 0:
            img = e_vec((wx, wy)) + (one_minus_q * wy) * e_vec((1, 0))
        elif wy < 0:
            img = e_vec((wx + wy, wy)) - (Q_Q * wy) * e_vec((1, 0))
        else:
            img = e_vec((wx + 1, 0)) - e_vec((1, 0))
        out = out + c * img
    return out


def v_membership(x: PicVec) -> bool:
    """Whether the Z[q]-weighted sum of the e indices vanishes."""
    sx, sy = Q_ZERO, Q_ZERO
    for key, c in x.terms.items():
        if key[0] != "e":
            raise ValueError("V membership applies to e terms, got %r"
                             % (key[0],))
        wx, wy = _e_key_vector(key)
        sx = sx + c * wx
        sy = sy + c * wy
    return not sx and not sy


def wedge_form(x: PicVec, y: PicVec) -> QPoly:
    """Pull-back of the wedge product: e_u wedge e_w = u ^ w, bilinear."""
    total = Q_ZERO
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            if k1[0] != "e" or k2[0] != "e":
                raise ValueError("wedge form applies to e terms")
            total = total + c1 * c2 * wedge(_e_key_vector(k1),
                                            _e_key_vector(k2))
    return total


def random_v_vector(rng: random.Random, size: int = 3) -> PicVec:
    """Random nonzero member of V with small integer data."""
    while True:
        out = ZERO_VEC
        for _ in range(rng.randint(1, size)):
            c = rng.choice((-2, -1, 1, 2))
            if rng.random() < 0.5:
                u = (rng.randint(-3, 3), rng.randint(-3, 3))
                w = (rng.randint(-3, 3), rng.randint(-3, 3))
                s = vec_add(u, w)
                if u == (0, 0) or w == (0, 0) or s == (0, 0):
                    continue
                out = out + c * (e_vec(u) + e_vec(w) - e_vec(s))
            else:
                k = rng.randint(2, 4)
                a = (rng.randint(-2, 2), rng.randint(-2, 2))
                if a == (0, 0):
                    continue
                a = primitive(a)
                ka = (k * a[0], k * a[1])
                out = out + c * (k * e_vec(a) - e_vec(ka))
        if not out.is_zero():
            return out


# ---------------------------------------------------------------------------
# word action

_I_MAT = GEN_MATS["I"]
_C_MAT = GEN_MATS["C"]


def _apply_letter(x: PicVec, sym: str, sign: int) -> PicVec:
    if sym == "C":
        return gamma_action(x, _C_MAT if sign > 0 else mat_inv(_C_MAT))
    if sym == "I":
        return gamma_action(x, _I_MAT if sign > 0 else mat_inv(_I_MAT))
    if sym == "P":
        # P = I^-1 (I P); the composite I P is the canonical mutation
        if sign > 0:
            return gamma_action(mu_Wq_action(x), mat_inv(_I_MAT))
        return mu_Wq_inverse(gamma_action(x, _I_MAT))
    raise ValueError("unsupported letter %r in the lattice action" % (sym,))


class PicOperator:
    """Word in P, C, I acting on W[q] vectors, rightmost letter first."""

    __slots__ = ("word",)

    def __init__(self, word):
        object.__setattr__(self, "word", tuple(word))

    def __setattr__(self, *a):
        raise AttributeError("PicOperator is immutable")

    def __call__(self, x: PicVec) -> PicVec:
        for sym, exp in reversed(self.word):
            sign = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                x = _apply_letter(x, sym, sign)
        return x

    def __repr__(self):
        from .words import format_word
        return "PicOperator(%s)" % format_word(self.word)


def word_operator(word) -> PicOperator:
    return PicOperator(word)


def word_acts_as_identity(word, nvectors: int = 20, seed: int = 0) -> dict:
    """Test a word on random V vectors; identity is judged at q = 1 and
    the generic-q outcome is reported alongside."""
    op = word_operator(word)
    rng = random.Random(seed)
    exact = True
    at_one = True
    witness = None
    for i in range(nvectors):
        x = random_v_vector(rng)
        y = op(x)
        if y != x:
            exact = False
        if y.at_one() != x.at_one():
            at_one = False
            if witness is None:
                witness = {"vector": x.to_json(), "image": y.to_json()}
        if not v_membership(y):
            raise AssertionError("image left the V subspace")
    return {
        "identity": at_one,
        "evidence": {
            "vectors": nvectors,
            "identity_at_q1": at_one,
            "identity_in_Zq": exact,
            **({"witness": witness} if witness else {}),
        },
    }


def cross_basis_report(v: Vec = (1, 0), samples: int = 30,
                       seed: int = 0) -> dict:
    """Compare the three mutation pictures on p symbols.

    For sampled lattice vectors w the report checks whether the W[q]
    action at q = 1 (read through e_w <-> p_w) and the b/e rule list
    (through the p-basis expansion) give the p-rule value.  Sign or
    orientation discrepancies are recorded with witnesses; nothing is
    patched.
    """
    if tuple(v) != (1, 0):
        raise ValueError("the W[q] rules are stated at v = (1,0)")
    rng = random.Random(seed)
    entries = []
    mismatches = 0
    seen = set()
    while len(entries) < samples:
        w = (rng.randint(-4, 4), rng.randint(-4, 4))
        if w == (0, 0) or w in seen:
            continue
        seen.add(w)
        p_rule = mu_p_action(w, v)

        wq = mu_Wq_action(e_vec(w)).at_one()
        wq_as_p = ZERO_VEC
        for key, c in wq.terms.items():
            wq_as_p = wq_as_p + c * p_vec(_e_key_vector(key))
        wq_agrees = wq_as_p == p_rule

        be = mu_be_action(p_expand(w), v)
        p_expanded = ZERO_VEC
        for key, c in p_rule.terms.items():
            p_expanded = p_expanded + c * p_expand(key[1])
        be_agrees = be == p_expanded

        entry = {"w": list(w),
                 "wq_matches_p_rule": wq_agrees,
                 "be_matches_p_rule": be_agrees}
        if not (wq_agrees and be_agrees):
            mismatches += 1
            entry["witness"] = {
                "p_rule": p_rule.to_json(),
                "wq_at_q1_as_p": wq_as_p.to_json(),
                "be_of_p_expansion": be.to_json(),
                "p_rule_expanded": p_expanded.to_json(),
            }
        entries.append(entry)
    return {
        "vector": list(v),
        "samples": entries,
        "mismatches": mismatches,
        "conventions": {
            "mu": "I o P, acting as (x - min(0, y), y) on indices",
            "wq_y_negative_coefficient": "-q*y; the +q*y variant breaks "
            "exact wedge preservation and V-invariance",
            "e_w_means": "e_w^1, with e at k*alpha read as level k",
        },
        "note": "discrepancies are reported with witnesses, not patched",
    }


# ---------------------------------------------------------------------------
# cluster mutation

def cluster_mutation(indices, bmat: dict, i):
    """Seed mutation at index i.

    indices is a finite list of labels, bmat an antisymmetric integer
    matrix as a dict over index pairs (missing entries are zero).  Returns
    the basis substitution {k: {label: coeff}} and the mutated matrix.
    """
    indices = list(indices)
    if i not in indices:
        raise ValueError("mutation index %r is not in the seed" % (i,))

    def b(j, k):
        return int(bmat.get((j, k), 0))

    for j in indices:
        for k in indices:
            if b(j, k) != -b(k, j):
                raise ValueError("matrix is not antisymmetric at %r"
                                 % ((j, k),))
    basis_map = {}
    for k in indices:
        if k == i:
            basis_map[k] = {i: -1}
        else:
            img = {k: 1}
            c = max(b(i, k), 0)
            if c:
                img[i] = c
            basis_map[k] = img
    mutated = {}
    for j in indices:
        for k in indices:
            if j == k:
                continue
            if i in (j, k):
                val = -b(j, k)
            else:
                val = b(j, k) + (abs(b(j, i)) * b(i, k)
                                 + b(j, i) * abs(b(i, k))) // 2
            if val:
                mutated[(j, k)] = val
    return basis_map, mutated
