"""Monomial and binomial-basis curve embeddings and their metric data.

The standard degree-d embedding sends [x] to all degree-d monomials of x
(lexicographically decreasing exponents, so [x0:x1] maps to
[x0^d : x0^{d-1}x1 : ... : x1^d]). The binomial-basis ("Mahler") embeddings
send t to (1, C(t,1), ..., C(t,d)) on Z_p and, rescaled by C(t,d)^{-1}, map
each annulus |t| = p^m onto the unit sphere. Their derivative norms are
constant on those domains, which turns arc length into a single p-power.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainViolation, IsometryViolation, NonConstantJacobian
from .proj import ProjPoint, proj_distance
from .sample import Stream
from .zp import PadicVector, vp_fraction, vp_int, wedge_norm

STANDARD = "standard"
MAHLER_AFFINE = "mahler-affine"
MAHLER_EXTENDED = "mahler-extended"


def floor_log(p: int, d: int) -> int:
    """Largest e with p^e <= d, by integer arithmetic."""
    if d < 1:
        raise ValueError("d must be >= 1")
    e = 0
    q = p
    while q <= d:
        e += 1
        q *= p
    return e


def monomial_exponents(n: int, d: int):
    """Degree-d exponent tuples on n+1 variables, lexicographically decreasing."""
    exps = [
        e
        for e in itertools.product(range(d + 1), repeat=n + 1)
        if sum(e) == d
    ]
    return sorted(exps, reverse=True)


@dataclass(frozen=True)
class VeroneseMap:
    kind: str
    n: int  # source projective dimension (1 for the binomial-basis kinds)
    d: int

    def __post_init__(self):
        if self.kind not in (STANDARD, MAHLER_AFFINE, MAHLER_EXTENDED):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind != STANDARD and self.n != 1:
            raise ValueError("binomial-basis maps are univariate")

    @property
    def target_dim(self) -> int:
        if self.kind == STANDARD:
            return math.comb(self.n + self.d, self.d) - 1
        return self.d


def binomial_rational(t: Fraction, k: int) -> Fraction:
    """C(t, k) for rational t: t(t-1)...(t-k+1)/k!."""
    t = Fraction(t)
    num = Fraction(1)
    for j in range(k):
        num *= t - j
    return num / math.factorial(k)


def eval_standard(vmap: VeroneseMap, point: ProjPoint) -> ProjPoint:
    """Image of a projective point under the monomial embedding."""
    coords = point.coords
    out = []
    for exps in monomial_exponents(vmap.n, vmap.d):
        term = None
        for x, e in zip(coords.entries, exps):
            for _ in range(e):
                term = x if term is None else term * x
        if term is None:  # d = 0 cannot happen; guard for clean errors
            raise ValueError("degree must be positive")
        out.append(term)
    return ProjPoint(PadicVector(out))


def eval_mahler_affine(d: int, t, p: int | None = None):
    """(1, C(t,1), ..., C(t,d)) at an integer or p-integral rational t."""
    t = Fraction(t)
    if p is not None and vp_fraction(t, p) < 0:
        raise DomainViolation("affine binomial map needs |t| <= 1")
    return [binomial_rational(t, k) for k in range(d + 1)]


def eval_mahler_extended(d: int, t, p: int):
    """(C(t,d)^{-1}, C(t,1) C(t,d)^{-1}, ..., 1) for |t| > 1."""
    t = Fraction(t)
    if vp_fraction(t, p) >= 0:
        raise DomainViolation("extended binomial map needs |t| > 1")
    lead = binomial_rational(t, d)
    return [binomial_rational(t, k) / lead for k in range(d + 1)]


def eval_veronese(vmap: VeroneseMap, point, p: int | None = None):
    if vmap.kind == STANDARD:
        return eval_standard(vmap, point)
    if vmap.kind == MAHLER_AFFINE:
        return eval_mahler_affine(vmap.d, point, p)
    return eval_mahler_extended(vmap.d, point, p)


def _binomial_derivative(t: Fraction, k: int) -> Fraction:
    """d/dt C(t,k) = sum_j (1/k!) prod_{i != j} (t - i), exactly."""
    t = Fraction(t)
    total = Fraction(0)
    for j in range(k):
        prod = Fraction(1)
        for i in range(k):
            if i != j:
                prod *= t - i
        total += prod
    return total / math.factorial(k)


@dataclass(frozen=True)
class JacobianNormReport:
    point: Fraction
    value: Fraction
    certificate: int  # index of a maximal derivative entry


def jacobian_norm_report(p: int, d: int, a) -> JacobianNormReport:
    """Derivative norm of the affine binomial map with its witnessing entry."""
    a = Fraction(a)
    if vp_fraction(a, p) < 0:
        raise DomainViolation("a must lie in Z_p")
    best = None
    best_k = 0
    for k in range(1, d + 1):
        der = _binomial_derivative(a, k)
        if der == 0:
            continue
        norm = Fraction(p) ** (-vp_fraction(der, p))
        if best is None or norm > best:
            best, best_k = norm, k
    return JacobianNormReport(a, best, best_k)


def mahler_jacobian_norm(p: int, d: int, a) -> Fraction:
    """|J| of the affine binomial map at a in Z_p: always p^floor(log_p d).

    Computed by exact evaluation of the derivative vector and checked
    against the closed form.
    """
    value = jacobian_norm_report(p, d, a).value
    expected = Fraction(p) ** floor_log(p, d)
    assert value == expected, (value, expected)
    return value


def mahler_extended_jacobian_norm(p: int, d: int, t) -> Fraction:
    """|J| of the extended map at |t| = p^m: equals |d| p^{-2m}.

    The j-th component derivative is (d!/j!) prod_{r=j}^{d-1} (t-r)^{-1}
    times sum_{r=j}^{d-1} (t-r)^{-1}; the last component is constant.
    """
    t = Fraction(t)
    m = -vp_fraction(t, p)
    if m < 1:
        raise DomainViolation("need |t| > 1")
    norms = []
    for j in range(d):
        prod = Fraction(math.factorial(d), math.factorial(j))
        total = Fraction(0)
        for r in range(j, d):
            prod /= t - r
            total += 1 / (t - r)
        der = prod * total
        if der != 0:
            norms.append(Fraction(p) ** (-vp_fraction(der, p)))
    value = max(norms)
    expected = Fraction(p) ** (-vp_int(d, p) - 2 * m)
    assert value == expected, (value, expected)
    return value


def arc_length(jacobian_norms, vol_domain: Fraction) -> Fraction:
    """Volume of an embedded curve with constant derivative norm.

    ``jacobian_norms`` is the collection of sampled |J| values on the
    domain; they must agree, and the image volume is |J| * vol(domain).
    """
    norms = set(jacobian_norms)
    if len(norms) != 1:
        raise NonConstantJacobian(f"sampled norms disagree: {sorted(norms)}")
    return norms.pop() * vol_domain


def mahler_curve_volume(p: int, d: int) -> Fraction:
    """vol of the affine binomial image of Z_p: p^floor(log_p d)."""
    sample_points = list(range(8)) + [p**2, 3 * p + 1]
    return arc_length(
        [mahler_jacobian_norm(p, d, a) for a in sample_points], Fraction(1)
    )


def mahler_annulus_volume(p: int, d: int, m: int) -> Fraction:
    """vol of the extended-map image of |t| = p^m: (p^m - p^{m-1}) |d| p^{-2m}."""
    units = [u for u in range(1, 2 * p + 2) if u % p != 0][:3]
    norms = [
        mahler_extended_jacobian_norm(p, d, Fraction(u, p**m)) for u in units
    ]
    return arc_length(norms, Fraction(p**m - p ** (m - 1)))


def mahler_outside_volume(p: int, d: int) -> Fraction:
    """vol of the image of Q_p minus Z_p: the annulus volumes sum to |d|/p."""
    return Fraction(p) ** (-vp_int(d, p)) / p


# -- isometry verification ----------------------------------------------------


def _random_sphere_point(stream: Stream, p: int, dim: int, digits: int = 8) -> list:
    for attempt in itertools.count():
        coords = [
            stream.child("coord", attempt, i).digits(p).residue(digits)
            for i in range(dim)
        ]
        if any(c % p != 0 for c in coords):
            return coords


def isometry_check(
    vmap: VeroneseMap, p: int, pairs: int, stream: Stream | None = None
) -> dict:
    """Sample point pairs and demand exact distance equality under the map.

    For the standard embedding the projective distances must match; for the
    affine binomial map the distance of sphere images equals the sup-norm
    distance of the argument vectors. Raises IsometryViolation with the
    offending pair; returns a summary dict when all pairs pass.
    """
    stream = stream or Stream(0)
    checked = 0
    for i in range(pairs):
        pair_stream = stream.child("pair", i)
        if vmap.kind == STANDARD:
            xv = _random_sphere_point(pair_stream.child("x"), p, vmap.n + 1)
            yv = _random_sphere_point(pair_stream.child("y"), p, vmap.n + 1)
            x = ProjPoint.exact(p, xv)
            y = ProjPoint.exact(p, yv)
            lhs = proj_distance(
                eval_standard(vmap, x), eval_standard(vmap, y)
            )
            rhs = proj_distance(x, y)
        elif vmap.kind == MAHLER_AFFINE:
            s = pair_stream.child("s").digits(p).residue(8)
            t = pair_stream.child("t").digits(p).residue(8)
            fs = eval_mahler_affine(vmap.d, s)
            ft = eval_mahler_affine(vmap.d, t)
            diff = [a - b for a, b in zip(fs, ft)]
            rhs = max(
                (Fraction(p) ** (-vp_fraction(c, p)) for c in diff if c != 0),
                default=Fraction(0),
            )
            lhs = wedge_norm(
                PadicVector.exact(p, fs), PadicVector.exact(p, ft)
            )
        else:
            raise ValueError("isometry check supports standard and mahler-affine")
        if lhs != rhs:
            raise IsometryViolation(
                f"pair {i}: image distance {lhs} != source distance {rhs}",
                witness=(i, lhs, rhs),
            )
        checked += 1
    return {"pairs": checked, "failures": 0}
