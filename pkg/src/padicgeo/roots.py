"""Exact counting of roots of univariate p-adic polynomials.

Roots in Z_p are located by the classical digit-by-digit descent: reduce
mod p, certify simple residue roots (a unique lift exists whenever the
reduced derivative is a unit), and recurse with t = a + p*s into multiple
residue roots after dividing out content. Binary forms are counted on P^1
through its two charts, and annulus counts use the reversed polynomial.

Counts are of DISTINCT roots. Exact-integer inputs are squarefree-reduced
first; finite-precision inputs carry their uncertainty through the
recursion and report Undetermined rather than guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CertificationCapExceeded, IdenticallyZeroAtPrecision
from .zp import vp_int

INF = math.inf

EXACT = "exact"
LOWER_BOUND = "lower-bound"
UNDETERMINED = "undetermined"

DEPTH_BUDGET_FACTOR = 4  # recursion depth budget is 4*(d+1)
ADAPTIVE_PRECISION_CAP = 64


@dataclass(frozen=True)
class Witness:
    """A ball center + p^level Z_p certified to contain exactly one root.

    ``chart`` is "zp" for affine roots t, "inf" for the chart at infinity of
    P^1 (the ball is then in the s = x_1/x_0 coordinate).
    """

    center: int
    level: int
    chart: str = "zp"

    def as_projective(self):
        if self.chart == "zp":
            return (self.center, 1)
        return (1, self.center)


@dataclass
class RootReport:
    count: int
    status: str
    witnesses: list = field(default_factory=list)
    precision_consumed: int = 0
    unresolved_classes: int = 0

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def merged_with(self, other: "RootReport") -> "RootReport":
        status = EXACT
        if self.status != EXACT or other.status != EXACT:
            count = self.count + other.count
            status = UNDETERMINED if count == 0 else LOWER_BOUND
        return RootReport(
            count=self.count + other.count,
            status=status if status != EXACT else EXACT,
            witnesses=self.witnesses + other.witnesses,
            precision_consumed=max(self.precision_consumed, other.precision_consumed),
            unresolved_classes=self.unresolved_classes + other.unresolved_classes,
        )


# -- integer polynomial helpers ---------------------------------------------


def trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def poly_eval(coeffs, x, mod=None):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
        if mod:
            acc %= mod
    return acc


def poly_derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _poly_divmod(num, den):
    num = [Fraction(c) for c in num]
    den = [Fraction(c) for c in den]
    out = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    rem = num[:]
    for i in reversed(range(len(out))):
        f = rem[i + len(den) - 1] / den[-1]
        out[i] = f
        if f:
            for j, d in enumerate(den):
                rem[i + j] -= f * d
    while rem and rem[-1] == 0:
        rem.pop()
    return out, rem


def _poly_gcd(a, b):
    a = [Fraction(c) for c in trim(a)]
    b = [Fraction(c) for c in trim(b)]
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, trim(r)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def squarefree_part(coeffs):
    """f / gcd(f, f') with integer primitive output (exact coefficients)."""
    coeffs = trim(coeffs)
    if len(coeffs) <= 1:
        return coeffs
    g = _poly_gcd(coeffs, poly_derivative(coeffs))
    if len(g) <= 1:
        return coeffs
    q, r = _poly_divmod(coeffs, g)
    assert not r
    den_lcm = math.lcm(*[c.denominator for c in q])
    ints = [int(c * den_lcm) for c in q]
    gc = math.gcd(*[abs(c) for c in ints if c] or [1])
    return [c // gc for c in ints]


def substitute_digit(coeffs, a, p, shift=1, mod=None):
    """Coefficients of f(a + p^shift * s), optionally reduced mod ``mod``."""
    step = p**shift
    out = [0] * len(coeffs)
    # Horner in (a + q s): carry the polynomial in s while folding in coeffs
    for c in reversed(coeffs):
        prev = out[:]
        out[0] = prev[0] * a + c
        for k in range(1, len(out)):
            out[k] = prev[k] * a + prev[k - 1] * step
        if mod:
            out = [x % mod for x in out]
    return out


# -- the counting recursion --------------------------------------------------


class _Counter:
    def __init__(self, p, chart):
        self.p = p
        self.chart = chart
        self.count = 0
        self.witnesses = []
        self.unresolved = 0
        self.consumed = 0

    def run(self, coeffs, prec, depth, center, level):
        p = self.p
        if prec is INF:
            coeffs = trim(coeffs)
            vals = [vp_int(c, p) for c in coeffs]
        else:
            q = p ** int(prec)
            coeffs = [c % q for c in coeffs]
            vals = [vp_int(c, p) for c in coeffs]
        content = min(vals, default=INF)
        if content == INF or (prec is not INF and content >= prec):
            # vanishes identically as far as this precision can see
            if level == 0:
                raise IdenticallyZeroAtPrecision(
                    "polynomial is zero at its working precision"
                )
            self.unresolved += 1
            return
        content = int(content)
        if content:
            pc = p**content
            coeffs = [c // pc for c in coeffs]
            self.consumed = max(self.consumed, content + level)
            if prec is not INF:
                prec -= content
                if prec < 1:
                    self.unresolved += 1
                    return
        fbar = [c % p for c in coeffs]
        dbar = [i * c % p for i, c in enumerate(fbar)][1:]
        for a in range(p):
            if poly_eval(fbar, a, p) % p != 0:
                continue
            if poly_eval(dbar, a, p) % p != 0:
                self.count += 1
                self.witnesses.append(
                    Witness(center + p**level * a, level + 1, self.chart)
                )
            else:
                if depth <= 0:
                    self.unresolved += 1
                    continue
                child = substitute_digit(
                    coeffs, a, p, mod=None if prec is INF else p ** int(prec)
                )
                self.run(child, prec, depth - 1, center + p**level * a, level + 1)


def _count_in_region(p, coeffs, prec, center, level, chart="zp", depth=None):
    """Count distinct roots in center + p^level Z_p."""
    d = max(len(trim(coeffs)) - 1, 0)
    if depth is None:
        depth = DEPTH_BUDGET_FACTOR * (d + 1)
    counter = _Counter(p, chart)
    if level > 0:
        start = substitute_digit(
            coeffs, center, p, shift=level, mod=None if prec is INF else p ** int(prec)
        )
    else:
        start = list(coeffs)
    counter.run(start, prec, depth, center, level)
    status = EXACT
    if counter.unresolved:
        status = LOWER_BOUND if counter.count else UNDETERMINED
    return RootReport(
        count=counter.count,
        status=status,
        witnesses=counter.witnesses,
        precision_consumed=counter.consumed,
        unresolved_classes=counter.unresolved,
    )


def count_roots_zp(p, coeffs, precision=None) -> RootReport:
    """Distinct roots in Z_p. ``precision=None`` means exact integers."""
    coeffs = trim(coeffs)
    if precision is None:
        if not coeffs:
            raise IdenticallyZeroAtPrecision("the zero polynomial")
        coeffs = squarefree_part(coeffs)
        return _count_in_region(p, coeffs, INF, 0, 0)
    return _count_in_region(p, coeffs, precision, 0, 0)


def count_roots_p1(p, form, precision=None) -> RootReport:
    """Roots on P^1 of the binary form sum_k form[k] x0^(d-k) x1^k.

    The affine chart counts zeros [t:1] with t in Z_p; the chart at infinity
    counts zeros [1:s] with s in p Z_p. The charts partition P^1.
    """
    form = list(form)
    if all(c == 0 for c in form):
        raise IdenticallyZeroAtPrecision("the zero form")
    affine = list(reversed(form))  # F(t, 1) ascending in t
    at_inf = form  # F(1, s) ascending in s
    if precision is None:
        affine = squarefree_part(trim(affine)) if trim(affine) else []
        at_inf = squarefree_part(trim(at_inf)) if trim(at_inf) else []
        r1 = (
            _count_in_region(p, affine, INF, 0, 0)
            if affine
            else RootReport(0, EXACT)
        )
        r2 = (
            _count_in_region(p, at_inf, INF, 0, 1, chart="inf")
            if at_inf
            else RootReport(0, EXACT)
        )
    else:
        r1 = _count_in_region(p, affine, precision, 0, 0)
        r2 = _count_in_region(p, at_inf, precision, 0, 1, chart="inf")
    return r1.merged_with(r2)


def count_roots_annulus(p, coeffs, m, precision=None) -> RootReport:
    """Distinct roots x with |x| = p^m (m >= 1), via the reversed polynomial.

    x is a root with v(x) = -m exactly iff y = 1/x is a root of the reversed
    polynomial with v(y) = m, i.e. y = p^m * u with u a unit.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    coeffs = list(coeffs)
    if all(c == 0 for c in coeffs):
        raise IdenticallyZeroAtPrecision("the zero polynomial")
    rev = list(reversed(coeffs))
    if precision is None:
        rev = squarefree_part(trim(rev))
        prec = INF
    else:
        prec = precision
    total = RootReport(0, EXACT)
    for a in range(1, p):
        rep = _count_in_region(p, rev, prec, a * p**m, m + 1, chart="inf")
        total = total.merged_with(rep)
    return total


def count_roots_qp(p, coeffs, precision=None) -> RootReport:
    """Distinct roots in all of Q_p: Z_p roots plus roots with |x| > 1."""
    coeffs = list(coeffs)
    inside = count_roots_zp(p, coeffs, precision)
    rev = list(reversed(trim(coeffs) if precision is None else coeffs))
    if not trim(rev):
        return inside
    if precision is None:
        rev_sf = squarefree_part(trim(rev))
        outside = _count_in_region(p, rev_sf, INF, 0, 1, chart="inf")
        if poly_eval(rev_sf, 0) == 0:
            # y = 0 is not a reciprocal of any x in Q_p; exactly one witness
            # ball holds the root 0, drop it
            outside = RootReport(
                outside.count - 1,
                outside.status,
                [w for w in outside.witnesses if w.center % p ** w.level != 0],
                outside.precision_consumed,
                outside.unresolved_classes,
            )
    else:
        q = p ** int(precision)
        outside = _count_in_region(p, rev, precision, 0, 1, chart="inf")
        if rev[0] % q == 0:
            # the reversed constant term vanishes at precision: a root at
            # y = 0 cannot be told from a tiny nonzero root; stay undecided
            outside = RootReport(
                outside.count,
                LOWER_BOUND if outside.count else UNDETERMINED,
                outside.witnesses,
                outside.precision_consumed,
                outside.unresolved_classes + 1,
            )
        # otherwise 0 is certified not to be a root, and every witness ball
        # holds one genuine nonzero root already
    return inside.merged_with(outside)


def verify_witness(p, coeffs, witness, precision=None) -> bool:
    """Check the quantitative lifting inequality at a witness center.

    The ball center + p^level Z_p was certified through the local polynomial
    h(s) = f(center + p^(level-1) s) divided by its content: the criterion
    |h(0)| < |h'(0)|^2 with |h'(0)| = 1 guarantees a unique root with
    s in p Z_p, i.e. exactly one root of f in the witness ball.
    """
    local = substitute_digit(
        coeffs,
        witness.center,
        p,
        shift=witness.level - 1,
        mod=None if precision is None else p ** int(precision),
    )
    local = trim(local)
    vals = [vp_int(c, p) for c in local]
    content = min(vals)
    if content == INF:
        return False
    h = [c // p ** int(content) for c in local]
    v0 = vp_int(h[0], p)
    v1 = vp_int(poly_eval(poly_derivative(h), 0), p) if len(h) > 1 else INF
    return v0 >= 1 and v1 == 0


@dataclass(frozen=True)
class UnivariatePoly:
    """A univariate polynomial over Z_p, readable as a binary form on P^1.

    Coefficients ascend in t (f = sum coeffs[i] t^i). ``precision=None``
    means exact integers; otherwise all coefficients are residues at that
    shared absolute precision. The projective reading homogenizes to
    degree deg(coeffs): the zero [1:0] corresponds to a vanishing leading
    coefficient.
    """

    prime: int
    coeffs: tuple
    precision: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def count_zp(self) -> RootReport:
        return count_roots_zp(self.prime, list(self.coeffs), self.precision)

    def count_p1(self) -> RootReport:
        return count_roots_p1(self.prime, list(reversed(self.coeffs)), self.precision)

    def count_annulus(self, m: int) -> RootReport:
        return count_roots_annulus(self.prime, list(self.coeffs), m, self.precision)

    def count_qp(self) -> RootReport:
        return count_roots_qp(self.prime, list(self.coeffs), self.precision)


# -- adaptive counting over sampled models -----------------------------------


def mahler_power_basis(d: int):
    """Rows k = 0..d: integer coefficients of d! * C(t, k) in powers of t."""
    rows = []
    falling = [1]  # product_{j<k} (t - j), ascending coefficients
    for k in range(d + 1):
        scale = math.factorial(d) // math.factorial(k)
        rows.append([scale * c for c in falling] + [0] * (d - len(falling) + 1))
        falling = [
            (falling[j - 1] if j else 0) - k * falling[j]
            if j < len(falling)
            else falling[j - 1]
            for j in range(len(falling) + 1)
        ]
    return rows


def power_coeffs_from_mahler(zeta, d):
    """Integer power-basis coefficients of d! * sum_k zeta_k C(t,k)."""
    basis = mahler_power_basis(d)
    return [sum(z * basis[k][j] for k, z in enumerate(zeta)) for j in range(d + 1)]


def _region_count(p, model_kind, residues, region, precision):
    from .sample import MAHLER, MONOMIAL

    d = len(residues) - 1
    if model_kind == MONOMIAL:
        form = residues
        if region == "p1":
            return count_roots_p1(p, form, precision)
        affine = list(reversed(form))
        if region == "zp":
            return count_roots_zp(p, affine, precision)
        if region == "qp":
            return count_roots_qp(p, affine, precision)
        if region.startswith("annulus"):
            m = int(region.split(":")[1])
            return count_roots_annulus(p, affine, m, precision)
    elif model_kind == MAHLER:
        coeffs = power_coeffs_from_mahler(residues, d)
        if region == "zp":
            return count_roots_zp(p, coeffs, precision)
        if region == "qp":
            return count_roots_qp(p, coeffs, precision)
        if region == "p1":
            form = list(reversed(coeffs))
            return count_roots_p1(p, form, precision)
        if region.startswith("annulus"):
            m = int(region.split(":")[1])
            return count_roots_annulus(p, coeffs, m, precision)
    raise ValueError(f"unsupported model/region: {model_kind}/{region}")


def adaptive_count(poly, region="p1", cap=ADAPTIVE_PRECISION_CAP) -> RootReport:
    """Count roots of a sampled polynomial, extending precision until Exact.

    Doubles the coefficient precision up to ``cap`` digits; under the uniform
    models the event of never certifying has probability zero, and hitting
    the cap raises CertificationCapExceeded for the caller to record.
    """
    model = poly.model
    m = model.precision
    while True:
        report = None
        try:
            report = _region_count(
                model.prime, model.kind, poly.residues(m), region, m
            )
        except IdenticallyZeroAtPrecision:
            pass
        if report is not None and report.status == EXACT:
            return report
        if m >= cap:
            raise CertificationCapExceeded(
                f"no exact count at precision cap {cap} (region {region})"
            )
        m = min(2 * m, cap)
