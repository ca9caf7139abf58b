"""Intersection counting and Monte Carlo estimators with exact targets.

Every estimator samples group elements or coefficients as extendable digit
streams, computes each per-sample count by exact modular arithmetic
(decisions are certified, never floating point), and compares the sample
mean against an exact rational target. Samples whose certification hits
the precision cap are excluded and tallied; their fraction is reported.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    CertificationCapExceeded,
    IdenticallyZeroAtPrecision,
    InsufficientPrecision,
)
from .proj import ball_volume, volume_proj_space
from .roots import (
    EXACT,
    adaptive_count,
    count_roots_p1,
    count_roots_zp,
    power_coeffs_from_mahler,
)
from .sample import MAHLER, MONOMIAL, HaarMatrix, RandomPolyModel, Stream, sample_poly
from .veronese import floor_log, mahler_curve_volume
from .zp import _int_det, vp_int


@dataclass(frozen=True)
class LinearSubspace:
    """A linear subvariety of P^n given by integer equations (rows)."""

    ambient: int
    equations: tuple

    def __post_init__(self):
        eqs = []
        for row in self.equations:
            row = tuple(int(x) for x in row)
            if len(row) != self.ambient + 1:
                raise ValueError("equation length must be ambient + 1")
            g = math.gcd(*[abs(x) for x in row if x] or [1])
            if g == 0:
                raise ValueError("zero equation row")
            eqs.append(tuple(x // g for x in row))
        object.__setattr__(self, "equations", tuple(eqs))

    @property
    def codim(self) -> int:
        return len(self.equations)

    @property
    def dim(self) -> int:
        return self.ambient - self.codim

    def check_reduced(self, p: int):
        """Equations must stay independent over F_p (unit elementary divisors)."""
        rows = [list(r) for r in self.equations]
        rank = 0
        cols = self.ambient + 1
        mat = [[x % p for x in row] for row in rows]
        for c in range(cols):
            piv = next((r for r in range(rank, len(mat)) if mat[r][c] % p), None)
            if piv is None:
                continue
            mat[rank], mat[piv] = mat[piv], mat[rank]
            inv = pow(mat[rank][c], -1, p)
            for r in range(len(mat)):
                if r != rank and mat[r][c]:
                    f = mat[r][c] * inv % p
                    mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[rank])]
            rank += 1
        if rank != self.codim:
            raise ValueError(f"equations drop rank mod {p}")

    def integer_point(self):
        """A primitive integer point on the subspace (first kernel vector)."""
        rows = [[Fraction(x) for x in r] for r in self.equations]
        cols = self.ambient + 1
        # reduced row echelon over Q
        pivots = []
        r = 0
        for c in range(cols):
            piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            rows[r] = [x / rows[r][c] for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        free = next(c for c in range(cols) if c not in pivots)
        vec = [Fraction(0)] * cols
        vec[free] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][free]
        lcm = math.lcm(*[x.denominator for x in vec])
        ints = [int(x * lcm) for x in vec]
        g = math.gcd(*[abs(x) for x in ints if x])
        return tuple(x // g for x in ints)


@dataclass
class IntersectionResult:
    finite: bool
    point: tuple | None
    transversal: bool


def intersect_linear(subspaces, p: int) -> IntersectionResult:
    """Intersection of linear subspaces of total codimension n in P^n.

    Exact integer equations: the stacked n x (n+1) system has kernel spanned
    by its signed maximal minors. A unit minor means the intersection is
    transversal mod p; all minors zero means a positive-dimensional
    intersection.
    """
    n = subspaces[0].ambient
    if sum(s.codim for s in subspaces) != n:
        raise ValueError("codimensions must sum to the ambient dimension")
    rows = [list(r) for s in subspaces for r in s.equations]
    minors = _signed_maximal_minors(rows)
    if all(x == 0 for x in minors):
        return IntersectionResult(False, None, False)
    transversal = any(x % p != 0 for x in minors)  # unit maximal minor
    g = math.gcd(*[abs(x) for x in minors if x])
    point = tuple(x // g for x in minors)
    return IntersectionResult(True, point, transversal)


def _signed_maximal_minors(rows):
    cols = len(rows[0])
    out = []
    for j in range(cols):
        sub = [[row[c] for c in range(cols) if c != j] for row in rows]
        out.append((-1) ** j * _int_det(sub))
    return out


# -- Monte Carlo machinery -----------------------------------------------------


@dataclass
class McConfig:
    samples: int = 20_000
    seed: int = 0
    workers: int = 1
    matrix_digits: int = 12
    digit_cap: int = 64


@dataclass
class McReport:
    name: str
    n_samples: int
    mean: float
    stderr: float
    target: Fraction
    seed: int
    excluded: int
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.stderr == 0:
            return self.mean == float(self.target)
        return abs(self.mean - float(self.target)) <= 4 * self.stderr

    @property
    def excluded_fraction(self) -> float:
        total = self.n_samples + self.excluded
        return self.excluded / total if total else 0.0

    def as_report_dict(self, experiment: str) -> dict:
        return {
            "experiment": experiment,
            "params": {k: _plain(v) for k, v in self.params.items()},
            "n_samples": self.n_samples,
            "excluded": self.excluded,
            "mean": f"{self.mean:.12g}",
            "stderr": f"{self.stderr:.12g}",
            "target_num": self.target.numerator,
            "target_den": self.target.denominator,
            "pass": self.passed,
        }


def _plain(v):
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator}
    return v


def _pooled(name, values, target, cfg, excluded, params) -> McReport:
    n = len(values)
    mean = statistics.fmean(values) if values else float("nan")
    stderr = statistics.stdev(values) / math.sqrt(n) if n > 1 else 0.0
    return McReport(
        name=name,
        n_samples=n,
        mean=mean,
        stderr=stderr,
        target=Fraction(target),
        seed=cfg.seed,
        excluded=excluded,
        params=params,
    )


def _sample_streams(cfg: McConfig):
    base = Stream(cfg.seed)
    per = [cfg.samples // cfg.workers] * cfg.workers
    for i in range(cfg.samples % cfg.workers):
        per[i] += 1
    for w in range(cfg.workers):
        worker = base.child("worker", w)
        for i in range(per[w]):
            yield worker.child("sample", i)


def _run_estimator(name, one_sample, target, cfg, params) -> McReport:
    values = []
    excluded = 0
    for stream in _sample_streams(cfg):
        v = one_sample(stream)
        if v is None:
            excluded += 1
        else:
            values.append(v)
    return _pooled(name, values, target, cfg, excluded, params)


# -- concrete estimators --------------------------------------------------------


def _matvec_mod(rows, vec, q):
    return [sum(r * v for r, v in zip(row, vec)) % q for row in rows]


def _normalize_mod(vec, p, digits):
    """Divide out the p-content of residues known mod p^digits."""
    vals = [vp_int(x, p) for x in vec if x]
    if not vals:
        return None
    v = int(min(vals))
    if v == 0:
        return vec, digits
    q = p ** (digits - v)
    return [x // p**v % q for x in vec], digits - v


def _same_class(u, c, p, level):
    """Projective ball membership: all 2x2 minors vanish mod p^level."""
    pl = p**level
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            if (u[i] * c[j] - u[j] * c[i]) % pl:
                return False
    return True


def mc_linear_lemma(
    p: int,
    x: LinearSubspace,
    y: LinearSubspace,
    h: LinearSubspace | None,
    ball_x: int,
    ball_y: int,
    cfg: McConfig | None = None,
    center_x=None,
    center_y=None,
) -> McReport:
    """Average #(g_x U_x  ∩  g_y U_y  ∩  H) over independent Haar pairs.

    U_x is the relatively open ball of radius p^-ball_x around center_x
    inside X (the whole subspace when ball_x = 0); the exact target is the
    product of the two relative ball volumes.
    """
    cfg = cfg or McConfig()
    n = x.ambient
    h_codim = h.codim if h is not None else 0
    if x.codim + y.codim + h_codim != n:
        raise ValueError("codimensions must sum to n")
    for s in (x, y) + ((h,) if h is not None else ()):
        s.check_reduced(p)
    cx = tuple(center_x) if center_x is not None else x.integer_point()
    cy = tuple(center_y) if center_y is not None else y.integer_point()
    target = _relative_ball(p, ball_x, x.dim) * _relative_ball(p, ball_y, y.dim)

    h_rows = [list(r) for r in h.equations] if h is not None else []

    def one_sample(stream):
        gx = HaarMatrix(stream.child("gx"), p, n + 1)
        gy = HaarMatrix(stream.child("gy"), p, n + 1)
        digits = cfg.matrix_digits
        while digits <= cfg.digit_cap:
            q = p**digits
            gx_inv = [gx.inverse_row(i, digits) for i in range(n + 1)]
            gy_inv = [gy.inverse_row(i, digits) for i in range(n + 1)]
            rows = [
                _matvec_mod(list(zip(*gx_inv)), e, q) for e in x.equations
            ]
            rows += [
                _matvec_mod(list(zip(*gy_inv)), e, q) for e in y.equations
            ]
            rows += h_rows
            minors = [m % q for m in _signed_maximal_minors(rows)]
            norm = _normalize_mod(minors, p, digits)
            if norm is None:
                digits *= 2
                continue
            z, zdigits = norm
            if zdigits < max(ball_x, ball_y) + 1:
                digits *= 2
                continue
            ux = _matvec_mod(gx_inv, z, p**zdigits)
            uy = _matvec_mod(gy_inv, z, p**zdigits)
            ux = _normalize_mod(ux, p, zdigits)
            uy = _normalize_mod(uy, p, zdigits)
            if ux is None or uy is None:
                digits *= 2
                continue
            member_x = _same_class(ux[0], cx, p, ball_x) if ball_x else True
            member_y = _same_class(uy[0], cy, p, ball_y) if ball_y else True
            return 1.0 if (member_x and member_y) else 0.0
        return None

    return _run_estimator(
        "linear-lemma",
        one_sample,
        target,
        cfg,
        {
            "p": p,
            "ball_x": ball_x,
            "ball_y": ball_y,
            "target": target,
            "seed": cfg.seed,
        },
    )


def _relative_ball(p: int, level: int, dim: int) -> Fraction:
    return ball_volume(p, dim, level) / volume_proj_space(p, dim)


CURVE_STANDARD = "veronese"
CURVE_LINE = "line"
CURVE_MAHLER = "mahler"


def curve_target(p: int, curve: str, d: int) -> Fraction:
    """vol(curve) / vol(P^1), computed from the arc-length module."""
    if curve in (CURVE_STANDARD, CURVE_LINE):
        return Fraction(1)
    if curve == CURVE_MAHLER:
        return mahler_curve_volume(p, d) / volume_proj_space(p, 1)
    raise ValueError(f"unknown curve {curve!r}")


def mc_igf_curve(
    p: int, curve: str, d: int, cfg: McConfig | None = None
) -> McReport:
    """Average number of hyperplane-section points of an embedded curve.

    The hyperplane is g L_0 with L_0 = {y_0 = 0} and g Haar; its pullback
    through the embedding is a degree-d binary form (monomial curve) or a
    binomial-basis polynomial (Mahler curve), whose roots are counted
    exactly. Per-sample counts are capped by d for every exact sample.
    """
    cfg = cfg or McConfig()
    if curve == CURVE_LINE:
        d = 1
    target = curve_target(p, curve, d)
    size = d + 1

    def one_sample(stream):
        g = HaarMatrix(stream.child("g"), p, size)
        digits = cfg.matrix_digits
        while digits <= cfg.digit_cap:
            coeffs = g.inverse_row(0, digits)
            try:
                if curve == CURVE_MAHLER:
                    poly = power_coeffs_from_mahler(coeffs, d)
                    rep = count_roots_zp(p, poly, precision=digits)
                else:
                    rep = count_roots_p1(p, coeffs, precision=digits)
            except IdenticallyZeroAtPrecision:
                rep = None
            if rep is not None and rep.status == EXACT:
                if rep.count > d:
                    raise AssertionError("count exceeded the degree bound")
                return float(rep.count)
            digits *= 2
        return None

    return _run_estimator(
        "curve",
        one_sample,
        target,
        cfg,
        {"p": p, "curve": curve, "degree": d, "target": target, "seed": cfg.seed},
    )


REGIONS = ("p1", "zp", "qp")  # plus "annulus:m"


def expected_zeros_target(kind: str, region: str, p: int, d: int) -> Fraction:
    """Closed-form expected root counts for the two coefficient models."""
    vol_p1 = volume_proj_space(p, 1)
    dnorm = Fraction(p) ** (-vp_int(d, p))
    if kind == MONOMIAL:
        # zero density is uniform on P^1 with unit total mass
        if region == "p1" or region == "qp":
            return Fraction(1)
        if region == "zp":
            return 1 / vol_p1
        if region.startswith("annulus"):
            m = int(region.split(":")[1])
            return Fraction(p**m - p ** (m - 1), p ** (2 * m)) / vol_p1
    elif kind == MAHLER:
        if region == "zp":
            return Fraction(p) ** floor_log(p, d) / vol_p1
        if region.startswith("annulus"):
            m = int(region.split(":")[1])
            return dnorm / p**m * (1 - Fraction(1, p)) / (1 + Fraction(1, p))
        if region in ("qp", "p1"):
            return (Fraction(p) ** floor_log(p, d) + dnorm / p) / vol_p1
    raise ValueError(f"no target for {kind}/{region}")


def mc_expected_zeros(
    model: RandomPolyModel, region: str, cfg: McConfig | None = None
) -> McReport:
    """Mean number of zeros of model-sampled polynomials in a region."""
    cfg = cfg or McConfig()
    target = expected_zeros_target(model.kind, region, model.prime, model.degree)

    def one_sample(stream):
        poly = sample_poly(model, stream)
        try:
            rep = adaptive_count(poly, region, cap=cfg.digit_cap)
        except CertificationCapExceeded:
            return None
        return float(rep.count)

    return _run_estimator(
        "expected-zeros",
        one_sample,
        target,
        cfg,
        {
            "p": model.prime,
            "model": model.kind,
            "degree": model.degree,
            "region": region,
            "target": target,
            "seed": cfg.seed,
        },
    )


@dataclass
class DensityReport:
    bins: list
    total_roots: int
    chi2: float
    p_value: float
    n_samples: int
    excluded: int
    seed: int

    def rejects_uniformity(self, significance: float = 1e-3) -> bool:
        return self.p_value < significance


def density_uniformity_test(
    model: RandomPolyModel, cfg: McConfig | None = None
) -> DensityReport:
    """Histogram root locations over the p+1 residue classes of P^1(F_p).

    The class of a root is its reduction mod p: [a : 1] for a chart root
    near a, [1 : 0] for roots at the infinity chart (those have |t| > 1).
    """
    cfg = cfg or McConfig()
    p = model.prime
    bins = [0] * (p + 1)
    excluded = 0
    n = 0
    for stream in _sample_streams(cfg):
        poly = sample_poly(model, stream)
        try:
            rep = adaptive_count(poly, "p1", cap=cfg.digit_cap)
        except CertificationCapExceeded:
            excluded += 1
            continue
        n += 1
        for w in rep.witnesses:
            if w.chart == "zp":
                bins[w.center % p] += 1
            else:
                bins[p] += 1
    from scipy.stats import chisquare

    total = sum(bins)
    if total == 0:
        raise InsufficientPrecision("no roots observed")
    chi2, p_value = chisquare(bins)
    return DensityReport(
        bins=bins,
        total_roots=total,
        chi2=float(chi2),
        p_value=float(p_value),
        n_samples=n,
        excluded=excluded,
        seed=cfg.seed,
    )


def transform_form(form, mat):
    """Coefficients of F(a x0 + b x1, c x0 + d x1) for an integer 2x2 matrix.

    Used to exercise the change-of-variables invariance of the monomial
    model: the root-count law of F and F o g agree for g in GL_2(Z_p).
    """
    (a, b), (c, d) = mat
    deg = len(form) - 1
    out = [0] * (deg + 1)
    for k, coeff in enumerate(form):
        # (a x0 + b x1)^(deg-k) (c x0 + d x1)^k
        poly = [coeff]
        for _ in range(deg - k):
            poly = _mul_linear(poly, a, b)
        for _ in range(k):
            poly = _mul_linear(poly, c, d)
        for i, v in enumerate(poly):
            out[i] += v
    return out


def _mul_linear(poly, a, b):
    out = [0] * (len(poly) + 1)
    for i, v in enumerate(poly):
        out[i] += v * a
        out[i + 1] += v * b
    return out
