"""Projective points over Q_p and over Z/p^m: metric, reduction, enumeration.

A point of P^n is held as a sphere-normalized representative (sup-norm
exactly 1). Its reduction mod p^m is put in canonical form by scaling the
first unit coordinate to 1, which makes residue-point equality a plain
tuple comparison.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, PrecisionTooLow
from .zp import PadicScalar, PadicVector, unit_inv_mod, wedge_norm

ENUMERATION_BUDGET = 10**7


class ProjPoint:
    """A point of P^n with a sphere-normalized coordinate representative."""

    __slots__ = ("coords", "p")

    def __init__(self, coords: PadicVector):
        n = coords.norm()
        if not n.exact or n.value == 0:
            raise ValueError("representative is zero at its precision")
        if n.value != 1:
            # scale by p^{-min valuation} onto the unit sphere
            v = min(e.valuation for e in coords)
            unit = PadicScalar.exact(coords.p, Fraction(coords.p) ** (-v))
            coords = coords.scale(unit)
        self.coords = coords
        self.p = coords.p

    @classmethod
    def exact(cls, p: int, values) -> "ProjPoint":
        return cls(PadicVector.exact(p, values))

    @classmethod
    def from_residues(cls, p: int, residues, abs_prec: int) -> "ProjPoint":
        return cls(PadicVector.from_residues(p, residues, abs_prec))

    @property
    def dim(self) -> int:
        return self.coords.dim - 1

    @property
    def abs_precision(self):
        return min(e.abs_precision for e in self.coords)

    def __repr__(self):
        return f"ProjPoint({list(self.coords.entries)})"

    def reduce_mod(self, m: int) -> "ResidueProjPoint":
        return reduce_mod(self, m)


def proj_distance(x: ProjPoint, y: ProjPoint) -> Fraction:
    """Quotient-metric distance: wedge norm of sphere representatives."""
    if x.p != y.p:
        raise ValueError("mixed primes")
    if x.dim != y.dim:
        raise ValueError("ambient dimensions differ")
    return wedge_norm(x.coords, y.coords)


@dataclass(frozen=True)
class ResidueProjPoint:
    """A point of P^n(Z/p^m) in canonical form (first unit coordinate = 1)."""

    p: int
    m: int
    coords: tuple

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("level m must be >= 1")
        if not any(c % self.p != 0 for c in self.coords):
            raise ValueError("no unit coordinate")

    @classmethod
    def canonical(cls, p: int, m: int, coords) -> "ResidueProjPoint":
        """Canonicalize arbitrary homogeneous residues mod p^m."""
        q = p**m
        coords = [c % q for c in coords]
        lead = next((i for i, c in enumerate(coords) if c % p != 0), None)
        if lead is None:
            raise ValueError("no unit coordinate")
        inv = unit_inv_mod(coords[lead], p, m)
        return cls(p, m, tuple(c * inv % q for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def reduce(self, m2: int) -> "ResidueProjPoint":
        """Truncate to a coarser level."""
        if m2 > self.m:
            raise PrecisionTooLow("cannot refine a residue point")
        return ResidueProjPoint.canonical(self.p, m2, self.coords)

    def to_json(self) -> str:
        return json.dumps(
            {"p": self.p, "m": self.m, "coords": list(self.coords)}, sort_keys=True
        )

    @classmethod
    def from_json(cls, text: str) -> "ResidueProjPoint":
        d = json.loads(text)
        return cls.canonical(d["p"], d["m"], d["coords"])


def reduce_mod(x: ProjPoint, m: int) -> ResidueProjPoint:
    """Reduction of x modulo p^m, in canonical form."""
    if m < 1:
        raise ValueError("level m must be >= 1")
    if x.abs_precision < m:
        raise PrecisionTooLow(f"point carries precision {x.abs_precision} < {m}")
    return ResidueProjPoint.canonical(x.p, m, [e.residue(m) for e in x.coords])


def proj_space_count(p: int, n: int, m: int) -> int:
    """#P^n(Z/p^m) = (p^{m(n+1)} - p^{(m-1)(n+1)}) / (p^m - p^{m-1})."""
    num = p ** (m * (n + 1)) - p ** ((m - 1) * (n + 1))
    den = p**m - p ** (m - 1)
    assert num % den == 0
    return num // den


def hopf_fiber_size(p: int, m: int) -> int:
    """Number of sphere representatives over one residue point: p^m (1 - 1/p)."""
    return p**m - p ** (m - 1)


def enumerate_proj(p: int, n: int, m: int, budget: int = ENUMERATION_BUDGET):
    """Yield every point of P^n(Z/p^m) once, in canonical form.

    Canonical points are grouped by the index of their first unit
    coordinate: entries before it run over p*Z/p^m, the entry itself is 1,
    entries after it run over all of Z/p^m.
    """
    if p ** (m * (n + 1)) > budget:
        raise BudgetExceeded(f"p^(m(n+1)) = {p**(m*(n+1))} exceeds budget {budget}")
    q = p**m
    below = range(0, q, p)  # the non-units mod p^m
    full = range(q)
    for lead in range(n + 1):
        pools = [below] * lead + [full] * (n - lead)
        for tail in itertools.product(*pools):
            coords = tail[:lead] + (1,) + tail[lead:]
            yield ResidueProjPoint(p, m, coords)


def volume_proj_space(p: int, k: int) -> Fraction:
    """vol_k(P^k) = (1 - p^-(k+1)) / (1 - p^-1)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    one = Fraction(1)
    return (one - Fraction(1, p ** (k + 1))) / (one - Fraction(1, p))


def ball_volume(p: int, n: int, m: int) -> Fraction:
    """Measure of a radius-p^{-m} ball in P^n; the whole space when m = 0."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return volume_proj_space(p, n)
    return Fraction(1, p ** (m * n))
