"""Rational-function models: evaluation, calculus, algebra and pole scanning.

A model is the ratio of two polynomials in t = x**x_power,

    R(x) = P(t) / Q(t),    Q(0) = 1,

stored by its coefficient arrays in ascending power order.  The denominator
constant term is always exactly 1 and is therefore not stored.  An optional
shared tail term adds the same coefficient to a single high power of both
polynomials, which pins the value at infinity to 1 (the form used for
cumulative distribution curves).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    DenominatorZero,
    NormalizationImpossible,
    UnsupportedSubstitution,
)

#: Denominator magnitudes at or below this count as an exact zero.
DENOM_TOL = 1e-300

#: Absolute bracket width at which pole bisection stops.
POLE_REFINE_TOL = 1e-12


def _first_vanishing(x, den):
    """First abscissa whose denominator value is an exact zero, for messages."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ds = np.atleast_1d(den)
    hit = xs[np.abs(ds) <= DENOM_TOL]
    return float(hit[0]) if hit.size else float(xs[0])


@dataclass(frozen=True)
class Tail:
    """Shared coefficient on x**power added to numerator and denominator.

    power must exceed the degree of both polynomials; because the same
    coefficient multiplies the highest power on both sides of the ratio,
    the model tends to 1 as x grows.
    """

    power: int
    coeff: float

    def __post_init__(self):
        if self.power < 1:
            raise ValueError("tail power must be a positive integer")
        if not math.isfinite(self.coeff):
            raise ValueError("tail coefficient must be finite")


@dataclass(frozen=True)
class RationalModel:
    """Immutable rational function with an optional abscissa power substitution.

    Parameters
    ----------
    numer : sequence of float
        Numerator coefficients, constant term first.  Length n + 1 for a
        degree-n numerator.
    denom : sequence of float
        Denominator coefficients for powers 1..m.  The constant term is 1
        and implicit.  May be empty (polynomial model).
    tail : Tail, optional
        Shared high-power coefficient, see :class:`Tail`.
    x_power : float
        The abscissa substitution exponent: the polynomials are evaluated
        at t = x**x_power.  Must be positive.  Non-integer values restrict
        the domain to x >= 0.
    zero_powers : frozenset of int
        Numerator powers pinned to exactly zero (recorded so a fit's
        structural constraints survive serialization).
    """

    numer: tuple[float, ...]
    denom: tuple[float, ...] = ()
    tail: Tail | None = None
    x_power: float = 1.0
    zero_powers: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "numer", tuple(float(c) for c in self.numer))
        object.__setattr__(self, "denom", tuple(float(c) for c in self.denom))
        object.__setattr__(self, "zero_powers", frozenset(int(i) for i in self.zero_powers))
        if len(self.numer) < 1:
            raise ValueError("numerator needs at least the constant coefficient")
        if not all(math.isfinite(c) for c in self.numer + self.denom):
            raise ValueError("coefficients must be finite")
        if not (self.x_power > 0):
            raise ValueError("x_power must be positive")
        if self.tail is not None:
            if self.tail.power <= self.degree_numer or self.tail.power <= self.degree_denom:
                raise ValueError("tail power must exceed both polynomial degrees")
        for i in self.zero_powers:
            if i < len(self.numer) and self.numer[i] != 0.0:
                raise ValueError(f"numerator power {i} is masked to zero but is {self.numer[i]!r}")

    @property
    def degree_numer(self) -> int:
        return len(self.numer) - 1

    @property
    def degree_denom(self) -> int:
        return len(self.denom)

    @cached_property
    def _dense(self) -> tuple[np.ndarray, np.ndarray]:
        # Dense ascending coefficient arrays including the implicit 1 and tail.
        top = max(len(self.numer), len(self.denom) + 1)
        if self.tail is not None:
            top = self.tail.power + 1
        p = np.zeros(top)
        q = np.zeros(top)
        p[: len(self.numer)] = self.numer
        q[0] = 1.0
        q[1 : len(self.denom) + 1] = self.denom
        if self.tail is not None:
            p[self.tail.power] += self.tail.coeff
            q[self.tail.power] += self.tail.coeff
        p.setflags(write=False)
        q.setflags(write=False)
        return p, q

    def _substitute(self, x):
        t = np.asarray(x, dtype=float) ** self.x_power
        return t

    def parts(self, x):
        """Numerator and denominator values P(t), Q(t) at t = x**x_power."""
        p, q = self._dense
        t = self._substitute(x)
        return npoly.polyval(t, p), npoly.polyval(t, q)

    def __call__(self, x):
        """Evaluate the model; scalar in, scalar out; array in, array out."""
        num, den = self.parts(x)
        if np.min(np.abs(den)) <= DENOM_TOL:
            raise DenominatorZero(_first_vanishing(x, den))
        out = num / den
        return out if np.ndim(x) else float(out)

    def derivative(self, x):
        """First derivative dR/dx by the quotient rule.

        The chain rule contributes x_power * x**(x_power - 1) from the
        substitution; for x_power == 1 that factor is exactly 1.
        """
        p, q = self._dense
        dp = npoly.polyder(p)
        dq = npoly.polyder(q)
        t = self._substitute(x)
        num = npoly.polyval(t, p)
        den = npoly.polyval(t, q)
        if np.min(np.abs(den)) <= DENOM_TOL:
            raise DenominatorZero(_first_vanishing(x, den))
        dnum = npoly.polyval(t, dp)
        dden = npoly.polyval(t, dq)
        out = (dnum * den - num * dden) / (den * den)
        if self.x_power != 1.0:
            out = out * self.x_power * np.asarray(x, dtype=float) ** (self.x_power - 1.0)
        return out if np.ndim(x) else float(out)

    def taylor_coefficients(self, count: int) -> tuple[float, ...]:
        """First `count` Maclaurin coefficients of the model.

        Computed by power-series long division: with dense numerator a_i
        and denominator b_j (b_0 = 1),

            c_i = a_i - sum_{j=1..i} b_j * c_{i-j}.

        Requires x_power == 1, since for other powers the model is not a
        power series in x.
        """
        if self.x_power != 1.0:
            raise UnsupportedSubstitution("Maclaurin expansion needs x_power == 1")
        if count < 0:
            raise ValueError("count must be nonnegative")
        p, q = self._dense
        c = []
        for i in range(count):
            a_i = p[i] if i < len(p) else 0.0
            acc = a_i
            for j in range(1, i + 1):
                b_j = q[j] if j < len(q) else 0.0
                if b_j != 0.0:
                    acc -= b_j * c[i - j]
            c.append(float(acc))
        return tuple(c)

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict:
        """JSON-compatible record; floats round-trip exactly via repr."""
        return {
            "x_power": self.x_power,
            "n": self.degree_numer,
            "m": self.degree_denom,
            "numer": list(self.numer),
            "denom": list(self.denom),
            "tail": None if self.tail is None else {"power": self.tail.power, "coeff": self.tail.coeff},
            "zero_powers": sorted(self.zero_powers),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "RationalModel":
        tail = rec.get("tail")
        return cls(
            numer=tuple(rec["numer"]),
            denom=tuple(rec.get("denom", ())),
            tail=None if tail is None else Tail(int(tail["power"]), float(tail["coeff"])),
            x_power=float(rec.get("x_power", 1.0)),
            zero_powers=frozenset(rec.get("zero_powers", ())),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "RationalModel":
        return cls.from_dict(json.loads(text))

    def __add__(self, other):
        if isinstance(other, RationalModel):
            return add(self, other)
        return NotImplemented


def _trim_trailing_zeros(c: np.ndarray, keep: int) -> np.ndarray:
    """Drop exact trailing zeros, keeping at least `keep` leading entries."""
    n = len(c)
    while n > keep and c[n - 1] == 0.0:
        n -= 1
    return c[:n]


def add(f: RationalModel, g: RationalModel) -> RationalModel:
    """Exact sum of two rational models over the common denominator.

    Both operands must use the plain coordinate (x_power == 1) and carry
    no tail term.  The result is renormalized so its denominator constant
    is exactly 1.

    Raises
    ------
    UnsupportedSubstitution
        If either operand has x_power != 1 or a tail term.
    NormalizationImpossible
        If the product denominator's constant term is zero.
    """
    for operand in (f, g):
        if operand.x_power != 1.0 or operand.tail is not None:
            raise UnsupportedSubstitution("add needs plain-coordinate models without tails")
    pf, qf = f._dense
    pg, qg = g._dense
    num = npoly.polyadd(npoly.polymul(pf, qg), npoly.polymul(pg, qf))
    den = npoly.polymul(qf, qg)
    c0 = den[0]
    if abs(c0) <= DENOM_TOL:
        raise NormalizationImpossible("sum denominator has zero constant term")
    num = np.atleast_1d(num) / c0
    den = np.atleast_1d(den) / c0
    num = _trim_trailing_zeros(num, keep=1)
    den = _trim_trailing_zeros(den, keep=1)
    return RationalModel(numer=tuple(num), denom=tuple(den[1:]))


@dataclass(frozen=True)
class PoleReport:
    """Result of a denominator sign-change scan.

    sign_changes holds one (lo, hi, root) triple per bracketed real zero of
    the denominator, refined by bisection to POLE_REFINE_TOL in x.
    min_abs_denominator is the smallest |Q| seen on the scan grid.
    """

    scan_interval: tuple[float, float]
    scan_points: int
    min_abs_denominator: float
    sign_changes: tuple[tuple[float, float, float], ...]

    @property
    def count(self) -> int:
        return len(self.sign_changes)


def pole_scan(model: RationalModel, interval: tuple[float, float], points: int = 1001) -> PoleReport:
    """Scan the denominator for sign changes on a uniform abscissa grid.

    The denominator is evaluated in the substituted coordinate t = x**x_power;
    brackets are refined by bisection on x.  An exact zero on a grid node is
    reported as a degenerate bracket.
    """
    a, b = float(interval[0]), float(interval[1])
    if not (b > a):
        raise ValueError("scan interval must have positive length")
    if points < 2:
        raise ValueError("need at least two scan points")
    _, q = model._dense

    def den(x):
        return npoly.polyval(np.asarray(x, dtype=float) ** model.x_power, q)

    xs = np.linspace(a, b, points)
    vals = den(xs)
    min_abs = float(np.min(np.abs(vals)))
    changes = []
    for i in range(points - 1):
        lo, hi = xs[i], xs[i + 1]
        vlo, vhi = vals[i], vals[i + 1]
        if vlo == 0.0:
            if i == 0 or vals[i - 1] != 0.0:
                changes.append((float(lo), float(lo), float(lo)))
            continue
        if vlo * vhi < 0.0:
            while hi - lo > POLE_REFINE_TOL:
                mid = 0.5 * (lo + hi)
                vmid = den(mid)
                if vmid == 0.0:
                    lo = hi = mid
                    break
                if vlo * vmid < 0.0:
                    hi = mid
                else:
                    lo, vlo = mid, vmid
            changes.append((float(lo), float(hi), float(0.5 * (lo + hi))))
    if vals[-1] == 0.0:
        changes.append((float(xs[-1]), float(xs[-1]), float(xs[-1])))
    return PoleReport(
        scan_interval=(a, b),
        scan_points=points,
        min_abs_denominator=min_abs,
        sign_changes=tuple(changes),
    )
