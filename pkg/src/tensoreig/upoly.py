"""Exact univariate polynomials over Q, Sturm chains and real-root isolation.

Coefficients are stored constant term first.  Everything on the counting
path is exact; floats only appear in the refined root approximations and in
the complex roots reported by :func:`solve_binary_form`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np


def _frac(c) -> Fraction:
    if isinstance(c, str):
        return Fraction(c.strip())
    return Fraction(c)


class UnivarPoly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *_):
        raise AttributeError("UnivarPoly is immutable")

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "UnivarPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-_frac(r), 1])
        return p

    @classmethod
    def t(cls) -> "UnivarPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UnivarPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UnivarPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UnivarPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            s = f"{c}" if not mono else f"{c}*{mono}"
            parts.append(s if not parts or s.startswith("-") else "+" + s)
        return "".join(parts)

    def _lift(self, other) -> "UnivarPoly":
        return other if isinstance(other, UnivarPoly) else UnivarPoly([other])

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UnivarPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UnivarPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return UnivarPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UnivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UnivarPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "UnivarPoly"):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return UnivarPoly(), self
        q = [Fraction(0)] * (dq + 1)
        lb = other.lead
        db = other.degree
        for k in range(dq, -1, -1):
            c = r[k + db] / lb
            q[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    r[k + i] -= c * b
        return UnivarPoly(q), UnivarPoly(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0 if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UnivarPoly":
        return UnivarPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def content(self) -> Fraction:
        """Positive rational ``c`` such that ``self / c`` has coprime integer coefficients."""
        if not self.coeffs:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.coeffs:
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "UnivarPoly":
        """Divide by the positive content; signs are preserved."""
        if not self.coeffs:
            return self
        c = self.content()
        return UnivarPoly([a / c for a in self.coeffs])

    def monic(self) -> "UnivarPoly":
        if not self.coeffs:
            return self
        return UnivarPoly([a / self.lead for a in self.coeffs])

    def sign_at(self, x: Fraction) -> int:
        v = self(x)
        return (v > 0) - (v < 0)

    def sign_at_infinity(self, direction: int) -> int:
        s = (self.lead > 0) - (self.lead < 0)
        if direction < 0 and self.degree % 2:
            s = -s
        return s

    def to_numpy(self) -> np.ndarray:
        """Float coefficients, highest degree first (``numpy.roots`` order)."""
        return np.array([float(c) for c in reversed(self.coeffs)])

    def shift_reverse(self) -> "UnivarPoly":
        """``t^deg * p(1/t)``."""
        return UnivarPoly(reversed(self.coeffs))


def parse_poly(text: str, var: str = "t") -> UnivarPoly:
    """Parse strings such as ``"-1*t^3+3*t^2-3*t-1"`` or ``"1/2*t^2 - 3"``.

    A bare coefficient list ``"[c0, c1, ...]"`` (constant term first) is
    also accepted.
    """
    s = text.replace(" ", "")
    if s.startswith("["):
        return UnivarPoly(part for part in s.strip("[]").split(",") if part)
    if not s:
        raise ValueError("empty polynomial")
    term_re = re.compile(
        rf"([+-]?)(?:(\d+(?:/\d+)?|\d*\.\d+)\*?)?({re.escape(var)}(?:(?:\^|\*\*)(\d+))?)?"
    )
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = term_re.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        k = 0
        if m.group(3):
            k = int(m.group(4)) if m.group(4) else 1
        coeffs[k] = coeffs.get(k, Fraction(0)) + sign * c
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
    deg = max(coeffs)
    return UnivarPoly([coeffs.get(k, 0) for k in range(deg + 1)])


def poly_gcd(p: UnivarPoly, q: UnivarPoly) -> UnivarPoly:
    """Monic greatest common divisor."""
    if not p and not q:
        raise ValueError("gcd of two zero polynomials")
    a, b = p, q
    while b:
        a, b = b, (a % b).primitive()
    return a.monic()


def xgcd(p: UnivarPoly, q: UnivarPoly) -> tuple[UnivarPoly, UnivarPoly, UnivarPoly]:
    """Return ``(g, u, v)`` with ``u p + v q = g`` and ``g`` monic."""
    r0, r1 = p, q
    s0, s1 = UnivarPoly([1]), UnivarPoly()
    t0, t1 = UnivarPoly(), UnivarPoly([1])
    while r1:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    lc = r0.lead
    return r0.monic(), s0 * (1 / lc), t0 * (1 / lc)


def squarefree_part(p: UnivarPoly) -> UnivarPoly:
    g = poly_gcd(p, p.derivative()) if p.degree > 0 else UnivarPoly([1])
    return (p // g).primitive()


def squarefree_decomposition(p: UnivarPoly) -> list[tuple[UnivarPoly, int]]:
    """Yun's algorithm: ``p = c * prod f_i^i`` with squarefree coprime ``f_i``."""
    if p.degree < 1:
        return []
    out = []
    a = p
    b = a.derivative()
    c = poly_gcd(a, b)
    w = a // c
    y = b // c
    z = y - w.derivative()
    i = 1
    while w.degree > 0:
        g = poly_gcd(w, z)
        if g.degree > 0:
            out.append((g, i))
        w = w // g
        y = z // g
        z = y - w.derivative()
        i += 1
    return out


@dataclass(frozen=True)
class SturmChain:
    polys: tuple[UnivarPoly, ...]

    @property
    def squarefree(self) -> bool:
        return self.polys[-1].degree == 0

    @property
    def gcd(self) -> UnivarPoly:
        """``gcd(p, p')`` up to a scalar factor (monic here)."""
        return self.polys[-1].monic()

    def variations(self, x: Fraction | None, direction: int = 0) -> int:
        """Sign changes at ``x``; ``x=None`` with ``direction=+-1`` means +-infinity."""
        signs = []
        for p in self.polys:
            s = p.sign_at_infinity(direction) if x is None else p.sign_at(x)
            if s:
                signs.append(s)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, lo: Fraction | None = None, hi: Fraction | None = None) -> int:
        """Distinct real roots in ``(lo, hi]`` (``None`` = infinite endpoint)."""
        vlo = self.variations(lo, -1) if lo is not None else self.variations(None, -1)
        vhi = self.variations(hi, +1) if hi is not None else self.variations(None, +1)
        return vlo - vhi

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)


def sturm_chain(p: UnivarPoly) -> SturmChain:
    """``p, p', -rem(...)``, stopping at the last nonzero remainder.

    Entries after the first two are divided by their positive content, which
    keeps the sign pattern intact.
    """
    if not p:
        raise ValueError("Sturm chain of the zero polynomial")
    chain = [p, p.derivative()]
    if not chain[1]:
        return SturmChain((p,))
    while True:
        r = -(chain[-2] % chain[-1])
        if not r:
            break
        chain.append(r.primitive())
    return SturmChain(tuple(chain))


def cauchy_bound(p: UnivarPoly) -> Fraction:
    """All real roots lie in ``(-B, B)``."""
    lc = abs(p.lead)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class RootReport:
    """Isolated real roots.

    ``intervals`` are disjoint; a degenerate interval ``(r, r)`` marks an
    exact rational root.  ``multiple`` is set when the input was not
    squarefree; counts then refer to distinct roots.
    """

    count: int
    intervals: list[tuple[Fraction, Fraction]]
    refined: list[float]
    multiple: bool = False
    gcd: UnivarPoly = field(default_factory=lambda: UnivarPoly([1]))

    @property
    def exact_roots(self) -> list[Fraction]:
        return [a for a, b in self.intervals if a == b]


def _isolate(chain: SturmChain, lo: Fraction, hi: Fraction, out: list):
    # roots in (lo, hi]
    k = chain.count(lo, hi)
    if k == 0:
        return
    p = chain.polys[0]
    if k == 1:
        if p.sign_at(hi) == 0:
            out.append((hi, hi))
        else:
            out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    _isolate(chain, lo, mid, out)
    _isolate(chain, mid, hi, out)


def _refine(p: UnivarPoly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    if lo == hi:
        return lo, hi
    slo = p.sign_at(lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = p.sign_at(mid)
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def real_roots(p: UnivarPoly, range: tuple | None = None, width=Fraction(1, 2**52)) -> RootReport:
    """Count and isolate the distinct real roots of ``p``.

    ``range=(a, b)`` restricts to the closed interval ``[a, b]``.  Intervals
    are refined by bisection until narrower than ``width``.
    """
    if not p:
        raise ValueError("real roots of the zero polynomial")
    width = Fraction(width)
    g = poly_gcd(p, p.derivative()) if p.degree > 0 else UnivarPoly([1])
    multiple = g.degree > 0
    sq = (p // g).primitive() if multiple else p
    if sq.degree == 0:
        return RootReport(0, [], [], multiple, g)
    chain = sturm_chain(sq)
    B = cauchy_bound(sq)
    if range is None:
        lo, hi = -B, B
        lo_closed = True
    else:
        lo, hi = Fraction(range[0]), Fraction(range[1])
        if lo > hi:
            raise ValueError("empty range")
        lo_closed = True
    raw: list = []
    # (lo, hi] via Sturm; the left endpoint is checked separately
    if lo_closed and sq.sign_at(lo) == 0:
        raw.append((lo, lo))
    if lo < hi:
        _isolate(chain, lo, hi, raw)
    raw.sort()
    intervals = []
    for a, b in raw:
        if a != b and sq.sign_at(a) == 0:
            # the root at a belongs to the neighbouring interval; move a right
            step = (b - a) / 2
            while sq.sign_at(a + step) == 0 or chain.count(a + step, b) != 1:
                step /= 2
            a = a + step
        intervals.append(_refine(sq, a, b, width))
    refined = [float((a + b) / 2) for a, b in intervals]
    return RootReport(len(intervals), intervals, refined, multiple, g)


def count_real_roots(p: UnivarPoly, lo=None, hi=None) -> int:
    """Distinct real roots in ``[lo, hi]`` (whole line by default)."""
    if lo is None and hi is None:
        return real_roots(p).count
    B = cauchy_bound(p)
    lo = -B if lo is None else lo
    hi = B if hi is None else hi
    return real_roots(p, (lo, hi)).count


# -- binary forms -----------------------------------------------------------

@dataclass(frozen=True)
class ProjectiveRoot:
    """Root ``(x1 : x2)`` of a binary form."""

    point: tuple[complex, complex]
    multiplicity: int
    real: bool

    def as_real(self) -> tuple[float, float]:
        return (self.point[0].real, self.point[1].real)


def _binary_coeffs(F) -> list:
    """Coefficient list ``a[k]`` of ``x1^k x2^(d-k)``."""
    from .tensor_core import Form

    if isinstance(F, Form):
        if F.n != 2:
            raise ValueError("binary form needs n=2")
        a = [0] * (F.degree + 1)
        for (i, j), c in F.terms.items():
            a[i] = c
    else:
        a = list(F)
    if any(isinstance(c, (complex, np.complexfloating)) and c.imag != 0 for c in a):
        return [complex(c) for c in a]
    return [Fraction(c.real if isinstance(c, complex) else c) for c in a]


def _complex_binary(a: list[complex], cluster: float) -> list[ProjectiveRoot]:
    d = len(a) - 1
    k = max(i for i, c in enumerate(a) if c != 0)
    out = [ProjectiveRoot((1 + 0j, 0j), d - k, True)] if k < d else []
    zs = np.roots(np.array(a[: k + 1][::-1], dtype=complex)) if k else np.array([])
    used = np.zeros(len(zs), dtype=bool)
    for i in np.lexsort((np.round(zs.imag, 12), np.round(zs.real, 12))):
        if used[i]:
            continue
        near = np.abs(zs - zs[i]) <= cluster * max(1.0, abs(zs[i]))
        used |= near
        out.append(ProjectiveRoot((complex(zs[i]), 1 + 0j), int(near.sum()), bool(zs[i].imag == 0)))
    return out


def solve_binary_form(F, complex_roots: bool = True, cluster: float = 1e-6) -> list[ProjectiveRoot]:
    """Projective roots of a homogeneous bivariate form with multiplicities.

    ``F`` is a :class:`~tensoreig.tensor_core.Form` with ``n=2`` or a
    coefficient sequence where entry ``k`` multiplies ``x1^k x2^(d-k)``.
    For rational coefficients real roots are isolated exactly and non-real
    ones come from ``numpy.roots`` on the squarefree factors.  Forms with
    non-real coefficients are solved numerically; roots closer than
    ``cluster`` (relative) are merged into one with multiplicity.
    """
    a = _binary_coeffs(F)
    d = len(a) - 1
    if not any(c != 0 for c in a):
        raise ValueError("zero binary form")
    if isinstance(a[0], complex):
        return _complex_binary(a, cluster)
    f = UnivarPoly(a)
    out: list[ProjectiveRoot] = []
    at_infinity = d - f.degree
    if at_infinity:
        out.append(ProjectiveRoot((1 + 0j, 0j), at_infinity, True))
    for factor, mult in squarefree_decomposition(f):
        rep = real_roots(factor, width=Fraction(1, 2**60))
        reals = rep.refined
        for r in reals:
            out.append(ProjectiveRoot((complex(r), 1 + 0j), mult, True))
        if complex_roots and factor.degree > len(reals):
            zs = np.roots(factor.to_numpy())
            zs = sorted(zs, key=lambda z: -abs(z.imag))[: factor.degree - len(reals)]
            for z in sorted(zs, key=lambda z: (round(z.real, 12), round(z.imag, 12))):
                out.append(ProjectiveRoot((complex(z), 1 + 0j), mult, False))
    return out
