"""Exact Laurent polynomials in one variable and cyclotomic quotient fields."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class LaurentPoly:
    """Element of Q[t, t^-1], stored as a sparse map exponent -> coefficient."""

    __slots__ = ("_c", "_h")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = _frac(v)
                if v:
                    c[int(k)] = v
        self._c = c
        self._h = None

    @classmethod
    def mono(cls, coeff=1, exp: int = 0) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def from_list(cls, coeffs: Sequence, low: int = 0) -> "LaurentPoly":
        return cls({low + i: a for i, a in enumerate(coeffs)})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def low(self) -> int:
        return min(self._c)

    def high(self) -> int:
        return max(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.mono(other)
            else:
                return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self._c.items()))
        return self._h

    def __add__(self, other) -> "LaurentPoly":
        other = _lift(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _lift(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = _lift(other)
        c: dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials have inverses")
            (k, v), = self._c.items()
            return LaurentPoly({k * n: v ** n})
        r = LaurentPoly.mono(1)
        for _ in range(n):
            r = r * self
        return r

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def to_poly(self) -> tuple[list[Fraction], int]:
        """Dense coefficient list (ascending) and the exponent of its first entry."""
        if not self._c:
            return [], 0
        lo, hi = self.low(), self.high()
        return [self._c.get(e, Fraction(0)) for e in range(lo, hi + 1)], lo

    def is_unit(self) -> bool:
        """Units of the Laurent ring are the nonzero monomials."""
        return len(self._c) == 1

    def associate(self, other: "LaurentPoly") -> bool:
        """True if self = u * other for a unit u = c t^k."""
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if len(self._c) != len(other._c):
            return False
        a, la = self.to_poly()
        b, lb = other.to_poly()
        if len(a) != len(b):
            return False
        r = a[0] / b[0]
        return all(x == r * y for x, y in zip(a, b))

    def __call__(self, x):
        return sum((v * x ** k for k, v in self._c.items()), Fraction(0))

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        return render(self)


def _lift(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.mono(x)


T = LaurentPoly.mono(1, 1)
ONE = LaurentPoly.mono(1)
ZERO = LaurentPoly()


def t_pow(k: int, coeff=1) -> LaurentPoly:
    return LaurentPoly.mono(coeff, k)


def one_minus_t_pow(k: int) -> LaurentPoly:
    """1 - t^k."""
    return ONE - t_pow(k)


# dense polynomial helpers (ascending coefficient lists)

def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = _trim([_frac(x) for x in a])
    b = _trim([_frac(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                r[i + j] -= c * bj
    return _trim(q), _trim(r[: len(b) - 1])


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def div_exact(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return r with p = q * r in Q[t, t^-1]; raise if no such r exists."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero Laurent polynomial")
    if p.is_zero():
        return ZERO
    pa, pl = p.to_poly()
    qa, ql = q.to_poly()
    quo, rem = poly_divmod(pa, qa)
    if rem:
        raise ArithmeticError("not divisible")
    return LaurentPoly.from_list(quo, pl - ql)


def divides(q: LaurentPoly, p: LaurentPoly) -> bool:
    try:
        div_exact(p, q)
        return True
    except ArithmeticError:
        return False


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the d-th cyclotomic polynomial."""
    if d < 1:
        raise ValueError("d must be positive")
    num = [Fraction(-1)] + [Fraction(0)] * (d - 1) + [Fraction(1)]
    for e in range(1, d):
        if d % e == 0:
            num, rem = poly_divmod(num, cyclotomic(e))
            assert not rem
    return tuple(int(c) for c in num)


def euler_phi(d: int) -> int:
    return len(cyclotomic(d)) - 1


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


class CycloField:
    """The field Q[t]/Phi_d, elements are tuples of length phi(d)."""

    _cache: dict[int, "CycloField"] = {}

    def __new__(cls, d: int):
        if d in cls._cache:
            return cls._cache[d]
        self = super().__new__(cls)
        self.d = d
        self.phi = [Fraction(c) for c in cyclotomic(d)]
        self.deg = len(self.phi) - 1
        # powers t^k mod Phi_d for k in [0, d)
        pw = []
        cur = [Fraction(0)] * self.deg
        cur[0] = Fraction(1)
        for _ in range(d):
            pw.append(tuple(cur))
            cur = self._times_t(cur)
        self._pow = pw
        cls._cache[d] = self
        return self

    def _times_t(self, a: Sequence[Fraction]) -> list:
        n = self.deg
        top = a[n - 1]
        out = [Fraction(0)] + list(a[: n - 1])
        if top:
            for i in range(n):
                out[i] -= top * self.phi[i]
        return out

    @property
    def zero(self) -> tuple:
        return (Fraction(0),) * self.deg

    @property
    def one(self) -> tuple:
        return self._pow[0]

    def reduce_poly(self, coeffs: Sequence, low: int = 0) -> tuple:
        """Class of sum coeffs[i] t^(low+i); t^d = 1 handles negative exponents."""
        out = [Fraction(0)] * self.deg
        for i, c in enumerate(coeffs):
            if c:
                p = self._pow[(low + i) % self.d]
                for j in range(self.deg):
                    if p[j]:
                        out[j] += c * p[j]
        return tuple(out)

    def from_laurent(self, p: LaurentPoly) -> tuple:
        a, lo = p.to_poly()
        return self.reduce_poly(a, lo)

    def is_zero(self, a) -> bool:
        return not any(a)

    def add(self, a, b) -> tuple:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b) -> tuple:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a) -> tuple:
        return tuple(-x for x in a)

    def mul(self, a, b) -> tuple:
        n = self.deg
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        # reduce high degrees, Phi_d is monic
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                for i in range(n + 1):
                    prod[k - n + i] -= c * self.phi[i]
        return tuple(prod[:n])

    def inv(self, a) -> tuple:
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid: find u with u*a = 1 mod Phi
        r0, r1 = list(self.phi), _trim(list(a))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, poly_mul(q, s1))
        c = r1[0]
        u = [x / c for x in s1]
        _, u = poly_divmod(u, self.phi) if len(u) > self.deg else (None, u)
        return tuple(list(u) + [Fraction(0)] * (self.deg - len(u)))


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([_frac(x) for x in out])


class CycloElem:
    """Residue class of a Laurent polynomial modulo Phi_d."""

    __slots__ = ("d", "rep")

    def __init__(self, d: int, rep: Iterable):
        self.d = d
        f = CycloField(d)
        rep = tuple(_frac(x) for x in rep)
        if len(rep) < f.deg:
            rep = rep + (Fraction(0),) * (f.deg - len(rep))
        elif len(rep) > f.deg:
            rep = f.reduce_poly(rep)
        self.rep = rep

    @property
    def field(self) -> CycloField:
        return CycloField(self.d)

    def __eq__(self, other) -> bool:
        return isinstance(other, CycloElem) and self.d == other.d and self.rep == other.rep

    def __hash__(self) -> int:
        return hash((self.d, self.rep))

    def __add__(self, o: "CycloElem") -> "CycloElem":
        return CycloElem(self.d, self.field.add(self.rep, o.rep))

    def __sub__(self, o: "CycloElem") -> "CycloElem":
        return CycloElem(self.d, self.field.sub(self.rep, o.rep))

    def __mul__(self, o: "CycloElem") -> "CycloElem":
        return CycloElem(self.d, self.field.mul(self.rep, o.rep))

    def __neg__(self) -> "CycloElem":
        return CycloElem(self.d, self.field.neg(self.rep))

    def inverse(self) -> "CycloElem":
        return CycloElem(self.d, self.field.inv(self.rep))

    def is_zero(self) -> bool:
        return not any(self.rep)

    def __repr__(self) -> str:
        return f"CycloElem({self.d}, {render(LaurentPoly.from_list(self.rep))})"


def reduce_mod(p: LaurentPoly, d: int) -> CycloElem:
    """Image of p in Q[t]/Phi_d (d >= 2, so t is invertible there)."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return CycloElem(d, CycloField(d).from_laurent(p))


def render(p: LaurentPoly) -> str:
    """Text form such as '1 - t^3' or '-t^-1 + 2/3*t'."""
    if p.is_zero():
        return "0"
    parts = []
    for k in sorted(p._c):
        c = p._c[k]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mon = "t" if k == 1 else f"t^{k}"
            body = mon if a == 1 else f"{a}*{mon}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)(?:\*)?)?(t(?:\^(-?\d+))?)?$")


def parse(text: str) -> LaurentPoly:
    """Inverse of render."""
    s = text.replace(" ", "")
    if s == "0":
        return ZERO
    tokens = re.findall(r"[+-]?[^+-]+", _protect(s))
    acc: dict[int, Fraction] = {}
    for tok in tokens:
        tok = tok.replace("~", "-")
        sign = -1 if tok.startswith("-") else 1
        tok = tok.lstrip("+-")
        m = _TERM.match(tok)
        if not m or not tok:
            raise ValueError(f"cannot parse term {tok!r} in {text!r}")
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        if m.group(2):
            exp = int(m.group(3)) if m.group(3) is not None else 1
        else:
            if not m.group(1):
                raise ValueError(f"cannot parse term {tok!r} in {text!r}")
            exp = 0
        acc[exp] = acc.get(exp, 0) + sign * coef
    return LaurentPoly(acc)


def _protect(s: str) -> str:
    # hide the minus sign of negative exponents from the term splitter
    return re.sub(r"\^-", "^~", s)
