"""Exact arithmetic in cyclotomic fields Q(zeta_M).

A number is stored as its residue modulo the M-th cyclotomic polynomial, i.e. a rational
coefficient vector of length phi(M) in the power basis 1, zeta, ..., zeta^(phi(M)-1).
The representative is unique, so equality is coefficient comparison.
"""
from __future__ import annotations

import cmath
import functools
import math
from fractions import Fraction
from typing import Iterable, Sequence

import sympy
from sympy import Poly, QQ, Symbol

_x = Symbol("x")


@functools.lru_cache(maxsize=None)
def _modulus(conductor: int) -> tuple[int, ...]:
    """Coefficients of Phi_M, lowest degree first (monic)."""
    coeffs = sympy.cyclotomic_poly(conductor, _x, polys=True).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@functools.lru_cache(maxsize=None)
def degree(conductor: int) -> int:
    return int(sympy.totient(conductor))


@functools.lru_cache(maxsize=None)
def _zeta_powers(conductor: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * k / conductor) for k in range(degree(conductor)))


def _reduce(raw: list[Fraction], conductor: int) -> tuple[Fraction, ...]:
    """Remainder of raw (low→high) modulo Phi_M."""
    mod = _modulus(conductor)
    d = len(mod) - 1
    for k in range(len(raw) - 1, d - 1, -1):
        c = raw[k]
        if c:
            base = k - d
            for j in range(d):
                if mod[j]:
                    raw[base + j] -= c * mod[j]
            raw[k] = Fraction(0)
    out = raw[:d] + [Fraction(0)] * (d - len(raw))
    return tuple(out)


@functools.lru_cache(maxsize=4096)
def _minimal_form(conductor: int, coeffs: tuple[Fraction, ...]) -> CycloNum:
    number = CycloNum(conductor, coeffs)
    if number.is_rational():
        return CycloNum.rational(coeffs[0])
    for d in sympy.divisors(conductor)[:-1]:
        # Q(zeta_2d) = Q(zeta_d) for odd d
        if d < 3 or d % 4 == 2:
            continue
        try:
            return number.demote(d)
        except ValueError:
            continue
    return number


class CycloNum:
    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable):
        if conductor < 1:
            raise ValueError(f"conductor must be positive, got {conductor}")
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != degree(conductor):
            coeffs = list(_reduce(coeffs, conductor))
        self.conductor = conductor
        self.coeffs: tuple[Fraction, ...] = tuple(coeffs)
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def rational(cls, value, conductor: int = 1) -> CycloNum:
        coeffs = [Fraction(0)] * degree(conductor)
        coeffs[0] = Fraction(value)
        return cls(conductor, coeffs)

    @classmethod
    def zero(cls, conductor: int = 1) -> CycloNum:
        return cls.rational(0, conductor)

    @classmethod
    def one(cls, conductor: int = 1) -> CycloNum:
        return cls.rational(1, conductor)

    @classmethod
    def zeta(cls, k: int, conductor: int) -> CycloNum:
        """zeta_M ** k."""
        raw = [Fraction(0)] * (k % conductor + 1)
        raw[k % conductor] = Fraction(1)
        return cls(conductor, _reduce(raw, conductor))

    @classmethod
    def root_of_unity(cls, k: int, order: int, conductor: int) -> CycloNum:
        """exp(2 pi i k / order) inside Q(zeta_conductor); order must divide conductor."""
        if conductor % order:
            raise ValueError(f"order {order} does not divide conductor {conductor}")
        return cls.zeta(k * (conductor // order), conductor)

    # -- structure ---------------------------------------------------------
    def _coerce(self, other) -> tuple[CycloNum, CycloNum]:
        if not isinstance(other, CycloNum):
            other = CycloNum.rational(Fraction(other), self.conductor)
        if other.conductor == self.conductor:
            return self, other
        m = math.lcm(self.conductor, other.conductor)
        return self.promote(m), other.promote(m)

    def promote(self, conductor: int) -> CycloNum:
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"cannot promote conductor {self.conductor} to {conductor}")
        step = conductor // self.conductor
        raw = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for k, c in enumerate(self.coeffs):
            raw[k * step] = c
        return CycloNum(conductor, _reduce(raw, conductor))

    def demote(self, conductor: int) -> CycloNum:
        """Rewrite in Q(zeta_conductor); ValueError when the number does not live there."""
        if conductor == self.conductor:
            return self
        if self.conductor % conductor:
            raise ValueError(f"conductor {conductor} does not divide {self.conductor}")
        basis = [CycloNum.zeta(j, conductor).promote(self.conductor).coeffs for j in range(degree(conductor))]
        a = sympy.Matrix([[sympy.Rational(b[i].numerator, b[i].denominator) for b in basis]
                          for i in range(degree(self.conductor))])
        rhs = sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in self.coeffs])
        try:
            sol, params = a.gauss_jordan_solve(rhs)
        except ValueError as e:
            raise ValueError(f"{self} is not in Q(zeta_{conductor})") from e
        if params.shape[0]:
            raise ValueError("basis images are dependent; this cannot happen for M | M'")
        return CycloNum(conductor, [Fraction(int(v.p), int(v.q)) for v in sol])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def is_real(self) -> bool:
        return self == self.conj()

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other) -> CycloNum:
        a, b = self._coerce(other)
        return CycloNum(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycloNum:
        return CycloNum(self.conductor, [-c for c in self.coeffs])

    def __sub__(self, other) -> CycloNum:
        a, b = self._coerce(other)
        return CycloNum(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other) -> CycloNum:
        return (-self) + other

    def __mul__(self, other) -> CycloNum:
        if not isinstance(other, CycloNum):
            q = Fraction(other)
            return CycloNum(self.conductor, [c * q for c in self.coeffs])
        a, b = self._coerce(other)
        n = len(a.coeffs)
        raw = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    raw[i + j] += x * y
        return CycloNum(a.conductor, _reduce(raw, a.conductor))

    __rmul__ = __mul__

    def inverse(self) -> CycloNum:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return CycloNum.rational(1 / self.coeffs[0], self.conductor)
        f = Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)], _x, domain=QQ)
        g = Poly(list(reversed(_modulus(self.conductor))), _x, domain=QQ)
        inv = f.invert(g)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        return CycloNum(self.conductor, coeffs)

    def __truediv__(self, other) -> CycloNum:
        if not isinstance(other, CycloNum):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return CycloNum(self.conductor, [c / q for c in self.coeffs])
        a, b = self._coerce(other)
        return a * b.inverse()

    def __rtruediv__(self, other) -> CycloNum:
        return self.inverse() * other

    def __pow__(self, k: int) -> CycloNum:
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNum.one(self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> CycloNum:
        m = self.conductor
        raw = [Fraction(0)] * m
        for k, c in enumerate(self.coeffs):
            raw[(-k) % m] += c
        return CycloNum(m, _reduce(raw, m))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycloNum):
            try:
                other = CycloNum.rational(Fraction(other), self.conductor)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    def minimal(self) -> CycloNum:
        """The same number written in the smallest Q(zeta_d) that contains it."""
        return _minimal_form(self.conductor, self.coeffs)

    def __hash__(self) -> int:
        if self._hash is None:
            # rationals hash like Fraction so 1 == CycloNum(1) hash alike
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                m = self.minimal()
                self._hash = hash((m.conductor, m.coeffs))
        return self._hash

    def sort_key(self) -> tuple[Fraction, ...]:
        return self.coeffs

    # -- bridges -----------------------------------------------------------
    def to_complex(self) -> complex:
        return complex(sum(float(c) * z for c, z in zip(self.coeffs, _zeta_powers(self.conductor)) if c))

    def __complex__(self) -> complex:
        return self.to_complex()

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> CycloNum:
        return cls(int(data["conductor"]), [Fraction(c) for c in data["coeffs"]])

    def __repr__(self) -> str:
        terms = [f"{c}*z^{k}" if k else f"{c}" for k, c in enumerate(self.coeffs) if c]
        return f"CycloNum[{self.conductor}](" + (" + ".join(terms) or "0") + ")"


def cyclo_arith(a: CycloNum, b: CycloNum, op: str):
    """Dispatch form of the field operations: add, sub, mul, div, conj (of a), eq."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "conj":
        return a.conj()
    if op == "eq":
        return a == b
    raise ValueError(f"unknown cyclotomic operation {op!r}")


def cyclo_eval(a: CycloNum) -> complex:
    return a.to_complex()


def cos_2pi(k: int, m: int, conductor: int) -> CycloNum:
    """cos(2 pi k / m); m must divide the conductor."""
    z = CycloNum.root_of_unity(k, m, conductor)
    return (z + z.conj()) / 2


def sin_2pi(k: int, m: int, conductor: int) -> CycloNum:
    """sin(2 pi k / m); needs lcm(m, 4) | conductor."""
    z = CycloNum.root_of_unity(k, m, conductor)
    i = CycloNum.root_of_unity(1, 4, conductor)
    return (z - z.conj()) * (-i) / 2


def sqrt5(conductor: int = 5) -> CycloNum:
    """sqrt(5) = 1 + 2(zeta_5 + zeta_5^4); needs 5 | conductor."""
    z = CycloNum.root_of_unity(1, 5, conductor)
    return 1 + 2 * (z + z.conj())


def golden_ratio(conductor: int = 5) -> CycloNum:
    return (1 + sqrt5(conductor)) / 2


def common_conductor(values: Sequence[CycloNum]) -> int:
    return math.lcm(1, *(v.conductor for v in values))


# -- exact 3-vectors ------------------------------------------------------------
ExactVec3 = tuple[CycloNum, CycloNum, CycloNum]


def vec(x, y, z, conductor: int = 1) -> ExactVec3:
    return tuple(c.promote(conductor) if isinstance(c, CycloNum) else CycloNum.rational(c, conductor)
                 for c in (x, y, z))  # type: ignore[return-value]


def vec_promote(v: ExactVec3, conductor: int) -> ExactVec3:
    return tuple(c.promote(conductor) for c in v)  # type: ignore[return-value]


def vec_add(u: ExactVec3, v: ExactVec3) -> ExactVec3:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def vec_sub(u: ExactVec3, v: ExactVec3) -> ExactVec3:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def vec_scale(u: ExactVec3, s) -> ExactVec3:
    return (u[0] * s, u[1] * s, u[2] * s)


def vec_neg(u: ExactVec3) -> ExactVec3:
    return (-u[0], -u[1], -u[2])


def dot(u: ExactVec3, v: ExactVec3) -> CycloNum:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross(u: ExactVec3, v: ExactVec3) -> ExactVec3:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def is_zero_vec(u: ExactVec3) -> bool:
    return all(c.is_zero() for c in u)


def parallel(u: ExactVec3, v: ExactVec3) -> bool:
    return is_zero_vec(cross(u, v))


def span_rank(points: Sequence[ExactVec3]) -> int:
    """Dimension of the linear span, exactly."""
    nonzero = [p for p in points if not is_zero_vec(p)]
    if not nonzero:
        return 0
    first = nonzero[0]
    second = next((p for p in nonzero[1:] if not parallel(first, p)), None)
    if second is None:
        return 1
    normal = cross(first, second)
    return 3 if any(not dot(normal, p).is_zero() for p in nonzero) else 2


def vec_to_float(u: ExactVec3) -> tuple[float, float, float]:
    return tuple(c.to_complex().real for c in u)  # type: ignore[return-value]


def vec_json(u: ExactVec3) -> list[dict]:
    return [c.to_json() for c in u]
