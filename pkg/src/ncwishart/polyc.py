"""Exact polynomial and series arithmetic over the rationals.

Everything combinatorial in this package lives in the ring Q[c] of
polynomials in a single weight parameter ``c``.  Three small dense types
cover all of it:

* :class:`PolyC` -- a polynomial in ``c`` with Fraction coefficients,
* :class:`PolyXC` -- a polynomial in ``x`` whose coefficients are PolyC,
* :class:`SeriesZ` -- a formal power series in ``z`` over PolyC, truncated
  at a fixed order.

All arithmetic is exact; nothing in this module ever touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return coeffs[:end]


@dataclass(frozen=True)
class PolyC:
    """Dense univariate polynomial in the parameter ``c``.

    Coefficients are stored ascending with trailing zeros trimmed; the zero
    polynomial is the empty tuple.

    >>> p = PolyC.of(1, 4, 1)
    >>> str(p)
    '1 + 4*c + c^2'
    >>> str(p - PolyC.of(0, 2))
    '1 + 2*c + c^2'
    >>> p == PolyC.parse("1 + 4*c + c^2")
    True
    >>> p.evaluate(Fraction(1))
    Fraction(6, 1)
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        fixed = _trim(tuple(Fraction(a) for a in self.coeffs))
        object.__setattr__(self, "coeffs", fixed)

    # -- constructors ------------------------------------------------------

    @classmethod
    def of(cls, *coeffs: Scalar) -> "PolyC":
        return cls(tuple(Fraction(a) for a in coeffs))

    @classmethod
    def zero(cls) -> "PolyC":
        return cls(())

    @classmethod
    def one(cls) -> "PolyC":
        return cls((_ONE,))

    @classmethod
    def c(cls) -> "PolyC":
        """The monomial c."""
        return cls((_ZERO, _ONE))

    @classmethod
    def monomial(cls, k: int, coef: Scalar = 1) -> "PolyC":
        return cls((_ZERO,) * k + (Fraction(coef),))

    @classmethod
    def const(cls, value: Scalar) -> "PolyC":
        return cls((Fraction(value),))

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _ZERO

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (error if degree > 0)."""
        if len(self.coeffs) > 1:
            raise ValueError(f"not a constant: {self}")
        return self.coeffs[0] if self.coeffs else _ZERO

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(value: "PolyC | Scalar") -> "PolyC":
        if isinstance(value, PolyC):
            return value
        if isinstance(value, (int, Fraction)):
            return PolyC.const(value)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: "PolyC | Scalar") -> "PolyC":
        other = PolyC._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        merged = list(a)
        for i, v in enumerate(b):
            merged[i] += v
        return PolyC(tuple(merged))

    __radd__ = __add__

    def __neg__(self) -> "PolyC":
        return PolyC(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "PolyC | Scalar") -> "PolyC":
        other = PolyC._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "PolyC":
        return (-self) + other

    def __mul__(self, other: "PolyC | Scalar") -> "PolyC":
        other = PolyC._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return PolyC.zero()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyC(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PolyC":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = PolyC.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def div_exact(self, divisor: "PolyC") -> "PolyC":
        """Exact polynomial division; raises if the remainder is nonzero.

        >>> PolyC.of(0, 1, 1).div_exact(PolyC.c())
        PolyC(coeffs=(Fraction(1, 1), Fraction(1, 1)))
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        d = divisor.coeffs
        lead = d[-1]
        q = [_ZERO] * max(len(rem) - len(d) + 1, 0)
        for i in range(len(rem) - len(d), -1, -1):
            factor = rem[i + len(d) - 1] / lead
            q[i] = factor
            if factor:
                for j, dv in enumerate(d):
                    rem[i + j] -= factor * dv
        if any(rem[: len(d) - 1] if q else rem):
            raise ValueError(f"{self} is not divisible by {divisor}")
        return PolyC(tuple(q))

    def evaluate(self, value: Scalar) -> Fraction:
        """Horner evaluation at an exact rational point."""
        acc = _ZERO
        for a in reversed(self.coeffs):
            acc = acc * value + a
        return Fraction(acc)

    # -- text and JSON forms ----------------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        pieces: list[str] = []
        for k, a in enumerate(self.coeffs):
            if a == 0:
                continue
            mag = abs(a)
            if k == 0:
                body = str(mag)
            else:
                cpart = "c" if k == 1 else f"c^{k}"
                body = cpart if mag == 1 else f"{mag}*{cpart}"
            if not pieces:
                pieces.append(body if a > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if a > 0 else f"- {body}")
        return " ".join(pieces)

    @classmethod
    def parse(cls, text: str) -> "PolyC":
        """Parse the textual form produced by ``str``.

        Accepts ascending or any order, optional ``*``, and rational
        coefficients like ``3/2``.

        >>> PolyC.parse("c^2 - 2*c") == PolyC.of(0, -2, 1)
        True
        """
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial text")
        s = s.replace("-", "+-")
        if s.startswith("+"):
            s = s[1:]
        terms: dict[int, Fraction] = {}
        for raw in s.split("+"):
            if raw in ("", "-"):
                raise ValueError(f"malformed polynomial text: {text!r}")
            sign = 1
            if raw.startswith("-"):
                sign, raw = -1, raw[1:]
            if "c" in raw:
                head, _, tail = raw.partition("c")
                head = head.rstrip("*")
                coef = Fraction(head) if head else _ONE
                if tail == "":
                    k = 1
                elif tail.startswith("^"):
                    k = int(tail[1:])
                else:
                    raise ValueError(f"malformed term {raw!r} in {text!r}")
            else:
                coef = Fraction(raw)
                k = 0
            terms[k] = terms.get(k, _ZERO) + sign * coef
        size = max(terms) + 1 if terms else 0
        out = [_ZERO] * size
        for k, v in terms.items():
            out[k] = v
        return cls(tuple(out))

    def as_json(self) -> list[str]:
        """Coefficient list as 'p/q' strings (ascending)."""
        return [f"{a.numerator}/{a.denominator}" for a in self.coeffs]

    @classmethod
    def from_json(cls, data: list[str]) -> "PolyC":
        return cls(tuple(Fraction(s) for s in data))


@dataclass(frozen=True)
class PolyXC:
    """Polynomial in ``x`` whose coefficients live in Q[c].

    >>> x = PolyXC.x()
    >>> str(x * x - 2)
    '(-2) + (1)*x^2'
    """

    coeffs: tuple[PolyC, ...]

    def __post_init__(self) -> None:
        conv = tuple(a if isinstance(a, PolyC) else PolyC.const(a) for a in self.coeffs)
        end = len(conv)
        while end > 0 and conv[end - 1].is_zero():
            end -= 1
        object.__setattr__(self, "coeffs", conv[:end])

    @classmethod
    def of(cls, *coeffs: "PolyC | Scalar") -> "PolyXC":
        return cls(tuple(coeffs))  # type: ignore[arg-type]

    @classmethod
    def x(cls) -> "PolyXC":
        return cls((PolyC.zero(), PolyC.one()))

    @classmethod
    def zero(cls) -> "PolyXC":
        return cls(())

    @classmethod
    def one(cls) -> "PolyXC":
        return cls((PolyC.one(),))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> PolyC:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else PolyC.zero()

    @staticmethod
    def _coerce(value: "PolyXC | PolyC | Scalar") -> "PolyXC":
        if isinstance(value, PolyXC):
            return value
        if isinstance(value, (PolyC, int, Fraction)):
            return PolyXC((PolyC._coerce(value),))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: "PolyXC | PolyC | Scalar") -> "PolyXC":
        other = PolyXC._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        merged = list(a)
        for i, v in enumerate(b):
            merged[i] = merged[i] + v
        return PolyXC(tuple(merged))

    __radd__ = __add__

    def __neg__(self) -> "PolyXC":
        return PolyXC(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "PolyXC | PolyC | Scalar") -> "PolyXC":
        other = PolyXC._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "PolyC | Scalar") -> "PolyXC":
        return (-self) + other

    def __mul__(self, other: "PolyXC | PolyC | Scalar") -> "PolyXC":
        other = PolyXC._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return PolyXC.zero()
        out = [PolyC.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return PolyXC(tuple(out))

    __rmul__ = __mul__

    def coefficients_at(self, cval: Scalar) -> list[Fraction]:
        """Numeric x-coefficients after substituting a rational c."""
        return [a.evaluate(cval) for a in self.coeffs]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for k, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            if k == 0:
                pieces.append(f"({a})")
            elif k == 1:
                pieces.append(f"({a})*x")
            else:
                pieces.append(f"({a})*x^{k}")
        return " + ".join(pieces)


@dataclass(frozen=True)
class SeriesZ:
    """Power series in ``z`` over Q[c], truncated beyond ``z^order``.

    The coefficient tuple always has length ``order + 1``.

    >>> s = SeriesZ.from_coeffs(3, [1, PolyC.c()])
    >>> str(s.coeff(1))
    'c'
    >>> (s * s).coeff(1) == PolyC.of(0, 2)
    True
    """

    order: int
    coeffs: tuple[PolyC, ...]

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError("series order must be >= 0")
        conv = tuple(a if isinstance(a, PolyC) else PolyC.const(a) for a in self.coeffs)
        if len(conv) > self.order + 1:
            raise ValueError("more coefficients than the truncation order allows")
        conv = conv + (PolyC.zero(),) * (self.order + 1 - len(conv))
        object.__setattr__(self, "coeffs", conv)

    @classmethod
    def from_coeffs(cls, order: int, coeffs) -> "SeriesZ":
        return cls(order, tuple(coeffs))

    @classmethod
    def zero(cls, order: int) -> "SeriesZ":
        return cls(order, ())

    @classmethod
    def one(cls, order: int) -> "SeriesZ":
        return cls(order, (PolyC.one(),))

    @classmethod
    def z(cls, order: int) -> "SeriesZ":
        return cls(order, (PolyC.zero(), PolyC.one()))

    def coeff(self, k: int) -> PolyC:
        return self.coeffs[k] if 0 <= k <= self.order else PolyC.zero()

    @staticmethod
    def _coerce(value: "SeriesZ | PolyC | Scalar", order: int) -> "SeriesZ":
        if isinstance(value, SeriesZ):
            return value
        if isinstance(value, (PolyC, int, Fraction)):
            return SeriesZ(order, (PolyC._coerce(value),))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: "SeriesZ | PolyC | Scalar") -> "SeriesZ":
        other = SeriesZ._coerce(other, self.order)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        return SeriesZ(order, tuple(self.coeffs[k] + other.coeffs[k] for k in range(order + 1)))

    __radd__ = __add__

    def __neg__(self) -> "SeriesZ":
        return SeriesZ(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "SeriesZ | PolyC | Scalar") -> "SeriesZ":
        other = SeriesZ._coerce(other, self.order)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "PolyC | Scalar") -> "SeriesZ":
        return (-self) + other

    def __mul__(self, other: "SeriesZ | PolyC | Scalar") -> "SeriesZ":
        other = SeriesZ._coerce(other, self.order)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        out = [PolyC.zero()] * (order + 1)
        for i in range(order + 1):
            a = self.coeffs[i]
            if a.is_zero():
                continue
            for j in range(order + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return SeriesZ(order, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SeriesZ":
        if n < 0:
            raise ValueError("negative power of a truncated series")
        result = SeriesZ.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def times_z(self, shift: int = 1) -> "SeriesZ":
        """Multiply by z^shift (same truncation order; top terms fall off)."""
        out = (PolyC.zero(),) * shift + self.coeffs[: self.order + 1 - shift]
        return SeriesZ(self.order, out)

    def div_z(self, shift: int = 1) -> "SeriesZ":
        """Divide by z^shift; the dropped low coefficients must vanish."""
        if any(not a.is_zero() for a in self.coeffs[:shift]):
            raise ValueError("series is not divisible by z^%d" % shift)
        return SeriesZ(self.order - shift, self.coeffs[shift:])

    def div_polyc_exact(self, divisor: PolyC) -> "SeriesZ":
        """Divide every coefficient exactly by a fixed PolyC."""
        return SeriesZ(self.order, tuple(a.div_exact(divisor) for a in self.coeffs))

    def inverse(self) -> "SeriesZ":
        """Multiplicative inverse of a series whose z^0 term is a nonzero rational.

        >>> u = SeriesZ.one(4) - SeriesZ.z(4)
        >>> all(u.inverse().coeff(k) == PolyC.one() for k in range(5))
        True
        """
        lead = self.coeffs[0].constant_value()
        if lead == 0:
            raise ValueError("series unit must have a nonzero constant term")
        inv_lead = 1 / lead
        out = [PolyC.const(inv_lead)]
        for k in range(1, self.order + 1):
            acc = PolyC.zero()
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out[k - j]
            out.append(acc * (-inv_lead))
        return SeriesZ(self.order, tuple(out))

    def __truediv__(self, other: "SeriesZ | PolyC | Scalar") -> "SeriesZ":
        other = SeriesZ._coerce(other, self.order)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def truncate(self, order: int) -> "SeriesZ":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return SeriesZ(order, self.coeffs[: order + 1])

    def __str__(self) -> str:
        pieces = []
        for k, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            if k == 0:
                pieces.append(f"({a})")
            elif k == 1:
                pieces.append(f"({a})*z")
            else:
                pieces.append(f"({a})*z^{k}")
        body = " + ".join(pieces) if pieces else "0"
        return f"{body} + O(z^{self.order + 1})"
