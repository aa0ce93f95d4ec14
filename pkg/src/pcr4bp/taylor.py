"""Truncated Taylor series with interval coefficients.

Jets here expand *about a box*: coefficient ``k`` of a univariate jet (and
coefficient ``(i, j)`` of a bivariate one) is an interval that contains the
true scaled derivative ``f^(k)(x) / k!`` at every point ``x`` of the
expansion box.  Coefficients therefore double as derivative bounds over a
whole domain, which is exactly how the perturbation estimates consume them.

Bivariate jets are represented as a series in the first variable whose
coefficients are series in the second.  All the univariate recurrences
(product, quotient, square root, sine/cosine, integer powers, arcsine) are
written against the coefficient ring only, so they serve both layers
unchanged: for :class:`Jet2` the "scalars" of the outer series are inner
:class:`Jet1` values and the recursion bottoms out in :class:`Interval`.

Division-style recurrences need an invertible leading coefficient; when the
leading interval touches zero (or leaves the domain of sqrt/arcsin) the
operation raises :class:`JetSingularity` and the caller is expected to
bisect its box.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

from .interval import (
    DivisionByZeroInterval,
    DomainError,
    IBox,
    Interval,
)

Coeff = Union[Interval, "Jet1"]

_I_ZERO = Interval(0.0)
_I_ONE = Interval(1.0)


class JetSingularity(Exception):
    """Leading-coefficient domain violation in a series recurrence."""


class ReductionUnavailable(Exception):
    """The implicit relation is not monotone over the working box."""


def _zero_like(c: Coeff) -> Coeff:
    if isinstance(c, Interval):
        return _I_ZERO
    return c.zero_like()


def _scale(c: Coeff, s: Interval) -> Coeff:
    """Multiply a coefficient by an interval scalar."""
    if isinstance(c, Interval):
        return c * s
    return c.scale(s)


class Jet1:
    """Univariate truncated Taylor series over an interval coefficient ring.

    ``coeffs[k]`` encloses the k-th Taylor coefficient (derivative over k!)
    of the represented function at every point of the expansion box.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Coeff]):
        if not coeffs:
            raise ValueError("a jet needs at least the constant coefficient")
        self.coeffs: tuple[Coeff, ...] = tuple(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value: Coeff, order: int) -> "Jet1":
        zero = _zero_like(value)
        return cls([value] + [zero] * order)

    @classmethod
    def variable(cls, value: Interval, order: int) -> "Jet1":
        """Jet of the identity map expanded over ``value``."""
        if order < 1:
            raise ValueError("a variable jet needs order >= 1")
        return cls([value, _I_ONE] + [_I_ZERO] * (order - 1))

    def zero_like(self) -> "Jet1":
        zero = _zero_like(self.coeffs[0])
        return Jet1([zero] * (self.order + 1))

    def scale(self, s: Interval) -> "Jet1":
        return Jet1([_scale(c, s) for c in self.coeffs])

    def truncate(self, order: int) -> "Jet1":
        if order >= self.order:
            return self
        return Jet1(self.coeffs[: order + 1])

    def _match(self, other: "Jet1") -> None:
        if self.order != other.order:
            raise ValueError(f"jet orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "Jet1") -> "Jet1":
        self._match(other)
        return Jet1([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Jet1") -> "Jet1":
        self._match(other)
        return Jet1([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Jet1":
        return Jet1([-a for a in self.coeffs])

    def __mul__(self, other: "Jet1") -> "Jet1":
        self._match(other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            acc = a[0] * b[k]
            for j in range(1, k + 1):
                acc = acc + a[j] * b[k - j]
            out.append(acc)
        return Jet1(out)

    def __truediv__(self, other: "Jet1") -> "Jet1":
        self._match(other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        out: list[Coeff] = []
        for k in range(n + 1):
            acc = a[k]
            for j in range(k):
                acc = acc - out[j] * b[k - j]
            try:
                out.append(acc / b[0])
            except DivisionByZeroInterval as exc:
                raise JetSingularity("zero in leading divisor coefficient") from exc
        return Jet1(out)

    def recip(self) -> "Jet1":
        one = Jet1.constant(
            _I_ONE if isinstance(self.coeffs[0], Interval) else Jet1.constant(_I_ONE, self.coeffs[0].order),
            self.order,
        )
        return one / self

    def sq(self) -> "Jet1":
        """Square; the value coefficient uses the sign-aware scalar square.

        The convolution alone would lose the nonnegativity of, say,
        [-a, b]^2 at the value level; recomputing coefficient 0 as a
        proper interval square is sound (it still contains the true
        range) and keeps parity with direct interval evaluation.
        """
        p = self * self
        coeffs = list(p.coeffs)
        coeffs[0] = self.coeffs[0].sq()
        return Jet1(coeffs)

    def powi(self, n: int) -> "Jet1":
        if n < 0:
            return self.recip().powi(-n)
        if n == 0:
            base: Coeff = _I_ONE if isinstance(self.coeffs[0], Interval) else Jet1.constant(_I_ONE, self.coeffs[0].order)
            return Jet1.constant(base, self.order)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def sqrt(self) -> "Jet1":
        a = self.coeffs
        n = self.order
        try:
            f0 = a[0].sqrt()
        except DomainError as exc:
            raise JetSingularity("sqrt of a leading coefficient touching negatives") from exc
        out: list[Coeff] = [f0]
        if n == 0:
            return Jet1(out)
        two_f0 = _scale(f0, Interval(2.0))
        for k in range(1, n + 1):
            acc = a[k]
            for j in range(1, k):
                acc = acc - out[j] * out[k - j]
            try:
                out.append(acc / two_f0)
            except DivisionByZeroInterval as exc:
                raise JetSingularity("sqrt jet with vanishing leading value") from exc
        return Jet1(out)

    def sin_cos(self) -> tuple["Jet1", "Jet1"]:
        u = self.coeffs
        n = self.order
        s: list[Coeff] = [u[0].sin()]
        c: list[Coeff] = [u[0].cos()]
        for k in range(1, n + 1):
            ssum = None
            csum = None
            for j in range(1, k + 1):
                ju = _scale(u[j], Interval(float(j)))
                term_s = ju * c[k - j]
                term_c = ju * s[k - j]
                ssum = term_s if ssum is None else ssum + term_s
                csum = term_c if csum is None else csum + term_c
            inv_k = Interval.ratio(1, k)
            s.append(_scale(ssum, inv_k))
            c.append(-_scale(csum, inv_k))
        return Jet1(s), Jet1(c)

    def sin(self) -> "Jet1":
        return self.sin_cos()[0]

    def cos(self) -> "Jet1":
        return self.sin_cos()[1]

    def arcsin(self) -> "Jet1":
        """Arcsine via derivative transport: f' = u' / sqrt(1 - u^2)."""
        u = self.coeffs
        n = self.order
        try:
            f0 = u[0].arcsin()
        except DomainError as exc:
            raise JetSingularity("arcsin of a leading coefficient outside [-1, 1]") from exc
        if n == 0:
            return Jet1([f0])
        one = _I_ONE if isinstance(u[0], Interval) else Jet1.constant(_I_ONE, u[0].order)
        radicand = Jet1.constant(one, n - 1) - self.truncate(n - 1).sq()
        g = self.differentiate() / radicand.sqrt()
        out: list[Coeff] = [f0]
        for k in range(1, n + 1):
            out.append(_scale(g.coeffs[k - 1], Interval.ratio(1, k)))
        return Jet1(out)

    def differentiate(self) -> "Jet1":
        """Jet of the derivative, one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        return Jet1(
            [_scale(self.coeffs[k], Interval(float(k))) for k in range(1, self.order + 1)]
        )

    def eval(self, dx: Interval) -> Coeff:
        """Horner evaluation at an offset from the expansion box."""
        acc: Coeff = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = _scale_right(acc, dx) + c
        return acc

    def __repr__(self) -> str:
        return f"Jet1({list(self.coeffs)!r})"


def _scale_right(c: Coeff, s: Interval) -> Coeff:
    # multiplication by an interval scalar, spelled for either ring
    return _scale(c, s)


class Jet2:
    """Bivariate jet: a series in x whose coefficients are series in y.

    Only coefficients with total degree ``i + j <= order`` carry the
    inclusion guarantee; the rectangular tail the nested representation
    also computes is ignored by :meth:`coeff` and :meth:`partials`.
    """

    __slots__ = ("order", "_nested")

    def __init__(self, nested: Jet1, order: int):
        self.order = order
        self._nested = nested

    @classmethod
    def lift(cls, box: IBox, var_index: int, order: int = 6) -> "Jet2":
        """Jet of a coordinate function over ``box``.

        ``var_index`` 0 means the first (radial) component, 1 the second.
        """
        if var_index not in (0, 1):
            raise ValueError("var_index must be 0 or 1")
        if order < 1:
            raise ValueError("lift needs order >= 1")
        inner_zero = Jet1.constant(_I_ZERO, order)
        if var_index == 0:
            c0 = Jet1.constant(box.x1, order)
            c1 = Jet1.constant(_I_ONE, order)
            coeffs = [c0, c1] + [inner_zero] * (order - 1)
        else:
            c0 = Jet1.variable(box.x2, order)
            coeffs = [c0] + [inner_zero] * order
        return cls(Jet1(coeffs), order)

    @classmethod
    def constant(cls, value: Interval, order: int = 6) -> "Jet2":
        inner = Jet1.constant(value, order)
        inner_zero = Jet1.constant(_I_ZERO, order)
        return cls(Jet1([inner] + [inner_zero] * order), order)

    def coeff(self, i: int, j: int) -> Interval:
        if i + j > self.order:
            raise IndexError(f"total degree {i + j} exceeds jet order {self.order}")
        return self._nested.coeffs[i].coeffs[j]

    def partials(self, i: int, j: int) -> Interval:
        """Enclosure of the mixed partial d^(i+j) f / dx^i dy^j over the box."""
        fact = float(math.factorial(i) * math.factorial(j))
        if fact == 1.0:
            return self.coeff(i, j)
        return self.coeff(i, j) * Interval(fact)

    def value(self) -> Interval:
        return self.coeff(0, 0)

    def _wrap(self, nested: Jet1) -> "Jet2":
        return Jet2(nested, self.order)

    def __add__(self, other: "Jet2") -> "Jet2":
        return self._wrap(self._nested + other._nested)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return self._wrap(self._nested - other._nested)

    def __neg__(self) -> "Jet2":
        return self._wrap(-self._nested)

    def __mul__(self, other: "Jet2") -> "Jet2":
        return self._wrap(self._nested * other._nested)

    def __truediv__(self, other: "Jet2") -> "Jet2":
        return self._wrap(self._nested / other._nested)

    def recip(self) -> "Jet2":
        return self._wrap(self._nested.recip())

    def sq(self) -> "Jet2":
        return self._wrap(self._nested.sq())

    def powi(self, n: int) -> "Jet2":
        return self._wrap(self._nested.powi(n))

    def sqrt(self) -> "Jet2":
        return self._wrap(self._nested.sqrt())

    def sin_cos(self) -> tuple["Jet2", "Jet2"]:
        s, c = self._nested.sin_cos()
        return self._wrap(s), self._wrap(c)

    def sin(self) -> "Jet2":
        return self.sin_cos()[0]

    def cos(self) -> "Jet2":
        return self.sin_cos()[1]

    def scale(self, s: Interval) -> "Jet2":
        return self._wrap(self._nested.scale(s))

    def truncate(self, order: int) -> "Jet2":
        if order >= self.order:
            return self
        outer = Jet1([c.truncate(order) for c in self._nested.coeffs[: order + 1]])
        return Jet2(outer, order)

    def __repr__(self) -> str:
        rows = [
            [str(self.coeff(i, j)) for j in range(self.order - i + 1)]
            for i in range(self.order + 1)
        ]
        return f"Jet2(order={self.order}, coeffs={rows!r})"


def partials(f_jet: Jet2, i: int, j: int) -> Interval:
    """Module-level alias for :meth:`Jet2.partials`."""
    return f_jet.partials(i, j)


def _compose_with_curve(f: Jet2, curve: Jet1) -> Jet1:
    """Coefficients of x -> f(x, y(x)) where ``curve`` is the deviation jet.

    ``curve`` must have zero constant coefficient: it is the series of
    y(x) - y(x0) in the x-offset, while the spread of y over the box is
    already absorbed in the expansion of ``f``.
    """
    order = f.order
    # powers of the deviation series, truncated at `order`
    pow_cache: list[Jet1] = [Jet1.constant(_I_ONE, order), curve]
    for _ in range(2, order + 1):
        pow_cache.append(pow_cache[-1] * curve)
    out: list[Interval] = [_I_ZERO] * (order + 1)
    for i in range(order + 1):
        inner = f._nested.coeffs[i]
        # evaluate the inner y-polynomial at the curve series
        acc = pow_cache[0].scale(inner.coeffs[0])
        for j in range(1, order - i + 1):
            acc = acc + pow_cache[j].scale(inner.coeffs[j])
        # shift by x^i and accumulate
        for k in range(order - i + 1):
            out[k + i] = out[k + i] + acc.coeffs[k]
    return Jet1(out)


def implicit_curve_jet(f1_jet: Jet2, f2_jet: Jet2, order: int) -> Jet1:
    """Jet of the reduced function g(x) = f1(x, y(x)) with f2(x, y(x)) = 0.

    Both jets must be expanded over a box whose second component is a
    verified enclosure of the solution branch y(x) over the first.  The
    branch coefficients are recovered order by order from the vanishing of
    the composed f2 series, each step dividing by the enclosure of the
    partial of f2 in y; the final composition with f1 yields g.
    """
    if order > f2_jet.order or order > f1_jet.order:
        raise ValueError("requested order exceeds the supplied jets")
    dy = f2_jet.coeff(0, 1)
    if dy.contains(0.0):
        raise ReductionUnavailable(
            f"partial of the defining component in y contains zero: {dy}"
        )
    f1t = f1_jet.truncate(order)
    f2t = f2_jet.truncate(order)
    curve_coeffs: list[Interval] = [_I_ZERO] * (order + 1)
    for m in range(1, order + 1):
        curve = Jet1(curve_coeffs)
        c_m = _compose_with_curve(f2t, curve).coeffs[m]
        curve_coeffs[m] = -(c_m / dy)
    curve = Jet1(curve_coeffs)
    g = _compose_with_curve(f1t, curve)
    return g
