"""Truncated bivariate Taylor expansions for exact derivative bookkeeping.

Potential fields have to report their own derivatives up to fourth order
(the adapted-frame curvature needs first derivatives of the surface
Christoffel symbols, which already contain third derivatives of the
potential).  Finite differencing the potential would contaminate the very
error budgets the curvature oracles are supposed to isolate, so every
analytic source is evaluated through a small polynomial algebra instead:
a `Jet` stores the Taylor coefficients of a function around a batch of
base points, truncated at total degree `ORDER`, and arithmetic on jets is
ordinary truncated polynomial arithmetic.

Coefficient layout: ``c[..., i, j]`` multiplies ``dx**i * dy**j``; entries
with ``i + j > ORDER`` stay identically zero.  The partial derivative
``d^(i+j) f / dx^i dy^j`` at the base point equals ``c[..., i, j] * i! * j!``.
"""

from __future__ import annotations

import math

import numpy as np

ORDER = 4

_FACT = np.array([math.factorial(k) for k in range(ORDER + 1)], dtype=float)
# (i, j) pairs with i + j <= ORDER, the only coefficients that may be nonzero.
_VALID = [(i, j) for i in range(ORDER + 1) for j in range(ORDER + 1) if i + j <= ORDER]


class Jet:
    """Taylor polynomial of total degree <= ORDER around a batch of points."""

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = c

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(value, shape=(), dtype=float):
        value = np.asarray(value)
        shape = np.broadcast_shapes(shape, value.shape)
        c = np.zeros(shape + (ORDER + 1, ORDER + 1), dtype=np.result_type(value, dtype))
        c[..., 0, 0] = value
        return Jet(c)

    @staticmethod
    def coordinate(x0, y0, axis):
        """Jet of the coordinate function x (axis=0) or y (axis=1)."""
        x0 = np.asarray(x0, dtype=float)
        y0 = np.asarray(y0, dtype=float)
        shape = np.broadcast_shapes(x0.shape, y0.shape)
        c = np.zeros(shape + (ORDER + 1, ORDER + 1))
        if axis == 0:
            c[..., 0, 0] = x0
            c[..., 1, 0] = 1.0
        else:
            c[..., 0, 0] = y0
            c[..., 0, 1] = 1.0
        return Jet(c)

    @staticmethod
    def radius_sq(x0, y0):
        """Jet of s = x^2 + y^2 (exact, degree 2)."""
        x0 = np.asarray(x0, dtype=float)
        y0 = np.asarray(y0, dtype=float)
        shape = np.broadcast_shapes(x0.shape, y0.shape)
        c = np.zeros(shape + (ORDER + 1, ORDER + 1))
        c[..., 0, 0] = x0 * x0 + y0 * y0
        c[..., 1, 0] = 2.0 * x0
        c[..., 0, 1] = 2.0 * y0
        c[..., 2, 0] = 1.0
        c[..., 0, 2] = 1.0
        return Jet(c)

    @staticmethod
    def complex_power(coeff, n, x0, y0):
        """Jet of the complex monomial coeff * z**n, z = x + iy.

        Expanded exactly around z0 = x0 + i*y0; returns a complex-valued
        jet (take .real_part() for the harmonic polynomial Re(coeff z^n)).
        """
        x0 = np.asarray(x0, dtype=float)
        y0 = np.asarray(y0, dtype=float)
        shape = np.broadcast_shapes(x0.shape, y0.shape)
        z0 = np.broadcast_to(x0 + 1j * y0, shape)
        c = np.zeros(shape + (ORDER + 1, ORDER + 1), dtype=complex)
        for k in range(min(n, ORDER) + 1):
            # coeff * C(n,k) z0^(n-k) * (dx + i dy)^k
            base = coeff * math.comb(n, k) * z0 ** (n - k)
            for b in range(k + 1):
                a = k - b
                c[..., a, b] += base * math.comb(k, b) * (1j**b)
        return Jet(c)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.c + other.c)
        c = self.c.copy()
        c[..., 0, 0] += other
        return Jet(c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.c - other.c)
        c = self.c.copy()
        c[..., 0, 0] -= other
        return Jet(c)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * other)
        a, b = self.c, other.c
        out = np.zeros(np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (ORDER + 1, ORDER + 1),
                       dtype=np.result_type(a, b))
        for i, j in _VALID:
            acc = 0.0
            for p in range(i + 1):
                for q in range(j + 1):
                    acc = acc + a[..., p, q] * b[..., i - p, j - q]
            out[..., i, j] = acc
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.c / other)

    def compose(self, derivs):
        """Jet of g(f) given univariate derivatives of g at f's base value.

        `derivs` is the sequence [g(u0), g'(u0), ..., g''''(u0)] evaluated at
        u0 = value of this jet; arrays broadcast against the batch shape.
        """
        delta = Jet(self.c.copy())
        delta.c[..., 0, 0] = 0.0
        # Horner evaluation of sum_k g^(k)/k! * delta^k
        out = Jet.const(np.asarray(derivs[ORDER]) / _FACT[ORDER],
                        self.c.shape[:-2], dtype=self.c.dtype)
        for k in range(ORDER - 1, -1, -1):
            out = out * delta + np.asarray(derivs[k]) / _FACT[k]
        return out

    def reciprocal(self):
        u0 = self.c[..., 0, 0]
        derivs = [(-1.0) ** k * _FACT[k] / u0 ** (k + 1) for k in range(ORDER + 1)]
        return self.compose(derivs)

    def real_part(self):
        return Jet(self.c.real.copy()) if np.iscomplexobj(self.c) else self

    # -- extraction ---------------------------------------------------

    @property
    def value(self):
        return self.c[..., 0, 0]

    def deriv(self, i, j):
        """Partial derivative d^(i+j) f / dx^i dy^j at the base point."""
        return self.c[..., i, j] * (_FACT[i] * _FACT[j])
