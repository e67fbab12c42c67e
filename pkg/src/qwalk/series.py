"""Truncated complex power series and 2x2 matrices of them."""
from __future__ import annotations

import numbers

import numpy as np

from .errors import SeriesDivisionError

__all__ = ["PowerSeries", "MatrixSeries"]

_UNIT_TOL = 1e-14


class PowerSeries:
    """Coefficients ``c_0 .. c_N`` of a series truncated at degree ``N``.

    Supports ``+``, ``-``, ``*`` and ``/`` with other series of the same
    degree or with scalars.  Division requires ``|c_0| >= 1e-14`` in the
    divisor.
    """

    __array_priority__ = 100

    def __init__(self, coeffs, degree: int | None = None):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if degree is None:
            degree = len(c) - 1
        out = np.zeros(degree + 1, dtype=complex)
        k = min(len(c), degree + 1)
        out[:k] = c[:k]
        self.coeffs = out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, degree: int) -> "PowerSeries":
        return cls([value], degree)

    @classmethod
    def variable(cls, degree: int) -> "PowerSeries":
        """The series ``z``."""
        return cls([0, 1], degree)

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            if other.degree != self.degree:
                raise ValueError("degree mismatch")
            return other
        if isinstance(other, numbers.Number):
            return PowerSeries.constant(other, self.degree)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PowerSeries(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PowerSeries(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return PowerSeries(self.coeffs * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PowerSeries(np.convolve(self.coeffs, other.coeffs)[: self.degree + 1])

    __rmul__ = __mul__

    def reciprocal(self) -> "PowerSeries":
        c = self.coeffs
        if abs(c[0]) < _UNIT_TOL:
            raise SeriesDivisionError("series constant term vanishes")
        n = len(c)
        q = np.zeros(n, dtype=complex)
        q[0] = 1.0 / c[0]
        for k in range(1, n):
            q[k] = -np.dot(c[1 : k + 1], q[k - 1 :: -1][:k]) / c[0]
        return PowerSeries(q)

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            if abs(other) < _UNIT_TOL:
                raise SeriesDivisionError("division by zero scalar")
            return PowerSeries(self.coeffs / other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def compose_z2(self) -> "PowerSeries":
        """``c(z^2)`` truncated at the same degree."""
        out = np.zeros_like(self.coeffs)
        half = self.coeffs[: self.degree // 2 + 1]
        out[::2][: len(half)] = half
        return PowerSeries(out)

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by ``z**k``."""
        out = np.zeros_like(self.coeffs)
        if k <= self.degree:
            out[k:] = self.coeffs[: self.degree + 1 - k]
        return PowerSeries(out)

    def __call__(self, z):
        return np.polyval(self.coeffs[::-1], z)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        return f"PowerSeries(degree={self.degree}, c0={self.coeffs[0]:.4g})"


class MatrixSeries:
    """2x2 matrix of power series, stored as an array of shape (N+1, 2, 2)."""

    def __init__(self, coeffs: np.ndarray):
        self.coeffs = np.asarray(coeffs, dtype=complex)

    @classmethod
    def from_entries(cls, entries) -> "MatrixSeries":
        """Build from a nested 2x2 list of :class:`PowerSeries`."""
        deg = entries[0][0].degree
        arr = np.zeros((deg + 1, 2, 2), dtype=complex)
        for a in range(2):
            for b in range(2):
                arr[:, a, b] = entries[a][b].coeffs
        return cls(arr)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def coefficient(self, n: int) -> np.ndarray:
        """The 2x2 coefficient of ``z**n``."""
        return self.coeffs[n]

    def entry(self, a: int, b: int) -> PowerSeries:
        return PowerSeries(self.coeffs[:, a, b])

    def __call__(self, z):
        powers = z ** np.arange(self.degree + 1)
        return np.tensordot(powers, self.coeffs, axes=1)
