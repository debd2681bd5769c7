"""Scalar quaternion arithmetic.

A quaternion is ``q = re + i*I + j*J + k*K`` with real coefficients and
``I^2 = J^2 = K^2 = IJK = -1``.  Everything here is binary-64; there is a
single canonical complex representative per similarity class, namely
``Re(q) + |Im(q)|*1i`` (nonnegative imaginary part).

The complex split ``q = c1 + c2*J`` with ``c1 = re + I*1i`` and
``c2 = J + K*1i`` is used throughout the matrix layer; ``split`` and
``from_split`` round-trip it exactly.
"""

import math

from .errors import ZeroInverseError
from .tolerances import DEFAULT


class Quaternion:
    """One element of the real quaternion algebra."""

    __slots__ = ("re", "i", "j", "k")

    def __init__(self, re=0.0, i=0.0, j=0.0, k=0.0):
        self.re = float(re)
        self.i = float(i)
        self.j = float(j)
        self.k = float(k)

    # -- representation ------------------------------------------------

    def __repr__(self):
        return f"Quaternion({self.re!r}, {self.i!r}, {self.j!r}, {self.k!r})"

    def components(self):
        return (self.re, self.i, self.j, self.k)

    def split(self):
        """Complex split (c1, c2) with q = c1 + c2*j, exact."""
        return (complex(self.re, self.i), complex(self.j, self.k))

    def is_finite(self):
        return all(math.isfinite(c) for c in self.components())

    # -- algebra -------------------------------------------------------

    def __add__(self, other):
        o = as_quaternion(other)
        return Quaternion(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_quaternion(other)
        return Quaternion(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)

    def __rsub__(self, other):
        return as_quaternion(other) - self

    def __neg__(self):
        return Quaternion(-self.re, -self.i, -self.j, -self.k)

    def __mul__(self, other):
        a1, b1, c1, d1 = self.components()
        o = as_quaternion(other)
        a2, b2, c2, d2 = o.components()
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        return as_quaternion(other) * self

    def __truediv__(self, other):
        o = as_quaternion(other)
        return self * o.inverse()

    def __eq__(self, other):
        try:
            o = as_quaternion(other)
        except TypeError:
            return NotImplemented
        return self.components() == o.components()

    def __hash__(self):
        return hash(self.components())

    def conjugate(self):
        return Quaternion(self.re, -self.i, -self.j, -self.k)

    def modulus_sq(self):
        return self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k

    def modulus(self):
        return math.sqrt(self.modulus_sq())

    __abs__ = modulus

    def inverse(self, tol=DEFAULT):
        """q^{-1} = conj(q)/|q|^2.  Raises ZeroInverseError below tolerance."""
        m2 = self.modulus_sq()
        if m2 < tol.equality * tol.equality:
            raise ZeroInverseError("quaternion modulus below tolerance; no inverse")
        c = self.conjugate()
        return Quaternion(c.re / m2, c.i / m2, c.j / m2, c.k / m2)

    def real_part(self):
        return self.re

    def imag_norm(self):
        """|Im(q)|, the Euclidean norm of the (i, j, k) part."""
        return math.sqrt(self.i * self.i + self.j * self.j + self.k * self.k)

    def unit(self, tol=DEFAULT):
        m = self.modulus()
        if m < tol.equality:
            raise ZeroInverseError("cannot normalize a near-zero quaternion")
        return Quaternion(self.re / m, self.i / m, self.j / m, self.k / m)

    def approx_equal(self, other, atol=1e-12):
        o = as_quaternion(other)
        return (self - o).modulus() <= atol


ZERO = Quaternion()
ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def as_quaternion(x):
    """Coerce int/float/complex/4-sequence to Quaternion."""
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, (int, float)):
        return Quaternion(x)
    if isinstance(x, complex):
        return Quaternion(x.real, x.imag)
    if isinstance(x, (tuple, list)) and len(x) == 4:
        return Quaternion(*x)
    raise TypeError(f"cannot interpret {x!r} as a quaternion")


def from_split(c1, c2):
    """Rebuild q = c1 + c2*j from the complex split, exactly."""
    c1 = complex(c1)
    c2 = complex(c2)
    return Quaternion(c1.real, c1.imag, c2.real, c2.imag)


def multiply(a, b):
    """Hamilton product (non-commutative)."""
    return as_quaternion(a) * as_quaternion(b)


def similar(z, w, tol=DEFAULT):
    """Whether z and w lie in the same conjugation orbit {q z q^{-1}}.

    Two quaternions are similar exactly when their real parts and moduli
    agree, so no conjugator search is needed.
    """
    z = as_quaternion(z)
    w = as_quaternion(w)
    return abs(z.re - w.re) <= tol.equality and abs(z.modulus() - w.modulus()) <= tol.equality


def class_representative(z):
    """Canonical complex representative Re(z) + |Im(z)|*1i of z's class."""
    z = as_quaternion(z)
    return complex(z.re, z.imag_norm())


def standardize_conjugator(q, tol=DEFAULT):
    """Unit w such that w^{-1} q w equals class_representative(q).

    Rotates the imaginary axis of q onto the i-axis; w = 1 when q is
    already real or complex with nonnegative i-part.
    """
    q = as_quaternion(q)
    n = q.imag_norm()
    if n <= tol.equality:
        return Quaternion(1.0)
    ax, ay, az = q.i / n, q.j / n, q.k / n
    # rotation axis = cross((1,0,0), (ax,ay,az)), angle phi with cos(phi) = ax
    cx, cy, cz = 0.0, -az, ay
    cn = math.sqrt(cy * cy + cz * cz)
    if cn <= 1e-15:
        if ax > 0:
            return Quaternion(1.0)
        return Quaternion(0.0, 0.0, 1.0, 0.0)  # half-turn about j sends i to -i
    phi = math.atan2(cn, ax)
    s = math.sin(phi / 2.0) / cn
    return Quaternion(math.cos(phi / 2.0), 0.0, cy * s, cz * s)
