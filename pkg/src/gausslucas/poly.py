"""Complex polynomials in ascending coefficient order.

``coeffs[j]`` multiplies ``z**j``.  Values are immutable; every operation
returns a new :class:`Polynomial`.  The zero polynomial is an ordinary value
whose degree is :data:`ZERO_DEGREE`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

TRIM_TOL = 1e-12
ZERO_DEGREE = -1


class Polynomial:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray = ()):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=np.complex128).ravel()
        c.setflags(write=False)
        self._c = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def constant(cls, value: complex) -> "Polynomial":
        return cls((value,))

    @classmethod
    def monomial(cls, j: int, scale: complex = 1.0) -> "Polynomial":
        c = np.zeros(j + 1, dtype=np.complex128)
        c[j] = scale
        return cls(c)

    def __len__(self) -> int:
        return len(self._c)

    def coeff(self, j: int) -> complex:
        return complex(self._c[j]) if 0 <= j < len(self._c) else 0j

    @property
    def degree(self) -> int:
        return degree(self)

    def scale(self) -> float:
        """Largest coefficient magnitude (0 for the zero polynomial)."""
        return float(np.max(np.abs(self._c))) if len(self._c) else 0.0

    def leading(self) -> complex:
        d = degree(self)
        return complex(self._c[d]) if d >= 0 else 0j

    def trim(self, tol: float = TRIM_TOL) -> "Polynomial":
        d = degree(self, tol)
        return Polynomial(self._c[: d + 1])

    def is_zero(self, tol: float = TRIM_TOL) -> bool:
        return degree(self, tol) == ZERO_DEGREE

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.trim(0.0)._c, other.trim(0.0)._c
        return a.shape == b.shape and bool(np.all(a == b))

    def __hash__(self):
        return hash(self.trim(0.0)._c.tobytes())

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return linear_combination([(1, self), (1, other)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return linear_combination([(1, self), (-1, other)])

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self._c)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if not len(self._c) or not len(other._c):
                return Polynomial.zero()
            return Polynomial(np.convolve(self._c, other._c))
        return Polynomial(self._c * complex(other))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        out = Polynomial((1,))
        for _ in range(e):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"Polynomial({[complex(c) for c in self._c]!r})"

    def allclose(self, other: "Polynomial", rtol: float = 1e-9, atol: float = 0.0) -> bool:
        """Coefficient-wise closeness relative to the larger coefficient scale."""
        n = max(len(self), len(other))
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: len(self)] = self._c
        b[: len(other)] = other._c
        s = max(self.scale(), other.scale())
        return bool(np.max(np.abs(a - b), initial=0.0) <= rtol * s + atol)

    def to_json(self) -> dict:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self._c]}

    @classmethod
    def from_json(cls, obj) -> "Polynomial":
        """Parse ``{"coeffs": [[re, im] | re, ...]}`` (a bare list is also accepted)."""
        if isinstance(obj, dict):
            if "coeffs" not in obj:
                raise ValueError("polynomial JSON needs a 'coeffs' field")
            obj = obj["coeffs"]
        if not isinstance(obj, list):
            raise ValueError("polynomial coefficients must be a list")
        return cls(parse_complex(c) for c in obj)


def parse_complex(value) -> complex:
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ValueError(f"expected a real number or [re, im] pair, got {value!r}")


@dataclass(frozen=True)
class AffineMap:
    """The map z -> a*z + b."""

    a: complex
    b: complex = 0j

    @property
    def slope(self) -> float:
        return abs(self.a)

    @property
    def invertible(self) -> bool:
        return abs(self.a) > 0

    def __call__(self, z):
        return self.a * np.asarray(z) + self.b if np.ndim(z) else self.a * z + self.b

    def inverse(self) -> "AffineMap":
        if not self.invertible:
            raise ZeroDivisionError("affine map with zero slope has no inverse")
        return AffineMap(1 / self.a, -self.b / self.a)

    def then(self, other: "AffineMap") -> "AffineMap":
        """``other`` after ``self``: z -> other(self(z))."""
        return AffineMap(other.a * self.a, other.a * self.b + other.b)


def degree(p: Polynomial, tol: float = TRIM_TOL) -> int:
    """Index of the last coefficient above ``tol`` times the largest magnitude.

    Returns ``ZERO_DEGREE`` (-1) when every coefficient is below threshold.
    """
    mags = np.abs(p.coeffs)
    if not len(mags):
        return ZERO_DEGREE
    top = mags.max()
    if top == 0.0:
        return ZERO_DEGREE
    idx = np.nonzero(mags > tol * top)[0]
    return int(idx[-1])


def evaluate(p: Polynomial, z):
    """Horner evaluation; works elementwise on arrays."""
    c = p.coeffs
    if np.ndim(z):
        z = np.asarray(z, dtype=np.complex128)
        acc = np.zeros_like(z)
    else:
        z = complex(z)
        acc = 0j
    for cj in c[::-1]:
        acc = acc * z + cj
    return acc


def derivative(p: Polynomial, k: int = 1) -> Polynomial:
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    c = p.coeffs
    if k == 0:
        return p
    if k >= len(c):
        return Polynomial.zero()
    j = np.arange(k, len(c))
    fall = np.ones(len(j))
    for i in range(k):
        fall *= j - i
    return Polynomial(c[k:] * fall).trim(0.0)


def compose_affine(p: Polynomial, m: AffineMap) -> Polynomial:
    """Coefficients of p(a*z + b) by Horner substitution."""
    c = p.coeffs
    if not len(c):
        return Polynomial.zero()
    lin = np.array([m.b, m.a], dtype=np.complex128)
    acc = np.array([c[-1]], dtype=np.complex128)
    for cj in c[-2::-1]:
        acc = np.convolve(acc, lin)
        acc[0] += cj
    return Polynomial(acc)


def from_roots(roots: Sequence[complex], leading: complex = 1.0) -> Polynomial:
    """Expand ``leading * prod(z - r)`` as a left fold in input order."""
    if leading == 0:
        raise ValueError("leading coefficient must be nonzero")
    acc = np.array([1.0 + 0j])
    for r in roots:
        nxt = np.zeros(len(acc) + 1, dtype=np.complex128)
        nxt[1:] = acc
        nxt[:-1] -= complex(r) * acc
        acc = nxt
    return Polynomial(acc * complex(leading))


def linear_combination(terms: Iterable[tuple[complex, Polynomial]]) -> Polynomial:
    terms = list(terms)
    n = max((len(p) for _, p in terms), default=0)
    acc = np.zeros(n, dtype=np.complex128)
    for w, p in terms:
        acc[: len(p)] += complex(w) * p.coeffs
    return Polynomial(acc).trim()


def shifted_power(alpha: complex, s: int) -> Polynomial:
    """(z + alpha)**s via the binomial theorem."""
    return Polynomial([comb(s, j) * alpha ** (s - j) for j in range(s + 1)])
