"""Second-order jets in the counting field: exact chi-derivatives by arithmetic.

A Jet2 carries (value, first, second) where first = i d/dchi and
second = (i d/dchi)^2 evaluated at chi = 0. Sums and products follow the
truncated Taylor (Leibniz) rules, so any polynomial of tilted-generator
entries — in particular the characteristic-polynomial coefficients — comes
out with exact derivatives, no step-size tuning.

JetMatrix is the same ring element-wise over a square matrix, stored as
three stacked arrays. Accumulation happens in extended precision
(clongdouble, 80-bit on x86-64): plain float64 leaves no margin against the
1e-9 closed-form agreement target on stiff parameter draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liouvillian import Superoperator

ACCUM_DTYPE = np.clongdouble


@dataclass(frozen=True)
class Jet2:
    """Scalar truncated Taylor number (value, i d/dchi, (i d/dchi)^2 at chi = 0)."""

    v: complex
    d1: complex = 0.0
    d2: complex = 0.0

    @classmethod
    def constant(cls, z: complex) -> "Jet2":
        return cls(complex(z), 0.0, 0.0)

    @classmethod
    def counting_entry(cls, base: complex, tag: int) -> "Jet2":
        """Entry base * e^{i tag chi}: i d/dchi brings down -tag per order."""
        return cls(complex(base), -tag * complex(base), tag * tag * complex(base))

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.v + other.v, self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.v - other.v, self.d1 - other.d1, self.d2 - other.d2)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.v, -self.d1, -self.d2)

    def __mul__(self, other: "Jet2") -> "Jet2":
        return Jet2(
            self.v * other.v,
            self.d1 * other.v + self.v * other.d1,
            self.d2 * other.v + 2.0 * self.d1 * other.d1 + self.v * other.d2,
        )

    def scaled(self, c: complex) -> "Jet2":
        return Jet2(c * self.v, c * self.d1, c * self.d2)


class JetMatrix:
    """Square matrix with Jet2 entries, stored as stacked (v, d1, d2) arrays."""

    def __init__(self, v: np.ndarray, d1: np.ndarray, d2: np.ndarray):
        self.v = np.asarray(v, dtype=ACCUM_DTYPE)
        self.d1 = np.asarray(d1, dtype=ACCUM_DTYPE)
        self.d2 = np.asarray(d2, dtype=ACCUM_DTYPE)

    @property
    def dim(self) -> int:
        return self.v.shape[0]

    @classmethod
    def from_superoperator(cls, gen: Superoperator) -> "JetMatrix":
        base = gen.bare()
        tags = gen.counting_tags
        return cls(base, -tags * base, (tags * tags) * base)

    def __matmul__(self, other: "JetMatrix") -> "JetMatrix":
        return JetMatrix(
            self.v @ other.v,
            self.d1 @ other.v + self.v @ other.d1,
            self.d2 @ other.v + 2.0 * (self.d1 @ other.d1) + self.v @ other.d2,
        )

    def add_scalar_diag(self, c: Jet2) -> "JetMatrix":
        eye = np.eye(self.dim, dtype=ACCUM_DTYPE)
        return JetMatrix(self.v + c.v * eye, self.d1 + c.d1 * eye, self.d2 + c.d2 * eye)

    def trace(self) -> Jet2:
        return Jet2(complex(np.trace(self.v)), complex(np.trace(self.d1)), complex(np.trace(self.d2)))

    def entry(self, i: int, j: int) -> Jet2:
        return Jet2(complex(self.v[i, j]), complex(self.d1[i, j]), complex(self.d2[i, j]))

    def balanced(self) -> "JetMatrix":
        """Similarity-scale rows/columns by powers of two toward equal norms.

        The characteristic polynomial is similarity-invariant, and balancing a
        stiff generator sharply reduces cancellation in the coefficient
        recursion. The same diagonal scaling applies to all three derivative
        layers (the scaling is chi-independent).
        """
        a = np.abs(self.v.astype(complex))
        n = self.dim
        d = np.ones(n)
        for _ in range(8):
            converged = True
            for i in range(n):
                r = a[i, :].sum() - a[i, i]
                c = a[:, i].sum() - a[i, i]
                if r > 0.0 and c > 0.0:
                    f = 2.0 ** round(0.5 * np.log2(r / c))
                    if f != 1.0:
                        converged = False
                        d[i] *= f
                        a[:, i] *= f
                        a[i, :] /= f
            if converged:
                break
        scale = np.outer(1.0 / d, d)
        return JetMatrix(self.v * scale, self.d1 * scale, self.d2 * scale)


def charpoly_coefficients(mat: JetMatrix) -> list[Jet2]:
    """Coefficients a_0..a_n of det(xi I - M) = sum a_k xi^k via Faddeev-LeVerrier.

    a_n = 1. Exact in the chi-derivatives because the recursion is a
    polynomial in the matrix entries.
    """
    n = mat.dim
    coeffs: list[Jet2] = [Jet2.constant(0.0)] * (n + 1)
    coeffs[n] = Jet2.constant(1.0)
    m = mat
    tr = m.trace()
    coeffs[n - 1] = -tr
    for k in range(2, n + 1):
        m = mat @ m.add_scalar_diag(coeffs[n - k + 1])
        tr = m.trace()
        coeffs[n - k] = tr.scaled(-1.0 / k)
    return coeffs
