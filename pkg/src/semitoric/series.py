"""Truncated bivariate power series in (l, j).

Sparse representation: a coefficient map keyed by exponent pairs, truncated
by total degree.  The series appearing in this project have at most a handful
of terms, so clarity wins over speed everywhere in this module.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ConvergenceError, DomainError

__all__ = ["BivariateSeries", "invert_second"]

_EQ_TOL = 1e-12


@dataclass(frozen=True)
class BivariateSeries:
    """Polynomial in two variables truncated at a fixed total degree.

    ``coeffs`` maps ``(a, b)`` with ``a + b <= max_degree`` to the coefficient
    of ``l**a * j**b``.  Absent pairs are exactly zero.
    """

    max_degree: int
    coeffs: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        if self.max_degree < 0:
            raise DomainError("max_degree must be non-negative")
        clean = {}
        for (a, b), c in self.coeffs.items():
            if a < 0 or b < 0:
                raise DomainError(f"negative exponent pair {(a, b)}")
            if a + b > self.max_degree:
                raise DomainError(
                    f"term {(a, b)} exceeds max_degree {self.max_degree}"
                )
            if c != 0.0:
                clean[(int(a), int(b))] = float(c)
        object.__setattr__(self, "coeffs", clean)

    def __getitem__(self, key: tuple[int, int]) -> float:
        return self.coeffs.get(key, 0.0)

    def _binop(self, other: "BivariateSeries", sign: float) -> "BivariateSeries":
        if self.max_degree != other.max_degree:
            raise DomainError("degree mismatch in series arithmetic")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0.0) + sign * c
        return BivariateSeries(self.max_degree, out)

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        return self._binop(other, 1.0)

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        return self._binop(other, -1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return BivariateSeries(
                self.max_degree, {k: other * c for k, c in self.coeffs.items()}
            )
        if self.max_degree != other.max_degree:
            raise DomainError("degree mismatch in series arithmetic")
        out: dict[tuple[int, int], float] = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                a, b = a1 + a2, b1 + b2
                if a + b <= self.max_degree:
                    key = (a, b)
                    out[key] = out.get(key, 0.0) + c1 * c2
        return BivariateSeries(self.max_degree, out)

    __rmul__ = __mul__

    def __call__(self, l: float, j: float) -> float:
        return self.eval(l, j)

    def eval(self, l: float, j: float) -> float:
        """Evaluate at a point, Horner in l with inner Horner in j."""
        deg = self.max_degree
        # rows[a][b] = coefficient of l^a j^b
        total = 0.0
        for a in range(deg, -1, -1):
            row = 0.0
            for b in range(deg - a, -1, -1):
                row = row * j + self.coeffs.get((a, b), 0.0)
            total = total * l + row
        return total

    def isclose(self, other: "BivariateSeries", tol: float = _EQ_TOL) -> bool:
        if self.max_degree != other.max_degree:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self[k] - other[k]) <= tol for k in keys)

    def max_residual(self, other: "BivariateSeries") -> float:
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def to_json(self) -> str:
        terms = [
            [a, b, c] for (a, b), c in sorted(self.coeffs.items())
        ]
        return json.dumps({"max_degree": self.max_degree, "terms": terms})

    @classmethod
    def from_json(cls, text: str) -> "BivariateSeries":
        data = json.loads(text)
        coeffs = {(int(a), int(b)): float(c) for a, b, c in data["terms"]}
        return cls(int(data["max_degree"]), coeffs)

    @classmethod
    def zero(cls, max_degree: int) -> "BivariateSeries":
        return cls(max_degree, {})


def _compose_second(f: BivariateSeries, g: BivariateSeries) -> BivariateSeries:
    """f(l, g(l, j)) truncated; f's second variable is substituted by g."""
    deg = f.max_degree
    one = BivariateSeries(deg, {(0, 0): 1.0})
    lser = BivariateSeries(deg, {(1, 0): 1.0})
    # powers of g and of l, built once
    gpow = [one]
    for _ in range(deg):
        gpow.append(gpow[-1] * g)
    lpow = [one]
    for _ in range(deg):
        lpow.append(lpow[-1] * lser)
    out = BivariateSeries.zero(deg)
    for (a, b), c in f.coeffs.items():
        out = out + c * (lpow[a] * gpow[b])
    return out


def invert_second(f: BivariateSeries, tol: float = 1e-14, max_iter: int = 64) -> BivariateSeries:
    """Solve j = f(l, h) for h = g(l, j), as truncated series.

    ``f`` must have zero constant term and a nonzero linear coefficient on its
    second variable.  Newton iteration on series coefficients; the degree is
    tiny so robustness is preferred over a closed-form Lagrange inversion.
    Returns ``g`` with ``f(l, g(l, j)) = j`` through the common degree.
    """
    if abs(f[(0, 0)]) > tol:
        raise DomainError("series to invert must have zero constant term")
    c01 = f[(0, 1)]
    if c01 == 0.0:
        raise DomainError("zero linear coefficient on the second variable")
    deg = f.max_degree
    if deg < 1:
        raise DomainError("max_degree must be at least 1 to invert")
    jser = BivariateSeries(deg, {(0, 1): 1.0})
    # first guess: invert the linear part exactly
    g = BivariateSeries(deg, {(0, 1): 1.0 / c01, (1, 0): -f[(1, 0)] / c01})
    for _ in range(max_iter):
        resid = _compose_second(f, g) - jser
        if all(abs(c) < tol for c in resid.coeffs.values()):
            return g
        g = g - (1.0 / c01) * resid
    raise ConvergenceError("series inversion did not converge")
