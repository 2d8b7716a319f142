"""Truncated multi-dual numbers R[e1..en]/(ei^2 = 0).

An element stores one coefficient per subset of tags, indexed by bitmask
(bit ``i - 1`` stands for tag ``i``). Evaluating a smooth function at
``x + sum_i ei * hi`` leaves the mixed directional differential in
directions ``{hi : i in S}`` on the coefficient of subset ``S``.

Products between scalar elements are subset convolutions: a term survives
only when its two tag sets are disjoint, which is how ``ei^2 = 0`` is
enforced structurally.
"""

from __future__ import annotations

import math
from functools import lru_cache
from numbers import Real
from typing import Iterable

import numpy as np

from .errors import ContractError, DomainError
from .partitions import PARTITION_CAP

PRIMITIVES = ("exp", "ln", "sin", "cos", "sqrt", "neg", "recip", "pow")


def tag_mask(tags: Iterable[int]) -> int:
    """Bitmask of a set of 1-based tags."""
    mask = 0
    for t in tags:
        if t < 1:
            raise ContractError(f"tags are 1-based, got {t}")
        mask |= 1 << (t - 1)
    return mask


def mask_tags(mask: int) -> tuple[int, ...]:
    """Inverse of :func:`tag_mask`."""
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@lru_cache(maxsize=None)
def _disjoint_pairs(width: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # all (S, T) with S & T == 0, grouped by U = S | T; 3**width pairs
    lhs, rhs, union = [], [], []
    for u in range(1 << width):
        s = u
        while True:
            lhs.append(s)
            rhs.append(u ^ s)
            union.append(u)
            if s == 0:
                break
            s = (s - 1) & u
    return (
        np.array(lhs, dtype=np.intp),
        np.array(rhs, dtype=np.intp),
        np.array(union, dtype=np.intp),
    )


class MultiDual:
    """Element of the truncated multi-dual algebra of a given width.

    ``coeffs`` has shape ``(2**width, dim)``. Arithmetic operators are only
    defined for scalar elements (``dim == 1``) and mix freely with Python
    reals, which are promoted to constants.
    """

    __slots__ = ("width", "dim", "coeffs")

    def __init__(self, width: int, coeffs):
        if not 0 <= width <= PARTITION_CAP:
            raise ContractError(f"width must lie in [0, {PARTITION_CAP}], got {width}")
        arr = np.array(coeffs, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] != 1 << width:
            raise ContractError(
                f"expected {1 << width} coefficient rows for width {width}, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise DomainError("multidual", "coefficients", "not finite")
        arr.flags.writeable = False
        self.width = width
        self.dim = arr.shape[1]
        self.coeffs = arr

    # construction -----------------------------------------------------

    @classmethod
    def constant(cls, value, width: int) -> "MultiDual":
        value = np.atleast_1d(np.asarray(value, dtype=float))
        coeffs = np.zeros((1 << width, value.shape[0]))
        coeffs[0] = value
        return cls(width, coeffs)

    @classmethod
    def zero(cls, width: int, dim: int = 1) -> "MultiDual":
        return cls(width, np.zeros((1 << width, dim)))

    @classmethod
    def variable(cls, value: float, tangents, width: int | None = None) -> "MultiDual":
        """``value + sum_i tangents[i-1] * ei`` as a scalar element."""
        tangents = [float(t) for t in tangents]
        if width is None:
            width = len(tangents)
        coeffs = np.zeros(1 << width)
        coeffs[0] = value
        for i, t in enumerate(tangents):
            coeffs[1 << i] = t
        return cls(width, coeffs)

    @classmethod
    def stack(cls, parts: Iterable["MultiDual"]) -> "MultiDual":
        """Join scalar elements into one vector-valued element."""
        parts = list(parts)
        _same_width(*parts)
        return cls(parts[0].width, np.concatenate([p.coeffs for p in parts], axis=1))

    # access -----------------------------------------------------------

    @property
    def real(self) -> np.ndarray:
        return self.coeffs[0]

    def coefficient(self, mask: int) -> np.ndarray:
        if not 0 <= mask < 1 << self.width:
            raise ContractError(f"tag mask {mask:#b} outside width {self.width}")
        return self.coeffs[mask]

    def components(self) -> list["MultiDual"]:
        return [MultiDual(self.width, self.coeffs[:, j]) for j in range(self.dim)]

    def __repr__(self) -> str:
        terms = []
        for mask in range(1 << self.width):
            c = self.coeffs[mask]
            if mask and not np.any(c):
                continue
            value = f"{c[0]:g}" if self.dim == 1 else np.array2string(c)
            name = "".join(f"e{t}" for t in mask_tags(mask))
            terms.append(f"{value}{'*' + name if name else ''}")
        return f"MultiDual({' + '.join(terms)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiDual):
            return NotImplemented
        return self.width == other.width and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    # arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "MultiDual":
        if isinstance(other, MultiDual):
            return other
        if isinstance(other, Real):
            return MultiDual.constant(float(other), self.width)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else md_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return MultiDual(self.width, -self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else md_add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else md_add(other, -self)

    def __mul__(self, other):
        if isinstance(other, Real):
            return MultiDual(self.width, self.coeffs * float(other))
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else md_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else md_div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else md_div(other, self)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        return md_apply_univariate("pow", self, exponent)


def _same_width(*elems: MultiDual) -> None:
    if not elems:
        raise ContractError("at least one element is required")
    widths = {e.width for e in elems}
    if len(widths) != 1:
        raise ContractError(f"mismatched widths {sorted(widths)}")


def _scalar(*elems: MultiDual) -> None:
    _same_width(*elems)
    for e in elems:
        if e.dim != 1:
            raise ContractError(f"operation needs scalar elements, got dim {e.dim}")


def md_add(a: MultiDual, b: MultiDual) -> MultiDual:
    _same_width(a, b)
    if a.dim != b.dim:
        raise ContractError(f"mismatched dims {a.dim} and {b.dim}")
    return MultiDual(a.width, a.coeffs + b.coeffs)


def _convolve(a: np.ndarray, b: np.ndarray, width: int) -> np.ndarray:
    s, t, u = _disjoint_pairs(width)
    return np.bincount(u, weights=a[s] * b[t], minlength=1 << width)


def md_mul(a: MultiDual, b: MultiDual) -> MultiDual:
    """Product of scalar elements: ``c_U = sum_{S|T=U, S&T=0} a_S * b_T``."""
    _scalar(a, b)
    return MultiDual(a.width, _convolve(a.coeffs[:, 0], b.coeffs[:, 0], a.width))


def md_div(a: MultiDual, b: MultiDual) -> MultiDual:
    """Quotient ``q`` with ``b * q == a``, solved subset by subset.

    Subsets are visited in increasing mask order, so every proper subset of
    ``U`` is already known when ``q_U`` is formed.
    """
    _scalar(a, b)
    num, den = a.coeffs[:, 0], b.coeffs[:, 0]
    if den[0] == 0.0:
        raise DomainError("div", float(den[0]), "a zero divisor")
    q = np.zeros(1 << a.width)
    for u in range(1 << a.width):
        acc = num[u]
        s = u
        while s:
            acc -= den[s] * q[u ^ s]
            s = (s - 1) & u
        q[u] = acc / den[0]
    return MultiDual(a.width, q)


def _powers(nil: np.ndarray, width: int, count: int) -> list[np.ndarray]:
    # nil**0 .. nil**count for a purely nilpotent coefficient vector
    out = [np.zeros(1 << width)]
    out[0][0] = 1.0
    for _ in range(count):
        out.append(_convolve(out[-1], nil, width))
    return out


def derivative_table(prim: str, c: float, order: int, exponent: int | None = None) -> list[float]:
    """Closed-form derivatives ``prim^(k)(c)`` for ``k = 0..order``."""
    if prim == "exp":
        return [math.exp(c)] * (order + 1)
    if prim == "ln":
        if c <= 0.0:
            raise DomainError("ln", c, "not positive")
        return [math.log(c)] + [
            (-1.0) ** (k - 1) * math.factorial(k - 1) / c**k for k in range(1, order + 1)
        ]
    if prim == "sin":
        cycle = (math.sin(c), math.cos(c), -math.sin(c), -math.cos(c))
        return [cycle[k % 4] for k in range(order + 1)]
    if prim == "cos":
        cycle = (math.cos(c), -math.sin(c), -math.cos(c), math.sin(c))
        return [cycle[k % 4] for k in range(order + 1)]
    if prim == "sqrt":
        if c < 0.0 or (c == 0.0 and order > 0):
            raise DomainError("sqrt", c, "not positive" if order else "negative")
        out = []
        coef = 1.0
        for k in range(order + 1):
            out.append(coef * c ** (0.5 - k))
            coef *= 0.5 - k
        return out
    if prim == "neg":
        return [-c, -1.0] + [0.0] * (order - 1) if order else [-c]
    if prim == "recip":
        if c == 0.0:
            raise DomainError("recip", c, "zero")
        return [(-1.0) ** k * math.factorial(k) / c ** (k + 1) for k in range(order + 1)]
    if prim == "pow":
        if exponent is None or exponent < 0:
            raise ContractError(f"pow needs a non-negative integer exponent, got {exponent}")
        return [
            math.perm(exponent, k) * c ** (exponent - k) if k <= exponent else 0.0
            for k in range(order + 1)
        ]
    raise ContractError(f"unknown primitive {prim!r}")


def md_apply_univariate(prim: str, a: MultiDual, exponent: int | None = None) -> MultiDual:
    """Lift a smooth scalar primitive to the algebra.

    With ``a = c + N`` (``N`` nilpotent) the result is
    ``sum_{k=0}^{width} prim^(k)(c) / k! * N**k``; ``N**(width+1)`` vanishes.
    """
    _scalar(a)
    c = float(a.coeffs[0, 0])
    nil = a.coeffs[:, 0].copy()
    nil[0] = 0.0
    order = a.width if np.any(nil) else 0
    derivs = derivative_table(prim, c, order, exponent)
    powers = _powers(nil, a.width, order)
    out = np.zeros(1 << a.width)
    for k, (d, p) in enumerate(zip(derivs, powers)):
        if d:
            out += d / math.factorial(k) * p
    return MultiDual(a.width, out)


def extract_coefficient(a: MultiDual, tags: Iterable[int]) -> np.ndarray:
    """Coefficient vector of the tag product ``prod_{i in tags} ei``."""
    tags = list(tags)
    if any(t > a.width for t in tags):
        raise ContractError(f"tags {tags} exceed width {a.width}")
    return a.coefficient(tag_mask(tags)).copy()
