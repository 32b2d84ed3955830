"""Exact integer Laurent polynomials in one variable."""

from __future__ import annotations

from typing import Iterable, Mapping


class LaurentPolynomial:
    """Immutable integer Laurent polynomial stored as ``{exponent: coefficient}``.

    Zero coefficients are never stored, so two equal polynomials always have
    equal ``terms`` and equal hashes.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            if c:
                acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c}
        self._hash = None

    # construction helpers
    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPolynomial":
        return cls({exp: coeff})

    @classmethod
    def one(cls) -> "LaurentPolynomial":
        return cls({0: 1})

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], low: int = 0) -> "LaurentPolynomial":
        return cls((low + i, c) for i, c in enumerate(coeffs))

    @classmethod
    def parse(cls, text: str) -> "LaurentPolynomial":
        """Inverse of :meth:`serialize` (``coeff:exp`` pairs)."""
        terms = []
        for tok in text.split():
            c, e = tok.split(":")
            terms.append((int(e), int(c)))
        return cls(terms)

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def min_exp(self) -> int:
        return next(iter(self._terms)) if self._terms else 0

    @property
    def max_exp(self) -> int:
        return next(reversed(self._terms)) if self._terms else 0

    @property
    def leading(self) -> int:
        return self._terms[self.max_exp] if self._terms else 0

    def coeffs(self) -> list[int]:
        """Dense coefficient list from ``min_exp`` to ``max_exp``."""
        if not self._terms:
            return []
        lo = self.min_exp
        out = [0] * (self.max_exp - lo + 1)
        for e, c in self._terms.items():
            out[e - lo] = c
        return out

    # ring operations
    def __add__(self, other):
        other = _coerce(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPolynomial(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        acc: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials can be inverted")
            return LaurentPolynomial({e * k: c ** -k})
        out = LaurentPolynomial.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # substitutions
    def substitute_inverse(self) -> "LaurentPolynomial":
        """Return p(1/x)."""
        return LaurentPolynomial({-e: c for e, c in self._terms.items()})

    def scale_exponents(self, k: int) -> "LaurentPolynomial":
        """Return p(x^k)."""
        return LaurentPolynomial({e * k: c for e, c in self._terms.items()})

    def divide_exponents(self, k: int) -> "LaurentPolynomial":
        """Return p(x^(1/k)); every exponent must be divisible by ``k``."""
        if any(e % k for e in self._terms):
            raise ValueError(f"exponents not divisible by {k}")
        return LaurentPolynomial({e // k: c for e, c in self._terms.items()})

    def shift(self, k: int) -> "LaurentPolynomial":
        return LaurentPolynomial({e + k: c for e, c in self._terms.items()})

    def __call__(self, x: int):
        from fractions import Fraction

        total = Fraction(0)
        for e, c in self._terms.items():
            total += c * Fraction(x) ** e
        return total.numerator if total.denominator == 1 else total

    def sort_key(self) -> tuple:
        return tuple(self._terms.items())

    def serialize(self) -> str:
        """``coeff:exp`` pairs sorted by exponent; ``0:0`` for the zero polynomial."""
        if not self._terms:
            return "0:0"
        return " ".join(f"{c}:{e}" for e, c in self._terms.items())

    def __repr__(self):
        return f"LaurentPolynomial({self.serialize()!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms.items()):
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}{mono}"
            parts.append(("-" if c < 0 else "+") + s)
        text = " ".join(parts)
        return text[1:] if text.startswith("+") else text


def _coerce(x) -> LaurentPolynomial:
    if isinstance(x, LaurentPolynomial):
        return x
    if isinstance(x, int):
        return LaurentPolynomial({0: x})
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPolynomial")
