"""Normal ordering of single-mode ladder-operator words.

A :class:`NormalForm` maps ``(p, q)`` to the integer coefficient of
``a^dagger^p a^q``. Coefficients stay exact until evaluation on a coherent
state.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import DomainError, OutOfRange, WordTooLong

ANNIHILATE = "a"
CREATE = "ad"

MAX_WORD_LENGTH = 64
MAX_STIRLING = 30


class NormalForm:
    """Finite sum of normally ordered terms ``c * a^dagger^p a^q``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int | Fraction] | None = None):
        self._terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def identity(cls) -> "NormalForm":
        return cls({(0, 0): 1})

    @property
    def terms(self) -> dict[tuple[int, int], int | Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self._terms.items()))
        return f"NormalForm({{{body}}})"

    def __add__(self, other: "NormalForm") -> "NormalForm":
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return NormalForm(out)

    def scale(self, c: int | Fraction) -> "NormalForm":
        return NormalForm({k: c * v for k, v in self._terms.items()})

    def times_letter(self, letter: str) -> "NormalForm":
        """Right-multiply by one ladder operator and re-normal-order.

        Uses ``a^q a^dagger = a^dagger a^q + q a^{q-1}``.
        """
        out: dict[tuple[int, int], int | Fraction] = {}
        for (p, q), c in self._terms.items():
            if letter == ANNIHILATE:
                out[(p, q + 1)] = out.get((p, q + 1), 0) + c
            elif letter == CREATE:
                out[(p + 1, q)] = out.get((p + 1, q), 0) + c
                if q:
                    out[(p, q - 1)] = out.get((p, q - 1), 0) + q * c
            else:
                raise DomainError(f"unknown ladder letter {letter!r}")
        return NormalForm(out)

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        """Normally ordered product via the closed contraction formula.

        ``a^q a^dagger^s = sum_k C(q,k) C(s,k) k! a^dagger^{s-k} a^{q-k}``.
        """
        out: dict[tuple[int, int], int | Fraction] = {}
        for (p, q), c1 in self._terms.items():
            for (s, u), c2 in other._terms.items():
                for k in range(min(q, s) + 1):
                    w = math.comb(q, k) * math.comb(s, k) * math.factorial(k)
                    key = (p + s - k, q - k + u)
                    out[key] = out.get(key, 0) + c1 * c2 * w
        return NormalForm(out)

    def max_order(self) -> int:
        return max((p + q for p, q in self._terms), default=0)


def _check_word(word: Iterable[str]) -> tuple[str, ...]:
    word = tuple(word)
    if len(word) > MAX_WORD_LENGTH:
        raise WordTooLong(f"word length {len(word)} exceeds {MAX_WORD_LENGTH}")
    for letter in word:
        if letter not in (ANNIHILATE, CREATE):
            raise DomainError(f"unknown ladder letter {letter!r}")
    return word


@lru_cache(maxsize=4096)
def _normal_order_cached(word: tuple[str, ...]) -> NormalForm:
    form = NormalForm.identity()
    for letter in word:
        form = form.times_letter(letter)
    return form


def normal_order(word: Iterable[str]) -> NormalForm:
    """Normally ordered expansion of a word over ``{"a", "ad"}``.

    >>> normal_order(["a", "ad"])
    NormalForm({(0, 0): 1, (1, 1): 1})
    """
    return _normal_order_cached(_check_word(word))


def word(*parts: tuple[str, int]) -> tuple[str, ...]:
    """Expand ``(letter, power)`` pairs, e.g. ``word((CREATE, 2), (ANNIHILATE, 1))``."""
    out: list[str] = []
    for letter, power in parts:
        out.extend([letter] * power)
    return tuple(out)


@lru_cache(maxsize=64)
def quadrature_power(k: int) -> NormalForm:
    """Normal form of ``(a + a^dagger)^k`` (without the ``2^{-k/2}`` factor)."""
    if k > MAX_WORD_LENGTH:
        raise WordTooLong(f"power {k} exceeds {MAX_WORD_LENGTH}")
    form = NormalForm.identity()
    for _ in range(k):
        form = form.times_letter(ANNIHILATE) + form.times_letter(CREATE)
    return form


def coherent_expectation(form: NormalForm, alpha: complex) -> complex:
    """``<alpha| form |alpha>`` using ``<a^dagger^i a^j> = conj(alpha)^i alpha^j``."""
    alpha = complex(alpha)
    conj = alpha.conjugate()
    total = 0j
    for (p, q), c in form.items():
        total += float(c) * conj**p * alpha**q
    return total


@lru_cache(maxsize=None)
def _stirling_row(e: int) -> tuple[int, ...]:
    if e == 0:
        return (1,)
    prev = _stirling_row(e - 1)
    row = [0] * (e + 1)
    for f in range(1, e + 1):
        row[f] = f * (prev[f] if f < len(prev) else 0) + prev[f - 1]
    return tuple(row)


def stirling2(e: int, f: int) -> int:
    """Stirling number of the second kind by the triangular recurrence."""
    if not (0 <= e <= MAX_STIRLING and 0 <= f <= MAX_STIRLING):
        raise OutOfRange(f"stirling2 arguments must lie in [0, {MAX_STIRLING}]")
    if f > e:
        return 0
    return _stirling_row(e)[f]


def pochhammer_half(l: int) -> Fraction:
    """``(1/2)_{l/2} = (l-1)!! / 2^{l/2}`` for even ``l``."""
    if l % 2 or not 2 <= l <= 30:
        raise DomainError(f"l must be even and within [2, 30], got {l}")
    double_fact = math.prod(range(l - 1, 0, -2))
    return Fraction(double_fact, 2 ** (l // 2))
