"""The free associative unital algebra on generators x1..xn over Q(q).

Monomials are words (tuples of 1-based generator indices, the empty word
being the unit) and elements are sparse maps word -> scalar.  No relations
are ever imposed here: x1*x2 and x2*x1 stay distinct.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import Scalar, ZERO, ONE

Word = tuple  # tuple[int, ...], indices 1..n


def word_key(word: Word):
    """Deterministic word order: length first, then lexicographic."""
    return (len(word), word)


class AlgebraElement:
    """A noncommutative polynomial: sparse map from words to nonzero scalars."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for word, coeff in (terms.items() if isinstance(terms, dict) else terms):
                self._accumulate(word, coeff)

    def _accumulate(self, word: Word, coeff: Scalar):
        coeff = Scalar.coerce(coeff)
        if not coeff:
            return
        cur = self.terms.get(word)
        if cur is None:
            self.terms[word] = coeff
        else:
            s = cur + coeff
            if s:
                self.terms[word] = s
            else:
                del self.terms[word]

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "AlgebraElement":
        return AlgebraElement(n)

    @staticmethod
    def one(n: int) -> "AlgebraElement":
        return AlgebraElement(n, {(): ONE})

    @staticmethod
    def scalar(n: int, value) -> "AlgebraElement":
        return AlgebraElement(n, {(): Scalar.coerce(value)})

    @staticmethod
    def generator(n: int, i: int) -> "AlgebraElement":
        if not 1 <= i <= n:
            raise ValueError(f"generator index {i} outside 1..{n}")
        return AlgebraElement(n, {(i,): ONE})

    @staticmethod
    def monomial(n: int, word: Word, coeff=ONE) -> "AlgebraElement":
        for i in word:
            if not 1 <= i <= n:
                raise ValueError(f"generator index {i} outside 1..{n}")
        return AlgebraElement(n, {tuple(word): Scalar.coerce(coeff)})

    # -- ring structure ----------------------------------------------------

    def _check_compatible(self, other: "AlgebraElement"):
        if self.n != other.n:
            raise ValueError(
                f"mixed generator counts: {self.n} vs {other.n}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = AlgebraElement.scalar(self.n, other)
        self._check_compatible(other)
        out = AlgebraElement(self.n, dict(self.terms))
        for word, coeff in other.terms.items():
            out._accumulate(word, coeff)
        return out

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.n, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = AlgebraElement.scalar(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        self._check_compatible(other)
        out = AlgebraElement(self.n)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out._accumulate(w1 + w2, c1 * c2)
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def scale(self, value) -> "AlgebraElement":
        value = Scalar.coerce(value)
        if not value:
            return AlgebraElement.zero(self.n)
        return AlgebraElement(self.n,
                              {w: c * value for w, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = AlgebraElement.scalar(self.n, other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # -- inspection --------------------------------------------------------

    def degree(self) -> int:
        """Maximum word length among terms; undefined (error) for zero."""
        if not self.terms:
            raise ValueError("degree of the zero element is undefined")
        return max(len(w) for w in self.terms)

    def is_homogeneous(self) -> bool:
        lengths = {len(w) for w in self.terms}
        return len(lengths) <= 1

    def degree_parts(self) -> dict:
        """Split into word-length-homogeneous summands, keyed by length."""
        parts = {}
        for word, coeff in self.terms.items():
            part = parts.setdefault(len(word), AlgebraElement(self.n))
            part.terms[word] = coeff
        return parts

    def constant_value(self):
        """The scalar value, provided no non-unit word occurs."""
        if not self.terms:
            return ZERO
        if set(self.terms) == {()}:
            return self.terms[()]
        raise ValueError("element is not a scalar multiple of 1")

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: word_key(kv[0]))

    def key(self):
        """Hashable canonical snapshot, used for deduplication."""
        return tuple((w, c.a, c.b) for w, c in self.sorted_terms())

    def __str__(self):
        from .parsing import format_algebra
        return format_algebra(self)

    def __repr__(self):
        return f"<AlgebraElement n={self.n} {self.terms!r}>"
