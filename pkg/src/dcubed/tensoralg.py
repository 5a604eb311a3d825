"""The graded tensor algebra of first- and second-order differentials.

Letters are ``(grade, index)`` pairs: ``(1, i)`` stands for dx^i (grade 1)
and ``(2, i)`` for d^2 x^i (grade 2); grade-3 letters do not exist.  A
tensor word is a tuple of letters, and every element is stored in the
canonical right-coefficient form

    sum over tensor words W of   W * r_W,     r_W in the free algebra.

Because interior coefficients are always pushed to the far right with the
bimodule map, equality of term maps is exactly equality in the algebra:
the defining push-through relations hold identically in this representation.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import Scalar
from .freealg import AlgebraElement
from .bimodule import BimoduleMap

Letter = tuple  # (grade, index)
DWord = tuple   # tuple[Letter, ...]


def letter(grade: int, index: int) -> Letter:
    if grade not in (1, 2):
        raise ValueError("letter grade must be 1 or 2 (d^3 x^i = 0)")
    return (grade, index)


def dword_grade(dword: DWord) -> int:
    return sum(a for a, _ in dword)


def dword_key(dword: DWord):
    """Deterministic order: total grade, then grade vector, then indices."""
    return (dword_grade(dword),
            tuple(a for a, _ in dword),
            tuple(i for _, i in dword))


class TensorElement:
    """Element of the differential tensor algebra in canonical form."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for dword, coeff in (terms.items() if isinstance(terms, dict) else terms):
                self._accumulate(dword, coeff)

    def _accumulate(self, dword: DWord, coeff: AlgebraElement):
        if coeff.is_zero:
            return
        cur = self.terms.get(dword)
        if cur is None:
            self.terms[dword] = coeff
        else:
            s = cur + coeff
            if s:
                self.terms[dword] = s
            else:
                del self.terms[dword]

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "TensorElement":
        return TensorElement(n)

    @staticmethod
    def of_algebra(u: AlgebraElement) -> "TensorElement":
        return TensorElement(u.n, {(): u})

    @staticmethod
    def of_letter(n: int, grade: int, index: int, coeff=None) -> "TensorElement":
        if not 1 <= index <= n:
            raise ValueError(f"generator index {index} outside 1..{n}")
        if coeff is None:
            coeff = AlgebraElement.one(n)
        return TensorElement(n, {(letter(grade, index),): coeff})

    @staticmethod
    def monomial(n: int, dword: DWord, coeff: AlgebraElement) -> "TensorElement":
        return TensorElement(n, {tuple(dword): coeff})

    # -- module structure (multiplication lives in tensor_mul) --------------

    def _check_compatible(self, other: "TensorElement"):
        if self.n != other.n:
            raise ValueError(f"mixed generator counts: {self.n} vs {other.n}")

    def __add__(self, other: "TensorElement"):
        self._check_compatible(other)
        out = TensorElement(self.n, dict(self.terms))
        for dword, coeff in other.terms.items():
            out._accumulate(dword, coeff)
        return out

    def __neg__(self):
        return TensorElement(self.n, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "TensorElement"):
        return self + (-other)

    def scale(self, value) -> "TensorElement":
        value = Scalar.coerce(value)
        if not value:
            return TensorElement.zero(self.n)
        return TensorElement(self.n,
                             {w: c.scale(value) for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.key()))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # -- grading -----------------------------------------------------------

    def grade_components(self) -> dict:
        """Partition by tensor-word grade; the parts sum back to the element."""
        parts = {}
        for dword, coeff in self.terms.items():
            part = parts.setdefault(dword_grade(dword), TensorElement(self.n))
            part.terms[dword] = coeff
        return parts

    def homogeneous_grade(self):
        """The common grade, or None when grades are mixed; zero has grade 0."""
        grades = {dword_grade(w) for w in self.terms}
        if not grades:
            return 0
        if len(grades) == 1:
            return grades.pop()
        return None

    def max_grade(self) -> int:
        return max((dword_grade(w) for w in self.terms), default=0)

    def max_word_degree(self) -> int:
        return max((c.degree() for c in self.terms.values()), default=0)

    def bidegree_components(self) -> dict:
        """Split by (grade, coefficient word length); exact over a bigraded map."""
        parts = {}
        for dword, coeff in self.terms.items():
            g = dword_grade(dword)
            for length, piece in coeff.degree_parts().items():
                part = parts.setdefault((g, length), TensorElement(self.n))
                part.terms[dword] = part.terms.get(dword, AlgebraElement.zero(self.n)) + piece
        return parts

    # -- canonical snapshots -------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: dword_key(kv[0]))

    def key(self):
        return tuple((dword, coeff.key()) for dword, coeff in self.sorted_terms())

    def __str__(self):
        from .parsing import format_tensor
        return format_tensor(self)

    def __repr__(self):
        return f"<TensorElement n={self.n} {self.terms!r}>"


def push_through(bmap: BimoduleMap, u: AlgebraElement, dword: DWord) -> "TensorElement":
    """Canonical form of ``u * dword``: the coefficient crosses every letter."""
    out = TensorElement(u.n, {(): u})
    for grade, index in dword:
        nxt = TensorElement(u.n)
        for prefix, coeff in out.terms.items():
            for k, pushed in bmap.push(coeff, index, grade):
                nxt._accumulate(prefix + ((grade, k),), pushed)
        out = nxt
    return out


def tensor_mul(bmap: BimoduleMap, w: TensorElement, t: TensorElement) -> TensorElement:
    """Graded product; the left factor's coefficient is pushed through the
    right factor's letters so the result is canonical again."""
    w._check_compatible(t)
    if bmap.n != w.n:
        raise ValueError(f"map has {bmap.n} generators, elements have {w.n}")
    out = TensorElement(w.n)
    for w1, r in w.terms.items():
        for w2, s in t.terms.items():
            if w2:
                for mid, pushed in push_through(bmap, r, w2).terms.items():
                    out._accumulate(w1 + mid, pushed * s)
            else:
                out._accumulate(w1, r * s)
    return out


def tensor_product(bmap: BimoduleMap, *factors: TensorElement) -> TensorElement:
    out = factors[0]
    for f in factors[1:]:
        out = tensor_mul(bmap, out, f)
    return out
