"""The d-compatible graded ideal that turns the tensor algebra into a
genuine q-differential algebra, with a certified membership oracle.

Generator families (one set per index pair (i, j), writing e_k for the
structure-map entry on d^a x^k and q for the cube root of unity):

    dx_dx    (grade 2):  dx^i (x) dx^j      - q   sum_k dx^k   (x) d(e_k)
    dx_d2x   (grade 3):  dx^i (x) d^2x^j    - q^2 sum_k d^2x^k (x) d(e_k)
    d2x_dx   (grade 3):  d^2x^i (x) dx^j  + (1-q) sum_k d^2x^k (x) d(e_k)
                                           - q^2  sum_k dx^k   (x) d^2(e_k)
    entry_d3 (grade 3):  d^3(e_k)                       (one generator per k)
    d2x_d2x  (grade 4):  d^2x^i (x) d^2x^j  - q   sum_k d^2x^k (x) d^2(e_k)

The zeroth-order push-through relations are not emitted: coefficients are
always stored to the right of the letters, so those relations hold
identically in the representation and would only contribute zero vectors.

Membership is decided by exact linear algebra over Q(q): enumerate the
products  left-monomial * generator * right-monomial  of the right grade
within the configured bounds, and reduce the query against an
incrementally built echelon basis of their span.  A ``member`` verdict
always carries a witness combination that re-expands to the query exactly;
``not_member_at_bound`` is conclusive only relative to the bounds.  When
every nonzero map entry is homogeneous of word degree 1 the whole algebra
is bigraded by (grade, word degree), and the oracle enumerates each
bidegree component exactly instead of sweeping everything under a bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .scalar import Scalar, ZERO, ONE, Q, q_power
from .freealg import AlgebraElement, word_key
from .tensoralg import TensorElement, tensor_mul, dword_key
from .calculus import Calculus
from .differential import entry_d1, entry_d2, entry_d3

FAMILIES = ("dx_dx", "dx_d2x", "d2x_dx", "entry_d3", "d2x_d2x")

FAMILY_GRADES = {
    "dx_dx": 2, "dx_d2x": 3, "d2x_dx": 3, "entry_d3": 3, "d2x_d2x": 4,
}


class ReduceNotApplicable(ValueError):
    """Rewriting needs structure-map entries of word degree <= 1."""


class ReduceBudgetExceeded(RuntimeError):
    """The rewrite loop hit its step budget before reaching a fixed point."""


@dataclass(frozen=True)
class Generator:
    family: str
    i: int
    j: int
    k: int | None
    element: TensorElement

    @property
    def grade(self) -> int:
        return FAMILY_GRADES[self.family]

    def label(self) -> str:
        ix = f"{self.i},{self.j}" if self.k is None else f"{self.i},{self.j},{self.k}"
        return f"{self.family}({ix})"


@dataclass(frozen=True)
class WitnessTerm:
    left_dword: tuple
    left_word: tuple
    family: str
    i: int
    j: int
    k: int | None
    right_dword: tuple
    right_word: tuple
    coeff: Scalar

    def to_dict(self):
        return {
            "left": {"letters": [list(l) for l in self.left_dword],
                     "word": list(self.left_word)},
            "family": self.family,
            "i": self.i, "j": self.j,
            **({"k": self.k} if self.k is not None else {}),
            "right": {"letters": [list(l) for l in self.right_dword],
                      "word": list(self.right_word)},
            "coefficient": str(self.coeff),
        }


@dataclass
class Verdict:
    status: str                      # member | not_member_at_bound | bound_exceeded
    witness: list | None = None      # list[WitnessTerm] when member
    residual: TensorElement | None = None
    detail: str = ""

    @property
    def is_member(self) -> bool:
        return self.status == "member"


def _term_order(key):
    dword, word = key
    return (dword_key(dword), word_key(word))


def _vectorize(e: TensorElement):
    return {(dword, word): coeff
            for dword, u in e.terms.items()
            for word, coeff in u.terms.items()}


def _devectorize(vec, n) -> TensorElement:
    out = TensorElement(n)
    for (dword, word), coeff in vec.items():
        out._accumulate(dword, AlgebraElement.monomial(n, word, coeff))
    return out


def _sub_scaled(target, source, factor):
    for key, value in source.items():
        cur = target.get(key, ZERO) - value * factor
        if cur:
            target[key] = cur
        else:
            target.pop(key, None)


class _Echelon:
    """Row basis with combination tracking over original column ids.

    Every stored row is normalized so its pivot (the largest key it touches)
    has coefficient one, and all its other keys are strictly smaller, so
    elimination in descending key order terminates.
    """

    __slots__ = ("rows",)

    def __init__(self):
        self.rows = {}  # pivot key -> (normalized vector, combination)

    def _reduce(self, vec, combo):
        """Full normal form: keys without a pivot survive into the remainder."""
        while True:
            target = None
            for key in sorted(vec, key=_term_order, reverse=True):
                if key in self.rows:
                    target = key
                    break
            if target is None:
                return vec, combo
            row_vec, row_combo = self.rows[target]
            factor = vec[target]
            _sub_scaled(vec, row_vec, factor)
            _sub_scaled(combo, row_combo, factor)

    def insert(self, vec, col_id) -> bool:
        vec, combo = self._reduce(dict(vec), {col_id: ONE})
        if not vec:
            return False
        lead = max(vec, key=_term_order)
        inv = vec[lead].inv()
        self.rows[lead] = ({k: v * inv for k, v in vec.items()},
                           {k: v * inv for k, v in combo.items()})
        return True

    def express(self, vec):
        """Combination of original columns equal to vec, or the remainder."""
        vec, combo = self._reduce(dict(vec), {})
        if vec:
            return None, vec
        return {col: -c for col, c in combo.items() if c}, None


def _dwords_of_grade(n: int, grade: int):
    if grade == 0:
        return ((),)
    out = []
    for head_grade in (1, 2):
        if head_grade > grade:
            break
        for rest in _dwords_of_grade(n, grade - head_grade):
            for index in range(1, n + 1):
                out.append(((head_grade, index),) + rest)
    return tuple(sorted(out, key=dword_key))


def _words_of_length(n: int, length: int):
    return tuple(itertools.product(range(1, n + 1), repeat=length))


class Ideal:
    """Ideal context: generator cache, membership oracle, rewriting reducer."""

    def __init__(self, calc: Calculus, size_cap: int = 200_000):
        self.calc = calc
        self.n = calc.n
        self.size_cap = size_cap
        self._generator_cache = {}
        self._nonzero = None
        self._systems = {}
        self._uniform_degree = calc.bmap.uniform_entry_degree()

    # -- generators ----------------------------------------------------------

    def _prepend(self, grade, index, t: TensorElement) -> TensorElement:
        return TensorElement(self.n, {((grade, index),) + w: c
                                      for w, c in t.terms.items()})

    def generator_element(self, family, i, j, k=None) -> TensorElement:
        key = (family, i, j, k)
        cached = self._generator_cache.get(key)
        if cached is not None:
            return cached
        calc, n = self.calc, self.n
        if family == "entry_d3":
            if k is None:
                raise ValueError("entry_d3 generators carry an output index k")
            out = entry_d3(calc, i, j, k)
        elif family == "dx_dx":
            out = TensorElement.monomial(n, ((1, i), (1, j)), AlgebraElement.one(n))
            for kk in range(1, n + 1):
                out = out - self._prepend(1, kk, entry_d1(calc, i, j, kk)).scale(Q)
        elif family == "dx_d2x":
            out = TensorElement.monomial(n, ((1, i), (2, j)), AlgebraElement.one(n))
            for kk in range(1, n + 1):
                out = out - self._prepend(2, kk, entry_d1(calc, i, j, kk)).scale(q_power(2))
        elif family == "d2x_dx":
            out = TensorElement.monomial(n, ((2, i), (1, j)), AlgebraElement.one(n))
            for kk in range(1, n + 1):
                out = out + self._prepend(2, kk, entry_d1(calc, i, j, kk)).scale(ONE - Q)
                out = out - self._prepend(1, kk, entry_d2(calc, i, j, kk)).scale(q_power(2))
        elif family == "d2x_d2x":
            out = TensorElement.monomial(n, ((2, i), (2, j)), AlgebraElement.one(n))
            for kk in range(1, n + 1):
                out = out - self._prepend(2, kk, entry_d2(calc, i, j, kk)).scale(Q)
        else:
            raise ValueError(f"unknown generator family {family!r}")
        self._generator_cache[key] = out
        return out

    def generators_for(self, i, j):
        """All generators attached to the index pair (i, j), zeros included."""
        out = []
        for family in FAMILIES:
            if family == "entry_d3":
                for k in range(1, self.n + 1):
                    out.append(Generator(family, i, j, k,
                                         self.generator_element(family, i, j, k)))
            else:
                out.append(Generator(family, i, j, None,
                                     self.generator_element(family, i, j)))
        return out

    def all_generators(self):
        """Nonzero generators over all index pairs (the spanning alphabet)."""
        if self._nonzero is None:
            gens = []
            for i in range(1, self.n + 1):
                for j in range(1, self.n + 1):
                    gens.extend(g for g in self.generators_for(i, j)
                                if not g.element.is_zero)
            self._nonzero = tuple(gens)
        return self._nonzero

    # -- membership ------------------------------------------------------------

    def membership(self, e: TensorElement, grade_bound=None, word_bound=None) -> Verdict:
        if e.n != self.n:
            raise ValueError(f"element has {e.n} generators, ideal has {self.n}")
        if e.is_zero:
            return Verdict("member", witness=[])
        if grade_bound is None:
            grade_bound = e.max_grade()
        elif grade_bound < e.max_grade():
            raise ValueError("grade bound is below the element's grade")
        if word_bound is None:
            word_bound = e.max_word_degree() + self.calc.bmap.max_entry_degree()

        direct = self._scalar_multiple_of_generator(e)
        if direct is not None:
            return Verdict("member", witness=[direct])

        exact = self._uniform_degree == 1
        if exact:
            components = e.bidegree_components()
        else:
            components = {(g, None): part
                          for g, part in e.grade_components().items()}

        witness = []
        residual = TensorElement.zero(self.n)
        status = "member"
        details = []
        for (grade, wdeg) in sorted(components):
            part = components[(grade, wdeg)]
            if grade == 0:
                # grade-0 component of the ideal is zero: nothing to span it
                status = "not_member_at_bound"
                residual = residual + part
                details.append("grade-0 component cannot lie in the ideal")
                continue
            if wdeg is not None and wdeg > word_bound:
                status = "not_member_at_bound"
                residual = residual + part
                details.append(f"word degree {wdeg} above bound {word_bound}")
                continue
            system = self._system(grade, wdeg, word_bound)
            if system is None:
                return Verdict("bound_exceeded", detail=(
                    f"spanning set for grade {grade} exceeds the size cap "
                    f"{self.size_cap}"))
            echelon, columns = system
            combo, rest = echelon.express(_vectorize(part))
            if combo is None:
                status = "not_member_at_bound"
                residual = residual + _devectorize(rest, self.n)
                details.append(f"irreducible remainder at grade {grade}")
            else:
                for col_id, coeff in sorted(combo.items()):
                    meta = columns[col_id]
                    witness.append(WitnessTerm(
                        left_dword=meta[0], left_word=meta[1],
                        family=meta[2].family, i=meta[2].i, j=meta[2].j,
                        k=meta[2].k, right_dword=meta[3], right_word=meta[4],
                        coeff=coeff))
        if status == "member":
            return Verdict("member", witness=witness)
        return Verdict(status, residual=residual, detail="; ".join(details))

    def _scalar_multiple_of_generator(self, e: TensorElement):
        """One-term witness when e is exactly c * (some generator).

        Generators can be linearly dependent (the commutative preset has
        such relations), so the generic solve may pick a combination; this
        keeps the canonical witness for the generators themselves.
        """
        vec = _vectorize(e)
        lead = max(vec, key=_term_order)
        for gen in self.all_generators():
            gvec = _vectorize(gen.element)
            glead = max(gvec, key=_term_order)
            if glead != lead:
                continue
            factor = vec[lead] * gvec[lead].inv()
            if gen.element.scale(factor) == e:
                return WitnessTerm((), (), gen.family, gen.i, gen.j, gen.k,
                                   (), (), factor)
        return None

    def _system(self, grade, wdeg, word_bound):
        """Echelon basis of the bounded span at the given (bi)degree."""
        key = (grade, wdeg, None if wdeg is not None else word_bound)
        cached = self._systems.get(key)
        if cached is not None:
            return cached

        gens = [g for g in self.all_generators() if g.grade <= grade]
        if self._count_columns(gens, grade, wdeg, word_bound) > self.size_cap:
            return None

        echelon = _Echelon()
        columns = []
        bmap = self.calc.bmap
        one = AlgebraElement.one(self.n)
        seen = set()
        for gen in gens:
            for g1 in range(0, grade - gen.grade + 1):
                g2 = grade - gen.grade - g1
                for left_d in _dwords_of_grade(self.n, g1):
                    for right_d in _dwords_of_grade(self.n, g2):
                        for w1, w2 in self._word_pairs(wdeg, word_bound):
                            m1 = TensorElement.monomial(
                                self.n, left_d, AlgebraElement.monomial(self.n, w1))
                            m2 = TensorElement.monomial(
                                self.n, right_d, AlgebraElement.monomial(self.n, w2))
                            col = tensor_mul(bmap, m1,
                                             tensor_mul(bmap, gen.element, m2))
                            if col.is_zero:
                                continue
                            vec = _vectorize(col)
                            lead = max(vec, key=_term_order)
                            inv = vec[lead].inv()
                            sig = tuple(sorted(
                                ((k, (v * inv).a, (v * inv).b) for k, v in vec.items()),
                                key=lambda kv: _term_order(kv[0])))
                            if sig in seen:
                                continue
                            seen.add(sig)
                            col_id = len(columns)
                            columns.append((left_d, w1, gen, right_d, w2))
                            echelon.insert(vec, col_id)
        self._systems[key] = (echelon, columns)
        return self._systems[key]

    def _word_pairs(self, wdeg, word_bound):
        if wdeg is not None:
            # bigraded: word lengths must add up exactly
            for l1 in range(wdeg + 1):
                for w1 in _words_of_length(self.n, l1):
                    for w2 in _words_of_length(self.n, wdeg - l1):
                        yield w1, w2
        else:
            for total in range(word_bound + 1):
                for l1 in range(total + 1):
                    for w1 in _words_of_length(self.n, l1):
                        for w2 in _words_of_length(self.n, total - l1):
                            yield w1, w2

    def _count_columns(self, gens, grade, wdeg, word_bound):
        if wdeg is not None:
            word_pairs = sum(self.n ** wdeg for _ in range(wdeg + 1))
        else:
            word_pairs = sum((l + 1) * self.n ** l for l in range(word_bound + 1))
        total = 0
        for gen in gens:
            shapes = sum(len(_dwords_of_grade(self.n, g1))
                         * len(_dwords_of_grade(self.n, grade - gen.grade - g1))
                         for g1 in range(0, grade - gen.grade + 1))
            total += shapes * word_pairs
        return total

    def expand_witness(self, witness) -> TensorElement:
        """Re-expand a membership witness; must reproduce the query exactly."""
        out = TensorElement.zero(self.n)
        bmap = self.calc.bmap
        for term in witness:
            gen = self.generator_element(term.family, term.i, term.j, term.k)
            m1 = TensorElement.monomial(
                self.n, term.left_dword,
                AlgebraElement.monomial(self.n, term.left_word))
            m2 = TensorElement.monomial(
                self.n, term.right_dword,
                AlgebraElement.monomial(self.n, term.right_word))
            out = out + tensor_mul(bmap, m1, tensor_mul(bmap, gen, m2)).scale(term.coeff)
        return out

    # -- rewriting -------------------------------------------------------------

    def _rewrite_rules(self):
        """Segment replacements oriented pattern -> push-through expansion.

        Requires every map entry to have word degree <= 1, so that the
        inserted coefficients are central scalars and the suffix letters
        are untouched.
        """
        for *_ix, entry in self.calc.bmap.entries():
            if entry and entry.degree() > 1:
                raise ReduceNotApplicable(
                    "rewriting requires structure-map entries of degree <= 1")
        rules = {}
        n = self.n
        q2 = q_power(2)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                firsts = []  # (k, l, D_l(entry(i,j,k))) with scalar derivative
                for k in range(1, n + 1):
                    for l, dl in enumerate(
                            self.calc.gradient(self.calc.bmap.entry(i, j, k)), start=1):
                        if dl:
                            firsts.append((k, l, dl.constant_value()))
                rules[(1, 1, i, j)] = [(((1, k), (1, l)), Q * s) for k, l, s in firsts]
                rules[(1, 2, i, j)] = [(((2, k), (1, l)), q2 * s) for k, l, s in firsts]
                rules[(2, 1, i, j)] = (
                    [(((2, k), (1, l)), (Q - ONE) * s) for k, l, s in firsts]
                    + [(((1, k), (2, l)), q2 * s) for k, l, s in firsts])
                rules[(2, 2, i, j)] = [(((2, k), (2, l)), Q * s) for k, l, s in firsts]
        return rules

    def reduce(self, e: TensorElement, max_steps: int = 10_000,
               order: str = "desc") -> TensorElement:
        """Rewrite two-letter patterns toward the configured normal form.

        A rule instance fires only when every replacement word is strictly
        closer to normal form under ``order`` ("asc": lexicographically
        smaller words are normal, "desc": larger ones are), which makes the
        loop terminate; the step budget is a safety net.  The result is
        always congruent to the input modulo the ideal.
        """
        if order not in ("asc", "desc"):
            raise ValueError("order must be 'asc' or 'desc'")
        rules = self._rewrite_rules()
        improves = (lambda new, old: new < old) if order == "asc" \
            else (lambda new, old: new > old)

        current = e
        for _ in range(max_steps):
            fired = self._reduce_step(current, rules, improves)
            if fired is None:
                return current
            current = fired
        raise ReduceBudgetExceeded(
            f"no fixed point within {max_steps} rewrite steps")

    def _reduce_step(self, e, rules, improves):
        for dword, coeff in e.sorted_terms():
            for pos in range(len(dword) - 1):
                (a1, i), (a2, j) = dword[pos], dword[pos + 1]
                replacement = rules.get((a1, a2, i, j))
                if not replacement:
                    continue
                new_words = [dword[:pos] + segment + dword[pos + 2:]
                             for segment, s in replacement if s]
                if not all(improves(w, dword) for w in new_words):
                    continue
                out = e - TensorElement.monomial(self.n, dword, coeff)
                for segment, s in replacement:
                    if s:
                        out = out + TensorElement.monomial(
                            self.n, dword[:pos] + segment + dword[pos + 2:],
                            coeff.scale(s))
                return out
        return None
