"""The grade-one operator d on the differential tensor algebra.

On a canonical monomial  d^{a_1}x^{i_1} (x) ... (x) d^{a_m}x^{i_m} * r  the
operator raises each letter in turn, weighting the j-th summand by
q^(a_1 + ... + a_{j-1}) and dropping any summand whose letter already has
grade 2 (there is no grade-3 letter), and finally appends the coefficient's
own differential with weight q^(a_1 + ... + a_m):

    d(W * r) = sum_j q^(prefix grade) (W with letter j raised) * r
             + q^(grade of W) W (x) dx^s * D_s(r).

On grade-0 input this is the first-order coordinate differential.  The
operator is a prolongation of both coordinate differentials, but its square
on the algebra is not the order-2 coordinate differential: the two differ
by q dx^i (x) dx^j D_j(D_i(.)), and the third power does not vanish on the
raw tensor algebra at all; it only vanishes modulo the compatibility ideal.
"""

from __future__ import annotations

from .scalar import q_power
from .calculus import Calculus
from .tensoralg import TensorElement


def d(calc: Calculus, w: TensorElement) -> TensorElement:
    if w.n != calc.n:
        raise ValueError(f"element has {w.n} generators, calculus has {calc.n}")
    out = TensorElement(calc.n)
    for dword, r in w.terms.items():
        prefix = 0
        for pos, (grade, index) in enumerate(dword):
            if grade == 1:
                raised = dword[:pos] + ((2, index),) + dword[pos + 1:]
                out._accumulate(raised, r.scale(q_power(prefix)))
            prefix += grade
        tail_weight = q_power(prefix)
        for s, ds in enumerate(calc.gradient(r), start=1):
            if ds:
                out._accumulate(dword + ((1, s),), ds.scale(tail_weight))
    return out


def d_power(calc: Calculus, w: TensorElement, times: int) -> TensorElement:
    """Iterated differential; times >= 1."""
    if times < 1:
        raise ValueError("iteration count must be >= 1")
    out = w
    for _ in range(times):
        out = d(calc, out)
    return out


# Closed-form differentials of a structure-map entry.  These reproduce the
# expansion one gets by iterating d on the grade-0 element entry(i, j, k);
# keeping them as independent formulas lets tests cross-check the operator
# and lets the ideal generators be built without iterating d.

def entry_d1(calc: Calculus, i: int, j: int, k: int) -> TensorElement:
    """dx^l D_l(e)  for the entry e = m(x^i)[k][j]."""
    return calc.d1(calc.bmap.entry(i, j, k))


def entry_d2(calc: Calculus, i: int, j: int, k: int) -> TensorElement:
    """d^2 x^l D_l(e) + q dx^l (x) dx^m D_m(D_l(e))."""
    e = calc.bmap.entry(i, j, k)
    out = calc.d2_tilde(e)
    q = q_power(1)
    for l, dl in enumerate(calc.gradient(e), start=1):
        for m, dml in enumerate(calc.gradient(dl), start=1):
            if dml:
                out._accumulate(((1, l), (1, m)), dml.scale(q))
    return out


def entry_d3(calc: Calculus, i: int, j: int, k: int) -> TensorElement:
    """q[2]_q d^2x^l (x) dx^m D_m D_l(e) + q^2 dx^l (x) d^2x^m D_m D_l(e)
    + dx^l (x) dx^m (x) dx^p D_p D_m D_l(e)."""
    from .scalar import q_integer
    e = calc.bmap.entry(i, j, k)
    out = TensorElement(calc.n)
    w21 = q_power(1) * q_integer(2)
    w12 = q_power(2)
    for l, dl in enumerate(calc.gradient(e), start=1):
        for m, dml in enumerate(calc.gradient(dl), start=1):
            if dml:
                out._accumulate(((2, l), (1, m)), dml.scale(w21))
                out._accumulate(((1, l), (2, m)), dml.scale(w12))
            for p, dpml in enumerate(calc.gradient(dml), start=1):
                if dpml:
                    out._accumulate(((1, l), (1, m), (1, p)), dpml)
    return out
