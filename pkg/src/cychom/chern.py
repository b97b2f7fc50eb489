"""Chern characters of idempotents and invertibles, with trace pairings.

The even character of an idempotent matrix starts from the canonical
degree-2q cycle over the scalars with a fresh unit adjoined (the old unit
surviving as an idempotent), pushes it through the unital substitution
sending that idempotent to the matrix, and collapses matrix indices with
the generalized trace.  The odd character of an invertible matrix plays
the same game over the group algebra of a finite cyclic group, seeded by
inverse-tensor-generator in degree one.  Every produced chain is checked
to be an exact cycle of the total complex.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product as iter_product

from .algebra import FDAlgebra, ground_field, matrix_algebra
from .config import default_budget
from .cyclic import CyclicComplexWindow, cyclic_complex, operator_B, operator_S
from .errors import (
    NotIdempotent,
    NotInvertible,
    OrderUnbounded,
    ValidationError,
)
from .groups import cyclic_group, group_algebra
from .linalg import to_raw, vec_axpy, vec_equal, vec_is_zero

ORDER_SEARCH_LIMIT = 24


# ---------------------------------------------------------------------------
# chains in the total complex


@dataclass
class CyclicChain:
    """A total-degree homogeneous chain of the (b, B) total complex."""

    window: CyclicComplexWindow
    degree: int
    chain: dict

    def component(self, m: int) -> dict:
        """The piece sitting in tensor degree m, in bar-window coordinates."""
        if (self.degree - m) % 2 or not 0 <= m <= self.degree:
            raise ValidationError(
                "degree-%d chains have no tensor degree %d part"
                % (self.degree, m))
        return self.window.component(self.degree, self.chain,
                                     (self.degree - m) // 2)

    def components(self) -> list:
        return [(m, self.component(m))
                for m, _ in self.window.summands(self.degree)]

    def s(self) -> "CyclicChain":
        return CyclicChain(self.window, self.degree - 2,
                           operator_S(self.window, self.degree, self.chain))

    def is_cycle(self) -> bool:
        if self.degree == 0:
            return True
        return vec_is_zero(self.window.totals[self.degree].mat_vec(self.chain))

    def equals(self, other: "CyclicChain") -> bool:
        if self.degree != other.degree:
            return False
        field = self.window.field
        diff = dict(self.chain)
        vec_axpy(diff, field.neg(field.one), other.chain, field)
        return vec_is_zero(diff)


def _require_cycle(ch: CyclicChain, what: str) -> CyclicChain:
    if not ch.is_cycle():
        raise ValidationError("%s is not a cycle at degree %d"
                              % (what, ch.degree))
    return ch


def _extend_cycle(ch: CyclicChain) -> CyclicChain:
    """Raise the total degree by two, keeping the image under S equal to ch.

    The new top component solves b(top) = -B(previous top); the solver's
    echelon preimage (free variables zero) makes the choice canonical.
    """
    window = ch.window
    n = ch.degree
    hoch = window.hochschild_window
    field = window.field
    rhs = operator_B(hoch, n, window.component(n, ch.chain, 0))
    negated = {i: field.neg(c) for i, c in rhs.items()}
    top = hoch.boundaries[n + 2].solve(negated)
    if top is None:
        raise ValidationError(
            "no chain-level extension exists at degree %d" % (n + 2))
    out = dict(window.include_component(n + 2, top, 0))
    for k in range(len(window.offsets[n])):
        comp = window.component(n, ch.chain, k)
        out.update(window.include_component(n + 2, comp, k + 1))
    return _require_cycle(CyclicChain(window, n + 2, out), "extension")


def eta_class(q: int, budget=None) -> CyclicChain:
    """The degree-2q cycle over the ground field that S collapses to 1.

    Built recursively from the constant 1 in degree zero; the q-fold image
    under S is exactly the starting chain.
    """
    if q < 0:
        raise ValidationError("the canonical even class needs q >= 0")
    budget = budget or default_budget()
    window = cyclic_complex(ground_field(budget=budget), 2 * q + 2,
                            normalized=False, budget=budget)
    ch = CyclicChain(window, 0, {0: window.field.one})
    for _ in range(q):
        ch = _extend_cycle(ch)
    return ch


def _adjoined_unit_scalars(budget=None) -> FDAlgebra:
    # the ground field with a fresh unit; the old unit is the idempotent p
    mul = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {1: 1}}
    return FDAlgebra(2, 1, mul, labels=["one", "p"], unit={0: 1},
                     name="scalars_plus", budget=budget).require_valid()


def _eta_lift(q: int, budget=None) -> CyclicChain:
    """The canonical even cycle carried over the adjoined-unit scalars.

    Substituting the fresh unit for the old one retracts it onto
    eta_class(q); keeping the two units distinct is what lets a non-unital
    evaluation at an idempotent stay a chain map.
    """
    budget = budget or default_budget()
    window = cyclic_complex(_adjoined_unit_scalars(budget), 2 * q + 2,
                            normalized=False, budget=budget)
    ch = CyclicChain(window, 0, {1: window.field.one})
    for _ in range(q):
        ch = _extend_cycle(ch)
    return ch


# ---------------------------------------------------------------------------
# K-class representatives


@dataclass
class KClassRep:
    """An N x N idempotent or invertible matrix over an algebra.

    entries[p][q] is a sparse vector over the base; flat is the same
    matrix as an element of the matrix algebra.  Invertibles carry their
    verified two-sided inverse.
    """

    kind: str
    algebra: FDAlgebra
    size: int
    matrices: FDAlgebra
    entries: tuple
    flat: dict
    inverse_flat: dict | None = None

    def entry(self, p: int, q: int) -> dict:
        return dict(self.entries[p][q])

    def matrix_trace(self) -> dict:
        field = self.algebra.field
        out = {}
        for p in range(self.size):
            vec_axpy(out, field.one, self.entries[p][p], field)
        return out


def _normalize_entries(A: FDAlgebra, matrix) -> tuple:
    N = len(matrix)
    field = A.field
    rows = []
    for row in matrix:
        if len(row) != N:
            raise ValidationError("matrix must be square")
        cleaned = []
        for entry in row:
            vec = {}
            for i, value in dict(entry).items():
                if not 0 <= i < A.dim:
                    raise ValidationError("entry coordinate out of range")
                raw = to_raw(value, field)
                if not field.is_zero(raw):
                    vec[i] = raw
            cleaned.append(vec)
        rows.append(tuple(cleaned))
    return tuple(rows)


def _flatten(A: FDAlgebra, entries, N: int) -> dict:
    out = {}
    for p in range(N):
        for q in range(N):
            for i, c in entries[p][q].items():
                out[(p * N + q) * A.dim + i] = c
    return out


def _unflatten(A: FDAlgebra, flat: dict, N: int) -> tuple:
    rows = [[{} for _ in range(N)] for _ in range(N)]
    for j, c in flat.items():
        pq, i = divmod(j, A.dim)
        p, q = divmod(pq, N)
        rows[p][q][i] = c
    return tuple(tuple(row) for row in rows)


def idempotent_rep(A: FDAlgebra, matrix, budget=None) -> KClassRep:
    """Validate a square matrix over A as an exact idempotent."""
    budget = budget or default_budget()
    entries = _normalize_entries(A, matrix)
    N = len(entries)
    M = matrix_algebra(A, N, budget=budget)
    flat = _flatten(A, entries, N)
    if not vec_equal(M.multiply(flat, flat), flat, A.field):
        raise NotIdempotent("the matrix does not square to itself")
    return KClassRep("idempotent", A, N, M, entries, flat)


def invertible_rep(A: FDAlgebra, matrix, inverse=None,
                   budget=None) -> KClassRep:
    """Validate a square matrix over A with an exact two-sided inverse."""
    budget = budget or default_budget()
    entries = _normalize_entries(A, matrix)
    N = len(entries)
    M = matrix_algebra(A, N, budget=budget)
    flat = _flatten(A, entries, N)
    if inverse is not None:
        inv = _flatten(A, _normalize_entries(A, inverse), N)
    else:
        inv = M.left_mult_matrix(flat).solve(M.unit)
        if inv is None:
            raise NotInvertible("no right inverse exists")
    if not vec_equal(M.multiply(flat, inv), M.unit, A.field):
        raise NotInvertible("the stored inverse fails on the right")
    if not vec_equal(M.multiply(inv, flat), M.unit, A.field):
        raise NotInvertible("the stored inverse fails on the left")
    return KClassRep("invertible", A, N, M, entries, flat, inverse_flat=inv)


def multiplicative_order(rep: KClassRep, limit: int) -> int | None:
    """Smallest k >= 1 with rep^k = 1, or None past the limit."""
    M = rep.matrices
    power = rep.flat
    for k in range(1, limit + 1):
        if vec_equal(power, M.unit, M.field):
            return k
        power = M.multiply(power, rep.flat)
    return None


# ---------------------------------------------------------------------------
# pushforward through evaluation and the generalized trace


def _push_through_trace(src: CyclicChain, mats, tgt: CyclicComplexWindow,
                        N: int) -> CyclicChain:
    """Substitute mats[k] for source basis element k, then trace out the
    matrix indices; mats entries are sparse vectors over the target."""
    sw = src.window
    if sw.field.order != 1:
        raise ValidationError("carrier chains must have rational scalars")
    field = tgt.field
    hoch_src = sw.hochschild_window
    hoch_tgt = tgt.hochschild_window
    out = {}
    for k, (m, _) in enumerate(sw.summands(src.degree)):
        comp = sw.component(src.degree, src.chain, k)
        if not comp:
            continue
        off = tgt.offsets[src.degree][k]
        for idx, c in comp.items():
            tup = hoch_src.tuple_of(m, idx)
            for lane in iter_product(range(N), repeat=m + 1):
                factors = [mats[tup[t]][lane[t]][lane[(t + 1) % (m + 1)]]
                           for t in range(m + 1)]
                if not all(factors):
                    continue
                for combo in iter_product(*[list(f.items())
                                            for f in factors]):
                    raw = reduce(field.mul, [v for _, v in combo])
                    value = field.scale(raw, c)
                    j = off + hoch_tgt.index_of(m, tuple(i for i, _ in combo))
                    total = field.add(out.get(j, field.zero), value)
                    if field.is_zero(total):
                        out.pop(j, None)
                    else:
                        out[j] = total
    return CyclicChain(tgt, src.degree, out)


# ---------------------------------------------------------------------------
# the characters


@dataclass
class ChernClass:
    """A character chain in the total complex of the coefficient algebra."""

    kind: str
    algebra: FDAlgebra
    q: int
    rep: KClassRep
    chain: CyclicChain

    @property
    def degree(self) -> int:
        return self.chain.degree

    def component(self, m: int) -> dict:
        return self.chain.component(m)

    def degree_zero_part(self) -> dict:
        if self.degree % 2:
            raise ValidationError("odd classes have no degree-zero part")
        return self.chain.component(0)

    def s(self) -> "ChernClass":
        return ChernClass(self.kind, self.algebra, self.q - 1, self.rep,
                          self.chain.s())


def chern_idempotent(rep: KClassRep, q: int, budget=None) -> ChernClass:
    """The even character of an idempotent, as a degree-2q cycle."""
    if rep.kind != "idempotent":
        raise ValidationError("expected an idempotent representative")
    if q < 0:
        raise ValidationError("the even character needs q >= 0")
    budget = budget or default_budget()
    lift = _eta_lift(q, budget=budget)
    A = rep.algebra
    identity = _unflatten(A, rep.matrices.unit, rep.size)
    mats = [identity, rep.entries]
    tgt = cyclic_complex(A, 2 * q + 1, normalized=False, budget=budget)
    pushed = _push_through_trace(lift, mats, tgt, rep.size)
    return ChernClass("idempotent", A, q, rep,
                      _require_cycle(pushed, "even character"))


def chern_invertible(rep: KClassRep, q: int, order_bound: int | None = None,
                     budget=None) -> ChernClass:
    """The odd character of an invertible, as a degree-(2q+1) cycle.

    The carrier is the group algebra of the cyclic group whose order is
    the multiplicative order of the matrix; elements of unbounded order
    fall outside the finite carrier and are reported as such.
    """
    if rep.kind != "invertible":
        raise ValidationError("expected an invertible representative")
    if q < 0:
        raise ValidationError("the odd character needs q >= 0")
    budget = budget or default_budget()
    limit = order_bound if order_bound is not None else ORDER_SEARCH_LIMIT
    n = multiplicative_order(rep, limit)
    if n is None:
        raise OrderUnbounded(
            "no power up to %d returns to the identity; out of the finite "
            "carrier's range" % limit)
    carrier = group_algebra(cyclic_group(n), budget=budget)
    window = cyclic_complex(carrier, 2 * q + 3, normalized=False,
                            budget=budget)
    hoch = window.hochschild_window
    seed = {window.offsets[1][0] + hoch.index_of(1, (n - 1 if n > 1 else 0,
                                                     1 if n > 1 else 0)):
            window.field.one}
    ch = _require_cycle(CyclicChain(window, 1, seed), "odd seed")
    for _ in range(q):
        ch = _extend_cycle(ch)

    A = rep.algebra
    powers = []
    flat = rep.matrices.unit
    for _ in range(n):
        powers.append(_unflatten(A, flat, rep.size))
        flat = rep.matrices.multiply(flat, rep.flat)
    tgt = cyclic_complex(A, 2 * q + 2, normalized=False, budget=budget)
    pushed = _push_through_trace(ch, powers, tgt, rep.size)
    return ChernClass("invertible", A, q, rep,
                      _require_cycle(pushed, "odd character"))


# ---------------------------------------------------------------------------
# trace pairings


def pair_with_trace(x, tau: dict, algebra: FDAlgebra | None = None):
    """Evaluate a trace functional on a degree-zero class.

    Accepts a character with a degree-zero part or a plain sparse vector
    over the algebra (a degree-zero homology representative).
    """
    if isinstance(x, ChernClass):
        vec = x.degree_zero_part()
        field = x.algebra.field
    else:
        if algebra is None:
            raise ValidationError("plain vectors need the algebra")
        vec = dict(x)
        field = algebra.field
    total = field.zero
    for i, c in vec.items():
        t = tau.get(i)
        if t is not None:
            total = field.add(total, field.mul(t, c))
    return total
