"""Cyclic homology: the operators t and B, the bicomplex, S, SBI, HP.

The bicomplex columns are the Hochschild complex of the algebra; degree-n
total chains are stacked Hochschild chains of degrees n, n-2, ...  The
periodic theory is computed two independent ways: through the radical
(nilpotent ideals do not change it, and what is left is semisimple) and by
stabilizing the images of the periodicity operator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraMap, FDAlgebra, TwoSidedIdeal, direct_sum, \
    ideal_as_algebra, quotient_algebra, unitalization
from .config import default_budget
from .errors import DegreeTooLow, NonUnital, NotMultiplicative, SizeOverflow, \
    ValidationError
from .hochschild import ChainComplexWindow, DegreeHomology, HomologyReport, \
    _phi_slot_maps, _tensor_chain_matrix, _window_homology, bar_complex, \
    induced_map_hh
from .linalg import Homology, SparseMatrix, Subspace, homology, induced_map
from .structure import center, semisimple_quotient


# ---------------------------------------------------------------------------
# the operators t and B on bar-window chains


def cyclic_t(window: ChainComplexWindow, n: int, chain: dict) -> dict:
    """The signed cyclic rotation on a degree-n chain.

    Only defined on the unnormalized window: rotation moves interior
    entries into slot 0, which the reduced coordinates cannot express.
    """
    if window.normalized:
        raise ValidationError(
            "cyclic rotation does not act on the reduced window")
    if window.module is not None:
        raise ValidationError("cyclic rotation needs coefficients in A")
    field = window.field
    out = {}
    for index, c in chain.items():
        tup = window.tuple_of(n, index)
        rotated = (tup[-1],) + tup[:-1]
        value = field.neg(c) if n % 2 else c
        key = window.index_of(n, rotated)
        prev = out.get(key)
        total = value if prev is None else field.add(prev, value)
        if field.is_zero(total):
            out.pop(key, None)
        else:
            out[key] = total
    return out


def _accumulate(acc, key, value, field):
    prev = acc.get(key)
    total = value if prev is None else field.add(prev, value)
    if field.is_zero(total):
        acc.pop(key, None)
    else:
        acc[key] = total


def _B_column_unnormalized(window: ChainComplexWindow, n: int,
                           tup: tuple) -> dict:
    # (1 - t) s sum_j t^j on a single basis tensor
    A = window.algebra
    field = window.field
    unit_items = list(A.unit.items())
    acc = {}
    for j in range(n + 1):
        negate = bool((n * j) % 2)
        rotated = tup[-j:] + tup[:-j] if j else tup
        for u, cu in unit_items:
            coeff = field.neg(cu) if negate else cu
            _accumulate(acc, window.index_of(n + 1, (u,) + rotated),
                        coeff, field)
            # the t-image of the inserted term, with t's sign on degree n+1
            wrapped = (rotated[-1], u) + rotated[:-1]
            back = coeff if (n + 1) % 2 else field.neg(coeff)
            _accumulate(acc, window.index_of(n + 1, wrapped), back, field)
    return acc


def _B_column_normalized(window: ChainComplexWindow, n: int,
                         tup: tuple) -> dict:
    # in reduced coordinates only the s-part survives: every t-image of an
    # inserted unit carries that unit in an interior slot
    field = window.field
    if tup[0] == 0:
        return {}
    seq = (tup[0],) + tuple(code + 1 for code in tup[1:])
    acc = {}
    for j in range(n + 1):
        rotated = seq[-j:] + seq[:-j] if j else seq
        coeff = field.neg(field.one) if (n * j) % 2 else field.one
        target = (0,) + tuple(f - 1 for f in rotated)
        _accumulate(acc, window.index_of(n + 1, target), coeff, field)
    return acc


def operator_B(window: ChainComplexWindow, n: int, chain: dict) -> dict:
    """Connes' degree-raising differential applied to a degree-n chain."""
    if not window.algebra.is_unital:
        raise NonUnital("the B operator inserts the unit")
    if window.module is not None:
        raise ValidationError("the B operator needs coefficients in A")
    if n + 1 > window.n_max:
        raise ValidationError(
            "window too short: degree %d is not stored" % (n + 1))
    field = window.field
    column = (_B_column_normalized if window.normalized
              else _B_column_unnormalized)
    out = {}
    for index, c in chain.items():
        for key, value in column(window, n, window.tuple_of(n, index)).items():
            _accumulate(out, key, field.mul(c, value), field)
    return out


def _B_matrix(window: ChainComplexWindow, n: int) -> SparseMatrix:
    field = window.field
    column = (_B_column_normalized if window.normalized
              else _B_column_unnormalized)
    cols = [column(window, n, window.tuple_of(n, index))
            for index in range(window.dims[n])]
    return SparseMatrix.from_columns(cols, window.dims[n + 1], field)


# ---------------------------------------------------------------------------
# the bicomplex window


class CyclicComplexWindow:
    """Degrees 0..n_max of the total complex of the (b, B) bicomplex.

    Degree-n coordinates stack the Hochschild degrees n, n-2, ... in that
    order; summand k starts at offsets[n][k].  totals[n] is the full
    differential b + B into degree n-1.
    """

    def __init__(self, algebra, n_max, normalized, hochschild_window,
                 b_up, dims, offsets, totals):
        self.algebra = algebra
        self.n_max = n_max
        self.normalized = normalized
        self.hochschild_window = hochschild_window
        self.b_up = b_up
        self.dims = dims
        self.offsets = offsets
        self.totals = totals
        self.field = algebra.field

    def summands(self, n: int) -> list:
        return [(n - 2 * k, self.offsets[n][k])
                for k in range(len(self.offsets[n]))]

    def component(self, n: int, chain: dict, k: int) -> dict:
        """The Hochschild degree n-2k part of a total chain, re-based."""
        start = self.offsets[n][k]
        width = self.hochschild_window.dims[n - 2 * k]
        return {i - start: c for i, c in chain.items()
                if start <= i < start + width}

    def include_component(self, n: int, vec: dict, k: int) -> dict:
        start = self.offsets[n][k]
        return {i + start: c for i, c in vec.items()}

    def check_differential(self) -> None:
        for n in range(2, self.n_max + 1):
            if not self.totals[n - 1].matmul(self.totals[n]).is_zero_matrix():
                raise ValidationError(
                    "total differential squared is nonzero at degree %d" % n)


def cyclic_complex(A: FDAlgebra, n_max: int, normalized: bool | None = None,
                   budget=None) -> CyclicComplexWindow:
    """Build the cyclic bicomplex window for degrees 0..n_max."""
    budget = budget or default_budget()
    if not A.is_unital:
        raise NonUnital("the cyclic bicomplex needs a unital algebra")
    if normalized is None:
        normalized = True
    hoch = bar_complex(A, n_max, variant="b", normalized=normalized,
                       budget=budget)
    b_up = [_B_matrix(hoch, m) for m in range(n_max)]

    dims, offsets = [], []
    for n in range(n_max + 1):
        offs, total = [], 0
        for m in range(n, -1, -2):
            offs.append(total)
            total += hoch.dims[m]
        if total > budget.max_chain_dim:
            raise SizeOverflow(
                "degree-%d total space needs %d coordinates, budget is %d"
                % (n, total, budget.max_chain_dim))
        dims.append(total)
        offsets.append(offs)

    totals = [None]
    for n in range(1, n_max + 1):
        mat = SparseMatrix.zero(dims[n - 1], dims[n], A.field)
        for k in range(len(offsets[n])):
            m = n - 2 * k
            col_off = offsets[n][k]
            # b keeps the column index k, B moves one column left
            if m >= 1:
                _paste(mat, hoch.boundaries[m], offsets[n - 1][k], col_off)
            if k >= 1:
                _paste(mat, b_up[m], offsets[n - 1][k - 1], col_off)
        totals.append(mat)
    return CyclicComplexWindow(A, n_max, normalized, hoch, b_up, dims,
                               offsets, totals)


def _paste(target: SparseMatrix, block: SparseMatrix, row_off: int,
           col_off: int) -> None:
    for i, row in enumerate(block.rows):
        if row:
            out = target.rows[row_off + i]
            for j, c in row.items():
                out[col_off + j] = c


# ---------------------------------------------------------------------------
# S, I, and cyclic homology


def s_matrix(window: CyclicComplexWindow, n: int) -> SparseMatrix:
    """The periodicity projection: drop the top Hochschild component."""
    if n < 2:
        raise DegreeTooLow("the periodicity operator needs degree >= 2")
    field = window.field
    cut = window.hochschild_window.dims[n]
    mat = SparseMatrix.zero(window.dims[n - 2], window.dims[n], field)
    for j in range(window.dims[n] - cut):
        mat.rows[j][cut + j] = field.one
    return mat


def operator_S(window: CyclicComplexWindow, n: int, chain: dict) -> dict:
    if n < 2:
        raise DegreeTooLow("the periodicity operator needs degree >= 2")
    cut = window.hochschild_window.dims[n]
    return {i - cut: c for i, c in chain.items() if i >= cut}


def i_matrix(window: CyclicComplexWindow, n: int) -> SparseMatrix:
    """Inclusion of the Hochschild complex as the first column."""
    field = window.field
    mat = SparseMatrix.zero(window.dims[n], window.hochschild_window.dims[n],
                            field)
    for j in range(window.hochschild_window.dims[n]):
        mat.rows[j][j] = field.one
    return mat


def hc(A: FDAlgebra, n_max: int, normalized: bool | None = None,
       budget=None) -> HomologyReport:
    """Cyclic homology HC_0 .. HC_n_max of a unital algebra."""
    window = cyclic_complex(A, n_max + 1, normalized=normalized,
                            budget=budget)
    degrees = []
    for n in range(n_max + 1):
        H = homology(window.totals[n] if n >= 1 else None,
                     window.totals[n + 1],
                     space_dim=window.dims[n], field=window.field)
        degrees.append(DegreeHomology(degree=n, dim=H.dim,
                                      representatives=H.representatives,
                                      homology=H))
    return HomologyReport(algebra=A, n_max=n_max,
                          normalized=window.normalized,
                          dims=[d.dim for d in degrees], degrees=degrees,
                          window=window)


# ---------------------------------------------------------------------------
# the SBI long exact sequence


@dataclass
class SBINode:
    label: str
    space_dim: int
    incoming_rank: int
    outgoing_kernel: int
    composite_zero: bool

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.incoming_rank == self.outgoing_kernel


@dataclass
class SBIReport:
    algebra: FDAlgebra
    n_max: int
    hochschild: HomologyReport
    cyclic: HomologyReport
    nodes: list

    @property
    def exact(self) -> bool:
        return all(node.exact for node in self.nodes)


def sbi_check(A: FDAlgebra, n_max: int, normalized: bool | None = None,
              budget=None) -> SBIReport:
    """Exactness of ... -> HH_n -> HC_n -> HC_{n-2} -> HH_{n-1} -> ...

    All three maps are realized on homology through explicit chain
    matrices; each node reports the incoming rank and the outgoing kernel
    dimension, which agree exactly when the sequence is exact there.
    """
    window = cyclic_complex(A, n_max + 1, normalized=normalized,
                            budget=budget)
    hoch = window.hochschild_window
    field = window.field

    hh_degrees = _window_homology(hoch, n_max)
    hh_report = HomologyReport(algebra=A, n_max=n_max,
                               normalized=window.normalized,
                               dims=[d.dim for d in hh_degrees],
                               degrees=hh_degrees, window=hoch)
    hc_degrees = []
    for n in range(n_max + 1):
        H = homology(window.totals[n] if n >= 1 else None,
                     window.totals[n + 1],
                     space_dim=window.dims[n], field=field)
        hc_degrees.append(DegreeHomology(degree=n, dim=H.dim,
                                         representatives=H.representatives,
                                         homology=H))
    hc_report = HomologyReport(algebra=A, n_max=n_max,
                               normalized=window.normalized,
                               dims=[d.dim for d in hc_degrees],
                               degrees=hc_degrees, window=window)

    # homology-level matrices
    i_maps, s_maps, del_maps = {}, {}, {}
    for n in range(n_max + 1):
        i_maps[n] = induced_map(i_matrix(window, n),
                                hh_degrees[n].homology,
                                hc_degrees[n].homology)
    for n in range(2, n_max + 1):
        s_maps[n] = induced_map(s_matrix(window, n),
                                hc_degrees[n].homology,
                                hc_degrees[n - 2].homology)
    for n in range(0, n_max):
        # the connecting map out of HC_n: apply B to the top Hochschild
        # component; on cycles the lower components contribute nothing
        chain = SparseMatrix.zero(hoch.dims[n + 1], window.dims[n], field)
        for i, row in enumerate(window.b_up[n].rows):
            for j, c in row.items():
                chain.rows[i][j] = c
        del_maps[n] = induced_map(chain, hc_degrees[n].homology,
                                  hh_degrees[n + 1].homology)

    nodes = []
    for n in range(n_max + 1):
        # node HH_n: in by the connecting map from HC_{n-1}, out by I
        inc = del_maps[n - 1].rank() if n >= 1 else 0
        out_kernel = hh_degrees[n].dim - i_maps[n].rank()
        zero = True
        if n >= 1:
            zero = i_maps[n].matmul(del_maps[n - 1]).is_zero_matrix()
        nodes.append(SBINode("HH_%d" % n, hh_degrees[n].dim, inc,
                             out_kernel, zero))

        # node HC_n between I and S
        s_rank = s_maps[n].rank() if n >= 2 else 0
        zero = True
        if n >= 2:
            zero = s_maps[n].matmul(i_maps[n]).is_zero_matrix()
        nodes.append(SBINode("HC_%d" % n, hc_degrees[n].dim,
                             i_maps[n].rank(),
                             hc_degrees[n].dim - s_rank, zero))

        # node HC_n between S (from degree n+2) and the connecting map
        if n <= n_max - 2:
            inc = s_maps[n + 2].rank()
            out_kernel = hc_degrees[n].dim - del_maps[n].rank()
            zero = del_maps[n].matmul(s_maps[n + 2]).is_zero_matrix()
            nodes.append(SBINode("HC_%d_tail" % n, hc_degrees[n].dim, inc,
                                 out_kernel, zero))
    return SBIReport(algebra=A, n_max=n_max, hochschild=hh_report,
                     cyclic=hc_report, nodes=nodes)


# ---------------------------------------------------------------------------
# periodic cyclic homology


@dataclass
class HPReport:
    even_dim: int
    odd_dim: int
    method: str
    stabilized: bool | None = None
    stabilization_window: tuple | None = None
    stabilization_dims: tuple | None = None


def _stable_ranks(hc_report: HomologyReport, window: CyclicComplexWindow,
                  parity: int, cutoff: int):
    """Ranks of iterated S from the top stored level into each lower one."""
    s_hom = {}
    for n in range(2, cutoff + 1):
        s_hom[n] = induced_map(s_matrix(window, n),
                               hc_report.degrees[n].homology,
                               hc_report.degrees[n - 2].homology)
    top = cutoff - ((cutoff - parity) % 2)
    ranks = []
    for target in range(top - 2, parity - 1, -2):
        composite = None
        for source in range(target + 2, top + 1, 2):
            step = s_hom[source]
            composite = step if composite is None else composite.matmul(step)
        ranks.append(composite.rank())
    return ranks, (parity, top)


def _stabilization_dims(A: FDAlgebra, cutoff: int, normalized, budget):
    report = hc(A, cutoff, normalized=normalized, budget=budget)
    window = report.window
    dims, windows, ok = [], [], True
    for parity in (0, 1):
        ranks, span = _stable_ranks(report, window, parity, cutoff)
        if len(ranks) >= 2 and len(set(ranks)) == 1:
            dims.append(ranks[0])
            windows.append(span)
        else:
            ok = False
            dims.append(None)
            windows.append(None)
    return ok, tuple(dims), tuple(windows), report


def hp(A: FDAlgebra, mode: str = "radical_shortcut", cutoff: int | None = None,
       normalized: bool | None = None, budget=None) -> HPReport:
    """Periodic cyclic homology as an (even, odd) pair of dimensions.

    The radical shortcut quotients out the (nilpotent) radical, which
    leaves the periodic theory unchanged, and reads the answer off the
    semisimple part.  Stabilization instead watches the images of iterated
    S on a window of cyclic homology; when several consecutive images
    agree the tower has become constant.  Inconclusive stabilization is
    reported, not raised; the radical answer is authoritative either way.
    """
    if mode not in ("radical_shortcut", "stabilization", "both"):
        raise ValidationError("unknown hp mode %r" % mode)
    if not A.is_unital:
        raise NonUnital("hp needs a unital algebra; see the nonunital path")
    budget = budget or default_budget()
    if cutoff is None:
        cutoff = budget.hp_cutoff
    even = center(semisimple_quotient(A)[0].algebra).dim
    report = HPReport(even_dim=even, odd_dim=0, method=mode)
    if mode == "radical_shortcut":
        return report
    if cutoff < 4:
        raise ValidationError("stabilization needs cutoff >= 4")
    ok, dims, windows, _ = _stabilization_dims(A, cutoff, normalized, budget)
    report.stabilized = ok
    if ok:
        report.stabilization_dims = dims
        report.stabilization_window = windows
        if dims != (report.even_dim, report.odd_dim):
            raise ValidationError(
                "stabilized S-images disagree with the radical shortcut: "
                "%r vs %r" % (dims, (report.even_dim, report.odd_dim)))
    return report


def hp_nonunital(A: FDAlgebra, mode: str = "radical_shortcut",
                 cutoff: int | None = None, budget=None) -> HPReport:
    """HP of a possibly nonunital algebra through its unitalization.

    The augmentation splits off the ground field's contribution, one even
    dimension, which is subtracted.  On an algebra that happens to be
    unital this agrees with the direct computation.
    """
    plus = unitalization(A, budget=budget).algebra
    inner = hp(plus, mode=mode, cutoff=cutoff, budget=budget)
    return HPReport(even_dim=inner.even_dim - 1, odd_dim=inner.odd_dim,
                    method=inner.method + "+unitalization",
                    stabilized=inner.stabilized,
                    stabilization_window=inner.stabilization_window,
                    stabilization_dims=inner.stabilization_dims)


# ---------------------------------------------------------------------------
# induced maps on the cyclic complex


@dataclass
class InducedHC:
    source: HomologyReport
    target: HomologyReport
    chain_maps: list
    homology_maps: list


def _hc_chain_maps(phi: AlgebraMap, src_w: CyclicComplexWindow,
                   tgt_w: CyclicComplexWindow, n_max: int) -> list:
    """Blockwise chain matrices of a unital map on two cyclic windows."""
    slot0, interior = _phi_slot_maps(phi, src_w.hochschild_window,
                                     tgt_w.hochschild_window)
    hoch_maps = [_tensor_chain_matrix(src_w.hochschild_window,
                                      tgt_w.hochschild_window, m,
                                      slot0, interior)
                 for m in range(n_max + 1)]
    out = []
    for n in range(n_max + 1):
        mat = SparseMatrix.zero(tgt_w.dims[n], src_w.dims[n], tgt_w.field)
        for k in range(len(src_w.offsets[n])):
            _paste(mat, hoch_maps[n - 2 * k], tgt_w.offsets[n][k],
                   src_w.offsets[n][k])
        out.append(mat)
    return out


def induced_map_hc(phi: AlgebraMap, n_max: int,
                   normalized: bool | None = None,
                   budget=None) -> InducedHC:
    """Per-degree cyclic homology matrices of a unital multiplicative map.

    The chain map acts blockwise on the stacked Hochschild components; it
    commutes with b by multiplicativity and with B because the unit maps
    to the unit.
    """
    if not phi.multiplicative:
        raise NotMultiplicative("induced maps need a multiplicative map")
    if not phi.unital:
        raise NotMultiplicative("cyclic induced maps need a unital map")
    phi.validate()
    src = hc(phi.source, n_max, normalized=normalized, budget=budget)
    tgt = hc(phi.target, n_max, normalized=normalized, budget=budget)
    chain_maps = _hc_chain_maps(phi, src.window, tgt.window, n_max)
    hom_maps = [induced_map(chain_maps[n], src.degrees[n].homology,
                            tgt.degrees[n].homology)
                for n in range(n_max + 1)]
    return InducedHC(source=src, target=tgt, chain_maps=chain_maps,
                     homology_maps=hom_maps)


# ---------------------------------------------------------------------------
# excision


@dataclass
class ExcisionNode:
    label: str
    space_dim: int
    incoming_rank: int
    outgoing_kernel: int
    composite_zero: bool

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.incoming_rank == self.outgoing_kernel


@dataclass
class ExcisionReport:
    ideal_hp: HPReport
    algebra_hp: HPReport
    quotient_hp: HPReport
    relative_dims: tuple
    plus_dims: dict
    hc_nodes: list
    hp_nodes: list

    @property
    def identification_ok(self) -> bool:
        return self.relative_dims == (self.ideal_hp.even_dim,
                                      self.ideal_hp.odd_dim)

    @property
    def exact(self) -> bool:
        return (self.identification_ok
                and all(n.exact for n in self.hc_nodes)
                and all(n.exact for n in self.hp_nodes))


class _SubComplex:
    """A kernel subcomplex of a cyclic window, with its own homology and S."""

    def __init__(self, window: CyclicComplexWindow, chain_maps: list,
                 cutoff: int):
        field = window.field
        self.window = window
        self.spaces = [chain_maps[n].kernel_space()
                       for n in range(cutoff + 2)]
        self.diffs = [None]
        for n in range(1, cutoff + 2):
            self.diffs.append(_restrict_between(
                window.totals[n], self.spaces[n], self.spaces[n - 1]))
        self.homologies = []
        for n in range(cutoff + 1):
            self.homologies.append(homology(
                self.diffs[n], self.diffs[n + 1],
                space_dim=self.spaces[n].dim, field=field))
        self.s_hom = {}
        for n in range(2, cutoff + 1):
            s_sub = _restrict_between(s_matrix(window, n), self.spaces[n],
                                      self.spaces[n - 2])
            self.s_hom[n] = induced_map(s_sub, self.homologies[n],
                                        self.homologies[n - 2])

    def embed(self, n: int) -> SparseMatrix:
        """Coordinates of the degree-n subspace inside the window."""
        return SparseMatrix.from_columns(
            [dict(v) for v in self.spaces[n].basis],
            self.window.dims[n], self.window.field)


def _restrict_between(op: SparseMatrix, source: Subspace,
                      target: Subspace) -> SparseMatrix:
    """Matrix of an ambient operator between two subspaces, in their bases."""
    field = op.field
    cols = []
    for v in source.basis:
        image = op.mat_vec(v)
        c = target.coords(image)
        if c is None:
            raise ValidationError("operator does not preserve the subcomplex")
        cols.append({i: value for i, value in enumerate(c)
                     if not field.is_zero(value)})
    return SparseMatrix.from_columns(cols, target.dim, field)


def _stable_image(hom_list, s_hom, parity: int, cutoff: int):
    """(stable subspace of level-parity homology, chosen preimage columns).

    The subspace is the image of the longest available S-composite on
    homology; stability of the ranks along the tower must be checked by
    the caller before treating it as the periodic theory.
    """
    top = cutoff - ((cutoff - parity) % 2)
    composite = None
    for source in range(parity + 2, top + 1, 2):
        step = s_hom[source]
        composite = step if composite is None else composite.matmul(step)
    if composite is None:
        raise ValidationError("cutoff leaves no S-composite to stabilize")
    space = Subspace.from_vectors(
        hom_list[parity].dim, composite.field,
        [c for c in composite.columns() if c], canonical=True)
    preimages = []
    for vec in space.basis:
        pre = composite.solve(dict(vec))
        if pre is None:
            raise ValidationError("stable vector has no S-preimage")
        preimages.append(pre)
    return space, preimages, top


def _tower_ranks(hom_list, s_hom, parity: int, cutoff: int) -> list:
    top = cutoff - ((cutoff - parity) % 2)
    ranks = []
    for target in range(top - 2, parity - 1, -2):
        composite = None
        for source in range(target + 2, top + 1, 2):
            step = s_hom[source]
            composite = step if composite is None else composite.matmul(step)
        ranks.append(composite.rank())
    return ranks


def excision_check(A: FDAlgebra, J: TwoSidedIdeal, cutoff: int = 6,
                   budget=None) -> ExcisionReport:
    """Six-term periodic exactness for an ideal, checked at chain level.

    The three legs are embedded uniformly through adjoined units; the
    relative subcomplex (kernel of the chain-level projection) plays the
    role of the ideal, and its stabilized dimensions are matched against
    the ideal's own periodic theory computed independently through the
    radical.  Connecting maps come from lifting cycles through the
    projection and applying the total differential.
    """
    if not A.is_unital:
        raise NonUnital("excision check starts from a unital algebra")
    if cutoff % 2 or cutoff < 4:
        raise ValidationError("cutoff must be even and at least 4")
    budget = budget or default_budget()
    J.validate()
    Jalg, _ = ideal_as_algebra(J)
    Qd = quotient_algebra(A, J)

    ideal_hp = hp_nonunital(Jalg, budget=budget)
    algebra_hp = hp(A, budget=budget)
    quotient_hp = hp(Qd.algebra, budget=budget)

    Ap = unitalization(A, budget=budget)
    Qp = unitalization(Qd.algebra, budget=budget)
    field = A.field
    images = []
    for i in range(A.dim):
        vec = Qd.projection.apply({i: field.one})
        images.append(dict(vec))
    images.append({Qd.algebra.dim: field.one})
    pi_plus = AlgebraMap.from_images(Ap.algebra, Qp.algebra, images,
                                     multiplicative=True, unital=True)
    pi_plus.validate()

    WA = cyclic_complex(Ap.algebra, cutoff + 1, budget=budget)
    WQ = cyclic_complex(Qp.algebra, cutoff + 1, budget=budget)
    pi_chain = _hc_chain_maps(pi_plus, WA, WQ, cutoff + 1)
    for n in range(cutoff + 2):
        if pi_chain[n].rank() != WQ.dims[n]:
            raise ValidationError(
                "chain-level projection fails to be onto at degree %d" % n)

    HA = [homology(WA.totals[n] if n else None, WA.totals[n + 1],
                   space_dim=WA.dims[n], field=field)
          for n in range(cutoff + 1)]
    HQ = [homology(WQ.totals[n] if n else None, WQ.totals[n + 1],
                   space_dim=WQ.dims[n], field=field)
          for n in range(cutoff + 1)]
    rel = _SubComplex(WA, pi_chain, cutoff)

    # homology-level maps of the long exact sequence of the pair
    incl_hom, pi_hom, del_hom = {}, {}, {}
    sA_hom, sQ_hom = {}, {}
    for n in range(cutoff + 1):
        incl_hom[n] = induced_map(rel.embed(n), rel.homologies[n], HA[n])
        pi_hom[n] = induced_map(pi_chain[n], HA[n], HQ[n])
    for n in range(2, cutoff + 1):
        sA_hom[n] = induced_map(s_matrix(WA, n), HA[n], HA[n - 2])
        sQ_hom[n] = induced_map(s_matrix(WQ, n), HQ[n], HQ[n - 2])
    for n in range(1, cutoff + 1):
        cols = []
        for rep in HQ[n].representatives:
            lift = pi_chain[n].solve(rep)
            if lift is None:
                raise ValidationError("cycle in the quotient has no lift")
            image = WA.totals[n].mat_vec(lift)
            in_rel = rel.spaces[n - 1].coords(image)
            if in_rel is None:
                raise ValidationError(
                    "boundary of a lifted cycle misses the relative complex")
            vec = {i: c for i, c in enumerate(in_rel)
                   if not field.is_zero(c)}
            coords = rel.homologies[n - 1].coords(vec)
            if coords is None:
                raise ValidationError(
                    "connecting image is not a relative cycle")
            cols.append({i: c for i, c in enumerate(coords)
                         if not field.is_zero(c)})
        del_hom[n] = SparseMatrix.from_columns(cols, rel.homologies[n - 1].dim,
                                               field)

    hc_nodes = []
    for n in range(cutoff):
        hc_nodes.append(ExcisionNode(
            "HC_%d(algebra)" % n, HA[n].dim, incl_hom[n].rank(),
            HA[n].dim - pi_hom[n].rank(),
            pi_hom[n].matmul(incl_hom[n]).is_zero_matrix()))
        hc_nodes.append(ExcisionNode(
            "HC_%d(quotient)" % n, HQ[n].dim, pi_hom[n].rank(),
            HQ[n].dim - (del_hom[n].rank() if n >= 1 else 0),
            del_hom[n].matmul(pi_hom[n]).is_zero_matrix() if n >= 1 else True))
        hc_nodes.append(ExcisionNode(
            "HC_%d(relative)" % n, rel.homologies[n].dim,
            del_hom[n + 1].rank(),
            rel.homologies[n].dim - incl_hom[n].rank(),
            incl_hom[n].matmul(del_hom[n + 1]).is_zero_matrix()))

    # stabilized towers, with stability verified before use
    stable = {}
    for name, homs, smaps in (("relative", rel.homologies, rel.s_hom),
                              ("algebra", HA, sA_hom),
                              ("quotient", HQ, sQ_hom)):
        for parity in (0, 1):
            ranks = _tower_ranks(homs, smaps, parity, cutoff)
            if len(set(ranks)) != 1:
                raise ValidationError(
                    "S-images of the %s leg did not stabilize" % name)
            space, preimages, top = _stable_image(homs, smaps, parity, cutoff)
            stable[(name, parity)] = (space, preimages, top, homs, smaps)
    plus_dims = {name: (stable[(name, 0)][0].dim, stable[(name, 1)][0].dim)
                 for name in ("relative", "algebra", "quotient")}
    relative_dims = plus_dims["relative"]

    def stable_map(src_key, tgt_key, level_maps):
        # matrix of a degree-preserving homology map between stable parts
        src_space = stable[src_key][0]
        tgt_space = stable[tgt_key][0]
        level = level_maps[src_key[1]]
        cols = []
        for vec in src_space.basis:
            image = level.mat_vec(dict(vec))
            coords = tgt_space.coords(image)
            if coords is None:
                raise ValidationError(
                    "stable part is not preserved by an induced map")
            cols.append({i: c for i, c in enumerate(coords)
                         if not field.is_zero(c)})
        return SparseMatrix.from_columns(cols, tgt_space.dim, field)

    def stable_connecting(parity):
        # HP_parity(quotient) -> HP_{1-parity}(relative): lift each stable
        # basis vector to the top of its tower, connect, then ride S down
        src_space, preimages, top, _, _ = stable[("quotient", parity)]
        tgt_space = stable[("relative", 1 - parity)][0]
        cols = []
        for pre in preimages:
            vec = del_hom[top].mat_vec(pre)
            level = top - 1
            while level > 1 - parity:
                vec = rel.s_hom[level].mat_vec(vec)
                level -= 2
            coords = tgt_space.coords(vec)
            if coords is None:
                raise ValidationError(
                    "connecting image leaves the stable part")
            cols.append({i: c for i, c in enumerate(coords)
                         if not field.is_zero(c)})
        return SparseMatrix.from_columns(cols, tgt_space.dim, field)

    incl_stable = {p: stable_map(("relative", p), ("algebra", p), incl_hom)
                   for p in (0, 1)}
    pi_stable = {p: stable_map(("algebra", p), ("quotient", p), pi_hom)
                 for p in (0, 1)}
    del_stable = {p: stable_connecting(p) for p in (0, 1)}

    hp_nodes = []
    for p in (0, 1):
        dim_rel = stable[("relative", p)][0].dim
        dim_alg = stable[("algebra", p)][0].dim
        dim_quo = stable[("quotient", p)][0].dim
        hp_nodes.append(ExcisionNode(
            "HP_%d(relative)" % p, dim_rel, del_stable[1 - p].rank(),
            dim_rel - incl_stable[p].rank(),
            incl_stable[p].matmul(del_stable[1 - p]).is_zero_matrix()))
        hp_nodes.append(ExcisionNode(
            "HP_%d(algebra)" % p, dim_alg, incl_stable[p].rank(),
            dim_alg - pi_stable[p].rank(),
            pi_stable[p].matmul(incl_stable[p]).is_zero_matrix()))
        hp_nodes.append(ExcisionNode(
            "HP_%d(quotient)" % p, dim_quo, pi_stable[p].rank(),
            dim_quo - del_stable[p].rank(),
            del_stable[p].matmul(pi_stable[p]).is_zero_matrix()))

    # the adjoined units contribute one even dimension to the algebra and
    # quotient legs; the relative leg matches the ideal as-is
    report = ExcisionReport(
        ideal_hp=ideal_hp, algebra_hp=algebra_hp, quotient_hp=quotient_hp,
        relative_dims=relative_dims, plus_dims=plus_dims,
        hc_nodes=hc_nodes, hp_nodes=hp_nodes)
    expected_alg = (algebra_hp.even_dim + 1, algebra_hp.odd_dim)
    expected_quo = (quotient_hp.even_dim + 1, quotient_hp.odd_dim)
    if plus_dims["algebra"] != expected_alg:
        raise ValidationError(
            "stabilized algebra leg %r disagrees with the radical route %r"
            % (plus_dims["algebra"], expected_alg))
    if plus_dims["quotient"] != expected_quo:
        raise ValidationError(
            "stabilized quotient leg %r disagrees with the radical route %r"
            % (plus_dims["quotient"], expected_quo))
    return report


# ---------------------------------------------------------------------------
# direct sums


@dataclass
class DirectSumRow:
    degree: int
    left_dim: int
    right_dim: int
    sum_dim: int
    map_rank: int

    @property
    def ok(self) -> bool:
        return (self.left_dim + self.right_dim == self.sum_dim
                and self.map_rank == self.sum_dim)


@dataclass
class DirectSumReport:
    hh_rows: list
    hc_rows: list
    hp_left: HPReport
    hp_right: HPReport
    hp_sum: HPReport

    @property
    def hp_ok(self) -> bool:
        return (self.hp_left.even_dim + self.hp_right.even_dim
                == self.hp_sum.even_dim
                and self.hp_left.odd_dim + self.hp_right.odd_dim
                == self.hp_sum.odd_dim)

    @property
    def ok(self) -> bool:
        return (all(r.ok for r in self.hh_rows)
                and all(r.ok for r in self.hc_rows) and self.hp_ok)


def _stack(top: SparseMatrix, bottom: SparseMatrix) -> SparseMatrix:
    if top.ncols != bottom.ncols:
        raise ValidationError("stacked maps must share a source")
    out = SparseMatrix.zero(top.nrows + bottom.nrows, top.ncols, top.field)
    _paste(out, top, 0, 0)
    _paste(out, bottom, top.nrows, 0)
    return out


def direct_sum_check(A: FDAlgebra, B: FDAlgebra, n_max: int,
                     budget=None) -> DirectSumReport:
    """Additivity of HH, HC and HP over a direct sum of unital algebras.

    Dimension counts alone would pass for accidental equalities, so the
    paired projections are also required to give an isomorphism onto the
    product in every degree.
    """
    data = direct_sum(A, B, budget=budget)
    left_hh = induced_map_hh(data.project_left, n_max, budget=budget)
    right_hh = induced_map_hh(data.project_right, n_max, budget=budget)
    hh_rows = []
    for n in range(n_max + 1):
        stacked = _stack(left_hh.homology_maps[n], right_hh.homology_maps[n])
        hh_rows.append(DirectSumRow(
            n, left_hh.target.dims[n], right_hh.target.dims[n],
            left_hh.source.dims[n], stacked.rank()))
    left_hc = induced_map_hc(data.project_left, n_max, budget=budget)
    right_hc = induced_map_hc(data.project_right, n_max, budget=budget)
    hc_rows = []
    for n in range(n_max + 1):
        stacked = _stack(left_hc.homology_maps[n], right_hc.homology_maps[n])
        hc_rows.append(DirectSumRow(
            n, left_hc.target.dims[n], right_hc.target.dims[n],
            left_hc.source.dims[n], stacked.rank()))
    return DirectSumReport(
        hh_rows=hh_rows, hc_rows=hc_rows,
        hp_left=hp(A, budget=budget), hp_right=hp(B, budget=budget),
        hp_sum=hp(data.algebra, budget=budget))
