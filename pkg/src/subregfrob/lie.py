"""Matrix Lie algebras, sl2-triples, the Dynkin grading and the normalized module basis.

The module basis is built from lowest-weight vectors by repeated ``ad e``:
``X^i_I = (ad e)^(eta_i + I) X^i_{-eta_i} / (eta_i + I)!``.  Labels are pairs
``(i, I)`` with the module index ``i`` starting at 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Mapping, Sequence

from . import d4data
from .exact import ExactMatrix, NFElem, mat_inverse, nf, nullspace, rref
from .exact.nf import ONE, ZERO

__all__ = [
    "BasisRelationError",
    "LinearCoordinates",
    "MatrixLieAlgebra",
    "ModuleBasis",
    "OrderedDualBasis",
    "SlTriple",
    "build_d4",
    "build_d4_basis",
    "build_module_basis",
    "dual_basis_and_structure_constants",
    "dynkin_grading",
    "invariant_form",
    "pairing_constant",
]

Label = tuple[int, int]


class BasisRelationError(ValueError):
    """A defining identity of the module basis failed; the message names it."""


def _flat(m: ExactMatrix) -> list[NFElem]:
    return [x for r in m.entries for x in r]


class LinearCoordinates:
    """Coordinates of matrices in a fixed linearly independent family.

    Picks ``dim`` matrix positions where the family restricts to an invertible
    square block, so extracting coordinates costs one small matrix-vector
    product instead of a linear solve.
    """

    def __init__(self, basis: Sequence[ExactMatrix]):
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.shape = self.basis[0].shape
        rows = [_flat(b) for b in self.basis]
        _, piv = rref(rows)
        if len(piv) != self.dim:
            raise ValueError(f"family of {self.dim} matrices has rank {len(piv)}")
        self.positions = piv
        block = ExactMatrix([[r[p] for p in piv] for r in rows], zero=ZERO)
        inv = mat_inverse(block)
        # coords = m[positions] @ inv
        self._inv_rows = [[(j, x) for j, x in enumerate(row) if x] for row in inv.entries]

    def coords(self, m: ExactMatrix, check: bool = False) -> list[NFElem]:
        n = self.shape[1]
        out = [ZERO] * self.dim
        for pos, row in zip(self.positions, self._inv_rows):
            v = m.entries[pos // n][pos % n]
            if v:
                for j, x in row:
                    out[j] = out[j] + v * x
        if check and self.combine(out) != m:
            raise ValueError("matrix is not in the span of the basis")
        return out

    def combine(self, coeffs: Sequence) -> ExactMatrix:
        rows, cols = self.shape
        acc = [[ZERO] * cols for _ in range(rows)]
        for c, b in zip(coeffs, self.basis):
            c = nf(c)
            if not c:
                continue
            for i, r in enumerate(b.entries):
                for j, x in enumerate(r):
                    if x:
                        acc[i][j] = acc[i][j] + c * x
        return ExactMatrix(acc, zero=ZERO)

    def contains(self, m: ExactMatrix) -> bool:
        return self.combine(self.coords(m)) == m


def _trace_product(a: ExactMatrix, b: ExactMatrix) -> NFElem:
    acc = ZERO
    bt = b.entries
    for i, r in enumerate(a.entries):
        for j, x in enumerate(r):
            if x:
                y = bt[j][i]
                if y:
                    acc = acc + x * y
    return acc


class MatrixLieAlgebra:
    """A Lie subalgebra of gl(n) with a trace-form-based invariant pairing."""

    def __init__(self, basis: Sequence[ExactMatrix], form_scale: NFElem = ONE):
        self.basis = list(basis)
        self.n = self.basis[0].rows
        self.form_scale = nf(form_scale)
        self.coordinates = LinearCoordinates(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def generated_by(cls, generators: Sequence[ExactMatrix]) -> MatrixLieAlgebra:
        """Span closure of ``generators`` under the commutator."""
        basis: list[ExactMatrix] = []
        rows: list[list[NFElem]] = []

        def add(m):
            cand = rows + [_flat(m)]
            if len(rref(cand)[1]) > len(rows):
                rows.append(_flat(m))
                basis.append(m)
                return True
            return False

        for g in generators:
            add(g)
        frontier = list(basis)
        while frontier:
            new = []
            for a in frontier:
                for b in list(basis):
                    c = a.commutator(b)
                    if not c.is_zero() and add(c):
                        new.append(c)
            frontier = new
        return cls(basis)

    def bracket(self, a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
        return a.commutator(b)

    def form(self, a: ExactMatrix, b: ExactMatrix) -> NFElem:
        return self.form_scale * _trace_product(a, b)

    def contains(self, m: ExactMatrix) -> bool:
        return self.coordinates.contains(m)

    def ad_matrix(self, x: ExactMatrix) -> ExactMatrix:
        """Matrix of ``ad x`` on the stored basis (columns are images)."""
        cols = [self.coordinates.coords(x.commutator(b)) for b in self.basis]
        return ExactMatrix([list(r) for r in zip(*cols)], zero=ZERO)


def invariant_form(alg: MatrixLieAlgebra, a: ExactMatrix, b: ExactMatrix) -> NFElem:
    return alg.form(a, b)


@dataclass(frozen=True)
class SlTriple:
    e: ExactMatrix
    h: ExactMatrix
    f: ExactMatrix

    def relations_hold(self) -> bool:
        e, h, f = self.e, self.h, self.f
        return (h.commutator(e) == e.scale(2) and h.commutator(f) == f.scale(-2)
                and e.commutator(f) == h)


def build_d4() -> tuple[MatrixLieAlgebra, SlTriple]:
    """The 28-dimensional D4 realization in gl(8) with ``<e, f> = 1``."""
    e, h, f = d4data.triple_matrices()
    triple = SlTriple(e, h, f)
    if not triple.relations_hold():
        raise BasisRelationError("[h,e]=2e, [h,f]=-2f, [e,f]=h")
    gens = [e, f] + list(d4data.lowest_weight_matrices().values())
    alg = MatrixLieAlgebra.generated_by(gens)
    alg.form_scale = _trace_product(e, f).inverse()
    return alg, triple


def dynkin_grading(alg: MatrixLieAlgebra, h: ExactMatrix) -> dict[int, list[ExactMatrix]]:
    """Eigenspaces of ``ad h`` keyed by (integer) eigenvalue."""
    ad = alg.ad_matrix(h)
    out: dict[int, list[ExactMatrix]] = {}
    found = 0
    k = 0
    while found < alg.dim:
        if k > 2 * alg.dim:
            raise ArithmeticError("ad h is not diagonalizable with integer eigenvalues")
        for g in ((k,) if k == 0 else (k, -k)):
            shifted = [[x - g if i == j else x for j, x in enumerate(r)]
                       for i, r in enumerate(ad.entries)]
            vecs = nullspace(shifted)
            if vecs:
                out[g] = [alg.coordinates.combine(v) for v in vecs]
                found += len(vecs)
        k += 1
    return dict(sorted(out.items()))


def pairing_constant(eta: int, I: int) -> int:
    """``<X^i_I, X^i_{-I}> = (-1)^(eta - I + 1) * binom(2 eta, eta - I)``."""
    return (-1) ** (eta - I + 1) * comb(2 * eta, eta - I)


@dataclass
class ModuleBasis:
    """The normalized basis ``X^i_I`` of the sl2-module decomposition."""

    alg: MatrixLieAlgebra
    triple: SlTriple
    weights: tuple[int, ...]
    vectors: dict[Label, ExactMatrix]
    labels: list[Label] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [(i, I) for i in range(1, len(self.weights) + 1)
                           for I in range(-self.weights[i - 1], self.weights[i - 1] + 1)]
        self._coords = LinearCoordinates([self.vectors[l] for l in self.labels])

    @property
    def rank(self) -> int:
        return len(self.weights) - 2

    @property
    def kappa(self) -> int:
        return max(self.weights)

    @property
    def eta0(self) -> int:
        # Coxeter number minus one: dim = rank * (coxeter + 1)
        return self.alg.dim // self.rank - 2

    def eta(self, i: int) -> int:
        return self.weights[i - 1]

    def __getitem__(self, label: Label) -> ExactMatrix:
        return self.vectors[label]

    def coords(self, m: ExactMatrix) -> dict[Label, NFElem]:
        """Nonzero coefficients of ``m`` on the module basis."""
        return {l: c for l, c in zip(self.labels, self._coords.coords(m)) if c}

    def combine(self, coeffs: Mapping[Label, object]) -> ExactMatrix:
        vec = [coeffs.get(l, 0) for l in self.labels]
        return self._coords.combine(vec)

    def grade(self, label: Label) -> int:
        return 2 * label[1]

    def check_relations(self) -> list[str]:
        """All violated sl2-relations and pairing-law instances (empty if none)."""
        e, h, f = self.triple.e, self.triple.h, self.triple.f
        bad = []
        for (i, I), x in self.vectors.items():
            eta = self.eta(i)
            if h.commutator(x) != x.scale(2 * I):
                bad.append(f"ad h X^{i}_{I} = {2 * I} X^{i}_{I}")
            up = self.vectors.get((i, I + 1))
            if e.commutator(x) != (up.scale(eta + I + 1) if up is not None else x.scale(0)):
                bad.append(f"ad e X^{i}_{I} = {eta + I + 1} X^{i}_{I + 1}")
            dn = self.vectors.get((i, I - 1))
            if f.commutator(x) != (dn.scale(eta - I + 1) if dn is not None else x.scale(0)):
                bad.append(f"ad f X^{i}_{I} = {eta - I + 1} X^{i}_{I - 1}")
        return bad

    def check_pairing(self) -> list[str]:
        bad = []
        for a in self.labels:
            for b in self.labels:
                want = pairing_constant(self.eta(a[0]), a[1]) if (a[0] == b[0] and a[1] == -b[1]) else 0
                if self.alg.form(self.vectors[a], self.vectors[b]) != want:
                    bad.append(f"<X^{a[0]}_{a[1]}, X^{b[0]}_{b[1]}> = {want}")
        return bad


def build_module_basis(alg: MatrixLieAlgebra, triple: SlTriple,
                       lowest: Mapping[int, ExactMatrix], weights: Sequence[int],
                       check: bool = True) -> ModuleBasis:
    """Normalized basis from lowest-weight vectors; module 1 is the triple itself.

    ``lowest`` maps module index to ``X^i_{-eta_i}``; a missing index 1 means
    ``X^1_{-1} = f``.
    """
    lowest = dict(lowest)
    lowest.setdefault(1, triple.f)
    e = triple.e
    vectors: dict[Label, ExactMatrix] = {}
    for i, eta in enumerate(weights, start=1):
        x = lowest[i]
        if not triple.f.commutator(x).is_zero():
            raise BasisRelationError(f"ad f X^{i}_{-eta} = 0")
        cur = x
        for step in range(2 * eta + 1):
            vectors[(i, step - eta)] = cur.scale(nf(1) / factorial(step))
            cur = e.commutator(cur)
        if not cur.is_zero():
            raise BasisRelationError(f"(ad e)^{2 * eta + 1} X^{i}_{-eta} = 0")
    mb = ModuleBasis(alg, triple, tuple(weights), vectors)
    if len(mb.labels) != alg.dim:
        raise BasisRelationError(f"module dimensions sum to {len(mb.labels)}, not {alg.dim}")
    if check:
        bad = mb.check_relations()
        if bad:
            raise BasisRelationError("violated: " + "; ".join(bad[:5]))
    return mb


@dataclass
class OrderedDualBasis:
    """Ordered basis ``xi_I``, dual basis ``xi^I`` and structure constants.

    ``structure[I][J]`` is a sparse dict ``K -> c^{IJ}_K`` for
    ``[xi^I, xi^J] = sum_K c^{IJ}_K xi^K``; ``gram[I][J] = <xi^I, xi^J>``.
    Indices are 0-based positions in ``order``.
    """

    basis: ModuleBasis
    order: list[Label]
    lower: list[ExactMatrix]
    upper: list[ExactMatrix]
    structure: list[list[dict[int, NFElem]]]
    gram: ExactMatrix
    lower_gram: ExactMatrix

    @property
    def size(self) -> int:
        return len(self.order)

    def index(self, label: Label) -> int:
        return self.order.index(label)

    def pairing(self, m: ExactMatrix) -> list[NFElem]:
        """``<m, xi^K>`` for every K, i.e. the coordinates of m on ``xi_K``."""
        c = self.basis.coords(m)
        return [c.get(l, ZERO) for l in self.order]

    def antidiagonal_defects(self) -> list[tuple[int, int]]:
        """Pairs (I, J), I <= J, with ``<xi_I, xi_J> != 0`` off the antidiagonal."""
        n = self.size
        return [(i, j) for i in range(n) for j in range(i, n)
                if self.lower_gram[i, j] and i + j != n - 1]

    def jacobi_residual(self, i: int, j: int, k: int) -> dict[int, NFElem]:
        """Coefficients of the cyclic Jacobi sum for ``xi^i, xi^j, xi^k``."""
        out: dict[int, NFElem] = {}

        def acc(a, b, c):
            for m, x in self.structure[a][b].items():
                for p, y in self.structure[m][c].items():
                    out[p] = out.get(p, ZERO) + x * y

        acc(i, j, k)
        acc(j, k, i)
        acc(k, i, j)
        return {p: v for p, v in out.items() if v}


def _ordering(mb: ModuleBasis) -> list[Label]:
    """Lowest-weight vectors first, their partners last in mirrored order.

    Middle: negative-grade vectors by ascending grade, then grade 0, then the
    positive partners mirrored, so ``<xi_I, xi_J>`` is antidiagonal away from
    the grade-0 block (ties broken by module index).
    """
    r2 = len(mb.weights)
    first = [(i, -mb.eta(i)) for i in range(1, r2 + 1)]
    rest_neg = sorted((l for l in mb.labels if l[1] < 0 and l not in first),
                      key=lambda l: (l[1], l[0]))
    zero = [l for l in mb.labels if l[1] == 0]
    head = first + rest_neg
    tail = [(i, -I) for (i, I) in reversed(head)]
    return head + zero + tail


def dual_basis_and_structure_constants(mb: ModuleBasis) -> OrderedDualBasis:
    order = _ordering(mb)
    alg = mb.alg
    lower = [mb[l] for l in order]
    # xi^{(i,I)} = X^i_{-I} / <X^i_I, X^i_{-I}>
    upper = [mb[(i, -I)].scale(nf(1) / pairing_constant(mb.eta(i), I)) for (i, I) in order]
    pos = {l: k for k, l in enumerate(order)}
    n = len(order)

    def upper_coords(m):
        # coefficient on xi^K is <m, xi_K>
        c = mb.coords(m)
        out = {}
        for (i, I), v in c.items():
            k = pos[(i, -I)]
            out[k] = v * pairing_constant(mb.eta(i), -I)
        return out

    structure: list[list[dict[int, NFElem]]] = [[{} for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            c = upper_coords(upper[a].commutator(upper[b]))
            structure[a][b] = c
            structure[b][a] = {k: -v for k, v in c.items()}
    gram = ExactMatrix([[alg.form(x, y) for y in upper] for x in upper], zero=ZERO)
    lower_gram = ExactMatrix([[alg.form(x, y) for y in lower] for x in lower], zero=ZERO)
    return OrderedDualBasis(mb, order, lower, upper, structure, gram, lower_gram)


def build_d4_basis() -> tuple[MatrixLieAlgebra, SlTriple, ModuleBasis]:
    alg, triple = build_d4()
    mb = build_module_basis(alg, triple, d4data.lowest_weight_matrices(), d4data.WEIGHTS)
    return alg, triple, mb
