"""Frobenius-semilinear linear algebra over a field tower.

A system is sum_j x_j^2 * A_j = B with unknowns x_j in L and vector
columns A_j over L. Writing x_j = sum_e m_{j,e} sqrt(u)^e with m over
K = GF(2)(t) turns each x_j^2 into sum_e m_{j,e}^2 * u^e, so after
expanding every u^e * A_j in the root-subset basis and splitting the
K-coordinates over the square-free monomial basis of K over K^2, the
unknowns m_{j,e} occur linearly over K. The descended system is cleared
to polynomial rows and solved by fraction-free Gaussian elimination
(Bareiss two-term updates, exact division by the previous pivot), with
deterministic pivoting: first eligible column in canonical unknown
order, then smallest term count, then smallest row index.

The homogeneous solution set is an L-subspace of L^k, so its K-dimension
is divisible by 2^r; this is asserted on every solve. Every witness
returned anywhere is re-verified by direct substitution before being
handed to the caller.
"""

from .basefield import Poly2, RatFunc, frobenius_split, grlex_key, poly_gcd, poly_lcm
from .errors import FieldMismatchError, InternalCheckError, InvalidOperandError
from .tower import TowerElement


class SemilinearSystem:
    """Columns A_j over a common tower, with an optional right-hand side."""

    __slots__ = ("tower", "columns", "rhs")

    def __init__(self, tower, columns, rhs=None):
        def as_vector(col):
            if isinstance(col, (tuple, list)):
                return tuple(tower._coerce(a) for a in col)
            return (tower._coerce(col),)

        columns = [as_vector(col) for col in columns]
        if columns and any(len(c) != len(columns[0]) for c in columns):
            raise InvalidOperandError("columns must share one length")
        if rhs is not None:
            rhs = as_vector(rhs)
            if columns and len(rhs) != len(columns[0]):
                raise FieldMismatchError("right-hand side length mismatch")
        self.tower = tower
        self.columns = columns
        self.rhs = rhs


class KernelDescription:
    """Kernel of a homogeneous system: L-dimension, witness basis, and
    the rank of the descended K-matrix.

    Invariant (checked): rank_over_K + 2^r * dim_over_L = k * 2^r, and
    every basis witness substitutes to zero exactly.
    """

    __slots__ = ("dim_over_L", "basis", "rank_over_K")

    def __init__(self, dim_over_L, basis, rank_over_K):
        self.dim_over_L = dim_over_L
        self.basis = basis
        self.rank_over_K = rank_over_K

    def __repr__(self):
        return "KernelDescription(dim_over_L=%d, rank_over_K=%d)" % (
            self.dim_over_L, self.rank_over_K)


# ---------------------------------------------------------------------------
# Fraction-free elimination over GF(2)[t]
# ---------------------------------------------------------------------------

class _Elimination:
    """Forward Bareiss elimination on sparse polynomial rows.

    Keeps the per-step history (pivot value, previous pivot, column
    factors) so that right-hand sides arriving later can be replayed
    through the same row operations.
    """

    __slots__ = ("rows", "ncols", "pivots", "history", "pivot_rows")

    def __init__(self, rows, ncols):
        self.rows = [dict(r) for r in rows]
        self.ncols = ncols
        self.pivots = []   # (row, col) in elimination order
        self.history = []  # (pivot_row, col, pivot, prev_pivot, [(row, factor)])
        self._eliminate()
        self.pivot_rows = {r: c for r, c in self.pivots}

    def _eliminate(self):
        rows = self.rows
        active = list(range(len(rows)))
        prev = Poly2.one()
        col = 0
        while col < self.ncols and active:
            candidates = [i for i in active if rows[i].get(col)]
            if not candidates:
                col += 1
                continue
            piv_row = min(candidates, key=lambda i: (len(rows[i][col].terms), i))
            piv = rows[piv_row][col]
            active.remove(piv_row)
            prow = rows[piv_row]
            scale_only = piv.is_one() and prev.is_one()
            updates = []
            for i in active:
                row = rows[i]
                factor = row.pop(col, None)
                updates.append((i, factor))
                if factor is None:
                    # Bareiss still rescales rows missing the pivot column
                    if not scale_only:
                        for c in row:
                            row[c] = (piv * row[c]).exact_div(prev)
                    continue
                new = {}
                for c in row.keys() | prow.keys():
                    if c == col:
                        continue
                    a = row.get(c)
                    b = prow.get(c)
                    if b is None:
                        val = piv * a
                    elif a is None:
                        val = factor * b
                    else:
                        val = piv * a + factor * b
                    if not prev.is_one():
                        val = val.exact_div(prev)
                    if val:
                        new[c] = val
                rows[i] = new
            self.history.append((piv_row, col, piv, prev, updates))
            self.pivots.append((piv_row, col))
            prev = piv
            col += 1

    @property
    def rank(self):
        return len(self.pivots)

    def replay_rhs(self, rhs):
        """Run a {row: RatFunc} right-hand side through the recorded row
        operations (field arithmetic; no exactness requirements)."""
        b = dict(rhs)
        for piv_row, _col, piv, prev, updates in self.history:
            br = b.get(piv_row)
            piv_rf = RatFunc(piv, prev)
            for i, factor in updates:
                bi = b.get(i)
                term = None
                if factor is not None and br is not None:
                    term = RatFunc(factor, prev) * br
                if bi is not None:
                    bi = piv_rf * bi
                if term is not None:
                    bi = term if bi is None else bi + term
                if bi is not None:
                    if bi:
                        b[i] = bi
                    else:
                        b.pop(i, None)
        return b

    def back_substitute(self, rhs_map):
        """Solve for the pivot unknowns given an already-replayed rhs with
        free unknowns set to zero; None when inconsistent."""
        for i in range(len(self.rows)):
            if i not in self.pivot_rows and rhs_map.get(i):
                return None
        solution = {}
        for piv_row, col in reversed(self.pivots):
            row = self.rows[piv_row]
            acc = rhs_map.get(piv_row, RatFunc.zero())
            for c, v in row.items():
                if c == col:
                    continue
                xc = solution.get(c)
                if xc is not None and xc:
                    acc = acc + RatFunc(v) * xc
            solution[col] = acc / RatFunc(row[col])
        return solution

    def kernel_basis(self):
        """One kernel vector per free column, echelon-normalized."""
        pivot_cols = {c for _, c in self.pivots}
        basis = []
        for free in range(self.ncols):
            if free in pivot_cols:
                continue
            vec = {free: RatFunc.one()}
            for piv_row, col in reversed(self.pivots):
                row = self.rows[piv_row]
                acc = RatFunc.zero()
                for c, v in row.items():
                    if c == col:
                        continue
                    xc = vec.get(c)
                    if xc is not None and xc:
                        acc = acc + RatFunc(v) * xc
                if acc:
                    vec[col] = acc / RatFunc(row[col])
            basis.append(vec)
        return basis


def _clear_row(entries):
    """Turn a {col: RatFunc} equation into polynomial form, returning
    (row, multiplier num, multiplier den): the equation was scaled by
    num/den where den is the stripped content."""
    den = Poly2.one()
    for v in entries.values():
        if not v.den.is_one():
            den = poly_lcm(den, v.den)
    row = {}
    for c, v in entries.items():
        p = v.num if den.terms == v.den.terms else v.num * den.exact_div(v.den)
        if p:
            row[c] = p
    content = Poly2.zero()
    for p in row.values():
        content = poly_gcd(content, p)
        if content.is_one():
            break
    if content and not content.is_one():
        row = {c: p.exact_div(content) for c, p in row.items()}
    else:
        content = Poly2.one()
    return row, den, content


# ---------------------------------------------------------------------------
# Descent to K
# ---------------------------------------------------------------------------

class PreparedSystem:
    """Descended and eliminated homogeneous system for a fixed column
    set. Reusable across many affine right-hand sides, which is the hot
    path of every representation test."""

    __slots__ = ("tower", "columns", "n_cols", "masks", "unknowns",
                 "key_index", "row_scale", "elim")

    def __init__(self, tower, columns):
        self.tower = tower
        self.columns = [self._as_vector(a) for a in columns]
        if any(len(c) != len(self.columns[0]) for c in self.columns):
            raise InvalidOperandError("columns must share one length")
        self.n_cols = len(self.columns)
        r = tower.n_roots
        self.masks = 1 << r
        self.unknowns = [(j, e) for j in range(self.n_cols)
                         for e in range(self.masks)]
        equations = {}
        for uidx, (j, e) in enumerate(self.unknowns):
            u = tower._uexp(e)
            for i, a in enumerate(self.columns[j]):
                prod = u * a
                for f, gamma in prod.coords.items():
                    for g, s in frobenius_split(gamma).items():
                        equations.setdefault((i, f, g), {})[uidx] = s
        keys = sorted(equations, key=lambda k: (k[0], k[1], grlex_key(k[2])))
        self.key_index = {k: n for n, k in enumerate(keys)}
        rows = []
        self.row_scale = []
        for k in keys:
            row, mult, stripped = _clear_row(equations[k])
            rows.append(row)
            self.row_scale.append(RatFunc(mult, stripped))
        self.elim = _Elimination(rows, len(self.unknowns))

    def _as_vector(self, a):
        if isinstance(a, (tuple, list)):
            return tuple(self.tower._coerce(x) for x in a)
        return (self.tower._coerce(a),)

    @property
    def rank_over_K(self):
        return self.elim.rank

    def _descend_rhs(self, rhs):
        rhs = self._as_vector(rhs)
        if len(rhs) != len(self.columns[0]):
            raise FieldMismatchError("right-hand side length mismatch")
        out = {}
        for i, b in enumerate(rhs):
            for f, gamma in b.coords.items():
                for g, s in frobenius_split(gamma).items():
                    key = (i, f, g)
                    idx = self.key_index.get(key)
                    if idx is None:
                        if s:
                            return None  # fresh coordinate: unreachable
                        continue
                    out[idx] = s * self.row_scale[idx]
        return out

    def _vectors_from_coords(self, coord_map):
        xs = []
        for j in range(self.n_cols):
            coords = {}
            for e in range(self.masks):
                m = coord_map.get(j * self.masks + e)
                if m is not None and m:
                    coords[e] = m
            xs.append(TowerElement(self.tower, coords))
        return tuple(xs)

    def affine_witness(self, rhs):
        """One exact solution of sum x_j^2 A_j = rhs, or None; verified by
        substitution before returning."""
        descended = self._descend_rhs(rhs)
        if descended is None:
            return None
        replayed = self.elim.replay_rhs(descended)
        solution = self.elim.back_substitute(replayed)
        if solution is None:
            return None
        witness = self._vectors_from_coords(solution)
        self._verify(witness, self._as_vector(rhs))
        return witness

    def kernel_description(self):
        kdim = len(self.unknowns) - self.elim.rank
        if kdim % self.masks:
            raise InternalCheckError(
                "K-kernel dimension %d not divisible by 2^r = %d"
                % (kdim, self.masks))
        dim_l = kdim // self.masks
        raw = [self._vectors_from_coords(v) for v in self.elim.kernel_basis()]
        basis = _reduce_over_L(self.tower, raw)
        if len(basis) != dim_l:
            raise InternalCheckError(
                "L-rank of kernel basis is %d, expected %d"
                % (len(basis), dim_l))
        zero = tuple(self.tower.zero() for _ in self.columns[0])
        for w in basis:
            self._verify(w, zero)
        return KernelDescription(dim_l, basis, self.elim.rank)

    def _verify(self, witness, rhs):
        n = len(self.columns[0])
        for i in range(n):
            acc = self.tower.zero()
            for j, x in enumerate(witness):
                if x:
                    acc = acc + x.square() * self.columns[j][i]
            if not (acc + rhs[i]).is_zero():
                raise InternalCheckError("witness failed substitution check")

    def matrix_csv(self):
        """Descended K-matrix as CSV, for inspection."""
        from .basefield import poly_to_str, mono_to_str
        lines = ["row_key," + ",".join("m_%d_%d" % u for u in self.unknowns)]
        keys = sorted(self.key_index, key=self.key_index.get)
        for k, row in zip(keys, self.elim.rows):
            label = "i%d|f%d|%s" % (k[0], k[1], mono_to_str(k[2]))
            cells = [poly_to_str(row[c]) if c in row else "0"
                     for c in range(len(self.unknowns))]
            lines.append(label + "," + ",".join('"%s"' % c for c in cells))
        return "\n".join(lines)


def _reduce_over_L(tower, vectors):
    """Greedy L-Gaussian reduction; returns an echelonized maximal
    L-independent subset (each output is an L-combination of inputs, so
    kernel membership is preserved)."""
    pivots = []  # (position, vector)
    for vec in vectors:
        v = list(vec)
        for pos, pvec in pivots:
            if v[pos]:
                scale = v[pos] / pvec[pos]
                v = [a + scale * b for a, b in zip(v, pvec)]
        lead = next((i for i, a in enumerate(v) if a), None)
        if lead is not None:
            pivots.append((lead, v))
    pivots.sort(key=lambda p: p[0])
    return [tuple(v) for _, v in pivots]


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def solve_homogeneous(system):
    """Kernel of sum x_j^2 A_j = 0 with an L-basis of verified witnesses."""
    if not system.columns:
        raise InvalidOperandError("system has no columns")
    return PreparedSystem(system.tower, system.columns).kernel_description()


def solve_affine(system):
    """One verified witness of sum x_j^2 A_j = B, or None."""
    if not system.columns:
        raise InvalidOperandError("system has no columns")
    if system.rhs is None:
        raise InvalidOperandError("affine solve needs a right-hand side")
    return PreparedSystem(system.tower, system.columns).affine_witness(system.rhs)


def scalar_affine_witness(tower, columns, target):
    """Witness for target in the span {sum x_j^2 c_j} of scalars c_j."""
    return PreparedSystem(tower, list(columns)).affine_witness(target)


def rank_over_field(matrix):
    """Exact rank and kernel basis of a matrix over GF(2)(t).

    `matrix` is a list of rows of RatFunc. Deterministic fraction-free
    elimination; kernel vectors come back as RatFunc lists.
    """
    if not matrix:
        return 0, []
    ncols = len(matrix[0])
    if any(len(r) != ncols for r in matrix):
        raise InvalidOperandError("ragged matrix")
    rows = []
    for r in matrix:
        entries = {c: v for c, v in enumerate(r) if v}
        row, _num, _den = _clear_row(entries)
        rows.append(row)
    elim = _Elimination(rows, ncols)
    basis = []
    for vec in elim.kernel_basis():
        basis.append([vec.get(c, RatFunc.zero()) for c in range(ncols)])
    return elim.rank, basis
