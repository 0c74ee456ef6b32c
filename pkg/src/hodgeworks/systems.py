"""Exact solver for block-matrix linear problems.

Unknowns are named matrix blocks over Q or Q(i), optionally restricted
to a subspace of their hom-space by membership conditions of the form
"X maps v into W".  Equations are sums of two-sided products L @ X @ R.
Everything is linearized over Q (a Gaussian unknown contributes its
real and imaginary part), assembled into one exact system and solved by
elimination, so a solution is found whenever one exists.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .linalg import LinAlgError, Matrix, Subspace, _rref
from .scalars import QQ, QQI, Gaussian, rational


def constrained_matrix_basis(field, nrows, ncols, conditions) -> list[Matrix]:
    """Basis of {X : pi @ X @ col(v) = 0 for all (pi, v) in conditions}.

    The basis is over the given field; conditions are field-linear.
    """
    rows = []
    for pi, v in conditions:
        for r in range(pi.nrows):
            row = [field.zero] * (nrows * ncols)
            for a in range(nrows):
                c = pi.rows[r][a]
                if not c:
                    continue
                for b in range(ncols):
                    if v[b]:
                        row[a * ncols + b] = row[a * ncols + b] + c * v[b]
            rows.append(row)
    if not rows:
        basis = None
    else:
        basis = Matrix(field, rows, ncols=nrows * ncols).kernel().basis
    out = []
    if basis is None:
        z, o = field.zero, field.one
        for a in range(nrows):
            for b in range(ncols):
                grid = [[z] * ncols for _ in range(nrows)]
                grid[a][b] = o
                out.append(Matrix(field, grid, ncols=ncols))
    else:
        for vec in basis:
            grid = [list(vec[a * ncols : (a + 1) * ncols]) for a in range(nrows)]
            out.append(Matrix(field, grid, nrows=nrows, ncols=ncols))
    return out


def membership_conditions(levels: Iterable[tuple[Subspace, Subspace]]):
    """Conditions forcing X(src) <= dst for each (src, dst) pair."""
    conds = []
    for src, dst in levels:
        if src.is_zero() or dst.is_full():
            continue
        pi = dst.annihilator_projection()
        for v in src.basis:
            conds.append((pi, v))
    return conds


def _linearize(mat: Matrix) -> list:
    out = []
    if mat.field is QQI:
        for r in mat.rows:
            for x in r:
                out.append(x.re)
                out.append(x.im)
    else:
        for r in mat.rows:
            out.extend(r)
    return out


class _Block:
    __slots__ = ("name", "nrows", "ncols", "field", "conditions", "basis", "offset")

    def __init__(self, name, nrows, ncols, field):
        self.name = name
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        self.conditions = []
        self.basis = None
        self.offset = 0

    def q_basis(self) -> list[Matrix]:
        """Q-linear basis of the allowed block values."""
        if self.basis is None:
            field_basis = constrained_matrix_basis(
                self.field, self.nrows, self.ncols, self.conditions
            )
            if self.field is QQI:
                i = Gaussian(0, 1)
                basis = []
                for b in field_basis:
                    basis.append(b)
                    basis.append(b.scale(i))
                self.basis = basis
            else:
                self.basis = field_basis
        return self.basis


class LinearSystem:
    """A linear problem in several constrained matrix unknowns."""

    def __init__(self):
        self._blocks: dict[str, _Block] = {}
        self._equations = []

    def add_block(self, name: str, nrows: int, ncols: int, field) -> str:
        if name in self._blocks:
            raise ValueError(f"duplicate block {name!r}")
        self._blocks[name] = _Block(name, nrows, ncols, field)
        return name

    def constrain_maps_into(self, name: str, pairs: Iterable[tuple[Subspace, Subspace]]):
        """Require block(src) <= dst for each (src, dst) subspace pair."""
        self._blocks[name].conditions.extend(membership_conditions(pairs))

    def add_equation(self, terms, rhs: Matrix | None = None):
        """Add sum of coef * L @ block @ R = rhs.

        Each term is (coef, L, name, R); L or R may be None for the
        identity.  All terms and rhs must share one output shape and
        one field.
        """
        shaped = []
        out_shape = None
        field = None
        for coef, left, name, right in terms:
            blk = self._blocks[name]
            m = left.nrows if left is not None else blk.nrows
            n = right.ncols if right is not None else blk.ncols
            if out_shape is None:
                out_shape = (m, n)
            elif out_shape != (m, n):
                raise LinAlgError("equation terms have mismatched shapes")
            f = left.field if left is not None else (right.field if right is not None else blk.field)
            if field is None:
                field = f
            shaped.append((coef, left, blk, right))
        if rhs is not None:
            if out_shape is None:
                out_shape = rhs.shape
                field = rhs.field
            elif rhs.shape != out_shape:
                raise LinAlgError("rhs shape does not match equation")
        if out_shape is None or out_shape[0] * out_shape[1] == 0:
            return
        self._equations.append((shaped, rhs, out_shape, field))

    # -- assembly -----------------------------------------------------
    def _assemble(self):
        cols = 0
        order = list(self._blocks.values())
        for blk in order:
            blk.offset = cols
            cols += len(blk.q_basis())
        rows = []
        rhs_vec = []
        for shaped, rhs, out_shape, field in self._equations:
            m, n = out_shape
            width = m * n * (2 if field is QQI else 1)
            eq_rows = [dict() for _ in range(width)]
            for coef, left, blk, right in shaped:
                for k, basis_mat in enumerate(blk.q_basis()):
                    contrib = basis_mat
                    if left is not None:
                        lmat = left
                        if lmat.field is QQI and contrib.field is QQ:
                            contrib = _to_qqi(contrib)
                        elif lmat.field is QQ and contrib.field is QQI:
                            lmat = _to_qqi(lmat)
                        contrib = lmat @ contrib
                    if right is not None:
                        rmat = right
                        if rmat.field is QQI and contrib.field is QQ:
                            contrib = _to_qqi(contrib)
                        elif rmat.field is QQ and contrib.field is QQI:
                            rmat = _to_qqi(rmat)
                        contrib = contrib @ rmat
                    if field is QQI and contrib.field is QQ:
                        contrib = _to_qqi(contrib)
                    col = blk.offset + k
                    for ridx, val in enumerate(_linearize(contrib)):
                        if val:
                            d = eq_rows[ridx]
                            if coef == 1:
                                d[col] = d.get(col, 0) + val
                            else:
                                d[col] = d.get(col, 0) + coef * val
            if rhs is None:
                rvals = [rational(0)] * width
            else:
                rv = rhs
                if field is QQI and rv.field is QQ:
                    rv = _to_qqi(rv)
                rvals = _linearize(rv)
            for ridx in range(width):
                if eq_rows[ridx] or rvals[ridx]:
                    rows.append(eq_rows[ridx])
                    rhs_vec.append(rvals[ridx])
        return rows, rhs_vec, cols

    def _solve_raw(self):
        rows, rhs_vec, ncols = self._assemble()
        dense = []
        for d, b in zip(rows, rhs_vec):
            row = [rational(0)] * (ncols + 1)
            for c, v in d.items():
                row[c] = rational(v)
            row[ncols] = rational(b)
            dense.append(row)
        red, pivots = _rref(dense, ncols + 1)
        if ncols in pivots:
            return None, ncols, red, pivots
        x = [rational(0)] * ncols
        for i, p in enumerate(pivots):
            x[p] = red[i][ncols]
        return x, ncols, red, pivots

    def solve(self) -> dict[str, Matrix] | None:
        """One solution as a dict of block matrices, or None."""
        x, _, _, _ = self._solve_raw()
        if x is None:
            return None
        return self._reconstruct(x)

    def sample(self, rng, amplitude: int = 3) -> dict[str, Matrix] | None:
        """A random solution: particular plus a random nullspace combination."""
        x, ncols, red, pivots = self._solve_raw()
        if x is None:
            return None
        free = [j for j in range(ncols) if j not in pivots]
        x = list(x)
        for j in free:
            t = rational(rng.randint(-amplitude, amplitude))
            if not t:
                continue
            x[j] = x[j] + t
            for i, p in enumerate(pivots):
                if red[i][j]:
                    x[p] = x[p] - t * red[i][j]
        return self._reconstruct(x)

    def homogeneous_basis(self) -> list[dict[str, Matrix]]:
        """A basis of the solution space of the homogeneous system."""
        rows, _, ncols = self._assemble()
        dense = []
        for d in rows:
            row = [rational(0)] * ncols
            for c, v in d.items():
                row[c] = rational(v)
            dense.append(row)
        red, pivots = _rref(dense, ncols)
        free = [j for j in range(ncols) if j not in pivots]
        out = []
        for j in free:
            x = [rational(0)] * ncols
            x[j] = rational(1)
            for i, p in enumerate(pivots):
                if red[i][j]:
                    x[p] = -red[i][j]
            out.append(self._reconstruct(x))
        return out

    def _reconstruct(self, x) -> dict[str, Matrix]:
        out = {}
        for name, blk in self._blocks.items():
            total = Matrix.zeros(blk.field, blk.nrows, blk.ncols)
            for k, basis_mat in enumerate(blk.q_basis()):
                c = x[blk.offset + k]
                if c:
                    total = total + basis_mat.scale(c)
            out[name] = total
        return out


def _to_qqi(m: Matrix) -> Matrix:
    return Matrix(QQI, [[Gaussian(x) for x in r] for r in m.rows], ncols=m.ncols)
