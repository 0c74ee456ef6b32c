"""Exact linear algebra: matrices and canonical subspaces over Q and Q(i).

Matrices act on coordinate columns; columns index the source basis.
Subspaces are stored by their reduced row-echelon basis, which is the
unique canonical representative of the span, so subspace equality is a
syntactic comparison and every identity proved by the library (for
example that decalage undoes the filtration shift) is tested as a
literal equality.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import QQ, QQI, Gaussian


class LinAlgError(ValueError):
    pass


def _rref(rows, ncols):
    """Reduced row echelon form of a list of row tuples.

    Returns (rows, pivots) with zero rows dropped.
    """
    rows = [list(r) for r in rows]
    m = len(rows)
    pivots = []
    piv = 0
    for c in range(ncols):
        r = None
        for i in range(piv, m):
            if rows[i][c]:
                r = i
                break
        if r is None:
            continue
        rows[piv], rows[r] = rows[r], rows[piv]
        inv = rows[piv][c]
        if inv != 1:
            row = rows[piv]
            for k in range(c, ncols):
                if row[k]:
                    row[k] = row[k] / inv
        prow = rows[piv]
        for i in range(m):
            if i != piv and rows[i][c]:
                f = rows[i][c]
                row = rows[i]
                for k in range(c, ncols):
                    if prow[k]:
                        row[k] = row[k] - f * prow[k]
        pivots.append(c)
        piv += 1
        if piv == m:
            break
    return [tuple(r) for r in rows[:piv]], tuple(pivots)


class Matrix:
    """An immutable exact matrix over QQ or QQI."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_rref")

    def __init__(self, field, rows: Iterable[Sequence], nrows=None, ncols=None):
        rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        if rows:
            ncols_found = len(rows[0])
            if any(len(r) != ncols_found for r in rows):
                raise LinAlgError("ragged matrix rows")
            if ncols is not None and ncols != ncols_found:
                raise LinAlgError("declared ncols does not match rows")
            ncols = ncols_found
        elif ncols is None:
            ncols = 0
        if nrows is not None and nrows != len(rows):
            raise LinAlgError("declared nrows does not match rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_rref", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix values are immutable")

    # -- constructors ----------------------------------------------
    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, field, cols: Iterable[Sequence], nrows=None) -> "Matrix":
        cols = [tuple(c) for c in cols]
        if not cols:
            return cls.zeros(field, nrows if nrows is not None else 0, 0)
        h = len(cols[0])
        if nrows is not None and h != nrows:
            raise LinAlgError("column length does not match declared row count")
        if h == 0:
            return cls.zeros(field, 0, len(cols))
        return cls(field, list(zip(*cols)))

    # -- basic algebra ----------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field is other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field.name, self.nrows, self.ncols, self.rows))

    def _check_same_shape(self, other):
        if not isinstance(other, Matrix) or self.shape != other.shape:
            raise LinAlgError("matrix shapes do not match")

    def __add__(self, other):
        self._check_same_shape(other)
        return Matrix(
            self.field,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            ncols=self.ncols,
        )

    def __sub__(self, other):
        self._check_same_shape(other)
        return Matrix(
            self.field,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            ncols=self.ncols,
        )

    def __neg__(self):
        return Matrix(self.field, [[-a for a in r] for r in self.rows], ncols=self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        return Matrix(self.field, [[c * a for a in r] for r in self.rows], ncols=self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise LinAlgError(f"shape mismatch: {self.shape} @ {other.shape}")
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return Matrix.zeros(self.field, self.nrows, other.ncols)
        ocols = list(zip(*other.rows))
        z = self.field.zero
        out = []
        for r in self.rows:
            out.append(
                [
                    sum((a * b for a, b in zip(r, c) if a and b), z)
                    for c in ocols
                ]
            )
        return Matrix(self.field, out, nrows=self.nrows, ncols=other.ncols)

    def apply(self, vec: Sequence) -> tuple:
        """Apply to a coordinate column vector."""
        if len(vec) != self.ncols:
            raise LinAlgError("vector length does not match column count")
        z = self.field.zero
        return tuple(sum((a * b for a, b in zip(r, vec) if a and b), z) for r in self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)) if self.rows else [], ncols=self.nrows)

    def conj(self) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.conj(x) for x in r] for r in self.rows], ncols=self.ncols)

    def stack_vertical(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise LinAlgError("column count mismatch in vertical stack")
        return Matrix(self.field, self.rows + other.rows, ncols=self.ncols)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    # -- elimination ------------------------------------------------
    def rref(self):
        cached = self._rref
        if cached is None:
            cached = _rref(self.rows, self.ncols)
            object.__setattr__(self, "_rref", cached)
        return cached

    @property
    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> "Subspace":
        """The solution space of m x = 0, inside the source."""
        rows, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        z, o = self.field.zero, self.field.one
        gens = []
        for j in free:
            v = [z] * self.ncols
            v[j] = o
            for i, p in enumerate(pivots):
                v[p] = -rows[i][j]
            gens.append(v)
        return Subspace.from_generators(self.field, self.ncols, gens)

    def image(self) -> "Subspace":
        """The column span, inside the target."""
        return Subspace.from_generators(self.field, self.nrows, self.columns())

    def solve(self, rhs: Sequence):
        """One solution x of self @ x = rhs, or None if inconsistent."""
        rhs = tuple(self.field.coerce(x) for x in rhs)
        if len(rhs) != self.nrows:
            raise LinAlgError("right-hand side has wrong length")
        aug = Matrix(
            self.field,
            [r + (b,) for r, b in zip(self.rows, rhs)] if self.rows else [],
            ncols=self.ncols + 1,
        )
        rows, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        z = self.field.zero
        x = [z] * self.ncols
        for i, p in enumerate(pivots):
            x[p] = rows[i][self.ncols]
        return tuple(x)

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise LinAlgError("only square matrices are invertible")
        n = self.nrows
        ident = Matrix.identity(self.field, n)
        aug = Matrix(
            self.field,
            [r + ident.rows[i] for i, r in enumerate(self.rows)],
            ncols=2 * n,
        )
        rows, pivots = aug.rref()
        if len(pivots) < n or tuple(pivots[:n]) != tuple(range(n)):
            raise LinAlgError("matrix is not invertible")
        return Matrix(self.field, [r[n:] for r in rows[:n]], ncols=n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank == self.nrows

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"


class Subspace:
    """A linear subspace of a coordinate space, in canonical echelon form.

    Two subspaces are equal iff their canonical bases coincide, so the
    lattice identities in the test-suite are literal equalities.
    """

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient: int, basis: tuple, pivots: tuple):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", pivots)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace values are immutable")

    @classmethod
    def from_generators(cls, field, ambient: int, gens: Iterable[Sequence]) -> "Subspace":
        gens = [tuple(field.coerce(x) for x in g) for g in gens]
        for g in gens:
            if len(g) != ambient:
                raise LinAlgError("generator length does not match ambient dimension")
        basis, pivots = _rref(gens, ambient)
        return cls(field, ambient, tuple(basis), pivots)

    @classmethod
    def zero(cls, field, ambient: int) -> "Subspace":
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field, ambient: int) -> "Subspace":
        ident = Matrix.identity(field, ambient)
        return cls(field, ambient, ident.rows, tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.ambient

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field is other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field.name, self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient} over {self.field!r})"

    # -- membership and coordinates ----------------------------------
    def contains(self, vec: Sequence) -> bool:
        vec = [self.field.coerce(x) for x in vec]
        if len(vec) != self.ambient:
            raise LinAlgError("vector length does not match ambient dimension")
        for row, p in zip(self.basis, self.pivots):
            c = vec[p]
            if c:
                for k in range(p, self.ambient):
                    if row[k]:
                        vec[k] = vec[k] - c * row[k]
        return not any(vec)

    def __le__(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(other.contains(row) for row in self.basis)

    def coords(self, vec: Sequence) -> tuple:
        """Coordinates of a member vector in the canonical basis.

        The echelon basis has an identity pattern on pivot columns, so
        coordinates are read off the pivot entries.
        """
        vec = tuple(self.field.coerce(x) for x in vec)
        coeffs = tuple(vec[p] for p in self.pivots)
        if self.lift(coeffs) != vec:
            raise LinAlgError("vector is not in the subspace")
        return coeffs

    def lift(self, coeffs: Sequence) -> tuple:
        coeffs = [self.field.coerce(c) for c in coeffs]
        if len(coeffs) != self.dim:
            raise LinAlgError("coefficient length does not match dimension")
        z = self.field.zero
        out = [z] * self.ambient
        for c, row in zip(coeffs, self.basis):
            if c:
                for k, x in enumerate(row):
                    if x:
                        out[k] = out[k] + c * x
        return tuple(out)

    def basis_matrix(self) -> Matrix:
        """Basis vectors as columns: the inclusion into the ambient space."""
        return Matrix(self.field, self.basis, ncols=self.ambient).transpose()

    def coords_matrix(self) -> Matrix:
        """Left inverse of basis_matrix, valid on members: picks pivot entries."""
        z, o = self.field.zero, self.field.one
        rows = []
        for p in self.pivots:
            rows.append([o if j == p else z for j in range(self.ambient)])
        return Matrix(self.field, rows, nrows=self.dim, ncols=self.ambient)

    # -- lattice operations -------------------------------------------
    def _check_compatible(self, other: "Subspace"):
        if self.field is not other.field or self.ambient != other.ambient:
            raise LinAlgError("subspaces live in different ambient spaces")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace.from_generators(self.field, self.ambient, self.basis + other.basis)

    def __and__(self, other: "Subspace") -> "Subspace":
        """Intersection by the Zassenhaus block-elimination method."""
        self._check_compatible(other)
        n = self.ambient
        z = self.field.zero
        block = [list(r) + list(r) for r in self.basis]
        block += [list(r) + [z] * n for r in other.basis]
        rows, pivots = _rref(block, 2 * n)
        gens = [r[n:] for r in rows if not any(r[:n])]
        return Subspace.from_generators(self.field, n, gens)

    def annihilator_projection(self) -> Matrix:
        """A matrix on the ambient space whose kernel is exactly this subspace.

        Rows are indexed by the non-pivot coordinates; the map computes the
        canonical coordinates of the class of x in ambient/self.
        """
        z, o = self.field.zero, self.field.one
        nonpiv = [j for j in range(self.ambient) if j not in self.pivots]
        rows = []
        for j in nonpiv:
            row = [z] * self.ambient
            row[j] = o
            for i, p in enumerate(self.pivots):
                row[p] = -self.basis[i][j]
            rows.append(row)
        return Matrix(self.field, rows, nrows=len(nonpiv), ncols=self.ambient)

    def conjugate(self) -> "Subspace":
        """Entrywise conjugation of the basis, in a declared rational basis."""
        f = self.field
        return Subspace.from_generators(
            f, self.ambient, [[f.conj(x) for x in row] for row in self.basis]
        )

    def map_by(self, m: Matrix) -> "Subspace":
        """The image of this subspace under the matrix m."""
        if m.ncols != self.ambient:
            raise LinAlgError("matrix source does not match ambient dimension")
        return Subspace.from_generators(self.field, m.nrows, [m.apply(b) for b in self.basis])


def image(m: Matrix) -> Subspace:
    return m.image()


def kernel(m: Matrix) -> Subspace:
    return m.kernel()


def preimage(m: Matrix, v: Subspace) -> Subspace:
    """The subspace {x : m x in v} of the source of m."""
    if v.ambient != m.nrows:
        raise LinAlgError("subspace does not live in the target of the matrix")
    if v.is_full():
        return Subspace.full(m.field, m.ncols)
    return (v.annihilator_projection() @ m).kernel()


class Quotient:
    """A presentation of top/bottom with compatible projection and section.

    projection maps top-coordinates onto quotient coordinates, section
    splits it (projection @ section is the identity), and the kernel of
    the projection is exactly the bottom subspace written in the
    canonical coordinates of top.
    """

    __slots__ = ("top", "bottom", "dim", "projection", "section")

    def __init__(self, top: Subspace, bottom: Subspace):
        top._check_compatible(bottom)
        if not bottom <= top:
            raise LinAlgError("quotient requires bottom <= top")
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "bottom", bottom)
        # bottom written in top-coordinates:
        inner = Subspace.from_generators(
            top.field, top.dim, [top.coords(b) for b in bottom.basis]
        )
        proj = inner.annihilator_projection()
        z, o = top.field.zero, top.field.one
        nonpiv = [j for j in range(top.dim) if j not in inner.pivots]
        sect_cols = []
        for j in nonpiv:
            col = [z] * top.dim
            col[j] = o
            sect_cols.append(col)
        object.__setattr__(self, "dim", len(nonpiv))
        object.__setattr__(self, "projection", proj)
        object.__setattr__(
            self, "section", Matrix.from_columns(top.field, sect_cols, nrows=top.dim)
        )

    def __setattr__(self, name, value):
        raise AttributeError("Quotient values are immutable")

    def project_ambient(self, vec: Sequence) -> tuple:
        """Quotient coordinates of an ambient vector lying in top."""
        return self.projection.apply(self.top.coords(vec))

    def lift_to_ambient(self, coeffs: Sequence) -> tuple:
        """An ambient representative of a quotient coordinate vector."""
        return self.top.lift(self.section.apply(coeffs))

    def induced_matrix(self, m: Matrix, target: "Quotient") -> Matrix:
        """The matrix induced by m on the quotients.

        Requires m(top) <= target.top and m(bottom) <= target.bottom,
        which is checked via membership of the mapped basis vectors.
        """
        cols = []
        for j in range(self.dim):
            w = m.apply(self.lift_to_ambient(_unit(self.top.field, self.dim, j)))
            cols.append(target.project_ambient(w))
        for b in self.bottom.basis:
            if not target.bottom.contains(m.apply(b)):
                raise LinAlgError("map does not preserve the quotient presentation")
        return Matrix.from_columns(self.top.field, cols, nrows=target.dim)


def _unit(field, n, j):
    z, o = field.zero, field.one
    return tuple(o if k == j else z for k in range(n))


def quotient(u: Subspace, v: Subspace) -> Quotient:
    return Quotient(u, v)


def block_matrix(field, blocks) -> Matrix:
    """Assemble a matrix from a grid of blocks (None for zero blocks).

    Row heights and column widths are inferred; every row of blocks
    must contain at least one non-None entry per column group or the
    widths are taken from other rows.
    """
    nbr = len(blocks)
    nbc = len(blocks[0]) if nbr else 0
    heights = [None] * nbr
    widths = [None] * nbc
    for i, row in enumerate(blocks):
        if len(row) != nbc:
            raise LinAlgError("ragged block grid")
        for j, b in enumerate(row):
            if b is None:
                continue
            if heights[i] is None:
                heights[i] = b.nrows
            elif heights[i] != b.nrows:
                raise LinAlgError("inconsistent block heights")
            if widths[j] is None:
                widths[j] = b.ncols
            elif widths[j] != b.ncols:
                raise LinAlgError("inconsistent block widths")
    if any(h is None for h in heights) or any(w is None for w in widths):
        raise LinAlgError("cannot infer the shape of an all-None block line")
    z = field.zero
    rows = []
    for i, row in enumerate(blocks):
        for r in range(heights[i]):
            line = []
            for j, b in enumerate(row):
                if b is None:
                    line.extend([z] * widths[j])
                else:
                    line.extend(b.rows[r])
            rows.append(line)
    return Matrix(field, rows, ncols=sum(widths))


def direct_sum_subspace(field, parts: Sequence[Subspace]) -> Subspace:
    """The direct sum of subspaces inside the concatenated ambient space."""
    total = sum(p.ambient for p in parts)
    gens = []
    offset = 0
    z = field.zero
    for p in parts:
        for b in p.basis:
            gens.append([z] * offset + list(b) + [z] * (total - offset - p.ambient))
        offset += p.ambient
    return Subspace.from_generators(field, total, gens)


def to_gaussian_matrix(m: Matrix) -> Matrix:
    """Extension of scalars of a rational matrix to Q(i)."""
    if m.field is QQI:
        return m
    return Matrix(QQI, [[Gaussian(x) for x in r] for r in m.rows], ncols=m.ncols)


def to_gaussian_subspace(s: Subspace) -> Subspace:
    if s.field is QQI:
        return s
    return Subspace.from_generators(
        QQI, s.ambient, [[Gaussian(x) for x in row] for row in s.basis]
    )
