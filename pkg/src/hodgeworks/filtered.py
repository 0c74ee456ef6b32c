"""Filtered and bifiltered cochain complexes, shift, decalage and pages.

Conventions
-----------
* Complexes are bounded with finite-dimensional degrees; the
  differential raises degree by one and squares to zero.
* Filtrations are stored internally as decreasing chains; an increasing
  weight-style filtration with levels W_m is stored as the decreasing
  chain at level p = -m.  A filtration is kept as its "jump list" per
  degree: the value is the full space before the first jump, constant
  between jumps, and zero from the last jump on (regular and exhaustive
  by construction).
* The page of stage r at bidegree (p, q), with n = p + q, is presented
  as the subquotient

      (F^p K^n  meet  d^{-1} F^{p+r} K^{n+1})
      -------------------------------------------------------------
      (F^{p+1} K^n meet d^{-1} F^{p+r} K^{n+1}) + (d F^{p-r+1} K^{n-1} meet F^p K^n)

  with the differential of bidegree (r, 1-r) induced by d.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .linalg import LinAlgError, Matrix, Quotient, Subspace, preimage
from .scalars import QQ, QQI


class ComplexError(ValueError):
    pass


def _as_subspace(field, ambient, value) -> Subspace:
    if isinstance(value, Subspace):
        if value.ambient != ambient or value.field is not field:
            raise ComplexError("subspace does not match the declared degree")
        return value
    return Subspace.from_generators(field, ambient, value)


class Filtration:
    """A finite filtration of a graded space, canonical by jumps."""

    __slots__ = ("direction", "jumps")

    def __init__(self, direction: str, jumps: Mapping[int, tuple]):
        if direction not in ("decreasing", "increasing"):
            raise ComplexError(f"unknown filtration direction {direction!r}")
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "jumps", dict(jumps))

    def __setattr__(self, name, value):
        raise AttributeError("Filtration values are immutable")

    # -- construction --------------------------------------------------
    @classmethod
    def from_step_values(cls, direction, field, dims: Mapping[int, int], values):
        """Build from per-degree internal step values {n: {p: subspace}}.

        The declared value holds from its level up to the next declared
        level; the chain is the full space below the first declared
        level.  The eventual value must be zero (regularity).
        """
        jumps = {}
        for n, dim_n in dims.items():
            per = values.get(n, {})
            items = sorted((p, _as_subspace(field, dim_n, v)) for p, v in per.items())
            full = Subspace.full(field, dim_n)
            prev = full
            jump_list = []
            for p, v in items:
                if not v <= prev:
                    raise ComplexError(
                        f"filtration not monotone at degree {n}, level {p}"
                    )
                if v != prev:
                    jump_list.append((p, v))
                    prev = v
            if dim_n > 0:
                if not prev.is_zero():
                    raise ComplexError(
                        f"filtration not regular at degree {n}: eventual value nonzero"
                    )
            if jump_list:
                jumps[n] = tuple(jump_list)
        return cls(direction, jumps)

    @classmethod
    def decreasing(cls, field, dims, levels):
        """From user levels {p: {n: generators-or-subspace}}, decreasing."""
        values: dict[int, dict[int, object]] = {n: {} for n in dims}
        for p, per_degree in levels.items():
            for n, v in per_degree.items():
                if n in values:
                    values[n][int(p)] = v
        return cls.from_step_values("decreasing", field, dims, values)

    @classmethod
    def increasing(cls, field, dims, levels):
        """From user weight levels {m: {n: gens}}; stored at p = -m.

        W(m) is the declared value at the largest declared weight <= m,
        zero below the smallest declared weight; the largest declared
        value must be the full space (exhaustive).
        """
        values: dict[int, dict[int, object]] = {n: {} for n in dims}
        declared: dict[int, dict[int, object]] = {n: {} for n in dims}
        for m, per_degree in levels.items():
            for n, v in per_degree.items():
                if n in declared:
                    declared[n][int(m)] = v
        for n, dim_n in dims.items():
            items = sorted(
                (m, _as_subspace(field, dim_n, v)) for m, v in declared[n].items()
            )
            if not items:
                if dim_n > 0:
                    raise ComplexError(f"no weight levels declared in degree {n}")
                continue
            if not items[-1][1].is_full():
                raise ComplexError(
                    f"increasing filtration not exhaustive in degree {n}"
                )
            # W is constant from each declared weight up to the next, so
            # internally the value of the previous weight starts right
            # above the internal level of the next one.
            for (m_lo, v_lo), (m_hi, _) in zip(items, items[1:]):
                values[n][-m_hi + 1] = v_lo
            values[n][-items[0][0] + 1] = Subspace.zero(field, dim_n)
        return cls.from_step_values("increasing", field, dims, values)

    @classmethod
    def trivial(cls, field, dims, direction="decreasing"):
        """The two-step filtration: everything at level 0, zero above."""
        values = {n: {1: Subspace.zero(field, d)} for n, d in dims.items()}
        return cls.from_step_values(direction, field, dims, values)

    # -- access ---------------------------------------------------------
    def value(self, field, dims, n: int, p: int) -> Subspace:
        """The internal decreasing chain value F^p in degree n."""
        dim_n = dims.get(n, 0)
        jump_list = self.jumps.get(n, ())
        current = Subspace.full(field, dim_n)
        for jp, v in jump_list:
            if jp <= p:
                current = v
            else:
                break
        return current

    def level_range(self, n: int):
        jump_list = self.jumps.get(n)
        if not jump_list:
            return None
        return (jump_list[0][0], jump_list[-1][0])

    def window(self):
        """Smallest and largest jump level over all degrees, or None."""
        lo = hi = None
        for jump_list in self.jumps.values():
            if not jump_list:
                continue
            a, b = jump_list[0][0], jump_list[-1][0]
            lo = a if lo is None else min(lo, a)
            hi = b if hi is None else max(hi, b)
        if lo is None:
            return None
        return (lo, hi)

    def degree_shifted(self, sign: int) -> "Filtration":
        """Reindex jumps by p -> p + sign * n (used by the shift functor)."""
        jumps = {
            n: tuple((p + sign * n, v) for p, v in jump_list)
            for n, jump_list in self.jumps.items()
        }
        return Filtration(self.direction, jumps)

    def level_shifted(self, r: int) -> "Filtration":
        """Reindex jumps by p -> p - r: the r-translation filtration shift."""
        jumps = {
            n: tuple((p - r, v) for p, v in jump_list)
            for n, jump_list in self.jumps.items()
        }
        return Filtration(self.direction, jumps)

    def user_levels(self, field, dims) -> dict[int, dict[int, Subspace]]:
        """Jump levels in user convention: {level: {degree: subspace}}."""
        out: dict[int, dict[int, Subspace]] = {}
        for n, jump_list in sorted(self.jumps.items()):
            if self.direction == "decreasing":
                for p, v in jump_list:
                    out.setdefault(p, {})[n] = v
            else:
                # W jumps where G^p jumps: W(m) with m = -p gains value v
                # at the step below the internal jump.
                dim_n = dims.get(n, 0)
                prev = Subspace.full(field, dim_n)
                for p, v in jump_list:
                    out.setdefault(-p + 1, {})[n] = prev
                    prev = v
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Filtration)
            and self.direction == other.direction
            and self.jumps == other.jumps
        )

    def __hash__(self):
        return hash(
            (self.direction, tuple(sorted((n, j) for n, j in self.jumps.items())))
        )

    def __repr__(self):
        return f"Filtration({self.direction}, degrees {sorted(self.jumps)})"


class Cochain:
    """A bounded cochain complex over an exact field."""

    __slots__ = ("field", "dims", "diff")

    def __init__(self, field, dims: Mapping[int, int], diff: Mapping[int, Matrix]):
        dims = {int(n): int(d) for n, d in dims.items() if d > 0}
        clean = {}
        for n in sorted(dims):
            m = dims.get(n, 0)
            m1 = dims.get(n + 1, 0)
            if m and m1:
                given = diff.get(n)
                if given is None:
                    given = Matrix.zeros(field, m1, m)
                if given.shape != (m1, m):
                    raise ComplexError(
                        f"differential at degree {n} has shape {given.shape}, "
                        f"expected {(m1, m)}"
                    )
                if given.field is not field:
                    raise ComplexError("differential over the wrong field")
                clean[n] = given
        for n in diff:
            if n not in clean and not diff[n].is_zero():
                raise ComplexError(f"nonzero differential on a zero degree {n}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "diff", clean)
        for n, d in clean.items():
            d2 = clean.get(n + 1)
            if d2 is not None and not (d2 @ d).is_zero():
                raise ComplexError(f"differential does not square to zero at degree {n}")

    def __setattr__(self, name, value):
        raise AttributeError("complex values are immutable")

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int) -> Matrix:
        got = self.diff.get(n)
        if got is not None:
            return got
        return Matrix.zeros(self.field, self.dim(n + 1), self.dim(n))

    def degrees(self):
        return sorted(self.dims)

    def degree_window(self):
        ds = self.degrees()
        if not ds:
            return (0, 0)
        return (ds[0], ds[-1])

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def cohomology(self) -> dict[int, Quotient]:
        out = {}
        lo, hi = self.degree_window()
        for n in range(lo, hi + 1):
            z = self.d(n).kernel()
            b = self.d(n - 1).image()
            out[n] = Quotient(z, b)
        return out

    def cohomology_dims(self) -> dict[int, int]:
        return {n: q.dim for n, q in self.cohomology().items() if q.dim}

    def _core_eq(self, other) -> bool:
        return (
            self.field is other.field
            and self.dims == other.dims
            and self.diff == other.diff
        )


class FilteredComplex(Cochain):
    """A cochain complex with one finite filtration compatible with d."""

    __slots__ = ("filt",)

    def __init__(self, field, dims, diff, filt: Filtration):
        super().__init__(field, dims, diff)
        object.__setattr__(self, "filt", filt)
        _check_compatibility(self, filt)

    def f(self, n: int, p: int) -> Subspace:
        """Internal decreasing filtration value in degree n, level p."""
        return self.filt.value(self.field, self.dims, n, p)

    def level_window(self):
        w = self.filt.window()
        if w is None:
            return (0, 1)
        return w

    def with_filtration(self, filt: Filtration) -> "FilteredComplex":
        return FilteredComplex(self.field, self.dims, self.diff, filt)

    def __eq__(self, other):
        return (
            isinstance(other, FilteredComplex)
            and self._core_eq(other)
            and self.filt == other.filt
        )

    def __hash__(self):
        return hash((tuple(sorted(self.dims.items())), self.filt))

    def __repr__(self):
        return f"FilteredComplex(degrees {self.degrees()} over {self.field!r})"


class BifilteredComplex(Cochain):
    """A complex with an increasing W and a decreasing F filtration."""

    __slots__ = ("w", "f2")

    def __init__(self, field, dims, diff, w: Filtration, f: Filtration):
        super().__init__(field, dims, diff)
        if w.direction != "increasing" or f.direction != "decreasing":
            raise ComplexError("bifiltered complexes carry increasing W and decreasing F")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "f2", f)
        _check_compatibility(self, w)
        _check_compatibility(self, f)

    def wf(self, n: int, p: int) -> Subspace:
        return self.w.value(self.field, self.dims, n, p)

    def ff(self, n: int, p: int) -> Subspace:
        return self.f2.value(self.field, self.dims, n, p)

    def w_part(self) -> FilteredComplex:
        """Forget F: the (K, W) filtered complex."""
        return FilteredComplex(self.field, self.dims, self.diff, self.w)

    def f_part(self) -> FilteredComplex:
        return FilteredComplex(self.field, self.dims, self.diff, self.f2)

    def __eq__(self, other):
        return (
            isinstance(other, BifilteredComplex)
            and self._core_eq(other)
            and self.w == other.w
            and self.f2 == other.f2
        )

    def __hash__(self):
        return hash((tuple(sorted(self.dims.items())), self.w, self.f2))

    def __repr__(self):
        return f"BifilteredComplex(degrees {self.degrees()} over {self.field!r})"


def _check_compatibility(K: Cochain, filt: Filtration):
    lo, hi = K.degree_window()
    for n in range(lo, hi + 1):
        rng = filt.level_range(n)
        if rng is None:
            if K.dim(n) > 0:
                raise ComplexError(f"missing filtration data in degree {n}")
            continue
        d = K.d(n)
        for p in range(rng[0] - 1, rng[1] + 1):
            src = filt.value(K.field, K.dims, n, p)
            dst = filt.value(K.field, K.dims, n + 1, p)
            if not src.map_by(d) <= dst:
                raise ComplexError(
                    f"differential not compatible with the filtration at degree {n}, "
                    f"internal level {p}"
                )


# -- functors ------------------------------------------------------------


def shift(K: FilteredComplex) -> FilteredComplex:
    """The shift functor: new level p in degree n is old level p - n."""
    return K.with_filtration(K.filt.degree_shifted(1))


def decalage(K: FilteredComplex) -> FilteredComplex:
    """Deligne's decalage: F^p K^n becomes F^{p+n} K^n meet d^{-1} F^{p+n+1}."""
    return K.with_filtration(_decalage_filtration(K, dual=False))


def dual_decalage(K: FilteredComplex) -> FilteredComplex:
    """The dual decalage: F^p K^n becomes d F^{p+n-1} K^{n-1} + F^{p+n} K^n."""
    return K.with_filtration(_decalage_filtration(K, dual=True))


def _decalage_filtration(K: FilteredComplex, dual: bool) -> Filtration:
    lo_d, hi_d = K.degree_window()
    values: dict[int, dict[int, Subspace]] = {}
    w = K.filt.window()
    if w is None:
        return K.filt
    lo, hi = w
    for n in range(lo_d, hi_d + 1):
        if K.dim(n) == 0:
            continue
        per = {}
        p_lo = lo - n - 1
        p_hi = hi - n + 1
        d = K.d(n)
        d_prev = K.d(n - 1)
        for p in range(p_lo, p_hi + 1):
            if dual:
                v = K.f(n - 1, p + n - 1).map_by(d_prev) + K.f(n, p + n)
            else:
                v = K.f(n, p + n) & preimage(d, K.f(n + 1, p + n + 1))
            per[p] = v
        values[n] = per
    return Filtration.from_step_values(K.filt.direction, K.field, K.dims, values)


def graded(K: FilteredComplex, p: int) -> Cochain:
    """The graded piece F^p / F^{p+1} with its induced differential."""
    lo, hi = K.degree_window()
    quots = {}
    for n in range(lo, hi + 1):
        quots[n] = Quotient(K.f(n, p), K.f(n, p + 1))
    dims = {n: q.dim for n, q in quots.items()}
    diff = {}
    for n in range(lo, hi):
        if dims.get(n) and dims.get(n + 1):
            diff[n] = quots[n].induced_matrix(K.d(n), quots[n + 1])
    return Cochain(K.field, dims, diff)


def has_differential_shift(K: FilteredComplex, r: int) -> bool:
    """Whether d(F^p) <= F^{p+r} at every degree and level."""
    lo_d, hi_d = K.degree_window()
    for n in range(lo_d, hi_d + 1):
        rng = K.filt.level_range(n)
        if rng is None:
            continue
        d = K.d(n)
        for p in range(rng[0] - 1, rng[1] + 1):
            if not K.f(n, p).map_by(d) <= K.f(n + 1, p + r):
                return False
    return True


def injective_model(K: FilteredComplex, r: int) -> tuple[FilteredComplex, "FilteredMorphism"]:
    """The fibrant replacement: r-fold decalage followed by r-fold shift.

    Returns (Q, eps) where Q satisfies the level-r differential shift
    condition and eps: Q -> K is the identity on the underlying complex
    and an E_r-quasi-isomorphism.
    """
    if r < 0:
        raise ComplexError("stage must be nonnegative")
    Q = K
    for _ in range(r):
        Q = decalage(Q)
    for _ in range(r):
        Q = shift(Q)
    eps = FilteredMorphism(
        Q, K, {n: Matrix.identity(K.field, K.dim(n)) for n in K.degrees()}
    )
    return Q, eps


# -- spectral pages -------------------------------------------------------


class SpectralPage:
    """The family E_r^{p,q} of one stage, with its differential."""

    def __init__(self, K: FilteredComplex, r: int):
        if r < 0:
            raise ComplexError("page stage must be nonnegative")
        self.K = K
        self.r = r
        self._cells: dict[tuple[int, int], Quotient] = {}
        self._dmaps: dict[tuple[int, int], Matrix] = {}

    def cell(self, p: int, q: int) -> Quotient:
        key = (p, q)
        got = self._cells.get(key)
        if got is None:
            got = self._compute_cell(p, q)
            self._cells[key] = got
        return got

    def _compute_cell(self, p: int, q: int) -> Quotient:
        K, r = self.K, self.r
        n = p + q
        d = K.d(n)
        d_prev = K.d(n - 1)
        z = K.f(n, p) & preimage(d, K.f(n + 1, p + r))
        b = (K.f(n, p + 1) & preimage(d, K.f(n + 1, p + r))) + (
            K.f(n - 1, p - r + 1).map_by(d_prev) & K.f(n, p)
        )
        return Quotient(z, b)

    def dim(self, p: int, q: int) -> int:
        return self.cell(p, q).dim

    def support(self):
        """Bidegrees where cells can be nonzero, from the finite windows."""
        lo_d, hi_d = self.K.degree_window()
        lo, hi = self.K.level_window()
        out = []
        for n in range(lo_d, hi_d + 1):
            for p in range(lo - 1, hi + 1):
                out.append((p, n - p))
        return out

    def dims(self) -> dict[tuple[int, int], int]:
        return {pq: d for pq in self.support() if (d := self.dim(*pq))}

    def differential(self, p: int, q: int) -> Matrix:
        """d_r from (p, q) to (p + r, q - r + 1), in cell coordinates."""
        key = (p, q)
        got = self._dmaps.get(key)
        if got is None:
            src = self.cell(p, q)
            tgt = self.cell(p + self.r, q - self.r + 1)
            got = src.induced_matrix(self.K.d(p + q), tgt)
            self._dmaps[key] = got
        return got

    def homology_dims(self) -> dict[tuple[int, int], int]:
        """Dimensions of the cohomology of (E_r, d_r) per bidegree."""
        out = {}
        r = self.r
        for p, q in self.support():
            dim = self.dim(p, q)
            if dim == 0:
                continue
            rk_out = self.differential(p, q).rank
            rk_in = self.differential(p - r, q + r - 1).rank
            h = dim - rk_out - rk_in
            if h:
                out[(p, q)] = h
        return out


def page(K: FilteredComplex, r: int) -> SpectralPage:
    return SpectralPage(K, r)


def einf_dims(K: FilteredComplex) -> dict[tuple[int, int], int]:
    """Graded dimensions of the filtration induced on cohomology.

    The induced level is the image of H(F^p K) in H(K); for a finite
    filtration these are the stable page dimensions.
    """
    out = {}
    lo_d, hi_d = K.degree_window()
    lo, hi = K.level_window()
    for n in range(lo_d, hi_d + 1):
        z = K.d(n).kernel()
        b = K.d(n - 1).image()
        vals = {}
        for p in range(lo - 1, hi + 2):
            fp = K.f(n, p)
            vals[p] = (fp & z).dim - (fp & b).dim
        for p in range(lo - 1, hi + 1):
            g = vals[p] - vals[p + 1]
            if g:
                out[(p, n - p)] = g
    return out


class FilteredMorphism:
    """A degree-preserving chain map compatible with the filtrations."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source, target, components: Mapping[int, Matrix], check=True):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        comps = {}
        for n in source.degrees():
            m = components.get(n)
            if m is None:
                m = Matrix.zeros(target.field, target.dim(n), source.dim(n))
            if m.shape != (target.dim(n), source.dim(n)):
                raise ComplexError(f"component at degree {n} has the wrong shape")
            comps[n] = m
        object.__setattr__(self, "components", comps)
        if check:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("morphisms are immutable")

    def component(self, n: int) -> Matrix:
        got = self.components.get(n)
        if got is not None:
            return got
        return Matrix.zeros(self.target.field, self.target.dim(n), self.source.dim(n))

    def _validate(self):
        src, tgt = self.source, self.target
        lo, hi = src.degree_window()
        lo2, hi2 = tgt.degree_window()
        lo, hi = min(lo, lo2), max(hi, hi2)
        for n in range(lo, hi + 1):
            left = tgt.d(n) @ self.component(n)
            right = self.component(n + 1) @ src.d(n)
            if left != right:
                raise ComplexError(f"morphism does not commute with d at degree {n}")
        for n, srcs, tgts in _filtration_pairs(src, tgt):
            f = self.component(n)
            for s, t in zip(srcs, tgts):
                if not s.map_by(f) <= t:
                    raise ComplexError(
                        f"morphism does not preserve the filtration at degree {n}"
                    )

    def is_identity_shaped(self) -> bool:
        return all(
            m == Matrix.identity(m.field, m.nrows)
            for m in self.components.values()
            if m.nrows == m.ncols
        )


def _filtration_pairs(src, tgt):
    """Filtration levels to be preserved, per degree, for both kinds."""
    if isinstance(src, BifilteredComplex) != isinstance(tgt, BifilteredComplex):
        raise ComplexError("cannot mix filtered and bifiltered complexes")
    lo, hi = src.degree_window()
    lo2, hi2 = tgt.degree_window()
    lo, hi = min(lo, lo2), max(hi, hi2)
    out = []
    if isinstance(src, BifilteredComplex):
        filts = [(src.w, tgt.w), (src.f2, tgt.f2)]
    else:
        filts = [(src.filt, tgt.filt)]
    for n in range(lo, hi + 1):
        for fs, ft in filts:
            rng_s = fs.level_range(n)
            rng_t = ft.level_range(n)
            ps = set()
            for rng in (rng_s, rng_t):
                if rng:
                    ps.update(range(rng[0], rng[1] + 1))
            srcs = [fs.value(src.field, src.dims, n, p) for p in sorted(ps)]
            tgts = [ft.value(tgt.field, tgt.dims, n, p) for p in sorted(ps)]
            out.append((n, srcs, tgts))
    return out


def induced_page_map(f: FilteredMorphism, r: int) -> dict[tuple[int, int], Matrix]:
    """The matrices E_r(f) per bidegree over the union support."""
    ps = page(f.source, r)
    pt = page(f.target, r)
    keys = sorted(set(ps.support()) | set(pt.support()))
    out = {}
    for p, q in keys:
        src = ps.cell(p, q)
        tgt = pt.cell(p, q)
        if src.dim == 0 and tgt.dim == 0:
            continue
        out[(p, q)] = src.induced_matrix(f.component(p + q), tgt)
    return out


def is_er_quis(f: FilteredMorphism, r: int) -> bool:
    """Whether f induces an isomorphism on the next page everywhere."""
    maps = induced_page_map(f, r + 1)
    for m in maps.values():
        if m.nrows != m.ncols or m.rank != m.nrows:
            return False
    return True


# -- bifiltered operations -----------------------------------------------


def decalage_w(K: BifilteredComplex) -> BifilteredComplex:
    """Decalage in the weight filtration, leaving F intact."""
    deced = decalage(K.w_part())
    return BifilteredComplex(K.field, K.dims, K.diff, deced.filt, K.f2)


def shift_w(K: BifilteredComplex) -> BifilteredComplex:
    shifted = shift(K.w_part())
    return BifilteredComplex(K.field, K.dims, K.diff, shifted.filt, K.f2)


def bigraded_cohomology(K: BifilteredComplex, wp: int, fq: int) -> dict[int, Quotient]:
    """Cohomology of Gr^W_{wp} Gr_F^{fq} K as ambient subquotients.

    wp is the user (increasing) weight level; fq the decreasing F level.
    """
    p = -wp  # internal decreasing index of W
    lo, hi = K.degree_window()
    tops = {}
    bots = {}
    for n in range(lo - 1, hi + 2):
        wn = K.wf(n, p)
        wn1 = K.wf(n, p + 1)
        fn = K.ff(n, fq)
        fn1 = K.ff(n, fq + 1)
        tops[n] = wn & fn
        bots[n] = (wn1 & fn) + (wn & fn1)
    out = {}
    for n in range(lo, hi + 1):
        d = K.d(n)
        d_prev = K.d(n - 1)
        z = tops[n] & preimage(d, bots[n + 1])
        b = (tops[n - 1].map_by(d_prev) + bots[n]) & z
        out[n] = Quotient(z, b)
    return out


class BifilteredMorphism:
    """A chain map preserving both filtrations."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: BifilteredComplex, target: BifilteredComplex, components, check=True):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        comps = {}
        for n in source.degrees():
            m = components.get(n)
            if m is None:
                m = Matrix.zeros(target.field, target.dim(n), source.dim(n))
            if m.shape != (target.dim(n), source.dim(n)):
                raise ComplexError(f"component at degree {n} has the wrong shape")
            comps[n] = m
        object.__setattr__(self, "components", comps)
        if check:
            FilteredMorphism(source.w_part(), target.w_part(), comps)
            FilteredMorphism(source.f_part(), target.f_part(), comps)

    def __setattr__(self, name, value):
        raise AttributeError("morphisms are immutable")

    def component(self, n: int) -> Matrix:
        got = self.components.get(n)
        if got is not None:
            return got
        return Matrix.zeros(self.target.field, self.target.dim(n), self.source.dim(n))


def is_er0_quis(f: BifilteredMorphism, r: int) -> bool:
    """The bifiltered weak-equivalence test of stage (r, 0).

    Stage 0 asks for isomorphisms on the cohomology of every double
    graded piece; stage r + 1 is stage r after decalage of W.
    """
    if r < 0:
        raise ComplexError("stage must be nonnegative")
    src, tgt = f.source, f.target
    if r > 0:
        g = BifilteredMorphism(decalage_w(src), decalage_w(tgt), f.components)
        return is_er0_quis(g, r - 1)
    w_levels = set()
    f_levels = set()
    for K in (src, tgt):
        w = K.w.window()
        fw = K.f2.window()
        if w:
            w_levels.update(range(-w[1] - 1, -w[0] + 1))
        if fw:
            f_levels.update(range(fw[0] - 1, fw[1] + 1))
    lo1, hi1 = src.degree_window()
    lo2, hi2 = tgt.degree_window()
    lo, hi = min(lo1, lo2), max(hi1, hi2)
    for wp in sorted(w_levels):
        for fq in sorted(f_levels):
            hs = bigraded_cohomology(src, wp, fq)
            ht = bigraded_cohomology(tgt, wp, fq)
            for n in range(lo, hi + 1):
                qs = hs.get(n)
                qt = ht.get(n)
                ds = qs.dim if qs else 0
                dt = qt.dim if qt else 0
                if ds != dt:
                    return False
                if ds == 0:
                    continue
                m = qs.induced_matrix(f.component(n), qt)
                if m.rank != ds:
                    return False
    return True
