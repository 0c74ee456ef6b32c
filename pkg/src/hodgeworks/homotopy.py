"""The level-r homotopy calculus of filtered and bifiltered complexes.

An r-homotopy between filtered chain maps f, g : K -> L is a family
h^n : K^{n+1} -> L^n with d h + h d = g - f that drops at most r
filtration levels: h(F^p) <= F^{p-r}.  For bifiltered complexes the
weight filtration is shifted and the Hodge filtration is untouched.
The double mapping cylinder of f : X -> Y, g : X -> Z at stage r is
T_r(X) + Y + Z with differential

    ( -d   0   0 )
    ( -f   d   0 )
    (  g   0   d )

and the direct-sum filtration in which T_r shifts the (weight)
filtration by r; its structure maps satisfy the universal property of
the paper's homotopy theory and are verified as exact identities.
"""

from __future__ import annotations

from typing import Mapping

from .filtered import (
    BifilteredComplex,
    BifilteredMorphism,
    ComplexError,
    FilteredComplex,
    FilteredMorphism,
    Filtration,
    is_er_quis,
)
from .linalg import Matrix, block_matrix, direct_sum_subspace
from .systems import LinearSystem


def _is_bifiltered(K) -> bool:
    return isinstance(K, BifilteredComplex)


def _filts_with_shifts(K, r: int):
    """The filtrations of K with the level shift of the r-translation."""
    if _is_bifiltered(K):
        return [(K.w, r), (K.f2, 0)]
    return [(K.filt, r)]


def _morphism(source, target, components, check=True):
    if _is_bifiltered(source):
        return BifilteredMorphism(source, target, components, check=check)
    return FilteredMorphism(source, target, components, check=check)


def identity_morphism(K):
    return _morphism(
        K, K, {n: Matrix.identity(K.field, K.dim(n)) for n in K.degrees()}, check=False
    )


def zero_complex(template):
    if _is_bifiltered(template):
        return BifilteredComplex(
            template.field,
            {},
            {},
            Filtration("increasing", {}),
            Filtration("decreasing", {}),
        )
    return FilteredComplex(template.field, {}, {}, Filtration(template.filt.direction, {}))


def zero_morphism(source, target):
    return _morphism(source, target, {}, check=False)


def compose(g, f):
    """The composite g after f of filtered morphisms."""
    if f.target is not g.source and f.target != g.source:
        raise ComplexError("morphisms are not composable")
    comps = {n: g.component(n) @ f.component(n) for n in f.source.degrees()}
    return _morphism(f.source, g.target, comps, check=False)


def morphism_sub(f, g):
    comps = {n: f.component(n) - g.component(n) for n in f.source.degrees()}
    return _morphism(f.source, f.target, comps, check=False)


def translate(K, r: int):
    """The r-translation: degree up by one, d negated, levels shifted by r.

    The new filtration value at level p in degree n is the old value at
    level p + r in degree n + 1 (weight side only, for bifiltered).
    """
    dims = {n - 1: d for n, d in K.dims.items()}
    diff = {n - 1: -K.d(n) for n in K.dims if K.dim(n) and K.dim(n + 1)}
    if _is_bifiltered(K):
        w_jumps = {n - 1: tuple((p - r, v) for p, v in jl) for n, jl in K.w.jumps.items()}
        f_jumps = {n - 1: jl for n, jl in K.f2.jumps.items()}
        return BifilteredComplex(
            K.field,
            dims,
            diff,
            Filtration("increasing", w_jumps),
            Filtration("decreasing", f_jumps),
        )
    jumps = {n - 1: tuple((p - r, v) for p, v in jl) for n, jl in K.filt.jumps.items()}
    return FilteredComplex(K.field, dims, diff, Filtration(K.filt.direction, jumps))


class HomotopyCertificate:
    """Explicit data h certifying f ~ g at stage r: d h + h d = g - f.

    The component at degree m maps K^{m+1} to L^m.
    """

    __slots__ = ("f", "g", "h", "r")

    def __init__(self, f, g, h: Mapping[int, Matrix], r: int):
        if f.source is not g.source and f.source != g.source:
            raise ComplexError("certificate endpoints have different sources")
        if f.target is not g.target and f.target != g.target:
            raise ComplexError("certificate endpoints have different targets")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h", dict(h))
        object.__setattr__(self, "r", r)

    def __setattr__(self, name, value):
        raise AttributeError("certificates are immutable")

    def component(self, m: int) -> Matrix:
        got = self.h.get(m)
        if got is not None:
            return got
        K, L = self.f.source, self.f.target
        return Matrix.zeros(L.field, L.dim(m), K.dim(m + 1))


def check_homotopy(cert: HomotopyCertificate) -> bool:
    """Exact verification of the chain identity and the level shift."""
    K, L = cert.f.source, cert.f.target
    lo1, hi1 = K.degree_window()
    lo2, hi2 = L.degree_window()
    lo, hi = min(lo1, lo2), max(hi1, hi2)
    for m in range(lo, hi + 1):
        lhs = L.d(m - 1) @ cert.component(m - 1) + cert.component(m) @ K.d(m)
        rhs = cert.g.component(m) - cert.f.component(m)
        if lhs != rhs:
            return False
    pairs = _homotopy_filtration_pairs(K, L, cert.r)
    for m, src, dst in pairs:
        hm = cert.component(m)
        if not src.map_by(hm) <= dst:
            return False
    return True


def _homotopy_filtration_pairs(K, L, r: int):
    """Per degree m: h^m must map F^p K^{m+1} into F^{p-shift} L^m."""
    out = []
    lo1, hi1 = K.degree_window()
    lo2, hi2 = L.degree_window()
    lo, hi = min(lo1, lo2), max(hi1, hi2)
    srcs = _filts_with_shifts(K, r)
    tgts = _filts_with_shifts(L, r)
    for m in range(lo, hi + 1):
        for (fs, shift_s), (ft, _) in zip(srcs, tgts):
            levels = set()
            rng = fs.level_range(m + 1)
            if rng:
                levels.update(range(rng[0], rng[1] + 1))
            rng = ft.level_range(m)
            if rng:
                levels.update(range(rng[0] + shift_s, rng[1] + shift_s + 1))
            for p in sorted(levels):
                out.append(
                    (
                        m,
                        fs.value(K.field, K.dims, m + 1, p),
                        ft.value(L.field, L.dims, m, p - shift_s),
                    )
                )
    return out


def solve_homotopy(f, g, r: int) -> HomotopyCertificate | None:
    """Find h with d h + h d = g - f and the level-r shift, if one exists."""
    K, L = f.source, f.target
    lo1, hi1 = K.degree_window()
    lo2, hi2 = L.degree_window()
    lo, hi = min(lo1, lo2), max(hi1, hi2)
    sys = LinearSystem()
    names = {}
    for m in range(lo - 1, hi + 1):
        if L.dim(m) and K.dim(m + 1):
            names[m] = sys.add_block(f"h{m}", L.dim(m), K.dim(m + 1), L.field)
    for m, src, dst in _homotopy_filtration_pairs(K, L, r):
        if m in names:
            sys.constrain_maps_into(names[m], [(src, dst)])
    for m in range(lo, hi + 1):
        rhs = g.component(m) - f.component(m)
        terms = []
        if (m - 1) in names:
            terms.append((1, L.d(m - 1), names[m - 1], None))
        if m in names:
            terms.append((1, None, names[m], K.d(m)))
        if not terms:
            if not rhs.is_zero():
                return None
            continue
        sys.add_equation(terms, rhs)
    sol = sys.solve()
    if sol is None:
        return None
    h = {m: sol[names[m]] for m in names}
    return HomotopyCertificate(f, g, h, r)


class EquivalenceCertificate:
    """Maps f, g in both directions with homotopies gf ~ 1 and fg ~ 1."""

    __slots__ = ("f", "g", "gf_homotopy", "fg_homotopy", "r")

    def __init__(self, f, g, gf_homotopy, fg_homotopy, r: int):
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "gf_homotopy", dict(gf_homotopy))
        object.__setattr__(self, "fg_homotopy", dict(fg_homotopy))
        object.__setattr__(self, "r", r)

    def __setattr__(self, name, value):
        raise AttributeError("certificates are immutable")

    def check(self) -> bool:
        K, L = self.f.source, self.f.target
        c1 = HomotopyCertificate(
            compose(self.g, self.f), identity_morphism(K), self.gf_homotopy, self.r
        )
        c2 = HomotopyCertificate(
            compose(self.f, self.g), identity_morphism(L), self.fg_homotopy, self.r
        )
        return check_homotopy(c1) and check_homotopy(c2)


def check_equivalence_certificate(cert: EquivalenceCertificate) -> bool:
    """Consequence check: a valid certificate forces both maps into E_r."""
    if not cert.check():
        return False
    return is_er_quis_any(cert.f, cert.r) and is_er_quis_any(cert.g, cert.r)


def is_er_quis_any(f, r: int) -> bool:
    """E_r test for filtered morphisms, weight-side test for bifiltered."""
    from .filtered import is_er0_quis

    if isinstance(f, BifilteredMorphism):
        return is_er0_quis(f, r)
    return is_er_quis(f, r)


class DoubleCylinder:
    """T_r(X) + Y + Z with its differential, filtration and structure maps."""

    __slots__ = ("complex", "f", "g", "r", "i", "j", "k", "_shapes")

    def __init__(self, f, g, r: int):
        X = f.source
        if g.source is not X and g.source != X:
            raise ComplexError("double cylinder requires a common source")
        Y, Z = f.target, g.target
        field = X.field
        dims = {}
        lo = min(X.degree_window()[0] - 1, Y.degree_window()[0], Z.degree_window()[0])
        hi = max(X.degree_window()[1] - 1, Y.degree_window()[1], Z.degree_window()[1])
        for n in range(lo, hi + 1):
            dims[n] = X.dim(n + 1) + Y.dim(n) + Z.dim(n)
        diff = {}
        for n in range(lo, hi):
            blocks = [
                [-X.d(n + 1), None, None],
                [-f.component(n + 1), Y.d(n), None],
                [g.component(n + 1), None, Z.d(n)],
            ]
            heights = (X.dim(n + 2), Y.dim(n + 1), Z.dim(n + 1))
            widths = (X.dim(n + 1), Y.dim(n), Z.dim(n))
            diff[n] = _blocks_or_zeros(field, blocks, heights, widths)
        filts = []
        for (fx, sh), (fy, _), (fz, _) in zip(
            _filts_with_shifts(X, r), _filts_with_shifts(Y, r), _filts_with_shifts(Z, r)
        ):
            values = {}
            windows = [w for w in (fx.window(), fy.window(), fz.window()) if w]
            if windows:
                wlo = min(w[0] for w in windows) - abs(sh) - 1
                whi = max(w[1] for w in windows) + abs(sh) + 1
            else:
                wlo, whi = 0, 1
            for n in range(lo, hi + 1):
                if dims[n] == 0:
                    continue
                per = {}
                for p in range(wlo, whi + 1):
                    per[p] = direct_sum_subspace(
                        field,
                        [
                            fx.value(field, X.dims, n + 1, p + sh),
                            fy.value(field, Y.dims, n, p),
                            fz.value(field, Z.dims, n, p),
                        ],
                    )
                values[n] = per
            filts.append(Filtration.from_step_values(fx.direction, field, dims, values))
        if _is_bifiltered(X):
            total = BifilteredComplex(field, dims, diff, filts[0], filts[1])
        else:
            total = FilteredComplex(field, dims, diff, filts[0])
        object.__setattr__(self, "complex", total)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "_shapes", (X, Y, Z))
        i_comp, j_comp, k_comp = {}, {}, {}
        for n in range(lo, hi + 1):
            dx, dy, dz = X.dim(n + 1), Y.dim(n), Z.dim(n)
            tot = total.dim(n)
            if tot == 0:
                continue
            i_comp[n] = _slot_inclusion(field, tot, dx + dy, dz)
            j_comp[n] = _slot_inclusion(field, tot, dx, dy)
            k_comp[n] = _slot_inclusion(field, tot, 0, dx)
        object.__setattr__(self, "i", _morphism(Z, total, i_comp, check=False))
        object.__setattr__(self, "j", _morphism(Y, total, j_comp, check=False))
        object.__setattr__(self, "k", k_comp)

    def __setattr__(self, name, value):
        raise AttributeError("cylinders are immutable")

    def homotopy_jf_ig(self) -> HomotopyCertificate:
        """k certifies j f ~ i g at stage r."""
        return HomotopyCertificate(
            compose(self.j, self.f), compose(self.i, self.g), self.k, self.r
        )

    def hom_from_triple(self, h: HomotopyCertificate, u, v):
        """The morphism t(x, y, z) = h(x) + u(y) + v(z) into W.

        h must certify u f ~ v g; then t is a chain map, and
        (t k, t j, t i) recovers (h, u, v).
        """
        W = u.target
        comps = {}
        X, Y, Z = self._shapes
        for n in self.complex.degrees():
            blocks = [[h.component(n), u.component(n), v.component(n)]]
            heights = (W.dim(n),)
            widths = (X.dim(n + 1), Y.dim(n), Z.dim(n))
            comps[n] = _blocks_or_zeros(W.field, blocks, heights, widths)
        return _morphism(self.complex, W, comps)

    def hom_to_triple(self, t):
        """Split a morphism t on the cylinder into (t k, t j, t i)."""
        X, Y, Z = self._shapes
        W = t.target
        h = {}
        u_comp = {}
        v_comp = {}
        for n in self.complex.degrees():
            m = t.component(n)
            dx, dy, dz = X.dim(n + 1), Y.dim(n), Z.dim(n)
            h[n] = _column_slice(m, 0, dx)
            u_comp[n] = _column_slice(m, dx, dy)
            v_comp[n] = _column_slice(m, dx + dy, dz)
        u = _morphism(Y, W, u_comp, check=False)
        v = _morphism(Z, W, v_comp, check=False)
        cert = HomotopyCertificate(compose(u, self.f), compose(v, self.g), h, self.r)
        return cert, u, v


def _blocks_or_zeros(field, blocks, heights, widths):
    if sum(heights) == 0 or sum(widths) == 0:
        return Matrix.zeros(field, sum(heights), sum(widths))
    grid = []
    for bi, row in enumerate(blocks):
        line = []
        for bj, b in enumerate(row):
            if b is not None and (b.nrows != heights[bi] or b.ncols != widths[bj]):
                b = Matrix.zeros(field, heights[bi], widths[bj])
            if b is None:
                b = Matrix.zeros(field, heights[bi], widths[bj])
            line.append(b)
        grid.append(line)
    return block_matrix(field, grid)


def _slot_inclusion(field, total, offset, width):
    """The inclusion of a width-dim slot at the given offset into total."""
    z, o = field.zero, field.one
    rows = []
    for rr in range(total):
        rows.append([o if rr == offset + c else z for c in range(width)])
    return Matrix(field, rows, nrows=total, ncols=width)


def _column_slice(m: Matrix, start: int, width: int) -> Matrix:
    return Matrix(m.field, [r[start : start + width] for r in m.rows], ncols=width)


def double_cylinder(f, g, r: int) -> DoubleCylinder:
    return DoubleCylinder(f, g, r)


def mapping_cone(f, r: int) -> DoubleCylinder:
    """C(f) as the double cylinder of the zero map and f."""
    zero_tgt = zero_complex(f.source)
    return DoubleCylinder(zero_morphism(f.source, zero_tgt), f, r)


class Cylinder:
    """The cylinder of X with projection p(x, y, z) = y + z."""

    __slots__ = ("dc", "p", "jp_homotopy")

    def __init__(self, X, r: int):
        one = identity_morphism(X)
        dc = DoubleCylinder(one, one, r)
        object.__setattr__(self, "dc", dc)
        field = X.field
        comps = {}
        for n in dc.complex.degrees():
            dx, dy = X.dim(n + 1), X.dim(n)
            ident = Matrix.identity(field, dy)
            comps[n] = _blocks_or_zeros(
                field, [[None, ident, ident]], (dy,), (dx, dy, dy)
            )
        object.__setattr__(self, "p", _morphism(dc.complex, X, comps))
        # h(x, y, z) = (z, 0, 0): the third slot of Cyl^{n+1} placed in
        # the first slot of Cyl^n (both are copies of X^{n+1}).
        h = {}
        for n in dc.complex.degrees():
            ident = Matrix.identity(field, X.dim(n + 1))
            heights = (X.dim(n + 1), X.dim(n), X.dim(n))
            widths = (X.dim(n + 2), X.dim(n + 1), X.dim(n + 1))
            h[n] = _blocks_or_zeros(
                field,
                [[None, None, ident], [None, None, None], [None, None, None]],
                heights,
                widths,
            )
        object.__setattr__(self, "jp_homotopy", h)

    def __setattr__(self, name, value):
        raise AttributeError("cylinders are immutable")

    @property
    def complex(self):
        return self.dc.complex

    @property
    def i(self):
        return self.dc.i

    @property
    def j(self):
        return self.dc.j

    def jp_certificate(self) -> HomotopyCertificate:
        """h(x, y, z) = (z, 0, 0) certifies j p ~ identity."""
        return HomotopyCertificate(
            compose(self.j, self.p),
            identity_morphism(self.dc.complex),
            self.jp_homotopy,
            self.dc.r,
        )

    def equivalence_certificate(self) -> EquivalenceCertificate:
        """p is an r-homotopy equivalence with homotopy inverse j."""
        return EquivalenceCertificate(
            self.p, self.j, self.jp_homotopy, {}, self.dc.r
        )


def cylinder(X, r: int) -> Cylinder:
    return Cylinder(X, r)
