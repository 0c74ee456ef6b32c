"""Zig-zag diagrams of filtered complexes and their homotopy calculus.

A diagram assigns to each vertex of a zig-zag a filtered (or, at the
final vertex, bifiltered) complex and to each arrow a comparison
morphism out of the pushed-forward source vertex.  Morphisms are only
required to commute up to explicit homotopies: a pre-morphism of degree
n has vertex components and one homotopy leg per arrow, with the
differential

    D f = (d f_i - (-1)^n f_i d,
           F_u d + (-1)^n d F_u + (-1)^n (f_j phi_u - phi_u f_i)),

ho-morphisms are the degree-0 cocycles.  Mapping cylinders glue the
vertexwise cylinders along the block comparison

    ( phi    0    0 )
    ( -F_u  phi   0 )
    ( G_u    0   phi )

and give the Brown-style factorization, the rectification of
ho-morphisms into spans, and the lifting along weak equivalences used
for fibrant models.  Every identity is checked by exact arithmetic.
"""

from __future__ import annotations

from typing import Mapping

from .filtered import (
    BifilteredComplex,
    ComplexError,
    FilteredComplex,
    FilteredMorphism,
)
from .homotopy import (
    DoubleCylinder,
    _filts_with_shifts,
    _morphism,
    identity_morphism,
)
from .linalg import Matrix, to_gaussian_matrix, to_gaussian_subspace
from .scalars import QQ, QQI
from .systems import LinearSystem


class DiagramError(ValueError):
    pass


class LiftError(RuntimeError):
    """A lifting problem had no solution (the map is not a weak equivalence)."""


class ZigzagShape:
    """The index zig-zag 0 -> 1 <- 2 -> ... <- s with vertex kinds.

    Kinds are ("filtered", field) or ("bifiltered", field); arrows carry
    a functor tag: "extend" (scalar extension), "identity", or
    "forget_hodge" (drop the second filtration).  Arrows always go from
    an even vertex (degree 0) to an odd vertex (degree 1).
    """

    __slots__ = ("kinds", "arrows")

    def __init__(self, kinds, arrows):
        kinds = tuple(tuple(k) for k in kinds)
        arrows = tuple(tuple(a) for a in arrows)
        for src, tgt, functor in arrows:
            if src % 2 != 0 or tgt % 2 != 1 or abs(src - tgt) != 1:
                raise DiagramError("arrows must go from even to adjacent odd vertices")
            if functor not in ("extend", "identity", "forget_hodge"):
                raise DiagramError(f"unknown arrow functor {functor!r}")
            if functor == "forget_hodge" and kinds[src][0] != "bifiltered":
                raise DiagramError("forget_hodge needs a bifiltered source")
            if kinds[tgt][0] != "filtered":
                raise DiagramError("arrow targets must be filtered vertices")
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "arrows", arrows)

    def __setattr__(self, name, value):
        raise AttributeError("shapes are immutable")

    def __eq__(self, other):
        return (
            isinstance(other, ZigzagShape)
            and self.kinds == other.kinds
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.kinds, self.arrows))

    @property
    def size(self) -> int:
        return len(self.kinds)

    @classmethod
    def hodge(cls, length: int = 2) -> "ZigzagShape":
        """The Hodge-diagram shape: rational start, bifiltered end."""
        if length < 2 or length % 2 != 0:
            raise DiagramError("hodge zig-zags have even length >= 2")
        kinds = []
        for i in range(length + 1):
            if i == 0:
                kinds.append(("filtered", "rational"))
            elif i == length:
                kinds.append(("bifiltered", "gaussian"))
            else:
                kinds.append(("filtered", "gaussian"))
        arrows = []
        for j in range(1, length, 2):
            left = (j - 1, j, "extend" if j - 1 == 0 else "identity")
            right_src = j + 1
            right = (
                right_src,
                j,
                "forget_hodge" if right_src == length else "identity",
            )
            arrows.append(left)
            arrows.append(right)
        return cls(kinds, arrows)


def push_complex(K, functor: str):
    if functor == "identity":
        return K
    if functor == "extend":
        if K.field is not QQ:
            raise DiagramError("extend expects a rational vertex")
        dims = K.dims
        diff = {n: to_gaussian_matrix(m) for n, m in K.diff.items()}
        from .filtered import Filtration

        jumps = {
            n: tuple((p, to_gaussian_subspace(v)) for p, v in jl)
            for n, jl in K.filt.jumps.items()
        }
        return FilteredComplex(QQI, dims, diff, Filtration(K.filt.direction, jumps))
    if functor == "forget_hodge":
        return K.w_part()
    raise DiagramError(f"unknown functor {functor!r}")


def push_matrix(m: Matrix, functor: str) -> Matrix:
    if functor == "extend":
        return to_gaussian_matrix(m)
    return m


class Diagram:
    """Vertex complexes joined by comparison morphisms over a shape."""

    __slots__ = ("shape", "vertices", "comparisons", "_pushed")

    def __init__(self, shape: ZigzagShape, vertices, comparisons, check=True):
        vertices = tuple(vertices)
        if len(vertices) != shape.size:
            raise DiagramError("vertex count does not match the shape")
        for idx, ((kind, fieldname), K) in enumerate(zip(shape.kinds, vertices)):
            want_bif = kind == "bifiltered"
            if isinstance(K, BifilteredComplex) != want_bif:
                raise DiagramError(f"vertex {idx} has the wrong kind")
            if K.field.name != fieldname:
                raise DiagramError(f"vertex {idx} is over the wrong field")
        comps = {}
        pushed = {}
        for a_idx, (src, tgt, functor) in enumerate(shape.arrows):
            per = comparisons.get(a_idx, {})
            pushed[a_idx] = push_complex(vertices[src], functor)
            comps[a_idx] = {int(n): m for n, m in per.items()}
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "comparisons", comps)
        object.__setattr__(self, "_pushed", pushed)
        if check:
            for a_idx, (src, tgt, functor) in enumerate(shape.arrows):
                FilteredMorphism(pushed[a_idx], vertices[tgt], comps[a_idx])

    def __setattr__(self, name, value):
        raise AttributeError("diagrams are immutable")

    def vertex(self, i: int):
        return self.vertices[i]

    def pushed_source(self, a_idx: int):
        return self._pushed[a_idx]

    def comparison(self, a_idx: int, n: int) -> Matrix:
        per = self.comparisons[a_idx]
        got = per.get(n)
        if got is not None:
            return got
        src, tgt, _ = self.shape.arrows[a_idx]
        return Matrix.zeros(
            self.vertices[tgt].field,
            self.vertices[tgt].dim(n),
            self.vertices[src].dim(n),
        )

    def degree_window(self):
        los, his = [], []
        for K in self.vertices:
            lo, hi = K.degree_window()
            los.append(lo)
            his.append(hi)
        return min(los), max(his)

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self.shape == other.shape
            and self.vertices == other.vertices
            and all(
                self.comparison(a, n) == other.comparison(a, n)
                for a in range(len(self.shape.arrows))
                for n in range(self.degree_window()[0], self.degree_window()[1] + 1)
            )
        )

    def __hash__(self):
        return hash((self.shape, self.vertices))


class PreMorphism:
    """Degree-n data (f_i, F_u) between diagrams of one shape at stage r."""

    __slots__ = ("source", "target", "degree", "stage", "components", "legs")

    def __init__(self, source: Diagram, target: Diagram, degree: int, stage: int,
                 components: Mapping[int, Mapping[int, Matrix]],
                 legs: Mapping[int, Mapping[int, Matrix]]):
        if source.shape != target.shape:
            raise DiagramError("pre-morphisms need a common shape")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "stage", stage)
        object.__setattr__(
            self,
            "components",
            {i: {int(m): mat for m, mat in per.items()} for i, per in components.items()},
        )
        object.__setattr__(
            self,
            "legs",
            {a: {int(m): mat for m, mat in per.items()} for a, per in legs.items()},
        )

    def __setattr__(self, name, value):
        raise AttributeError("pre-morphisms are immutable")

    def component(self, i: int, m: int) -> Matrix:
        got = self.components.get(i, {}).get(m)
        if got is not None:
            return got
        X, Y = self.source.vertex(i), self.target.vertex(i)
        return Matrix.zeros(Y.field, Y.dim(m + self.degree), X.dim(m))

    def leg(self, a_idx: int, m: int) -> Matrix:
        got = self.legs.get(a_idx, {}).get(m)
        if got is not None:
            return got
        src, tgt, _ = self.source.shape.arrows[a_idx]
        X, Y = self.source.vertex(src), self.target.vertex(tgt)
        return Matrix.zeros(Y.field, Y.dim(m + self.degree - 1), X.dim(m))

    # -- algebra -------------------------------------------------------
    def add(self, other: "PreMorphism") -> "PreMorphism":
        self._check_parallel(other)
        return self._zip(other, lambda a, b: a + b)

    def sub(self, other: "PreMorphism") -> "PreMorphism":
        self._check_parallel(other)
        return self._zip(other, lambda a, b: a - b)

    def _check_parallel(self, other):
        if (
            self.source is not other.source and self.source != other.source
        ) or (self.target is not other.target and self.target != other.target):
            raise DiagramError("pre-morphisms are not parallel")
        if self.degree != other.degree:
            raise DiagramError("pre-morphism degrees differ")

    def _zip(self, other, op) -> "PreMorphism":
        comps = {}
        legs = {}
        lo, hi = _window(self.source, self.target)
        for i in range(self.source.shape.size):
            comps[i] = {
                m: op(self.component(i, m), other.component(i, m))
                for m in range(lo, hi + 1)
            }
        for a in range(len(self.source.shape.arrows)):
            legs[a] = {m: op(self.leg(a, m), other.leg(a, m)) for m in range(lo, hi + 1)}
        return PreMorphism(self.source, self.target, self.degree, self.stage, comps, legs)

    def is_zero(self) -> bool:
        return all(
            m.is_zero() for per in self.components.values() for m in per.values()
        ) and all(m.is_zero() for per in self.legs.values() for m in per.values())

    def differential(self) -> "PreMorphism":
        """D f, a pre-morphism of degree one higher; D o D = 0."""
        X, Y = self.source, self.target
        n = self.degree
        sgn = -1 if n % 2 else 1
        lo, hi = _window(X, Y)
        comps = {}
        for i in range(X.shape.size):
            Xi, Yi = X.vertex(i), Y.vertex(i)
            per = {}
            for m in range(lo, hi + 1):
                t = Yi.d(m + n) @ self.component(i, m)
                t2 = self.component(i, m + 1) @ Xi.d(m)
                per[m] = t - t2.scale(sgn) if sgn == -1 else t - t2
            comps[i] = per
        legs = {}
        for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
            Xi, Yj = X.vertex(src), Y.vertex(tgt)
            per = {}
            for m in range(lo, hi + 1):
                t = self.leg(a_idx, m + 1) @ Xi.d(m)
                t2 = Yj.d(m + n - 1) @ self.leg(a_idx, m)
                t3 = self.component(tgt, m) @ X.comparison(a_idx, m)
                t4 = Y.comparison(a_idx, m + n) @ push_matrix(
                    self.component(src, m), functor
                )
                extra = (t2 + t3 - t4)
                per[m] = t + extra if sgn == 1 else t - extra
            legs[a_idx] = per
        return PreMorphism(X, Y, n + 1, self.stage, comps, legs)

    def is_valid(self) -> bool:
        """Shape and filtration-shift validity at the stage."""
        try:
            self._validate_filtrations()
        except (DiagramError, ComplexError):
            return False
        return True

    def _validate_filtrations(self):
        X, Y = self.source, self.target
        r = self.stage
        lo, hi = _window(X, Y)
        for i in range(X.shape.size):
            _check_block_filtration(
                X.vertex(i), Y.vertex(i),
                lambda m: self.component(i, m), self.degree, r, lo, hi,
            )
        for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
            _check_block_filtration(
                push_complex(X.vertex(src), functor), Y.vertex(tgt),
                lambda m: self.leg(a_idx, m), self.degree - 1, r, lo, hi,
            )


def _window(X: Diagram, Y: Diagram):
    lo1, hi1 = X.degree_window()
    lo2, hi2 = Y.degree_window()
    return min(lo1, lo2) - 2, max(hi1, hi2) + 2


def _filtration_shift_pairs(src_cx, tgt_cx, degree_shift: int, r: int, m: int):
    """Subspace pairs h(F^p X^m) <= F^{p + degree_shift * r} Y^{m + degree_shift}.

    Weight-style filtrations shift by degree_shift * r; a second
    (Hodge) filtration never shifts.
    """
    out = []
    src_filts = _filts_with_shifts(src_cx, r)
    tgt_filts = _filts_with_shifts(tgt_cx, r)
    for (fs, sh_s), (ft, _) in zip(src_filts, tgt_filts):
        shift_amt = degree_shift * sh_s
        levels = set()
        rng = fs.level_range(m)
        if rng:
            levels.update(range(rng[0], rng[1] + 1))
        rng = ft.level_range(m + degree_shift)
        if rng:
            levels.update(range(rng[0] - shift_amt, rng[1] - shift_amt + 1))
        for p in sorted(levels):
            out.append(
                (
                    fs.value(src_cx.field, src_cx.dims, m, p),
                    ft.value(tgt_cx.field, tgt_cx.dims, m + degree_shift, p + shift_amt),
                )
            )
    return out


def _check_block_filtration(src_cx, tgt_cx, block, degree_shift, r, lo, hi):
    for m in range(lo, hi + 1):
        mat = block(m)
        if mat.is_zero():
            continue
        for s, t in _filtration_shift_pairs(src_cx, tgt_cx, degree_shift, r, m):
            sv = s
            if sv.field is not mat.field:
                sv = to_gaussian_subspace(sv)
            if not sv.map_by(mat) <= t:
                raise DiagramError("filtration shift violated")


def zero_pre_morphism(X: Diagram, Y: Diagram, degree: int, stage: int) -> PreMorphism:
    return PreMorphism(X, Y, degree, stage, {}, {})


def identity_ho_morphism(X: Diagram, stage: int = 0) -> PreMorphism:
    comps = {
        i: {m: Matrix.identity(X.vertex(i).field, X.vertex(i).dim(m))
            for m in X.vertex(i).degrees()}
        for i in range(X.shape.size)
    }
    return PreMorphism(X, X, 0, stage, comps, {})


def is_ho_morphism(f: PreMorphism) -> bool:
    return f.degree == 0 and f.differential().is_zero() and f.is_valid()


def compose(g: PreMorphism, f: PreMorphism) -> PreMorphism:
    """Composite of ho-morphisms: (g_i f_i, G_u f_i + g_j F_u)."""
    if g.degree != 0 or f.degree != 0:
        raise DiagramError("composition is defined for ho-morphisms")
    X, Z = f.source, g.target
    lo, hi = _window(X, Z)
    comps = {}
    for i in range(X.shape.size):
        comps[i] = {
            m: g.component(i, m) @ f.component(i, m) for m in range(lo, hi + 1)
        }
    legs = {}
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        legs[a_idx] = {
            m: g.leg(a_idx, m) @ push_matrix(f.component(src, m), functor)
            + g.component(tgt, m - 1) @ f.leg(a_idx, m)
            for m in range(lo, hi + 1)
        }
    return PreMorphism(X, Z, 0, max(f.stage, g.stage), comps, legs)


def invert(f: PreMorphism) -> PreMorphism:
    """Inverse of a ho-morphism whose components are all invertible."""
    if f.degree != 0:
        raise DiagramError("only ho-morphisms are invertible")
    X, Y = f.source, f.target
    lo, hi = _window(X, Y)
    inv_comps = {}
    for i in range(X.shape.size):
        per = {}
        for m in range(lo - 1, hi + 1):
            mat = f.component(i, m)
            if mat.nrows != mat.ncols:
                raise DiagramError("components are not square")
            per[m] = mat.inverse() if mat.nrows else mat
        inv_comps[i] = per
    legs = {}
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        per = {}
        for m in range(lo, hi + 1):
            t = f.leg(a_idx, m) @ push_matrix(inv_comps[src][m], functor)
            per[m] = -(inv_comps[tgt][m - 1] @ t)
        legs[a_idx] = per
    return PreMorphism(Y, X, 0, f.stage, inv_comps, legs)


def check_ho_homotopy(h: PreMorphism, f: PreMorphism, g: PreMorphism) -> bool:
    """Whether D h = g - f with h of degree -1, all at one stage."""
    if h.degree != -1 or f.degree != 0 or g.degree != 0:
        return False
    if not h.is_valid():
        return False
    return h.differential().sub(g.sub(f)).is_zero()


def solve_ho_homotopy(f: PreMorphism, g: PreMorphism) -> PreMorphism | None:
    """Find a homotopy h with D h = g - f, exactly, if one exists."""
    X, Y = f.source, f.target
    r = f.stage
    lo, hi = _window(X, Y)
    sys = LinearSystem()
    comp_names = {}
    leg_names = {}
    for i in range(X.shape.size):
        Xi, Yi = X.vertex(i), Y.vertex(i)
        for m in range(lo, hi + 1):
            if Xi.dim(m) and Yi.dim(m - 1):
                name = sys.add_block(f"h_{i}_{m}", Yi.dim(m - 1), Xi.dim(m), Yi.field)
                comp_names[(i, m)] = name
                sys.constrain_maps_into(
                    name, _filtration_shift_pairs(Xi, Yi, -1, r, m)
                )
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        Xi = push_complex(X.vertex(src), functor)
        Yj = Y.vertex(tgt)
        for m in range(lo, hi + 1):
            if Xi.dim(m) and Yj.dim(m - 2):
                name = sys.add_block(f"H_{a_idx}_{m}", Yj.dim(m - 2), Xi.dim(m), Yj.field)
                leg_names[(a_idx, m)] = name
                sys.constrain_maps_into(
                    name, _filtration_shift_pairs(Xi, Yj, -2, r, m)
                )
    diff = g.sub(f)
    # vertex equations: d h_i + h_i d = (g - f)_i
    for i in range(X.shape.size):
        Xi, Yi = X.vertex(i), Y.vertex(i)
        for m in range(lo, hi + 1):
            rhs = diff.component(i, m)
            terms = []
            if (i, m) in comp_names:
                terms.append((1, Yi.d(m - 1), comp_names[(i, m)], None))
            if (i, m + 1) in comp_names:
                terms.append((1, None, comp_names[(i, m + 1)], Xi.d(m)))
            if terms:
                sys.add_equation(terms, rhs)
            elif not rhs.is_zero():
                return None
    # arrow equations: H_u d - d H_u - h_j phi + phi h_i = (g - f)_u
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        Xi = push_complex(X.vertex(src), functor)
        Yj = Y.vertex(tgt)
        for m in range(lo, hi + 1):
            rhs = diff.leg(a_idx, m)
            terms = []
            if (a_idx, m + 1) in leg_names:
                terms.append((1, None, leg_names[(a_idx, m + 1)], Xi.d(m)))
            if (a_idx, m) in leg_names:
                terms.append((-1, Yj.d(m - 2), leg_names[(a_idx, m)], None))
            if (tgt, m) in comp_names:
                terms.append((-1, None, comp_names[(tgt, m)], X.comparison(a_idx, m)))
            if (src, m) in comp_names:
                terms.append((1, Y.comparison(a_idx, m - 1), comp_names[(src, m)], None))
            if terms:
                sys.add_equation(terms, rhs)
            elif not rhs.is_zero():
                return None
    sol = sys.solve()
    if sol is None:
        return None
    comps = {}
    for (i, m), name in comp_names.items():
        comps.setdefault(i, {})[m] = sol[name]
    legs = {}
    for (a_idx, m), name in leg_names.items():
        legs.setdefault(a_idx, {})[m] = sol[name]
    return PreMorphism(X, Y, -1, r, comps, legs)


def is_levelwise_quasi_iso(f: PreMorphism) -> bool:
    """Whether every vertex component induces isomorphisms on cohomology."""
    X, Y = f.source, f.target
    lo, hi = _window(X, Y)
    for i in range(X.shape.size):
        hx = X.vertex(i).cohomology()
        hy = Y.vertex(i).cohomology()
        for m in range(lo, hi + 1):
            qx, qy = hx.get(m), hy.get(m)
            dx = qx.dim if qx else 0
            dy = qy.dim if qy else 0
            if dx != dy:
                return False
            if dx == 0:
                continue
            mat = qx.induced_matrix(f.component(i, m), qy)
            if mat.rank != dx:
                return False
    return True


# -- diagram cylinders ------------------------------------------------------


class DiagramCylinder:
    """Vertexwise double cylinders glued by the block comparisons."""

    __slots__ = ("diagram", "f", "g", "i", "j", "k", "_vertex_cylinders")

    def __init__(self, f: PreMorphism, g: PreMorphism):
        if f.degree != 0 or g.degree != 0:
            raise DiagramError("cylinders are built from ho-morphisms")
        X = f.source
        if g.source is not X and g.source != X:
            raise DiagramError("double cylinder requires a common source")
        Y, Z = f.target, g.target
        r = f.stage
        shape = X.shape
        vcs = []
        for i in range(shape.size):
            fi = _morphism(
                X.vertex(i), Y.vertex(i),
                {m: f.component(i, m) for m in X.vertex(i).degrees()},
                check=False,
            )
            gi = _morphism(
                X.vertex(i), Z.vertex(i),
                {m: g.component(i, m) for m in X.vertex(i).degrees()},
                check=False,
            )
            vcs.append(DoubleCylinder(fi, gi, r))
        comparisons = {}
        for a_idx, (src, tgt, functor) in enumerate(shape.arrows):
            Xs, Ys, Zs = X.vertex(src), Y.vertex(src), Z.vertex(src)
            per = {}
            lo, hi = vcs[tgt].complex.degree_window()
            lo2, hi2 = vcs[src].complex.degree_window()
            for n in range(min(lo, lo2), max(hi, hi2) + 1):
                blocks = [
                    [push_matrix(X.comparison(a_idx, n + 1), "identity"), None, None],
                    [-f.leg(a_idx, n + 1), Y.comparison(a_idx, n), None],
                    [g.leg(a_idx, n + 1), None, Z.comparison(a_idx, n)],
                ]
                heights = (
                    X.vertex(tgt).dim(n + 1),
                    Y.vertex(tgt).dim(n),
                    Z.vertex(tgt).dim(n),
                )
                widths = (Xs.dim(n + 1), Ys.dim(n), Zs.dim(n))
                from .homotopy import _blocks_or_zeros

                per[n] = _blocks_or_zeros(vcs[tgt].complex.field, blocks, heights, widths)
            comparisons[a_idx] = per
        diagram = Diagram(shape, [vc.complex for vc in vcs], comparisons)
        object.__setattr__(self, "diagram", diagram)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "_vertex_cylinders", tuple(vcs))
        i_comps = {
            idx: dict(vcs[idx].i.components) for idx in range(shape.size)
        }
        j_comps = {
            idx: dict(vcs[idx].j.components) for idx in range(shape.size)
        }
        k_comps = {
            idx: {m + 1: mat for m, mat in vcs[idx].k.items()}
            for idx in range(shape.size)
        }
        object.__setattr__(self, "i", PreMorphism(Z, diagram, 0, r, i_comps, {}))
        object.__setattr__(self, "j", PreMorphism(Y, diagram, 0, r, j_comps, {}))
        object.__setattr__(self, "k", PreMorphism(X, diagram, -1, r, k_comps, {}))

    def __setattr__(self, name, value):
        raise AttributeError("cylinders are immutable")

    def vertex_cylinder(self, i: int) -> DoubleCylinder:
        return self._vertex_cylinders[i]

    def homotopy_jf_ig(self) -> tuple[PreMorphism, PreMorphism, PreMorphism]:
        """(k, j f, i g): k certifies j f ~ i g."""
        return self.k, compose(self.j, self.f), compose(self.i, self.g)


def diagram_double_cylinder(f: PreMorphism, g: PreMorphism) -> DiagramCylinder:
    return DiagramCylinder(f, g)


def cylinder_hom_from_triple(
    dc: DiagramCylinder, h: PreMorphism, u: PreMorphism, v: PreMorphism
) -> PreMorphism:
    """The ho-morphism t with t_i(x,y,z) = h(x) + u(y) + v(z) on Cyl(f,g).

    h must be a homotopy certifying u f ~ v g; the legs are assembled
    the same way from the legs of h, u and v.
    """
    from .homotopy import _blocks_or_zeros

    X = dc.f.source
    Y, Z = dc.f.target, dc.g.target
    W = u.target
    cyl = dc.diagram
    r = dc.f.stage
    comps = {}
    for idx in range(X.shape.size):
        per = {}
        for n in cyl.vertex(idx).degrees():
            per[n] = _blocks_or_zeros(
                W.vertex(idx).field,
                [[h.component(idx, n + 1), u.component(idx, n), v.component(idx, n)]],
                (W.vertex(idx).dim(n),),
                (X.vertex(idx).dim(n + 1), Y.vertex(idx).dim(n), Z.vertex(idx).dim(n)),
            )
        comps[idx] = per
    legs = {}
    lo, hi = _window(X, W)
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        per = {}
        for m in range(lo, hi + 1):
            per[m] = _blocks_or_zeros(
                W.vertex(tgt).field,
                [[h.leg(a_idx, m + 1), u.leg(a_idx, m), v.leg(a_idx, m)]],
                (W.vertex(tgt).dim(m - 1),),
                (
                    X.vertex(src).dim(m + 1),
                    Y.vertex(src).dim(m),
                    Z.vertex(src).dim(m),
                ),
            )
        legs[a_idx] = per
    return PreMorphism(cyl, W, 0, r, comps, legs)


def cylinder_hom_to_triple(dc: DiagramCylinder, t: PreMorphism):
    """Split t on Cyl(f,g) into (t k, t j, t i): a homotopy and two maps."""
    from .homotopy import _column_slice

    X = dc.f.source
    Y, Z = dc.f.target, dc.g.target
    W = t.target
    r = dc.f.stage
    h_comps, u_comps, v_comps = {}, {}, {}
    h_legs, u_legs, v_legs = {}, {}, {}
    lo, hi = _window(X, W)
    for idx in range(X.shape.size):
        hp, up, vp = {}, {}, {}
        for n in range(lo, hi + 1):
            m = t.component(idx, n)
            dx = X.vertex(idx).dim(n + 1)
            dy = Y.vertex(idx).dim(n)
            dz = Z.vertex(idx).dim(n)
            if m.ncols != dx + dy + dz:
                continue
            hp[n + 1] = _column_slice(m, 0, dx)
            up[n] = _column_slice(m, dx, dy)
            vp[n] = _column_slice(m, dx + dy, dz)
        h_comps[idx], u_comps[idx], v_comps[idx] = hp, up, vp
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        hp, up, vp = {}, {}, {}
        for m in range(lo, hi + 1):
            mat = t.leg(a_idx, m)
            dx = X.vertex(src).dim(m + 1)
            dy = Y.vertex(src).dim(m)
            dz = Z.vertex(src).dim(m)
            if mat.ncols != dx + dy + dz:
                continue
            hp[m + 1] = _column_slice(mat, 0, dx)
            up[m] = _column_slice(mat, dx, dy)
            vp[m] = _column_slice(mat, dx + dy, dz)
        h_legs[a_idx], u_legs[a_idx], v_legs[a_idx] = hp, up, vp
    u = PreMorphism(Y, W, 0, r, u_comps, u_legs)
    v = PreMorphism(Z, W, 0, r, v_comps, v_legs)
    h = PreMorphism(X, W, -1, r, h_comps, h_legs)
    return h, u, v


class Factorization:
    """f = p o i through the mapping cylinder, with j a ho-equivalence."""

    __slots__ = ("cylinder", "i", "j", "p", "jp_homotopy")

    def __init__(self, f: PreMorphism):
        X, Y = f.source, f.target
        r = f.stage
        dc = DiagramCylinder(f, identity_ho_morphism(X, r))
        object.__setattr__(self, "cylinder", dc)
        object.__setattr__(self, "i", dc.i)
        object.__setattr__(self, "j", dc.j)
        cyl = dc.diagram
        from .homotopy import _blocks_or_zeros

        p_comps = {}
        p_legs = {}
        for idx in range(X.shape.size):
            Xi, Yi = X.vertex(idx), Y.vertex(idx)
            per = {}
            for n in cyl.vertex(idx).degrees():
                ident = Matrix.identity(Yi.field, Yi.dim(n))
                per[n] = _blocks_or_zeros(
                    Yi.field,
                    [[None, ident, f.component(idx, n)]],
                    (Yi.dim(n),),
                    (Xi.dim(n + 1), Yi.dim(n), Xi.dim(n)),
                )
            p_comps[idx] = per
        for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
            Xs = X.vertex(src)
            Yj = Y.vertex(tgt)
            per = {}
            lo, hi = _window(X, Y)
            for m in range(lo, hi + 1):
                per[m] = _blocks_or_zeros(
                    Yj.field,
                    [[None, None, f.leg(a_idx, m)]],
                    (Yj.dim(m - 1),),
                    (Xs.dim(m + 1), Y.vertex(src).dim(m), Xs.dim(m)),
                )
            p_legs[a_idx] = per
        object.__setattr__(
            self, "p", PreMorphism(cyl, Y, 0, r, p_comps, p_legs)
        )
        # h_i(x, y, z) = (z, 0, 0) with zero legs certifies j p ~ 1.
        h_comps = {}
        for idx in range(X.shape.size):
            Xi, Yi = X.vertex(idx), Y.vertex(idx)
            per = {}
            for m in cyl.vertex(idx).degrees():
                ident = Matrix.identity(Xi.field, Xi.dim(m + 1))
                per[m + 1] = _blocks_or_zeros(
                    Xi.field,
                    [[None, None, ident], [None, None, None], [None, None, None]],
                    (Xi.dim(m + 1), Yi.dim(m), Xi.dim(m)),
                    (Xi.dim(m + 2), Yi.dim(m + 1), Xi.dim(m + 1)),
                )
            h_comps[idx] = per
        object.__setattr__(
            self, "jp_homotopy", PreMorphism(cyl, cyl, -1, r, h_comps, {})
        )

    def __setattr__(self, name, value):
        raise AttributeError("factorizations are immutable")


def factorize(f: PreMorphism) -> Factorization:
    return Factorization(f)


def induced_cylinder_map(
    f: PreMorphism, g: PreMorphism, a: PreMorphism, b: PreMorphism
) -> PreMorphism:
    """The map of mapping cylinders induced by a square b f = g a.

    Components send (x, y, z) to (a(x), b(y), a(z)); the homotopy legs
    are (-A_u(x), B_u(y), A_u(z)).
    """
    if compose(b, f).sub(compose(g, a)).is_zero() is False:
        raise DiagramError("the square does not commute in the ho-category")
    Ff, Fg = factorize(f), factorize(g)
    cf, cg = Ff.cylinder.diagram, Fg.cylinder.diagram
    X, Y = f.source, f.target
    Xg, Yg = g.source, g.target
    r = f.stage
    from .homotopy import _blocks_or_zeros

    comps = {}
    for idx in range(X.shape.size):
        per = {}
        for n in cf.vertex(idx).degrees():
            blocks = [
                [a.component(idx, n + 1), None, None],
                [None, b.component(idx, n), None],
                [None, None, a.component(idx, n)],
            ]
            heights = (
                Xg.vertex(idx).dim(n + 1),
                Yg.vertex(idx).dim(n),
                Xg.vertex(idx).dim(n),
            )
            widths = (
                X.vertex(idx).dim(n + 1),
                Y.vertex(idx).dim(n),
                X.vertex(idx).dim(n),
            )
            per[n] = _blocks_or_zeros(cg.vertex(idx).field, blocks, heights, widths)
        comps[idx] = per
    legs = {}
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        per = {}
        lo, hi = _window(X, Y)
        for m in range(lo, hi + 1):
            blocks = [
                [-a.leg(a_idx, m + 1), None, None],
                [None, b.leg(a_idx, m), None],
                [None, None, a.leg(a_idx, m)],
            ]
            heights = (
                Xg.vertex(tgt).dim(m),
                Yg.vertex(tgt).dim(m - 1),
                Xg.vertex(tgt).dim(m - 1),
            )
            widths = (
                X.vertex(src).dim(m + 1),
                Y.vertex(src).dim(m),
                X.vertex(src).dim(m),
            )
            per[m] = _blocks_or_zeros(cg.vertex(tgt).field, blocks, heights, widths)
        legs[a_idx] = per
    return PreMorphism(cf, cg, 0, r, comps, legs)


class Span:
    """The rectified form of a ho-morphism: X -> Cyl(f) <- Y.

    i_f is a strict morphism, j_f a strict ho-equivalence with inverse
    p_f; p_f o i_f equals f on the nose, so the class of f in the
    localized category is represented by j_f^{-1} i_f.
    """

    __slots__ = ("f", "factorization")

    def __init__(self, f: PreMorphism):
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "factorization", factorize(f))

    def __setattr__(self, name, value):
        raise AttributeError("spans are immutable")

    @property
    def apex(self) -> Diagram:
        return self.factorization.cylinder.diagram

    @property
    def left(self) -> PreMorphism:
        return self.factorization.i

    @property
    def right(self) -> PreMorphism:
        return self.factorization.j

    @property
    def right_inverse(self) -> PreMorphism:
        return self.factorization.p

    def verify(self) -> bool:
        """All the defining identities, as exact checks."""
        fz = self.factorization
        if not is_ho_morphism(fz.p):
            return False
        if not compose(fz.p, fz.i).sub(self.f).is_zero():
            return False
        one_y = identity_ho_morphism(self.f.target, self.f.stage)
        if not compose(fz.p, fz.j).sub(one_y).is_zero():
            return False
        one_c = identity_ho_morphism(self.apex, self.f.stage)
        return check_ho_homotopy(fz.jp_homotopy, compose(fz.j, fz.p), one_c)


def rectify(f: PreMorphism) -> Span:
    return Span(f)


def fibrant_lift(w: PreMorphism, f: PreMorphism) -> tuple[PreMorphism, PreMorphism]:
    """Lift f: X -> Q along the weak equivalence w: X -> Y.

    Returns (g, H) with g: Y -> Q a ho-morphism and H a homotopy
    certifying g o w ~ f.  Raises LiftError when the joint linear
    system has no solution, which signals that w is not a weak
    equivalence of the required stage.
    """
    X, Y = w.source, w.target
    Q = f.target
    if f.source is not X and f.source != X:
        raise DiagramError("the lifting problem needs a common source")
    r = f.stage
    shape = X.shape
    lo, hi = _window(Y, Q)
    lo = min(lo, _window(X, Q)[0])
    hi = max(hi, _window(X, Q)[1])
    sys = LinearSystem()
    g_names, h_names, gl_names, hl_names = {}, {}, {}, {}
    for i in range(shape.size):
        Yi, Qi, Xi = Y.vertex(i), Q.vertex(i), X.vertex(i)
        for m in range(lo, hi + 1):
            if Yi.dim(m) and Qi.dim(m):
                name = sys.add_block(f"g_{i}_{m}", Qi.dim(m), Yi.dim(m), Qi.field)
                g_names[(i, m)] = name
                sys.constrain_maps_into(name, _filtration_shift_pairs(Yi, Qi, 0, r, m))
            if Xi.dim(m) and Qi.dim(m - 1):
                name = sys.add_block(f"h_{i}_{m}", Qi.dim(m - 1), Xi.dim(m), Qi.field)
                h_names[(i, m)] = name
                sys.constrain_maps_into(name, _filtration_shift_pairs(Xi, Qi, -1, r, m))
    for a_idx, (src, tgt, functor) in enumerate(shape.arrows):
        Ys = push_complex(Y.vertex(src), functor)
        Xs = push_complex(X.vertex(src), functor)
        Qt = Q.vertex(tgt)
        for m in range(lo, hi + 1):
            if Ys.dim(m) and Qt.dim(m - 1):
                name = sys.add_block(f"G_{a_idx}_{m}", Qt.dim(m - 1), Ys.dim(m), Qt.field)
                gl_names[(a_idx, m)] = name
                sys.constrain_maps_into(name, _filtration_shift_pairs(Ys, Qt, -1, r, m))
            if Xs.dim(m) and Qt.dim(m - 2):
                name = sys.add_block(f"H_{a_idx}_{m}", Qt.dim(m - 2), Xs.dim(m), Qt.field)
                hl_names[(a_idx, m)] = name
                sys.constrain_maps_into(name, _filtration_shift_pairs(Xs, Qt, -2, r, m))
    # (a) each g_i is a chain map
    for i in range(shape.size):
        Yi, Qi = Y.vertex(i), Q.vertex(i)
        for m in range(lo, hi + 1):
            terms = []
            if (i, m) in g_names:
                terms.append((1, Qi.d(m), g_names[(i, m)], None))
            if (i, m + 1) in g_names:
                terms.append((-1, None, g_names[(i, m + 1)], Yi.d(m)))
            if terms:
                sys.add_equation(terms)
    # (b) d h_i + h_i d + g_i w_i = f_i
    for i in range(shape.size):
        Xi, Qi = X.vertex(i), Q.vertex(i)
        for m in range(lo, hi + 1):
            rhs = f.component(i, m)
            terms = []
            if (i, m) in h_names:
                terms.append((1, Qi.d(m - 1), h_names[(i, m)], None))
            if (i, m + 1) in h_names:
                terms.append((1, None, h_names[(i, m + 1)], Xi.d(m)))
            if (i, m) in g_names:
                terms.append((1, None, g_names[(i, m)], w.component(i, m)))
            if terms:
                sys.add_equation(terms, rhs)
            elif not rhs.is_zero():
                raise LiftError("no unknowns available for a nonzero component")
    # (c) legs of g: G_u d + d G_u + g_j phi - phi g_i = 0
    for a_idx, (src, tgt, functor) in enumerate(shape.arrows):
        Ys = push_complex(Y.vertex(src), functor)
        Qt = Q.vertex(tgt)
        for m in range(lo, hi + 1):
            terms = []
            if (a_idx, m + 1) in gl_names:
                terms.append((1, None, gl_names[(a_idx, m + 1)], Ys.d(m)))
            if (a_idx, m) in gl_names:
                terms.append((1, Qt.d(m - 1), gl_names[(a_idx, m)], None))
            if (tgt, m) in g_names:
                terms.append((1, None, g_names[(tgt, m)], Y.comparison(a_idx, m)))
            if (src, m) in g_names:
                terms.append((-1, Q.comparison(a_idx, m), g_names[(src, m)], None))
            if terms:
                sys.add_equation(terms)
    # (d) legs of D h = f - g w:
    # H_u d - d H_u - h_j phi + phi h_i - G_u w_i - g_j W_u = f_u
    for a_idx, (src, tgt, functor) in enumerate(shape.arrows):
        Xs = push_complex(X.vertex(src), functor)
        Qt = Q.vertex(tgt)
        w_push = {
            m: push_matrix(w.component(src, m), functor) for m in range(lo, hi + 1)
        }
        for m in range(lo, hi + 1):
            rhs = f.leg(a_idx, m)
            terms = []
            if (a_idx, m + 1) in hl_names:
                terms.append((1, None, hl_names[(a_idx, m + 1)], Xs.d(m)))
            if (a_idx, m) in hl_names:
                terms.append((-1, Qt.d(m - 2), hl_names[(a_idx, m)], None))
            if (tgt, m) in h_names:
                terms.append((-1, None, h_names[(tgt, m)], X.comparison(a_idx, m)))
            if (src, m) in h_names:
                terms.append((1, Q.comparison(a_idx, m - 1), h_names[(src, m)], None))
            if (a_idx, m) in gl_names:
                terms.append((1, None, gl_names[(a_idx, m)], w_push[m]))
            if (tgt, m - 1) in g_names:
                terms.append((1, None, g_names[(tgt, m - 1)], w.leg(a_idx, m)))
            if terms:
                sys.add_equation(terms, rhs)
            elif not rhs.is_zero():
                raise LiftError("no unknowns available for a nonzero leg")
    sol = sys.solve()
    if sol is None:
        raise LiftError("lifting system unsolvable: not a weak equivalence at this stage")
    g_comps, h_comps, g_legs, h_legs = {}, {}, {}, {}
    for (i, m), name in g_names.items():
        g_comps.setdefault(i, {})[m] = sol[name]
    for (i, m), name in h_names.items():
        h_comps.setdefault(i, {})[m] = sol[name]
    for (a_idx, m), name in gl_names.items():
        g_legs.setdefault(a_idx, {})[m] = sol[name]
    for (a_idx, m), name in hl_names.items():
        h_legs.setdefault(a_idx, {})[m] = sol[name]
    g = PreMorphism(Y, Q, 0, r, g_comps, g_legs)
    H = PreMorphism(X, Q, -1, r, h_comps, h_legs)
    return g, H
