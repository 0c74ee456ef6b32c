"""Seeded random instance generators for tests and the fuzz harness.

Complexes are generated in an adapted basis: every basis vector gets a
filtration level (a pair of levels in the bifiltered case), the
filtration is the span of the adapted vectors past the level, and the
differential is sampled exactly from the space of pattern-respecting
matrices squaring to zero, so every generated instance satisfies the
construction invariants by design rather than by rejection.
"""

from __future__ import annotations

import random

from .filtered import (
    BifilteredComplex,
    BifilteredMorphism,
    FilteredComplex,
    FilteredMorphism,
    Filtration,
)
from .linalg import Matrix, Subspace
from .scalars import QQ, QQI, Gaussian, rational
from .systems import LinearSystem


def random_rational(rng: random.Random, amplitude=3):
    return rational(rng.randint(-amplitude, amplitude), rng.randint(1, 2))


def random_scalar(rng: random.Random, field, amplitude=3):
    if field is QQI:
        return Gaussian(random_rational(rng, amplitude), random_rational(rng, amplitude))
    return random_rational(rng, amplitude)


def random_matrix(rng, field, nrows, ncols, density=0.6, amplitude=3) -> Matrix:
    rows = []
    for _ in range(nrows):
        rows.append(
            [
                random_scalar(rng, field, amplitude) if rng.random() < density else field.zero
                for _ in range(ncols)
            ]
        )
    return Matrix(field, rows, ncols=ncols)


def random_invertible(rng, field, n) -> Matrix:
    while True:
        m = random_matrix(rng, field, n, n, density=0.7, amplitude=2)
        if m.is_invertible():
            return m


def _adapted_complex(rng, field, dims, level_of, nlevels_pattern):
    """Differential and filtrations from per-vector level data.

    level_of[n][i] is a tuple of levels for basis vector i of degree n;
    nlevels_pattern(src_levels, dst_levels) says whether an entry from a
    source vector to a target vector is allowed.
    """
    degrees = sorted(dims)
    bases = {n: random_invertible(rng, field, dims[n]) for n in degrees if dims[n]}
    adapted = {}
    for n in reversed(degrees):
        if dims[n] == 0 or dims.get(n + 1, 0) == 0:
            continue
        sys = LinearSystem()
        blk = sys.add_block("d", dims[n + 1], dims[n], field)
        pairs = []
        for i in range(dims[n]):
            allowed = [
                j
                for j in range(dims[n + 1])
                if nlevels_pattern(level_of[n][i], level_of[n + 1][j])
            ]
            src = Subspace.from_generators(
                field, dims[n], [[field.one if k == i else field.zero for k in range(dims[n])]]
            )
            dst = Subspace.from_generators(
                field,
                dims[n + 1],
                [
                    [field.one if k == j else field.zero for k in range(dims[n + 1])]
                    for j in allowed
                ],
            )
            pairs.append((src, dst))
        sys.constrain_maps_into(blk, pairs)
        nxt = adapted.get(n + 1)
        if nxt is not None:
            sys.add_equation([(1, nxt, blk, None)])
        sol = sys.sample(rng, amplitude=2)
        adapted[n] = sol[blk]
    diff = {}
    for n, a in adapted.items():
        b_src = bases[n].transpose()
        b_tgt = bases[n + 1].transpose()
        diff[n] = b_tgt @ a @ b_src.inverse()
    return bases, diff


def _span_of_levels(field, basis: Matrix, keep) -> Subspace:
    rows = [basis.rows[i] for i in keep]
    return Subspace.from_generators(field, basis.ncols, rows)


def random_filtered_complex(
    rng: random.Random,
    field=QQ,
    max_degrees=4,
    max_dim=4,
    max_levels=3,
    direction="decreasing",
) -> FilteredComplex:
    n0 = rng.randint(-2, 1)
    ndeg = rng.randint(1, max_degrees)
    dims = {}
    for n in range(n0, n0 + ndeg):
        dims[n] = rng.randint(0, max_dim)
    if all(v == 0 for v in dims.values()):
        dims[n0] = 1
    nlev = rng.randint(1, max_levels)
    base_level = rng.randint(-1, 1)
    level_of = {
        n: [(base_level + rng.randrange(nlev),) for _ in range(d)] for n, d in dims.items()
    }
    bases, diff = _adapted_complex(
        rng, field, dims, level_of, lambda s, t: t[0] >= s[0]
    )
    values = {}
    for n, d in dims.items():
        if d == 0:
            continue
        per = {}
        levels = [lv[0] for lv in level_of[n]]
        for p in range(base_level, base_level + nlev + 1):
            keep = [i for i, lv in enumerate(levels) if lv >= p]
            per[p] = _span_of_levels(field, bases[n], keep)
        values[n] = per
    filt = Filtration.from_step_values(direction, field, dims, values)
    return FilteredComplex(field, dims, diff, filt)


def random_bifiltered_complex(
    rng: random.Random,
    field=QQI,
    max_degrees=3,
    max_dim=3,
    max_wlevels=3,
    max_flevels=3,
) -> BifilteredComplex:
    n0 = rng.randint(-1, 1)
    ndeg = rng.randint(1, max_degrees)
    dims = {}
    for n in range(n0, n0 + ndeg):
        dims[n] = rng.randint(0, max_dim)
    if all(v == 0 for v in dims.values()):
        dims[n0] = 1
    nw = rng.randint(1, max_wlevels)
    nf = rng.randint(1, max_flevels)
    w0 = rng.randint(-1, 1)
    f0 = rng.randint(-1, 1)
    level_of = {
        n: [(w0 + rng.randrange(nw), f0 + rng.randrange(nf)) for _ in range(d)]
        for n, d in dims.items()
    }
    # d(W_m) <= W_m and d(F^q) <= F^q: target weight <= source weight,
    # target F-level >= source F-level.
    bases, diff = _adapted_complex(
        rng, field, dims, level_of, lambda s, t: t[0] <= s[0] and t[1] >= s[1]
    )
    w_values = {}
    f_values = {}
    for n, d in dims.items():
        if d == 0:
            continue
        wl = [lv[0] for lv in level_of[n]]
        fl = [lv[1] for lv in level_of[n]]
        wper = {}
        for p in range(-(w0 + nw), -w0 + 2):
            # internal level p corresponds to weight m = -p
            keep = [i for i, lv in enumerate(wl) if lv <= -p]
            wper[p] = _span_of_levels(field, bases[n], keep)
        w_values[n] = wper
        fper = {}
        for q in range(f0, f0 + nf + 1):
            keep = [i for i, lv in enumerate(fl) if lv >= q]
            fper[q] = _span_of_levels(field, bases[n], keep)
        f_values[n] = fper
    w = Filtration.from_step_values("increasing", field, dims, w_values)
    f = Filtration.from_step_values("decreasing", field, dims, f_values)
    return BifilteredComplex(field, dims, diff, w, f)


def random_filtered_morphism(rng, K: FilteredComplex, L: FilteredComplex):
    """A random chain map preserving filtrations (possibly zero)."""
    sys = _morphism_system(K, L)
    sol = sys.sample(rng, amplitude=2)
    comps = {n: sol[f"f{n}"] for n in K.degrees() if K.dim(n) and L.dim(n)}
    cls = BifilteredMorphism if isinstance(K, BifilteredComplex) else FilteredMorphism
    return cls(K, L, comps)


def random_constrained_matrix(rng, field, nrows, ncols, conditions, amplitude=2) -> Matrix:
    from .systems import constrained_matrix_basis

    basis = constrained_matrix_basis(field, nrows, ncols, conditions)
    total = Matrix.zeros(field, nrows, ncols)
    for b in basis:
        c = rng.randint(-amplitude, amplitude)
        if c:
            total = total + b.scale(c)
    return total


# -- diagram-level generators ------------------------------------------------


def random_hodge_diagram(
    rng: random.Random,
    length: int = 2,
    max_degrees: int = 2,
    max_dim: int = 2,
    max_levels: int = 2,
) -> "Diagram":
    """A random diagram over the Hodge zig-zag (no Hodge axioms imposed).

    All vertices share one degree window; comparisons are sampled from
    the space of valid filtered chain maps and may be far from
    quasi-isomorphisms.
    """
    from .diagrams import Diagram, ZigzagShape, push_complex

    shape = ZigzagShape.hodge(length)
    vertices = []
    for kind, fieldname in shape.kinds:
        field = QQ if fieldname == "rational" else QQI
        if kind == "bifiltered":
            K = random_bifiltered_complex(
                rng, field, max_degrees=max_degrees, max_dim=max_dim,
                max_wlevels=max_levels, max_flevels=max_levels,
            )
        else:
            K = random_filtered_complex(
                rng, field, max_degrees=max_degrees, max_dim=max_dim,
                max_levels=max_levels, direction="increasing",
            )
        vertices.append(K)
    comparisons = {}
    for a_idx, (src, tgt, functor) in enumerate(shape.arrows):
        pushed = push_complex(vertices[src], functor)
        sys = _morphism_system(pushed, vertices[tgt])
        sol = sys.sample(rng, amplitude=2)
        comparisons[a_idx] = {
            n: sol[f"f{n}"] for n in pushed.degrees()
            if pushed.dim(n) and vertices[tgt].dim(n)
        }
    return Diagram(shape, vertices, comparisons)


def random_pre_morphism(rng, X, Y, degree: int, stage: int = 0, amplitude=2):
    """A random filtration-valid pre-morphism of the given degree."""
    from .diagrams import PreMorphism, _filtration_shift_pairs, push_complex
    from .systems import membership_conditions

    lo1, hi1 = X.degree_window()
    lo2, hi2 = Y.degree_window()
    lo, hi = min(lo1, lo2) - 1, max(hi1, hi2) + 1
    comps = {}
    for i in range(X.shape.size):
        Xi, Yi = X.vertex(i), Y.vertex(i)
        per = {}
        for m in range(lo, hi + 1):
            if Xi.dim(m) and Yi.dim(m + degree):
                conds = membership_conditions(
                    _filtration_shift_pairs(Xi, Yi, degree, stage, m)
                )
                per[m] = random_constrained_matrix(
                    rng, Yi.field, Yi.dim(m + degree), Xi.dim(m), conds, amplitude
                )
        comps[i] = per
    legs = {}
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        Xs = push_complex(X.vertex(src), functor)
        Yj = Y.vertex(tgt)
        per = {}
        for m in range(lo, hi + 1):
            if Xs.dim(m) and Yj.dim(m + degree - 1):
                conds = membership_conditions(
                    _filtration_shift_pairs(Xs, Yj, degree - 1, stage, m)
                )
                per[m] = random_constrained_matrix(
                    rng, Yj.field, Yj.dim(m + degree - 1), Xs.dim(m), conds, amplitude
                )
        legs[a_idx] = per
    return PreMorphism(X, Y, degree, stage, comps, legs)


def random_ho_morphism(rng, X, Y, stage: int = 0, amplitude=2):
    """A random ho-morphism: a valid degree-0 pre-morphism with D f = 0."""
    from .diagrams import PreMorphism, _filtration_shift_pairs, push_complex

    lo1, hi1 = X.degree_window()
    lo2, hi2 = Y.degree_window()
    lo, hi = min(lo1, lo2) - 1, max(hi1, hi2) + 1
    sys = LinearSystem()
    comp_names, leg_names = {}, {}
    for i in range(X.shape.size):
        Xi, Yi = X.vertex(i), Y.vertex(i)
        for m in range(lo, hi + 1):
            if Xi.dim(m) and Yi.dim(m):
                name = sys.add_block(f"f_{i}_{m}", Yi.dim(m), Xi.dim(m), Yi.field)
                comp_names[(i, m)] = name
                sys.constrain_maps_into(
                    name, _filtration_shift_pairs(Xi, Yi, 0, stage, m)
                )
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        Xs = push_complex(X.vertex(src), functor)
        Yj = Y.vertex(tgt)
        for m in range(lo, hi + 1):
            if Xs.dim(m) and Yj.dim(m - 1):
                name = sys.add_block(f"F_{a_idx}_{m}", Yj.dim(m - 1), Xs.dim(m), Yj.field)
                leg_names[(a_idx, m)] = name
                sys.constrain_maps_into(
                    name, _filtration_shift_pairs(Xs, Yj, -1, stage, m)
                )
    # chain conditions
    for i in range(X.shape.size):
        Xi, Yi = X.vertex(i), Y.vertex(i)
        for m in range(lo, hi + 1):
            terms = []
            if (i, m) in comp_names:
                terms.append((1, Yi.d(m), comp_names[(i, m)], None))
            if (i, m + 1) in comp_names:
                terms.append((-1, None, comp_names[(i, m + 1)], Xi.d(m)))
            if terms:
                sys.add_equation(terms)
    # leg conditions: F_u d + d F_u + f_j phi - phi f_i = 0
    for a_idx, (src, tgt, functor) in enumerate(X.shape.arrows):
        Xs = push_complex(X.vertex(src), functor)
        Yj = Y.vertex(tgt)
        for m in range(lo, hi + 1):
            terms = []
            if (a_idx, m + 1) in leg_names:
                terms.append((1, None, leg_names[(a_idx, m + 1)], Xs.d(m)))
            if (a_idx, m) in leg_names:
                terms.append((1, Yj.d(m - 1), leg_names[(a_idx, m)], None))
            if (tgt, m) in comp_names:
                terms.append((1, None, comp_names[(tgt, m)], X.comparison(a_idx, m)))
            if (src, m) in comp_names:
                terms.append((-1, Y.comparison(a_idx, m), comp_names[(src, m)], None))
            if terms:
                sys.add_equation(terms)
    sol = sys.sample(rng, amplitude=amplitude)
    comps, legs = {}, {}
    for (i, m), name in comp_names.items():
        comps.setdefault(i, {})[m] = sol[name]
    for (a_idx, m), name in leg_names.items():
        legs.setdefault(a_idx, {})[m] = sol[name]
    from .diagrams import PreMorphism as PM

    return PM(X, Y, 0, stage, comps, legs)


# -- mixed Hodge structure generators ----------------------------------------


def random_mhs(rng: random.Random, max_dim: int = 3, weight_base: int | None = None,
               spread: int = 1):
    """A random mixed Hodge structure, valid by construction.

    Basis vectors are grouped into conjugation-symmetric Hodge units
    (singles of type (m/2, m/2) on even weights, pairs of types (p, q)
    and (q, p) otherwise); the Hodge chain is spanned by lifts of the
    unit vectors with lower-weight junk, which keeps every graded piece
    pure while making W and F interact nontrivially.
    """
    from .hodge import MixedHodgeStructure

    dim = rng.randint(1, max_dim)
    if weight_base is None:
        weight_base = rng.randint(-2, 2)
    units = []
    remaining = dim
    while remaining > 0:
        m = weight_base + rng.randint(0, 2)
        if remaining >= 2 and rng.random() < 0.5:
            units.append(("pair", m, rng.randint(0, spread)))
            remaining -= 2
        else:
            if m % 2 != 0:
                m += 1
            units.append(("single", m, 0))
            remaining -= 1
    units.sort(key=lambda u: u[1])
    slot_weights = []
    for kind, m, _ in units:
        slot_weights.extend([m] * (2 if kind == "pair" else 1))
    weights = {}
    for m in range(min(slot_weights), max(slot_weights) + 1):
        keep = [i for i, w in enumerate(slot_weights) if w <= m]
        gens = []
        for i in keep:
            gens.append([1 if k == i else 0 for k in range(dim)])
        weights[m] = gens
    # lifts with junk in strictly lower weights
    def junk(m):
        lower = [i for i, w in enumerate(slot_weights) if w < m]
        v = [QQI.zero] * dim
        for i in lower:
            if rng.random() < 0.7:
                v[i] = random_scalar(rng, QQI, 2)
        return v

    lifts = []  # (level, vector)
    slot = 0
    for kind, m, delta in units:
        if kind == "single":
            v = junk(m)
            v[slot] = QQI.one
            lifts.append((m // 2, v))
            slot += 1
        else:
            p = (m + 1) // 2 + delta
            q = m - p
            v = junk(m)
            w = junk(m)
            v[slot] = QQI.one
            v[slot + 1] = Gaussian(0, 1)
            w[slot] = QQI.one
            w[slot + 1] = Gaussian(0, -1)
            lifts.append((p, v))
            lifts.append((q, w))
            slot += 2
    levels = sorted({lv for lv, _ in lifts})
    hodge = {}
    for p in range(min(levels), max(levels) + 2):
        hodge[p] = [v for lv, v in lifts if lv >= p]
    H = MixedHodgeStructure(dim, weights, hodge)
    return H


def random_mhs_complex(rng: random.Random, max_degrees: int = 3, max_dim: int = 2,
                       base_degree: int = 0):
    """Structures and differentials of a random complex of MHS.

    Differentials are sampled from the space of morphisms of mixed
    Hodge structures with vanishing composites, so the resulting
    diagram is an absolute Hodge complex.
    """
    from .hodge import MixedHodgeStructure

    ndeg = rng.randint(1, max_degrees)
    wb = rng.randint(-1, 1)
    structures = {}
    for n in range(base_degree, base_degree + ndeg):
        structures[n] = random_mhs(rng, max_dim=max_dim, weight_base=wb)
    diffs = _sample_mhs_differentials(rng, structures)
    return structures, diffs


def _sample_mhs_differentials(rng, structures):
    from .systems import LinearSystem as LS

    # d d = 0 is bilinear, so sample from the top degree down, each
    # differential constrained to compose to zero with the one above.
    degrees = sorted(structures)
    diffs = {}
    for n in reversed(degrees):
        if (n + 1) not in structures:
            continue
        src, tgt = structures[n], structures[n + 1]
        single = LS()
        name = single.add_block("d", tgt.dim, src.dim, QQ)
        _constrain_mhs_morphism(single, name, src, tgt)
        upper = diffs.get(n + 1)
        if upper is not None:
            single.add_equation([(1, upper, name, None)])
        sol = single.sample(rng, amplitude=2)
        diffs[n] = sol[name]
    return {n: m for n, m in diffs.items() if not m.is_zero()}


def _constrain_mhs_morphism(sys, name, src, tgt):
    """Membership rows: W-compatible rationally, F-compatible through
    the comparisons."""
    wlo = min(src.weight_window()[0], tgt.weight_window()[0])
    whi = max(src.weight_window()[1], tgt.weight_window()[1])
    sys.constrain_maps_into(
        name, [(src.w_k(m), tgt.w_k(m)) for m in range(wlo, whi + 1)]
    )
    flo = min(src.hodge_window()[0], tgt.hodge_window()[0])
    fhi = max(src.hodge_window()[1], tgt.hodge_window()[1])
    left = tgt.comparison
    right = src.comparison.inverse()
    for p in range(flo, fhi + 2):
        s = src.f_c(p)
        t = tgt.f_c(p)
        if s.is_zero() or t.is_full():
            continue
        pi = t.annihilator_projection()
        for vec in s.basis:
            col = Matrix.from_columns(QQI, [right.apply(vec)])
            sys.add_equation([(1, pi @ left, name, col)])


def random_ahc(rng: random.Random, max_degrees: int = 3, max_dim: int = 2):
    """A random absolute Hodge complex: a complex of MHS as a diagram."""
    from .hodge import mhs_complex_to_diagram

    structures, diffs = random_mhs_complex(rng, max_degrees, max_dim)
    return mhs_complex_to_diagram(structures, diffs)


def _morphism_system(K, L) -> LinearSystem:
    from .homotopy import _filts_with_shifts

    sys = LinearSystem()
    names = {}
    for n in K.degrees():
        if K.dim(n) and L.dim(n):
            names[n] = sys.add_block(f"f{n}", L.dim(n), K.dim(n), L.field)
    for n in names:
        for (fs, _), (ft, _) in zip(_filts_with_shifts(K, 0), _filts_with_shifts(L, 0)):
            levels = set()
            for flt, mx in ((fs, K), (ft, L)):
                rng_ = flt.level_range(n)
                if rng_:
                    levels.update(range(rng_[0], rng_[1] + 1))
            pairs = [
                (
                    fs.value(K.field, K.dims, n, p),
                    ft.value(L.field, L.dims, n, p),
                )
                for p in sorted(levels)
            ]
            sys.constrain_maps_into(names[n], pairs)
    lo, hi = K.degree_window()
    for n in range(lo, hi + 1):
        terms = []
        if n in names:
            terms.append((1, L.d(n), names[n], None))
        if (n + 1) in names:
            terms.append((-1, None, names[n + 1], K.d(n)))
        if terms:
            sys.add_equation(terms)
    return sys
