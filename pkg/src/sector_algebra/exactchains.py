"""Z/2-graded free integer chain complexes and exact homological operations.

A FreeComplex is a finite-rank free Z-module with generators split by parity
and a differential of odd parity satisfying d*d = 0 (checked on construction).
Homology is computed by Smith normal form, so torsion is exact.  Chain maps,
cones, tensor products, quasi-isomorphism tests and homotopy inverses follow
the sign conventions documented in docs/conventions.md.
"""

from __future__ import annotations

from .intlinalg import IntMatrix, smith_normal_form, kernel_basis, solve, stack_columns


class ChainError(Exception):
    """Raised when chain-level invariants (d^2 = 0, commuting squares) fail."""


class NotQuasiIso(Exception):
    """Raised when a homotopy inverse is requested for a non-quasi-isomorphism."""


class FreeComplex:
    """Finite-rank Z/2-graded free integer cochain complex.

    generators: ordered list of (id, parity) with unique string ids.
    differential: sparse dict (target_index, source_index) -> integer, with
    parity(target) = parity(source) + 1 mod 2.  d*d = 0 is verified exactly.
    """

    def __init__(self, label, generators, differential, check=True):
        self.label = label
        self.generators = list(generators)
        ids = [g for g, _ in self.generators]
        if len(set(ids)) != len(ids):
            raise ChainError(f"{label}: duplicate generator ids")
        self.index = {g: k for k, (g, _) in enumerate(self.generators)}
        self.parities = [p for _, p in self.generators]
        for p in self.parities:
            if p not in (0, 1):
                raise ChainError(f"{label}: parity must be 0 or 1")
        self.diff = {}
        n = len(self.generators)
        for (t, s), c in differential.items():
            if not c:
                continue
            if not (0 <= t < n and 0 <= s < n):
                raise ChainError(f"{label}: differential index ({t},{s}) out of range")
            if self.parities[t] != (self.parities[s] + 1) % 2:
                raise ChainError(
                    f"{label}: differential entry ({t},{s}) violates parity"
                )
            self.diff[(t, s)] = c
        if check:
            self._check_d_squared()

    def _check_d_squared(self):
        by_src = {}
        for (t, s), c in self.diff.items():
            by_src.setdefault(s, {})[t] = c
        for s, col in by_src.items():
            acc = {}
            for mid, c in col.items():
                for t, c2 in by_src.get(mid, {}).items():
                    acc[t] = acc.get(t, 0) + c2 * c
            bad = {t: v for t, v in acc.items() if v}
            if bad:
                t = sorted(bad)[0]
                raise ChainError(
                    f"{self.label}: d^2 != 0 on generator "
                    f"{self.generators[s][0]!r} (hits {self.generators[t][0]!r})"
                )

    @property
    def rank(self):
        return len(self.generators)

    def parity_of(self, gid):
        return self.parities[self.index[gid]]

    def differential_of(self, k):
        """Sparse image {target_index: coeff} of the k-th generator."""
        return {t: c for (t, s), c in self.diff.items() if s == k}

    def d_apply(self, vec):
        """Apply d to a sparse vector {index: coeff}."""
        out = {}
        for (t, s), c in self.diff.items():
            x = vec.get(s, 0)
            if x:
                out[t] = out.get(t, 0) + c * x
        return {t: v for t, v in out.items() if v}

    def _parity_block(self, p):
        """Indices of generators of parity p, and the matrix of d on them."""
        src = [k for k in range(self.rank) if self.parities[k] == p]
        tgt = [k for k in range(self.rank) if self.parities[k] == (p + 1) % 2]
        src_pos = {k: a for a, k in enumerate(src)}
        tgt_pos = {k: a for a, k in enumerate(tgt)}
        data = {}
        for (t, s), c in self.diff.items():
            if self.parities[s] == p:
                data[(tgt_pos[t], src_pos[s])] = c
        return src, tgt, IntMatrix(len(tgt), len(src), data)

    def homology(self):
        """Per-parity homology invariants, computed via Smith normal form."""
        src0, _, d0 = self._parity_block(0)
        src1, _, d1 = self._parity_block(1)
        return HomologyProfile(
            _homology_of_pair(d0, d1),
            _homology_of_pair(d1, d0),
        )

    def homology_data(self, parity):
        """Cycle representatives and boundary expressions for one parity.

        Returns (reps, ker_cols, d_out, d_in) where reps is a list of sparse
        cycle vectors (in global generator indices) projecting to a basis of
        the free part plus torsion classes, in SNF order.
        """
        src, _, d_out = self._parity_block(parity)
        ker = kernel_basis(d_out)
        reps = []
        for col in ker:
            reps.append({src[i]: c for i, c in col.items()})
        return reps

    def shift(self):
        """Parity shift: flips all generator parities, negates d."""
        gens = [(g, (p + 1) % 2) for g, p in self.generators]
        diff = {k: -c for k, c in self.diff.items()}
        return FreeComplex(f"{self.label}[1]", gens, diff, check=False)

    def direct_sum(self, other, label=None):
        gens = [(f"L.{g}", p) for g, p in self.generators]
        gens += [(f"R.{g}", p) for g, p in other.generators]
        n = self.rank
        diff = dict(self.diff)
        for (t, s), c in other.diff.items():
            diff[(t + n, s + n)] = c
        return FreeComplex(label or f"{self.label}(+){other.label}", gens, diff, check=False)

    def identity_map(self):
        return ChainMap(self, self, {(k, k): 1 for k in range(self.rank)})

    def zero_map(self, target):
        return ChainMap(self, target, {})

    def __repr__(self):
        return f"FreeComplex({self.label!r}, rank {self.rank})"


def _homology_of_pair(d_out, d_in):
    """Invariants of ker(d_out)/im(d_in) as (free_rank, torsion list)."""
    ker = kernel_basis(d_out)
    if not ker:
        return (0, [])
    k_mat = stack_columns(ker, d_out.cols)
    # express every column of d_in in the kernel basis; solutions exist
    # because im(d_in) lies in the saturated kernel lattice
    cols = []
    for j in range(d_in.cols):
        col = d_in.column(j)
        if not col:
            continue
        x = solve(k_mat, col)
        if x is None:
            raise ChainError("image does not lie in kernel lattice; d^2 != 0?")
        cols.append(x)
    rel = stack_columns(cols, len(ker))
    _, s, _ = smith_normal_form(rel)
    rank_rel = 0
    torsion = []
    for k in range(min(rel.rows, rel.cols)):
        d = s[(k, k)]
        if d:
            rank_rel += 1
            if abs(d) > 1:
                torsion.append(abs(d))
    return (len(ker) - rank_rel, torsion)


class HomologyProfile:
    """Per-parity invariants (free rank, invariant-factor torsion chain)."""

    def __init__(self, even, odd):
        self.even = (even[0], list(even[1]))
        self.odd = (odd[0], list(odd[1]))
        for _, tors in (self.even, self.odd):
            for a, b in zip(tors, tors[1:]):
                if b % a != 0:
                    raise ChainError("torsion factors must form a divisibility chain")

    def is_trivial(self):
        return self.even == (0, []) and self.odd == (0, [])

    def as_dict(self):
        return {
            "even": {"free_rank": self.even[0], "torsion": list(self.even[1])},
            "odd": {"free_rank": self.odd[0], "torsion": list(self.odd[1])},
        }

    def __eq__(self, other):
        return isinstance(other, HomologyProfile) and self.even == other.even and self.odd == other.odd

    def __repr__(self):
        def fmt(pr):
            free, tors = pr
            parts = ["Z"] * free + [f"Z/{t}" for t in tors]
            return " + ".join(parts) if parts else "0"
        return f"H(even: {fmt(self.even)}, odd: {fmt(self.odd)})"


class ChainMap:
    """Map of complexes with a parity shift; commutes with d up to Koszul sign.

    For parity_shift 0 the invariant is d f = f d exactly; for shift 1 it is
    d f + f d = 0 (an odd map commuting in the graded sense).
    """

    def __init__(self, source, target, entries, parity_shift=0, check=True):
        self.source = source
        self.target = target
        self.parity_shift = parity_shift
        self.entries = {}
        for (t, s), c in entries.items():
            if not c:
                continue
            if not (0 <= t < target.rank and 0 <= s < source.rank):
                raise ChainError("chain map index out of range")
            if target.parities[t] != (source.parities[s] + parity_shift) % 2:
                raise ChainError(
                    f"chain map entry ({t},{s}) violates parity shift {parity_shift}"
                )
            self.entries[(t, s)] = c
        if check:
            self._check_commutes()

    def _check_commutes(self):
        sign = -1 if self.parity_shift else 1
        lhs = _compose_sparse(self.target.diff, self.entries)
        rhs = _compose_sparse(self.entries, self.source.diff)
        for k in set(lhs) | set(rhs):
            if lhs.get(k, 0) != sign * rhs.get(k, 0):
                t, s = k
                raise ChainError(
                    f"map {self.source.label} -> {self.target.label} does not "
                    f"commute with differentials at entry ({t},{s})"
                )

    def apply(self, vec):
        out = {}
        for (t, s), c in self.entries.items():
            x = vec.get(s, 0)
            if x:
                out[t] = out.get(t, 0) + c * x
        return {t: v for t, v in out.items() if v}

    def compose(self, then):
        """self followed by then (then o self)."""
        if then.source is not self.target and then.source.generators != self.target.generators:
            raise ChainError("composition mismatch")
        return ChainMap(
            self.source,
            then.target,
            _compose_sparse(then.entries, self.entries),
            (self.parity_shift + then.parity_shift) % 2,
            check=False,
        )

    def __repr__(self):
        return f"ChainMap({self.source.label} -> {self.target.label}, shift {self.parity_shift})"


class Homotopy:
    """Degree-shift-1 matrix h used in homotopy equations; no invariant of its own."""

    def __init__(self, source, target, entries):
        self.source = source
        self.target = target
        self.entries = {}
        for (t, s), c in entries.items():
            if not c:
                continue
            if target.parities[t] != (source.parities[s] + 1) % 2:
                raise ChainError("homotopy entry violates parity shift 1")
            self.entries[(t, s)] = c


def _compose_sparse(a, b):
    """Sparse dict composition: (a o b)[(t,s)] = sum_k a[(t,k)] b[(k,s)]."""
    by_src = {}
    for (t, k), c in a.items():
        by_src.setdefault(k, []).append((t, c))
    out = {}
    for (k, s), c in b.items():
        for t, c2 in by_src.get(k, ()):
            key = (t, s)
            out[key] = out.get(key, 0) + c2 * c
    return {k: v for k, v in out.items() if v}


def cone(f):
    """Mapping cone of a parity-shift-0 chain map.

    Generators are the shifted source generators followed by the target
    generators; the differential is [[-d_src, 0], [f, d_tgt]].
    """
    if f.parity_shift != 0:
        raise ChainError("cone requires a parity-shift-0 chain map")
    src, tgt = f.source, f.target
    gens = [(f"s.{g}", (p + 1) % 2) for g, p in src.generators]
    gens += [(f"t.{g}", p) for g, p in tgt.generators]
    n = src.rank
    diff = {}
    for (t, s), c in src.diff.items():
        diff[(t, s)] = -c
    for (t, s), c in tgt.diff.items():
        diff[(t + n, s + n)] = c
    for (t, s), c in f.entries.items():
        diff[(t + n, s)] = c
    return FreeComplex(f"cone({src.label}->{tgt.label})", gens, diff)


def is_quasi_iso(f):
    """True iff the cone of f has trivial homology in both parities."""
    return cone(f).homology().is_trivial()


def tensor_complexes(c, d, label=None):
    """Tensor product with Koszul sign (-1)^{parity of left factor} on d_right."""
    gens = []
    for g, p in c.generators:
        for h, q in d.generators:
            gens.append((f"{g}*{h}", (p + q) % 2))
    nd = d.rank
    diff = {}
    for (t, s), coeff in c.diff.items():
        for k in range(nd):
            diff[(t * nd + k, s * nd + k)] = coeff
    for (t, s), coeff in d.diff.items():
        for k in range(c.rank):
            sign = -1 if c.parities[k] else 1
            diff[(k * nd + t, k * nd + s)] = diff.get((k * nd + t, k * nd + s), 0) + sign * coeff
    return FreeComplex(label or f"{c.label}(x){d.label}", gens, diff)


def solve_homotopy(f_entries, source, target):
    """Find h with d h + h d = f (f an even-parity-shift sparse map), or None.

    h has parity shift 1 from source to target.  Used for null-homotopy
    certificates; all arithmetic exact.
    """
    rs, rt = source.rank, target.rank
    # unknowns: entries h[(t,s)] with parity(t) = parity(s) + 1
    unknowns = []
    upos = {}
    for t in range(rt):
        for s in range(rs):
            if target.parities[t] == (source.parities[s] + 1) % 2:
                upos[(t, s)] = len(unknowns)
                unknowns.append((t, s))
    # equations: for each (t, s) with parity(t) == parity(s):
    #   sum_k d_tgt[(t,k)] h[(k,s)] + sum_k h[(t,k)] d_src[(k,s)] = f[(t,s)]
    eq_index = {}
    rows = []
    data = {}
    rhs = {}

    def eq_pos(t, s):
        if (t, s) not in eq_index:
            eq_index[(t, s)] = len(rows)
            rows.append((t, s))
        return eq_index[(t, s)]

    for (t, k), c in target.diff.items():
        for s in range(rs):
            if (k, s) in upos:
                i = eq_pos(t, s)
                j = upos[(k, s)]
                data[(i, j)] = data.get((i, j), 0) + c
    for (k, s), c in source.diff.items():
        for t in range(rt):
            if (t, k) in upos:
                i = eq_pos(t, s)
                j = upos[(t, k)]
                data[(i, j)] = data.get((i, j), 0) + c
    for (t, s), c in f_entries.items():
        i = eq_pos(t, s)
        rhs[i] = c
    mat = IntMatrix(len(rows), len(unknowns), data)
    x = solve(mat, rhs)
    if x is None:
        return None
    return Homotopy(source, target, {unknowns[j]: c for j, c in x.items()})


def homotopy_inverse(f):
    """Homotopy inverse (g, h_src, h_tgt) of a quasi-isomorphism f.

    Returns g with f g - id = d h_tgt + h_tgt d and g f - id = d h_src +
    h_src d, found by exact integer linear solving; raises NotQuasiIso when
    f is not a quasi-isomorphism.  All equations are re-verified before
    returning.
    """
    if f.parity_shift != 0:
        raise ChainError("homotopy inverse requires parity shift 0")
    if not is_quasi_iso(f):
        raise NotQuasiIso(f"{f.source.label} -> {f.target.label} is not a quasi-isomorphism")
    a, b = f.source, f.target
    ra, rb = a.rank, b.rank
    # unknowns: g[(t,s)]: B -> A parity preserving; h[(t,s)]: B -> B shift 1
    g_pos, unknowns = {}, []
    for t in range(ra):
        for s in range(rb):
            if a.parities[t] == b.parities[s]:
                g_pos[(t, s)] = len(unknowns)
                unknowns.append(("g", t, s))
    h_pos = {}
    for t in range(rb):
        for s in range(rb):
            if b.parities[t] == (b.parities[s] + 1) % 2:
                h_pos[(t, s)] = len(unknowns)
                unknowns.append(("h", t, s))

    eq_index, rows, data, rhs = {}, [], {}, {}

    def eq_pos(tag, t, s):
        key = (tag, t, s)
        if key not in eq_index:
            eq_index[key] = len(rows)
            rows.append(key)
        return eq_index[key]

    # chain map: d_A g - g d_B = 0
    for (t, k), c in a.diff.items():
        for s in range(rb):
            if (k, s) in g_pos:
                i = eq_pos("cm", t, s)
                data[(i, g_pos[(k, s)])] = data.get((i, g_pos[(k, s)]), 0) + c
    for (k, s), c in b.diff.items():
        for t in range(ra):
            if (t, k) in g_pos:
                i = eq_pos("cm", t, s)
                data[(i, g_pos[(t, k)])] = data.get((i, g_pos[(t, k)]), 0) - c
    # f g - d h - h d = id_B
    for (t, k), c in f.entries.items():
        for s in range(rb):
            if (k, s) in g_pos:
                i = eq_pos("ht", t, s)
                data[(i, g_pos[(k, s)])] = data.get((i, g_pos[(k, s)]), 0) + c
    for (t, k), c in b.diff.items():
        for s in range(rb):
            if (k, s) in h_pos:
                i = eq_pos("ht", t, s)
                data[(i, h_pos[(k, s)])] = data.get((i, h_pos[(k, s)]), 0) - c
    for (k, s), c in b.diff.items():
        for t in range(rb):
            if (t, k) in h_pos:
                i = eq_pos("ht", t, s)
                data[(i, h_pos[(t, k)])] = data.get((i, h_pos[(t, k)]), 0) - c
    for t in range(rb):
        i = eq_pos("ht", t, t)
        rhs[i] = rhs.get(i, 0) + 1

    mat = IntMatrix(len(rows), len(unknowns), data)
    x = solve(mat, rhs)
    if x is None:
        raise NotQuasiIso(
            f"no integral homotopy inverse for {a.label} -> {b.label}; "
            "cone is acyclic so this should not happen at finite free rank"
        )
    g_entries, h_tgt_entries = {}, {}
    for j, c in x.items():
        tag, t, s = unknowns[j]
        if tag == "g":
            g_entries[(t, s)] = c
        else:
            h_tgt_entries[(t, s)] = c
    g = ChainMap(b, a, g_entries)
    h_tgt = Homotopy(b, b, h_tgt_entries)
    # solve g f - id_A = d h_src + h_src d
    gf = _compose_sparse(g_entries, f.entries)
    for t in range(ra):
        gf[(t, t)] = gf.get((t, t), 0) - 1
    gf = {k: v for k, v in gf.items() if v}
    h_src = solve_homotopy(gf, a, a)
    if h_src is None:
        raise NotQuasiIso("g f - id is not null-homotopic over Z")
    _verify_homotopy_equation(f.entries, g_entries, h_tgt.entries, b)
    _verify_homotopy_equation_left(f.entries, g_entries, h_src.entries, a)
    return g, h_src, h_tgt


def _verify_homotopy_equation(f_e, g_e, h_e, b):
    lhs = _compose_sparse(f_e, g_e)
    dh = _compose_sparse(b.diff, h_e)
    hd = _compose_sparse(h_e, b.diff)
    for t in range(b.rank):
        lhs[(t, t)] = lhs.get((t, t), 0) - 1
    for k in set(lhs) | set(dh) | set(hd):
        if lhs.get(k, 0) != dh.get(k, 0) + hd.get(k, 0):
            raise ChainError("homotopy equation f g - id = d h + h d failed verification")


def _verify_homotopy_equation_left(f_e, g_e, h_e, a):
    lhs = _compose_sparse(g_e, f_e)
    dh = _compose_sparse(a.diff, h_e)
    hd = _compose_sparse(h_e, a.diff)
    for t in range(a.rank):
        lhs[(t, t)] = lhs.get((t, t), 0) - 1
    for k in set(lhs) | set(dh) | set(hd):
        if lhs.get(k, 0) != dh.get(k, 0) + hd.get(k, 0):
            raise ChainError("homotopy equation g f - id = d h + h d failed verification")


def rank_one(label, gid="x", parity=0):
    """Convenience complex Z in one parity with zero differential."""
    return FreeComplex(label, [(gid, parity)], {})
