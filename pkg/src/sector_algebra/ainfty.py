"""Finite strictly-unital A-infinity categories over Z.

Composition is written forward: a word (g_1, ..., g_k) is composable when
tgt(g_i) = src(g_{i+1}), and mu^k sends it into hom(src(g_1), tgt(g_k)) with
parity shift k mod 2.  The stored mu^k are the shifted ("bar") operations:
every structure map is odd with respect to reduced parity ||g|| = |g| + 1,
and the A-infinity relations carry prefix Koszul signs over reduced parities

    sum_{n,m} (-1)^{||g_1|| + ... + ||g_n||}
        mu(g_1, ..., g_n, mu^m(g_{n+1}, ..., g_{n+m}), ..., g_k)  =  0.

Strict units obey mu^2(e, x) = x and mu^2(x, e) = (-1)^{|x|} x, and kill all
other mu^k.  A dg category embeds via mu^2(x, y) = (-1)^{|x|} x.y.  See
docs/conventions.md for the full sign table and its consistency tests.
"""

from __future__ import annotations

import random

from .exactchains import ChainError, ChainMap, FreeComplex
from .intlinalg import IntMatrix, smith_normal_form, kernel_basis, solve, stack_columns


class StructureError(Exception):
    """Raised for malformed A-infinity data (non-composable words, parity)."""


class Report:
    """Outcome of a verification pass: a list of named violations."""

    def __init__(self, title):
        self.title = title
        self.violations = []

    def add(self, kind, detail):
        self.violations.append({"kind": kind, "detail": detail})

    @property
    def ok(self):
        return not self.violations

    def as_dict(self):
        return {"title": self.title, "ok": self.ok, "violations": list(self.violations)}

    def __repr__(self):
        state = "pass" if self.ok else f"{len(self.violations)} violations"
        return f"Report({self.title!r}: {state})"


def _word_str(word):
    return " . ".join(f"{g[2]}:{g[0]}->{g[1]}" for g in word)


class AInftyCategory:
    """Directed strictly-unital A-infinity category with sparse higher products.

    objects: ordered list of hashable labels.
    order: set of pairs (X, Y) meaning X > Y; must be a strict partial order.
    hom: dict (X, Y) -> FreeComplex (missing pairs are zero).
    mu: dict word-tuple -> {generator: int} for word length >= 2; generators
        are handles (src, tgt, id).  mu^1 is the hom differential.
    units: dict X -> generator id of the strict unit in hom(X, X).
    """

    def __init__(self, label, objects, order, hom, mu, units, directed=True,
                 populate_unit_actions=True):
        self.label = label
        self.objects = list(objects)
        oset = set(self.objects)
        self.order = set(order)
        for x, y in self.order:
            if x not in oset or y not in oset:
                raise StructureError(f"{label}: order relation on unknown objects ({x},{y})")
            if (y, x) in self.order or x == y:
                raise StructureError(f"{label}: order is not strict")
        for x, y in list(self.order):
            for y2, z in self.order:
                if y2 == y and (x, z) not in self.order and x != z:
                    raise StructureError(f"{label}: order not transitive at {x}>{y}>{z}")
        self.hom = dict(hom)
        for (x, y), cx in self.hom.items():
            if x not in oset or y not in oset:
                raise StructureError(f"{label}: hom pair ({x},{y}) on unknown objects")
        self.units = dict(units)
        for x in self.objects:
            if x not in self.units:
                raise StructureError(f"{label}: object {x} has no designated unit")
            e = self.units[x]
            cx = self.hom.get((x, x))
            if cx is None or e not in cx.index:
                raise StructureError(f"{label}: unit {e} missing from hom({x},{x})")
            if cx.parity_of(e) != 0:
                raise StructureError(f"{label}: unit {e} must have parity 0")
        self.directed = directed
        if directed:
            self._check_directedness()
        self.mu = {}
        for word, out in mu.items():
            self._validate_mu_entry(word, out)
            clean = {g: c for g, c in out.items() if c}
            if clean:
                self.mu[tuple(word)] = clean
        if populate_unit_actions:
            self._populate_unit_actions()
        self.interaction_bound = max((len(w) for w in self.mu), default=2)

    # -- structural checks ---------------------------------------------------

    def _check_directedness(self):
        for (x, y), cx in self.hom.items():
            if cx.rank == 0:
                continue
            if x == y:
                if cx.rank != 1:
                    raise StructureError(
                        f"{self.label}: directed category needs hom({x},{x}) = Z.e"
                    )
            elif (x, y) not in self.order:
                raise StructureError(
                    f"{self.label}: nonzero hom({x},{y}) but not {x} > {y}"
                )

    def _validate_mu_entry(self, word, out):
        if len(word) < 2:
            raise StructureError(f"{self.label}: mu words must have length >= 2")
        for g in word:
            self._require_generator(g)
        for a, b in zip(word, word[1:]):
            if a[1] != b[0]:
                raise StructureError(
                    f"{self.label}: non-composable mu word {_word_str(word)}"
                )
        src, tgt = word[0][0], word[-1][1]
        want = (sum(self.parity(g) for g in word) + len(word)) % 2
        for g, c in out.items():
            self._require_generator(g)
            if (g[0], g[1]) != (src, tgt):
                raise StructureError(
                    f"{self.label}: mu output {g} outside hom({src},{tgt})"
                )
            if self.parity(g) != want:
                raise StructureError(
                    f"{self.label}: mu({_word_str(word)}) has wrong output parity"
                )

    def _require_generator(self, g):
        x, y, name = g
        cx = self.hom.get((x, y))
        if cx is None or name not in cx.index:
            raise StructureError(f"{self.label}: unknown generator {g}")

    def _populate_unit_actions(self):
        for (x, y), cx in self.hom.items():
            ex = self.unit_gen(x)
            ey = self.unit_gen(y)
            for name, p in cx.generators:
                g = (x, y, name)
                left = (ex, g)
                if left not in self.mu:
                    self.mu[left] = {g: 1}
                right = (g, ey)
                if right not in self.mu:
                    self.mu[right] = {g: -1 if p else 1}

    # -- basic access ----------------------------------------------------------

    def unit_gen(self, x):
        return (x, x, self.units[x])

    def is_unit(self, g):
        return g[0] == g[1] and self.units.get(g[0]) == g[2]

    def parity(self, g):
        return self.hom[(g[0], g[1])].parity_of(g[2])

    def qparity(self, g):
        """Reduced parity |g| + 1 mod 2, the Koszul weight of a letter."""
        return (self.parity(g) + 1) % 2

    def generators(self, pair=None):
        if pair is not None:
            cx = self.hom.get(pair)
            if cx is None:
                return []
            return [(pair[0], pair[1], name) for name, _ in cx.generators]
        out = []
        for x in self.objects:
            for y in self.objects:
                out.extend(self.generators((x, y)))
        return out

    def hom_pairs(self):
        return [
            (x, y)
            for x in self.objects
            for y in self.objects
            if self.hom.get((x, y)) is not None and self.hom[(x, y)].rank
        ]

    def d_of(self, g):
        """mu^1 of a generator, as {generator: coeff}."""
        cx = self.hom[(g[0], g[1])]
        out = {}
        for t, c in cx.differential_of(cx.index[g[2]]).items():
            out[(g[0], g[1], cx.generators[t][0])] = c
        return out

    def mu_of_word(self, word):
        """mu^k of a generator word, as {generator: coeff}; absent = 0."""
        if len(word) == 1:
            return self.d_of(word[0])
        return dict(self.mu.get(tuple(word), {}))

    def mu_eval(self, slots):
        """Evaluate mu on a word of linear combinations {gen: coeff}."""
        words = [((), 1)]
        for slot in slots:
            new = []
            for prefix, coeff in words:
                for g, c in slot.items():
                    new.append((prefix + (g,), coeff * c))
            words = new
        acc = {}
        for word, coeff in words:
            for g, c in self.mu_of_word(word).items():
                acc[g] = acc.get(g, 0) + coeff * c
        return {g: c for g, c in acc.items() if c}

    def composable_words(self, max_len, include_units=True):
        """All composable generator words of length 1..max_len, in stable order."""
        gens = self.generators()
        if not include_units:
            gens = [g for g in gens if not self.is_unit(g)]
        by_src = {}
        for g in gens:
            by_src.setdefault(g[0], []).append(g)
        out = []
        frontier = [(g,) for g in gens]
        out.extend(frontier)
        for _ in range(max_len - 1):
            new = []
            for w in frontier:
                for g in by_src.get(w[-1][1], ()):
                    new.append(w + (g,))
            out.extend(new)
            frontier = new
            if not frontier:
                break
        return out

    def relation_residual(self, word):
        """A-infinity relation instance on a word: zero dict iff satisfied."""
        k = len(word)
        acc = {}
        sign = 1
        for n in range(k):
            for m in range(1, k - n + 1):
                inner = self.mu_of_word(word[n:n + m])
                if not inner:
                    continue
                for g, c in inner.items():
                    outer_word = word[:n] + (g,) + word[n + m:]
                    if len(outer_word) == 0:
                        continue
                    for h, c2 in self.mu_of_word(outer_word).items():
                        v = sign * c * c2
                        acc[h] = acc.get(h, 0) + v
            sign *= -1 if self.qparity(word[n]) else 1
        return {g: c for g, c in acc.items() if c}

    def __repr__(self):
        return f"AInftyCategory({self.label!r}, {len(self.objects)} objects)"


def check_ainfty(cat, max_len):
    """Evaluate every A-infinity relation instance on words of length <= max_len."""
    if max_len < 1:
        raise StructureError("max_len must be >= 1")
    report = Report(f"A-infinity relations for {cat.label} (length <= {max_len})")
    for word in cat.composable_words(max_len):
        res = cat.relation_residual(word)
        if res:
            report.add(
                "relation",
                {
                    "word": _word_str(word),
                    "residual": sorted((g[2], c) for g, c in res.items()),
                },
            )
    return report


def check_strict_units(cat):
    """Verify the three strict-unit clauses on every generator."""
    report = Report(f"strict units for {cat.label}")
    for x in cat.objects:
        e = cat.unit_gen(x)
        if cat.d_of(e):
            report.add("unit-not-cycle", {"object": x})
    for (x, y) in cat.hom_pairs():
        ex, ey = cat.unit_gen(x), cat.unit_gen(y)
        for g in cat.generators((x, y)):
            left = cat.mu_of_word((ex, g))
            if left != {g: 1}:
                report.add("left-unit", {"generator": g[2], "pair": [x, y]})
            want = -1 if cat.parity(g) else 1
            right = cat.mu_of_word((g, ey))
            if right != {g: want}:
                report.add("right-unit", {"generator": g[2], "pair": [x, y]})
    for word in cat.mu:
        if len(word) >= 3 and any(cat.is_unit(g) for g in word):
            if cat.mu[word]:
                report.add(
                    "higher-mu-with-unit",
                    {"word": _word_str(word), "length": len(word)},
                )
    return report


class HomologyBasis:
    """Chosen cycle representatives for the homology of a FreeComplex.

    Classes are listed in Smith-normal-form order (free classes after the
    torsion classes of the presentation); ties in representative choice are
    resolved by lowest generator index.
    """

    def __init__(self, cx, parity):
        self.cx = cx
        self.parity = parity
        src = [k for k in range(cx.rank) if cx.parities[k] == parity]
        tgt = [k for k in range(cx.rank) if cx.parities[k] == (parity + 1) % 2]
        spos = {k: a for a, k in enumerate(src)}
        tpos = {k: a for a, k in enumerate(tgt)}
        d_out = IntMatrix(
            len(tgt), len(src),
            {(tpos[t], spos[s]): c for (t, s), c in cx.diff.items() if cx.parities[s] == parity},
        )
        d_in = IntMatrix(
            len(src), len(tgt),
            {(spos[t], tpos[s]): c for (t, s), c in cx.diff.items() if cx.parities[s] != parity},
        )
        self._src = src
        ker = kernel_basis(d_out)
        self._kmat = stack_columns(ker, len(src))
        cols = []
        for j in range(d_in.cols):
            col = d_in.column(j)
            if col:
                x = solve(self._kmat, col)
                if x is None:
                    raise ChainError("boundary outside kernel lattice")
                cols.append(x)
        rel = stack_columns(cols, len(ker))
        u, s, _ = smith_normal_form(rel)
        # basis of the kernel adapted to the relations: K' = K U^{-1}; class i
        # has order s_i (0 beyond the rank, meaning free)
        uinv = _unimodular_inverse(u)
        self._umat = u
        self.orders = []
        self.reps = []
        for i in range(len(ker)):
            d = s[(i, i)] if i < min(rel.rows, rel.cols) else 0
            if d == 1:
                continue
            col = uinv.column(i)
            rep = {}
            for a, c in col.items():
                for k, kc in self._kmat.column(a).items():
                    rep[src[k]] = rep.get(src[k], 0) + c * kc
            self.orders.append(abs(d))
            self.reps.append({k: v for k, v in rep.items() if v})
        self._kept = [
            i for i in range(len(ker))
            if (s[(i, i)] if i < min(rel.rows, rel.cols) else 0) != 1
        ]

    def express(self, vec):
        """Coordinates of a cycle's class in this basis, or None if not a cycle.

        Torsion coordinates are reduced mod the class order.
        """
        local = {}
        for k, c in vec.items():
            if self.cx.parities[k] != self.parity:
                if c:
                    return None
            else:
                pass
        spos = {k: a for a, k in enumerate(self._src)}
        col = {}
        for k, c in vec.items():
            if c:
                if k not in spos:
                    return None
                col[spos[k]] = c
        y = solve(self._kmat, col)
        if y is None:
            return None
        coords_full = self._umat.apply(y)
        out = []
        for pos, i in enumerate(self._kept):
            c = coords_full.get(i, 0)
            d = self.orders[pos]
            out.append(c % d if d else c)
        return out

    def is_boundary(self, vec):
        coords = self.express(vec)
        return coords is not None and all(c == 0 for c in coords)


def _unimodular_inverse(u):
    """Exact inverse of a unimodular matrix via linear solves."""
    n = u.rows
    cols = []
    for j in range(n):
        x = solve(u, {j: 1})
        if x is None:
            raise ChainError("matrix is not unimodular")
        cols.append(x)
    return stack_columns(cols, n)


def cohomology_category(cat, max_len=6):
    """Homology of each hom complex plus the induced binary product.

    The product on classes is m(x, y) = (-1)^{|x|} mu^2(x, y), the untwisted
    composition, which is unital and associative on homology.  Representative
    independence is verified by exhaustive boundary adjustment.
    """
    rep = check_ainfty(cat, min(max_len, 4))
    if not rep.ok:
        raise StructureError(f"{cat.label}: relations fail, refusing cohomology")
    bases = {}
    table = {"pairs": {}, "products": {}, "rep_independence_failures": []}
    for (x, y) in cat.hom_pairs():
        cx = cat.hom[(x, y)]
        bases[(x, y)] = (HomologyBasis(cx, 0), HomologyBasis(cx, 1))
        table["pairs"][(x, y)] = cx.homology()

    def to_vec(pair, comb):
        cx = cat.hom[pair]
        return {cx.index[g[2]]: c for g, c in comb.items()}

    def product(pair1, pair2, v1, p1, v2):
        cx1, cx2 = cat.hom[pair1], cat.hom[pair2]
        slot1 = {(pair1[0], pair1[1], cx1.generators[k][0]): c for k, c in v1.items()}
        slot2 = {(pair2[0], pair2[1], cx2.generators[k][0]): c for k, c in v2.items()}
        out = cat.mu_eval([slot1, slot2])
        sign = -1 if p1 else 1
        return {g: sign * c for g, c in out.items()}

    for (x, y) in cat.hom_pairs():
        for (y2, z) in cat.hom_pairs():
            if y2 != y:
                continue
            tgt_pair = (x, z)
            if tgt_pair not in bases:
                continue
            for p1 in (0, 1):
                b1 = bases[(x, y)][p1]
                for p2 in (0, 1):
                    b2 = bases[(y, z)][p2]
                    bt = bases[tgt_pair][(p1 + p2) % 2]
                    for i, r1 in enumerate(b1.reps):
                        for j, r2 in enumerate(b2.reps):
                            prod = product((x, y), (y, z), r1, p1, r2)
                            coords = bt.express(to_vec(tgt_pair, prod))
                            key = ((x, y, p1, i), (y, z, p2, j))
                            table["products"][key] = coords
                    # representative independence: boundaries multiply to zero
                    cx1 = cat.hom[(x, y)]
                    for k in range(cx1.rank):
                        if cx1.parities[k] != (p1 + 1) % 2:
                            continue
                        dv = cx1.d_apply({k: 1})
                        if not dv:
                            continue
                        for j, r2 in enumerate(b2.reps):
                            prod = product((x, y), (y, z), dv, p1, r2)
                            if prod and not bt.is_boundary(to_vec(tgt_pair, prod)):
                                table["rep_independence_failures"].append(
                                    ((x, y), (y, z), "left", k, j)
                                )
    return table


# -- curated examples ----------------------------------------------------------


def unit_category(label="unit"):
    hom = {("*", "*"): FreeComplex("end(*)", [("e", 0)], {})}
    return AInftyCategory(label, ["*"], set(), hom, {}, {"*": "e"})


def quiver_path_category(p, label=None):
    """Path category of the linear quiver 0 -> 1 -> ... -> p.

    Objects L0 > L1 > ... > Lp; hom(Li, Lj) for i < j is Z on the single path.
    All differentials vanish; mu^2 concatenates paths.
    """
    label = label or f"A{p + 1}-quiver"
    objects = [f"L{i}" for i in range(p + 1)]
    order = {(f"L{i}", f"L{j}") for i in range(p + 1) for j in range(i + 1, p + 1)}
    hom = {}
    for i in range(p + 1):
        hom[(f"L{i}", f"L{i}")] = FreeComplex(f"end(L{i})", [("e", 0)], {})
        for j in range(i + 1, p + 1):
            hom[(f"L{i}", f"L{j}")] = FreeComplex(f"hom(L{i},L{j})", [(f"a{i}{j}", 0)], {})
    mu = {}
    for i in range(p + 1):
        for j in range(i + 1, p + 1):
            for k in range(j + 1, p + 1):
                word = ((f"L{i}", f"L{j}", f"a{i}{j}"), (f"L{j}", f"L{k}", f"a{j}{k}"))
                mu[word] = {(f"L{i}", f"L{k}", f"a{i}{k}"): 1}
    units = {f"L{i}": "e" for i in range(p + 1)}
    return AInftyCategory(label, objects, order, hom, mu, units)


def mu3_category(label="mu3-example"):
    """Directed four-object category whose only higher product is one mu^3."""
    objects = ["W", "X", "Y", "Z"]
    order = {(a, b) for i, a in enumerate(objects) for b in objects[i + 1:]}
    hom = {
        ("W", "W"): FreeComplex("end(W)", [("e", 0)], {}),
        ("X", "X"): FreeComplex("end(X)", [("e", 0)], {}),
        ("Y", "Y"): FreeComplex("end(Y)", [("e", 0)], {}),
        ("Z", "Z"): FreeComplex("end(Z)", [("e", 0)], {}),
        ("W", "X"): FreeComplex("hom(W,X)", [("a", 0)], {}),
        ("X", "Y"): FreeComplex("hom(X,Y)", [("b", 0)], {}),
        ("Y", "Z"): FreeComplex("hom(Y,Z)", [("c", 0)], {}),
        ("W", "Z"): FreeComplex("hom(W,Z)", [("m", 1)], {}),
    }
    mu = {
        (("W", "X", "a"), ("X", "Y", "b"), ("Y", "Z", "c")): {("W", "Z", "m"): 1},
    }
    units = {x: "e" for x in objects}
    return AInftyCategory(label, objects, order, hom, mu, units)


def exceptional_collection(label="exceptional-collection"):
    """Three thimble-style objects: endomorphisms Z, one-way morphisms only.

    The composition mu^2(a, b) = 2 c0 feeds torsion into bar complexes.
    """
    objects = ["T1", "T2", "T3"]
    order = {("T1", "T2"), ("T2", "T3"), ("T1", "T3")}
    hom = {
        ("T1", "T1"): FreeComplex("end(T1)", [("e", 0)], {}),
        ("T2", "T2"): FreeComplex("end(T2)", [("e", 0)], {}),
        ("T3", "T3"): FreeComplex("end(T3)", [("e", 0)], {}),
        ("T1", "T2"): FreeComplex("hom(T1,T2)", [("a", 0), ("a1", 1)], {}),
        ("T2", "T3"): FreeComplex("hom(T2,T3)", [("b", 0)], {}),
        ("T1", "T3"): FreeComplex("hom(T1,T3)", [("c0", 0), ("c1", 1)], {}),
    }
    mu = {
        (("T1", "T2", "a"), ("T2", "T3", "b")): {("T1", "T3", "c0"): 2},
        (("T1", "T2", "a1"), ("T2", "T3", "b")): {("T1", "T3", "c1"): 1},
    }
    units = {x: "e" for x in objects}
    return AInftyCategory(label, objects, order, hom, mu, units)


def example_library():
    """Curated categories used across the test corpus."""
    lib = {"unit": unit_category()}
    for p in range(1, 5):
        cat = quiver_path_category(p)
        lib[cat.label] = cat
    lib["mu3-example"] = mu3_category()
    lib["exceptional-collection"] = exceptional_collection()
    return lib


def random_directed_dg(seed, n_objects=3, max_rank=3):
    """Seeded random directed dg category (mu^k = 0 for k >= 3).

    Path category of a random acyclic quiver on a linear order, with random
    parities on edges and differentials sending odd edges to integer
    combinations of parallel all-even paths; d^2 = 0 holds by Leibniz.
    Deterministic per seed; hom ranks are capped at max_rank by retrying.
    """
    if not (1 <= n_objects <= 5):
        raise StructureError("n_objects must be between 1 and 5")
    if not (1 <= max_rank <= 3):
        raise StructureError("max_rank must be between 1 and 3")
    rng = random.Random(seed)
    objects = [f"O{i}" for i in range(n_objects)]
    order = {(f"O{i}", f"O{j}") for i in range(n_objects) for j in range(i + 1, n_objects)}
    for attempt in range(200):
        edges = []
        for i in range(n_objects):
            for j in range(i + 1, n_objects):
                count = 0
                density = 0.7 if j == i + 1 else 0.25
                for _ in range(max_rank):
                    if rng.random() < density:
                        edges.append((i, j, f"x{i}{j}n{count}", rng.randint(0, 1)))
                        count += 1
        # paths between each pair, as tuples of edge indices
        by_src = {}
        for idx, (i, j, name, par) in enumerate(edges):
            by_src.setdefault(i, []).append(idx)
        all_paths = {}

        def gen_paths(i):
            # all paths starting at i, by DFS
            stack = [((idx,), edges[idx][1]) for idx in by_src.get(i, ())]
            while stack:
                path, at = stack.pop()
                all_paths.setdefault((i, at), []).append(path)
                for idx in by_src.get(at, ()):
                    stack.append((path + (idx,), edges[idx][1]))

        for i in range(n_objects):
            gen_paths(i)
        for key in all_paths:
            all_paths[key].sort()
        if any(len(v) > max_rank for v in all_paths.values()):
            continue
        return _build_dg_from_quiver(
            f"random-dg-{seed}", objects, order, edges, all_paths, rng
        )
    raise StructureError("could not meet the rank bound; lower the density")


def _build_dg_from_quiver(label, objects, order, edges, all_paths, rng):
    def path_parity(path):
        return sum(edges[idx][3] for idx in path) % 2

    def path_name(path):
        return "*".join(edges[idx][2] for idx in path)

    hom = {}
    for x in objects:
        hom[(x, x)] = FreeComplex(f"end({x})", [("e", 0)], {})
    for (i, j), plist in sorted(all_paths.items()):
        gens = [(path_name(p), path_parity(p)) for p in plist]
        hom[(objects[i], objects[j])] = FreeComplex(
            f"hom({objects[i]},{objects[j]})", gens, {}, check=False
        )
    # differential on edges: odd edges map to combinations of all-even
    # parallel paths; extended to path generators by the Leibniz rule
    d_edge = {}
    for idx, (i, j, name, par) in enumerate(edges):
        if par != 1:
            continue
        targets = [
            p for p in all_paths.get((i, j), [])
            if path_parity(p) == 0 and p != (idx,)
        ]
        if targets and rng.random() < 0.8:
            d_edge[idx] = {p: rng.choice([-2, -1, 1, 2]) for p in targets if rng.random() < 0.7}
            d_edge[idx] = {p: c for p, c in d_edge[idx].items() if c}

    def d_path(path):
        out = {}
        sign = 1
        for pos, idx in enumerate(path):
            for tgt, c in d_edge.get(idx, {}).items():
                new = path[:pos] + tgt + path[pos + 1:]
                out[new] = out.get(new, 0) + sign * c
            sign *= -1 if edges[idx][3] else 1
        return out

    diffs = {}
    for (i, j), plist in sorted(all_paths.items()):
        cx = hom[(objects[i], objects[j])]
        data = {}
        for p in plist:
            s = cx.index[path_name(p)]
            for tgt, c in d_path(p).items():
                data[(cx.index[path_name(tgt)], s)] = data.get(
                    (cx.index[path_name(tgt)], s), 0
                ) + c
        diffs[(i, j)] = data
    for (i, j), data in diffs.items():
        x, y = objects[i], objects[j]
        old = hom[(x, y)]
        hom[(x, y)] = FreeComplex(old.label, old.generators, data)
    # mu^2: concatenation with the dg twist (-1)^{|x|}
    mu = {}
    for (i, j), pl1 in sorted(all_paths.items()):
        for (j2, k), pl2 in sorted(all_paths.items()):
            if j2 != j:
                continue
            for p1 in pl1:
                for p2 in pl2:
                    g1 = (objects[i], objects[j], path_name(p1))
                    g2 = (objects[j], objects[k], path_name(p2))
                    out = (objects[i], objects[k], path_name(p1 + p2))
                    sign = -1 if path_parity(p1) else 1
                    mu[(g1, g2)] = {out: sign}
    units = {x: "e" for x in objects}
    return AInftyCategory(label, objects, order, hom, mu, units)


class AInftyFunctor:
    """Strict functor given by an object map and per-pair chain inclusions.

    Models the naive inclusions used for pullbacks: no higher terms, and the
    first-order maps must strictly intertwine every stored mu.
    """

    def __init__(self, source, target, object_map, first_order, check=True):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.first_order = dict(first_order)
        if check:
            self._check()

    def _check(self):
        for x in self.source.objects:
            if x not in self.object_map:
                raise StructureError(f"functor misses object {x}")
        for (x, y) in self.source.hom_pairs():
            if (x, y) not in self.first_order:
                raise StructureError(f"functor misses hom({x},{y})")
            f = self.first_order[(x, y)]
            if f.parity_shift != 0:
                raise StructureError("functor components must preserve parity")
        # strict compatibility with units and stored mu
        for x in self.source.objects:
            e = self.source.unit_gen(x)
            img = self.map_gen_comb({e: 1})
            te = self.target.unit_gen(self.object_map[x])
            if img != {te: 1}:
                raise StructureError(f"functor does not preserve the unit at {x}")
        for word in list(self.source.mu) + [
            (g,) for g in self.source.generators()
        ]:
            lhs = self.map_gen_comb(self.source.mu_of_word(word))
            slots = [self.map_gen_comb({g: 1}) for g in word]
            rhs = self.target.mu_eval(slots)
            if lhs != rhs:
                raise StructureError(
                    f"functor fails strict compatibility on {_word_str(word)}"
                )

    def map_gen(self, g):
        x, y, name = g
        f = self.first_order[(x, y)]
        src_cx = self.source.hom[(x, y)]
        tgt_pair = (self.object_map[x], self.object_map[y])
        tgt_cx = self.target.hom[tgt_pair]
        out = {}
        for t, c in f.apply({src_cx.index[name]: 1}).items():
            out[(tgt_pair[0], tgt_pair[1], tgt_cx.generators[t][0])] = c
        return out

    def map_gen_comb(self, comb):
        out = {}
        for g, c in comb.items():
            for h, c2 in self.map_gen(g).items():
                out[h] = out.get(h, 0) + c * c2
        return {g: c for g, c in out.items() if c}


def identity_functor(cat):
    fo = {
        pair: cat.hom[pair].identity_map()
        for pair in cat.hom_pairs()
    }
    return AInftyFunctor(cat, cat, {x: x for x in cat.objects}, fo)


def inclusion_functor(sub, amb, object_map=None):
    """Naive inclusion of a subcategory whose homs are subcomplex bases of amb."""
    omap = object_map or {x: x for x in sub.objects}
    fo = {}
    for (x, y) in sub.hom_pairs():
        scx = sub.hom[(x, y)]
        tcx = amb.hom[(omap[x], omap[y])]
        entries = {}
        for name, _ in scx.generators:
            entries[(tcx.index[name], scx.index[name])] = 1
        fo[(x, y)] = ChainMap(scx, tcx, entries)
    return AInftyFunctor(sub, amb, omap, fo)
