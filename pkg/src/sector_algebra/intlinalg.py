"""Exact integer matrix utilities: Smith normal form, kernels, linear solving.

Matrices are sparse dicts mapping (row, col) to nonzero Python ints, together
with explicit shapes.  All arithmetic is arbitrary precision; there are no
modular shortcuts anywhere.
"""

from __future__ import annotations


class IntMatrix:
    """Sparse integer matrix with exact arithmetic."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data=None):
        self.rows = rows
        self.cols = cols
        self.data = {}
        if data:
            for (i, j), v in data.items():
                if v:
                    if not (0 <= i < rows and 0 <= j < cols):
                        raise ValueError(f"entry ({i},{j}) out of shape {rows}x{cols}")
                    self.data[(i, j)] = v

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_rows(cls, rowlist):
        rows = len(rowlist)
        cols = len(rowlist[0]) if rows else 0
        data = {}
        for i, row in enumerate(rowlist):
            if len(row) != cols:
                raise ValueError("ragged row list")
            for j, v in enumerate(row):
                if v:
                    data[(i, j)] = v
        return cls(rows, cols, data)

    def to_rows(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.data.items():
            out[i][j] = v
        return out

    def __getitem__(self, key):
        return self.data.get(key, 0)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {len(self.data)} entries)"

    def is_zero(self):
        return not self.data

    def transpose(self):
        return IntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.data.items()})

    def __add__(self, other):
        data = dict(self.data)
        for k, v in other.data.items():
            data[k] = data.get(k, 0) + v
        return IntMatrix(self.rows, self.cols, data)

    def __sub__(self, other):
        data = dict(self.data)
        for k, v in other.data.items():
            data[k] = data.get(k, 0) - v
        return IntMatrix(self.rows, self.cols, data)

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, {k: -v for k, v in self.data.items()})

    def scale(self, c):
        return IntMatrix(self.rows, self.cols, {k: c * v for k, v in self.data.items()})

    def __mul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        by_row = {}
        for (i, k), v in self.data.items():
            by_row.setdefault(i, []).append((k, v))
        by_k = {}
        for (k, j), w in other.data.items():
            by_k.setdefault(k, []).append((j, w))
        data = {}
        for i, pairs in by_row.items():
            acc = {}
            for k, v in pairs:
                for j, w in by_k.get(k, ()):
                    acc[j] = acc.get(j, 0) + v * w
            for j, s in acc.items():
                if s:
                    data[(i, j)] = s
        return IntMatrix(self.rows, other.cols, data)

    def column(self, j):
        return {i: v for (i, jj), v in self.data.items() if jj == j}

    def apply(self, vec):
        """Apply to a sparse column vector {index: coeff}."""
        out = {}
        for (i, j), v in self.data.items():
            c = vec.get(j, 0)
            if c:
                out[i] = out.get(i, 0) + v * c
        return {i: c for i, c in out.items() if c}


class _SNFWork:
    """Mutable dense workspace for the Smith reduction, tracking U and V."""

    def __init__(self, m):
        self.m = m.to_rows()
        self.rows = m.rows
        self.cols = m.cols
        self.u = IntMatrix.identity(m.rows).to_rows()
        self.v = IntMatrix.identity(m.cols).to_rows()

    def swap_rows(self, a, b):
        if a != b:
            self.m[a], self.m[b] = self.m[b], self.m[a]
            self.u[a], self.u[b] = self.u[b], self.u[a]

    def swap_cols(self, a, b):
        if a != b:
            for row in self.m:
                row[a], row[b] = row[b], row[a]
            for row in self.v:
                row[a], row[b] = row[b], row[a]

    def add_row(self, src, dst, c):
        if c:
            msrc, mdst = self.m[src], self.m[dst]
            for j in range(self.cols):
                mdst[j] += c * msrc[j]
            usrc, udst = self.u[src], self.u[dst]
            for j in range(self.rows):
                udst[j] += c * usrc[j]

    def add_col(self, src, dst, c):
        if c:
            for row in self.m:
                row[dst] += c * row[src]
            for row in self.v:
                row[dst] += c * row[src]

    def negate_row(self, a):
        self.m[a] = [-x for x in self.m[a]]
        self.u[a] = [-x for x in self.u[a]]


def smith_normal_form(m, verify=True):
    """Compute U, S, V with U*m*V = S, S diagonal with d_1 | d_2 | ...

    U and V are unimodular.  Pivots are chosen as the smallest-magnitude
    nonzero entry, ties broken by (row, column) order, so the output is
    deterministic.  When verify is set the postcondition U*m*V = S is
    re-checked exactly before returning.
    """
    w = _SNFWork(m)
    t = 0
    limit = min(w.rows, w.cols)
    while t < limit:
        # global smallest-magnitude pivot in the trailing submatrix,
        # deterministic tie-break by (row, column)
        pivot = None
        best = None
        for i in range(t, w.rows):
            row = w.m[i]
            for j in range(t, w.cols):
                v = row[j]
                if v:
                    a = abs(v)
                    if best is None or a < best:
                        best = a
                        pivot = (i, j)
            if best == 1:
                break
        if pivot is None:
            break
        w.swap_rows(t, pivot[0])
        w.swap_cols(t, pivot[1])
        p = w.m[t][t]
        # single reduction step if something is not divisible by the pivot,
        # then reselect; the pivot magnitude strictly decreases each cycle
        stepped = False
        for i in range(t + 1, w.rows):
            v = w.m[i][t]
            if v % p:
                w.add_row(t, i, -(v // p))
                stepped = True
                break
        if stepped:
            continue
        for j in range(t + 1, w.cols):
            v = w.m[t][j]
            if v % p:
                w.add_col(t, j, -(v // p))
                stepped = True
                break
        if stepped:
            continue
        # everything in the cross is divisible: clear it exactly
        for i in range(t + 1, w.rows):
            v = w.m[i][t]
            if v:
                w.add_row(t, i, -(v // p))
        for j in range(t + 1, w.cols):
            v = w.m[t][j]
            if v:
                w.add_col(t, j, -(v // p))
        # pivot must divide the interior for the invariant-factor chain
        fold = None
        for i in range(t + 1, w.rows):
            row = w.m[i]
            for j in range(t + 1, w.cols):
                if row[j] % p:
                    fold = i
                    break
            if fold is not None:
                break
        if fold is not None:
            w.add_row(fold, t, 1)
            continue
        if p < 0:
            w.negate_row(t)
        t += 1

    def build(rowlist, rows, cols):
        data = {}
        for i, row in enumerate(rowlist):
            for j, val in enumerate(row):
                if val:
                    data[(i, j)] = val
        return IntMatrix(rows, cols, data)

    u = build(w.u, w.rows, w.rows)
    s = build(w.m, w.rows, w.cols)
    v = build(w.v, w.cols, w.cols)
    if verify:
        if u * m * v != s:
            raise AssertionError("SNF postcondition U*M*V = S failed")
        for (i, j) in s.data:
            if i != j:
                raise AssertionError("SNF output not diagonal")
        diag = [s[(k, k)] for k in range(min(s.rows, s.cols))]
        for a, b in zip(diag, diag[1:]):
            if a and b and b % a != 0:
                raise AssertionError("SNF divisibility chain violated")
    return u, s, v


def invariant_factors(m):
    """Nonzero diagonal entries of the Smith form of m."""
    _, s, _ = smith_normal_form(m)
    out = []
    for k in range(min(m.rows, m.cols)):
        d = s[(k, k)]
        if d:
            out.append(d)
    return out


def kernel_basis(m):
    """Basis (list of sparse {index: coeff} columns) of the integer kernel."""
    u, s, v = smith_normal_form(m)
    rank = sum(1 for k in range(min(m.rows, m.cols)) if s[(k, k)])
    basis = []
    for j in range(rank, m.cols):
        col = v.column(j)
        if col:
            basis.append(col)
        else:
            basis.append({})
    return basis


def solve(m, target):
    """One integer solution x of m x = target (sparse {index: coeff}), or None."""
    u, s, v = smith_normal_form(m)
    rhs = u.apply(target)
    y = {}
    for i, c in rhs.items():
        if i < min(m.rows, m.cols) and s[(i, i)]:
            d = s[(i, i)]
            if c % d != 0:
                return None
            y[i] = c // d
        elif c:
            return None
    return v.apply(y)


def stack_columns(columns, rows):
    """Assemble sparse column vectors into a matrix."""
    data = {}
    for j, col in enumerate(columns):
        for i, c in col.items():
            if c:
                data[(i, j)] = c
    return IntMatrix(rows, len(columns), data)
