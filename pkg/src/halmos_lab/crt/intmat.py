"""Exact integer matrix arithmetic: Smith normal form, lattices, kernels.

Matrices are lists of rows of Python ints, so nothing ever overflows.
Shapes are tracked explicitly because zero-row / zero-column matrices are
common when graded groups vanish in a degree.
"""

from __future__ import annotations


class IMat:
    """Dense integer matrix with explicit (possibly zero) shape."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data=None):
        self.rows = int(rows)
        self.cols = int(cols)
        if data is None:
            self.data = [[0] * self.cols for _ in range(self.rows)]
        else:
            self.data = [[int(v) for v in row] for row in data]
            if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
                raise ValueError("data shape mismatch")

    @classmethod
    def from_rows(cls, data) -> "IMat":
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, data)

    @classmethod
    def identity(cls, n: int) -> "IMat":
        m = cls(n, n)
        for i in range(n):
            m.data[i][i] = 1
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IMat":
        return cls(rows, cols)

    def copy(self) -> "IMat":
        return IMat(self.rows, self.cols, self.data)

    def __eq__(self, other) -> bool:
        return (isinstance(other, IMat) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        return f"IMat({self.rows}x{self.cols}, {self.data})"

    def __matmul__(self, other: "IMat") -> "IMat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = IMat(self.rows, other.cols)
        for i in range(self.rows):
            ai = self.data[i]
            oi = out.data[i]
            for k in range(self.cols):
                a = ai[k]
                if a:
                    bk = other.data[k]
                    for j in range(other.cols):
                        oi[j] += a * bk[j]
        return out

    def __add__(self, other: "IMat") -> "IMat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in add")
        return IMat(self.rows, self.cols,
                    [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other: "IMat") -> "IMat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in sub")
        return IMat(self.rows, self.cols,
                    [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)])

    def scale(self, k: int) -> "IMat":
        return IMat(self.rows, self.cols, [[k * v for v in row] for row in self.data])

    def transpose(self) -> "IMat":
        return IMat(self.cols, self.rows,
                    [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def column(self, j: int) -> list:
        return [self.data[i][j] for i in range(self.rows)]

    def hstack(self, other: "IMat") -> "IMat":
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return IMat(self.rows, self.cols + other.cols,
                    [ra + rb for ra, rb in zip(self.data, other.data)])

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.data for v in row)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("det needs a square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [row[:] for row in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def smith_normal_form(m: IMat) -> tuple[IMat, IMat, IMat]:
    """Return unimodular (U, D, V) with U @ M @ V = D.

    D is diagonal with d_1 | d_2 | ... | d_r >= 1 followed by zeros; U and V
    have determinant +-1.
    """
    a = m.copy()
    u = IMat.identity(a.rows)
    v = IMat.identity(a.cols)

    def swap_rows(i, j):
        if i != j:
            a.data[i], a.data[j] = a.data[j], a.data[i]
            u.data[i], u.data[j] = u.data[j], u.data[i]

    def swap_cols(i, j):
        if i != j:
            for row in a.data:
                row[i], row[j] = row[j], row[i]
            for row in v.data:
                row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, k):
        # row_dst += k * row_src    (applied to a and u alike)
        if k:
            a.data[dst] = [x + k * y for x, y in zip(a.data[dst], a.data[src])]
            u.data[dst] = [x + k * y for x, y in zip(u.data[dst], u.data[src])]

    def addmul_col(dst, src, k):
        if k:
            for row in a.data:
                row[dst] += k * row[src]
            for row in v.data:
                row[dst] += k * row[src]

    def negate_row(i):
        a.data[i] = [-x for x in a.data[i]]
        u.data[i] = [-x for x in u.data[i]]

    n = min(a.rows, a.cols)
    t = 0
    while t < n:
        # find a pivot of smallest absolute value in the trailing block
        piv = None
        best = None
        for i in range(t, a.rows):
            for j in range(t, a.cols):
                val = abs(a.data[i][j])
                if val and (best is None or val < best):
                    best = val
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, a.rows):
                if a.data[i][t]:
                    q = a.data[i][t] // a.data[t][t]
                    addmul_row(i, t, -q)
                    if a.data[i][t]:
                        swap_rows(t, i)
                        dirty = True
            # clear row t
            for j in range(t + 1, a.cols):
                if a.data[t][j]:
                    q = a.data[t][j] // a.data[t][t]
                    addmul_col(j, t, -q)
                    if a.data[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                col_clean = all(a.data[i][t] == 0 for i in range(t + 1, a.rows))
                row_clean = all(a.data[t][j] == 0 for j in range(t + 1, a.cols))
                if col_clean and row_clean:
                    break
        # force pivot to divide the remaining block
        pivot = a.data[t][t]
        offender = None
        for i in range(t + 1, a.rows):
            for j in range(t + 1, a.cols):
                if a.data[i][j] % pivot:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            addmul_row(t, offender, 1)
            continue_outer = True
        else:
            continue_outer = False
        if continue_outer:
            continue
        if a.data[t][t] < 0:
            negate_row(t)
        t += 1
    # sort nonzero pivots ascending (divisibility already enforced keeps chain valid)
    return u, a, v


def diagonal_of(d: IMat) -> list:
    return [d.data[i][i] for i in range(min(d.rows, d.cols))]


def solve_integer(a: IMat, b: list) -> list | None:
    """One integer solution x of A x = b, or None if none exists."""
    u, d, v = smith_normal_form(a)
    ub = [sum(u.data[i][k] * b[k] for k in range(a.rows)) for i in range(a.rows)]
    y = [0] * a.cols
    rank = 0
    for i in range(min(a.rows, a.cols)):
        di = d.data[i][i]
        if di:
            rank = i + 1
    for i in range(a.rows):
        di = d.data[i][i] if i < min(a.rows, a.cols) else 0
        if i < rank:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
        elif ub[i]:
            return None
    return [sum(v.data[i][k] * y[k] for k in range(a.cols)) for i in range(a.cols)]


def kernel_basis(a: IMat) -> IMat:
    """Columns form a basis of the integer kernel {x : A x = 0}."""
    u, d, v = smith_normal_form(a)
    free = []
    for j in range(a.cols):
        dj = d.data[j][j] if j < min(a.rows, a.cols) else 0
        if dj == 0:
            free.append(j)
    out = IMat(a.cols, len(free))
    for idx, j in enumerate(free):
        col = v.column(j)
        for i in range(a.cols):
            out.data[i][idx] = col[i]
    return out


def lattice_contains(basis: IMat, vec: list) -> bool:
    """Is vec in the column lattice of basis?"""
    return solve_integer(basis, list(vec)) is not None


def lattice_subset(a: IMat, b: IMat) -> bool:
    """Is the column lattice of a contained in the column lattice of b?"""
    for j in range(a.cols):
        if not lattice_contains(b, a.column(j)):
            return False
    return True


def lattice_equal(a: IMat, b: IMat) -> bool:
    return lattice_subset(a, b) and lattice_subset(b, a)


def unimodular_inverse(m: IMat) -> IMat:
    """Exact inverse of a square integer matrix with det +-1."""
    if m.rows != m.cols:
        raise ValueError("inverse needs a square matrix")
    n = m.rows
    det = m.det()
    if det not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det={det})")
    if n == 0:
        return IMat(0, 0)
    # adjugate / det; entries stay integral because det is a unit
    inv = IMat(n, n)
    for i in range(n):
        for j in range(n):
            minor = [[m.data[r][c] for c in range(n) if c != i]
                     for r in range(n) if r != j]
            cof = IMat.from_rows(minor).det() if n > 1 else 1
            inv.data[i][j] = det * ((-1) ** (i + j)) * cof
    return inv
