"""Exact rational linear algebra and a Bland's-rule simplex solver.

Every scalar is a :class:`fractions.Fraction`.  Vectors are tuples of
fractions and matrices are wrapped in :class:`RatMatrix`.  Nothing in this
module ever touches a float.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Rational = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)

INFEASIBLE = "INFEASIBLE"
UNBOUNDED = "UNBOUNDED"
OPTIMAL = "OPTIMAL"


def Q(x) -> Fraction:
    """Coerce an int, a Fraction or a string like '3/4' to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted, pass a string or a Fraction")
    return Fraction(x)


def fmt(x) -> str:
    return str(Q(x))


def vec(xs) -> tuple:
    return tuple(Q(x) for x in xs)


def zeros(n: int) -> tuple:
    return (ZERO,) * n


def unit(n: int, i: int) -> tuple:
    return tuple(ONE if k == i else ZERO for k in range(n))


def dot(a, b) -> Fraction:
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def vadd(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a) -> tuple:
    return tuple(c * x for x in a)


def is_zero(a) -> bool:
    return not any(a)


def primitive(a) -> tuple:
    """Scale a nonzero rational vector to a coprime integer vector of the same direction."""
    den = 1
    for x in a:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in a]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(ZERO for _ in a)
    return tuple(Fraction(v // g) for v in ints)


def primitive_line(a) -> tuple:
    """Like primitive, with the first nonzero entry made positive."""
    p = primitive(a)
    for x in p:
        if x:
            return p if x > 0 else tuple(-y for y in p)
    return p


class RatMatrix:
    """Dense immutable matrix of Fractions.

    >>> RatMatrix([[1, 2], [3, 4]]).T.rows
    ((Fraction(1, 1), Fraction(3, 1)), (Fraction(2, 1), Fraction(4, 1)))
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols: Optional[int] = None):
        self.rows = tuple(vec(r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, m: int, n: int) -> "RatMatrix":
        return cls([[0] * n for _ in range(m)], n)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([unit(n, i) for i in range(n)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix([self.col(j) for j in range(self.ncols)], self.nrows)

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def cols(self):
        return [self.col(j) for j in range(self.ncols)]

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            oc = other.cols()
            return RatMatrix([[dot(r, c) for c in oc] for r in self.rows], other.ncols)
        v = vec(other)
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(dot(r, v) for r in self.rows)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix([vadd(a, b) for a, b in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix([vsub(a, b) for a, b in zip(self.rows, other.rows)], self.ncols)

    def scale(self, c) -> "RatMatrix":
        c = Q(c)
        return RatMatrix([vscale(c, r) for r in self.rows], self.ncols)

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix([a + b for a, b in zip(self.rows, other.rows)],
                         self.ncols + other.ncols)

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix(self.rows + other.rows, self.ncols)

    def select_rows(self, idx) -> "RatMatrix":
        return RatMatrix([self.rows[i] for i in idx], self.ncols)

    def select_cols(self, idx) -> "RatMatrix":
        idx = list(idx)
        return RatMatrix([[r[j] for j in idx] for r in self.rows], len(idx))

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.shape == other.shape \
            and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(fmt(x) for x in r) for r in self.rows)
        return f"RatMatrix({self.nrows}x{self.ncols}: [{body}])"

    def tolist(self):
        return [list(r) for r in self.rows]


def as_rows(M) -> list:
    if isinstance(M, RatMatrix):
        return list(M.rows)
    return [vec(r) for r in M]


def _int_rows(rows) -> list:
    out = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def rank(M) -> int:
    """Exact rank, computed by fraction-free elimination on integer rows."""
    rows = [r for r in _int_rows(as_rows(M)) if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for j in range(ncols):
        piv = None
        for i in range(rk, len(rows)):
            if rows[i][j]:
                piv = i
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        p = rows[rk]
        pj = p[j]
        for i in range(rk + 1, len(rows)):
            r = rows[i]
            c = r[j]
            if c:
                new = [pj * x - c * y for x, y in zip(r, p)]
                g = 0
                for v in new:
                    g = gcd(g, v)
                rows[i] = [v // g for v in new] if g > 1 else new
        rk += 1
        if rk == len(rows):
            break
    return rk


def rref(M, ncols: Optional[int] = None):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in as_rows(M)]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = []
    rk = 0
    for j in range(ncols):
        piv = None
        for i in range(rk, len(rows)):
            if rows[i][j]:
                piv = i
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        pr = rows[rk]
        inv = 1 / pr[j]
        pr = [x * inv for x in pr]
        rows[rk] = pr
        nz = [k for k, x in enumerate(pr) if x]
        for i in range(len(rows)):
            if i != rk:
                c = rows[i][j]
                if c:
                    r = rows[i]
                    for k in nz:
                        r[k] -= c * pr[k]
        pivots.append(j)
        rk += 1
        if rk == len(rows):
            break
    return [tuple(r) for r in rows[:rk]], pivots


def kernel_basis(M, ncols: Optional[int] = None) -> list:
    """Basis of {x : M x = 0}, one vector per free column of the RREF."""
    rows = as_rows(M)
    if ncols is None:
        if isinstance(M, RatMatrix):
            ncols = M.ncols
        elif rows:
            ncols = len(rows[0])
        else:
            raise ValueError("ncols is required for an empty matrix")
    R, piv = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for r, pj in zip(R, piv):
            x[pj] = -r[f]
        basis.append(tuple(x))
    return basis


def solve_affine(rows, rhs, ncols: int):
    """One solution of rows @ x = rhs, or None if the system is inconsistent."""
    aug = [tuple(r) + (Q(b),) for r, b in zip(rows, rhs)]
    R, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [ZERO] * ncols
    for r, pj in zip(R, piv):
        x[pj] = r[ncols]
    return tuple(x)


def in_span(v, gens) -> bool:
    gens = [g for g in gens if not is_zero(g)]
    if is_zero(v):
        return True
    if not gens:
        return False
    return rank(gens + [tuple(v)]) == rank(gens)


def span_basis(gens, dim: int) -> list:
    """Row basis of the span of gens, in RREF form."""
    gens = [g for g in gens if not is_zero(g)]
    if not gens:
        return []
    R, _ = rref(gens, dim)
    return R


def project_onto_span(v, gens, dim: int) -> tuple:
    """Orthogonal projection of v onto span(gens), exact."""
    B = span_basis(gens, dim)
    if not B:
        return zeros(dim)
    k = len(B)
    G = [[dot(B[i], B[j]) for j in range(k)] for i in range(k)]
    rhs = [dot(B[i], v) for i in range(k)]
    c = solve_affine(G, rhs, k)
    out = [ZERO] * dim
    for ci, b in zip(c, B):
        for t in range(dim):
            out[t] += ci * b[t]
    return tuple(out)


@dataclass(frozen=True)
class LinProgram:
    """max/min c.x over free variables x subject to eq, le and lt rows.

    Each row is a pair (coefficients, rhs).  Strict rows are only honoured
    by :func:`strict_feasible_point`.
    """

    nvars: int
    objective: tuple = ()
    eq: tuple = ()
    le: tuple = ()
    lt: tuple = ()

    def __post_init__(self):
        def norm(rows):
            out = []
            for a, b in rows:
                a = vec(a)
                if len(a) != self.nvars:
                    raise ValueError("row length does not match nvars")
                out.append((a, Q(b)))
            return tuple(out)

        obj = vec(self.objective) if len(self.objective) else zeros(self.nvars)
        if len(obj) != self.nvars:
            raise ValueError("objective length does not match nvars")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "eq", norm(self.eq))
        object.__setattr__(self, "le", norm(self.le))
        object.__setattr__(self, "lt", norm(self.lt))


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    point: Optional[tuple] = None
    tight: frozenset = field(default_factory=frozenset)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _pivot(T, r, j, objs):
    """Gauss-Jordan pivot on T[r][j]; objs are extra rows updated alike."""
    pr = T[r]
    inv = 1 / pr[j]
    if inv != 1:
        pr = [x * inv if x else x for x in pr]
        T[r] = pr
    nz = [k for k, x in enumerate(pr) if x]
    for row in T:
        if row is pr:
            continue
        c = row[j]
        if c:
            for k in nz:
                row[k] -= c * pr[k]
    for row in objs:
        c = row[j]
        if c:
            for k in nz:
                row[k] -= c * pr[k]


def _bland(T, basis, obj, ncols, allowed):
    """Maximise over the tableau; obj holds reduced costs (max: enter if > 0).

    Returns False when unbounded.  The last column of T and obj is the rhs.
    """
    while True:
        enter = None
        for j in range(ncols):
            if allowed[j] and obj[j] > 0:
                enter = j
                break
        if enter is None:
            return True
        best = None
        leave = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return False
        _pivot(T, leave, enter, [obj])
        basis[leave] = enter


def lp_solve(lp: LinProgram, sense: str = "max") -> LPResult:
    """Solve an LP exactly with a two-phase Bland's-rule simplex.

    Free variables are eliminated first by Gauss-Jordan pivots; the
    remaining problem lives on the slack variables of the le rows.
    """
    if lp.lt:
        raise ValueError("lp_solve does not accept strict rows")
    n = lp.nvars
    k = len(lp.le)
    ncols = n + k
    T = []
    for a, b in lp.eq:
        T.append(list(a) + [ZERO] * k + [b])
    for i, (a, b) in enumerate(lp.le):
        row = list(a) + [ZERO] * k + [b]
        row[n + i] = ONE
        T.append(row)
    sign = ONE if sense == "max" else -ONE
    # obj row holds reduced costs d and, in the last slot, minus the constant
    obj = [sign * c for c in lp.objective] + [ZERO] * k + [ZERO]

    free_rows = {}
    used = set()
    for j in range(n):
        r = None
        for i in range(len(T)):
            if i not in used and T[i][j]:
                r = i
                break
        if r is None:
            continue
        _pivot(T, r, j, [obj])
        used.add(r)
        free_rows[j] = r

    rest = [i for i in range(len(T)) if i not in used]
    # rows with no slack entries left are either trivial or contradictory
    S = []
    for i in rest:
        row = T[i]
        if not any(row[n:n + k]):
            if row[-1]:
                return LPResult(INFEASIBLE)
            continue
        S.append(row)
    m = len(S)
    for row in S:
        if row[-1] < 0:
            for t in range(len(row)):
                row[t] = -row[t]
    # phase 1 with one artificial per row; columns: slacks (n..n+k) then artificials
    total = ncols + m
    P = []
    for i, row in enumerate(S):
        P.append(row[:ncols] + [ONE if t == i else ZERO for t in range(m)] + [row[-1]])
    basis = [ncols + i for i in range(m)]
    ph1 = [ZERO] * (total + 1)
    for row in P:
        for t in range(ncols):
            ph1[t] += row[t]
        ph1[-1] += row[-1]
    objx = obj[:ncols] + [ZERO] * m + [obj[-1]]
    allowed = [False] * n + [True] * k + [True] * m
    # both objective rows must follow the pivots
    while True:
        enter = None
        for j in range(total):
            if allowed[j] and ph1[j] > 0:
                enter = j
                break
        if enter is None:
            break
        best = None
        leave = None
        for i, row in enumerate(P):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        _pivot(P, leave, enter, [ph1, objx])
        basis[leave] = enter
    if ph1[-1] != 0:
        return LPResult(INFEASIBLE)
    # drive artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(P):
        if basis[i] >= ncols:
            j = next((j for j in range(n, ncols) if P[i][j]), None)
            if j is None:
                del P[i]
                del basis[i]
                continue
            _pivot(P, i, j, [objx])
            basis[i] = j
        i += 1
    for j in range(ncols, total):
        allowed[j] = False
    # a free variable untouched by any row moves the objective freely
    for j in range(n):
        if j not in free_rows and objx[j]:
            return LPResult(UNBOUNDED)
    if not _bland(P, basis, objx, total, allowed):
        return LPResult(UNBOUNDED)

    s = [ZERO] * total
    for i, bj in enumerate(basis):
        s[bj] = P[i][-1]
    x = [ZERO] * n
    for j, r in free_rows.items():
        row = T[r]
        v = row[-1]
        for t in range(n, ncols):
            if row[t] and s[t]:
                v -= row[t] * s[t]
        x[j] = v
    x = tuple(x)
    value = dot(lp.objective, x)
    tight = frozenset(i for i in range(k) if s[n + i] == 0)
    return LPResult(OPTIMAL, value, x, tight)


def strict_feasible_point(lp: LinProgram) -> Optional[tuple]:
    """A point meeting every strict row strictly, or None.

    Maximises a slack t <= 1 with the strict rows relaxed to a.x + t <= b.
    """
    n = lp.nvars
    if not lp.lt:
        res = lp_solve(LinProgram(n, zeros(n), lp.eq, lp.le))
        return res.point if res.optimal else None
    eq = [(a + (ZERO,), b) for a, b in lp.eq]
    le = [(a + (ZERO,), b) for a, b in lp.le]
    le += [(a + (ONE,), b) for a, b in lp.lt]
    le.append((zeros(n) + (ONE,), ONE))
    res = lp_solve(LinProgram(n + 1, zeros(n) + (ONE,), eq, le))
    if not res.optimal or res.value <= 0:
        return None
    return res.point[:n]


def feasible(lp: LinProgram) -> bool:
    return strict_feasible_point(lp) is not None
