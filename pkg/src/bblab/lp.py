"""Polytope-level exact LP operations with machine-checkable certificates.

Feasibility and optimization run through one shared path that activates
rows lazily: large explicit row pools and oracle families are brought in
only when violated, so the simplex tableaus stay small.  Every Infeasible
outcome carries Farkas multipliers over the polytope's canonical <=-form
row system (explicit rows, box rows, activated oracle rows), re-verified
exactly before being returned.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd

from . import _kernel, simplex
from .errors import (
    DimensionMismatch,
    EmptyList,
    InternalError,
    NotSeparable,
    TooLarge,
)
from .polytope import EQ, LE, Polytope
from .rationals import clear_denominators, dot, rat_vector

FEASIBLE, INFEASIBLE, OPTIMAL, UNBOUNDED = "feasible", "infeasible", "optimal", "unbounded"

_LAZY_POOL_MIN = 48
_ADD_BATCH = 8


@dataclass
class LPOutcome:
    status: str
    point: tuple | None = None
    value: Fraction | None = None
    farkas: tuple | None = None  # ((ref, multiplier), ...) in <=-form

    @property
    def feasible(self):
        return self.status in (FEASIBLE, OPTIMAL)


def lp_feasible(P: Polytope) -> LPOutcome:
    """Exact feasibility: a point of P, or Farkas multipliers proving P empty."""
    return _polytope_solve(P, objective=None)


def lp_optimize(P: Polytope, c, sense="max") -> LPOutcome:
    """Optimize c.x over P exactly; returns a vertex optimum."""
    c = rat_vector(c)
    if len(c) != P.dim:
        raise DimensionMismatch("objective length != dim")
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    return _polytope_solve(P, objective=c, maximize=(sense == "max"))


def _point_to_ints(x):
    den = 1
    for v in x:
        den = den * v.denominator // gcd(den, v.denominator)
    return [int(v * den) for v in x], den


def _polytope_solve(P, objective=None, maximize=True):
    n = P.dim
    sys_rows = [entry for entry in P.leq_system() if entry[0][0] != "box_lo"]
    split_vars = not P.box  # x >= 0 is native only under the box flag
    oracle = P.oracle
    if oracle is not None and oracle.rows_are_explicit:
        oracle = None  # every family row is already in the explicit pool

    always = [
        k
        for k, (ref, _, _) in enumerate(sys_rows)
        if len(ref) == 3 or ref[0] == "box_hi"
    ]
    pool = [k for k in range(len(sys_rows)) if k not in set(always)]
    if len(pool) <= _LAZY_POOL_MIN and oracle is None:
        always, pool = always + pool, []
    active = list(always)
    active_set = set(active)
    if pool:
        int_pool = {}
        for k in pool:
            _, coeffs, rhs = sys_rows[k]
            ints, _ = clear_denominators(list(coeffs) + [rhs])
            int_pool[k] = ints

    oracle_rows = []  # activated family rows, as (constraint, coeffs, rhs)
    oracle_cap = 2 * oracle.family_size() if oracle is not None else 0
    rounds = 0

    while True:
        rounds += 1
        refs, rows, rhs = [], [], []
        for k in active:
            ref, coeffs, b = sys_rows[k]
            refs.append(ref)
            rows.append(list(coeffs) + [-c for c in coeffs] if split_vars else list(coeffs))
            rhs.append(b)
        for con, coeffs, b in oracle_rows:
            refs.append(("oracle", con))
            rows.append(list(coeffs) + [-c for c in coeffs] if split_vars else list(coeffs))
            rhs.append(b)
        nv = 2 * n if split_vars else n
        obj = None
        if objective is not None:
            obj = list(objective) + [-c for c in objective] if split_vars else list(objective)
        res = simplex.solve(nv, rows, [LE] * len(rows), rhs, objective=obj,
                            maximize=maximize, want_farkas=True)

        if res.status == "infeasible":
            cert = _assemble_farkas(P, refs, rows, res.farkas, n, split_vars)
            return LPOutcome(INFEASIBLE, farkas=cert)
        if res.status == "unbounded":
            if P.box:
                raise InternalError("unbounded LP over a box polytope")
            if pool and len(active) < len(sys_rows):
                active = list(range(len(sys_rows)))
                active_set = set(active)
                continue
            return LPOutcome(UNBOUNDED)

        x = res.x[:n] if not split_vars else tuple(
            res.x[j] - res.x[n + j] for j in range(n)
        )
        x = tuple(x)

        new = []
        if pool:
            nums, den = _point_to_ints(x)
            cand = [
                k
                for k in pool
                if k not in active_set
            ]
            introws = [int_pool[k] for k in cand]
            hits = _kernel.violated_indices(introws, nums, den)
            if hits:
                scored = []
                for h in hits:
                    k = cand[h]
                    _, coeffs, b = sys_rows[k]
                    scored.append((dot(coeffs, x) - b, k))
                scored.sort(key=lambda t: (-t[0], t[1]))
                new = [k for _, k in scored[:_ADD_BATCH]]

        oracle_new = None
        if not new and oracle is not None:
            violated = oracle.find_violated(x)
            if violated is not None:
                if any(con == violated for con, _, _ in oracle_rows):
                    raise InternalError("oracle re-returned an active row")
                if rounds > oracle_cap:
                    raise InternalError("oracle cutting loop exceeded its cap")
                (coeffs, b), = violated.as_leq()
                oracle_new = (violated, coeffs, b)

        if not new and oracle_new is None:
            status = OPTIMAL if objective is not None else FEASIBLE
            return LPOutcome(status, point=x, value=res.value)
        active.extend(new)
        active_set.update(new)
        if oracle_new is not None:
            oracle_rows.append(oracle_new)


def _assemble_farkas(P, refs, kernel_rows, u, n, split_vars):
    entries = [(ref, ui) for ref, ui in zip(refs, u) if ui != 0]
    if not split_vars:
        # Kernel guarantees sum u_i a_i >= 0 against x >= 0; fold the slack
        # into multipliers on the implied -x_j <= 0 box rows.
        combo = [Fraction(0)] * n
        for ref, ui in entries:
            coeffs = _ref_coeffs(P, ref)
            for j in range(n):
                combo[j] += ui * coeffs[j]
        for j in range(n):
            if combo[j] > 0:
                entries.append((("box_lo", j), combo[j]))
    cert = tuple(entries)
    verify_farkas(P, cert)
    return cert


def _ref_coeffs(P, ref):
    if ref[0] == "oracle":
        con = ref[1]
        (coeffs, _), = con.as_leq()
        return coeffs
    coeffs, _ = P.row_for_ref(ref)
    return coeffs


def _ref_row(P, ref):
    if ref[0] == "oracle":
        con = ref[1]
        if P.oracle is None or not P.oracle.is_family_row(con):
            raise ValueError("certificate cites a row outside the oracle family")
        (coeffs, b), = con.as_leq()
        return coeffs, b
    return P.row_for_ref(ref)


def verify_farkas(P: Polytope, cert) -> None:
    """Exact check of an infeasibility certificate; raises InternalError."""
    n = P.dim
    combo = [Fraction(0)] * n
    total = Fraction(0)
    for ref, mult in cert:
        if mult < 0:
            raise InternalError("Farkas multiplier is negative")
        coeffs, b = _ref_row(P, ref)
        for j in range(n):
            combo[j] += mult * coeffs[j]
        total += mult * b
    if any(v != 0 for v in combo):
        raise InternalError("Farkas combination is not the zero functional")
    if total >= 0:
        raise InternalError("Farkas combination has nonnegative rhs")


@dataclass
class HullResult:
    inside: bool
    weights: tuple | None = None
    witnesses: tuple | None = None
    empty_union: bool = False


def in_convex_hull_of_union(xstar, atoms) -> HullResult:
    """Decide x* in conv(union of atoms) by one exact LP in homogenized form.

    Uses the standard disjunctive formulation: lambda_v >= 0 summing to one,
    per-atom points z_v with A_v z_v <= lambda_v b_v and 0 <= z_v <= lambda_v,
    and sum_v z_v = x*.  Requires box-bounded atoms.
    """
    xstar = rat_vector(xstar)
    if not atoms:
        return HullResult(False, empty_union=True)
    n = len(xstar)
    for A in atoms:
        if A.dim != n:
            raise DimensionMismatch("atom/point dimension mismatch")
        if not A.box:
            raise ValueError("hull membership requires box-bounded atoms")
    atoms = [A.materialized() for A in atoms]

    V = len(atoms)
    width = n + 1  # [lambda_v, z_v...]
    nv = V * width
    rows, rels, rhs = [], [], []
    for v, A in enumerate(atoms):
        base = v * width
        for ref, coeffs, b in A.leq_system():
            if ref[0] == "box_lo":
                continue  # z_v >= 0 is native
            row = [Fraction(0)] * nv
            row[base] = -b
            for j in range(n):
                row[base + 1 + j] = coeffs[j]
            rows.append(row)
            rels.append(LE)
            rhs.append(Fraction(0))
    row = [Fraction(0)] * nv
    for v in range(V):
        row[v * width] = Fraction(1)
    rows.append(row)
    rels.append(EQ)
    rhs.append(Fraction(1))
    for j in range(n):
        row = [Fraction(0)] * nv
        for v in range(V):
            row[v * width + 1 + j] = Fraction(1)
        rows.append(row)
        rels.append(EQ)
        rhs.append(xstar[j])

    res = simplex.solve(nv, rows, rels, rhs)
    if res.status == "infeasible":
        return HullResult(False)
    lam = [res.x[v * width] for v in range(V)]
    zs = [res.x[v * width + 1 : v * width + 1 + n] for v in range(V)]
    witnesses = []
    for v in range(V):
        if lam[v] > 0:
            w = tuple(z / lam[v] for z in zs[v])
            if not atoms[v].contains(w):
                raise InternalError("hull witness fell outside its atom")
            witnesses.append(w)
        else:
            witnesses.append(None)
    mix = tuple(
        sum((lam[v] * witnesses[v][j] for v in range(V) if witnesses[v] is not None),
            Fraction(0))
        for j in range(n)
    )
    if mix != tuple(xstar):
        raise InternalError("hull weights do not reproduce the query point")
    return HullResult(True, weights=tuple(lam), witnesses=tuple(witnesses))


def convex_weights(xstar, points):
    """Weights expressing x* as a convex combination of points, or None."""
    xstar = rat_vector(xstar)
    n = len(xstar)
    m = len(points)
    rows, rels, rhs = [], [], []
    for j in range(n):
        rows.append([Fraction(points[i][j]) for i in range(m)])
        rels.append(EQ)
        rhs.append(xstar[j])
    rows.append([Fraction(1)] * m)
    rels.append(EQ)
    rhs.append(Fraction(1))
    res = simplex.solve(m, rows, rels, rhs)
    if res.status == "infeasible":
        return None
    return res.x


def separating_hyperplane(xstar, hull_points):
    """A strict separator (pi, pi0) with pi.x* > pi0 >= pi.p for the points.

    Verifies the precondition first: if x* is a convex combination of the
    given points, raises NotSeparable carrying the weights.  The returned
    separator is scaled so max |pi_i| = 1.
    """
    xstar = rat_vector(xstar)
    hull_points = [rat_vector(p) for p in hull_points]
    n = len(xstar)
    for p in hull_points:
        if len(p) != n:
            raise DimensionMismatch("hull point dimension mismatch")
    weights = convex_weights(xstar, hull_points)
    if weights is not None:
        raise NotSeparable(weights)

    # Variables: pi = p - q, pi0 = r - s, all parts nonnegative; maximize the
    # violation pi.x* - pi0 under pi.h <= pi0 and an l1 cap on pi.
    nv = 2 * n + 2
    rows, rels, rhs = [], [], []
    for h in hull_points:
        row = list(h) + [-v for v in h] + [Fraction(-1), Fraction(1)]
        rows.append(row)
        rels.append(LE)
        rhs.append(Fraction(0))
    rows.append([Fraction(1)] * (2 * n) + [Fraction(0), Fraction(0)])
    rels.append(LE)
    rhs.append(Fraction(1))
    obj = list(xstar) + [-v for v in xstar] + [Fraction(-1), Fraction(1)]
    res = simplex.solve(nv, rows, rels, rhs, objective=obj, maximize=True)
    if res.status != "optimal" or res.value <= 0:
        raise InternalError("separator LP failed on a separable instance")
    pi = tuple(res.x[j] - res.x[n + j] for j in range(n))
    pi0 = res.x[2 * n] - res.x[2 * n + 1]
    scale = max(abs(v) for v in pi)
    if scale == 0:
        raise InternalError("separator with zero normal")
    pi = tuple(v / scale for v in pi)
    pi0 = pi0 / scale
    if dot(pi, xstar) <= pi0 or any(dot(pi, h) > pi0 for h in hull_points):
        raise InternalError("separator postcondition failed")
    return pi, pi0


def affine_rank(points) -> int:
    """Number of affinely independent points, by exact elimination."""
    if not points:
        raise EmptyList("affine_rank of an empty point set")
    pts = [rat_vector(p) for p in points]
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise DimensionMismatch("points of mixed dimension")
    base = pts[0]
    matrix = [[p[j] - base[j] for j in range(n)] for p in pts[1:]]
    return _rank(matrix) + 1


def _rank(matrix):
    rows = [list(r) for r in matrix]
    rank = 0
    col = 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), -1)
        if pivot < 0:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        col += 1
    return rank


def solve_square(A, b):
    """Solve an n x n rational system exactly; None if singular."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if M[i][col] != 0), -1)
        if pivot < 0:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        pr = M[col]
        inv = Fraction(1) / pr[col]
        M[col] = [v * inv for v in pr]
        pr = M[col]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b2 for a, b2 in zip(M[i], pr)]
    return tuple(M[i][n] for i in range(n))


def enum_vertices(P: Polytope, combo_limit=2_000_000):
    """All vertices of a small explicit polytope, by basis enumeration."""
    P = P.materialized()
    system = [(coeffs, b) for _, coeffs, b in P.leq_system()]
    m, n = len(system), P.dim
    if comb(m, n) > combo_limit:
        raise TooLarge(f"vertex enumeration over C({m},{n}) bases")
    seen = set()
    verts = []
    for subset in combinations(range(m), n):
        A = [system[i][0] for i in subset]
        b = [system[i][1] for i in subset]
        x = solve_square(A, b)
        if x is None or x in seen:
            continue
        if all(dot(coeffs, x) <= rhs for coeffs, rhs in system):
            seen.add(x)
            verts.append(x)
    verts.sort()
    return verts
