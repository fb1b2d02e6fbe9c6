"""Exact two-phase primal simplex over the rationals.

The tableau is kept as an integer matrix with one shared positive
denominator (integer pivoting): a pivot replaces every entry by
(old * pivot - old_c * pivot_row) / den, an exact integer division, so no
per-entry gcd normalization is needed and no floating point appears
anywhere.  Bland's rule (lowest eligible index) guarantees termination.

Problem form solved here:

    optimize  c . x    subject to    rows[i] . x  (<=|=)  rhs[i],   x >= 0.

Callers are responsible for splitting free variables and for presenting
box upper bounds as rows.  Farkas certificates are available whenever all
relations are "<=": on infeasibility the returned multipliers u satisfy
u >= 0, sum_i u_i row_i >= 0 componentwise, and u . rhs < 0, verified
exactly before returning.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import _kernel
from .errors import InternalError
from .polytope import EQ, LE
from .rationals import clear_denominators

_MAX_PIVOTS = 500_000


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple | None = None
    value: Fraction | None = None
    farkas: tuple | None = None


def solve(nvars, rows, rels, rhs, objective=None, maximize=False, want_farkas=False):
    m = len(rows)
    if want_farkas and any(r != LE for r in rels):
        raise ValueError("Farkas extraction requires an all-<= system")

    # Integerize each row; remember the positive scale to map multipliers back.
    introws, intrhs, scales = [], [], []
    for i in range(m):
        ints, scale = clear_denominators(list(rows[i]) + [rhs[i]])
        introws.append(ints[:nvars])
        intrhs.append(ints[nvars])
        scales.append(scale)

    # Sign-fix so every right-hand side is nonnegative.
    sigma = [1] * m
    for i in range(m):
        if intrhs[i] < 0:
            introws[i] = [-v for v in introws[i]]
            intrhs[i] = -intrhs[i]
            sigma[i] = -1

    slack_col = {}
    ncols = nvars
    for i in range(m):
        if rels[i] == LE:
            slack_col[i] = ncols
            ncols += 1
    first_art = ncols
    art_col = {}
    for i in range(m):
        if rels[i] == EQ or sigma[i] < 0:
            art_col[i] = ncols
            ncols += 1

    tableau = []
    basis = []
    for i in range(m):
        row = [0] * (ncols + 1)
        for j in range(nvars):
            row[j] = introws[i][j]
        if i in slack_col:
            row[slack_col[i]] = sigma[i]
        if i in art_col:
            row[art_col[i]] = 1
            basis.append(art_col[i])
        else:
            basis.append(slack_col[i])
        row[ncols] = intrhs[i]
        tableau.append(row)

    den = 1

    # Phase-2 objective row, maintained through both phases: minimize c2 . x.
    p2 = None
    if objective is not None:
        c2, _ = clear_denominators(objective)
        if maximize:
            c2 = [-v for v in c2]
        p2 = [0] * (ncols + 1)
        for j in range(nvars):
            p2[j] = c2[j]

    state = {"den": den, "pivots": 0}

    def run_bland(objrow, extra_objs, allowed):
        while True:
            enter = -1
            for j in range(ncols):
                if allowed[j] and objrow[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best_n = best_d = None  # ratio best_n / best_d
            for i in range(len(tableau)):
                a = tableau[i][enter]
                if a > 0:
                    r_n, r_d = tableau[i][-1], a
                    if leave < 0 or r_n * best_d < best_n * r_d or (
                        r_n * best_d == best_n * r_d and basis[i] < basis[leave]
                    ):
                        leave, best_n, best_d = i, r_n, r_d
            if leave < 0:
                return "unbounded"
            state["pivots"] += 1
            if state["pivots"] > _MAX_PIVOTS:
                raise InternalError("pivot limit exceeded; cycling suspected")
            combined = tableau + [objrow] + extra_objs
            state["den"] = _kernel.pivot_update(combined, leave, enter, state["den"])
            basis[leave] = enter
            if state["den"] < 0:
                _negate_all(combined, state)

    allowed = [True] * ncols
    for i in art_col.values():
        allowed[i] = False  # artificials never (re-)enter

    # Phase 1: drive the artificials to zero.
    if art_col:
        p1 = [0] * (ncols + 1)
        for i in art_col:
            row = tableau[i]
            for j in range(ncols + 1):
                p1[j] -= row[j]
        for i in art_col.values():
            p1[i] = 0
        status = run_bland(p1, [p2] if p2 is not None else [], allowed)
        if status == "unbounded":
            raise InternalError("phase-1 objective is bounded by construction")
        if p1[-1] < 0:  # infeasibility measure -p1[-1]/den is positive
            farkas = None
            if want_farkas:
                farkas = _extract_farkas(p1, state["den"], slack_col, scales, rows, rhs, m)
            return SimplexResult("infeasible", farkas=farkas)
        _drive_out_artificials(tableau, basis, [p for p in (p2,) if p is not None],
                               first_art, state)

    # Drop artificial columns for phase 2.
    if art_col:
        for row in tableau:
            del row[first_art:ncols]
        if p2 is not None:
            del p2[first_art:ncols]
        ncols = first_art
        allowed = allowed[:ncols]

    if p2 is not None:
        status = run_bland(p2, [], allowed)
        if status == "unbounded":
            return SimplexResult("unbounded")

    den = state["den"]
    x = [Fraction(0)] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            x[b] = Fraction(tableau[i][-1], den)
    x = tuple(x)
    _self_check(x, rows, rels, rhs)
    value = None
    if objective is not None:
        value = sum((c * v for c, v in zip(objective, x)), Fraction(0))
    return SimplexResult("optimal", x=x, value=value)


def _negate_all(rows, state):
    for row in rows:
        for j in range(len(row)):
            row[j] = -row[j]
    state["den"] = -state["den"]


def _drive_out_artificials(tableau, basis, objs, first_art, state):
    # Pivot basic artificials (at value zero) onto structural columns; a row
    # with no structural entry is redundant and dropped.
    i = 0
    while i < len(tableau):
        if basis[i] >= first_art:
            row = tableau[i]
            col = next((j for j in range(first_art) if row[j] != 0), -1)
            if col < 0:
                del tableau[i]
                del basis[i]
                continue
            combined = tableau + objs
            state["den"] = _kernel.pivot_update(combined, i, col, state["den"])
            basis[i] = col
            if state["den"] < 0:
                _negate_all(combined, state)
        i += 1


def _extract_farkas(p1, den, slack_col, scales, rows, rhs, m):
    u = [Fraction(0)] * m
    for i, col in slack_col.items():
        u[i] = Fraction(p1[col], den) * scales[i]
    nvars = len(rows[0]) if m else 0
    if any(ui < 0 for ui in u):
        raise InternalError("negative Farkas multiplier")
    for j in range(nvars):
        if sum((u[i] * rows[i][j] for i in range(m)), Fraction(0)) < 0:
            raise InternalError("Farkas combination has a negative coefficient")
    if sum((u[i] * rhs[i] for i in range(m)), Fraction(0)) >= 0:
        raise InternalError("Farkas combination does not prove infeasibility")
    return tuple(u)


def _self_check(x, rows, rels, rhs):
    for row, rel, b in zip(rows, rels, rhs):
        lhs = sum((a * v for a, v in zip(row, x)), Fraction(0))
        ok = lhs <= b if rel == LE else lhs == b
        if not ok:
            raise InternalError("simplex returned a point violating a constraint")
    if any(v < 0 for v in x):
        raise InternalError("simplex returned a negative variable value")
