"""Independent brute-force oracles used to cross-check the exact kernel.

These deliberately avoid the simplex code path: LPs are decided by
enumerating candidate basic points from row subsets and taking exact
maxima, which is the stated reference semantics for small dimensions.
"""

from fractions import Fraction
from itertools import combinations

from bblab.lp import solve_square
from bblab.rationals import dot


def brute_lp(nvars, rows, rhs, objective=None, maximize=True):
    """Solve max/min c.x s.t. rows.x <= rhs, x >= 0 by vertex enumeration.

    The instance must have a bounded feasible region (include explicit upper
    bound rows).  Returns (status, value) with status in
    {"optimal", "infeasible"}.
    """
    system = [(tuple(Fraction(v) for v in row), Fraction(b)) for row, b in zip(rows, rhs)]
    for j in range(nvars):
        system.append(
            (tuple(Fraction(-int(t == j)) for t in range(nvars)), Fraction(0))
        )
    best = None
    feasible = False
    for subset in combinations(range(len(system)), nvars):
        A = [system[i][0] for i in subset]
        b = [system[i][1] for i in subset]
        x = solve_square(A, b)
        if x is None:
            continue
        if all(dot(coeffs, x) <= b2 for coeffs, b2 in system):
            feasible = True
            if objective is not None:
                val = dot(objective, x)
                if best is None or (maximize and val > best) or (
                    not maximize and val < best
                ):
                    best = val
    if not feasible:
        return "infeasible", None
    return "optimal", best


def brute_in_hull_of_union(xstar, atom_vertex_sets):
    """Is x* a convex combination of the vertices of a union of polytopes?

    Expects each atom's exact vertex list; empty atoms contribute nothing.
    Decided by an exact LP over combination weights of all vertices pooled
    together (conv of a union is conv of the union of vertex sets).
    """
    from bblab.lp import convex_weights

    pool = [v for verts in atom_vertex_sets for v in verts]
    if not pool:
        return False
    return convex_weights(xstar, pool) is not None
