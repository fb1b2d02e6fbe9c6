"""Exact checkers for the combinatorial facts behind the hard families:
0/1 enumeration, facet rank, constraint criticality, infeasibility-to-
optimization restriction, face-in-halfspace construction, shattering, the
entropy counting bound, and half-point feasibility.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, log2

from . import _kernel
from .errors import (
    DimensionTooLarge,
    InequalityInvalidForHull,
    InequalityValidForP,
    InternalError,
    PIsEmpty,
    PIsFeasible,
    PreconditionViolated,
    SpecViolation,
)
from .lp import affine_rank, lp_feasible, lp_optimize
from .polytope import EQ, GE, LinearConstraint, Polytope
from .rationals import clear_denominators, dot, rat_str, rat_vector

HALF = Fraction(1, 2)

_ENUM_DIM_CAP = 24


def enum_integer_points(P: Polytope, first_only=False):
    """All 0/1 points of P, by exhaustive enumeration in mask order.

    Uses the polytope's oracle as a fast violation finder when present;
    explicit rows are pre-integerized so each candidate costs integer
    arithmetic only.
    """
    if not P.box:
        raise ValueError("enumeration needs the box flag")
    n = P.dim
    if n > _ENUM_DIM_CAP:
        raise DimensionTooLarge(f"0/1 enumeration beyond dim {_ENUM_DIM_CAP}")
    oracle = P.oracle
    # Rows the oracle already answers for exactly are left to it; for
    # hint-style oracles over explicit rows this turns the scan per point
    # into a single row evaluation in the common case.
    skip = 0
    if oracle is not None and oracle.rows_are_explicit:
        family = getattr(oracle, "rows", ())
        if P.rows[: len(family)] == tuple(family):
            skip = len(family)
    introws = []
    for row in P.rows[skip:]:
        for coeffs, rhs in row.as_leq():
            ints, _ = clear_denominators(list(coeffs) + [rhs])
            introws.append(ints)
    out = []
    for mask in range(2 ** n):
        if _kernel.first_violated_mask(introws, mask) >= 0:
            continue
        point = tuple(mask >> i & 1 for i in range(n))
        if oracle is not None:
            if oracle.find_violated(rat_vector(point)) is not None:
                continue
        out.append(point)
        if first_only:
            return out
    return out


@dataclass
class FacetCheck:
    is_facet: bool
    rank: int


def facet_check_cardinality(n, k, restrict=None) -> FacetCheck:
    """Affine rank of the characteristic vectors of all (k-1)-subsets.

    Facet(n) iff the rank is n, which is the affine-independence content of
    the cardinality-facet argument.  ``restrict`` optionally limits the
    subsets to a coordinate universe.
    """
    if not 2 <= k <= n / 2:
        raise SpecViolation("need 2 <= k <= n/2")
    universe = sorted(restrict) if restrict is not None else list(range(n))
    points = []
    rank = 0
    for T in combinations(universe, k - 1):
        points.append(tuple(Fraction(int(i in T)) for i in range(n)))
        if len(points) <= 2 or rank < n:
            rank = affine_rank(points)
            if rank == n:
                return FacetCheck(True, n)
    return FacetCheck(rank == n, rank)


@dataclass
class CriticalityResult:
    verified: bool
    bound: Fraction | None = None
    witnesses: dict | None = None
    violated_row: int | None = None
    reason: str | None = None


def criticality_bound(P: Polytope, D) -> CriticalityResult:
    """Check the removal-criticality hypothesis and return the node bound.

    P must be nonempty and integer-infeasible; every row index in D must,
    when dropped, admit a 0/1 point.  On success the bound 2|D|/n - 1 on the
    node count of any infeasibility proof holds.
    """
    if not lp_feasible(P).feasible:
        raise PIsEmpty("criticality needs a nonempty polytope")
    hit = enum_integer_points(P, first_only=True)
    if hit:
        raise PIsFeasible(f"P contains the integer point {hit[0]}")
    witnesses = {}
    for r in D:
        rows = tuple(row for i, row in enumerate(P.rows) if i != r)
        relaxed = Polytope(P.dim, rows, box=P.box)
        found = enum_integer_points(relaxed, first_only=True)
        if not found:
            return CriticalityResult(
                False, violated_row=r,
                reason="dropping this row keeps the polytope integer-infeasible",
            )
        witnesses[r] = found[0]
    bound = Fraction(2 * len(D), P.dim) - 1
    return CriticalityResult(True, bound=bound, witnesses=witnesses)


def gen_restricted_polytope(P: Polytope, c, delta) -> Polytope:
    """Restrict P to {c.x >= delta + eps0} with eps0 = max_P c.x - delta.

    Requires c.x <= delta to be valid for the integer hull but not for P
    (both checked exactly); the result is the polytope whose infeasibility
    hardness transfers to optimization hardness over P.
    """
    c = rat_vector(c)
    delta = Fraction(delta)
    for p in enum_integer_points(P):
        if dot(c, rat_vector(p)) > delta:
            raise InequalityInvalidForHull(f"cut off integer point {p}")
    opt = lp_optimize(P, c, "max")
    if opt.status != "optimal":
        raise InequalityValidForP("P is empty; the inequality is vacuously valid")
    eps0 = opt.value - delta
    if eps0 <= 0:
        raise InequalityValidForP(f"max c.x = {opt.value} <= delta")
    rows = P.rows + (LinearConstraint(c, GE, delta + eps0),)
    prov = {
        "family": "restricted",
        "eps0": rat_str(eps0),
        "base": (P.provenance or {}).get("family"),
    }
    return Polytope(P.dim, rows, box=P.box, oracle=P.oracle, provenance=prov)


@dataclass
class FaceSpec:
    fixed: dict  # coordinate -> 0 or 1

    def dim_within(self, n):
        return n - len(self.fixed)

    def as_polytope(self, n) -> Polytope:
        rows = tuple(
            LinearConstraint(
                tuple(Fraction(int(j == i)) for j in range(n)), EQ, Fraction(v)
            )
            for i, v in sorted(self.fixed.items())
        )
        return Polytope(n, rows)


def find_high_dim_face(pi, pi0, n) -> FaceSpec:
    """A face of [0,1]^n of dimension >= floor(n/2) inside {pi.x > pi0}.

    Constructive: flip the negative coordinates, fix the ceil(n/2) largest
    flipped coefficients to 1, unflip.  The result is verified by exactly
    minimizing pi over the face.
    """
    pi = rat_vector(pi)
    pi0 = Fraction(pi0)
    if len(pi) != n:
        raise PreconditionViolated("pi has wrong length")
    if dot(pi, [HALF] * n) <= pi0:
        raise PreconditionViolated("pi . (1/2) <= pi0")
    flipped = [(-v if v < 0 else v, i) for i, v in enumerate(pi)]
    order = sorted(range(n), key=lambda i: (-flipped[i][0], i))
    chosen = order[: (n + 1) // 2]
    fixed = {i: (0 if pi[i] < 0 else 1) for i in chosen}
    face = FaceSpec(fixed)
    low = lp_optimize(face.as_polytope(n), pi, "min")
    if low.status != "optimal" or low.value <= pi0:
        raise InternalError("face construction failed its LP verification")
    return face


@dataclass
class ShatterResult:
    found: bool
    coords: tuple | None = None
    point: tuple | None = None


def find_shattered_set(F, k) -> ShatterResult:
    """Search all k-subsets of coordinates for one shattered by F.

    On success returns the coordinate set J and a point of conv(F) with
    value 1/2 on J, built by averaging one representative of F per 0/1
    pattern on J.  Guaranteed to succeed when |F| exceeds the Sauer-Shelah
    threshold sum_{i<=k-1} C(n,i).
    """
    F = [tuple(p) for p in F]
    if not F:
        return ShatterResult(False)
    n = len(F[0])
    full = 2 ** k
    for J in combinations(range(n), k):
        patterns = {}
        for p in F:
            key = tuple(p[j] for j in J)
            if key not in patterns:
                patterns[key] = p
                if len(patterns) == full:
                    break
        if len(patterns) < full:
            continue
        reps = list(patterns.values())
        point = tuple(
            sum(Fraction(p[j]) for p in reps) / full for j in range(n)
        )
        if any(point[j] != HALF for j in J):
            raise InternalError("shattered-set averaging lost its half values")
        return ShatterResult(True, J, point)
    return ShatterResult(False)


@dataclass
class EntropyCheck:
    holds: bool
    lhs_log2: Fraction
    rhs: int


def entropy_bound_check(n, s) -> EntropyCheck:
    """Does 2^{n h(s/n)} strictly exceed sum_{i<=s-1} C(n,i)?

    The left side equals the exact rational n^n / (s^s (n-s)^(n-s)), so the
    comparison is decided in integer arithmetic; Holds is only reported when
    provable.  lhs_log2 is a reporting-only dyadic approximation.
    """
    if not 1 <= s <= n / 2:
        raise SpecViolation("need 1 <= s <= n/2")
    lhs = Fraction(n ** n, s ** s * (n - s) ** (n - s))
    rhs = sum(comb(n, i) for i in range(s))
    approx = Fraction(
        round((log2(lhs.numerator) - log2(lhs.denominator)) * 2 ** 20), 2 ** 20
    )
    return EntropyCheck(lhs > rhs, approx, rhs)


def half_point_count(n, s):
    return sum(comb(n, j) * 2 ** (n - j) for j in range(s, n + 1))


def gen_half_points(n, s, budget, seed=0):
    """Points of {0, 1/2, 1}^n with at least s half-valued coordinates.

    Full enumeration when the family fits the budget, otherwise a seeded
    uniform sample of ``budget`` distinct points.
    """
    if not 0 <= s <= n:
        raise SpecViolation("need 0 <= s <= n")
    total = half_point_count(n, s)
    if total <= budget:
        out = []
        for j in range(s, n + 1):
            for H in combinations(range(n), j):
                Hs = set(H)
                rest = [i for i in range(n) if i not in Hs]
                for bits in range(2 ** len(rest)):
                    point = [HALF] * n
                    for t, i in enumerate(rest):
                        point[i] = Fraction(bits >> t & 1)
                    out.append(tuple(point))
        return out
    rng = random.Random(seed)
    weights = [comb(n, j) * 2 ** (n - j) for j in range(s, n + 1)]
    seen = set()
    out = []
    while len(out) < budget:
        j = rng.choices(range(s, n + 1), weights=weights)[0]
        H = rng.sample(range(n), j)
        Hs = set(H)
        point = tuple(
            HALF if i in Hs else Fraction(rng.randint(0, 1)) for i in range(n)
        )
        if point not in seen:
            seen.add(point)
            out.append(point)
    return out


@dataclass
class HalfSetCheck:
    holds: bool
    row_index: int | None = None
    witness: tuple | None = None


def half_points_feasible(P: Polytope, s) -> HalfSetCheck:
    """Decide exactly whether every point of Half_s satisfies P's rows.

    For each <=-form row the maximum of the LHS over Half_s is computed
    coordinatewise (forcing the s cheapest halves), so the answer covers the
    whole set without enumeration; a failing row yields an explicit
    violating half-point witness.
    """
    P = P.materialized()
    n = P.dim
    if s > n:
        return HalfSetCheck(True)  # Half_s is empty; vacuously feasible
    entries = list(P.leq_system())
    for idx, (ref, coeffs, rhs) in enumerate(entries):
        base = Fraction(0)
        costs = []
        for i, a in enumerate(coeffs):
            best = a if a > 0 else Fraction(0)  # max over {0, a/2, a}
            base += best
            costs.append((best - a / 2, i))
        costs.sort(key=lambda t: (t[0], t[1]))
        drop = sum((c for c, _ in costs[:s]), Fraction(0))
        if base - drop > rhs:
            witness = [Fraction(1) if a > 0 else Fraction(0) for a in coeffs]
            for _, i in costs[:s]:
                witness[i] = HALF
            witness = tuple(witness)
            if dot(coeffs, witness) <= rhs:
                raise InternalError("half-point witness does not violate its row")
            row_index = ref[1] if ref[0] == "row" else None
            return HalfSetCheck(False, row_index, witness)
    return HalfSetCheck(True)
