"""Rational linear constraints and explicit/oracle-backed polytopes in [0,1]^n."""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatch, TooLargeForExplicit
from .rationals import clear_denominators, dot, rat, rat_str, rat_vector

LE, GE, EQ = "<=", ">=", "="
_RELATIONS = (LE, GE, EQ)


@dataclass(frozen=True)
class LinearConstraint:
    """One row ``coeffs . x  rel  rhs`` with exact rational data."""

    coeffs: tuple
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in _RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "coeffs", rat_vector(self.coeffs))
        object.__setattr__(self, "rhs", rat(self.rhs))

    @property
    def dim(self):
        return len(self.coeffs)

    def lhs_at(self, point) -> Fraction:
        return dot(self.coeffs, point)

    def satisfied_by(self, point) -> bool:
        lhs = self.lhs_at(point)
        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == GE:
            return lhs >= self.rhs
        return lhs == self.rhs

    def as_leq(self):
        """This row as a list of (coeffs, rhs) pairs meaning coeffs.x <= rhs."""
        if self.rel == LE:
            return [(self.coeffs, self.rhs)]
        if self.rel == GE:
            return [(tuple(-c for c in self.coeffs), -self.rhs)]
        return [
            (self.coeffs, self.rhs),
            (tuple(-c for c in self.coeffs), -self.rhs),
        ]

    def normalized(self):
        """Canonical scaling-invariant form, for row-set comparisons.

        >= rows are rewritten as <=; the row is then scaled so all entries are
        coprime integers (equality rows additionally get a positive leading
        coefficient).  Returns a (coeffs, rel, rhs) tuple of ints.
        """
        if self.rel == GE:
            coeffs = tuple(-c for c in self.coeffs)
            rhs = -self.rhs
            rel = LE
        else:
            coeffs, rhs, rel = self.coeffs, self.rhs, self.rel
        ints, _ = clear_denominators(list(coeffs) + [rhs])
        if rel == EQ:
            lead = next((v for v in ints if v != 0), 0)
            if lead < 0:
                ints = [-v for v in ints]
        return tuple(ints[:-1]), rel, ints[-1]

    def to_json(self):
        return {
            "coeffs": [rat_str(c) for c in self.coeffs],
            "rel": self.rel,
            "rhs": rat_str(self.rhs),
        }

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(rat(c) for c in obj["coeffs"]), obj["rel"], rat(obj["rhs"]))


def leq_row(coeffs, rhs):
    return LinearConstraint(coeffs, LE, rhs)


def geq_row(coeffs, rhs):
    return LinearConstraint(coeffs, GE, rhs)


def eq_row(coeffs, rhs):
    return LinearConstraint(coeffs, EQ, rhs)


@dataclass(frozen=True)
class Polytope:
    """A polytope given by explicit rows, an implied [0,1]^n box, and
    optionally a lazy separation oracle for an exponential row family.

    The oracle, when present, must agree exactly with the family it stands
    for: ``find_violated(x)`` returns a violated family row or None.
    """

    dim: int
    rows: tuple = ()
    box: bool = True
    oracle: object = None
    provenance: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        rows = tuple(self.rows)
        for r in rows:
            if r.dim != self.dim:
                raise DimensionMismatch(
                    f"row of length {r.dim} in polytope of dim {self.dim}"
                )
        object.__setattr__(self, "rows", rows)

    def with_rows(self, extra):
        """A copy with additional explicit rows appended (used for atoms)."""
        return Polytope(
            self.dim, self.rows + tuple(extra), box=self.box, oracle=self.oracle
        )

    def contains(self, point) -> bool:
        point = rat_vector(point)
        if len(point) != self.dim:
            raise DimensionMismatch("point/polytope dimension mismatch")
        if self.box and not all(0 <= x <= 1 for x in point):
            return False
        if not all(r.satisfied_by(point) for r in self.rows):
            return False
        if self.oracle is not None and self.oracle.find_violated(point) is not None:
            return False
        return True

    def leq_system(self):
        """The canonical <=-form row system: list of (ref, coeffs, rhs).

        refs: ("row", i) for a <=/>= explicit row, ("row", i, "le"/"ge") for
        the two sides of an equality, then ("box_hi", j) for x_j <= 1 and
        ("box_lo", j) for -x_j <= 0 when the box flag is set.  Oracle rows are
        not enumerated here; certificates carry them inline.
        """
        out = []
        for i, row in enumerate(self.rows):
            pairs = row.as_leq()
            if row.rel == EQ:
                out.append((("row", i, "le"), pairs[0][0], pairs[0][1]))
                out.append((("row", i, "ge"), pairs[1][0], pairs[1][1]))
            else:
                out.append((("row", i), pairs[0][0], pairs[0][1]))
        if self.box:
            one = Fraction(1)
            for j in range(self.dim):
                e = tuple(one if t == j else Fraction(0) for t in range(self.dim))
                out.append((("box_hi", j), e, one))
            for j in range(self.dim):
                e = tuple(-one if t == j else Fraction(0) for t in range(self.dim))
                out.append((("box_lo", j), e, Fraction(0)))
        return out

    def row_for_ref(self, ref):
        """Resolve a certificate reference to a (coeffs, rhs) <=-form pair."""
        kind = ref[0]
        if kind == "row":
            row = self.rows[ref[1]]
            pairs = row.as_leq()
            if row.rel == EQ:
                return pairs[0] if ref[2] == "le" else pairs[1]
            return pairs[0]
        if kind == "box_hi":
            j = ref[1]
            return (
                tuple(Fraction(int(t == j)) for t in range(self.dim)),
                Fraction(1),
            )
        if kind == "box_lo":
            j = ref[1]
            return (
                tuple(Fraction(-int(t == j)) for t in range(self.dim)),
                Fraction(0),
            )
        if kind == "oracle":
            row = LinearConstraint.from_json(ref[1])
            if self.oracle is None or not self.oracle.is_family_row(row):
                raise ValueError("certificate references a row outside the family")
            return row.as_leq()[0]
        raise ValueError(f"unknown row reference {ref!r}")

    def materialized(self):
        """An explicit copy with all oracle rows expanded into ``rows``."""
        if self.oracle is None:
            return self
        extra = self.oracle.explicit_rows()
        if extra is None:
            raise TooLargeForExplicit("oracle family cannot be expanded")
        return Polytope(self.dim, self.rows + tuple(extra), box=self.box)

    def to_json(self):
        obj = {
            "dim": self.dim,
            "box": self.box,
            "rows": [r.to_json() for r in self.rows],
        }
        if self.oracle is not None:
            obj["oracle"] = self.oracle.to_json()
        if self.provenance:
            obj["provenance"] = self.provenance
        return obj

    @classmethod
    def from_json(cls, obj):
        oracle = None
        if "oracle" in obj:
            from .families import oracle_from_json

            oracle = oracle_from_json(obj["oracle"])
        return cls(
            int(obj["dim"]),
            tuple(LinearConstraint.from_json(r) for r in obj.get("rows", [])),
            box=bool(obj.get("box", True)),
            oracle=oracle,
            provenance=obj.get("provenance"),
        )


def point_to_json(point):
    return [rat_str(x) for x in point]


def point_from_json(obj):
    return tuple(rat(x) for x in obj)
