"""Symbolic sign algebra for the graded structure on chain complexes.

Twelve sign symbols govern every differential and structural map in the
package: the suspension sign, the two tensor-differential signs, the two
hom-differential signs, the tensor/hom suspension comparison signs
(tp1, tp2, th1, th2), the associator and symmetry signs, and the
tensor-hom adjunction sign.  A :class:`SignAssignment` fixes all twelve as
integer-valued exponent functions of the grading indices.

Any assignment must satisfy twenty-one compatibility equations (plus one
relation tying the adjunction sign to the double-dual normalization).
Each exponent in scope is a quadratic integer-valued polynomial, so its
parity is determined by each index mod 4; exhaustive evaluation over the
window {-4, .., 3} is therefore a complete decision procedure for this
family.  We verify numerically over that window rather than by pushing
polynomial normal forms around.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

SYMBOLS = (
    "T",      # suspension: differential sign of TA
    "tens1",  # tensor differential acting on the left factor
    "tens2",  # tensor differential acting on the right factor
    "tp1",    # TA (x) B -> T(A (x) B)
    "tp2",    # A (x) TB -> T(A (x) B)
    "assoc",  # associator
    "sym",    # symmetry A (x) B -> B (x) A
    "ath",    # tensor-hom adjunction on hom-sets
    "hom1",   # hom differential by precomposition
    "hom2",   # hom differential by postcomposition
    "th1",    # [T^{-1}A, B] -> T[A, B]
    "th2",    # [A, TB] -> T[A, B]
)

ARITY = {
    "T": 1,
    "assoc": 3,
    **{s: 2 for s in ("tens1", "tens2", "tp1", "tp2", "sym", "ath", "hom1", "hom2", "th1", "th2")},
}


@dataclass(frozen=True)
class SignExpr:
    """A sign-valued function (-1)^e(x) with e an integer-valued quadratic.

    e(x) = sum linear[s]*x_s + sum bilinear[(u,v)]*x_u*x_v
         + sum binom[s]*x_s*(x_s-1)/2,  global in {+1, -1}.
    """

    arity: int
    global_sign: int = 1
    linear: tuple = ()
    bilinear: tuple = ()  # ((u, v, coeff), ...)
    binom: tuple = ()

    def __post_init__(self):
        if self.global_sign not in (1, -1):
            raise ValueError("global sign must be +1 or -1")
        if not self.linear:
            object.__setattr__(self, "linear", (0,) * self.arity)
        if not self.binom:
            object.__setattr__(self, "binom", (0,) * self.arity)
        if len(self.linear) != self.arity or len(self.binom) != self.arity:
            raise ValueError("coefficient tuples must match arity")

    def exponent(self, indices) -> int:
        if len(indices) != self.arity:
            raise ValueError(f"expected {self.arity} indices, got {len(indices)}")
        e = sum(c * x for c, x in zip(self.linear, indices))
        for u, v, c in self.bilinear:
            e += c * indices[u] * indices[v]
        for c, x in zip(self.binom, indices):
            e += c * (x * (x - 1) // 2)
        return e

    def eval(self, *indices) -> int:
        return self.global_sign * (-1) ** (self.exponent(indices) % 2)

    def flip(self) -> "SignExpr":
        return SignExpr(self.arity, -self.global_sign, self.linear, self.bilinear, self.binom)


def eval_sign(expr: SignExpr, indices) -> int:
    return expr.eval(*indices)


CONST_PLUS = SignExpr(0, 1)
CONST_MINUS = SignExpr(0, -1)


def default_assignment(a: int = 1, b: int = 1) -> dict:
    """The two-parameter family of consistent sign choices, a, b in {+1,-1}.

    (a, b) = (1, 1) reproduces the reference table exactly; a flips
    tp1/tp2/th2 together and b flips the adjunction sign alone.
    """
    if a not in (1, -1) or b not in (1, -1):
        raise ValueError("a and b must be +1 or -1")
    return {
        "T": SignExpr(1, -1),
        "tens1": SignExpr(2, 1),
        "tens2": SignExpr(2, 1, linear=(1, 0)),
        "tp1": SignExpr(2, a),
        "tp2": SignExpr(2, a, linear=(1, 0)),
        "assoc": SignExpr(3, 1),
        "sym": SignExpr(2, 1, bilinear=((0, 1, 1),)),
        "ath": SignExpr(2, b, binom=(1, 0)),
        "hom1": SignExpr(2, 1),
        "hom2": SignExpr(2, -1, linear=(1, 1)),
        "th1": SignExpr(2, 1),
        "th2": SignExpr(2, a, linear=(1, 1)),
    }


def validate_assignment(s: dict) -> dict:
    missing = [k for k in SYMBOLS if k not in s]
    if missing:
        raise ValueError(f"sign assignment is missing symbols {missing}")
    for k in SYMBOLS:
        if s[k].arity != ARITY[k]:
            raise ValueError(f"symbol {k} must have arity {ARITY[k]}")
    return s


def flipped(assignment: dict, *symbols: str) -> dict:
    """Copy of an assignment with the global sign of each named symbol flipped."""
    out = dict(assignment)
    for name in symbols:
        out[name] = out[name].flip()
    return out


_TERM = re.compile(r"([+-]?)\s*([a-z]+|\d+)")


def _parse_index(expr: str):
    """Parse 'i', 'i-1', 'i+j+1', 'j-i' into (coeff-by-var dict, constant)."""
    coeffs: dict[str, int] = {}
    const = 0
    for sgn, tok in _TERM.findall(expr.replace(" ", "")):
        s = -1 if sgn == "-" else 1
        if tok.isdigit():
            const += s * int(tok)
        else:
            coeffs[tok] = coeffs.get(tok, 0) + s
    return coeffs, const


@dataclass(frozen=True)
class Equation:
    """One compatibility row: a formal product of symbols at shifted indices."""

    num: int
    variables: tuple
    factors: tuple  # ((symbol, (index expr string, ...)), ...)
    rhs: SignExpr   # evaluated on the row variables, usually constant
    reason: str
    _parsed: tuple = field(default=None, repr=False, compare=False)

    def parsed(self):
        if self._parsed is None:
            pf = tuple(
                (sym, tuple(_parse_index(e) for e in idx)) for sym, idx in self.factors
            )
            object.__setattr__(self, "_parsed", pf)
        return self._parsed

    def eval_at(self, assignment: dict, env: dict) -> tuple[int, int]:
        prod = 1
        for sym, idx in self.parsed():
            vals = tuple(
                sum(c * env[v] for v, c in coeffs.items()) + const for coeffs, const in idx
            )
            prod *= assignment[sym].eval(*vals)
        want = self.rhs.eval(*(env[v] for v in self.variables[: self.rhs.arity]))
        return prod, want


def _eq(num, variables, factors, rhs, reason):
    if isinstance(rhs, int):
        rhs = CONST_PLUS if rhs == 1 else CONST_MINUS
    return Equation(num, tuple(variables), tuple(factors), rhs, reason)


# The 21 compatibility equations, plus row 22: the relation forced by the
# classical double-dual normalization.  Rows whose source displays no
# explicit right-hand side are +1; the anticommutation rows (1, 14, 19, 20)
# are -1.
EQUATIONS = (
    _eq(1, "ij", [("tens1", ("i", "j")), ("tens1", ("i", "j-1")),
                  ("tens2", ("i", "j")), ("tens2", ("i-1", "j"))], -1,
        "tensor product of complexes is a complex"),
    _eq(2, "ijk", [("tens1", ("i", "j")), ("tens1", ("i", "j+k")), ("tens1", ("i+j", "k")),
                   ("assoc", ("i", "j", "k")), ("assoc", ("i-1", "j", "k"))], 1,
        "associator is a chain map (left differential)"),
    _eq(3, "ijk", [("tens2", ("i", "j")), ("tens1", ("j", "k")), ("tens1", ("i+j", "k")),
                   ("tens2", ("i", "j+k")), ("assoc", ("i", "j", "k")), ("assoc", ("i", "j-1", "k"))], 1,
        "associator is a chain map (middle differential)"),
    _eq(4, "ijk", [("tens2", ("i+j", "k")), ("tens2", ("j", "k")), ("tens2", ("i", "j+k")),
                   ("assoc", ("i", "j", "k")), ("assoc", ("i", "j", "k-1"))], 1,
        "associator is a chain map (right differential)"),
    _eq(5, "ijkl", [("assoc", ("i", "j", "k")), ("assoc", ("i", "j+k", "l")), ("assoc", ("j", "k", "l")),
                    ("assoc", ("i", "j", "k+l")), ("assoc", ("i+j", "k", "l"))], 1,
        "pentagon"),
    _eq(6, "ij", [("tens1", ("i", "j")), ("tens2", ("j", "i")),
                  ("sym", ("i", "j")), ("sym", ("i-1", "j"))], 1,
        "symmetry is a chain map (left differential)"),
    _eq(7, "ij", [("tens1", ("j", "i")), ("tens2", ("i", "j")),
                  ("sym", ("i", "j")), ("sym", ("i", "j-1"))], 1,
        "symmetry is a chain map (right differential)"),
    _eq(8, "ij", [("sym", ("i", "j")), ("sym", ("j", "i"))], 1,
        "symmetry is self-inverse"),
    _eq(9, "ijk", [("sym", ("j", "k")), ("sym", ("i", "k")), ("sym", ("i+j", "k")),
                   ("assoc", ("i", "j", "k")), ("assoc", ("k", "i", "j")), ("assoc", ("i", "k", "j"))], 1,
        "hexagon"),
    _eq(10, "ij", [("T", ("i",)), ("T", ("i+j",)), ("tens1", ("i", "j")), ("tens1", ("i+1", "j")),
                   ("tp1", ("i", "j")), ("tp1", ("i-1", "j"))], 1,
        "tp1 is a chain map (left differential)"),
    _eq(11, "ij", [("T", ("i+j",)), ("tens2", ("i", "j")), ("tens2", ("i+1", "j")),
                   ("tp1", ("i", "j")), ("tp1", ("i", "j-1"))], 1,
        "tp1 is a chain map (right differential)"),
    _eq(12, "ij", [("T", ("j",)), ("T", ("i+j",)), ("tens2", ("i", "j")), ("tens2", ("i", "j+1")),
                   ("tp2", ("i", "j")), ("tp2", ("i", "j-1"))], 1,
        "tp2 is a chain map (right differential)"),
    _eq(13, "ij", [("T", ("i+j",)), ("tens1", ("i", "j")), ("tens1", ("i", "j+1")),
                   ("tp2", ("i", "j")), ("tp2", ("i-1", "j"))], 1,
        "tp2 is a chain map (left differential)"),
    _eq(14, "ij", [("tp1", ("i", "j")), ("tp1", ("i", "j+1")),
                   ("tp2", ("i", "j")), ("tp2", ("i+1", "j"))], -1,
        "double-suspension square anticommutes"),
    _eq(15, "ijk", [("tp1", ("i", "j")), ("tp1", ("i+j", "k")), ("tp1", ("i", "j+k")),
                    ("assoc", ("i", "j", "k")), ("assoc", ("i+1", "j", "k"))], 1,
        "tp1 is compatible with the associator"),
    _eq(16, "ijk", [("tp2", ("i", "j")), ("tp1", ("i+j", "k")), ("tp2", ("i", "j+k")),
                    ("tp1", ("j", "k")), ("assoc", ("i", "j", "k")), ("assoc", ("i", "j+1", "k"))], 1,
        "tp2/tp1 are compatible with the associator"),
    _eq(17, "ijk", [("tp2", ("i+j", "k")), ("tp2", ("i", "j+k")), ("tp2", ("j", "k")),
                    ("assoc", ("i", "j", "k")), ("assoc", ("i", "j", "k+1"))], 1,
        "tp2 is compatible with the associator"),
    _eq(18, "ij", [("tp1", ("i", "j")), ("tp2", ("j", "i")),
                   ("sym", ("i", "j")), ("sym", ("i+1", "j"))], 1,
        "suspension square with the symmetry commutes"),
    _eq(19, "ij", [("hom1", ("i", "j")), ("hom1", ("i", "j-1")),
                   ("hom2", ("i", "j")), ("hom2", ("i+1", "j"))], -1,
        "internal hom of complexes is a complex"),
    _eq(20, "ij", [("tens1", ("i", "j")), ("tens2", ("i", "j")), ("hom1", ("j-1", "i+j-1")),
                   ("ath", ("i", "j-1")), ("ath", ("i-1", "j"))], -1,
        "tensor-hom adjunction is well defined (differential exchange)"),
    _eq(21, "ij", [("tens1", ("i", "j")), ("hom2", ("j", "i+j")),
                   ("ath", ("i-1", "j")), ("ath", ("i", "j"))], 1,
        "tensor-hom adjunction is well defined (second exchange)"),
    _eq(22, "ij", [("ath", ("j-i", "i")), ("ath", ("i", "j-i")), ("sym", ("j-i", "i"))],
        SignExpr(2, 1, binom=(0, 1)),
        "double-dual normalization"),
)

WINDOW = tuple(range(-4, 4))


@dataclass(frozen=True)
class RowReport:
    num: int
    reason: str
    passed: bool
    first_failure: dict | None

    def __str__(self):
        status = "PASS" if self.passed else f"FAIL at {self.first_failure}"
        return f"row {self.num:2d}  {status:<34} {self.reason}"


def verify_table(assignment: dict, window=WINDOW) -> list[RowReport]:
    """Exhaustively check every compatibility row over the index window."""
    validate_assignment(assignment)
    reports = []
    for eq in EQUATIONS:
        failure = None
        for vals in itertools.product(window, repeat=len(eq.variables)):
            env = dict(zip(eq.variables, vals))
            got, want = eq.eval_at(assignment, env)
            if got != want:
                failure = env
                break
        reports.append(RowReport(eq.num, eq.reason, failure is None, failure))
    return reports


def table_passes(assignment: dict, window=WINDOW) -> bool:
    return all(r.passed for r in verify_table(assignment, window))


def theorem_family() -> list[dict]:
    """The four assignments obtained from the two global parameters."""
    return [default_assignment(a, b) for a in (1, -1) for b in (1, -1)]


class SearchSpaceExceeded(RuntimeError):
    pass


def search(family: dict, limit: int = 65536, window=WINDOW) -> list[dict]:
    """Exhaust a finite family {symbol: [candidate SignExpr, ...]}.

    Returns every full assignment drawn from the family that passes the
    whole table.  Symbols absent from ``family`` run over their single
    default; the empty family is empty, not the default.  Raises
    SearchSpaceExceeded when the product of choices exceeds ``limit``.
    """
    if not family:
        return []
    base = default_assignment()
    names = list(SYMBOLS)
    options = [list(family.get(n, [base[n]])) for n in names]
    size = 1
    for opt in options:
        size *= len(opt)
        if size > limit:
            raise SearchSpaceExceeded(f"search space exceeded: > {limit}")
    found = []
    for combo in itertools.product(*options):
        cand = dict(zip(names, combo))
        if table_passes(cand, window):
            found.append(cand)
    return found
