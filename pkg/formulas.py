"""Closed-form success probabilities for the five named problem families.

Exact values are Fractions. Brackets that involve e^(2 sqrt q) carry a float
upper end. Lower ends that fall below random guessing are clamped to it and
the clamp is recorded in the regime label.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from sympy import isprime, primitive_root

from algebra import GroupSpec, Vector, mod_inverse
from errors import ConsistencyError, DomainError, RegimeError
from instance import QocInstance, QueryPair

Number = Union[Fraction, float]


@dataclass(frozen=True)
class BoundBracket:
    lower: Number
    upper: Number
    exact: bool
    regime: str

    def __post_init__(self):
        if self.lower > self.upper:
            raise ConsistencyError(f"Bracket [{self.lower}, {self.upper}] is inverted ({self.regime})")
        if self.exact and self.lower != self.upper:
            raise ConsistencyError(f"Exact bracket with distinct ends ({self.regime})")
        if self.lower < 0 or self.upper > 1:
            raise ConsistencyError(f"Bracket [{self.lower}, {self.upper}] leaves [0, 1] ({self.regime})")

    def contains(self, value: Number, tolerance: float = 0.0) -> bool:
        if self.exact and isinstance(value, Fraction) and isinstance(self.lower, Fraction):
            return value == self.lower
        if self.lower <= value <= self.upper:
            return True
        if isinstance(value, Fraction):
            return False
        slack = Fraction(tolerance)
        return self.lower - slack <= value <= self.upper + slack

    @classmethod
    def point(cls, value: Fraction, regime: str) -> "BoundBracket":
        return cls(value, value, True, regime)


def _require_prime(p: int):
    if not isprime(p):
        raise DomainError(f"Field size must be prime, got {p}")


def _clamped(value: Fraction, floor: Fraction, regime: str) -> Tuple[Fraction, str]:
    if value < floor:
        return floor, f"{regime}, clamped"
    return value, regime


def _large_query_lower(d: int, p: int) -> Fraction:
    half = math.ceil(d / 2)
    return 1 - Fraction(math.factorial(half + 1) + d + 1, p)


def summation_bound(M: int, q: int, N: int) -> BoundBracket:
    if N < 2:
        raise DomainError(f"Group order must be at least 2, got {N}")
    if M < 1 or q < 0:
        raise DomainError(f"Need M >= 1 and q >= 0, got M={M}, q={q}")
    if q > M:
        raise DomainError(f"q={q} exceeds the domain size M={M}")
    if q == M:
        return BoundBracket.point(Fraction(1), "summation, full domain")
    return BoundBracket.point(min(Fraction(M // (M - q), N), Fraction(1)), "summation")


def summation_perfect_queries(M: int, N: int) -> int:
    """Least q for which the sum is recovered with certainty"""
    if N < 2 or M < 1:
        raise DomainError(f"Need M >= 1 and N >= 2, got M={M}, N={N}")
    return math.ceil(Fraction(M * (N - 1), N))


def interrogation_bound(M: int, N: int, k: int, q: int) -> BoundBracket:
    if N < 2:
        raise DomainError(f"Group order must be at least 2, got {N}")
    if not 1 <= k <= M:
        raise DomainError(f"Need 1 <= k <= M, got k={k}, M={M}")
    if q < 0:
        raise DomainError(f"q must be non-negative, got {q}")
    reachable = sum(math.comb(k, i) * (N - 1) ** i for i in range(min(q, k) + 1))
    return BoundBracket.point(Fraction(reachable, N ** k), "interrogation")


def interpolation_bound(d: int, q: int, p: int) -> BoundBracket:
    _require_prime(p)
    if d < 1 or q < 0:
        raise DomainError(f"Need d >= 1 and q >= 0, got d={d}, q={q}")
    guess = Fraction(1, p ** (d + 1))
    if 2 * q <= d:
        return BoundBracket(guess, Fraction(1, p), False, "interpolation, below half degree")
    if 2 * q == d + 1:
        upper = Fraction(1, math.factorial(q))
        lower = upper * (1 - Fraction(math.comb(q + 1, 2), p))
        lower, regime = _clamped(lower, guess, "interpolation, threshold")
        return BoundBracket(lower, upper, lower == upper, regime)
    lower, regime = _clamped(_large_query_lower(d, p), guess, "interpolation, above threshold")
    return BoundBracket(lower, Fraction(1), lower == 1, regime)


def interpolation_collision_free(d: int, q: int, p: int) -> BoundBracket:
    """Exact value while 2q <= d + 1: nonzero characters on distinct points never collide"""
    _require_prime(p)
    if d < 1 or q < 0:
        raise DomainError(f"Need d >= 1 and q >= 0, got d={d}, q={q}")
    if 2 * q > d + 1:
        raise RegimeError(f"Collisions are possible once 2q > d+1 (d={d}, q={q})")
    if q > p:
        raise RegimeError(f"Only {p} distinct points exist, got q={q}")
    reachable = sum(math.comb(p, j) * (p - 1) ** j for j in range(q + 1))
    return BoundBracket.point(Fraction(reachable, p ** (d + 1)), "interpolation, collision free")


def evaluation_bound(d: int, q: int, p: int, k: Optional[int] = None) -> BoundBracket:
    """Forging k >= q+1 outputs of a degree-d polynomial from q queries, q <= d/2"""
    _require_prime(p)
    k = q + 1 if k is None else k
    if d < 1 or q < 0:
        raise DomainError(f"Need d >= 1 and q >= 0, got d={d}, q={q}")
    if 2 * q > d:
        raise RegimeError(f"No evaluation bound once q > d/2 (d={d}, q={q}); use interpolation_bound")
    if k < q + 1:
        raise RegimeError(f"k={k} targets can be queried directly with q={q}")
    guess = Fraction(1, p ** k)
    formula = (q + 1) * q * math.exp(2 * math.sqrt(q)) / p
    regime = "evaluation"
    if formula <= guess:
        upper = guess
        regime = "evaluation, random guess"
    elif formula >= 1:
        upper = Fraction(1)
        regime = "evaluation, clamped"
    else:
        upper = formula
    return BoundBracket(guess, upper, upper == guess, regime)


def extrapolation_bound(d: int, q: int, p: int) -> BoundBracket:
    _require_prime(p)
    if d < 1 or q < 0:
        raise DomainError(f"Need d >= 1 and q >= 0, got d={d}, q={q}")
    guess = Fraction(1, p)
    if 2 * q <= d:
        return BoundBracket.point(guess, "extrapolation, below half degree")
    if 2 * q == d + 1:
        upper = Fraction((p - 1) // q, p)
        if (p - 1) % q == 0:
            return BoundBracket.point(upper, "extrapolation, threshold, tight")
        return BoundBracket(min(guess, upper), max(guess, upper), False, "extrapolation, threshold")
    lower, regime = _clamped(_large_query_lower(d, p), guess, "extrapolation, above threshold")
    return BoundBracket(lower, Fraction(1), lower == 1, regime)


def extrapolation_tight_construction(p: int, q: int, x: int = 1) -> Tuple[Vector, List[QueryPair], List[int]]:
    """Pairs reaching (p-1)/q distinct constant-term outputs at degree 2q-1

    The points are x times the q-th roots of unity, every character is 1/x^q, and
    all pairs share the kernel fingerprint h = q at the x^q coordinate.
    """
    _require_prime(p)
    if q < 1 or (p - 1) % q:
        raise DomainError(f"q={q} must divide p-1={p - 1}")
    if x % p == 0:
        raise DomainError("The base point must be nonzero")
    group = GroupSpec.cyclic(p)
    omega = pow(int(primitive_root(p)), (p - 1) // q, p)
    h = tuple(group.element(q if i == q - 1 else 0) for i in range(2 * q - 1))

    pairs, outputs, seen = [], [], set()
    for a in range(1, p):
        base = a * x % p
        points = sorted(base * pow(omega, i, p) % p for i in range(q))
        key = tuple(points)
        if key in seen:
            continue
        seen.add(key)
        char = group.element(mod_inverse(pow(base, q, p), p))
        pairs.append(QueryPair(key, (char,) * q))
        outputs.append(q * char.residues[0] % p)
    return h, pairs, outputs


def bound_for(inst: QocInstance, q: int) -> BoundBracket:
    params = inst.param_dict
    if inst.kind == "summation":
        return summation_bound(params["M"], q, inst.group.order)
    if inst.kind == "interrogation":
        return interrogation_bound(params["M"], inst.group.order, len(params["targets"]), q)
    if inst.kind == "interpolation":
        return interpolation_bound(params["d"], q, params["p"])
    if inst.kind == "evaluation":
        return evaluation_bound(params["d"], q, params["p"], len(params["targets"]))
    if inst.kind == "extrapolation":
        return extrapolation_bound(params["d"], q, params["p"])
    raise RegimeError(f"No closed form for {inst.kind} instance {inst.label}")
