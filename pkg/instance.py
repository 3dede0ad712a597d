"""Oracle-classification instances in kernel/quotient form and their generators.

An instance is a domain, a group, a kernel basis (functions whose coefficients
do not matter) and a quotient basis (functions whose coefficients must be
recovered). The classifying homomorphism itself is never materialised.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, symbols

from algebra import GroupElement, GroupSpec, Vector, mod_inverse, prime_field
from config import config
from errors import CapacityError, DomainError, StructuralError

_x = symbols("x")

KINDS = ("summation", "interrogation", "interpolation", "evaluation", "extrapolation", "custom", "identification")


@dataclass(frozen=True)
class OracleTable:
    domain: Tuple[int, ...]
    values: Tuple[GroupElement, ...]
    _lookup: Dict[int, int] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        domain = tuple(int(x) for x in self.domain)
        values = tuple(self.values)
        if len(domain) != len(values):
            raise StructuralError(f"Table has {len(values)} values for {len(domain)} domain points")
        if len(set(domain)) != len(domain):
            raise DomainError(f"Domain points must be distinct: {list(domain)}")
        if values and len({v.group for v in values}) != 1:
            raise StructuralError("Table values live in different groups")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_lookup", {x: i for i, x in enumerate(domain)})

    @property
    def group(self) -> GroupSpec:
        if not self.values:
            raise DomainError("An empty table has no value group")
        return self.values[0].group

    def __call__(self, x: int) -> GroupElement:
        try:
            return self.values[self._lookup[x]]
        except KeyError:
            raise DomainError(f"Point {x} is outside the domain {list(self.domain)}")

    def as_dict(self) -> Dict[int, GroupElement]:
        return dict(zip(self.domain, self.values))


@dataclass(frozen=True)
class QueryPair:
    """Sorted distinct query points together with one character index per point"""

    points: Tuple[int, ...]
    chars: Tuple[GroupElement, ...]

    def __post_init__(self):
        points = tuple(int(x) for x in self.points)
        chars = tuple(self.chars)
        if len(points) != len(chars):
            raise StructuralError(f"{len(points)} points but {len(chars)} characters")
        if any(a >= b for a, b in zip(points, points[1:])):
            raise DomainError(f"Query points must be strictly increasing: {list(points)}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "chars", chars)

    @property
    def q(self) -> int:
        return len(self.points)

    @classmethod
    def canonical(cls, points: Sequence[int], chars: Sequence[GroupElement]) -> "QueryPair":
        """Sort by point and merge repeated points by adding their characters"""
        if len(points) != len(chars):
            raise StructuralError(f"{len(points)} points but {len(chars)} characters")
        merged: Dict[int, GroupElement] = {}
        for x, r in zip(points, chars):
            merged[int(x)] = merged[int(x)] + r if int(x) in merged else r
        ordered = sorted(merged)
        return cls(tuple(ordered), tuple(merged[x] for x in ordered))


@dataclass(frozen=True)
class QocInstance:
    domain: Tuple[int, ...]
    group: GroupSpec
    kernel_basis: Tuple[OracleTable, ...]
    quotient_basis: Tuple[OracleTable, ...]
    label: str
    kind: str = "custom"
    params: Tuple[Tuple[str, object], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(int(x) for x in self.domain))
        object.__setattr__(self, "kernel_basis", tuple(self.kernel_basis))
        object.__setattr__(self, "quotient_basis", tuple(self.quotient_basis))
        if list(self.domain) != sorted(set(self.domain)):
            raise DomainError(f"Domain must be strictly increasing: {list(self.domain)}")
        if not self.domain:
            raise DomainError("Domain must contain at least one point")
        if self.kind not in KINDS:
            raise DomainError(f"Unknown instance kind: {self.kind}")
        if not self.quotient_basis:
            raise DomainError("Quotient basis must contain at least one table")
        for table in self.kernel_basis + self.quotient_basis:
            if table.domain != self.domain:
                raise StructuralError(f"Basis table domain {list(table.domain)} differs from {list(self.domain)}")
            if table.group != self.group:
                raise StructuralError(f"Basis table group {table.group} differs from {self.group}")

    @property
    def s(self) -> int:
        return len(self.kernel_basis)

    @property
    def t(self) -> int:
        return len(self.quotient_basis)

    @property
    def quotient_order(self) -> int:
        return self.group.order ** self.t

    @property
    def kernel_order(self) -> int:
        return self.group.order ** self.s

    @property
    def param_dict(self) -> Dict[str, object]:
        return dict(self.params)


def _table(domain: Sequence[int], group: GroupSpec, fn) -> OracleTable:
    return OracleTable(tuple(domain), tuple(group.element(fn(x)) for x in domain))


def _indicator(domain: Sequence[int], group: GroupSpec, y: int) -> OracleTable:
    return _table(domain, group, lambda x: 1 if x == y else 0)


def _poly_table(poly: Poly, domain: Sequence[int], group: GroupSpec, p: int) -> OracleTable:
    return _table(domain, group, lambda a: int(poly.eval(a)) % p)


def make_summation(M: int, group: GroupSpec) -> QocInstance:
    """Recover the sum of an arbitrary function on M points"""
    if M < 2:
        raise DomainError(f"Summation needs M >= 2, got {M}")
    domain = tuple(range(M))
    minus_one = -group.unit
    kernel = tuple(
        _table(domain, group, lambda x, y=y: minus_one.residues if x == 0 else (1 if x == y else 0))
        for y in range(1, M)
    )
    quotient = (_indicator(domain, group, 0),)
    return QocInstance(domain, group, kernel, quotient, f"summation M={M} G={group}", "summation",
                       (("M", M), ("moduli", group.moduli)))


def make_interrogation(M: int, group: GroupSpec, targets: Iterable[int]) -> QocInstance:
    """Recover the values on a target set of k points"""
    targets = tuple(sorted(set(int(y) for y in targets)))
    if M < 1:
        raise DomainError(f"Interrogation needs M >= 1, got {M}")
    if not targets:
        raise DomainError("Interrogation needs at least one target point")
    if targets[0] < 0 or targets[-1] >= M:
        raise DomainError(f"Targets {list(targets)} fall outside [0, {M - 1}]")
    domain = tuple(range(M))
    kernel = tuple(_indicator(domain, group, y) for y in domain if y not in targets)
    quotient = tuple(_indicator(domain, group, y) for y in targets)
    return QocInstance(domain, group, kernel, quotient,
                       f"interrogation M={M} G={group} S={list(targets)}", "interrogation",
                       (("M", M), ("moduli", group.moduli), ("targets", targets)))


def make_interpolation(p: int, d: int) -> QocInstance:
    """Recover every coefficient of a degree-d polynomial over F_p"""
    group = prime_field(p)
    if d < 1:
        raise DomainError(f"Degree must be at least 1, got {d}")
    domain = tuple(range(p))
    quotient = tuple(_table(domain, group, lambda x, i=i: pow(x, i, p)) for i in range(d + 1))
    return QocInstance(domain, group, (), quotient, f"interpolation p={p} d={d}", "interpolation",
                       (("p", p), ("d", d)))


def make_evaluation(p: int, d: int, targets: Iterable[int]) -> QocInstance:
    """Recover the values of a degree-d polynomial at k target points"""
    group = prime_field(p)
    raw = [int(y) for y in targets]
    target_set = tuple(sorted(set(raw)))
    if len(target_set) != len(raw):
        raise DomainError(f"Evaluation targets must be distinct: {raw}")
    if any(y < 0 or y >= p for y in target_set):
        raise DomainError(f"Targets {raw} fall outside F_{p}")
    k = len(target_set)
    if not 1 <= k <= d:
        raise DomainError(f"Evaluation needs 1 <= k <= d, got k={k}, d={d}")
    domain = tuple(range(p))

    vanishing = Poly(1, _x, modulus=p)
    for y in target_set:
        vanishing = vanishing * Poly(_x - y, _x, modulus=p)
    kernel = tuple(
        _poly_table(vanishing * Poly(_x ** i, _x, modulus=p), domain, group, p) for i in range(d - k + 1)
    )

    # Lagrange polynomials through the targets so the quotient coordinates are the target values
    quotient = []
    for y in target_set:
        numerator = Poly(1, _x, modulus=p)
        denominator = 1
        for other in target_set:
            if other != y:
                numerator = numerator * Poly(_x - other, _x, modulus=p)
                denominator = denominator * (y - other) % p
        quotient.append(_poly_table(numerator.mul_ground(mod_inverse(denominator, p)), domain, group, p))

    return QocInstance(domain, group, kernel, tuple(quotient),
                       f"evaluation p={p} d={d} Y={list(target_set)}", "evaluation",
                       (("p", p), ("d", d), ("targets", target_set)))


def make_extrapolation(p: int, d: int) -> QocInstance:
    """Recover the constant term of a degree-d polynomial queried away from zero"""
    group = prime_field(p)
    if d < 1:
        raise DomainError(f"Degree must be at least 1, got {d}")
    domain = tuple(range(1, p))
    kernel = tuple(_table(domain, group, lambda x, i=i: pow(x, i, p)) for i in range(1, d + 1))
    quotient = (_table(domain, group, lambda x: 1),)
    return QocInstance(domain, group, kernel, quotient, f"extrapolation p={p} d={d}", "extrapolation",
                       (("p", p), ("d", d)))


def make_custom(domain: Sequence[int], group: GroupSpec, kernel_values: Sequence[Sequence],
                quotient_values: Sequence[Sequence], label: str = "custom") -> QocInstance:
    """Build an instance from explicit value lists, one list per basis function"""
    domain = tuple(int(x) for x in domain)

    def build(values) -> OracleTable:
        if len(values) != len(domain):
            raise DomainError(f"Basis table has {len(values)} values for {len(domain)} domain points")
        return OracleTable(domain, tuple(group.element(v) for v in values))

    return QocInstance(domain, group, tuple(build(v) for v in kernel_values),
                       tuple(build(v) for v in quotient_values), label, "custom",
                       (("moduli", group.moduli),))


def as_identification(inst: QocInstance) -> QocInstance:
    """The same function family with every coefficient to be recovered"""
    return QocInstance(inst.domain, inst.group, (), inst.kernel_basis + inst.quotient_basis,
                       f"identification of {inst.label}", "identification", inst.params)


def _matrix(inst: QocInstance, basis: Sequence[OracleTable], points: Sequence[int]) -> List[List[GroupElement]]:
    domain = set(inst.domain)
    for x in points:
        if x not in domain:
            raise DomainError(f"Point {x} is outside the domain of {inst.label}")
    return [[table(x) for x in points] for table in basis]


def matrix_B(inst: QocInstance, points: Sequence[int]) -> List[List[GroupElement]]:
    """Kernel basis evaluated at the query points, one row per basis function"""
    return _matrix(inst, inst.kernel_basis, points)


def matrix_C(inst: QocInstance, points: Sequence[int]) -> List[List[GroupElement]]:
    """Quotient basis evaluated at the query points, one row per basis function"""
    return _matrix(inst, inst.quotient_basis, points)


def oracle_from_coefficients(inst: QocInstance, beta: Sequence[GroupElement],
                             gamma: Sequence[GroupElement]) -> OracleTable:
    if len(beta) != inst.s or len(gamma) != inst.t:
        raise StructuralError(f"Expected {inst.s} kernel and {inst.t} quotient coefficients, "
                              f"got {len(beta)} and {len(gamma)}")
    values = []
    for x in inst.domain:
        total = inst.group.zero
        for b, table in zip(beta, inst.kernel_basis):
            total = total + b * table(x)
        for c, table in zip(gamma, inst.quotient_basis):
            total = total + c * table(x)
        values.append(total)
    return OracleTable(inst.domain, tuple(values))


def sample_oracle(inst: QocInstance, seed: Optional[int] = None) -> Tuple[Vector, Vector, OracleTable]:
    """Draw uniform kernel and quotient coefficients and build the resulting oracle"""
    rng = np.random.default_rng(seed)
    group = inst.group

    def draw(n: int) -> Vector:
        return tuple(group.element(tuple(int(rng.integers(m)) for m in group.moduli)) for _ in range(n))

    beta = draw(inst.s)
    gamma = draw(inst.t)
    return beta, gamma, oracle_from_coefficients(inst, beta, gamma)


def coefficient_tables(inst: QocInstance, capacity: Optional[int] = None) -> np.ndarray:
    """Residue tables of every oracle, shape (|G|^(s+t), |X|, rank), coefficient vectors in lexicographic order"""
    capacity = config.FREENESS_CAPACITY if capacity is None else capacity
    group = inst.group
    n = inst.s + inst.t
    count = group.order ** n
    if count > capacity:
        raise CapacityError(f"Freeness check for {inst.label}", count, capacity)

    basis = np.asarray([[table(x).residues for x in inst.domain]
                        for table in inst.kernel_basis + inst.quotient_basis], dtype=np.int64)
    elements = np.asarray([g.residues for g in group.elements()], dtype=np.int64)
    moduli = np.asarray(group.moduli, dtype=np.int64)

    tables = np.zeros((1, len(inst.domain), group.rank), dtype=np.int64)
    for j in range(n):
        # (count so far, |G|) grid: earlier coefficients stay most significant
        contribution = elements[:, None, :] * basis[j][None, :, :] % moduli
        tables = (tables[:, None, :, :] + contribution[None, :, :, :]) % moduli
        tables = tables.reshape(-1, len(inst.domain), group.rank)
    return tables


def verify_free(inst: QocInstance, capacity: Optional[int] = None) -> bool:
    """True iff distinct coefficient vectors always give distinct oracle tables"""
    tables = coefficient_tables(inst, capacity)
    distinct = np.unique(tables.reshape(tables.shape[0], -1), axis=0).shape[0]
    free = distinct == tables.shape[0]
    if not free:
        logging.info(f"{inst.label}: {tables.shape[0]:,} coefficient vectors give only {distinct:,} tables")
    return free
