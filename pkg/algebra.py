"""Finite abelian groups Z_N1 x ... x Z_Nk, their characters, and prime fields.

Everything here is exact integer arithmetic. Complex numbers only appear in
``ExactPhase.to_complex`` and the matrix helpers the simulator consumes.
"""
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from sympy import isprime
from sympy import mod_inverse as _sympy_mod_inverse

from errors import DomainError, StructuralError

Vector = Tuple["GroupElement", ...]


@dataclass(frozen=True)
class GroupSpec:
    moduli: Tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(n) for n in self.moduli)
        if not moduli:
            raise DomainError("A group needs at least one cyclic factor")
        if any(n < 2 for n in moduli):
            raise DomainError(f"Every modulus must be at least 2, got {list(moduli)}")
        object.__setattr__(self, "moduli", moduli)

    @classmethod
    def cyclic(cls, n: int) -> "GroupSpec":
        return cls((n,))

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def phase_order(self) -> int:
        return math.lcm(*self.moduli)

    @property
    def weights(self) -> Tuple[int, ...]:
        """Per-factor multipliers L/N_i turning r_i*g_i into an exponent of order L"""
        return tuple(self.phase_order // n for n in self.moduli)

    @property
    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    @property
    def unit(self) -> "GroupElement":
        return GroupElement(self, (1,) * self.rank)

    def element(self, residues) -> "GroupElement":
        if isinstance(residues, (int, np.integer)):
            residues = (int(residues),) * self.rank
        residues = tuple(int(r) for r in residues)
        if len(residues) != self.rank:
            raise StructuralError(f"Expected {self.rank} residues for {self}, got {len(residues)}")
        return GroupElement(self, residues)

    def elements(self) -> List["GroupElement"]:
        """All elements in lexicographic residue order"""
        return [GroupElement(self, r) for r in itertools.product(*(range(n) for n in self.moduli))]

    def index(self, element: "GroupElement") -> int:
        _require_same(self, element.group)
        idx = 0
        for r, n in zip(element.residues, self.moduli):
            idx = idx * n + r
        return idx

    def vectors(self, n: int) -> List[Vector]:
        """All of G^n in lexicographic order (first coordinate most significant)"""
        return [tuple(v) for v in itertools.product(self.elements(), repeat=n)]

    def vector_index(self, vector: Sequence["GroupElement"]) -> int:
        idx = 0
        for g in vector:
            idx = idx * self.order + self.index(g)
        return idx

    def vector_from_flat(self, flat: Sequence[int]) -> Vector:
        """Rebuild a vector from concatenated residues"""
        k = self.rank
        return tuple(GroupElement(self, tuple(int(v) for v in flat[i:i + k])) for i in range(0, len(flat), k))

    def __str__(self) -> str:
        return " x ".join(f"Z_{n}" for n in self.moduli)


@dataclass(frozen=True)
class GroupElement:
    group: GroupSpec
    residues: Tuple[int, ...]

    def __post_init__(self):
        if len(self.residues) != self.group.rank:
            raise StructuralError(f"Element {self.residues} does not fit {self.group}")
        reduced = tuple(int(r) % n for r, n in zip(self.residues, self.group.moduli))
        object.__setattr__(self, "residues", reduced)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return add(self, other)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return add(self, -other)

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-r for r in self.residues))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return ring_mul(self, other)

    def is_zero(self) -> bool:
        return not any(self.residues)

    def __repr__(self) -> str:
        if self.group.rank == 1:
            return f"{self.residues[0]}"
        return f"({','.join(str(r) for r in self.residues)})"


@dataclass(frozen=True)
class ExactPhase:
    """The root of unity exp(2*pi*i*exponent/order)"""

    exponent: int
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise DomainError(f"Phase order must be positive, got {self.order}")
        object.__setattr__(self, "exponent", int(self.exponent) % self.order)

    def __mul__(self, other: "ExactPhase") -> "ExactPhase":
        if other.order != self.order:
            order = math.lcm(self.order, other.order)
            return ExactPhase(self.exponent * (order // self.order) + other.exponent * (order // other.order), order)
        return ExactPhase(self.exponent + other.exponent, self.order)

    def conjugate(self) -> "ExactPhase":
        return ExactPhase(-self.exponent, self.order)

    def is_one(self) -> bool:
        return self.exponent == 0

    def to_complex(self) -> complex:
        return complex(np.exp(2j * np.pi * self.exponent / self.order))


def _require_same(left: GroupSpec, right: GroupSpec):
    if left != right:
        raise StructuralError(f"Group mismatch: {left} vs {right}")


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    _require_same(a.group, b.group)
    return GroupElement(a.group, tuple(x + y for x, y in zip(a.residues, b.residues)))


def ring_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    """Componentwise product; the all-ones vector is the unit"""
    _require_same(a.group, b.group)
    return GroupElement(a.group, tuple(x * y for x, y in zip(a.residues, b.residues)))


def char_eval(r: GroupElement, g: GroupElement) -> ExactPhase:
    """Value of the character indexed by r at g"""
    _require_same(r.group, g.group)
    group = r.group
    exponent = sum(w * x * y for w, x, y in zip(group.weights, r.residues, g.residues))
    return ExactPhase(exponent, group.phase_order)


def mod_inverse(a: int, p: int) -> int:
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if a % p == 0:
        raise DomainError(f"{a} has no inverse modulo {p}")
    return int(_sympy_mod_inverse(a % p, p))


def dot(u: Sequence[GroupElement], v: Sequence[GroupElement]) -> GroupElement:
    """Ring inner product sum_i u_i * v_i"""
    if len(u) != len(v):
        raise StructuralError(f"Length mismatch: {len(u)} vs {len(v)}")
    if not u:
        raise StructuralError("Empty inner product has no group to live in")
    total = u[0].group.zero
    for a, b in zip(u, v):
        total = total + a * b
    return total


def vector_add(u: Sequence[GroupElement], v: Sequence[GroupElement]) -> Vector:
    if len(u) != len(v):
        raise StructuralError(f"Length mismatch: {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vector_sub(u: Sequence[GroupElement], v: Sequence[GroupElement]) -> Vector:
    if len(u) != len(v):
        raise StructuralError(f"Length mismatch: {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def residue_array(group: GroupSpec, vectors: Iterable[Sequence[GroupElement]], length: int) -> np.ndarray:
    """Stack vectors over G into an int array of shape (count, length, rank)"""
    rows = [[g.residues for g in v] for v in vectors]
    if not rows:
        return np.zeros((0, length, group.rank), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), length, group.rank)


def exponent_matrix(group: GroupSpec, left: Sequence[Sequence[GroupElement]],
                    right: Sequence[Sequence[GroupElement]]) -> np.ndarray:
    """Exact exponents E[i, j] of prod_m char_eval(left[i][m], right[j][m]), modulo phase_order"""
    lengths = {len(v) for v in left} | {len(v) for v in right}
    if len(lengths) > 1:
        raise StructuralError(f"Vectors of different lengths: {sorted(lengths)}")
    n = lengths.pop() if lengths else 0
    return exponents_from_residues(group, residue_array(group, left, n), residue_array(group, right, n))


def exponents_from_residues(group: GroupSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """exponent_matrix on residue arrays of shape (count, length, rank)"""
    if a.shape[1:] != b.shape[1:]:
        raise StructuralError(f"Residue arrays of shapes {a.shape} and {b.shape} do not pair up")
    weights = np.asarray(group.weights, dtype=np.int64)
    return np.einsum("imk,jmk,k->ij", a, b, weights) % group.phase_order


def phases(exponents: np.ndarray, order: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.asarray(exponents) / order)


def character_sum(r: GroupElement, group: GroupSpec) -> complex:
    _require_same(r.group, group)
    return complex(sum(char_eval(r, g).to_complex() for g in group.elements()))


def fourier_matrix(group: GroupSpec) -> np.ndarray:
    """Unitary with entry [r, g] = char_eval(r, g) / sqrt(|G|)"""
    elements = [(g,) for g in group.elements()]
    exponents = exponent_matrix(group, elements, elements)
    return phases(exponents, group.phase_order) / math.sqrt(group.order)


def prime_field(p: int) -> GroupSpec:
    if not isprime(p):
        raise DomainError(f"Field size must be prime, got {p}")
    return GroupSpec.cyclic(p)
