"""Exact optimal success probability by enumerating canonical query pairs.

Every canonical pair (x, r) is fingerprinted by h = B(x) r and z = C(x) r.
The optimum is the size of the largest h-class of distinct z, divided by |C|.
"""
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from algebra import GroupElement, Vector, dot
from config import config
from errors import CapacityError, ConsistencyError, DomainError
from instance import QocInstance, QueryPair, matrix_B, matrix_C

FlatKey = Tuple[int, ...]
# h -> z -> [point indices, character row, multiplicity]
Partition = Dict[FlatKey, Dict[FlatKey, list]]


@dataclass
class CountingResult:
    q: int
    classes: Dict[Vector, Set[Vector]]
    best_h: Vector
    best_class_size: int
    quotient_order: int
    probability: Fraction
    witnesses: Dict[Vector, QueryPair] = field(default_factory=dict)
    multiplicities: Dict[Vector, int] = field(default_factory=dict)
    pair_count: int = 0

    @property
    def class_pair_count(self) -> int:
        return sum(self.multiplicities.values())


def enumeration_size(inst: QocInstance, q: int) -> int:
    return math.comb(len(inst.domain), q) * inst.group.order ** q


def _check_q(inst: QocInstance, q: int):
    if q < 0 or q > len(inst.domain):
        raise DomainError(f"q must lie in [0, {len(inst.domain)}] for {inst.label}, got {q}")


def enumerate_pairs(inst: QocInstance, q: int) -> Iterator[QueryPair]:
    """Every canonical pair once: point subsets in lexicographic order, characters lexicographic within"""
    _check_q(inst, q)
    elements = inst.group.elements() if q else []
    for points in itertools.combinations(inst.domain, q):
        for chars in itertools.product(elements, repeat=q):
            yield QueryPair(points, chars)


def hz_of_pair(inst: QocInstance, pair: QueryPair) -> Tuple[Vector, Vector]:
    B = matrix_B(inst, pair.points)
    C = matrix_C(inst, pair.points)

    def apply(rows: List[List[GroupElement]]) -> Vector:
        if not pair.chars:
            return tuple(inst.group.zero for _ in rows)
        return tuple(dot(row, pair.chars) for row in rows)

    return apply(B), apply(C)


def _basis_residues(inst: QocInstance) -> Tuple[np.ndarray, np.ndarray]:
    rank = inst.group.rank

    def stack(basis) -> np.ndarray:
        arr = np.asarray([[table(x).residues for x in inst.domain] for table in basis], dtype=np.int64)
        return arr.reshape(len(basis), len(inst.domain), rank)

    return stack(inst.kernel_basis), stack(inst.quotient_basis)


def character_grid(inst: QocInstance, q: int) -> np.ndarray:
    """All of G^q as residues, shape (|G|^q, q, rank), same order as enumerate_pairs"""
    if q == 0:
        return np.zeros((1, 0, inst.group.rank), dtype=np.int64)
    elements = np.asarray([g.residues for g in inst.group.elements()], dtype=np.int64)
    rows = list(itertools.product(range(len(elements)), repeat=q))
    idx = np.asarray(rows, dtype=np.int64).reshape(len(rows), q)
    return elements[idx]


def _fingerprints(inst: QocInstance, kernel: np.ndarray, quotient: np.ndarray, grid: np.ndarray,
                  cols: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    moduli = np.asarray(inst.group.moduli, dtype=np.int64)
    cols = list(cols)
    h = np.einsum("nik,lik->nlk", grid, kernel[:, cols, :]) % moduli
    z = np.einsum("nik,lik->nlk", grid, quotient[:, cols, :]) % moduli
    return h, z


def fingerprint_arrays(inst: QocInstance, q: int) -> Tuple[List[QueryPair], np.ndarray, np.ndarray]:
    """Every canonical pair with its h and z as residue arrays of shape (pairs, s|t, rank)"""
    _check_q(inst, q)
    kernel, quotient = _basis_residues(inst)
    grid = character_grid(inst, q)
    chars = [tuple(inst.group.element(r) for r in row) for row in grid.tolist()]
    pairs, hs, zs = [], [], []
    for cols in itertools.combinations(range(len(inst.domain)), q):
        h, z = _fingerprints(inst, kernel, quotient, grid, cols)
        points = tuple(inst.domain[c] for c in cols)
        pairs.extend(QueryPair(points, row) for row in chars)
        hs.append(h)
        zs.append(z)
    return pairs, np.concatenate(hs), np.concatenate(zs)


def _count_partition(inst: QocInstance, q: int, subsets: Sequence[Tuple[int, ...]]) -> Partition:
    kernel, quotient = _basis_residues(inst)
    grid = character_grid(inst, q)
    n = grid.shape[0]
    rank = inst.group.rank
    classes: Partition = {}
    for cols in subsets:
        h, z = _fingerprints(inst, kernel, quotient, grid, cols)
        h_rows = h.reshape(n, inst.s * rank).tolist()
        z_rows = z.reshape(n, inst.t * rank).tolist()
        for row, (hk, zk) in enumerate(zip(h_rows, z_rows)):
            members = classes.setdefault(tuple(hk), {})
            zk = tuple(zk)
            if zk in members:
                members[zk][2] += 1
            else:
                members[zk] = [cols, row, 1]
    return classes


def _merge(parts: Iterable[Partition]) -> Partition:
    """Union in partition order; first occurrence keeps its witness, multiplicities add"""
    merged: Partition = {}
    for part in parts:
        for hk, members in part.items():
            target = merged.setdefault(hk, {})
            for zk, record in members.items():
                if zk in target:
                    target[zk][2] += record[2]
                else:
                    target[zk] = list(record)
    return merged


def _chunks(items: List, count: int) -> List[List]:
    size = math.ceil(len(items) / count)
    return [items[i:i + size] for i in range(0, len(items), size)]


def count_optimal(inst: QocInstance, q: int, capacity: Optional[int] = None,
                  workers: Optional[int] = None) -> CountingResult:
    _check_q(inst, q)
    capacity = config.ENUMERATION_CAPACITY if capacity is None else capacity
    workers = config.WORKERS if workers is None else workers
    size = enumeration_size(inst, q)
    if size > capacity:
        raise CapacityError(f"Counting {inst.label} at q={q}", size, capacity)

    subsets = list(itertools.combinations(range(len(inst.domain)), q))
    if workers > 1 and len(subsets) > 1:
        chunks = _chunks(subsets, workers)
        logging.info(f"Counting {inst.label} q={q}: {size:,} pairs over {len(chunks)} partitions")
        with ProcessPoolExecutor(max_workers=workers) as executor:
            merged = _merge(executor.map(_count_partition, [inst] * len(chunks), [q] * len(chunks), chunks))
    else:
        merged = _count_partition(inst, q, subsets)

    best_key, best_size = None, -1
    for hk, members in merged.items():
        if len(members) > best_size:
            best_key, best_size = hk, len(members)

    group = inst.group
    grid = character_grid(inst, q)
    witnesses, multiplicities = {}, {}
    for zk, (cols, row, count) in merged[best_key].items():
        z = group.vector_from_flat(zk)
        chars = tuple(group.element(r) for r in grid[row].tolist())
        witnesses[z] = QueryPair(tuple(inst.domain[c] for c in cols), chars)
        multiplicities[z] = count

    classes = {group.vector_from_flat(hk): {group.vector_from_flat(zk) for zk in members}
               for hk, members in merged.items()}
    probability = Fraction(best_size, inst.quotient_order)
    logging.info(f"{inst.label} q={q}: {len(classes)} h-classes, best holds {best_size} of {inst.quotient_order}")
    return CountingResult(
        q=q,
        classes=classes,
        best_h=group.vector_from_flat(best_key),
        best_class_size=best_size,
        quotient_order=inst.quotient_order,
        probability=probability,
        witnesses=witnesses,
        multiplicities=multiplicities,
        pair_count=size,
    )


def pairs_for_class(inst: QocInstance, q: int, h: Vector) -> Dict[Vector, List[QueryPair]]:
    """Canonical pairs with fingerprint h, grouped by z in first-seen order"""
    _check_q(inst, q)
    if len(h) != inst.s:
        raise DomainError(f"h must have {inst.s} entries, got {len(h)}")
    group = inst.group
    kernel, quotient = _basis_residues(inst)
    grid = character_grid(inst, q)
    n = grid.shape[0]
    target = np.asarray([g.residues for g in h], dtype=np.int64).reshape(inst.s, group.rank)
    chars = [tuple(group.element(r) for r in row) for row in grid.tolist()]

    grouped: Dict[FlatKey, List[QueryPair]] = {}
    for cols in itertools.combinations(range(len(inst.domain)), q):
        hs, zs = _fingerprints(inst, kernel, quotient, grid, cols)
        hits = np.all((hs == target).reshape(n, inst.s * group.rank), axis=1)
        points = tuple(inst.domain[c] for c in cols)
        for row in np.flatnonzero(hits).tolist():
            zk = tuple(zs[row].reshape(-1).tolist())
            grouped.setdefault(zk, []).append(QueryPair(points, chars[row]))
    return {group.vector_from_flat(zk): pairs for zk, pairs in grouped.items()}


def sweep_results(inst: QocInstance, q_range: Iterable[int], capacity: Optional[int] = None,
                  workers: Optional[int] = None) -> List[CountingResult]:
    """Counting results over q_range; success must not drop as q grows"""
    results: List[CountingResult] = []
    for q in q_range:
        result = count_optimal(inst, q, capacity=capacity, workers=workers)
        previous = results[-1] if results else None
        if previous is not None and result.probability < previous.probability and q > previous.q:
            raise ConsistencyError(f"{inst.label}: success dropped from {previous.probability} at q={previous.q} "
                                   f"to {result.probability} at q={q}")
        results.append(result)
    return results


def sweep(inst: QocInstance, q_range: Iterable[int], capacity: Optional[int] = None,
          workers: Optional[int] = None) -> List[Tuple[int, Fraction]]:
    return [(r.q, r.probability) for r in sweep_results(inst, q_range, capacity=capacity, workers=workers)]
