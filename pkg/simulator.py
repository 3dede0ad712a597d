"""State-vector simulation of parallel query algorithms.

The optimal algorithm is built from the best h-class found by counting: one
state per quotient coset, their Gram matrix U, and the measurement T U^(+1/2).
Arbitrary parallel algorithms (random, fixed-guess, the optimal one recast as
a unitary) are scored exactly by averaging over every oracle.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from algebra import (GroupElement, Vector, exponent_matrix, exponents_from_residues, fourier_matrix, phases,
                     residue_array, vector_add, vector_sub, char_eval)
from config import config
from counting import CountingResult, count_optimal, enumerate_pairs, fingerprint_arrays, pairs_for_class
from errors import CapacityError, ConsistencyError, StructuralError
from instance import OracleTable, QocInstance, QueryPair


@dataclass(frozen=True)
class ClassMember:
    z: Vector
    multiplicity: int
    pairs: Tuple[QueryPair, ...]


@dataclass(frozen=True)
class ClassBasis:
    h: Vector
    members: Tuple[ClassMember, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.asarray([m.multiplicity for m in self.members], dtype=np.int64)

    @property
    def pairs(self) -> List[QueryPair]:
        return [pair for m in self.members for pair in m.pairs]


@dataclass
class GramReport:
    dimension: int
    class_size: int
    gram: np.ndarray
    sqrt_gram: np.ndarray
    measurement: np.ndarray
    per_coset_success: np.ndarray
    total_success: float
    rank: int
    square_identity_error: float
    diagonal_identity_error: float

    @property
    def spread(self) -> float:
        return float(self.per_coset_success.max() - self.per_coset_success.min())


@dataclass(eq=False)
class ParallelAlgorithm:
    """Initial state over (pair, workspace) labels, a unitary, and a label -> coset decoder

    Basis label of pair i and workspace slot w is i * workspace + w.
    """

    init: np.ndarray
    mix: np.ndarray
    decode: np.ndarray
    pairs: Tuple[QueryPair, ...]
    workspace: int
    label: str = "parallel"
    seed: Optional[int] = None

    def __post_init__(self):
        self.pairs = tuple(self.pairs)
        dim = len(self.pairs) * self.workspace
        if self.init.shape != (dim,) or self.mix.shape != (dim, dim) or self.decode.shape != (dim,):
            raise StructuralError(f"{self.label}: expected dimension {dim}, got init {self.init.shape}, "
                                  f"mix {self.mix.shape}, decode {self.decode.shape}")
        norm_error = abs(np.linalg.norm(self.init) - 1.0)
        if norm_error > config.NORM_TOLERANCE:
            raise ConsistencyError(f"{self.label}: initial state norm is off by {norm_error:.3e}")
        unitary_error = np.abs(self.mix.conj().T @ self.mix - np.eye(dim)).max()
        if unitary_error > config.UNITARY_TOLERANCE:
            raise ConsistencyError(f"{self.label}: mixing matrix is not unitary (error {unitary_error:.3e})")

    @property
    def dimension(self) -> int:
        return len(self.pairs) * self.workspace


def _require_linalg(what: str, size: int, capacity: Optional[int]):
    capacity = config.LINALG_CAPACITY if capacity is None else capacity
    if size > capacity:
        raise CapacityError(what, size, capacity)


def _as_matrix(states: Union[np.ndarray, Sequence[np.ndarray]]) -> np.ndarray:
    if isinstance(states, np.ndarray) and states.ndim == 2:
        return states
    states = list(states)
    if len({len(s) for s in states}) > 1:
        raise StructuralError(f"States of different dimensions: {sorted({len(s) for s in states})}")
    return np.column_stack(states) if states else np.zeros((0, 0), dtype=complex)


def class_basis(inst: QocInstance, q: int, counting: Optional[CountingResult] = None) -> ClassBasis:
    counting = counting if counting is not None else count_optimal(inst, q)
    grouped = pairs_for_class(inst, q, counting.best_h)
    members = tuple(ClassMember(z, len(pairs), tuple(pairs)) for z, pairs in grouped.items())
    if len(members) != counting.best_class_size:
        raise ConsistencyError(f"{inst.label}: class re-enumeration found {len(members)} members, "
                               f"counting found {counting.best_class_size}")
    for m in members:
        if counting.multiplicities.get(m.z) != m.multiplicity:
            raise ConsistencyError(f"{inst.label}: multiplicity of z={m.z} disagrees with counting")
    return ClassBasis(counting.best_h, members)


def class_states(inst: QocInstance, q: int, basis: ClassBasis, expand: bool = False,
                 capacity: Optional[int] = None) -> np.ndarray:
    """Columns are the post-query states for every quotient coefficient vector, in lexicographic order"""
    _require_linalg(f"Coset states of {inst.label}", inst.quotient_order, capacity)
    group = inst.group
    gammas = group.vectors(inst.t)
    exponents = exponent_matrix(group, [m.z for m in basis.members], gammas)
    states = phases(exponents, group.phase_order) / math.sqrt(basis.size)
    if not expand:
        return states
    mult = basis.multiplicities
    return np.repeat(states, mult, axis=0) / np.sqrt(np.repeat(mult, mult))[:, None]


def build_class_state(inst: QocInstance, q: int, basis: ClassBasis, gamma: Sequence[GroupElement],
                      expand: bool = False) -> np.ndarray:
    if len(gamma) != inst.t:
        raise StructuralError(f"gamma must have {inst.t} entries, got {len(gamma)}")
    exponents = exponent_matrix(inst.group, [m.z for m in basis.members], [tuple(gamma)])[:, 0]
    state = phases(exponents, inst.group.phase_order) / math.sqrt(basis.size)
    if not expand:
        return state
    mult = basis.multiplicities
    return np.repeat(state, mult) / np.sqrt(np.repeat(mult, mult))


def gram_matrix(states: Union[np.ndarray, Sequence[np.ndarray]]) -> np.ndarray:
    T = _as_matrix(states)
    return T.conj().T @ T


def _spectral_roots(U: np.ndarray, floor: Optional[float] = None,
                    tolerance: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Principal root, pseudo-inverse root, null-space basis and rank of a PSD Hermitian matrix"""
    floor = config.EIGENVALUE_FLOOR if floor is None else floor
    tolerance = config.RANK_TOLERANCE if tolerance is None else tolerance
    values, vectors = np.linalg.eigh(U)
    if values.size and values.min() < floor:
        raise ConsistencyError(f"Gram matrix has eigenvalue {values.min():.3e} below {floor:.1e}")
    cutoff = tolerance * max(values.max(), 1.0) if values.size else 0.0
    support = values > cutoff
    kept = np.where(support, values, 0.0)
    root = (vectors * np.sqrt(kept)) @ vectors.conj().T
    inverse = np.zeros_like(values)
    inverse[support] = 1.0 / np.sqrt(values[support])
    inv_root = (vectors * inverse) @ vectors.conj().T
    return root, inv_root, vectors[:, ~support], int(support.sum())


def sqrt_gram(U: np.ndarray, class_size: int, quotient_order: int, tolerance: Optional[float] = None) -> np.ndarray:
    """Closed-form root sqrt(|E|/|C|) U, checked against the spectral root"""
    tolerance = config.MATRIX_TOLERANCE if tolerance is None else tolerance
    closed = math.sqrt(class_size / quotient_order) * U
    spectral, _, _, _ = _spectral_roots(U)
    mismatch = np.abs(closed - spectral).max() if U.size else 0.0
    if mismatch > tolerance:
        raise ConsistencyError(f"Closed-form Gram root disagrees with the spectral root by {mismatch:.3e}")
    return closed


def diagonal_square_sum(M: np.ndarray) -> float:
    """Sum of squared moduli of the diagonal entries"""
    return float(np.sum(np.abs(np.diag(M)) ** 2))


def span_rank(states: Union[np.ndarray, Sequence[np.ndarray]], tolerance: Optional[float] = None) -> int:
    tolerance = config.RANK_TOLERANCE if tolerance is None else tolerance
    T = _as_matrix(states)
    if T.size == 0:
        return 0
    singular = np.linalg.svd(T, compute_uv=False)
    return int(np.sum(singular > tolerance * singular.max()))


def optimal_success(inst: QocInstance, q: int, counting: Optional[CountingResult] = None,
                    capacity: Optional[int] = None, tolerance: Optional[float] = None) -> GramReport:
    tolerance = config.MATRIX_TOLERANCE if tolerance is None else tolerance
    _require_linalg(f"Gram matrix of {inst.label}", inst.quotient_order, capacity)
    counting = counting if counting is not None else count_optimal(inst, q)
    _require_linalg(f"Class states of {inst.label}", counting.best_class_size, capacity)
    basis = class_basis(inst, q, counting)

    T = class_states(inst, q, basis, capacity=capacity)
    U = gram_matrix(T)
    root = sqrt_gram(U, basis.size, inst.quotient_order, tolerance)
    _, inv_root, _, rank = _spectral_roots(U)
    R = T @ inv_root
    per_coset = np.abs(np.einsum("ij,ij->j", R.conj(), T)) ** 2

    square_error = float(np.abs(U @ U - (inst.quotient_order / basis.size) * U).max())
    diagonal_error = abs(diagonal_square_sum(root) - basis.size)
    if square_error > tolerance:
        raise ConsistencyError(f"{inst.label}: U^2 deviates from (|C|/|E|) U by {square_error:.3e}")
    if diagonal_error > tolerance:
        raise ConsistencyError(f"{inst.label}: squared diagonal of the root misses |E| by {diagonal_error:.3e}")

    total = float(per_coset.mean())
    logging.info(f"{inst.label} q={q}: simulated success {total:.12g}, rank {rank}")
    return GramReport(
        dimension=inst.quotient_order,
        class_size=basis.size,
        gram=U,
        sqrt_gram=root,
        measurement=R,
        per_coset_success=per_coset,
        total_success=total,
        rank=span_rank(T),
        square_identity_error=square_error,
        diagonal_identity_error=diagonal_error,
    )


def haar_unitary(dimension: int, rng: np.random.Generator) -> np.ndarray:
    gaussian = (rng.normal(size=(dimension, dimension)) + 1j * rng.normal(size=(dimension, dimension))) / math.sqrt(2)
    q, r = np.linalg.qr(gaussian)
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


def _all_pairs(inst: QocInstance, q: int, workspace: int, capacity: Optional[int]) -> List[QueryPair]:
    pairs = list(enumerate_pairs(inst, q))
    _require_linalg(f"Parallel algorithm on {inst.label} q={q}", len(pairs) * workspace, capacity)
    return pairs


def random_parallel_algorithm(inst: QocInstance, q: int, seed: int, workspace: Optional[int] = None,
                              capacity: Optional[int] = None) -> ParallelAlgorithm:
    workspace = inst.quotient_order if workspace is None else workspace
    pairs = _all_pairs(inst, q, workspace, capacity)
    dim = len(pairs) * workspace
    rng = np.random.default_rng(seed)
    init = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    init = init / np.linalg.norm(init)
    mix = haar_unitary(dim, rng)
    decode = np.arange(dim) % inst.quotient_order
    return ParallelAlgorithm(init, mix, decode, tuple(pairs), workspace, f"random seed={seed}", seed)


def fixed_guess_algorithm(inst: QocInstance, q: int, gamma: Sequence[GroupElement],
                          capacity: Optional[int] = None) -> ParallelAlgorithm:
    pairs = _all_pairs(inst, q, 1, capacity)
    dim = len(pairs)
    init = np.zeros(dim, dtype=complex)
    init[0] = 1.0
    decode = np.full(dim, inst.group.vector_index(gamma))
    return ParallelAlgorithm(init, np.eye(dim, dtype=complex), decode, tuple(pairs), 1, f"guess {tuple(gamma)}")


def optimal_parallel_algorithm(inst: QocInstance, q: int, counting: Optional[CountingResult] = None,
                               capacity: Optional[int] = None) -> ParallelAlgorithm:
    """The optimal measurement dilated into a unitary followed by a computational-basis readout"""
    _require_linalg(f"Gram matrix of {inst.label}", inst.quotient_order, capacity)
    counting = counting if counting is not None else count_optimal(inst, q)
    basis = class_basis(inst, q, counting)
    cosets = inst.quotient_order

    T = class_states(inst, q, basis, expand=True, capacity=capacity)
    U = gram_matrix(T)
    _, inv_root, null_space, rank = _spectral_roots(U)
    R = T @ inv_root

    all_pairs = list(enumerate_pairs(inst, q))
    workspace = 1 + math.ceil((cosets - rank) / len(all_pairs))
    dim = len(all_pairs) * workspace
    _require_linalg(f"Parallel algorithm on {inst.label} q={q}", dim, capacity)

    position = {pair: i * workspace for i, pair in enumerate(all_pairs)}
    class_columns = [position[pair] for pair in basis.pairs]
    spare_columns = [i * workspace + w for i in range(len(all_pairs)) for w in range(1, workspace)]

    init = np.zeros(dim, dtype=complex)
    # coset 0 carries only trivial phases, so its state is the 1/sqrt(|E| S) superposition
    init[class_columns] = T[:, 0]
    rows = np.zeros((cosets, dim), dtype=complex)
    rows[:, class_columns] = R.conj().T
    rows[:, spare_columns[:cosets - rank]] = null_space

    _, _, vh = np.linalg.svd(rows)
    mix = np.vstack([rows, vh[cosets:]])
    decode = np.arange(dim) % cosets
    return ParallelAlgorithm(init, mix, decode, tuple(all_pairs), workspace, "optimal")


def _success_table(alg: ParallelAlgorithm, inst: QocInstance, q: int,
                   shift: Optional[Tuple[Vector, Vector]] = None, capacity: Optional[int] = None) -> np.ndarray:
    """Success probability for every oracle, shape (|G|^s, |G|^t), coefficients in lexicographic order"""
    capacity = config.ORACLE_CAPACITY if capacity is None else capacity
    group = inst.group
    oracles = group.order ** (inst.s + inst.t)
    if oracles > capacity:
        raise CapacityError(f"Averaging over the oracles of {inst.label}", oracles, capacity)

    pairs, hs, zs = fingerprint_arrays(inst, q)
    if list(alg.pairs) != pairs:
        raise StructuralError(f"{alg.label} was built for different query pairs than {inst.label} at q={q}")

    betas = group.vectors(inst.s)
    gammas = group.vectors(inst.t)
    decoded = [gammas[int(c)] for c in alg.decode]
    if shift is not None:
        beta0, gamma0 = shift
        betas = [vector_add(b, beta0) for b in betas]
        shifted = [vector_add(g, gamma0) for g in gammas]
        decoded = [vector_sub(g, gamma0) for g in decoded]
    else:
        shifted = gammas

    order = group.phase_order
    beta_exp = exponents_from_residues(group, hs, residue_array(group, betas, inst.s))
    gamma_exp = exponents_from_residues(group, zs, residue_array(group, shifted, inst.t))
    hits = np.zeros((alg.dimension, len(gammas)))
    hits[np.arange(alg.dimension), [group.vector_index(g) for g in decoded]] = 1.0

    table = np.zeros((len(betas), len(gammas)))
    for b in range(len(betas)):
        query_phases = np.repeat(phases((beta_exp[:, b][:, None] + gamma_exp) % order, order), alg.workspace, axis=0)
        final = alg.mix @ (alg.init[:, None] * query_phases)
        table[b] = np.einsum("dc,dc->c", np.abs(final) ** 2, hits)
    return table


def run_parallel_algorithm(alg: ParallelAlgorithm, inst: QocInstance, q: int, per_oracle: bool = False,
                           capacity: Optional[int] = None):
    """Average success over all oracles; with per_oracle also the flat per-oracle array"""
    table = _success_table(alg, inst, q, capacity=capacity)
    success = float(table.mean())
    if per_oracle:
        return success, table.reshape(-1)
    return success


def oracle_shift_run(alg: ParallelAlgorithm, inst: QocInstance, q: int, shift: Tuple[Vector, Vector],
                     capacity: Optional[int] = None) -> float:
    """Run against A + A0 for every A and subtract A0's quotient coefficients from the answer"""
    beta0, gamma0 = shift
    if len(beta0) != inst.s or len(gamma0) != inst.t:
        raise StructuralError(f"Shift needs {inst.s} kernel and {inst.t} quotient coefficients")
    return float(_success_table(alg, inst, q, shift=(tuple(beta0), tuple(gamma0)), capacity=capacity).mean())


def _query_index(inst: QocInstance, table: OracleTable):
    if table.domain != inst.domain or table.group != inst.group:
        raise StructuralError(f"Oracle table does not belong to {inst.label}")
    return inst.group.elements(), inst.group.order


def controlled_add_unitary(inst: QocInstance, table: OracleTable) -> np.ndarray:
    """|x, g> -> |x, g + A(x)>"""
    elements, n = _query_index(inst, table)
    dim = len(inst.domain) * n
    U = np.zeros((dim, dim), dtype=complex)
    for i, x in enumerate(inst.domain):
        for g in elements:
            U[i * n + inst.group.index(g + table(x)), i * n + inst.group.index(g)] = 1.0
    return U


def phase_query_unitary(inst: QocInstance, table: OracleTable) -> np.ndarray:
    """|x, r> -> char_eval(r, A(x)) |x, r>"""
    elements, n = _query_index(inst, table)
    diagonal = [char_eval(r, table(x)).to_complex() for x in inst.domain for r in elements]
    return np.diag(np.asarray(diagonal, dtype=complex))


def query_fourier_transform(inst: QocInstance) -> np.ndarray:
    """Group Fourier transform on the answer register, identity on the point register"""
    return np.kron(np.eye(len(inst.domain)), fourier_matrix(inst.group))
