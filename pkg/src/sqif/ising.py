"""Ising encoding of the Babai cube and its two optimizers.

A cube state x in {0,1}^m picks the lattice point
    v(x) = b_opt + sum_j x_j * kappa_j * D_j
over the reduced basis columns D_j; its energy is the exact squared distance
|| t - v(x) ||^2. The QUBO coefficients come from expanding that square and
the spin form uses x_j = (1 - s_j) / 2, so bit 0 maps to spin +1. Energies
are real distances; no rescaling or normalization is applied.

Bitstrings are written MSB-first: character j of the string is x_j, and the
string read as binary is the state's integer value. Ties between equal
energies are always broken by that value, ascending, which makes both
optimizers deterministic regardless of chunking or thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize

from . import _energies
from .lattice import BabaiSolution, CvpInstance, ReducedBasis

__all__ = [
    "EnergySample",
    "IsingHamiltonian",
    "MAX_ENUMERATION_DIM",
    "MAX_STATEVECTOR_DIM",
    "brute_force_low_energy",
    "build_hamiltonian",
    "energy",
    "qaoa_expectation",
    "qaoa_sample",
]

MAX_ENUMERATION_DIM = 30
MAX_STATEVECTOR_DIM = 20


@dataclass(frozen=True)
class IsingHamiltonian:
    """offset + sum_j linear_j s_j + sum_{i<j} couplings_ij s_i s_j."""

    num_vars: int
    offset: float
    linear: np.ndarray  # (m,) float64
    couplings: np.ndarray  # (m, m) float64, strictly upper triangular


@dataclass(frozen=True)
class EnergySample:
    """One sampled cube state; weight counts repeated QAOA shots."""

    bitstring: str
    energy: float
    weight: int = 1

    @property
    def value(self) -> int:
        return int(self.bitstring, 2)


def build_hamiltonian(
    cvp: CvpInstance, babai: BabaiSolution, reduced: ReducedBasis
) -> IsingHamiltonian:
    """Exact squared-distance Hamiltonian of the 2^m cube around b_opt."""
    d = reduced.vectors
    m = d.shape[1]
    if cvp.m != m or babai.coeffs.shape[0] != m:
        raise ValueError("instance, reduction and Babai solution disagree on m")
    if not np.allclose(d @ babai.coeffs, babai.b_opt, rtol=0, atol=1e-6):
        raise ValueError("Babai solution was not produced from this reduced basis")
    kappa = babai.residual_signs.astype(np.float64)
    r = np.asarray(cvp.target, dtype=np.float64) - babai.b_opt
    gram = d.T @ d
    dr = d.T @ r
    # QUBO: E(x) = ||r||^2 + sum_j x_j a_j + sum_{i<j} x_i x_j q_ij
    a = np.diag(gram) - 2.0 * kappa * dr
    q = 2.0 * np.outer(kappa, kappa) * gram
    np.fill_diagonal(q, 0.0)
    upper = np.triu(q, 1)
    # spins via x = (1 - s) / 2
    offset = float(r @ r + a.sum() / 2.0 + upper.sum() / 4.0)
    linear = -a / 2.0 - q.sum(axis=1) / 4.0
    couplings = upper / 4.0
    return IsingHamiltonian(
        num_vars=m, offset=offset, linear=linear, couplings=couplings
    )


def _bits(x: str | Sequence[int], m: int) -> np.ndarray:
    if isinstance(x, str):
        if len(x) != m or set(x) - {"0", "1"}:
            raise ValueError(f"bitstring must be {m} characters of 0/1")
        return np.array([1 if ch == "1" else 0 for ch in x], dtype=np.int8)
    arr = np.asarray(x, dtype=np.int8)
    if arr.shape != (m,) or not np.isin(arr, (0, 1)).all():
        raise ValueError(f"state must be {m} bits")
    return arr


def energy(ham: IsingHamiltonian, x: str | Sequence[int]) -> float:
    """Energy of one state; equals the squared distance of its lattice point."""
    s = 1.0 - 2.0 * _bits(x, ham.num_vars)
    return float(ham.offset + ham.linear @ s + s @ ham.couplings @ s)


def _bit_order_reversed(ham: IsingHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    """Kernel inputs: variable j lives at bit m-1-j, so reverse both axes."""
    h = np.ascontiguousarray(ham.linear[::-1])
    sym = ham.couplings + ham.couplings.T
    j_sym = np.ascontiguousarray(sym[::-1, ::-1])
    return h, j_sym


def _enumerate_best(
    ham: IsingHamiltonian, k: int, chunk_states: int
) -> tuple[np.ndarray, np.ndarray]:
    """k lowest (energy, value) pairs over the whole cube, chunked over slabs."""
    m = ham.num_vars
    h, j_sym = _bit_order_reversed(ham)
    slab_bits = min(_energies.SLAB_BITS, m)
    total_slabs = 1 << (m - slab_bits)
    slabs_per_chunk = max(1, chunk_states >> slab_bits)
    best_v: np.ndarray | None = None
    best_e: np.ndarray | None = None
    for lo in range(0, total_slabs, slabs_per_chunk):
        hi = min(lo + slabs_per_chunk, total_slabs)
        values, energies = _energies.slab_energies(
            h, j_sym, ham.offset, m, lo, hi, slab_bits
        )
        if best_v is not None:
            values = np.concatenate([best_v, values])
            energies = np.concatenate([best_e, energies])
        if len(values) > k:
            order = np.lexsort((values, energies))[:k]
            values, energies = values[order], energies[order]
        best_v, best_e = values, energies
    order = np.lexsort((best_v, best_e))
    return best_v[order], best_e[order]


def brute_force_low_energy(
    ham: IsingHamiltonian, k: int, *, chunk_states: int = 1 << 18
) -> list[EnergySample]:
    """The k lowest-energy states, ascending, ties by bitstring value."""
    m = ham.num_vars
    if m > MAX_ENUMERATION_DIM:
        raise ValueError(
            f"m={m} exceeds the exhaustive enumeration cap {MAX_ENUMERATION_DIM}"
        )
    if not 1 <= k <= (1 << m):
        raise ValueError(f"k must lie in [1, 2^{m}]")
    values, energies = _enumerate_best(ham, k, chunk_states)
    width = f"0{m}b"
    return [
        EnergySample(bitstring=format(int(v), width), energy=float(e))
        for v, e in zip(values, energies)
    ]


def _all_energies_by_value(ham: IsingHamiltonian) -> np.ndarray:
    """energies[value] for every cube state, used as the QAOA phase diagonal."""
    m = ham.num_vars
    h, j_sym = _bit_order_reversed(ham)
    slab_bits = min(_energies.SLAB_BITS, m)
    values, energies = _energies.slab_energies(
        h, j_sym, ham.offset, m, 0, 1 << (m - slab_bits), slab_bits
    )
    out = np.empty(1 << m, dtype=np.float64)
    out[values] = energies
    return out


def _evolve(
    diag: np.ndarray, m: int, gammas: np.ndarray, betas: np.ndarray
) -> np.ndarray:
    """Statevector after p alternating phase and transverse-mixer layers."""
    dim = diag.shape[0]
    psi = np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128)
    for gamma, beta in zip(gammas, betas):
        psi = psi * np.exp(-1j * gamma * diag)
        c, s = math.cos(beta), math.sin(beta)
        for q in range(m):
            block = psi.reshape(1 << q, 2, -1)
            top = block[:, 0, :].copy()
            bottom = block[:, 1, :]
            block[:, 0, :] = c * top - 1j * s * bottom
            block[:, 1, :] = c * bottom - 1j * s * top
            psi = block.reshape(dim)
    return psi


def qaoa_expectation(
    ham: IsingHamiltonian, gammas: Sequence[float], betas: Sequence[float]
) -> float:
    """<H> of the depth-len(gammas) circuit at the given angles."""
    diag = _all_energies_by_value(ham)
    psi = _evolve(diag, ham.num_vars, np.asarray(gammas), np.asarray(betas))
    return float(np.abs(psi) ** 2 @ diag)


def _optimize_angles(
    diag: np.ndarray, m: int, depth: int, opt_budget: int
) -> np.ndarray:
    """Deterministic coarse grid over [0, pi] per angle, then Nelder-Mead.

    The all-zero angle point (the uniform state) is always a candidate, so the
    optimized expectation can never exceed the uniform-state expectation.
    """
    n_params = 2 * depth

    def objective(params: np.ndarray) -> float:
        psi = _evolve(diag, m, params[:depth], params[depth:])
        return float(np.abs(psi) ** 2 @ diag)

    evals_used = 1
    best_params = np.zeros(n_params)
    best_value = objective(best_params)
    grid_budget = max(0, (opt_budget - 1) // 2)
    grid_n = int(grid_budget ** (1.0 / n_params)) if grid_budget else 0
    if grid_n >= 1:
        axis = np.linspace(0.0, math.pi, grid_n, endpoint=False) + math.pi / grid_n
        mesh = np.meshgrid(*([axis] * n_params), indexing="ij")
        points = np.stack([g.ravel() for g in mesh], axis=1)
        for point in points:
            value = objective(point)
            evals_used += 1
            if value < best_value:
                best_value = value
                best_params = point
    remaining = opt_budget - evals_used
    if remaining > n_params:
        result = minimize(
            objective,
            best_params,
            method="Nelder-Mead",
            options={"maxfev": remaining, "xatol": 1e-4, "fatol": 1e-9},
        )
        if result.fun < best_value:
            best_params = result.x
    return best_params


def qaoa_sample(
    ham: IsingHamiltonian,
    rng: np.random.Generator,
    *,
    depth: int = 2,
    shots: int = 1,
    opt_budget: int = 500,
) -> list[EnergySample]:
    """Optimize the circuit, then sample `shots` measurement outcomes.

    Returns the unique sampled states with their shot counts, sorted by exact
    energy ascending (ties by bitstring value).
    """
    m = ham.num_vars
    if m > MAX_STATEVECTOR_DIM:
        raise ValueError(
            f"m={m} exceeds the statevector cap {MAX_STATEVECTOR_DIM}"
        )
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if opt_budget < 1:
        raise ValueError("opt_budget must be >= 1")
    diag = _all_energies_by_value(ham)
    params = _optimize_angles(diag, m, depth, opt_budget)
    psi = _evolve(diag, m, params[:depth], params[depth:])
    probs = np.abs(psi) ** 2
    probs /= probs.sum()
    drawn = rng.choice(probs.shape[0], size=shots, p=probs)
    values, counts = np.unique(drawn, return_counts=True)
    order = np.lexsort((values, diag[values]))
    width = f"0{m}b"
    return [
        EnergySample(
            bitstring=format(int(values[i]), width),
            energy=float(diag[values[i]]),
            weight=int(counts[i]),
        )
        for i in order
    ]
