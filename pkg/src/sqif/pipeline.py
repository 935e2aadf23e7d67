"""End-to-end factoring runs: screen, iterate lattices, combine relations.

Each iteration draws a fresh diagonal permutation from one seeded generator,
reduces the instance, walks the Babai cube with the configured optimizer and
feeds accepted SR pairs into a deduplicating ledger. Once the ledger reaches
required = B2 + slack pairs (or the iteration budget runs out) the pairs are
combined over GF(2) and factors extracted. Runs replay byte-identically for
a fixed config and seed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from sympy import isprime

from . import _energies
from .gf2 import build_exponent_matrix, extract_factors, null_space_mod2
from .ising import (
    MAX_ENUMERATION_DIM,
    MAX_STATEVECTOR_DIM,
    brute_force_low_energy,
    build_hamiltonian,
    qaoa_sample,
)
from .lattice import babai_nearest_plane, build_cvp_instance, lattice_dimension, lll_reduce
from .numtheory import first_primes, primes_up_to
from .relations import (
    PairLedger,
    SrPair,
    coeff_vector_to_uv,
    default_smoothness_bound,
    required_sr_pairs,
    states_to_coeff_vectors,
    test_sr_pair,
)

__all__ = [
    "DEFAULT_SEED",
    "ConfigError",
    "IterationTrace",
    "PipelineConfig",
    "RunReport",
    "ScreenResult",
    "ScreeningError",
    "factor",
    "screen",
]

DEFAULT_SEED = 1
METHODS = ("brute-force", "qaoa")


class ConfigError(ValueError):
    """A config value is out of range or infeasible for the derived instance."""


class ScreeningError(ValueError):
    """n failed screening; carries the trivially found factor when one exists."""

    def __init__(self, reason: str, trivial_factor: int | None = None) -> None:
        super().__init__(reason)
        self.reason = reason
        self.trivial_factor = trivial_factor


@dataclass(frozen=True)
class ScreenResult:
    ok: bool
    reason: str | None = None
    trivial_factor: int | None = None


def _integer_kth_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) by integer Newton iteration."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    if k == 1 or n == 1:
        return n if k == 1 else 1
    x = 1 << -(-n.bit_length() // k)  # 2^ceil(bits/k) >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(n: int) -> tuple[int, int]:
    """(root, k) with root**k == n and k maximal, or (n, 1)."""
    for k in range(n.bit_length(), 1, -1):
        root = _integer_kth_root(n, k)
        if root ** k == n:
            return root, k
    return n, 1


def screen(n: int, trial_bound: int | None = None) -> ScreenResult:
    """Reject n when the pipeline cannot or need not run on it.

    Deterministic primality (Miller-Rabin fixed witnesses plus a strong Lucas
    backup, via sympy.isprime), a perfect-power check, and trial division by
    every prime up to trial_bound (default: the l=1 factor base for n).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if n < 15:
        return ScreenResult(False, "too small (n must be >= 15)")
    if trial_bound is None:
        m = lattice_dimension(n, 1)
        trial_bound = max(first_primes(m)[-1], default_smoothness_bound(m))
    for p in primes_up_to(trial_bound).primes:
        if n % p == 0:
            return ScreenResult(False, f"divisible by small prime {p}", p)
    if isprime(n):
        return ScreenResult(False, "prime")
    root, power = _perfect_power(n)
    if power > 1:
        kind = "prime power" if isprime(root) else "perfect power"
        return ScreenResult(False, f"{kind} {root}^{power}", root)
    return ScreenResult(True)


@dataclass(frozen=True)
class PipelineConfig:
    """Full run configuration; None fields mean 'derive the default from m'."""

    n: int
    lattice_parameter: int = 1
    precision: int = 4
    smoothness_bound: int | None = None  # default 2 m^2
    slack: int = 2
    method: str = "brute-force"
    samples: int | None = None  # brute force keeps this many states; 2^min(15, m)
    qaoa_depth: int = 2
    shots: int | None = None  # QAOA measurement count; 2^min(15, m)
    opt_budget: int = 500
    lll_delta: float = 0.99
    max_iterations: int = 1000
    dimension: int | None = None  # override for the derived lattice dimension
    seed: int = DEFAULT_SEED
    workers: int | None = None


@dataclass(frozen=True)
class IterationTrace:
    iteration: int
    babai_distance: float
    new_pairs: int
    total_pairs: int


@dataclass(frozen=True)
class RunReport:
    n: int
    bits: int
    dimension: int
    method: str
    iterations: int
    sr_pairs: int
    required_sr_pairs: int
    outcome: str  # "success" | "fail"
    factors: tuple[int, ...]
    wall_seconds: float
    seed: int
    trace: tuple[IterationTrace, ...]


def _validate(config: PipelineConfig) -> None:
    if config.n < 2:
        raise ConfigError("n must be >= 2")
    if config.lattice_parameter < 1:
        raise ConfigError("lattice parameter must be >= 1")
    if not 1 <= config.precision <= 12:
        raise ConfigError("precision must lie in [1, 12]")
    if config.smoothness_bound is not None and config.smoothness_bound < 2:
        raise ConfigError("smoothness bound must be >= 2")
    if config.slack < 0:
        raise ConfigError("slack must be >= 0")
    if config.method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}")
    if config.samples is not None and config.samples < 1:
        raise ConfigError("samples must be >= 1")
    if config.qaoa_depth < 1:
        raise ConfigError("qaoa depth must be >= 1")
    if config.shots is not None and config.shots < 1:
        raise ConfigError("shots must be >= 1")
    if config.opt_budget < 1:
        raise ConfigError("opt budget must be >= 1")
    if not 0.25 < config.lll_delta < 1.0:
        raise ConfigError("lll delta must lie in (0.25, 1)")
    if config.max_iterations < 1:
        raise ConfigError("max iterations must be >= 1")
    if config.dimension is not None and config.dimension < 2:
        raise ConfigError("dimension override must be >= 2")
    if config.seed < 0:
        raise ConfigError("seed must be >= 0")
    if config.workers is not None and config.workers < 1:
        raise ConfigError("workers must be >= 1")


def _resolved_dimension(config: PipelineConfig) -> int:
    if config.dimension is not None:
        return config.dimension
    return lattice_dimension(config.n, config.lattice_parameter)


def _apply_transform(zmatrix: np.ndarray, transform: np.ndarray) -> np.ndarray:
    """Exponent rows e = U z for each coefficient row, exactly.

    Uses int64 matmul when magnitudes provably fit, else arbitrary precision.
    """
    m = transform.shape[0]
    t_max = max((abs(int(v)) for v in transform.flat), default=0)
    z_max = int(np.abs(zmatrix).max()) if zmatrix.size else 0
    if t_max * z_max * m < (1 << 62):
        return zmatrix @ transform.astype(np.int64).T
    t_rows = [[int(v) for v in row] for row in transform]
    out = np.empty(zmatrix.shape, dtype=object)
    for i, zrow in enumerate(zmatrix):
        zci = [int(v) for v in zrow]
        for r in range(m):
            out[i, r] = sum(t_rows[r][j] * zci[j] for j in range(m))
    return out


def _set_worker_threads(workers: int | None) -> None:
    if workers is None or not _energies.HAVE_NUMBA:
        return
    import numba

    numba.set_num_threads(max(1, min(workers, numba.config.NUMBA_NUM_THREADS)))


def factor(
    config: PipelineConfig,
    *,
    resume_pairs: Sequence[SrPair] = (),
    progress: Callable[[IterationTrace], None] | None = None,
    ledger_observer: Callable[[list[SrPair]], None] | None = None,
) -> RunReport:
    """Run the full pipeline; raises ScreeningError / ConfigError before work.

    progress receives each IterationTrace as it happens; ledger_observer
    receives the full pair list whenever an iteration added pairs (the hook
    the CLI uses for resumable checkpoints).
    """
    start = time.perf_counter()
    _validate(config)
    n = config.n
    m = _resolved_dimension(config)
    b2 = (
        config.smoothness_bound
        if config.smoothness_bound is not None
        else default_smoothness_bound(m)
    )
    primes = first_primes(m)
    if primes[-1] > b2:
        raise ConfigError(
            f"smoothness bound {b2} is below the largest lattice prime {primes[-1]}"
        )
    screened = screen(n, trial_bound=b2)
    if not screened.ok:
        raise ScreeningError(screened.reason, screened.trivial_factor)
    if config.method == "qaoa" and m > MAX_STATEVECTOR_DIM:
        raise ConfigError(
            f"m={m} exceeds the QAOA statevector cap {MAX_STATEVECTOR_DIM}"
        )
    if config.method == "brute-force" and m > MAX_ENUMERATION_DIM:
        raise ConfigError(
            f"m={m} exceeds the enumeration cap {MAX_ENUMERATION_DIM}"
        )
    default_k = 1 << min(15, m)
    samples = config.samples if config.samples is not None else default_k
    if samples > (1 << m):
        raise ConfigError(f"samples={samples} exceeds the cube size 2^{m}")
    shots = config.shots if config.shots is not None else default_k
    required = required_sr_pairs(m, b2, config.slack)
    base = primes_up_to(b2)
    for pair in resume_pairs:
        if len(pair.u_exponents) != len(base.primes):
            raise ConfigError("resume ledger was built against a different factor base")
    ledger = PairLedger(required, pairs=resume_pairs)
    _set_worker_threads(config.workers)
    rng = np.random.default_rng(config.seed)

    trace: list[IterationTrace] = []
    iterations = 0
    for iteration in range(1, config.max_iterations + 1):
        iterations = iteration
        instance = build_cvp_instance(m, config.precision, n, rng)
        reduced = lll_reduce(instance.basis, config.lll_delta)
        babai = babai_nearest_plane(reduced, instance.target)
        ham = build_hamiltonian(instance, babai, reduced)
        if config.method == "qaoa":
            sampled = qaoa_sample(
                ham,
                rng,
                depth=config.qaoa_depth,
                shots=shots,
                opt_budget=config.opt_budget,
            )
        else:
            sampled = brute_force_low_energy(ham, samples)
        states = [s.bitstring for s in sampled]
        coeff_rows = states_to_coeff_vectors(states, babai)
        exponent_rows = _apply_transform(coeff_rows, reduced.transform)
        new_pairs = 0
        for row in exponent_rows:
            u, v = coeff_vector_to_uv([int(x) for x in row], instance.prime_basis)
            if (u, v) in ledger:
                continue
            pair = test_sr_pair(u, v, n, base)
            if pair is not None and ledger.add(pair):
                new_pairs += 1
        row_trace = IterationTrace(
            iteration=iteration,
            babai_distance=babai.distance,
            new_pairs=new_pairs,
            total_pairs=len(ledger),
        )
        trace.append(row_trace)
        if progress is not None:
            progress(row_trace)
        if new_pairs and ledger_observer is not None:
            ledger_observer(ledger.pairs())
        if ledger.complete:
            break

    factors: set[int] = set()
    if len(ledger):
        relation = build_exponent_matrix(ledger.pairs(), base)
        kernel = null_space_mod2(relation.matrix)
        factors = extract_factors(relation, kernel, n)
    outcome = "success" if factors else "fail"
    return RunReport(
        n=n,
        bits=n.bit_length(),
        dimension=m,
        method=config.method,
        iterations=iterations,
        sr_pairs=len(ledger),
        required_sr_pairs=required,
        outcome=outcome,
        factors=tuple(sorted(factors)),
        wall_seconds=time.perf_counter() - start,
        seed=config.seed,
        trace=tuple(trace),
    )
