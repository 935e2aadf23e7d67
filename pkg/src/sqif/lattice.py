"""Prime-lattice CVP instances and their approximate solvers.

The lattice basis is the (m+1) x m integer matrix whose j-th column holds a
permuted diagonal weight ceil(j/2) in row j and round(10^c * ln p_j) in the
last row; the CVP target is (0, ..., 0, round(10^c * ln N)). Gram-Schmidt,
LLL and Babai all run in float64: with c <= 12 every basis entry stays far
below 2**53, so the integer inputs are represented exactly and only the
orthogonalization itself is approximate. The unimodular transform of the
reduction is tracked in exact (arbitrary-precision) integers so reduced-basis
coefficients can be mapped back to prime exponents without rounding.

All round-to-integer steps use round-half-to-even.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext

import numpy as np

from .numtheory import first_primes

__all__ = [
    "BabaiSolution",
    "CvpInstance",
    "DegenerateBasisError",
    "ReducedBasis",
    "babai_nearest_plane",
    "build_cvp_instance",
    "gram_schmidt",
    "lattice_dimension",
    "lll_reduce",
    "round_log2",
]

MAX_PRECISION = 12  # keeps 10^c * ln N < 2**53 for N < 2**128

# One LLL step is a size-reduction or a swap; genuine inputs finish in
# O(m^2 log max|b|) steps, so this only trips on float-driven livelock.
_MAX_LLL_STEPS = 2_000_000


class DegenerateBasisError(ValueError):
    """Basis columns are (numerically) linearly dependent."""


def round_log2(x: int) -> int:
    """round(log2(x)) for a positive integer, exact at any magnitude.

    log2(x) = e + 1/2 would need x^2 = 2^(2e+1), impossible for integers,
    so comparing x^2 against 2^(2e+1) decides the rounding without ties.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    e = x.bit_length() - 1
    return e if x * x < (1 << (2 * e + 1)) else e + 1


def lattice_dimension(n: int, lattice_parameter: int) -> int:
    """Cube dimension m = floor(l * round(log2 n) / round(log2 round(log2 n)))."""
    if n < 4:
        raise ValueError("n must be >= 4")
    if lattice_parameter < 1:
        raise ValueError("lattice parameter must be >= 1")
    bits = round_log2(n)
    m = (lattice_parameter * bits) // round_log2(bits)
    if m < 2:
        raise ValueError(f"n={n} is too small for the pipeline (m={m} < 2)")
    return m


def _scaled_ln(x: int, c: int) -> int:
    """round(10^c * ln x) computed with >= c + 20 decimal digits.

    The value is recomputed under a much wider context and must agree, which
    pins the rounding against the (never observed) near-half-way case.
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    previous = None
    for guard in (35, 60, 110, 210):
        with localcontext() as ctx:
            ctx.prec = c + guard
            scaled = Decimal(x).ln().scaleb(c)
            value = int(scaled.to_integral_value(rounding=ROUND_HALF_EVEN))
        if previous is not None and value == previous:
            return value
        previous = value
    raise ArithmeticError(f"10^{c} * ln({x}) would not round stably")


@dataclass(frozen=True)
class CvpInstance:
    """One randomized prime-lattice CVP instance for the integer n."""

    m: int
    precision: int
    n: int
    basis: np.ndarray  # (m+1, m) int64, columns are lattice vectors
    target: np.ndarray  # (m+1,) int64
    diag_weights: tuple[int, ...]  # the permuted f(1..m)
    prime_basis: tuple[int, ...]  # first m primes, ascending


def build_cvp_instance(
    m: int, precision: int, n: int, rng: np.random.Generator
) -> CvpInstance:
    """Random-permutation instance: diagonal f, scaled-log last row and target."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if not 1 <= precision <= MAX_PRECISION:
        raise ValueError(f"precision must be in [1, {MAX_PRECISION}]")
    if n < 4:
        raise ValueError("n must be >= 4")
    primes = first_primes(m)
    weights = np.array([(j + 2) // 2 for j in range(m)], dtype=np.int64)
    f = rng.permutation(weights)
    basis = np.zeros((m + 1, m), dtype=np.int64)
    basis[np.arange(m), np.arange(m)] = f
    basis[m, :] = [_scaled_ln(p, precision) for p in primes]
    target = np.zeros(m + 1, dtype=np.int64)
    target[m] = _scaled_ln(n, precision)
    return CvpInstance(
        m=m,
        precision=precision,
        n=n,
        basis=basis,
        target=target,
        diag_weights=tuple(int(x) for x in f),
        prime_basis=primes,
    )


def _orthogonalize(basis: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Modified Gram-Schmidt over columns; returns (gs, mu, gs norms squared)."""
    b = np.array(basis, dtype=np.float64)
    if b.ndim != 2 or b.shape[1] < 1 or b.shape[0] < b.shape[1]:
        raise ValueError("basis must be a (rows >= cols) matrix of column vectors")
    rows, m = b.shape
    gs = np.zeros((rows, m))
    mu = np.zeros((m, m))
    norms2 = np.zeros(m)
    for k in range(m):
        v = b[:, k].copy()
        if k:
            coeffs = (gs[:, :k].T @ v) / norms2[:k]
            mu[k, :k] = coeffs
            v -= gs[:, :k] @ coeffs
        mu[k, k] = 1.0
        norm2 = float(v @ v)
        col2 = float(b[:, k] @ b[:, k])
        if norm2 <= 1e-18 * max(1.0, col2):
            raise DegenerateBasisError(f"column {k} is dependent on earlier columns")
        gs[:, k] = v
        norms2[k] = norm2
    return gs, mu, norms2


def gram_schmidt(basis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gram-Schmidt vectors (columns) and the mu coefficient matrix.

    mu[k, j] = <b_k, gs_j> / <gs_j, gs_j> for j < k, with unit diagonal.
    """
    gs, mu, _ = _orthogonalize(basis)
    return gs, mu


@dataclass(frozen=True)
class ReducedBasis:
    """LLL output: reduced columns plus their fresh Gram-Schmidt data.

    transform is the exact unimodular matrix U (object array of Python ints)
    with vectors = original_basis @ U, so a coefficient vector z over the
    reduced basis corresponds to U @ z over the original one.
    """

    vectors: np.ndarray  # (rows, m) float64, integer-valued for integer input
    gs_vectors: np.ndarray
    gs_coeffs: np.ndarray  # mu, unit lower-triangular
    gs_norms2: np.ndarray
    delta: float
    transform: np.ndarray  # (m, m) object / Python int


def lll_reduce(basis: np.ndarray, delta: float = 0.99) -> ReducedBasis:
    """LLL reduction (size-reduced, Lovasz condition with parameter delta).

    Incremental mu/B bookkeeping follows the classic recurrences; the basis
    and the transform are updated simultaneously so U stays exact.
    """
    if not 0.25 < delta < 1.0:
        raise ValueError("delta must lie in (0.25, 1)")
    b = np.array(basis, dtype=np.float64)
    _, mu, norms2 = _orthogonalize(b)  # validates shape and rank
    rows, m = b.shape
    transform = np.empty((m, m), dtype=object)
    transform[:] = 0
    for i in range(m):
        transform[i, i] = 1

    def size_reduce(k: int, j: int) -> None:
        q = round(float(mu[k, j]))
        if q:
            b[:, k] -= q * b[:, j]
            transform[:, k] -= q * transform[:, j]
            mu[k, :j] -= q * mu[j, :j]
            mu[k, j] -= q

    steps = 0
    k = 1
    while k < m:
        steps += 1
        if steps > _MAX_LLL_STEPS:
            raise RuntimeError("LLL failed to converge (float livelock?)")
        size_reduce(k, k - 1)
        if norms2[k] < (delta - mu[k, k - 1] ** 2) * norms2[k - 1]:
            mu_old = float(mu[k, k - 1])
            b_new = norms2[k] + mu_old * mu_old * norms2[k - 1]
            mu[k, k - 1] = mu_old * norms2[k - 1] / b_new
            norms2[k] = norms2[k - 1] * norms2[k] / b_new
            norms2[k - 1] = b_new
            b[:, [k - 1, k]] = b[:, [k, k - 1]]
            transform[:, [k - 1, k]] = transform[:, [k, k - 1]]
            if k > 1:
                mu[[k - 1, k], : k - 1] = mu[[k, k - 1], : k - 1]
            for i in range(k + 1, m):
                t = float(mu[i, k])
                mu[i, k] = mu[i, k - 1] - mu_old * t
                mu[i, k - 1] = mu[k, k - 1] * mu[i, k] + t
            k = max(k - 1, 1)
        else:
            for j in range(k - 2, -1, -1):
                size_reduce(k, j)
            k += 1

    gs, mu_final, norms2_final = _orthogonalize(b)
    return ReducedBasis(
        vectors=b,
        gs_vectors=gs,
        gs_coeffs=mu_final,
        gs_norms2=norms2_final,
        delta=delta,
        transform=transform,
    )


@dataclass(frozen=True)
class BabaiSolution:
    """Nearest-plane output over a reduced basis.

    coeffs z index the *reduced* basis columns; residual_signs hold
    kappa_k = +1 iff c_k - z_k >= 0 at the step that fixed z_k.
    """

    b_opt: np.ndarray  # (rows,) float64
    coeffs: np.ndarray  # (m,) int64
    residual_signs: np.ndarray  # (m,) int8, entries +-1
    distance: float


def babai_nearest_plane(reduced: ReducedBasis, target: np.ndarray) -> BabaiSolution:
    """Babai's nearest-plane walk from the last reduced column down to the first."""
    vectors = reduced.vectors
    rows, m = vectors.shape
    t = np.asarray(target, dtype=np.float64)
    if t.shape != (rows,):
        raise ValueError(f"target must have shape ({rows},)")
    remainder = t.copy()
    coeffs = np.zeros(m, dtype=np.int64)
    signs = np.zeros(m, dtype=np.int8)
    for k in range(m - 1, -1, -1):
        c = float(reduced.gs_vectors[:, k] @ remainder) / float(reduced.gs_norms2[k])
        z = round(c)
        coeffs[k] = z
        signs[k] = 1 if c - z >= 0 else -1
        remainder -= z * vectors[:, k]
    b_opt = t - remainder
    return BabaiSolution(
        b_opt=b_opt,
        coeffs=coeffs,
        residual_signs=signs,
        distance=float(np.linalg.norm(remainder)),
    )
