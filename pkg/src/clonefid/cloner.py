"""Closed forms for the universal symmetric N -> M qubit cloning machine.

The machine maps ``|psi>^N`` to ``sum_j alpha_j |(M-j)psi, j psi_perp> (x) R_j``
with orthonormal machine states ``R_j``.  Tracing out the machine leaves the
diagonal mixture ``sum_j alpha_j^2 |(M-j)psi, j psi_perp><...|``, and every
quantity here follows from the weights

    alpha_j^2 = (N+1)/(M+1) * C(M-N, j) / C(M, j),     j = 0..M-N.

The state ``psi`` itself never appears: all results depend on integers only.

Each public function takes ``backend`` in ``{"exact", "log", "auto"}``.  The
exact backend returns :class:`fractions.Fraction` values; the log backend
returns floats computed from term recurrences in log space followed by
compensated summation, which stays stable for M in the hundreds of thousands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError
from .numerics import compensated_sum, log_binomial, resolve_backend

Scalar = Union[Fraction, float]

__all__ = [
    "CloneParams",
    "CloneSpectrum",
    "SymDiagonal",
    "alpha_sq",
    "spectrum",
    "reduced_diagonal",
    "fidelity",
    "error_distribution",
    "info_fidelity",
    "info_infidelity",
]

# rows of the (k, j) term grid evaluated per numpy block
_ROW_BLOCK = 256


@dataclass(frozen=True)
class CloneParams:
    """Input and output copy numbers of one cloning run."""

    N: int
    M: int

    def __post_init__(self):
        for name in ("N", "M"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise DomainError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if not 1 <= self.N <= self.M:
            raise DomainError(f"need 1 <= N <= M, got N={self.N}, M={self.M}")

    @classmethod
    def from_kappa(cls, N: int, kappa: int) -> "CloneParams":
        """Build ``(N, kappa * N)``: ``kappa`` classical copies of an N-particle bit."""
        if kappa < 1:
            raise DomainError(f"kappa must be >= 1, got {kappa}")
        return cls(N, kappa * N)

    @property
    def kappa(self) -> Optional[int]:
        """``M // N`` when ``M`` is an integral multiple of ``N``, else ``None``."""
        return self.M // self.N if self.M % self.N == 0 else None


@dataclass(frozen=True)
class CloneSpectrum:
    """Weights ``alpha_j^2`` for ``j = 0..M-N``."""

    params: CloneParams
    weights: Sequence[Scalar]
    backend: str

    def total(self) -> Scalar:
        if self.backend == "exact":
            return sum(self.weights, Fraction(0))
        return compensated_sum(self.weights)


@dataclass(frozen=True)
class SymDiagonal:
    """Diagonal of an n-qubit reduced state in the basis ``|(n-k)psi, k psi_perp>``.

    ``coeffs[k]`` is the weight of the symmetric state with ``k`` particles
    in the orthogonal state; read as a distribution over error counts.
    """

    n: int
    coeffs: Sequence[Scalar]
    backend: str

    def trace(self) -> Scalar:
        if self.backend == "exact":
            return sum(self.coeffs, Fraction(0))
        return compensated_sum(self.coeffs)

    def cumulative(self, upto: int) -> Scalar:
        head = list(self.coeffs[: upto + 1])
        if self.backend == "exact":
            return sum(head, Fraction(0))
        return compensated_sum(head)


def _as_params(params) -> CloneParams:
    if isinstance(params, CloneParams):
        return params
    N, M = params
    return CloneParams(N, M)


def alpha_sq(params: CloneParams, j: int, backend: str = "auto") -> Scalar:
    """Squared amplitude of the component with ``j`` orthogonal-state errors."""
    p = _as_params(params)
    N, M = p.N, p.M
    if not 0 <= j <= M - N:
        raise DomainError(f"j={j} outside 0..{M - N}")
    if resolve_backend(backend, M) == "exact":
        return Fraction((N + 1) * math.perm(M - j, N), (M + 1) * math.perm(M, N))
    lg = math.log((N + 1) / (M + 1)) + log_binomial(M - N, j).log - log_binomial(M, j).log
    return math.exp(lg)


def _log_spectrum(N: int, M: int) -> np.ndarray:
    # alpha_{j+1}^2 / alpha_j^2 = (M-N-j)/(M-j) = 1 - N/(M-j)
    j = np.arange(M - N, dtype=float)
    steps = np.log1p(-N / (M - j))
    logs = np.empty(M - N + 1)
    logs[0] = math.log((N + 1) / (M + 1))
    logs[1:] = logs[0] + np.cumsum(steps)
    return logs


def spectrum(params: CloneParams, backend: str = "auto") -> CloneSpectrum:
    p = _as_params(params)
    b = resolve_backend(backend, p.M)
    if b == "exact":
        den = (p.M + 1) * math.perm(p.M, p.N)
        w = [Fraction((p.N + 1) * math.perm(p.M - j, p.N), den) for j in range(p.M - p.N + 1)]
    else:
        w = np.exp(_log_spectrum(p.N, p.M))
    return CloneSpectrum(p, w, b)


def _check_block(p: CloneParams, n: int) -> None:
    if isinstance(n, bool) or not 1 <= n <= p.M:
        raise DomainError(f"block size n={n} outside 1..{p.M}")


def _exact_rows(p: CloneParams, n: int, kmax: int) -> list:
    # alpha_j^2 / C(M, j) = (N+1) P(M-j, N) j! (M-j)! / ((M+1) P(M, N) M!),
    # with P the falling factorial, so each row is one integer sum over j.
    N, M = p.N, p.M
    fact = [1] * (M + 1)
    for i in range(1, M + 1):
        fact[i] = fact[i - 1] * i
    weight = [math.perm(M - j, N) * fact[j] * fact[M - j] for j in range(M - N + 1)]
    denom = (M + 1) * math.perm(M, N) * fact[M]
    rows = []
    for k in range(kmax + 1):
        acc = 0
        for j in range(k, min(M - n + k, M - N) + 1):
            acc += weight[j] * math.comb(M - n, j - k)
        rows.append(Fraction((N + 1) * math.comb(n, k) * acc, denom))
    return rows


def _log_rows(p: CloneParams, n: int, kmax: int) -> np.ndarray:
    """Row sums of the term grid T[k, j] for ``k = 0..kmax``, by log recurrences.

    T[k, j] = alpha_j^2 C(M-n, j-k) C(n, k) / C(M, j), nonzero for
    ``k <= j <= min(M-n+k, M-N)``.  Along the diagonal

        T[k+1, k+1] / T[k, k] = (M-N-k)(n-k) / (M-k)^2

    and along a row, with ``d = j - k``,

        T[k, j+1] / T[k, j] = (M-N-j)/(M-j) * (M-n-d)/(d+1) * (j+1)/(M-j).
    """
    N, M = p.N, p.M
    kmax = min(kmax, n, M - N)
    width = min(M - N, M - n) + 1
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.arange(kmax, dtype=float)
        diag_steps = np.log((M - N - k) * (n - k)) - 2.0 * np.log(M - k)
        log_diag = np.empty(kmax + 1)
        log_diag[0] = math.log((N + 1) / (M + 1))
        log_diag[1:] = log_diag[0] + np.cumsum(diag_steps)

        sums = np.zeros(kmax + 1)
        d = np.arange(width - 1, dtype=float)[None, :]
        for lo in range(0, kmax + 1, _ROW_BLOCK):
            hi = min(kmax + 1, lo + _ROW_BLOCK)
            kk = np.arange(lo, hi, dtype=float)[:, None]
            j = kk + d
            steps = (
                np.log(M - N - j)
                - 2.0 * np.log(M - j)
                + np.log(M - n - d)
                - np.log(d + 1)
                + np.log(j + 1)
            )
            # past either cutoff the next term is zero and stays zero
            steps[(j + 1 > M - N) | (d + 1 > M - n)] = -np.inf
            logs = np.empty((hi - lo, width))
            logs[:, 0] = log_diag[lo:hi]
            logs[:, 1:] = log_diag[lo:hi, None] + np.cumsum(steps, axis=1)
            terms = np.exp(logs)
            terms[np.isnan(terms)] = 0.0
            for r in range(hi - lo):
                sums[lo + r] = math.fsum(terms[r])
    return sums


def _diag_rows(p: CloneParams, n: int, kmax: int, backend: str):
    if backend == "exact":
        return _exact_rows(p, n, min(kmax, n))
    head = _log_rows(p, n, kmax)
    out = np.zeros(min(kmax, n) + 1)
    out[: len(head)] = head
    return out


def reduced_diagonal(params: CloneParams, n: int, backend: str = "auto") -> SymDiagonal:
    """Diagonal of the reduced density matrix of any ``n`` output qubits.

    ``coeffs[k] = sum_{j=k}^{min(M-n+k, M-N)} alpha_j^2 C(M-n, j-k) C(n, k) / C(M, j)``;
    the upper limit ``min(M-n+k, M-N)`` keeps ``j`` inside the spectrum.
    """
    p = _as_params(params)
    _check_block(p, n)
    b = resolve_backend(backend, p.M)
    return SymDiagonal(n, _diag_rows(p, n, n, b), b)


def fidelity(params: CloneParams, backend: str = "auto") -> Scalar:
    """Overlap of an N-qubit output block with the ideal input ``|N psi>``.

    Evaluated as ``sum_j alpha_j^2 C(M-N, j) / C(M, j)``, a path independent of
    :func:`reduced_diagonal` (whose ``coeffs[0]`` must agree with it).
    """
    p = _as_params(params)
    N, M = p.N, p.M
    if resolve_backend(backend, M) == "exact":
        # C(M-N, j) / C(M, j) = P(M-j, N) / P(M, N)
        num = sum(math.perm(M - j, N) ** 2 for j in range(M - N + 1))
        return Fraction((N + 1) * num, (M + 1) * math.perm(M, N) ** 2)
    # consecutive terms differ by the squared spectrum ratio
    return math.fsum(np.exp(2.0 * _log_spectrum(N, M) - math.log((N + 1) / (M + 1))))


def error_distribution(params: CloneParams, backend: str = "auto") -> SymDiagonal:
    """Distribution of the number of erroneous particles in an N-qubit output block."""
    p = _as_params(params)
    return reduced_diagonal(p, p.N, backend)


def _check_err(p: CloneParams, err: int) -> None:
    if isinstance(err, bool) or not isinstance(err, (int, np.integer)):
        raise DomainError(f"Err must be an integer, got {err!r}")
    if not 0 <= err <= p.N:
        raise DomainError(f"Err={err} outside 0..{p.N}")


def info_fidelity(params: CloneParams, err: int, backend: str = "auto") -> Scalar:
    """Probability that an N-qubit output block carries at most ``err`` errors."""
    p = _as_params(params)
    _check_err(p, err)
    b = resolve_backend(backend, p.M)
    if b == "exact":
        return sum(_diag_rows(p, p.N, err, b), Fraction(0))
    if err == p.N:
        return 1.0
    return math.fsum(_diag_rows(p, p.N, err, b))


def info_infidelity(params: CloneParams, err: int, backend: str = "auto") -> Scalar:
    """``1 - info_fidelity``, summed directly over the tail ``k > err``.

    Avoids the cancellation of ``1 - F`` when ``F`` is close to one.
    """
    p = _as_params(params)
    _check_err(p, err)
    b = resolve_backend(backend, p.M)
    if b == "exact":
        return 1 - info_fidelity(p, err, "exact")
    rows = _diag_rows(p, p.N, p.N, b)
    return math.fsum(rows[err + 1 :])
