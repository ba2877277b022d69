"""Brute-force certification of the closed forms in the full 2^M space.

Symmetric states are expanded explicitly, the cloner output is built as the
mixture left after tracing out the (orthonormal) machine states, and the
reduced n-qubit state comes from a genuine partial trace.  Nothing here calls
into :mod:`clonefid.cloner` except :func:`certify`, which compares the two.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from . import cloner
from .ensemble import PureState
from .errors import DomainError, ResourceError

__all__ = [
    "MAX_SYM_QUBITS",
    "MAX_OUTPUT_QUBITS",
    "expand_sym",
    "sym_basis",
    "clone_output_density",
    "partial_trace",
    "CertificationReport",
    "certify",
    "certify_grid",
]

MAX_SYM_QUBITS = 14
MAX_OUTPUT_QUBITS = 12
TOLERANCE = 1e-10


def _pair(psi: Optional[PureState], perp: Optional[PureState]):
    psi = PureState.basis(0) if psi is None else psi
    if psi.dim != 2:
        raise DomainError("the oracle works with qubits only")
    perp = psi.perp() if perp is None else perp
    return psi.amplitudes, perp.amplitudes


def expand_sym(m: int, j: int, psi: Optional[PureState] = None, perp: Optional[PureState] = None) -> np.ndarray:
    """``|(m-j)psi, j psi_perp>`` as a length-2^m amplitude vector.

    Equal-weight superposition over all ``C(m, j)`` placements of ``psi_perp``.
    Qubit 0 is the most significant tensor factor.
    """
    if m > MAX_SYM_QUBITS:
        raise ResourceError(f"m={m} exceeds the dense cap of {MAX_SYM_QUBITS} qubits")
    if not 0 <= j <= m or m < 1:
        raise DomainError(f"need 0 <= j <= m and m >= 1, got m={m}, j={j}")
    a, b = _pair(psi, perp)
    vec = np.zeros(2**m, dtype=complex)
    for placement in itertools.combinations(range(m), j):
        bad = set(placement)
        vec += reduce(np.kron, [b if q in bad else a for q in range(m)])
    return vec / math.sqrt(math.comb(m, j))


def sym_basis(m: int, psi: Optional[PureState] = None, perp: Optional[PureState] = None) -> np.ndarray:
    """Columns ``k = 0..m`` are ``|(m-k)psi, k psi_perp>``."""
    return np.stack([expand_sym(m, k, psi, perp) for k in range(m + 1)], axis=1)


def _alpha_sq_factorials(N: int, M: int, j: int) -> Fraction:
    f = math.factorial
    return Fraction(N + 1, M + 1) * Fraction(f(M - N) * f(M - j), f(M - N - j) * f(M))


def clone_output_density(params, psi: Optional[PureState] = None, perp: Optional[PureState] = None) -> np.ndarray:
    """Clone-side output ``sum_j alpha_j^2 |(M-j)psi, j perp><...|`` over 2^M."""
    p = params if isinstance(params, cloner.CloneParams) else cloner.CloneParams(*params)
    if p.M > MAX_OUTPUT_QUBITS:
        raise ResourceError(f"M={p.M} exceeds the dense cap of {MAX_OUTPUT_QUBITS} qubits")
    rho = np.zeros((2**p.M, 2**p.M), dtype=complex)
    for j in range(p.M - p.N + 1):
        v = expand_sym(p.M, j, psi, perp)
        rho += float(_alpha_sq_factorials(p.N, p.M, j)) * np.outer(v, v.conj())
    return rho


def partial_trace(rho: np.ndarray, keep, total: Optional[int] = None) -> np.ndarray:
    """Reduce a 2^M x 2^M density matrix to a subset of its qubits.

    ``keep`` is either a count ``n`` (keep qubits ``0..n-1``) or an explicit
    sequence of qubit indices, kept in the given order.
    """
    rho = np.asarray(rho)
    M = total if total is not None else int(round(math.log2(rho.shape[0])))
    if rho.shape != (2**M, 2**M):
        raise DomainError(f"expected a {2**M}x{2**M} matrix, got {rho.shape}")
    kept = list(range(keep)) if isinstance(keep, (int, np.integer)) else [int(q) for q in keep]
    if not kept or len(set(kept)) != len(kept) or not all(0 <= q < M for q in kept):
        raise DomainError(f"invalid qubit selection {keep!r} for {M} qubits")
    traced = [q for q in range(M) if q not in kept]
    n = len(kept)
    t = rho.reshape([2] * (2 * M))
    t = t.transpose(kept + traced + [M + q for q in kept] + [M + q for q in traced])
    t = t.reshape(2**n, 2 ** (M - n), 2**n, 2 ** (M - n))
    return np.einsum("ajbj->ab", t)


@dataclass
class CertificationReport:
    N: int
    M: int
    n: int
    closed_form: list
    brute_force: list
    max_diag_deviation: float
    max_offdiag_deviation: float
    trace_deviation: float
    tolerance: float = TOLERANCE
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = max(self.max_diag_deviation, self.max_offdiag_deviation, self.trace_deviation) <= self.tolerance

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} N={self.N} M={self.M} n={self.n} "
            f"diag={self.max_diag_deviation:.3e} offdiag={self.max_offdiag_deviation:.3e}"
        )


def certify(params, n: int, psi: Optional[PureState] = None, keep: Optional[Sequence[int]] = None) -> CertificationReport:
    """Compare the brute-force n-qubit reduced state with the closed-form diagonal.

    The reduced state is projected onto the symmetric basis; its diagonal must
    match :func:`clonefid.cloner.reduced_diagonal` and everything off the
    diagonal (including weight outside the symmetric subspace) must vanish.
    """
    p = params if isinstance(params, cloner.CloneParams) else cloner.CloneParams(*params)
    if not 1 <= n <= p.M:
        raise DomainError(f"block size n={n} outside 1..{p.M}")
    perp = None if psi is None else psi.perp()
    rho = clone_output_density(p, psi, perp)
    rho_n = partial_trace(rho, list(keep) if keep is not None else n, p.M)
    S = sym_basis(n, psi, perp)
    B = S.conj().T @ rho_n @ S
    brute = np.real(np.diag(B))
    exact = cloner.reduced_diagonal(p, n, "exact").coeffs
    closed = np.array([float(c) for c in exact])
    off = B - np.diag(np.diag(B))
    # weight of rho_n outside span(S): everything the symmetric block misses
    outside = abs(np.real(np.trace(rho_n)) - np.real(np.trace(B)))
    return CertificationReport(
        N=p.N,
        M=p.M,
        n=n,
        closed_form=[str(c) for c in exact],
        brute_force=[float(x) for x in brute],
        max_diag_deviation=float(np.max(np.abs(brute - closed))),
        max_offdiag_deviation=float(max(np.max(np.abs(off), initial=0.0), outside)),
        trace_deviation=float(abs(np.trace(rho_n) - 1.0)),
    )


def certify_grid(max_N: int = 3, max_kappa: int = 3, max_M: int = 9) -> list[CertificationReport]:
    """Certify every ``N <= max_N``, ``2 <= kappa <= max_kappa`` with ``M <= max_M``, all ``n <= N``."""
    reports = []
    for N in range(1, max_N + 1):
        for kappa in range(2, max_kappa + 1):
            M = kappa * N
            if M > min(max_M, MAX_OUTPUT_QUBITS):
                continue
            for n in range(1, N + 1):
                reports.append(certify(cloner.CloneParams(N, M), n))
    return reports
