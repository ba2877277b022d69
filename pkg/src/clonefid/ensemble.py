"""A classical bit as an ensemble of N particles, and how corruption moves it.

The bit is the uniform mixture ``rho = (1/N) sum_n |psi_n><psi_n|``.  A few
members get corrupted, ``|psi'> = alpha|psi> + beta|psi_perp>``, and a thermal
environment then dephases them, which drops the cross terms.  After that

    rho' = rho + (1/N) sum_i |beta_i|^2 (|perp_i><perp_i| - |psi_i><psi_i|)

and an observable's expectation moves by at most ``(2 eps / N) * ||Omega||``,
where ``eps`` counts the corrupted members and ``||Omega||`` is the largest
absolute eigenvalue.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "PureState",
    "Observable",
    "Corruption",
    "EnsembleSpec",
    "density",
    "expectation",
    "corrupt_coherent",
    "corrupt_dephased",
    "expectation_shift",
    "operator_norm",
    "PAULI",
]

_NORM_TOL = 1e-12
_HERM_TOL = 1e-12

PAULI = {
    "sx": np.array([[0, 1], [1, 0]], dtype=complex),
    "sy": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "sz": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PureState:
    """Unit vector over a d-dimensional basis (d = 2 for a qubit)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.size < 2:
            raise DomainError("a pure state needs dimension >= 2")
        if abs(np.linalg.norm(a) - 1.0) > _NORM_TOL:
            raise DomainError(f"state is not normalized (norm {np.linalg.norm(a):.3g})")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        a = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(a / np.linalg.norm(a))

    @classmethod
    def basis(cls, index: int, dim: int = 2) -> "PureState":
        a = np.zeros(dim, dtype=complex)
        a[index] = 1.0
        return cls(a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def perp(self) -> "PureState":
        """The orthogonal qubit state ``(-b*, a*)``; unique up to phase for d = 2."""
        if self.dim != 2:
            raise DomainError("orthogonal complement is not unique for d > 2; supply one")
        a, b = self.amplitudes
        return PureState(np.array([-np.conj(b), np.conj(a)]))


@dataclass(frozen=True)
class Observable:
    """Hermitian matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"observable must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > _HERM_TOL:
            raise DomainError("observable is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Corruption:
    """Member ``index`` (0-based) acquires amplitude ``beta`` along ``perp``.

    ``perp`` defaults to the qubit complement of the member; for d > 2 it
    must be supplied and orthogonal to the member.
    """

    index: int
    beta: complex
    perp: Optional[PureState] = None


@dataclass(frozen=True)
class EnsembleSpec:
    members: Sequence[PureState]
    corruptions: Sequence[Corruption] = field(default_factory=tuple)

    def __post_init__(self):
        members = tuple(m if isinstance(m, PureState) else PureState(m) for m in self.members)
        if not members:
            raise DomainError("ensemble needs at least one member")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise DomainError(f"members have mismatched dimensions {sorted(dims)}")
        corruptions = tuple(self.corruptions)
        indices = [c.index for c in corruptions]
        if len(set(indices)) != len(indices):
            raise DomainError("corrupted indices must be distinct")
        if len(corruptions) > len(members):
            raise DomainError("more corruptions than members")
        for c in corruptions:
            if not 0 <= c.index < len(members):
                raise DomainError(f"corruption index {c.index} outside 0..{len(members) - 1}")
            if abs(c.beta) > 1 + _NORM_TOL:
                raise DomainError(f"|beta| = {abs(c.beta):.3g} exceeds 1")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "corruptions", corruptions)

    @property
    def N(self) -> int:
        return len(self.members)

    @property
    def eps(self) -> int:
        return len(self.corruptions)

    def perp_of(self, c: Corruption) -> PureState:
        psi = self.members[c.index]
        if c.perp is None:
            return psi.perp()
        if c.perp.dim != psi.dim:
            raise DomainError("supplied orthogonal state has the wrong dimension")
        if abs(np.vdot(psi.amplitudes, c.perp.amplitudes)) > 1e-10:
            raise DomainError(f"supplied state for member {c.index} is not orthogonal to it")
        return c.perp


def density(members: Sequence[PureState]) -> np.ndarray:
    """Uniform mixture ``(1/N) sum |psi_n><psi_n|``."""
    members = [m if isinstance(m, PureState) else PureState(m) for m in members]
    if not members:
        raise DomainError("ensemble needs at least one member")
    if len({m.dim for m in members}) != 1:
        raise DomainError("members have mismatched dimensions")
    amps = np.stack([m.amplitudes for m in members])
    return amps.T @ amps.conj() / len(members)


def expectation(rho: np.ndarray, omega) -> float:
    """``Tr(rho Omega)``; the imaginary residue must vanish."""
    om = omega.matrix if isinstance(omega, Observable) else np.asarray(omega)
    rho = np.asarray(rho)
    if rho.shape != om.shape:
        raise DomainError(f"shape mismatch {rho.shape} vs {om.shape}")
    val = np.trace(rho @ om)
    if abs(val.imag) > 1e-12:
        raise DomainError(f"expectation has imaginary part {val.imag:.3g}; inputs not Hermitian")
    return float(val.real)


def corrupt_coherent(spec: EnsembleSpec) -> np.ndarray:
    """Corrupted ensemble before dephasing (keeps the psi/perp cross terms).

    Each corrupted member becomes ``sqrt(1-|beta|^2)|psi> + beta|perp>``.
    """
    rho = density(spec.members).astype(complex)
    for c in spec.corruptions:
        psi = spec.members[c.index]
        perp = spec.perp_of(c)
        alpha = np.sqrt(max(0.0, 1.0 - abs(c.beta) ** 2))
        new = alpha * psi.amplitudes + c.beta * perp.amplitudes
        rho += (np.outer(new, new.conj()) - psi.projector()) / spec.N
    return rho


def corrupt_dephased(spec: EnsembleSpec) -> np.ndarray:
    """Corrupted ensemble after dephasing removes the cross terms."""
    rho = density(spec.members).astype(complex)
    for c in spec.corruptions:
        psi = spec.members[c.index]
        perp = spec.perp_of(c)
        rho += abs(c.beta) ** 2 * (perp.projector() - psi.projector()) / spec.N
    return rho


def operator_norm(omega) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    om = omega.matrix if isinstance(omega, Observable) else np.asarray(omega)
    return float(np.max(np.abs(np.linalg.eigvalsh(om))))


def expectation_shift(spec: EnsembleSpec, omega) -> tuple[float, float]:
    """Return ``(delta, bound)`` with ``delta = |<Omega> - <Omega'>|``.

    ``bound = (2 eps / N) * ||Omega||`` uses the operator norm rather than the
    signed top eigenvalue; the signed reading fails for e.g. ``diag(0.1, -5)``.
    """
    om = omega if isinstance(omega, Observable) else Observable(omega)
    dim = spec.members[0].dim
    if om.dim != dim:
        raise DomainError(f"observable dimension {om.dim} does not match states ({dim})")
    before = expectation(density(spec.members), om)
    after = expectation(corrupt_dephased(spec), om)
    delta = abs(before - after)
    bound = 2.0 * spec.eps / spec.N * operator_norm(om)
    return delta, bound
