"""Two interchangeable state engines for GHZ-group probes.

The analytic engine represents a probe as a product of independent GHZ
coherence blocks (:class:`GhzGroup`), each carrying an accumulated phase
and a single dephasing factor ``coherence`` that multiplies the
off-diagonal block.  A group over photons ``g`` stands for the two-level
mixture::

    1/2 (|H..H><H..H| + |V..V><V..V|)
      + coherence/2 (e^{i phase} |V..V><H..H| + h.c.)

which is pure exactly when ``coherence == 1``.  The dense engine
(:class:`DenseState`) is a brute-force 2**N state vector used as an
oracle for cross-validation of the analytic results; it only exists for
pure states.

Basis convention (fixed and test-locked): photon 1 occupies the most
significant bit of a basis index, H maps to bit 0 and V to bit 1.  The
sigma_x outcome indices reuse the same ordering with bit 0 meaning the
+1 eigenvector.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from math import isfinite

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidCoherenceError,
    NotPureError,
    TooLargeError,
)

#: Largest photon count for which 2**N sized objects (dense vectors,
#: outcome tables) are constructed.  Analytic group arithmetic has no
#: such limit; pass ``max_photons`` to ProductState to lift its cap.
MAX_PHOTONS = 12

#: Coherence within this distance of 1 counts as pure.
_PURE_TOL = 0.0


@dataclass(frozen=True)
class GhzGroup:
    """One independent GHZ coherence block.

    Parameters
    ----------
    photon_ids : tuple of int
        1-based photon indices, strictly increasing.
    members : tuple of (mode_id, passes)
        Per-photon sensing assignment, aligned with ``photon_ids``.
        ``mode_id`` is 1-based; ``passes`` counts how many times the
        photon traverses its mode's phase shifter.
    coherence : float
        Dephasing factor V in [0, 1] multiplying the off-diagonal block.
    phase : float
        Accumulated relative phase (radians) on the |V..V> branch.
    """

    photon_ids: tuple[int, ...]
    members: tuple[tuple[int, int], ...]
    coherence: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "photon_ids", tuple(int(p) for p in self.photon_ids))
        object.__setattr__(
            self, "members", tuple((int(m), int(j)) for m, j in self.members)
        )
        if not self.photon_ids:
            raise ValueError("group must contain at least one photon")
        if any(b <= a for a, b in zip(self.photon_ids, self.photon_ids[1:])):
            raise ValueError("photon_ids must be strictly increasing")
        if min(self.photon_ids) < 1:
            raise ValueError("photon ids are 1-based")
        if len(self.members) != len(self.photon_ids):
            raise ValueError("one (mode, passes) record required per photon")
        for mode, passes in self.members:
            if mode < 1:
                raise ValueError(f"mode id {mode} is not 1-based")
            if passes < 0:
                raise ValueError(f"negative pass count {passes}")
        if not (0.0 <= self.coherence <= 1.0):
            raise InvalidCoherenceError(
                f"coherence {self.coherence} outside [0, 1]"
            )
        if not isfinite(self.phase):
            raise ValueError("group phase must be finite")

    @property
    def size(self) -> int:
        return len(self.photon_ids)

    @property
    def is_pure(self) -> bool:
        return self.coherence >= 1.0 - _PURE_TOL

    def phase_coefficients(self, num_modes: int) -> np.ndarray:
        """Gradient of the group phase with respect to each mode phase.

        Entry k is the total number of passes the group's photons make
        through mode k+1, i.e. d(phase)/d(theta_k).
        """
        coeff = np.zeros(num_modes)
        for mode, passes in self.members:
            if mode > num_modes:
                raise ValueError(f"mode {mode} exceeds num_modes={num_modes}")
            coeff[mode - 1] += passes
        return coeff

    def shifted(self, delta: float) -> "GhzGroup":
        """Copy of the group with ``delta`` added to its phase."""
        return dataclasses.replace(self, phase=self.phase + float(delta))


@dataclass(frozen=True)
class ProductState:
    """Tensor product of GHZ groups partitioning photons 1..N.

    ``max_photons`` caps N (default :data:`MAX_PHOTONS`); it exists to
    keep 2**N oracles bounded and may be raised for analytic-only work
    such as Fisher calculations on large separable references.
    """

    groups: tuple[GhzGroup, ...]
    max_photons: int = MAX_PHOTONS

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        ids = sorted(p for g in self.groups for p in g.photon_ids)
        n = len(ids)
        if ids != list(range(1, n + 1)):
            raise ValueError("groups must partition photon ids 1..N exactly")
        if n > self.max_photons:
            raise TooLargeError(
                f"{n} photons exceeds the configured maximum {self.max_photons}"
            )

    @property
    def total_photons(self) -> int:
        return sum(g.size for g in self.groups)

    @property
    def num_modes(self) -> int:
        return max(mode for g in self.groups for mode, _ in g.members)

    @property
    def is_pure(self) -> bool:
        return all(g.is_pure for g in self.groups)

    def with_coherence(self, coherence) -> "ProductState":
        """Copy with per-group coherence replaced (scalar or sequence)."""
        values = np.broadcast_to(np.asarray(coherence, dtype=float), (len(self.groups),))
        new = tuple(
            dataclasses.replace(g, coherence=float(v))
            for g, v in zip(self.groups, values)
        )
        return dataclasses.replace(self, groups=new)


@dataclass(frozen=True)
class DenseState:
    """2**N complex amplitudes; photon 1 is the most significant bit."""

    num_photons: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (2**self.num_photons,):
            raise ValueError(
                f"expected {2**self.num_photons} amplitudes, got {amps.shape}"
            )
        norm = np.sum(np.abs(amps) ** 2)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state not normalized: sum |a|^2 = {norm!r}")


def to_dense(state: ProductState) -> DenseState:
    """Dense oracle image of a pure product state.

    Each group contributes (|H..H> + e^{i phase} |V..V>)/sqrt(2) on its
    photons; the result is the tensor product in the documented basis
    order.  Only defined for pure states.
    """
    if not state.is_pure:
        raise NotPureError("dense oracle exists only for coherence = 1 states")
    n = state.total_photons
    if n > MAX_PHOTONS:
        raise TooLargeError(f"{n} photons exceeds dense maximum {MAX_PHOTONS}")
    groups = state.groups
    masks = [sum(1 << (n - p) for p in g.photon_ids) for g in groups]
    scale = 2.0 ** (-len(groups) / 2.0)
    amps = np.zeros(2**n, dtype=complex)
    for combo in range(2 ** len(groups)):
        index = 0
        amp = scale
        for j, g in enumerate(groups):
            if (combo >> j) & 1:
                index |= masks[j]
                amp *= np.exp(1j * g.phase)
        amps[index] = amp
    return DenseState(n, amps)


def fidelity(a: DenseState, b: DenseState) -> float:
    """|<a|b>|^2 between two dense states of equal photon count."""
    if a.num_photons != b.num_photons:
        raise DimensionMismatchError(
            f"photon counts differ: {a.num_photons} vs {b.num_photons}"
        )
    overlap = np.vdot(a.amplitudes, b.amplitudes)
    return float(np.abs(overlap) ** 2)


def assert_equiv(analytic: ProductState, dense: DenseState, tol: float) -> bool:
    """True iff both engines give the same sigma_x outcome distribution.

    Every one of the 2**N outcome probabilities must agree within
    ``tol``.  The analytic state must be pure, since the dense engine
    cannot represent dephased states.
    """
    from . import measurement

    if not analytic.is_pure:
        raise NotPureError("engine comparison requires a pure analytic state")
    if analytic.total_photons != dense.num_photons:
        raise DimensionMismatchError(
            f"photon counts differ: {analytic.total_photons} vs {dense.num_photons}"
        )
    p_analytic = measurement.outcome_distribution(analytic).probabilities
    p_dense = measurement.dense_outcome_distribution(dense).probabilities
    return bool(np.max(np.abs(p_analytic - p_dense)) <= tol)
