"""Measurement modeled as a staged channel pipeline.

A measurement couples the studied system to a measuring device: compose
the joint state, let the coupling act unitarily, read the factors back
out, optionally evolve again and rotate into the eigenbasis of a second
observable, then read out the final reduced state.  The canonical chain
has six stages (compose, evolve, readout, evolve, transform, readout),
but any well-ordered prefix built from the same stage kinds is accepted:
the pipeline must start by composing, every readout must digest a
preceding evolution or transform, and the chain must end with a readout.

Reading out replaces the joint state by the product of its reductions,
which is exactly the decoherence step of a nonselective measurement.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qcore
from .composite import CompositeState
from .errors import DimensionMismatchError, ProtocolError, ValidationError
from .events import DensityOperator, Observable


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MeasurerSpec:
    """A measuring device: its dimension, ready state, and system coupling.

    The coupling is a Hermitian generator on the joint space
    ``system (x) measurer`` with the system as the slow factor; the system
    dimension is inferred when the pipeline runs.
    """

    dim: int
    initial_state: DensityOperator
    coupling: np.ndarray

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError(f"measurer dimension must be positive, got {self.dim}")
        if self.initial_state.dim != self.dim:
            raise DimensionMismatchError(
                f"measurer ready state has dim {self.initial_state.dim}, expected {self.dim}"
            )
        coupling = np.array(qcore.require_hermitian(self.coupling, "coupling"))
        if coupling.shape[0] % self.dim != 0 or coupling.shape[0] < self.dim:
            raise DimensionMismatchError(
                f"coupling dimension {coupling.shape[0]} is not a multiple "
                f"of the measurer dimension {self.dim}"
            )
        object.__setattr__(self, "coupling", _freeze(coupling))

    @property
    def system_dim(self) -> int:
        return self.coupling.shape[0] // self.dim


@dataclass(frozen=True, eq=False)
class PipelineStage:
    """One pipeline step: compose, evolve (with duration), readout, or transform."""

    kind: str
    duration: float = 0.0
    transform: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("compose", "evolve", "readout", "transform"):
            raise ValidationError(f"unknown stage kind {self.kind!r}")
        if not np.isfinite(self.duration) or self.duration < 0:
            raise ValidationError(f"stage duration must be finite and >= 0")
        if self.kind != "evolve" and self.duration != 0.0:
            raise ValidationError(f"{self.kind} stages carry no duration")
        if self.kind == "transform":
            if self.transform is None:
                raise ValidationError("transform stage needs a matrix")
            t = np.array(qcore.require_unitary(self.transform, "basis transform"))
            object.__setattr__(self, "transform", _freeze(t))
        elif self.transform is not None:
            raise ValidationError(f"{self.kind} stages carry no transform")


@dataclass(frozen=True, eq=False)
class StageRecord:
    """Joint state and clock after one stage; readouts also keep the factors."""

    kind: str
    time: float
    state: DensityOperator
    system: DensityOperator | None = None
    meter: DensityOperator | None = None


@dataclass(frozen=True, eq=False)
class PipelineTrace:
    """Full log of a pipeline run.

    ``rho_b`` is the reduced system state at the first readout (the result
    of the first measurement channel) and ``rho_a`` the reduced system
    state at the last readout (the final observable's state).  In a
    single-readout pipeline the two coincide.
    """

    records: tuple[StageRecord, ...]
    rho_a: DensityOperator
    rho_b: DensityOperator


def compose(rho: DensityOperator, measurer: MeasurerSpec) -> DensityOperator:
    """Joint ready state ``rho (x) rho_meter``."""
    return DensityOperator(
        qcore.tensor_product(rho.matrix, measurer.initial_state.matrix)
    )


def evolve(rho: DensityOperator, h, t: float) -> DensityOperator:
    """Unitary evolution of a state under a Hermitian generator for time ``t``."""
    u = qcore.matrix_exponential(h, t)
    return DensityOperator(u @ rho.matrix @ u.conj().T)


def readout(rho: DensityOperator, dims: tuple[int, int]) -> tuple[DensityOperator, DensityOperator]:
    """Reduced states of both factors of a joint state."""
    if dims[0] * dims[1] != rho.dim:
        raise DimensionMismatchError(
            f"dims {dims} incompatible with joint state of dim {rho.dim}"
        )
    return (
        DensityOperator(qcore.partial_trace(rho.matrix, dims, 0)),
        DensityOperator(qcore.partial_trace(rho.matrix, dims, 1)),
    )


def transform_basis(rho: DensityOperator, t) -> DensityOperator:
    """Rotate a state by a unitary: ``T rho T+``."""
    t = qcore.require_unitary(t, "basis transform")
    if t.shape[0] != rho.dim:
        raise DimensionMismatchError(
            f"transform dim {t.shape[0]} vs state dim {rho.dim}"
        )
    return DensityOperator(t @ rho.matrix @ t.conj().T)


def basis_change(obs_a: Observable, obs_b: Observable) -> np.ndarray:
    """Default transform between two observables' eigenbases.

    Maps coordinates in the eigenbasis of ``obs_b`` to coordinates in the
    eigenbasis of ``obs_a``; unitary whenever both bases are orthonormal.
    """
    if obs_a.dim != obs_b.dim:
        raise DimensionMismatchError(
            f"observables {obs_a.label!r} and {obs_b.label!r} act on different spaces"
        )
    return obs_a.eigenbasis.conj().T @ obs_b.eigenbasis


def run_pipeline(
    rho: DensityOperator, measurer: MeasurerSpec, stages: Sequence[PipelineStage]
) -> PipelineTrace:
    """Run a staged measurement pipeline and log every intermediate state.

    Parameters
    ----------
    rho : DensityOperator
        System input state; its dimension must match the coupling.
    measurer : MeasurerSpec
        The measuring device, providing the ready state and the joint
        Hermitian coupling used by every evolve stage.
    stages : sequence of PipelineStage
        Must start with the single compose stage, every readout must
        follow an evolve or transform, and the last stage must be a
        readout.  Transform stages may carry either a system-space matrix
        (extended by the identity on the measurer) or a joint-space one.
    """
    stages = list(stages)
    if not stages:
        raise ProtocolError("empty pipeline")
    if stages[0].kind != "compose":
        raise ProtocolError(f"pipeline must start with compose, got {stages[0].kind!r}")
    if any(s.kind == "compose" for s in stages[1:]):
        raise ProtocolError("compose may appear only once, at the start")
    if stages[-1].kind != "readout":
        raise ProtocolError(f"pipeline must end with a readout, got {stages[-1].kind!r}")
    for prev, stage in zip(stages, stages[1:]):
        if stage.kind == "readout" and prev.kind not in ("evolve", "transform"):
            raise ProtocolError(
                f"readout must follow an evolve or transform stage, found after {prev.kind!r}"
            )
    if rho.dim != measurer.system_dim:
        raise DimensionMismatchError(
            f"system state dim {rho.dim} vs coupling system dim {measurer.system_dim}"
        )

    dims = (rho.dim, measurer.dim)
    records: list[StageRecord] = []
    clock = 0.0
    joint = None
    first_readout: DensityOperator | None = None
    last_readout: DensityOperator | None = None

    for stage in stages:
        if stage.kind == "compose":
            joint = compose(rho, measurer)
            records.append(StageRecord("compose", clock, joint))
        elif stage.kind == "evolve":
            joint = evolve(joint, measurer.coupling, stage.duration)
            clock += stage.duration
            records.append(StageRecord("evolve", clock, joint))
        elif stage.kind == "transform":
            t = stage.transform
            if t.shape[0] == dims[0]:
                t = qcore.tensor_product(t, np.eye(dims[1], dtype=complex))
            elif t.shape[0] != dims[0] * dims[1]:
                raise DimensionMismatchError(
                    f"transform dim {t.shape[0]} matches neither the system "
                    f"({dims[0]}) nor the joint space ({dims[0] * dims[1]})"
                )
            joint = transform_basis(joint, t)
            records.append(StageRecord("transform", clock, joint))
        else:  # readout
            system, meter = readout(joint, dims)
            if first_readout is None:
                first_readout = system
            last_readout = system
            joint = DensityOperator(qcore.tensor_product(system.matrix, meter.matrix))
            records.append(StageRecord("readout", clock, joint, system, meter))

    return PipelineTrace(tuple(records), last_readout, first_readout)


def composite_state_from_correlation(c) -> CompositeState:
    """Pure composite state built from a two-time amplitude matrix ``c[n, alpha]``."""
    return CompositeState.from_amplitudes(c)


def pointer_measurer() -> MeasurerSpec:
    """Qubit pointer model: meter ready in ``|0>``, coupling ``sigma_z (x) sigma_x``.

    The coupling commutes with the system's computational projectors, so
    the system's diagonal is left untouched at every coupling time while
    the pointer precesses conditionally on it.
    """
    sz = np.diag([1.0, -1.0]).astype(complex)
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    return MeasurerSpec(
        2, DensityOperator.from_pure([1.0, 0.0]), np.kron(sz, sx)
    )
