"""Staged measurement pipelines and the qubit pointer model."""

import numpy as np
import pytest
import scipy.linalg

from qprospect import (
    CompositeState,
    DensityOperator,
    MeasurerSpec,
    Observable,
    PipelineStage,
    ProtocolError,
    ValidationError,
    basis_change,
    compose,
    composite_state_from_correlation,
    entanglement_production,
    evolve,
    pointer_measurer,
    readout,
    run_pipeline,
    tensor_product,
    transform_basis,
)

from helpers import random_density, random_unitary

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
PLUS = DensityOperator(np.ones((2, 2)) / 2.0)


def stage_list(*kinds, duration=0.0, transform=None):
    out = []
    for kind in kinds:
        if kind == "evolve":
            out.append(PipelineStage("evolve", duration=duration))
        elif kind == "transform":
            out.append(PipelineStage("transform", transform=transform))
        else:
            out.append(PipelineStage(kind))
    return out


class TestStageBuildingBlocks:
    def test_compose_is_tensor_product(self, rng):
        rho = random_density(2, rng)
        meas = pointer_measurer()
        joint = compose(rho, meas)
        want = tensor_product(rho.matrix, meas.initial_state.matrix)
        assert np.abs(joint.matrix - want).max() < 1e-14

    def test_evolve_matches_dense_exponential(self, rng):
        rho = random_density(4, rng)
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = (h + h.conj().T) / 2.0
        t = 0.8
        u = scipy.linalg.expm(-1j * t * h)
        want = u @ rho.matrix @ u.conj().T
        assert np.abs(evolve(rho, h, t).matrix - want).max() < 1e-12

    def test_readout_returns_partial_traces(self, rng):
        rho_a = random_density(2, rng)
        rho_b = random_density(2, rng)
        joint = DensityOperator(tensor_product(rho_a.matrix, rho_b.matrix))
        system, meter = readout(joint, (2, 2))
        assert np.abs(system.matrix - rho_a.matrix).max() < 1e-12
        assert np.abs(meter.matrix - rho_b.matrix).max() < 1e-12

    def test_transform_conjugates(self, rng):
        rho = random_density(3, rng)
        u = random_unitary(3, rng)
        got = transform_basis(rho, u)
        want = u @ rho.matrix @ u.conj().T
        assert np.abs(got.matrix - want).max() < 1e-12

    def test_basis_change_is_unitary(self, rng):
        z = Observable.standard(2, "Z")
        x = Observable(np.array([1.0, -1.0]), HADAMARD, "X")
        u = basis_change(z, x)
        assert np.abs(u @ u.conj().T - np.eye(2)).max() < 1e-12
        # coordinates of an X eigenvector expressed in the Z basis
        assert np.abs(u @ np.array([1.0, 0.0]) - HADAMARD[:, 0]).max() < 1e-12


class TestMeasurerSpec:
    def test_pointer_model_shape(self):
        meas = pointer_measurer()
        assert meas.dim == 2
        assert meas.system_dim == 2
        assert np.abs(meas.initial_state.matrix - np.diag([1.0, 0.0])).max() == 0.0

    def test_nonhermitian_coupling_rejected(self):
        with pytest.raises(ValidationError):
            MeasurerSpec(2, DensityOperator.maximally_mixed(2), np.triu(np.ones((4, 4))))

    def test_coupling_must_contain_measurer(self):
        with pytest.raises(ValidationError):
            MeasurerSpec(3, DensityOperator.maximally_mixed(3), np.eye(4))

    def test_ready_state_dimension_checked(self):
        with pytest.raises(ValidationError):
            MeasurerSpec(3, DensityOperator.maximally_mixed(2), np.eye(6))


class TestPipelineProtocol:
    def setup_method(self):
        self.meas = pointer_measurer()
        self.rho = PLUS

    def run(self, stages):
        return run_pipeline(self.rho, self.meas, stages)

    def test_must_start_with_compose(self):
        with pytest.raises(ProtocolError):
            self.run(stage_list("evolve", "readout", duration=1.0))

    def test_single_compose_only(self):
        stages = [PipelineStage("compose"), PipelineStage("compose"),
                  PipelineStage("evolve", duration=1.0), PipelineStage("readout")]
        with pytest.raises(ProtocolError):
            self.run(stages)

    def test_readout_needs_fresh_dynamics(self):
        with pytest.raises(ProtocolError):
            self.run(stage_list("compose", "readout"))

    def test_must_end_with_readout(self):
        with pytest.raises(ProtocolError):
            self.run(stage_list("compose", "evolve", duration=1.0))

    def test_empty_pipeline(self):
        with pytest.raises(ProtocolError):
            self.run([])

    def test_stage_validation(self):
        with pytest.raises(ValidationError):
            PipelineStage("collapse")
        with pytest.raises(ValidationError):
            PipelineStage("readout", duration=1.0)
        with pytest.raises(ValidationError):
            PipelineStage("transform")  # matrix missing
        with pytest.raises(ValidationError):
            PipelineStage("evolve", duration=-1.0)


class TestPipelineRuns:
    def test_zero_coupling_time_changes_nothing(self, rng):
        rho = random_density(2, rng)
        trace = run_pipeline(rho, pointer_measurer(),
                             stage_list("compose", "evolve", "readout"))
        assert np.abs(trace.rho_a.matrix - rho.matrix).max() < 1e-12
        assert trace.rho_a is trace.rho_b

    def test_single_readout_equals_direct_route(self, rng):
        rho = random_density(2, rng)
        meas = pointer_measurer()
        t = 0.7
        trace = run_pipeline(rho, meas, stage_list("compose", "evolve", "readout",
                                                   duration=t))
        joint = compose(rho, meas)
        joint = evolve(joint, meas.coupling, t)
        system, _ = readout(joint, (2, 2))
        assert np.abs(trace.rho_a.matrix - system.matrix).max() < 1e-13

    def test_clock_accumulates_durations(self):
        stages = [PipelineStage("compose"),
                  PipelineStage("evolve", duration=0.25),
                  PipelineStage("evolve", duration=0.5),
                  PipelineStage("readout")]
        trace = run_pipeline(PLUS, pointer_measurer(), stages)
        assert [r.time for r in trace.records] == [0.0, 0.25, 0.75, 0.75]

    def test_readout_decoheres_the_joint(self):
        # after a readout the stored joint state is the product of its
        # reductions, so a second readout reproduces the same factors
        stages = stage_list("compose", "evolve", "readout", duration=np.pi / 4)
        trace = run_pipeline(PLUS, pointer_measurer(), stages)
        record = trace.records[-1]
        want = tensor_product(record.system.matrix, record.meter.matrix)
        assert np.abs(record.state.matrix - want).max() < 1e-13

    def test_system_space_transform_is_extended(self, rng):
        rho = random_density(2, rng)
        meas = pointer_measurer()
        u = random_unitary(2, rng)
        small = run_pipeline(rho, meas, stage_list("compose", "transform", "readout",
                                                   transform=u))
        big = run_pipeline(rho, meas, stage_list("compose", "transform", "readout",
                                                 transform=np.kron(u, np.eye(2))))
        assert np.abs(small.rho_a.matrix - big.rho_a.matrix).max() < 1e-13

    def test_transform_dimension_mismatch(self, rng):
        rho = random_density(2, rng)
        u = random_unitary(3, rng)
        with pytest.raises(ValidationError):
            run_pipeline(rho, pointer_measurer(),
                         stage_list("compose", "transform", "readout", transform=u))

    def test_two_channel_chain(self, rng):
        # full chain: couple, read out, rotate, couple again, read out
        rho = random_density(2, rng)
        stages = [PipelineStage("compose"),
                  PipelineStage("evolve", duration=np.pi / 2),
                  PipelineStage("readout"),
                  PipelineStage("transform", transform=HADAMARD),
                  PipelineStage("evolve", duration=np.pi / 2),
                  PipelineStage("readout")]
        trace = run_pipeline(rho, pointer_measurer(), stages)
        assert len(trace.records) == 6
        # rho_b is the first channel's system state, rho_a the second's
        assert np.abs(trace.rho_b.matrix.diagonal().real
                      - rho.matrix.diagonal().real).max() < 1e-10
        assert abs(np.trace(trace.rho_a.matrix) - 1.0) < 1e-12


class TestPointerModel:
    def test_diagonal_is_preserved_at_all_times(self, rng):
        rho = random_density(2, rng)
        meas = pointer_measurer()
        for t in (0.3, np.pi / 4, np.pi / 2, 2.1):
            trace = run_pipeline(rho, meas,
                                 stage_list("compose", "evolve", "readout", duration=t))
            assert np.abs(trace.rho_a.matrix.diagonal().real
                          - rho.matrix.diagonal().real).max() < 1e-10

    def test_full_coupling_kills_coherence(self):
        # at t = pi/4 the conditional pointer states are orthogonal and the
        # system coherence is gone; the populations survive untouched
        trace = run_pipeline(PLUS, pointer_measurer(),
                             stage_list("compose", "evolve", "readout",
                                        duration=np.pi / 4))
        got = trace.rho_a.matrix
        assert np.abs(got - np.eye(2) / 2.0).max() < 1e-12

    def test_coherence_revives_with_flipped_sign(self):
        # at t = pi/2 the pointer branches are anti-parallel: the joint is
        # a product again and the off-diagonal term returns negated
        trace = run_pipeline(PLUS, pointer_measurer(),
                             stage_list("compose", "evolve", "readout",
                                        duration=np.pi / 2))
        got = trace.rho_a.matrix
        assert np.abs(got - np.array([[0.5, -0.5], [-0.5, 0.5]])).max() < 1e-12

    def test_joint_state_entangles_midway(self):
        # stop before the readout: at t = pi/4 the joint state of system
        # and pointer is genuinely entangled for a coherent input
        meas = pointer_measurer()
        joint = compose(PLUS, meas)
        joint = evolve(joint, meas.coupling, np.pi / 4)
        state = CompositeState(joint.matrix, (2, 2))
        report = entanglement_production(state)
        assert report.epsilon_spectral > 0.5
        purity = float(np.trace(state.reduced(0).matrix @ state.reduced(0).matrix).real)
        assert purity < 0.999

    def test_pointer_starts_detached(self):
        meas = pointer_measurer()
        joint = compose(DensityOperator(np.diag([1.0, 0.0])), meas)
        state = CompositeState(joint.matrix, (2, 2))
        report = entanglement_production(state)
        assert abs(report.epsilon) < 1e-12
        assert abs(report.epsilon_spectral) < 1e-12


class TestCorrelationBridge:
    def test_amplitude_matrix_becomes_composite(self, rng):
        c = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        c /= np.linalg.norm(c)
        state = composite_state_from_correlation(c)
        assert state.dims == (2, 3)
        assert abs(np.trace(state.matrix) - 1.0) < 1e-12
