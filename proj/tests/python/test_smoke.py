import math

import pytest

import curverec


def test_solve_recovers_scene_parameters():
    obs = curverec.observe_scene(seed=7, frames=6)
    report = curverec.solve(obs)
    truth = curverec.scene_params(7)
    assert report.converged
    assert abs(report.params.c - truth.c) < 1e-6
    assert abs(report.params.alpha - truth.alpha) < 1e-6
    assert abs(report.params.beta - truth.beta) < 1e-6
    assert abs(math.remainder(report.params.phi - truth.phi, 2 * math.pi)) < 1e-6
    assert len(report.per_frame) == 6
    assert '"converged": true' in report.to_json()


def test_residual_vanishes_at_truth():
    truth = curverec.scene_params(3)
    for o in curverec.observe_scene(seed=3, frames=5):
        assert abs(curverec.residual(o, truth)) < 1e-8
        pose = curverec.recover_pose(o, truth)
        assert pose.branch in ("plus", "minus")


def test_errors_carry_their_kind():
    obs = curverec.observe_scene(seed=1, frames=3)
    with pytest.raises(curverec.Error) as info:
        curverec.solve(obs)
    assert info.value.kind == "insufficient_frames"
    assert "need 4" in str(info.value)
    with pytest.raises(curverec.Error):
        curverec.solve(obs, method="newton")


def test_no_convergence_is_an_error():
    obs = [curverec.FrameObservation(0.6 + 0.05 * i, (-1) ** i * 1.5, 0.3 * i - 1.0, i) for i in range(8)]
    with pytest.raises(curverec.NoConvergenceError) as info:
        curverec.solve(obs)
    assert isinstance(info.value, curverec.Error)
    assert info.value.kind == "no_convergence"


def test_double_quotient_example():
    assert curverec.double_quotient((0, 0), (1, 0), (2, 0), (3, 0)) == pytest.approx(0.25)


def test_reconstruction_size():
    points = curverec.reconstruct_scene(seed=11, frames=6)
    assert len(points) == 64
    assert all(len(p) == 3 for p in points)


def test_acceptance_entry_point_reports_nine_criteria():
    results = curverec.run_acceptance(seed=1)
    assert [r["id"] for r in results] == list(range(1, 10))
    assert all(r["passed"] for r in results), [r["detail"] for r in results if not r["passed"]]
