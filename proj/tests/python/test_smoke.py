import math
import os
import pathlib

import numpy as np
import pytest

import mimocap

DATA = pathlib.Path(os.environ.get("MIMOCAP_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data" / "channels"))


def logdet(h, q):
    m = np.eye(h.shape[0]) + h @ q @ h.conj().T
    return float(np.linalg.slogdet(m)[1])


def test_identity_channel():
    r = mimocap.solve(np.eye(2, dtype=complex), 2.0, 1.0)
    assert r.solver == "closedform"
    assert r.capacity_bits == pytest.approx(2.0, abs=1e-12)
    assert np.allclose(r.q, np.eye(2), atol=1e-12)


def test_worked_miso_example():
    h = np.array([[math.sqrt(0.8), math.sqrt(0.2)]], dtype=complex)
    r = mimocap.solve(h, 1.0, [0.5, 0.5])
    assert r.solver == "unitrank"
    assert r.capacity_nats == pytest.approx(math.log(1.9), abs=1e-12)
    assert r.rank_q == 1


def test_routes_and_reports_on_fixtures():
    h = mimocap.fixtures.h3x2()
    assert h.shape == (2, 3)
    pap = [0.1, 0.1, 1.0]
    assert mimocap.route(h, 1.0, pap) == "singular"
    r = mimocap.solve(h, 1.0, pap)
    q = r.q
    assert q.shape == (3, 3)
    assert np.allclose(q, q.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(q).min() >= -1e-9
    assert np.trace(q).real <= 1.0 + 1e-7
    assert np.all(np.diag(q).real <= np.array(pap) + 1e-7)
    assert r.capacity_nats == pytest.approx(logdet(h, q), abs=1e-9)
    assert r.n_var == 2 * (3 - 2) * 2 + 3
    assert r.d_check is not None
    assert mimocap.mutual_information(h, q) == pytest.approx(r.capacity_nats, abs=1e-9)


def test_cross_validation_against_basic():
    rng = np.random.default_rng(3)
    h = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))) / math.sqrt(2)
    routed, basic, gap = mimocap.cross_validate(h, 1.5, [0.3, 0.6, 0.9])
    assert basic.solver == "basic"
    assert gap == pytest.approx(abs(routed.capacity_nats - basic.capacity_nats), abs=0)
    assert gap <= 1e-5
    assert mimocap.kkt_residual(h, 1.5, [0.3, 0.6, 0.9], routed.q) <= 1e-6


def test_waterfill_bounds_the_constrained_capacity():
    h = mimocap.fixtures.h3x3()
    wf = mimocap.waterfill(h, 2.0)
    assert wf.solver == "waterfill"
    assert mimocap.solve(h, 2.0, 0.5).capacity_nats <= wf.capacity_nats + 1e-9


def test_alpha_and_rank_helpers():
    v = np.array([math.sqrt(0.8), math.sqrt(0.2)], dtype=complex)
    assert mimocap.calculate_alpha(v, [0.5, 0.5], 1.0) == pytest.approx(2.5, abs=1e-12)
    assert mimocap.channel_rank(mimocap.fixtures.h3x2()) == 2
    assert mimocap.channel_rank(mimocap.fixtures.h3x4()) == 3


def test_fixture_files_round_trip(tmp_path):
    h = mimocap.load_channel(DATA / "h3x4.json")
    assert np.array_equal(h, mimocap.fixtures.h3x4())
    p = tmp_path / "h.json"
    p.write_text(mimocap.channel_to_json(h, 2))
    assert np.array_equal(mimocap.load_channel(p), h)


def test_errors_map_to_python_exceptions():
    with pytest.raises(mimocap.InputError):
        mimocap.solve(np.eye(2, dtype=complex), 1.0, [1.0, 1.0, 1.0])
    with pytest.raises(mimocap.InputError):
        mimocap.solve(np.eye(2, dtype=complex), 1.0, 1.0, mode="newton")
    with pytest.raises(mimocap.RoutingError):
        mimocap.solve(mimocap.fixtures.h3x3(), 1.0, 1.0, mode="unitrank")
    with pytest.raises(mimocap.Error):
        mimocap.load_channel(DATA / "missing.json")
    assert issubclass(mimocap.RoutingError, RuntimeError)


def test_conjugate_phase_is_worse():
    rng = np.random.default_rng(5)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    h = (v / np.linalg.norm(v)).conj()[None, :]
    aligned = mimocap.solve(h, 1.0, 0.6).capacity_nats
    conj = mimocap.solve(h, 1.0, 0.6, phase="conjugate").capacity_nats
    assert conj < aligned - 1e-3
