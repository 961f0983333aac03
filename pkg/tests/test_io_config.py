import json

import numpy as np
import pytest

from qvortex import io
from qvortex.config import config_from_dict, load_config
from qvortex.errors import ConfigError


def _traj():
    tau = np.array([0.0, 0.5])
    curves = np.arange(2 * 3 * 8, dtype=float).reshape(2, 3, 8) / 7.0
    return tau, curves


def test_binary_roundtrip_and_layout(tmp_path):
    tau, curves = _traj()
    path = tmp_path / "t.vtxt"
    io.write_trajectory_binary(path, tau, curves)
    raw = path.read_bytes()
    assert raw[:4] == b"VTXT"
    assert int.from_bytes(raw[4:8], "little") == 1
    assert int.from_bytes(raw[8:12], "little") == 8
    assert int.from_bytes(raw[12:16], "little") == 2
    assert len(raw) == 16 + 2 * 8 * (1 + 24)
    t2, c2 = io.read_trajectory_binary(path)
    assert np.array_equal(t2, tau) and np.array_equal(c2, curves)


def test_csv_roundtrip(tmp_path):
    tau, curves = _traj()
    io.write_trajectory_csv(tmp_path / "t.csv", tau, curves)
    assert (tmp_path / "t.csv").read_text().startswith("tau,xi,r_x,r_y,r_z\n")
    t2, c2 = io.read_trajectory_csv(tmp_path / "t.csv")
    assert np.array_equal(t2, tau) and np.array_equal(c2, curves)


def test_bad_magic(tmp_path):
    (tmp_path / "x").write_bytes(b"NOPE" + bytes(12))
    with pytest.raises(ValueError):
        io.read_trajectory_binary(tmp_path / "x")


def test_defaults_and_snapshot_roundtrip(tmp_path):
    cfg = load_config()
    assert cfg.schema == 1 and cfg.dynamics.M == 16 and cfg.domain.R1 / cfg.domain.R0 == 100
    (tmp_path / "c.snapshot").write_text(cfg.snapshot())
    assert load_config(tmp_path / "c.snapshot") == cfg


def test_toml_overrides(tmp_path):
    (tmp_path / "c.toml").write_text("schema = 1\n[dynamics]\nseed_modes = [2, 3]\nn_steps = 10\n")
    cfg = load_config(tmp_path / "c.toml")
    assert cfg.dynamics.seed_modes == [2, 3] and cfg.dynamics.n_steps == 10


@pytest.mark.parametrize(
    "raw, field",
    [
        ({"domain": {"R0": -1.0}}, "domain.R0"),
        ({"domain": {"Rf": 20.0}}, "domain.Rf"),
        ({"dynamics": {"M": "x"}}, "dynamics.M"),
        ({"dynamics": {"seed_modes": [1]}}, "dynamics.seed_modes"),
        ({"spectrum": {"axial_convention": "odd"}}, "spectrum.axial_convention"),
        ({"turbulence": {"bogus": 1}}, "turbulence.bogus"),
        ({"schema": 2}, "schema"),
        ({"extra": {}}, "extra"),
    ],
)
def test_errors_name_field(raw, field):
    with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
        config_from_dict(raw)


def test_invalid_toml(tmp_path):
    (tmp_path / "c.toml").write_text("[domain\n")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "c.toml")


def test_write_json_sorted(tmp_path):
    io.write_json(tmp_path / "r.json", {"b": 0.1, "a": 1})
    text = (tmp_path / "r.json").read_text()
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text)["b"] == 0.1
