import json

import pytest

from qvortex import cli, spectrum
from qvortex.validation import acceptance_domain


def _run(tmp_path, *args, config=None):
    argv = list(args) + ["--out", str(tmp_path)]
    if config is not None:
        (tmp_path.parent / f"{tmp_path.name}.toml").write_text(config)
        argv += ["--config", str(tmp_path.parent / f"{tmp_path.name}.toml")]
    code = cli.main(argv)
    report = tmp_path / "report.json"
    return code, (json.loads(report.read_text()) if report.exists() else None)


def test_evolve_default(tmp_path):
    code, rep = _run(tmp_path, "evolve")
    assert code == 0
    assert rep["exact_solution_error"] < 1e-8
    assert (tmp_path / "config.snapshot").exists()
    assert (tmp_path / "trajectory.vtxt").exists()


def test_evolve_seeded_table(tmp_path):
    code, rep = _run(tmp_path, "evolve", "--format", "jsonl",
                     config="[dynamics]\nseed_modes = [2, 4]\nn_steps = 200\n")
    assert code == 0
    assert [row["n"] for row in rep["mode_frequency_table"]] == [2, 4]
    assert all(row["relative_error"] < 1e-2 for row in rep["mode_frequency_table"])
    assert (tmp_path / "trajectory.jsonl").exists()


def test_bad_config_exit_code(tmp_path, capsys):
    code, _ = _run(tmp_path, "spectrum", config="[domain]\nR0 = -1.0\n")
    assert code == 2
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and "domain.R0" in err[0]


def test_unstable_step_is_config_error(tmp_path):
    code, _ = _run(tmp_path, "evolve", config="[dynamics]\ndtau = 0.01\n")
    assert code == 2


def test_spectrum_deterministic_and_gamma_min(tmp_path):
    code_a, a = _run(tmp_path / "a", "spectrum")
    code_b, b = _run(tmp_path / "b", "spectrum")
    assert code_a == code_b == 0
    assert a["files"] == b["files"]
    assert a["gamma_min_formula"] == pytest.approx(spectrum.gamma_min(acceptance_domain()), rel=1e-14)
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()


def test_spectrum_empty_and_cap(tmp_path):
    code, rep = _run(tmp_path / "e", "spectrum", config="[spectrum]\ns_min = 4\ns_max = 3\n")
    assert code == 0 and rep["entries"] == 0
    assert (tmp_path / "e" / "spectrum.csv").read_text() == spectrum.CSV_HEADER + "\n"
    code, _ = _run(tmp_path / "c", "spectrum", config="[spectrum]\ncap = 5\n")
    assert code == 4


def test_fractal_references(tmp_path):
    code, rep = _run(tmp_path / "r", "fractal")
    assert code == 0 and abs(rep["dimension"] - 0.5) < 0.05
    code, rep = _run(tmp_path / "u", "fractal", config="[fractal]\nsource = 'uniform'\n")
    assert code == 0 and abs(rep["dimension"] - 1.0) < 0.02
    code, _ = _run(tmp_path / "t", "fractal", config="[fractal]\nn_hi = 20\n")
    assert code == 4


def test_fractal_from_csv(tmp_path):
    _run(tmp_path / "s", "spectrum", config="[spectrum]\ns_max = 1500\nm_max = 1\nell_max = 0\nk_max = 1\n")
    csv = tmp_path / "s" / "spectrum.csv"
    code, rep = _run(tmp_path / "f", "fractal", config=f"[fractal]\nsource = 'csv'\ninput = '{csv}'\n")
    assert code == 0 and rep["n_points"] == 1501


def test_turbulence_seed_repeat(tmp_path):
    conf = "[turbulence]\nn_samples = 2000\n"
    _, a = _run(tmp_path / "a", "turbulence", "--seed", "7", config=conf)
    _, b = _run(tmp_path / "b", "turbulence", "--seed", "7", config=conf)
    _, c = _run(tmp_path / "c", "turbulence", "--seed", "8", config=conf)
    assert a["files"] == b["files"]
    assert a["files"]["samples.jsonl"] != c["files"]["samples.jsonl"]
    assert a["oracle_max_l2_distance"] < 1e-9


def test_turbulence_mean_count(tmp_path):
    conf = "[turbulence]\nn_samples = 100000\nindices = [" + ", ".join(f"[{s}, 1, 0, 1]" for s in range(10)) + "]\n"
    code, rep = _run(tmp_path, "turbulence", config=conf)
    assert code == 0
    assert abs(rep["mean_count"] - 2.5) <= 3 * (2.5 / 1e5) ** 0.5


def test_turbulence_missing_spectrum_is_consistency_error(tmp_path):
    # s beyond N_max cannot be enumerated, so the register has no spectrum entry
    conf = "[domain]\nmu0 = 1.0\n[turbulence]\nindices = [[0, 1, 0, 1], [500, 1, 0, 1]]\n"
    code, _ = _run(tmp_path, "turbulence", config=conf)
    assert code == 3


def test_parser_lists_subcommands():
    text = cli.build_parser().format_help()
    for name in ("evolve", "spectrum", "fractal", "turbulence", "validate"):
        assert name in text
