"""End-to-end tests of the command-line front end, driven in process
through ``main(argv)`` so exit codes, stdout, and stderr are all observable."""

import json
import shutil
import subprocess
import sys

import pytest

from qnls import ops, pwfun
from qnls.cli import main
from qnls.exact import GR_ZERO, GaussianRational, PhasedScalar
from qnls.pwfun import PWFunction


def _write_psi(tmp_path, name, lam, gamma, extra=()):
    path = tmp_path / name
    rc = main(
        ["psi", "--lambda", lam, "--gamma", gamma, "--out", str(path), *extra]
    )
    assert rc == 0
    return path


def _load(path) -> PWFunction:
    return PWFunction.from_json(json.loads(path.read_text()))


# -- psi ------------------------------------------------------------------------------


def test_psi_gamma_zero_is_plane_wave(tmp_path):
    path = _write_psi(tmp_path, "f.json", "2", "0")
    f = _load(path)
    assert f.dimension == 1
    value = pwfun.evaluate(f, (0.25,))
    import cmath

    assert abs(value - cmath.exp(2j * 0.25)) < 1e-12


def test_psi_method_all_cross_checks_and_matches_default(tmp_path):
    a = _write_psi(tmp_path, "a.json", "3/2,-1/3", "2/5", ("--method", "all"))
    b = _write_psi(tmp_path, "b.json", "3/2,-1/3", "2/5", ("--method", "propagation"))
    assert a.read_text() == b.read_text()


def test_psi_single_method_routes(tmp_path):
    for method in ("b_minus", "b_plus"):
        path = _write_psi(tmp_path, f"{method}.json", "1,1/2", "1/3", ("--method", method))
        f = _load(path)
        expected = ops.psi((1, "1/2"), "1/3", method)
        assert (f - expected).is_zero()


def test_psi_flag_validation_exits_two(tmp_path):
    for argv in (
        ["psi", "--lambda", "", "--gamma", "1"],
        ["psi", "--lambda", "1", "--gamma", "bogus"],
        ["psi", "--lambda", "1", "--gamma", "1", "--method", "bogus"],
        ["psi", "--gamma", "1"],
    ):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 2


def test_psi_degenerate_spectrum_supported(tmp_path):
    # Equal spectral values are a legitimate confluent case for the
    # propagation construction.
    path = _write_psi(tmp_path, "deg.json", "1,1", "1/2")
    f = _load(path)
    assert f.dimension == 2


# -- apply ----------------------------------------------------------------------------


def test_apply_round_trip_is_bit_identical(tmp_path):
    src = _write_psi(tmp_path, "f.json", "3/2,-1/3", "2/5")
    dst = tmp_path / "g.json"
    rc = main(
        [
            "apply",
            "--op",
            "scale",
            "--params",
            '{"scalar": "1"}',
            "--in",
            str(src),
            "--out",
            str(dst),
        ]
    )
    assert rc == 0
    assert src.read_bytes() == dst.read_bytes()


def test_apply_symmetrize_idempotent_bytes(tmp_path):
    src = _write_psi(tmp_path, "f.json", "1,-2", "1/2")
    once = tmp_path / "once.json"
    twice = tmp_path / "twice.json"
    argv = ["apply", "--op", "symmetrize", "--in", str(src), "--out", str(once)]
    assert main(argv) == 0
    argv = ["apply", "--op", "symmetrize", "--in", str(once), "--out", str(twice)]
    assert main(argv) == 0
    assert once.read_bytes() == twice.read_bytes()


def test_apply_matches_library_call(tmp_path):
    src = _write_psi(tmp_path, "f.json", "3/2,-1/3", "2/5")
    dst = tmp_path / "d.json"
    rc = main(
        [
            "apply",
            "--op",
            "differentiate",
            "--params",
            '{"slot": 1}',
            "--in",
            str(src),
            "--out",
            str(dst),
        ]
    )
    assert rc == 0
    expected = pwfun.differentiate(1, ops.psi(("3/2", "-1/3"), "2/5"))
    assert (_load(dst) - expected).is_zero()


def test_apply_missing_parameter_exits_one(tmp_path, capsys):
    src = _write_psi(tmp_path, "f.json", "1", "1/2")
    rc = main(
        ["apply", "--op", "dunkl", "--params", '{"slot": 1}', "--in", str(src)]
    )
    assert rc == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "gamma" in err


def test_apply_bad_flags_exit_two(tmp_path):
    src = _write_psi(tmp_path, "f.json", "1", "1/2")
    for argv in (
        ["apply", "--op", "no_such_op", "--in", str(src)],
        ["apply", "--op", "scale", "--params", "[1]", "--in", str(src)],
        ["apply", "--op", "scale", "--params", "not json", "--in", str(src)],
    ):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 2


def test_apply_rejects_non_function_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"hello\": 1}\n")
    rc = main(["apply", "--op", "symmetrize", "--in", str(bad)])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")
    missing = tmp_path / "missing.json"
    rc = main(["apply", "--op", "symmetrize", "--in", str(missing)])
    assert rc == 1


# -- verify ---------------------------------------------------------------------------


def test_verify_single_suite_stdout(capsys):
    rc = main(["verify", "--suite", "eigen", "-N", "2", "--points", "1"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["suite_name"] == "eigen"
    assert report["passed"] is True


def test_verify_single_suite_report_file(tmp_path, capsys):
    out = tmp_path / "eigen.json"
    rc = main(
        [
            "verify",
            "--suite",
            "eigen",
            "-N",
            "2",
            "--points",
            "1",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    assert capsys.readouterr().out.strip() == "eigen: PASS"
    assert json.loads(out.read_text())["passed"] is True


def test_verify_all_writes_report_directory(tmp_path, capsys):
    out = tmp_path / "reports"
    rc = main(
        ["verify", "--suite", "all", "-N", "2", "--points", "1", "--out", str(out)]
    )
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 14
    assert all(line.endswith(": PASS") for line in lines)
    files = sorted(p.name for p in out.iterdir())
    assert len(files) == 14
    assert "eigen.json" in files
    for p in out.iterdir():
        assert json.loads(p.read_text())["passed"] is True


def test_verify_seed_changes_parameters(capsys):
    main(["verify", "--suite", "eigen", "-N", "1", "--points", "1", "--seed", "1"])
    first = json.loads(capsys.readouterr().out)
    main(["verify", "--suite", "eigen", "-N", "1", "--points", "1", "--seed", "2"])
    second = json.loads(capsys.readouterr().out)
    assert first["parameter_points"] != second["parameter_points"]


def test_verify_flag_validation(capsys):
    with pytest.raises(SystemExit) as err:
        main(["verify", "--suite", "nope"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["verify", "--suite", "eigen", "--points", "0"])
    assert err.value.code == 2
    capsys.readouterr()
    rc = main(["verify", "--suite", "daha_dunkl", "-N", "1"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


# -- bae ------------------------------------------------------------------------------


def test_bae_free_particle_golden(capsys):
    rc = main(
        ["bae", "-N", "1", "--gamma", "2.0", "-L", "6.283185307179586", "-n", "1"]
    )
    assert rc == 0
    roots = json.loads(capsys.readouterr().out)
    assert abs(roots["lambdas"][0] - 1.0) < 1e-9
    assert roots["residual"] < 1e-10
    assert roots["quantum_numbers"] == ["1"]


def test_bae_invalid_inputs_exit_one(capsys):
    rc = main(["bae", "-N", "2", "--gamma", "-1", "-L", "5"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")
    rc = main(["bae", "-N", "2", "--gamma", "1", "-L", "5", "-n", "0,1"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


def test_bae_writes_roots_file(tmp_path):
    out = tmp_path / "roots.json"
    rc = main(["bae", "-N", "2", "--gamma", "1.0", "-L", "5.0", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert len(data["lambdas"]) == 2
    assert data["residual"] < 1e-10


# -- grid -----------------------------------------------------------------------------


def test_grid_constant_function_csv(tmp_path, capsys):
    src = _write_psi(tmp_path, "f.json", "0", "1")
    rc = main(
        [
            "grid",
            "--in",
            str(src),
            "--resolution",
            "3",
            "--xplus",
            "0",
            "--xminus",
            "2",
        ]
    )
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "x1,re,im,abs2"
    assert len(lines) == 4
    xs = []
    for line in lines[1:]:
        x, re, im, abs2 = (float(v) for v in line.split(","))
        xs.append(x)
        assert abs(re - 1.0) < 1e-12
        assert abs(im) < 1e-12
        assert abs(abs2 - 1.0) < 1e-12
    assert xs == [0.0, 1.0, 2.0]


def test_grid_two_particle_header_and_row_count(tmp_path):
    src = _write_psi(tmp_path, "f.json", "1,-1", "1/2")
    out = tmp_path / "g.csv"
    rc = main(
        [
            "grid",
            "--in",
            str(src),
            "--resolution",
            "4",
            "--xplus",
            "0",
            "--xminus",
            "1",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "x1,x2,re,im,abs2"
    assert len(lines) == 1 + 16
    for line in lines[1:]:
        parts = [float(v) for v in line.split(",")]
        assert len(parts) == 5
        assert abs(parts[4] - (parts[2] ** 2 + parts[3] ** 2)) < 1e-12


def test_grid_from_roots_is_box_periodic(tmp_path):
    roots_path = tmp_path / "roots.json"
    assert (
        main(
            [
                "bae",
                "-N",
                "2",
                "--gamma",
                "1.0",
                "-L",
                "6.283185307179586",
                "--out",
                str(roots_path),
            ]
        )
        == 0
    )
    out = tmp_path / "grid.csv"
    rc = main(["grid", "--roots", str(roots_path), "--resolution", "3", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "x1,x2,re,im,abs2"
    assert len(lines) == 1 + 9
    rows = [tuple(float(v) for v in line.split(",")) for line in lines[1:]]
    # Both box faces in each coordinate carry the same values.
    by_point = {(r[0], r[1]): complex(r[2], r[3]) for r in rows}
    length = 6.283185307179586
    mid = length / 2
    assert abs(by_point[(0.0, mid)] - by_point[(length, mid)]) < 1e-7
    assert abs(by_point[(mid, 0.0)] - by_point[(mid, length)]) < 1e-7


def test_grid_source_flag_validation(tmp_path, capsys):
    src = _write_psi(tmp_path, "f.json", "0", "1")
    roots = tmp_path / "roots.json"
    main(["bae", "-N", "1", "--gamma", "1.0", "-L", "5.0", "--out", str(roots)])
    capsys.readouterr()
    rc = main(["grid", "--resolution", "3"])
    assert rc == 2
    assert "exactly one" in capsys.readouterr().err
    rc = main(
        [
            "grid",
            "--in",
            str(src),
            "--roots",
            str(roots),
            "--resolution",
            "3",
            "--xplus",
            "0",
            "--xminus",
            "1",
        ]
    )
    assert rc == 2
    rc = main(["grid", "--in", str(src), "--resolution", "3"])
    assert rc == 2
    assert "requires --xplus and --xminus" in capsys.readouterr().err
    rc = main(
        ["grid", "--in", str(src), "--resolution", "1", "--xplus", "0", "--xminus", "1"]
    )
    assert rc == 1
    assert "resolution" in capsys.readouterr().err
    rc = main(
        ["grid", "--in", str(src), "--resolution", "3", "--xplus", "1", "--xminus", "0"]
    )
    assert rc == 1


# -- innerprod ------------------------------------------------------------------------


def test_innerprod_constant_gives_box_volume(tmp_path, capsys):
    src = _write_psi(tmp_path, "f.json", "0", "1")
    rc = main(
        [
            "innerprod",
            "--left",
            str(src),
            "--right",
            str(src),
            "--xplus",
            "0",
            "--xminus",
            "2",
        ]
    )
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    value = PhasedScalar.from_json(data)
    assert value == PhasedScalar({GR_ZERO: GaussianRational(2)})


def test_innerprod_dimension_mismatch_exits_one(tmp_path, capsys):
    one = _write_psi(tmp_path, "one.json", "1", "1/2")
    two = _write_psi(tmp_path, "two.json", "1,2", "1/2")
    rc = main(
        [
            "innerprod",
            "--left",
            str(one),
            "--right",
            str(two),
            "--xplus",
            "0",
            "--xminus",
            "1",
        ]
    )
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


# -- process-level entry points ---------------------------------------------------------


def test_module_is_executable():
    proc = subprocess.run(
        [sys.executable, "-m", "qnls.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "psi" in proc.stdout and "verify" in proc.stdout


def test_console_script_installed():
    exe = shutil.which("qnls")
    assert exe is not None
    proc = subprocess.run(
        [exe, "bae", "-N", "1", "--gamma", "1.0", "-L", "5.0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lambdas"] == [0.0]
