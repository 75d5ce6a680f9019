import csv
import json

import pytest

from qlat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_local_space(capsys):
    code, payload = run_json(capsys, "local-space", "--p", "3",
                             "--diag", "1,-1,3", "--k", "1")
    assert code == 0
    assert payload["schema_version"] == 1
    assert payload["k_universal"]["value"] is True
    assert payload["k_universal"]["criterion"] == "low-dim-isotropic"


def test_local_space_real(capsys):
    code, payload = run_json(capsys, "local-space", "--real",
                             "--diag", "1,1,-1,-1", "--k", "2")
    assert code == 0
    assert payload["k_universal"]["value"] is True
    assert payload["space"]["signature"] == [2, 2]


def test_local_space_dyadic_hh(capsys):
    code, payload = run_json(capsys, "local-space", "--p", "2",
                             "--diag", "1,-1,1,-1", "--k", "2")
    assert code == 0
    assert payload["k_universal"]["value"] is True
    assert payload["k_universal"]["criterion"] == "hyperbolic-plane-pair"


def test_local_lattice_odd(capsys):
    code, payload = run_json(capsys, "local-lattice", "--p", "3",
                             "--jordan", "0:3:1,1:2:D", "--k", "2")
    assert code == 0
    assert payload["k_universal"]["value"] is True
    code, payload = run_json(capsys, "local-lattice", "--p", "5",
                             "--jordan", "0:4:D", "--k", "2")
    assert code == 0
    assert payload["k_universal"]["value"] is False


def test_local_lattice_k1_oracle_path(capsys):
    code, payload = run_json(capsys, "local-lattice", "--p", "3",
                             "--gram", "2,0,0;0,-3,0;0,0,6", "--k", "1")
    assert code == 0
    assert payload["k_universal"]["value"] is False
    assert payload["k_universal"]["criterion"] == "testing-set-oracle"
    assert payload["k_universal"]["failures"] == ["0:1:1"]


def test_local_lattice_dyadic(capsys):
    code, payload = run_json(capsys, "local-lattice", "--p", "2",
                             "--blocks", "p:1/2:0:0;p:1/2:0:0", "--k", "2")
    assert code == 0
    assert payload["k_universal"]["value"] is True


def test_local_lattice_dyadic_scope_error(capsys):
    code, _, err = run(capsys, "local-lattice", "--p", "2",
                       "--blocks", "d:1", "--k", "3")
    assert code == 2
    assert "quaternary" in err


def test_malformed_inputs_exit_2(capsys):
    assert run(capsys, "local-space", "--p", "4", "--diag", "1")[0] == 2
    assert run(capsys, "local-space", "--p", "3", "--diag", "1,x")[0] == 2
    assert run(capsys, "local-lattice", "--p", "3", "--jordan", "zz",
               "--k", "2")[0] == 2
    assert run(capsys, "oracle", "--p", "3", "--target", "1",
               "--into", "1,0;0,1;0,0")[0] == 2
    assert run(capsys, "quadfield", "-m", "12")[0] == 2


def test_testing_set_counts(capsys):
    for p, k, want in [(3, 1, 4), (3, 2, 7), (5, 3, 8), (2, 2, 15)]:
        code, payload = run_json(capsys, "testing-set", "--p", str(p),
                                 "--k", str(k))
        assert code == 0 and payload["count"] == want


def test_maximal_binary(capsys):
    code, payload = run_json(capsys, "maximal-binary", "--p", "3")
    assert code == 0
    assert payload["jordan"] == "1:2:1"
    assert payload["anisotropic"]["value"] is True
    code, payload = run_json(capsys, "maximal-binary", "--p", "2")
    assert code == 0 and payload["count"] == 15


def test_oracle_command(capsys):
    code, payload = run_json(capsys, "oracle", "--p", "3", "--target", "5",
                             "--into", "1,0;0,-1")
    assert code == 0
    assert payload["verdict"] == "yes"
    assert payload["criterion"].startswith("oracle@3^")
    assert payload["witness"] is not None
    code, payload = run_json(capsys, "oracle", "--p", "2",
                             "--target", "1,1/2;1/2,-1",
                             "--into", "0,1/2,0,0;1/2,0,0,0;0,0,2,0;0,0,0,2",
                             "--precision", "7")
    assert code == 0 and payload["verdict"] == "no"


def test_quadfield_command(capsys):
    code, payload = run_json(capsys, "quadfield", "-m", "-14")
    assert code == 0
    assert payload["extensions"] == [-7]
    assert payload["h_even"]["value"] and payload["lng2"]["value"]
    assert payload["lng1"]["value"] and payload["lng1_table"]["value"]
    code, payload = run_json(capsys, "quadfield", "-m", "-5")
    assert code == 0
    assert payload["lng2"]["value"] and not payload["lng1"]["value"]


def test_atlas_csv_and_plot(capsys, tmp_path):
    csv_path = tmp_path / "atlas.csv"
    png_path = tmp_path / "atlas.png"
    code, _, err = run(capsys, "atlas", "--max", "30",
                       "--csv", str(csv_path), "--plot", str(png_path),
                       "--check-table")
    assert code == 0
    assert "all consistent" in err
    assert png_path.stat().st_size > 0
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0].keys() == {
        "m", "d_F", "real", "ramified_primes", "extensions", "h_even", "lng2",
        "lng1_first_principles", "lng1_table", "consistent"}
    assert all(r["consistent"] == "True" for r in rows)


def test_atlas_stdout(capsys):
    code, out, _ = run(capsys, "atlas", "--max", "10")
    assert code == 0
    assert out.splitlines()[0].startswith("m,d_F,real")


def test_verify_paper(capsys):
    code, out, _ = run(capsys, "verify-paper", "--seed", "7")
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith("ok   ") for line in lines[:-1])
    assert lines[-1] == "all checks passed"
    assert len(lines) >= 14


def test_threads_env_validation(capsys, monkeypatch):
    monkeypatch.setenv("QLAT_THREADS", "nope")
    code, _, err = run(capsys, "quadfield", "-m", "-5")
    assert code == 2
    monkeypatch.setenv("QLAT_THREADS", "4")
    code, _, _ = run(capsys, "quadfield", "-m", "-5")
    assert code == 0
