import json

import numpy as np
import pytest

from icrates import random_channel, save_channel
from icrates.channels import random_coupling, save_coupling
from icrates.cli import main


@pytest.fixture
def channel_file(tmp_path):
    path = tmp_path / "ch.json"
    save_channel(random_channel(3, (2, 2, 2, 2)), path)
    return str(path)


@pytest.fixture
def coupling_file(tmp_path):
    ch = random_channel(3, (2, 2, 2, 2))
    path = tmp_path / "vc.json"
    save_coupling(random_coupling(ch, 2, 2, seed=1), path)
    return str(path)


@pytest.fixture
def gaussian_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"type":"gaussian","a":0.5,"b":0.4,"p1":1.0,"p2":1.0}\n')
    return str(path)


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, out


FAST = ["--grid", "4", "--cgrid", "2", "--restarts", "1", "--aux-w", "2"]


class TestCommands:
    def test_classify_discrete(self, capsys, channel_file):
        code, out = run(capsys, "classify", channel_file, *FAST)
        assert code == 0
        doc = json.loads(out)
        assert doc["command"] == "classify"
        assert doc["one_sided"] in ("none", "side_a", "side_b")
        assert doc["config"]["grid_steps"] == 4

    def test_classify_one_sided_file(self, capsys, tmp_path):
        rng = np.random.default_rng(0)
        m1 = rng.dirichlet(np.ones(2), size=(2, 2))
        m2 = rng.dirichlet(np.ones(2), size=2)
        from icrates import DiscreteIC

        ch = DiscreteIC.from_array(np.einsum("ijk,jl->ijkl", m1, m2))
        path = tmp_path / "os.json"
        save_channel(ch, path)
        code, out = run(capsys, "classify", str(path), *FAST)
        assert code == 0
        assert json.loads(out)["one_sided"] == "side_a"

    def test_gaussian_sumcap_example(self, capsys):
        code, out = run(capsys, "gaussian", "sumcap", "--a", "0", "--b", "0",
                        "--p1", "1", "--p2", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["in_regime"] is True
        assert doc["sum_capacity_bits"] == pytest.approx(1.0)

    def test_gaussian_regime_and_region(self, capsys, tmp_path):
        code, out = run(capsys, "gaussian", "regime", "--a", "0.5", "--b", "0.4",
                        "--p1", "1", "--p2", "1")
        assert code == 0
        assert "noisy_gaussian" in json.loads(out)
        csv_path = tmp_path / "front.csv"
        code, out = run(capsys, "gaussian", "region", "--a", "0.2", "--b", "0.1",
                        "--p1", "1", "--p2", "1", "--scheme", "semijoint",
                        "--splits", "5", "--csv", str(csv_path))
        assert code == 0
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "theta_deg,h_bits,r1,r2"
        assert len(lines) == 92

    def test_region_json_and_csv(self, capsys, channel_file, tmp_path):
        out_path = tmp_path / "region.json"
        csv_path = tmp_path / "region.csv"
        code, _ = run(capsys, "region", channel_file, "--scheme", "tin", *FAST,
                      "--out", str(out_path), "--csv", str(csv_path))
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["scheme"] == "tin"
        assert len(doc["region"]["support_bits"]) == 91

    def test_sumrate(self, capsys, channel_file):
        code, out = run(capsys, "sumrate", channel_file, *FAST)
        assert code == 0
        doc = json.loads(out)
        assert 0.0 <= doc["tin_bits"] <= 2.0
        assert "optimal_input" in doc

    def test_outer_and_certify(self, capsys, channel_file, coupling_file):
        code, out = run(capsys, "outer", channel_file, "--virtual", coupling_file,
                        *FAST, "--aux-u", "2")
        assert code == 0
        outer = json.loads(out)["outer_bits"]
        code, out = run(capsys, "certify", channel_file, "--virtual", coupling_file,
                        *FAST, "--aux-u", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] in ("CERTIFIED", "OUTER_ONLY", "INCONCLUSIVE")
        assert doc["tin_bits"] <= outer + 1e-9

    def test_verify_exit_zero(self, capsys):
        code, out = run(capsys, "verify", "lemma1", "--trials", "25", "--seed", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["suite"] == "lemma1"
        assert doc["failures"] == 0


class TestExitCodes:
    def test_usage_error_is_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["region", "somefile", "--scheme", "not_a_scheme"])
        assert exc.value.code == 2

    def test_validation_error_is_three(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"type":"discrete","nx1":1,"nx2":1,"ny1":2,"ny2":1,"p":[[[[0.5],[0.4]]]]}')
        assert main(["classify", str(bad)]) == 3

    def test_missing_file_is_three(self, capsys):
        assert main(["classify", "/nonexistent/file.json"]) == 3


class TestDeterminism:
    def test_stdout_byte_identical(self, capsys, channel_file):
        _, out1 = run(capsys, "classify", channel_file, *FAST)
        _, out2 = run(capsys, "classify", channel_file, *FAST)
        assert out1 == out2

    def test_files_byte_identical(self, capsys, channel_file, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "region", channel_file, "--scheme", "semijoint", *FAST, "--out", str(a))
        run(capsys, "region", channel_file, "--scheme", "semijoint", *FAST, "--out", str(b))
        assert a.read_bytes() == b.read_bytes()
