"""CLI surface: JSON shapes, exit codes, determinism, cache behavior."""

import json
import os
import subprocess
import sys

from eiscong.cli import main


def run_cli(args, tmp_path=None, env=None):
    """In-process invocation capturing stdout."""
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(args)
    return code, buf.getvalue()


class TestField:
    def test_worked_field_constants(self):
        code, out = run_cli(["field", "--d", "2"])
        assert code == 0
        obj = json.loads(out)
        assert obj["disc"] == 8
        assert obj["u"] == [1, 1]
        assert obj["u_norm"] == -1
        assert obj["u_plus"] == [3, 2]

    def test_half_integral_serialization(self):
        code, out = run_cli(["field", "--d", "5"])
        obj = json.loads(out)
        assert obj["u"] == ["1/2", "1/2"]


class TestLValue:
    def test_worked_example(self):
        code, out = run_cli(["lvalue", "--d", "2", "--m", "20149"])
        assert code == 0
        obj = json.loads(out)
        assert obj["value"] == "373322926540"
        assert obj["factorization"] == [[2, 2], [5, 1], [281, 1], [4951, 1], [13417, 1]]

    def test_config_echo(self):
        _, out = run_cli(["lvalue", "--d", "2", "--m", "5"])
        obj = json.loads(out)
        assert obj["config"]["command"] == "lvalue"
        assert obj["config"]["m"] == 5


class TestScan:
    def test_candidates(self):
        code, out = run_cli(["scan-congruence", "--d", "2", "--m", "20149"])
        assert code == 0
        lines = [json.loads(l) for l in out.strip().splitlines()]
        cands = [l["p"] for l in lines[1:] if l.get("verdict") == "candidate"]
        assert cands == [281, 4951, 13417]

    def test_determinism(self):
        _, out1 = run_cli(["scan-congruence", "--d", "2", "--m", "5"])
        _, out2 = run_cli(["scan-congruence", "--d", "2", "--m", "5"])
        assert out1 == out2

    def test_cache_round_trip(self, tmp_path):
        cache = str(tmp_path / "cache")
        a = run_cli(["--cache-dir", cache, "scan-congruence", "--d", "2", "--m", "5"])
        assert os.listdir(cache)
        b = run_cli(["--cache-dir", cache, "scan-congruence", "--d", "2", "--m", "5"])
        assert a == b

    def test_stale_version_ignored(self, tmp_path):
        cache = tmp_path / "cache"
        run_cli(["--cache-dir", str(cache), "scan-congruence", "--d", "2", "--m", "5"])
        entries = list(cache.iterdir())
        payload = json.loads(entries[0].read_text())
        payload["version"] = "0.0.0"
        payload["result"] = [{"poisoned": True}]
        entries[0].write_text(json.dumps(payload))
        _, out = run_cli(["--cache-dir", str(cache), "scan-congruence", "--d", "2", "--m", "5"])
        assert "poisoned" not in out


class TestEis:
    def test_coefficients_json_lines(self):
        code, out = run_cli(["eis", "--d", "2", "--m", "5", "--bound", "100"])
        assert code == 0
        lines = [json.loads(l) for l in out.strip().splitlines()]
        by_norm = {}
        for l in lines[1:]:
            by_norm.setdefault(l["norm"], []).append(l["coeff"])
        assert by_norm[1] == [1]
        assert 9 in by_norm  # inert (3)


class TestPadicLambda:
    def test_example_series(self, tmp_path):
        path = tmp_path / "series.json"
        path.write_text(json.dumps(
            {"p": 5, "N": 20, "M": 64,
             "coeffs": ["0,1", "", "1"]}))  # p + T^2
        code, out = run_cli(["padic-lambda", "--in", str(path)])
        assert code == 0
        obj = json.loads(out)
        assert (obj["mu"], obj["lambda"], obj["certified"]) == (0, 2, True)

    def test_zero_series_is_precision_error(self, tmp_path):
        path = tmp_path / "zero.json"
        path.write_text(json.dumps({"p": 5, "N": 4, "M": 6, "coeffs": [""] * 6}))
        code, out = run_cli(["padic-lambda", "--in", str(path)])
        assert code == 3


class TestCheckDistribution:
    def test_pass(self):
        code, out = run_cli(["check-distribution", "--p", "7", "--m0", "4",
                             "--depth", "3"])
        assert code == 0 and json.loads(out)["ok"]

    def test_stabilized(self):
        code, out = run_cli(["check-distribution", "--p", "5", "--m0", "3",
                             "--depth", "4", "--alpha", "1", "--eps-p", "1"])
        assert code == 0 and json.loads(out)["ok"]


class TestPadicL:
    def test_branch_series_with_strip(self):
        code, out = run_cli(["padic-l", "--branch", '{"d":2,"m":5}',
                             "--p", "7", "--N", "4", "--M", "10",
                             "--strip", "[29]"])
        assert code == 0
        obj = json.loads(out)
        assert obj["additivity"]
        assert obj["lambda"] == obj["factors"]["chi1"]["lambda"] + \
            obj["factors"]["chi2"]["lambda"] + obj["factors"]["euler"]["lambda"]

    def test_config_error_exit_code(self):
        code, _ = run_cli(["padic-l", "--branch", '{"d":2,"m":5}',
                           "--p", "6", "--N", "4", "--M", "8"])
        assert code == 2


class TestVerifyExample:
    def test_small_instance(self):
        code, out = run_cli(["verify-example", "--d", "2", "--m", "13",
                             "--N", "2", "--M", "6"])
        obj = json.loads(out)
        assert "substitution" in obj
        assert obj["lvalue"]["value"]
        assert "candidates" in obj
        # candidates may be empty for small m; the bundle still reports stages
        assert "branches" in obj

    def test_bundle_determinism(self):
        a = run_cli(["verify-example", "--d", "2", "--m", "5", "--N", "2", "--M", "6"])
        b = run_cli(["verify-example", "--d", "2", "--m", "5", "--N", "2", "--M", "6"])
        assert a == b

    def test_forced_small_p_rejected(self):
        code, _ = run_cli(["verify-example", "--d", "2", "--m", "5", "--p", "3"])
        assert code == 2

    def test_out_file(self, tmp_path):
        dest = tmp_path / "bundle.json"
        code, out = run_cli(["--out", str(dest), "lvalue", "--d", "2", "--m", "5"])
        assert code == 0 and out == ""
        assert json.loads(dest.read_text())["config"]["m"] == 5


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "eiscong.cli", "field", "--d", "3"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["u"] == [2, 1]
