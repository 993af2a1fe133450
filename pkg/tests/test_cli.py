import json

import pytest

from overpart.cli import main


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCount:
    def test_side_all_passes(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--N", "7", "--a", "1,2,4",
                               "--n-max", "8", "--side", "all")
        assert code == 0
        assert "verdict: pass" in out

    def test_invalid_system_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "count", "--N", "7", "--a", "1,2,3",
                               "--n-max", "8")
        assert code == 2
        assert "collide" in err

    def test_n_max_zero(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--N", "3", "--a", "1,2",
                               "--n-max", "0", "--side", "G")
        assert code == 0
        assert "0 | 1" in out

    def test_json_output(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--N", "7", "--a", "1,2,4",
                               "--n-max", "8", "--side", "all",
                               "--output", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["verdict"] == "pass"
        assert obj["first_mismatch"] is None
        assert obj["F"]["rows"][8]["by_k"] == ["1", "2", "1"]
        assert obj["F"]["rows"] == obj["G"]["rows"]

    def test_csv_output(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--N", "3", "--a", "1,2",
                               "--n-max", "2", "--side", "F",
                               "--output", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,k0,k1,k2"
        assert lines[-1] == "2,1,2,1"


class TestExpand:
    def test_product_table(self, capsys):
        code, out, _ = run_cli(capsys, "expand", "--what", "product",
                               "--N", "7", "--a", "1,2,4", "--trunc", "8")
        assert code == 0
        assert "q^8: 1 + 2*d + d^2" in out

    def test_gm_zero_bound_is_constant(self, capsys):
        code, out, _ = run_cli(capsys, "expand", "--what", "gm", "--m", "0",
                               "--N", "7", "--a", "1,2,4", "--trunc", "6",
                               "--output", "json")
        assert code == 0
        assert json.loads(out)["terms"] == [{"q": 0, "d": 0, "c": "1"}]

    def test_gm_requires_m(self, capsys):
        code, _, err = run_cli(capsys, "expand", "--what", "gm",
                               "--N", "7", "--a", "1,2,4")
        assert code == 2
        assert "--m" in err

    def test_limit_json_byte_identical_to_product(self, capsys):
        _, out_prod, _ = run_cli(capsys, "expand", "--what", "product",
                                 "--N", "9", "--a", "1,3,5",
                                 "--trunc", "20", "--output", "json")
        _, out_lim, _ = run_cli(capsys, "expand", "--what", "limit",
                                "--N", "9", "--a", "1,3,5",
                                "--trunc", "20", "--output", "json")
        assert out_prod == out_lim

    def test_json_keys_sorted(self, capsys):
        _, out, _ = run_cli(capsys, "expand", "--what", "product",
                            "--N", "3", "--a", "1,2", "--trunc", "4",
                            "--output", "json")
        obj = json.loads(out)
        assert out == json.dumps(obj, sort_keys=True,
                                 separators=(",", ":")) + "\n"


class TestVerify:
    def test_selected_checks(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--N", "7", "--a", "1,2,4",
                               "--trunc", "25", "--checks", "theorem,tmj")
        assert code == 0
        assert "theorem  pass" in out
        assert "tmj      pass" in out

    def test_theorem_at_default_depth(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--N", "7", "--a", "1,2,4",
                               "--trunc", "40", "--checks", "theorem")
        assert code == 0
        assert "verdict: pass" in out

    def test_residual_checks_json(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--N", "3", "--a", "1,2",
                               "--trunc", "12",
                               "--checks", "lemma1,lemma2,eq357,key,rec",
                               "--output", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["verdict"] == "pass"
        checks = {c["name"]: c for c in obj["systems"][0]["checks"]}
        assert set(checks) == {"lemma1", "lemma2", "eq357", "key", "rec"}
        assert all(c["failures"] == 0 for c in checks.values())
        assert all(c["cases"] > 0 for c in checks.values())

    def test_chain_check(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--N", "3", "--a", "1,2",
                               "--trunc", "15", "--x-trunc", "5",
                               "--checks", "chain", "--output", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["systems"][0]["checks"][0]["failures"] == 0

    def test_battery_smoke(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--battery", "--trunc",
                               "16", "--checks", "theorem,tmj",
                               "--output", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["verdict"] == "pass"
        assert [e["system"]["N"] for e in obj["systems"]] == [3, 7, 9, 15]

    def test_unknown_check_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--N", "3", "--a", "1,2",
                               "--checks", "conjecture")
        assert code == 2
        assert "unknown check" in err

    def test_requires_system_or_battery(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--checks", "tmj")
        assert code == 2
        assert "battery" in err

    def test_invalid_system_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, "verify", "--N", "6", "--a", "1,2,4",
                             "--checks", "tmj")
        assert code == 2
