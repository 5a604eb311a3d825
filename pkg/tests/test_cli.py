import json

from dcubed.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_diff_first_order(capsys):
    code, out, _ = run(capsys, "diff", "-k", "1", "x1")
    assert code == 0
    assert out.strip() == "dx1"


def test_diff_third_order_of_generator_mod_ideal(capsys):
    code, out, _ = run(capsys, "diff", "-k", "3", "x1", "--mod-ideal")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "0"
    assert lines[1] == "member of I_q"


def test_diff_third_order_of_word(capsys):
    code, out, _ = run(capsys, "diff", "-k", "3", "x1 x2", "--mod-ideal",
                       "--preset", "commutative")
    assert code == 0
    assert out.strip().splitlines()[-1] == "member of I_q"


def test_diff_latex_format(capsys):
    code, out, _ = run(capsys, "diff", "--format", "latex", "x1")
    assert code == 0
    assert out.strip() == r"dx^{1}"


def test_diff_json_format(capsys):
    code, out, _ = run(capsys, "diff", "--format", "json", "x1")
    assert code == 0
    assert json.loads(out) == [{"letters": [[1, 1]],
                                "coefficient": [{"word": [], "scalar":
                                                 {"a": "1", "b": "0"}}]}]


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "diff", "x1 +")
    assert code == 2
    assert "error:" in err


def test_unknown_preset_exit_code(capsys):
    code, _, err = run(capsys, "diff", "--preset", "nonsense", "x1")
    assert code == 2


def test_member_generator_combination(capsys):
    code, out, _ = run(capsys, "member",
                       "dx1 (*) dx2 - q dx2 (*) dx1", "--preset", "commutative")
    assert code == 0
    assert "status: member" in out
    assert "dx_dx(1,2)" in out


def test_member_non_member(capsys):
    code, out, _ = run(capsys, "member", "dx1", "--preset", "commutative")
    assert code == 1
    assert "status: not_member_at_bound" in out
    assert "residual: dx1" in out


def test_member_json(capsys):
    code, out, _ = run(capsys, "member", "d2x1", "--format", "json")
    assert code == 1
    obj = json.loads(out)
    assert obj["status"] == "not_member_at_bound"


def test_member_inconclusive_with_tiny_cap(capsys):
    code, out, _ = run(capsys, "member", "x1 * (dx1 (*) dx2 - q dx2 (*) dx1)",
                       "--preset", "commutative", "--size-cap", "1")
    assert code == 3


def test_reduce_commutative(capsys):
    code, out, _ = run(capsys, "reduce", "dx1 (*) dx2", "--preset", "commutative")
    assert code == 0
    assert out.strip() == "dx2 (*) dx1 * q"
    code, out, _ = run(capsys, "reduce", "dx1 (*) dx2",
                       "--preset", "commutative", "--order", "asc")
    assert code == 0
    assert out.strip() == "dx1 (*) dx2"


def test_verify_all_suites(capsys, tmp_path):
    report_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--preset", "commutative",
                       "--suite", "all", "--max-word-len", "1",
                       "--report", str(report_path))
    assert code == 0
    assert "all checks passed" in out
    data = json.loads(report_path.read_text())
    assert data["summary"]["passed"] is True
    assert data["preset"] == "commutative"


def test_verify_reports_are_deterministic(capsys, tmp_path):
    paths = []
    for run_idx in (1, 2):
        path = tmp_path / f"report{run_idx}.json"
        code, _, _ = run(capsys, "verify", "--preset", "scalar-twist",
                         "--suite", "d2-binomial", "--seed", "42",
                         "--max-word-len", "1", "--report", str(path))
        assert code == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_config_file_roundtrip(capsys, tmp_path):
    commutative_entries = [
        [[f"x{i}" if j == k else "0" for k in (1, 2)] for j in (1, 2)]
        for i in (1, 2)]
    cfg = {"n": 2, "xi_entries": commutative_entries, "seed": 3}
    path = tmp_path / "session.json"
    path.write_text(json.dumps(cfg))
    code, out_custom, _ = run(capsys, "diff", "--config", str(path), "-k", "2",
                              "x1 x2")
    assert code == 0
    code, out_preset, _ = run(capsys, "diff", "--preset", "commutative",
                              "-k", "2", "x1 x2")
    assert code == 0
    assert out_custom == out_preset


def test_config_rejects_bad_entries(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "xi_entries": [[["dx1", "0"]]]}))
    code, _, err = run(capsys, "diff", "--config", str(path), "x1")
    assert code == 2


def test_config_unknown_key(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "preset": "commutative", "bogus": 1}))
    code, _, err = run(capsys, "diff", "--config", str(path), "x1")
    assert code == 2
    assert "bogus" in err


def test_scalar_twist_flag(capsys):
    code, out, _ = run(capsys, "diff", "--preset", "scalar-twist",
                       "--twist", "2", "-k", "1", "x1 x1")
    assert code == 0
    # with twist 2: D_1(x1 x1) = x1 + 2 x1 = 3 x1
    assert out.strip() == "dx1 * 3*x1"
