import json
import math

import pytest

from ultraseq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def result(report, name):
    return next(r for r in report["results"] if r["name"] == name)


def test_norm_exact_and_estimate(capsys):
    code, rep = run(capsys, "norm", '{"gamma": 2}', '{"kind": "log"}')
    assert code == 0 and rep["schema_version"] == 1
    assert result(rep, "exact")["value"] == pytest.approx(math.e**2)
    assert result(rep, "exact")["mode"] == "exact"
    ci = result(rep, "estimated")["ci"]
    assert ci[0] <= math.e**2 <= ci[1]


def test_norm_constant(capsys):
    _, rep = run(capsys, "norm", '{"const": 5}')
    assert result(rep, "exact")["value"] == 1.0


def test_norm_black_box(capsys):
    code, rep = run(capsys, "norm", '{"callable": "n**2"}')
    assert code == 0 and [r["name"] for r in rep["results"]] == ["estimated"]


def test_norm_csv(tmp_path, capsys):
    path = tmp_path / "trace.csv"
    run(capsys, "--csv", str(path), "norm", '{"gamma": 1}')
    lines = path.read_text().splitlines()
    assert lines[0] == "n,p_value,powered_value" and len(lines) == 21


def test_json_from_file(tmp_path, capsys):
    p = tmp_path / "seq.json"
    p.write_text('{"gamma": -1}')
    _, rep = run(capsys, "norm", str(p))
    assert result(rep, "exact")["value"] == pytest.approx(math.exp(-1))


def test_malformed_json_exit_2(capsys):
    assert main(["norm", "{bad"]) == 2
    assert "malformed" in capsys.readouterr().err


def test_unknown_flag_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["norm", "{}", "--nope"])
    assert exc.value.code == 2


def test_classify(capsys):
    code, rep = run(capsys, "classify", '{"s": 1}')
    r = result(rep, "classification")
    assert code == 0 and r["class"] == "Moderate" and r["norm"]["value"] == pytest.approx(math.e)


def test_assoc_weak_demo(capsys):
    code, rep = run(capsys, "assoc", "--flavor", "weak", "--s", "0.5")
    assert code == 0 and result(rep, "weak")["verdict"]["result"] == "holds"
    code, rep = run(capsys, "assoc", "--flavor", "weak", "--s", "0.8")
    v = result(rep, "weak")["verdict"]
    assert code == 1 and v["witnesses"]


def test_assoc_strong_numbers(capsys):
    code, _ = run(capsys, "assoc", "--flavor", "strong", "--x", '{"gamma": -2}')
    assert code == 0
    code, _ = run(capsys, "assoc", "--flavor", "strong", "--x", '{"delta": 1}')
    assert code == 1


def test_assoc_requires_x(capsys):
    assert main(["assoc", "--flavor", "s"]) == 2


def test_embed(capsys):
    code, rep = run(capsys, "embed", '{"form": "geometric", "rho": 0.5}')
    assert code == 0 and result(rep, "coefficients")["label"] == "Analytic"
    assert result(rep, "sup_norm")["value"] == 1.0


def test_demo_delta2(capsys, tmp_path):
    code, rep = run(capsys, "--csv", str(tmp_path / "d.csv"), "demo-delta2")
    assert code == 0
    assert result(rep, "delta")["class"] == "Moderate" and result(rep, "delta_squared")["value"] == 1.0
    rows = dict(map(tuple, result(rep, "unboundedness_trace")["rows"]))
    assert rows[1024] == 13
    for p in result(rep, "peaks")["rows"]:
        assert p["delta2_peak"] == pytest.approx(2 * p["K_n"] + 1)


def test_temperate(capsys):
    assert run(capsys, "temperate-check", '{"phi": "exp"}')[0] == 1
    assert run(capsys, "temperate-check", '{"phi": "square"}')[0] == 0
    assert run(capsys, "temperate-check", '{"phi": "linear:2"}', "--family", "colombeau")[0] == 0


def test_aclassify(capsys):
    _, rep = run(capsys, "aclassify", '{"gamma": 3}')
    assert result(rep, "A")["class"] == "InAlgebra" and result(rep, "A")["m"] == -3
    _, rep = run(capsys, "aclassify", '{"exp": {"coef": -0.3}}', "--scale-kind", "infra-exp")
    assert result(rep, "second_kind")["class"] == "InIdeal"


def test_convert_scale(capsys):
    _, rep = run(capsys, "convert-scale", "--scale-kind", "infra-exp", "--sigma", "0.5")
    s = result(rep, "scale")
    assert dict(map(tuple, s["samples"]))[4] == pytest.approx(0.5)
    assert main(["convert-scale", "--scale-kind", "polynomial"]) == 2


def test_text_format(capsys):
    code, out = run(capsys, "--format", "text", "classify", '{"gamma": 5}')
    assert code == 0 and 'class="Moderate"' in out
