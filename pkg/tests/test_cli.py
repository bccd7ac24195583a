import json

import pytest

from diracgauge.cli import main
from diracgauge.suite import ConfigError, Record, Report, parse_config, report_json, run_suite, sub_seed


def test_parse_config_sections():
    cfg = parse_config("""
[scenario]
signature = 4, 0   # Euclidean
convention_sign = -1
seed = 11
groups = clifford, appendix
[samples]
appendix = 5
[tolerances]
appendix.form1 = 1e-9
""")
    assert cfg.signature == (4, 0) and cfg.convention_sign == -1 and cfg.seed == 11
    assert cfg.n_samples("appendix") == 5 and cfg.tolerance("appendix.form1") == 1e-9


@pytest.mark.parametrize("text", ["[scenario]\nsignature = 3, 0\n", "[scenario]\nconvention_sign = 0\n",
                                  "[tolerances]\nnope = 1\n", "[scenario]\ngroups = bogus\n", "garbage"])
def test_invalid_config_rejected(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_sub_seeds_differ_by_name():
    assert sub_seed(0, "a") != sub_seed(0, "b")
    assert sub_seed(3, "a") == sub_seed(3, "a")


def test_report_round_trip():
    cfg = parse_config("[scenario]\ngroups = clifford\n")
    rep = run_suite(cfg)
    back = Report.from_dict(json.loads(report_json(rep)))
    assert report_json(back) == report_json(rep)


def test_exit_codes(tmp_path, capsys):
    assert main(["clifford"]) == 0
    bad = tmp_path / "bad.ini"
    bad.write_text("[scenario]\nsignature = 5, 0\n")
    assert main(["clifford", "--config", str(bad)]) == 2
    assert main(["clifford", "--config", str(tmp_path / "missing.ini")]) == 2
    assert main(["nonsense"]) == 2
    assert main(["appendix", "--tolerance-scale", "1e-20"]) == 1


def test_json_to_stdout(capsys):
    assert main(["clifford", "--json", "--seed", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["summary"]["failed"] == 0 and out["config"]["seed"] == 3
    assert "wall_time" not in out["records"][0]


def test_failed_record_reported():
    r = Report([Record("x", "anchor", "fail", 1.0, 0.5)])
    assert not r.ok and r.summary == {"total": 1, "passed": 0, "failed": 1}


def test_blw_dump(tmp_path):
    path = tmp_path / "d.txt"
    assert main(["blw", "--dump", str(path)]) == 0
    assert path.stat().st_size > 0
