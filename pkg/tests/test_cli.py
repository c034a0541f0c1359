import json
from pathlib import Path

import pytest

from fitkit import cli
from fitkit.config import ConfigError, load, loads, parse_config
from fitkit.ideals import FractionalIdeal
from fitkit.report import SCHEMA
from fitkit.shifted import J_ideal, fitt_shm1

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


def run(args, tmp_path):
    out = tmp_path / "out.json"
    status = cli.run(list(args) + ["--out", str(out)])
    return status, json.loads(out.read_text())


C3_FULL = {"group": [3], "inertia_gens": [[1]], "decomp_gens": [[1]], "frobenius_lift": [0]}


# config files -------------------------------------------------------------


def test_config_roundtrip():
    cf = parse_config({"group": [3, 9], "inertia_gens": [[1, 0], [0, 3]], "decomp_gens": [[0, 1]],
                       "frobenius_lift": [0, 1], "prime": 3})
    cfg = cf.config
    again = parse_config(cfg.as_dict()).config
    assert again == cfg and again.decomposition == cfg.decomposition
    assert cf.prime == 3


@pytest.mark.parametrize(
    "data,where",
    [
        ({"inertia_gens": []}, "$.group"),
        ({"group": [3], "inertia_gens": [[1, 0]], "decomp_gens": [], "frobenius_lift": [0]}, "$.inertia_gens[0]"),
        ({"group": [3], "inertia_gens": [], "decomp_gens": [[1]]}, "$.frobenius_lift"),
        ({"group": [3], "inertia_gens": [["x"]], "decomp_gens": [], "frobenius_lift": [0]}, "$.inertia_gens[0][0]"),
        ({**C3_FULL, "prime": 4}, "$.prime"),
        ({**C3_FULL, "prime": 3, "chi": [0, 0]}, "$.chi"),
        ({"group": [9], "inertia_gens": [[3]], "decomp_gens": [[3]], "frobenius_lift": [1]}, "$"),
        ({"group": [3], "places": [{"inertia_gens": []}]}, "$.places[0].decomp_gens"),
        ({**C3_FULL, "decomposition_override": [[[1], 9]]}, "$"),
    ],
)
def test_config_errors_name_the_field(data, where):
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.where == where


def test_malformed_json_reports_line():
    with pytest.raises(ConfigError) as exc:
        loads('{"group": [3],\n "inertia_gens": [[1]]\n "x": 1}')
    assert exc.value.where.startswith("line 3")


def test_integers_may_be_strings():
    cf = parse_config({"group": ["9"], "inertia_gens": [["3"]], "decomp_gens": [["1"]], "frobenius_lift": ["1"]})
    assert cf.config.I.order == 3


# compute ------------------------------------------------------------------


def test_compute_J_on_s1_is_the_unit_ideal(tmp_path):
    status, rep = run(["compute", "J", "--config", write(tmp_path, C3_FULL)], tmp_path)
    assert status == 0 and rep["schema"] == SCHEMA
    ideal = rep["result"]["ideal"]
    assert ideal["basis"] == [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    assert ideal["denominator"] == ["1", "0", "0"]


def test_compute_fittm1_on_C3(tmp_path):
    status, rep = run(["compute", "fittm1", "--config", write(tmp_path, C3_FULL)], tmp_path)
    ideal = FractionalIdeal.from_dict(rep["result"]["ideal"])
    assert ideal.denominator == (3, 0, 0)
    assert ideal.basis == FractionalIdeal.from_generators(ideal.ring, [(3, 0, 0), (1, 1, 1)]).basis
    assert ideal == fitt_shm1(parse_config(C3_FULL).config)


def test_compute_Zi_at_s_is_the_unit_ideal(tmp_path):
    data = {"group": [3, 3], "inertia_gens": [[1, 0], [0, 1]], "decomp_gens": [], "frobenius_lift": [0, 0]}
    status, rep = run(["compute", "Zi", "--config", write(tmp_path, data)], tmp_path)
    assert rep["result"]["index"] == "2"
    basis = rep["result"]["ideal"]["basis"]
    assert basis == [[str(int(i == j)) for j in range(9)] for i in range(9)]


@pytest.mark.parametrize("target", cli.TARGETS)
def test_every_target_roundtrips(tmp_path, target):
    data = {"group": [9], "inertia_gens": [[3]], "decomp_gens": [[1]], "frobenius_lift": [1]}
    status, rep = run(["compute", target, "--config", write(tmp_path, data)], tmp_path)
    assert status == 0
    if target == "W":
        assert rep["result"]["cokernel_free_rank"] == "0"
        return
    ideal = FractionalIdeal.from_dict(rep["result"]["ideal"])
    again = FractionalIdeal.from_dict(json.loads(json.dumps(ideal.to_dict())))
    assert again == ideal
    if target == "J":
        assert ideal == J_ideal(parse_config(data).config)


def test_bad_config_exits_with_2(tmp_path, capsys):
    path = write(tmp_path, {"group": [3], "inertia_gens": [[1, 1]], "decomp_gens": [], "frobenius_lift": [0]})
    assert cli.run(["compute", "J", "--config", path]) == 2
    assert "$.inertia_gens[0]" in capsys.readouterr().err


# verify -------------------------------------------------------------------


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.json")), ids=lambda p: p.stem)
def test_verify_all_on_corpus(tmp_path, path):
    status, rep = run(["verify", "all", "--config", str(path)], tmp_path)
    assert status == 0
    assert rep["summary"]["fail"] == "0"
    assert int(rep["summary"]["pass"]) > 0


def test_verify_shift_inclusion_on_C9(tmp_path):
    data = {"group": [9], "inertia_gens": [[1]], "decomp_gens": [], "frobenius_lift": [0]}
    status, rep = run(["verify", "cor42", "--config", write(tmp_path, data)], tmp_path)
    assert status == 0
    eq = [r for r in rep["records"] if r["suite"] == "cor42" and r["name"] == "equality"]
    assert eq and eq[0]["status"] == "pass" and eq[0]["note"] == "equality"


def test_verify_criterion_on_four_lines(tmp_path):
    status, rep = run(["verify", "theorem3", "--config", str(CORPUS / "c3xc3_four_lines.json")], tmp_path)
    assert status == 0
    (rec,) = rep["records"]
    assert rec["status"] == "pass" and rec["note"] == "theta-zero"


def test_exit_status_follows_report(tmp_path, monkeypatch):
    from fitkit.report import check

    monkeypatch.setattr(cli, "config_records", lambda *a, **k: [check("theorem2", "x", "s", False, "c")])
    status, rep = run(["verify", "theorem2", "--config", write(tmp_path, C3_FULL)], tmp_path)
    assert status == 1 and rep["summary"]["fail"] == "1"


def test_verify_sweep(tmp_path):
    status, rep = run(["verify", "lemma-Av", "--sweep", "9"], tmp_path)
    assert status == 0
    configs = {r["config"] for r in rep["records"]}
    assert any(c.startswith("G[9]") for c in configs) and any(c.startswith("G[3.3]") for c in configs)


# enumerate ----------------------------------------------------------------


def test_enumerate_max_3_is_C3_only(tmp_path):
    status, rep = run(["enumerate", "--max-order", "3"], tmp_path)
    assert status == 0
    assert rep["configs"] == "3"
    labels = {r["config"] for r in rep["records"]}
    # prop-N also runs once over the part orders of I, here a single C3
    assert {c.split()[0] for c in labels - {"N_1 over C(3,)"}} == {"G[3]"}
    assert "N_1 over C(3,)" in labels


def test_enumerate_refuses_above_cap(tmp_path, capsys):
    assert cli.run(["enumerate", "--max-order", "201"]) == 2
    assert "safety cap" in capsys.readouterr().err


def test_enumerate_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.run(["enumerate", "--max-order", "15", "--jobs", "1", "--out", str(a)]) == 0
    assert cli.run(["enumerate", "--max-order", "15", "--jobs", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_report_integers_are_strings(tmp_path):
    _, rep = run(["verify", "theorem2", "--config", write(tmp_path, C3_FULL)], tmp_path)

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
        else:
            assert not isinstance(x, int) or isinstance(x, bool)

    walk(rep)
    assert "duration" not in json.dumps(rep)


def test_load_reads_files(tmp_path):
    assert load(write(tmp_path, C3_FULL)).config.I.order == 3


def test_curated_command(tmp_path):
    status, rep = run(["curated"], tmp_path)
    assert status == 0
    assert int(rep["summary"]["pass"]) >= 30 and rep["summary"]["fail"] == "0"
