import json

import pytest

from gsft.cli import main


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_gprimitive_reports_period(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\nA = [[5*g]]\n")
    code, report = run_json(capsys, ["gprimitive", "--input", doc])
    assert code == 0
    assert report["canonical"] == {"g_primitive": False, "reason": "period 2"}


def test_det_rejects_nonabelian(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group symmetric 3\nA = [[e]]\n")
    code = main(["det", "--input", doc])
    assert code == 2
    assert "not well defined" in capsys.readouterr().err


def test_missing_matrix_is_input_error(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\nB = [[e]]\n")
    assert main(["traces", "--input", doc]) == 2


def test_parse_error_exit_code(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\nA = [[e,\n")
    assert main(["nzc", "--input", doc]) == 2


def test_box_verify_roundtrip(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 1\nA = [[t+t^2]]\n")
    out = str(tmp_path / "box.json")
    code, report = run_json(capsys, ["box", "--input", doc, "--json", out])
    assert code == 0
    assert report["canonical"]["box"] == [["e", "e"], ["e", "0"]]
    code, verdict = run_json(capsys, ["verify-chain", "--input", out])
    assert code == 0 and verdict["canonical"]["valid"]


def test_diamond_verify_and_tamper(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 1\nA = [[t, 3+t^3],[2*t^5, t]]\n")
    out = str(tmp_path / "diamond.json")
    code, report = run_json(capsys, ["diamond", "--input", doc, "--json", out])
    assert code == 0
    assert report["canonical"]["size"] <= 10
    code, verdict = run_json(capsys, ["verify-chain", "--input", out])
    assert code == 0 and verdict["canonical"]["valid"]
    # single-entry perturbation of the endpoint is rejected
    payload = json.loads(open(out).read())
    chain = payload["canonical"]["certificates"]["chain"]
    row = chain["end"]["entries"][0][0]
    row["1"] = {"e": (row.get("1", {}).get("e", 0) + 1)}
    tampered = str(tmp_path / "tampered.json")
    with open(tampered, "w") as fh:
        json.dump(chain, fh)
    code, verdict = run_json(capsys, ["verify-chain", "--input", tampered])
    assert code == 1 and not verdict["canonical"]["valid"]


def test_forced_se_roundtrip(tmp_path, capsys):
    doc = write(
        tmp_path,
        "doc.txt",
        "group cyclic 2\nA = [[e+g]]\nB = [[e+g]]\nR = [[2]]\nS = [[1]]\np = 1\nlag = 1\n",
    )
    out = str(tmp_path / "se.json")
    code, report = run_json(capsys, ["forced-se", "--input", doc, "--json", out])
    assert code == 0 and report["canonical"]["lag"] == 3
    code, verdict = run_json(capsys, ["verify-se", "--input", out])
    assert code == 0 and verdict["canonical"]["valid"]
    # tampered lag fails
    payload = json.loads(open(out).read())
    wit = payload["canonical"]["certificates"]["witness"]
    wit["lag"] = 5
    bad = str(tmp_path / "bad.json")
    with open(bad, "w") as fh:
        json.dump(wit, fh)
    code, verdict = run_json(capsys, ["verify-se", "--input", bad])
    assert code == 1 and not verdict["canonical"]["valid"]


def test_embed_emits_verified_sse(tmp_path, capsys):
    doc = write(
        tmp_path,
        "doc.txt",
        "group cyclic 2\n"
        "Q = [[0]]\n"
        "C = [[8*e*t^2+8*g*t^2+e*t+g*t, e*t+g*t],[e*t+g*t, e*t+g*t]]\n"
        "alpha = [[e*t^2+g*t^2]]\n",
    )
    out = str(tmp_path / "embed.json")
    code, report = run_json(capsys, ["embed", "--input", doc, "--json", out])
    assert code == 0
    assert report["canonical"]["bar_sse_verified"]
    code, verdict = run_json(capsys, ["verify-sse", "--input", out])
    assert code == 0 and verdict["canonical"]["valid"]


def test_amalg_roundtrip(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\nN = [[0, g],[0, 0]]\nr = 2\n")
    out = str(tmp_path / "amalg.json")
    code, report = run_json(capsys, ["amalg", "--input", doc, "--json", out])
    assert code == 0 and report["canonical"]["bar_zero"]
    code, verdict = run_json(capsys, ["verify-chain", "--input", out])
    assert code == 0 and verdict["canonical"]["valid"]


def test_family_roundtrip(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\ntwist = g\nk = 2\n")
    out = str(tmp_path / "family.json")
    code, report = run_json(capsys, ["family-ckfk", "--input", doc, "--json", out])
    assert code == 0
    assert report["canonical"]["bar_positive_throughout"]
    code, verdict = run_json(capsys, ["verify-chain", "--input", out])
    assert code == 0 and verdict["canonical"]["valid"]


def test_higman_default_input(capsys):
    code, report = run_json(capsys, ["higman"])
    assert code == 0
    assert report["canonical"]["size"] == 12


def test_nk1_det(capsys):
    code, report = run_json(capsys, ["nk1-c4"])
    assert code == 0
    assert report["canonical"]["det"] == "e"


def test_snf_command(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 1\nM = [[3, -3],[-3, 3]]\n")
    code, report = run_json(capsys, ["snf", "--input", doc])
    assert code == 0
    assert report["canonical"]["diagonal"] == [3, 0]
    assert report["canonical"]["cokernel"] == {"torsion": [3], "free_rank": 1}


def test_oracle_commands(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\nA = [[e+g]]\nn = 2\n")
    code, report = run_json(capsys, ["oracle-periodic", "--input", doc])
    assert code == 0 and report["canonical"]["matches_trace"]
    code, report = run_json(capsys, ["oracle-skew", "--input", doc])
    assert code == 0 and report["canonical"]["fixed_points"] == 4


def test_tilde_and_bar(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\nA = [[5*g]]\n")
    code, report = run_json(capsys, ["tilde", "--input", doc])
    assert code == 0
    assert report["canonical"]["tilde"] == [[0, 5], [5, 0]]
    code, report = run_json(capsys, ["bar", "--input", doc])
    assert report["canonical"]["bar"] == [[5]]


def test_kappa_compare(tmp_path, capsys):
    doc = write(
        tmp_path,
        "doc.txt",
        "group symmetric 4\n"
        "A = [[0, e, 0],[0, 0, e],[(13)(24), 0, 0]]\n"
        "B = [[0, e, 0],[0, 0, e],[e, 0, 0]]\n",
    )
    code, report = run_json(capsys, ["kappa", "--input", doc])
    assert code == 0
    assert report["canonical"] == {"equal": False, "first_disagreement": 3}


def test_report_byte_stability(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\nA = [[e+g]]\nn = 4\n")
    code1, rep1 = run_json(capsys, ["traces", "--input", doc])
    code2, rep2 = run_json(capsys, ["traces", "--input", doc])
    assert json.dumps(rep1["canonical"], sort_keys=True) == json.dumps(
        rep2["canonical"], sort_keys=True
    )


def test_perronlimit_command(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\nA = [[2*e+g]]\nk = 60\n")
    code, report = run_json(capsys, ["perronlimit", "--input", doc, "--tol", "1e-6"])
    assert code == 0 and report["canonical"]["pass"]


def test_zeta_command(tmp_path, capsys):
    doc = write(tmp_path, "doc.txt", "group cyclic 2\nA = [[e+g]]\nn = 3\n")
    code, report = run_json(capsys, ["zeta", "--input", doc])
    assert code == 0
    assert report["canonical"]["zeta"] == "e+e*t+g*t+2*e*t^2+2*g*t^2+4*e*t^3+4*g*t^3"
