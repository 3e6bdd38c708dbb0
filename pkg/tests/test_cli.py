import json

from psmod1.cli import main, parse_gamma
from fractions import Fraction


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def data_lines(out: str):
    return [ln for ln in out.splitlines() if ln and not ln.startswith("#")]


def test_parse_gamma_forms():
    assert parse_gamma("0.75") == 0.75
    assert parse_gamma("3/4") == Fraction(3, 4)


def test_member_command(capsys):
    code, out, err = run_cli(capsys, "member", "--gamma", "0.75", "--p", "13")
    assert code == 0
    rows = data_lines(out)
    assert rows[0] == "p,gamma,member,witness"
    assert rows[1] == "13,0.75,true,7"


def test_member_nonmember(capsys):
    code, out, _ = run_cli(capsys, "member", "--gamma", "0.75", "--p", "7")
    assert code == 0
    assert data_lines(out)[1] == "7,0.75,false,"


def test_approx_command(capsys):
    code, out, _ = run_cli(capsys, "approx", "--alpha", "pi", "--q-max", "120")
    assert code == 0
    rows = data_lines(out)
    assert any(r.startswith("22,7,") for r in rows)
    assert any(r.startswith("355,113,") for r in rows)


def test_verify_hb_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "hb", "--z", "5", "--k", "2")
    assert code == 0
    assert ",true" in data_lines(out)[1]


def test_verify_psi_and_window(capsys):
    code, out, _ = run_cli(capsys, "verify", "psi", "--H", "50", "--grid", "2000")
    assert code == 0
    code, out, _ = run_cli(capsys, "verify", "window", "--T", "20", "--delta", "0.1", "--grid", "2000")
    assert code == 0


def test_verify_minproduct(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify",
        "minproduct",
        "--M", "200", "--H1", "5", "--H2", "5",
        "--gamma1", "0.99", "--gamma2", "0.95",
    )
    assert code == 0


def test_sieve_cache_and_env(tmp_path, monkeypatch, capsys):
    cache = tmp_path / "primes.pspc"
    code, out, _ = run_cli(capsys, "sieve", "--limit", "5000", "--out", str(cache))
    assert code == 0
    assert cache.exists()
    # env var points later commands at the cache
    monkeypatch.setenv("PSMOD1_CACHE", str(cache))
    code, out, _ = run_cli(
        capsys, "count", "--gamma1", "0.99", "--gamma2", "0.95", "--x-list", "1000,5000"
    )
    assert code == 0
    rows = data_lines(out)
    assert rows[0] == "x,count,main_term,ratio"
    assert len(rows) == 3


def test_count_determinism_across_threads(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out4 = tmp_path / "b.csv"
    base = ["count", "--gamma1", "0.99", "--gamma2", "0.95", "--x-list", "1e3,1e4"]
    assert main(base + ["--threads", "1", "--out", str(out1)]) == 0
    assert main(base + ["--threads", "4", "--out", str(out4)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out4.read_bytes()


def test_minima_command(capsys):
    code, out, _ = run_cli(
        capsys,
        "minima",
        "--alpha", "sqrt2", "--beta", "0",
        "--gamma1", "0.99", "--gamma2", "0.95",
        "--limit", "20000",
    )
    assert code == 0
    rows = data_lines(out)
    assert rows[0] == "rank,p,value"
    values = [float(r.split(",")[2]) for r in rows[1:]]
    assert values == sorted(values, reverse=True)


def test_theorem_command_json(capsys):
    code, out, _ = run_cli(
        capsys,
        "theorem",
        "--alpha", "sqrt2", "--beta", "0",
        "--gamma1", "0.99", "--gamma2", "0.97",
        "--eps", "0.01", "--limit", "20000",
        "--output-format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["artifact"] == "psmod1"
    assert doc["result"]["witness_count"] >= 0
    assert doc["config"]["command"] == "theorem"


def test_expsum_linear_and_gamma_star(capsys):
    code, out, _ = run_cli(
        capsys, "expsum", "linear", "--alpha", "sqrt2", "--limit", "2000", "--q", "29"
    )
    assert code == 0
    code, out, _ = run_cli(
        capsys,
        "expsum", "gamma-star",
        "--alpha", "sqrt2", "--limit", "2000",
        "--gamma1", "0.99", "--gamma2", "0.95",
        "--t", "1", "--h1", "1", "--h2", "-1",
    )
    assert code == 0


def test_expsum_bilinear_variants(capsys):
    code, out, _ = run_cli(
        capsys,
        "expsum", "double",
        "--M", "64", "--a", "1.0", "--b", "-1.0",
        "--alpha", "sqrt2", "--gamma1", "0.99", "--gamma2", "0.95",
    )
    assert code == 0
    assert data_lines(out)[0].startswith("value_re,")
    code, out, _ = run_cli(
        capsys,
        "expsum", "type1",
        "--M", "8", "--K", "64", "--coeff", "random", "--seed", "3",
        "--alpha", "sqrt2", "--gamma1", "0.99", "--gamma2", "0.95",
    )
    assert code == 0
    code, out, _ = run_cli(
        capsys,
        "expsum", "type2",
        "--M", "16", "--K", "16", "--coeff", "random", "--seed", "5",
        "--alpha", "golden", "--gamma1", "0.99", "--gamma2", "0.95",
    )
    assert code == 0
    row = data_lines(out)[1]
    modulus = float(row.split(",")[2])
    assert modulus <= 16 * 16 + 1e-9  # triangle cap


def test_expsum_decomposed_verifies(capsys):
    code, out, _ = run_cli(
        capsys,
        "expsum", "gamma-star-decomposed",
        "--alpha", "sqrt2", "--limit", "500",
        "--gamma1", "0.99", "--gamma2", "0.95",
        "--t", "1", "--h1", "1", "--h2", "-1",
    )
    assert code == 0
    row = data_lines(out)[1]
    assert float(row.split(",")[-1]) < 1e-6


def test_upsilon_command(capsys):
    code, out, _ = run_cli(
        capsys,
        "upsilon",
        "--N", "2000", "--delta", "0.1",
        "--alpha", "sqrt2", "--beta", "0",
        "--gamma1", "0.99", "--gamma2", "0.95",
    )
    assert code == 0
    header, row = data_lines(out)
    cells = dict(zip(header.split(","), row.split(",")))
    assert abs(float(cells["total"]) - float(cells["parts_total"])) <= 1e-8


def test_error_json_on_unknown_flag(capsys):
    code, out, err = run_cli(capsys, "member", "--gamma", "0.75", "--p", "7", "--bogus")
    assert code == 2
    doc = json.loads(err)
    assert doc["error"] == "usage"


def test_error_json_on_bad_value(capsys):
    code, out, err = run_cli(capsys, "approx", "--alpha", "nonsense", "--q-max", "5")
    assert code == 1
    doc = json.loads(err.strip())
    assert "message" in doc


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.conf"
    cfg.write_text("gamma1=0.99\ngamma2=0.95\nlimit=3000\nbeta=0.25\n")
    # file supplies gammas/limit/beta; the limit flag overrides the file
    code, out, _ = run_cli(
        capsys,
        "minima",
        "--alpha", "sqrt2",
        "--limit", "1000",
        "--config", str(cfg),
    )
    assert code == 0
    assert "# limit=1000" in out
    assert "# beta=0.25" in out
    assert "# gamma1=0.99" in out


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.conf"
    cfg.write_text("bogus=1\n")
    code, _, err = run_cli(capsys, "member", "--gamma", "0.75", "--p", "2", "--config", str(cfg))
    assert code == 1
    assert "bogus" in json.loads(err.strip())["message"]


def test_identical_invocations_identical_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["approx", "--alpha", "golden", "--q-max", "500"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_headers_embed_config_and_version(capsys):
    code, out, _ = run_cli(capsys, "member", "--gamma", "0.75", "--p", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# psmod1 0.")
    assert any(line.startswith("# command=member") for line in lines)
    # worker count never appears: outputs must be byte-stable under it
    assert not any("threads" in line for line in lines)
