import pytest

from arcindex.cli import EXIT_DOMAIN, EXIT_INTERNAL, EXIT_OK, RunConfig, ConfigError, run


def test_enumerate_unknot(capsys):
    assert run(["enumerate", "--n", "2"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out == ["2\t0,1 0,1\t11 11\t0"]


def test_enumerate_rejects_size(capsys):
    assert run(["enumerate", "--n", "13"]) == EXIT_DOMAIN
    assert "--n" in capsys.readouterr().err


@pytest.mark.slow
def test_enumerate_workers_byte_identical(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(["enumerate", "--n", "9", "--workers", "1", "--out", str(a)]) == EXIT_OK
    assert run(["enumerate", "--n", "9", "--workers", "3", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) > 0


def test_census_empty_table(capsys):
    assert run(["census", "--n-max", "6", "--empty-table"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("arc_index")
    assert "5\tunidentified\t1\tU1" in lines
    assert "6\tunidentified\t1\tU2" in lines


def test_census_text(capsys):
    assert run(["census", "--n-max", "6", "--format", "text"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[-1].split() == ["subtotal", "1", "1"]


def test_present_verify_and_tamper(tmp_path, capsys):
    trace = tmp_path / "t.trace"
    assert run(["present", "--knot", "5_2", "--trace", str(trace)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("# 5_2: 5 crossings, wheel with 7 spokes, 7 arcs")
    assert run(["verify", "--trace", str(trace)]) == EXIT_OK
    assert capsys.readouterr().out.startswith("ok: ")
    assert run(["verify", "--trace", str(trace), "--knot", "5_1"]) == EXIT_DOMAIN
    assert "step 1" in capsys.readouterr().err
    lines = trace.read_text().splitlines()
    k = next(i for i, ln in enumerate(lines) if ln.startswith("contract"))
    lines[k] = lines[k].replace("sr=7", "sr=6")
    trace.write_text("\n".join(lines) + "\n")
    assert run(["verify", "--trace", str(trace)]) == EXIT_DOMAIN
    assert "verify failed at step" in capsys.readouterr().err


def test_present_nonalternating(capsys):
    assert run(["present", "--knot", "8_19", "--nonalternating"]) == EXIT_OK
    head = capsys.readouterr().out.splitlines()[0]
    assert "7 arcs" in head
    assert run(["present", "--knot", "8_18", "--nonalternating"]) == EXIT_DOMAIN
    assert run(["present", "--dt", "4 2"]) == EXIT_DOMAIN  # simplifies to the unknot


def test_invariants(capsys):
    assert run(["invariants", "--dt", "4 6 2"]) == EXIT_OK
    fields = dict(ln.split("\t", 1) for ln in capsys.readouterr().out.splitlines())
    assert fields["match"] == "3_1"
    assert fields["determinant"] == "3"
    assert run(["invariants", "--grid", "5;1,4 0,3 2,4 1,3 0,2"]) == EXIT_OK
    fields = dict(ln.split("\t", 1) for ln in capsys.readouterr().out.splitlines())
    assert fields["match"] == "3_1"
    assert run(["invariants", "--knot", "99_1"]) == EXIT_DOMAIN
    assert run(["invariants", "--dt", "four"]) == EXIT_DOMAIN


def test_config_checks(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig("census", workers=0).check()
    with pytest.raises(ConfigError):
        RunConfig("present", out=str(tmp_path / "x"), trace=str(tmp_path / "x")).check()
    assert run(["census", "--n-max", "6", "--workers", "0"]) == EXIT_DOMAIN


def test_internal_errors_exit_two(monkeypatch, capsys):
    import arcindex.cli as cli

    def boom(cfg):
        raise RuntimeError("bug")

    monkeypatch.setattr(cli, "cmd_enumerate", boom)
    assert run(["enumerate", "--n", "5"]) == EXIT_INTERNAL
    assert "internal diagnostic" in capsys.readouterr().err


def test_argparse_usage_errors():
    with pytest.raises(SystemExit) as exc:
        run(["present"])
    assert exc.value.code == 2
