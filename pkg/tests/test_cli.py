import json

from sandlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_simulate_emits_jsonl(tmp_path, data_dir, capsys):
    out = tmp_path / "traj.jsonl"
    code, _, _ = run(
        capsys,
        "simulate",
        "--rule", str(data_dir / "collapse1.rule"),
        "--config", str(data_dir / "pile2.cfg"),
        "--steps", "2",
        "--out", str(out),
    )
    assert code == 0
    recs = [json.loads(ln) for ln in out.read_text().splitlines()]
    assert [r["step"] for r in recs] == [0, 1, 2]
    assert recs[0]["core"] == [2] and recs[2]["core"] == []
    assert recs[0]["left"] == "0"


def test_distance_output(data_dir, capsys, tmp_path):
    flip = tmp_path / "flip.cfg"
    flip.write_text(
        "sandcfg v1\ndim 1\nkind eventually-constant\nbg 0\norigin 4\nheights +inf\n"
    )
    code, out, _ = run(
        capsys, "distance", "--metric", "ground", str(data_dir / "zero.cfg"), str(flip)
    )
    assert code == 0 and out.strip() == "2^-4"
    code, out, _ = run(
        capsys, "distance", str(data_dir / "zero.cfg"), str(data_dir / "zero.cfg")
    )
    assert code == 0 and out.strip() == "0"


def test_encode_prints_bits(data_dir, capsys):
    code, out, _ = run(
        capsys,
        "encode",
        "--config", str(data_dir / "pile2.cfg"),
        "--hlo", "-1", "--hhi", "1", "--vlo", "1", "--vhi", "2",
    )
    assert code == 0
    assert out == "010\n010\n"


def test_sa2ca_and_check_sa(tmp_path, data_dir, capsys):
    ca = tmp_path / "bridge.ca"
    code, _, _ = run(capsys, "sa2ca", "--rule", str(data_dir / "collapse1.rule"), "--out", str(ca))
    assert code == 0
    ext = tmp_path / "ext.rule"
    code, out, _ = run(capsys, "check-sa", "--ca", str(ca), "--extract", str(ext))
    assert code == 0 and "IS_SA" in out
    assert ext.read_text() == (data_dir / "collapse1.rule").read_text()


def test_check_sa_rejects_with_witness(tmp_path, capsys):
    ca = tmp_path / "const1.ca"
    ca.write_text(f"carule v1\ndim 2\nradius 1\nstates 2\ntable {'1' * 512}\n")
    code, out, _ = run(capsys, "check-sa", "--ca", str(ca))
    assert code == 1
    assert "NOT_SA" in out and "witness-tops" in out


def test_reduce_ca(tmp_path, data_dir, capsys):
    out_rule = tmp_path / "red.rule"
    code, _, _ = run(capsys, "reduce-ca", "--ca", str(data_dir / "min.ca"), "--out", str(out_rule))
    assert code == 0
    assert out_rule.read_text() == (data_dir / "minred.rule").read_text()


def test_reduce_ca_non_spreading(tmp_path, capsys):
    ca = tmp_path / "or.ca"
    ca.write_text("carule v1\ndim 1\nradius 1\nstates 2\ntable 01111111\n")
    code, _, err = run(capsys, "reduce-ca", "--ca", str(ca))
    assert code == 1 and "spreading" in err


def test_flatten_exit_codes(data_dir, capsys):
    code, out, _ = run(
        capsys,
        "flatten",
        "--rule", str(data_dir / "collapse1.rule"),
        "--config", str(data_dir / "pile2.cfg"),
        "--budget", "100",
    )
    assert code == 0 and out.startswith("CONVERGED")
    code, out, _ = run(
        capsys,
        "flatten",
        "--rule", str(data_dir / "raise.rule"),
        "--config", str(data_dir / "pile2.cfg"),
        "--budget", "5",
    )
    assert code == 1


def test_period_search_exit_codes(data_dir, capsys):
    code, out, _ = run(
        capsys, "period-search", "--rule", str(data_dir / "identity.rule"), "--max-sum", "2"
    )
    assert code == 0 and out.startswith("PERIODIC")
    code, out, _ = run(
        capsys, "period-search", "--rule", str(data_dir / "collapse1.rule"), "--max-sum", "2"
    )
    assert code == 1 and out.startswith("REFUTED")


def test_render_golden(tmp_path, data_dir, capsys):
    traj = tmp_path / "traj.jsonl"
    run(
        capsys,
        "simulate",
        "--rule", str(data_dir / "collapse1.rule"),
        "--config", str(data_dir / "pile2.cfg"),
        "--steps", "2",
        "--out", str(traj),
    )
    out = tmp_path / "frames.txt"
    code, _, _ = run(capsys, "render", "--traj", str(traj), "--format", "ascii", "--out", str(out))
    assert code == 0
    assert out.read_text() == (data_dir / "render_pile2.txt").read_text()


def test_render_svg_is_well_formed(tmp_path, data_dir, capsys):
    traj = tmp_path / "traj.jsonl"
    run(
        capsys,
        "simulate",
        "--rule", str(data_dir / "collapse1.rule"),
        "--config", str(data_dir / "pile2.cfg"),
        "--steps", "1",
        "--out", str(traj),
    )
    code, out, _ = run(capsys, "render", "--traj", str(traj), "--format", "svg", "--out", "-")
    assert code == 0
    import xml.etree.ElementTree as ET

    ET.fromstring(out)


def test_usage_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "no-such-command")[0] == 2
    bad = tmp_path / "bad.rule"
    bad.write_text("sarule v1\ndim 1\nradius 1\n")
    code, _, err = run(capsys, "period-search", "--rule", str(bad), "--max-sum", "1")
    assert code == 2 and "error" in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "period-search", "--rule", str(tmp_path / "nope"), "--max-sum", "1")
    assert code == 2
