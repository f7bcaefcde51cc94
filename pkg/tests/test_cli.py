import random
from fractions import Fraction as Fr

import pytest

from geomfo import fileio
from geomfo.cli import main
from geomfo.generators import terfan_polygon
from geomfo.geometry import Interval, LabeledGraph, Representation
from geomfo.poset import LabeledPoset

from helpers import rand_arcs, rand_boxes, rand_chords, rand_disks, rand_fan, \
    rand_intervals, rand_segments


def test_fileio_representation_idempotent():
    rng = random.Random(33)
    for mk in (rand_intervals, rand_arcs, rand_chords, rand_segments, rand_boxes,
               rand_disks):
        rep = mk(rng, 6)
        text = fileio.write_representation(rep)
        again = fileio.read_representation(text)
        assert again == rep
        assert fileio.write_representation(again) == text
    poly = rand_fan(rng, 7)
    rep = Representation("visibility", (poly,))
    text = fileio.write_representation(rep)
    assert fileio.read_representation(text) == rep


def test_fileio_comments_and_errors():
    text = "# a comment\nclass interval\ninterval 1/2 3/2  # trailing\n"
    rep = fileio.read_representation(text)
    assert rep.objects[0] == Interval(Fr(1, 2), Fr(3, 2))
    with pytest.raises(fileio.FileFormatError):
        fileio.read_representation("interval 1 2\n")
    with pytest.raises(fileio.FileFormatError):
        fileio.read_representation("class interval\nbox 0 1 0 1\n")


def test_fileio_poset_graph_idempotent():
    p = LabeledPoset(4, {(0, 1), (0, 2), (0, 3), (1, 3)}, {"D": {0, 1}})
    text = fileio.write_poset(p)
    q = fileio.read_poset(text)
    assert q.n == p.n and q.pairs() == p.pairs() and q.labels == p.labels
    assert fileio.write_poset(q) == text
    g = LabeledGraph(4, {(0, 1), (2, 3)}, {"blue": {0}})
    text = fileio.write_graph(g)
    assert fileio.read_graph(text) == g


def _write_interval_rep(tmp_path):
    rep = tmp_path / "rep.txt"
    rep.write_text("class interval\ninterval 1 3\ninterval 2 4\n")
    return str(rep)


def test_cli_check_verdicts(tmp_path, capsys):
    rep = _write_interval_rep(tmp_path)
    code = main(["check", "--class", "interval", "--in", rep,
                 "--formula", "exists x. exists y. edge(x,y)"])
    assert code == 0
    out = capsys.readouterr().out
    assert "graph_verdict True" in out and "poset_verdict True" in out
    code = main(["check", "--class", "interval", "--in", rep,
                 "--formula", "forall x. forall y. edge(x,y)"])
    assert code == 1


def test_cli_check_error_exit(tmp_path, capsys):
    rep = _write_interval_rep(tmp_path)
    assert main(["check", "--class", "interval", "--in", rep,
                 "--formula", "exists x. edge(x,"]) == 2
    assert main(["check", "--class", "circle", "--in", rep,
                 "--formula", "exists x. x=x"]) == 2


def test_cli_check_emit(tmp_path, capsys):
    rep = _write_interval_rep(tmp_path)
    out = tmp_path / "poset.txt"
    assert main(["check", "--class", "interval", "--in", rep,
                 "--formula", "exists x. x=x", "--emit", "poset",
                 "--emit-out", str(out)]) == 0
    p = fileio.read_poset(out.read_text())
    assert p.n == 6 and p.labels["D"]


def test_cli_interpret_and_deterministic(tmp_path, capsys):
    rep = _write_interval_rep(tmp_path)
    args = ["interpret", "--class", "interval", "--in", rep,
            "--out-poset", str(tmp_path / "p.txt"),
            "--out-interp", str(tmp_path / "i.txt")]
    assert main(args) == 0
    first = (tmp_path / "p.txt").read_text(), (tmp_path / "i.txt").read_text()
    assert main(args) == 0
    second = (tmp_path / "p.txt").read_text(), (tmp_path / "i.txt").read_text()
    assert first == second
    nu, psi = fileio.read_interpretation_formulas(first[1], "poset")
    assert nu is not None and psi is not None


def test_cli_generate_terfan_pipeline(tmp_path, capsys):
    h = tmp_path / "h.txt"
    h.write_text("graph 2\nedge 0 1\n")
    out = tmp_path / "w.rep"
    assert main(["generate", "--kind", "terfan", "--graph", str(h),
                 "--out", str(out)]) == 0
    code = main(["check", "--class", "visibility", "--in", str(out),
                 "--formula", "exists x. exists y. (edge(x,y) & !(x=y))"])
    assert code == 0


def test_cli_generate_cliquewidth_cert(tmp_path):
    out = tmp_path / "cw.rep"
    cert = tmp_path / "cw.cert"
    assert main(["generate", "--kind", "cliquewidth", "--class", "circular_arc",
                 "--param", "1", "--out", str(out), "--out-cert", str(cert)]) == 0
    lines = cert.read_text().splitlines()
    assert sum(1 for l in lines if l.startswith("part ")) == 6
    assert sum(1 for l in lines if l.startswith("order ")) == 6
    assert any(l.startswith("index-set 1 4") for l in lines)
    rep = fileio.read_representation(out.read_text())
    assert len(rep.objects) == 222


def test_cli_generate_consecutive_and_hardness(tmp_path):
    out = tmp_path / "wit.rep"
    cert = tmp_path / "wit.cert"
    assert main(["generate", "--kind", "consecutive", "--class", "unit_disk",
                 "--param", "3,1/4", "--out", str(out), "--out-cert", str(cert)]) == 0
    assert "complement 0" in cert.read_text()
    h = tmp_path / "h.txt"
    h.write_text("graph 3\nedge 0 1\nedge 1 2\n")
    assert main(["generate", "--kind", "hardness", "--class", "permutation",
                 "--graph", str(h), "--out", str(tmp_path / "gh.rep"),
                 "--out-labels", str(tmp_path / "gh.labels"),
                 "--out-interp", str(tmp_path / "gh.interp")]) == 0
    labeled = fileio.read_graph((tmp_path / "gh.labels").read_text())
    assert set(labeled.labels) == {"blue", "green", "red"}
    nu, psi = fileio.read_interpretation_formulas(
        (tmp_path / "gh.interp").read_text(), "graph")
    assert nu is not None and psi is not None
    assert main(["generate", "--kind", "efo-hardness", "--class", "unit_box",
                 "--graph", str(h), "--out", str(tmp_path / "efo.rep")]) == 0


def test_cli_graph_output(tmp_path, capsys):
    rep = _write_interval_rep(tmp_path)
    assert main(["graph", "--class", "interval", "--in", rep]) == 0
    out = capsys.readouterr().out
    assert out.startswith("graph 2\n") and "edge 0 1" in out


def test_cli_verify_corpus(tmp_path, capsys):
    cases = tmp_path / "cases"
    cases.mkdir()
    (cases / "a.rep").write_text("class interval\ninterval 1 3\ninterval 2 4\n")
    rng = random.Random(55)
    for name, mk in (("b", rand_chords), ("c", rand_boxes), ("d", rand_disks),
                     ("e", rand_segments), ("f", rand_arcs)):
        (cases / f"{name}.rep").write_text(fileio.write_representation(mk(rng, 5)))
    inst = terfan_polygon(LabeledGraph(2, {(0, 1)}))
    (cases / "g.rep").write_text(
        fileio.write_representation(Representation("visibility", (inst.polygon,))))
    (cases / "a.formulas").write_text("exists x. x=x\nforall x. edge(x,x)\n")
    assert main(["verify", "--dir", str(cases)]) == 0
    out = capsys.readouterr().out
    assert "7/7 cases pass" in out
