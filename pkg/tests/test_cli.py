import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from bikoszul import cli
from bikoszul.bipoly import Polynomial, RingPresentation
from bikoszul.errors import NotBihomogeneous, ParseError
from bikoszul.textio import (parse_polynomial, parse_ring, parse_ring_file, parse_semigroup,
                             serialize_ring, serialize_semigroup)

from oracles import P, koszul_test_rings

COUNTEREXAMPLE = "field 32003\nxvars x1\nyvars y1\nideal x1*y1^2 end\n"
CONE = "ambient 2\nxgens (2,0) (1,1) (0,2)\n"
QUARTIC = "ambient 2\nxgens (4,0) (3,1) (1,3) (0,4)\n"


def test_parse_counterexample_ring():
    R = parse_ring(COUNTEREXAMPLE)
    assert (R.n, R.m, R.p) == (1, 1, 32003)
    x, y = R.variables()
    assert R.relations == (x * y * y,)


def test_parse_block_ideal_and_comments():
    text = "# a comment\nfield 7\nxvars a b\nyvars c\nideal\n a*c - b*c  # trailing\n2a^2 c\nend\n"
    R = parse_ring(text)
    a, b, c = R.variables()
    assert R.p == 7
    assert R.relations == (a * c - b * c, a * a * c * 2)
    assert R.variable_names() == ["a", "b", "c"]


def test_empty_ideal_is_polynomial_ring():
    R = parse_ring("field 32003\nxvars x1 x2\nyvars y1\nideal\nend\n")
    assert R == RingPresentation(2, 1)


def test_parse_errors_carry_position():
    with pytest.raises(NotBihomogeneous):
        parse_ring("xvars x1\nyvars y1\nideal\nx1 + y1\nend\n")
    with pytest.raises(ParseError) as info:
        parse_ring("xvars x1\nyvars y1\nideal\nx1*z\nend\n")
    assert info.value.line == 4
    with pytest.raises(ParseError):
        parse_ring("xvars x1\nideal\nx1^2\n")
    with pytest.raises(ParseError):
        parse_ring("field 12\nxvars x1\n")
    with pytest.raises(ParseError):
        parse_ring("yvars y1\n")


def test_polynomial_syntax():
    R = RingPresentation(2, 0)
    x1, x2 = R.variables()
    assert parse_polynomial("(x1 + x2)^2", R) == x1 * x1 + x1 * x2 * 2 + x2 * x2
    assert parse_polynomial("-x1**2 + 3 x1 x2", R) == x1 * x2 * 3 - x1 * x1
    with pytest.raises(ParseError):
        parse_polynomial("x1 +", R)
    with pytest.raises(ParseError):
        parse_polynomial("x1 ^ x2", R)


@pytest.mark.parametrize("name", sorted(koszul_test_rings()))
def test_round_trip_test_rings(name):
    R = koszul_test_rings()[name]
    assert parse_ring(serialize_ring(R)) == R


@settings(max_examples=30, deadline=None)
@given(st.lists(st.dictionaries(st.sampled_from([(2, 0, 1), (1, 1, 1), (0, 2, 1)]),
                                st.integers(1, P - 1), min_size=1), max_size=3))
def test_round_trip_random_relations(term_lists):
    rels = tuple(Polynomial(t, 2, 1, P) for t in term_lists)
    R = RingPresentation(2, 1, relations=rels)
    assert parse_ring(serialize_ring(R)) == R


def test_gens_block():
    rf = parse_ring_file("xvars x1 x2\nideal end\ngens\nx1^2, x1*x2\nend\n")
    x1, x2 = rf.ring.variables()
    assert rf.gens == [x1 * x1, x1 * x2]


def test_semigroup_round_trip():
    L = parse_semigroup(CONE)
    assert L.x_generators == ((2, 0), (1, 1), (0, 2))
    assert parse_semigroup(serialize_semigroup(L)) == L
    with pytest.raises(ParseError):
        parse_semigroup("ambient 2\nxgens (1,0) 7\n")
    with pytest.raises(ParseError):
        parse_semigroup("xgens (1,0)\n")


# ---------------------------------------------------------------------------
# command line

@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {"ring": COUNTEREXAMPLE, "cone": CONE, "quartic": QUARTIC,
                       "a": "xvars x1 x2\nideal\nx1^2\nx2^2\nend\n",
                       "bad": "xvars x1\nyvars y1\nideal\nx1 + y1\nend\n"}.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(argv, capsys):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_koszul_command_reports_witness(files, capsys):
    code, out, _ = run(["koszul", files["ring"], "--max-i", "4", "--json"], capsys)
    assert code == 2
    assert json.loads(out) == {"verdict": "CertifiedNonKoszul", "i": 2, "j": 1, "k": 2}


def test_diag_command(files, capsys):
    code, out, _ = run(["diag", files["ring"], "--a", "1", "--b", "1", "--json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["kernel"] == ["z1^2"]
    assert rep["variables"][0]["image"] == "x1*y1"


def test_semigroup_cm_commands(files, capsys):
    code, out, _ = run(["semigroup-cm", files["cone"], "--max-deg", "3", "--json"], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "AllCM"
    code, out, _ = run(["semigroup-cm", files["quartic"], "--max-deg", "3", "--json"], capsys)
    assert code == 2 and json.loads(out)["witness"]["lambda"] == [3, 9]


@pytest.mark.parametrize("argv", [
    ["gb", "ring"], ["nf", "ring", "--poly", "x1^2*y1^2 + x1"], ["gin", "a", "--seed", "3"],
    ["betti", "ring", "--module", "residue", "--max-i", "3", "--max-deg", "5"],
    ["reg", "ring", "--module", "residue", "--max-i", "3", "--max-deg", "5"],
    ["strand", "ring", "--a", "1", "--b", "1", "--d", "1", "--max-deg", "4"],
    ["linearity", "ring", "--a", "1", "--b", "1", "--d", "1"],
    ["sym", "a"], ["rees", "a"], ["product", "a", "a", "--kind", "Segre"],
    ["product", "a", "--kind", "Veronese", "--d", "2"],
    ["semigroup-diag", "cone", "--a", "2", "--b", "0"],
])
def test_commands_are_deterministic(files, capsys, argv):
    argv = [argv[0], files[argv[1]]] + [files.get(a, a) for a in argv[2:]]
    first = run(argv + ["--json"], capsys)
    second = run(argv + ["--json"], capsys)
    assert first == second
    assert first[0] == 0
    json.loads(first[1])


def test_errors_are_machine_readable(files, capsys):
    code, _, err = run(["gb", files["bad"]], capsys)
    assert code == 1 and json.loads(err)["error"] == "NotBihomogeneous"
    code, _, err = run(["diag", files["ring"]], capsys)
    assert code == 1 and json.loads(err)["error"] == "AlgebraError"
    code, _, err = run(["diag", files["ring"], "--a", "0", "--b", "0"], capsys)
    assert code == 1 and json.loads(err)["error"] == "ValueError"
    code, _, err = run(["koszul", files["ring"] + ".missing"], capsys)
    assert code == 1


def test_usage_errors_exit_one(files, capsys):
    with pytest.raises(SystemExit) as info:
        cli.run(["nonsense", files["ring"]])
    assert info.value.code == 1
    err = capsys.readouterr().err
    assert '"UsageError"' in err


def test_output_file(files, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.run(["koszul", files["ring"], "--json", "--output", str(out)])
    assert code == 2
    assert json.loads(out.read_text())["verdict"] == "CertifiedNonKoszul"


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "bikoszul.cli", "diag", files["ring"],
                           "--a", "2", "--b", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "kernel:" in proc.stdout
