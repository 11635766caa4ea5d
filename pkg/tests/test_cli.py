import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbgrowth.cli import run
from orbgrowth.expr import MAX_DEPTH, Node, ParseError, build, parse, unparse

TRI = "lobes(m=2, lobe=complete(3))"
PROD = "wreath(base=lobes(m=2, lobe=complete(3)), m=2)"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- parser --------------------------------------------------------------


def test_parse_tree():
    node = parse("lobes(m=2, lobe=complete(3))")
    assert node == Node("lobes", (("m", 2), ("lobe", Node("complete", (("k", 3),)))))


def test_parse_nested():
    node = parse("wreath(base=lobes(m=2, lobe=petersen), m=2)")
    assert node.kind == "wreath"
    assert node.get("base").get("lobe") == Node("petersen", ())


def test_parse_positional_and_spacing():
    assert parse("lobes(2,complete(3))") == parse(" lobes ( m = 2 , lobe = complete ( k = 3 ) ) ")


def test_m_constraint_cites_lobes():
    with pytest.raises(ParseError, match="m >= 2") as info:
        parse("lobes(m=1, lobe=complete(3))")
    assert info.value.offset == 6


@pytest.mark.parametrize(
    "text, offset",
    [
        ("lobes(m=2, lobe=complete(2))", 25),
        ("lobes(m=2, lobe=complete(3)", 27),
        ("lobes(m=2 lobe=complete(3))", 10),
        ("cube(3)", 0),
        ("lobes(m=2, lobe=complete(3)) extra", 29),
        ("lobes(m=2, colour=3)", 11),
        ("lobes(m=2, m=3, lobe=petersen)", 11),
        ("lobes(lobe=petersen, 2)", 21),
        ("lobes(m=2)", 0),
        ("lobes(m=x, lobe=petersen)", 6),
        ("lobes(m=2, lobe=wreath(base=petersen, m=2))", 11),
        ("complete(3, 4)", 12),
        ("lobes(m=2, lobe=complete(3)) $", 29),
        ("", 0),
    ],
)
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset
    assert f"at byte {offset}" in str(info.value)


def test_offset_counts_bytes():
    with pytest.raises(ParseError) as info:
        parse("lobes(m=2, lobe=petersen) é")
    assert info.value.offset == 26


def test_depth_limit():
    text = "petersen"
    for _ in range(MAX_DEPTH - 1):
        text = f"wreath(base={text}, m=2)"
    parse(text)
    with pytest.raises(ParseError, match="nesting"):
        parse(f"wreath(base={text}, m=2)")


def test_unparse_canonical():
    assert unparse(parse("lobes(2, complete(3))")) == "lobes(m=2, lobe=complete(k=3))"
    assert unparse(parse('finite(path="a b.txt", group=g.grp)')) == 'finite(path="a b.txt", group="g.grp")'


_leaf = st.one_of(
    st.builds(lambda k: f"complete({k})", st.integers(3, 9)),
    st.just("petersen"),
    st.builds(lambda p: f'finite(path="{p}")', st.sampled_from(["x.txt", "d/y.arcs"])),
)


def _nest(inner):
    lobes = st.builds(
        lambda m, leaf: f"lobes(m={m}, lobe={leaf})", st.integers(2, 5), _leaf
    )
    wreath = st.builds(lambda b, m: f"wreath(base={b}, m={m})", inner, st.integers(2, 4))
    return st.one_of(lobes, wreath)


_exprs = st.recursive(_leaf, _nest, max_leaves=3)


@settings(max_examples=100)
@given(_exprs)
def test_parse_unparse_round_trip(text):
    try:
        node = parse(text)
    except ParseError as exc:
        assert "nesting" in str(exc)
        return
    assert parse(unparse(node)) == node


def test_build_descriptor():
    g = build(parse("lobes(2, petersen)"))
    assert g.descriptor == "lobes(m=2, lobe=petersen)"


def test_build_permgroup(tmp_path):
    path = tmp_path / "s4.grp"
    path.write_text("degree 4\n(0 1 2 3)\n(0 1)\n")
    g = build(parse(f'lobes(m=2, lobe=permgroup(path="{path}", alpha=0, beta=1))'))
    assert len(g.neighbors(g.root)) == 6


# -- commands ------------------------------------------------------------


def test_spheres_csv(capsys):
    code, out, _ = call(capsys, "spheres", "--expr", TRI, "--radius", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "r,s_r,b_r"
    assert [int(line.split(",")[1]) for line in lines[1:]] == [1, 4, 8, 16, 32, 64, 128]
    assert "\r" not in out


def test_spheres_json(capsys):
    code, out, _ = call(capsys, "spheres", "--expr", TRI, "--radius", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["s"] == [1, 4, 8]


def test_spheres_budget(capsys, tmp_path):
    dest = tmp_path / "out.csv"
    code, _, err = call(capsys, "spheres", "--expr", TRI, "--radius", "12", "--budget", "100", "--out", str(dest))
    assert code == 3
    assert "last completed radius 4" in err
    assert dest.read_text().splitlines()[-1] == "4,32,61"


def test_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ORBGROWTH_BUDGET", "50")
    code, _, _ = call(capsys, "spheres", "--expr", TRI, "--radius", "8")
    assert code == 3


def test_subdegrees_csv(capsys):
    code, out, _ = call(capsys, "subdegrees", "--expr", "lobes(m=2, lobe=petersen)", "--radius", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "r,n_r,N_r,sizes"
    assert [int(line.split(",")[1]) for line in lines[2:]] == [1, 2, 3, 5]


def test_subdegrees_json(capsys):
    code, out, _ = call(capsys, "subdegrees", "--expr", TRI, "--radius", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["lower"] == [4, 8, 16]


def test_growth_product(capsys):
    code, out, _ = call(capsys, "growth", "--expr", PROD, "--radius", "10")
    assert code == 0
    doc = json.loads(out)
    assert doc["class"] == "subexponential-nonpolynomial"
    assert {b["name"] for b in doc["bounds"]} >= {"upper_sequence", "liminf_root"}
    assert all(b["passed"] for b in doc["bounds"])


def test_growth_triangles(capsys):
    code, out, _ = call(capsys, "growth", "--expr", TRI, "--radius", "10")
    doc = json.loads(out)
    assert doc["class"] == "exponential"
    assert doc["parameters"]["base"] == pytest.approx(2.0, rel=0.01)


def test_ends(capsys):
    code, out, _ = call(capsys, "ends", "--expr", TRI, "--radius", "5")
    assert code == 0
    rows = {tuple(line.split(",")[:2]): line.split(",")[2] for line in out.splitlines()[1:]}
    assert rows[("1", "5")] == "4"


def test_verify_petersen_lobes(capsys):
    code, out, _ = call(capsys, "verify", "--expr", "lobes(m=2, lobe=petersen)", "--radius", "8", "--seed", "7")
    assert code == 0
    assert out.startswith("# lobes(m=2, lobe=petersen) radius=8 seed=7\n")
    assert "PASS fibonacci" in out
    assert "FAIL" not in out


@pytest.mark.parametrize("expr", [PROD, "complete(4)", "petersen"])
def test_verify_passes(capsys, expr):
    code, out, _ = call(capsys, "verify", "--expr", expr, "--radius", "4")
    assert code == 0, out


def test_usage_errors(capsys):
    assert call(capsys, "spheres", "--expr", "lobes(m=1, lobe=petersen)")[0] == 2
    assert call(capsys, "teleport", "--expr", TRI)[0] == 2
    assert call(capsys, "spheres")[0] == 2
    assert call(capsys, "spheres", "--expr", TRI, "--radius", "-1")[0] == 2
    assert call(capsys, "growth", "--expr", TRI, "--format", "json")[0] == 2
    assert call(capsys, "spheres", "--expr", 'finite(path="/no/such/file")')[0] == 2


def test_non_exact_growth_fails(capsys, tmp_path):
    path = tmp_path / "square.txt"
    path.write_text("0 1\n1 0\n1 2\n2 1\n2 3\n3 2\n3 0\n0 3\n")
    code, _, err = call(capsys, "growth", "--expr", f'lobes(m=2, lobe=finite(path="{path}"))')
    assert code == 1
    assert "exact" in err


def test_outputs_byte_identical(capsys):
    for cmd in ("spheres", "subdegrees", "ends", "verify"):
        a = call(capsys, cmd, "--expr", PROD, "--radius", "4")
        b = call(capsys, cmd, "--expr", PROD, "--radius", "4")
        assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "orbgrowth", "spheres", "--expr", TRI, "--radius", "2"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout == "r,s_r,b_r\n0,1,1\n1,4,5\n2,8,13\n"
