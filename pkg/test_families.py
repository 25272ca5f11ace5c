"""
Family expressions and graph6 files.
"""
import tempfile
from pathlib import Path

from errors import ParseError
from families import BOWTIE, parse_family, parse_graph, read_graph6_file, write_graph6_file
from graph_core import are_isomorphic, complete_multipartite, standard_graph


def test_named_graphs():
    assert parse_graph("K3").edge_count == 3
    assert parse_graph("C5").edge_count == 5
    assert parse_graph("K3,4") == complete_multipartite([3, 4])
    assert parse_graph("S4").edge_count == 3
    assert parse_graph("M4").edge_count == 2
    assert are_isomorphic(parse_graph("bowtie"), BOWTIE)
    assert parse_graph("g6:Bw").edge_count == 3


def test_operators():
    assert are_isomorphic(parse_graph("join(E1,C4)"), standard_graph("wheel", 5))
    two = parse_graph("union(K3,K3)")
    assert two.n == 6 and two.edge_count == 6


def test_single_family():
    fam = parse_family("K3")
    assert len(fam.members) == 1
    assert fam.chi_family == 3 and fam.phi_family == 3
    assert fam.packing is None
    assert fam.name == "K3"


def test_member_list():
    fam = parse_family("{K3; C5}")
    assert len(fam.members) == 2
    assert fam.name == "{K3;C5}"
    # duplicates collapse up to isomorphism
    assert len(parse_family("{C4;K2,2}").members) == 1


def test_packing_family_expression():
    fam = parse_family("G(K3,K3)")
    assert len(fam.members) == 2
    assert fam.packing is not None and len(fam.packing) == 2
    assert fam.chi_family == 3
    assert fam.phi_family == 6


def test_isolated_vertices_are_stripped():
    fam = parse_family("union(K3,E2)")
    assert fam.members[0].n == 3


def test_parse_errors():
    for text in ("X3", "K", "{K3;", "join(K3)", "K3 K3", "E4", "M3", "@/nonexistent/file.g6", "G(K3"):
        try:
            parse_family(text)
        except ParseError:
            continue
        raise AssertionError(f"{text!r} parsed")


def test_graph6_file_roundtrip():
    graphs = [standard_graph("cycle", 5), standard_graph("complete", 4)]
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "family.g6"
        write_graph6_file(path, graphs)
        assert read_graph6_file(path) == graphs
        fam = parse_family(f"@{path}")
        assert len(fam.members) == 2
        assert fam.chi_family == 3


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
