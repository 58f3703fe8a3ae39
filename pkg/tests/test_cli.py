import io
import json

from totmatch.cli import RunConfig, main, run
from totmatch.graphs import generate, parse_element, parse_graph
from totmatch.matching import TotalMatching, is_total_matching, total_matching_weight
from totmatch.subdet import ElementColoring, witness_determinant


def _invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    import totmatch.cli as cli
    config = cli._parse_args(argv)
    code = run(config, out, err)
    return code, out.getvalue(), err.getvalue()


def _write(tmp_path, name, graph_text):
    path = tmp_path / name
    path.write_text(graph_text)
    return str(path)


def test_delta_text_output(tmp_path):
    code, out, _ = _invoke(["gen", "cycle", "n=6"])
    path = _write(tmp_path, "c6.graph", out)
    code, out, _ = _invoke(["delta", path])
    assert code == 0
    assert out.splitlines()[0] == "delta: 2"


def test_solve_text_output(tmp_path):
    _, text, _ = _invoke(["gen", "path", "n=4"])
    path = _write(tmp_path, "p4.graph", text)
    code, out, _ = _invoke(["solve", path, "--method", "brute"])
    assert code == 0
    assert out.splitlines()[0] == "weight: 3"


def test_check_exit_codes(tmp_path):
    from totmatch.graphs import format_graph
    path = _write(tmp_path, "spider.graph",
                  format_graph(generate("spider", {"b": 3, "l": 2})))
    code, out, _ = _invoke(["check", path, "--bound", "7"])
    assert code == 1
    assert "value: 8" in out
    code, out, _ = _invoke(["check", path, "--bound", "8"])
    assert code == 0 and "delta: 8" in out


def test_input_and_resource_exit_codes(tmp_path):
    code, _, err = _invoke(["delta", str(tmp_path / "missing.graph")])
    assert code == 2 and err
    bad = _write(tmp_path, "bad.graph", "gibberish\n")
    assert _invoke(["delta", bad])[0] == 2
    _, text, _ = _invoke(["gen", "cycle", "n=9"])
    big = _write(tmp_path, "c9.graph", text)
    code, _, err = _invoke(["delta", big, "--cap", "5"])
    assert code == 3 and err


def test_delta_json_round_trip(tmp_path):
    from totmatch.graphs import format_graph
    g = generate("spider", {"b": 3, "l": 2})
    path = _write(tmp_path, "spider.graph", format_graph(g))
    code, out, _ = _invoke(["delta", path, "--json"])
    assert code == 0
    data = json.loads(out)
    witness = ElementColoring(
        red=tuple(parse_element(t) for t in data["red"]),
        cyan=tuple(parse_element(t) for t in data["cyan"]))
    assert witness_determinant(g, witness) == data["delta"] == 8


def test_solve_json_round_trip(tmp_path):
    from totmatch.graphs import format_graph
    g = generate("cycle", {"n": 5})
    path = _write(tmp_path, "c5.graph", format_graph(g))
    code, out, _ = _invoke(["solve", path, "--bound", "2", "--json"])
    assert code == 0
    data = json.loads(out)
    sol = TotalMatching(tuple(data["vertices"]), tuple(data["edge_indices"]),
                        data["weight"])
    assert is_total_matching(g, sol)
    assert total_matching_weight(g, sol) == sol.weight == 3


def test_exceeds_json_certificate_reverifies(tmp_path):
    from totmatch.graphs import format_graph
    from totmatch.matrices import constraint_matrix, det_bareiss, extract
    g = generate("cycle", {"n": 7})
    path = _write(tmp_path, "c7.graph", format_graph(g))
    code, out, _ = _invoke(["check", path, "--bound", "2", "--json"])
    assert code == 1
    cert = json.loads(out)["certificate"]
    assert cert["kind"] == "subdeterminant_found"
    core = parse_graph(cert["core"])
    m = constraint_matrix(core)
    index = {str(lbl): i for i, lbl in enumerate(m.row_labels)}
    sub = extract(m, [index[t] for t in cert["red"]],
                  [index[t] for t in cert["cyan"]])
    assert abs(det_bareiss(sub.to_lists())) == cert["value"] > 2


def test_gen_is_seed_deterministic():
    a = _invoke(["gen", "random_sparse", "n=7", "m=8", "--seed", "5"])
    b = _invoke(["gen", "random_sparse", "n=7", "m=8", "--seed", "5"])
    c = _invoke(["gen", "random_sparse", "n=7", "m=8", "--seed", "6"])
    assert a == b
    assert a[1] != c[1]


def test_bounds_command(tmp_path):
    from totmatch.graphs import format_graph
    path = _write(tmp_path, "spider.graph",
                  format_graph(generate("spider", {"b": 3, "l": 2})))
    code, out, _ = _invoke(["bounds", path])
    assert code == 0
    lines = dict(ln.split(": ", 1) for ln in out.splitlines())
    assert lines["lower_exact_square"] == "16"
    assert lines["upper"] == "81.0"
    assert lines["near_pencil_lower"] == "8"


def test_verify_command(tmp_path):
    for name, args in (("c6", ["gen", "cycle", "n=6"]),
                       ("p5", ["gen", "path", "n=5"]),
                       ("f1", ["gen", "random_forest", "n=7", "--seed", "2"])):
        _, text, _ = _invoke(args)
        _write(tmp_path, f"{name}.graph", text)
    code, out, _ = _invoke(["verify", str(tmp_path)])
    assert code == 0
    assert out.count(": ok") == 3


def test_main_entry_point(tmp_path, capsys):
    assert main(["gen", "path", "n=3"]) == 0
    assert "e 1 2" in capsys.readouterr().out
    assert main(["delta", "nowhere.graph"]) == 2
