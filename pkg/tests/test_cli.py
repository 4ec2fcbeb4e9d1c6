import json
import subprocess
import sys
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hiking.cli import generate, run
from hiking.serialize import dump, dumps, loads, parse

INTERVALS = {
    "ok": [(1, 2), (1, 2), (2, 2)],
    "bad": [(1, 2), (2, 3), (3, 3)],
    "pairs": [(2, 2), (2, 2), (2, 2)],
}


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def interval_file(tmp_path, key):
    agents = [{"id": i + 1, "l": l, "r": r} for i, (l, r) in enumerate(INTERVALS[key])]
    return write(tmp_path, f"{key}.json", {"n": len(agents), "agents": agents})


def run_json(capsys, argv):
    code = run(argv + ["--format", "json"])
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    return code, lines


class TestExitCodes:
    def test_solve_feasible(self, tmp_path, capsys):
        code, [out] = run_json(capsys, ["solve", interval_file(tmp_path, "ok")])
        assert code == 0 and out["status"] == "feasible"
        assert sorted(len(g) for g in out["groups"]) == [1, 2]

    def test_solve_infeasible(self, tmp_path, capsys):
        code, [out] = run_json(capsys, ["solve", interval_file(tmp_path, "bad")])
        assert code == 2 and out["status"] == "infeasible" and "groups" not in out

    def test_x_delete_non_monotone(self, tmp_path, capsys):
        path = interval_file(tmp_path, "pairs")
        assert [run(["x-delete", "--x", str(x), path]) for x in range(4)] == [2, 0, 2, 0]

    def test_usage_and_data_errors(self, tmp_path, capsys):
        assert run(["frobnicate"]) == 1
        assert run(["x-delete", interval_file(tmp_path, "ok")]) == 1
        assert run(["solve", str(tmp_path / "missing.json")]) == 1
        bad = write(tmp_path, "inverted.json", {"n": 2, "agents": [{"l": 2, "r": 1}, {"l": 1, "r": 1}]})
        assert run(["solve", bad]) == 1
        garbage = tmp_path / "garbage.json"
        garbage.write_text("{not json")
        assert run(["solve", str(garbage)]) == 1

    def test_wrong_instance_kind(self, tmp_path, capsys):
        path = write(tmp_path, "p.json", {"peaks": [1, 2]})
        assert run(["solve", path]) == 1


class TestCommands:
    def test_oracle_cross_check(self, tmp_path, capsys):
        code, [out] = run_json(capsys, ["max-satisfied", "--oracle", interval_file(tmp_path, "pairs")])
        assert code == 0 and out["objective"] == 2
        assert any("agrees" in d for d in out["diagnostics"])

    def test_weighted_min_delete(self, tmp_path, capsys):
        agents = [{"id": 1, "l": 2, "r": 2, "w": "1/3"}, {"id": 2, "l": 2, "r": 2, "w": 5},
                  {"id": 3, "l": 2, "r": 2, "w": 2}]
        path = write(tmp_path, "w.json", {"n": 3, "agents": agents})
        code, [out] = run_json(capsys, ["min-delete", "--weighted", "--oracle", path])
        assert code == 0 and out["objective"] == "1/3" and out["excluded"] == [1]

    def test_single_peaked_overrides(self, tmp_path, capsys):
        path = write(tmp_path, "p.json", {"peaks": [1, 1, 2], "cost": {"kind": "abs"},
                                          "alpha": 0, "objective": "utilitarian"})
        _, [out] = run_json(capsys, ["single-peaked", path])
        assert out["objective"] == 1
        _, [out] = run_json(capsys, ["single-peaked", "--alpha", "1", "--oracle", path])
        assert out["objective"] == 0 and out["excluded"] == [3]
        _, [out] = run_json(capsys, ["single-peaked", "--cost", "power:2", "--objective",
                                     "egalitarian", path])
        assert out["objective"] == 1 and out["cost"] == {"kind": "power", "gamma": 2}

    def test_min_eg_routes(self, tmp_path, capsys):
        path = write(tmp_path, "m.json", {"costs": [[0, 5], [7, 1]]})
        _, [out] = run_json(capsys, ["min-eg", "--oracle", path])
        assert out["objective"] == 5 and out["route"] == "interval"
        path = write(tmp_path, "g.json", {"costs": [[0, 1, 0], [0, 1, 0], [0, 1, 0]]})
        with pytest.warns(RuntimeWarning):
            _, [out] = run_json(capsys, ["min-eg", path])
        assert out["objective"] == 0 and out["route"] == "exhaustive"

    def test_gadget_pipeline(self, tmp_path, capsys):
        path = write(tmp_path, "x.json", {"k": 1, "triples": [[1, 2, 3]]})
        assert run(["gen-x3c", path]) == 0
        g = json.loads(capsys.readouterr().out)
        assert g["max_label"] == 14 and len(g["edges"]) == 23
        assert run(["gen-x3c", "--wp", path]) == 0
        wp = capsys.readouterr().out
        wp_path = tmp_path / "wp.json"
        wp_path.write_text(wp)
        assert run(["to-orientation", str(wp_path)]) == 0
        back = json.loads(capsys.readouterr().out)
        assert sorted(map(sorted, back["edges"])) == sorted(map(sorted, g["edges"]))

    def test_batch_mode(self, tmp_path, capsys):
        paths = [interval_file(tmp_path, k) for k in ("ok", "bad", "pairs")]
        code, outs = run_json(capsys, ["solve", "--jobs", "3"] + paths)
        assert code == 2
        assert [o["input"] for o in outs] == paths
        assert [o["status"] for o in outs] == ["feasible", "infeasible", "infeasible"]

    def test_generators_are_seeded(self, capsys):
        for kind in ("interval", "peaks", "matrix", "x3c"):
            run(["gen-random", "--n", "5", "--seed", "9", "--kind", kind])
            a = capsys.readouterr().out
            run(["gen-random", "--n", "5", "--seed", "9", "--kind", kind])
            assert a == capsys.readouterr().out
            parse(json.loads(a))


class TestVerify:
    @pytest.mark.parametrize("argv", [
        ["solve"], ["min-delete"], ["min-delete", "--weighted"], ["x-delete", "--x", "1"],
        ["max-satisfied"], ["max-satisfied", "--weighted"]])
    def test_accepts_interval_solutions(self, tmp_path, capsys, argv):
        for seed in range(15):
            inst = generate("interval", 6, seed, weighted=True)
            path = write(tmp_path, f"i{seed}.json", dump(inst))
            code = run(argv + [path, "--format", "json"])
            sol = capsys.readouterr().out
            if code != 0:
                assert code == 2
                continue
            sol_path = tmp_path / f"s{seed}.json"
            sol_path.write_text(sol)
            assert run(["verify", path, str(sol_path)]) == 0, sol
            capsys.readouterr()

    def test_accepts_single_peaked_and_matrix_solutions(self, tmp_path, capsys):
        for seed in range(10):
            for kind, argv in (("peaks", ["single-peaked", "--alpha", "2", "--cost", "power:2"]),
                               ("matrix", ["min-eg"])):
                path = write(tmp_path, f"{kind}{seed}.json", dump(generate(kind, 6, seed)))
                with warnings.catch_warnings():
                    # min-eg on a random matrix may take the exhaustive route, which warns
                    warnings.simplefilter("ignore")
                    assert run(argv + [path, "--format", "json"]) == 0
                sol_path = tmp_path / "sol.json"
                sol_path.write_text(capsys.readouterr().out)
                assert run(["verify", path, str(sol_path)]) == 0
                capsys.readouterr()

    def test_rejects_tampered_solution(self, tmp_path, capsys):
        path = interval_file(tmp_path, "ok")
        sol = write(tmp_path, "sol.json", {"status": "feasible", "groups": [[1, 2, 3]], "excluded": []})
        assert run(["verify", path, sol]) == 2
        sol = write(tmp_path, "sol2.json", {"status": "feasible", "problem": "min-delete",
                                            "objective": 0, "groups": [[1, 2]], "excluded": [3]})
        assert run(["verify", path, sol]) == 2
        sol = write(tmp_path, "sol3.json", {"status": "feasible", "groups": [[1, 2]], "excluded": []})
        assert run(["verify", path, sol]) == 1

    def test_orientation(self, tmp_path, capsys):
        g = write(tmp_path, "g.json", {"max_label": 2, "edges": [[1, 2]]})
        assert run(["verify", g, write(tmp_path, "o1.json", {"orientation": [1]})]) == 0
        assert run(["verify", g, write(tmp_path, "o2.json", {"orientation": [2]})]) == 2


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["interval", "peaks", "matrix", "x3c"]), st.integers(0, 9), st.integers(0, 10 ** 6),
       st.booleans())
def test_serialisation_round_trip(kind, n, seed, weighted):
    if kind == "x3c":
        n = min(n, 3)
    inst = generate(kind, n, seed, weighted)
    assert loads(dumps(inst)) == inst


def test_module_entry_point(tmp_path):
    path = interval_file(tmp_path, "ok")
    proc = subprocess.run([sys.executable, "-m", "hiking", "solve", path], capture_output=True, text=True)
    assert proc.returncode == 0 and "status: feasible" in proc.stdout
