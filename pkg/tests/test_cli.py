import io
import json
import pathlib

import pytest

from hypersets.cli import (
    EXIT_CAP,
    EXIT_NO_WITNESS,
    EXIT_OK,
    EXIT_SEMANTIC,
    EXIT_SYNTAX,
    EXIT_UNEQUAL,
    main,
)

DOCS = pathlib.Path(__file__).resolve().parent.parent / "docs"


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture
def program(tmp_path):
    def write(text: str) -> str:
        path = tmp_path / "prog.hs-set"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


class TestSolve:
    def test_unique_quine_atom_afa(self, capsys, program):
        code, out = run(capsys, "solve", program("x = {x}; y = {y};"))
        assert code == EXIT_OK
        assert "equal x y" in out

    def test_boffa_atoms_distinct(self, capsys, program):
        code, out = run(
            capsys, "solve", program("atom x; atom y;"), "--mode", "boffa"
        )
        assert code == EXIT_OK
        assert "distinct x y" in out

    def test_chain_collapses_under_safa(self, capsys, program):
        code, out = run(
            capsys,
            "solve",
            program("a0 = {a1}; a1 = {a2}; a2 = {a0};"),
            "--mode",
            "safa",
        )
        assert code == EXIT_OK
        assert "equal a0 a1" in out and "equal a1 a2" in out

    def test_syntax_error_exit(self, capsys, program):
        assert main(["solve", program("x = {x}")]) == EXIT_SYNTAX

    def test_semantic_error_exit(self, capsys, program):
        assert main(["solve", program("atom x;")]) == EXIT_SEMANTIC

    def test_cap_exit(self, capsys, program):
        code = main(
            ["solve", program("a = {b, a}; b = {a};"), "--mode", "fafa", "--cap", "1"]
        )
        assert code == EXIT_CAP

    def test_json_mirrors_text(self, capsys, program):
        path = program("x = {x}; y = {y};")
        code, out = run(capsys, "solve", path, "--json")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["sets"]["x"] == "x0 = {x0};\n"
        assert doc["pairs"] == [{"a": "x", "b": "y", "equal": True}]

    def test_dot_output(self, capsys, program, tmp_path):
        dot = tmp_path / "out.dot"
        code, _ = run(capsys, "solve", program("x = {x};"), "--dot", str(dot))
        assert code == EXIT_OK
        assert "digraph x" in dot.read_text()

    def test_deterministic_output(self, capsys, program):
        path = program("a = {b}; b = {a}; c = 3;")
        _, out1 = run(capsys, "solve", path, "--mode", "safa")
        _, out2 = run(capsys, "solve", path, "--mode", "safa")
        assert out1 == out2


class TestEq:
    def test_equal_exit_zero(self, capsys, program):
        path = program("o = {o}; a = {b}; b = {a};")
        code, out = run(capsys, "eq", path, "o", "a", "--mode", "fafa")
        assert code == EXIT_OK and out.strip() == "equal"

    def test_unequal_exit_ten(self, capsys, program):
        path = program("o = {o}; x = {o, x};")
        code, out = run(capsys, "eq", path, "x", "o", "--mode", "safa")
        assert code == EXIT_UNEQUAL and out.strip() == "unequal"

    def test_numeral_vs_literal(self, capsys, program):
        path = program("two = 2; lit = {z, s}; z = {}; s = {z};")
        code, _ = run(capsys, "eq", path, "two", "lit")
        assert code == EXIT_OK


class TestAut:
    def test_boffa_doubleton_order_two(self, capsys, program):
        path = program("atom a; atom b; d = {a, b};")
        code, out = run(capsys, "aut", path, "d", "--mode", "boffa")
        assert code == EXIT_OK
        assert "automorphism order 2" in out


class TestWf:
    def test_report(self, capsys):
        code, out = run(capsys, "wf", "--atoms", "2", "--levels", "2")
        assert code == EXIT_OK
        assert "level sizes 2 4 16" in out
        assert "automorphism count 2" in out

    def test_perm(self, capsys):
        code, out = run(capsys, "wf", "--atoms", "2", "--levels", "2", "--perm", "(0 1)")
        assert code == EXIT_OK
        assert "verdict automorphism" in out
        assert "fixed points 8" in out

    def test_embed(self, capsys):
        code, out = run(
            capsys, "wf", "--atoms", "2", "--levels", "2", "--embed-into", "3"
        )
        assert code == EXIT_OK
        assert "verdict proper-embedding" in out

    def test_cap_exit(self, capsys):
        assert main(["wf", "--atoms", "3", "--levels", "3"]) == EXIT_CAP


class TestGroup:
    def test_preset_v4(self, capsys):
        code, out = run(capsys, "group", "--preset", "v4")
        assert code == EXIT_OK
        assert "automorphism count 4" in out
        assert "isomorphic to input True" in out

    def test_table_file(self, capsys, tmp_path):
        path = tmp_path / "z2.json"
        path.write_text(json.dumps({"order": 2, "table": [[0, 1], [1, 0]]}))
        code, out = run(capsys, "group", "--table", str(path))
        assert code == EXIT_OK
        assert "automorphism count 2" in out

    def test_group_cap(self, capsys, tmp_path):
        path = tmp_path / "z9.json"
        table = [[(i + j) % 9 for j in range(9)] for i in range(9)]
        path.write_text(json.dumps({"order": 9, "table": table}))
        assert main(["group", "--table", str(path)]) == EXIT_CAP


class TestSearchSeparation:
    def test_finds_afa_safa_witness(self, capsys):
        code, out = run(
            capsys,
            "search-separation", "afa", "safa",
            "--max-nodes", "6", "--seed", "1", "--budget", "10000",
        )
        assert code == EXIT_OK
        assert "witness" in out

    def test_same_modes_rejected(self, capsys):
        assert main(["search-separation", "afa", "afa"]) == EXIT_SEMANTIC

    def test_no_witness_exit(self, capsys):
        code, out = run(
            capsys,
            "search-separation", "safa", "fafa",
            "--max-nodes", "4", "--seed", "0", "--budget", "50",
        )
        assert code in (EXIT_OK, EXIT_NO_WITNESS)

    def test_deterministic_for_seed(self, capsys):
        args = ["search-separation", "afa", "fafa", "--max-nodes", "5",
                "--seed", "9", "--budget", "3000"]
        code1, out1 = run(capsys, *args)
        code2, out2 = run(capsys, *args)
        assert (code1, out1) == (code2, out2)


class TestRepl:
    def run_script(self, capsys, monkeypatch, script: str, mode: str = "afa"):
        import sys

        monkeypatch.setattr(sys, "stdin", io.StringIO(script))
        code = main(["repl", "--mode", mode])
        assert code == EXIT_OK
        return capsys.readouterr().out

    def test_eq_after_definitions(self, capsys, monkeypatch):
        out = self.run_script(capsys, monkeypatch, "x = {x};\ny = {y};\n:eq x y\n:quit\n")
        assert "equal" in out

    def test_boffa_doubleton_order(self, capsys, monkeypatch):
        out = self.run_script(
            capsys, monkeypatch,
            "atom a;\natom b;\nd = {a, b};\n:aut d\n:quit\n",
            mode="boffa",
        )
        assert "order 2" in out

    def test_rigid_numeral(self, capsys, monkeypatch):
        out = self.run_script(capsys, monkeypatch, "n = 3;\n:rigid n\n:quit\n")
        assert "rigid" in out

    def test_errors_do_not_kill_session(self, capsys, monkeypatch):
        out = self.run_script(
            capsys, monkeypatch,
            "x = {undefined_name};\n:eq nope nope\nx = {x};\n:rigid x\n:quit\n",
        )
        assert "error" in out
        assert "rigid" in out

    def test_mode_switch(self, capsys, monkeypatch):
        out = self.run_script(
            capsys, monkeypatch,
            "x = {x};\ny = {y};\n:eq x y\n:mode boffa\n:eq x y\n:quit\n",
        )
        assert "equal" in out and "unequal" in out


class TestDocsCorpus:
    def test_goldens(self, capsys):
        examples = sorted((DOCS / "examples").glob("*.hs-set"))
        assert examples, "docs corpus missing"
        for path in examples:
            stem, mode, _ = path.name.split(".")
            code, out = run(capsys, "solve", str(path), "--mode", mode)
            assert code == EXIT_OK, path
            want = (DOCS / "golden" / f"{stem}.{mode}.txt").read_text(encoding="utf-8")
            assert out == want, f"golden drift for {path.name}"
