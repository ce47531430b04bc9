import json
import subprocess
import sys
from fractions import Fraction

import pytest

from k3twist.cli import jsonable, main, parse_rational
from k3twist.errors import InputError
from k3twist.mukai import k3_vector


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def surface_json(b=None, omega=None):
    spec = {"x1": list(k3_vector(e1=1, e2=1)), "x2": list(k3_vector(f1=1, f2=1)),
            "omega": list(omega or k3_vector(g1=1, g2=1))}
    if b is not None:
        spec["B"] = [str(x) for x in b]
    return json.dumps(spec)


class TestHelpers:
    def test_jsonable(self):
        assert jsonable(Fraction(1, 5)) == "1/5"
        assert jsonable(Fraction(0)) == "0/1"
        assert jsonable({"a": (1, Fraction(2, 3))}) == {"a": [1, "2/3"]}

    def test_parse_rational(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational(2) == 2
        with pytest.raises(InputError):
            parse_rational("three")


class TestLatticeInvariants:
    def test_builtin(self, capsys):
        code, out, _ = run(capsys, "lattice-invariants", "--builtin", "mukai")
        assert code == 0
        assert out["results"]["signature"] == [4, 20]
        assert set(out) == {"command", "inputs", "results", "assertions", "timing"}

    def test_gram(self, capsys):
        code, out, _ = run(capsys, "lattice-invariants", "--gram", "[[0,-5],[-5,2]]")
        assert code == 0 and out["results"]["invariant_factors"] == [25]

    def test_malformed(self, capsys):
        code, _, err = run(capsys, "lattice-invariants", "--gram", "[[0,1],[1")
        assert code == 2 and "error" in err


class TestVerify:
    def test_partners(self, capsys):
        code, out, _ = run(capsys, "verify", "fm-partners", "--n", "3")
        assert code == 0 and out["assertions"]["fm-partners"]["pass"]

    def test_partner_bounds(self, capsys):
        assert run(capsys, "verify", "fm-partners", "--n", "0")[0] == 2
        assert run(capsys, "verify", "fm-partners", "--n", "11")[0] == 3

    def test_small_suites(self, capsys):
        for subject in ("goldens", "euler"):
            assert run(capsys, "verify", subject)[0] == 0
        code, out, _ = run(capsys, "verify", "gap", "--trials", "20", "--seed", "1")
        assert code == 0 and out["results"]["passes"] == "60/60"


class TestMatch:
    def test_builtin(self, capsys):
        code, out, _ = run(capsys, "match-twist", "--isometry", "i")
        assert code == 0
        assert all(a["pass"] for a in out["assertions"].values())

    def test_random_word(self, capsys):
        code, out, _ = run(capsys, "match-twist", "--random-word", "4", "--seed", "1")
        assert code == 0 and len(out["inputs"]["word"]) == 4

    def test_integral(self, capsys):
        code, out, _ = run(capsys, "match-twist", "--isometry", "identity", "--integral")
        assert code == 0 and out["results"]["B"] == [0] * 22

    def test_needs_seed(self, capsys):
        assert run(capsys, "match-twist", "--random-word", "3")[0] == 2

    def test_bad_matrix(self, capsys):
        m = [[int(i == j) for j in range(24)] for i in range(24)]
        m[23][23] = 2
        code, _, err = run(capsys, "match-twist", "--isometry", json.dumps(m))
        assert code == 2 and "not preserved" in err


class TestBrauer:
    def test_counter_order(self, capsys):
        code, out, _ = run(capsys, "brauer", "order", "--b", "counter")
        assert code == 0
        assert out["results"]["order"] == 5
        assert out["results"]["disc_kernel"] == 25
        assert out["results"]["displayed_variant_holds"] is False

    def test_enumerate(self, capsys):
        code, out, _ = run(capsys, "brauer", "enumerate", "--gram", "[[4,0],[0,4]]", "--k", "2")
        assert code == 0 and out["results"]["count"] == 4
        assert out["results"]["buckets"] == [[0], [1, 2], [3]]

    def test_budget(self, capsys):
        code, _, err = run(capsys, "brauer", "enumerate", "--gram", "[[4,0],[0,4]]", "--k", "2000")
        assert code == 3 and "4000000" in err


class TestOrientation:
    @pytest.mark.parametrize("name, expected", [("identity", True), ("i", True), ("j", False)])
    def test_generators(self, capsys, name, expected):
        s = surface_json()
        code, out, _ = run(capsys, "orientation", "--isometry", name, "--src", s, "--dst", s)
        assert code == 0 and out["results"]["preserving"] is expected

    def test_criterion(self, capsys):
        s = surface_json()
        code, out, _ = run(capsys, "orientation", "--isometry", "i", "--src", s, "--dst", s,
                           "--criterion")
        assert code == 0 and out["results"]["criterion"] is True
        code, _, err = run(capsys, "orientation", "--isometry", "j", "--src", s, "--dst", s,
                           "--criterion")
        assert code == 4 and "criterion inapplicable" in err

    def test_bad_omega(self, capsys):
        s = surface_json(omega=k3_vector(e1=1))
        code, _, _ = run(capsys, "orientation", "--isometry", "i", "--src", s, "--dst", s)
        assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "k3twist", "lattice-invariants", "--builtin", "U"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["results"]["det"] == -1
