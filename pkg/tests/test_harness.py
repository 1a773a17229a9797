import json
import random
from fractions import Fraction

import pytest

from barnorm import cli, harness
from barnorm.chains import chain_from_records
from barnorm.groups import FreeGroup, parse_model
from barnorm.harness import (
    EXAMPLE_HOMOMORPHISMS,
    RandomChainSpec,
    example_homomorphism,
    random_chain,
)

F2 = FreeGroup(2)


class TestRandomChains:
    def test_deterministic(self):
        spec = RandomChainSpec(degree=2, support=6, radius=3)
        a = random_chain(F2, spec, random.Random(42))
        b = random_chain(F2, spec, random.Random(42))
        assert a == b

    def test_empty_support(self):
        spec = RandomChainSpec(degree=1, support=0, radius=2)
        assert random_chain(F2, spec, random.Random(0)).is_zero()

    def test_vertices_within_radius(self):
        spec = RandomChainSpec(degree=2, support=10, radius=2)
        chain = random_chain(F2, spec, random.Random(9))
        ball = set(F2.ball(2))
        for simplex in chain.support():
            assert all(v in ball for v in simplex)

    def test_no_all_identity_simplex(self):
        spec = RandomChainSpec(degree=1, support=16, radius=2)
        chain = random_chain(F2, spec, random.Random(3))
        assert ((),) not in chain.support()
        assert len(chain) == 16  # 16 of the 17 ball elements qualify

    def test_max_diameter(self):
        spec = RandomChainSpec(degree=2, support=12, radius=3, max_diameter=2)
        chain = random_chain(F2, spec, random.Random(4))
        assert all(F2.diameter(s) <= 2 for s in chain.support())

    def test_coefficients_in_declared_range(self):
        spec = RandomChainSpec(degree=1, support=20, radius=3,
                               numerator_max=3, denominator_max=2)
        chain = random_chain(F2, spec, random.Random(8))
        for _, value in chain.terms():
            assert value != 0
            assert abs(value) <= 3
            assert value.denominator <= 6  # merged bound after reduction

    def test_impossible_spec_errors(self):
        spec = RandomChainSpec(degree=1, support=100, radius=1)
        with pytest.raises(ValueError):
            random_chain(F2, spec, random.Random(0))


class TestExampleHomomorphisms:
    def test_registry(self):
        assert set(EXAMPLE_HOMOMORPHISMS) == {
            "abelian2-to-z", "z-to-cyclic5", "free2-identity"}
        for name in EXAMPLE_HOMOMORPHISMS:
            hom = example_homomorphism(name)
            assert hom.kernel_control is not None
            assert hom.is_metric_compatible()

    def test_certificate_values(self):
        assert example_homomorphism("abelian2-to-z").kernel_control.constant == 3
        assert example_homomorphism("z-to-cyclic5").kernel_control.constant == 1

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            example_homomorphism("nope")


class TestSuites:
    def test_growth(self):
        rows, violations, extras = harness.run_growth("abelian:2", 2, 10)
        assert violations == 0 and len(rows) == 10
        assert extras["constant"] == 5
        assert list(rows[0]) == list(harness.GROWTH_SCHEMA)

    def test_contractivity(self):
        rows, violations, _ = harness.run_contractivity(
            "free:2", 1, 1, 2, 4, trials=10, seed=1)
        assert violations == 0 and len(rows) == 10

    def test_compare(self):
        rows, violations, extras = harness.run_compare(
            "abelian:2", 2, k=1, n=0, p=2, q=4, trials=10, seed=2)
        assert violations == 0 and extras["growth_constant"] == 5

    def test_pushforward(self):
        rows, violations, _ = harness.run_pushforward(
            "z-to-cyclic5", k=1, n=1, p=2, trials=10, seed=3)
        assert violations == 0

    def test_diffuse(self):
        rows, violations, extras = harness.run_diffuse(
            "free:2", annuli_degree=2, degree=1, n=1, p=2, q=4,
            trials=5, seed=4, radius=2, support=2)
        assert violations == 0
        assert all(r["homotopy_exact"] and r["bound_ok"] for r in rows)
        assert extras["last_cone"] is not None

    def test_f2(self):
        level_rows, decay_rows, violations = harness.run_f2(3, [(0, 3)])
        assert violations == 0
        assert [r["words"] for r in level_rows] == [1, 4, 16, 64]
        assert all(r["telescoping_ok"] for r in decay_rows)

    def test_all_aggregate(self):
        results = harness.run_all(seed=7)
        assert set(results) == {
            "growth", "norms", "compare-pq", "pushforward",
            "diffuse", "f2-levels", "f2-decay"}
        for schema, rows, violations in results.values():
            assert violations == 0
            for row in rows:
                assert list(row) == list(schema)


class TestCli:
    def run(self, *argv):
        return cli.main(list(argv))

    def test_growth_command(self, tmp_path):
        code = self.run("growth", "--model", "abelian:1", "--growth-degree",
                        "1", "--r-max", "6", "--outdir", str(tmp_path))
        assert code == 0
        text = (tmp_path / "growth.csv").read_text()
        assert text.startswith("# schema: growth v1\n")
        assert text.splitlines()[1] == "r,sphere_size,ball_size,ratio"
        summary = json.loads((tmp_path / "growth_summary.json").read_text())
        assert summary["suite"] == "growth" and summary["violations"] == 0

    def test_compare_command(self, tmp_path):
        code = self.run("compare-pq", "--model", "abelian:2",
                        "--growth-degree", "2", "--k", "1", "--n", "0",
                        "--p", "2", "--q", "4", "--trials", "50",
                        "--seed", "5", "--outdir", str(tmp_path))
        assert code == 0
        lines = (tmp_path / "compare-pq.csv").read_text().splitlines()
        assert len(lines) == 52  # schema comment + header + 50 rows
        assert all(line.endswith(",true") for line in lines[2:])

    def test_infinite_exponent_flag(self, tmp_path):
        code = self.run("compare-pq", "--model", "abelian:1",
                        "--growth-degree", "1", "--q", "inf",
                        "--trials", "5", "--outdir", str(tmp_path))
        assert code == 0
        assert ",inf," in (tmp_path / "compare-pq.csv").read_text()

    def test_f2_command(self, tmp_path):
        code = self.run("f2-vanish", "--levels", "4", "--norms", "0:3,0:2",
                        "--outdir", str(tmp_path))
        assert code == 0
        assert (tmp_path / "f2-levels.csv").exists()
        assert (tmp_path / "f2-decay.csv").exists()

    def test_diffuse_with_chain_file(self, tmp_path):
        chain_path = tmp_path / "chain.json"
        records = [{"simplex": ["a"], "coeff": "1/2"},
                   {"simplex": ["ab"], "coeff": "-2/3"}]
        chain_path.write_text(json.dumps(records))
        out_path = tmp_path / "cone.json"
        code = self.run("diffuse", "--model", "free:2", "--N", "2",
                        "--degree", "1", "--chain", str(chain_path),
                        "--emit-chain", str(out_path),
                        "--outdir", str(tmp_path))
        assert code == 0
        emitted = json.loads(out_path.read_text())
        model = parse_model("free:2")
        cone_chain = chain_from_records(model, emitted)
        # mass of each source simplex is preserved by the averaged cone
        assert cone_chain.coefficient_sum() == Fraction(1, 2) - Fraction(2, 3)
        rows = (tmp_path / "diffuse.csv").read_text().splitlines()
        assert len(rows) == 3

    def test_cap_error_is_reported(self, tmp_path, capsys):
        code = self.run("diffuse", "--model", "free:2", "--N", "3",
                        "--degree", "1", "--radius", "3", "--max-diameter",
                        "3", "--trials", "1", "--outdir", str(tmp_path))
        assert code == 2
        assert "exceeds cap" in capsys.readouterr().err

    def test_config_file_defaults(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps(
            {"model": "abelian:1", "growth_degree": 1, "r_max": 4,
             "outdir": str(tmp_path / "from_config")}))
        code = self.run("--config", str(config), "growth")
        assert code == 0
        assert (tmp_path / "from_config" / "growth.csv").exists()
        # explicit flags override config values
        code = self.run("--config", str(config), "growth",
                        "--outdir", str(tmp_path / "explicit"))
        assert code == 0
        assert (tmp_path / "explicit" / "growth.csv").exists()

    def test_all_reproducible(self, tmp_path):
        for sub in ("one", "two"):
            assert self.run("all", "--seed", "11",
                            "--outdir", str(tmp_path / sub)) == 0
        for csv_path in sorted((tmp_path / "one").glob("*.csv")):
            twin = tmp_path / "two" / csv_path.name
            assert csv_path.read_bytes() == twin.read_bytes()
