"""CLI contract: output schemas, exit codes, and the cache file format."""

import json

import pytest

from mertensap import cache as cache_mod
from mertensap.cli import EXIT_OK, EXIT_USAGE, RunConfig, main
from mertensap.errors import InvalidInputError, NotAUnitError


@pytest.fixture(autouse=True)
def reset_cache_store():
    yield
    cache_mod.set_active_store(None)


class TestRunConfig:
    def test_valid(self):
        cfg = RunConfig(q=5, a=2)
        assert cfg.precision == 30 and cfg.prime_bound == 10**7

    def test_invariants(self):
        with pytest.raises(InvalidInputError):
            RunConfig(q=2, a=1)
        with pytest.raises(NotAUnitError):
            RunConfig(q=8, a=4)
        with pytest.raises(InvalidInputError):
            RunConfig(q=5, a=2, precision=5)
        with pytest.raises(InvalidInputError):
            RunConfig(q=5, a=2, prime_bound=10)
        with pytest.raises(InvalidInputError):
            RunConfig(q=5, a=2, method="guess")


class TestCompute:
    def test_human_output(self, capsys):
        assert main(["compute", "--q", "4", "--a", "1", "--prime-bound", "10000"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "C(4, 1)" in out
        assert "rigorous error bound" in out
        assert "heuristic" in out
        assert "class_1_product" in out

    def test_json_schema_and_roundtrip(self, capsys):
        assert main([
            "compute", "--q", "5", "--a", "4", "--prime-bound", "10000", "--json",
        ]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        for key in ("q", "a", "phi", "lambda", "c", "C", "error_bound",
                    "components", "method", "prime_bound", "precision"):
            assert key in report
        assert report["phi"] == 4 and report["lambda"] == 4
        assert "meissel_B" in report["components"]
        assert "class_2_f_4_2" in report["components"]
        assert "class_3_f_4_2" in report["components"]
        assert json.loads(json.dumps(report)) == report

    def test_csv_output(self, capsys):
        assert main([
            "compute", "--q", "4", "--a", "3", "--prime-bound", "10000", "--csv",
        ]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        header = lines[0].split(",")
        row = lines[1].split(",")
        assert header[:4] == ["q", "a", "phi", "lambda"]
        assert row[:2] == ["4", "3"]

    def test_full_precision_digits_against_oracle(self, capsys):
        # thirty digits of C(4, 1) at bound 1e7, frozen from a standalone
        # sieve + mpmath@50 script; guards against ambient-precision leaks
        # anywhere between the kernels and the output formatter
        assert main([
            "compute", "--q", "4", "--a", "1", "--prime-bound", "10000000", "--json",
        ]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["C"].startswith("1.2923041590217424639995085182")

    def test_direct_method_probe(self, capsys):
        assert main([
            "compute", "--q", "4", "--a", "1", "--prime-bound", "100000",
            "--method", "both",
        ]) == EXIT_OK
        out = capsys.readouterr().out
        assert "direct-asymptotic probe" in out

    def test_degenerate_q_exits_2(self, capsys):
        assert main(["compute", "--q", "2", "--a", "1"]) == EXIT_USAGE
        assert "q must be >= 3" in capsys.readouterr().err

    def test_non_unit_exits_2(self, capsys):
        assert main(["compute", "--q", "8", "--a", "6"]) == EXIT_USAGE

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["compute", "--q", "4", "--a", "1", "--frобn"])
        assert exc.value.code == 2


class TestGroupInfo:
    def test_mod15_report(self, capsys):
        assert main(["group-info", "--q", "15"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "phi = 8, lambda = 4" in out
        assert "A(15) = [4, 11, 14]" in out

    def test_mod5_orbit_data(self, capsys):
        assert main(["group-info", "--q", "5"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "B(5, 2) = {3: (s=3, t=4)}" in out

    def test_mod8_empty_nonmaximal(self, capsys):
        assert main(["group-info", "--q", "8"]) == EXIT_OK
        assert "A(8) = {}" in capsys.readouterr().out

    def test_bad_q_exits_2(self):
        assert main(["group-info", "--q", "1"]) == EXIT_USAGE


class TestVerifyCommand:
    def test_fts_suite_passes(self, capsys):
        assert main(["verify", "fts"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "[PASS]" in out and "FAIL" not in out

    def test_pi_values_suite_passes(self, capsys):
        assert main(["verify", "pi-values"]) == EXIT_OK

    def test_unknown_suite_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "everything"])
        assert exc.value.code == 2


class TestExitCodes:
    def test_verification_failure_exits_1(self, capsys, monkeypatch):
        import mertensap.cli as cli_mod

        monkeypatch.setattr(
            cli_mod, "pi_closed_form", lambda q, precision=30: mp_broken(q)
        )
        assert main(["verify", "pi-values"]) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_internal_violation_exits_3(self, capsys, monkeypatch):
        import mertensap.cli as cli_mod
        from mertensap.errors import NonRealResultError

        def boom(*args, **kwargs):
            raise NonRealResultError("forced for the exit-code contract")

        monkeypatch.setattr(cli_mod, "big_C", boom)
        assert main(["compute", "--q", "4", "--a", "1"]) == 3
        assert "identity violation" in capsys.readouterr().err


def mp_broken(q):
    import mpmath as mp

    return mp.mpf(q)  # deliberately wrong closed form


class TestCacheFile:
    def run_compute(self, capsys, tmp_path):
        code = main([
            "compute", "--q", "5", "--a", "4", "--prime-bound", "10000",
            "--json", "--cache-dir", str(tmp_path),
        ])
        assert code == EXIT_OK
        return capsys.readouterr().out

    def test_cold_and_warm_runs_identical(self, capsys, tmp_path):
        cold = self.run_compute(capsys, tmp_path)
        assert (tmp_path / cache_mod.CACHE_FILENAME).exists()
        warm = self.run_compute(capsys, tmp_path)
        assert cold == warm

    def test_header_and_layout(self, capsys, tmp_path):
        main([
            "compute", "--q", "4", "--a", "1", "--prime-bound", "10000",
            "--cache-dir", str(tmp_path),
        ])
        capsys.readouterr()
        lines = (tmp_path / cache_mod.CACHE_FILENAME).read_text().splitlines()
        assert lines[0] == "MERTENSAP-CACHE v1"
        for line in lines[1:]:
            fields = line.split("\t")
            assert len(fields) == 10
            assert fields[0] == "1"
            assert fields[3] in ("class-product", "meissel-B", "l-value")

    def test_version_mismatch_ignored(self, tmp_path):
        path = tmp_path / cache_mod.CACHE_FILENAME
        path.write_text(
            "MERTENSAP-CACHE v1\n"
            "2\t4\t1\tclass-product\t2\t1\t10000\t30\t0.5\t0.1\n"
            "1\t4\t1\tclass-product\t2\t1\t10000\t30\t0.5\t0.1\n"
        )
        store = cache_mod.CacheStore(tmp_path)
        assert len(store) == 1

    def test_corrupt_lines_ignored(self, tmp_path):
        path = tmp_path / cache_mod.CACHE_FILENAME
        path.write_text(
            "MERTENSAP-CACHE v1\n"
            "not a record\n"
            "1\t4\t1\tclass-product\t2\t1\t10000\t30\tnot-a-number\t0.1\n"
            "1\t4\t1\tclass-product\t2\t1\t10000\t30\t0.5\t-0.1\n"
            "1\t4\t1\tbad-kind\t2\t1\t10000\t30\t0.5\t0.1\n"
            "1\t4\t1\tmeissel-B\t0\t0\t10000\t30\t-0.09\t0.0001\n"
        )
        store = cache_mod.CacheStore(tmp_path)
        assert len(store) == 1

    def test_wrong_header_ignored_entirely(self, tmp_path):
        path = tmp_path / cache_mod.CACHE_FILENAME
        path.write_text("SOMETHING ELSE\n1\t4\t1\tmeissel-B\t0\t0\t1000\t30\t0.1\t0.2\n")
        assert len(cache_mod.CacheStore(tmp_path)) == 0

    def test_l_value_records_written(self, capsys, tmp_path):
        self.run_compute(capsys, tmp_path)
        kinds = set()
        for line in (tmp_path / cache_mod.CACHE_FILENAME).read_text().splitlines()[1:]:
            kinds.add(line.split("\t")[3])
        assert "l-value" in kinds
        assert "meissel-B" in kinds

    def test_cache_subcommand(self, capsys, tmp_path):
        self.run_compute(capsys, tmp_path)
        assert main(["cache", "info", "--cache-dir", str(tmp_path)]) == EXIT_OK
        assert "records" in capsys.readouterr().out
        assert main(["cache", "list", "--cache-dir", str(tmp_path)]) == EXIT_OK
        assert "meissel-B" in capsys.readouterr().out
        assert main(["cache", "clear", "--cache-dir", str(tmp_path)]) == EXIT_OK
        capsys.readouterr()
        assert main(["cache", "info", "--cache-dir", str(tmp_path)]) == EXIT_OK
        assert "records    : 0" in capsys.readouterr().out

    def test_cache_without_dir_exits_2(self, capsys, monkeypatch):
        monkeypatch.delenv(cache_mod.ENV_CACHE_DIR, raising=False)
        assert main(["cache", "info"]) == EXIT_USAGE

    def test_env_var_default(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(cache_mod.ENV_CACHE_DIR, str(tmp_path))
        main(["compute", "--q", "4", "--a", "1", "--prime-bound", "10000"])
        capsys.readouterr()
        assert (tmp_path / cache_mod.CACHE_FILENAME).exists()
