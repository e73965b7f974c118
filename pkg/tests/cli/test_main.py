import json

import pytest

from src.cli.main import build_parser, main
from src.engine.errors import PositivityError


class TestParser:
    def test_subcommands(self):
        parser = build_parser()
        args = parser.parse_args(["run", "--scheme", "yee", "--t-end", "0.5", "--mach", "0.1"])
        assert args.subcommand == "run"
        assert args.t_end == 0.5
        assert args.mach == [0.1]

    def test_unknown_scheme(self):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["run", "--scheme", "leapfrog"])
        assert exc.value.code == 2


class TestMain:
    def test_cases(self, tmp_path, capsys):
        assert main(["cases", "--out", str(tmp_path)]) == 0
        assert "gresho" in capsys.readouterr().out
        assert (tmp_path / "cases.csv").exists()
        assert (tmp_path / "manifest.json").exists()

    def test_run_writes_outputs(self, tmp_path):
        code = main(["run", "--scheme", "yee", "--nx", "8", "--t-end", "0.05",
                     "--out", str(tmp_path)])
        assert code == 0
        files = {e["path"] for e in json.loads((tmp_path / "manifest.json").read_text())["files"]}
        assert {"config.txt", "energy.csv", "energy.plt"} <= files
        assert any(name.startswith("fields_final") for name in files)

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("scheme = central\nnx = 8\nt_end = 0.05\n", encoding="utf-8")
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        assert "scheme = central" in (out / "config.txt").read_text()

    def test_bad_config_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("scheme = yee\ncfl = -1\n", encoding="utf-8")
        with pytest.raises(SystemExit) as exc:
            main(["run", "--config", str(cfg), "--out", str(tmp_path)])
        assert exc.value.code == 2
        assert "bad.cfg:2" in capsys.readouterr().err

    def test_missing_scheme_exits_2(self, tmp_path):
        assert main(["run", "--out", str(tmp_path)]) == 2

    def test_out_of_range_cfl_exits_2(self, tmp_path):
        code = main(["run", "--case", "sod", "--nx", "20", "--cfl", "5", "--t-end", "0.2",
                     "--out", str(tmp_path)])
        assert code == 2

    def test_solver_failure_exits_1(self, tmp_path, monkeypatch):
        def fail(config):
            raise PositivityError("negative density in cell (3, 1)")

        monkeypatch.setattr("src.cli.main.execute", fail)
        assert main(["run", "--scheme", "yee", "--out", str(tmp_path)]) == 1
        assert not (tmp_path / "manifest.json").exists()
