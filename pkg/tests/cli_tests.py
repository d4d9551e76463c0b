#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Copyright 2024 Google LLC

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""
"""Command line test suite
"""

# OS Imports
import json
import logging
import os

import pandas as pd
import pytest

# Package to test
from orbifold_resolution_cli import cli
from orbifoldutils.resolution import resolution_operations
from orbifoldutils.resolution.reports import RunReport

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


class TestProfileCommand:
    def test_hopf_profile(self, tmp_path):
        code = cli.main(["profile", "--m-minus", "1", "--m-plus", "1", "--grid", "65", "--out-dir", str(tmp_path)])
        assert code == 0
        table = pd.read_csv(tmp_path / "profile_1_1.csv")
        assert list(table.columns) == ["theta", "R", "dR", "ddR", "sec"]
        assert len(table) == 65
        assert (table["sec"] - 4.0).abs().max() <= 1e-12
        report = RunReport.model_validate_json((tmp_path / "profile_report.json").read_text())
        assert report.command == "profile"
        assert report.profile.rows == 65
        assert report.profile.slope_at_zero == pytest.approx(1.0)

    def test_csv_format(self, tmp_path):
        cli.main(["profile", "--m-minus", "2", "--m-plus", "3", "--grid", "9", "--out-dir", str(tmp_path)])
        raw = (tmp_path / "profile_2_3.csv").read_bytes()
        assert raw.count(b"\r\n") == 10
        assert b"0.78539816339744828" in raw
        assert not [name for name in os.listdir(tmp_path) if name.endswith(".tmp")]

    def test_config_file(self, tmp_path):
        config = tmp_path / "run.toml"
        config.write_text('m_minus = 1\nm_plus = 2\ngrid = 17\nout_dir = "ignored"\n')
        code = cli.main(["profile", "--config", str(config), "--out-dir", str(tmp_path)])
        assert code == 0
        assert len(pd.read_csv(tmp_path / "profile_1_2.csv")) == 17

    def test_flags_override_config(self, tmp_path):
        config = tmp_path / "run.toml"
        config.write_text("m_minus = 3\ntau = 0.2\n")
        args = cli._get_input_arguments(["resolve", "--config", str(config), "--m-minus", "4"])
        run = cli.build_config(args)
        assert run.m_minus == 4
        assert run.tau == 0.2


class TestValidation:
    @pytest.mark.parametrize(
        "argv",
        [
            ["profile", "--m-minus", "0"],
            ["resolve", "--tau", "1.0"],
            ["resolve", "--delta-ladder", "1e-3", "1e-2"],
            ["gh", "--tau-ladder", "0.9"],
            ["resolve", "--weight-mode", "doubled"],
            ["verify", "curvature"],
        ],
    )
    def test_exit_code(self, argv, tmp_path):
        assert cli.main(argv + ["--out-dir", str(tmp_path)]) == 2

    def test_coarse_gh_grid_warns(self, caplog):
        args = cli._get_input_arguments(["gh", "--gh-grid", "16"])
        with caplog.at_level(logging.WARNING):
            run = cli.build_config(args)
        assert run.gh_grid == 16
        assert "GH grid 16 is below 32" in caplog.text

    def test_fine_gh_grid_is_quiet(self, caplog):
        args = cli._get_input_arguments(["gh", "--gh-grid", "64"])
        with caplog.at_level(logging.WARNING):
            cli.build_config(args)
        assert "is below" not in caplog.text

    def test_unknown_config_key(self, tmp_path):
        config = tmp_path / "run.toml"
        config.write_text("resolution = 3\n")
        assert cli.main(["profile", "--config", str(config)]) == 2


class TestResolveCommand:
    def test_witness(self, tmp_path):
        code = cli.main(["resolve", "--m-minus", "2", "--m-plus", "3", "--tau", "0.3", "--out-dir", str(tmp_path)])
        assert code == 0
        report = RunReport.model_validate_json((tmp_path / "resolve_report.json").read_text())
        assert report.witness.min_curvature >= 1.01
        assert report.certificate.certified
        assert report.passed
        table = pd.read_csv(tmp_path / "resolve_2_3_0.3.csv")
        assert {"theta", "R", "sec"} <= set(table.columns)

    def test_smooth_tip(self, tmp_path):
        code = cli.main(["resolve", "--m-minus", "1", "--m-plus", "1", "--out-dir", str(tmp_path)])
        assert code == 0
        report = RunReport.model_validate_json((tmp_path / "resolve_report.json").read_text())
        assert report.witness.weight == 0.0
        assert report.witness.min_curvature == pytest.approx(4.0, abs=1e-6)

    def test_witness_not_found(self, tmp_path, monkeypatch):
        monkeypatch.setitem(resolution_operations.constants["ETA"], "WITNESS_CURVATURE_FLOOR", 1e6)
        argv = ["resolve", "--tau", "0.3", "--delta-ladder", "1e-2", "--out-dir", str(tmp_path)]
        assert cli.main(argv) == 3
        failed = RunReport.model_validate_json((tmp_path / "resolve_2_3_0.3.json").read_text())
        assert not failed.passed
        assert [check.name for check in failed.checks] == ["witness_0.01"]


class TestVerifyCommand:
    def test_lists_suites(self, capsys):
        assert cli.main(["verify"]) == 0
        assert capsys.readouterr().out.split() == sorted(cli.SUITES)

    def test_gluing_suite(self, tmp_path):
        assert cli.main(["verify", "gluing", "--out-dir", str(tmp_path)]) == 0
        report = RunReport.model_validate_json((tmp_path / "verify_gluing.json").read_text())
        assert len(report.checks) == 5 + len(resolution_operations.constants["GLUING"]["CAP_EPS_LADDER"])
        assert report.passed

    def test_oracle_suite(self, tmp_path):
        assert cli.main(["verify", "oracle", "--out-dir", str(tmp_path)]) == 0
        report = RunReport.model_validate_json((tmp_path / "verify_oracle.json").read_text())
        checks = {check.name: check for check in report.checks}
        assert checks["ball_symmetry_sampled"].passed
        assert report.passed

    def test_gh_suite(self, tmp_path):
        assert cli.main(["verify", "gh", "--gh-grid", "64", "--out-dir", str(tmp_path)]) == 0
        report = RunReport.model_validate_json((tmp_path / "verify_gh.json").read_text())
        assert [check.name for check in report.checks] == ["hopf_tip_distance", "hopf_triangle"]

    def test_tube_suite(self, tmp_path):
        assert cli.main(["verify", "tube", "--out-dir", str(tmp_path)]) == 0
        report = RunReport.model_validate_json((tmp_path / "verify_tube.json").read_text())
        names = [check.name for check in report.checks]
        assert {"monotonicity", "block_structure", "zeta_finite", "tau0", "psi_seams"} <= set(names)
        assert report.passed

    def test_resolver_suite(self, tmp_path):
        assert cli.main(["verify", "resolver", "--out-dir", str(tmp_path)]) == 0
        report = RunReport.model_validate_json((tmp_path / "verify_resolver.json").read_text())
        checks = {check.name: check for check in report.checks}
        assert checks["witness_2_3"].value >= 1.01
        assert checks["certificate_2_3"].passed
        assert checks["smooth_tip_1_1"].passed
        assert report.passed

    def test_oracle_disagreement(self, tmp_path, monkeypatch):
        monkeypatch.setitem(cli.SUITES, "oracle", lambda client, config: [cli._check("forced", 1.0, 0.0)])
        assert cli.main(["verify", "oracle", "--out-dir", str(tmp_path)]) == 4
        report = RunReport.model_validate_json((tmp_path / "verify_oracle.json").read_text())
        assert not report.passed


class TestSchemaCommand:
    def test_prints_schema(self, capsys):
        assert cli.main(["schema"]) == 0
        schema = json.loads(capsys.readouterr().out)
        assert set(schema["properties"]) == set(RunReport.model_fields)

    def test_shipped_schema_matches(self):
        with open(os.path.join(ROOT, "docs", "report_schema.json"), encoding="utf-8") as handle:
            shipped = json.load(handle)
        assert set(shipped["properties"]) == set(RunReport.model_fields)
        assert shipped["title"] == "RunReport"
