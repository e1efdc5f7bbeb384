import io
import json
import math
import os
import tempfile
import unittest
from unittest import mock

from src.controllers.command_controller import CommandController, ExitCode
from src.controllers.run_config import RunConfig
from src.main import main
from src.utils.exceptions import ConfigError
from src.utils.file_manager import dumps_report

FULL_SHIFT = {"spec": {"n": 2, "A": [[1, 1], [1, 1]]}}
BERNOULLI = {
    "spec": {"n": 2, "A": [[1, 1], [1, 1]]},
    "potential": {"type": "cylinder", "depth": 1, "values": [math.log(0.3), math.log(0.7)]},
    "observable": {"type": "cylinder", "depth": 1, "values": [0.7, -0.3]},
}
SQUARE = {"type": "poly", "coeffs": [0, 0, 1]}
GENERIC_POINT = {"type": "qb", "a": [[0.3, 0.1]], "b": [0.2]}


class ControllerTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name, data):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(data if isinstance(data, str) else json.dumps(data))
        return path

    def run_command(self, command, data, **flags):
        flags.setdefault("workers", 1)
        config = RunConfig.resolve(command, {"input": self.write("input.json", data), **flags}, environ={})
        return CommandController(config).run()

    def run_main(self, argv):
        with mock.patch('sys.stdout', new_callable=io.StringIO) as out:
            code = main(argv)
        return code, out.getvalue()


class TestRunConfig(ControllerTestCase):

    def test_defaults(self):
        config = RunConfig.resolve("dimension", {"input": "f.json"}, environ={})
        self.assertEqual(config.format, "json")
        self.assertEqual(config.estimator, "zeta")
        self.assertEqual(config.tol, 1e-4)

    def test_priority(self):
        path = self.write("config.json", {"tol": 1e-3, "grid": 16, "workers": 2})
        config = RunConfig.resolve("scan", {"input": "p.json", "tol": 1e-2}, path,
                                   environ={"PRESSURELAB_WORKERS": "3"})
        self.assertEqual(config.tol, 1e-2)
        self.assertEqual(config.grid, 16)
        self.assertEqual(config.workers, 3)

    def test_unknown_config_key(self):
        path = self.write("config.json", {"tolerance": 1e-3})
        with self.assertRaises(ConfigError):
            RunConfig.resolve("scan", {"input": "p.json"}, path, environ={})

    def test_bad_workers_variable(self):
        with self.assertRaises(ConfigError):
            RunConfig.resolve("scan", {"input": "p.json"}, environ={"PRESSURELAB_WORKERS": "many"})

    def test_ranges(self):
        for flags in ({"period_max": 0}, {"tol": 2.0}, {"h": 1.0}, {"grid": 0}, {"t_max": 0.0}):
            with self.subTest(flags=flags), self.assertRaises(ConfigError):
                RunConfig.resolve("scan", {"input": "p.json", **flags}, environ={})

    def test_input_is_required(self):
        with self.assertRaises(ConfigError):
            RunConfig.resolve("pressure", {}, environ={})

    def test_report_config_omits_logging(self):
        config = RunConfig.resolve("norm", {"input": "p.json", "verbose": True}, environ={})
        self.assertNotIn("verbose", config.to_dict())
        self.assertNotIn("workers", config.to_dict())
        self.assertEqual(config.to_dict()["command"], "norm")


class TestCommands(ControllerTestCase):

    def test_pressure_of_full_shift(self):
        outcome = self.run_command("pressure", FULL_SHIFT, period_max=6)
        self.assertAlmostEqual(outcome.report["result"]["pressure"], math.log(2.0), delta=1e-10)
        self.assertEqual(outcome.header, ("period", "pressure"))
        self.assertEqual([r[0] for r in outcome.rows], [2, 3, 4, 5, 6])

    def test_pressure_with_observable(self):
        result = self.run_command("pressure", BERNOULLI, period_max=8).report["result"]
        self.assertAlmostEqual(result["pressure"], 0.0, delta=1e-12)
        self.assertAlmostEqual(result["observable"]["variance"], 0.21, delta=1e-10)
        self.assertAlmostEqual(result["observable"]["cohomology_defect"], 0.7, delta=1e-12)

    def test_matrix_pressure(self):
        golden = {"spec": {"n": 2, "A": [[1, 1], [1, 0]]}}
        result = self.run_command("pressure", golden, period_max=8, estimator="matrix").report["result"]
        self.assertAlmostEqual(result["matrix_pressure"], math.log((1.0 + math.sqrt(5.0)) / 2.0), delta=1e-8)

    def test_matrix_estimator_needs_subshift(self):
        with self.assertRaises(ConfigError):
            self.run_command("dimension", SQUARE, period_max=4, estimator="matrix")

    def test_dimension_of_square(self):
        outcome = self.run_command("dimension", SQUARE, period_max=8)
        self.assertAlmostEqual(outcome.report["result"]["dimension"]["delta"], 1.0, delta=1e-8)
        self.assertEqual([r[0] for r in outcome.rows], [3, 4, 5, 6, 7, 8])

    def test_cycles(self):
        outcome = self.run_command("cycles", SQUARE, period_max=3)
        self.assertEqual(outcome.report["result"]["cycle_count"], 3)
        self.assertEqual(outcome.report["result"]["point_count"], 7)
        self.assertTrue(all(row[-1] for row in outcome.rows))

    def test_scan_along_path(self):
        path = {"type": "tangent", "at": {"a": [0.5], "b": [0.5]}, "dir": {"da": [[0, 1]], "db": [[0, 1]]}}
        outcome = self.run_command("scan", path, period_max=5)
        self.assertEqual(outcome.exit_code, ExitCode.OK)
        self.assertEqual(outcome.report["status"], "degenerate")

    def test_involution(self):
        outcome = self.run_command("involution", GENERIC_POINT, period_max=6)
        result = outcome.report["result"]
        self.assertEqual(outcome.exit_code, ExitCode.OK)
        self.assertFalse(result["fixed_by_involution"])
        self.assertEqual(result["unmatched"], [])
        self.assertEqual(result["cycle_count"], result["image_cycle_count"])
        self.assertLessEqual(result["max_deviation"], 1e-8)

    def test_order_is_grid_stable(self):
        outcome = self.run_command("order", GENERIC_POINT)
        result = outcome.report["result"]
        self.assertEqual(outcome.exit_code, ExitCode.OK)
        self.assertTrue(result["grid_stable"])
        self.assertEqual(result["refined_class_index"], result["marking"]["class_index"])

    def test_report_does_not_depend_on_workers(self):
        reports = [dumps_report(self.run_command("dimension", SQUARE, period_max=8, workers=w).report)
                   for w in (1, 8)]
        self.assertEqual(reports[0], reports[1])
        reports = [dumps_report(self.run_command("involution", GENERIC_POINT, period_max=5, workers=w).report)
                   for w in (1, 8)]
        self.assertEqual(reports[0], reports[1])


class TestMain(ControllerTestCase):

    def test_json_output(self):
        code, out = self.run_main(["pressure", "--input", self.write("in.json", FULL_SHIFT),
                                   "--period-max", "5", "--workers", "1"])
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual(report["command"], "pressure")
        self.assertEqual(report["config"]["period_max"], 5)
        self.assertTrue(out.endswith("\n"))

    def test_csv_output(self):
        code, out = self.run_main(["cycles", "--input", self.write("in.json", SQUARE), "--period-max", "2",
                                   "--format", "csv", "--workers", "1"])
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], "period,re_z0,im_z0,re_lambda,im_lambda,repelling")
        self.assertEqual(len(lines), 3)

    def test_text_output(self):
        code, out = self.run_main(["dimension", "--input", self.write("in.json", SQUARE), "--period-max", "4",
                                   "--format", "text", "--workers", "1"])
        self.assertEqual(code, 0)
        self.assertIn("pressurelab dimension: ok", out)
        self.assertIn("δ = ", out)

    def test_output_file(self):
        target = os.path.join(self.tmp.name, "out", "report.json")
        code, out = self.run_main(["pressure", "--input", self.write("in.json", FULL_SHIFT),
                                   "--period-max", "4", "--output", target, "--workers", "1"])
        self.assertEqual(code, 0)
        self.assertEqual(out, "")
        with open(target, encoding='utf-8') as f:
            self.assertEqual(json.load(f)["status"], "ok")

    def test_missing_input_file(self):
        code, _ = self.run_main(["pressure", "--input", os.path.join(self.tmp.name, "absent.json")])
        self.assertEqual(code, int(ExitCode.BAD_INPUT))

    def test_malformed_json(self):
        code, _ = self.run_main(["dimension", "--input", self.write("in.json", "{not json")])
        self.assertEqual(code, int(ExitCode.BAD_INPUT))

    def test_malformed_subshift(self):
        bad = {"spec": {"n": 2, "A": [[0, 0], [1, 1]]}}
        code, _ = self.run_main(["pressure", "--input", self.write("in.json", bad), "--workers", "1"])
        self.assertEqual(code, int(ExitCode.BAD_INPUT))


if __name__ == '__main__':
    unittest.main()
