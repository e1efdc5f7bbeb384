import json
import logging
import math
import os
import tempfile
import threading
import unittest
from unittest import mock

import numpy as np

from src.reporting.report_generator import ReportGenerator
from src.utils.exceptions import ConfigLoadError, SpecFormatError
from src.utils.file_manager import dumps_report, load_json, render_csv, to_jsonable, write_text
from src.utils.logger import setup_logger
from src.utils.resources import Resources
from src.utils.workers import WORKERS_ENV_VAR, WorkerPool, default_workers, get_pool


class TestFileManager(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_load_missing_file(self):
        with self.assertRaises(ConfigLoadError):
            load_json(os.path.join(self.tmp.name, "absent.json"))

    def test_load_non_object(self):
        path = os.path.join(self.tmp.name, "list.json")
        with open(path, 'w', encoding='utf-8') as f:
            f.write("[1, 2]")
        with self.assertRaises(SpecFormatError):
            load_json(path)

    def test_jsonable_values(self):
        value = to_jsonable({"z": 1 + 2j, "a": np.array([0.5, np.nan]), "k": np.int64(3), "b": np.bool_(True)})
        self.assertEqual(value, {"z": [1.0, 2.0], "a": [0.5, None], "k": 3, "b": True})

    def test_dumps_is_stable(self):
        text = dumps_report({"b": 0.1, "a": [1, 2]})
        self.assertTrue(text.endswith("\n"))
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertEqual(json.loads(text)["b"], 0.1)

    def test_write_text_creates_directory(self):
        path = write_text(os.path.join(self.tmp.name, "nested", "report.json"), dumps_report({"x": math.pi}))
        self.assertEqual(load_json(path)["x"], math.pi)
        self.assertIsNone(write_text(None, "text"))

    def test_csv_keeps_full_precision(self):
        text = render_csv(("period", "value", "flag"), [[1, 1.0 / 3.0, False]])
        self.assertEqual(text.splitlines()[1], "1,0.33333333333333331,false")
        self.assertEqual(float(text.splitlines()[1].split(",")[1]), 1.0 / 3.0)


class TestLogger(unittest.TestCase):

    def test_handlers_are_not_duplicated(self):
        first = setup_logger("pressurelab-test")
        second = setup_logger("pressurelab-test", level=logging.DEBUG)
        self.assertIs(first, second)
        self.assertEqual(len(second.handlers), 1)
        self.assertEqual(second.level, logging.DEBUG)
        for handler in list(second.handlers):
            second.removeHandler(handler)


class TestWorkers(unittest.TestCase):

    def test_order_is_preserved(self):
        with WorkerPool(4) as pool:
            self.assertEqual(pool.map_ordered(lambda x: x * x, range(50)), [x * x for x in range(50)])

    def test_single_worker_runs_inline(self):
        seen = []
        WorkerPool(1).map_ordered(lambda x: seen.append(threading.current_thread()), [1, 2])
        self.assertTrue(all(t is threading.main_thread() for t in seen))

    def test_environment_overrides_cpu_count(self):
        with mock.patch.dict(os.environ, {WORKERS_ENV_VAR: "3"}):
            self.assertEqual(default_workers(), 3)
        with mock.patch.dict(os.environ, {WORKERS_ENV_VAR: "x"}):
            self.assertGreaterEqual(default_workers(), 1)

    def test_shared_pool(self):
        self.assertEqual(get_pool(1).workers, 1)
        self.assertIs(get_pool(2), get_pool(2))


class TestReportGenerator(unittest.TestCase):

    def test_format_complex(self):
        self.assertEqual(ReportGenerator.format_complex([1.5, -0.25]), "1.5-0.25i")
        self.assertEqual(ReportGenerator.format_complex([None, 1.0]), "—")

    def test_fallback_template(self):
        report = {"command": "unknown", "status": "ok", "config": {"tol": 1e-4}, "result": {"x": 1}}
        text = ReportGenerator().render(report)
        self.assertTrue(text.startswith("pressurelab unknown: ok"))

    def test_templates_exist(self):
        for name in ("pressure", "dimension", "norm", "scan", "cycles", "order", "involution"):
            self.assertTrue(os.path.exists(Resources.get_template_path(f"{name}.txt")))


if __name__ == '__main__':
    unittest.main()
