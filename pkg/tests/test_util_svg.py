import xml.etree.ElementTree as ET

import numpy as np
import pytest

from topogate.svg import bar_chart, line_plot
from topogate.util import atomic_write_text, sha256_file


class TestAtomicWrite:
    def test_writes_and_replaces(self, tmp_path):
        path = tmp_path / "file.txt"
        atomic_write_text(path, "first\n")
        atomic_write_text(path, "second\n")
        assert path.read_text() == "second\n"
        assert list(tmp_path.iterdir()) == [path]

    def test_sha256_is_stable(self, tmp_path):
        path = tmp_path / "file.txt"
        atomic_write_text(path, "payload")
        assert sha256_file(path) == sha256_file(path)
        assert len(sha256_file(path)) == 64


class TestLinePlot:
    def test_produces_valid_svg(self, tmp_path):
        path = tmp_path / "plot.svg"
        x = np.linspace(0.0, 1.0, 20)
        line_plot(path, x, {"a": np.sin(x), "b": np.cos(x)}, title="t", xlabel="x", ylabel="y")
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")
        assert path.read_text().count("<polyline") == 2

    def test_rejects_length_mismatch(self, tmp_path):
        with pytest.raises(ValueError):
            line_plot(tmp_path / "plot.svg", [0.0, 1.0], {"a": [1.0, 2.0, 3.0]})


class TestBarChart:
    def test_produces_valid_svg_with_errors(self, tmp_path):
        path = tmp_path / "bars.svg"
        bar_chart(path, ["a", "b", "c"], [0.5, 0.2, 0.9], errors=[0.1, 0.0, 0.05], title="t")
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")
        assert path.read_text().count("<rect") >= 3

    def test_rejects_mismatched_errors(self, tmp_path):
        with pytest.raises(ValueError):
            bar_chart(tmp_path / "bars.svg", ["a"], [1.0], errors=[0.1, 0.2])
