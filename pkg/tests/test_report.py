import json

import numpy as np

from lossy_estimator import report


class TestFormatValue:
    def test_none_is_empty(self):
        assert report.format_value(None) == ""

    def test_floats_round_trip(self):
        for x in (0.1, 1 / 3, 2.0, 1e-17, 3.141592653589793):
            text = report.format_value(x)
            assert float(text) == x

    def test_shortest_rendering(self):
        assert report.format_value(0.02) == "0.02"
        assert report.format_value(2.0) == "2.0"

    def test_ints_and_numpy_scalars(self):
        assert report.format_value(3) == "3"
        assert report.format_value(np.int64(4)) == "4"
        assert report.format_value(np.float64(0.5)) == "0.5"
        assert report.format_value(True) == "true"


class TestTableText:
    def test_layout(self):
        text = report.table_text(
            {"command": "demo", "chi": 0.5}, ["a", "b"], [(1.0, None), (0.25, "x")]
        )
        assert text == "# command=demo\n# chi=0.5\na,b\n1.0,\n0.25,x\n"

    def test_lf_only(self):
        text = report.table_text({}, ["a"], [(1,)])
        assert "\r" not in text
        assert text.endswith("\n")

    def test_write_text_bytes(self, tmp_path):
        path = tmp_path / "t.csv"
        report.write_text(path, report.table_text({"k": 1}, ["a"], [(0.5,)]))
        assert path.read_bytes() == b"# k=1\na\n0.5\n"


class TestJsonText:
    def test_numpy_types_scrubbed(self):
        payload = {
            "grid": np.array([0.0, 0.5]),
            "count": np.int64(2),
            "value": np.float64(0.25),
            "missing": None,
        }
        parsed = json.loads(report.json_text(payload))
        assert parsed == {"grid": [0.0, 0.5], "count": 2, "value": 0.25, "missing": None}

    def test_trailing_newline(self):
        assert report.json_text({"a": 1}).endswith("\n")


def test_render_surface_writes_png(tmp_path):
    path = tmp_path / "surface.png"
    x = np.linspace(0, 1, 5)
    y = np.linspace(0, 2, 7)
    z = np.outer(y, x)
    report.render_surface(path, x, y, z, xlabel="x", ylabel="y", title="demo")
    assert path.stat().st_size > 0
    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
