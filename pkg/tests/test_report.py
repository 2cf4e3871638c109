import io
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from chernoff import report


def test_csv_roundtrip_and_digits(tmp_path):
    x = np.array([1 / 3, -2.5e-17, 12345.678901234567])
    path = report.write_csv(tmp_path / "a.csv", {"x": x, "y": 2 * x})
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y"
    assert len(lines) == 4
    mant = lines[1].split(",")[0].replace("0.", "", 1).lstrip("0")
    assert len(mant) >= 12
    back = report.read_csv(path)
    assert np.allclose(back["x"], x, rtol=1e-14)


def test_csv_rejects_ragged():
    with pytest.raises(ValueError):
        report.write_csv(None, {"a": [1, 2], "b": [1]})


def test_csv_to_stream():
    buf = io.StringIO()
    report.write_csv("-", {"a": [0.1]}, stream=buf)
    assert buf.getvalue() == "a\n0.1\n"


def test_json_handles_numpy_and_nonfinite():
    text = report.write_json(None, {"a": np.float64(1.5), "b": np.array([1, 2]), "c": float("nan"),
                                    "d": np.bool_(True)})
    data = json.loads(text)
    assert data == {"a": 1.5, "b": [1, 2], "c": "nan", "d": True}


def test_svg_is_wellformed(tmp_path):
    x = np.linspace(0, 1, 50)
    path = report.write_svg(tmp_path / "p.svg", x, {"s": np.sin(x), "c": np.cos(x)}, title="t")
    root = ET.parse(path).getroot()
    lines = [el for el in root.iter() if el.tag.endswith("polyline")]
    assert len(lines) == 2
