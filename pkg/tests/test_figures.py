import numpy as np

from chernoff import figures
from chernoff.report import read_csv


def test_emit_and_check(tmp_path, dist1):
    paths = figures.emit_figures(tmp_path, dist=dist1, svg=True)
    assert sorted(paths) == ["fig1", "fig2", "fig3", "fig4"]
    assert all((tmp_path / f"fig{i}.svg").exists() for i in range(1, 5))
    checks = figures.check_figures(tmp_path)
    assert all(c.passed for c in checks), checks
    f2 = read_csv(tmp_path / "fig2.csv")
    assert f2["t"][np.argmax(f2["f"])] == 0.0
    f4 = read_csv(tmp_path / "fig4.csv")
    assert abs(f4["w"].min() - 3.4052) < 1e-3
