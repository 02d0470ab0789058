import itertools
import os
import subprocess

import numpy as np
import pandas as pd
import pytest

from figures import RECIPES
from figures.cli import main
from figures.schema import OBSERVABLES, PARAMS, SCHEMAS


def observable_table(extra=None, **grid):
    """Synthetic long-format observable table over the outer product of `grid`."""
    extra = extra or {}
    keys = list(grid)
    rows = []
    for point, combo in enumerate(itertools.product(*grid.values())):
        p = dict(zip(keys, combo))
        for t in np.linspace(0, 2, 9):
            xi2 = 1 / (1 + t) + 0.05 * t * t + 0.01 * p.get("epsilon", 0)
            row = {c: 0.0 for c in PARAMS + list(extra) + OBSERVABLES}
            row.update(point=point, dim=p.get("dim", 1), L=8, N=8, alpha=p.get("alpha", 3), chi=p.get("chi", 1.0),
                       epsilon=p.get("epsilon", 0.0), realization=p.get("realization", 0), t=t, xi2=xi2,
                       qfi_sens=0.8 * xi2, valid=1)
            row.update({k: p.get(k, v) for k, v in extra.items()})
            rows.append(row)
    return pd.DataFrame(rows)


def correlator_table():
    rows = []
    for chi in (0.01, 0.1, 1.0):
        for t in (0.0, 1 / chi):
            for rx, ry in itertools.product(range(5), range(5)):
                rows.append(dict(point=0, dim=2, L=8, N=64, alpha=3, chi=chi, epsilon=0, realization=0, t=t,
                                 r_x=rx, r_y=ry, C_min=-np.exp(-rx / (1 + 10 * chi)), C_max=np.exp(-rx * chi)))
    return pd.DataFrame(rows, columns=SCHEMAS["spinwave_correlators.csv"])


@pytest.fixture
def data(tmp_path):
    d = tmp_path / "data"
    d.mkdir()
    observable_table(dim=[1, 2], alpha=[0, 3, 6], chi=[0.1, 1.0, float("inf")]).to_csv(d / "dtwa.csv", index=False)
    observable_table(extra={"delta": 0.0, "dt_step": 0.1}, delta=[0.0, float("inf")], chi=[0.1],
                     dt_step=[0.1, 0.2, 0.4]).to_csv(d / "floquet.csv", index=False)
    correlator_table().to_csv(d / "spinwave_correlators.csv", index=False)
    return d


def test_list(capsys):
    assert main(["--list"]) == 0
    names = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert names == list(RECIPES)


@pytest.mark.parametrize("name", list(RECIPES))
def test_render_is_reproducible(name, data, tmp_path):
    assert main(["--recipe", name, "--data", str(data), "--out", str(tmp_path / "a")]) == 0
    assert main(["--recipe", name, "--data", str(data), "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / f"{name}.png").read_bytes()
    assert a[:8] == b"\x89PNG\r\n\x1a\n"
    assert a == (tmp_path / "b" / f"{name}.png").read_bytes()


def test_missing_overlay_is_skipped(data, tmp_path, capsys):
    assert main(["--recipe", "fig2a", "--data", str(data), "--out", str(tmp_path)]) == 0
    assert "overlay skipped" in capsys.readouterr().out


def test_overlay_is_drawn(data, tmp_path, capsys):
    pd.DataFrame({"dim": [1, 1, 2, 2], "L": 8, "N": [8, 8, 64, 64], "alpha": [0, 6, 0, 6],
                  "chi_c": [0.5, 2.0, 0.4, 1.5]}).to_csv(data / "chi_c.csv", index=False)
    assert main(["--recipe", "fig2a", "--data", str(data), "--out", str(tmp_path / "with")]) == 0
    assert "overlay skipped" not in capsys.readouterr().out
    (data / "chi_c.csv").unlink()
    assert main(["--recipe", "fig2a", "--data", str(data), "--out", str(tmp_path / "without")]) == 0
    assert (tmp_path / "with" / "fig2a.png").read_bytes() != (tmp_path / "without" / "fig2a.png").read_bytes()


def test_schema_mismatch_exits_nonzero(data, tmp_path, capsys):
    frame = pd.read_csv(data / "dtwa.csv").drop(columns=["qfi_sens"])
    frame.to_csv(data / "dtwa.csv", index=False)
    assert main(["--recipe", "fig2a", "--data", str(data), "--out", str(tmp_path)]) == 2
    assert "do not match" in capsys.readouterr().err


def test_missing_input_and_bad_arguments(tmp_path):
    assert main(["--recipe", "figS7", "--data", str(tmp_path), "--out", str(tmp_path)]) == 2
    assert main(["--recipe", "nope", "--data", str(tmp_path), "--out", str(tmp_path)]) == 2
    assert main(["--recipe", "fig2a"]) == 2


def test_module_entry_point(data, tmp_path):
    r = subprocess.run(["python3", "-m", "figures", "--recipe", "fig3b", "--data", str(data), "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "fig3b.png").exists()


@pytest.mark.skipif(not os.environ.get("GCT_SIM"), reason="GCT_SIM not set")
def test_simulator_output_matches_schemas(tmp_path):
    sim = os.environ["GCT_SIM"]
    out = tmp_path / "sw"
    subprocess.run([sim, "spinwave", "--alpha", "3", "--dims", "16x16", "--chi", "0.1,0.3,1", "--times", "0,1,3.3333333,10",
                    "--correlators", "--out", str(out)], check=True, capture_output=True)
    subprocess.run([sim, "critical", "--dim", "2", "--L", "16", "--alpha", "3", "--out", str(out / "chi_c.csv")],
                   check=True, capture_output=True)
    subprocess.run([sim, "gap", "--N", "4,6", "--alpha", "0", "--out", str(out / "gap.csv")], check=True,
                   capture_output=True)
    for name in ("spinwave_variances.csv", "spinwave_correlators.csv", "chi_c.csv", "gap.csv"):
        assert list(pd.read_csv(out / name).columns) == SCHEMAS[name]
    assert main(["--recipe", "fig3b", "--data", str(out), "--out", str(tmp_path / "fig")]) == 0
