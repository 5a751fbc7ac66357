"""Render every figure from the committed fixtures and verify that the
plotted values equal the CSV values after the declared axis transforms."""

import pathlib
import sys

import numpy as np
import pytest

HERE = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(HERE))

import figstyle
from figstyle import column, read_csv

import plot_barrier
import plot_heatmap
import plot_paths3d
import plot_rates
import plot_trajectory
import plot_wigner

FIX = HERE / "fixtures"


@pytest.fixture
def captured(monkeypatch):
    """Capture the figure object instead of writing the image."""
    box = {}

    def fake_save(fig, out_path):
        box["fig"] = fig
        return str(out_path)

    monkeypatch.setattr(figstyle, "save", fake_save)
    return box


def line_by_label(fig, label):
    for ax in fig.axes:
        for line in ax.get_lines():
            if line.get_label() == label:
                return line
    raise AssertionError(f"no line labelled {label!r}")


def test_rates_checksum(captured):
    plot_rates.render(FIX / "ref_compare.csv", "unused.svg")
    _, _, rows = read_csv(FIX / "ref_compare.csv")
    line = line_by_label(captured["fig"], "bright->dim (Liouvillian)")
    x, y = line.get_xdata(), line.get_ydata()
    np.testing.assert_allclose(x, column(rows, "sweep_value"))
    np.testing.assert_allclose(y, column(rows, "gamma_bd"))


def test_heatmap_checksum(captured):
    plot_heatmap.render(FIX / "ref_liouvillian_sweep.csv", "unused.svg")
    _, _, rows = read_csv(FIX / "ref_liouvillian_sweep.csv")
    line = line_by_label(captured["fig"], "p_b")
    np.testing.assert_allclose(line.get_ydata(), column(rows, "p_b"))


def test_trajectory_checksum(captured):
    plot_trajectory.render(FIX / "ref_traj0.csv", "unused.svg")
    _, _, rows = read_csv(FIX / "ref_traj0.csv")
    fig = captured["fig"]
    amp_line = fig.axes[0].get_lines()[0]
    np.testing.assert_allclose(amp_line.get_ydata(), column(rows, "amplitude"))


def test_barrier_checksum(captured):
    plot_barrier.render(FIX / "ref_barrier.csv", "unused.svg")
    _, _, rows = read_csv(FIX / "ref_barrier.csv")
    line = line_by_label(captured["fig"], "|R| bright->unstable")
    np.testing.assert_allclose(line.get_ydata(), column(rows, "absR_bd"))


def test_wigner_checksum(captured):
    plot_wigner.render(FIX / "ref_wigner.csv", "unused.svg")
    _, _, rows = read_csv(FIX / "ref_wigner.csv")
    fig = captured["fig"]
    mesh = fig.axes[0].collections[0]
    W = np.array(column(rows, "W"))
    n = int(round(np.sqrt(len(W))))
    np.testing.assert_allclose(np.asarray(mesh.get_array()).ravel(),
                               W.reshape(n, n).T.ravel())


def test_paths3d_checksum(captured):
    plot_paths3d.render(FIX / "ref_path_bright.csv", FIX / "ref_path_dim.csv",
                        "unused.svg", wigner_csv=FIX / "ref_wigner.csv")
    _, _, rows = read_csv(FIX / "ref_path_bright.csv")
    fig = captured["fig"]
    axq = fig.axes[-1]
    line = next(ln for ln in axq.get_lines()
                if ln.get_label() == "x_q (bright)")
    np.testing.assert_allclose(line.get_ydata(), column(rows, "x_q"))


def test_all_figures_render_to_files(tmp_path):
    outputs = [
        plot_paths3d.render(FIX / "ref_path_bright.csv",
                            FIX / "ref_path_dim.csv",
                            tmp_path / "paths3d.svg",
                            wigner_csv=FIX / "ref_wigner.csv"),
        plot_trajectory.render(FIX / "ref_traj0.csv",
                               tmp_path / "trajectory.svg"),
        plot_rates.render(FIX / "ref_compare.csv", tmp_path / "rates.svg"),
        plot_heatmap.render(FIX / "ref_liouvillian_sweep.csv",
                            tmp_path / "panels.svg"),
        plot_wigner.render(FIX / "ref_wigner.csv", tmp_path / "wigner.svg"),
        plot_barrier.render(FIX / "ref_barrier.csv", tmp_path / "barrier.svg"),
    ]
    for out in outputs:
        assert pathlib.Path(out).stat().st_size > 1000


def test_single_point_sweep_renders(tmp_path):
    # a one-row CSV must render without crashing
    src = (FIX / "ref_liouvillian_sweep.csv").read_text().splitlines()
    header = [ln for ln in src if ln.startswith("#")]
    body = [ln for ln in src if not ln.startswith("#")]
    single = tmp_path / "single.csv"
    single.write_text("\n".join(header + body[:2]) + "\n")
    out = plot_heatmap.render(single, tmp_path / "single.svg")
    assert pathlib.Path(out).stat().st_size > 500


def test_rendering_is_deterministic(tmp_path):
    a = plot_barrier.render(FIX / "ref_barrier.csv", tmp_path / "a.svg")
    b = plot_barrier.render(FIX / "ref_barrier.csv", tmp_path / "b.svg")
    assert pathlib.Path(a).read_bytes() == pathlib.Path(b).read_bytes()


def test_schema_mismatch_fails_fast(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(SystemExit):
        plot_rates.render(bad, tmp_path / "x.svg")
