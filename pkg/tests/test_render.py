import numpy as np
import pytest

from render.heatmap import HIGH_COLOR, NO_EFFECT_COLOR, HeatmapRenderer
from simulation.sweep import Heatmap
from world.grid import Proposition


@pytest.fixture
def heatmap():
    return Heatmap((0.0, 1.0), (5.0, 6.0), np.array([[0.0, 0.0], [0.1, 0.0]]), Proposition.LONGER)


def test_colors(heatmap):
    colors = HeatmapRenderer().colors(heatmap)
    assert colors.shape == (2, 2, 3)
    assert tuple(colors[0, 0]) == NO_EFFECT_COLOR
    assert tuple(colors[1, 0]) == tuple(HIGH_COLOR.astype(int))


def test_svg(heatmap, tmp_path):
    renderer = HeatmapRenderer()
    svg = renderer.to_svg(heatmap)
    assert svg.startswith("<svg ") and svg.endswith("</svg>\n")
    assert svg.count("<rect ") == 5
    assert "<title>beta=1 u=5 effect=0.1000</title>" in svg
    assert "<script" not in svg
    path = tmp_path / "heatmap.svg"
    renderer.save_svg(heatmap, str(path))
    assert path.read_text(encoding="utf-8") == svg


def test_png(heatmap, tmp_path):
    renderer = HeatmapRenderer(cell_size=40)
    image = renderer.to_image(heatmap)
    margin = renderer.margin
    assert image.size == (margin + 2 * 40 + 20, margin + 2 * 40 + 20)
    assert image.getpixel((margin + 20, margin + 60)) == tuple(HIGH_COLOR.astype(int))
    assert image.getpixel((margin + 60, margin + 20)) == NO_EFFECT_COLOR
    renderer.save_png(heatmap, str(tmp_path / "heatmap.png"))
    assert (tmp_path / "heatmap.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
