"""
Heatmap images of the weak evidence effect: SVG text and an optional PNG drawn with Pillow.
"""
import logging
import os
from typing import List, Tuple

import numpy as np
from PIL import Image, ImageDraw, ImageFont

from simulation.sweep import Heatmap

NO_EFFECT_COLOR = (0, 0, 0)
LOW_COLOR = np.array([90, 20, 40], dtype=float)
HIGH_COLOR = np.array([250, 220, 90], dtype=float)


class HeatmapRenderer:
    def __init__(self, cell_size: int = 60, font_path: str = None, font_size: int = 14,
                 text_color: Tuple[int, int, int] = (30, 30, 30)):
        """Initialize the heatmap renderer."""
        self.cell_size = cell_size
        self.margin = 3 * cell_size // 2
        self.text_color = text_color
        self.font_size = font_size
        if font_path and os.path.isfile(font_path):
            self.font = ImageFont.truetype(font_path, font_size)
        else:
            self.font = ImageFont.load_default()
        self.logger = logging.getLogger(__name__)

    def get_font_dimensions(self, text: str) -> Tuple[int, int]:
        """Text width and height on both old and new Pillow versions."""
        try:
            return self.font.getsize(text)
        except AttributeError:
            bbox = self.font.getbbox(text)
            return bbox[2] - bbox[0], bbox[3] - bbox[1]

    def colors(self, heatmap: Heatmap) -> np.ndarray:
        """
        (betas, evidence, 3) RGB array: black where there is no effect, a dark-to-bright scale elsewhere.
        """
        effects = heatmap.effects
        peak = effects.max() if np.any(effects > 0) else 1.0
        scale = np.clip(effects / peak, 0.0, 1.0)[..., None]
        rgb = LOW_COLOR + scale * (HIGH_COLOR - LOW_COLOR)
        rgb[heatmap.no_effect] = NO_EFFECT_COLOR
        return rgb.round().astype(np.uint8)

    def _size(self, heatmap: Heatmap) -> Tuple[int, int]:
        rows, cols = heatmap.effects.shape
        return self.margin + cols * self.cell_size + self.cell_size // 2, \
            self.margin + rows * self.cell_size + self.cell_size // 2

    def to_svg(self, heatmap: Heatmap) -> str:
        """
        Render the heatmap as an SVG document: one rectangle per cell, axis labels, no scripts.

        Args:
            heatmap: Effect sizes per (beta, u)

        Returns:
            SVG text
        """
        width, height = self._size(heatmap)
        colors = self.colors(heatmap)
        c = self.cell_size
        parts: List[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
        ]
        for i, beta in enumerate(heatmap.beta_values):
            y = self.margin + i * c
            parts.append(f'<text x="{self.margin - 8}" y="{y + c // 2}" text-anchor="end" '
                         f'font-size="{self.font_size}">{beta:g}</text>')
            for j, u in enumerate(heatmap.evidence_values):
                r, g, b = (int(v) for v in colors[i, j])
                parts.append(f'<rect x="{self.margin + j * c}" y="{y}" width="{c}" height="{c}" '
                             f'fill="rgb({r},{g},{b})"><title>beta={beta:g} u={u:g} '
                             f'effect={heatmap.effects[i, j]:.4f}</title></rect>')
        for j, u in enumerate(heatmap.evidence_values):
            parts.append(f'<text x="{self.margin + j * c + c // 2}" y="{self.margin - 8}" text-anchor="middle" '
                         f'font-size="{self.font_size}">{u:g}</text>')
        parts.append(f'<text x="{self.margin // 2}" y="{self.margin // 2}" font-size="{self.font_size}">'
                     f'beta \\ u ({heatmap.goal.value})</text>')
        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    def save_svg(self, heatmap: Heatmap, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_svg(heatmap))
        self.logger.info(f"Wrote SVG heatmap to {path}")

    def to_image(self, heatmap: Heatmap) -> Image.Image:
        width, height = self._size(heatmap)
        c = self.cell_size
        rows, cols = heatmap.effects.shape
        # nearest-neighbour upscaling of the cell colors
        cells = np.repeat(np.repeat(self.colors(heatmap), c, axis=0), c, axis=1)
        img = Image.new("RGB", (width, height), (255, 255, 255))
        img.paste(Image.fromarray(cells), (self.margin, self.margin))
        draw = ImageDraw.Draw(img)

        for i, beta in enumerate(heatmap.beta_values):
            label = f"{beta:g}"
            text_width, text_height = self.get_font_dimensions(label)
            draw.text((self.margin - 8 - text_width, self.margin + i * c + (c - text_height) // 2), label,
                      font=self.font, fill=self.text_color)
        for j, u in enumerate(heatmap.evidence_values):
            label = f"{u:g}"
            text_width, text_height = self.get_font_dimensions(label)
            draw.text((self.margin + j * c + (c - text_width) // 2, self.margin - 8 - text_height), label,
                      font=self.font, fill=self.text_color)
        self.logger.debug(f"Rendered {rows}x{cols} heatmap image of {width}x{height} pixels")
        return img

    def save_png(self, heatmap: Heatmap, path: str) -> None:
        self.to_image(heatmap).save(path, format="PNG")
        self.logger.info(f"Wrote PNG heatmap to {path}")
