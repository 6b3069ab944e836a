from .heatmap import HeatmapRenderer

__all__ = ['HeatmapRenderer']
