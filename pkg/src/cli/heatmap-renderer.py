"""Heatmaps of weighted networks: binary PGM/PPM images and plotly figures.

Nodes are ordered by community, then by ascending within-community degree,
so blocks and sociability gradients line up visually.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import plotly.colors
import plotly.graph_objects as go
from PIL import Image

from src.kebab_module_loader import load_module

_net = load_module("src.model.network-schemas")

logger = logging.getLogger(__name__)

NEUTRAL_GRAY = 128
_COLORSCALE = "Viridis"


def node_order(net, assignment=None, sort: str = "degree") -> np.ndarray:
    """Community-major node order; ``sort="degree"`` orders each community by within-community degree.

    Ties keep the original node order.
    """
    if sort not in ("degree", "none"):
        raise ValueError(f"unknown sort {sort!r}; expected 'degree' or 'none'")
    assignment = assignment or _net.CommunityAssignment.single(net.n)
    if assignment.n != net.n:
        raise ValueError(f"assignment covers {assignment.n} nodes but the network has {net.n}")
    w = np.where(net.present_mask(), net.weights, 0.0)
    order = []
    for i in range(1, assignment.k + 1):
        members = assignment.members(i)
        if sort == "degree":
            degree = w[np.ix_(members, members)].sum(axis=1)
            members = members[np.argsort(degree, kind="stable")]
        order.extend(members.tolist())
    return np.asarray(order, dtype=int)


def grayscale(weights: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
    """Linear map of the weight range onto 0..255.

    The range is taken over ``mask`` (default: the finite off-diagonal
    entries). Entries outside the mask get the level of the minimum; a
    constant range renders every pixel mid-gray.
    """
    weights = np.asarray(weights, dtype=float)
    if mask is None:
        mask = ~np.eye(*weights.shape, dtype=bool)
    mask = mask & np.isfinite(weights)
    if not mask.any():
        return np.full(weights.shape, NEUTRAL_GRAY, dtype=np.uint8)
    lo, hi = float(np.min(weights[mask])), float(np.max(weights[mask]))
    if hi <= lo:
        return np.full(weights.shape, NEUTRAL_GRAY, dtype=np.uint8)
    values = np.where(mask, weights, lo)
    return np.rint(255.0 * (values - lo) / (hi - lo)).astype(np.uint8)


def colorize(levels: np.ndarray, colorscale: str = _COLORSCALE) -> np.ndarray:
    """RGB pixels for 0..255 gray levels sampled from a plotly sequential scale."""
    scale = plotly.colors.get_colorscale(colorscale)
    samples = plotly.colors.sample_colorscale(scale, np.linspace(0.0, 1.0, 256).tolist(), colortype="rgb")
    palette = np.array([plotly.colors.unlabel_rgb(c) for c in samples], dtype=float)
    return np.rint(palette).clip(0, 255).astype(np.uint8)[levels]


def render_pixels(net, assignment=None, sort: str = "degree", fmt: str = "pgm", scale: int = 1) -> np.ndarray:
    """Pixel array (H x W for pgm, H x W x 3 for ppm) of the ordered network."""
    if scale < 1:
        raise ValueError(f"scale must be a positive integer, got {scale}")
    order = node_order(net, assignment, sort)
    grid = np.ix_(order, order)
    levels = grayscale(np.asarray(net.weights)[grid], net.present_mask()[grid])
    pixels = levels if fmt == "pgm" else colorize(levels)
    if scale > 1:
        pixels = np.repeat(np.repeat(pixels, scale, axis=0), scale, axis=1)
    return pixels


def write_netpbm(pixels: np.ndarray, path: str | Path) -> None:
    """Binary P5 (gray) or P6 (RGB) file with maxval 255."""
    Image.fromarray(np.ascontiguousarray(pixels, dtype=np.uint8)).save(path, format="PPM")


def heatmap_figure(net, assignment=None, sort: str = "degree", title: str = "Network") -> go.Figure:
    """Interactive heatmap of the ordered network."""
    order = node_order(net, assignment, sort)
    fig = go.Figure(go.Heatmap(
        z=np.asarray(net.weights)[np.ix_(order, order)],
        x=order.tolist(),
        y=order.tolist(),
        colorscale=_COLORSCALE,
        colorbar={"title": "Weight", "thickness": 12},
        hovertemplate="u=%{y} v=%{x}<br>W=%{z:.4g}<extra></extra>",
    ))
    fig.update_layout(
        title={"text": title, "x": 0.5},
        xaxis={"type": "category", "showticklabels": False},
        yaxis={"type": "category", "showticklabels": False, "autorange": "reversed", "scaleanchor": "x"},
        height=600,
    )
    return fig


def render_network(net, path: str | Path, assignment=None, sort: str = "degree", fmt: str = "pgm",
                   scale: int = 1) -> None:
    """Write the heatmap as ``pgm``, ``ppm`` or ``html``."""
    if fmt == "html":
        heatmap_figure(net, assignment, sort, title=Path(path).stem).write_html(str(path))
    elif fmt in ("pgm", "ppm"):
        write_netpbm(render_pixels(net, assignment, sort, fmt, scale), path)
    else:
        raise ValueError(f"unknown image format {fmt!r}; expected pgm, ppm or html")
    logger.info("Rendered %d-node heatmap to %s (%s)", net.n, path, fmt)
