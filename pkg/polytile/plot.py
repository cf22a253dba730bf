from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.patches import Patch
from loguru import logger

from polytile.assembler import section_labels

# set the default fontsizes
plt.rcParams.update(
    {
        "font.size": 12,
        "axes.titlesize": 16,
        "axes.labelsize": 14,
        "xtick.labelsize": 12,
        "ytick.labelsize": 12,
        "legend.fontsize": 11,
        "figure.titlesize": 18,
    }
)

# empty, linker, encoder, filler
COLORS = ["white", "0.6", "tab:purple", "tab:green"]
NAMES = ["empty", "linker", "encoder", "filler"]


@logger.catch(reraise=True)
def plot_section(assembly, z, out_path=None, figsize=None, title=None):
    """
    Draw a horizontal section of the assembled fundamental domain.

    Parameters
    ----------
    assembly : Assembly
    z : int
        Height of the section; taken modulo the vertical period.
    out_path : str, optional
        Where to save the figure. If None, the figure is only returned.
    figsize : tuple, optional
    title : str, optional

    Returns
    -------
    matplotlib.figure.Figure
    """
    labels = section_labels(assembly, z)

    fig, ax = plt.subplots(figsize=figsize)
    ax.imshow(labels, origin="lower", cmap=ListedColormap(COLORS), vmin=0, vmax=3, interpolation="nearest")
    ax.set_xlabel("x (residue)")
    ax.set_ylabel("y (residue)")
    ax.set_title(title or f"Section at z = {z}")
    present = np.unique(labels)
    ax.legend(
        handles=[Patch(facecolor=COLORS[k], edgecolor="k", label=NAMES[k]) for k in present],
        loc="upper right",
        framealpha=0.8,
    )

    if out_path is not None:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_path, bbox_inches="tight")
        logger.info(f"Section saved to {out_path}")

    return fig
