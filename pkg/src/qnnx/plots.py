"""SVG charts of fits and error histograms."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "qnnx"


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def fit_chart(path, x: np.ndarray, y_true: np.ndarray, y_pred: np.ndarray, title: str = "") -> None:
    """Target and prediction against x for 1-D inputs; prediction vs. target otherwise."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    x = np.atleast_2d(x)
    if x.shape[1] == 1:
        order = np.argsort(x[:, 0])
        ax.plot(x[order, 0], y_true[order], label="target", color="k")
        ax.plot(x[order, 0], y_pred[order], "--", label="prediction", color="tab:red")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.legend()
    else:
        ax.scatter(y_true, y_pred, s=6)
        lims = [min(y_true.min(), y_pred.min()), max(y_true.max(), y_pred.max())]
        ax.plot(lims, lims, color="k", lw=0.8)
        ax.set_xlabel("target")
        ax.set_ylabel("prediction")
    ax.set_title(title)
    _save(fig, path)


def histogram_chart(path, edges, counts, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    edges = np.asarray(edges)
    ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", edgecolor="k")
    ax.set_xlabel("test MAE")
    ax.set_ylabel("runs")
    ax.set_title(title)
    _save(fig, path)
