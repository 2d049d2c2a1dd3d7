"""Python access to the repscape engine.

Request and response bodies are plain dicts with the same fields as the
HTTP service under /v1.
"""

import json

from . import _repscape
from ._repscape import Error

__all__ = ["Engine", "Error", "synth", "render_ppm", "compare", "sweep_centroids"]


class Engine:
    """In-memory datasets plus the analysis operations over them."""

    def __init__(self, threads=1):
        self._engine = _repscape.Engine(threads)

    def add_dataset(self, csv):
        return json.loads(self._engine.add_dataset(csv))

    def remove_dataset(self, dataset_id):
        return self._engine.remove_dataset(dataset_id)

    def handle(self, dataset_id):
        return json.loads(self._engine.handle(dataset_id))

    def representativeness(self, dataset_id, **body):
        return json.loads(self._engine.representativeness(dataset_id, json.dumps(body)))

    def ideal_sites(self, dataset_id, **body):
        return json.loads(self._engine.ideal_sites(dataset_id, json.dumps(body)))

    def baseline(self, dataset_id, **body):
        return json.loads(self._engine.baseline(dataset_id, json.dumps(body)))

    def histogram(self, dataset_id, **query):
        return json.loads(self._engine.histogram(dataset_id, {k: str(v) for k, v in query.items()}))


def synth(preset="clustered", rows=50000, seed=0):
    """Synthetic region CSV text."""
    return _repscape.synth(preset, rows, seed)


def render_ppm(heatmap, width=720, height=360, threads=1):
    """PPM bytes for a heat-map document (dict or JSON text)."""
    text = heatmap if isinstance(heatmap, str) else json.dumps(heatmap)
    return _repscape.render_ppm(text, width, height, threads)


def compare(csv, sample_ids, n_sites=0, trials=1000, seed=0, threads=1):
    return json.loads(_repscape.compare(csv, list(sample_ids), n_sites, trials, seed, threads))


def sweep_centroids(csv, values, trials=1000, seed=0, threads=1):
    return json.loads(_repscape.sweep_centroids(csv, list(values), trials, seed, threads))
