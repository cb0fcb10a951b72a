import json
import os
from typing import List, Tuple

import numpy as np

from grembed.errors import MalformedLineError
from grembed.hybrid.types import MLPModel
from grembed.numerics.matrix_io import read_dense_csv, write_dense_csv
from grembed.utils import ensure_parent


def save_mlp(manifest_path: str, model: MLPModel, seed: int, epochs: int, restaurants: List[str]) -> List[str]:
    """Writes a JSON manifest next to one CSV per weight matrix and bias vector.

    Returns:
        List[str]: Every path written, manifest last.
    """
    base, _ = os.path.splitext(manifest_path)
    files, written = [], []
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        w_path, b_path = f"{base}_w{i}.csv", f"{base}_b{i}.csv"
        write_dense_csv(w_path, w)
        write_dense_csv(b_path, b[None, :])
        files.append({"weights": os.path.basename(w_path), "bias": os.path.basename(b_path)})
        written += [w_path, b_path]

    manifest = {
        "layer_sizes": model.layer_sizes,
        "activation": "relu",
        "seed": seed,
        "epochs": epochs,
        "restaurants": list(restaurants),
        "layers": files,
    }
    ensure_parent(manifest_path)
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return written + [manifest_path]


def load_mlp(manifest_path: str) -> Tuple[MLPModel, List[str]]:
    """Rebuilds a model saved by :func:`save_mlp`; forward outputs are bit-identical."""
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    folder = os.path.dirname(manifest_path)

    weights = [read_dense_csv(os.path.join(folder, layer["weights"])) for layer in manifest["layers"]]
    biases = [read_dense_csv(os.path.join(folder, layer["bias"]))[0] for layer in manifest["layers"]]
    model = MLPModel(weights=weights, biases=biases)
    if model.layer_sizes != manifest["layer_sizes"]:
        raise MalformedLineError(manifest_path, 1, f"layer sizes {model.layer_sizes} != {manifest['layer_sizes']}")
    return model, list(manifest["restaurants"])


def save_blend(path: str, methods: List[str], alpha: np.ndarray) -> None:
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({m: float(a) for m, a in zip(methods, alpha)}, fh, indent=1, sort_keys=True)
        fh.write("\n")
