import csv
from typing import List, Tuple

import numpy as np

from grembed.cluster.kmeans import squared_distances
from grembed.cluster.types import Clustering, ElbowScan
from grembed.errors import MalformedLineError
from grembed.ingest.types import UserId
from grembed.numerics.matrix_io import read_dense_csv, write_dense_csv
from grembed.utils import ensure_parent, format_real


def save_clustering(assignment_path: str, centroids_path: str, users: List[UserId], clustering: Clustering) -> None:
    """Writes ``user_id,cluster`` rows and the centroid matrix."""
    ensure_parent(assignment_path)
    with open(assignment_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user_id", "cluster"])
        for user, label in zip(users, clustering.assignment):
            writer.writerow([user, int(label)])
    write_dense_csv(centroids_path, clustering.centroids)


def load_clustering(
    assignment_path: str, centroids_path: str, points: np.ndarray
) -> Tuple[List[UserId], Clustering]:
    """Reads a clustering back; inertia is recomputed from ``points``, which must follow the file's row order."""
    users, labels = [], []
    with open(assignment_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != ["user_id", "cluster"]:
            raise MalformedLineError(assignment_path, 1, "expected a 'user_id,cluster' header")
        for line_number, record in enumerate(reader, 2):
            if len(record) != 2:
                raise MalformedLineError(assignment_path, line_number, "expected 'user_id,cluster'")
            users.append(record[0])
            labels.append(int(record[1]))

    centroids = read_dense_csv(centroids_path)
    assignment = np.array(labels, dtype=np.int64)
    if points.shape[0] != len(users):
        raise ValueError(f"{assignment_path} assigns {len(users)} rows but {points.shape[0]} points were given")
    dist = squared_distances(np.asarray(points, dtype=np.float64), centroids)
    inertia = float(dist[np.arange(len(users)), assignment].sum())
    return users, Clustering(k=centroids.shape[0], centroids=centroids, assignment=assignment, inertia=inertia)


def save_elbow_curve(path: str, scan: ElbowScan) -> None:
    """Writes ``k,inertia,selected`` for every scanned k."""
    ensure_parent(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "inertia", "selected"])
        for k in sorted(scan.inertias):
            writer.writerow([k, format_real(scan.inertias[k]), int(k == scan.k)])
