import csv

import numpy as np

from grembed.errors import MalformedLineError
from grembed.numerics.types import DenseMatrix
from grembed.utils import ensure_parent, format_real


def write_dense_csv(path: str, matrix: DenseMatrix) -> None:
    """Writes ``matrix`` as CSV: a ``rows,cols`` header line, then one row per line."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    ensure_parent(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([matrix.shape[0], matrix.shape[1]])
        for row in matrix:
            writer.writerow([format_real(x) for x in row])


def read_dense_csv(path: str) -> DenseMatrix:
    """Reads a matrix written by :func:`write_dense_csv`.

    Raises:
        MalformedLineError: If the header is missing or a row has the wrong length.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            rows, cols = (int(x) for x in next(reader))
        except (StopIteration, ValueError) as e:
            raise MalformedLineError(path, 1, f"expected a 'rows,cols' header ({e})") from e

        matrix = np.zeros((rows, cols), dtype=np.float64)
        read = 0
        for i, record in enumerate(reader):
            if i >= rows or len(record) != cols:
                raise MalformedLineError(path, i + 2, f"expected {rows} rows of {cols} values")
            matrix[i] = [float(x) for x in record]
            read += 1

        if read != rows:
            raise MalformedLineError(path, read + 2, f"expected {rows} rows, found {read}")

    return matrix
