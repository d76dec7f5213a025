"""
CSV persistence shared by designs, datasets, traces and sweeps.

Floats are written with 17 significant digits so every value reads back
bit-identical.
"""
import os

import numpy as np
import pandas as pd

from .exceptions import MalformedCSV

FLOAT_FORMAT = '%.17g'


def meta_path(path):
    """
    Returns the path of the JSON sidecar holding a table's provenance.
    """
    return os.path.splitext(str(path))[0] + '.meta.json'


def write_table(frame, path):
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n', encoding='utf-8')


def read_table(path, columns):
    """
    Reads a numeric CSV whose header must be exactly `columns`.

    Raises MalformedCSV naming the first offending line (1-based, the header
    being line 1).
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise MalformedCSV(path, 1, "file is empty")
    except pd.errors.ParserError as e:
        raise MalformedCSV(path, _line_from_parser_error(e), str(e))

    if list(frame.columns) != list(columns):
        raise MalformedCSV(path, 1, f"expected header {','.join(columns)}, got {','.join(map(str, frame.columns))}")

    numeric = frame.apply(pd.to_numeric, errors='coerce')
    bad = ~np.isfinite(numeric.to_numpy(dtype=float))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise MalformedCSV(path, int(row) + 2, f"{columns[col]} is not a finite number: {frame.iat[row, col]!r}")

    return numeric.astype(float)


def _line_from_parser_error(error):
    # pandas reports "Expected 8 fields in line 5, saw 9"
    words = str(error).replace(',', ' ').split()
    for previous, word in zip(words, words[1:]):
        if previous == 'line' and word.isdigit():
            return int(word)
    return 0
