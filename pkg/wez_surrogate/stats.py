"""
Exploratory statistics over datasets: descriptive summary, Pearson
correlation, histogram and the Tukey fences used to drop outliers.
"""
from dataclasses import dataclass

import numpy as np
import pandas as pd
import scipy.stats

from .exceptions import EmptyDataset, ZeroVariance

SUMMARY_ROWS = ['mean', 'std', 'min', '25%', '50%', '75%', 'max']
TUKEY_K = 1.5


def _frame(data):
    frame = data if isinstance(data, pd.DataFrame) else data.frame
    if len(frame) == 0:
        raise EmptyDataset("dataset has no rows")
    return frame


@dataclass(frozen=True)
class StatsSummary:
    # Rows are SUMMARY_ROWS, one column per dataset column
    table: pd.DataFrame

    @property
    def columns(self):
        return list(self.table.columns)

    def __getitem__(self, column):
        return self.table[column].to_dict()

    def to_dict(self):
        return {column: self[column] for column in self.columns}


def describe(data):
    """
    Returns mean, sample standard deviation (n - 1 denominator), min, the
    linearly interpolated quartiles and max of every column.
    """
    frame = _frame(data)
    table = frame.describe(percentiles=[0.25, 0.5, 0.75]).loc[SUMMARY_ROWS]

    # A single row has no sample deviation; report it as zero spread
    if len(frame) == 1:
        table.loc['std'] = 0.0

    return StatsSummary(table=table)


def pearson_matrix(data):
    """
    Returns the Pearson correlation matrix of all columns as a DataFrame.

    Raises ZeroVariance naming the first constant column.
    """
    frame = _frame(data)
    for column in frame.columns:
        values = frame[column].to_numpy(dtype=float)
        if len(values) < 2 or np.all(values == values[0]):
            raise ZeroVariance(column)

    matrix = frame.corr(method='pearson').clip(-1.0, 1.0)
    values = matrix.to_numpy(copy=True)
    np.fill_diagonal(values, 1.0)
    return pd.DataFrame(values, index=matrix.index, columns=matrix.columns)


def iqr_upper_fence(q1, q3, k=TUKEY_K):
    """
    Returns the upper Tukey fence q3 + k * (q3 - q1).
    """
    if q1 > q3:
        raise ValueError(f"first quartile {q1} exceeds third quartile {q3}")
    return q3 + k * (q3 - q1)


def iqr_lower_fence(q1, q3, k=TUKEY_K):
    if q1 > q3:
        raise ValueError(f"first quartile {q1} exceeds third quartile {q3}")
    return q1 - k * (q3 - q1)


def histogram(values, n_bins):
    """
    Returns (bin edges, counts) for equal-width bins over [min, max]. A
    column holding a single value gets bins of unit total width centred on it.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyDataset("cannot build a histogram of no values")
    if n_bins < 1:
        raise ValueError("n_bins must be at least 1")

    counts, edges = np.histogram(values, bins=n_bins)
    return edges, counts


def boxplot_summary(values, k=TUKEY_K):
    """
    Returns the numbers a boxplot draws: quartiles, fences, whisker ends
    (the most extreme values inside the fences) and the outlier count.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyDataset("cannot summarise no values")

    q1, median, q3 = np.quantile(values, [0.25, 0.5, 0.75])
    lower = iqr_lower_fence(q1, q3, k)
    upper = iqr_upper_fence(q1, q3, k)
    inside = values[(values >= lower) & (values <= upper)]

    return {
        'q1': float(q1),
        'median': float(median),
        'q3': float(q3),
        'iqr': float(scipy.stats.iqr(values)),
        'lower_fence': float(lower),
        'upper_fence': float(upper),
        'lower_whisker': float(inside.min()),
        'upper_whisker': float(inside.max()),
        'outliers': int(values.size - inside.size),
    }
