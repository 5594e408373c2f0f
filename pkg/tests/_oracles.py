"""Independent brute-force reference implementations used to derive expected values.

Everything here is deliberately written in plain Python (no numpy vector
tricks, no code shared with the package) so a disagreement points at the
implementation under test rather than at a common bug.
"""

import math


def pearson0(x, y):
    """Pearson correlation with the zero-variance convention r = 0."""
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _term(vectors):
    """Sum of |r| over all ordered pairs (diagonal counted as 1), minus the
    diagonal, normalized by k^2 - k."""
    k = len(vectors)
    s = 0.0
    for i in range(k):
        for j in range(k):
            if i == j:
                s += 1.0
            else:
                s += abs(pearson0(vectors[i], vectors[j]))
    return (s - k) / (k * k - k)


def acv_oracle(sub):
    """ACV of a dense submatrix (list of row lists): max of row and column terms."""
    n = len(sub)
    m = len(sub[0]) if n else 0
    terms = []
    if n >= 2:
        terms.append(_term([list(row) for row in sub]))
    if m >= 2:
        terms.append(_term([[sub[i][j] for i in range(n)] for j in range(m)]))
    if not terms:
        raise ValueError("ACV undefined below 2 rows and 2 columns")
    return max(terms)


def fitness_oracle(sub_rows, sub_cols, matrix, delta):
    """Volume if the selection is >= 2x2 and its ACV reaches delta, else 0."""
    if len(sub_rows) < 2 or len(sub_cols) < 2:
        return 0.0
    sub = [[matrix[i][j] for j in sub_cols] for i in sub_rows]
    return float(len(sub_rows) * len(sub_cols)) if acv_oracle(sub) >= delta else 0.0


def overlap_oracle(biclusters, n, m):
    """Overlap degree R via an explicit per-element loop; contributions clamped at 0."""
    count = len(biclusters)
    total = 0.0
    for i in range(n):
        for j in range(m):
            coverage = sum(
                1 for b in biclusters if i in b.rows and j in b.cols
            )
            total += max(coverage - 1, 0) / (count - 1)
    return total / (n * m)
