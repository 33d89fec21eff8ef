"""Sparse exact Gaussian elimination over the rationals.

Rows are dicts mapping orderable hashable column keys to nonzero rationals.
An Echelon keeps normalized rows keyed by pivot column (the smallest key in
the row); inserting a row reduces it first, so rank and span-membership
queries are incremental.
"""

from __future__ import annotations

from bisect import insort

from .rational import Q


def row_scaled(row, s):
    return {k: v * s for k, v in row.items()}


def row_add_scaled(dst, src, s):
    """dst += s*src in place, dropping cancelled entries."""
    for k, v in src.items():
        cur = dst.get(k)
        if cur is None:
            dst[k] = v * s
        else:
            cur = cur + v * s
            if cur:
                dst[k] = cur
            else:
                del dst[k]
    return dst


class Echelon:
    def __init__(self):
        self.rows = {}

    def reduce(self, row):
        """Remainder of row after elimination against the stored rows."""
        row = dict(row)
        pending = sorted(row)
        seen = set(pending)
        i = 0
        while i < len(pending):
            p = pending[i]
            i += 1
            if p not in row:
                continue
            piv = self.rows.get(p)
            if piv is None:
                continue
            c = -row[p]
            for k, v in piv.items():
                cur = row.get(k)
                if cur is None:
                    row[k] = v * c
                    if k not in seen:
                        # pivot is the min of its row, so new keys sort after p
                        seen.add(k)
                        insort(pending, k, lo=i)
                else:
                    cur = cur + v * c
                    if cur:
                        row[k] = cur
                    else:
                        del row[k]
        return row

    def insert(self, row):
        """Insert a row; returns the new pivot key, or None if dependent."""
        rem = self.reduce(row)
        if not rem:
            return None
        p = min(rem)
        self.rows[p] = row_scaled(rem, Q(1) / rem[p])
        return p

    def contains(self, row):
        return not self.reduce(row)

    def rank(self):
        return len(self.rows)

    def back_reduce(self):
        """Full reduced row-echelon form (each pivot column cleared everywhere)."""
        for p in sorted(self.rows, reverse=True):
            prow = self.rows[p]
            for q, qrow in self.rows.items():
                if q < p and p in qrow:
                    row_add_scaled(qrow, prow, -qrow[p])


def rank_of(rows):
    ech = Echelon()
    for r in rows:
        ech.insert(r)
    return ech.rank()
