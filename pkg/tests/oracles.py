"""Slow, obviously-correct reference computations used by the tests.

Nothing here imports the code under test except for plain data types.
"""

import math

import numpy as np


def enumerate_alignments(a, b):
    """Every global alignment of ``a`` and ``b`` as (row_a, row_b) pairs."""
    if not a and not b:
        yield "", ""
        return
    if a and b:
        for ra, rb in enumerate_alignments(a[:-1], b[:-1]):
            yield ra + a[-1], rb + b[-1]
    if a:
        for ra, rb in enumerate_alignments(a[:-1], b):
            yield ra + a[-1], rb + "-"
    if b:
        for ra, rb in enumerate_alignments(a, b[:-1]):
            yield ra + "-", rb + b[-1]


def affine_score(row_a, row_b, match, mismatch, gap_open, gap_extend):
    """Score by splitting each row into maximal gap runs."""
    total = 0
    for x, y in zip(row_a, row_b):
        if x != "-" and y != "-":
            total += match if x == y else mismatch
    for row in (row_a, row_b):
        runs = [len(r) for r in "".join("-" if c == "-" else " " for c in row).split()]
        total += sum(gap_open + (L - 1) * gap_extend for L in runs)
    return total


def best_alignment_score(a, b, match, mismatch, gap_open, gap_extend):
    return max(
        affine_score(ra, rb, match, mismatch, gap_open, gap_extend)
        for ra, rb in enumerate_alignments(a, b)
    )


def maximal_exact_matches(q, s, k):
    """All (qpos, spos, length) maximal shared substrings with length >= k."""
    out = []
    for i in range(len(q)):
        for j in range(len(s)):
            if q[i] != s[j]:
                continue
            if i > 0 and j > 0 and q[i - 1] == s[j - 1]:
                continue  # extendable to the left
            L = 0
            while i + L < len(q) and j + L < len(s) and q[i + L] == s[j + L]:
                L += 1
            if L >= k:
                out.append((i, j, L))
    return sorted(out, key=lambda h: (h[1] - h[0], h[0]))


def logistic(u):
    return 1.0 / (1.0 + math.exp(-u))


def half_sse_loss(vec, sizes, x, t):
    """E = 1/2 sum (t - y)^2 for a flat parameter vector, written out longhand."""
    a = list(x)
    pos = 0
    for lo, hi in zip(sizes, sizes[1:]):
        W = vec[pos : pos + lo * hi].reshape(lo, hi)
        pos += lo * hi
        b = vec[pos : pos + hi]
        pos += hi
        a = [logistic(b[j] + sum(a[i] * W[i, j] for i in range(lo))) for j in range(hi)]
    return 0.5 * sum((ti - yi) ** 2 for ti, yi in zip(t, a))


def central_difference_gradient(vec, sizes, x, t, h=1e-4):
    g = np.zeros_like(vec)
    for p in range(vec.size):
        up = vec.copy()
        dn = vec.copy()
        up[p] += h
        dn[p] -= h
        g[p] = (half_sse_loss(up, sizes, x, t) - half_sse_loss(dn, sizes, x, t)) / (2 * h)
    return g


def apply_edits(reference, edits):
    """Apply (pos, ref, alt) edits given in ascending position, independently of the package."""
    out = []
    cursor = 0
    for pos, ref, alt in edits:
        out.append(reference[cursor:pos])
        out.append(alt)
        cursor = pos + len(ref)
    out.append(reference[cursor:])
    return "".join(out)
