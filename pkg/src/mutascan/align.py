"""Exact-match seeding and affine-gap global alignment of two sequences."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import asdict, dataclass

import numpy as np

from .errors import AlphabetMismatch, KTooLarge
from .seqio import Alphabet, Sequence

GAP = "-"
FULL_MATRIX_LIMIT = 10_000
BAND_MARGIN = 32

# traceback states; their order is the tie-break order
_DIAG, _UP, _LEFT = 0, 1, 2


@dataclass(frozen=True)
class ScoringScheme:
    match: int = 2
    mismatch: int = -1
    gap_open: int = -4
    gap_extend: int = -1

    def __post_init__(self):
        if not self.match > self.mismatch:
            raise ValueError("match must exceed mismatch")
        if self.mismatch > 0:
            raise ValueError("mismatch must be <= 0")
        if not self.gap_open <= self.gap_extend <= 0:
            raise ValueError("need gap_open <= gap_extend <= 0")

    def gap_cost(self, length: int) -> int:
        return self.gap_open + (length - 1) * self.gap_extend if length else 0


DNA_SCHEME = ScoringScheme(2, -1, -4, -1)
PROTEIN_SCHEME = ScoringScheme(2, -1, -6, -1)


def default_scheme(alphabet: Alphabet) -> ScoringScheme:
    return DNA_SCHEME if alphabet is Alphabet.DNA else PROTEIN_SCHEME


@dataclass(frozen=True)
class SeedHit:
    query_pos: int
    subject_pos: int
    length: int

    @property
    def diagonal(self) -> int:
        return self.subject_pos - self.query_pos


def _same_alphabet(a: Sequence, b: Sequence):
    if a.alphabet is not b.alphabet:
        raise AlphabetMismatch(
            f"{a.id!r} is {a.alphabet.value} but {b.id!r} is {b.alphabet.value}"
        )


def seed_scan(query: Sequence, subject: Sequence, k: int) -> list[SeedHit]:
    """All maximal exact matches of length >= k, via a k-mer index of ``subject``.

    Hits are sorted by (diagonal, query_pos).
    """
    _same_alphabet(query, subject)
    if k < 1:
        raise ValueError("k must be positive")
    if k > min(len(query), len(subject)):
        raise KTooLarge(f"k={k} exceeds the shorter sequence length")
    q, s = query.residues, subject.residues
    index = defaultdict(list)
    for j in range(len(s) - k + 1):
        index[s[j : j + k]].append(j)

    starts = defaultdict(set)  # diagonal -> query positions where a k-mer matches
    for i in range(len(q) - k + 1):
        for j in index.get(q[i : i + k], ()):
            starts[j - i].add(i)

    hits = []
    for diag in sorted(starts):
        run_start = prev = None
        for i in sorted(starts[diag]):
            if run_start is not None and i == prev + 1:
                prev = i
                continue
            if run_start is not None:
                hits.append(SeedHit(run_start, run_start + diag, prev - run_start + k))
            run_start = prev = i
        hits.append(SeedHit(run_start, run_start + diag, prev - run_start + k))
    return hits


@dataclass(frozen=True)
class Alignment:
    row_a: str
    row_b: str
    score: int
    scheme: ScoringScheme = DNA_SCHEME
    banded: bool = False
    band_hit: bool = False

    def __post_init__(self):
        if len(self.row_a) != len(self.row_b):
            raise ValueError("alignment rows differ in length")

    @property
    def columns(self) -> list[tuple[str, str]]:
        return list(zip(self.row_a, self.row_b))

    def __len__(self):
        return len(self.row_a)

    def midline(self) -> str:
        return "".join(
            "|" if a == b and a != GAP else " " for a, b in zip(self.row_a, self.row_b)
        )

    def to_text(self, width: int = 60) -> str:
        mid = self.midline()
        blocks = []
        for i in range(0, len(self), width):
            blocks.append(
                "\n".join((self.row_a[i : i + width], mid[i : i + width], self.row_b[i : i + width]))
            )
        return "\n\n".join(blocks) + f"\n\nscore: {self.score}\n"

    def to_dict(self) -> dict:
        return {
            "row_a": self.row_a,
            "row_b": self.row_b,
            "score": self.score,
            "scheme": asdict(self.scheme),
            "banded": self.banded,
            "band_hit": self.band_hit,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Alignment":
        return cls(
            d["row_a"],
            d["row_b"],
            int(d["score"]),
            ScoringScheme(**d["scheme"]),
            bool(d.get("banded", False)),
            bool(d.get("band_hit", False)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def score_rows(row_a: str, row_b: str, scheme: ScoringScheme) -> int:
    """Score two gapped rows from scratch, gap runs counted per row."""
    total = 0
    run_a = run_b = 0
    for a, b in zip(row_a, row_b):
        if a == GAP and b == GAP:
            raise ValueError("gap/gap column")
        if a == GAP:
            total += scheme.gap_extend if run_a else scheme.gap_open
            run_a += 1
            run_b = 0
        elif b == GAP:
            total += scheme.gap_extend if run_b else scheme.gap_open
            run_b += 1
            run_a = 0
        else:
            total += scheme.match if a == b else scheme.mismatch
            run_a = run_b = 0
    return total


def global_align(
    a: Sequence,
    b: Sequence,
    scheme: ScoringScheme | None = None,
    full_limit: int = FULL_MATRIX_LIMIT,
) -> Alignment:
    """Optimal global alignment under affine gaps (Gotoh).

    Three states are tracked per cell: a residue pair (diagonal move), a
    residue of ``a`` against a gap (up) and a residue of ``b`` against a gap
    (left).  Ties are resolved diagonal, then up, then left, both for the
    final state and at every traceback step.

    Above ``full_limit`` residues the matrix is restricted to a band of
    half-width ``|len(a) - len(b)| + 32`` around the main diagonal;
    ``band_hit`` reports whether the chosen path touched the band edge, in
    which case a wider band might have scored higher.  A path that never
    reaches the edge can still be worse than the unbanded optimum.
    """
    _same_alphabet(a, b)
    if scheme is None:
        scheme = default_scheme(a.alphabet)
    sa, sb = a.residues, b.residues
    n, m = len(sa), len(sb)
    banded = max(n, m) > full_limit
    half = abs(n - m) + BAND_MARGIN if banded else max(n, m)

    go, ge = float(scheme.gap_open), float(scheme.gap_extend)
    neg = -np.inf
    # two full-width row buffers are reused; only the band slice of a row
    # is reset and computed, and the band only ever moves right
    width = min(m, 2 * half) + 1
    ptr = np.zeros((3, n + 1, width), dtype=np.int8)
    offsets = np.array([max(0, i - half) for i in range(n + 1)], dtype=np.int64)

    bvec = np.frombuffer(sb.encode("ascii"), dtype=np.uint8)
    M, X, Y = (np.full(m + 1, neg) for _ in range(3))
    spare = [np.full(m + 1, neg) for _ in range(3)]
    M[0] = 0.0
    hi0 = min(m, half)
    if hi0 >= 1:
        cols = np.arange(1, hi0 + 1)
        Y[1 : hi0 + 1] = go + (cols - 1) * ge
        ptr[2, 0, 1 : hi0 + 1] = _LEFT
        ptr[2, 0, 1] = _DIAG

    for i in range(1, n + 1):
        lo = max(0, i - half)
        hi = min(m, i + half)
        off = offsets[i]
        pM, pX, pY = M, X, Y
        M, X, Y = spare
        spare = [pM, pX, pY]
        for row in (M, X, Y):
            row[lo : hi + 1] = neg

        # up: a[i-1] against a gap, from row i-1 at the same column
        j = np.arange(lo, hi + 1)
        cand = np.stack((pM[j] + go, pX[j] + ge, pY[j] + go))
        X[lo : hi + 1] = cand.max(axis=0)
        ptr[1, i, j - off] = cand.argmax(axis=0)

        # diagonal: residue pair, from row i-1 at column j-1
        jd = np.arange(max(lo, 1), hi + 1)
        if jd.size:
            sub = np.where(bvec[jd - 1] == ord(sa[i - 1]), scheme.match, scheme.mismatch)
            cand = np.stack((pM[jd - 1], pX[jd - 1], pY[jd - 1]))
            M[jd] = cand.max(axis=0) + sub
            ptr[0, i, jd - off] = cand.argmax(axis=0)

        # left: b[j-1] against a gap, within this row; a running maximum
        # over the places where the gap could have been opened
        if hi >= max(lo, 1):
            opener = np.maximum(M[lo:hi], X[lo:hi])  # columns lo .. hi-1
            ks = np.arange(lo, hi)
            best = np.maximum.accumulate(opener - ks * ge)
            jl = np.arange(lo + 1, hi + 1)
            Yv = go + (jl - 1) * ge + best
            Y[lo + 1 : hi + 1] = Yv
            from_m = M[lo:hi] + go
            from_x = X[lo:hi] + go
            from_y = np.concatenate(([neg], Yv[:-1])) + ge
            choice = np.where(from_m == Yv, _DIAG, np.where(from_x == Yv, _UP, _LEFT))
            ptr[2, i, jl - off] = choice

    finals = (M[m], X[m], Y[m])
    state = int(np.argmax(finals))
    score = finals[state]

    row_a, row_b = [], []
    i, j = n, m
    band_hit = False
    while i > 0 or j > 0:
        if banded and abs(j - i) >= half:
            band_hit = True
        off = offsets[i]
        prev = int(ptr[state, i, j - off])
        if state == _DIAG:
            row_a.append(sa[i - 1])
            row_b.append(sb[j - 1])
            i -= 1
            j -= 1
        elif state == _UP:
            row_a.append(sa[i - 1])
            row_b.append(GAP)
            i -= 1
        else:
            row_a.append(GAP)
            row_b.append(sb[j - 1])
            j -= 1
        state = prev
    return Alignment(
        "".join(reversed(row_a)),
        "".join(reversed(row_b)),
        int(score),
        scheme,
        banded,
        band_hit,
    )


def percent_identity(al: Alignment) -> float:
    if not len(al):
        return 0.0
    same = sum(1 for a, b in zip(al.row_a, al.row_b) if a == b and a != GAP)
    return same / len(al)


def mismatch_columns(al: Alignment) -> list[tuple[int, str, str]]:
    return [(i, a, b) for i, (a, b) in enumerate(zip(al.row_a, al.row_b)) if a != b]
