"""NK fitness landscapes: generation, evaluation, persistence and an exhaustive oracle.

Each of the ``n`` genes owns a table of ``2**(k+1)`` contributions indexed by
its own allele (most significant bit) followed by the alleles of its ``k``
linked genes in stored order. Genome fitness is the mean contribution.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numba
import numpy as np

from .errors import CapacityError, InvalidGenomeError, InvalidParameterError, ParseError

MAX_BRUTE_FORCE_N = 24

_HEADER_TAG = "NK"


@dataclass(frozen=True, eq=False)
class Landscape:
    """An immutable NK landscape.

    Attributes:
        n: number of genes.
        k: number of epistatic links per gene.
        links: ``(n, k)`` int64 array; row ``i`` holds the genes that gene ``i`` reads.
        tables: ``(n, 2**(k+1))`` float64 array of contributions in ``[0, 1)``.
        seed: the seed the landscape was generated from (provenance only).
    """

    n: int
    k: int
    links: np.ndarray
    tables: np.ndarray
    seed: int = 0

    def __post_init__(self):
        n, k = self.n, self.k
        _check_nk(n, k)
        try:
            links = np.array(self.links, dtype=np.int64).reshape(n, k)
            tables = np.array(self.tables, dtype=np.float64)
        except ValueError as exc:
            raise InvalidParameterError(f"malformed links or tables: {exc}") from None
        if tables.shape != (n, 1 << (k + 1)):
            raise InvalidParameterError(
                f"tables must have shape {(n, 1 << (k + 1))}, got {tables.shape}"
            )
        if not np.all((tables >= 0.0) & (tables < 1.0)):
            raise InvalidParameterError("table entries must lie in [0, 1)")
        for i, row in enumerate(links):
            if len(set(row.tolist())) != k or np.any(row < 0) or np.any(row >= n) or i in row:
                raise InvalidParameterError(
                    f"links[{i}] must hold {k} distinct indices in [0, {n}) excluding {i}"
                )
        links.flags.writeable = False
        tables.flags.writeable = False
        object.__setattr__(self, "links", links)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "seed", int(self.seed))

    def __repr__(self):
        return f"Landscape(n={self.n}, k={self.k}, seed={self.seed})"

    def evaluate(self, genome) -> float:
        return evaluate(self, genome)


def _check_nk(n, k):
    if n < 1:
        raise InvalidParameterError(f"n must be positive, got {n}")
    if not 0 <= k <= n - 1:
        raise InvalidParameterError(f"k must satisfy 0 <= k <= n-1, got k={k}, n={n}")


def generate(n: int, k: int, seed: int) -> Landscape:
    """Draw a random NK landscape; a pure function of ``(n, k, seed)``."""
    _check_nk(n, k)
    rng = np.random.default_rng(seed)
    links = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        others = np.delete(np.arange(n), i)
        links[i] = rng.choice(others, size=k, replace=False)
    tables = rng.random((n, 1 << (k + 1)))
    return Landscape(n, k, links, tables, seed)


@numba.njit(cache=True, nogil=True)
def _evaluate(genome, links, tables):
    n, k = links.shape
    total = 0.0
    for i in range(n):
        idx = np.int64(genome[i])
        for j in range(k):
            idx = (idx << 1) | np.int64(genome[links[i, j]])
        total += tables[i, idx]
    return total / n


def as_genome(genome, n: int) -> np.ndarray:
    """Validate ``genome`` against length ``n`` and return it as a uint8 array."""
    g = np.asarray(genome)
    if g.ndim != 1 or g.shape[0] != n:
        raise InvalidGenomeError(f"genome must have length {n}, got shape {g.shape}")
    if not np.all((g == 0) | (g == 1)):
        raise InvalidGenomeError("genome alleles must be 0 or 1")
    return g.astype(np.uint8, copy=False)


def evaluate(ls: Landscape, genome) -> float:
    g = as_genome(genome, ls.n)
    return float(_evaluate(g, ls.links, ls.tables))


def contributions(ls: Landscape, genome) -> np.ndarray:
    """Per-gene table lookups for ``genome`` (their mean is the fitness)."""
    g = as_genome(genome, ls.n).astype(np.int64)
    idx = g.copy()
    for j in range(ls.k):
        idx = (idx << 1) | g[ls.links[:, j]]
    return ls.tables[np.arange(ls.n), idx]


@numba.njit(cache=True)
def _brute_force(links, tables):
    n = links.shape[0]
    genome = np.zeros(n, dtype=np.uint8)
    best_code = 0
    best = -1.0
    for code in range(1 << n):
        for i in range(n):
            genome[i] = (code >> (n - 1 - i)) & 1
        f = _evaluate(genome, links, tables)
        if f > best:
            best = f
            best_code = code
    return best_code, best


def brute_force_optimum(ls: Landscape) -> tuple[np.ndarray, float]:
    """Exhaustively find the global optimum.

    Genomes are visited in lexicographic order and only a strict improvement
    replaces the incumbent, so ties resolve to the lexicographically smallest
    genome.
    """
    if ls.n > MAX_BRUTE_FORCE_N:
        raise CapacityError(
            f"brute force is limited to n <= {MAX_BRUTE_FORCE_N}, got n={ls.n}"
        )
    code, best = _brute_force(ls.links, ls.tables)
    genome = np.array([(code >> (ls.n - 1 - i)) & 1 for i in range(ls.n)], dtype=np.uint8)
    return genome, float(best)


def separable_optimum(ls: Landscape) -> float:
    """Analytic optimum of a ``k == 0`` landscape.

    Summed in gene order like ``evaluate`` so a run that reaches the optimum
    compares equal with no tolerance.
    """
    if ls.k != 0:
        raise InvalidParameterError("the separable optimum only exists for k == 0")
    total = 0.0
    for best in ls.tables.max(axis=1):
        total += float(best)
    return total / ls.n


# --- persistence -----------------------------------------------------------


def dumps(ls: Landscape) -> str:
    """Serialize to the line-oriented text format.

    Header ``NK <n> <k> <seed>``, then per gene a line of link indices
    (empty when ``k == 0``) and a line of table values with 17 significant
    digits, which round-trips IEEE doubles exactly.
    """
    out = io.StringIO()
    out.write(f"{_HEADER_TAG} {ls.n} {ls.k} {ls.seed}\n")
    for i in range(ls.n):
        out.write(" ".join(str(int(j)) for j in ls.links[i]) + "\n")
        out.write(" ".join(format(float(v), ".17g") for v in ls.tables[i]) + "\n")
    return out.getvalue()


def loads(text: str) -> Landscape:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty landscape document", 1)
    head = lines[0].split()
    if len(head) != 4 or head[0] != _HEADER_TAG:
        raise ParseError(f"expected header '{_HEADER_TAG} <n> <k> <seed>'", 1)
    try:
        n, k, seed = int(head[1]), int(head[2]), int(head[3])
    except ValueError:
        raise ParseError("header fields must be integers", 1) from None
    if n < 1 or not 0 <= k <= n - 1:
        raise ParseError(f"invalid header values n={n}, k={k}", 1)
    expected = 1 + 2 * n
    if len(lines) != expected:
        lineno = min(len(lines), expected) + 1
        raise ParseError(f"expected {expected} lines, found {len(lines)}", lineno)

    width = 1 << (k + 1)
    links = np.empty((n, k), dtype=np.int64)
    tables = np.empty((n, width), dtype=np.float64)
    for i in range(n):
        link_no, table_no = 2 + 2 * i, 3 + 2 * i
        fields = lines[link_no - 1].split()
        if len(fields) != k:
            raise ParseError(f"gene {i}: expected {k} link indices, found {len(fields)}", link_no)
        try:
            row = [int(f) for f in fields]
        except ValueError:
            raise ParseError(f"gene {i}: link indices must be integers", link_no) from None
        if len(set(row)) != k or any(j < 0 or j >= n or j == i for j in row):
            raise ParseError(
                f"gene {i}: links must be {k} distinct indices in [0, {n}) excluding {i}", link_no
            )
        links[i] = row

        fields = lines[table_no - 1].split()
        if len(fields) != width:
            raise ParseError(f"gene {i}: expected {width} table values, found {len(fields)}", table_no)
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise ParseError(f"gene {i}: table values must be decimal numbers", table_no) from None
        if not all(0.0 <= v < 1.0 for v in values):
            raise ParseError(f"gene {i}: table values must lie in [0, 1)", table_no)
        tables[i] = values
    return Landscape(n, k, links, tables, seed)


def save(ls: Landscape, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(ls))


def load(path) -> Landscape:
    with open(os.fspath(path), encoding="ascii") as fh:
        return loads(fh.read())
