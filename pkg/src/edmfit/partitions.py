"""Integer partitions represented as multiplicity vectors.

A multiplicity vector ``(k_1, ..., k_s)`` encodes the partition of ``s``
that uses ``k_j`` parts of size ``j``, so that ``sum(j * k_j) == s``.
The kernel cross-check sums one term per such vector.
"""

from __future__ import annotations


def enumerate_partitions(s: int) -> list[tuple[int, ...]]:
    """All multiplicity vectors of length ``s`` with ``sum(j * k_j) == s``.

    The list is complete, duplicate-free, and sorted in ascending
    lexicographic order.  ``s == 0`` yields the single empty vector.
    """
    if s < 0:
        raise ValueError(f"s must be nonnegative, got {s}")
    if s == 0:
        return [()]
    out: list[tuple[int, ...]] = []
    counts = [0] * s

    def fill(remaining: int, size: int) -> None:
        # Choose the multiplicity of parts of this size, largest size first.
        if size == 1:
            counts[0] = remaining
            out.append(tuple(counts))
            counts[0] = 0
            return
        for k in range(remaining // size + 1):
            counts[size - 1] = k
            fill(remaining - k * size, size - 1)
        counts[size - 1] = 0

    fill(s, s)
    out.sort()
    return out
