"""Set partitions of {1..n}, their incremental construction, and counts.

A partition is stored in canonical form: blocks are increasing tuples of
indices, ordered by their smallest element. Enumeration follows the
lexicographic order of restricted growth strings, so ``{{1,2,3}}`` comes
first and the all-singletons partition comes last.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import CapExceededError, ContractError

#: Largest ground-set size accepted by the enumerators and counters.
PARTITION_CAP = 12


def check_cap(name: str, value: int) -> None:
    if value < 0:
        raise ContractError(f"{name} must be non-negative, got {value}")
    if value > PARTITION_CAP:
        raise CapExceededError(name, value, PARTITION_CAP)


@dataclass(frozen=True)
class Partition:
    """A set partition of ``{1..n}`` in canonical block order."""

    blocks: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.n < 0:
            raise ContractError(f"ground-set size must be non-negative, got {self.n}")
        seen = []
        for block in blocks:
            if not block:
                raise ContractError("partition blocks must be non-empty")
            if any(a >= b for a, b in zip(block, block[1:])):
                raise ContractError(f"block {block} is not strictly increasing")
            seen.extend(block)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ContractError(
                f"blocks {blocks} do not partition {{1..{self.n}}}"
            )
        mins = [b[0] for b in blocks]
        if mins != sorted(mins):
            raise ContractError(f"blocks {blocks} are not ordered by minimum")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        """Build a canonical partition from blocks given in any order."""
        normalized = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else 0)
        if n is None:
            n = sum(len(b) for b in normalized)
        return cls(tuple(normalized), n)

    @classmethod
    def from_rgs(cls, rgs: Sequence[int] | str) -> "Partition":
        labels = [int(c, 36) if isinstance(c, str) else int(c) for c in rgs]
        blocks: list[list[int]] = []
        for i, label in enumerate(labels, start=1):
            if label == len(blocks):
                blocks.append([i])
            elif label < len(blocks):
                blocks[label].append(i)
            else:
                raise ContractError(f"{rgs!r} is not a restricted growth string")
        return cls(tuple(tuple(b) for b in blocks), len(labels))

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def rgs(self) -> tuple[int, ...]:
        labels = [0] * self.n
        for label, block in enumerate(self.blocks):
            for i in block:
                labels[i - 1] = label
        return tuple(labels)

    def rgs_string(self) -> str:
        """Restricted growth string, e.g. ``"0010"``.

        One character per element; labels above 9 (only possible with more
        than ten blocks) are written as base-36 digits.
        """
        return "".join(_base36(label) for label in self.rgs())

    def block_string(self) -> str:
        """Block form, e.g. ``"{1,2}{3}"``; the empty partition is ``""``."""
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)

    def signature(self) -> tuple[int, ...]:
        """Block sizes in non-increasing order."""
        return tuple(sorted((len(b) for b in self.blocks), reverse=True))

    def __str__(self) -> str:
        return self.block_string()


def _base36(label: int) -> str:
    return "0123456789abcdefghijklmnopqrstuvwxyz"[label]


def iter_partitions(n: int) -> Iterator[Partition]:
    """Yield all partitions of ``{1..n}`` in restricted-growth-string order."""
    check_cap("n", n)
    if n == 0:
        yield Partition((), 0)
        return
    blocks: list[list[int]] = [[1]]

    def rec(i: int) -> Iterator[Partition]:
        # i is the 0-based position being labelled; element i + 1
        if i == n:
            yield Partition(tuple(tuple(b) for b in blocks), n)
            return
        for label in range(len(blocks) + 1):
            if label == len(blocks):
                blocks.append([i + 1])
                yield from rec(i + 1)
                blocks.pop()
            else:
                blocks[label].append(i + 1)
                yield from rec(i + 1)
                blocks[label].pop()

    yield from rec(1)


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of ``{1..n}``; the list has ``bell_number(n)`` entries."""
    return list(iter_partitions(n))


def extend_partitions(parts: Sequence[Partition]) -> list[Partition]:
    """Lift partitions of ``{1..n}`` to partitions of ``{1..n+1}``.

    Each input with k blocks yields k + 1 successors: ``n + 1`` appended to
    each block in turn, then ``{n + 1}`` as a new block.
    """
    sizes = {p.n for p in parts}
    if len(sizes) > 1:
        raise ContractError(f"partitions over mixed ground-set sizes {sorted(sizes)}")
    out: list[Partition] = []
    for p in parts:
        new = p.n + 1
        check_cap("n", new)
        for i in range(len(p.blocks)):
            blocks = list(p.blocks)
            blocks[i] = blocks[i] + (new,)
            out.append(Partition(tuple(blocks), new))
        out.append(Partition(p.blocks + ((new,),), new))
    return out


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if n == 0 or k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def stirling2(n: int, k: int) -> int:
    """Number of partitions of ``{1..n}`` into exactly ``k`` blocks."""
    check_cap("n", n)
    check_cap("k", k)
    return _stirling2(n, k)


def bell_number(n: int) -> int:
    """Number of partitions of ``{1..n}``."""
    check_cap("n", n)
    return sum(_stirling2(n, k) for k in range(n + 1))
