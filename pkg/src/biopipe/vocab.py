"""Symbol <-> id mappings with a reserved unknown entry."""

from __future__ import annotations

from typing import Iterable

UNK = "<unk>"


class Vocab:
    """Immutable string-to-id table; id 0 is always the unknown symbol."""

    def __init__(self, symbols: Iterable[str], extra: Iterable[str] = ()):
        seen = {UNK}
        items = [UNK]
        for sym in list(extra) + sorted(set(symbols)):
            if sym not in seen:
                seen.add(sym)
                items.append(sym)
        self.symbols: list[str] = items
        self.index: dict[str, int] = {s: i for i, s in enumerate(items)}

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.index

    def id(self, symbol: str) -> int:
        return self.index.get(symbol, 0)

    def ids(self, symbols: Iterable[str]) -> list[int]:
        get = self.index.get
        return [get(s, 0) for s in symbols]

    def symbol(self, idx: int) -> str:
        return self.symbols[idx]

    def to_json(self) -> list[str]:
        return list(self.symbols)

    @classmethod
    def from_json(cls, symbols: list[str]) -> "Vocab":
        v = cls.__new__(cls)
        v.symbols = list(symbols)
        v.index = {s: i for i, s in enumerate(v.symbols)}
        return v


class ClosedVocab:
    """Label inventory without an unknown entry (tag sets, relation sets)."""

    def __init__(self, symbols: Iterable[str]):
        self.symbols: list[str] = sorted(set(symbols))
        self.index: dict[str, int] = {s: i for i, s in enumerate(self.symbols)}

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.index

    def id(self, symbol: str) -> int:
        return self.index[symbol]

    def ids(self, symbols: Iterable[str]) -> list[int]:
        return [self.index[s] for s in symbols]

    def symbol(self, idx: int) -> str:
        return self.symbols[idx]

    def to_json(self) -> list[str]:
        return list(self.symbols)

    @classmethod
    def from_json(cls, symbols: list[str]) -> "ClosedVocab":
        v = cls.__new__(cls)
        v.symbols = list(symbols)
        v.index = {s: i for i, s in enumerate(v.symbols)}
        return v
