from __future__ import annotations

import csv
import enum
import os
from dataclasses import asdict, dataclass


class Method(str, enum.Enum):
    BRUTE_FORCE = "BruteForce"
    HASH_ENERGY = "HashEnergy"
    DIVISOR_METHOD = "DivisorMethod"
    STRIP_ENERGY = "StripEnergy"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CountRecord:
    N: int
    s: int
    count: int
    method: Method
    wall_time: float = 0.0

    def diagonal_bound(self) -> int:
        """Solutions obtained by repeating the first s points."""
        return (self.N + 1) ** (3 * self.s)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["method"] = self.method.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CountRecord":
        return cls(int(d["N"]), int(d["s"]), int(d["count"]), Method(d["method"]),
                   float(d.get("wall_time", d.get("seconds", 0.0))))


CSV_FIELDS = ("N", "s", "count", "method", "seconds")


def append_csv(path, record: CountRecord) -> None:
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        w = csv.writer(fh)
        if new:
            w.writerow(CSV_FIELDS)
        w.writerow([record.N, record.s, record.count, record.method.value,
                    f"{record.wall_time:.6f}"])


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        return [CountRecord.from_dict(row) for row in csv.DictReader(fh)]
