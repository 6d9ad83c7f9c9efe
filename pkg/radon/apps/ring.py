# Repository:   https://github.com/PyRadon
# File Name:    radon/apps/ring.py
# Description:  Consistent hashing ring shared by the key-value atoms
#
# Copyright (C) 2026 Dieter J Kybelksties <github@kybelksties.com>
#
# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# as published by the Free Software Foundation; either version 2
# of the License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 59 Temple Place - Suite 330, Boston, MA  02111-1307, USA.
#
# @date: 2026-04-12
# @author: Dieter J Kybelksties

"""
One point per member at ``ring_hash(member name)``. A key belongs to the first member clockwise from
its hash (the smallest point >= hash, wrapping to the lowest point) and is replicated on the next
N - 1 members.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from radon.error import EmptyRingError, RingCollisionError

FNV64_OFFSET_BASIS = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def ring_hash(data: bytes | str) -> int:
    """FNV-1a, 64 bit."""
    raw = data.encode("utf-8") if isinstance(data, str) else data
    value = FNV64_OFFSET_BASIS
    for byte in raw:
        value ^= byte
        value = (value * FNV64_PRIME) & _MASK64
    return value


@dataclass(frozen=True)
class RingView:
    points: tuple[tuple[int, str], ...] = ()
    version: int = 0
    replication: int = 1

    def __post_init__(self) -> None:
        if self.replication < 1:
            raise ValueError("replication factor must be positive")
        hashes = [point for point, _ in self.points]
        if hashes != sorted(hashes) or len(set(hashes)) != len(hashes):
            raise ValueError("ring points must be sorted with unique hashes")

    @property
    def members(self) -> list[str]:
        return [member for _, member in self.points]

    @property
    def effective_replication(self) -> int:
        """The factor actually applied while the ring has fewer members than configured."""
        return max(1, min(self.replication, len(self.points)))

    def __contains__(self, member: object) -> bool:
        return any(existing == member for _, existing in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def with_member(self, member: str) -> RingView:
        """
        A new view with one more point and the next version; unchanged if the member is present.
        :raises RingCollisionError: another member already sits on the same hash
        """
        if member in self:
            return self
        point = ring_hash(member)
        for existing_point, existing in self.points:
            if existing_point == point:
                raise RingCollisionError(f"'{member}' collides with '{existing}' at {point:#018x}")
        return RingView(tuple(sorted(self.points + ((point, member),))), self.version + 1, self.replication)


def responsible_set(ring: RingView, key: bytes | str, replication: int | None = None) -> list[str]:
    """
    The members storing a key, primary first.

    :param ring: the view
    :param key: the key
    :param replication: members to return, the ring's factor when omitted
    :raises EmptyRingError: the ring has no members
    :raises ValueError: more replicas requested than members exist
    """
    if not ring.points:
        raise EmptyRingError("ring has no members")
    count = ring.replication if replication is None else replication
    if count < 1 or count > len(ring.points):
        raise ValueError(f"replication {count} not in 1..{len(ring.points)}")
    hashes = [point for point, _ in ring.points]
    start = bisect.bisect_left(hashes, ring_hash(key)) % len(hashes)
    return [ring.points[(start + offset) % len(hashes)][1] for offset in range(count)]


def successor(ring: RingView, member: str) -> str:
    """The next member clockwise from a member's point (the member itself on a one-point ring)."""
    if not ring.points:
        raise EmptyRingError("ring has no members")
    hashes = [point for point, _ in ring.points]
    index = bisect.bisect_right(hashes, ring_hash(member)) % len(hashes)
    return ring.points[index][1]
