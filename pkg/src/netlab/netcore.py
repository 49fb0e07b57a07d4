"""IPv4 address and prefix arithmetic.

Everything else in the simulator is built on these two value types:
32-bit host addresses and network prefixes with a mask length. All
values are immutable and ordered, so they can be used as dict keys and
sorted into canonical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, TypeVar

__all__ = [
    "Address",
    "Prefix",
    "AddressError",
    "as_number",
    "parse_prefix",
    "parse_interface_address",
    "longest_prefix_match",
]

_MAX32 = 0xFFFFFFFF


class AddressError(ValueError):
    """Malformed address, prefix or AS number text."""


def _mask(length: int) -> int:
    return (_MAX32 << (32 - length)) & _MAX32


@dataclass(frozen=True, order=True)
class Address:
    """A 32-bit IPv4 host address."""

    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value <= _MAX32:
            raise AddressError(f"address value out of range: {self.value}")

    @classmethod
    def parse(cls, text: str) -> "Address":
        parts = text.split(".")
        if len(parts) != 4:
            raise AddressError(f"malformed address {text!r}: expected a.b.c.d")
        value = 0
        for part in parts:
            if not part.isdigit() or (len(part) > 1 and part[0] == "0"):
                raise AddressError(f"malformed address {text!r}: bad octet {part!r}")
            octet = int(part)
            if octet > 255:
                raise AddressError(f"malformed address {text!r}: octet {octet} > 255")
            value = (value << 8) | octet
        return cls(value)

    def __str__(self) -> str:
        v = self.value
        return f"{v >> 24}.{(v >> 16) & 0xFF}.{(v >> 8) & 0xFF}.{v & 0xFF}"


@dataclass(frozen=True, order=True)
class Prefix:
    """A network prefix: masked network address plus mask length."""

    network: Address
    length: int

    def __post_init__(self) -> None:
        if not 0 <= self.length <= 32:
            raise AddressError(f"prefix length out of range: {self.length}")
        if self.network.value & ~_mask(self.length) & _MAX32:
            raise AddressError(f"host bits set in network address {self}")

    @classmethod
    def of(cls, address: Address, length: int) -> "Prefix":
        """The prefix containing `address`, with host bits cleared."""
        if not 0 <= length <= 32:
            raise AddressError(f"prefix length out of range: {length}")
        return cls(Address(address.value & _mask(length)), length)

    @property
    def mask(self) -> int:
        return _mask(self.length)

    def contains(self, address: Address) -> bool:
        return address.value & self.mask == self.network.value

    def __str__(self) -> str:
        return f"{self.network}/{self.length}"


def parse_prefix(text: str) -> Prefix:
    """Parse `a.b.c.d/len` into a normalized Prefix (host bits cleared)."""
    address, length = parse_interface_address(text)
    return Prefix.of(address, length)


def parse_interface_address(text: str) -> Tuple[Address, int]:
    """Parse interface notation `a.b.c.d/len` into (host address, length)."""
    head, sep, tail = text.partition("/")
    if not sep:
        raise AddressError(f"malformed prefix {text!r}: expected a.b.c.d/len")
    address = Address.parse(head)
    if not tail.isdigit():
        raise AddressError(f"malformed prefix {text!r}: bad length {tail!r}")
    length = int(tail)
    if length > 32:
        raise AddressError(f"prefix length out of range: {length}")
    return address, length


def as_number(value: int) -> int:
    """Validate an autonomous-system number (1-65535)."""
    if not 1 <= value <= 65535:
        raise AddressError(f"AS number out of range: {value}")
    return value


T = TypeVar("T")


def longest_prefix_match(
    entries: Iterable[Tuple[Prefix, T]], address: Address
) -> Optional[T]:
    """Payload of the longest prefix containing `address`, or None.

    Callers guarantee prefixes are unique, so ties cannot occur.
    """
    best: Optional[Tuple[int, T]] = None
    for prefix, payload in entries:
        if prefix.contains(address) and (best is None or prefix.length > best[0]):
            best = (prefix.length, payload)
    return None if best is None else best[1]
