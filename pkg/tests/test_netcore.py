import pytest
from hypothesis import given
from hypothesis import strategies as st

from netlab.netcore import (
    Address,
    AddressError,
    Prefix,
    as_number,
    longest_prefix_match,
    parse_interface_address,
    parse_prefix,
)


def lpm_by_scan(entries, address):
    """Independent oracle: linear scan keeping the longest container."""
    best = None
    best_len = -1
    for prefix, payload in entries:
        if prefix.contains(address) and prefix.length > best_len:
            best, best_len = payload, prefix.length
    return best


class TestParsing:
    def test_interface_notation_splits_address_and_network(self):
        address, length = parse_interface_address("192.168.100.1/30")
        assert address == Address.parse("192.168.100.1")
        assert length == 30
        assert parse_prefix("192.168.100.1/30") == parse_prefix("192.168.100.0/30")

    def test_default_prefix_matches_everything(self):
        default = parse_prefix("0.0.0.0/0")
        assert default.contains(Address.parse("255.255.255.255"))
        assert default.contains(Address.parse("0.0.0.0"))

    def test_host_bits_cleared(self):
        assert str(parse_prefix("10.10.1.65/26")) == "10.10.1.64/26"

    @pytest.mark.parametrize(
        "text",
        ["10.1.2", "10.1.2.3.4", "10.1.2.256/8", "1.2.3.4/33", "1.2.3.4", "a.b.c.d/8", "1.2.3.4/x"],
    )
    def test_malformed_inputs_rejected(self, text):
        with pytest.raises(AddressError):
            parse_prefix(text)

    def test_as_number_range(self):
        assert as_number(101) == 101
        for bad in (0, 65536, -3):
            with pytest.raises(AddressError):
                as_number(bad)


class TestContains:
    def test_first_host_of_subnet(self):
        assert parse_prefix("10.10.1.64/26").contains(Address.parse("10.10.1.65"))

    def test_outside_range(self):
        assert not parse_prefix("10.10.1.64/26").contains(Address.parse("10.10.1.129"))

    def test_backbone_supernet(self):
        assert parse_prefix("192.168.0.0/16").contains(Address.parse("192.168.100.254"))


class TestLongestPrefixMatch:
    def test_most_specific_wins(self):
        table = [
            (parse_prefix("192.168.1.0/25"), "low"),
            (parse_prefix("192.168.1.128/25"), "high"),
            (parse_prefix("0.0.0.0/0"), "default"),
        ]
        address = Address.parse("192.168.1.130")
        expected = lpm_by_scan(table, address)
        assert expected == "high"
        assert longest_prefix_match(table, address) == expected

    def test_empty_table(self):
        assert longest_prefix_match([], Address.parse("1.2.3.4")) is None

    def test_nested_prefixes(self):
        table = [
            (parse_prefix("10.10.1.0/26"), "small"),
            (parse_prefix("10.10.0.0/16"), "big"),
        ]
        address = Address.parse("10.10.1.2")
        expected = lpm_by_scan(table, address)
        assert expected == "small"
        assert longest_prefix_match(table, address) == expected


addresses = st.integers(min_value=0, max_value=0xFFFFFFFF).map(Address)
lengths = st.integers(min_value=0, max_value=32)


class TestProperties:
    @given(addresses)
    def test_address_text_round_trip(self, address):
        assert Address.parse(str(address)) == address

    @given(addresses, lengths)
    def test_prefix_round_trip_and_normalization(self, address, length):
        prefix = Prefix.of(address, length)
        assert parse_prefix(str(prefix)) == prefix
        assert prefix.network.value & ~prefix.mask & 0xFFFFFFFF == 0
        assert prefix.contains(address)

    @given(
        st.lists(st.tuples(addresses, lengths), max_size=12),
        addresses,
    )
    def test_lpm_equals_linear_scan(self, raw_entries, address):
        table = {}
        for addr, length in raw_entries:
            table[Prefix.of(addr, length)] = f"{addr}/{length}"
        entries = sorted(table.items(), key=lambda kv: kv[0])
        assert longest_prefix_match(entries, address) == lpm_by_scan(entries, address)
