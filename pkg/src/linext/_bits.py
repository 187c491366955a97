"""Bitset helpers. Element ``e`` is stored as bit ``1 << e``."""


def iter_bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements):
    mask = 0
    for e in elements:
        mask |= 1 << e
    return mask


def popcount(mask):
    return bin(mask).count("1")


def full_mask(n):
    """Mask with bits ``1..n`` set."""
    return ((1 << (n + 1)) - 1) ^ 1
