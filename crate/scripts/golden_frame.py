#!/usr/bin/env python3
"""Writes the golden data-frame fixture without using the Rust code.

Broadcast destination, source 00:00:00:00:00:01, one payload octet 0xAB.
Outputs <prefix>.hex (buffered octets) and <prefix>.symbols (on-air stream).
"""
import sys
import zlib


def recode(bits_lsb):
    """Runs of two or more ones become +1 above the run and -1 at its bottom;
    then adjacent (+1,-1) pairs fold to (0,+1), scanning upward."""
    n = len(bits_lsb)
    d = [0] * (n + 1)
    i = 0
    while i < n:
        if bits_lsb[i] == 0:
            i += 1
            continue
        j = i
        while j < n and bits_lsb[j] == 1:
            j += 1
        if j - i == 1:
            d[i] = 1
        else:
            d[i] = -1
            d[j] = 1
        i = j
    for k in range(n):
        if d[k] == -1 and d[k + 1] == 1:
            d[k], d[k + 1] = 1, 0
    assert sum(v << k for k, v in enumerate(d)) == sum(b << k for k, b in enumerate(bits_lsb))
    return d


def main(prefix):
    dest = bytes([0xFF] * 6)
    src = bytes([0, 0, 0, 0, 0, 1])
    payload = bytes([0xAB])
    header = b"\xaa\xaa" + dest + src + b"\x00" + len(payload).to_bytes(2, "big") + b"\xaa\xaa"
    crc = zlib.crc32(payload).to_bytes(4, "big")
    octets = header + payload + crc

    with open(prefix + ".hex", "w") as f:
        for off in range(0, len(octets), 16):
            chunk = octets[off:off + 16]
            f.write("%08x:%s\n" % (off, "".join(" %02x" % b for b in chunk)))

    def binary(bs):
        return "".join("+" if (b >> j) & 1 else "-" for b in bs for j in range(8))

    bits_lsb = [(int.from_bytes(payload, "big") >> k) & 1 for k in range(8 * len(payload))]
    digits = recode(bits_lsb)
    body = "".join({1: "+", 0: "0", -1: "-"}[v] for v in reversed(digits))
    stream = binary(header) + body + binary(crc)
    with open(prefix + ".symbols", "w") as f:
        for off in range(0, len(stream), 64):
            f.write(stream[off:off + 64] + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
