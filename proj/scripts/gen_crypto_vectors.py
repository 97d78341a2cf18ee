#!/usr/bin/env python3
"""Regenerates vectors/crypto.tsv from an independent implementation.

The TSV is committed; the C++ unit tests replay it. Rerun only if the
primitive definitions change on purpose, and review the diff.
"""

import hashlib
import hmac
from pathlib import Path

from cryptography.hazmat.primitives.ciphers.aead import AESGCM

OUT = Path(__file__).resolve().parent.parent / "vectors" / "crypto.tsv"


def hmac256(key: bytes, msg: bytes) -> bytes:
    return hmac.new(key, msg, hashlib.sha256).digest()


def subkeys(master: bytes, lam: int) -> tuple[bytes, bytes, bytes]:
    n = lam // 8
    return (
        hmac256(master, b"NIMS/F1")[:n],
        hmac256(master, b"NIMS/F2")[:n],
        hmac256(master, b"NIMS/SE")[:n],
    )


def prf_f1(key: bytes, ctr: int, w: bytes, lam: int) -> bytes:
    return hmac256(key, ctr.to_bytes(8, "big") + w)[: lam // 8]


def prf_f2(key: bytes, ind: bytes, lam: int) -> bytes:
    return hmac256(key, ind)[: lam // 8]


def hash_keyword_bits(w: bytes, iota: int) -> str:
    d = hashlib.sha256(w).digest()
    return "".join(str((d[i // 8] >> (7 - i % 8)) & 1) for i in range(iota))


def hash_h1(data: bytes) -> bytes:
    return hashlib.sha512(data).digest()


def main() -> None:
    rows: list[list[str]] = []
    key_a = bytes(range(32))
    key_b = b"\xaa" * 32
    key_c = hashlib.sha256(b"vector-key-c").digest()

    for master in (key_a, key_b, key_c):
        k1, k2, k3 = subkeys(master, 256)
        rows.append(["subkeys", master.hex(), k1.hex(), k2.hex(), k3.hex()])

    f1_cases = [
        (key_a, 0, b"cat"),
        (key_a, 1, b"cat"),  # counter in the message, not appended to w
        (key_a, 1, b"a"),
        (key_a, 0, b"\x00\x00\x00\x00\x00\x00\x00\x01a"),  # must differ from above
        (key_b, 2**64 - 1, b"kw-000"),
        (key_c, 12345, "naïve".encode()),
        (key_c, 7, b""),
    ]
    for key, ctr, w in f1_cases:
        rows.append(["prf_f1", key.hex(), str(ctr), w.hex(), prf_f1(key, ctr, w, 256).hex()])

    for key, ind in [(key_a, b"doc-000001"), (key_b, b"x"), (key_c, b"A" * 100)]:
        rows.append(["prf_f2", key.hex(), ind.hex(), prf_f2(key, ind, 256).hex()])

    for w, iota in [
        (b"cat", 64),
        (b"cat", 32),
        (b"cat", 8),
        (b"dog", 64),
        (b"kw-017", 16),
        (b"", 64),
        (b"cat", 256),
    ]:
        rows.append(["hash_keyword", w.hex(), str(iota), hash_keyword_bits(w, iota)])

    h1_cases = [
        b"",
        b"abc",
        b"\x00" * 32 + b"\x00",  # chain address preimage shape
        b"\x00" * 32 + b"\x01",  # chain pad preimage shape
        bytes(range(256)),
    ]
    for data in h1_cases:
        rows.append(["hash_h1", data.hex(), hash_h1(data).hex()])

    # Decryption fixtures pin the blob layout: nonce(12) || ciphertext || tag(16).
    aead_cases = [
        (key_a, b"\x13" * 12, b"doc-000042"),
        (key_b, b"\x00" * 12, b""),
        (key_c, bytes(range(12)), b"p" * 300),
    ]
    for key, nonce, pt in aead_cases:
        blob = nonce + AESGCM(key).encrypt(nonce, pt, None)
        rows.append(["aead_dec", key.hex(), blob.hex(), pt.hex()])
    # Tamper each region: nonce, ciphertext body, tag.
    key, nonce, pt = aead_cases[0]
    good = bytearray(nonce + AESGCM(key).encrypt(nonce, pt, None))
    for flip in (0, 14, len(good) - 1):
        bad = bytearray(good)
        bad[flip] ^= 0x01
        rows.append(["aead_fail", key.hex(), bytes(bad).hex()])

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w") as f:
        for row in rows:
            f.write("\t".join(row) + "\n")
    print(f"wrote {len(rows)} vectors to {OUT}")


if __name__ == "__main__":
    main()
