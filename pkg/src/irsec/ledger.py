"""Append-only hash-chained record of task publishing and result uploads.

A single-writer stand-in for the contract flow: every record commits to
its predecessor through a SHA-256 over a length-prefixed canonical byte
layout, so any mutation of a stored field breaks verification.
"""

import hashlib
import json
import struct
from dataclasses import dataclass
from enum import Enum
from typing import List

HASH_BYTES = 32


class RecordKind(Enum):
    GENESIS = "genesis"
    TASK_PUBLISH = "task_publish"
    RESULT_UPLOAD = "result_upload"


@dataclass(frozen=True)
class ContractRecord:
    kind: RecordKind
    payload_digest: bytes  # 32-byte hash of task/result metadata
    sender_id: str
    gas: float
    prev_hash: bytes
    record_hash: bytes


def _canonical_bytes(kind: RecordKind, payload_digest: bytes, sender_id: str,
                     gas: float, prev_hash: bytes) -> bytes:
    sender = sender_id.encode("utf-8")
    return b"".join([
        struct.pack(">B", list(RecordKind).index(kind)),
        struct.pack(">I", len(payload_digest)), payload_digest,
        struct.pack(">I", len(sender)), sender,
        struct.pack(">d", gas),
        struct.pack(">I", len(prev_hash)), prev_hash,
    ])


def _record_hash(kind, payload_digest, sender_id, gas, prev_hash) -> bytes:
    return hashlib.sha256(
        _canonical_bytes(kind, payload_digest, sender_id, gas, prev_hash)
    ).digest()


def payload_digest(*fields) -> bytes:
    """Canonical 32-byte digest of arbitrary metadata fields."""
    h = hashlib.sha256()
    for f in fields:
        part = repr(f).encode("utf-8")
        h.update(struct.pack(">I", len(part)))
        h.update(part)
    return h.digest()


class Ledger:
    """Single-writer append-only chain starting from a genesis record."""

    def __init__(self):
        genesis = ContractRecord(
            kind=RecordKind.GENESIS,
            payload_digest=bytes(HASH_BYTES),
            sender_id="genesis",
            gas=1.0,
            prev_hash=bytes(HASH_BYTES),
            record_hash=_record_hash(RecordKind.GENESIS, bytes(HASH_BYTES),
                                     "genesis", 1.0, bytes(HASH_BYTES)),
        )
        self._records: List[ContractRecord] = [genesis]

    def __len__(self) -> int:
        return len(self._records)

    @property
    def records(self) -> List[ContractRecord]:
        return list(self._records)

    @property
    def head_hash(self) -> bytes:
        return self._records[-1].record_hash

    def append(self, kind: RecordKind, payload_digest: bytes, sender_id: str,
               gas: float) -> ContractRecord:
        """Chain a new contract record onto the current head."""
        if kind == RecordKind.GENESIS:
            raise ValueError("genesis record exists only at initialization")
        if len(payload_digest) != HASH_BYTES:
            raise ValueError("payload_digest must be 32 bytes")
        if gas <= 0:
            raise ValueError("gas must be positive")
        prev = self.head_hash
        rec = ContractRecord(
            kind=kind, payload_digest=payload_digest, sender_id=sender_id,
            gas=gas, prev_hash=prev,
            record_hash=_record_hash(kind, payload_digest, sender_id, gas, prev),
        )
        self._records.append(rec)
        return rec

    def verify_chain(self) -> bool:
        """True iff every hash recomputes and every prev link matches."""
        return verify_records(self._records)

    def export_jsonl(self, path) -> None:
        """One JSON object per record, hashes hex-encoded."""
        with open(path, "w", encoding="utf-8") as fh:
            for idx, r in enumerate(self._records):
                fh.write(json.dumps({
                    "index": idx,
                    "kind": r.kind.value,
                    "payload_digest": r.payload_digest.hex(),
                    "sender_id": r.sender_id,
                    "gas": r.gas,
                    "prev_hash": r.prev_hash.hex(),
                    "record_hash": r.record_hash.hex(),
                }, sort_keys=True) + "\n")


def verify_records(records) -> bool:
    """Chain check over an explicit record list (genesis first)."""
    if not records:
        return False
    first = records[0]
    if first.kind != RecordKind.GENESIS or first.prev_hash != bytes(HASH_BYTES):
        return False
    prev_hash = None
    for r in records:
        expect = _record_hash(r.kind, r.payload_digest, r.sender_id, r.gas,
                              r.prev_hash)
        if r.record_hash != expect:
            return False
        if prev_hash is not None and r.prev_hash != prev_hash:
            return False
        prev_hash = r.record_hash
    return True
