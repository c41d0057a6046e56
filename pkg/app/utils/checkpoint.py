"""
Network checkpoint files

A record is the magic bytes b"ORLN1", the layer count, the layer sizes as
unsigned 32-bit little-endian integers, then every parameter as a 64-bit
little-endian float (W0, b0, W1, b1, ... in row-major order).
A checkpoint file is a sequence of records, each preceded by one manifest
line such as "action=0 role=eval".
"""

from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from app.logging.logging_config import get_logger
from app.services.neural import LINEAR, RELU, Mlp

logger = get_logger(__name__)

MAGIC = b"ORLN1"
_SIZE = np.dtype("<u4")
_PARAM = np.dtype("<f8")


def encode_mlp(net: Mlp) -> bytes:
    header = np.array([len(net.sizes), *net.sizes], dtype=_SIZE).tobytes()
    body = b"".join(np.ascontiguousarray(p, dtype=_PARAM).tobytes() for p in net.parameters())
    return MAGIC + header + body


def _record_length(data: bytes, offset: int) -> int:
    start = offset + len(MAGIC)
    count = int(np.frombuffer(data, dtype=_SIZE, count=1, offset=start)[0])
    sizes = np.frombuffer(data, dtype=_SIZE, count=count, offset=start + _SIZE.itemsize).astype(int)
    n_params = sum(int(a) * int(b) + int(b) for a, b in zip(sizes[:-1], sizes[1:]))
    return len(MAGIC) + _SIZE.itemsize * (count + 1) + _PARAM.itemsize * n_params


def decode_mlp(data: bytes, offset: int = 0) -> Mlp:
    """Rebuild a network from a record starting at offset."""
    if data[offset:offset + len(MAGIC)] != MAGIC:
        raise ValueError("not an ORLN1 network record")
    if offset + _record_length(data, offset) > len(data):
        raise ValueError("truncated network record")

    position = offset + len(MAGIC)
    count = int(np.frombuffer(data, dtype=_SIZE, count=1, offset=position)[0])
    position += _SIZE.itemsize
    sizes = tuple(int(s) for s in np.frombuffer(data, dtype=_SIZE, count=count, offset=position))
    position += _SIZE.itemsize * count
    if count < 2 or any(s < 1 for s in sizes):
        raise ValueError(f"invalid layer sizes {sizes}")

    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        w = np.frombuffer(data, dtype=_PARAM, count=fan_in * fan_out, offset=position)
        position += _PARAM.itemsize * fan_in * fan_out
        b = np.frombuffer(data, dtype=_PARAM, count=fan_out, offset=position)
        position += _PARAM.itemsize * fan_out
        weights.append(w.astype(float).reshape(fan_in, fan_out))
        biases.append(b.astype(float))
    activations = (RELU,) * (len(sizes) - 2) + (LINEAR,)
    return Mlp(sizes=sizes, weights=weights, biases=biases, activations=activations)


def _manifest(fields: Dict[str, str]) -> bytes:
    return (" ".join(f"{key}={value}" for key, value in fields.items()) + "\n").encode("ascii")


def write_checkpoint(path: Union[str, Path], entries: List[Tuple[Dict[str, str], Mlp]]) -> None:
    """Write (manifest fields, network) pairs to path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        for fields, net in entries:
            f.write(_manifest(fields))
            f.write(encode_mlp(net))
    logger.info(f"💾 Wrote checkpoint with {len(entries)} networks to {path}")


def read_checkpoint(path: Union[str, Path]) -> List[Tuple[Dict[str, str], Mlp]]:
    data = Path(path).read_bytes()
    entries: List[Tuple[Dict[str, str], Mlp]] = []
    offset = 0
    while offset < len(data):
        end = data.find(b"\n", offset)
        if end < 0:
            raise ValueError(f"missing manifest line at byte {offset}")
        try:
            fields = dict(part.split("=", 1) for part in data[offset:end].decode("ascii").split())
        except ValueError as e:
            raise ValueError(f"malformed manifest line at byte {offset}") from e
        offset = end + 1
        entries.append((fields, decode_mlp(data, offset)))
        offset += _record_length(data, offset)
    logger.debug(f"Read {len(entries)} networks from {path}")
    return entries
