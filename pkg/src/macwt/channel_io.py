"""Channel-spec files.

A channel spec is a JSON document:

    {
      "K": 2,
      "input_sizes": [2, 2],
      "y_size": 4,
      "z_size": 4,
      "pmf": [...nested arrays, row-major over (x1, .., xK, y, z)...],
      "input_dist": [[0.5, 0.5], [0.3, 0.7]]          // optional
    }

``pmf[x1]..[xK][y][z]`` is P(y, z | x).  Malformed documents raise
:class:`ChannelSpecError` naming the offending field (with index path) or,
for broken JSON, the line and column.
"""

import json
from pathlib import Path

import numpy as np

from macwt.probability import InputDistribution, MacWiretapChannel


class ChannelSpecError(ValueError):
    """A channel-spec file that does not meet the schema."""


def _require(doc: dict, field: str, kind, path: str):
    if field not in doc:
        raise ChannelSpecError(f"{path}: missing required field {field!r}")
    value = doc[field]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise ChannelSpecError(f"{path}: field {field!r} must be an integer")
    if kind is list and not isinstance(value, list):
        raise ChannelSpecError(f"{path}: field {field!r} must be an array")
    return value


def _nested_shape(value, expected, path):
    """Walk nested lists checking the declared shape, collecting floats."""
    if not expected:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        raise ChannelSpecError(f"{path}: expected a number")
    if not isinstance(value, list):
        raise ChannelSpecError(f"{path}: expected an array of length {expected[0]}")
    if len(value) != expected[0]:
        raise ChannelSpecError(
            f"{path}: expected length {expected[0]}, got {len(value)}"
        )
    return [
        _nested_shape(item, expected[1:], f"{path}[{i}]")
        for i, item in enumerate(value)
    ]


def load_channel(path) -> tuple[MacWiretapChannel, InputDistribution | None]:
    """Load a channel spec; returns the channel and the optional input."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ChannelSpecError(f"{path}: cannot read ({exc})") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelSpecError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ChannelSpecError(f"{path}: top level must be an object")

    k = _require(doc, "K", int, str(path))
    input_sizes = _require(doc, "input_sizes", list, str(path))
    if len(input_sizes) != k:
        raise ChannelSpecError(
            f"{path}: input_sizes has {len(input_sizes)} entries, K={k}"
        )
    y_size = _require(doc, "y_size", int, str(path))
    z_size = _require(doc, "z_size", int, str(path))
    shape = [int(s) for s in input_sizes] + [y_size, z_size]
    pmf_raw = _require(doc, "pmf", list, str(path))
    pmf = np.array(_nested_shape(pmf_raw, shape, f"{path}: pmf"))
    try:
        channel = MacWiretapChannel(tuple(int(s) for s in input_sizes), y_size, z_size, pmf)
    except ValueError as exc:
        raise ChannelSpecError(f"{path}: pmf: {exc}") from exc

    dist = None
    if "input_dist" in doc:
        vecs = _require(doc, "input_dist", list, str(path))
        if len(vecs) != k:
            raise ChannelSpecError(
                f"{path}: input_dist has {len(vecs)} entries, K={k}"
            )
        arrays = []
        for i, (vec, size) in enumerate(zip(vecs, input_sizes)):
            checked = _nested_shape(vec, [size], f"{path}: input_dist[{i}]")
            arrays.append(np.array(checked))
        try:
            dist = InputDistribution(tuple(arrays))
        except ValueError as exc:
            raise ChannelSpecError(f"{path}: input_dist: {exc}") from exc
    return channel, dist


def save_channel(
    channel: MacWiretapChannel,
    path,
    input_dist: InputDistribution | None = None,
) -> None:
    doc = {
        "K": channel.user_count,
        "input_sizes": list(channel.input_sizes),
        "y_size": channel.y_size,
        "z_size": channel.z_size,
        "pmf": channel.pmf.tolist(),
    }
    if input_dist is not None:
        doc["input_dist"] = [p.tolist() for p in input_dist.per_user_pmf]
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
