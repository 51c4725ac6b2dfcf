"""Trainer-side access to the network manifest + blob format.

A network is a list of layer dicts:

    {"kind": "dense", "weight": (out, in) array, "bias": (out,) array}
    {"kind": "conv2d", "weight": (k, k) array, "bias": float, "stride": s, "padding": p}
    {"kind": "tconv2d", "weight": (k, k) array, "bias": float, "stride": s}
    {"kind": "avgpool2d", "window": w, "stride": s}
    {"kind": "activation", "fn": "relu" | "tanh" | "sigmoid"}
    {"kind": "reshape", "shape": [rows, cols]}

Parameters are stored as little-endian float32, per layer weights then bias,
row-major. `write_network` produces the same bytes as the C++ writer, so a
trained model exported here loads unchanged in the verifier.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FORMAT = "gv-network"
VERSION = 1
ACTIVATIONS = ("relu", "tanh", "sigmoid")


def _params(index: int, layer: dict) -> np.ndarray:
    kind = layer.get("kind")
    if kind == "dense":
        w = np.asarray(layer["weight"], dtype=np.float64)
        b = np.asarray(layer["bias"], dtype=np.float64).ravel()
        if w.ndim != 2 or b.shape != (w.shape[0],):
            raise ValueError(f"layer {index} (dense): weight must be (out, in) and bias (out,)")
        return np.concatenate([w.ravel(), b])
    if kind in ("conv2d", "tconv2d"):
        w = np.asarray(layer["weight"], dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"layer {index} ({kind}): kernel must be square")
        return np.concatenate([w.ravel(), [float(layer["bias"])]])
    if kind in ("avgpool2d", "reshape", "activation"):
        if kind == "activation" and layer.get("fn") not in ACTIVATIONS:
            raise ValueError(f"layer {index} (activation): unsupported function {layer.get('fn')!r}")
        return np.zeros(0)
    raise ValueError(f"layer {index} ({kind}): unsupported layer kind")


def _layer_record(layer: dict) -> dict:
    kind = layer["kind"]
    if kind == "dense":
        w = np.asarray(layer["weight"])
        return {"kind": kind, "in": int(w.shape[1]), "out": int(w.shape[0])}
    if kind == "conv2d":
        return {"kind": kind, "kernel": int(np.asarray(layer["weight"]).shape[0]),
                "stride": int(layer.get("stride", 1)), "padding": int(layer.get("padding", 0))}
    if kind == "tconv2d":
        return {"kind": kind, "kernel": int(np.asarray(layer["weight"]).shape[0]),
                "stride": int(layer.get("stride", 1))}
    if kind == "avgpool2d":
        return {"kind": kind, "window": int(layer["window"]), "stride": int(layer.get("stride", 1))}
    if kind == "activation":
        return {"kind": kind, "fn": layer["fn"]}
    return {"kind": kind, "shape": [int(e) for e in layer["shape"]]}


def serialize(layers, *, name, role, input_shape, descale=None, param_set="", blob_name):
    """Returns (manifest text, blob bytes)."""
    if role not in ("decoder", "regressor"):
        raise ValueError(f"role must be 'decoder' or 'regressor', got {role!r}")
    records, chunks, offset = [], [], 0
    for i, layer in enumerate(layers):
        params = _params(i, layer)
        if not np.all(np.isfinite(params)):
            raise ValueError(f"layer {i} ({layer['kind']}): non-finite parameter")
        data = params.astype("<f4").tobytes()
        record = _layer_record(layer)
        record["offset"] = offset
        record["length"] = len(data)
        records.append(record)
        chunks.append(data)
        offset += len(data)
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "name": name,
        "role": role,
        "param_set": param_set,
        "input_shape": [int(e) for e in input_shape],
        "layers": records,
        "descale": None if descale is None else {"scale": float(descale[0]), "offset": float(descale[1])},
        "blob": blob_name,
        "blob_bytes": offset,
    }
    return json.dumps(doc, indent=2) + "\n", b"".join(chunks)


def write_network(path, layers, *, name, role, input_shape, descale=None, param_set=""):
    """Writes `path` (manifest) and the blob next to it with a .bin suffix."""
    path = Path(path)
    blob_path = path.with_suffix(".bin")
    manifest, blob = serialize(layers, name=name, role=role, input_shape=input_shape,
                               descale=descale, param_set=param_set, blob_name=blob_path.name)
    path.write_text(manifest)
    blob_path.write_bytes(blob)
    return path, blob_path


def write_composed(path, decoder_path, regressor_path):
    """Writes a composed-network manifest pairing two existing network files."""
    path = Path(path)
    doc = {"format": "gv-composed", "version": VERSION,
           "decoder": Path(decoder_path).name, "regressor": Path(regressor_path).name}
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return path


def read_network(path):
    """Parses a manifest + blob into a dict with `layers` as layer dicts."""
    path = Path(path)
    doc = json.loads(path.read_text())
    if doc.get("format") != FORMAT or doc.get("version") != VERSION:
        raise ValueError(f"{path}: not a version {VERSION} {FORMAT} manifest")
    blob = (path.parent / doc["blob"]).read_bytes()
    if len(blob) != doc["blob_bytes"]:
        raise ValueError(f"{path}: blob has {len(blob)} bytes, manifest declares {doc['blob_bytes']}")
    values = np.frombuffer(blob, dtype="<f4").astype(np.float64)
    layers, cursor = [], 0
    for i, rec in enumerate(doc["layers"]):
        if rec["offset"] != cursor:
            raise ValueError(f"{path}: layer {i} offset {rec['offset']} expected {cursor}")
        p = values[rec["offset"] // 4:(rec["offset"] + rec["length"]) // 4]
        kind = rec["kind"]
        layer = {k: v for k, v in rec.items() if k not in ("offset", "length", "in", "out", "kernel")}
        if kind == "dense":
            n = rec["in"] * rec["out"]
            layer["weight"] = p[:n].reshape(rec["out"], rec["in"])
            layer["bias"] = p[n:]
        elif kind in ("conv2d", "tconv2d"):
            layer["weight"] = p[:-1].reshape(rec["kernel"], rec["kernel"])
            layer["bias"] = float(p[-1])
        layers.append(layer)
        cursor = rec["offset"] + rec["length"]
    if cursor != len(blob):
        raise ValueError(f"{path}: layers cover {cursor} of {len(blob)} blob bytes")
    descale = doc.get("descale")
    return {
        "name": doc["name"],
        "role": doc["role"],
        "param_set": doc["param_set"],
        "input_shape": doc["input_shape"],
        "layers": layers,
        "descale": None if descale is None else (descale["scale"], descale["offset"]),
    }


def forward(layers, x, descale=None):
    """Plain numpy evaluation, the reference the exported network must match."""
    h = np.asarray(x, dtype=np.float64)
    for i, layer in enumerate(layers):
        kind = layer["kind"]
        if kind == "dense":
            h = np.asarray(layer["weight"], dtype=np.float64) @ h.ravel() + np.asarray(layer["bias"])
        elif kind == "conv2d":
            w = np.asarray(layer["weight"], dtype=np.float64)
            k, s, p = w.shape[0], layer.get("stride", 1), layer.get("padding", 0)
            padded = np.pad(h, p)
            m = (padded.shape[0] - k) // s + 1
            n = (padded.shape[1] - k) // s + 1
            out = np.empty((m, n))
            for r in range(m):
                for c in range(n):
                    out[r, c] = np.sum(padded[r * s:r * s + k, c * s:c * s + k] * w)
            h = out + layer["bias"]
        elif kind == "tconv2d":
            w = np.asarray(layer["weight"], dtype=np.float64)
            k, s = w.shape[0], layer.get("stride", 1)
            out = np.zeros(((h.shape[0] - 1) * s + k, (h.shape[1] - 1) * s + k))
            for r in range(h.shape[0]):
                for c in range(h.shape[1]):
                    out[r * s:r * s + k, c * s:c * s + k] += h[r, c] * w
            h = out + layer["bias"]
        elif kind == "avgpool2d":
            win, s = layer["window"], layer.get("stride", 1)
            m = (h.shape[0] - win) // s + 1
            n = (h.shape[1] - win) // s + 1
            h = np.array([[h[r * s:r * s + win, c * s:c * s + win].mean() for c in range(n)]
                          for r in range(m)])
        elif kind == "activation":
            fn = layer["fn"]
            if fn == "relu":
                h = np.maximum(h, 0.0)
            elif fn == "tanh":
                h = np.tanh(h)
            elif fn == "sigmoid":
                h = 1.0 / (1.0 + np.exp(-h))
            else:
                raise ValueError(f"layer {i} (activation): unsupported function {fn!r}")
        elif kind == "reshape":
            h = h.reshape(layer["shape"])
        else:
            raise ValueError(f"layer {i} ({kind}): unsupported layer kind")
    if descale is not None:
        h = descale[0] * h + descale[1]
    return h
