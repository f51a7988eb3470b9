import csv
import io
import json
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from rest_framework import serializers
from rest_framework.renderers import JSONRenderer

from .serializers import RunManifestSerializer


def format_cell(value) -> str:
    """Full double precision for floats (repr round-trips); str for everything else."""
    if value is None:
        return "nan"
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n', quoting=csv.QUOTE_MINIMAL)
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        writer.writerow([format_cell(cell) for cell in row])
    return buffer.getvalue()


def manifest_path_for(out: Optional[str]) -> Optional[Path]:
    if not out:
        return None
    return Path(f"{out}.manifest.json")


def render_manifest(data: dict) -> bytes:
    serializer = RunManifestSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return JSONRenderer().render(serializer.data, renderer_context={'indent': 2})


def load_json(path: str, field: str = 'config') -> dict:
    """A JSON object from disk; problems are reported against `field`."""
    try:
        with open(path, encoding='utf-8') as handle:
            document = json.load(handle)
    except OSError as exc:
        raise serializers.ValidationError({field: f"Cannot read {path}: {exc.strerror}"})
    except json.JSONDecodeError as exc:
        raise serializers.ValidationError({field: f"Malformed JSON in {path}: {exc.msg} (line {exc.lineno})"})
    if not isinstance(document, dict):
        raise serializers.ValidationError({field: f"{path} must hold a JSON object."})
    return document


def load_manifest(path: str) -> dict:
    serializer = RunManifestSerializer(data=load_json(path, field='manifest'))
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


def parse_floats(text: str, name: str) -> list:
    try:
        values = [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise serializers.ValidationError({name: f"Expected comma separated numbers, got {text!r}."})
    if not values:
        raise serializers.ValidationError({name: "At least one value is required."})
    return values
