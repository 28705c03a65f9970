"""GroupSpec 문서 로딩: 치환 생성원으로 주어진 유한군과 각 생성원의 회전 rho_bar.

형식이 잘못된 값은 모두 InvalidSpecError (종료 코드 2) 로 바뀝니다.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .config import SPEC_SCHEMA, Settings
from .cyclotomic import CycloNum
from .errors import InvalidSpecError
from .geometry import ExactMat3, ImageTag, RotationAssignment, make_assignment, rotation_a, rotation_b, standard_rotations
from .groups import build_group
from .semigroup import ClassificationContext, build_context

logger = logging.getLogger(__name__)

_NAMED = {"T_gen": "T", "O_gen": "O", "I_gen": "I"}


@dataclass(frozen=True)
class GroupSpec:
    name: str
    generators: tuple
    rho_bar: tuple[dict, ...]
    expected: ImageTag | None = None
    rep: tuple | None = None
    description: str = ""

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> GroupSpec:
        if not isinstance(data, dict):
            raise InvalidSpecError("a group spec must be a JSON object")
        schema = data.get("schema", SPEC_SCHEMA)
        if schema != SPEC_SCHEMA:
            raise InvalidSpecError(f"unsupported spec schema {schema!r}, expected {SPEC_SCHEMA!r}")
        for key in ("name", "generators", "rho_bar"):
            if key not in data:
                raise InvalidSpecError(f"group spec is missing {key!r}")
        for key in ("generators", "rho_bar"):
            if not isinstance(data[key], list):
                raise InvalidSpecError(f"{key!r} must be a list, got {type(data[key]).__name__}")
        if len(data["generators"]) != len(data["rho_bar"]):
            raise InvalidSpecError("generators and rho_bar must have the same length")
        expected = data.get("image")
        rep = data.get("rep")
        return cls(
            name=str(data["name"]),
            generators=tuple(data["generators"]),
            rho_bar=tuple(data["rho_bar"]),
            expected=ImageTag.parse(expected) if expected else None,
            rep=tuple(rep) if rep is not None else None,
            description=str(data.get("description", "")),
        )


def load_spec(source: str | Path | dict) -> GroupSpec:
    """파일 경로, JSON 문자열, 또는 이미 파싱된 dict 에서 읽습니다."""
    if isinstance(source, dict):
        return GroupSpec.from_json(source)
    text = str(source)
    try:
        if text.lstrip().startswith("{"):
            data = json.loads(text)
        else:
            data = json.loads(Path(text).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise InvalidSpecError(f"spec file not found: {text}") from e
    except json.JSONDecodeError as e:
        raise InvalidSpecError(f"spec is not valid JSON: {e}") from e
    return GroupSpec.from_json(data)


def _int_field(entry: dict, key: str, default: int | None = None) -> int:
    value = entry.get(key, default)
    # bool 은 int 의 하위 클래스라 따로 거릅니다
    if isinstance(value, bool):
        raise InvalidSpecError(f"rho_bar field {key!r} must be an integer, got {value!r}")
    try:
        return int(value)
    except (TypeError, ValueError) as e:
        raise InvalidSpecError(f"rho_bar field {key!r} must be an integer, got {value!r}") from e


def rho_entry(entry: dict) -> ExactMat3:
    if not isinstance(entry, dict) or len(entry) not in (1, 2):
        raise InvalidSpecError(f"malformed rho_bar entry {entry!r}")
    if "a_n" in entry:
        n = _int_field(entry, "a_n")
        if n < 1:
            raise InvalidSpecError("a_n needs n >= 1")
        m = rotation_a(n)
        out = ExactMat3.identity(m.conductor)
        for _ in range(_int_field(entry, "power", 1) % n):
            out = out @ m
        return out
    if "b" in entry:
        return rotation_b()
    if "identity" in entry:
        return ExactMat3.identity()
    if "matrix" in entry:
        return ExactMat3.from_json(entry["matrix"])
    for key, kind in _NAMED.items():
        if key in entry:
            gens = standard_rotations(ImageTag(kind))  # type: ignore[arg-type]
            idx = _int_field(entry, key)
            if not 0 <= idx < len(gens):
                raise InvalidSpecError(f"{key} index {idx} out of range")
            return gens[idx]
    raise InvalidSpecError(f"unknown rho_bar entry {entry!r}")


def _complex_entry(c) -> complex:
    if isinstance(c, dict):
        return CycloNum.from_json(c).to_complex()
    if isinstance(c, (list, tuple)) and len(c) == 2:
        return complex(float(c[0]), float(c[1]))
    return complex(c)


def rep_matrices(spec: GroupSpec) -> list[np.ndarray] | None:
    """생성원별 유니터리 행렬. 성분은 숫자, [re, im] 쌍, 또는 원분체 JSON 입니다."""
    if spec.rep is None:
        return None
    try:
        mats = [np.array([[_complex_entry(c) for c in row] for row in m], dtype=complex) for m in spec.rep]
    except (TypeError, ValueError) as e:
        raise InvalidSpecError(f"malformed rep matrix: {e}") from e
    if any(m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape != mats[0].shape for m in mats):
        raise InvalidSpecError("rep matrices must be square and of one size")
    return mats


def build_assignment(spec: GroupSpec, settings: Settings | None = None) -> RotationAssignment:
    settings = settings or Settings()
    group = build_group(spec.generators, cap=settings.group_cap, name=spec.name)
    return make_assignment(group, [rho_entry(e) for e in spec.rho_bar], spec.expected)


def context_from_spec(spec: GroupSpec, chi: int = 0, settings: Settings | None = None) -> ClassificationContext:
    assignment = build_assignment(spec, settings)
    logger.info("loaded %s: |G|=%d, image %s", spec.name, assignment.group.order, assignment.image_tag)
    return build_context(assignment, chi, name=spec.name)
