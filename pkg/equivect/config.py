import logging
import os
import sys
from dataclasses import dataclass

from dotenv import load_dotenv

from .errors import InvalidSpecError

REPORT_SCHEMA = "equivect-report/1"
SPEC_SCHEMA = "equivect-spec/1"


@dataclass(frozen=True)
class Settings:
    group_cap: int = 10_000
    hilbert_cap: int = 100_000
    max_rank: int = 2
    tolerance: float = 1e-9
    samples: int = 4096
    seed: int = 0
    log_level: str = "WARNING"
    mcp_host: str = "127.0.0.1"
    mcp_port: int = 8765
    mcp_path: str = "/mcp"


def _env(name: str, default, cast):
    # 값이 비어 있으면 기본값, 변환에 실패하면 어떤 변수가 잘못됐는지 알려줍니다
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError as e:
        raise InvalidSpecError(f"{name}={raw!r} is not a valid {cast.__name__}") from e


def load_settings() -> Settings:
    """환경 변수(EQUIVECT_*)에서 설정을 읽습니다. .env 파일이 있으면 먼저 로드합니다."""
    load_dotenv()
    return Settings(
        group_cap=_env("EQUIVECT_GROUP_CAP", Settings.group_cap, int),
        hilbert_cap=_env("EQUIVECT_HILBERT_CAP", Settings.hilbert_cap, int),
        max_rank=_env("EQUIVECT_MAX_RANK", Settings.max_rank, int),
        tolerance=_env("EQUIVECT_TOLERANCE", Settings.tolerance, float),
        samples=_env("EQUIVECT_SAMPLES", Settings.samples, int),
        seed=_env("EQUIVECT_SEED", Settings.seed, int),
        log_level=_env("EQUIVECT_LOG_LEVEL", Settings.log_level, str).upper(),
        mcp_host=_env("EQUIVECT_MCP_HOST", Settings.mcp_host, str),
        mcp_port=_env("EQUIVECT_MCP_PORT", Settings.mcp_port, int),
        mcp_path=_env("EQUIVECT_MCP_PATH", Settings.mcp_path, str),
    )


def configure_logging(level: str = "WARNING") -> None:
    # stdout 은 JSON 보고서 전용이므로 로그는 stderr 로 보냅니다
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[%(levelname)s] %(name)s: %(message)s"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
