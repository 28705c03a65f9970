"""명령줄 진입점: python -m equivect <subcommand> --spec FILE [options]

결과는 stdout 에 JSON (또는 --format table), 오류는 JSON 한 줄과 종료 코드로 보고합니다.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from typing import Sequence

from . import checks, clutching, semigroup
from .characters import format_table, subgroup_table
from .config import Settings, configure_logging, load_settings
from .errors import EquivectError, InvalidSpecError
from .groups import Subgroup
from .spec_io import context_from_spec, load_spec, rep_matrices

logger = logging.getLogger(__name__)

COMMANDS = ("table", "stabilizers", "semigroup", "classify", "chern-demo", "check")


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equivect", description="Equivariant vector bundles over RP^2 for finite actions.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--spec", required=True, help="GroupSpec JSON file (schema equivect-spec/1)")
    parser.add_argument("--chi", type=int, default=0, help="index into the canonical Irr(H) ordering")
    parser.add_argument("--rank", type=int, default=settings.max_rank)
    parser.add_argument("--tolerance", type=float, default=settings.tolerance)
    parser.add_argument("--samples", type=int, default=settings.samples)
    parser.add_argument("--format", choices=("json", "table"), default="json")
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--log-level", default=settings.log_level)
    return parser


def _render(report: dict) -> str:
    lines = []
    width = max((len(k) for k in report), default=0)
    for key, value in report.items():
        text = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
        lines.append(f"{key.ljust(width)}  {text}")
    return "\n".join(lines)


def _table_text(context) -> str:
    st, _ = semigroup.build_constraints(context, "RP2")
    named = {"G": Subgroup.whole(context.assignment.group), "H": context.h,
             "stab(d-1)": st.stab_minus, "stab(d0)": st.stab_0, "stab(d1)": st.stab_1}
    blocks = [f"{name} (order {sub.order})\n{format_table(subgroup_table(sub)[0])}" for name, sub in named.items()]
    return "\n\n".join(blocks)


def run_command(args: argparse.Namespace, settings: Settings) -> tuple[int, dict | str]:
    # CLI 옵션이 환경 변수 기본값보다 우선합니다. 이후 모든 단계는 이 settings 를 받습니다.
    if args.rank < 1:
        raise InvalidSpecError("--rank must be at least 1")
    if args.samples < 2:
        raise InvalidSpecError("--samples must be at least 2")
    settings = replace(settings, max_rank=args.rank, tolerance=args.tolerance, samples=args.samples, seed=args.seed)
    spec = load_spec(args.spec)
    context = context_from_spec(spec, args.chi, settings)
    if args.command == "table":
        if args.format == "table":
            return 0, _table_text(context)
        return 0, semigroup.tables_report(context)
    if args.command == "stabilizers":
        return 0, semigroup.stabilizers_report(context)
    if args.command == "semigroup":
        return 0, semigroup.semigroup_report(context, args.rank, settings)
    if args.command == "classify":
        return 0, semigroup.classify_report(context, args.rank, settings)
    if args.command == "chern-demo":
        out = clutching.chern_demo(context, rep_matrices(spec), settings=settings)
        return (0 if out["agrees"] else 1), out
    out = checks.run_checks(context, rep_matrices(spec), settings, args.rank)
    return (0 if out["ok"] else 1), out


def main(argv: Sequence[str] | None = None) -> int:
    # 1) 설정 로드: 잘못된 환경 변수도 JSON 오류로 보고합니다
    try:
        settings = load_settings()
    except EquivectError as e:
        print(json.dumps(e.to_json()))
        return e.exit_code
    # 2) 인자 파싱 후 로깅 구성
    args = build_parser(settings).parse_args(argv)
    configure_logging(args.log_level)
    # 3) 명령 실행
    try:
        code, out = run_command(args, settings)
    except EquivectError as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(json.dumps(e.to_json()))
        return e.exit_code
    if isinstance(out, str):
        print(out)
    elif args.format == "table":
        print(_render(out))
    else:
        print(json.dumps(out, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
