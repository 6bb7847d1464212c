"""
雙成分 Curie–Weiss–Potts 能量地景分析工具
命令列進入點
"""

import sys
import logging
import argparse
from typing import List, Optional

from core.config import ConfigManager
from core.exceptions import DomainError
from core.logger import LoggerManager
from core.orchestrator import FORMATS, RunConfig, run
from utils.data_helpers import parse_bool, parse_float, parse_point, parse_range


LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


class _ArgumentParser(argparse.ArgumentParser):
    """用法錯誤時只輸出一行原因並以代碼 2 結束"""

    def error(self, message):
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(2)


def _global_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--output', default=None, help="輸出檔案（預設標準輸出）")
    parent.add_argument('--format', choices=FORMATS, default=None, help="輸出格式")
    parent.add_argument('--seed', type=int, default=0, help="隨機檢查的種子")
    parent.add_argument('--config', dest='config_path', default=None, help="config.ini 路徑")
    parent.add_argument('--log-level', choices=LOG_LEVELS, default='INFO')
    parent.add_argument('--log-dir', default=None, help="日誌目錄（寫入 <dir>/<timestamp>/Log.txt）")
    return parent


def _model_flags(parser: argparse.ArgumentParser, with_point: bool = False) -> None:
    parser.add_argument('--q', type=int, default=3)
    parser.add_argument('--beta', required=True)
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument('--j', dest='J')
    group.add_argument('--no-componentwise', action='store_true')
    if with_point:
        parser.add_argument('--point', required=True, help="以逗號分隔的完整或約化座標")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog='cwp', description="雙成分 Curie–Weiss–Potts 能量地景分析")
    subparsers = parser.add_subparsers(dest='command', required=True, parser_class=_ArgumentParser)
    parent = _global_flags()

    p = subparsers.add_parser('eval', parents=[parent], help="自由能、梯度、Hessian")
    _model_flags(p, with_point=True)

    p = subparsers.add_parser('critical-points', parents=[parent], help="臨界點普查")
    _model_flags(p)
    p.add_argument('--grid', type=int, default=None)

    p = subparsers.add_parser('classify', parents=[parent], help="相區判定")
    _model_flags(p)
    p.add_argument('--numeric', action='store_true')
    p.add_argument('--grid', type=int, default=None)

    subparsers.add_parser('constants', parents=[parent], help="臨界常數")

    p = subparsers.add_parser('phase-diagram', parents=[parent], help="相圖掃描")
    p.add_argument('--q', type=int, default=3)
    p.add_argument('--beta', required=True, help="start:stop:count")
    p.add_argument('--j', dest='J', required=True, help="start:stop:count")
    p.add_argument('--numeric', default='false')
    p.add_argument('--grid', type=int, default=None)

    p = subparsers.add_parser('verify-finite', parents=[parent], help="有限 N 驗證")
    _model_flags(p)
    p.add_argument('--n', type=int, default=60)
    p.add_argument('--trials', type=int, default=100)
    p.add_argument('--grid', type=int, default=None)
    p.add_argument('--table', dest='table_path', default=None, help="精確分佈表 CSV 輸出路徑")
    return parser


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """
    把命令列參數轉為 RunConfig

    Raises:
        DomainError: 數值或範圍無法解析
    """
    config = RunConfig(
        command=args.command,
        seed=args.seed,
        output=args.output,
        format=args.format,
        config_path=args.config_path,
    )
    if args.command == 'constants':
        return config

    config.q = args.q
    config.grid_density = getattr(args, 'grid', None)
    if args.command == 'phase-diagram':
        config.beta_range = parse_range(args.beta, "--beta")
        config.J_range = parse_range(args.J, "--j")
        config.numeric = parse_bool(args.numeric, "--numeric")
        return config

    config.beta = parse_float(args.beta, "--beta")
    config.J = parse_float(args.J, "--j") if args.J is not None else None
    config.no_componentwise = bool(getattr(args, 'no_componentwise', False))
    if args.command == 'eval':
        config.point = parse_point(args.point, "--point")
    elif args.command == 'classify':
        config.numeric = args.numeric
    elif args.command == 'verify-finite':
        config.n = args.n
        config.trials = args.trials
        config.table_path = args.table_path
    return config


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config_manager = ConfigManager()
    try:
        config_manager.load_runtime_config(args.config_path)
    except DomainError as e:
        sys.stderr.write(f"{e}\n")
        return e.exit_code
    if args.log_dir:
        config_manager.set_log_dir(args.log_dir)

    try:
        logger = LoggerManager.setup_logger(config_manager.paths.get_log_dir(), getattr(logging, args.log_level))
    except OSError as e:
        sys.stderr.write(f"無法建立日誌目錄: {e}\n")
        return 2

    try:
        run_config = build_run_config(args)
    except DomainError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    return run(run_config, config_manager)


if __name__ == "__main__":
    sys.exit(main())
