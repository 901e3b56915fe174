"""
桁数レベルの関係式・行列代数・粒子生成シミュレーションを検証するコマンドラインツール
"""
import argparse
import sys
from typing import Any, Dict, List, Optional

from src.application.services.particle_service import parse_radius_range
from src.application.services.verification_service import VerificationService
from src.config.logger import get_module_logger, set_verbosity
from src.config.settings import ConfigManager
from src.domain.entities.cosmology_state import ScaleParameters
from src.domain.entities.invocation import FORMATS, InvocationConfig
from src.domain.errors import ComptonLedgerError, InvocationError
from src.infrastructure.constants.constants_file import ConstantsFileRepository
from src.infrastructure.output.formatters import get_formatter
from src.infrastructure.relations.relation_file import load_relations

logger = get_module_logger("main")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def _split_list(text: Optional[str]) -> Optional[List[str]]:
    if text is None:
        return None
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_tolerances(text: Optional[str]) -> Dict[str, float]:
    """
    "E17=0.1,E1=2" を {ID: 許容桁数} に変換する

    Args:
        text: --tol の値

    Returns:
        Dict[str, float]: 許容桁数の上書き
    """
    overrides: Dict[str, float] = {}
    for item in _split_list(text) or []:
        rid, sep, value = item.partition("=")
        if not sep or not rid.strip():
            raise InvocationError(f"invalid tolerance override {item!r}, expected ID=REAL")
        try:
            overrides[rid.strip()] = float(value)
        except ValueError:
            raise InvocationError(f"invalid tolerance value in {item!r}") from None
    return overrides


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--constants", metavar="PATH", help="定数ファイルのパス")
    common.add_argument("--config", metavar="PATH", help="設定ファイルのパス (デフォルト: config.json)")
    common.add_argument("--format", choices=FORMATS, help="出力形式 (デフォルト: text)")
    common.add_argument("--out", metavar="PATH", help="出力先ファイル (デフォルト: 標準出力)")
    common.add_argument("--workers", type=int, help="並列実行のワーカー数")
    common.add_argument("--verbose", action="store_true", help="詳細ログを標準エラーに出す")

    parser = argparse.ArgumentParser(
        prog="compton-ledger",
        description="大数の一致・Dirac 行列代数・揺らぎによる粒子生成を検証する",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    check = sub.add_parser("check", parents=[common], help="関係式レジストリを検証する")
    _add_relation_flags(check)

    simulate = sub.add_parser("simulate", parents=[common], help="粒子生成則を積分する")
    _add_simulation_flags(simulate)

    algebra = sub.add_parser("algebra", parents=[common], help="行列代数のスイートを実行する")
    _add_algebra_flags(algebra)

    sub.add_parser("constants", parents=[common], help="読み込んだ定数テーブルを表示する")

    particles = sub.add_parser("particles", parents=[common], help="素粒子セクターの値を表示する")
    particles.add_argument("--alpha", type=float, help="ポテンシャルの alpha (デフォルト: 1)")
    particles.add_argument("--beta-scale", type=float, help="beta を m^2 の何倍にするか (デフォルト: 1)")
    particles.add_argument("--potential", metavar="RMIN:RMAX:COUNT",
                           help="V(r) の表を出力する（自然単位の半径）")

    report = sub.add_parser("report", parents=[common], help="check・algebra・simulate をまとめて実行する")
    _add_relation_flags(report)
    report.add_argument("--trials", type=float, help="onshell スイートの試行回数")
    report.add_argument("--seed", type=int, help="onshell スイートの乱数シード")
    return parser


def _add_relation_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rel", metavar="ID[,ID...]", help="検証する関係式 ID")
    p.add_argument("--tol", metavar="ID=REAL[,...]", help="許容桁数の上書き")
    p.add_argument("--relations", metavar="PATH", help="追加の関係式ファイル")


def _add_simulation_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n0", type=float, help="初期粒子数 (デフォルト: 1)")
    p.add_argument("--steps", type=float, help="ステップ数（指定時は t_end = steps × dt）")
    p.add_argument("--dt", metavar="VALUE[tau]", help="時間刻み (デフォルト: 0.1tau)")
    p.add_argument("--t-end", metavar="VALUE[tau]", help="終了時刻 (デフォルト: 1000tau)")
    p.add_argument("--mode", choices=("deterministic", "stochastic"), help="積分モード")
    p.add_argument("--ensemble", type=float, help="stochastic の軌道数")
    p.add_argument("--seed", type=int, help="乱数シード（stochastic では必須）")
    p.add_argument("--stride", type=float, help="何ステップごとに記録するか")
    p.add_argument("--scale", choices=("pion", "planck"), help="生成則の時計のスケール")


def _add_algebra_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--suite", metavar="NAME[,NAME]", help="clifford, onshell, snyder")
    p.add_argument("--trials", type=float, help="onshell スイートの試行回数")
    p.add_argument("--seed", type=int, help="onshell スイートの乱数シード")


def _given(args: argparse.Namespace, name: str) -> Any:
    return getattr(args, name, None)


def _override(target: Dict[str, Any], key: str, value: Any) -> None:
    if value is not None:
        target[key] = value


def build_invocation(args: argparse.Namespace, config: ConfigManager) -> InvocationConfig:
    """CLI 引数を設定ファイルの値に重ねて InvocationConfig を作る"""
    sim = config.get_simulation_config()
    _override(sim, "N0", _given(args, "n0"))
    _override(sim, "steps", _given(args, "steps"))
    _override(sim, "dt", _given(args, "dt"))
    _override(sim, "t_end", _given(args, "t_end"))
    _override(sim, "mode", _given(args, "mode"))
    _override(sim, "ensemble_size", _given(args, "ensemble"))
    _override(sim, "output_stride", _given(args, "stride"))
    _override(sim, "scale", _given(args, "scale"))
    _override(sim, "workers", _given(args, "workers"))
    if args.subcommand == "simulate":
        _override(sim, "seed", _given(args, "seed"))

    particles = config.get_particles_config()
    _override(particles, "alpha", _given(args, "alpha"))
    _override(particles, "beta_scale", _given(args, "beta_scale"))
    _override(particles, "potential_range", _given(args, "potential"))

    tolerances = dict(config.get("relations", "tolerances", {}))
    tolerances.update(parse_tolerances(_given(args, "tol")))

    algebra_seed = _given(args, "seed") if args.subcommand in ("algebra", "report") else None
    config_dict = {
        "subcommand": args.subcommand,
        "constants_path": config.resolve_constants_path(args.constants),
        "relations_path": _given(args, "relations") or config.get("relations", "path"),
        "relation_filter": _split_list(_given(args, "rel")),
        "tolerance_overrides": tolerances,
        "simulation": sim,
        "suites": _split_list(_given(args, "suite")) or config.get("algebra", "suites"),
        "trials": _given(args, "trials") or config.get("algebra", "trials", 1000),
        "algebra_seed": algebra_seed if algebra_seed is not None else config.get("algebra", "seed", 7),
        "particles": particles,
        "output_format": args.format or config.get("output", "format", "text"),
        "output_path": args.out,
        "workers": _given(args, "workers") or config.get("relations", "workers", 1),
        "verbose": args.verbose,
    }
    return InvocationConfig.from_dict(config_dict)


def _write_output(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        logger.info(f"出力を書き出しました: {path}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def cmd_check(service: VerificationService, cfg: InvocationConfig) -> int:
    report = service.check(cfg.relation_filter or None, cfg.tolerance_overrides, cfg.workers)
    _write_output(get_formatter(cfg.output_format).format_report(report), cfg.output_path)
    return EXIT_OK if report.all_passed else EXIT_FAILED


def cmd_simulate(service: VerificationService, cfg: InvocationConfig) -> int:
    scale = ScaleParameters.from_table(service.table, cfg.simulation.scale)
    run = service.simulate(cfg.simulation.to_config(scale.tau))
    _write_output(get_formatter(cfg.output_format).format_simulation(run), cfg.output_path)
    return EXIT_OK


def cmd_algebra(service: VerificationService, cfg: InvocationConfig) -> int:
    suites = service.algebra(cfg.suites, cfg.trials, cfg.algebra_seed)
    _write_output(get_formatter(cfg.output_format).format_algebra(suites), cfg.output_path)
    return EXIT_OK if all(s.passed for s in suites) else EXIT_FAILED


def cmd_constants(service: VerificationService, cfg: InvocationConfig) -> int:
    _write_output(get_formatter(cfg.output_format).format_constants(service.table), cfg.output_path)
    return EXIT_OK


def cmd_particles(service: VerificationService, cfg: InvocationConfig) -> int:
    radii = parse_radius_range(cfg.potential_range) if cfg.potential_range else None
    summary = service.particles(cfg.alpha, cfg.beta_scale, cfg.mass_key, radii)
    _write_output(get_formatter(cfg.output_format).format_particles(summary), cfg.output_path)
    return EXIT_OK


def cmd_report(service: VerificationService, cfg: InvocationConfig) -> int:
    report, suites, run = service.full_report(
        cfg.trials, cfg.algebra_seed, cfg.workers, cfg.relation_filter or None, cfg.tolerance_overrides)
    _write_output(get_formatter(cfg.output_format).format_full(report, suites, run), cfg.output_path)
    passed = report.all_passed and all(s.passed for s in suites)
    return EXIT_OK if passed else EXIT_FAILED


COMMANDS = {
    "check": cmd_check,
    "simulate": cmd_simulate,
    "algebra": cmd_algebra,
    "constants": cmd_constants,
    "particles": cmd_particles,
    "report": cmd_report,
}


def main(argv: Optional[List[str]] = None) -> int:
    """メイン処理"""
    # 引数エラーは argparse が終了コード 2 で終了する
    args = build_parser().parse_args(argv)
    set_verbosity(args.verbose)
    try:
        ConfigManager.reset()
        config = ConfigManager(args.config)
        cfg = build_invocation(args, config)

        relations = load_relations(cfg.relations_path) if cfg.relations_path else None
        service = VerificationService(ConstantsFileRepository(cfg.constants_path), relations)
        return COMMANDS[cfg.subcommand](service, cfg)
    except (ComptonLedgerError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR
