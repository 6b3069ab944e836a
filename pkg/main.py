import argparse
import dataclasses
import hashlib
import logging
import os
import sys
import time
import traceback
from typing import List, Optional, Sequence

import config
from config import VERSION, RunConfig, env_seed, load_config, render_defaults
from datafiles import Provenance, ingest, load_fit, save_fit, write_csv, write_records
from errors import PersuasionError, ValidationError
from inference import MCMCConfig, ModelSettings, ModelSpec, RecordRules, SearchConfig, compare_models, fit_model
from inference.posterior import posterior_predictive, summarize_posterior
from render import HeatmapRenderer
from rsa.beliefs import BetaPrior
from simulation import SweepConfig, SyntheticConfig, belief_curves, effect_heatmap, generate_synthetic, theorem_suite
from world.grid import LengthGrid, Proposition, WorldPrior

logger = logging.getLogger(__name__)


def resolve_seed(flag: Optional[int], configured: int) -> int:
    """The --seed flag wins over SEED, which wins over the config file."""
    if flag is not None:
        return flag
    from_env = env_seed()
    return configured if from_env is None else from_env


def parse_float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return value


def record_rules(cfg: RunConfig) -> RecordRules:
    values, midpoint = cfg.grid_spec()
    return RecordRules(LengthGrid(values, midpoint), tuple(cfg.world.example_set),
                       tuple(cfg.world.long_evidence), tuple(cfg.world.short_evidence))


def model_settings(cfg: RunConfig) -> ModelSettings:
    beta_prior = BetaPrior.uniform(0.0, cfg.model.beta_max, cfg.model.beta_support_points)
    return ModelSettings(alpha=cfg.model.alpha, response_sd=cfg.model.response_sd, beta_max=cfg.model.beta_max,
                         w_c_max=cfg.model.w_c_max, beta_prior=beta_prior)


def default_output(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.output.directory, name)


def cmd_simulate_heatmap(args) -> int:
    cfg = load_config(args.config)
    if args.beta_list is not None:
        cfg = dataclasses.replace(cfg, sweep=dataclasses.replace(cfg.sweep, beta_values=tuple(args.beta_list)))
    out = args.out or default_output(cfg, "heatmap.csv")

    heatmap = effect_heatmap(SweepConfig.from_config(cfg))
    write_csv(heatmap.to_frame(signed=args.signed), out, Provenance.for_run(cfg), cfg.output.float_format)
    logger.info(f"Heatmap saved to: {out}")

    renderer = HeatmapRenderer()
    if args.svg:
        renderer.save_svg(heatmap, args.svg)
    if args.png:
        renderer.save_png(heatmap, args.png)
    return 0


def cmd_simulate_curves(args) -> int:
    cfg = load_config(args.config)
    beta = cfg.sweep.curve_beta if args.beta is None else args.beta
    offset = cfg.sweep.curve_offset if args.offset is None else args.offset
    cfg = dataclasses.replace(cfg, sweep=dataclasses.replace(cfg.sweep, curve_beta=beta, curve_offset=offset))

    values, midpoint = config.GRID_PRESETS[cfg.sweep.curve_preset]
    prior = WorldPrior.from_values(values, midpoint, cfg.world.n, cfg.world.enumeration_cap)
    curves = belief_curves(beta, offset, prior, Proposition.parse(cfg.sweep.goal), cfg.model.alpha)
    write_csv(curves, args.out, Provenance.for_run(cfg), cfg.output.float_format)
    logger.info(f"Belief curves saved to: {args.out}")
    return 0


def cmd_gen_data(args) -> int:
    cfg = load_config(args.config)
    seed = resolve_seed(args.seed, cfg.synthetic.seed)
    cfg = dataclasses.replace(cfg, synthetic=dataclasses.replace(cfg.synthetic, seed=seed))

    records = generate_synthetic(SyntheticConfig.from_config(cfg))
    write_records(records, args.out, Provenance.for_run(cfg, seed), cfg.output.float_format)
    return 0


def cmd_fit(args) -> int:
    cfg = load_config(args.config)
    mcmc = cfg.mcmc
    overrides = {name: getattr(args, name) for name in ("chains", "samples", "burnin", "lag")
                 if getattr(args, name) is not None}
    overrides["seed"] = resolve_seed(args.seed, mcmc.seed)
    model = {"family": args.model, "variant": args.variant}
    if args.levels is not None:
        model["levels"] = tuple(level.strip() for level in args.levels.split(","))
    cfg = dataclasses.replace(cfg, mcmc=dataclasses.replace(mcmc, **overrides),
                              model=dataclasses.replace(cfg.model, **model))
    cfg.validate()

    spec = ModelSpec.parse(cfg.model.family, cfg.model.variant, cfg.model.levels)
    rules = record_rules(cfg)
    records, report = ingest(args.data, rules)
    if not records:
        raise ValidationError(f"no valid records in {args.data} ({len(report.rejected)} rejected)")

    prior = WorldPrior(rules.grid, cfg.world.n, cfg.world.enumeration_cap)
    m = cfg.mcmc
    fit = fit_model(spec, records, prior,
                    MCMCConfig(chains=m.chains, samples=m.samples, burnin=m.burnin, lag=m.lag, seed=m.seed,
                               proposal_fraction=m.proposal_fraction, adapt_interval=m.adapt_interval,
                               target_acceptance=m.target_acceptance),
                    SearchConfig(cfg.search.grid_budget, cfg.search.max_rounds, cfg.search.tolerance),
                    model_settings(cfg))
    save_fit(fit, args.out, Provenance.for_run(cfg, m.seed))
    logger.info(f"{fit.model}: max loglik {fit.max_loglik:.3f}, WAIC {fit.waic.estimate:.3f}, "
                f"PSIS-LOO {fit.psis_loo.estimate:.3f}")
    return 0


def cmd_compare(args) -> int:
    fits = [load_fit(path) for path in args.fits]
    table = compare_models(fits)
    hashes = "\n".join(str(f.provenance.get("config_hash", "")) for f in fits)
    provenance = Provenance(VERSION, None, hashlib.sha256(hashes.encode("utf-8")).hexdigest()[:16])
    write_csv(table, args.out, provenance)
    for row in table.itertuples():
        flag = " (indistinguishable)" if row.indistinguishable else ""
        print(f"{row.rank}. {row.model}: WAIC {row.waic:.2f} ± {row.waic_se:.2f}, "
              f"dWAIC {row.delta_waic:.2f} ± {row.delta_se:.2f}{flag}")
    return 0


def cmd_summarize(args) -> int:
    cfg = load_config(args.config)
    fit = load_fit(args.fit)
    provenance = Provenance.for_run(cfg)
    write_csv(summarize_posterior(fit), args.out, provenance, cfg.output.float_format)
    logger.info(f"Posterior summary saved to: {args.out}")
    if args.data is None:
        return 0

    rules = record_rules(cfg)
    records, _ = ingest(args.data, rules)
    prior = WorldPrior(rules.grid, cfg.world.n, cfg.world.enumeration_cap)
    out = args.predictive or default_output(cfg, "predictive.csv")
    table = posterior_predictive(fit, records, prior, model_settings(cfg), args.max_draws)
    write_csv(table, out, provenance, cfg.output.float_format)
    logger.info(f"Posterior predictive saved to: {out}")
    return 0


def cmd_check(args) -> int:
    report = theorem_suite()
    for line in report.lines():
        logger.info(line)
    if not report.passed:
        first = report.failures[0]
        raise ValidationError(f"{len(report.failures)} property check(s) failed; first: "
                              f"{first.name} [{first.grid}] {first.counterexample}")
    print("all properties passed")
    return 0


def cmd_config_init(args) -> int:
    sys.stdout.write(render_defaults())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="persuasion",
                                     description="Persuasion models of the Stick Contest: simulate, fit, compare.")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Model simulations")
    sims = simulate.add_subparsers(dest="simulation", required=True)

    heatmap = sims.add_parser("heatmap", help="Weak evidence effect over bias and evidence")
    heatmap.add_argument("--config", required=True, help="Run configuration (TOML)")
    heatmap.add_argument("--beta-list", type=parse_float_list, default=None,
                         help="Comma-separated bias values (default: from config)")
    heatmap.add_argument("--out", default=None, help="Output CSV (default: <output dir>/heatmap.csv)")
    heatmap.add_argument("--svg", default=None, help="Also write an SVG rendering")
    heatmap.add_argument("--png", default=None, help="Also write a PNG rendering")
    heatmap.add_argument("--signed", action="store_true",
                         help="Write signed prior-minus-posterior shifts instead of clamped effect sizes")
    heatmap.set_defaults(handler=cmd_simulate_heatmap)

    curves = sims.add_parser("curves", help="Literal and pragmatic belief curves")
    curves.add_argument("--beta", type=float, default=None, help=f"Bias (default: {config.CURVE_BETA})")
    curves.add_argument("--offset", type=float, default=None, help=f"Response offset (default: {config.CURVE_OFFSET})")
    curves.add_argument("--out", required=True, help="Output CSV")
    curves.add_argument("--config", default=None, help="Run configuration (TOML)")
    curves.set_defaults(handler=cmd_simulate_curves)

    gen = commands.add_parser("gen-data", help="Generate a synthetic participant file")
    gen.add_argument("--config", default=None, help="Run configuration (TOML)")
    gen.add_argument("--seed", type=parse_seed, default=None, help="Seed (overrides SEED and the config)")
    gen.add_argument("--out", required=True, help="Output CSV")
    gen.set_defaults(handler=cmd_gen_data)

    fit = commands.add_parser("fit", help="Fit a model with MAP search and MCMC")
    fit.add_argument("--model", required=True, choices=["rsa", "aa", "mas"])
    fit.add_argument("--variant", required=True, choices=["homogeneous", "heterogeneous", "speaker-dependent"])
    fit.add_argument("--levels", default=None, help="Listener levels for RSA, e.g. J0,J1 or J0,J1,J2")
    fit.add_argument("--data", required=True, help="Participant CSV")
    fit.add_argument("--chains", type=int, default=None, help=f"Chains (default: {config.MCMC_CHAINS})")
    fit.add_argument("--samples", type=int, default=None,
                     help=f"Samples kept per chain (default: {config.MCMC_SAMPLES})")
    fit.add_argument("--burnin", type=int, default=None, help=f"Burn-in steps (default: {config.MCMC_BURNIN})")
    fit.add_argument("--lag", type=int, default=None, help=f"Thinning lag (default: {config.MCMC_LAG})")
    fit.add_argument("--seed", type=parse_seed, default=None, help="Seed (overrides SEED and the config)")
    fit.add_argument("--out", required=True, help="Output fit document (JSON)")
    fit.add_argument("--config", default=None, help="Run configuration (TOML)")
    fit.set_defaults(handler=cmd_fit)

    compare = commands.add_parser("compare", help="Rank fitted models by WAIC")
    compare.add_argument("--fits", nargs="+", required=True, help="Fit documents")
    compare.add_argument("--out", required=True, help="Output CSV")
    compare.set_defaults(handler=cmd_compare)

    summarize = commands.add_parser("summarize", help="Posterior summary and posterior predictive of a fit")
    summarize.add_argument("--fit", required=True, help="Fit document")
    summarize.add_argument("--out", required=True, help="Output CSV of parameter summaries")
    summarize.add_argument("--data", default=None, help="Participant CSV the model was fitted to")
    summarize.add_argument("--predictive", default=None,
                           help="Posterior predictive CSV (default: <output dir>/predictive.csv)")
    summarize.add_argument("--max-draws", type=int, default=500, help="Posterior draws used for the predictive")
    summarize.add_argument("--config", default=None, help="Run configuration (TOML)")
    summarize.set_defaults(handler=cmd_summarize)

    check = commands.add_parser("check", help="Run the model property suite")
    check.set_defaults(handler=cmd_check)

    cfg = commands.add_parser("config", help="Configuration helpers")
    cfg_commands = cfg.add_subparsers(dest="config_command", required=True)
    init = cfg_commands.add_parser("init", help="Print every default as TOML")
    init.set_defaults(handler=cmd_config_init)
    return parser


def main(argv: Sequence[str] = None) -> int:
    """Main function."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    start_time = time.time()
    try:
        return args.handler(args)
    except PersuasionError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.error(f"Unhandled exception: {e}")
        logger.error(traceback.format_exc())
        return 1
    finally:
        logger.debug(f"{args.command} finished in {time.time() - start_time:.2f} seconds")


if __name__ == "__main__":
    sys.exit(main())
