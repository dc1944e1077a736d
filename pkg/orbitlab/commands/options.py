from __future__ import annotations

import logging
import random
from functools import wraps

import click
from dotenv import dotenv_values

from orbitlab.extensions import InputError
from orbitlab.models import ExperimentConfig
from orbitlab.numerics.services import precision_budget
from orbitlab.params.parser import split_params
from orbitlab.params.services import ParamService
from orbitlab.params.validators import validate_screen_args
from orbitlab.sequences.specs import parse_stream_spec
from orbitlab.sequences.streams import SequenceError
from orbitlab.utils.artifacts import ArtifactWriter, build_meta

logger = logging.getLogger("orbitlab")

MIN_FRAC_BITS = 64


def run_options(f):
    """Общите флагове на всяка команда."""
    f = click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
                     help="Flat key=value file; its values override the flags.")(f)
    f = click.option("--xlsx", is_flag=True, help="Also export every table as .xlsx.")(f)
    f = click.option("--force", is_flag=True, help="Lift enumeration budgets and the resolution guard.")(f)
    f = click.option("--out", "out_dir", default=None, help="Output directory.")(f)
    f = click.option("--guard-bits", type=click.IntRange(min=0), default=None, help="Guard bits g.")(f)
    f = click.option("--seed", type=int, default=None, help="Seed of the single random generator.")(f)
    return f


def _param_keys(param):
    keys = {param.name}
    for opt in getattr(param, "opts", []):
        keys.add(opt.lstrip("-").replace("-", "_"))
    return keys


def with_config_file(f):
    """
    --config файлът се чете с dotenv_values и стойностите му минават през
    типовете на click параметрите, т.е. същата валидация като на флаговете.
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        path = kwargs.get("config_file")
        if path:
            ctx = click.get_current_context()
            values = {k.strip().replace("-", "_").lower(): v for k, v in dotenv_values(path).items()}
            by_key = {}
            for param in ctx.command.params:
                for key in _param_keys(param):
                    by_key[key] = param

            for key, raw in values.items():
                param = by_key.get(key)
                if param is None or param.name == "config_file":
                    raise click.UsageError(f"Unknown key {key!r} in config file {path}.")
                if raw is None:
                    raw = "true"
                value = [v.strip() for v in raw.split(",")] if param.multiple else raw
                kwargs[param.name] = param.type_cast_value(ctx, value)
            logger.info("config file %s applied (%d key(s))", path, len(values))
        return f(*args, **kwargs)
    return decorated_function


def settings():
    ctx = click.get_current_context()
    return ctx.find_root().obj["config"]


def parse_ladder(text):
    """
    "8,16,32" или "8..1024" (степени на двойката от 8 до 1024).
    """
    text = (text or "").strip()
    if not text:
        return ()
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            if lo < 1 or hi < lo:
                raise ValueError
            out = []
            t = 1
            while t <= hi:
                if t >= lo:
                    out.append(t)
                t *= 2
            return tuple(out)
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise click.BadParameter(f"Invalid ladder {text!r}.") from None


def working_precision(steps, finest_scale, guard_bits):
    F = max(precision_budget(max(steps, 1), max(finest_scale, 1), guard_bits), MIN_FRAC_BITS)
    logger.info("working precision F=%d (N=%s, t=%s, g=%s)", F, steps, finest_scale, guard_bits)
    return F


def parameter_set(params_text, frac_bits, screen=True):
    cfg = settings()
    ps = ParamService.parameter_set(split_params(params_text), frac_bits)
    bound = cfg.SCREEN_BOUND
    while bound > 0 and validate_screen_args(bound, ps.k):
        bound -= 1
    if not screen:
        logger.warning("independence screen skipped (--no-screen)")
    elif bound < 1:
        logger.warning("independence screen skipped: k=%d is too large for brute force", ps.k)
    else:
        suspects = ParamService.independence_screen(ps, bound)
        if suspects:
            logger.warning(
                "parameters look rationally dependent: %s; results below are not evidence",
                ", ".join(str(s) for s in suspects[:3]),
            )
    unverified = ParamService.unverifiable_transcendentals(list(ps.source_exprs))
    if unverified:
        logger.warning(
            "%s: transcendental by construction, but their rational independence is unproven; "
            "the screen is evidence only",
            ", ".join(unverified),
        )
    return ps


def digit_stream(spec, k, frac_bits, rng=None):
    """parse_stream_spec с грешките като usage грешки (exit 2)."""
    try:
        return parse_stream_spec(spec, k, frac_bits, rng)
    except SequenceError as e:
        raise InputError(f"--stream {spec!r}: {e}") from None


def experiment(command, params_text="", stream="", steps=0, t_ladder=(), s_ladder=(),
               seed=None, guard_bits=None, out_dir=None, force=False, **options):
    cfg = settings()
    return ExperimentConfig(
        command=command,
        params=tuple(split_params(params_text)) if params_text else (),
        stream=stream or "",
        steps=steps,
        t_ladder=tuple(t_ladder),
        s_ladder=tuple(s_ladder),
        seed=cfg.SEED if seed is None else seed,
        guard_bits=cfg.GUARD_BITS if guard_bits is None else guard_bits,
        out_dir=out_dir or cfg.OUT_DIR,
        force=force,
        options=options,
    )


def make_writer(exp, frac_bits, xlsx=False):
    cfg = settings()
    meta = build_meta(exp, frac_bits, cfg.TOOL_NAME, cfg.TOOL_VERSION)
    logger.info("run %s, config %s, seed %s", exp.command, meta["config_hash"][:12], exp.seed)
    return ArtifactWriter(exp.out_dir, meta, xlsx=xlsx)


def rng_for(exp):
    # единственият генератор за цялото пускане
    return random.Random(exp.seed)


def report_written(writer):
    for path in writer.written:
        click.echo(path)
