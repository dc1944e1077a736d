from __future__ import annotations

import random

from orbitlab.params.parser import parse_param
from orbitlab.params.services import eval_param
from orbitlab.sequences.streams import (
    DigitStream, ExplicitStream, PeriodicStream, RecurrentBuilder, RecurrentStream,
    SequenceError, SturmianStream, ThueMorseStream,
)
from orbitlab.sequences.validators import parse_word_lines, validate_digits, validate_words


def parse_digits(text: str) -> list[int]:
    # "1 1 2" или "112"
    text = text.strip()
    try:
        if any(ch.isspace() for ch in text):
            return [int(tok) for tok in text.split()]
        return [int(ch) for ch in text]
    except ValueError:
        raise SequenceError(f"Invalid digit list {text!r}.") from None


def _options(body: str) -> tuple[dict[str, str], set[str]]:
    values, flags = {}, set()
    for part in body.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" in part:
            key, value = part.split("=", 1)
            values[key.strip()] = value.strip()
        else:
            flags.add(part)
    return values, flags


def _builder_words(values: dict[str, str]) -> list[tuple[int, ...]]:
    if "file" in values:
        try:
            with open(values["file"], "r", encoding="utf-8") as f:
                words, errors = parse_word_lines(f)
        except OSError as e:
            raise SequenceError(f"Cannot read building words: {e}") from None
    elif "words" in values:
        words, errors = parse_word_lines(values["words"].split(";"))
    else:
        raise SequenceError("recurrent streams need file=<path> or words=<w1;w2;...>.")
    if errors:
        raise SequenceError("; ".join(errors))
    return words


def parse_stream_spec(spec: str, k: int, frac_bits: int, rng: random.Random | None = None) -> DigitStream:
    """
    thue-morse | sturmian:theta=<expr>,rho=<expr> | recurrent:file=<path>[,cycle|,random]
    | recurrent:words=<w1;w2;...>[,cycle|,random] | periodic:<digits> | explicit:<digits>
    """
    kind, _, body = spec.strip().partition(":")
    kind = kind.strip().lower()

    if kind in ("thue-morse", "thue_morse"):
        _require_binary(k, kind)
        return ThueMorseStream(spec)

    if kind == "sturmian":
        _require_binary(k, kind)
        values, _ = _options(body)
        if "theta" not in values:
            raise SequenceError("sturmian streams need theta=<expr>.")
        theta = eval_param(parse_param(values["theta"]), frac_bits)
        rho = eval_param(parse_param(values.get("rho", "0")), frac_bits)
        return SturmianStream(theta, rho, spec)

    if kind in ("periodic", "explicit"):
        digits = parse_digits(body)
        errors = validate_digits(digits, k)
        if errors:
            raise SequenceError("; ".join(errors))
        if kind == "periodic":
            return PeriodicStream(digits, spec)
        return ExplicitStream(digits, spec)

    if kind == "recurrent":
        values, flags = _options(body)
        words = _builder_words(values)
        errors = validate_words(words, k)
        if errors:
            raise SequenceError("; ".join(errors))
        if "random" in flags:
            builder = RecurrentBuilder.random(words, rng or random.Random(0))
        elif "cycle" in flags:
            builder = RecurrentBuilder.cycling(words)
        else:
            builder = RecurrentBuilder.from_words(words)
        return RecurrentStream(builder, spec)

    raise SequenceError(f"Unknown stream spec {spec!r}.")


def _require_binary(k: int, kind: str) -> None:
    if k < 2:
        raise SequenceError(f"{kind} streams use digits 1 and 2, the parameter set has k={k}.")
