"""Command-line front end.

    qparrondo classical classify|simulate|region [flags]
    qparrondo quantum play|sequence|sweep [flags]
    qparrondo compare [flags]

Each run reads one JSON config (``--config``); ``--seed``, ``--format`` and
``--oracle-every`` override the config keys ``seed``, ``format`` and
``oracle_every``, which in turn override the defaults (0, csv, 1000).
Angles are given in the unit named by the config's ``angle_unit``
(``"pi"``: 0.75 means 3*pi/4, or ``"rad"``); emitted angles are radians.

Exit status: 0 ok, 2 config error, 3 degenerate classical chain,
4 closed form disagreeing with the state-vector simulation.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator

import numpy as np

from .classical import (
    ClassicalHDGame,
    DegenerateChain,
    GameA,
    ParrondoSearch,
    ReducibleChain,
    Schedule,
    classify,
    iter_parrondo_samples,
    pwin_closed_form,
    schedule_pwin,
    simulate_sequence,
    verdict_from_pwin,
)
from .multiplexer import PolarBlock, PolarQubit
from .quantumgame import (
    ORACLE_TOL,
    BLOCK_PARAMS,
    InitialStateSpec,
    OracleMismatch,
    QuantumHDGame,
    expected_payoff,
    pwin_quantum_closed,
    pwin_quantum_sim,
    pwin_sequence_formula,
    play_sequence,
    sequence_formula_exact,
)
from .records import FORMATS, SWEEP_FIELDS, emit, sweep_row
from .sweep import ParamRange, SweepSpec, sweep

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_ORACLE = 0, 2, 3, 4

# Stream seeds derive from the top-level seed with these fixed labels.
SEED_LABELS = {"simulate": 1, "region": 2, "validate": 3, "sweep": 4, "classify": 5}


class ConfigError(ValueError):
    pass


def derive_seed(seed: int, label: str) -> int:
    ss = np.random.SeedSequence([seed, SEED_LABELS[label]])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


# ------------------------------------------------------------ config access

class Config:
    """Thin wrapper that reports the dotted path of a bad field."""

    def __init__(self, data: Any, path: str = "") -> None:
        self.data = data
        self.path = path

    def _sub(self, key) -> str:
        return f"{self.path}.{key}" if self.path else str(key)

    def has(self, key: str) -> bool:
        return isinstance(self.data, dict) and key in self.data

    def get(self, key: str, default: Any = ..., kind: type | tuple | None = None) -> Any:
        if not isinstance(self.data, dict):
            raise ConfigError(f"{self.path or '<root>'}: expected an object")
        if key not in self.data:
            if default is ...:
                raise ConfigError(f"{self._sub(key)}: missing required field")
            return default
        value = self.data[key]
        if kind is not None and not _is_kind(value, kind):
            raise ConfigError(f"{self._sub(key)}: expected {_kind_name(kind)}, got {value!r}")
        return value

    def child(self, key, default: Any = ...) -> "Config":
        if isinstance(key, int):
            return Config(self.data[key], f"{self.path}[{key}]")
        return Config(self.get(key, default), self._sub(key))

    def items(self) -> list["Config"]:
        if not isinstance(self.data, list):
            raise ConfigError(f"{self.path}: expected a list")
        return [self.child(i) for i in range(len(self.data))]

    def number(self, key: str, default: Any = ...) -> float:
        return float(self.get(key, default, (int, float)))

    def integer(self, key: str, default: Any = ...) -> int:
        return int(self.get(key, default, int))

    def build(self, fn: Callable, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, TypeError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{self.path or '<root>'}: {exc}") from exc


def _is_kind(value, kind) -> bool:
    kinds = kind if isinstance(kind, tuple) else (kind,)
    if isinstance(value, bool) and bool not in kinds:
        return False
    return isinstance(value, kinds)


def _kind_name(kind) -> str:
    kinds = kind if isinstance(kind, tuple) else (kind,)
    return " or ".join(k.__name__ for k in kinds)


def angle_scale(cfg: Config) -> float:
    unit = cfg.get("angle_unit", kind=str)
    if unit == "pi":
        return math.pi
    if unit == "rad":
        return 1.0
    raise ConfigError(f"angle_unit: expected 'pi' or 'rad', got {unit!r}")


def _angles(cfg: Config, scale: float) -> tuple[float, float, float]:
    return tuple(scale * cfg.number(k, 0.0 if k != "theta" else ...) for k in ("theta", "phi", "eta"))


def parse_hd_game(cfg: Config) -> ClassicalHDGame:
    return cfg.build(ClassicalHDGame, *(cfg.number(k) for k in ("p1", "p2", "p3", "p4")))


def parse_classical_game(cfg: Config):
    if cfg.has("p_win"):
        return cfg.build(GameA, cfg.number("p_win"))
    return parse_hd_game(cfg)


def parse_initial(cfg: Config, scale: float | None) -> InitialStateSpec:
    kind = cfg.get("kind", kind=str)
    if kind == "product":
        if scale is None:
            raise ConfigError("angle_unit: missing required field")
        qs = [cfg.child(q).build(PolarQubit, *_angles(cfg.child(q), scale)) for q in ("q1", "q2", "q3")]
        return InitialStateSpec.product(*qs)
    if kind == "equal_superposition":
        return InitialStateSpec.equal_superposition()
    if kind == "ghz":
        return InitialStateSpec.ghz()
    raise ConfigError(f"{cfg.path}.kind: unknown initial state {kind!r}")


def parse_game(cfg: Config, scale: float) -> QuantumHDGame:
    items = cfg.items()
    if len(items) != 4:
        raise ConfigError(f"{cfg.path}: expected 4 blocks, got {len(items)}")
    return QuantumHDGame(tuple(b.build(PolarBlock, *_angles(b, scale)) for b in items))


# --------------------------------------------------------------- commands

CLASSIFY_FIELDS = ("p1", "p2", "p3", "p4", "p_win", "expected_payoff", "c", "s",
                   "classification", "mc_steps", "mc_mean_payoff", "mc_stderr")


def cmd_classical_classify(cfg: Config, opts) -> tuple[tuple, Iterable[dict]]:
    game = parse_hd_game(cfg.child("game"))
    steps = cfg.integer("monte_carlo_steps", 0)
    cls = classify(game)
    p = pwin_closed_form(game)
    row = dict(zip(("p1", "p2", "p3", "p4"), game.coins))
    row.update(p_win=p, expected_payoff=2 * p - 1, c=cls.c, s=cls.s, classification=cls.verdict)
    if steps > 0:
        res = simulate_sequence([game], steps, derive_seed(opts.seed, "classify"))
        row.update(mc_steps=steps, mc_mean_payoff=res.mean_payoff, mc_stderr=res.stderr)
    return CLASSIFY_FIELDS, [row]


SIMULATE_FIELDS = ("games", "randomize", "steps", "mean_payoff", "stderr", "win_frequency",
                   "analytic_p_win", "analytic_payoff")


def cmd_classical_simulate(cfg: Config, opts):
    games = tuple(parse_classical_game(g) for g in cfg.child("schedule").items())
    randomize = cfg.get("randomize", False, bool)
    steps = cfg.integer("steps")
    if steps < 1:
        raise ConfigError("steps: must be >= 1")
    schedule = cfg.build(Schedule, games, randomize)
    res = simulate_sequence(schedule, steps, derive_seed(opts.seed, "simulate"))
    p = schedule_pwin(schedule)
    row = dict(games=len(games), randomize=randomize, steps=steps, mean_payoff=res.mean_payoff,
               stderr=res.stderr, win_frequency=res.win_frequency, analytic_p_win=p,
               analytic_payoff=2 * p - 1)
    return SIMULATE_FIELDS, [row]


REGION_FIELDS = ("index", "pa", "p1", "p2", "p3", "p4", "schedule", "a_classification",
                 "b_classification", "a_p_win", "b_p_win", "schedule_p_win", "schedule_payoff",
                 "effect", "sim_steps", "sim_mean_payoff", "sim_stderr", "sim_confirmed")


def cmd_classical_region(cfg: Config, opts):
    kwargs: dict[str, Any] = {}
    if cfg.has("budget"):
        kwargs["budget"] = cfg.integer("budget")
    for key in ("pa_range", "p_range"):
        if cfg.has(key):
            kwargs[key] = tuple(float(v) for v in cfg.get(key, kind=list))
    if cfg.has("schedules"):
        kwargs["schedules"] = tuple(cfg.get("schedules", kind=list))
        for pat in kwargs["schedules"]:
            if pat != "random" and (not isinstance(pat, str) or not pat or set(pat) - {"A", "B"}):
                raise ConfigError(f"schedules: bad pattern {pat!r}")
    if cfg.has("min_payoff"):
        kwargs["min_payoff"] = cfg.number("min_payoff")
    search = cfg.build(ParrondoSearch, **kwargs)
    validate_steps = cfg.integer("validate_steps", 0)
    vseed = derive_seed(opts.seed, "validate")

    def rows() -> Iterator[dict]:
        for n, inst in enumerate(iter_parrondo_samples(search, derive_seed(opts.seed, "region"))):
            row = dict(index=inst.index, pa=inst.a.p_win, schedule=inst.schedule,
                       a_classification=inst.a_verdict, b_classification=inst.b_verdict,
                       a_p_win=inst.a_pwin, b_p_win=inst.b_pwin, schedule_p_win=inst.schedule_pwin,
                       schedule_payoff=inst.schedule_payoff, effect=True)
            row.update(zip(("p1", "p2", "p3", "p4"), inst.b.coins))
            if validate_steps > 0:
                res = simulate_sequence(inst.build_schedule(), validate_steps, vseed + n)
                row.update(sim_steps=validate_steps, sim_mean_payoff=res.mean_payoff,
                           sim_stderr=res.stderr,
                           sim_confirmed=res.mean_payoff > 3 * res.stderr)
            yield row

    return REGION_FIELDS, rows()


PLAY_FIELDS = ("initial", "p_win", "expected_payoff", "classification", "p_win_closed",
               "p_win_sim", "oracle_checked")


def _closed_or_none(game: QuantumHDGame, spec: InitialStateSpec) -> float | None:
    if spec.kind == "ghz":
        return None
    return pwin_quantum_closed(*spec.product_qubits(), game.blocks)


def _checked(closed: float | None, sim: float, check: bool, what: str) -> None:
    if check and closed is not None and abs(closed - sim) > ORACLE_TOL:
        raise OracleMismatch(f"{what}: closed form {closed!r} vs simulation {sim!r}")


def cmd_quantum_play(cfg: Config, opts):
    scale = angle_scale(cfg)
    spec = parse_initial(cfg.child("initial"), scale)
    game = parse_game(cfg.child("blocks"), scale)
    sim = pwin_quantum_sim(game, spec).p_win
    closed = _closed_or_none(game, spec)
    check = True  # record 0 always falls on the oracle cadence
    _checked(closed, sim, check, "play")
    p = sim if closed is None else closed
    row = dict(initial=spec.kind, p_win=p, expected_payoff=expected_payoff(p),
               classification=verdict_from_pwin(p), p_win_closed=closed, p_win_sim=sim,
               oracle_checked=check and closed is not None)
    return PLAY_FIELDS, [row]


SEQUENCE_FIELDS = ("kind", "game", "p_win", "expected_payoff", "classification", "p_win_closed",
                   "p_win_sim", "oracle_checked", "effect")


def _parse_sequence(cfg: Config, scale: float) -> list[QuantumHDGame]:
    if cfg.has("theta"):
        games = []
        for row in cfg.child("theta").items():
            vals = row.data
            if not isinstance(vals, list) or len(vals) != 4 or not all(_is_kind(v, (int, float)) for v in vals):
                raise ConfigError(f"{row.path}: expected 4 numbers")
            games.append(row.build(QuantumHDGame.from_thetas, [scale * v for v in vals]))
    else:
        games = [parse_game(g, scale) for g in cfg.child("games").items()]
    if not games:
        raise ConfigError("games: sequence is empty")
    return games


def cmd_quantum_sequence(cfg: Config, opts):
    scale = angle_scale(cfg)
    spec = parse_initial(cfg.child("initial", {"kind": "equal_superposition"}), scale)
    games = _parse_sequence(cfg, scale)
    every = opts.oracle_every
    rows = []
    for k, game in enumerate(games):
        sim = pwin_quantum_sim(game, spec).p_win
        closed = _closed_or_none(game, spec)
        check = k % every == 0
        _checked(closed, sim, check, f"game {k}")
        p = sim if closed is None else closed
        rows.append(dict(kind="single", game=k, p_win=p, p_win_closed=closed, p_win_sim=sim,
                         oracle_checked=check and closed is not None))
    sim = play_sequence(games, spec).p_win
    formula = None
    if sequence_formula_exact(games, spec):
        formula = pwin_sequence_formula([[b.theta for b in g.blocks] for g in games])
    check = len(games) % every == 0
    _checked(formula, sim, check, "sequence")
    p = sim if formula is None else formula
    rows.append(dict(kind="sequence", game=len(games), p_win=p, p_win_closed=formula,
                     p_win_sim=sim, oracle_checked=check and formula is not None))
    effect = (
        len(games) >= 2
        and all(verdict_from_pwin(r["p_win"]).value == "losing" for r in rows[:-1])
        and verdict_from_pwin(p).value == "winning"
    )
    for r in rows:
        r.update(expected_payoff=expected_payoff(r["p_win"]),
                 classification=verdict_from_pwin(r["p_win"]), effect=effect)
    return SEQUENCE_FIELDS, rows


def cmd_quantum_sweep(cfg: Config, opts):
    mode = cfg.get("mode", "grid", str)
    needs_unit = cfg.has("ranges") or cfg.has("fixed")
    scale = angle_scale(cfg) if needs_unit else 1.0
    ranges = {}
    for name, raw in (cfg.get("ranges", {}, dict)).items():
        if not isinstance(raw, list) or len(raw) not in (2, 3) or not all(_is_kind(v, (int, float)) for v in raw):
            raise ConfigError(f"ranges.{name}: expected [lo, hi] or [lo, hi, count]")
        count = None
        if len(raw) == 3:
            if not _is_kind(raw[2], int):
                raise ConfigError(f"ranges.{name}: count must be an integer")
            count = int(raw[2])
        ranges[name] = ParamRange(scale * raw[0], scale * raw[1], count)
    fixed = {}
    for name, v in cfg.get("fixed", {}, dict).items():
        if not _is_kind(v, (int, float)):
            raise ConfigError(f"fixed.{name}: expected a number")
        fixed[name] = scale * v
    samples = cfg.integer("samples", 0)
    spec = cfg.build(SweepSpec, ranges=ranges, mode=mode, samples=samples, fixed=fixed,
                     oracle_every=opts.oracle_every)
    return SWEEP_FIELDS, (sweep_row(r) for r in sweep(spec, derive_seed(opts.seed, "sweep")))


COMPARE_FIELDS = ("p1", "p2", "p3", "p4", "classical_p_win", "classical_payoff",
                  "classical_classification", *(n for n in BLOCK_PARAMS), "quantum_p_win",
                  "quantum_payoff", "quantum_classification", "quantum_minus_classical",
                  "oracle_checked")


def cmd_compare(cfg: Config, opts):
    """Classical game B next to the quantum game with coins matched to it.

    Coin ``j`` gets ``theta_j = 2 asin(sqrt(p_j))``, so acting on a ``|0>``
    outcome qubit it wins with probability ``p_j``; phases default to zero.
    The default input spreads the history evenly and starts the outcome qubit
    at ``|0>``, giving a quantum win probability of ``mean(p_j)``.
    """
    game = parse_hd_game(cfg.child("game"))
    needs_unit = cfg.has("phases") or (cfg.has("initial") and cfg.child("initial").get("kind", None) == "product")
    scale = angle_scale(cfg) if needs_unit else None
    if cfg.has("initial"):
        spec = parse_initial(cfg.child("initial"), scale)
    else:
        # Uniform history weights, outcome qubit starting at |0> (loss).
        spec = InitialStateSpec.product(PolarQubit(math.pi / 2), PolarQubit(math.pi / 2), PolarQubit(0.0))
    phases = [(0.0, 0.0)] * 4
    if cfg.has("phases"):
        items = cfg.child("phases").items()
        if len(items) != 4:
            raise ConfigError("phases: expected 4 entries")
        phases = [(scale * it.number("phi", 0.0), scale * it.number("eta", 0.0)) for it in items]
    blocks = tuple(
        cfg.build(PolarBlock, 2.0 * math.asin(math.sqrt(p)), phi, eta)
        for p, (phi, eta) in zip(game.coins, phases)
    )
    qgame = QuantumHDGame(blocks)
    pc = pwin_closed_form(game)
    sim = pwin_quantum_sim(qgame, spec).p_win
    closed = _closed_or_none(qgame, spec)
    _checked(closed, sim, True, "compare")
    pq = sim if closed is None else closed
    row = dict(zip(("p1", "p2", "p3", "p4"), game.coins))
    row.update(classical_p_win=pc, classical_payoff=2 * pc - 1,
               classical_classification=classify(game).verdict)
    row.update(zip(BLOCK_PARAMS, (v for b in blocks for v in (b.theta, b.phi, b.eta))))
    row.update(quantum_p_win=pq, quantum_payoff=expected_payoff(pq),
               quantum_classification=verdict_from_pwin(pq), quantum_minus_classical=pq - pc,
               oracle_checked=closed is not None)
    return COMPARE_FIELDS, [row]


COMMANDS = {
    ("classical", "classify"): cmd_classical_classify,
    ("classical", "simulate"): cmd_classical_simulate,
    ("classical", "region"): cmd_classical_region,
    ("quantum", "play"): cmd_quantum_play,
    ("quantum", "sequence"): cmd_quantum_sequence,
    ("quantum", "sweep"): cmd_quantum_sweep,
    ("compare", None): cmd_compare,
}


# ------------------------------------------------------------------ driver

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="JSON run config")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="top-level RNG seed")
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="output file (default stdout)")
    common.add_argument("--oracle-every", type=int, default=argparse.SUPPRESS, dest="oracle_every",
                        help="check every Nth closed-form value against simulation")

    parser = argparse.ArgumentParser(prog="qparrondo", parents=[common], description=__doc__.split("\n\n")[0])
    groups = parser.add_subparsers(dest="group", required=True)
    for group, subs in (("classical", ("classify", "simulate", "region")),
                        ("quantum", ("play", "sequence", "sweep"))):
        gp = groups.add_parser(group, parents=[common])
        sp = gp.add_subparsers(dest="command", required=True)
        for sub in subs:
            sp.add_parser(sub, parents=[common])
    groups.add_parser("compare", parents=[common])
    return parser


def _load_config(path: Path | None) -> Config:
    if path is None:
        return Config({})
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return Config(data)


def resolve_options(args: argparse.Namespace, cfg: Config) -> argparse.Namespace:
    opts = argparse.Namespace()
    opts.seed = getattr(args, "seed", None)
    if opts.seed is None:
        opts.seed = cfg.integer("seed", 0)
    opts.format = getattr(args, "format", None) or cfg.get("format", "csv", str)
    if opts.format not in FORMATS:
        raise ConfigError(f"format: expected one of {FORMATS}, got {opts.format!r}")
    opts.oracle_every = getattr(args, "oracle_every", None)
    if opts.oracle_every is None:
        opts.oracle_every = cfg.integer("oracle_every", 1000)
    if opts.oracle_every < 1:
        raise ConfigError("oracle_every: must be a positive integer")
    if opts.seed < 0:
        raise ConfigError("seed: must be non-negative")
    return opts


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = COMMANDS[(args.group, getattr(args, "command", None))]
    out_path = getattr(args, "out", None)
    try:
        cfg = _load_config(getattr(args, "config", None))
        opts = resolve_options(args, cfg)
        fields, rows = command(cfg, opts)
        if out_path is None:
            emit(rows, fields, opts.format, sys.stdout)
        else:
            # Materialize first so a failure mid-stream leaves no partial file.
            rows = list(rows)
            with open(out_path, "w", newline="", encoding="utf-8") as fh:
                emit(rows, fields, opts.format, fh)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegenerateChain, ReducibleChain) as exc:
        print(f"degenerate chain: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
