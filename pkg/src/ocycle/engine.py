"""Game loop, rules enforcement, transcripts, referee and exact solver.

``play`` runs one full game from a :class:`GameConfig` and returns a
:class:`Transcript` that replays deterministically: all randomness flows
through the config seed.  The referee re-simulates a transcript with
board primitives only and reports every rule breach.  ``solve_exact``
is the brute-force oracle for tiny boards: full minimax over orientation
states with a transposition table on the canonical pair-state.

Cycle detection during play is exact and cheap: OMaker's single arc is
pre-checked with one reachability query (only when the triangle tracker
says some pair is closable at all), and a breaker reply triggers a full
cycle check only when it directed a pair the tracker had marked closable.
Cycles never disappear, so nothing is missed.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass, field
from typing import Optional

from .board import (
    OBREAKER,
    OMAKER,
    Arc,
    ForfeitError,
    OrientationBoard,
    Signal,
)
from .monotone import (
    MonotoneState,
    TrivialState,
    check_monotone_invariants,
    check_trivial_invariants,
    new_monotone_state,
    respond_monotone,
    respond_trivial,
)
from .omaker import OMAKER_NAMES, make_omaker, naive_obreaker
from .strict import (
    InvariantBreach,
    StrictState,
    StructureExhausted,
    check_strict_invariants,
    new_strict_state,
    respond_strict,
)
from .threats import ThreatIndex

MONOTONE = "monotone"
STRICT = "strict"
RULES = (MONOTONE, STRICT)

CYCLE_CLOSED = "CycleClosed"
TRANSITIVE = "TransitiveTournament"
FORFEIT = "Forfeit"

OBREAKER_NAMES = ("alpha-monotone", "riskless-strict", "trivial", "naive")


class EngineCheckError(RuntimeError):
    """A per-round certificate check failed while play ran in check mode."""


class Unsolved(RuntimeError):
    """solve_exact hit its node cap."""


@dataclass
class GameConfig:
    n: int
    b: int
    rules: str = MONOTONE
    obreaker: str = "trivial"
    omaker: str = "random"
    seed: int = 0
    check: str = "none"  # none | certificate | deep

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        pairs = self.n * (self.n - 1) // 2
        if self.b < 1 or (pairs > 0 and self.b > pairs):
            raise ValueError(f"bias {self.b} outside 1..{pairs}")
        if self.rules not in RULES:
            raise ValueError(f"unknown rules {self.rules!r}")
        if self.obreaker not in OBREAKER_NAMES:
            raise ValueError(f"unknown OBreaker strategy {self.obreaker!r}")
        if self.omaker not in OMAKER_NAMES and self.omaker not in (
            "longpath",
            "human",
            "scripted",
        ):
            raise ValueError(f"unknown OMaker strategy {self.omaker!r}")
        if self.obreaker == "alpha-monotone" and self.rules != MONOTONE:
            raise ValueError("alpha-monotone plays under monotone rules only")
        if self.obreaker == "riskless-strict" and self.rules != STRICT:
            raise ValueError("riskless-strict plays under strict rules only")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "b": self.b,
            "rules": self.rules,
            "obreaker": self.obreaker,
            "omaker": self.omaker,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "GameConfig":
        return cls(
            n=int(payload["n"]),
            b=int(payload["b"]),
            rules=payload["rules"],
            obreaker=payload["obreaker"],
            omaker=payload["omaker"],
            seed=int(payload.get("seed", 0)),
        )


@dataclass
class Transcript:
    config: GameConfig
    rounds: list[dict] = field(default_factory=list)
    winner: Optional[str] = None
    terminal: Optional[str] = None
    final: Optional[dict] = None
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "rounds": self.rounds,
            "winner": self.winner,
            "terminal": self.terminal,
            "final": self.final,
            "meta": self.meta,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, payload: dict) -> "Transcript":
        return cls(
            config=GameConfig.from_json(payload["config"]),
            rounds=list(payload["rounds"]),
            winner=payload.get("winner"),
            terminal=payload.get("terminal"),
            final=payload.get("final"),
            meta=dict(payload.get("meta", {})),
        )


# ---------------------------------------------------------------------------
# OBreaker adapters
# ---------------------------------------------------------------------------


class AlphaMonotoneBreaker:
    name = "alpha-monotone"

    def __init__(self, n: int, b: int, rules: str):
        self.state: MonotoneState = new_monotone_state(n, b)

    def respond(self, board: OrientationBoard, maker_arc: Arc) -> list[Arc]:
        arcs, self.state = respond_monotone(self.state, board, maker_arc)
        return arcs

    def post_check(self, board: OrientationBoard, deep: bool = False) -> list[str]:
        return check_monotone_invariants(self.state, board, deep=deep)

    def summary(self) -> dict:
        return self.state.summary()


class RisklessStrictBreaker:
    name = "riskless-strict"

    def __init__(self, n: int, b: int, rules: str):
        self.n = n
        self.b = b
        self.state: StrictState = new_strict_state(n, b)

    def respond(self, board: OrientationBoard, maker_arc: Arc) -> list[Arc]:
        arcs, self.state = respond_strict(self.state, board, maker_arc, self.b, self.n)
        return arcs

    def post_check(self, board: OrientationBoard, deep: bool = False) -> list[str]:
        return check_strict_invariants(self.state, board)

    def summary(self) -> dict:
        out = self.state.summary()
        out["transition_round"] = self.state.transition_round
        return out


class TrivialBreaker:
    name = "trivial"

    def __init__(self, n: int, b: int, rules: str):
        self.b = b
        self.state = TrivialState()

    def respond(self, board: OrientationBoard, maker_arc: Arc) -> list[Arc]:
        arcs, self.state = respond_trivial(self.state, board, maker_arc, self.b)
        return arcs

    def post_check(self, board: OrientationBoard, deep: bool = False) -> list[str]:
        return check_trivial_invariants(self.state, board)

    def summary(self) -> dict:
        return self.state.summary()


class NaiveBreaker:
    name = "naive"

    def __init__(self, n: int, b: int, rules: str):
        self.b = b
        self.strict = rules == STRICT

    def respond(self, board: OrientationBoard, maker_arc: Arc) -> list[Arc]:
        return naive_obreaker(board, maker_arc, self.b, strict=self.strict)

    def post_check(self, board: OrientationBoard, deep: bool = False) -> list[str]:
        return []

    def summary(self) -> dict:
        return {"strategy": "naive"}


def make_obreaker(name: str, n: int, b: int, rules: str):
    factories = {
        "alpha-monotone": AlphaMonotoneBreaker,
        "riskless-strict": RisklessStrictBreaker,
        "trivial": TrivialBreaker,
        "naive": NaiveBreaker,
    }
    if name not in factories:
        raise ValueError(f"unknown OBreaker strategy {name!r}")
    return factories[name](n, b, rules)


class ScriptedOMaker:
    """Replays a fixed arc list; used by the referee and mirror tests."""

    name = "scripted"

    def __init__(self, arcs: list[Arc]):
        self.arcs = list(arcs)
        self.pos = 0

    def reset(self, board: OrientationBoard) -> None:
        self.pos = 0

    def move(self, board: OrientationBoard) -> Arc:
        arc = self.arcs[self.pos]
        self.pos += 1
        return tuple(arc)


# ---------------------------------------------------------------------------
# play
# ---------------------------------------------------------------------------


def _board_hash(crc: int, arcs: list[Arc]) -> int:
    for t, h in arcs:
        crc = zlib.crc32(struct.pack("<HH", t, h), crc)
    return crc


def play(config: GameConfig, maker=None) -> Transcript:
    """Run one game to its terminal state.

    ``maker`` overrides the configured OMaker (used for scripted replays);
    the transcript then records the configured name regardless.
    """
    config.validate()
    board = OrientationBoard(config.n)
    if maker is None:
        maker = make_omaker(config.omaker, config.seed)
    maker.reset(board)
    breaker = make_obreaker(config.obreaker, config.n, config.b, config.rules)
    tracker = ThreatIndex(board)
    tr = Transcript(config=config)
    crc = 0

    def finish(winner: str, terminal: str, **meta) -> Transcript:
        tr.winner = winner
        tr.terminal = terminal
        tr.final = board.to_json()
        tr.meta.update(meta)
        tr.meta.setdefault("summary", breaker.summary())
        return tr

    while True:
        if board.is_full():
            if board.is_transitive_tournament():
                return finish(OBREAKER, TRANSITIVE)
            return finish(OMAKER, CYCLE_CLOSED)
        maker_arc = tuple(maker.move(board))
        if not board.is_available(*maker_arc):
            return finish(
                OBREAKER, FORFEIT, fault=OMAKER, reason=f"unavailable arc {maker_arc}"
            )
        closes = tracker.any_closable() and board.reaches(maker_arc[1], maker_arc[0])
        board.direct(*maker_arc, OMAKER)
        if closes:
            crc = _board_hash(crc, [maker_arc])
            tr.rounds.append(
                {"maker": list(maker_arc), "breaker": [], "hash": f"{crc:08x}"}
            )
            return finish(OMAKER, CYCLE_CLOSED)
        if board.is_full():
            crc = _board_hash(crc, [maker_arc])
            tr.rounds.append(
                {"maker": list(maker_arc), "breaker": [], "hash": f"{crc:08x}"}
            )
            continue
        before = board.undirected_count
        try:
            reply = breaker.respond(board, maker_arc)
        except (ForfeitError, StructureExhausted, InvariantBreach) as exc:
            return finish(OMAKER, FORFEIT, fault=OBREAKER, reason=str(exc))
        if config.rules == MONOTONE:
            legal = 1 <= len(reply) <= config.b
        else:
            legal = len(reply) == min(config.b, before)
        if not legal:
            return finish(
                OMAKER,
                FORFEIT,
                fault=OBREAKER,
                reason=f"reply of {len(reply)} arcs violates {config.rules} bias",
            )
        crc = _board_hash(crc, [maker_arc] + reply)
        tr.rounds.append(
            {
                "maker": list(maker_arc),
                "breaker": [list(a) for a in reply],
                "hash": f"{crc:08x}",
            }
        )
        if tracker.sync() and board.has_cycle():
            return finish(OMAKER, CYCLE_CLOSED, fault=OBREAKER)
        if config.check != "none":
            viols = breaker.post_check(board, deep=config.check == "deep")
            if viols:
                raise EngineCheckError(
                    f"round {len(tr.rounds)}: certificate violations: {viols[:5]}"
                )


# ---------------------------------------------------------------------------
# referee
# ---------------------------------------------------------------------------


def referee_check(transcript: Transcript | dict, deep: bool = False) -> list[str]:
    """Re-simulate a transcript and report every rule violation.

    ``deep`` additionally replays the full game through the real strategy
    stack in certificate-check mode and requires a byte-identical record.
    """
    if isinstance(transcript, dict):
        transcript = Transcript.from_json(transcript)
    v: list[str] = []
    cfg = transcript.config
    try:
        cfg.validate()
    except ValueError as exc:
        return [f"config: {exc}"]
    board = OrientationBoard(cfg.n)
    tracker = ThreatIndex(board)
    crc = 0
    ended: Optional[tuple[str, str]] = None
    for i, rnd in enumerate(transcript.rounds, start=1):
        if ended is not None:
            v.append(f"round {i}: play continued after the game ended")
            break
        if board.is_full():
            v.append(f"round {i}: maker moved on a full board")
            break
        maker_arc = tuple(rnd["maker"])
        if not board.is_available(*maker_arc):
            v.append(f"round {i}: Availability: maker arc {maker_arc} not available")
            break
        closes = tracker.any_closable() and board.reaches(maker_arc[1], maker_arc[0])
        board.direct(*maker_arc, OMAKER)
        reply = [tuple(a) for a in rnd["breaker"]]
        if closes:
            if reply:
                v.append(f"round {i}: breaker replied after a closed cycle")
            ended = (OMAKER, CYCLE_CLOSED)
        elif board.is_full():
            if reply:
                v.append(f"round {i}: breaker replied on a full board")
            ended = None  # verdict from the final board below
        else:
            before = board.undirected_count
            for arc in reply:
                if not board.is_available(*arc):
                    v.append(f"round {i}: Availability: breaker arc {arc}")
                    return v
                board.direct(*arc, OBREAKER)
            if cfg.rules == MONOTONE:
                if not 1 <= len(reply) <= cfg.b:
                    v.append(f"round {i}: MonotoneBias: reply of {len(reply)} arcs")
            else:
                if len(reply) != min(cfg.b, before):
                    v.append(
                        f"round {i}: StrictBias: reply of {len(reply)} arcs, "
                        f"expected {min(cfg.b, before)}"
                    )
            if tracker.sync() and board.has_cycle():
                ended = (OMAKER, CYCLE_CLOSED)
        crc = _board_hash(crc, [maker_arc] + reply)
        if rnd.get("hash") != f"{crc:08x}":
            v.append(f"round {i}: board hash mismatch")
    if transcript.terminal == FORFEIT:
        pass  # a forfeit verdict is the engine's own diagnosis; arcs above still had to be legal
    else:
        if ended is None:
            if board.is_full():
                ended = (
                    (OBREAKER, TRANSITIVE)
                    if board.is_transitive_tournament()
                    else (OMAKER, CYCLE_CLOSED)
                )
            else:
                v.append("game record stops before a terminal position")
        if ended is not None:
            winner, terminal = ended
            if transcript.winner != winner:
                v.append(f"winner recorded {transcript.winner}, replay says {winner}")
            if transcript.terminal != terminal:
                v.append(
                    f"terminal recorded {transcript.terminal}, replay says {terminal}"
                )
    if transcript.final is not None and transcript.final != board.to_json():
        v.append("final board does not match the replay")
    if deep and not v:
        again = play(
            GameConfig(**{**cfg.to_json(), "check": "certificate"})
        )
        if again.to_json()["rounds"] != transcript.to_json()["rounds"]:
            v.append("deep: strategy replay diverges from the record")
    return v


# ---------------------------------------------------------------------------
# exact solver
# ---------------------------------------------------------------------------


@dataclass
class SolveResult:
    n: int
    b: int
    rules: str
    winner: str
    nodes: int


def solve_exact(n: int, b: int, rules: str, node_cap: int = 2_000_000) -> SolveResult:
    """Who wins under perfect play, by exhaustive minimax.

    OMaker directs exactly one arc per turn; OBreaker directs any 1..b
    (monotone) or exactly min(b, remaining) (strict) orientations of
    distinct undirected pairs.  Memoised on the canonical pair-state plus
    side to move; no isomorphism reduction.
    """
    if rules not in RULES:
        raise ValueError(f"unknown rules {rules!r}")
    memo: dict[tuple[bytes, bool], bool] = {}
    nodes = 0

    def maker_wins(board: OrientationBoard) -> bool:
        nonlocal nodes
        if board.is_full():
            return board.has_cycle()
        key = (board.state_key(), True)
        hit = memo.get(key)
        if hit is not None:
            return hit
        nodes += 1
        if nodes > node_cap:
            raise Unsolved(f"node cap {node_cap} exceeded at n={n}, b={b}")
        desc = board.descendant_masks()
        result = False
        for u, w in board.undirected_pairs():
            for t, h in ((u, w), (w, u)):
                if desc[h] & (1 << t):
                    result = True  # closing arc available
                    break
                child = board.copy()
                child.direct(t, h, OMAKER)
                if not breaker_saves(child):
                    result = True
                    break
            if result:
                break
        memo[key] = result
        return result

    def breaker_saves(board: OrientationBoard) -> bool:
        nonlocal nodes
        if board.is_full():
            return not board.has_cycle()
        key = (board.state_key(), False)
        hit = memo.get(key)
        if hit is not None:
            return hit
        nodes += 1
        if nodes > node_cap:
            raise Unsolved(f"node cap {node_cap} exceeded at n={n}, b={b}")
        rem = board.undirected_count
        sizes = [min(b, rem)] if rules == STRICT else range(1, min(b, rem) + 1)
        pairs = board.undirected_pairs()

        def replies(prefix: OrientationBoard, start: int, left: int):
            if left == 0:
                yield prefix
                return
            for idx in range(start, len(pairs) - left + 1):
                u, w = pairs[idx]
                for t, h in ((u, w), (w, u)):
                    child = prefix.copy()
                    child.direct(t, h, OBREAKER)
                    yield from replies(child, idx + 1, left - 1)

        result = False
        for s in sizes:
            for after in replies(board, 0, s):
                if after.has_cycle():
                    continue
                if maker_wins(after):
                    continue
                result = True
                break
            if result:
                break
        memo[key] = result
        return result

    start = OrientationBoard(n)
    winner = OMAKER if (start.n_pairs > 0 and maker_wins(start)) else OBREAKER
    return SolveResult(n=n, b=b, rules=rules, winner=winner, nodes=nodes)
