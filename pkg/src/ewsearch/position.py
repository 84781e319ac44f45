"""Plain-text position files.

Format::

    game=hex|go
    size=N
    to_move=B|W
    komi=X.5          (go only, required)
    history=3 7 pass  (go only, optional: moves from the empty board)
    <N board rows of . B W, spaces between cells allowed>

``B`` is always the first player. For Go, a ``history`` line replays the
game so the superko history is exact; the board rows are then cross-checked
against the replay. Without it the board is adopted as a fresh root whose
superko history contains only the current configuration.
"""

from __future__ import annotations

from .game import PASS, Move, Player
from .gogame import GoState
from .hexgame import HexState


class PositionFormatError(ValueError):
    """Malformed or inconsistent position text."""


def _parse_move_token(token: str, cells: int) -> Move:
    if token == "pass":
        return PASS
    try:
        move = int(token)
    except ValueError as exc:
        raise PositionFormatError(f"bad history token {token!r}") from exc
    if not 0 <= move < cells:
        raise PositionFormatError(f"history move {move} out of range")
    return move


def _move_token(move: Move) -> str:
    return "pass" if move == PASS else str(move)


def load_position(text: str) -> HexState | GoState:
    fields: dict[str, str] = {}
    rows: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line and not rows:
            key, _, value = line.partition("=")
            key = key.strip().lower()
            if key in fields:
                raise PositionFormatError(f"duplicate field {key!r}")
            fields[key] = value.strip()
        else:
            rows.append(line.replace(" ", ""))
    for required in ("game", "size", "to_move"):
        if required not in fields:
            raise PositionFormatError(f"missing field {required!r}")
    game = fields["game"].lower()
    try:
        size = int(fields["size"])
    except ValueError as exc:
        raise PositionFormatError(f"bad size {fields['size']!r}") from exc
    to_move_field = fields["to_move"].upper()
    if to_move_field not in ("B", "W"):
        raise PositionFormatError(f"to_move must be B or W, got {fields['to_move']!r}")
    to_move = Player.FIRST if to_move_field == "B" else Player.SECOND
    if len(rows) != size:
        raise PositionFormatError(f"expected {size} board rows, got {len(rows)}")
    first_bits = 0
    second_bits = 0
    for r, row in enumerate(rows):
        if len(row) != size:
            raise PositionFormatError(f"row {r} has {len(row)} cells, expected {size}")
        for c, ch in enumerate(row):
            cell = r * size + c
            if ch == "B":
                first_bits |= 1 << cell
            elif ch == "W":
                second_bits |= 1 << cell
            elif ch != ".":
                raise PositionFormatError(f"bad board character {ch!r}")

    if game == "hex":
        if "komi" in fields or "history" in fields:
            raise PositionFormatError("komi/history apply to go only")
        try:
            return HexState.from_board(first_bits, second_bits, to_move, size)
        except ValueError as exc:
            raise PositionFormatError(str(exc)) from exc
    if game != "go":
        raise PositionFormatError(f"unknown game {game!r}")
    if "komi" not in fields:
        raise PositionFormatError("go positions need a komi field")
    try:
        komi = float(fields["komi"])
    except ValueError as exc:
        raise PositionFormatError(f"bad komi {fields['komi']!r}") from exc

    if "history" in fields:
        state = GoState(size, komi)
        tokens = fields["history"].split()
        for token in tokens:
            move = _parse_move_token(token, state.cells)
            state.play(move)
        if (state.black, state.white) != (first_bits, second_bits):
            raise PositionFormatError("board rows disagree with the replayed history")
        if state.to_move is not to_move:
            raise PositionFormatError("to_move disagrees with the replayed history")
        return state
    try:
        return GoState.from_board(first_bits, second_bits, to_move, size, komi)
    except ValueError as exc:
        raise PositionFormatError(str(exc)) from exc


def dump_position(state: HexState | GoState) -> str:
    lines = [f"game={state.game_name}"]
    if state.game_name == "hex":
        size = state.size
        first_bits, second_bits = state.first_bits, state.second_bits
        lines.append(f"size={size}")
        lines.append(f"to_move={'B' if state.to_move is Player.FIRST else 'W'}")
    else:
        if state.rows != state.cols:
            raise ValueError("position files cover square boards only")
        size = state.rows
        first_bits, second_bits = state.black, state.white
        lines.append(f"size={size}")
        lines.append(f"to_move={'B' if state.to_move is Player.FIRST else 'W'}")
        lines.append(f"komi={state.komi}")
        moves = state.moves_played
        if moves:
            lines.append("history=" + " ".join(_move_token(m) for m in moves))
    for r in range(size):
        row = []
        for c in range(size):
            bit = 1 << (r * size + c)
            row.append("B" if first_bits & bit else "W" if second_bits & bit else ".")
        lines.append("".join(row))
    return "\n".join(lines) + "\n"
