"""Plain-text game and profile files.

Game format: a header line with the matrix size (one integer for a
square game, or "rows cols"), then the row player's matrix one line per
row, a blank separator line, and the column player's matrix. Floats are
written with %.17g so save/load round-trips bitwise.

Profile format: two non-blank lines of probabilities, row player first.
Entries must be nonnegative up to 1e-9 and sum to 1 within 1e-6; the
parsed vectors are renormalized exactly.
"""

import re
import warnings
from pathlib import Path

import numpy as np

from .errors import InputError, ParseError
from .game import BimatrixGame, MixedStrategy, StrategyProfile, normalize_game

_TOKEN = re.compile(r"\S+")

PROFILE_SUM_TOL = 1e-6
PROFILE_NEG_TOL = 1e-9
RANGE_TOL = 1e-12


def save_game(game, path):
    lines = [str(game.n)]
    for row in game.R:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    lines.append("")
    for row in game.C:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def save_profile(profile, path):
    lines = [
        " ".join(f"{v:.17g}" for v in profile.row.probs),
        " ".join(f"{v:.17g}" for v in profile.col.probs),
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _tokens(line):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _parse_floats(line, lineno, expected=None):
    toks = _tokens(line)
    if expected is not None and len(toks) != expected:
        raise ParseError(
            f"expected {expected} entries, found {len(toks)}", line=lineno
        )
    vals = []
    for text, col in toks:
        try:
            vals.append(float(text))
        except ValueError:
            raise ParseError(
                f"not a number: {text!r}", line=lineno, column=col
            ) from None
    return vals


def _read_matrix(lines, start, rows, cols, what):
    data = []
    for r in range(rows):
        idx = start + r
        if idx >= len(lines) or not lines[idx].strip():
            raise ParseError(
                f"{what} matrix ends early: expected {rows} rows",
                line=idx + 1,
            )
        data.append(_parse_floats(lines[idx], idx + 1, expected=cols))
    return np.array(data, dtype=np.float64), start + rows


def load_game(path, pad=False, strict=False):
    """Read a game file.

    Nonsquare matrices raise unless pad=True, which zero-pads to
    square. Entries outside [0, 1] raise when strict=True; otherwise
    both matrices are min-max normalized with a warning.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    first = 0
    while first < len(lines) and not lines[first].strip():
        first += 1
    if first >= len(lines):
        raise ParseError("empty game file", line=1)
    header = _tokens(lines[first])
    if len(header) == 1:
        dims = (header[0], header[0])
    elif len(header) == 2:
        dims = (header[0], header[1])
    else:
        raise ParseError(
            "header must be one integer or 'rows cols'", line=first + 1
        )
    try:
        rows = int(dims[0][0])
        cols = int(dims[1][0])
    except ValueError:
        raise ParseError(
            f"bad size in header: {lines[first].strip()!r}",
            line=first + 1,
            column=dims[0][1],
        ) from None
    if rows < 1 or cols < 1:
        raise ParseError("matrix sizes must be positive", line=first + 1)

    R, after = _read_matrix(lines, first + 1, rows, cols, "row player")
    sep = after
    if sep >= len(lines) or lines[sep].strip():
        raise ParseError(
            "expected a blank line between the matrices", line=sep + 1
        )
    C, after = _read_matrix(lines, sep + 1, rows, cols, "column player")
    for idx in range(after, len(lines)):
        if lines[idx].strip():
            raise ParseError("unexpected trailing content", line=idx + 1)

    if rows != cols:
        if not pad:
            raise ParseError(
                f"matrices are {rows}x{cols}, not square; rerun with padding "
                "enabled to zero-fill",
                line=first + 1,
            )
        n = max(rows, cols)
        Rp = np.zeros((n, n))
        Cp = np.zeros((n, n))
        Rp[:rows, :cols] = R
        Cp[:rows, :cols] = C
        R, C = Rp, Cp

    lo = min(float(R.min()), float(C.min()))
    hi = max(float(R.max()), float(C.max()))
    if lo < -RANGE_TOL or hi > 1.0 + RANGE_TOL:
        if strict:
            raise InputError(
                f"payoffs span [{lo:.6g}, {hi:.6g}], outside [0, 1]"
            )
        warnings.warn(
            f"payoffs span [{lo:.6g}, {hi:.6g}]; normalizing both matrices "
            "to [0, 1]",
            stacklevel=2,
        )
        return normalize_game(R, C)
    return BimatrixGame(R, C)


def load_profile(path, n):
    """Read a two-line profile file for an n x n game."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [
        (line, idx + 1) for idx, line in enumerate(text.split("\n"))
        if line.strip()
    ]
    if len(lines) != 2:
        raise ParseError(
            f"profile file must have exactly 2 non-blank lines, found "
            f"{len(lines)}",
            line=lines[2][1] if len(lines) > 2 else 1,
        )
    strategies = []
    for line, lineno in lines:
        vals = np.array(_parse_floats(line, lineno, expected=n))
        if vals.min() < -PROFILE_NEG_TOL:
            raise ParseError(
                f"negative probability {vals.min():.6g}", line=lineno
            )
        total = float(vals.sum())
        if abs(total - 1.0) > PROFILE_SUM_TOL:
            raise ParseError(
                f"probabilities sum to {total!r}, not 1", line=lineno
            )
        strategies.append(MixedStrategy.project(vals))
    return StrategyProfile(strategies[0], strategies[1])
