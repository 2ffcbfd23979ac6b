"""File formats: channel sample files, CSV rendering, atomic output writing."""

from __future__ import annotations

import os
import re
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ChannelFileError
from .simulate import LinkValue, RocCurve

_TOKEN = re.compile(r"\S+")


def format_sci(x: float) -> str:
    """Fixed 12-significant-digit scientific notation (the CSV number format)."""
    return f"{x:.11e}"


def format_complex(z: complex) -> str:
    return f"{format_sci(z.real)}{z.imag:+.11e}j"


def read_channel_file(path: str | os.PathLike) -> np.ndarray:
    """Read one channel: one complex sample per line as ``re im``.

    Blank lines and lines starting with ``#`` are ignored. Parse failures
    carry the 1-based line and column of the offending token.
    """
    samples = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ChannelFileError(f"{path}: cannot read: {exc}", path=str(path)) from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = list(_TOKEN.finditer(line))
        if len(tokens) != 2:
            raise ChannelFileError(
                f"{path}:{lineno}: expected 're im', found {len(tokens)} token(s)",
                path=str(path),
                line=lineno,
                column=1,
            )
        parts = []
        for tok in tokens:
            try:
                parts.append(float(tok.group()))
            except ValueError:
                raise ChannelFileError(
                    f"{path}:{lineno}:{tok.start() + 1}: bad numeric token {tok.group()!r}",
                    path=str(path),
                    line=lineno,
                    column=tok.start() + 1,
                ) from None
        samples.append(complex(parts[0], parts[1]))
    if not samples:
        raise ChannelFileError(f"{path}: no samples found", path=str(path), line=1, column=1)
    return np.array(samples, dtype=np.complex128)


def render_roc_csv(curve: RocCurve) -> str:
    lines = ["threshold,pfa,pd"]
    for t, pfa, pd in curve.points():
        lines.append(f"{format_sci(t)},{format_sci(pfa)},{format_sci(pd)}")
    return "\n".join(lines) + "\n"


def render_link_value_csv(rows: list[LinkValue], pfa_target: float = 0.1) -> str:
    lines = [f"edge,pd_gain_at_pfa{pfa_target:g},auc_gain,critical"]
    for row in rows:
        i, j = row.edge
        if row.critical:
            lines.append(f"{i}-{j},,,yes")
        else:
            lines.append(
                f"{i}-{j},{format_sci(row.pd_gain_at_pfa)},{format_sci(row.auc_gain)},no"
            )
    return "\n".join(lines) + "\n"


def write_files_atomically(out_dir: str | os.PathLike, files: Mapping[str, str]) -> list[Path]:
    """Write all files or none: temp files first, then a rename pass.

    Content is rendered by the caller beforehand, so any computation error
    leaves no output at all; an I/O error during staging removes the temps.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    staged: list[tuple[Path, Path]] = []
    try:
        for name, content in files.items():
            final = out / name
            tmp = out / f".{name}.tmp"
            tmp.write_text(content, encoding="utf-8")
            staged.append((tmp, final))
        for tmp, final in staged:
            os.replace(tmp, final)
    except OSError:
        for tmp, _ in staged:
            tmp.unlink(missing_ok=True)
        raise
    return [final for _, final in staged]
