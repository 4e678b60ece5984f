"""Human-readable rendering of pencils, decompositions and reports."""

from detrep_core.constructions import WaringDecomposition
from detrep_core.pencil import PencilMatrix


def render_pencil(pencil: PencilMatrix, width: int = 0) -> str:
    """Aligned matrix display, with block boundaries marked by ``|`` and ``-``."""
    cells = [[str(pencil.entry(r, c)) for c in range(pencil.n)] for r in range(pencil.n)]
    column_width = max(width, max(len(cell) for row in cells for cell in row))
    boundaries = set(pencil.layout.offsets[1:])
    meta = pencil.meta
    lines = [
        f"# {meta.construction}: det = {meta.sign * meta.expected_factor} * {meta.target}, "
        f"n={pencil.n}, blocks: " + ", ".join(f"{b.label}[{b.dim}]" for b in pencil.layout.blocks)
    ]
    rendered = []
    for row in cells:
        pieces = []
        for c, cell in enumerate(row):
            if c in boundaries:
                pieces.append("|")
            pieces.append(cell.rjust(column_width))
        rendered.append(" ".join(pieces))
    for r, text in enumerate(rendered):
        if r in boundaries:
            lines.append("-" * len(text))
        lines.append(text)
    return "\n".join(lines)


def render_waring(decomposition: WaringDecomposition) -> str:
    kind = "symmetric" if decomposition.symmetric else "asymmetric"
    lines = [f"# x_1*...*x_{decomposition.n} as {decomposition.rank} {kind} power terms"]
    for coefficient, signs in decomposition.terms:
        linear = " ".join(("+" if s > 0 else "-") + f"x_{j + 1}" for j, s in enumerate(signs))
        lines.append(f"{str(coefficient):>12}  ({linear})^{decomposition.n}")
    return "\n".join(lines)


def render_report_table(report: dict) -> str:
    """Table of checks from a suite report dictionary."""
    header = f"{report['construction']} size={report['size']} n={report['n']}: {report['verdict'].upper()}"
    rows = [("check", "mode", "verdict", "detail")]
    for check in report["checks"]:
        rows.append((check["check"], check["mode"], check["verdict"], check["detail"]))
    widths = [max(len(str(row[i])) for row in rows) for i in range(3)]
    lines = [header]
    for index, row in enumerate(rows):
        lines.append(
            "  ".join(str(row[i]).ljust(widths[i]) for i in range(3)) + "  " + str(row[3])
        )
        if index == 0:
            lines.append("-" * (sum(widths) + 6 + len("detail")))
    for check in report["checks"]:
        if check["witness"] is not None:
            lines.append(f"witness for {check['check']}: {check['witness']}")
    return "\n".join(lines)
