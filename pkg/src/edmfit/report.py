"""Report documents: human-readable tables plus lossless JSON round-trip.

A ``ReportDocument`` is the structured result of a stats, fit, or
reproduction run.  ``to_json``/``from_json`` round-trip every value
exactly (floats serialize via ``repr``), which the CLI exposes through
``--json``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .errors import DomainError
from .inference import EmpiricalStats, FitResult


@dataclass(frozen=True)
class StatsBlock:
    n_obs: int
    mean: float
    variance: float
    m3: float
    skewness: float
    dispersion: float
    zero_fraction: float

    @classmethod
    def from_stats(cls, s: EmpiricalStats) -> "StatsBlock":
        return cls(s.n_obs, s.mean, s.variance, s.m3, s.skewness, s.dispersion, s.zero_fraction)


@dataclass(frozen=True)
class ModelRow:
    """One fitted or reference model column."""

    label: str
    family: str | None = None
    r: int | None = None
    m: float | None = None
    p: float | None = None
    b: float | None = None
    loglik: float | None = None
    chi2: float | None = None
    df: int | None = None
    p_value: float | None = None
    p_value_text: str | None = None  # for reference columns printed as "<0.001"
    rmse: float | None = None
    expected: tuple[float | None, ...] = ()
    converged: bool | None = None
    n_params: int | None = None
    cells: str | None = None

    @classmethod
    def from_fit(cls, label: str, fit: FitResult) -> "ModelRow":
        spec = fit.spec
        params = getattr(spec, "params", None)
        if params is not None:
            family, r, p, b = params.family.value, params.r, params.p, params.b
            m = spec.m
        else:  # baseline spec
            family, r, p, b, m = spec.kind.value, None, spec.p, None, spec.m
        return cls(
            label=label,
            family=family,
            r=r,
            m=m,
            p=p,
            b=b,
            loglik=fit.loglik,
            chi2=fit.gof.chi2,
            df=fit.gof.df,
            p_value=fit.gof.p_value,
            rmse=fit.gof.rmse,
            expected=tuple(float(x) for x in fit.expected),
            converged=fit.converged,
            n_params=fit.gof.n_params,
            cells=fit.gof.cells,
        )


@dataclass(frozen=True)
class ComparisonRow:
    column: str
    quantity: str
    ours: float
    reference: float
    delta: float
    tol: float
    ok: bool


@dataclass(frozen=True)
class ReportDocument:
    kind: str
    dataset: str | None = None
    source: str | None = None
    observed: tuple[int, ...] | None = None
    open_tail: bool = False
    stats: StatsBlock | None = None
    models: tuple[ModelRow, ...] = ()
    comparisons: tuple[ComparisonRow, ...] = ()
    pooling: str | None = None
    passed: bool | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    # -- serialization ------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        raw = json.loads(text)
        stats = StatsBlock(**raw["stats"]) if raw.get("stats") else None
        models = tuple(
            ModelRow(**{**row, "expected": tuple(row["expected"])})
            for row in raw.get("models", ())
        )
        comparisons = tuple(ComparisonRow(**row) for row in raw.get("comparisons", ()))
        return cls(
            kind=raw["kind"],
            dataset=raw.get("dataset"),
            source=raw.get("source"),
            observed=tuple(raw["observed"]) if raw.get("observed") else None,
            open_tail=raw.get("open_tail", False),
            stats=stats,
            models=models,
            comparisons=comparisons,
            pooling=raw.get("pooling"),
            passed=raw.get("passed"),
            notes=tuple(raw.get("notes", ())),
        )

    # -- rendering -----------------------------------------------------

    def to_text(self) -> str:
        lines: list[str] = []
        if self.dataset:
            head = f"dataset {self.dataset}"
            if self.source:
                head += f" ({self.source})"
            lines.append(head)
        if self.stats:
            s = self.stats
            lines += [
                f"  N = {s.n_obs}",
                f"  mean          = {s.mean:.6g}",
                f"  variance      = {s.variance:.6g}",
                f"  third moment  = {s.m3:.6g}",
                f"  skewness      = {s.skewness:.6g}",
                f"  dispersion D  = {s.dispersion:.6g}",
                f"  zero fraction = {s.zero_fraction:.6g}",
            ]
        if self.models:
            lines.append(self._model_table())
        if self.pooling:
            lines.append(f"pooling: {self.pooling}")
        for row in self.comparisons:
            mark = "ok  " if row.ok else "FAIL"
            lines.append(
                f"  [{mark}] {row.column:<14s} {row.quantity:<10s} "
                f"ours={row.ours:<12.6g} ref={row.reference:<12.6g} "
                f"delta={row.delta:+.4g} (tol {row.tol:g})"
            )
        if self.passed is not None:
            lines.append("RESULT: PASS" if self.passed else "RESULT: FAIL")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)

    def _model_table(self) -> str:
        ncat = len(self.observed) if self.observed else max(
            (len(m.expected) for m in self.models), default=0
        )
        labels = [m.label for m in self.models]
        widths = [max(12, len(lab) + 2) for lab in labels]
        out = []
        header = f"{'k':>4s} {'observed':>10s}" if self.observed else f"{'k':>4s}"
        for lab, w in zip(labels, widths):
            header += f" {lab:>{w}s}"
        out.append(header)
        for k in range(ncat):
            tail_mark = "+" if self.open_tail and k == ncat - 1 else ""
            row = f"{str(k) + tail_mark:>4s}"
            if self.observed:
                row += f" {self.observed[k]:>10d}"
            for mrow, w in zip(self.models, widths):
                val = mrow.expected[k] if k < len(mrow.expected) else None
                row += f" {'':>{w}s}" if val is None else f" {val:>{w}.2f}"
            out.append(row)
        stat_rows = [
            ("L", "loglik", "{:.2f}"),
            ("chi2", "chi2", "{:.4g}"),
            ("df", "df", "{:d}"),
            ("p-value", "p_value", "{:.4f}"),
            ("RMSE", "rmse", "{:.4g}"),
        ]
        for name, attr, fmt in stat_rows:
            row = f"{name:>15s}" if self.observed else f"{name:>4s}"
            for mrow, w in zip(self.models, widths):
                val = getattr(mrow, attr)
                if attr == "p_value" and val is None and mrow.p_value_text:
                    cell = mrow.p_value_text
                elif val is None:
                    cell = ""
                else:
                    cell = fmt.format(val)
                row += f" {cell:>{w}s}"
            out.append(row)
        params_bits = []
        for mrow in self.models:
            if mrow.p is not None and mrow.family in ("abm", "lms", "lmns", "nb"):
                bit = f"{mrow.label}: p={mrow.p:.6g}"
                if mrow.b is not None:
                    bit += f", b={mrow.b:.6g}"
                if mrow.m is not None:
                    bit += f", m={mrow.m:.6g}"
                params_bits.append(bit)
        if params_bits:
            out.append("fitted parameters: " + "; ".join(params_bits))
        return "\n".join(out)


def write_svg_histogram(probs, path, title: str = "pmf") -> None:
    """Static SVG bar chart of a pmf table."""
    probs = list(probs)
    if not probs:
        raise DomainError("cannot plot an empty pmf")
    width, height, margin = 640, 400, 45
    plot_w, plot_h = width - 2 * margin, height - 2 * margin
    top = max(probs)
    bar_w = plot_w / len(probs)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{margin}" y1="{height-margin}" x2="{width-margin}" y2="{height-margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height-margin}" stroke="black"/>',
        f'<text x="12" y="{margin}" font-size="10">{top:.3g}</text>',
    ]
    for n, f in enumerate(probs):
        h = 0.0 if top == 0 else f / top * plot_h
        x = margin + n * bar_w
        parts.append(
            f'<rect x="{x + 0.08 * bar_w:.2f}" y="{height - margin - h:.2f}" '
            f'width="{0.84 * bar_w:.2f}" height="{h:.2f}" fill="#4878a8"/>'
        )
        if len(probs) <= 40 or n % max(1, len(probs) // 20) == 0:
            parts.append(
                f'<text x="{x + bar_w / 2:.1f}" y="{height - margin + 14}" '
                f'text-anchor="middle" font-size="9">{n}</text>'
            )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
