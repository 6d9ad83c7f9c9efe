# Repository:   https://github.com/PyRadon
# File Name:    radon/bench/report.py
# Description:  Text, CSV and chart renderings of run reports
#
# Copyright (C) 2026 Dieter J Kybelksties <github@kybelksties.com>
#
# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# as published by the Free Software Foundation; either version 2
# of the License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 59 Temple Place - Suite 330, Boston, MA  02111-1307, USA.
#
# @date: 2026-04-17
# @author: Dieter J Kybelksties

from __future__ import annotations

import csv
import io
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from radon.bench.runner import RunReport
from radon.error import BenchError
from radon.runtime_logger import log_info

CSV_COLUMNS = ("label", "clients", "rate", "achieved", "p50_us", "p90_us", "p99_us", "err")
CDF_PERCENTILES = (1, 5, 10, 25, 50, 75, 90, 95, 99, 99.9, 99.99, 100)


def _ordered(reports: Iterable[RunReport]) -> list[RunReport]:
    ordered = sorted(reports, key=lambda report: report.label)
    if not ordered:
        raise BenchError("nothing to report")
    return ordered


def report_row(report: RunReport) -> dict[str, Any]:
    return {
        "label": report.label,
        "clients": report.clients,
        "rate": f"{report.rate:g}",
        "achieved": f"{report.achieved:.1f}",
        "p50_us": report.p50_us,
        "p90_us": report.p90_us,
        "p99_us": report.p99_us,
        "err": report.failed,
    }


def render_csv(reports: Iterable[RunReport]) -> str:
    """One row per report, ordered by label."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for report in _ordered(reports):
        writer.writerow(report_row(report))
    return buffer.getvalue()


def parse_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def render_table(reports: Iterable[RunReport]) -> str:
    ordered = _ordered(reports)
    header = ["label", "clients", "rate/client", "sent", "ok", "err", "achieved/s", "p50 us", "p90 us",
              "p99 us", "p99.9 us"]
    rows = [[r.label, str(r.clients), f"{r.rate:g}", str(r.sent), str(r.ok), str(r.failed), f"{r.achieved:.1f}",
             str(r.p50_us), str(r.p90_us), str(r.p99_us), str(r.p999_us)] for r in ordered]
    widths = [max(len(cell) for cell in column) for column in zip(header, *rows)]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(line, widths)) for line in [header, *rows]]
    lines.insert(1, "  ".join("-" * width for width in widths))
    for report in ordered:
        if report.per_op:
            mix = ", ".join(f"{kind}={count}" for kind, count in sorted(report.per_op.items()))
            lines.append(f"{report.label}: {mix}")
        extras = ", ".join(f"{key}={value}" for key, value in sorted(report.extras.items()))
        if extras:
            lines.append(f"{report.label}: {extras}")
    return "\n".join(lines)


def write_csv(reports: Iterable[RunReport], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(reports), encoding="utf-8")
    log_info("report written", path=str(path))
    return path


def render_charts(reports: Iterable[RunReport], out_dir: str | Path) -> list[Path]:
    """
    Write ``throughput.png`` (achieved operations per second per label) and ``latency_cdf.png``.
    :raises BenchError: matplotlib is not installed
    """
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise BenchError("charts need matplotlib (pip install kingkybel-pyradon[charts])") from None

    ordered = _ordered(reports)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    figure, axes = plt.subplots(figsize=(6, 4))
    axes.bar([r.label for r in ordered], [r.achieved for r in ordered], color="tab:blue")
    axes.set_ylabel("operations/s")
    axes.set_title("Throughput")
    throughput = out / "throughput.png"
    figure.tight_layout()
    figure.savefig(throughput)
    plt.close(figure)

    figure, axes = plt.subplots(figsize=(6, 4))
    for report in ordered:
        if report.histogram.get_total_count() == 0:
            continue
        latencies = [report.percentile_us(p) / 1000.0 for p in CDF_PERCENTILES]
        axes.plot(latencies, [p / 100.0 for p in CDF_PERCENTILES], marker=".", label=report.label)
    axes.set_xscale("log")
    axes.set_xlabel("latency (ms)")
    axes.set_ylabel("fraction of requests")
    axes.set_title("Latency distribution")
    axes.legend()
    cdf = out / "latency_cdf.png"
    figure.tight_layout()
    figure.savefig(cdf)
    plt.close(figure)
    log_info("charts written", directory=str(out))
    return [throughput, cdf]
