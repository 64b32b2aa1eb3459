"""Closed-form analysis of a code at one channel operating point."""

from pathlib import Path

import typer

from ...core.analysis import (
    View,
    algebraic_identities,
    alpha_polynomials,
    amplitude,
    beta_polynomials,
    capacity_entropy_bounds,
    degeneration_criterion,
    distribution_report,
    low_weight_state_probability,
    mutual_information,
    smoothed_vs_filtered,
    state_distribution,
)
from ...core.channel import q_function
from ...core.config import Config
from ...core.convcode import load_code
from ...core.degeneration import hard_decision_lh
from ...core.exceptions import ConsistencyError
from ...core.log import get_logger
from ...core.models import TableDocument
from ...core.tables import fmt
from ..utils import console, emit_document, exit_on_error, render_document

logger = get_logger(__name__)


def analyze(
    code: str | None = typer.Option(None, "--code", "-c", help="Code id or code file"),
    ebn0_db: float = typer.Option(4.0, "--ebn0-db", help="Eb/N0 in dB"),
    start_offset: int = typer.Option(1, "--start-offset", help="Start offset for the degeneration criterion"),
    exact: bool = typer.Option(False, "--exact", help="Also show the exact polynomials in epsilon"),
    as_json: bool = typer.Option(False, "--json", help="Emit JSON instead of CSV"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write to a file instead of stdout"),
    pretty: bool = typer.Option(False, "--pretty", help="Render a rich table instead of CSV"),
) -> None:
    """Report identities, input and state distributions and degeneration figures for a code."""
    with exit_on_error():
        conv = load_code(code or Config().config.default_code)
        c = amplitude(ebn0_db, conv.rate)
        eps = float(q_function(c))
        rows: list[list[str]] = [["code", conv.name or "custom"], ["c", fmt(c)], ["epsilon", fmt(eps)]]

        rows += [[f"identity: {name}", str(ok)] for name, ok in algebraic_identities(conv).items()]

        alpha = distribution_report(conv, "alpha", ebn0_db)
        rows += [[f"alpha{j + 1}", fmt(p)] for j, p in enumerate(alpha.params)]
        rows.append(["Hr sum (nats)", fmt(alpha.total)])
        views: list[View] = ["general"]
        if conv.is_qli:
            beta = distribution_report(conv, "beta", ebn0_db)
            rows += [[f"beta{j + 1}", fmt(p)] for j, p in enumerate(beta.params)]
            rows.append(["Heta sum (nats)", fmt(beta.total)])
            views.append("qli")
            if conv.k0 == 1:
                p_f, p_s = smoothed_vs_filtered(conv, eps)
                rows += [["p_f", fmt(p_f)], ["p_s", fmt(p_s)]]
        if conv.k0 == conv.n0 - 1:
            views.append("error-trellis")

        for view in views:
            report = state_distribution(conv, view, eps)
            rows.append([f"H[{view}] (bits)", fmt(report.entropy)])
            rows.append([f"P[{view}, weight <= 1]", fmt(low_weight_state_probability(conv, view, eps))])

        h_z, h_xz = capacity_entropy_bounds(c)
        rows += [["H[z] bound (nats)", fmt(h_z)], ["H[x;z] bound (nats)", fmt(h_xz)]]
        rows.append(["H[x;z] BPSK (nats)", fmt(mutual_information(c))])

        if conv.k0 == 1:
            try:
                l_h = hard_decision_lh(conv)
            except ConsistencyError as e:
                logger.warning("no hard-decision l_H for %s: %s", conv.name, e)
            else:
                criterion = degeneration_criterion(1 << conv.nu, l_h, start_offset)
                rows += [["l_H", str(l_h)], [f"criterion (offset {start_offset})", str(criterion)]]

        if exact:
            rows += [[f"alpha{j + 1}(eps)", str(p.as_expr())] for j, p in enumerate(alpha_polynomials(conv))]
            if conv.is_qli:
                rows += [[f"beta{j + 1}(eps)", str(p.as_expr())] for j, p in enumerate(beta_polynomials(conv))]

        doc = TableDocument(
            table="analyze", title=f"Analysis of {conv.name or 'code'} at {ebn0_db:g} dB", columns=["quantity", "value"]
        )
        doc.rows.extend(rows)
        if pretty and output is None:
            console.print(render_document(doc))
            return
        emit_document(doc, as_json, output)
