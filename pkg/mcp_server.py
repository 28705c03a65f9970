"""
MCP server exposing the equivect report operations as tools.
Runs with Streamable HTTP transport at http://127.0.0.1:8765/mcp by default.

Run:
  python mcp_server.py

Every tool takes a GroupSpec document (schema equivect-spec/1) and returns the same report
dictionary as the matching `python -m equivect` subcommand.
"""
from __future__ import annotations

import logging
from typing import Any, Dict, Optional

from mcp.server.fastmcp import FastMCP

from equivect import checks, clutching, semigroup
from equivect.config import configure_logging, load_settings
from equivect.errors import EquivectError
from equivect.spec_io import context_from_spec, load_spec, rep_matrices

# Server configuration (EQUIVECT_MCP_HOST / _PORT / _PATH, .env is honoured)
SETTINGS = load_settings()
logger = logging.getLogger("equivect.mcp")

mcp = FastMCP(
    name="Equivect MCP Server",
    instructions=(
        "Classifies equivariant complex vector bundles over RP^2 for finite group actions. "
        "character_table(spec, chi) lists character tables of G, H and the isotropy groups, "
        "stabilizers(spec, chi) the isotropy groups on RP^2 and S^2, semigroup(spec, chi, rank) the "
        "admissible triples with their Hilbert basis, classify(spec, chi, rank) the bundle classes, "
        "chern_demo(spec, chi, samples) the clutching construction with winding parities, and "
        "check(spec, chi, rank) the invariant suite."
    ),
)


def _run(spec: Dict[str, Any], chi: int, fn) -> Dict[str, Any]:
    try:
        parsed = load_spec(spec)
        context = context_from_spec(parsed, chi, SETTINGS)
        return fn(parsed, context)
    except EquivectError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return e.to_json()


@mcp.tool()
def character_table(spec: Dict[str, Any], chi: int = 0) -> Dict[str, Any]:
    """Character tables of G, H = ker rho_bar and the three isotropy groups, plus the G-orbits on Irr(H)."""
    return _run(spec, chi, lambda _, ctx: semigroup.tables_report(ctx))


@mcp.tool()
def stabilizers(spec: Dict[str, Any], chi: int = 0) -> Dict[str, Any]:
    """Isotropy subgroups at d-1, d0, d1, along the chains and the fundamental domain (RP^2 and S^2)."""
    return _run(spec, chi, lambda _, ctx: semigroup.stabilizers_report(ctx))


@mcp.tool(name="semigroup")
def semigroup_triples(spec: Dict[str, Any], chi: int = 0, rank: Optional[int] = None) -> Dict[str, Any]:
    """Admissible triples up to the rank bound and the Hilbert basis of the semigroup."""
    return _run(spec, chi, lambda _, ctx: semigroup.semigroup_report(ctx, rank or SETTINGS.max_rank, SETTINGS))


@mcp.tool()
def classify(spec: Dict[str, Any], chi: int = 0, rank: Optional[int] = None) -> Dict[str, Any]:
    """Bundle classes up to the rank bound; twin bits and Chern parities in the Z_n (n odd) regime."""
    return _run(spec, chi, lambda _, ctx: semigroup.classify_report(ctx, rank or SETTINGS.max_rank, SETTINGS))


@mcp.tool()
def chern_demo(spec: Dict[str, Any], chi: int = 0, samples: Optional[int] = None) -> Dict[str, Any]:
    """Trivial and twisted equivariant clutching maps, q_Omega, and their determinant winding."""
    return _run(spec, chi, lambda parsed, ctx: clutching.chern_demo(
        ctx, rep_matrices(parsed), samples or SETTINGS.samples, settings=SETTINGS))


@mcp.tool()
def check(spec: Dict[str, Any], chi: int = 0, rank: Optional[int] = None) -> Dict[str, Any]:
    """Full invariant suite; the report's "ok" field is false when any check fails."""
    return _run(spec, chi, lambda parsed, ctx: checks.run_checks(
        ctx, rep_matrices(parsed), SETTINGS, rank or SETTINGS.max_rank))


if __name__ == "__main__":
    configure_logging(SETTINGS.log_level)
    # Configure mount path for streamable HTTP
    mcp.settings.host = SETTINGS.mcp_host
    mcp.settings.port = SETTINGS.mcp_port
    mcp.settings.streamable_http_path = SETTINGS.mcp_path

    logger.info("serving on http://%s:%d%s", SETTINGS.mcp_host, SETTINGS.mcp_port, SETTINGS.mcp_path)
    mcp.run(transport="streamable-http")
