"""End-to-end tests of the MCP server through an in-memory FastMCP client.

Tests verify:
- every lab tool is registered with read-only annotations
- tool calls return the same payloads as the underlying functions
- input errors surface as tool errors

Run with:
    pytest tests/integration/test_mcp_tools_e2e.py -v
"""

from __future__ import annotations

import math
import os
from unittest.mock import patch

import pytest
from fastmcp import Client
from fastmcp.exceptions import ToolError

from src.server import mcp
from tests.conftest import DOMAINS

pytestmark = pytest.mark.integration

EXPECTED_TOOLS = {
    "compute_partition_function",
    "evaluate_continuum_observable",
    "compute_drift",
    "evaluate_crossing",
}


class TestToolRegistration:
    async def test_tools_listed(self):
        async with Client(mcp) as client:
            tools = await client.list_tools()
        assert {tool.name for tool in tools} == EXPECTED_TOOLS

    async def test_read_only_annotations(self):
        async with Client(mcp) as client:
            tools = await client.list_tools()
        for tool in tools:
            assert tool.annotations.readOnlyHint is True, tool.name
            assert tool.annotations.openWorldHint is False, tool.name


class TestToolCalls:
    async def test_partition_function(self):
        with patch.dict(os.environ, {"IFL_FIXTURES": str(DOMAINS)}):
            async with Client(mcp) as client:
                result = await client.call_tool("compute_partition_function", {"domain": "square1_pm.json"})
        assert result.data["z"] == pytest.approx(18 - 12 * math.sqrt(2))
        assert result.data["config_count"] == 2

    async def test_drift(self):
        async with Client(mcp) as client:
            result = await client.call_tool("compute_drift", {"a": [0.0, 1.0], "b": [2.0, "inf"]})
        assert result.data["closed_form"] == pytest.approx(2.75)

    async def test_spin_crossing(self):
        async with Client(mcp) as client:
            result = await client.call_tool("evaluate_crossing", {"query": "spin", "kind": "pmff", "lam": 0.5})
        assert result.data["G"] == pytest.approx(0.5, abs=1e-12)

    async def test_fk_crossing(self):
        async with Client(mcp) as client:
            result = await client.call_tool(
                "evaluate_crossing", {"query": "fk", "points": [0.0, 1.0, 3.0, 7.0], "subset": [1, 2]}
            )
        assert 0.0 < result.data["value"] < 1.0

    async def test_bad_boundary_data_is_a_tool_error(self):
        async with Client(mcp) as client:
            with pytest.raises(ToolError):
                await client.call_tool("evaluate_continuum_observable", {"b": [1.0, 0.0], "points": [[0.0, 1.0]]})
