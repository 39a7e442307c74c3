# test_mcp.py

import asyncio

from twoclosure.groupio import format_group
from twoclosure.mcp.closure import ClosureServer
from twoclosure.mcp.tools import get_closure_tools
from twoclosure.settings import Settings
from twoclosure.zoo import zoo_johnson_pairs

PENTAGON = "5\n(0 1 2 3 4)\n(1 4)(2 3)\n"
TOOL_NAMES = {"closure_compute", "closure_rank", "closure_oracle", "closure_zoo", "closure_verify"}


def run(tool_name, tool_args, settings=None):
    return asyncio.run(ClosureServer(settings).execute_tool(tool_name, tool_args))


def test_tool_list():
    assert {tool.name for tool in get_closure_tools()} == TOOL_NAMES
    assert {tool.name for tool in asyncio.run(ClosureServer().get_tools())} == TOOL_NAMES


def test_fastmcp_registers_tools():
    from twoclosure.mcp.server import mcp

    assert {tool.name for tool in asyncio.run(mcp.list_tools())} == TOOL_NAMES


def test_sse_app_routes():
    from twoclosure.mcp.server import create_app, mcp

    app = create_app(mcp._mcp_server)
    assert [route.path for route in app.routes] == ["/closure/sse", "/closure/messages"]
    assert not app.debug


def test_rank():
    result = run("closure_rank", {"group_text": PENTAGON})
    assert result == {"degree": 5, "rank": 3, "transitive": True, "subdegrees": [2, 2]}


def test_compute():
    group_text = format_group(zoo_johnson_pairs(5).group)
    result = run("closure_compute", {"group_text": group_text})
    assert result["order"] == "120"
    assert result["verified"] is True


def test_compute_rejects_rank_two():
    result = run("closure_compute", {"group_text": "3\n(0 1 2)\n(0 1)\n"})
    assert result["error"].startswith("Not rank 3")


def test_compute_bad_oracle_mode():
    result = run("closure_compute", {"group_text": PENTAGON, "oracle": "always"})
    assert result["error"].startswith("Unexpected error: Oracle mode")


def test_unresolved_is_not_an_error():
    group_text = format_group(zoo_johnson_pairs(5).group)
    result = run("closure_compute", {"group_text": group_text}, Settings(oracle_cap=5))
    assert result["order"] is None
    assert result["verified"] is False


def test_oracle():
    result = run("closure_oracle", {"group_text": PENTAGON})
    assert result["order"] == "10"


def test_zoo():
    result = run("closure_zoo", {"name": "paley", "params": [13]})
    assert result["descriptor"]["closure_order"] == "78"
    assert result["group_text"].startswith("# paley q=13\n")
    assert result["notes"] == []


def test_verify():
    assert run("closure_verify", {"group_text": PENTAGON, "candidate_text": PENTAGON}) == {"verified": True}
    candidate = "5\n(0 1 2 3 4)\n"
    assert run("closure_verify", {"group_text": PENTAGON, "candidate_text": candidate}) == {"verified": False}


def test_parse_error():
    result = run("closure_rank", {"group_text": "5\n(0 1\n"})
    assert result["error"].startswith("Parse error")


def test_missing_arguments():
    assert "error" in run("closure_rank", {})
    assert "error" in run("closure_verify", {"group_text": PENTAGON})
    assert "error" in run("closure_zoo", {"name": "paley", "params": "13"})


def test_unsupported_tool():
    assert run("closure_magic", {}) == {"error": "Unexpected error: Unsupported tool: closure_magic"}
