# server.py

"""
This file contains the server for the closure MCP service.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

import uvicorn
from mcp.server import Server
from mcp.server.fastmcp import FastMCP
from mcp.server.sse import SseServerTransport
from starlette.applications import Starlette
from starlette.requests import Request
from starlette.routing import Mount, Route

from .. import __version__
from .closure import ClosureServer

logger = logging.getLogger(__name__)

# Global closure service instance
closure_service = ClosureServer()

# Initialize MCP server
mcp = FastMCP("closure_mcp")


@mcp.resource("config://version")
def get_version() -> str:
    """
    Get the version of the server.
    Returns:
        str: The server version
    """
    logger.info("Version requested")
    return __version__


@mcp.tool(
    name="closure_compute",
    description="Compute the 2-closure of a transitive rank 3 permutation group"
)
async def compute_closure(group_text: str, oracle: str = "auto") -> Dict[str, Any]:
    """
    Compute the 2-closure.
    Args:
        group_text (str): The group file text
        oracle (str): on, off or auto
    Returns:
        Dict[str, Any]: The closure report
    """
    return await closure_service.execute_tool("closure_compute", {"group_text": group_text, "oracle": oracle})


@mcp.tool(
    name="closure_rank",
    description="Rank and subdegrees of a permutation group"
)
async def rank(group_text: str) -> Dict[str, Any]:
    return await closure_service.execute_tool("closure_rank", {"group_text": group_text})


@mcp.tool(
    name="closure_oracle",
    description="2-closure by automorphism search of the 2-orbit table"
)
async def oracle(group_text: str) -> Dict[str, Any]:
    return await closure_service.execute_tool("closure_oracle", {"group_text": group_text})


@mcp.tool(
    name="closure_zoo",
    description="Build a named rank 3 instance"
)
async def zoo(name: str, params: Optional[List[str]] = None) -> Dict[str, Any]:
    """
    Build a zoo instance.
    Args:
        name (str): The instance family
        params (List[str]): The family parameters
    Returns:
        Dict[str, Any]: The group text and its descriptor
    """
    return await closure_service.execute_tool("closure_zoo", {"name": name, "params": params or []})


@mcp.tool(
    name="closure_verify",
    description="Check a candidate 2-closure against a group"
)
async def verify(group_text: str, candidate_text: str) -> Dict[str, Any]:
    return await closure_service.execute_tool("closure_verify", {
        "group_text": group_text,
        "candidate_text": candidate_text
    })


def create_app(mcp_server: Server) -> Starlette:
    """Create a Starlette application that can serve the provided mcp server with SSE."""
    sse = SseServerTransport("/closure/messages/")

    async def handle_sse(request: Request) -> None:
        async with sse.connect_sse(
                request.scope,
                request.receive,
                request._send,  # noqa: SLF001
        ) as (read_stream, write_stream):
            await mcp_server.run(
                read_stream,
                write_stream,
                mcp_server.create_initialization_options(),
            )

    return Starlette(
        routes=[
            Route("/closure/sse", endpoint=handle_sse),
            Mount("/closure/messages/", app=sse.handle_post_message),
        ],
    )


def main() -> None:
    parser = argparse.ArgumentParser(description="Run the closure MCP SSE-based server")
    parser.add_argument("--host", default="0.0.0.0", help="Host to bind to")
    parser.add_argument("--port", type=int, default=8003, help="Port to listen on")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="Set the logging level")
    args = parser.parse_args()

    logging.basicConfig(
        level=args.log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stdout
    )

    logger.info(f"Starting server on {args.host}:{args.port}")

    app = create_app(mcp._mcp_server)
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
