# closure.py

"""
This file contains the tool executor for the closure MCP service.
"""

import logging
from typing import Any, Dict

from mcp.server import Server
from mcp.types import Tool

from ..aut import oracle_two_closure
from ..dispatch import ORACLE_MODES, two_closure, verify_candidate
from ..errors import ClosureError, GroupParseError, NotRankThreeError
from ..groupio import format_group, read_group
from ..orbitals import two_orbits
from ..settings import Settings, get_settings
from ..zoo import build_instance
from .tools import get_closure_tools

logger = logging.getLogger(__name__)


class ClosureServer(Server):
    def __init__(self, settings: Settings | None = None):
        logger.info("Initializing closure server...")
        super().__init__("closure_mcp")
        self._settings = settings

    @property
    def settings(self) -> Settings:
        return self._settings or get_settings()

    async def get_tools(self) -> list[Tool]:
        """
        Get the tools for the closure server.

        Returns:
            list[Tool]: The tools for the closure server.
        """
        return get_closure_tools()

    async def execute_tool(self, tool_name: str, tool_args: Dict[str, Any]) -> Any:
        """
        Execute a tool based on its name and arguments.

        Args:
            tool_name (str): The name of the tool to execute
            tool_args (Dict[str, Any]): Arguments for the tool

        Returns:
            Any: The result of the tool execution, or {"error": message}
        """
        try:
            logger.info(f"Executing tool: {tool_name}")

            if tool_name == "closure_compute":
                group_text = tool_args.get("group_text")
                oracle = tool_args.get("oracle") or "auto"
                if not group_text:
                    raise ValueError("Group text is required")
                if oracle not in ORACLE_MODES:
                    raise ValueError(f"Oracle mode must be one of {', '.join(ORACLE_MODES)}")

                return await self._compute(group_text, oracle)

            elif tool_name == "closure_rank":
                group_text = tool_args.get("group_text")
                if not group_text:
                    raise ValueError("Group text is required")

                return await self._rank(group_text)

            elif tool_name == "closure_oracle":
                group_text = tool_args.get("group_text")
                if not group_text:
                    raise ValueError("Group text is required")

                return await self._oracle(group_text)

            elif tool_name == "closure_zoo":
                name = tool_args.get("name")
                params = tool_args.get("params") or []
                if not name:
                    raise ValueError("Instance name is required")
                if not isinstance(params, list):
                    raise ValueError("Params must be a list of strings")

                return await self._zoo(name, [str(p) for p in params])

            elif tool_name == "closure_verify":
                group_text = tool_args.get("group_text")
                candidate_text = tool_args.get("candidate_text")
                if not group_text or not candidate_text:
                    raise ValueError("Group text and candidate text are required")

                return await self._verify(group_text, candidate_text)

            else:
                raise ValueError(f"Unsupported tool: {tool_name}")
        except GroupParseError as e:
            error_msg = f"Parse error: {str(e)}"
            logger.error(error_msg)
            return {"error": error_msg}

        except NotRankThreeError as e:
            error_msg = f"Not rank 3: {str(e)}"
            logger.error(error_msg)
            return {"error": error_msg}

        except ClosureError as e:
            error_msg = f"Closure error: {str(e)}"
            logger.error(error_msg)
            return {"error": error_msg}

        except Exception as e:
            error_msg = f"Unexpected error: {str(e)}"
            logger.error(error_msg)
            return {"error": error_msg}

    async def _compute(self, group_text: str, oracle: str) -> Dict[str, Any]:
        group = read_group(group_text)
        report = two_closure(group, oracle=oracle, settings=self.settings)
        logger.info(f"Closure computed: chosen {report.chosen}, order {report.order}")
        return report.to_json()

    async def _rank(self, group_text: str) -> Dict[str, Any]:
        structure = two_orbits(read_group(group_text), self.settings)
        return {
            "degree": structure.degree,
            "rank": structure.rank,
            "transitive": structure.transitive,
            "subdegrees": structure.subdegrees,
        }

    async def _oracle(self, group_text: str) -> Dict[str, Any]:
        closure = oracle_two_closure(read_group(group_text), self.settings)
        return {
            "order": str(closure.order),
            "generators": [list(g.images) for g in closure.generators],
        }

    async def _zoo(self, name: str, params: list[str]) -> Dict[str, Any]:
        descriptor = build_instance(name, params)
        return {
            "descriptor": descriptor.to_json(),
            "group_text": format_group(descriptor.group, header=descriptor.header()),
            "notes": list(descriptor.notes),
        }

    async def _verify(self, group_text: str, candidate_text: str) -> Dict[str, Any]:
        group = read_group(group_text)
        candidate = read_group(candidate_text)
        return {"verified": verify_candidate(group, candidate)}
