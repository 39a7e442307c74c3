# tools.py
"""
This file contains the tools for the closure MCP service.
"""

from mcp.types import Tool

GROUP_TEXT = {
    "type": "string",
    "description": "Group file text: the degree, then one generator per line in cycle or image form",
}


def get_closure_tools() -> list[Tool]:
    return [
        Tool(
            name="closure_compute",
            description="Compute the 2-closure of a transitive rank 3 permutation group",
            inputSchema={
                "type": "object",
                "properties": {
                    "group_text": GROUP_TEXT,
                    "oracle": {
                        "type": "string",
                        "enum": ["on", "off", "auto"],
                        "description": "When to run the automorphism search",
                    },
                },
                "required": ["group_text"],
            },
        ),
        Tool(
            name="closure_rank",
            description="Rank and subdegrees of a permutation group",
            inputSchema={
                "type": "object",
                "properties": {"group_text": GROUP_TEXT},
                "required": ["group_text"],
            },
        ),
        Tool(
            name="closure_oracle",
            description="2-closure by automorphism search of the 2-orbit table (small degree only)",
            inputSchema={
                "type": "object",
                "properties": {"group_text": GROUP_TEXT},
                "required": ["group_text"],
            },
        ),
        Tool(
            name="closure_zoo",
            description="Build a named rank 3 instance",
            inputSchema={
                "type": "object",
                "properties": {
                    "name": {
                        "type": "string",
                        "description": "Instance family: imprimitive, product, johnson, paley, clebsch, bilinear or affine_polar",
                    },
                    "params": {
                        "type": "array",
                        "items": {"type": "string"},
                        "description": "Family parameters, for example [\"+\", \"2\", \"3\"] for affine_polar",
                    },
                },
                "required": ["name"],
            },
        ),
        Tool(
            name="closure_verify",
            description="Check that a candidate group contains the input group and preserves its 2-orbits",
            inputSchema={
                "type": "object",
                "properties": {
                    "group_text": GROUP_TEXT,
                    "candidate_text": {"type": "string", "description": "Candidate group file text"},
                },
                "required": ["group_text", "candidate_text"],
            },
        ),
    ]
