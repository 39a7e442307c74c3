# groupio.py

"""
Group file format: the degree on the first line, then one generator per line in cycle form
``(a b c)(d e)`` or image form ``[i0,i1,...]``. Points are 0-based and ``#`` starts a comment.
"""

import logging
from typing import Iterable, Union

from .errors import GroupParseError, MalformedPermutationError
from .perm import Permutation, PermutationGroup

logger = logging.getLogger(__name__)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _parse_cycles(text: str, degree: int, line_no: int) -> Permutation:
    cycles: list[list[int]] = []
    current: list[int] | None = None
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace() or (ch == "," and current is not None):
            i += 1
        elif ch == "(":
            if current is not None:
                raise GroupParseError("nested '('", line_no, i)
            current = []
            i += 1
        elif ch == ")":
            if current is None:
                raise GroupParseError("unmatched ')'", line_no, i)
            cycles.append(current)
            current = None
            i += 1
        elif ch.isdigit():
            if current is None:
                raise GroupParseError("point outside a cycle", line_no, i)
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            point = int(text[i:j])
            if point >= degree:
                raise GroupParseError(f"point {point} out of range for degree {degree}", line_no, i)
            current.append(point)
            i = j
        else:
            raise GroupParseError(f"unexpected character {ch!r}", line_no, i)
    if current is not None:
        raise GroupParseError("missing ')'", line_no, len(text))
    return Permutation.from_cycles(degree, cycles)


def _parse_images(text: str, degree: int, line_no: int) -> Permutation:
    start = text.index("[")
    end = text.rfind("]")
    if end < 0:
        raise GroupParseError("missing ']'", line_no, len(text.rstrip()))
    if text[end + 1 :].strip():
        raise GroupParseError("text after ']'", line_no, end + 1)
    images: list[int] = []
    column = start + 1
    body = text[start + 1 : end]
    if body.strip():
        for token in body.split(","):
            stripped = token.strip()
            if not stripped.isdigit():
                offset = len(token) - len(token.lstrip())
                raise GroupParseError(f"expected a point, got {stripped!r}", line_no, column + offset)
            images.append(int(stripped))
            column += len(token) + 1
    if len(images) != degree:
        raise MalformedPermutationError(f"line {line_no}: {len(images)} images for degree {degree}")
    return Permutation(images)


def parse_permutation(line: str, degree: int, line_no: int = 1) -> Permutation:
    """
    Parse one generator line.

    Raises:
        GroupParseError: On syntax errors, with the 1-based line and 0-based column
        MalformedPermutationError: If the images do not form a permutation
    """
    text = _strip_comment(line).rstrip()
    head = text.lstrip()
    if head.startswith("["):
        return _parse_images(text, degree, line_no)
    if head.startswith("("):
        return _parse_cycles(text, degree, line_no)
    raise GroupParseError("expected '(' or '['", line_no, len(text) - len(head))


def parse_group(text: str) -> tuple[int, list[Permutation]]:
    """
    Parse a group file.

    Args:
        text (str): File contents

    Returns:
        tuple[int, list[Permutation]]: Degree and generators, in file order

    Raises:
        GroupParseError: On syntax errors
    """
    degree = None
    generators: list[Permutation] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = _strip_comment(line)
        if not body.strip():
            continue
        if degree is None:
            token = body.strip()
            if not token.isdigit() or int(token) < 1:
                raise GroupParseError("expected the degree", line_no, len(body) - len(body.lstrip()))
            degree = int(token)
            continue
        generators.append(parse_permutation(line, degree, line_no))
    if degree is None:
        raise GroupParseError("empty group file", 1, 0)
    logger.debug(f"Parsed {len(generators)} generators of degree {degree}")
    return degree, generators


def read_group(text: str) -> PermutationGroup:
    degree, generators = parse_group(text)
    return PermutationGroup(degree, generators)


def format_group(
    group: Union[PermutationGroup, tuple[int, Iterable[Permutation]]], header: Iterable[str] = ()
) -> str:
    """
    Group file text in cycle form, with optional ``#`` header lines.
    """
    if isinstance(group, PermutationGroup):
        degree, generators = group.degree, group.generators
    else:
        degree, generators = group
    lines = [f"# {h}" for h in header]
    lines.append(str(degree))
    lines.extend(g.cycle_string() for g in generators)
    return "\n".join(lines) + "\n"
