"""Deterministic completion of truncated JSON.

Models constrained to emit JSON routinely stop mid-document. ``repair_json``
turns any character prefix of a syntactically valid JSON document into a
parsable document by a fixed rule table:

* truncated inside a string: close the quote; an incomplete escape sequence
  (lone backslash or partial ``\\uXXXX``) is dropped first
* object key complete or in progress but no colon yet: drop the key (and the
  comma that introduced it)
* colon with no value: append ``null``
* trailing comma in an object or array: drop it
* dangling literal prefix (``tru``, ``fals``, ``nul``): complete the word
* dangling number (bare sign, trailing ``.``, ``e``, ``e+``/``e-``): append a
  ``0`` to finish it; a number that is already a valid token stands as is
* all open containers are then closed innermost-first
* empty (or whitespace-only) input becomes ``null``

Input that is already valid JSON is returned byte-for-byte unchanged, which
also makes the repair idempotent. Input that is not a prefix of any valid
JSON document raises ``JsonRepairError`` carrying the first offending offset.
"""

from __future__ import annotations

_WS = " \t\n\r"
_LITERALS = {"t": "true", "f": "false", "n": "null"}
_ESCAPABLE = set('"\\/bfnrtu')


class JsonRepairError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class _Frame:
    """One open container: its kind and where to cut when dropping a
    dangling key or comma (just after the opener, or just before the last
    separating comma)."""

    __slots__ = ("kind", "state", "rollback")

    def __init__(self, kind: str, state: str, rollback: int):
        self.kind = kind  # "{" | "[" | "$" (document root)
        self.state = state
        self.rollback = rollback


# Object states: first_key, key, colon, value, after.
# Array states: first_value, value, after.
# Root states: value, after.


def repair_json(partial: str) -> str:
    """Complete a prefix of valid JSON into valid JSON (see module rules)."""
    src = partial
    n = len(src)
    root = _Frame("$", "value", 0)
    stack = [root]

    # In-progress scalar token, if any.
    token: str | None = None  # "string" | "number" | "literal"
    str_is_key = False
    str_escape_start = -1  # offset of a pending backslash, -1 when none
    str_unicode_left = 0
    num_state = ""  # sign | zero | int | dot | frac | e | esign | eexp
    lit_word = ""
    lit_pos = 0

    def value_done() -> None:
        stack[-1].state = "after"

    def open_container(kind: str, i: int) -> None:
        state = "first_key" if kind == "{" else "first_value"
        stack.append(_Frame(kind, state, i + 1))

    def close_container(i: int, ch: str) -> None:
        frame = stack[-1]
        if ch == "}" and frame.kind == "{" and frame.state in ("first_key", "after"):
            stack.pop()
            value_done()
        elif ch == "]" and frame.kind == "[" and frame.state in ("first_value", "after"):
            stack.pop()
            value_done()
        else:
            raise JsonRepairError(f"unexpected {ch!r}", i)

    def start_value(ch: str, i: int) -> None:
        nonlocal token, str_is_key, str_escape_start, str_unicode_left
        nonlocal num_state, lit_word, lit_pos
        if ch == '"':
            token = "string"
            str_is_key = stack[-1].kind == "{" and stack[-1].state in ("first_key", "key")
            str_escape_start = -1
            str_unicode_left = 0
        elif ch == "-":
            token, num_state = "number", "sign"
        elif ch == "0":
            token, num_state = "number", "zero"
        elif ch in "123456789":
            token, num_state = "number", "int"
        elif ch in _LITERALS:
            token, lit_word, lit_pos = "literal", _LITERALS[ch], 1
        elif ch == "{" or ch == "[":
            open_container(ch, i)
        else:
            raise JsonRepairError(f"unexpected {ch!r}", i)

    def feed_number(ch: str, i: int) -> bool:
        """Advance the number token; False means the number ended and the
        character must be re-dispatched."""
        nonlocal num_state, token
        state = num_state
        if state == "sign":
            if ch == "0":
                num_state = "zero"
            elif ch in "123456789":
                num_state = "int"
            else:
                raise JsonRepairError("digit expected after sign", i)
        elif state == "zero":
            if ch == ".":
                num_state = "dot"
            elif ch in "eE":
                num_state = "e"
            elif ch.isdigit():
                raise JsonRepairError("leading zero", i)
            else:
                token = None
                value_done()
                return False
        elif state == "int":
            if ch.isdigit():
                pass
            elif ch == ".":
                num_state = "dot"
            elif ch in "eE":
                num_state = "e"
            else:
                token = None
                value_done()
                return False
        elif state == "dot":
            if ch.isdigit():
                num_state = "frac"
            else:
                raise JsonRepairError("digit expected after decimal point", i)
        elif state == "frac":
            if ch.isdigit():
                pass
            elif ch in "eE":
                num_state = "e"
            else:
                token = None
                value_done()
                return False
        elif state == "e":
            if ch in "+-":
                num_state = "esign"
            elif ch.isdigit():
                num_state = "eexp"
            else:
                raise JsonRepairError("digit expected in exponent", i)
        elif state == "esign":
            if ch.isdigit():
                num_state = "eexp"
            else:
                raise JsonRepairError("digit expected in exponent", i)
        else:  # eexp
            if ch.isdigit():
                pass
            else:
                token = None
                value_done()
                return False
        return True

    i = 0
    while i < n:
        ch = src[i]

        if token == "string":
            if str_unicode_left:
                if ch in "0123456789abcdefABCDEF":
                    str_unicode_left -= 1
                    if not str_unicode_left:
                        str_escape_start = -1
                else:
                    raise JsonRepairError("invalid unicode escape", i)
            elif str_escape_start >= 0:
                if ch == "u":
                    str_unicode_left = 4
                elif ch in _ESCAPABLE:
                    str_escape_start = -1
                else:
                    raise JsonRepairError("invalid escape", i)
            elif ch == "\\":
                str_escape_start = i
            elif ch == '"':
                token = None
                if str_is_key:
                    stack[-1].state = "colon"
                else:
                    value_done()
            elif ord(ch) < 0x20:
                raise JsonRepairError("control character in string", i)
            i += 1
            continue

        if token == "number":
            if feed_number(ch, i):
                i += 1
                continue
            continue  # token ended; re-dispatch ch below on next loop pass

        if token == "literal":
            if lit_pos < len(lit_word) and ch == lit_word[lit_pos]:
                lit_pos += 1
                if lit_pos == len(lit_word):
                    token = None
                    value_done()
                i += 1
                continue
            raise JsonRepairError("invalid literal", i)

        if ch in _WS:
            i += 1
            continue

        frame = stack[-1]
        state = frame.state
        if state in ("value", "first_value"):
            if ch == "]" and state == "first_value":
                close_container(i, ch)
            else:
                start_value(ch, i)
        elif state == "first_key":
            if ch == '"':
                start_value(ch, i)
            elif ch == "}":
                close_container(i, ch)
            else:
                raise JsonRepairError(f"unexpected {ch!r}", i)
        elif state == "key":
            if ch == '"':
                start_value(ch, i)
            else:
                raise JsonRepairError(f"unexpected {ch!r}", i)
        elif state == "colon":
            if ch == ":":
                frame.state = "value"
            else:
                raise JsonRepairError(f"unexpected {ch!r}", i)
        else:  # after
            if frame.kind == "$":
                raise JsonRepairError("trailing content", i)
            if ch == ",":
                frame.rollback = i
                frame.state = "key" if frame.kind == "{" else "value"
            elif ch in "}]":
                close_container(i, ch)
            else:
                raise JsonRepairError(f"unexpected {ch!r}", i)
        i += 1

    # End of input: finish the dangling token, then close the stack.
    if root.state == "after" and len(stack) == 1 and token is None:
        return src  # already a complete document, return unchanged

    out = src
    if token == "string":
        if str_is_key:
            out = out[: stack[-1].rollback]  # drop the key outright
        else:
            if str_escape_start >= 0:
                out = out[:str_escape_start]  # drop the incomplete escape
            out += '"'
    elif token == "number":
        if num_state in ("sign", "dot", "e", "esign"):
            out += "0"
    elif token == "literal":
        out += lit_word[lit_pos:]
    else:
        frame = stack[-1]
        if frame.kind == "$":
            return "null"  # empty / whitespace-only input
        if frame.state == "key":
            out = out[: frame.rollback]  # dangling comma before a key
        elif frame.state == "colon":
            out = out[: frame.rollback]  # complete key but no colon: drop it
        elif frame.state == "value":
            if frame.kind == "[":
                out = out[: frame.rollback]  # dangling comma
            else:  # object value position: the colon is the last thing seen
                out += "null" if (out and out[-1] in _WS) else " null"

    while len(stack) > 1:
        top = stack.pop()
        out += "}" if top.kind == "{" else "]"

    return out
