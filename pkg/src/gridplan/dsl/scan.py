"""Cursor over source text shared by the hand-written parsers.

Tracks line/column for diagnostics and treats ``//`` and ``#`` as
end-of-line comments everywhere between tokens.
"""

from __future__ import annotations

from ..errors import BadNumber, ParseError

_WORD_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_WORD_CHARS = _WORD_START | set("0123456789.-")


class Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, cls=ParseError):
        raise cls(message, self.line, self.col)

    def _advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.pos >= len(self.text):
                return
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def skip_trivia(self) -> None:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self._advance()
            elif ch == "#" or text.startswith("//", self.pos):
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def at_end(self) -> bool:
        self.skip_trivia()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_trivia()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def match(self, literal: str) -> bool:
        self.skip_trivia()
        if self.text.startswith(literal, self.pos):
            self._advance(len(literal))
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.match(literal):
            found = self.peek() or "end of input"
            self.error(f"expected {literal!r}, found {found!r}")

    def peek_word(self) -> str | None:
        self.skip_trivia()
        if self.pos >= len(self.text) or self.text[self.pos] not in _WORD_START:
            return None
        end = self.pos
        while end < len(self.text) and self.text[end] in _WORD_CHARS:
            end += 1
        return self.text[self.pos:end]

    def word(self) -> str | None:
        w = self.peek_word()
        if w is not None:
            self._advance(len(w))
        return w

    def expect_word(self, what: str = "identifier") -> str:
        w = self.word()
        if w is None:
            found = self.peek() or "end of input"
            self.error(f"expected {what}, found {found!r}")
        return w

    def expect_keyword(self, keyword: str) -> None:
        w = self.word()
        if w != keyword:
            self.error(f"expected {keyword!r}, found {w or self.peek() or 'end of input'!r}")

    def number(self) -> float:
        """Non-negative decimal."""
        self.skip_trivia()
        start = self.pos
        text = self.text
        while self.pos < len(text) and text[self.pos].isdigit():
            self._advance()
        if self.pos < len(text) and text[self.pos] == ".":
            self._advance()
            while self.pos < len(text) and text[self.pos].isdigit():
                self._advance()
        token = text[start:self.pos]
        if not token or token == ".":
            found = self.peek() or "end of input"
            self.error(f"expected number, found {found!r}", BadNumber)
        try:
            return float(token)
        except ValueError:
            self.error(f"bad number {token!r}", BadNumber)

    def integer(self) -> int:
        value = self.number()
        if value != int(value):
            self.error(f"expected integer, found {value}", BadNumber)
        return int(value)
