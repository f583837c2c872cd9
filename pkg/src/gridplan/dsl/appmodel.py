"""Parser for the actor-level subset of the application model format.

Recognized shape::

    app <Name> {                       # wrapper optional
        actor <Name>(<params>) {
            uses {
                cpu max <P> [%] [;]
                mem <M> mb;
                space <S> mb;
                net rate <R> kbps ceil <C> kbps;
            }
            ...                        # component/port bodies skipped
        }
        ...                            # other declarations skipped
    }

Anything inside an actor other than the ``uses`` block is skipped with
balanced-brace scanning, as are non-actor declarations, so the parser
stays tolerant of the full application grammar. A missing ``uses`` block
yields an all-zero envelope.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DuplicateActor, MalformedUsesEntry, ParseError
from ..model import ResourceEnvelope
from .scan import Scanner


@dataclass(frozen=True)
class ActorDecl:
    name: str
    params: tuple[str, ...] = ()
    env: ResourceEnvelope = ResourceEnvelope()


@dataclass(frozen=True)
class AppModel:
    app_name: str | None
    actors: tuple[ActorDecl, ...]

    def actor(self, name: str) -> ActorDecl:
        for decl in self.actors:
            if decl.name == name:
                return decl
        raise KeyError(name)


def _skip_balanced(s: Scanner) -> None:
    """Consume one token; on '{' consume through the matching '}'."""
    if s.match("{"):
        depth = 1
        while depth:
            if s.at_end():
                s.error("unbalanced '{'")
            if s.match("{"):
                depth += 1
            elif s.match("}"):
                depth -= 1
            elif s.word() is None:
                s._advance()
        return
    if s.word() is None:
        s._advance()


def _parse_uses(s: Scanner, actor: str, seen: set[str]) -> dict:
    s.expect("{")
    values: dict[str, float] = {}
    while not s.match("}"):
        if s.at_end():
            s.error("unterminated uses block")
        key = s.word()
        if key is None:
            s.error(f"expected a uses entry, found {s.peek()!r}")
        key = key.lower()
        if key not in ("cpu", "mem", "space", "net"):
            s.error(f"unknown uses entry {key!r} in actor {actor!r}", MalformedUsesEntry)
        if key in seen:
            s.error(f"duplicate uses entry {key!r} in actor {actor!r}", MalformedUsesEntry)
        seen.add(key)
        if key == "cpu":
            if s.peek_word() == "max":
                s.word()
            values["cpu_pct"] = s.number()
            s.match("%")
        elif key in ("mem", "space"):
            amount = s.number()
            unit = s.word()
            if unit is None or unit.lower() != "mb":
                s.error(f"{key} entry needs an 'mb' unit in actor {actor!r}",
                        MalformedUsesEntry)
            values["mem_mb" if key == "mem" else "spc_mb"] = amount
        else:  # net
            if s.word() != "rate":
                s.error(f"net entry must read 'net rate <n> kbps ceil <n> kbps' "
                        f"in actor {actor!r}", MalformedUsesEntry)
            values["net_rate_kbps"] = s.number()
            unit = s.word()
            if unit is None or unit.lower() != "kbps":
                s.error(f"net rate needs a 'kbps' unit in actor {actor!r}",
                        MalformedUsesEntry)
            if s.word() != "ceil":
                s.error(f"net entry missing 'ceil' in actor {actor!r}",
                        MalformedUsesEntry)
            values["net_ceil_kbps"] = s.number()
            unit = s.word()
            if unit is None or unit.lower() != "kbps":
                s.error(f"net ceil needs a 'kbps' unit in actor {actor!r}",
                        MalformedUsesEntry)
        s.match(";")
    return values


def _parse_actor(s: Scanner) -> ActorDecl:
    name = s.expect_word("actor name")
    params: tuple[str, ...] = ()
    if s.match("("):
        items = []
        if not s.match(")"):
            while True:
                items.append(s.expect_word("parameter name"))
                if s.match(")"):
                    break
                s.expect(",")
        params = tuple(items)
    s.expect("{")
    values: dict[str, float] = {}
    seen: set[str] = set()
    while not s.match("}"):
        if s.at_end():
            s.error(f"unterminated actor {name!r}")
        if s.peek_word() == "uses":
            s.word()
            values.update(_parse_uses(s, name, seen))
        else:
            _skip_balanced(s)
    return ActorDecl(name=name, params=params, env=ResourceEnvelope(**values))


def parse_app_model(text: str) -> AppModel:
    s = Scanner(text)
    app_name = None
    wrapped = False
    if s.peek_word() == "app":
        s.word()
        app_name = s.expect_word("application name")
        s.expect("{")
        wrapped = True
    actors: list[ActorDecl] = []
    while True:
        if wrapped and s.match("}"):
            wrapped = False
            continue
        if s.at_end():
            if wrapped:
                s.error("missing closing '}' for app block")
            break
        if s.peek_word() == "actor":
            s.word()
            decl = _parse_actor(s)
            if any(a.name == decl.name for a in actors):
                s.error(f"actor {decl.name!r} declared twice", DuplicateActor)
            actors.append(decl)
        else:
            # tolerated non-actor declaration: skip to ';' or a block
            if s.peek() in ")}(,;":
                s.error(f"unexpected {s.peek()!r}")
            while not s.at_end() and not s.match(";"):
                if s.peek() == "{":
                    _skip_balanced(s)
                    break
                if s.peek() == "}":
                    s.error("unexpected '}'")
                _skip_balanced(s)
    return AppModel(app_name=app_name, actors=tuple(actors))


def _fmt(value: float) -> str:
    return str(int(value)) if value == int(value) else repr(value)


def print_app_model(app: AppModel) -> str:
    """Canonical text for an AppModel; parse(print(x)) == x."""
    lines = []
    indent = ""
    if app.app_name is not None:
        lines.append(f"app {app.app_name} {{")
        indent = "  "
    for decl in app.actors:
        params = ", ".join(decl.params)
        lines.append(f"{indent}actor {decl.name}({params}) {{")
        env = decl.env
        entries = []
        if env.cpu_pct:
            entries.append(f"cpu max {_fmt(env.cpu_pct)};")
        if env.mem_mb:
            entries.append(f"mem {_fmt(env.mem_mb)} mb;")
        if env.spc_mb:
            entries.append(f"space {_fmt(env.spc_mb)} mb;")
        if env.net_rate_kbps or env.net_ceil_kbps:
            entries.append(f"net rate {_fmt(env.net_rate_kbps)} kbps "
                           f"ceil {_fmt(env.net_ceil_kbps)} kbps;")
        if entries:
            lines.append(f"{indent}  uses {{")
            lines.extend(f"{indent}    {e}" for e in entries)
            lines.append(f"{indent}  }}")
        lines.append(f"{indent}}}")
    if app.app_name is not None:
        lines.append("}")
    return "\n".join(lines) + "\n"
