"""Parser for the deployment specification language.

::

    app <Name> {
        <Actor> copies <int>;
        colocate (<id>, <id> [, ...]);
        separate (<id> [, ...]);
        deploy (<id> [, ...]) on (<node> [, ...]);
        use limits for <hwkey> on all;
        use limits for <hwkey> on (<node> [, ...]);
    }

``//`` and ``#`` start comments. Multiple colocate/separate statements
accumulate; copies may be overridden once per actor; a single limits
directive is allowed. Directives carry names only — resolution against
the application model happens in validate_problem.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DuplicateCopiesOverride, EmptyGroup, ParseError
from .scan import Scanner

LimitsDirective = tuple[str, "str | tuple[str, ...]"]


@dataclass(frozen=True)
class DspecFile:
    app_name: str
    copies_overrides: tuple[tuple[str, int], ...] = ()
    colocate_sets: tuple[tuple[str, ...], ...] = ()
    separate_sets: tuple[tuple[str, ...], ...] = ()
    deploy_pins: tuple[tuple[str, tuple[str, ...]], ...] = ()
    limits_directive: LimitsDirective | None = None

    @property
    def copies_map(self) -> dict[str, int]:
        return dict(self.copies_overrides)

    @property
    def pin_map(self) -> dict[str, tuple[str, ...]]:
        return dict(self.deploy_pins)


def _id_group(s: Scanner) -> tuple[str, ...]:
    s.expect("(")
    items = [s.expect_word("name")]
    while not s.match(")"):
        s.expect(",")
        items.append(s.expect_word("name"))
    return tuple(items)


def parse_dspec(text: str) -> DspecFile:
    s = Scanner(text)
    s.expect_keyword("app")
    app_name = s.expect_word("application name")
    s.expect("{")

    copies: list[tuple[str, int]] = []
    colocate: list[tuple[str, ...]] = []
    separate: list[tuple[str, ...]] = []
    deploys: list[tuple[str, tuple[str, ...]]] = []
    limits: LimitsDirective | None = None

    while not s.match("}"):
        if s.at_end():
            s.error("missing closing '}'")
        word = s.expect_word("directive or actor name")
        if word == "colocate" or word == "separate":
            group = _id_group(s)
            if len(group) < 2:
                s.error(f"{word} needs at least 2 actors, got {len(group)}",
                        EmptyGroup)
            (colocate if word == "colocate" else separate).append(group)
        elif word == "deploy":
            actors = _id_group(s)
            s.expect_keyword("on")
            nodes = _id_group(s)
            for actor in actors:
                if any(a == actor for a, _ in deploys):
                    s.error(f"actor {actor!r} deployed twice")
                deploys.append((actor, nodes))
        elif word == "use":
            s.expect_keyword("limits")
            s.expect_keyword("for")
            hwkey = s.expect_word("hardware key")
            s.expect_keyword("on")
            if s.peek_word() == "all":
                s.word()
                target: str | tuple[str, ...] = "all"
            else:
                target = _id_group(s)
            if limits is not None:
                s.error("only one limits directive is supported")
            limits = (hwkey, target)
        else:
            s.expect_keyword("copies")
            count = s.integer()
            if count < 1:
                s.error(f"copies for {word!r} must be positive, got {count}")
            if any(a == word for a, _ in copies):
                s.error(f"copies for {word!r} overridden twice",
                        DuplicateCopiesOverride)
            copies.append((word, count))
        s.expect(";")

    if not s.at_end():
        s.error(f"trailing content after app block: {s.peek()!r}")
    return DspecFile(app_name=app_name,
                     copies_overrides=tuple(copies),
                     colocate_sets=tuple(colocate),
                     separate_sets=tuple(separate),
                     deploy_pins=tuple(deploys),
                     limits_directive=limits)


def print_dspec(spec: DspecFile) -> str:
    """Canonical text; parse(print(x)) == x."""
    lines = [f"app {spec.app_name} {{"]
    for actor, count in spec.copies_overrides:
        lines.append(f"  {actor} copies {count};")
    for group in spec.colocate_sets:
        lines.append(f"  colocate ({', '.join(group)});")
    for group in spec.separate_sets:
        lines.append(f"  separate ({', '.join(group)});")
    for actor, nodes in spec.deploy_pins:
        lines.append(f"  deploy ({actor}) on ({', '.join(nodes)});")
    if spec.limits_directive is not None:
        hwkey, target = spec.limits_directive
        where = "all" if target == "all" else f"({', '.join(target)})"
        lines.append(f"  use limits for {hwkey} on {where};")
    lines.append("}")
    return "\n".join(lines) + "\n"
