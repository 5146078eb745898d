"""Argument helpers shared by the subcommands."""

from typing import Dict, List, Optional

from app.services.corpus import default_corpus, get_group
from app.services.groups import FiniteGroup, UnboundLabelError


def parse_csv(text: Optional[str]) -> Optional[List[str]]:
    """Comma separated names; None stays None, an empty string is an empty selection."""
    if text is None:
        return None
    return [part.strip() for part in text.split(",") if part.strip()]


def resolve_groups(names: Optional[List[str]]) -> List[FiniteGroup]:
    if names is None:
        return default_corpus()
    return [get_group(name) for name in names]


def parse_env(G: FiniteGroup, text: Optional[str]) -> Dict[str, int]:
    """'label=word,label=word' with words in G's generators."""
    env: Dict[str, int] = {}
    for binding in parse_csv(text) or []:
        if "=" not in binding:
            raise UnboundLabelError(f"environment binding {binding!r} must look like label=word")
        label, word = (part.strip() for part in binding.split("=", 1))
        env[label] = G.element(word)
    return env
