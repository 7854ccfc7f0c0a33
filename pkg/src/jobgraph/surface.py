"""Surface-form normalization shared by the synthetic generator and the stub embedder.

Synthetic corpora derive every mention from a canonical entity name through a
fixed transformation menu (case changes, separator punctuation, a short
abbreviation table, and decorator prefixes). ``normalize_surface`` inverts the
whole menu, so any component that needs "which canonical does this string
express" can recover it without a lookup table.
"""

from __future__ import annotations

import re

_PUNCT_RE = re.compile(r"[-_/.,;:()&+]+")

# Bijective on the tokens used by canonical name word lists.
ABBREVIATIONS = {
    "management": "mgmt",
    "development": "dev",
    "administration": "admin",
    "coordination": "coord",
    "documentation": "docs",
}
_EXPANSIONS = {short: full for full, short in ABBREVIATIONS.items()}

# Prefix tokens that carry no entity identity; stripped during normalization.
DECORATOR_TOKENS = frozenset(
    {"advanced", "general", "certified", "ms", "enterprise", "modern"}
)

VARIANT_STYLES = ("plain", "title", "upper", "hyphen", "abbrev", "decorated")


def normalize_surface(text: str) -> str:
    """Collapse a surface form to its canonical spelling."""
    lowered = _PUNCT_RE.sub(" ", text.lower())
    tokens = [_EXPANSIONS.get(tok, tok) for tok in lowered.split()]
    kept = [tok for tok in tokens if tok not in DECORATOR_TOKENS]
    return " ".join(kept)


def apply_variant(canonical: str, style: str, decorator: str = "advanced") -> str:
    """Render one surface variant of a canonical name.

    The result always satisfies ``normalize_surface(variant) == canonical``
    provided ``canonical`` is itself normalized.
    """
    if style == "plain":
        return canonical
    if style == "title":
        return canonical.title()
    if style == "upper":
        return canonical.upper()
    if style == "hyphen":
        return canonical.replace(" ", "-")
    if style == "abbrev":
        tokens = [ABBREVIATIONS.get(tok, tok) for tok in canonical.split()]
        return " ".join(tokens)
    if style == "decorated":
        if decorator not in DECORATOR_TOKENS:
            raise ValueError(f"unknown decorator {decorator!r}")
        return f"{decorator} {canonical}"
    raise ValueError(f"unknown variant style {style!r}")
