#!/usr/bin/env python3
"""Generate the three canonical explanations over the built-in fixture.

Shows the two decisive-terms branches (domination and trade-off), the
weight-swap argument, and what the machine-readable documents look like.
"""

import json

from reptrace import fixture
from reptrace.explain import explain, invert_permutation
from reptrace.pipeline import explanation_to_document
from reptrace.render import render_text

NAMES = {p: p for p in fixture.PROVIDERS} | {fixture.ASSESSOR: fixture.ASSESSOR}


def show(preferred, other):
    ctx = fixture.comparison(preferred, other)
    explanation = explain(ctx)
    print(f"--- {preferred} vs {other} ---")
    print(render_text(explanation, NAMES, ascending_pros=True))
    doc = explanation_to_document(explanation)
    print("machine-readable arguments:")
    print(json.dumps(doc["arguments"], indent=2))
    print()


def main():
    print("B dominates C (better on every term), so the argument lists the")
    print("terms whose weighted advantage beats the equal-importance reference.")
    show("B", "C")

    print("B does not dominate D: D is better on timeliness. Quality alone")
    print("outweighs everything unmentioned, so it is the whole argument.")
    show("B", "D")

    print("For B vs E, quality decides the ranking. On timeliness the ranking")
    print("hinges on the component weights: swapping the interaction and")
    print("witness importance would reverse that term's order.")
    ctx = fixture.comparison("B", "E")
    swap = invert_permutation(ctx, "timeliness")
    print(f"  swaps: {[(a.value, b.value) for a, b in swap.swaps]}")
    print(
        f"  term trusts now: B {swap.preferred_original:.2f}, E {swap.other_original:.2f}; "
        f"after the swap: B {swap.preferred_swapped:.2f}, E {swap.other_swapped:.2f}"
    )


if __name__ == "__main__":
    main()
