"""Write the fixture pairs as JSON bundles under ``demos/bundles/``.

Each bundle holds the pair as families ``A`` and ``B``; the operator
examples also carry the operator ``U`` (so ``B = U A``).

    python3 demos/make_bundles.py
"""

from pathlib import Path

from kreinweave import fixtures
from kreinweave.bundle import FrameBundle, dump_bundle

OUT = Path(__file__).parent / "bundles"


def main():
    OUT.mkdir(exist_ok=True)
    ops = {"contraction": fixtures.contraction_example()[1], "sign_flip": fixtures.sign_flip_example()[1]}
    for name, (F, G) in fixtures.all_pairs().items():
        b = FrameBundle(F.space, {"A": F, "B": G}, {"U": ops[name]} if name in ops else {})
        dump_bundle(b, OUT / f"{name}.json")
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main()
