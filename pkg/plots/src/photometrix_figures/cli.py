"""Render all bundled figures from a photometrix output directory.

    photometrix-figures DATA_DIR [--out DIR] [--only RECIPE [RECIPE ...]]

Images land next to the CSVs unless --out is given.
"""

import argparse
import sys
from pathlib import Path

from .recipes import RECIPES
from .render import MissingColumn, render


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="photometrix-figures",
        description="render bundled figures from photometrix CSV outputs",
    )
    parser.add_argument("data_dir", help="directory holding the pipeline CSVs")
    parser.add_argument("--out", default=None, help="image output directory")
    parser.add_argument(
        "--only", nargs="+", choices=sorted(RECIPES), help="subset of recipes"
    )
    args = parser.parse_args(argv)

    names = args.only if args.only else sorted(RECIPES)
    data_dir = Path(args.data_dir)
    failures = 0
    for name in names:
        recipe = RECIPES[name]
        missing = [f for f in recipe.inputs if not (data_dir / f).exists()]
        if missing:
            print(f"{name}: skipped, missing input {', '.join(missing)}", file=sys.stderr)
            if args.only:
                failures += 1
            continue
        try:
            path = render(recipe, data_dir, args.out)
        except MissingColumn as exc:
            print(f"{name}: {exc}", file=sys.stderr)
            failures += 1
            continue
        print(f"rendered {path}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
