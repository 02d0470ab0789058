import argparse
import sys
from pathlib import Path

from .recipes import RECIPES
from .schema import SchemaError


def main(argv=None):
    parser = argparse.ArgumentParser(prog="gct-figures", description="Render figures from gct-sim CSV tables.")
    parser.add_argument("--recipe", help="recipe name (see --list)")
    parser.add_argument("--data", type=Path, help="directory holding the input CSVs")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--list", action="store_true", help="list recipes and exit")
    args = parser.parse_args(argv)

    if args.list:
        for name, recipe in RECIPES.items():
            print(f"{name}\t{recipe.summary}")
        return 0
    if not (args.recipe and args.data and args.out):
        parser.print_usage(sys.stderr)
        print("gct-figures: --recipe, --data and --out are required", file=sys.stderr)
        return 2
    if args.recipe not in RECIPES:
        print(f"gct-figures: unknown recipe '{args.recipe}'", file=sys.stderr)
        return 2
    try:
        path = RECIPES[args.recipe].render(args.data, args.out)
    except SchemaError as e:
        print(f"gct-figures: {e}", file=sys.stderr)
        return 2
    print(path)
    return 0
