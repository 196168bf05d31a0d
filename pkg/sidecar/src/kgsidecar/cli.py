"""prepare-corpus: run the sidecar over raw (and optionally normalized)
posts, writing the parse and coreference files the pipeline consumes."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import parse_normalized, parse_posts


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="prepare-corpus", description=__doc__)
    parser.add_argument("--posts", required=True, help="raw posts JSON-lines")
    parser.add_argument("--out-dir", required=True, help="output directory")
    parser.add_argument(
        "--normalized", help="normalized posts JSON-lines (adds a second-pass parse)"
    )
    parser.add_argument(
        "--backend",
        choices=["auto", "spacy", "heuristic"],
        default="auto",
        help="parsing backend (default: spaCy when installed)",
    )
    args = parser.parse_args(argv)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        parse_posts(
            args.posts, out / "first_pass.conllu", out / "coref.jsonl", args.backend
        )
        if args.normalized:
            parse_normalized(
                args.normalized,
                out / "second_pass.conllu",
                out / "coref_second_pass.jsonl",
                args.backend,
            )
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
