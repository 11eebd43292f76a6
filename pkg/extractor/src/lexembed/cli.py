"""Command line: encode usage JSONL files and definition texts into stores."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .encoding import Encoder, ExtractionConfig
from .errors import ExtractionError
from .extract import encode_definitions, encode_usages
from .records import read_usage_jsonl

log = logging.getLogger("lexembed")


def _config(args: argparse.Namespace) -> ExtractionConfig:
    layer = args.layer
    if layer != "last":
        layer = int(layer)
    return ExtractionConfig(
        model=args.model,
        layer=layer,
        pooling=args.pooling,
        batch_size=args.batch_size,
        device=args.device,
        marker=args.marker,
    )


def _add_encoder_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, help="encoder name or path")
    parser.add_argument("--layer", default="last",
                        help="'last' or a hidden-state index (0 = embeddings)")
    parser.add_argument("--pooling", default="mean",
                        choices=["mean", "first", "max"])
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--marker", default="none", choices=["none", "angle"],
                        help="'angle' wraps the target in <t> ... </t>")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexembed",
        description="Encode marked word usages into embedding stores.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    encode = sub.add_parser("encode", help="encode a usage JSONL into a store")
    encode.add_argument("jsonl", type=Path,
                        help="one record per line: word, period, sentence, "
                             "start, end")
    encode.add_argument("--out", type=Path, required=True)
    encode.add_argument("--language", default="unknown")
    _add_encoder_flags(encode)

    defs = sub.add_parser(
        "encode-definitions",
        help="encode <word>.txt definition files into an existing store",
    )
    defs.add_argument("--store", type=Path, required=True)
    defs.add_argument("--texts", type=Path, required=True,
                      help="directory of <word>.txt files, one definition "
                           "per line")
    _add_encoder_flags(defs)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = _build_parser().parse_args(argv)
    try:
        config = _config(args)
        if args.command == "encode":
            records = read_usage_jsonl(args.jsonl)
            root = encode_usages(records, config, args.out, args.language)
            print(f"store: {root}")
            return 0
        if args.command == "encode-definitions":
            manifest_path = args.store / "manifest.json"
            if manifest_path.is_file():
                manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
                if manifest.get("encoder_name") != config.model:
                    log.warning(
                        "store was encoded with %r but definitions use %r",
                        manifest.get("encoder_name"), config.model,
                    )
            encoder = Encoder(config)
            count = 0
            for txt in sorted(args.texts.glob("*.txt")):
                word = txt.stem
                texts = [
                    line
                    for line in txt.read_text(encoding="utf-8").splitlines()
                    if line.strip()
                ]
                encode_definitions(word, texts, config, args.store, encoder)
                count += 1
            print(f"encoded definitions for {count} words into {args.store}")
            return 0
        raise ExtractionError(f"unknown command {args.command!r}")
    except ExtractionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
