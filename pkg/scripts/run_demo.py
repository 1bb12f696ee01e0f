"""Run the built-in worked examples and print the report."""

import argparse
import sys

from qcm.cli import main

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--format", choices=("json", "text"), default="text")
    args = parser.parse_args()
    sys.exit(main(["demo", "--format", args.format]))
