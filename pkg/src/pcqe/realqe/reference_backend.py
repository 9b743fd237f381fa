"""Reference external backend: reads a real formula on stdin, writes a
quantifier-free equivalent computed by the builtin virtual substitution.

``--passthrough`` echoes quantifier-free input unchanged.
"""
from __future__ import annotations

import argparse
import sys

from ..formulas import is_quantifier_free, to_real_formula
from ..parser import parse
from ..printer import print_formula
from .vs import vs_eliminate


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog='pcqe-reference-backend')
    ap.add_argument('--passthrough', action='store_true')
    args = ap.parse_args(argv)
    psi = to_real_formula(parse(sys.stdin.read(), allow_reserved=True))
    if args.passthrough:
        if not is_quantifier_free(psi):
            print('passthrough backend needs quantifier-free input', file=sys.stderr)
            return 1
        out = psi
    else:
        out = vs_eliminate(psi)
    print(print_formula(out))
    return 0


if __name__ == '__main__':
    sys.exit(main())
