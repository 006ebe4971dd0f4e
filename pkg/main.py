"""
Decide entailment in the input/output logics OUT1-OUT4 and their causal variants.

Install:
  pip install -r requirements.txt

Usage:
  python main.py decide --logic out2 --goal "a | b => x" data/or_rule.io
  python main.py prove --logic out3c data/ct_rule.json
  python main.py encode --logic out3c --goal "a => y" data/ct_rule.json > query.cnf
  python main.py selfcheck

Env (.env):
  IOLOG_ORACLE_CAP=24
  IOLOG_PROOF_CAP=20
  IOLOG_SAT_LEARNING=false
  IOLOG_EXTERNAL_SOLVER=""
  IOLOG_EXTERNAL_TIMEOUT=60
  IOLOG_SELFCHECK_WORKERS=4
  IOLOG_SELFCHECK_RANDOM=50
  IOLOG_SEED=0
  IOLOG_LOG_LEVEL=WARNING

Exit status: 0 derivable, 1 not derivable, 2 usage or input error, 3 size cap exceeded.
"""

import sys

from cli import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
