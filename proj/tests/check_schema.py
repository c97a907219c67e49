#!/usr/bin/env python3
# usage: check_schema.py <gadtparam> <schema.json> <samples dir>
import json
import os
import subprocess
import sys

import jsonschema


def main():
    cli, schema_path, samples = sys.argv[1:4]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    seq = os.path.join(samples, "seq.gadt")
    lst = os.path.join(samples, "list.gadt")
    runs = [
        ["check", seq],
        ["complete", seq],
        ["lift", lst, "--rel", "E", "--depth", "1"],
        ["relate", seq, "--rel", "fg", "--lhs", "s", "--rhs", "s'", "--witness"],
        ["enumerate", seq, "--instance", "Bool", "--depth", "2"],
        ["preservation", lst, "--mode", "naive"],
        ["gmap", seq, "--fun", "fg", "--term", "t"],
        ["graphlemma", seq, "--domain", "Bool × Bool", "--functions", "product"],
        ["mappable", seq, "--fun", "fg", "--term", "t"],
        ["freetheorem", seq, "--candidates", "sweep"],
    ]
    bad = 0
    for args in runs:
        for extra in ([], ["--no-timings"]):
            p = subprocess.run([cli, "--format", "json", *extra, *args], capture_output=True, text=True)
            if p.returncode not in (0, 1):
                print(f"FAIL {args[0]}: exit {p.returncode}: {p.stderr.strip()}")
                bad += 1
                continue
            try:
                doc = json.loads(p.stdout)
                validator.validate(doc)
                if args[0] != doc["command"]:
                    raise ValueError(f"command is {doc['command']}")
                if extra and "timings" in doc:
                    raise ValueError("timings present with --no-timings")
            except (ValueError, jsonschema.ValidationError) as e:
                print(f"FAIL {args[0]}: {e}")
                bad += 1
                continue
            print(f"ok {args[0]} {' '.join(extra)}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
