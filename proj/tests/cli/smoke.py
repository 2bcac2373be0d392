#!/usr/bin/env python3
"""End-to-end CLI run on a tiny release: every subcommand, exit codes, and
the shipped JSON schemas.

    smoke.py <tacit executable> <scratch dir>
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

ROOT = Path(__file__).resolve().parents[2]
OK, REJECTED, INVALID, IO = 0, 1, 2, 3

failures = []


def run(*args, expect):
    p = subprocess.run([TACIT, *map(str, args)], capture_output=True, text=True)
    if p.returncode != expect:
        failures.append(f"{' '.join(map(str, args))}: exit {p.returncode}, expected {expect}\n{p.stderr.strip()}")
    return p


def check(cond, what):
    if not cond:
        failures.append(what)


def conforms(path, schema):
    doc = json.loads(Path(path).read_text())
    schema_doc = json.loads((ROOT / "schemas" / f"{schema}.schema.json").read_text())
    errors = list(jsonschema.Draft202012Validator(schema_doc).iter_errors(doc))
    check(not errors, f"{path} vs {schema}: {[e.message for e in errors[:3]]}")
    return doc


TACIT, WORK = sys.argv[1], Path(sys.argv[2])
shutil.rmtree(WORK, ignore_errors=True)
WORK.mkdir(parents=True)

for schema in (ROOT / "schemas").glob("*.schema.json"):
    jsonschema.Draft202012Validator.check_schema(json.loads(schema.read_text()))

# generate
run("--help", expect=OK)
run("generate", "--task", "maze", "--difficulty", "easy", "--seed", 5, "--out", WORK / "gen", "--svg", expect=OK)
conforms(WORK / "gen" / "maze_easy_5_meta.json", "puzzle_meta")
check((WORK / "gen" / "512" / "maze_easy_5_distractor_3.png").exists(), "generate wrote no distractor")
check((WORK / "gen" / "maze_easy_5_solution.svg").exists(), "generate wrote no svg")
run("generate", "--task", "8", "--difficulty", "hard", "--index", 0, "--out", WORK / "gen", expect=OK)
run("generate", "--task", "tetris", "--seed", 1, "--out", WORK / "gen", expect=INVALID)
run("generate", "--task", "maze", "--difficulty", "extreme", "--seed", 1, "--out", WORK / "gen", expect=INVALID)
run("generate", "--task", "maze", "--seed", 1, "--res", 500, "--out", WORK / "gen", expect=INVALID)
run("generate", "--task", "maze", "--seed", 1, "--index", 1, "--out", WORK / "gen", expect=INVALID)
run("generate", "--seed", 1, expect=INVALID)

# build
config = WORK / "tiny.yaml"
config.write_text("profile: tiny\nglobal_seed: 7\npuzzles_per_cell: 1\nresolutions: [512]\n"
                  "tasks:\n  maze:\n  unknot:\n")
rel = WORK / "release"
run("build", "--config", config, "--out", rel, "--quiet", expect=OK)
manifest = conforms(rel / "manifest.json", "manifest")
check(manifest["counts"]["png_files"] == 36, "tiny release should hold 36 PNGs")
for meta in rel.glob("task_*/*/*_meta.json"):
    conforms(meta, "puzzle_meta")
run("build", "--config", WORK / "missing.yaml", "--out", WORK / "x", expect=IO)
(WORK / "bad.yaml").write_text("bogus: 1\n")
run("build", "--config", WORK / "bad.yaml", "--out", WORK / "x", expect=INVALID)

# verify
first = manifest["puzzles"][0]
cell = rel / "task_01_maze" / first["difficulty"] / "512"
seed = first["seed"]
common = ["--release", rel, "--task", "maze", "--difficulty", first["difficulty"], "--seed", seed]
out = run("verify", *common, "--candidate", cell / f"{seed}_solution.png", expect=OK)
check(json.loads(out.stdout).get("passed") is True, "verify output should report passed")
run("verify", *common, "--candidate", cell / f"{seed}_distractor_0.png", expect=REJECTED)
run("verify", *common, "--candidate", cell / "nope.png", expect=IO)
(WORK / "garbage.png").write_bytes(b"not a png")
run("verify", *common, "--candidate", WORK / "garbage.png", expect=INVALID)
run("verify", "--release", rel, "--task", "maze", "--difficulty", "easy", "--seed", 123,
    "--candidate", cell / f"{seed}_solution.png", expect=IO)

# track 1
sub1 = WORK / "track1"
sub1.mkdir()
for p in manifest["puzzles"]:
    task_dir = next(rel.glob(f"task_*_{p['task']}"))
    shutil.copy(task_dir / p["difficulty"] / "512" / f"{p['seed']}_solution.png",
                sub1 / f"{p['task']}_{p['difficulty']}_{p['seed']}.png")
run("score-track1", "--release", rel, "--submission", sub1, "--report", WORK / "t1.json", expect=OK)
frag1 = conforms(WORK / "t1.json", "fragment")
check(all(r["correct"] for r in frag1["records"]), "track-1 oracle should score 100%")
run("score-track1", "--release", rel, "--submission", WORK / "none", "--report", WORK / "x.json", expect=IO)

# track 2
run("assemble-track2", "--release", rel, "--out", WORK / "key.json", expect=OK)
key = conforms(WORK / "key.json", "track2_key")
check(key["resolution"] == 512 and key["warnings"], "key should fall back to 512 with a warning")
run("assemble-track2", "--release", rel, "--res", 1024, "--out", WORK / "x.json", expect=INVALID)
run("assemble-track2", "--release", WORK / "none", "--out", WORK / "x.json", expect=IO)
records = [{k: p[k] for k in ("puzzle_id", "task", "difficulty", "correct_index")} | {"selected_index": p["correct_index"]}
           for p in key["puzzles"]]
(WORK / "sub2.json").write_text(json.dumps({"records": records}))
conforms(WORK / "sub2.json", "track2_submission")
run("score-track2", "--key", WORK / "key.json", "--submission", WORK / "sub2.json", "--report", WORK / "t2.json",
    expect=OK)
conforms(WORK / "t2.json", "fragment")
(WORK / "bad2.json").write_text(json.dumps({"records": [{"puzzle_id": "maze_easy_1"}]}))
run("score-track2", "--key", WORK / "key.json", "--submission", WORK / "bad2.json", "--report", WORK / "x.json",
    expect=INVALID)
run("score-track2", "--key", WORK / "nokey.json", "--submission", WORK / "sub2.json", "--report", WORK / "x.json",
    expect=IO)

# report
run("report", WORK / "t1.json", WORK / "t2.json", "--out", WORK / "report.json", expect=OK)
report = conforms(WORK / "report.json", "report")
check(report["per_task"]["maze"]["gap"] == 0.0, "oracle gap should be zero")
(WORK / "junk.json").write_text("{ not json")
run("report", WORK / "junk.json", expect=INVALID)
run("report", WORK / "absent.json", expect=IO)

for f in failures:
    print("FAIL", f)
print(f"cli smoke: {len(failures)} failure(s)")
sys.exit(1 if failures else 0)
