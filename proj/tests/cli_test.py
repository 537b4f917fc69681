"""End-to-end checks of the flcc executable: exit codes, output shape, determinism."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

exe, schemas, samples = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
schema = json.loads((schemas / "run_report.schema.json").read_text())
failures = []


def run(*args):
    return subprocess.run([exe, *map(str, args)], capture_output=True, text=True)


def expect(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


for sample, kind in [("flpm_two_clients.json", "flpm"), ("ncc_small.json", "ncc"),
                     ("sirpfl_small.json", "sirpfl"), ("sirpfl_capacitated.json", "sirpfl")]:
    r = run("solve", "--in", samples / sample, "--kind", kind, "--oracle", "--lp-bound", "--no-timing")
    expect(r.returncode == 0, f"solve {sample} exits 0 ({r.stderr.strip()})")
    if r.returncode == 0:
        rep = json.loads(r.stdout)
        try:
            jsonschema.validate(rep, schema)
            expect(True, f"{sample} report matches the schema")
        except jsonschema.ValidationError as e:
            expect(False, f"{sample} report matches the schema: {e.message}")
        expect(rep["total"] >= rep["oracle"] - 1e-7, f"{sample} total >= oracle")
        expect(rep["lp_bound"] <= rep["oracle"] + 1e-7, f"{sample} lp bound <= oracle")

r = run("solve", "--in", samples / "flpm_two_clients.json", "--kind", "flpm", "--oracle")
expect(r.returncode == 0 and json.loads(r.stdout)["total"] == 4.0, "two-client example costs 4")

r = run("solve", "--in", samples / "orlib_tiny.txt", "--orlib", "--oracle", "--no-timing")
expect(r.returncode == 0 and json.loads(r.stdout)["oracle"] == 6.0, "ORLIB sample solves to 6")

with tempfile.TemporaryDirectory() as tmp:
    bad = pathlib.Path(tmp) / "bad.json"
    bad.write_text('{"kind": "flpm", "facilities": [')
    r = run("solve", "--in", bad, "--kind", "flpm")
    expect(r.returncode == 2, "malformed JSON exits 2")
    bad.write_text('{"kind":"flpm","facilities":[{"id":"a","f":-1}],"clients":[{"id":"c"}],"dist":[[1]]}')
    r = run("solve", "--in", bad, "--kind", "flpm")
    expect(r.returncode == 2 and "opening_cost" in r.stderr, "negative opening cost exits 2 naming the field")
    trace = pathlib.Path(tmp) / "trace.json"
    r = run("solve", "--in", samples / "flpm_two_clients.json", "--trace", trace)
    events = json.loads(trace.read_text()) if trace.exists() else []
    expect(r.returncode == 0 and len(events) > 0 and all("t" in e and "kind" in e for e in events),
           "trace file lists events")

r = run("solve", "--in", "/nonexistent/instance.json")
expect(r.returncode == 2, "missing input exits 2")

r = run("frlp", "--k", 5, "--lambda-f", 1)
expect(r.returncode == 3, "frlp --k 5 exits 3 (scale guard)")

r = run("frlp", "--k", 1, "--lambda-f", 1)
expect(r.returncode == 0 and abs(json.loads(r.stdout)["o_k"] - 1.0) <= 1e-6, "frlp k=1 gives 1")

r = run("frlp", "--k", 2, "--lambda-f", 1.11, "--chain-check", 50, "--seed", 3)
if r.returncode == 0:
    cc = json.loads(r.stdout)["chain_check"]
    expect(cc["chain_holds"] == 50 and cc["step1_holds"] == 50, "chain check holds on 50 points")
else:
    expect(False, "frlp chain check runs")

a = run("bench", "--suite", "ncc", "--count", 12, "--seed", 4)
b = run("bench", "--suite", "ncc", "--count", 12, "--seed", 4, "--parallel")
expect(a.returncode == 0 and a.stdout == b.stdout, "bench output is byte-identical serial vs parallel")
expect(a.stdout.splitlines()[0] ==
       "instance_id,variant,n_fac,n_cli,T,alg_cost,opt_cost,lp_bound,ratio,lp_ratio,millis", "CSV header")

j = run("bench", "--suite", "sirpfl-us", "--count", 4, "--format", "json")
if j.returncode == 0:
    doc = json.loads(j.stdout)
    for rep in doc["reports"]:
        jsonschema.validate(rep, schema)
    expect(len(doc["reports"]) == 4, "bench JSON reports validate")
else:
    expect(False, "bench JSON runs")

g = run("generate", "--kind", "sirpfl", "--seed", 2)
with tempfile.TemporaryDirectory() as tmp:
    inst = pathlib.Path(tmp) / "g.json"
    inst.write_text(g.stdout)
    r = run("solve", "--in", inst, "--kind", "sirpfl")
    expect(g.returncode == 0 and r.returncode == 0, "generated instance solves")

r = run("bench", "--suite", "nope")
expect(r.returncode == 2, "unknown suite exits 2")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
