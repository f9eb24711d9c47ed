"""End-to-end checks of the qred executable: schemas, CSV layout, exit codes, determinism."""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

QRED = sys.argv[1]
SCHEMAS = sys.argv[2]
CHECK = sys.argv[3]


def run(args, env=None):
    full_env = dict(os.environ)
    full_env.pop("REDUCE_BUDGET", None)
    if env:
        full_env.update(env)
    return subprocess.run([QRED] + args, capture_output=True, env=full_env)


def load_schema(name):
    with open(os.path.join(SCHEMAS, name)) as f:
        return json.load(f)


def fail(msg):
    print("FAIL:", msg)
    sys.exit(1)


def check_schema():
    transcript = load_schema("transcript.schema.json")
    verify = load_schema("verify.schema.json")
    sims = [
        ["--preset", "repetition3", "--shots", "50"],
        ["--preset", "repetition3", "--shots", "20", "--decoder", "unreliable:0.25"],
        ["--preset", "small-random", "--shots", "20", "--seed", "4"],
        ["--preset", "ternary", "--shots", "20", "--no-amplify"],
        ["--q", "2", "--n", "5", "--k", "2", "--t", "1", "--decoder", "constant", "--shots", "10"],
        ["--preset", "small-random", "--u", "3", "--q-est-mode", "analytic", "--shots", "10"],
    ]
    for args in sims:
        p = run(["simulate"] + args)
        if p.returncode != 0:
            fail(f"simulate {args} exited {p.returncode}: {p.stderr.decode()}")
        jsonschema.validate(json.loads(p.stdout), transcript)
    for name in ["all", "amplify", "theorem-main", "qft-radial"]:
        p = run(["verify", name])
        if p.returncode != 0:
            fail(f"verify {name} exited {p.returncode}")
        jsonschema.validate(json.loads(p.stdout), verify)
    headers = {
        ("params", "--q", "2"): "q,R,tau,tau_perp,omega_easy_dual,delta_gv_dual,verdict",
        ("params", "--q", "3", "--fig2"): "q,R,tau_star,tau_perp_at_star,band_low,band_high,verdict",
        ("kravchuk", "--q", "2", "--n", "20"): "t,root_index,root,gap,u_star,mass",
    }
    for args, header in headers.items():
        p = run(list(args))
        if p.returncode != 0:
            fail(f"{args} exited {p.returncode}")
        text = p.stdout.decode()
        rows = list(csv.reader(io.StringIO(text)))
        if ",".join(rows[0]) != header:
            fail(f"{args}: header {rows[0]}")
        if len(rows) < 2 or any(len(r) != len(rows[0]) for r in rows[1:]):
            fail(f"{args}: ragged or empty CSV")
    print("schemas and CSV layout ok")


def check_figure_claims():
    p = run(["params", "--q", "2", "--fig2"])
    rows = list(csv.DictReader(io.StringIO(p.stdout.decode())))
    if len(rows) != 19:
        fail(f"expected 19 rates, got {len(rows)}")
    p = run(["params", "--q", "2"])
    useful = {}
    for r in csv.DictReader(io.StringIO(p.stdout.decode())):
        useful.setdefault(r["R"], False)
        useful[r["R"]] |= r["verdict"] == "useful"
    if not all(useful.values()) or len(useful) != 19:
        fail(f"q=2 not useful at every rate: {useful}")
    p = run(["params", "--q", "57", "--rate", "0.5"])
    verdicts = [r["verdict"] for r in csv.DictReader(io.StringIO(p.stdout.decode()))]
    if not verdicts or "useful" in verdicts:
        fail("q=57 R=0.5 should never be useful")
    print("figure claims ok")


def check_exit_codes():
    cases = [
        (["params", "--tau-step", "0"], None, 2),
        (["simulate", "--q", "4", "--n", "3", "--k", "1", "--t", "1"], None, 2),
        (["simulate", "--q", "2", "--n", "3", "--k", "1", "--t", "1", "--decoder", "bogus"], None, 2),
        (["simulate", "--preset", "repetition3", "--mode", "strict"], None, 2),
        (["simulate", "--preset", "repetition3", "--n", "5"], None, 2),
        (["verify", "no-such-thing"], None, 2),
        (["frobnicate"], None, 2),
        (["simulate", "--q", "2", "--n", "8", "--k", "4", "--t", "1", "--budget", "1000"], None, 3),
        (["simulate", "--preset", "small-random"], {"REDUCE_BUDGET": "100"}, 3),
        (["simulate", "--preset", "repetition3", "--shots", "5"], None, 0),
        (["verify", "amplify", "--p", "0.2", "--q-est", "0.2"], None, 0),
    ]
    for args, env, code in cases:
        p = run(args, env)
        if p.returncode != code:
            fail(f"{args} env={env}: exit {p.returncode}, expected {code}; stderr {p.stderr.decode()}")
        if code == 3 and b"budget" not in p.stderr.lower():
            fail(f"{args}: budget refusal should name the budget: {p.stderr.decode()}")
    print("exit codes ok")


def check_determinism():
    commands = [
        ["simulate", "--preset", "repetition3", "--seed", "11", "--shots", "500"],
        ["simulate", "--preset", "small-random", "--seed", "11", "--shots", "500"],
        ["simulate", "--preset", "ternary", "--seed", "11", "--shots", "500"],
        ["params", "--q", "2"],
        ["params", "--q", "5", "--fig2"],
        ["kravchuk", "--q", "3", "--n", "18"],
        ["verify", "all"],
    ]
    with tempfile.TemporaryDirectory() as d:
        for i, args in enumerate(commands):
            blobs = []
            for rep in range(2):
                path = os.path.join(d, f"{i}_{rep}")
                p = run(args + ["--out", path])
                if p.returncode != 0:
                    fail(f"{args} exited {p.returncode}")
                with open(path, "rb") as f:
                    blobs.append(f.read())
            if not blobs[0] or blobs[0] != blobs[1]:
                fail(f"{args}: outputs differ between runs")
    other = run(["simulate", "--preset", "small-random", "--seed", "12", "--shots", "500"]).stdout
    same = run(["simulate", "--preset", "small-random", "--seed", "11", "--shots", "500"]).stdout
    if other == same:
        fail("different seeds gave identical transcripts")
    print("determinism ok")


{
    "schema": check_schema,
    "figures": check_figure_claims,
    "exit-codes": check_exit_codes,
    "determinism": check_determinism,
}[CHECK]()
