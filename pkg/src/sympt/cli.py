"""Command-line surface over the five computational backends.

Every subcommand prints exactly one JSON document with sorted keys, so the
output is byte-identical across runs for the same inputs and seed.  Exit
status: 0 when the command succeeds (and any checked relation holds), 1 when
a checked relation or equality fails or an orbit hits a pole, 2 on usage or
domain errors (unknown suite or backend, malformed words, composition cap).

Subcommands
-----------
relations   run a named relation suite in a backend
equal       compare two words in a backend
eval        evaluate a word and print its backend representation
trop        compose rational factors symbolically and print the PL shadow
convert     move a circle-model element between pl, tree and dyadic forms
mutate      apply a lattice mutation to a Picard vector (bases be, p, wq)
quantum     probe a word on random clock/shift matrix pairs
orbit       exact rational orbit of a point under a word
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import birational, picard, quantum, thompson, words
from .plcore import mat_inv, primitive

TROP_CAP = 8


# ---------------------------------------------------------------------------
# plumbing

def _emit(payload, args) -> None:
    if getattr(args, "json", False):
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    else:
        text = json.dumps(payload, sort_keys=True, indent=2)
    out = getattr(args, "output", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _core(text: str):
    return words._expand_to(words.parse_word(text), words.CORE)


def _parse_vec(text: str):
    try:
        a, b = (int(t) for t in text.split(","))
    except Exception:
        raise ValueError("expected a lattice vector as 'a,b'; got %r" % text)
    return (a, b)


def _params(args) -> dict:
    out = {"seed": args.seed}
    if args.trials is not None:
        out["trials"] = args.trials
    if args.backend == "quantum":
        if args.N is not None:
            out["N"] = args.N
        if args.prime:
            out["p"] = args.prime[-1]
    elif args.prime:
        out["primes"] = args.prime
    return out


# ---------------------------------------------------------------------------
# subcommands

def cmd_relations(args):
    run = words.check_suite(args.suite, backend=args.backend or "pl",
                            params=_params(args))
    return run, 0 if run["ok"] else 1


def cmd_equal(args):
    backend = args.backend or "pl"
    payload = {"backend": backend, "lhs": args.lhs, "rhs": args.rhs}
    if backend in ("pl", "tree", "dyadic"):
        lv = words.evaluate(args.lhs, backend)
        rv = words.evaluate(args.rhs, backend)
        payload["equal"] = lv == rv
    elif backend == "bir":
        verdict = birational.word_equals(
            _core(args.lhs), _core(args.rhs),
            primes=args.prime or None,
            trials=args.trials if args.trials is not None else 20,
            seed=args.seed)
        payload["equal"] = verdict["equal"]
        payload["evidence"] = verdict["evidence"]
    elif backend == "picard":
        word = _core(args.lhs) + words.word_inverse(_core(args.rhs))
        verdict = picard.word_acts_as_identity(
            word,
            nvectors=args.trials if args.trials is not None else 20,
            seed=args.seed)
        payload["equal"] = verdict["identity"]
        payload["evidence"] = verdict["evidence"]
    elif backend == "quantum":
        word = _core(args.lhs) + words.word_inverse(_core(args.rhs))
        verdict = quantum.word_acts_as_identity(
            word,
            N=args.N if args.N is not None else 5,
            p=args.prime[-1] if args.prime else None,
            trials=args.trials if args.trials is not None else 10,
            seed=args.seed)
        payload["equal"] = verdict["identity"]
        payload["evidence"] = verdict["evidence"]
    else:
        raise ValueError("unknown backend %r" % backend)
    return payload, 0 if payload["equal"] else 1


def cmd_eval(args):
    backend = args.backend or "pl"
    params = None
    if backend == "quantum":
        params = {"seed": args.seed}
        if args.N is not None:
            params["N"] = args.N
        if args.prime:
            params["p"] = args.prime[-1]
    value = words.evaluate(args.word, backend, params)
    if backend == "picard":
        rep = {"operator": [[s, e] for s, e in value.word]}
    elif backend == "quantum":
        rep = value
    else:
        rep = value.to_json()
    return {"backend": backend, "word": args.word, "value": rep}, 0


def _trop_factors(text: str):
    """Parse the trop grammar: generator tokens over {P,C,I,U} plus
    'lambda:r1,r2' torus scalings and 'mono:a,b,c,d' monomial maps."""
    factors = []
    for chunk in text.split():
        if chunk.startswith("lambda:"):
            parts = chunk[len("lambda:"):].split(",")
            if len(parts) != 2:
                raise ValueError("lambda token needs two rationals: %r" % chunk)
            factors.append(birational.scaling_bir(Fraction(parts[0]),
                                                  Fraction(parts[1])))
            continue
        if chunk.startswith("mono:"):
            parts = chunk[len("mono:"):].split(",")
            if len(parts) != 4:
                raise ValueError("mono token needs four integers: %r" % chunk)
            factors.append(birational.monomial_bir(*(int(t) for t in parts)))
            continue
        parsed = words.parse_word(chunk)
        for sym, exp in parsed:
            if sym not in ("P", "C", "I", "U"):
                raise ValueError(
                    "trop words are spelled over P, C, I, U plus lambda:/mono:"
                    " tokens; got %r" % sym)
            gen = (birational.generator_bir if exp > 0
                   else birational.generator_bir_inverse)(sym)
            factors.extend([gen] * abs(exp))
    return factors


def cmd_trop(args):
    factors = _trop_factors(args.word)
    if len(factors) > TROP_CAP:
        raise ValueError(
            "symbolic composition capped at %d factors; got %d "
            "(tropicalize shorter pieces and compose the PL results instead)"
            % (TROP_CAP, len(factors)))
    total = birational.identity_bir()
    for f in factors:
        total = birational.compose_bir(total, f)
    return birational.tropicalize(total).to_json(), 0


_CONVERTERS = {
    ("pl", "tree"): thompson.plaut_to_treepair,
    ("pl", "dyadic"): thompson.plaut_to_dyadic,
    ("tree", "pl"): thompson.treepair_to_plaut,
    ("tree", "dyadic"): thompson.treepair_to_dyadic,
    ("dyadic", "pl"): thompson.dyadic_to_plaut,
    ("dyadic", "tree"): thompson.dyadic_to_treepair,
}


def cmd_convert(args):
    src = args.via
    dst = args.to
    if src not in ("pl", "tree", "dyadic") or dst not in ("pl", "tree", "dyadic"):
        raise ValueError("convert moves between pl, tree and dyadic models")
    value = words.evaluate(args.word, src)
    if src != dst:
        value = _CONVERTERS[(src, dst)](value)
    return {"word": args.word, "from": src, "to": dst,
            "element": value.to_json()}, 0


def _wq_at(x, v):
    """The q-mutation along a general primitive direction: move v to the
    base direction by a fixed unimodular matrix and conjugate."""
    if v == (1, 0):
        return picard.mu_Wq_action(x)
    if primitive(v) != v:
        raise ValueError("mutation direction must be primitive; got %r" % (v,))
    g, s, t = picard._egcd(v[0], v[1])
    m = (v[0], -t, v[1], s)  # det 1, m(1,0) = v
    return picard.gamma_action(
        picard.mu_Wq_action(picard.gamma_action(x, mat_inv(m))), m)


def cmd_mutate(args):
    if args.vector is not None:
        raw = args.vector
    elif args.input:
        with open(args.input) as fh:
            raw = fh.read()
    else:
        raise ValueError("mutate needs --vector JSON or --input FILE")
    try:
        x = picard.PicVec.from_json(json.loads(raw))
    except (KeyError, TypeError) as exc:
        raise ValueError("malformed PicVec JSON (missing %s)" % exc)
    v = _parse_vec(args.at)
    if args.basis == "be":
        out = picard.mu_be_action(x, v)
    elif args.basis == "p":
        out = picard.PicVec()
        for key, coeff in x.terms.items():
            if key[0] != "p":
                raise ValueError(
                    "basis p mutates p-family vectors only; found %r" % (key,))
            out = out + coeff * picard.mu_p_action(key[1], v)
    elif args.basis == "wq":
        out = _wq_at(x, v)
    else:
        raise ValueError("unknown basis %r (expected be, p or wq)" % args.basis)
    return {"basis": args.basis, "at": list(v),
            "input": x.to_json(), "output": out.to_json()}, 0


def cmd_quantum(args):
    cfg = quantum.make_config(args.N if args.N is not None else 5,
                              args.prime[-1] if args.prime else None,
                              args.seed)
    report = quantum.q_relation_check(
        _core(args.word), cfg,
        trials=args.trials if args.trials is not None else 10,
        seed=args.seed)
    report["word"] = args.word
    return report, 0 if report["verdict"] == "identity" else 1


def cmd_orbit(args):
    f = words.evaluate(args.word, "bir")
    start = tuple(Fraction(t) for t in args.start.split(","))
    if len(start) != 2:
        raise ValueError("expected a start point as 'x,y'; got %r" % args.start)
    points = birational.orbit_exact(f, start, args.steps)
    return {"word": args.word, "start": [str(c) for c in start],
            "steps": args.steps,
            "points": [[str(x), str(y)] for x, y in points]}, 0


# ---------------------------------------------------------------------------
# parser

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=words.BACKENDS,
                        help="computational model (default pl)")
    common.add_argument("--prime", action="append", type=int, default=[],
                        help="prime modulus; repeatable (bir needs > 2^61)")
    common.add_argument("--trials", type=int,
                        help="sample count for randomized verdicts")
    common.add_argument("--seed", type=int, default=0,
                        help="RNG seed (default 0)")
    common.add_argument("--N", type=int, help="quantum order of q")
    common.add_argument("--json", action="store_true",
                        help="compact single-line JSON output")
    common.add_argument("--output", metavar="FILE",
                        help="write the JSON report to FILE instead of stdout")

    top = argparse.ArgumentParser(
        prog="sympt",
        description="exact models of the group generated by the lattice "
                    "pentagon map and the unimodular matrices")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("relations", parents=[common],
                       help="run a relation suite")
    p.add_argument("--suite", required=True,
                   help="one of: %s" % ", ".join(words.list_suites()))
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("equal", parents=[common],
                       help="compare two words in a backend")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(func=cmd_equal)

    p = sub.add_parser("eval", parents=[common],
                       help="evaluate a word and print its representation")
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("trop", parents=[common],
                       help="tropicalize a symbolic composition")
    p.add_argument("--word", required=True,
                   help="tokens over P,C,I,U plus lambda:r1,r2 and mono:a,b,c,d")
    p.set_defaults(func=cmd_trop)

    p = sub.add_parser("convert", parents=[common],
                       help="convert between circle models")
    p.add_argument("--word", required=True)
    p.add_argument("--to", required=True, choices=("pl", "tree", "dyadic"))
    p.add_argument("--via", default="pl", choices=("pl", "tree", "dyadic"),
                   help="model in which the word is evaluated first")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("mutate", parents=[common],
                       help="apply a lattice mutation to a Picard vector")
    p.add_argument("--basis", required=True, choices=("be", "p", "wq"))
    p.add_argument("--at", required=True, help="mutation direction 'a,b'")
    p.add_argument("--vector", help="PicVec JSON")
    p.add_argument("--input", metavar="FILE", help="read PicVec JSON from FILE")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("quantum", parents=[common],
                       help="probe a word on clock/shift matrix pairs")
    p.add_argument("--word", required=True)
    p.add_argument("--p", dest="prime", action="append", type=int,
                   help="prime with p = 1 mod N (alias of --prime)")
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("orbit", parents=[common],
                       help="exact rational orbit of a point under a word")
    p.add_argument("--word", default="P")
    p.add_argument("--start", default="2,3", help="start point 'x,y'")
    p.add_argument("--steps", type=int, default=5)
    p.set_defaults(func=cmd_orbit)

    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        payload, code = args.func(args)
    except ValueError as exc:  # includes word syntax and domain errors
        _emit({"error": str(exc)}, args)
        return 2
    except ZeroDivisionError as exc:
        _emit({"error": str(exc)}, args)
        return 1
    _emit(payload, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
