"""Shared word language over the named generators.

A word is a sequence of (symbol, exponent) factors over the closed alphabet
P, L, C, I, U, mu, V, R, A, B, X2, alpha, beta, written "P C^-1 I^2" with the
rightmost factor acting first.  Derived symbols carry definitional expansions
into the core letters P, C, I; the expansions are identities of the group, so
evaluating a word and evaluating its expansion agree in every backend.

The second and third circle-group presentations are stated here for the
inverse generators (their words multiply in the opposite order), which is why
their expansions read R = P^2 C, A = C R^2, B = C^-1 R^-1, alpha = C^-1 R C^-1,
beta = R^2 C R^2, and why the corresponding suite files invert each bare C and
I.  Relation suites live in suites/*.json as data: a list of
{name, lhs, rhs} with rhs a word, "1", or "probe".
"""

from __future__ import annotations

import json
import re
from importlib import resources

from . import plcore

Word = tuple[tuple[str, int], ...]

ALPHABET = ("P", "L", "C", "I", "U", "mu", "V", "R", "A", "B", "X2", "alpha", "beta")

# Derived symbols as words in earlier ones; every chain ends in {P, C, I}.
EXPANSIONS = {
    "L": "P^-1",
    "U": "C I",
    "mu": "I P",
    "V": "C^-1 I^2",
    "R": "P^2 C",
    "A": "C R^2",
    "B": "C^-1 R^-1",
    "X2": "A^-1 B A",
    "alpha": "C^-1 R C^-1",
    "beta": "R^2 C R^2",
    "I": "P C P",
}

CORE = frozenset({"P", "C", "I"})

_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\^(-?\d+))?$")


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


def parse_word(text: str) -> Word:
    """Parse "P C^-1 I^2" into ((P,1),(C,-1),(I,2)); "1" is the empty word."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    factors = []
    pos = 0
    for chunk in text.split():
        start = text.index(chunk, pos)
        pos = start + len(chunk)
        m = _TOKEN.match(chunk)
        if not m:
            raise WordSyntaxError("bad token %r" % chunk, start)
        sym, exp = m.group(1), int(m.group(2) or 1)
        if sym not in ALPHABET:
            raise WordSyntaxError("unknown symbol %r" % sym, start)
        if exp == 0:
            raise WordSyntaxError("zero exponent on %r" % sym, start)
        factors.append((sym, exp))
    return tuple(factors)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(s if e == 1 else "%s^%d" % (s, e) for s, e in word)


def word_inverse(word: Word) -> Word:
    return tuple((s, -e) for s, e in reversed(word))


def word_length(word: Word) -> int:
    return sum(abs(e) for _, e in word)


def _expand_to(word: Word, alphabet: frozenset) -> Word:
    out = list(word)
    for _ in range(16):
        done = all(s in alphabet for s, _ in out)
        if done:
            break
        nxt = []
        for s, e in out:
            if s in alphabet:
                nxt.append((s, e))
                continue
            body = parse_word(EXPANSIONS[s])
            if e < 0:
                body, e = word_inverse(body), -e
            nxt.extend(body * e)
        out = nxt
    else:
        raise ValueError("expansion does not terminate in %r" % sorted(alphabet))
    # merge adjacent equal symbols, dropping cancellations
    merged: list[tuple[str, int]] = []
    for s, e in out:
        if merged and merged[-1][0] == s:
            e += merged[-1][1]
            merged.pop()
        if e:
            merged.append((s, e))
    return tuple(merged)


def expand(word: Word, alphabet=("P", "C")) -> Word:
    """Rewrite word into the target alphabet, {P, C} or {L, C}.

    The result is equal to word in the group, factor for factor, so
    evaluate(word) == evaluate(expand(word)) in every backend.
    """
    target = frozenset(alphabet)
    if target == frozenset({"P", "C"}):
        return _expand_to(word, target)
    if target == frozenset({"L", "C"}):
        pc = _expand_to(word, frozenset({"P", "C"}))
        return tuple(("L", -e) if s == "P" else (s, e) for s, e in pc)
    raise ValueError("target alphabet must be {P,C} or {L,C}")


# ---------------------------------------------------------------------------
# backends

BACKENDS = ("pl", "tree", "dyadic", "bir", "picard", "quantum")


def _pl_atoms():
    return {s: plcore.generator_pl(s) for s in ("P", "C", "I")}


def _fold(word: Word, atoms: dict, identity, mul, inv_atoms: dict | None = None):
    # balanced reduction keeps symbolic backends from nesting lopsidedly
    factors = []
    for s, e in _expand_to(word, frozenset(atoms)):
        if e < 0:
            g, e = inv_atoms[s] if inv_atoms else ~atoms[s], -e
        else:
            g = atoms[s]
        factors.extend([g] * e)
    if not factors:
        return identity
    while len(factors) > 1:
        paired = [mul(factors[i], factors[i + 1])
                  for i in range(0, len(factors) - 1, 2)]
        if len(factors) % 2:
            paired.append(factors[-1])
        factors = paired
    return factors[0]


def evaluate(word, backend: str = "pl", params: dict | None = None):
    """Value of a word in a backend, rightmost factor first.

    pl, tree and dyadic return exact group elements.  bir returns a symbolic
    map and enforces the composition length cap.  quantum returns the matrix
    pair reached from a sampled clock/shift pair, and picard returns the word
    as an operator on Picard vectors.
    """
    if isinstance(word, str):
        word = parse_word(word)
    params = params or {}
    if backend == "pl":
        return _fold(word, _pl_atoms(), plcore.identity_pl(),
                     lambda a, b: a * b)
    if backend == "tree":
        from . import thompson
        atoms = {s: thompson.plaut_to_treepair(plcore.generator_pl(s))
                 for s in ("P", "C", "I")}
        return _fold(word, atoms, thompson.treepair_identity(),
                     thompson.treepair_compose)
    if backend == "dyadic":
        from . import thompson
        atoms = {s: thompson.plaut_to_dyadic(plcore.generator_pl(s))
                 for s in ("P", "C", "I")}
        # A and B fold as the native CFP elements (equal to their expansions)
        cfp_a, cfp_b, _ = thompson.cfp_generators()
        atoms["A"] = cfp_a
        atoms["B"] = cfp_b
        return _fold(word, atoms, thompson.dyadic_identity(),
                     thompson.dyadic_compose)
    if backend == "bir":
        from . import birational
        cap = params.get("max_length", 8)
        core = _expand_to(word, CORE)
        if word_length(core) > cap:
            raise ValueError(
                "symbolic composition capped at length %d; expanded word has "
                "length %d (use word_equals for long words)"
                % (cap, word_length(core)))
        atoms = {s: birational.generator_bir(s) for s in ("P", "C", "I")}
        inv = {s: birational.generator_bir_inverse(s) for s in ("P", "C", "I")}
        return _fold(core, atoms, birational.identity_bir(),
                     birational.compose_bir, inv)
    if backend == "picard":
        from . import picard
        return picard.word_operator(_expand_to(word, CORE))
    if backend == "quantum":
        from . import quantum
        return quantum.evaluate_word(_expand_to(word, CORE), params)
    raise ValueError("unknown backend %r" % backend)


# ---------------------------------------------------------------------------
# relation suites

def list_suites() -> list[str]:
    root = resources.files("sympt").joinpath("suites")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_suite(name: str) -> list[dict]:
    root = resources.files("sympt").joinpath("suites")
    path = root.joinpath(name + ".json")
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ValueError("unknown suite %r (have: %s)"
                         % (name, ", ".join(list_suites())))
    for entry in data:
        parse_word(entry["lhs"])
        if entry["rhs"] not in ("1", "probe"):
            parse_word(entry["rhs"])
    return data


def _pl_like_check(lhs, rhs, backend):
    """Exact equality in pl/tree/dyadic; returns (equal, witness)."""
    lv = evaluate(lhs, backend)
    rv = evaluate(rhs, backend)
    if lv == rv:
        return True, None
    if backend == "pl":
        for n in range(1, 12):
            for a in range(-n, n + 1):
                for b in (-n, n):
                    for v in ((a, b), (b, a)):
                        if lv(v) != rv(v):
                            return False, {"point": list(v),
                                           "lhs_image": list(lv(v)),
                                           "rhs_image": list(rv(v))}
    return False, {"lhs_value": repr(lv), "rhs_value": repr(rv)}


def check_suite(suite, backend: str = "pl", params: dict | None = None) -> dict:
    """Run every relation of a suite in a backend.

    Entries with rhs "1" or a word get verdict "pass"/"fail"; entries with
    rhs "probe" get "identity"/"nonidentity" and never fail the suite.  The
    report carries the backend, parameters and witnesses needed to replay
    any failure.
    """
    params = dict(params or {})
    params.setdefault("seed", 0)
    if isinstance(suite, str):
        name, entries = suite, load_suite(suite)
    else:
        name, entries = "<inline>", suite
    results = []
    for entry in entries:
        lhs, rhs = entry["lhs"], entry["rhs"]
        probe = rhs == "probe"
        target = "1" if probe else rhs
        res = {"name": entry.get("name", lhs), "lhs": lhs, "rhs": rhs}
        if backend in ("pl", "tree", "dyadic"):
            equal, witness = _pl_like_check(lhs, target, backend)
            res["verdict"] = ((("identity" if equal else "nonidentity"))
                              if probe else ("pass" if equal else "fail"))
            if witness:
                res["witness"] = witness
        elif backend == "bir":
            from . import birational
            word = _expand_to(parse_word(lhs), CORE) + word_inverse(
                _expand_to(parse_word(target), CORE))
            verdict = birational.word_equals_identity(
                word,
                primes=params.get("primes"),
                trials=params.get("trials", 20),
                seed=params["seed"],
            )
            res["witness"] = verdict["evidence"]
            if probe:
                res["verdict"] = ("identity" if verdict["equal"]
                                  else "nonidentity")
                res["note"] = "experimental verdict, not asserted"
            else:
                res["verdict"] = "pass" if verdict["equal"] else "fail"
        elif backend == "picard":
            from . import picard
            word = _expand_to(parse_word(lhs), CORE) + word_inverse(
                _expand_to(parse_word(target), CORE))
            verdict = picard.word_acts_as_identity(
                word, nvectors=params.get("nvectors", 20), seed=params["seed"])
            res["witness"] = verdict["evidence"]
            if probe:
                res["verdict"] = ("identity" if verdict["identity"]
                                  else "nonidentity")
                res["note"] = "experimental verdict, not asserted"
            else:
                res["verdict"] = "pass" if verdict["identity"] else "fail"
        elif backend == "quantum":
            from . import quantum
            word = _expand_to(parse_word(lhs), CORE) + word_inverse(
                _expand_to(parse_word(target), CORE))
            verdict = quantum.word_acts_as_identity(
                word,
                N=params.get("N", 5),
                p=params.get("p"),
                trials=params.get("trials", 10),
                seed=params["seed"],
            )
            res["witness"] = verdict["evidence"]
            if probe:
                res["verdict"] = ("identity" if verdict["identity"]
                                  else "nonidentity")
                res["note"] = "experimental verdict, not asserted"
            else:
                res["verdict"] = "pass" if verdict["identity"] else "fail"
        else:
            raise ValueError("unknown backend %r" % backend)
        results.append(res)
    return {
        "suite": name,
        "backend": backend,
        "params": params,
        "results": results,
        "ok": all(r["verdict"] != "fail" for r in results),
    }
