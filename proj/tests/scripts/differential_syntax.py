"""Compare the syntax recognizer with CPython's parser.

Feeds standard library modules, plus mutated copies of them, to the
nblint_syntax_check binary and to ast.parse, and fails on any disagreement
about whether a file parses.
"""

import ast
import pathlib
import random
import subprocess
import sys
import sysconfig
import tempfile
import warnings

MUTANTS_PER_FILE = 3
PUNCTUATION = list("()[]{}:,.=+-*/@;\\'\"") + ["def", "if", "else", "lambda", "yield"]


def stdlib_sources():
    root = pathlib.Path(sysconfig.get_paths()["stdlib"])
    skip = {"test", "lib2to3", "site-packages", "dist-packages", "idlelib"}
    for path in sorted(root.rglob("*.py")):
        if skip.intersection(path.relative_to(root).parts):
            continue
        try:
            yield path, path.read_text(encoding="utf-8")
        except (UnicodeDecodeError, OSError):
            continue


def python_accepts(source):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            ast.parse(source)
        except (SyntaxError, ValueError):
            return False
    return True


def mutate(source, rng):
    lines = source.split("\n")
    choice = rng.randrange(4)
    if choice == 0 and source:
        pos = rng.randrange(len(source))
        return source[:pos] + source[pos + 1 :]
    if choice == 1:
        pos = rng.randrange(len(source) + 1)
        return source[:pos] + rng.choice(PUNCTUATION) + source[pos:]
    if choice == 2 and len(lines) > 1:
        i = rng.randrange(len(lines))
        lines[i] = " " * rng.randrange(1, 5) + lines[i]
        return "\n".join(lines)
    if len(lines) > 1:
        i = rng.randrange(len(lines) - 1)
        lines[i], lines[i + 1] = lines[i + 1], lines[i]
        return "\n".join(lines)
    return source + "("


def main():
    checker = sys.argv[1]
    rng = random.Random(20240611)
    cases = []
    for path, source in stdlib_sources():
        if not python_accepts(source):
            continue
        cases.append((str(path), source))
        # Mutating the first 40 lines keeps each mutant small and the run fast.
        head = "\n".join(source.split("\n")[:40])
        for n in range(MUTANTS_PER_FILE):
            cases.append((f"{path} mutant {n}", mutate(head, rng)))

    with tempfile.TemporaryDirectory() as tmp:
        files = []
        for i, (_, source) in enumerate(cases):
            f = pathlib.Path(tmp) / f"case{i}.py"
            f.write_text(source, encoding="utf-8")
            files.append(str(f))
        verdicts = []
        for start in range(0, len(files), 500):
            out = subprocess.run(
                [checker, *files[start : start + 500]],
                check=True,
                capture_output=True,
                text=True,
            ).stdout.splitlines()
            verdicts.extend(out)

    mismatches = []
    valid = invalid = 0
    for (name, source), verdict in zip(cases, verdicts):
        expected = python_accepts(source)
        valid += expected
        invalid += not expected
        if (verdict == "ok") != expected:
            mismatches.append((name, expected, verdict))

    print(f"{len(cases)} sources: {valid} accepted and {invalid} rejected by CPython")
    for name, expected, verdict in mismatches[:40]:
        print(f"MISMATCH {name}: python={'ok' if expected else 'error'} nblint={verdict}")
    if mismatches:
        print(f"{len(mismatches)} mismatches")
        return 1
    print("no mismatches")
    return 0


if __name__ == "__main__":
    sys.exit(main())
