"""Validate JSON reports against the report schema.

Usage: validate_json.py SCHEMA REPORT...

Besides the schema, checks what JSON Schema cannot express: key order,
summary counts that match the findings, and UTF-8 encoding.
"""

import json
import sys

import jsonschema

TOP_KEYS = ["version", "target", "notebooks_analyzed", "findings", "summary"]
FINDING_KEYS = ["rule", "severity", "path", "cell", "detail", "recommendation"]
SUMMARY_KEYS = ["error", "warning", "info"]


def check(schema, path):
    with open(path, "rb") as f:
        raw = f.read()
    doc = json.loads(raw.decode("utf-8"))
    jsonschema.validate(doc, schema)
    if list(doc) != TOP_KEYS:
        raise ValueError(f"top-level keys out of order: {list(doc)}")
    for finding in doc["findings"]:
        if list(finding) != FINDING_KEYS:
            raise ValueError(f"finding keys out of order: {list(finding)}")
    if list(doc["summary"]) != SUMMARY_KEYS:
        raise ValueError(f"summary keys out of order: {list(doc['summary'])}")
    for severity in SUMMARY_KEYS:
        count = sum(1 for f in doc["findings"] if f["severity"] == severity)
        if doc["summary"][severity] != count:
            raise ValueError(f"summary.{severity} is {doc['summary'][severity]}, expected {count}")


def main():
    with open(sys.argv[1], encoding="utf-8") as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    failures = 0
    for path in sys.argv[2:]:
        try:
            check(schema, path)
        except (ValueError, jsonschema.ValidationError) as e:
            failures += 1
            print(f"INVALID {path}: {e}")
    print(f"{len(sys.argv) - 2 - failures} of {len(sys.argv) - 2} reports valid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
