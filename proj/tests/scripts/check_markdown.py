"""Parse Markdown reports with markdown-it-py and dump their structure.

Usage: check_markdown.py OUT.json REPORT.md...

Reports are parsed as CommonMark with the GFM table extension. The output
lists, per file, the blocks in document order with inline content reduced
to plain text, so the caller can compare it with what the report should
say. Emphasis, links, code spans or raw HTML other than <br> inside the
report show up as markers in the text and never match a plain expectation.

Exits 1 when a table row has a different cell count than its header, or a
paragraph starts with a pipe (a table that failed to parse).
"""

import json
import re
import sys

from markdown_it import MarkdownIt

BR = re.compile(r"^<br\s*/?>$", re.IGNORECASE)


def inline_text(token):
    out = []
    for child in token.children or []:
        if child.type == "text":
            out.append(child.content)
        elif child.type in ("softbreak", "hardbreak"):
            out.append("\n")
        elif child.type == "html_inline" and BR.match(child.content):
            out.append("\n")
        elif child.type == "code_inline":
            out.append(f"<code>{child.content}</code>")
        else:
            out.append(f"<{child.type}>{child.content}")
    return "".join(out)


def raw_cell_count(line):
    # Splits a source table row on unescaped pipes, outer pipes dropped.
    cells, current, escaped = [], "", False
    for ch in line.strip():
        if escaped:
            current += ch
            escaped = False
        elif ch == "\\":
            current += ch
            escaped = True
        elif ch == "|":
            cells.append(current)
            current = ""
        else:
            current += ch
    cells.append(current)
    if cells and not cells[0].strip():
        cells = cells[1:]
    if cells and not cells[-1].strip():
        cells = cells[:-1]
    return len(cells)


def parse(text):
    md = MarkdownIt("commonmark").enable("table")
    tokens = md.parse(text)
    lines = text.split("\n")
    blocks, problems = [], []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.type == "heading_open":
            blocks.append({"heading": inline_text(tokens[i + 1]), "level": int(tok.tag[1])})
            i += 3
        elif tok.type == "paragraph_open":
            text_ = inline_text(tokens[i + 1])
            if text_.lstrip().startswith("|"):
                problems.append(f"line {tok.map[0] + 1}: paragraph starts with a pipe")
            blocks.append({"paragraph": text_})
            i += 3
        elif tok.type == "fence":
            blocks.append({"fence": tok.content, "info": tok.info})
            i += 1
        elif tok.type == "table_open":
            rows, row = [], None
            begin, end = tok.map
            width = raw_cell_count(lines[begin])
            for n in range(begin, end):
                if n == begin + 1:
                    continue  # delimiter row
                if raw_cell_count(lines[n]) != width:
                    problems.append(f"line {n + 1}: row has {raw_cell_count(lines[n])} cells, header {width}")
            i += 1
            while tokens[i].type != "table_close":
                t = tokens[i]
                if t.type == "tr_open":
                    row = []
                elif t.type == "tr_close":
                    rows.append(row)
                elif t.type == "inline":
                    row.append(inline_text(t))
                i += 1
            blocks.append({"table": rows})
            i += 1
        elif tok.type == "bullet_list_open":
            items = []
            depth = 0
            while True:
                t = tokens[i]
                if t.type == "bullet_list_open":
                    depth += 1
                elif t.type == "bullet_list_close":
                    depth -= 1
                    if depth == 0:
                        break
                elif t.type == "inline":
                    items.append(inline_text(t))
                i += 1
            blocks.append({"list": items})
            i += 1
        else:
            blocks.append({"other": tok.type})
            i += 1
    return blocks, problems


def main():
    out_path = sys.argv[1]
    result, failures = {}, 0
    for path in sys.argv[2:]:
        with open(path, encoding="utf-8") as f:
            blocks, problems = parse(f.read())
        result[path] = {"blocks": blocks, "problems": problems}
        for p in problems:
            failures += 1
            print(f"MALFORMED {path}: {p}")
    with open(out_path, "w", encoding="utf-8") as f:
        json.dump(result, f, indent=1, ensure_ascii=False)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
