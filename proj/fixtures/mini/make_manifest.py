#!/usr/bin/env python3
"""Regenerates manifest.json for the mini fixture.

Independent of the C++ library: it carries its own tiny definition reader
and computes every expected answer by direct scans over the records.
"""
import json
import pathlib
import re

HERE = pathlib.Path(__file__).resolve().parent
ROLE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def read_def(text):
    pos = 0

    def ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        ws()
        assert text[pos] == ch, (text, pos, ch)
        pos += 1

    def node():
        nonlocal pos
        expect("{")
        ws()
        if text[pos] in "$~?":
            head = ("placeholder", text[pos])
            pos += 1
        elif text[pos] == '"':
            end = text.index('"', pos + 1)
            head = ("literal", text[pos + 1:end])
            pos = end + 1
        else:
            m = re.compile(r"([^\s|{}:,=\"]+)\s*\|\s*([^\s|{}:,=\"]+)").match(text, pos)
            head = ("sememe", m.group(1) + "|" + m.group(2))
            pos = m.end()
        children = []
        ws()
        if text[pos] == ":":
            pos += 1
            while True:
                ws()
                m = ROLE.match(text, pos)
                role = m.group(0)
                pos = m.end()
                expect("=")
                children.append((role, node()))
                ws()
                if text[pos] == ",":
                    pos += 1
                    continue
                break
        expect("}")
        return (head, children)

    tree = node()
    ws()
    assert pos == len(text)
    return tree


def canonical(tree):
    (kind, value), children = tree
    head = {"sememe": value, "placeholder": value, "literal": '"' + value + '"'}[kind]
    if not children:
        return "{" + head + "}"
    return "{" + head + ":" + ",".join(r + "=" + canonical(c) for r, c in children) + "}"


def size(tree):
    return 1 + sum(size(c) for _, c in tree[1])


def sememes_in(tree, out):
    (kind, value), children = tree
    if kind == "sememe":
        out.add(value)
    for _, c in children:
        sememes_in(c, out)
    return out


def max_role_multiplicity(tree):
    counts = {}
    best = 0
    for role, c in tree[1]:
        counts[role] = counts.get(role, 0) + 1
        best = max(best, max_role_multiplicity(c))
    return max([best] + list(counts.values()))


def main():
    taxonomy = [json.loads(l) for l in (HERE / "taxonomy.jsonl").read_text().splitlines() if l.strip()]
    senses = [json.loads(l) for l in (HERE / "senses.jsonl").read_text().splitlines() if l.strip()]
    by_id = {s["id"]: s for s in taxonomy}
    ref_to_id = {s["en"] + "|" + s["zh"]: s["id"] for s in taxonomy}

    roots = {}
    for s in taxonomy:
        if s["parent"] is None:
            roots[s["category"]] = roots.get(s["category"], 0) + 1

    def chain(i):
        out = []
        p = by_id[i]["parent"]
        while p is not None:
            out.append(p)
            p = by_id[p]["parent"]
        return out

    trees = {s["id"]: read_def(s["def"]) for s in senses}
    usage = {}
    for sid, t in trees.items():
        for ref in sememes_in(t, set()):
            usage.setdefault(ref_to_id[ref], []).append(sid)

    apple = sorted(s["id"] for s in senses if s["en"] == "apple")
    manifest = {
        "stats": {
            "sense_count": len(senses),
            "distinct_zh_words": len({s["zh"] for s in senses}),
            "distinct_en_words": len({s["en"] for s in senses}),
            "sememe_count": len(taxonomy),
        },
        "category_roots": dict(sorted(roots.items())),
        "ancestors": {str(i): chain(i) for i in (4, 9, 38, 0)},
        "depths": {str(s["id"]): len(chain(s["id"])) for s in taxonomy},
        "sense_ids": sorted(trees),
        "canonical_defs": {str(i): canonical(t) for i, t in sorted(trees.items())},
        "node_counts": {str(i): size(t) for i, t in sorted(trees.items())},
        "max_role_multiplicity": max(max_role_multiplicity(t) for t in trees.values()),
        "queries": {
            "search_en_exact_apple": apple,
            "search_en_prefix_app": sorted(s["id"] for s in senses if s["en"].startswith("app")),
            "search_zh_exact_苹果": sorted(s["id"] for s in senses if s["zh"] == "苹果"),
            "sememe_single_use": {str(k): v for k, v in sorted(usage.items()) if len(v) == 1},
            "sememe_unused": sorted(i for i in by_id if i not in usage),
        },
    }
    (HERE / "manifest.json").write_text(json.dumps(manifest, ensure_ascii=False, indent=2) + "\n")


if __name__ == "__main__":
    main()
