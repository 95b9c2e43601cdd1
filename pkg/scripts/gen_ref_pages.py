"""Generate the code reference pages and a page listing the bundled scenarios."""

import json
import pathlib

import mkdocs_gen_files

SKIPPED = frozenset({"__main__", "api", "routines", "compat"})


def gen_reference(source: pathlib.Path) -> None:
    for path in sorted(source.rglob("*.py")):
        module_path = path.relative_to(source).with_suffix("")
        parts = tuple(module_path.parts)
        if module_path.name in SKIPPED or "scenarios" in parts:
            continue

        full_doc_path = pathlib.Path("reference", path.relative_to(source).with_suffix(".md"))
        if module_path.name == "__init__":
            parts = parts[:-1]
            full_doc_path = full_doc_path.with_name("index.md")

        with mkdocs_gen_files.open(full_doc_path, "w") as fd:
            fd.write(f"::: {'.'.join(parts)}")

        mkdocs_gen_files.set_edit_path(full_doc_path, path.relative_to(root))


def gen_scenarios(directory: pathlib.Path) -> None:
    with mkdocs_gen_files.open(pathlib.Path("reference", "scenarios.md"), "w") as fd:
        fd.write("# Bundled Scenarios\n\n| Name | Outputs | Description |\n|---|---|---|\n")
        for path in sorted(directory.glob("*.json")):
            doc = json.loads(path.read_text())
            outputs = ", ".join(doc.get("outputs", ["curves"]))
            fd.write(f"| `{doc['name']}` | {outputs} | {doc.get('description', '')} |\n")


root = pathlib.Path(__file__).parent.parent
src = root / "src"
gen_reference(src)
gen_scenarios(src / "searchlight" / "scenarios")
