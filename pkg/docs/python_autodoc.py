"""Generate the code reference pages and their navigation for `mkdocs-gen-files`."""

from pathlib import Path

import mkdocs_gen_files


def autodoc(package_dir: str, out_folder_name: str):
    """One `::: module` page per public module of the package below `package_dir`."""
    nav = mkdocs_gen_files.Nav()  # type: ignore

    base_path = Path(package_dir)
    # `python/` is the source root, not part of the module path.
    source_root = base_path.parent

    for path in sorted(base_path.rglob("*.py")):
        if "__pycache__" in path.parts:
            continue
        # Private modules and packages stay out of the reference:
        if any(part.startswith("_") and part != "__init__.py" for part in path.parts):
            continue

        module_path = path.relative_to(source_root).with_suffix("")
        doc_path = path.relative_to(source_root).with_suffix(".md")
        full_doc_path = Path(out_folder_name, doc_path)

        parts = tuple(module_path.parts)
        if parts[-1] == "__init__":
            parts = parts[:-1]
            doc_path = doc_path.with_name("index.md")
            full_doc_path = full_doc_path.with_name("index.md")

        nav[parts] = doc_path.as_posix()
        with mkdocs_gen_files.open(full_doc_path, "w") as fd:
            fd.write("::: {}".format(".".join(parts)))
        mkdocs_gen_files.set_edit_path(full_doc_path, path)

    with mkdocs_gen_files.open("{}/SUMMARY.md".format(out_folder_name), "w") as nav_file:
        nav_file.writelines(nav.build_literate_nav())


autodoc("./python/pilepilot", "reference")
