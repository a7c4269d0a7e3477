import ast
from pathlib import Path

PACKAGE = Path(__file__).parents[1] / "src" / "hurstnoise"
INIT = PACKAGE / "__init__.py"
CONSTS = PACKAGE / "constants.py"


def parse_module(path: Path) -> ast.Module:
    """Parse a Python source file and return its AST."""
    try:
        return ast.parse(path.read_text())
    except FileNotFoundError as e:
        raise FileNotFoundError(f"Module not found: {path}") from e
    except SyntaxError as e:
        raise SyntaxError(f"Invalid syntax in module: {e}") from e


def extract_all(tree: ast.Module) -> list:
    """Extract the `__all__` list from the AST."""
    for node in tree.body:
        if isinstance(node, ast.Assign):
            for target in node.targets:
                if isinstance(target, ast.Name) and target.id == "__all__":
                    if isinstance(node.value, ast.List):
                        return [elt.value for elt in node.value.elts if isinstance(elt, ast.Constant)]
    return []


def get_assignment_info(node):
    """Helper to extract name and value from Assign or AnnAssign nodes."""
    if isinstance(node, ast.Assign):
        if isinstance(node.targets[0], ast.Name):
            return node.targets[0].id, node.value
    elif isinstance(node, ast.AnnAssign):
        if isinstance(node.target, ast.Name):
            return node.target.id, node.value
    return None, None


def export_sources(init: ast.Module) -> dict[str, Path]:
    """Map each re-exported name to the module file defining it."""
    sources = {}
    for node in init.body:
        if isinstance(node, ast.ImportFrom) and node.module and node.module.startswith("hurstnoise."):
            path = PACKAGE.joinpath(*node.module.split(".")[1:]).with_suffix(".py")
            for alias in node.names:
                sources[alias.asname or alias.name] = path
    return sources


def first_line(doc: str | None) -> str:
    return doc.strip().splitlines()[0] if doc else "-"


def signature(node: ast.FunctionDef) -> str:
    args = [a.arg for a in node.args.args if a.arg not in ("self", "cls")]
    args += [a.arg for a in node.args.kwonlyargs]
    return f"({', '.join(args)})"


def generate_api() -> str:
    """Generate API documentation from the package sources."""
    init = parse_module(INIT)
    exports = extract_all(init)
    sources = export_sources(init)
    modules = {path: parse_module(path) for path in set(sources.values())}
    lines: list[str] = ["## API Reference\n"]

    # ---------- Imports ----------
    lines += ["### Quick Start", "```python", "from hurstnoise import ("]
    for name in exports:
        lines.append(f"    {name},")
    lines += [")", "```", ""]

    # ---------- Processing ----------
    for name in exports:
        tree = modules.get(sources.get(name))
        if tree is None:
            continue
        for node in tree.body:
            # 1. HANDLE CLASSES
            if isinstance(node, ast.ClassDef) and node.name == name:
                lines.append(f"## Class `{node.name}`")
                doc = ast.get_docstring(node)
                if doc:
                    lines.append(f"*{first_line(doc)}*\n")

                lines.append("| Member | Type | Description |")
                lines.append("|:-------|:-----|:------------|")
                for item in node.body:
                    if isinstance(item, ast.FunctionDef) and not item.name.startswith("_"):
                        is_prop = any(
                            isinstance(d, ast.Name) and d.id == "property" for d in item.decorator_list
                        )
                        member = item.name if is_prop else f"{item.name}{signature(item)}"
                        kind = "Property" if is_prop else "Method"
                        lines.append(f"| `{member}` | {kind} | {first_line(ast.get_docstring(item))} |")
                    elif isinstance(item, ast.AnnAssign | ast.Assign):
                        field, _ = get_assignment_info(item)
                        if field and not field.startswith("_"):
                            lines.append(f"| `{field}` | Attribute | - |")
                lines.append("")

            # 2. HANDLE STANDALONE FUNCTIONS
            elif isinstance(node, ast.FunctionDef) and node.name == name:
                doc = ast.get_docstring(node) or "No description available."
                lines.append(f"### `fn {node.name}{signature(node)}`")
                lines.append(f"{first_line(doc)}\n")

    return "\n".join(lines)


def generate_constants() -> str:
    """Generate a table of the named defaults with their values and descriptions."""
    consts_tree = parse_module(CONSTS)
    const_exports = extract_all(consts_tree)

    data = []
    for idx, node in enumerate(consts_tree.body):
        name, value_node = get_assignment_info(node)
        if name and name in const_exports:
            # the docstring on the following line describes the constant
            desc = ""
            if idx + 1 < len(consts_tree.body):
                next_node = consts_tree.body[idx + 1]
                if isinstance(next_node, ast.Expr) and isinstance(next_node.value, ast.Constant):
                    desc = str(next_node.value.value).strip()
            data.append((name, ast.unparse(value_node), desc))

    lines = ["## Constants\n", "| Name | Value | Description |", "|------|-------|-------------|"]
    for name, val, desc in data:
        lines.append(f"| `{name}` | `{val}` | {desc} |")

    return "\n".join(lines)


if __name__ == "__main__":
    print("--- API ---\n")
    print(generate_api())

    print("\n--- CONSTANTS ---\n")
    print(generate_constants())

    print("\n--- PATHS---\n")
    for p in [PACKAGE, INIT, CONSTS]:
        print(f"{p.name:<15} : {p.as_posix()}")
