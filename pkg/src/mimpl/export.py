"""Render ND proofs as bussproofs LaTeX or Graphviz DOT."""
from __future__ import annotations

from .formula import Formula, to_text
from .nd import Assume, Elim, Intro, Mode, NDProof, Peirce, _children, _postorder, conclusions, structural_keys

__all__ = ["to_latex", "to_dot", "latex_formula"]


def latex_formula(f: Formula) -> str:
    text = to_text(f)
    return text.replace("->", r" \to ")


def to_latex(p: NDProof) -> str:
    """A ``prooftree`` environment; discharged leaves are bracketed with their label."""
    concl = conclusions(p, Mode.CLASSICAL)
    lines = []

    def emit(node):
        if isinstance(node, Assume):
            f = latex_formula(node.formula)
            if node.label is None:
                lines.append(rf"\AxiomC{{${f}$}}")
            else:
                lines.append(rf"\AxiomC{{$[{f}]^{{{node.label}}}$}}")
            return
        for k in _children(node):
            emit(k)
        c = latex_formula(concl[id(node)])
        if isinstance(node, Elim):
            lines.append(r"\RightLabel{\scriptsize $\to$E}")
            lines.append(rf"\BinaryInfC{{${c}$}}")
        elif isinstance(node, Intro):
            lines.append(rf"\RightLabel{{\scriptsize $\to$I\,{node.label}}}")
            lines.append(rf"\UnaryInfC{{${c}$}}")
        elif isinstance(node, Peirce):
            lines.append(rf"\RightLabel{{\scriptsize Peirce\,{node.label}}}")
            lines.append(rf"\UnaryInfC{{${c}$}}")

    emit(p)
    return "\\begin{prooftree}\n" + "\n".join(lines) + "\n\\end{prooftree}\n"


def _rule_name(node) -> str:
    if isinstance(node, Assume):
        return "hyp" if node.label is None else f"[{node.label}]"
    if isinstance(node, Elim):
        return "->E"
    if isinstance(node, Intro):
        return f"->I {node.label}"
    return f"Peirce {node.label}"


def _quote(s: str) -> str:
    # labels carry DOT's own \n escapes; formulas never contain quotes
    return '"' + s + '"'


def to_dot(p: NDProof, shared: bool = False) -> str:
    """Edges point from a conclusion to its premises.

    With ``shared`` each structurally distinct subproof is drawn once.
    """
    concl = conclusions(p, Mode.CLASSICAL)
    out = ["digraph proof {", "  node [shape=box, fontname=monospace];"]
    if shared:
        keys = structural_keys(p)
        drawn = set()
        for node in _postorder(p):
            k = keys[id(node)]
            if k in drawn:
                continue
            drawn.add(k)
            label = f"{to_text(concl[id(node)])}\\n{_rule_name(node)}"
            out.append(f"  n{k} [label={_quote(label)}];")
            for child in _children(node):
                out.append(f"  n{k} -> n{keys[id(child)]};")
    else:
        counter = 0
        stack = [(p, None)]
        while stack:
            node, parent = stack.pop()
            me = counter
            counter += 1
            label = f"{to_text(concl[id(node)])}\\n{_rule_name(node)}"
            out.append(f"  n{me} [label={_quote(label)}];")
            if parent is not None:
                out.append(f"  n{parent} -> n{me};")
            for child in reversed(_children(node)):
                stack.append((child, me))
    out.append("}")
    return "\n".join(out) + "\n"
