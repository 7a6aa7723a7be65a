"""Program templates and access to the bundled ``.fal`` corpus."""
from __future__ import annotations

from importlib import resources

from .asm import parse_program
from .vm import Program

_SORT_BODY = """\
    STORE b
    LOAD b
    ARRAYLENGTH
    STORE n
    LOAD n
    NEWARR_FIXED free 0 {idx_hi}
    STORE idx
    LOAD n
    NEWARR_FIXED
    STORE a
    LOAD n
    NEWARR_FIXED
    STORE used
    CONST 0
    STORE k
LABEL fill
    LOAD k
    LOAD n
    IFCMP ge check
    LOAD idx
    LOAD k
    ALOAD
    STORE t
    LOAD t
    CONST 0
    IFCMP lt cut
    LOAD t
    LOAD n
    IFCMP ge cut
    LOAD used          ; an index used twice is not a permutation
    LOAD t
    ALOAD
    CONST 0
    IFCMP ne cut
    LOAD used
    LOAD t
    CONST 1
    ASTORE
    LOAD a             ; a[k] = b[idx[k]]
    LOAD k
    LOAD b
    LOAD t
    ALOAD
    ASTORE
    LOAD k
    CONST 1
    ADD
    STORE k
    GOTO fill
LABEL check
    CONST 0
    STORE k
LABEL sorted
    LOAD k
    CONST 1
    ADD
    LOAD n
    IFCMP ge done
    LOAD a
    LOAD k
    ALOAD
    LOAD a
    LOAD k
    CONST 1
    ADD
    ALOAD
    IFCMP gt cut
    LOAD k
    CONST 1
    ADD
    STORE k
    GOTO sorted
LABEL done
    LOAD a
    RETURN
LABEL cut
    FAIL
"""


def simplesort_source(values, idx_hi: int = 7) -> str:
    """Permutation sort of the constant array ``values``.

    A free index array picks a permutation of ``values``; branches that
    reuse an index or produce an unsorted result are cut.
    """
    head = [f"; permutation sort of {{{', '.join(str(v) for v in values)}}}"]
    head += [f"    CONST {v}" for v in values]
    head.append(f"    ARRINIT {len(values)}")
    return "\n".join(head) + "\n" + _SORT_BODY.format(idx_hi=max(idx_hi, len(values) - 1))


def corpus_names() -> list[str]:
    root = resources.files(__package__) / "corpus"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".fal"))


def corpus_source(name: str) -> str:
    return (resources.files(__package__) / "corpus" / f"{name}.fal").read_text()


def load_corpus(name: str) -> Program:
    return parse_program(corpus_source(name), name)
