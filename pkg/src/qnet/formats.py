"""Text and JSON formats: name, graph, restriction, operator and universe
literals, plus (de)serialisation of vectors, operators and run configs."""

from __future__ import annotations

import ast
import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, field

from .graphs import Graph, System, UniverseSpec, enumerate_universe, make_graph
from .hilbert import OperatorMatrix, StateVector
from .names import Atom, Dot, Leaf, Name, Or, normalize


class ParseError(ValueError):
    def __init__(self, msg: str, text: str, pos: int, expected=()):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column = line, col
        self.expected = frozenset(expected)
        exp = f"; expected one of {sorted(self.expected)}" if self.expected else ""
        super().__init__(f"{msg} at line {line}, column {col}{exp}")


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, n=1) -> str:
        self.ws()
        return self.text[self.pos:self.pos + n]

    def eat(self, tok: str) -> bool:
        self.ws()
        if self.text.startswith(tok, self.pos):
            self.pos += len(tok)
            return True
        return False

    def expect(self, *toks: str) -> str:
        self.ws()
        for t in toks:
            if self.text.startswith(t, self.pos):
                self.pos += len(t)
                return t
        self.fail("unexpected input", toks)

    def fail(self, msg, expected=()):
        got = self.text[self.pos:self.pos + 1] or "end of input"
        raise ParseError(f"{msg} {got!r}", self.text, self.pos, expected)

    def word(self, allowed: str, what: str, expected) -> str:
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] in allowed):
            self.pos += 1
        if start == self.pos:
            self.fail(f"expected {what}, got", expected)
        return self.text[start:self.pos]

    def done(self):
        self.ws()
        if self.pos != len(self.text):
            self.fail("trailing input", ("end of input",))


_MINUS = ("-", "∸")


def _raw_name(rd: _Reader):
    if rd.eat("("):
        left = _raw_name(rd)
        rd.expect("|", "∨")
        right = _raw_name(rd)
        rd.expect(")")
        term = Or(left, right)
    else:
        neg = any(rd.eat(m) for m in _MINUS)
        rd.ws()
        start = rd.pos
        while rd.pos < len(rd.text) and rd.text[rd.pos].isdigit():
            rd.pos += 1
        if start == rd.pos:
            rd.fail("expected a key id or '(', got", ("(", "-", "<digits>"))
        k = int(rd.text[start:rd.pos])
        if k == 0:
            raise ParseError("key ids start at 1", rd.text, start)
        term = Atom(-k if neg else k)
    while rd.peek() == ".":
        rd.pos += 1
        if rd.peek() not in ("l", "r", "ε"):
            rd.fail("expected a suffix, got", ("l", "r", "ε"))
        if rd.eat("ε"):
            suf = ""
        else:
            start = rd.pos
            while rd.pos < len(rd.text) and rd.text[rd.pos] in "lr":
                rd.pos += 1
            suf = rd.text[start:rd.pos]
        term = Dot(term, suf)
    return term


def parse_raw_name(text: str):
    rd = _Reader(text)
    t = _raw_name(rd)
    rd.done()
    return t


def parse_name(text: str) -> Name:
    return normalize(parse_raw_name(text))


def format_name(u: Name) -> str:
    return str(u)


def _system(rd: _Reader) -> System:
    state = rd.word("_", "a state", ("<state>",))
    rd.expect(".")
    return System(state, normalize(_raw_name(rd)))


def parse_graph(text: str) -> Graph:
    """``{state.name, ...}``; raises on overlapping names."""
    rd = _Reader(text)
    rd.expect("{")
    systems = []
    if not rd.eat("}"):
        systems.append(_system(rd))
        while rd.expect(",", "}") == ",":
            systems.append(_system(rd))
    rd.done()
    return make_graph(systems)


def format_graph(g: Graph) -> str:
    return g.text


# restrictions ------------------------------------------------------------------

def _restriction(rd: _Reader):
    from . import restrict as R
    kinds = ("full", "empty", "zeta", "disk", "pointwise", "namewise", "union", "compose", "ancilla", "not")
    kind = rd.word("_", "a restriction", kinds)
    if kind == "full":
        return R.FULL
    if kind == "empty":
        return R.EMPTY_R
    if kind not in kinds:
        raise ParseError(f"unknown restriction {kind!r}", rd.text, rd.pos - len(kind), kinds)
    rd.expect("(")
    if kind == "zeta":
        rd.expect("v")
        rd.expect("=")
        v = normalize(_raw_name(rd))
        mode = "exact"
        if rd.eat(","):
            rd.expect("mode")
            rd.expect("=")
            mode = rd.expect(*R.MODES[::-1])
        out = R.VertexSelect(v, mode)
    elif kind == "disk":
        base = _restriction(rd)
        rd.expect(",")
        rd.expect("r")
        rd.expect("=")
        r = int(rd.word("", "a radius", ("<int>",)))
        oriented = False
        if rd.eat(","):
            rd.expect("oriented")
            rd.expect("=")
            oriented = rd.expect("true", "false") == "true"
        out = R.Disk(base, r, oriented)
    elif kind == "pointwise":
        key = rd.expect("state", "pred")
        rd.expect("=")
        val = rd.word("_", "a value", ("<ident>",))
        out = R.StateSelect(val) if key == "state" else R.NamedPointwise(val)
    elif kind == "namewise":
        rd.expect("S")
        rd.expect("=")
        rd.expect("{")
        names = [normalize(_raw_name(rd))]
        while rd.expect(",", "}") == ",":
            names.append(normalize(_raw_name(rd)))
        out = R.Namewise(names)
    elif kind == "ancilla":
        rd.expect("b")
        rd.expect("=")
        out = R.AncillaSelect(int(rd.expect("0", "1")))
    elif kind == "not":
        out = R.Not(_restriction(rd))
    else:
        a = _restriction(rd)
        rd.expect(",")
        b = _restriction(rd)
        out = R.Union(a, b) if kind == "union" else R.Compose(a, b)
    rd.expect(")")
    return out


def parse_restriction(text: str):
    rd = _Reader(text)
    r = _restriction(rd)
    rd.done()
    return r


# operators ---------------------------------------------------------------------

_ALLOWED = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Add, ast.Sub,
            ast.Mult, ast.Div, ast.USub, ast.UAdd, ast.Load)


def _number(src: str, text: str, pos: int) -> float:
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError:
        raise ParseError(f"bad number {src!r}", text, pos, ("<number>",)) from None
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED) or (isinstance(node, ast.Name) and node.id != "pi"):
            raise ParseError(f"bad number {src!r}", text, pos, ("<number>", "pi"))
    return float(eval(compile(tree, "<num>", "eval"), {"__builtins__": {}}, {"pi": math.pi}))


OPERATORS = {"I": (), "M": (), "H": (), "tau": (), "C": ("theta",), "Hq": ("phi",), "Swap": ("a", "b")}


def parse_operator(text: str):
    """Products such as ``Hq(phi=pi/3)*M*C(theta=0.628)``, applied right to left."""
    from . import dynamics as D
    from .hilbert import IDENTITY, Product
    rd = _Reader(text)
    ops = []
    while True:
        start = rd.pos
        nm = rd.word("", "an operator", tuple(OPERATORS))
        if nm not in OPERATORS:
            raise ParseError(f"unknown operator {nm!r}", text, start, tuple(OPERATORS))
        args = {}
        if rd.eat("("):
            params = OPERATORS[nm]
            i = 0
            while not rd.eat(")"):
                if i:
                    rd.expect(",")
                rd.ws()
                seg_start = rd.pos
                depth = 0
                while rd.pos < len(text) and not (depth == 0 and text[rd.pos] in ",)"):
                    depth += text[rd.pos] == "("
                    depth -= text[rd.pos] == ")"
                    rd.pos += 1
                seg = text[seg_start:rd.pos]
                key, _, val = seg.partition("=") if "=" in seg else (None, None, seg)
                if key is None:
                    if i >= len(params):
                        raise ParseError(f"too many arguments for {nm}", text, seg_start, (")",))
                    key = params[i]
                key = key.strip()
                if key not in params:
                    raise ParseError(f"{nm} has no parameter {key!r}", text, seg_start, params)
                args[key] = _number(val, text, seg_start)
                i += 1
        missing = [p for p in OPERATORS[nm] if p not in args]
        if missing:
            raise ParseError(f"{nm} needs {missing}", text, rd.pos, missing)
        ops.append({"I": lambda: IDENTITY, "M": D.ParticleStep, "H": D.MergeSplit, "tau": D.Toggle,
                    "C": lambda: D.Coin(args["theta"]), "Hq": lambda: D.MergeSplit(args["phi"]),
                    "Swap": lambda: D.StateSwap(int(args["a"]), int(args["b"]))}[nm]())
        if not rd.eat("*"):
            break
    rd.done()
    return ops[0] if len(ops) == 1 else Product(ops)


# universes ---------------------------------------------------------------------

def parse_universe(text: str):
    """``keys=2,depth=1,sigma=2,maxnodes=2[,family=leaves]`` or
    ``chain=3[,sigma=walk][,ancilla=1]``.  ``sigma`` is a count, ``walk``,
    or states separated by ``/``."""
    from . import dynamics as D
    fields = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        k, eq, v = part.partition("=")
        if not eq:
            raise ParseError(f"expected key=value, got {part!r}", text, text.find(part), ("=",))
        fields[k.strip()] = v.strip()
    known = {"keys", "depth", "sigma", "maxnodes", "family", "chain", "ancilla"}
    bad = set(fields) - known
    if bad:
        raise ParseError(f"unknown universe field {sorted(bad)[0]!r}", text, text.find(sorted(bad)[0]), known)
    sig = fields.get("sigma")
    if sig is None:
        alphabet = D.WALK if "chain" in fields else ("0", "1")
    elif sig == "walk":
        alphabet = D.WALK
    elif sig.isdigit():
        alphabet = tuple(str(i) for i in range(int(sig)))
    else:
        alphabet = tuple(sig.split("/"))
    if "chain" in fields:
        u = D.walk_chain_universe(int(fields["chain"]), alphabet)
        if fields.get("ancilla", "0") == "1":
            u = D.ancilla_universe(u)
        return u
    ks = fields.get("keys", "2")
    keys = tuple(range(1, int(ks) + 1)) if ks.isdigit() else tuple(int(x) for x in ks.split("/"))
    mx = fields.get("maxnodes", "2")
    spec = UniverseSpec(keys=keys, depth=int(fields.get("depth", 1)), alphabet=alphabet,
                        max_systems=None if mx == "none" else int(mx), family=fields.get("family", "leaves"))
    return enumerate_universe(spec)


# JSON ----------------------------------------------------------------------------

def _c(x: complex) -> dict:
    return {"re": float(x.real), "im": float(x.imag)}


def state_to_json(psi: StateVector) -> dict:
    return {"terms": [{**_c(a), "graph": g.text} for g, a in sorted(psi.amps.items())]}


def state_from_json(d: dict) -> StateVector:
    return StateVector((parse_graph(t["graph"]), complex(t["re"], t["im"])) for t in d["terms"])


def operator_to_json(a: OperatorMatrix) -> dict:
    rows = sorted(a.entries.items(), key=lambda kv: (kv[0][0], kv[0][1]))
    return {"entries": [{"ket": k.text, "bra": b.text, **_c(x)} for (k, b), x in rows]}


def operator_from_json(d: dict, label="A") -> OperatorMatrix:
    return OperatorMatrix((((parse_graph(e["ket"]), parse_graph(e["bra"])), complex(e["re"], e["im"]))
                           for e in d["entries"]), label=label)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str, text: str):
    """Write through a temporary file in the same directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".qnet-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class RunConfig:
    universe: str = "keys=2,depth=1,sigma=2,maxnodes=2"
    restrictions: list = field(default_factory=list)
    operator: str | None = None
    laws: list = field(default_factory=lambda: ["all"])
    seed: int = 0
    tolerance: float = 1e-10
    np_only: bool = False
    out: str | None = None

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config fields {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        with open(path) as f:
            return cls.from_json(json.load(f))
